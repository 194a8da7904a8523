//! Derivation trees, the rule schemas they are checked against, and
//! substitution of closed derivations for open assumptions.
//!
//! Assumption leaves carry explicit labels. A node discharges a set of labels;
//! a leaf `(l, s)` sitting inside a hypothetical premise of that node is bound
//! by it when `l` is in the discharge set and `s` is the statement that premise
//! may discharge. The nearest such ancestor wins.

pub mod enumerate;
pub mod format;
pub mod labels;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::basicsys::{BasicRef, BasicSystem};
use crate::syntax::{is_identifier, Judgement, Prop, Sign, Statement};

pub use labels::{alpha_eq, LabelSupply};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Arc<str>);

impl Label {
    /// Labels read from files must be identifiers; internal names may not be.
    pub fn new(name: &str) -> Option<Label> {
        is_identifier(name).then(|| Label(Arc::from(name)))
    }

    pub(crate) fn raw(name: &str) -> Label {
        Label(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Every rule schema of the calculus, plus basic-system references and
/// assumption leaves.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum RuleId {
    PlusAndI,
    PlusAndE1,
    PlusAndE2,
    MinusAndI1,
    MinusAndI2,
    MinusAndE,
    PlusOrI1,
    PlusOrI2,
    PlusOrE,
    MinusOrI,
    MinusOrE1,
    MinusOrE2,
    PlusNegI,
    PlusNegE,
    MinusNegI,
    MinusNegE,
    PlusImpI,
    PlusImpE,
    MinusImpI,
    MinusImpE1,
    MinusImpE2,
    /// The ⊥-rule: a statement and its conjugate yield ⊥.
    Falsum,
    /// Reductio: ⊥ under `[α]` yields `α*`.
    Raa,
    Basic(usize),
    Assumption(Label),
}

impl RuleId {
    /// The logical and coordination rules, in declaration order.
    pub const SCHEMAS: [RuleId; 23] = [
        RuleId::PlusAndI,
        RuleId::PlusAndE1,
        RuleId::PlusAndE2,
        RuleId::MinusAndI1,
        RuleId::MinusAndI2,
        RuleId::MinusAndE,
        RuleId::PlusOrI1,
        RuleId::PlusOrI2,
        RuleId::PlusOrE,
        RuleId::MinusOrI,
        RuleId::MinusOrE1,
        RuleId::MinusOrE2,
        RuleId::PlusNegI,
        RuleId::PlusNegE,
        RuleId::MinusNegI,
        RuleId::MinusNegE,
        RuleId::PlusImpI,
        RuleId::PlusImpE,
        RuleId::MinusImpI,
        RuleId::MinusImpE1,
        RuleId::MinusImpE2,
        RuleId::Falsum,
        RuleId::Raa,
    ];

    /// Spelling used in derivation files.
    pub fn name(&self) -> String {
        let s = match self {
            RuleId::PlusAndI => "+&I",
            RuleId::PlusAndE1 => "+&E1",
            RuleId::PlusAndE2 => "+&E2",
            RuleId::MinusAndI1 => "-&I1",
            RuleId::MinusAndI2 => "-&I2",
            RuleId::MinusAndE => "-&E",
            RuleId::PlusOrI1 => "+|I1",
            RuleId::PlusOrI2 => "+|I2",
            RuleId::PlusOrE => "+|E",
            RuleId::MinusOrI => "-|I",
            RuleId::MinusOrE1 => "-|E1",
            RuleId::MinusOrE2 => "-|E2",
            RuleId::PlusNegI => "+~I",
            RuleId::PlusNegE => "+~E",
            RuleId::MinusNegI => "-~I",
            RuleId::MinusNegE => "-~E",
            RuleId::PlusImpI => "+->I",
            RuleId::PlusImpE => "+->E",
            RuleId::MinusImpI => "-->I",
            RuleId::MinusImpE1 => "-->E1",
            RuleId::MinusImpE2 => "-->E2",
            RuleId::Falsum => "bot",
            RuleId::Raa => "raa",
            RuleId::Basic(i) => return format!("basic:{i}"),
            RuleId::Assumption(_) => "assume",
        };
        s.to_string()
    }

    pub fn from_name(name: &str) -> Option<RuleId> {
        if let Some(idx) = name.strip_prefix("basic:") {
            if idx.is_empty() || !idx.bytes().all(|c| c.is_ascii_digit()) {
                return None;
            }
            return idx.parse().ok().map(RuleId::Basic);
        }
        RuleId::SCHEMAS.iter().find(|r| r.name() == name).cloned()
    }

    /// Introduction rules (including the signed negation introductions).
    pub fn is_intro(&self) -> bool {
        matches!(
            self,
            RuleId::PlusAndI
                | RuleId::MinusAndI1
                | RuleId::MinusAndI2
                | RuleId::PlusOrI1
                | RuleId::PlusOrI2
                | RuleId::MinusOrI
                | RuleId::PlusNegI
                | RuleId::MinusNegI
                | RuleId::PlusImpI
                | RuleId::MinusImpI
        )
    }

    pub fn is_elim(&self) -> bool {
        matches!(
            self,
            RuleId::PlusAndE1
                | RuleId::PlusAndE2
                | RuleId::MinusAndE
                | RuleId::PlusOrE
                | RuleId::MinusOrE1
                | RuleId::MinusOrE2
                | RuleId::PlusNegE
                | RuleId::MinusNegE
                | RuleId::PlusImpE
                | RuleId::MinusImpE1
                | RuleId::MinusImpE2
        )
    }

    /// Rules whose schema shows a bracketed assumption.
    pub fn can_discharge(&self) -> bool {
        matches!(
            self,
            RuleId::PlusImpI | RuleId::Raa | RuleId::PlusOrE | RuleId::MinusAndE
        )
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(PartialEq, Eq, Hash, Debug)]
struct Node {
    rule: RuleId,
    conclusion: Judgement,
    premises: Vec<Derivation>,
    discharges: Vec<Label>,
}

/// Projects a binary connective onto its two sides.
type Split = fn(&Prop) -> Option<(&Prop, &Prop)>;

/// An immutable derivation tree; cloning is cheap.
#[derive(Clone, Eq)]
pub struct Derivation(Arc<Node>);

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for Derivation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::print_derivation_compact(self))
    }
}

impl Derivation {
    pub fn assume(label: Label, stmt: Statement) -> Derivation {
        Derivation(Arc::new(Node {
            rule: RuleId::Assumption(label),
            conclusion: Judgement::Stmt(stmt),
            premises: Vec::new(),
            discharges: Vec::new(),
        }))
    }

    /// Builds a node without checking it; see [`check_derivation`].
    pub fn node(rule: RuleId, conclusion: Judgement, premises: Vec<Derivation>, discharges: Vec<Label>) -> Derivation {
        Derivation(Arc::new(Node {
            rule,
            conclusion,
            premises,
            discharges,
        }))
    }

    pub fn rule(&self) -> &RuleId {
        &self.0.rule
    }

    pub fn conclusion(&self) -> &Judgement {
        &self.0.conclusion
    }

    /// The concluded statement, `None` for ⊥.
    pub fn statement(&self) -> Option<&Statement> {
        self.0.conclusion.statement()
    }

    pub fn premises(&self) -> &[Derivation] {
        &self.0.premises
    }

    pub fn discharges(&self) -> &[Label] {
        &self.0.discharges
    }

    pub fn is_assumption(&self) -> bool {
        matches!(self.0.rule, RuleId::Assumption(_))
    }

    pub fn assumption_label(&self) -> Option<&Label> {
        match &self.0.rule {
            RuleId::Assumption(l) => Some(l),
            _ => None,
        }
    }

    /// Same rule, conclusion and discharges over new premises.
    pub fn with_premises(&self, premises: Vec<Derivation>) -> Derivation {
        Derivation::node(
            self.0.rule.clone(),
            self.0.conclusion.clone(),
            premises,
            self.0.discharges.clone(),
        )
    }

    pub fn with_discharges(&self, discharges: Vec<Label>) -> Derivation {
        Derivation::node(
            self.0.rule.clone(),
            self.0.conclusion.clone(),
            self.0.premises.clone(),
            discharges,
        )
    }

    /// Subderivation at a child-index path.
    pub fn at(&self, path: &[usize]) -> Option<&Derivation> {
        let mut cur = self;
        for &i in path {
            cur = cur.premises().get(i)?;
        }
        Some(cur)
    }

    /// Replaces the subderivation at `path`.
    pub fn replace_at(&self, path: &[usize], new: Derivation) -> Option<Derivation> {
        match path.split_first() {
            None => Some(new),
            Some((&i, rest)) => {
                let child = self.premises().get(i)?.replace_at(rest, new)?;
                let mut premises = self.premises().to_vec();
                premises[i] = child;
                Some(self.with_premises(premises))
            }
        }
    }

    /// Preorder iterator over (path, subderivation).
    pub fn subterms(&self) -> Vec<(Vec<usize>, Derivation)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self.clone())];
        while let Some((path, d)) = stack.pop() {
            for (i, p) in d.premises().iter().enumerate().rev() {
                let mut child = path.clone();
                child.push(i);
                stack.push((child, p.clone()));
            }
            out.push((path, d));
        }
        out
    }

    /// Rules used anywhere in the tree.
    pub fn rules_used(&self) -> BTreeSet<RuleId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            out.insert(d.rule().clone());
            stack.extend(d.premises());
        }
        out
    }

    /// Every proposition appearing as (part of) a conclusion.
    pub fn max_prop_size(&self) -> usize {
        let own = self.statement().map_or(0, |s| s.prop.size());
        self.premises()
            .iter()
            .map(Derivation::max_prop_size)
            .max()
            .unwrap_or(0)
            .max(own)
    }
}

/// Node count.
pub fn size(d: &Derivation) -> usize {
    1 + d.premises().iter().map(size).sum::<usize>()
}

/// A child-index path into a derivation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Path(pub Vec<usize>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

/// `Γ ⊢ α`; `assumptions` is a multiset in left-to-right leaf order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sequent {
    pub assumptions: Vec<Statement>,
    pub conclusion: Judgement,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.assumptions.iter().map(Statement::to_wrapped).collect();
        if parts.is_empty() {
            write!(f, "|- {}", self.conclusion.to_wrapped())
        } else {
            write!(f, "{} |- {}", parts.join(", "), self.conclusion.to_wrapped())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("at {path}: {rule}: {message}")]
    Schema { path: Path, rule: String, message: String },
    #[error("at {path}: {rule}: discharge label {label} binds no open assumption")]
    DanglingDischarge { path: Path, rule: String, label: Label },
    #[error("at {path}: basic:{index} does not exist (the basic system has {available} entries)")]
    BasicOutOfRange { path: Path, index: usize, available: usize },
}

pub(crate) fn prop_and(p: &Prop) -> Option<(&Prop, &Prop)> {
    match p {
        Prop::And(l, r) => Some((l, r)),
        _ => None,
    }
}

pub(crate) fn prop_or(p: &Prop) -> Option<(&Prop, &Prop)> {
    match p {
        Prop::Or(l, r) => Some((l, r)),
        _ => None,
    }
}

pub(crate) fn prop_imp(p: &Prop) -> Option<(&Prop, &Prop)> {
    match p {
        Prop::Imp(l, r) => Some((l, r)),
        _ => None,
    }
}

pub(crate) fn prop_not(p: &Prop) -> Option<&Prop> {
    match p {
        Prop::Not(x) => Some(x),
        _ => None,
    }
}

fn stmt_of(j: &Judgement) -> Result<&Statement, String> {
    j.statement()
        .ok_or_else(|| "expected a statement, found _|_".to_string())
}

fn signed(j: &Judgement, sign: Sign) -> Result<&Prop, String> {
    let s = stmt_of(j)?;
    if s.sign != sign {
        return Err(format!(
            "expected a {} statement, found {}",
            if sign == Sign::Plus { "+" } else { "-" },
            s.to_wrapped()
        ));
    }
    Ok(&s.prop)
}

fn expect_eq(found: &Judgement, want: &Statement, what: &str) -> Result<(), String> {
    match found {
        Judgement::Stmt(s) if s == want => Ok(()),
        other => Err(format!(
            "{what} must be {}, found {}",
            want.to_wrapped(),
            other.to_wrapped()
        )),
    }
}

fn shape<'a, T>(p: &'a Prop, f: impl Fn(&'a Prop) -> Option<T>, what: &str) -> Result<T, String> {
    f(p).ok_or_else(|| format!("expected {what}, found {p}"))
}

/// Checks one node against its schema and returns, per premise, the statement
/// that premise may discharge.
pub(crate) fn schema_check(
    rule: &RuleId,
    conclusion: &Judgement,
    premises: &[&Judgement],
    b: &BasicSystem,
) -> Result<Vec<Option<Statement>>, String> {
    use RuleId::*;
    let arity = match rule {
        Assumption(_) => 0,
        PlusAndI | MinusOrI | PlusImpE | MinusImpI | Falsum => 2,
        MinusAndE | PlusOrE => 3,
        Basic(i) => match b.get(*i) {
            Some(BasicRef::Rule(r)) => r.premises.len(),
            _ => 0,
        },
        _ => 1,
    };
    if premises.len() != arity {
        return Err(format!("expected {arity} premise(s), found {}", premises.len()));
    }
    let none = || vec![None; arity];
    match rule {
        Assumption(_) => {
            stmt_of(conclusion)?;
            Ok(Vec::new())
        }
        PlusAndI => {
            let (a, bb) = shape(signed(conclusion, Sign::Plus)?, prop_and, "a conjunction")?;
            expect_eq(premises[0], &Statement::plus(a.clone()), "left premise")?;
            expect_eq(premises[1], &Statement::plus(bb.clone()), "right premise")?;
            Ok(none())
        }
        PlusAndE1 | PlusAndE2 => {
            let major = signed(premises[0], Sign::Plus)?;
            let (a, bb) = shape(major, prop_and, "a conjunction")?;
            let want = if *rule == PlusAndE1 { a } else { bb };
            expect_eq(conclusion, &Statement::plus(want.clone()), "conclusion")?;
            Ok(none())
        }
        MinusAndI1 | MinusAndI2 => {
            let (a, bb) = shape(signed(conclusion, Sign::Minus)?, prop_and, "a conjunction")?;
            let want = if *rule == MinusAndI1 { a } else { bb };
            expect_eq(premises[0], &Statement::minus(want.clone()), "premise")?;
            Ok(none())
        }
        MinusAndE | PlusOrE => {
            let alpha = stmt_of(conclusion)?;
            let (sign, what, f): (Sign, &str, Split) = if *rule == MinusAndE {
                (Sign::Minus, "a conjunction", prop_and)
            } else {
                (Sign::Plus, "a disjunction", prop_or)
            };
            let (a, bb) = shape(signed(premises[0], sign)?, f, what)?;
            expect_eq(premises[1], alpha, "first minor premise")?;
            expect_eq(premises[2], alpha, "second minor premise")?;
            Ok(vec![
                None,
                Some(Statement::new(sign, a.clone())),
                Some(Statement::new(sign, bb.clone())),
            ])
        }
        PlusOrI1 | PlusOrI2 => {
            let (a, bb) = shape(signed(conclusion, Sign::Plus)?, prop_or, "a disjunction")?;
            let want = if *rule == PlusOrI1 { a } else { bb };
            expect_eq(premises[0], &Statement::plus(want.clone()), "premise")?;
            Ok(none())
        }
        MinusOrI => {
            let (a, bb) = shape(signed(conclusion, Sign::Minus)?, prop_or, "a disjunction")?;
            expect_eq(premises[0], &Statement::minus(a.clone()), "left premise")?;
            expect_eq(premises[1], &Statement::minus(bb.clone()), "right premise")?;
            Ok(none())
        }
        MinusOrE1 | MinusOrE2 => {
            let (a, bb) = shape(signed(premises[0], Sign::Minus)?, prop_or, "a disjunction")?;
            let want = if *rule == MinusOrE1 { a } else { bb };
            expect_eq(conclusion, &Statement::minus(want.clone()), "conclusion")?;
            Ok(none())
        }
        PlusNegI => {
            let a = shape(signed(conclusion, Sign::Plus)?, prop_not, "a negation")?;
            expect_eq(premises[0], &Statement::minus(a.clone()), "premise")?;
            Ok(none())
        }
        PlusNegE => {
            let a = shape(signed(premises[0], Sign::Plus)?, prop_not, "a negation")?;
            expect_eq(conclusion, &Statement::minus(a.clone()), "conclusion")?;
            Ok(none())
        }
        MinusNegI => {
            let a = shape(signed(conclusion, Sign::Minus)?, prop_not, "a negation")?;
            expect_eq(premises[0], &Statement::plus(a.clone()), "premise")?;
            Ok(none())
        }
        MinusNegE => {
            let a = shape(signed(premises[0], Sign::Minus)?, prop_not, "a negation")?;
            expect_eq(conclusion, &Statement::plus(a.clone()), "conclusion")?;
            Ok(none())
        }
        PlusImpI => {
            let (a, bb) = shape(signed(conclusion, Sign::Plus)?, prop_imp, "an implication")?;
            expect_eq(premises[0], &Statement::plus(bb.clone()), "premise")?;
            Ok(vec![Some(Statement::plus(a.clone()))])
        }
        PlusImpE => {
            let (a, bb) = shape(signed(premises[0], Sign::Plus)?, prop_imp, "an implication")?;
            expect_eq(premises[1], &Statement::plus(a.clone()), "minor premise")?;
            expect_eq(conclusion, &Statement::plus(bb.clone()), "conclusion")?;
            Ok(none())
        }
        MinusImpI => {
            let (a, bb) = shape(signed(conclusion, Sign::Minus)?, prop_imp, "an implication")?;
            expect_eq(premises[0], &Statement::plus(a.clone()), "left premise")?;
            expect_eq(premises[1], &Statement::minus(bb.clone()), "right premise")?;
            Ok(none())
        }
        MinusImpE1 | MinusImpE2 => {
            let (a, bb) = shape(signed(premises[0], Sign::Minus)?, prop_imp, "an implication")?;
            let want = if *rule == MinusImpE1 {
                Statement::plus(a.clone())
            } else {
                Statement::minus(bb.clone())
            };
            expect_eq(conclusion, &want, "conclusion")?;
            Ok(none())
        }
        Falsum => {
            if !conclusion.is_falsum() {
                return Err(format!("conclusion must be _|_, found {}", conclusion.to_wrapped()));
            }
            let left = stmt_of(premises[0])?;
            expect_eq(premises[1], &left.conjugate(), "right premise")?;
            Ok(none())
        }
        Raa => {
            let alpha_star = stmt_of(conclusion)?;
            if !premises[0].is_falsum() {
                return Err(format!("premise must be _|_, found {}", premises[0].to_wrapped()));
            }
            Ok(vec![Some(alpha_star.conjugate())])
        }
        Basic(i) => match b.get(*i) {
            None => Err(format!("basic:{i} out of range")),
            Some(BasicRef::Axiom(a)) => {
                expect_eq(conclusion, &Statement::minus(Prop::Atom(a.clone())), "conclusion")?;
                Ok(Vec::new())
            }
            Some(BasicRef::Rule(r)) => {
                expect_eq(
                    conclusion,
                    &Statement::plus(Prop::Atom(r.conclusion.clone())),
                    "conclusion",
                )?;
                for (k, (p, want)) in premises.iter().zip(&r.premises).enumerate() {
                    expect_eq(p, &Statement::plus(Prop::Atom(want.clone())), &format!("premise {k}"))?;
                }
                Ok(none())
            }
        },
    }
}

/// Per-premise dischargeable statements, derived from the rule and the
/// conclusions alone (no basic system needed; basic rules never discharge).
pub(crate) fn hypothesis_slots(d: &Derivation) -> Vec<Option<Statement>> {
    let n = d.premises().len();
    let mut slots = vec![None; n];
    match d.rule() {
        RuleId::Raa if n == 1 => {
            if let Some(s) = d.statement() {
                slots[0] = Some(s.conjugate());
            }
        }
        RuleId::PlusImpI if n == 1 => {
            if let Some(s) = d.statement() {
                if let Some((a, _)) = prop_imp(&s.prop) {
                    slots[0] = Some(Statement::plus(a.clone()));
                }
            }
        }
        RuleId::PlusOrE | RuleId::MinusAndE if n == 3 => {
            let (sign, f): (Sign, Split) = if *d.rule() == RuleId::PlusOrE {
                (Sign::Plus, prop_or)
            } else {
                (Sign::Minus, prop_and)
            };
            if let Some(major) = d.premises()[0].statement() {
                if major.sign == sign {
                    if let Some((a, bb)) = f(&major.prop) {
                        slots[1] = Some(Statement::new(sign, a.clone()));
                        slots[2] = Some(Statement::new(sign, bb.clone()));
                    }
                }
            }
        }
        _ => {}
    }
    slots
}

fn check_rec(d: &Derivation, b: &BasicSystem, path: &mut Vec<usize>) -> Result<Vec<(Label, Statement)>, CheckError> {
    let schema_err = |path: &Vec<usize>, message: String| CheckError::Schema {
        path: Path(path.clone()),
        rule: d.rule().name(),
        message,
    };
    if let RuleId::Basic(i) = d.rule() {
        if *i >= b.len() {
            return Err(CheckError::BasicOutOfRange {
                path: Path(path.clone()),
                index: *i,
                available: b.len(),
            });
        }
    }
    if let RuleId::Assumption(l) = d.rule() {
        if !d.premises().is_empty() || !d.discharges().is_empty() {
            return Err(schema_err(path, "an assumption has no premises or discharges".into()));
        }
        let s = stmt_of(d.conclusion()).map_err(|m| schema_err(path, m))?;
        return Ok(vec![(l.clone(), s.clone())]);
    }
    let mut open_per_premise = Vec::with_capacity(d.premises().len());
    for (i, p) in d.premises().iter().enumerate() {
        path.push(i);
        open_per_premise.push(check_rec(p, b, path)?);
        path.pop();
    }
    let concls: Vec<&Judgement> = d.premises().iter().map(Derivation::conclusion).collect();
    let slots = schema_check(d.rule(), d.conclusion(), &concls, b).map_err(|m| schema_err(path, m))?;

    let ds = d.discharges();
    if !ds.is_empty() && !d.rule().can_discharge() {
        return Err(schema_err(path, "this rule discharges no assumptions".into()));
    }
    let distinct: BTreeSet<&Label> = ds.iter().collect();
    if distinct.len() != ds.len() {
        return Err(schema_err(path, "a discharge label is listed twice".into()));
    }
    let mut used = vec![false; ds.len()];
    let mut open = Vec::new();
    for (opens, slot) in open_per_premise.into_iter().zip(&slots) {
        for (l, s) in opens {
            let bound = match slot {
                Some(dischargeable) if *dischargeable == s => ds.iter().position(|x| *x == l),
                _ => None,
            };
            match bound {
                Some(k) => used[k] = true,
                None => open.push((l, s)),
            }
        }
    }
    if let Some(k) = used.iter().position(|u| !u) {
        return Err(CheckError::DanglingDischarge {
            path: Path(path.clone()),
            rule: d.rule().name(),
            label: ds[k].clone(),
        });
    }
    Ok(open)
}

/// Checks every node against its schema and returns `Γ ⊢ α`, where `Γ` is
/// exactly the multiset of open assumptions.
pub fn check_derivation(d: &Derivation, b: &BasicSystem) -> Result<Sequent, CheckError> {
    let open = check_rec(d, b, &mut Vec::new())?;
    Ok(Sequent {
        assumptions: open.into_iter().map(|(_, s)| s).collect(),
        conclusion: d.conclusion().clone(),
    })
}

/// Assumption leaves not bound by any ancestor, in left-to-right order.
///
/// Does not validate schemas; for an ill-formed tree the binding structure is
/// read off the conclusions as far as they make sense.
pub fn open_assumptions(d: &Derivation) -> Vec<(Label, Statement)> {
    if let RuleId::Assumption(l) = d.rule() {
        return d.statement().map(|s| vec![(l.clone(), s.clone())]).unwrap_or_default();
    }
    let slots = hypothesis_slots(d);
    let ds = d.discharges();
    let mut out = Vec::new();
    for (p, slot) in d.premises().iter().zip(&slots) {
        for (l, s) in open_assumptions(p) {
            let bound = matches!(slot, Some(x) if *x == s) && ds.contains(&l);
            if !bound {
                out.push((l, s));
            }
        }
    }
    out
}

pub fn is_closed(d: &Derivation) -> bool {
    open_assumptions(d).is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("binding for {label} concludes {found} but the assumption is {expected}")]
    ConclusionMismatch {
        label: Label,
        expected: String,
        found: String,
    },
    #[error("label {0} is discharged inside the derivation and cannot be substituted")]
    TargetsDischarged(Label),
    #[error("binding for {0} is not a closed derivation")]
    OpenBinding(Label),
}

/// Replaces every open assumption whose label is bound in `bindings` by a copy
/// of the bound derivation, with that copy's internal labels freshened.
///
/// Labels that do not occur in `d` at all are ignored.
pub fn substitute(d: &Derivation, bindings: &BTreeMap<Label, Derivation>) -> Result<Derivation, SubstError> {
    if bindings.is_empty() {
        return Ok(d.clone());
    }
    let open = open_assumptions(d);
    let all = labels::all_labels(d);
    for (label, image) in bindings {
        if !is_closed(image) {
            return Err(SubstError::OpenBinding(label.clone()));
        }
        let mut occurs_free = false;
        for (l, s) in &open {
            if l == label {
                occurs_free = true;
                if image.conclusion() != &Judgement::Stmt(s.clone()) {
                    return Err(SubstError::ConclusionMismatch {
                        label: label.clone(),
                        expected: s.to_wrapped(),
                        found: image.conclusion().to_wrapped(),
                    });
                }
            }
        }
        if !occurs_free && all.contains(label) {
            return Err(SubstError::TargetsDischarged(label.clone()));
        }
    }
    let mut supply = LabelSupply::for_derivations(std::iter::once(d).chain(bindings.values()));
    Ok(labels::replace_free(
        d,
        &|l: &Label, _s: &Statement| bindings.contains_key(l),
        &mut |l: &Label, _s: &Statement| labels::freshen_bound(&bindings[l], &mut supply),
    ))
}
