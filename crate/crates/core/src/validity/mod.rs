//! Size-bounded validity certification.
//!
//! A closed derivation of a statement is valid when it reduces to an
//! introduction (or basic rule) over valid parts, or to an RAA whose body
//! becomes a valid ⊥-derivation under every valid derivation of the
//! conjugate. The second clause is circular; for each proposition `A` the
//! valid derivations of `+A` are the least fixed point of
//! `X = F₊(F₋(X))` over a finite universe of closed derivations of bounded
//! size, computed by [`kleene::kleene_lfp`]. Open derivations are valid when
//! every substitution of valid closed derivations for their assumptions is.
//!
//! Every answer is a [`Verdict`] carrying the [`Budget`] it was computed at.

pub mod kleene;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::basicsys::{is_consistent, BasicSystem};
use crate::derivation::enumerate::{Generator, Universe};
use crate::derivation::labels::{canonical_binders, plug};
use crate::derivation::{
    check_derivation, is_closed, open_assumptions, CheckError, Derivation, Label, LabelSupply, RuleId,
};
use crate::rewrite::{is_normal_with, search, RuleSet, Trace};
use crate::syntax::{Atom, Judgement, Prop, Sign, Statement};

pub use kleene::{kleene_lfp, Iteration};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidityError {
    #[error("basic system is inconsistent: {0} is both derivable and refuted")]
    Inconsistent(Atom),
    #[error("ill-formed derivation: {0}")]
    IllFormed(#[from] CheckError),
    #[error("derivation has open assumptions")]
    Open,
}

/// Derivation-size bound and per-search rewrite fuel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Budget {
    pub size_bound: usize,
    pub fuel: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            size_bound: 7,
            fuel: 10_000,
        }
    }
}

impl Budget {
    pub fn new(size_bound: usize, fuel: usize) -> Budget {
        Budget { size_bound, fuel }
    }

    pub fn doubled(self) -> Budget {
        Budget::new(self.size_bound * 2, self.fuel * 2)
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.size_bound, self.fuel)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Certified,
    Refuted,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Certified => "Certified",
            Status::Refuted => "Refuted",
            Status::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Reduction to the canonical form the verdict rests on.
    Reduction(Trace),
    /// A closed normal derivation with no canonical form.
    Counterexample(Derivation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub bound: Budget,
    /// Some obligation quantified over an empty set of valid derivations.
    pub vacuous: bool,
    pub note: Option<String>,
    pub witness: Option<Witness>,
}

impl Verdict {
    /// `VERDICT <status> bound=<s>,<fuel> <file>`
    pub fn report_line(&self, file: &str) -> String {
        format!("VERDICT {} bound={} {}", self.status, self.bound, file)
    }
}

/// The shape a closed derivation was found to reduce to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalForm {
    ByIntro {
        rule: RuleId,
        parts: Vec<Derivation>,
    },
    ByBasic {
        index: usize,
        parts: Vec<Derivation>,
    },
    ByRaa {
        body: Derivation,
        labels: Vec<Label>,
        discharged: Statement,
    },
    /// A ⊥-derivation built from basic, ⊥ and RAA rules only.
    BotNormal(Derivation),
    NotCanonical,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub form: CanonicalForm,
    /// Reduction to the form found, or to the last reduct explored.
    pub trace: Trace,
    /// The search ran out of fuel.
    pub exhausted: bool,
}

fn bc_only(d: &Derivation) -> bool {
    d.rules_used().iter().all(|r| {
        matches!(
            r,
            RuleId::Basic(_) | RuleId::Falsum | RuleId::Raa | RuleId::Assumption(_)
        )
    })
}

fn intro_root(d: &Derivation) -> bool {
    d.rule().is_intro() || matches!(d.rule(), RuleId::Basic(_))
}

fn raa_root(d: &Derivation) -> bool {
    *d.rule() == RuleId::Raa
}

fn canonical_root(d: &Derivation) -> bool {
    match d.conclusion() {
        Judgement::Falsum => bc_only(d),
        Judgement::Stmt(_) => intro_root(d) || raa_root(d),
    }
}

fn form_of(r: &Derivation) -> CanonicalForm {
    match (r.conclusion(), r.rule()) {
        (Judgement::Falsum, _) if bc_only(r) => CanonicalForm::BotNormal(r.clone()),
        (Judgement::Stmt(s), RuleId::Raa) => CanonicalForm::ByRaa {
            body: r.premises()[0].clone(),
            labels: r.discharges().to_vec(),
            discharged: s.conjugate(),
        },
        (Judgement::Stmt(_), RuleId::Basic(i)) => CanonicalForm::ByBasic {
            index: *i,
            parts: r.premises().to_vec(),
        },
        (Judgement::Stmt(_), rule) if rule.is_intro() => CanonicalForm::ByIntro {
            rule: rule.clone(),
            parts: r.premises().to_vec(),
        },
        _ => CanonicalForm::NotCanonical,
    }
}

fn classify_by(d: &Derivation, pred: &dyn Fn(&Derivation) -> bool, fuel: usize, rules: RuleSet) -> Classification {
    let s = search(d, pred, fuel, rules);
    let form = if s.found {
        form_of(s.trace.final_derivation())
    } else {
        CanonicalForm::NotCanonical
    };
    Classification {
        form,
        trace: s.trace,
        exhausted: s.exhausted,
    }
}

/// Searches the reducts of a closed derivation, breadth first, for the first
/// one in canonical form.
pub fn classify_canonical(d: &Derivation, b: &BasicSystem, fuel: usize) -> Result<Classification, ValidityError> {
    classify_canonical_with(d, b, fuel, RuleSet::FULL)
}

pub fn classify_canonical_with(
    d: &Derivation,
    b: &BasicSystem,
    fuel: usize,
    rules: RuleSet,
) -> Result<Classification, ValidityError> {
    check_derivation(d, b)?;
    if !is_closed(d) {
        return Err(ValidityError::Open);
    }
    Ok(classify_by(d, &canonical_root, fuel, rules))
}

/// Closed derivations of one statement found valid at a budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValiditySet {
    pub statement: Statement,
    pub members: Vec<Derivation>,
    pub bound: usize,
    /// Some search used while building the set ran out of fuel.
    pub exhausted: bool,
}

impl ValiditySet {
    pub fn contains(&self, d: &Derivation) -> bool {
        let key = canonical_binders(d);
        self.members.iter().any(|m| canonical_binders(m) == key)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The fixed-point computation for the pair `+A`, `-A`.
#[derive(Clone, Debug)]
pub struct KleeneRun {
    pub plus: Arc<ValiditySet>,
    pub minus: Arc<ValiditySet>,
    /// The universe of closed derivations of `+A` the iteration ranges over.
    pub plus_universe: Arc<Vec<Derivation>>,
    pub minus_universe: Arc<Vec<Derivation>>,
    /// Iterates as index sets into `plus_universe`.
    pub iteration: Iteration<usize>,
}

#[derive(Clone, Debug)]
struct Outcome {
    status: Status,
    vacuous: bool,
    exhausted: bool,
    note: Option<String>,
    trace: Option<Trace>,
}

impl Outcome {
    fn certified(vacuous: bool) -> Outcome {
        Outcome {
            status: Status::Certified,
            vacuous,
            exhausted: false,
            note: None,
            trace: None,
        }
    }

    fn unknown(note: impl Into<String>, exhausted: bool) -> Outcome {
        Outcome {
            status: Status::Unknown,
            vacuous: false,
            exhausted,
            note: Some(note.into()),
            trace: None,
        }
    }

    fn ok(&self) -> bool {
        self.status == Status::Certified
    }
}

/// Per-clause data for one universe member.
struct Member {
    clause1: bool,
    raa: Option<(Derivation, Vec<Label>)>,
    exhausted: bool,
}

/// Validity certification over one consistent basic system at one budget.
///
/// Validity sets, universes and closed-derivation outcomes are memoized, so
/// one certifier should be reused across related queries.
pub struct Certifier {
    b: BasicSystem,
    budget: Budget,
    rules: RuleSet,
    prop_bound: usize,
    tuple_cap: usize,
    universes: HashMap<Statement, Arc<Vec<Derivation>>>,
    runs: HashMap<Prop, Arc<KleeneRun>>,
    active: HashSet<Prop>,
    memo: HashMap<Derivation, Outcome>,
}

impl Certifier {
    pub fn new(b: &BasicSystem, budget: Budget) -> Result<Certifier, ValidityError> {
        if !is_consistent(b) {
            let derivable = b.derivable_atoms();
            let bad = b
                .negative_axioms()
                .iter()
                .find(|a| derivable.contains(*a))
                .expect("inconsistency has a witness");
            return Err(ValidityError::Inconsistent(bad.clone()));
        }
        Ok(Certifier {
            b: b.clone(),
            budget,
            rules: RuleSet::FULL,
            prop_bound: 3,
            tuple_cap: 4096,
            universes: HashMap::new(),
            runs: HashMap::new(),
            active: HashSet::new(),
            memo: HashMap::new(),
        })
    }

    pub fn with_rules(mut self, rules: RuleSet) -> Certifier {
        self.rules = rules;
        self
    }

    /// Universes of derivations of `±A` use propositions of at most
    /// `max(bound, |A|)` nodes.
    pub fn with_prop_bound(mut self, bound: usize) -> Certifier {
        self.prop_bound = bound;
        self
    }

    /// Open derivations with more substitution instances than this are
    /// left Unknown.
    pub fn with_tuple_cap(mut self, cap: usize) -> Certifier {
        self.tuple_cap = cap;
        self
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn basic_system(&self) -> &BasicSystem {
        &self.b
    }

    fn prop_universe(&self, extra: &Prop) -> Universe {
        let mut atoms: BTreeSet<Atom> = self.b.atoms();
        atoms.extend(extra.atoms());
        Universe::new(atoms, self.prop_bound.max(extra.size()))
    }

    /// Closed derivations of `s` with at most `size_bound` nodes.
    pub fn universe(&mut self, s: &Statement) -> Arc<Vec<Derivation>> {
        if let Some(u) = self.universes.get(s) {
            return u.clone();
        }
        let mut gen = Generator::closed(&self.b, self.prop_universe(&s.prop)).with_pruning(true);
        let ds = Arc::new(gen.collect_up_to(&Judgement::Stmt(s.clone()), self.budget.size_bound));
        self.universes.insert(s.clone(), ds.clone());
        ds
    }

    pub fn certify(&mut self, d: &Derivation) -> Result<Verdict, ValidityError> {
        check_derivation(d, &self.b)?;
        let o = if is_closed(d) { self.closed(d) } else { self.open(d) };
        let witness = match o.status {
            Status::Refuted => Some(Witness::Counterexample(d.clone())),
            _ => o.trace.map(Witness::Reduction),
        };
        Ok(Verdict {
            status: o.status,
            bound: self.budget,
            vacuous: o.vacuous,
            note: o.note,
            witness,
        })
    }

    fn bot_valid(&self, d: &Derivation) -> Outcome {
        let s = search(d, &bc_only, self.budget.fuel, self.rules);
        if s.found {
            let mut o = Outcome::certified(false);
            o.trace = Some(s.trace);
            o
        } else if is_normal_with(d, self.rules) {
            Outcome {
                status: Status::Refuted,
                vacuous: false,
                exhausted: false,
                note: Some("normal ⊥-derivation uses logical rules".into()),
                trace: None,
            }
        } else {
            Outcome::unknown("no reduct built from basic and coordination rules", s.exhausted)
        }
    }

    fn closed(&mut self, d: &Derivation) -> Outcome {
        let key = canonical_binders(d);
        if let Some(o) = self.memo.get(&key) {
            return o.clone();
        }
        let o = self.closed_uncached(d);
        self.memo.insert(key, o.clone());
        o
    }

    fn closed_uncached(&mut self, d: &Derivation) -> Outcome {
        let gamma = match d.conclusion() {
            Judgement::Falsum => return self.bot_valid(d),
            Judgement::Stmt(s) => s.clone(),
        };
        if is_normal_with(d, self.rules) && !canonical_root(d) {
            return Outcome {
                status: Status::Refuted,
                vacuous: false,
                exhausted: false,
                note: Some(format!("normal and ends in {}", d.rule())),
                trace: None,
            };
        }
        let c1 = self.clause1(d);
        if c1.ok() {
            return c1;
        }
        let (c2, _) = self.clause2(d, &gamma);
        if c2.ok() {
            return c2;
        }
        let note = [c1.note, c2.note].into_iter().flatten().collect::<Vec<_>>().join("; ");
        Outcome::unknown(note, c1.exhausted || c2.exhausted)
    }

    /// Introduction or basic form over valid parts.
    fn clause1(&mut self, d: &Derivation) -> Outcome {
        let c = classify_by(d, &intro_root, self.budget.fuel, self.rules);
        let r = c.trace.final_derivation().clone();
        if matches!(c.form, CanonicalForm::NotCanonical) {
            return Outcome::unknown("no introduction or basic form", c.exhausted);
        }
        let mut vacuous = false;
        for (i, p) in r.premises().iter().enumerate() {
            let o = if is_closed(p) { self.closed(p) } else { self.open(p) };
            if !o.ok() {
                let mut note = format!("part {i} of {} is {}", r.rule(), o.status);
                if let Some(n) = o.note {
                    note.push_str(&format!(" ({n})"));
                }
                return Outcome::unknown(note, o.exhausted);
            }
            vacuous |= o.vacuous;
        }
        let mut o = Outcome::certified(vacuous);
        o.trace = Some(c.trace);
        o
    }

    /// RAA form whose body is valid under every valid derivation of the
    /// conjugate. Also returns the body and its binders when the form exists.
    fn clause2(&mut self, d: &Derivation, gamma: &Statement) -> (Outcome, Option<(Derivation, Vec<Label>)>) {
        let c = classify_by(d, &raa_root, self.budget.fuel, self.rules);
        let CanonicalForm::ByRaa {
            body,
            labels,
            discharged,
        } = c.form
        else {
            return (Outcome::unknown("no RAA form", c.exhausted), None);
        };
        let conj = self.valid_set(&gamma.conjugate());
        let mut o = self.raa_obligation(&body, &labels, &discharged, &conj.members);
        if o.ok() && conj.exhausted {
            o = Outcome::unknown(format!("valid set of {} is incomplete", discharged.to_wrapped()), true);
        }
        if o.ok() {
            o.trace = Some(c.trace);
        }
        (o, Some((body, labels)))
    }

    fn raa_obligation(&self, body: &Derivation, labels: &[Label], hyp: &Statement, set: &[Derivation]) -> Outcome {
        if set.is_empty() {
            let mut o = Outcome::certified(true);
            o.note = Some(format!("no valid derivation of {} within the bound", hyp.to_wrapped()));
            return o;
        }
        for m in set {
            let inst = self.instantiate(body, labels, hyp, m);
            let o = self.bot_valid(&inst);
            if !o.ok() {
                return Outcome::unknown(
                    format!("RAA body fails under a valid derivation of {}", hyp.to_wrapped()),
                    o.exhausted,
                );
            }
        }
        Outcome::certified(false)
    }

    fn instantiate(&self, body: &Derivation, labels: &[Label], hyp: &Statement, piece: &Derivation) -> Derivation {
        let mut supply = LabelSupply::for_derivations([body, piece]);
        plug(body, labels, hyp, piece, &mut supply)
    }

    /// Open derivations: every substitution of valid closed derivations.
    fn open(&mut self, d: &Derivation) -> Outcome {
        let mut open: Vec<(Label, Statement)> = open_assumptions(d);
        open.sort();
        open.dedup();
        let mut sets = Vec::with_capacity(open.len());
        let mut exhausted = false;
        for (_, s) in &open {
            let set = self.valid_set(s);
            if set.is_empty() {
                let mut o = Outcome::certified(true);
                o.exhausted = set.exhausted;
                o.note = Some(format!("no valid derivation of {} within the bound", s.to_wrapped()));
                return o;
            }
            exhausted |= set.exhausted;
            sets.push(set);
        }
        let total = sets.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.len()));
        if total.is_none_or(|t| t > self.tuple_cap) {
            return Outcome::unknown("too many substitution instances", false);
        }
        let mut idx = vec![0usize; sets.len()];
        // vacuous only when every instance is
        let mut vacuous = true;
        loop {
            let mut inst = d.clone();
            let mut supply =
                LabelSupply::for_derivations(std::iter::once(d).chain(sets.iter().flat_map(|s| s.members.iter())));
            for (k, (l, s)) in open.iter().enumerate() {
                inst = plug(&inst, std::slice::from_ref(l), s, &sets[k].members[idx[k]], &mut supply);
            }
            let o = self.closed(&inst);
            if !o.ok() {
                return Outcome::unknown(format!("substitution instance is {}", o.status), o.exhausted);
            }
            vacuous &= o.vacuous;
            // odometer
            let mut k = 0;
            loop {
                if k == idx.len() {
                    let mut o = Outcome::certified(vacuous);
                    if exhausted {
                        o = Outcome::unknown("a valid set used for substitution is incomplete", true);
                    }
                    return o;
                }
                idx[k] += 1;
                if idx[k] < sets[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Valid closed derivations of `s` within the size bound.
    pub fn valid_set(&mut self, s: &Statement) -> Arc<ValiditySet> {
        if self.universe(s).is_empty() {
            return Arc::new(ValiditySet {
                statement: s.clone(),
                members: Vec::new(),
                bound: self.budget.size_bound,
                exhausted: false,
            });
        }
        let run = self.kleene(&s.prop);
        match s.sign {
            Sign::Plus => run.plus.clone(),
            Sign::Minus => run.minus.clone(),
        }
    }

    fn members(&mut self, u: &[Derivation]) -> Vec<Member> {
        u.iter()
            .map(|d| {
                let c1 = self.clause1(d);
                let c = classify_by(d, &raa_root, self.budget.fuel, self.rules);
                let raa = match c.form {
                    CanonicalForm::ByRaa { body, labels, .. } => Some((body, labels)),
                    _ => None,
                };
                Member {
                    clause1: c1.ok(),
                    raa,
                    exhausted: c1.exhausted || c.exhausted,
                }
            })
            .collect()
    }

    /// Least fixed point for the pair `+A`, `-A`.
    pub fn kleene(&mut self, a: &Prop) -> Arc<KleeneRun> {
        if let Some(r) = self.runs.get(a) {
            return r.clone();
        }
        let plus = Statement::plus(a.clone());
        let minus = Statement::minus(a.clone());
        let up = self.universe(&plus);
        let um = self.universe(&minus);
        if !self.active.insert(a.clone()) {
            // only reachable through a cyclic dependency, which the basic
            // system rules out; answer with an incomplete empty run
            let empty = |s: &Statement| {
                Arc::new(ValiditySet {
                    statement: s.clone(),
                    members: Vec::new(),
                    bound: self.budget.size_bound,
                    exhausted: true,
                })
            };
            return Arc::new(KleeneRun {
                plus: empty(&plus),
                minus: empty(&minus),
                plus_universe: up,
                minus_universe: um,
                iteration: Iteration {
                    iterates: vec![BTreeSet::new()],
                    converged: false,
                },
            });
        }
        let mp = self.members(&up);
        let mm = self.members(&um);
        let mut exhausted = mp.iter().chain(&mm).any(|m| m.exhausted);
        let fuel = self.budget.fuel;
        let rules = self.rules;
        let mut obl: HashMap<(bool, usize, usize), (bool, bool)> = HashMap::new();
        // obligation for member i of one side under member j of the other
        let mut holds = |from_plus: bool, i: usize, j: usize| -> (bool, bool) {
            *obl.entry((from_plus, i, j)).or_insert_with(|| {
                let (own, other, hyp) = if from_plus {
                    (&mp, &um, &minus)
                } else {
                    (&mm, &up, &plus)
                };
                let (body, labels) = own[i].raa.as_ref().expect("RAA member");
                let mut supply = LabelSupply::for_derivations([body, &other[j]]);
                let inst = plug(body, labels, hyp, &other[j], &mut supply);
                let s = search(&inst, &bc_only, fuel, rules);
                (s.found, s.exhausted)
            })
        };
        let mut apply = |from_plus: bool, s: &BTreeSet<usize>, exhausted: &mut bool| -> BTreeSet<usize> {
            let own = if from_plus { &mp } else { &mm };
            (0..own.len())
                .filter(|&i| {
                    own[i].clause1
                        || own[i].raa.is_some()
                            && s.iter().all(|&j| {
                                let (ok, ex) = holds(from_plus, i, j);
                                *exhausted |= ex;
                                ok
                            })
                })
                .collect()
        };
        let iteration = kleene_lfp(
            |x| {
                let y = apply(false, x, &mut exhausted);
                apply(true, &y, &mut exhausted)
            },
            up.len() + 2,
        );
        let x = iteration.fixpoint().clone();
        let y = apply(false, &x, &mut exhausted);
        let bound = self.budget.size_bound;
        let set = |s: &Statement, u: &[Derivation], idx: &BTreeSet<usize>| {
            Arc::new(ValiditySet {
                statement: s.clone(),
                members: idx.iter().map(|&i| u[i].clone()).collect(),
                bound,
                exhausted,
            })
        };
        let run = Arc::new(KleeneRun {
            plus: set(&plus, &up, &x),
            minus: set(&minus, &um, &y),
            plus_universe: up.clone(),
            minus_universe: um.clone(),
            iteration,
        });
        self.active.remove(a);
        self.runs.insert(a.clone(), run.clone());
        run
    }

    /// `F_s(S)`: members of the universe of `s` that are in clause-1 form
    /// over valid parts, or in RAA form with the body valid under every
    /// member of `conj`, a set of derivations of the conjugate.
    pub fn apply_operator(&mut self, s: &Statement, conj: &[Derivation]) -> Vec<Derivation> {
        let u = self.universe(s);
        let ms = self.members(&u);
        let hyp = s.conjugate();
        u.iter()
            .zip(&ms)
            .filter(|(_, m)| {
                m.clause1
                    || m.raa
                        .as_ref()
                        .is_some_and(|(body, labels)| self.raa_obligation(body, labels, &hyp, conj).ok())
            })
            .map(|(d, _)| d.clone())
            .collect()
    }

    /// Applies `rule` to every tuple of certified premises drawn from closed
    /// derivations within the size bound and certifies each result.
    ///
    /// Candidates are the closed derivations of size at most `size_bound`
    /// ending in `rule`; a candidate counts as a tuple when every immediate
    /// subderivation (open only in what `rule` discharges) is Certified.
    pub fn check_rule_preservation(&mut self, rule: &RuleId, extra_atoms: &[Atom]) -> PreservationReport {
        let mut atoms: BTreeSet<Atom> = self.b.atoms();
        atoms.extend(extra_atoms.iter().cloned());
        let universe = Universe::new(atoms, self.prop_bound);
        let goals = universe.goals();
        let mut gen = Generator::closed(&self.b, universe).with_pruning(true);
        let mut candidates = Vec::new();
        for g in &goals {
            for d in gen.collect_up_to(g, self.budget.size_bound) {
                if d.rule() == rule {
                    candidates.push(d);
                }
            }
        }
        let mut report = PreservationReport {
            rule: rule.clone(),
            bound: self.budget,
            candidates: candidates.len(),
            tuples: 0,
            certified: 0,
            unknown: 0,
            vacuous: 0,
            refuted: Vec::new(),
        };
        for d in candidates {
            let premises_ok = d.premises().iter().all(|p| {
                let o = if is_closed(p) { self.closed(p) } else { self.open(p) };
                o.ok()
            });
            if !premises_ok {
                continue;
            }
            report.tuples += 1;
            let o = self.closed(&d);
            match o.status {
                Status::Certified => report.certified += 1,
                Status::Unknown => report.unknown += 1,
                Status::Refuted => report.refuted.push(d),
            }
            report.vacuous += usize::from(o.vacuous);
        }
        report
    }
}

/// Outcome of [`Certifier::check_rule_preservation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub rule: RuleId,
    pub bound: Budget,
    /// Closed derivations in the bound ending in the rule.
    pub candidates: usize,
    /// Candidates whose premises are all Certified.
    pub tuples: usize,
    pub certified: usize,
    pub unknown: usize,
    /// Results certified only vacuously.
    pub vacuous: usize,
    pub refuted: Vec<Derivation>,
}

impl PreservationReport {
    /// One table row: rule, candidates, tuples, certified, unknown, refuted.
    pub fn row(&self) -> String {
        format!(
            "{:<8} {:>10} {:>8} {:>9} {:>8} {:>8}{}",
            self.rule.name(),
            self.candidates,
            self.tuples,
            self.certified,
            self.unknown,
            self.refuted.len(),
            if self.tuples == 0 { "  (vacuous)" } else { "" }
        )
    }

    pub fn header() -> String {
        format!(
            "{:<8} {:>10} {:>8} {:>9} {:>8} {:>8}",
            "rule", "candidates", "tuples", "certified", "unknown", "refuted"
        )
    }
}

pub fn certify(d: &Derivation, b: &BasicSystem, budget: Budget) -> Result<Verdict, ValidityError> {
    Certifier::new(b, budget)?.certify(d)
}

/// The least-fixed-point validity sets of `+atom` and `-atom`.
pub fn kleene_validity_sets(
    b: &BasicSystem,
    atom: &Atom,
    budget: Budget,
) -> Result<(ValiditySet, ValiditySet), ValidityError> {
    let mut c = Certifier::new(b, budget)?;
    let run = c.kleene(&Prop::Atom(atom.clone()));
    Ok(((*run.plus).clone(), (*run.minus).clone()))
}

/// Runs [`Certifier::check_rule_preservation`]; an empty `b` gets the atom `p`.
pub fn check_rule_preservation(
    b: &BasicSystem,
    rule: &RuleId,
    budget: Budget,
) -> Result<PreservationReport, ValidityError> {
    let extra = if b.atoms().is_empty() {
        vec![Atom::new("p").expect("identifier")]
    } else {
        Vec::new()
    };
    Ok(Certifier::new(b, budget)?.check_rule_preservation(rule, &extra))
}

#[cfg(test)]
mod tests;
