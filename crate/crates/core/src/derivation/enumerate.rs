//! Exhaustive, goal-directed enumeration of derivations.
//!
//! Derivations are produced up to renaming of labels. Every leaf for a
//! statement `s` carries the label [`canonical_label`]`(s)`, and a discharging
//! node discharges the canonical label of each hypothetical slot exactly when
//! that premise has a matching open leaf. Counting runs first (memoized per
//! goal, context and size); emission then walks only non-empty branches.
//!
//! In open mode any statement may appear as a leaf. In closed mode a leaf is
//! allowed only when some ancestor can discharge it, so every result is closed.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use super::{open_assumptions, Derivation, Label, RuleId};
use crate::basicsys::{BasicRef, BasicSystem};
use crate::oracle;
use crate::syntax::{Atom, Judgement, Prop, Sign, Statement};

/// The finite set of propositions enumeration may invent: everything over
/// `atoms` with at most `max_prop_size` nodes.
#[derive(Debug, Clone)]
pub struct Universe {
    atoms: Vec<Atom>,
    max_prop_size: usize,
    by_size: Vec<Vec<Prop>>,
}

impl Universe {
    pub fn new(atoms: impl IntoIterator<Item = Atom>, max_prop_size: usize) -> Universe {
        let atoms: Vec<Atom> = atoms.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut by_size: Vec<Vec<Prop>> = vec![Vec::new(); max_prop_size + 1];
        if max_prop_size >= 1 {
            by_size[1] = atoms.iter().cloned().map(Prop::Atom).collect();
        }
        for n in 2..=max_prop_size {
            let mut layer: Vec<Prop> = by_size[n - 1].iter().cloned().map(Prop::not).collect();
            for i in 1..n - 1 {
                let j = n - 1 - i;
                for l in &by_size[i] {
                    for r in &by_size[j] {
                        layer.push(Prop::and(l.clone(), r.clone()));
                        layer.push(Prop::or(l.clone(), r.clone()));
                        layer.push(Prop::imp(l.clone(), r.clone()));
                    }
                }
            }
            by_size[n] = layer;
        }
        Universe {
            atoms,
            max_prop_size,
            by_size,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn max_prop_size(&self) -> usize {
        self.max_prop_size
    }

    /// Propositions in order of size.
    pub fn props(&self) -> impl Iterator<Item = &Prop> {
        self.by_size.iter().flatten()
    }

    fn props_up_to(&self, n: usize) -> impl Iterator<Item = &Prop> {
        self.by_size.iter().take(n.min(self.max_prop_size) + 1).flatten()
    }

    /// `+A` then `-A` for each proposition.
    pub fn statements(&self) -> Vec<Statement> {
        self.props()
            .flat_map(|p| [Statement::plus(p.clone()), Statement::minus(p.clone())])
            .collect()
    }

    /// ⊥ followed by every statement.
    pub fn goals(&self) -> Vec<Judgement> {
        std::iter::once(Judgement::Falsum)
            .chain(self.statements().into_iter().map(Judgement::Stmt))
            .collect()
    }
}

fn encode_prop(p: &Prop, out: &mut String) {
    match p {
        Prop::Atom(a) => {
            out.push('a');
            out.push_str(&a.as_str().len().to_string());
            out.push_str(a.as_str());
        }
        Prop::Not(x) => {
            out.push('n');
            encode_prop(x, out);
        }
        Prop::And(l, r) | Prop::Or(l, r) | Prop::Imp(l, r) => {
            out.push(match p {
                Prop::And(..) => 'c',
                Prop::Or(..) => 'd',
                _ => 'i',
            });
            encode_prop(l, out);
            encode_prop(r, out);
        }
    }
}

/// An identifier determined by, and determining, the statement.
pub fn canonical_label(s: &Statement) -> Label {
    let mut out = String::from(match s.sign {
        Sign::Plus => "hp_",
        Sign::Minus => "hm_",
    });
    encode_prop(&s.prop, &mut out);
    Label::raw(&out)
}

type Ctx = Option<Arc<BTreeSet<Statement>>>;

#[derive(Clone, PartialEq, Eq, Hash)]
struct Key {
    goal: Judgement,
    ctx: Ctx,
    size: usize,
}

/// One way of concluding a goal: a rule plus, per premise, its conclusion and
/// the statement that premise may discharge.
#[derive(Clone, Debug)]
struct Alt {
    rule: RuleId,
    premises: Vec<(Judgement, Option<Statement>)>,
}

fn plus(p: Prop) -> Judgement {
    Judgement::Stmt(Statement::plus(p))
}

fn minus(p: Prop) -> Judgement {
    Judgement::Stmt(Statement::minus(p))
}

/// Counting and emitting generator over one basic system and universe.
pub struct Generator<'b> {
    b: &'b BasicSystem,
    universe: Universe,
    closed: bool,
    pruning: bool,
    memo: HashMap<Key, u64>,
}

impl<'b> Generator<'b> {
    /// Open mode: leaves may be any statement.
    pub fn open(b: &'b BasicSystem, universe: Universe) -> Generator<'b> {
        Generator {
            b,
            universe,
            closed: false,
            pruning: false,
            memo: HashMap::new(),
        }
    }

    /// Closed mode: every leaf is discharged by an ancestor.
    pub fn closed(b: &'b BasicSystem, universe: Universe) -> Generator<'b> {
        Generator {
            closed: true,
            ..Generator::open(b, universe)
        }
    }

    /// Closed mode only: skip any (goal, hypotheses) pair the hypotheses do
    /// not classically entail under `b`. Such pairs have no derivation at any
    /// size, so counts are unchanged; only the search shrinks.
    pub fn with_pruning(mut self, on: bool) -> Generator<'b> {
        self.pruning = on;
        self
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    fn root_ctx(&self) -> Ctx {
        self.closed.then(|| Arc::new(BTreeSet::new()))
    }

    fn alternatives(&self, goal: &Judgement, mut f: impl FnMut(Alt)) {
        use RuleId::*;
        let room = |used: usize| self.universe.max_prop_size.saturating_sub(used);
        let alt = |rule: RuleId, premises: Vec<(Judgement, Option<Statement>)>| Alt { rule, premises };
        let s = match goal {
            Judgement::Falsum => {
                for p in self.universe.props() {
                    let (a, b) = (Statement::plus(p.clone()), Statement::minus(p.clone()));
                    f(alt(
                        Falsum,
                        vec![(Judgement::Stmt(a.clone()), None), (Judgement::Stmt(b.clone()), None)],
                    ));
                    f(alt(
                        Falsum,
                        vec![(Judgement::Stmt(b), None), (Judgement::Stmt(a), None)],
                    ));
                }
                return;
            }
            Judgement::Stmt(s) => s,
        };
        let a = &s.prop;
        let sz = a.size();
        // introductions
        match (s.sign, a) {
            (Sign::Plus, Prop::And(l, r)) => f(alt(
                PlusAndI,
                vec![(plus((**l).clone()), None), (plus((**r).clone()), None)],
            )),
            (Sign::Minus, Prop::And(l, r)) => {
                f(alt(MinusAndI1, vec![(minus((**l).clone()), None)]));
                f(alt(MinusAndI2, vec![(minus((**r).clone()), None)]));
            }
            (Sign::Plus, Prop::Or(l, r)) => {
                f(alt(PlusOrI1, vec![(plus((**l).clone()), None)]));
                f(alt(PlusOrI2, vec![(plus((**r).clone()), None)]));
            }
            (Sign::Minus, Prop::Or(l, r)) => f(alt(
                MinusOrI,
                vec![(minus((**l).clone()), None), (minus((**r).clone()), None)],
            )),
            (Sign::Plus, Prop::Not(x)) => f(alt(PlusNegI, vec![(minus((**x).clone()), None)])),
            (Sign::Minus, Prop::Not(x)) => f(alt(MinusNegI, vec![(plus((**x).clone()), None)])),
            (Sign::Plus, Prop::Imp(l, r)) => f(alt(
                PlusImpI,
                vec![(plus((**r).clone()), Some(Statement::plus((**l).clone())))],
            )),
            (Sign::Minus, Prop::Imp(l, r)) => f(alt(
                MinusImpI,
                vec![(plus((**l).clone()), None), (minus((**r).clone()), None)],
            )),
            _ => {}
        }
        // eliminations whose major premise embeds the goal
        let others = || self.universe.props_up_to(room(sz + 1));
        match s.sign {
            Sign::Plus => {
                for x in others() {
                    f(alt(PlusAndE1, vec![(plus(Prop::and(a.clone(), x.clone())), None)]));
                }
                for x in others() {
                    f(alt(PlusAndE2, vec![(plus(Prop::and(x.clone(), a.clone())), None)]));
                }
                if sz < self.universe.max_prop_size {
                    f(alt(MinusNegE, vec![(minus(Prop::not(a.clone())), None)]));
                }
                for x in others() {
                    f(alt(
                        PlusImpE,
                        vec![(plus(Prop::imp(x.clone(), a.clone())), None), (plus(x.clone()), None)],
                    ));
                }
                for x in others() {
                    f(alt(MinusImpE1, vec![(minus(Prop::imp(a.clone(), x.clone())), None)]));
                }
            }
            Sign::Minus => {
                for x in others() {
                    f(alt(MinusOrE1, vec![(minus(Prop::or(a.clone(), x.clone())), None)]));
                }
                for x in others() {
                    f(alt(MinusOrE2, vec![(minus(Prop::or(x.clone(), a.clone())), None)]));
                }
                if sz < self.universe.max_prop_size {
                    f(alt(PlusNegE, vec![(plus(Prop::not(a.clone())), None)]));
                }
                for x in others() {
                    f(alt(MinusImpE2, vec![(minus(Prop::imp(x.clone(), a.clone())), None)]));
                }
            }
        }
        // case analysis: any major premise, minors concluding the goal
        let goal = Judgement::Stmt(s.clone());
        for (rule, sign) in [(PlusOrE, Sign::Plus), (MinusAndE, Sign::Minus)] {
            for x in self.universe.props() {
                for y in self.universe.props_up_to(room(x.size() + 1)) {
                    let major = if rule == PlusOrE {
                        Prop::or(x.clone(), y.clone())
                    } else {
                        Prop::and(x.clone(), y.clone())
                    };
                    f(alt(
                        rule.clone(),
                        vec![
                            (Judgement::Stmt(Statement::new(sign, major)), None),
                            (goal.clone(), Some(Statement::new(sign, x.clone()))),
                            (goal.clone(), Some(Statement::new(sign, y.clone()))),
                        ],
                    ));
                }
            }
        }
        f(alt(Raa, vec![(Judgement::Falsum, Some(s.conjugate()))]));
        for i in 0..self.b.len() {
            if let Some(BasicRef::Rule(r)) = self.b.get(i) {
                if !r.premises.is_empty() && s.sign == Sign::Plus && *a == Prop::Atom(r.conclusion.clone()) {
                    let ps = r.premises.iter().map(|p| (plus(Prop::Atom(p.clone())), None)).collect();
                    f(alt(Basic(i), ps));
                }
            }
        }
    }

    /// Zero-premise ways of concluding `goal`.
    fn leaves(&self, goal: &Judgement, ctx: &Ctx) -> Vec<Derivation> {
        let Judgement::Stmt(s) = goal else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let hyp_ok = match ctx {
            None => true,
            Some(set) => set.contains(s),
        };
        if hyp_ok {
            out.push(Derivation::assume(canonical_label(s), s.clone()));
        }
        for i in 0..self.b.len() {
            let fits = match self.b.get(i) {
                Some(BasicRef::Rule(r)) => {
                    r.premises.is_empty() && s.sign == Sign::Plus && s.prop == Prop::Atom(r.conclusion.clone())
                }
                Some(BasicRef::Axiom(x)) => s.sign == Sign::Minus && s.prop == Prop::Atom(x.clone()),
                None => false,
            };
            if fits {
                out.push(Derivation::node(RuleId::Basic(i), goal.clone(), vec![], vec![]));
            }
        }
        out
    }

    fn child_ctx(ctx: &Ctx, slot: &Option<Statement>) -> Ctx {
        match (ctx, slot) {
            (Some(set), Some(s)) if !set.contains(s) => {
                let mut next = (**set).clone();
                next.insert(s.clone());
                Some(Arc::new(next))
            }
            _ => ctx.clone(),
        }
    }

    fn pruned(&self, goal: &Judgement, ctx: &Ctx) -> bool {
        match ctx {
            Some(set) if self.pruning => {
                let hyps: Vec<Statement> = set.iter().cloned().collect();
                !oracle::entails(&hyps, goal, self.b)
            }
            _ => false,
        }
    }

    /// Number of derivations of `goal` with exactly `size` nodes.
    pub fn count(&mut self, goal: &Judgement, size: usize) -> u64 {
        let ctx = self.root_ctx();
        self.count_key(goal, &ctx, size)
    }

    pub fn count_up_to(&mut self, goal: &Judgement, max_size: usize) -> u64 {
        (1..=max_size).fold(0u64, |acc, n| acc.saturating_add(self.count(goal, n)))
    }

    fn count_key(&mut self, goal: &Judgement, ctx: &Ctx, size: usize) -> u64 {
        let key = Key {
            goal: goal.clone(),
            ctx: ctx.clone(),
            size,
        };
        if let Some(&n) = self.memo.get(&key) {
            return n;
        }
        let total = if size == 0 || self.pruned(goal, ctx) {
            0
        } else if size == 1 {
            self.leaves(goal, ctx).len() as u64
        } else {
            let mut alts = Vec::new();
            self.alternatives(goal, |a| alts.push(a));
            let mut total = 0u64;
            for alt in &alts {
                let ctxs: Vec<Ctx> = alt
                    .premises
                    .iter()
                    .map(|(_, slot)| Self::child_ctx(ctx, slot))
                    .collect();
                for split in compositions(size - 1, alt.premises.len()) {
                    let mut prod = 1u64;
                    for ((j, _), (c, n)) in alt.premises.iter().zip(ctxs.iter().zip(&split)) {
                        prod = prod.saturating_mul(self.count_key(j, c, *n));
                    }
                    total = total.saturating_add(prod);
                }
            }
            total
        };
        self.memo.insert(key, total);
        total
    }

    fn count_of(&self, goal: &Judgement, ctx: &Ctx, size: usize) -> u64 {
        let key = Key {
            goal: goal.clone(),
            ctx: ctx.clone(),
            size,
        };
        *self.memo.get(&key).expect("count() must run before emission")
    }

    /// Calls `f` on every derivation of `goal` with exactly `size` nodes.
    /// [`Generator::count`] must have been called for the same arguments.
    pub fn for_each(&self, goal: &Judgement, size: usize, f: &mut dyn FnMut(Derivation)) {
        self.emit(goal, &self.root_ctx(), size, f);
    }

    /// Counts, then collects every derivation of `goal` up to `max_size` nodes,
    /// smaller ones first.
    pub fn collect_up_to(&mut self, goal: &Judgement, max_size: usize) -> Vec<Derivation> {
        let mut out = Vec::new();
        for n in 1..=max_size {
            if self.count(goal, n) > 0 {
                self.for_each(goal, n, &mut |d| out.push(d));
            }
        }
        out
    }

    fn emit(&self, goal: &Judgement, ctx: &Ctx, size: usize, f: &mut dyn FnMut(Derivation)) {
        if self.count_of(goal, ctx, size) == 0 {
            return;
        }
        if size == 1 {
            for d in self.leaves(goal, ctx) {
                f(d);
            }
            return;
        }
        self.alternatives(goal, |alt| self.emit_alt(goal, ctx, size, &alt, f));
    }

    fn emit_alt(&self, goal: &Judgement, ctx: &Ctx, size: usize, alt: &Alt, f: &mut dyn FnMut(Derivation)) {
        let ctxs: Vec<Ctx> = alt
            .premises
            .iter()
            .map(|(_, slot)| Self::child_ctx(ctx, slot))
            .collect();
        for split in compositions(size - 1, alt.premises.len()) {
            let specs: Vec<(&Judgement, &Ctx, usize)> = alt
                .premises
                .iter()
                .zip(&ctxs)
                .zip(&split)
                .map(|(((j, _), c), n)| (j, c, *n))
                .collect();
            if specs.iter().any(|(j, c, n)| self.count_of(j, c, *n) == 0) {
                continue;
            }
            let mut acc = Vec::with_capacity(specs.len());
            self.emit_seq(&specs, &mut acc, &mut |premises| f(build(goal, alt, premises)));
        }
    }

    fn emit_seq(
        &self,
        specs: &[(&Judgement, &Ctx, usize)],
        acc: &mut Vec<Derivation>,
        f: &mut dyn FnMut(&[Derivation]),
    ) {
        match specs.split_first() {
            None => f(acc),
            Some((&(j, c, n), rest)) => self.emit(j, c, n, &mut |d| {
                acc.push(d);
                self.emit_seq(rest, acc, f);
                acc.pop();
            }),
        }
    }
}

fn build(goal: &Judgement, alt: &Alt, premises: &[Derivation]) -> Derivation {
    let mut discharges: Vec<Label> = Vec::new();
    for ((_, slot), p) in alt.premises.iter().zip(premises) {
        if let Some(s) = slot {
            let l = canonical_label(s);
            if !discharges.contains(&l) && open_assumptions(p).iter().any(|(ol, os)| *ol == l && os == s) {
                discharges.push(l);
            }
        }
    }
    Derivation::node(alt.rule.clone(), goal.clone(), premises.to_vec(), discharges)
}

/// Ordered ways of writing `total` as `parts` positive summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if total < parts {
            return;
        }
        for first in 1..=total - (parts - 1) {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Every derivation over `atoms` and the atoms of `b` with at most `max_size`
/// nodes and propositions of at most `max_size` nodes.
pub fn enumerate_derivations(b: &BasicSystem, atoms: &[Atom], max_size: usize) -> Vec<Derivation> {
    let universe = Universe::new(atoms.iter().cloned().chain(b.atoms()), max_size);
    enumerate_in(b, universe, max_size)
}

/// As [`enumerate_derivations`] with an explicit proposition universe.
pub fn enumerate_in(b: &BasicSystem, universe: Universe, max_size: usize) -> Vec<Derivation> {
    let mut gen = Generator::open(b, universe);
    let mut out = Vec::new();
    for n in 1..=max_size {
        for goal in gen.universe.goals() {
            if gen.count(&goal, n) > 0 {
                gen.for_each(&goal, n, &mut |d| out.push(d));
            }
        }
    }
    out
}

/// Number of derivations [`enumerate_in`] would return.
pub fn count_in(b: &BasicSystem, universe: Universe, max_size: usize) -> u64 {
    let mut gen = Generator::open(b, universe);
    let goals = gen.universe.goals();
    let mut total = 0u64;
    for n in 1..=max_size {
        for goal in &goals {
            total = total.saturating_add(gen.count(goal, n));
        }
    }
    total
}

/// Applies `f` to every derivation [`enumerate_in`] would return, in
/// parallel, and returns the number visited together with the non-`None`
/// results in enumeration order.
pub fn par_sweep<T: Send>(
    b: &BasicSystem,
    universe: Universe,
    max_size: usize,
    f: impl Fn(&Derivation) -> Option<T> + Sync,
) -> (u64, Vec<T>) {
    let mut gen = Generator::open(b, universe);
    let goals = gen.universe.goals();
    let mut items: Vec<(Judgement, usize, Option<Alt>)> = Vec::new();
    for n in 1..=max_size {
        for goal in &goals {
            if gen.count(goal, n) == 0 {
                continue;
            }
            if n == 1 {
                items.push((goal.clone(), n, None));
            } else {
                gen.alternatives(goal, |a| items.push((goal.clone(), n, Some(a))));
            }
        }
    }
    let gen = &gen;
    let parts: Vec<(u64, Vec<T>)> = items
        .par_iter()
        .map(|(goal, n, alt)| {
            let mut seen = 0u64;
            let mut hits = Vec::new();
            let mut visit = |d: Derivation| {
                seen += 1;
                if let Some(t) = f(&d) {
                    hits.push(t);
                }
            };
            match alt {
                None => gen.emit(goal, &None, *n, &mut visit),
                Some(a) => gen.emit_alt(goal, &None, *n, a, &mut visit),
            }
            (seen, hits)
        })
        .collect();
    let mut seen = 0;
    let mut hits = Vec::new();
    for (n, h) in parts {
        seen += n;
        hits.extend(h);
    }
    (seen, hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{check_derivation, is_closed, labels::canonical_binders};
    use crate::syntax::parse_statement;
    use std::collections::HashSet;

    fn atoms(names: &[&str]) -> Vec<Atom> {
        names.iter().map(|n| Atom::new(n).unwrap()).collect()
    }

    #[test]
    fn universe_sizes() {
        let u = Universe::new(atoms(&["p", "q"]), 4);
        let counts: Vec<usize> = u.by_size.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![0, 2, 2, 14, 38]);
        assert_eq!(Universe::new(atoms(&["p"]), 3).statements().len(), 12);
    }

    #[test]
    fn canonical_labels_are_injective_identifiers() {
        let u = Universe::new(atoms(&["p", "q1", "q_"]), 3);
        let mut seen = HashSet::new();
        for s in u.statements() {
            let l = canonical_label(&s);
            assert!(crate::syntax::is_identifier(l.as_str()), "{l}");
            assert!(seen.insert(l));
        }
    }

    #[test]
    fn size_one_is_just_leaves() {
        let ds = enumerate_derivations(&BasicSystem::empty(), &atoms(&["p"]), 1);
        let concl: Vec<String> = ds.iter().map(|d| d.conclusion().to_wrapped()).collect();
        assert_eq!(concl, vec!["+p", "-p"]);
        assert!(ds.iter().all(Derivation::is_assumption));
    }

    #[test]
    fn everything_checks_and_is_distinct() {
        let b = BasicSystem::empty();
        let ds = enumerate_derivations(&b, &atoms(&["p"]), 3);
        let mut seen = HashSet::new();
        for d in &ds {
            check_derivation(d, &b).unwrap();
            assert!(seen.insert(canonical_binders(d)), "duplicate {d:?}");
        }
        assert_eq!(ds.len() as u64, count_in(&b, Universe::new(atoms(&["p"]), 3), 3));
    }

    #[test]
    fn size_two_includes_negation_intro() {
        let ds = enumerate_derivations(&BasicSystem::empty(), &atoms(&["p"]), 2);
        assert!(ds
            .iter()
            .any(|d| *d.rule() == RuleId::PlusNegI && d.statement() == Some(&parse_statement("+~p").unwrap())));
    }

    #[test]
    fn closed_mode_yields_closed_derivations() {
        let b = crate::basicsys::load_basic_system("+a.").unwrap();
        let u = Universe::new(atoms(&["a"]), 3);
        let goal = Judgement::Stmt(parse_statement("+(a -> a)").unwrap());
        let mut plain = Generator::closed(&b, u.clone());
        let mut pruned = Generator::closed(&b, u).with_pruning(true);
        for n in 1..=5 {
            assert_eq!(plain.count(&goal, n), pruned.count(&goal, n));
        }
        let ds = plain.collect_up_to(&goal, 5);
        assert!(!ds.is_empty());
        for d in &ds {
            assert!(is_closed(d));
            check_derivation(d, &b).unwrap();
        }
    }

    #[test]
    fn parallel_sweep_matches_sequential_order() {
        let b = BasicSystem::empty();
        let u = Universe::new(atoms(&["p"]), 3);
        let seq = enumerate_in(&b, u.clone(), 3);
        let (n, par) = par_sweep(&b, u, 3, |d| Some(d.clone()));
        assert_eq!(n as usize, seq.len());
        let a: HashSet<_> = seq.into_iter().collect();
        let c: HashSet<_> = par.into_iter().collect();
        assert_eq!(a, c);
    }
}
