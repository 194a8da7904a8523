//! Classical two-valued semantics, used as an independent referee for the
//! kernel and the certifier.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::basicsys::BasicSystem;
use crate::derivation::enumerate::{par_sweep, Universe};
use crate::derivation::{open_assumptions, Derivation};
use crate::syntax::{Atom, Judgement, Prop, Sign, Statement};

pub type Valuation = BTreeMap<Atom, bool>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("atom {0} has no value in the valuation")]
    MissingAtom(Atom),
}

pub fn eval_prop(p: &Prop, v: &Valuation) -> Result<bool, OracleError> {
    Ok(match p {
        Prop::Atom(a) => *v.get(a).ok_or_else(|| OracleError::MissingAtom(a.clone()))?,
        Prop::And(l, r) => eval_prop(l, v)? && eval_prop(r, v)?,
        Prop::Or(l, r) => eval_prop(l, v)? || eval_prop(r, v)?,
        Prop::Not(x) => !eval_prop(x, v)?,
        Prop::Imp(l, r) => !eval_prop(l, v)? || eval_prop(r, v)?,
    })
}

/// `+A` holds when `A` is true, `-A` when `A` is false.
pub fn satisfies(s: &Statement, v: &Valuation) -> Result<bool, OracleError> {
    let t = eval_prop(&s.prop, v)?;
    Ok(match s.sign {
        Sign::Plus => t,
        Sign::Minus => !t,
    })
}

/// Every rule holds as a Horn clause and every negative axiom is false.
///
/// Atoms missing from `v` count as false.
pub fn respects(v: &Valuation, b: &BasicSystem) -> bool {
    let val = |a: &Atom| v.get(a).copied().unwrap_or(false);
    b.rules()
        .iter()
        .all(|r| !r.premises.iter().all(val) || val(&r.conclusion))
        && b.negative_axioms().iter().all(|a| !val(a))
}

/// All `2^n` valuations of `atoms`, in binary counting order.
pub fn valuations(atoms: &[Atom]) -> impl Iterator<Item = Valuation> + '_ {
    assert!(atoms.len() < 32, "too many atoms for exhaustive valuation");
    (0u32..1 << atoms.len()).map(move |mask| {
        atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), mask >> i & 1 == 1))
            .collect()
    })
}

/// Bitmask evaluation over a fixed atom index, for the hot paths.
struct Table<'a> {
    atoms: &'a [Atom],
}

impl Table<'_> {
    fn eval(&self, p: &Prop, mask: u32) -> bool {
        match p {
            Prop::Atom(a) => {
                let i = self.atoms.iter().position(|x| x == a).expect("atom indexed");
                mask >> i & 1 == 1
            }
            Prop::And(l, r) => self.eval(l, mask) && self.eval(r, mask),
            Prop::Or(l, r) => self.eval(l, mask) || self.eval(r, mask),
            Prop::Not(x) => !self.eval(x, mask),
            Prop::Imp(l, r) => !self.eval(l, mask) || self.eval(r, mask),
        }
    }

    fn sat(&self, s: &Statement, mask: u32) -> bool {
        self.eval(&s.prop, mask) == (s.sign == Sign::Plus)
    }

    fn respects(&self, b: &BasicSystem, mask: u32) -> bool {
        let val = |a: &Atom| {
            let i = self.atoms.iter().position(|x| x == a).expect("atom indexed");
            mask >> i & 1 == 1
        };
        b.rules()
            .iter()
            .all(|r| !r.premises.iter().all(val) || val(&r.conclusion))
            && b.negative_axioms().iter().all(|a| !val(a))
    }
}

/// `assumptions ⊨ concl` over valuations respecting `b`; ⊥ holds nowhere.
pub fn entails(assumptions: &[Statement], concl: &Judgement, b: &BasicSystem) -> bool {
    let mut atoms: Vec<Atom> = b.atoms().into_iter().collect();
    let mut extra = Vec::new();
    for s in assumptions.iter().chain(concl.statement()) {
        s.prop.collect_atoms(&mut extra);
    }
    for a in extra {
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    assert!(atoms.len() < 32, "too many atoms for exhaustive valuation");
    let t = Table { atoms: &atoms };
    (0u32..1 << atoms.len()).all(|mask| {
        if !t.respects(b, mask) || !assumptions.iter().all(|s| t.sat(s, mask)) {
            return true;
        }
        match concl {
            Judgement::Falsum => false,
            Judgement::Stmt(s) => t.sat(s, mask),
        }
    })
}

/// Result of checking a derivation corpus against the oracle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SoundnessReport {
    pub checked: u64,
    pub violations: Vec<Derivation>,
}

/// The sequent a derivation claims, read off its leaves and root.
pub fn sequent_holds(d: &Derivation, b: &BasicSystem) -> bool {
    let hyps: Vec<Statement> = open_assumptions(d).into_iter().map(|(_, s)| s).collect();
    entails(&hyps, d.conclusion(), b)
}

/// Checks an explicit list of derivations.
pub fn check_corpus(ds: &[Derivation], b: &BasicSystem) -> SoundnessReport {
    let violations: Vec<Derivation> = ds.par_iter().filter(|d| !sequent_holds(d, b)).cloned().collect();
    SoundnessReport {
        checked: ds.len() as u64,
        violations,
    }
}

/// Every derivation over `atoms` (and the atoms of `b`) with at most
/// `max_size` nodes and propositions of at most `max_prop_size` nodes must
/// conclude a consequence of its open assumptions.
pub fn soundness_sweep(b: &BasicSystem, atoms: &[Atom], max_size: usize, max_prop_size: usize) -> SoundnessReport {
    let universe = Universe::new(atoms.iter().cloned().chain(b.atoms()), max_prop_size);
    let (checked, violations) = par_sweep(b, universe, max_size, |d| (!sequent_holds(d, b)).then(|| d.clone()));
    SoundnessReport { checked, violations }
}

/// Heights by explicit levels: `L0` holds atoms with a premise-free rule or a
/// negative axiom, `L(k+1)` adds the conclusion of every rule whose premises
/// all lie in `Lk`, and an atom's height is the first level containing it.
/// Atoms of `b` never reached map to `None`.
pub fn heights_by_levels(b: &BasicSystem) -> BTreeMap<Atom, Option<usize>> {
    let atoms = b.atoms();
    let mut level: BTreeMap<Atom, Option<usize>> = atoms.iter().map(|a| (a.clone(), None)).collect();
    let mut reached: Vec<Atom> = atoms
        .iter()
        .filter(|a| {
            b.negative_axioms().contains(a) || b.rules().iter().any(|r| &r.conclusion == *a && r.premises.is_empty())
        })
        .cloned()
        .collect();
    for a in &reached {
        level.insert(a.clone(), Some(0));
    }
    for k in 1..=atoms.len() {
        let next: Vec<Atom> = b
            .rules()
            .iter()
            .filter(|r| !reached.contains(&r.conclusion) && r.premises.iter().all(|p| reached.contains(p)))
            .map(|r| r.conclusion.clone())
            .collect();
        for a in next {
            if !reached.contains(&a) {
                level.insert(a.clone(), Some(k));
                reached.push(a);
            }
        }
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basicsys::load_basic_system;
    use crate::syntax::{parse_prop, parse_statement};

    fn val(pairs: &[(&str, bool)]) -> Valuation {
        pairs.iter().map(|(a, t)| (Atom::new(a).unwrap(), *t)).collect()
    }

    fn st(s: &str) -> Statement {
        parse_statement(s).unwrap()
    }

    #[test]
    fn truth_table_rows() {
        let em = parse_prop("p | ~p").unwrap();
        for v in valuations(&[Atom::new("p").unwrap()]) {
            assert!(eval_prop(&em, &v).unwrap());
        }
        let pq = parse_prop("p & q").unwrap();
        assert!(!eval_prop(&pq, &val(&[("p", true), ("q", false)])).unwrap());
        let peirce = parse_prop("(p -> q) -> p").unwrap();
        assert!(!eval_prop(&peirce, &val(&[("p", false), ("q", false)])).unwrap());
        assert_eq!(
            eval_prop(&pq, &val(&[("p", true)])),
            Err(OracleError::MissingAtom(Atom::new("q").unwrap()))
        );
    }

    #[test]
    fn signed_reading() {
        assert!(satisfies(&st("-(p & ~p)"), &val(&[("p", true)])).unwrap());
        assert!(satisfies(&st("-(p & ~p)"), &val(&[("p", false)])).unwrap());
        assert!(!satisfies(&st("+p"), &val(&[("p", false)])).unwrap());
    }

    #[test]
    fn entailment_examples() {
        let e = BasicSystem::empty();
        assert!(entails(&[st("+p"), st("+(p -> q)")], &Judgement::Stmt(st("+q")), &e));
        assert!(entails(&[], &Judgement::Stmt(st("+(p | ~p)")), &e));
        assert!(entails(&[st("+p"), st("-p")], &Judgement::Falsum, &e));
        assert!(!entails(&[], &Judgement::Stmt(st("+p")), &e));
    }

    #[test]
    fn basic_system_constrains_valuations() {
        let b = load_basic_system("+a. +c <- a. -d.").unwrap();
        assert!(entails(&[], &Judgement::Stmt(st("+c")), &b));
        assert!(entails(&[], &Judgement::Stmt(st("-d")), &b));
        assert!(!entails(&[], &Judgement::Stmt(st("+q")), &b));
        // a rule over an assumed premise still constrains the valuation
        let b = load_basic_system("+a <- c.").unwrap();
        assert!(entails(&[st("+c")], &Judgement::Stmt(st("+a")), &b));
        assert!(respects(&val(&[("a", false), ("c", false)]), &b));
        assert!(!respects(&val(&[("a", false), ("c", true)]), &b));
    }

    #[test]
    fn level_heights() {
        let b = load_basic_system("+a <- b, c. +b. +c <- b. -d. +e <- f.").unwrap();
        let h = heights_by_levels(&b);
        let get = |n: &str| h[&Atom::new(n).unwrap()];
        assert_eq!(
            (get("a"), get("b"), get("c"), get("d"), get("e"), get("f")),
            (Some(2), Some(0), Some(1), Some(0), None, None)
        );
    }

    #[test]
    fn inconsistent_system_entails_everything() {
        let b = load_basic_system("+a. -a.").unwrap();
        assert!(entails(&[], &Judgement::Falsum, &b));
    }
}
