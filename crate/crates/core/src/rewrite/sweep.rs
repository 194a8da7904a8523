//! Exhaustive normalization and subject-reduction sweeps over enumerated
//! derivations.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::{find_redexes_with, normalize_with, reduce_at, Redex, RuleSet, Strategy};
use crate::basicsys::BasicSystem;
use crate::derivation::enumerate::{par_sweep, Universe};
use crate::derivation::{check_derivation, open_assumptions, Derivation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationReport {
    pub checked: u64,
    /// Derivations still holding a redex when fuel ran out.
    pub exhausted: Vec<Derivation>,
    pub max_steps: usize,
    /// First derivation, in enumeration order, needing `max_steps`.
    pub max_steps_witness: Option<Derivation>,
}

/// Normalizes every derivation of the universe up to `max_size` nodes.
pub fn normalization_sweep(
    b: &BasicSystem,
    universe: Universe,
    max_size: usize,
    strategy: Strategy,
    fuel: usize,
    rules: RuleSet,
) -> NormalizationReport {
    let best = AtomicUsize::new(0);
    let (checked, hits) = par_sweep(b, universe, max_size, |d| {
        let n = normalize_with(d, strategy, fuel, rules);
        let steps = n.trace.steps.len();
        let prev = best.fetch_max(steps, Ordering::Relaxed);
        (n.exhausted || steps >= prev).then(|| (d.clone(), steps, n.exhausted))
    });
    let max_steps = best.into_inner();
    let max_steps_witness = hits
        .iter()
        .find(|(_, s, _)| *s == max_steps && max_steps > 0)
        .map(|(d, _, _)| d.clone());
    NormalizationReport {
        checked,
        exhausted: hits.into_iter().filter(|h| h.2).map(|h| h.0).collect(),
        max_steps,
        max_steps_witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubjectReductionViolation {
    pub derivation: Derivation,
    pub redex: Redex,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubjectReductionReport {
    pub checked: u64,
    pub redexes: u64,
    pub violations: Vec<SubjectReductionViolation>,
}

/// Checks one contraction: the result is well formed, keeps the conclusion
/// and its open assumptions (as a set of labelled statements) do not grow.
pub fn subject_reduction_violation(d: &Derivation, r: &Redex, b: &BasicSystem) -> Option<String> {
    let out = match reduce_at(d, r) {
        Ok(out) => out,
        Err(e) => return Some(e.to_string()),
    };
    if let Err(e) = check_derivation(&out, b) {
        return Some(format!("ill-formed result: {e}"));
    }
    if out.conclusion() != d.conclusion() {
        return Some(format!(
            "conclusion changed from {} to {}",
            d.conclusion(),
            out.conclusion()
        ));
    }
    let before: BTreeSet<_> = open_assumptions(d).into_iter().collect();
    let after: BTreeSet<_> = open_assumptions(&out).into_iter().collect();
    if let Some((l, s)) = after.difference(&before).next() {
        return Some(format!("new open assumption {l}: {}", s.to_wrapped()));
    }
    None
}

pub fn subject_reduction_sweep(
    b: &BasicSystem,
    universe: Universe,
    max_size: usize,
    rules: RuleSet,
) -> SubjectReductionReport {
    let redexes = AtomicUsize::new(0);
    let (checked, hits) = par_sweep(b, universe, max_size, |d| {
        let rs = find_redexes_with(d, rules);
        redexes.fetch_add(rs.len(), Ordering::Relaxed);
        let bad: Vec<SubjectReductionViolation> = rs
            .into_iter()
            .filter_map(|r| {
                subject_reduction_violation(d, &r, b).map(|reason| SubjectReductionViolation {
                    derivation: d.clone(),
                    redex: r,
                    reason,
                })
            })
            .collect();
        (!bad.is_empty()).then_some(bad)
    });
    SubjectReductionReport {
        checked,
        redexes: redexes.into_inner() as u64,
        violations: hits.into_iter().flatten().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Atom;

    fn universe(max_prop: usize) -> Universe {
        Universe::new([Atom::new("p").unwrap()], max_prop)
    }

    #[test]
    fn small_corpus_normalizes() {
        let r = normalization_sweep(
            &BasicSystem::empty(),
            universe(2),
            4,
            Strategy::Innermost,
            50,
            RuleSet::FULL,
        );
        assert!(r.checked > 0);
        assert!(r.exhausted.is_empty());
        assert!(r.max_steps >= 1);
        assert!(r.max_steps_witness.is_some());
    }

    #[test]
    fn small_corpus_keeps_its_subject() {
        let r = subject_reduction_sweep(&BasicSystem::empty(), universe(2), 4, RuleSet::FULL);
        assert!(r.redexes > 0);
        assert!(r.violations.is_empty(), "{:?}", r.violations.first());
    }
}
