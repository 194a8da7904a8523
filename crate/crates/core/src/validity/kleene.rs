//! Least fixed points of monotone operators on finite powersets.

use std::collections::BTreeSet;

/// The chain `∅, f(∅), f(f(∅)), ...` up to its first repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iteration<T> {
    /// `iterates[0]` is empty; the last entry is the fixed point when
    /// `converged` holds.
    pub iterates: Vec<BTreeSet<T>>,
    pub converged: bool,
}

impl<T: Ord> Iteration<T> {
    pub fn fixpoint(&self) -> &BTreeSet<T> {
        self.iterates.last().expect("at least the empty iterate")
    }

    /// Number of applications of the operator performed.
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }

    /// Indices `n` with `X_n ⊄ X_{n+1}`.
    pub fn monotonicity_violations(&self) -> Vec<usize> {
        self.iterates
            .windows(2)
            .enumerate()
            .filter(|(_, w)| !w[0].is_subset(&w[1]))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Iterates `f` from the empty set until `X_{n+1} = X_n` or `max_steps`
/// applications have been made. For a monotone `f` on subsets of a universe
/// of `k` elements, `k + 1` steps always suffice.
pub fn kleene_lfp<T: Ord + Clone>(mut f: impl FnMut(&BTreeSet<T>) -> BTreeSet<T>, max_steps: usize) -> Iteration<T> {
    let mut iterates = vec![BTreeSet::new()];
    for _ in 0..max_steps {
        let next = f(iterates.last().expect("nonempty"));
        let stable = &next == iterates.last().expect("nonempty");
        iterates.push(next);
        if stable {
            return Iteration {
                iterates,
                converged: true,
            };
        }
    }
    Iteration {
        iterates,
        converged: false,
    }
}
