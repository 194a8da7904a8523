//! Redex selection, fuel-bounded normalization and breadth-first search over
//! all reduction choices.

use std::collections::{HashSet, VecDeque};
use std::str::FromStr;

use super::{find_redexes_with, reduce_at, Redex, RuleSet, Step, Trace};
use crate::derivation::labels::canonical_binders;
use crate::derivation::Derivation;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Leftmost redex with no redex strictly inside it.
    #[default]
    Innermost,
    /// Shallowest redex, leftmost among equals.
    Outermost,
    /// First redex in [`super::find_redexes`] order.
    GivenOrder,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Strategy, String> {
        match s {
            "innermost" => Ok(Strategy::Innermost),
            "outermost" => Ok(Strategy::Outermost),
            "given" | "given-order" => Ok(Strategy::GivenOrder),
            _ => Err(format!("unknown strategy {s:?} (innermost, outermost, given)")),
        }
    }
}

impl Strategy {
    pub fn select(self, redexes: &[Redex]) -> Option<&Redex> {
        match self {
            Strategy::GivenOrder => redexes.first(),
            Strategy::Outermost => redexes
                .iter()
                .min_by(|a, b| (a.path.0.len(), &a.path, a.kind).cmp(&(b.path.0.len(), &b.path, b.kind))),
            Strategy::Innermost => redexes.iter().find(|r| {
                !redexes
                    .iter()
                    .any(|o| o.path.0.len() > r.path.0.len() && o.path.0.starts_with(&r.path.0))
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub result: Derivation,
    pub trace: Trace,
    /// Fuel ran out with a redex left.
    pub exhausted: bool,
}

pub fn normalize(d: &Derivation, strategy: Strategy, fuel: usize) -> Normalized {
    normalize_with(d, strategy, fuel, RuleSet::FULL)
}

/// Applies the selected redex until none is left or `fuel` rewrites are spent.
pub fn normalize_with(d: &Derivation, strategy: Strategy, fuel: usize, rules: RuleSet) -> Normalized {
    let mut trace = Trace::new(d.clone());
    let mut cur = d.clone();
    loop {
        let redexes = find_redexes_with(&cur, rules);
        let Some(r) = strategy.select(&redexes) else {
            return Normalized {
                result: cur,
                trace,
                exhausted: false,
            };
        };
        if trace.steps.len() >= fuel {
            return Normalized {
                result: cur,
                trace,
                exhausted: true,
            };
        }
        cur = reduce_at(&cur, r).expect("selected redex matches");
        trace.steps.push(Step {
            redex: r.clone(),
            result: cur.clone(),
        });
    }
}

pub fn reduces_to(d: &Derivation, pred: &dyn Fn(&Derivation) -> bool, fuel: usize) -> (bool, Trace) {
    reduces_to_with(d, pred, fuel, RuleSet::FULL)
}

pub fn reduces_to_with(
    d: &Derivation,
    pred: &dyn Fn(&Derivation) -> bool,
    fuel: usize,
    rules: RuleSet,
) -> (bool, Trace) {
    let s = search(d, pred, fuel, rules);
    (s.found, s.trace)
}

/// Outcome of [`search`].
#[derive(Clone, Debug)]
pub struct Search {
    pub found: bool,
    /// Path to the hit, or to the last derivation explored.
    pub trace: Trace,
    /// The search stopped because fuel ran out, not because every reduct
    /// was explored.
    pub exhausted: bool,
}

/// Breadth-first search over every reduction choice for a derivation
/// satisfying `pred`, spending at most `fuel` rewrites. Successors are
/// explored in redex order and alpha-equivalent derivations are visited once.
pub fn search(d: &Derivation, pred: &dyn Fn(&Derivation) -> bool, fuel: usize, rules: RuleSet) -> Search {
    struct Entry {
        d: Derivation,
        parent: Option<(usize, Redex)>,
    }
    let mut nodes = vec![Entry {
        d: d.clone(),
        parent: None,
    }];
    let path_to = |nodes: &[Entry], mut i: usize| {
        let mut steps = Vec::new();
        while let Some((p, r)) = &nodes[i].parent {
            steps.push(Step {
                redex: r.clone(),
                result: nodes[i].d.clone(),
            });
            i = *p;
        }
        steps.reverse();
        Trace {
            initial: d.clone(),
            steps,
        }
    };
    let done = |nodes: &[Entry], i: usize, found: bool, exhausted: bool| Search {
        found,
        trace: path_to(nodes, i),
        exhausted,
    };
    if pred(d) {
        return done(&nodes, 0, true, false);
    }
    let mut seen = HashSet::from([canonical_binders(d)]);
    let mut queue = VecDeque::from([0usize]);
    let mut spent = 0usize;
    let mut last = 0usize;
    while let Some(i) = queue.pop_front() {
        let cur = nodes[i].d.clone();
        for r in find_redexes_with(&cur, rules) {
            if spent >= fuel {
                return done(&nodes, last, false, true);
            }
            spent += 1;
            let next = reduce_at(&cur, &r).expect("listed redex matches");
            if !seen.insert(canonical_binders(&next)) {
                continue;
            }
            nodes.push(Entry {
                d: next.clone(),
                parent: Some((i, r)),
            });
            last = nodes.len() - 1;
            if pred(&next) {
                return done(&nodes, last, true, false);
            }
            queue.push_back(last);
        }
    }
    done(&nodes, last, false, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::format::parse_derivation;
    use crate::derivation::Path;
    use crate::rewrite::{is_normal, RedexKind};

    fn d(text: &str) -> Derivation {
        parse_derivation(text).unwrap()
    }

    fn r(path: &[usize], kind: RedexKind) -> Redex {
        Redex {
            path: Path(path.to_vec()),
            kind,
        }
    }

    #[test]
    fn selection_orders() {
        let rs = vec![
            r(&[], RedexKind::BotRaaCut),
            r(&[0], RedexKind::DetourMinusOrE1),
            r(&[0, 1], RedexKind::DetourMinusOrE1),
            r(&[1], RedexKind::DetourMinusOrE1),
        ];
        assert_eq!(Strategy::GivenOrder.select(&rs), Some(&rs[0]));
        assert_eq!(Strategy::Outermost.select(&rs), Some(&rs[0]));
        assert_eq!(Strategy::Innermost.select(&rs), Some(&rs[2]));
        assert_eq!(Strategy::Innermost.select(&[]), None);
    }

    #[test]
    fn normal_input_is_untouched() {
        let x = d("(+&I +(p & q) (assume x +p) (assume y +q))");
        let n = normalize(&x, Strategy::Innermost, 5);
        assert_eq!(n.result, x);
        assert!(n.trace.steps.is_empty());
        assert!(!n.exhausted);
    }

    #[test]
    fn detour_in_one_step_and_fuel_zero() {
        let x = d("(-|E1 -p (-|I -(p | q) (assume x -p) (assume y -q)))");
        let n = normalize(&x, Strategy::Innermost, 1);
        assert_eq!(n.trace.steps.len(), 1);
        assert!(!n.exhausted);
        assert!(is_normal(&n.result));
        let n = normalize(&x, Strategy::Innermost, 0);
        assert!(n.exhausted);
        assert_eq!(n.result, x);
    }

    #[test]
    fn search_finds_intro_form() {
        let x = d("(+&E1 +p (raa +(p & q) :discharge h (bot _|_ (assume h -(p & q)) (assume g +(p & q)))))");
        let (found, trace) = reduces_to(&x, &|y| *y.rule() == crate::derivation::RuleId::Raa, 10);
        assert!(found);
        assert_eq!(trace.steps.len(), 1);
        let (found, _) = reduces_to(&x, &|y| y.premises().len() == 7, 3);
        assert!(!found);
        let s = search(&x, &|y| y.premises().len() == 7, 0, RuleSet::FULL);
        assert!(s.exhausted);
        let s = search(&x, &|y| y.premises().len() == 7, 100, RuleSet::FULL);
        assert!(!s.found && !s.exhausted);
    }

    #[test]
    fn parses_strategy_names() {
        assert_eq!("outermost".parse::<Strategy>(), Ok(Strategy::Outermost));
        assert!("sideways".parse::<Strategy>().is_err());
    }
}
