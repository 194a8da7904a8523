//! The reduction set as position-addressed rewrite rules.
//!
//! [`find_redexes`] lists every matching position in a fixed order (paths
//! lexicographically, then [`RedexKind`] declaration order), and
//! [`reduce_at`] rewrites one of them. Strategies, normalization and
//! breadth-first reachability live in [`strategy`]; traces in [`trace`].

pub mod strategy;
pub mod sweep;
pub mod trace;

use std::fmt;

use thiserror::Error;

use crate::derivation::labels::{plug, LabelSupply};
use crate::derivation::{
    hypothesis_slots, open_assumptions, prop_and, prop_imp, prop_or, Derivation, Label, Path, RuleId,
};
use crate::syntax::{Judgement, Prop, Sign, Statement};

pub use strategy::{normalize, normalize_with, reduces_to, reduces_to_with, search, Normalized, Search, Strategy};
pub use trace::{parse_trace, replay, Step, Trace, TraceError, TraceFile};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum RedexKind {
    BotRaaCut,
    DetourMinusImpE1,
    DetourMinusImpE2,
    DetourMinusOrE1,
    DetourMinusOrE2,
    DetourMinusAndEL,
    DetourMinusAndER,
    DetourMinusNegE,
    DetourPlusNegE,
    BotOverAndPair,
    BotOverImpPair,
    BotOverOrPair,
    BotOverNegPair,
    RaaPermutePlusAndE1,
    RaaPermutePlusAndE2,
    RaaPermuteMinusOrE1,
    RaaPermuteMinusOrE2,
    RaaPermuteMinusNegE,
    RaaPermutePlusNegE,
    RaaPermuteMinusAndE,
    RaaPermutePlusOrE,
    RaaPermutePlusImpE,
    RaaPermuteMinusImpE1,
    RaaPermuteMinusImpE2,
    // plain detours for the positive eliminations
    DetourPlusAndE1,
    DetourPlusAndE2,
    DetourPlusOrE,
    DetourPlusImpE,
}

impl RedexKind {
    pub const ALL: [RedexKind; 28] = [
        RedexKind::BotRaaCut,
        RedexKind::DetourMinusImpE1,
        RedexKind::DetourMinusImpE2,
        RedexKind::DetourMinusOrE1,
        RedexKind::DetourMinusOrE2,
        RedexKind::DetourMinusAndEL,
        RedexKind::DetourMinusAndER,
        RedexKind::DetourMinusNegE,
        RedexKind::DetourPlusNegE,
        RedexKind::BotOverAndPair,
        RedexKind::BotOverImpPair,
        RedexKind::BotOverOrPair,
        RedexKind::BotOverNegPair,
        RedexKind::RaaPermutePlusAndE1,
        RedexKind::RaaPermutePlusAndE2,
        RedexKind::RaaPermuteMinusOrE1,
        RedexKind::RaaPermuteMinusOrE2,
        RedexKind::RaaPermuteMinusNegE,
        RedexKind::RaaPermutePlusNegE,
        RedexKind::RaaPermuteMinusAndE,
        RedexKind::RaaPermutePlusOrE,
        RedexKind::RaaPermutePlusImpE,
        RedexKind::RaaPermuteMinusImpE1,
        RedexKind::RaaPermuteMinusImpE2,
        RedexKind::DetourPlusAndE1,
        RedexKind::DetourPlusAndE2,
        RedexKind::DetourPlusOrE,
        RedexKind::DetourPlusImpE,
    ];

    /// Name used in trace files.
    pub fn name(self) -> &'static str {
        use RedexKind::*;
        match self {
            BotRaaCut => "BotRaaCut",
            DetourMinusImpE1 => "DetourMinusImpE1",
            DetourMinusImpE2 => "DetourMinusImpE2",
            DetourMinusOrE1 => "DetourMinusOrE1",
            DetourMinusOrE2 => "DetourMinusOrE2",
            DetourMinusAndEL => "DetourMinusAndE_L",
            DetourMinusAndER => "DetourMinusAndE_R",
            DetourMinusNegE => "DetourMinusNegE",
            DetourPlusNegE => "DetourPlusNegE",
            BotOverAndPair => "BotOverAndPair",
            BotOverImpPair => "BotOverImpPair",
            BotOverOrPair => "BotOverOrPair",
            BotOverNegPair => "BotOverNegPair",
            RaaPermutePlusAndE1 => "RaaPermute_PlusAndE1",
            RaaPermutePlusAndE2 => "RaaPermute_PlusAndE2",
            RaaPermuteMinusOrE1 => "RaaPermute_MinusOrE1",
            RaaPermuteMinusOrE2 => "RaaPermute_MinusOrE2",
            RaaPermuteMinusNegE => "RaaPermute_MinusNegE",
            RaaPermutePlusNegE => "RaaPermute_PlusNegE",
            RaaPermuteMinusAndE => "RaaPermute_MinusAndE",
            RaaPermutePlusOrE => "RaaPermute_PlusOrE",
            RaaPermutePlusImpE => "RaaPermute_PlusImpE",
            RaaPermuteMinusImpE1 => "RaaPermute_MinusImpE1",
            RaaPermuteMinusImpE2 => "RaaPermute_MinusImpE2",
            DetourPlusAndE1 => "DetourPlusAndE1",
            DetourPlusAndE2 => "DetourPlusAndE2",
            DetourPlusOrE => "DetourPlusOrE",
            DetourPlusImpE => "DetourPlusImpE",
        }
    }

    pub fn from_name(name: &str) -> Option<RedexKind> {
        RedexKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// The symmetric twin of a printed rule, never printed itself.
    pub fn is_mirror(self) -> bool {
        use RedexKind::*;
        matches!(
            self,
            DetourMinusOrE2
                | DetourMinusAndER
                | DetourPlusNegE
                | BotOverOrPair
                | BotOverNegPair
                | RaaPermutePlusAndE2
                | RaaPermuteMinusOrE2
                | RaaPermutePlusNegE
        )
    }

    /// Standard detours for +∧E, +∨E and +→E, absent from the printed set.
    pub fn is_extension(self) -> bool {
        use RedexKind::*;
        matches!(self, DetourPlusAndE1 | DetourPlusAndE2 | DetourPlusOrE | DetourPlusImpE)
    }
}

impl fmt::Display for RedexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which rewrite rules are active.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    /// Keep only the literally printed rules: drops mirror completions
    /// (including mirrored premise orders of ⊥) and the extension detours.
    pub literal: bool,
}

impl RuleSet {
    pub const FULL: RuleSet = RuleSet { literal: false };
    pub const LITERAL: RuleSet = RuleSet { literal: true };
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Redex {
    pub path: Path,
    pub kind: RedexKind,
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.path, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("no subderivation at {0}")]
    BadPath(Path),
    #[error("{kind} does not match at {path}")]
    NoMatch { path: Path, kind: RedexKind },
}

/// The kind matching at the root of `d`, and whether this particular match is
/// a mirrored instance of the printed figure.
pub fn match_root(d: &Derivation) -> Option<(RedexKind, bool)> {
    use RedexKind::*;
    use RuleId as R;
    let ps = d.premises();
    let major = || ps.first().map(Derivation::rule);
    let k = |kind: RedexKind| Some((kind, kind.is_mirror() || kind.is_extension()));
    match d.rule() {
        R::Falsum if ps.len() == 2 => {
            if *ps[0].rule() == R::Raa {
                return Some((BotRaaCut, false));
            }
            if *ps[1].rule() == R::Raa {
                return Some((BotRaaCut, true));
            }
            let flipped = ps[0].statement()?.sign == Sign::Minus;
            let (pos, neg) = if flipped { (&ps[1], &ps[0]) } else { (&ps[0], &ps[1]) };
            match (pos.rule(), neg.rule()) {
                (R::PlusAndI, R::MinusAndI1) => Some((BotOverAndPair, flipped)),
                (R::PlusAndI, R::MinusAndI2) => Some((BotOverAndPair, true)),
                (R::PlusImpI, R::MinusImpI) => Some((BotOverImpPair, flipped)),
                (R::PlusOrI1 | R::PlusOrI2, R::MinusOrI) => k(BotOverOrPair),
                (R::PlusNegI, R::MinusNegI) => k(BotOverNegPair),
                _ => None,
            }
        }
        R::PlusAndE1 => match major()? {
            R::Raa => k(RaaPermutePlusAndE1),
            R::PlusAndI => k(DetourPlusAndE1),
            _ => None,
        },
        R::PlusAndE2 => match major()? {
            R::Raa => k(RaaPermutePlusAndE2),
            R::PlusAndI => k(DetourPlusAndE2),
            _ => None,
        },
        R::MinusOrE1 => match major()? {
            R::Raa => k(RaaPermuteMinusOrE1),
            R::MinusOrI => k(DetourMinusOrE1),
            _ => None,
        },
        R::MinusOrE2 => match major()? {
            R::Raa => k(RaaPermuteMinusOrE2),
            R::MinusOrI => k(DetourMinusOrE2),
            _ => None,
        },
        R::MinusNegE => match major()? {
            R::Raa => k(RaaPermuteMinusNegE),
            R::MinusNegI => k(DetourMinusNegE),
            _ => None,
        },
        R::PlusNegE => match major()? {
            R::Raa => k(RaaPermutePlusNegE),
            R::PlusNegI => k(DetourPlusNegE),
            _ => None,
        },
        R::MinusAndE => match major()? {
            R::Raa => k(RaaPermuteMinusAndE),
            R::MinusAndI1 => k(DetourMinusAndEL),
            R::MinusAndI2 => k(DetourMinusAndER),
            _ => None,
        },
        R::PlusOrE => match major()? {
            R::Raa => k(RaaPermutePlusOrE),
            R::PlusOrI1 | R::PlusOrI2 => k(DetourPlusOrE),
            _ => None,
        },
        R::PlusImpE => match major()? {
            R::Raa => k(RaaPermutePlusImpE),
            R::PlusImpI => k(DetourPlusImpE),
            _ => None,
        },
        R::MinusImpE1 => match major()? {
            R::Raa => k(RaaPermuteMinusImpE1),
            R::MinusImpI => k(DetourMinusImpE1),
            _ => None,
        },
        R::MinusImpE2 => match major()? {
            R::Raa => k(RaaPermuteMinusImpE2),
            R::MinusImpI => k(DetourMinusImpE2),
            _ => None,
        },
        _ => None,
    }
}

/// Every redex of `d` under the full rule set.
pub fn find_redexes(d: &Derivation) -> Vec<Redex> {
    find_redexes_with(d, RuleSet::FULL)
}

pub fn find_redexes_with(d: &Derivation, rules: RuleSet) -> Vec<Redex> {
    let mut out = Vec::new();
    collect(d, rules, &mut Vec::new(), &mut out);
    out
}

fn collect(d: &Derivation, rules: RuleSet, path: &mut Vec<usize>, out: &mut Vec<Redex>) {
    if let Some((kind, mirror)) = match_root(d) {
        if !(rules.literal && mirror) {
            out.push(Redex {
                path: Path(path.clone()),
                kind,
            });
        }
    }
    for (i, p) in d.premises().iter().enumerate() {
        path.push(i);
        collect(p, rules, path, out);
        path.pop();
    }
}

/// True when no rule of `rules` applies anywhere in `d`.
pub fn is_normal_with(d: &Derivation, rules: RuleSet) -> bool {
    if let Some((_, mirror)) = match_root(d) {
        if !(rules.literal && mirror) {
            return false;
        }
    }
    d.premises().iter().all(|p| is_normal_with(p, rules))
}

pub fn is_normal(d: &Derivation) -> bool {
    is_normal_with(d, RuleSet::FULL)
}

/// Rewrites the redex `r` of `d`.
pub fn reduce_at(d: &Derivation, r: &Redex) -> Result<Derivation, RewriteError> {
    let sub = d.at(&r.path.0).ok_or_else(|| RewriteError::BadPath(r.path.clone()))?;
    let no_match = || RewriteError::NoMatch {
        path: r.path.clone(),
        kind: r.kind,
    };
    match match_root(sub) {
        Some((kind, _)) if kind == r.kind => {}
        _ => return Err(no_match()),
    }
    let mut supply = LabelSupply::for_derivations([d]);
    let new = contract(sub, r.kind, &mut supply).ok_or_else(no_match)?;
    Ok(rebuild(d, &r.path.0, new))
}

/// Puts `new` at `path` and drops discharge labels, on the way back up, whose
/// only bound leaves were erased by the contraction.
fn rebuild(d: &Derivation, path: &[usize], new: Derivation) -> Derivation {
    let Some((&i, rest)) = path.split_first() else {
        return prune_discharges(&new);
    };
    let mut premises = d.premises().to_vec();
    premises[i] = rebuild(&premises[i], rest, new);
    prune_discharges(&d.with_premises(premises))
}

fn prune_discharges(d: &Derivation) -> Derivation {
    if d.discharges().is_empty() {
        return d.clone();
    }
    let slots = hypothesis_slots(d);
    let binds = |l: &Label| {
        d.premises().iter().zip(&slots).any(|(p, slot)| {
            slot.as_ref()
                .is_some_and(|s| open_assumptions(p).iter().any(|(ol, os)| ol == l && os == s))
        })
    };
    let keep: Vec<Label> = d.discharges().iter().filter(|l| binds(l)).cloned().collect();
    if keep.len() == d.discharges().len() {
        d.clone()
    } else {
        d.with_discharges(keep)
    }
}

fn stmt(d: &Derivation) -> Option<&Statement> {
    d.statement()
}

fn node(rule: RuleId, concl: Statement, premises: Vec<Derivation>, discharges: Vec<Label>) -> Derivation {
    Derivation::node(rule, Judgement::Stmt(concl), premises, discharges)
}

fn bot(l: Derivation, r: Derivation) -> Derivation {
    Derivation::node(RuleId::Falsum, Judgement::Falsum, vec![l, r], vec![])
}

/// RAA concluding `concl` over `body`, discharging whichever of `labels`
/// still bind an occurrence of `concl*`.
fn raa(concl: Statement, body: Derivation, labels: &[Label]) -> Derivation {
    let hyp = concl.conjugate();
    let open = open_assumptions(&body);
    let used: Vec<Label> = labels
        .iter()
        .filter(|l| open.iter().any(|(ol, os)| ol == *l && *os == hyp))
        .cloned()
        .collect();
    node(RuleId::Raa, concl, vec![body], used)
}

/// Builds the right-hand side for `kind` at the root of `d`.
fn contract(d: &Derivation, kind: RedexKind, supply: &mut LabelSupply) -> Option<Derivation> {
    use RedexKind::*;
    let ps = d.premises();
    Some(match kind {
        BotRaaCut => {
            let (r, other) = if *ps[0].rule() == RuleId::Raa {
                (&ps[0], &ps[1])
            } else {
                (&ps[1], &ps[0])
            };
            let alpha = stmt(other)?;
            plug(&r.premises()[0], r.discharges(), alpha, other, supply)
        }
        DetourMinusImpE1 | DetourMinusOrE1 | DetourPlusAndE1 => ps[0].premises()[0].clone(),
        DetourMinusImpE2 | DetourMinusOrE2 | DetourPlusAndE2 => ps[0].premises()[1].clone(),
        DetourMinusNegE | DetourPlusNegE => ps[0].premises()[0].clone(),
        DetourMinusAndEL | DetourMinusAndER | DetourPlusOrE => {
            let intro = &ps[0];
            let inner = &intro.premises()[0];
            let first = matches!(intro.rule(), RuleId::MinusAndI1 | RuleId::PlusOrI1);
            let branch = if first { &ps[1] } else { &ps[2] };
            plug(branch, d.discharges(), stmt(inner)?, inner, supply)
        }
        DetourPlusImpE => {
            let intro = &ps[0];
            plug(&intro.premises()[0], intro.discharges(), stmt(&ps[1])?, &ps[1], supply)
        }
        BotOverAndPair | BotOverImpPair | BotOverOrPair | BotOverNegPair => {
            let flipped = stmt(&ps[0])?.sign == Sign::Minus;
            let (pos, neg) = if flipped { (&ps[1], &ps[0]) } else { (&ps[0], &ps[1]) };
            let (a, b) = match kind {
                BotOverAndPair => {
                    let i = usize::from(*neg.rule() == RuleId::MinusAndI2);
                    (pos.premises()[i].clone(), neg.premises()[0].clone())
                }
                BotOverImpPair => {
                    let minor = &neg.premises()[0];
                    let body = plug(&pos.premises()[0], pos.discharges(), stmt(minor)?, minor, supply);
                    (body, neg.premises()[1].clone())
                }
                BotOverOrPair => {
                    let i = usize::from(*pos.rule() == RuleId::PlusOrI2);
                    (pos.premises()[0].clone(), neg.premises()[i].clone())
                }
                _ => (pos.premises()[0].clone(), neg.premises()[0].clone()),
            };
            if flipped {
                bot(b, a)
            } else {
                bot(a, b)
            }
        }
        _ => permute(d, kind, supply)?,
    })
}

/// The RAA permutations: the elimination moves into the RAA body and a new
/// RAA concludes the original conclusion.
fn permute(d: &Derivation, kind: RedexKind, supply: &mut LabelSupply) -> Option<Derivation> {
    use RedexKind::*;
    let concl = stmt(d)?.clone();
    let ps = d.premises();
    let major = &ps[0];
    let gamma_star = stmt(major)?.conjugate();
    let body = &major.premises()[0];
    let hyp = concl.conjugate();
    let y = supply.fresh(&Label::raw("r"));
    let leaf_y = Derivation::assume(y.clone(), hyp.clone());
    let gp = gamma_star.prop.clone();
    let piece = match kind {
        RaaPermutePlusAndE1 => node(RuleId::MinusAndI1, gamma_star.clone(), vec![leaf_y], vec![]),
        RaaPermutePlusAndE2 => node(RuleId::MinusAndI2, gamma_star.clone(), vec![leaf_y], vec![]),
        RaaPermuteMinusOrE1 => node(RuleId::PlusOrI1, gamma_star.clone(), vec![leaf_y], vec![]),
        RaaPermuteMinusOrE2 => node(RuleId::PlusOrI2, gamma_star.clone(), vec![leaf_y], vec![]),
        RaaPermuteMinusNegE => node(RuleId::PlusNegI, gamma_star.clone(), vec![leaf_y], vec![]),
        RaaPermutePlusNegE => node(RuleId::MinusNegI, gamma_star.clone(), vec![leaf_y], vec![]),
        RaaPermutePlusImpE => node(
            RuleId::MinusImpI,
            gamma_star.clone(),
            vec![ps[1].clone(), leaf_y],
            vec![],
        ),
        RaaPermuteMinusImpE1 => {
            let (a, b) = prop_imp(&gp)?;
            let x = supply.fresh(&Label::raw("s"));
            let clash = bot(Derivation::assume(x.clone(), Statement::plus(a.clone())), leaf_y);
            let vacuous = node(RuleId::Raa, Statement::plus(b.clone()), vec![clash], vec![]);
            node(RuleId::PlusImpI, gamma_star.clone(), vec![vacuous], vec![x])
        }
        RaaPermuteMinusImpE2 => node(RuleId::PlusImpI, gamma_star.clone(), vec![leaf_y], vec![]),
        RaaPermuteMinusAndE | RaaPermutePlusOrE => {
            let (a, b, sign, intro) = if kind == RaaPermuteMinusAndE {
                let (a, b) = prop_and(&gp)?;
                (a, b, Sign::Minus, RuleId::PlusAndI)
            } else {
                let (a, b) = prop_or(&gp)?;
                (a, b, Sign::Plus, RuleId::MinusOrI)
            };
            let side = |branch: &Derivation, p: &Prop| {
                // the branch assumed `sign p`; a RAA now concludes its conjugate
                let concl = Statement::new(sign.flip(), p.clone());
                raa(concl, bot(branch.clone(), leaf_y.clone()), d.discharges())
            };
            let left = side(&ps[1], a);
            let right = side(&ps[2], b);
            node(intro, gamma_star.clone(), vec![left, right], vec![])
        }
        _ => return None,
    };
    let new_body = plug(body, major.discharges(), &gamma_star, &piece, supply);
    Some(raa(concl, new_body, &[y]))
}
