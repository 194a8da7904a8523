//! Label bookkeeping: fresh names, capture-aware replacement of open
//! assumptions, binder renaming and alpha-equivalence.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use super::{hypothesis_slots, Derivation, Label, RuleId};
use crate::syntax::Statement;

/// Every label occurring in `d`, at leaves or in discharge lists.
pub fn all_labels(d: &Derivation) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    let mut stack = vec![d];
    while let Some(x) = stack.pop() {
        if let RuleId::Assumption(l) = x.rule() {
            out.insert(l.clone());
        }
        out.extend(x.discharges().iter().cloned());
        stack.extend(x.premises());
    }
    out
}

/// Hands out labels that collide with nothing seen so far.
#[derive(Debug, Default, Clone)]
pub struct LabelSupply {
    used: HashSet<Label>,
}

impl LabelSupply {
    pub fn for_derivations<'a>(ds: impl IntoIterator<Item = &'a Derivation>) -> LabelSupply {
        let mut supply = LabelSupply::default();
        for d in ds {
            supply.reserve(d);
        }
        supply
    }

    pub fn reserve(&mut self, d: &Derivation) {
        self.used.extend(all_labels(d));
    }

    /// `x` -> `x1`, `x2`, ...; trailing digits of the base are dropped first.
    pub fn fresh(&mut self, base: &Label) -> Label {
        let trimmed = base.as_str().trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if super::is_identifier(trimmed) { trimmed } else { "h" };
        let mut n = 1usize;
        loop {
            let candidate = Label(Arc::from(format!("{stem}{n}").as_str()));
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
            n += 1;
        }
    }
}

/// Replaces every open leaf `(l, s)` with `target(l, s)` by `make(l, s)`.
///
/// Leaves bound by a binder inside `d` are left alone. Untouched subtrees keep
/// their sharing.
pub fn replace_free(
    d: &Derivation,
    target: &dyn Fn(&Label, &Statement) -> bool,
    make: &mut dyn FnMut(&Label, &Statement) -> Derivation,
) -> Derivation {
    let mut shadow = Vec::new();
    replace_rec(d, target, make, &mut shadow)
}

fn replace_rec(
    d: &Derivation,
    target: &dyn Fn(&Label, &Statement) -> bool,
    make: &mut dyn FnMut(&Label, &Statement) -> Derivation,
    shadow: &mut Vec<(Label, Statement)>,
) -> Derivation {
    if let RuleId::Assumption(l) = d.rule() {
        if let Some(s) = d.statement() {
            if target(l, s) && !shadow.iter().any(|(sl, ss)| sl == l && ss == s) {
                return make(l, s);
            }
        }
        return d.clone();
    }
    let slots = hypothesis_slots(d);
    let mut changed = false;
    let mut premises = Vec::with_capacity(d.premises().len());
    for (p, slot) in d.premises().iter().zip(&slots) {
        let mark = shadow.len();
        if let Some(s) = slot {
            for l in d.discharges() {
                shadow.push((l.clone(), s.clone()));
            }
        }
        let np = replace_rec(p, target, make, shadow);
        shadow.truncate(mark);
        changed |= !Arc::ptr_eq(&np.0, &p.0);
        premises.push(np);
    }
    if changed {
        d.with_premises(premises)
    } else {
        d.clone()
    }
}

/// Renames open leaves `(old, stmt)` to `(new, stmt)`.
pub fn rename_free(d: &Derivation, old: &Label, stmt: &Statement, new: &Label) -> Derivation {
    replace_free(d, &|l, s| l == old && s == stmt, &mut |_, s| {
        Derivation::assume(new.clone(), s.clone())
    })
}

/// Renames every binder label satisfying `pick`, top-down, using `name` to
/// choose the replacement, and renames the leaves each binder binds.
pub fn rename_binders(
    d: &Derivation,
    pick: &dyn Fn(&Label) -> bool,
    name: &mut dyn FnMut(&Label) -> Label,
) -> Derivation {
    if d.is_assumption() {
        return d.clone();
    }
    let renames: Vec<(Label, Label)> = d
        .discharges()
        .iter()
        .filter(|l| pick(l))
        .map(|l| (l.clone(), name(l)))
        .collect();
    let slots = hypothesis_slots(d);
    let mut premises = Vec::with_capacity(d.premises().len());
    let mut changed = !renames.is_empty();
    for (p, slot) in d.premises().iter().zip(&slots) {
        let mut np = p.clone();
        if let Some(s) = slot {
            for (old, new) in &renames {
                np = rename_free(&np, old, s, new);
            }
        }
        let np = rename_binders(&np, pick, name);
        changed |= !Arc::ptr_eq(&np.0, &p.0);
        premises.push(np);
    }
    if !changed {
        return d.clone();
    }
    let discharges = d
        .discharges()
        .iter()
        .map(|l| {
            renames
                .iter()
                .find(|(old, _)| old == l)
                .map_or_else(|| l.clone(), |(_, new)| new.clone())
        })
        .collect();
    Derivation::node(d.rule().clone(), d.conclusion().clone(), premises, discharges)
}

/// Gives every binder in `d` a label not yet handed out by `supply`.
pub fn freshen_bound(d: &Derivation, supply: &mut LabelSupply) -> Derivation {
    rename_binders(d, &|_| true, &mut |l| supply.fresh(l))
}

/// Replaces the open leaves `(l, stmt)` of `host` with `l` in `targets` by
/// `piece`, which may itself be open.
///
/// Host binders whose label is free in `piece` are renamed first so nothing in
/// `piece` gets captured. The first copy keeps its own binders, later copies
/// get fresh ones.
pub fn plug(
    host: &Derivation,
    targets: &[Label],
    stmt: &Statement,
    piece: &Derivation,
    supply: &mut LabelSupply,
) -> Derivation {
    let free: BTreeSet<Label> = super::open_assumptions(piece).into_iter().map(|(l, _)| l).collect();
    let host = if free.is_empty() {
        host.clone()
    } else {
        rename_binders(host, &|l| free.contains(l), &mut |l| supply.fresh(l))
    };
    let mut copies = 0usize;
    replace_free(&host, &|l, s| s == stmt && targets.contains(l), &mut |_, _| {
        copies += 1;
        if copies == 1 {
            piece.clone()
        } else {
            freshen_bound(piece, supply)
        }
    })
}

/// Binder labels replaced by positional names; free labels untouched.
pub fn canonical_binders(d: &Derivation) -> Derivation {
    let mut k = 0usize;
    rename_binders(d, &|_| true, &mut |_| {
        k += 1;
        Label::raw(&format!("_b{k}"))
    })
}

/// Equality up to renaming of bound labels.
pub fn alpha_eq(a: &Derivation, b: &Derivation) -> bool {
    a == b || canonical_binders(a) == canonical_binders(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basicsys::BasicSystem;
    use crate::derivation::{check_derivation, open_assumptions};
    use crate::syntax::{parse_statement, Judgement};

    fn st(s: &str) -> Statement {
        parse_statement(s).unwrap()
    }

    fn lab(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    fn imp_id(label: &str) -> Derivation {
        Derivation::node(
            RuleId::PlusImpI,
            Judgement::Stmt(st("+(p -> p)")),
            vec![Derivation::assume(lab(label), st("+p"))],
            vec![lab(label)],
        )
    }

    #[test]
    fn fresh_labels_avoid_used_ones() {
        let mut supply = LabelSupply::for_derivations([&imp_id("x1")]);
        assert_eq!(supply.fresh(&lab("x")), lab("x2"));
        assert_eq!(supply.fresh(&lab("x7")), lab("x3"));
    }

    #[test]
    fn freshening_preserves_binding() {
        let d = imp_id("x");
        let mut supply = LabelSupply::for_derivations([&d]);
        let f = freshen_bound(&d, &mut supply);
        assert_ne!(f, d);
        assert!(alpha_eq(&f, &d));
        check_derivation(&f, &BasicSystem::empty()).unwrap();
        assert!(open_assumptions(&f).is_empty());
    }

    #[test]
    fn replace_respects_shadowing() {
        // +p -> (p -> p) where the inner binder rebinds x
        let inner = imp_id("x");
        let outer = Derivation::node(
            RuleId::PlusImpI,
            Judgement::Stmt(st("+(q -> p -> p)")),
            vec![inner.clone()],
            vec![],
        );
        let replaced = replace_free(&outer, &|l, _| l.as_str() == "x", &mut |_, _| {
            panic!("bound leaf must not be replaced")
        });
        assert_eq!(replaced, outer);
    }

    #[test]
    fn plug_avoids_capture() {
        // host: +(q -> q) binding y:+q, with a free leaf x:+p underneath via +&E1
        let host = Derivation::node(
            RuleId::PlusImpI,
            Judgement::Stmt(st("+(q -> p)")),
            vec![Derivation::node(
                RuleId::PlusAndE1,
                Judgement::Stmt(st("+p")),
                vec![Derivation::node(
                    RuleId::PlusAndI,
                    Judgement::Stmt(st("+(p & q)")),
                    vec![
                        Derivation::assume(lab("x"), st("+p")),
                        Derivation::assume(lab("y"), st("+q")),
                    ],
                    vec![],
                )],
                vec![],
            )],
            vec![lab("y")],
        );
        // the piece depends on a free y:+q that must stay free
        let piece = Derivation::node(
            RuleId::PlusAndE2,
            Judgement::Stmt(st("+p")),
            vec![Derivation::node(
                RuleId::PlusAndI,
                Judgement::Stmt(st("+(q & p)")),
                vec![
                    Derivation::assume(lab("y"), st("+q")),
                    Derivation::assume(lab("z"), st("+p")),
                ],
                vec![],
            )],
            vec![],
        );
        let mut supply = LabelSupply::for_derivations([&host, &piece]);
        let out = plug(&host, &[lab("x")], &st("+p"), &piece, &mut supply);
        let seq = check_derivation(&out, &BasicSystem::empty()).unwrap();
        assert_eq!(seq.assumptions, vec![st("+q"), st("+p")]);
        let open = open_assumptions(&out);
        assert!(open.contains(&(lab("y"), st("+q"))));
    }

    #[test]
    fn alpha_eq_distinguishes_free_labels() {
        let a = Derivation::assume(lab("x"), st("+p"));
        let b = Derivation::assume(lab("y"), st("+p"));
        assert!(!alpha_eq(&a, &b));
        assert!(alpha_eq(&imp_id("x"), &imp_id("y")));
    }
}
