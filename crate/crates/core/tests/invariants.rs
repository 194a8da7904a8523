use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use bilat::basicsys::{load_basic_system, BasicSystem};
use bilat::derivation::enumerate::{enumerate_in, Generator, Universe};
use bilat::derivation::format::{parse_derivation, print_derivation, print_derivation_compact};
use bilat::derivation::labels::{canonical_binders, freshen_bound};
use bilat::derivation::{alpha_eq, check_derivation, is_closed, open_assumptions, substitute, Derivation, LabelSupply};
use bilat::oracle::{entails, satisfies, sequent_holds, Valuation};
use bilat::rewrite::sweep::subject_reduction_violation;
use bilat::rewrite::{find_redexes, is_normal, normalize, replay, RuleSet, Strategy as Order};
use bilat::syntax::{parse_prop, parse_statement, Atom, Judgement, Prop, Sign, Statement};
use bilat::validity::{Budget, Certifier, Status};
use proptest::prelude::*;

fn atoms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|n| Atom::new(n).unwrap()).collect()
}

fn system_a() -> &'static BasicSystem {
    static B: OnceLock<BasicSystem> = OnceLock::new();
    B.get_or_init(|| load_basic_system("+a. -c.").unwrap())
}

/// Every derivation over `{p, q}` with at most 5 nodes.
fn corpus_pq() -> &'static [Derivation] {
    static C: OnceLock<Vec<Derivation>> = OnceLock::new();
    C.get_or_init(|| enumerate_in(&BasicSystem::empty(), Universe::new(atoms(&["p", "q"]), 3), 5))
}

/// Every derivation over `{a, c}` and `+a. -c.` with at most 5 nodes.
fn corpus_ac() -> &'static [Derivation] {
    static C: OnceLock<Vec<Derivation>> = OnceLock::new();
    C.get_or_init(|| enumerate_in(system_a(), Universe::new(atoms(&["a", "c"]), 3), 5))
}

/// Closed derivations of `+a` with at most 4 nodes.
fn closed_plus_a() -> &'static [Derivation] {
    static C: OnceLock<Vec<Derivation>> = OnceLock::new();
    C.get_or_init(|| {
        let goal = Judgement::Stmt(Statement::plus(Prop::atom("a")));
        Generator::closed(system_a(), Universe::new(atoms(&["a", "c"]), 3)).collect_up_to(&goal, 4)
    })
}

/// Closed derivations of a handful of goals, at most 5 nodes.
fn closed_corpus() -> &'static [Derivation] {
    static C: OnceLock<Vec<Derivation>> = OnceLock::new();
    C.get_or_init(|| {
        let mut gen = Generator::closed(system_a(), Universe::new(atoms(&["a", "c"]), 3));
        let mut out = Vec::new();
        for g in ["+a", "-a", "+c", "-c", "+~c", "-(a & c)", "+(a | c)", "+(c -> a)"] {
            let goal = Judgement::Stmt(parse_statement(g).unwrap());
            out.extend(gen.collect_up_to(&goal, 5));
        }
        out
    })
}

fn arb_prop() -> impl Strategy<Value = Prop> {
    let leaf = prop_oneof![Just(Prop::atom("p")), Just(Prop::atom("q")), Just(Prop::atom("r"))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Prop::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Prop::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Prop::imp(l, r)),
            inner.prop_map(Prop::not),
        ]
    })
}

fn arb_statement() -> impl Strategy<Value = Statement> {
    (any::<bool>(), arb_prop()).prop_map(|(plus, p)| Statement::new(if plus { Sign::Plus } else { Sign::Minus }, p))
}

fn arb_valuation() -> impl Strategy<Value = Valuation> {
    (any::<bool>(), any::<bool>(), any::<bool>())
        .prop_map(|(p, q, r)| atoms(&["p", "q", "r"]).into_iter().zip([p, q, r]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn prop_print_parse_round_trip(p in arb_prop()) {
        prop_assert_eq!(parse_prop(&p.to_string()).unwrap(), p.clone());
        let s = Statement::plus(p);
        prop_assert_eq!(parse_statement(&s.to_wrapped()).unwrap(), s.clone());
        prop_assert_eq!(parse_statement(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn conjugate_flips_satisfaction(s in arb_statement(), v in arb_valuation()) {
        prop_assert_eq!(satisfies(&s.conjugate(), &v).unwrap(), !satisfies(&s, &v).unwrap());
        prop_assert_eq!(s.conjugate().conjugate(), s);
    }

    #[test]
    fn entailment_is_reflexive_and_monotone(s in arb_statement(), t in arb_statement(), c in arb_statement()) {
        let b = BasicSystem::empty();
        prop_assert!(entails(std::slice::from_ref(&s), &Judgement::Stmt(s.clone()), &b));
        let concl = Judgement::Stmt(c);
        if entails(std::slice::from_ref(&s), &concl, &b) {
            prop_assert!(entails(&[s, t], &concl, &b));
        }
    }

    #[test]
    fn derivation_print_parse_round_trip(i in any::<prop::sample::Index>()) {
        let d = i.get(corpus_ac());
        prop_assert_eq!(&parse_derivation(&print_derivation(d)).unwrap(), d);
        prop_assert_eq!(&parse_derivation(&print_derivation_compact(d)).unwrap(), d);
    }

    #[test]
    fn alpha_renaming_is_invisible(i in any::<prop::sample::Index>()) {
        let d = i.get(corpus_pq());
        let mut supply = LabelSupply::for_derivations([d]);
        let renamed = freshen_bound(d, &mut supply);
        prop_assert!(alpha_eq(d, &renamed));
        prop_assert!(alpha_eq(d, &canonical_binders(d)));
        prop_assert!(check_derivation(&renamed, &BasicSystem::empty()).is_ok());
    }

    #[test]
    fn contraction_keeps_subject_and_truth(i in any::<prop::sample::Index>(), use_ac in any::<bool>()) {
        let (corpus, b) = if use_ac { (corpus_ac(), system_a().clone()) } else { (corpus_pq(), BasicSystem::empty()) };
        let d = i.get(corpus);
        for r in find_redexes(d) {
            prop_assert_eq!(subject_reduction_violation(d, &r, &b), None);
            let out = bilat::rewrite::reduce_at(d, &r).unwrap();
            prop_assert!(sequent_holds(&out, &b));
        }
    }

    #[test]
    fn both_strategies_reach_a_normal_form(i in any::<prop::sample::Index>()) {
        let d = i.get(corpus_pq());
        for strategy in [Order::Innermost, Order::Outermost] {
            let n = normalize(d, strategy, 200);
            prop_assert!(!n.exhausted);
            prop_assert!(is_normal(&n.result));
            prop_assert_eq!(normalize(&n.result, strategy, 200).trace.steps.len(), 0);
            let replayed = replay(d, &n.trace.redexes()).unwrap();
            prop_assert_eq!(replayed.final_derivation(), &n.result);
            prop_assert_eq!(n.result.conclusion(), d.conclusion());
        }
    }

    #[test]
    fn substitution_closes_the_bound_assumption(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let d = i.get(corpus_ac());
        let image = j.get(closed_plus_a());
        let plus_a = Statement::plus(Prop::atom("a"));
        let open = open_assumptions(d);
        let target = open.iter().find(|(_, s)| *s == plus_a).map(|(l, _)| l.clone());
        prop_assume!(target.is_some());
        let l = target.unwrap();
        let out = substitute(d, &BTreeMap::from([(l.clone(), image.clone())])).unwrap();
        prop_assert!(check_derivation(&out, system_a()).is_ok());
        prop_assert_eq!(out.conclusion(), d.conclusion());
        let before: BTreeSet<_> = open.into_iter().filter(|(m, _)| *m != l).collect();
        let after: BTreeSet<_> = open_assumptions(&out).into_iter().collect();
        prop_assert_eq!(after, before);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certified_conclusions_are_consequences(i in any::<prop::sample::Index>(), literal in any::<bool>()) {
        let d = i.get(closed_corpus());
        prop_assert!(is_closed(d));
        let rules = if literal { RuleSet::LITERAL } else { RuleSet::FULL };
        let budget = Budget::new(3, 200);
        let v = Certifier::new(system_a(), budget).unwrap().with_rules(rules).certify(d).unwrap();
        if v.status == Status::Certified {
            prop_assert!(sequent_holds(d, system_a()));
        }
        let w = Certifier::new(system_a(), budget.doubled()).unwrap().with_rules(rules).certify(d).unwrap();
        let flipped = matches!(
            (v.status, w.status),
            (Status::Certified, Status::Refuted) | (Status::Refuted, Status::Certified)
        );
        prop_assert!(!flipped, "{} then {}", v.status, w.status);
        if v.status == Status::Refuted {
            prop_assert_eq!(w.status, Status::Refuted);
        }
    }
}

#[test]
fn oracle_catches_a_corrupted_elimination() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corrupted_and_elim.deriv");
    let bad = parse_derivation(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(check_derivation(&bad, &BasicSystem::empty()).is_err());
    let mut corpus = corpus_pq()[..200].to_vec();
    corpus.push(bad.clone());
    let report = bilat::oracle::check_corpus(&corpus, &BasicSystem::empty());
    assert_eq!(report.violations, vec![bad]);
}
