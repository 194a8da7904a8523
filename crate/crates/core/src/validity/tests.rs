use super::*;
use crate::basicsys::load_basic_system;
use crate::derivation::format::parse_derivation;
use crate::derivation::tests::excluded_middle;

fn d(text: &str) -> Derivation {
    parse_derivation(text).unwrap()
}

fn sys(text: &str) -> BasicSystem {
    load_basic_system(text).unwrap()
}

fn atom(a: &str) -> Atom {
    Atom::new(a).unwrap()
}

#[test]
fn intro_over_basics_is_canonical_at_once() {
    let b = sys("+a. +b.");
    let x = d("(+&I +(a & b) (basic:0 +a) (basic:1 +b))");
    let c = classify_canonical(&x, &b, 10).unwrap();
    assert!(matches!(c.form, CanonicalForm::ByIntro { rule: RuleId::PlusAndI, ref parts } if parts.len() == 2));
    assert!(c.trace.steps.is_empty());
}

#[test]
fn excluded_middle_is_raa_form() {
    let c = classify_canonical(&excluded_middle(), &BasicSystem::empty(), 10).unwrap();
    let CanonicalForm::ByRaa { discharged, .. } = c.form else {
        panic!("{:?}", c.form)
    };
    assert_eq!(discharged.to_wrapped(), "-(p | ~p)");
    assert!(c.trace.steps.is_empty());
}

#[test]
fn clash_of_basic_and_axiom_is_bot_normal() {
    let b = sys("+a. -a.");
    let x = d("(bot _|_ (basic:0 +a) (basic:1 -a))");
    let c = classify_canonical(&x, &b, 10).unwrap();
    assert!(matches!(c.form, CanonicalForm::BotNormal(_)));
}

#[test]
fn classification_rejects_open_input() {
    let x = d("(assume x +p)");
    assert_eq!(
        classify_canonical(&x, &BasicSystem::empty(), 10).unwrap_err(),
        ValidityError::Open
    );
}

#[test]
fn inconsistent_systems_are_refused() {
    let b = sys("+a. -a.");
    assert!(matches!(
        Certifier::new(&b, Budget::default()),
        Err(ValidityError::Inconsistent(a)) if a == atom("a")
    ));
}

#[test]
fn sets_for_an_asserted_atom() {
    let (plus, minus) = kleene_validity_sets(&sys("+a."), &atom("a"), Budget::new(3, 100)).unwrap();
    assert!(plus.contains(&d("(basic:0 +a)")));
    assert!(minus.members.iter().all(|m| !matches!(m.rule(), RuleId::Basic(_))));
    assert!(minus.is_empty());
}

#[test]
fn sets_for_a_refuted_atom() {
    let b = sys("-a.");
    let (plus, minus) = kleene_validity_sets(&b, &atom("a"), Budget::new(5, 100)).unwrap();
    assert!(minus.contains(&d("(basic:0 -a)")));
    // +a is not a consequence of b, so nothing closed concludes it
    assert!(plus.is_empty());
    let raa = d("(raa -a :discharge h (bot _|_ (assume h +a) (basic:0 -a)))");
    assert!(minus.contains(&raa));
}

#[test]
fn empty_system_has_no_atomic_derivations() {
    for bound in 1..=5 {
        let (plus, minus) = kleene_validity_sets(&BasicSystem::empty(), &atom("p"), Budget::new(bound, 100)).unwrap();
        assert!(plus.is_empty() && minus.is_empty());
    }
}

#[test]
fn basic_derivation_is_certified() {
    let v = certify(&d("(basic:0 +a)"), &sys("+a."), Budget::default()).unwrap();
    assert_eq!(v.status, Status::Certified);
    assert!(!v.vacuous);
    assert_eq!(v.report_line("a.deriv"), "VERDICT Certified bound=7,10000 a.deriv");
}

#[test]
fn excluded_middle_is_vacuously_certified() {
    let v = certify(&excluded_middle(), &BasicSystem::empty(), Budget::new(9, 10_000)).unwrap();
    assert_eq!(v.status, Status::Certified);
    assert!(v.vacuous);
}

#[test]
fn normal_non_canonical_is_refuted_under_literal_rules() {
    let b = sys("+a.");
    let x = d("(+&E1 +a (+&I +(a & a) (basic:0 +a) (basic:0 +a)))");
    let mut c = Certifier::new(&b, Budget::new(4, 100))
        .unwrap()
        .with_rules(RuleSet::LITERAL);
    let v = c.certify(&x).unwrap();
    assert_eq!(v.status, Status::Refuted);
    assert_eq!(v.witness, Some(Witness::Counterexample(x.clone())));
    // the full rule set has the detour, and the reduct is certified
    let v = certify(&x, &b, Budget::new(4, 100)).unwrap();
    assert_eq!(v.status, Status::Certified);
    assert!(matches!(v.witness, Some(Witness::Reduction(ref t)) if t.steps.len() == 1));
}

#[test]
fn open_derivations_by_substitution() {
    let x = d("(+&I +(a & a) (assume x +a) (assume y +a))");
    let v = certify(&x, &sys("+a."), Budget::new(3, 100)).unwrap();
    assert_eq!(v.status, Status::Certified);
    assert!(!v.vacuous);
    let v = certify(&x, &BasicSystem::empty(), Budget::new(3, 100)).unwrap();
    assert_eq!(v.status, Status::Certified);
    assert!(v.vacuous);
}

#[test]
fn implication_intro_certified_through_its_open_part() {
    let b = sys("+a. +b <- a.");
    let x = d("(+->I +(a -> b) :discharge x (basic:1 +b (assume x +a)))");
    let v = certify(&x, &b, Budget::new(3, 100)).unwrap();
    assert_eq!(v.status, Status::Certified, "{:?}", v.note);
}

#[test]
fn fixed_point_is_a_fixed_point() {
    let b = sys("+a. -c. +b <- a.");
    let mut c = Certifier::new(&b, Budget::new(4, 200)).unwrap();
    for name in ["a", "b", "c"] {
        let p = Prop::Atom(atom(name));
        let run = c.kleene(&p);
        assert!(run.iteration.converged);
        assert!(run.iteration.monotonicity_violations().is_empty());
        assert!(run.iteration.steps() <= run.plus_universe.len() + 1);
        let minus = c.apply_operator(&Statement::minus(p.clone()), &run.plus.members);
        assert_eq!(minus, run.minus.members, "duality for {name}");
        let plus = c.apply_operator(&Statement::plus(p.clone()), &run.minus.members);
        assert_eq!(plus, run.plus.members, "fixed point for {name}");
    }
}

#[test]
fn and_intro_preserves_validity() {
    let r = check_rule_preservation(&sys("+a. +b."), &RuleId::PlusAndI, Budget::new(4, 200)).unwrap();
    assert!(r.tuples > 0);
    assert_eq!(r.certified, r.tuples);
    assert!(r.refuted.is_empty());
}

#[test]
fn falsum_rule_has_no_valid_premise_pairs() {
    let r = check_rule_preservation(&sys("+a. +b."), &RuleId::Falsum, Budget::new(4, 200)).unwrap();
    assert_eq!(r.tuples, 0);
    assert!(r.row().ends_with("(vacuous)"));
}

#[test]
fn doubled_budget() {
    assert_eq!(Budget::new(3, 10).doubled(), Budget::new(6, 20));
    assert_eq!(Budget::default().to_string(), "7,10000");
}
