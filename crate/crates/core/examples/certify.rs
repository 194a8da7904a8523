//! Certifies a few derivations and prints their verdict lines.

use bilat::basicsys::{load_basic_system, BasicSystem};
use bilat::derivation::format::parse_derivation;
use bilat::rewrite::RuleSet;
use bilat::validity::{Budget, Certifier};

fn main() {
    let em = parse_derivation(include_str!("../fixtures/excluded_middle.deriv")).unwrap();
    for bound in [5, 7, 9] {
        let mut c = Certifier::new(&BasicSystem::empty(), Budget::new(bound, 10_000)).unwrap();
        let v = c.certify(&em).unwrap();
        println!("{} vacuous={}", v.report_line("excluded_middle"), v.vacuous);
    }

    let b = load_basic_system("+a.").unwrap();
    let detour = parse_derivation(include_str!("../fixtures/literal_refuted.deriv")).unwrap();
    for (name, rules) in [("full", RuleSet::FULL), ("literal", RuleSet::LITERAL)] {
        let mut c = Certifier::new(&b, Budget::new(5, 1_000)).unwrap().with_rules(rules);
        let v = c.certify(&detour).unwrap();
        println!("{} ({name} rules)", v.report_line("literal_refuted"));
    }
}
