//! Checks that a few inference rules preserve validity over `+a. +b.`.

use bilat::basicsys::load_basic_system;
use bilat::derivation::RuleId;
use bilat::validity::{check_rule_preservation, Budget, PreservationReport};

fn main() {
    let b = load_basic_system("+a. +b.").unwrap();
    println!("{}", PreservationReport::header());
    for rule in [RuleId::PlusAndI, RuleId::PlusOrI1, RuleId::PlusAndE1, RuleId::Raa] {
        let r = check_rule_preservation(&b, &rule, Budget::new(4, 1_000)).unwrap();
        println!("{}", r.row());
    }
}
