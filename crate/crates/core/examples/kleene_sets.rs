//! Computes the validity sets of each atom of a small basic system.

use bilat::basicsys::load_basic_system;
use bilat::derivation::format::print_derivation_compact;
use bilat::syntax::Prop;
use bilat::validity::{Budget, Certifier};

fn main() {
    let b = load_basic_system("+a. +b <- a. -c.").unwrap();
    let mut c = Certifier::new(&b, Budget::new(5, 1_000)).unwrap();
    for a in b.atoms() {
        let run = c.kleene(&Prop::Atom(a.clone()));
        println!(
            "{a}: universe {}/{}, {} step(s), |+| = {}, |-| = {}",
            run.plus_universe.len(),
            run.minus_universe.len(),
            run.iteration.steps(),
            run.plus.len(),
            run.minus.len()
        );
        for m in run.plus.members.iter().chain(&run.minus.members).take(3) {
            println!("  {}", print_derivation_compact(m));
        }
    }
}
