//! Parses the excluded-middle derivation, checks it and prints its sequent.

use bilat::basicsys::BasicSystem;
use bilat::derivation::check_derivation;
use bilat::derivation::format::{parse_derivation, print_derivation};

const EXCLUDED_MIDDLE: &str = include_str!("../fixtures/excluded_middle.deriv");

fn main() {
    let d = parse_derivation(EXCLUDED_MIDDLE).expect("fixture parses");
    let sequent = check_derivation(&d, &BasicSystem::empty()).expect("fixture checks");
    println!("{}", print_derivation(&d));
    println!("{sequent}");

    let dangling = parse_derivation("(+->I +(p -> p) :discharge z (assume x +p))").unwrap();
    match check_derivation(&dangling, &BasicSystem::empty()) {
        Ok(s) => println!("unexpectedly accepted: {s}"),
        Err(e) => println!("rejected: {e}"),
    }
}
