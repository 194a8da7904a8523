//! Normalizes a detour, exports the trace and replays it from text.

use bilat::derivation::format::parse_derivation;
use bilat::rewrite::{normalize, parse_trace, Strategy};

fn main() {
    let d = parse_derivation(include_str!("../fixtures/detour.deriv")).unwrap();
    let n = normalize(&d, Strategy::Innermost, 100);
    let text = n.trace.export();
    print!("{text}");

    let replayed = parse_trace(&text).unwrap().verify(&d).unwrap();
    assert_eq!(replayed.final_derivation(), &n.result);
    println!("replayed {} step(s)", replayed.steps.len());
}
