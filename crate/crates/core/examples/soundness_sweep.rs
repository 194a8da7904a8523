//! Runs the classical soundness and normalization sweeps on a small corpus.

use bilat::basicsys::BasicSystem;
use bilat::derivation::enumerate::Universe;
use bilat::oracle::soundness_sweep;
use bilat::rewrite::sweep::normalization_sweep;
use bilat::rewrite::{RuleSet, Strategy};
use bilat::syntax::Atom;

fn main() {
    let b = BasicSystem::empty();
    let atoms = [Atom::new("p").unwrap(), Atom::new("q").unwrap()];
    let s = soundness_sweep(&b, &atoms, 5, 3);
    println!(
        "soundness: {} derivations, {} violations",
        s.checked,
        s.violations.len()
    );

    let n = normalization_sweep(&b, Universe::new(atoms, 3), 5, Strategy::Innermost, 200, RuleSet::FULL);
    println!(
        "normalization: {} derivations, {} exhausted, max {} step(s)",
        n.checked,
        n.exhausted.len(),
        n.max_steps
    );
}
