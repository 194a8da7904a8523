//! Compares atom heights with the level-by-level evaluator on random systems.

use bilat::basicsys::{height, random_system};
use bilat::oracle::heights_by_levels;
use rand::SeedableRng;

fn main() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..3 {
        let b = random_system(&mut rng, 5, 5, true);
        println!("{}", b.save().trim_end().replace('\n', " "));
        for (a, level) in heights_by_levels(&b) {
            let h = height(&b, &a).ok();
            println!("  {a}: height {h:?}, level {level:?}");
        }
    }
}
