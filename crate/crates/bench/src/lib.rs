//! Benchmark fixtures shared by the criterion suites.

use ghml_core::{ExecWord, KripkeStructure, Label, Segment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A deterministic pseudo-random Kripke structure with `states` states and
/// `fanout` transitions per state over a small word alphabet.
pub fn pseudo_random_structure(states: usize, fanout: usize, seed: u64) -> KripkeStructure {
    let words = [
        ExecWord::single(Segment::dense(Label::new("a").unwrap())),
        ExecWord::single(Segment::point(Label::new("a").unwrap())),
        ExecWord::single(Segment::point(Label::new("b").unwrap())),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ks = KripkeStructure::new("bench");
    for i in 0..states {
        ks.add_state(format!("s{i}"));
    }
    for s in 0..states {
        for _ in 0..fanout {
            let t = rng.gen_range(0..states);
            let w = &words[rng.gen_range(0..words.len())];
            ks.add_transition(s, w.clone(), t);
        }
    }
    ks.set_initial(0);
    ks
}
