mod common;

use std::collections::BTreeSet;

use common::*;
use ghml_core::{concat, equivalent, normalize, realize, splits, ExecWord, Segment};
use proptest::prelude::*;
use rand::Rng;

fn all_segments(labels: &[&str]) -> Vec<Segment> {
    labels.iter().flat_map(|l| [Segment::dense(label(l)), Segment::point(label(l))]).collect()
}

fn all_raw(labels: &[&str], max_len: usize) -> Vec<Vec<Segment>> {
    let segs = all_segments(labels);
    let mut out = Vec::new();
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Segment>| {
                segs.iter().map(move |s| {
                    let mut v = w.clone();
                    v.push(s.clone());
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn all_canonical(labels: &[&str], max_len: usize) -> Vec<ExecWord> {
    let set: BTreeSet<ExecWord> = all_raw(labels, max_len).into_iter().map(|r| normalize(r).unwrap()).collect();
    set.into_iter().collect()
}

#[test]
fn normalize_is_confluent_and_idempotent_exhaustively() {
    let mut rng = rng(11);
    for raw in all_raw(&["a", "b"], 8) {
        let w = normalize(raw.clone()).unwrap();
        assert_eq!(normalize(w.segments().to_vec()).unwrap(), w);
        for _ in 0..2 {
            assert_eq!(merge_oracle(&mut rng, &raw), w.segments(), "{raw:?}");
        }
    }
}

#[test]
fn splits_match_exhaustive_enumeration() {
    let labels = ["a", "b"];
    let candidates = all_canonical(&labels, 4);
    for w in all_canonical(&labels, 3) {
        let computed = splits(&w);
        for (w1, w2) in &computed {
            assert_eq!(concat(w1, w2), w);
        }
        assert_eq!(computed, splits_oracle(&w), "{w:?}");
        for w1 in &candidates {
            for w2 in &candidates {
                if w1.len() + w2.len() <= w.len() + 1 && concat(w1, w2) == w {
                    assert!(computed.contains(&(w1.clone(), w2.clone())), "{w:?} = {w1:?} {w2:?}");
                }
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Searches all bijections between the realizations for one that preserves
/// both order and labels.
fn order_isomorphic(w1: &ExecWord, w2: &ExecWord) -> bool {
    let (r1, r2) = (realize(w1, 1), realize(w2, 1));
    if r1.len() != r2.len() {
        return false;
    }
    permutations(r1.len()).into_iter().any(|perm| {
        (0..r1.len()).all(|i| r1[i].1 == r2[perm[i]].1)
            && (0..r1.len()).all(|i| (0..r1.len()).all(|j| (r1[i].0 < r1[j].0) == (r2[perm[i]].0 < r2[perm[j]].0)))
    })
}

#[test]
fn point_words_agree_with_order_isomorphism() {
    let points: Vec<ExecWord> = all_canonical(&["a", "b"], 4).into_iter().filter(|w| w.is_point_only()).collect();
    for w1 in &points {
        for w2 in &points {
            assert_eq!(equivalent(w1, w2), order_isomorphic(w1, w2), "{w1:?} {w2:?}");
        }
    }
}

fn raw_strategy() -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 1usize..=8)
}

proptest! {
    #[test]
    fn equivalence_laws((seed, len) in raw_strategy()) {
        let mut r = rng(seed);
        let a = random_raw_word(&mut r, len, &["a", "b", "c"]);
        let b = stutter(&mut r, &a);
        let c = stutter(&mut r, &b);
        let (wa, wb, wc) = (normalize(a).unwrap(), normalize(b).unwrap(), normalize(c).unwrap());
        prop_assert!(equivalent(&wa, &wa));
        prop_assert!(equivalent(&wa, &wb) && equivalent(&wb, &wa));
        prop_assert!(equivalent(&wb, &wc) && equivalent(&wa, &wc));
        let other = normalize(random_raw_word(&mut r, len, &["a", "b", "c"])).unwrap();
        prop_assert_eq!(equivalent(&wa, &other), equivalent(&other, &wa));
        prop_assert_eq!(equivalent(&wa, &other), equivalent(&wb, &other));
    }

    #[test]
    fn concat_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let word = |r: &mut rand_chacha::ChaCha8Rng| {
            let len = r.gen_range(1..=4);
            normalize(random_raw_word(r, len, &["a", "b"])).unwrap()
        };
        let (a, b, c) = (word(&mut r), word(&mut r), word(&mut r));
        prop_assert_eq!(concat(&concat(&a, &b), &c), concat(&a, &concat(&b, &c)));
    }

    #[test]
    fn random_splits_agree_with_cut_oracle((seed, len) in raw_strategy()) {
        let mut r = rng(seed);
        let w = normalize(random_raw_word(&mut r, len, &["a", "b", "c"])).unwrap();
        prop_assert_eq!(splits(&w), splits_oracle(&w));
    }
}
