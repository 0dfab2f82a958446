//! Seeded generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use ghml_core::{
    build_surrogate, normalize, parse_model, ExecWord, Formula, KripkeStructure, Label, ModelFile, Segment,
    SegmentShape, SymbolicGst,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn label(s: &str) -> Label {
    Label::new(s).unwrap()
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn load(name: &str) -> ModelFile {
    let text = std::fs::read_to_string(corpus_dir().join(name)).unwrap();
    parse_model(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_gst(name: &str) -> SymbolicGst {
    match load(name) {
        ModelFile::Gst(g) => g,
        _ => panic!("{name} is not a GST"),
    }
}

pub fn load_kripke(name: &str) -> KripkeStructure {
    match load(name) {
        ModelFile::Kripke(k) => k,
        _ => panic!("{name} is not a Kripke structure"),
    }
}

/// Corpus files that are expected to parse, in name order.
pub fn good_corpus() -> Vec<(String, ModelFile)> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| (n.ends_with(".gst") || n.ends_with(".kf")) && !n.starts_with("bad_"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|n| {
            let m = load(&n);
            (n, m)
        })
        .collect()
}

pub fn random_segment(rng: &mut impl Rng, labels: &[&str]) -> Segment {
    let l = label(labels.choose(rng).unwrap());
    if rng.gen_bool(0.5) {
        Segment::dense(l)
    } else {
        Segment::point(l)
    }
}

/// A raw, possibly non-canonical segment sequence of length `1..=max_len`.
pub fn random_raw_word(rng: &mut impl Rng, max_len: usize, labels: &[&str]) -> Vec<Segment> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| random_segment(rng, labels)).collect()
}

/// A raw sequence with the same canonical form as `raw`: dense segments are
/// randomly duplicated.
pub fn stutter(rng: &mut impl Rng, raw: &[Segment]) -> Vec<Segment> {
    let mut out = Vec::new();
    for s in raw {
        out.push(s.clone());
        if s.is_dense() {
            for _ in 0..rng.gen_range(0..3) {
                out.push(s.clone());
            }
        }
    }
    out
}

/// Canonical form by merging one randomly chosen adjacent equal dense pair
/// at a time until none is left.
pub fn merge_oracle(rng: &mut impl Rng, raw: &[Segment]) -> Vec<Segment> {
    let mut cur = raw.to_vec();
    loop {
        let candidates: Vec<usize> =
            (0..cur.len().saturating_sub(1)).filter(|&i| cur[i].is_dense() && cur[i] == cur[i + 1]).collect();
        let Some(&i) = candidates.choose(rng) else { return cur };
        cur.remove(i + 1);
    }
}

/// Splits of `w` read off cut positions: segment `i` occupies `(i, i+1]`, a
/// dense segment everywhere in it, a point segment only at `i+1`. Cuts are
/// tried on a grid fine enough to hit every boundary and every interior.
pub fn splits_oracle(w: &ExecWord) -> BTreeSet<(ExecWord, ExecWord)> {
    let segs = w.segments();
    let n = segs.len();
    let mut out = BTreeSet::new();
    for step in 1..(4 * n) {
        let x = step as f64 / 4.0;
        let mut prefix = Vec::new();
        let mut suffix = Vec::new();
        for (i, s) in segs.iter().enumerate() {
            let (lo, hi) = (i as f64, (i + 1) as f64);
            match s.shape {
                SegmentShape::Dense => {
                    if x > lo {
                        prefix.push(s.clone());
                    }
                    if x < hi {
                        suffix.push(s.clone());
                    }
                }
                SegmentShape::Point => {
                    if hi <= x {
                        prefix.push(s.clone());
                    } else {
                        suffix.push(s.clone());
                    }
                }
            }
        }
        if !prefix.is_empty() && !suffix.is_empty() {
            out.insert((normalize(prefix).unwrap(), normalize(suffix).unwrap()));
        }
    }
    out
}

/// A random valid GST with `1..=max_edges` top-level edges over `labels`;
/// dense edges get an attachment with probability `attach_p`.
pub fn random_gst(rng: &mut impl Rng, max_edges: usize, labels: &[&str], attach_p: f64) -> SymbolicGst {
    let mut g = SymbolicGst::new("rand", "v0");
    let edges = rng.gen_range(1..=max_edges);
    fill_tree(rng, &mut g, "v", "e", edges, labels);
    let dense: Vec<String> = g.edges.iter().filter(|e| e.segment.is_dense()).map(|e| e.id.clone()).collect();
    for (n, e) in dense.iter().enumerate() {
        if rng.gen_bool(attach_p) {
            let mut child = SymbolicGst::child();
            let size = rng.gen_range(1..=2);
            fill_tree(rng, &mut child, &format!("c{n}_"), &format!("f{n}_"), size, labels);
            g.attach(e.clone(), child);
        }
    }
    assert!(g.validate().is_valid(), "{:?}", g.validate());
    g
}

fn fill_tree(rng: &mut impl Rng, g: &mut SymbolicGst, vprefix: &str, eprefix: &str, edges: usize, labels: &[&str]) {
    let mut vertices = vec![g.root.clone()];
    for i in 0..edges {
        let source = vertices.choose(rng).unwrap().clone();
        let target = format!("{vprefix}{}", i + 1);
        g.add_edge(format!("{eprefix}{i}"), source, target.clone(), random_segment(rng, labels));
        vertices.push(target);
    }
}

/// A GST that is weakly bisimilar to `g` by construction: a top-level dense
/// edge without attachments is cut in two, or a top-level subtree hanging
/// off the root is duplicated.
pub fn bisimilar_variant(rng: &mut impl Rng, g: &SymbolicGst) -> SymbolicGst {
    let mut h = g.clone();
    h.name = "variant".into();
    let splittable: Vec<usize> = (0..h.edges.len())
        .filter(|&i| h.edges[i].segment.is_dense() && h.attachments.iter().all(|a| a.host != h.edges[i].id))
        .collect();
    if let (Some(&i), true) = (splittable.choose(rng), rng.gen_bool(0.5)) {
        let e = h.edges[i].clone();
        h.edges[i].target = "mid".into();
        h.add_edge("split", "mid", e.target, e.segment);
        return h;
    }
    // Duplicate the first root edge and everything below it.
    let first = h.edges.iter().find(|e| e.source == h.root).unwrap().clone();
    let mut stack = vec![first];
    while let Some(e) = stack.pop() {
        let src = if e.source == h.root { e.source.clone() } else { format!("{}'", e.source) };
        h.add_edge(format!("{}'", e.id), src, format!("{}'", e.target), e.segment.clone());
        let kids: Vec<_> = h.attachments.iter().filter(|a| a.host == e.id).map(|a| a.child.clone()).collect();
        for child in kids {
            h.attach(format!("{}'", e.id), child);
        }
        stack.extend(g.edges.iter().filter(|f| f.source == e.target).cloned());
    }
    assert!(h.validate().is_valid(), "{:?}", h.validate());
    h
}

/// Words used as modalities for random formulas over `labels`: single
/// segments and two-segment words.
pub fn word_pool(labels: &[&str]) -> Vec<ExecWord> {
    let mut segs = Vec::new();
    for l in labels {
        segs.push(Segment::dense(label(l)));
        segs.push(Segment::point(label(l)));
    }
    let mut pool = BTreeSet::new();
    for a in &segs {
        pool.insert(normalize([a.clone()]).unwrap());
        for b in &segs {
            pool.insert(normalize([a.clone(), b.clone()]).unwrap());
        }
    }
    pool.into_iter().collect()
}

pub fn random_formula<R: Rng>(rng: &mut R, depth: usize, words: &[ExecWord], props: &[&str]) -> Formula {
    let leaf = |rng: &mut R| {
        if !props.is_empty() && rng.gen_bool(0.3) {
            Formula::prop(*props.choose(rng).unwrap())
        } else {
            Formula::tt()
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 => random_formula(rng, depth - 1, words, props).not(),
        1 => random_formula(rng, depth, words, props).and(random_formula(rng, depth - 1, words, props)),
        2 => leaf(rng),
        _ => {
            let w = words.choose(rng).unwrap().clone();
            Formula::diamond(w, random_formula(rng, depth - 1, words, props))
        }
    }
}

/// A random finite structure over the given words and variables.
pub fn random_kripke(
    rng: &mut impl Rng,
    states: usize,
    transitions: usize,
    words: &[ExecWord],
    props: &[&str],
) -> KripkeStructure {
    let mut ks = KripkeStructure::new("rk");
    for i in 0..states {
        ks.add_state(format!("s{i}"));
    }
    for p in props {
        ks.declare_prop(*p);
        for s in 0..states {
            if rng.gen_bool(0.3) {
                ks.set_prop(p, s);
            }
        }
    }
    for _ in 0..transitions {
        let s = rng.gen_range(0..states);
        let t = rng.gen_range(0..states);
        ks.add_transition(s, words.choose(rng).unwrap().clone(), t);
    }
    ks.set_initial(0);
    ks
}

/// Greatest bisimulation between the states of `a` and `b` as a boolean
/// matrix, by deleting violating pairs from the full relation until stable.
pub fn naive_bisimulation(a: &KripkeStructure, b: &KripkeStructure) -> Vec<Vec<bool>> {
    let (adj_a, adj_b) = (a.adjacency(), b.adjacency());
    let mut rel: Vec<Vec<bool>> = (0..a.num_states())
        .map(|p| (0..b.num_states()).map(|q| a.true_props(p) == b.true_props(q)).collect())
        .collect();
    loop {
        let mut changed = false;
        for p in 0..a.num_states() {
            for q in 0..b.num_states() {
                if !rel[p][q] {
                    continue;
                }
                let zig = adj_a[p].iter().all(|(w, p2)| adj_b[q].iter().any(|(v, q2)| v == w && rel[*p2][*q2]));
                let zag = adj_b[q].iter().all(|(v, q2)| adj_a[p].iter().any(|(w, p2)| v == w && rel[*p2][*q2]));
                if !(zig && zag) {
                    rel[p][q] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

/// Characteristic formulas of depth `d` for every state of `ks`: state `s`
/// satisfies `chi[t]` iff `s` and `t` agree on all formulas of depth `d`.
pub fn characteristic_formulas(ks: &KripkeStructure, d: usize) -> Vec<Formula> {
    let props: Vec<&String> = ks.props().iter().collect();
    let words: BTreeSet<&ExecWord> = ks.transitions().iter().map(|(_, w, _)| w).collect();
    let adj = ks.adjacency();
    let base: Vec<Formula> = (0..ks.num_states())
        .map(|s| {
            Formula::all(props.iter().map(|p| {
                let f = Formula::prop(p.as_str());
                if ks.holds(p, s) {
                    f
                } else {
                    f.not()
                }
            }))
        })
        .collect();
    let mut chi = base.clone();
    for _ in 0..d {
        chi = (0..ks.num_states())
            .map(|s| {
                let mut parts = vec![base[s].clone()];
                for w in &words {
                    let succ: Vec<usize> = adj[s].iter().filter(|(v, _)| v == w).map(|(_, t)| *t).collect();
                    for t in &succ {
                        parts.push(Formula::diamond((*w).clone(), chi[*t].clone()));
                    }
                    parts.push(Formula::boxed((*w).clone(), Formula::any(succ.iter().map(|t| chi[*t].clone()))));
                }
                Formula::all(parts)
            })
            .collect();
    }
    chi
}

/// States and surrogate of a GST pair joined into one structure, with the
/// two roots.
pub fn joint_surrogate(g1: &SymbolicGst, g2: &SymbolicGst) -> (KripkeStructure, usize, usize) {
    let (k1, k2) = (build_surrogate(g1), build_surrogate(g2));
    let n1 = k1.num_states();
    (KripkeStructure::disjoint_union(&k1, &k2), 0, n1)
}
