//! Hennessy-Milner class diagnostics: image-finiteness, the transitivity and
//! weak density schemata, VHHM checks, and lazy infinite-state generators.

mod generators;
mod lazy;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::bisim::{minimize, refinement_history, Partition};
use crate::error::{Error, Result};
use crate::exec_words::{splits, ExecWord};
use crate::gst::SymbolicGst;
use crate::kripke::{KripkeStructure, StateId};
use crate::surrogate::build_surrogate;

pub use generators::{fig3_words, gen_dense_attach, gen_fig3, gen_gx, gen_unit, Fig3State, GxState};
pub use lazy::{
    stratified_lazy, truncate, validate_hints, Family, LazyKripke, LazyState, RankFn, StratifiedEngine, Successor,
    DEFAULT_BUDGET,
};

/// Image-finiteness verdict for a symbolic GST, with its finite witness.
#[derive(Clone, Debug)]
pub struct ImageFinite {
    pub partition: Partition,
    /// Finite (hence image-finite) structure bisimilar to the surrogate.
    pub witness: KripkeStructure,
}

/// Every symbolic GST is image-finite: its surrogate minimizes to a finite
/// quotient, which is returned as the witness.
pub fn image_finite(g: &SymbolicGst) -> ImageFinite {
    let (partition, witness) = minimize(&build_surrogate(g));
    ImageFinite { partition, witness }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImageFiniteBounded {
    ConsistentWithImageFinite,
    /// The successors of the state under `witness` still meet new depth-`j`
    /// classes when `j` reaches `depth`.
    NotImageFiniteUpTo {
        depth: usize,
        witness: ExecWord,
    },
}

/// Number of hint samples checked per family and depth.
pub const HINT_SAMPLES: usize = 16;

/// Bounded image-finiteness test at `state`.
///
/// For every word `w`, counts the distinct depth-`j` classes among the
/// `w`-successors of `state` (families contribute their depth-`j`
/// representatives). If the count still grows from `depth - 1` to `depth`,
/// the state is reported not image-finite up to `depth` with witness `w`.
/// Collapse hints are validated by sampling first.
pub fn image_finite_bounded<S: LazyState>(lz: &LazyKripke<S>, state: &S, depth: usize) -> Result<ImageFiniteBounded> {
    if depth == 0 {
        return Ok(ImageFiniteBounded::ConsistentWithImageFinite);
    }
    let mut probe = lz.clone();
    probe.initial = vec![state.clone()];
    validate_hints(&probe, 1, depth, HINT_SAMPLES)?;

    let mut engine = StratifiedEngine::new(lz);
    let succ = lz.successors(state);
    let words: BTreeSet<ExecWord> = succ.iter().map(|(w, _)| w.clone()).collect();
    for w in words {
        let mut count = |j: usize| -> Result<usize> {
            let mut classes = HashSet::new();
            for (_, t) in lz.expand(state, |fam| fam.representatives(j)).into_iter().filter(|(v, _)| *v == w) {
                classes.insert(engine.class(&t, j)?);
            }
            Ok(classes.len())
        };
        let before = count(depth - 1)?;
        let after = count(depth)?;
        if after > before {
            return Ok(ImageFiniteBounded::NotImageFiniteUpTo { depth, witness: w });
        }
    }
    Ok(ImageFiniteBounded::ConsistentWithImageFinite)
}

/// `(s, w1, t)`, `(t, w2, u)` present but `(s, w1·w2, u)` missing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityCounterexample {
    pub s: StateId,
    pub w1: ExecWord,
    pub t: StateId,
    pub w2: ExecWord,
    pub u: StateId,
}

/// `(s, w, u)` present but no `t` with `(s, w1, t)` and `(t, w2, u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityCounterexample {
    pub s: StateId,
    pub w: ExecWord,
    pub u: StateId,
    pub split: (ExecWord, ExecWord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemataReport {
    pub transitivity: Option<TransitivityCounterexample>,
    pub weak_density: Option<DensityCounterexample>,
}

impl SchemataReport {
    pub fn passes(&self) -> bool {
        self.transitivity.is_none() && self.weak_density.is_none()
    }

    /// Whether every reported counterexample really violates its schema in `ks`.
    pub fn revalidate(&self, ks: &KripkeStructure) -> bool {
        let trans_ok = self.transitivity.as_ref().is_none_or(|c| {
            ks.has_transition(c.s, &c.w1, c.t)
                && ks.has_transition(c.t, &c.w2, c.u)
                && !ks.has_transition(c.s, &c.w1.concat(&c.w2), c.u)
        });
        let density_ok = self.weak_density.as_ref().is_none_or(|c| {
            let (w1, w2) = &c.split;
            ks.has_transition(c.s, &c.w, c.u)
                && splits(&c.w).contains(&c.split)
                && !(0..ks.num_states()).any(|t| ks.has_transition(c.s, w1, t) && ks.has_transition(t, w2, c.u))
        });
        trans_ok && density_ok
    }

    pub fn describe(&self, ks: &KripkeStructure) -> String {
        let name = |s: StateId| ks.state_name(s);
        let trans = match &self.transitivity {
            None => "transitivity: pass".to_string(),
            Some(c) => format!(
                "transitivity: FAIL {} -[{}]-> {} -[{}]-> {} without {} -[{}]-> {}",
                name(c.s),
                c.w1,
                name(c.t),
                c.w2,
                name(c.u),
                name(c.s),
                c.w1.concat(&c.w2),
                name(c.u)
            ),
        };
        let density = match &self.weak_density {
            None => "weak density: pass".to_string(),
            Some(c) => format!(
                "weak density: FAIL {} -[{}]-> {} has no intermediate for split [{}] ; [{}]",
                name(c.s),
                c.w,
                name(c.u),
                c.split.0,
                c.split.1
            ),
        };
        format!("{trans}\n{density}")
    }
}

/// Checks the transitivity and weak density schemata on a finite structure.
/// The first counterexample of each kind, in transition order, is reported.
pub fn schemata_check(ks: &KripkeStructure) -> SchemataReport {
    let adj = ks.adjacency();
    let mut transitivity = None;
    'outer: for (s, w1, t) in ks.transitions() {
        for (w2, u) in &adj[*t] {
            if !ks.has_transition(*s, &w1.concat(w2), *u) {
                transitivity =
                    Some(TransitivityCounterexample { s: *s, w1: w1.clone(), t: *t, w2: (*w2).clone(), u: *u });
                break 'outer;
            }
        }
    }
    let mut weak_density = None;
    'outer: for (s, w, u) in ks.transitions() {
        for (w1, w2) in splits(w) {
            let found = adj[*s].iter().any(|(v, t)| **v == w1 && ks.has_transition(*t, &w2, *u));
            if !found {
                weak_density = Some(DensityCounterexample { s: *s, w: w.clone(), u: *u, split: (w1, w2) });
                break 'outer;
            }
        }
    }
    SchemataReport { transitivity, weak_density }
}

/// Outcome of [`vhhm_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VhhmReport {
    pub pairs_checked: usize,
    /// Pairs where bisimilarity and full stratified agreement disagree.
    pub violations: Vec<(String, String)>,
    /// Non-bisimilar pairs that still agree at the requested depth.
    pub inconclusive: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl VhhmReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records that `s` and `t` agree to depth `k` in a finite snapshot
    /// although the full structure is certified non-bisimilar elsewhere.
    pub fn annotate_certified(&mut self, s: &str, t: &str, k: usize) {
        self.notes.push(format!("inconclusive at depth {k}: {s} and {t} agree here but are certified non-bisimilar"));
        let pair = (s.to_string(), t.to_string());
        if !self.inconclusive.contains(&pair) {
            self.inconclusive.push(pair);
        }
    }
}

impl fmt::Display for VhhmReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passes() { "pass" } else { "FAIL" };
        writeln!(f, "vhhm: {verdict} ({} pairs)", self.pairs_checked)?;
        for (s, t) in &self.violations {
            writeln!(f, "violation: {s} {t}")?;
        }
        for (s, t) in &self.inconclusive {
            writeln!(f, "inconclusive: {s} {t}")?;
        }
        for n in &self.notes {
            writeln!(f, "{n}")?;
        }
        Ok(())
    }
}

/// Disjoint union of several structures; state `x` of structure `i` is
/// named `{i}.x`.
pub fn union_all(structures: &[KripkeStructure]) -> KripkeStructure {
    let mut u = KripkeStructure::new("union");
    for (i, ks) in structures.iter().enumerate() {
        let offset = u.num_states();
        for name in ks.state_names() {
            u.add_state(format!("{i}.{name}"));
        }
        for l in ks.labels() {
            u.declare_label(l.clone());
        }
        for (s, w, t) in ks.transitions() {
            u.add_transition(s + offset, w.clone(), t + offset);
        }
        for p in ks.props() {
            u.declare_prop(p.clone());
        }
        for (p, set) in ks.valuation() {
            for s in set {
                u.set_prop(p, s + offset);
            }
        }
    }
    u
}

/// Compares bisimilarity with stratified agreement over all state pairs of
/// the disjoint union. Agreement at the stabilization bound must coincide
/// with bisimilarity; pairs agreeing at `k` without being bisimilar are
/// listed as inconclusive.
pub fn vhhm_check(structures: &[KripkeStructure], k: usize) -> VhhmReport {
    let u = union_all(structures);
    let bisimilar = refinement_history(&u).pop().unwrap();
    let n = u.num_states();
    // Depth classes come from the memoized lazy engine, independent of the
    // partition refinement above.
    let lz = LazyKripke::from_finite(&u);
    let mut engine = StratifiedEngine::new(&lz);
    let names = u.state_names();
    let mut class = |s: usize, j: usize| engine.class(&names[s], j).expect("finite structure within budget");
    let mut report = VhhmReport::default();
    for a in 0..n {
        for b in a + 1..n {
            report.pairs_checked += 1;
            let bis = bisimilar[a] == bisimilar[b];
            let agree_k = class(a, k) == class(b, k);
            let agree_bound = class(a, n) == class(b, n);
            let pair = (names[a].clone(), names[b].clone());
            if bis != (agree_k && agree_bound) {
                report.violations.push(pair);
            } else if agree_k && !bis {
                report.inconclusive.push(pair);
            }
        }
    }
    report
}

/// Checks that every `word`-transition between states of a component
/// strictly decreases `rank`.
///
/// The component is explored from `start` through any transitions whose
/// target satisfies `in_component`, for `bound` levels; families contribute
/// their depth-`bound` representatives and first `bound` members.
pub fn rank_certificate_check<S: LazyState>(
    lz: &LazyKripke<S>,
    start: &[S],
    word: &ExecWord,
    in_component: impl Fn(&S) -> bool,
    rank: impl Fn(&S) -> Option<u64>,
    bound: usize,
) -> Result<bool> {
    let states = lazy::explore(lz, start, bound, bound, bound, &in_component);
    for s in &states {
        let rs = rank(s).ok_or_else(|| Error::RankUndefined(s.to_string()))?;
        for (w, t) in lz.expand(s, |fam| lazy::truncated_members(fam, bound, bound)) {
            if w != *word || !in_component(&t) {
                continue;
            }
            let rt = rank(&t).ok_or_else(|| Error::RankUndefined(t.to_string()))?;
            if rt >= rs {
                log::debug!("rank does not decrease: {s} ({rs}) -[{w}]-> {t} ({rt})");
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A path of `steps` consecutive `word`-transitions from `start` whose
/// states after the first all satisfy `in_component`.
pub fn chain_witness<S: LazyState>(
    lz: &LazyKripke<S>,
    start: &S,
    word: &ExecWord,
    in_component: impl Fn(&S) -> bool,
    steps: usize,
) -> Option<Vec<S>> {
    fn go<S: LazyState>(
        lz: &LazyKripke<S>,
        path: &mut Vec<S>,
        word: &ExecWord,
        keep: &dyn Fn(&S) -> bool,
        left: usize,
        dead: &mut HashSet<(S, usize)>,
    ) -> bool {
        if left == 0 {
            return true;
        }
        let cur = path.last().unwrap().clone();
        if dead.contains(&(cur.clone(), left)) {
            return false;
        }
        for (w, t) in lz.expand(&cur, |fam| fam.representatives(left)) {
            if w != *word || !keep(&t) {
                continue;
            }
            path.push(t);
            if go(lz, path, word, keep, left - 1, dead) {
                return true;
            }
            path.pop();
        }
        dead.insert((cur, left));
        false
    }
    let mut path = vec![start.clone()];
    let mut dead = HashSet::new();
    go(lz, &mut path, word, &in_component, steps, &mut dead).then_some(path)
}

#[cfg(test)]
mod tests;
