//! Bisimulation, simulation and minimization of finite Kripke structures.
//!
//! Refinement starts from the valuation partition and repeatedly splits
//! blocks by the set of `(word, target block)` pairs their states can reach
//! in one step. The sequence of partitions is kept: round `j` is exactly
//! equivalence on formulas of modal depth at most `j`, which is what
//! [`stratified`] and [`distinguishing_formula`] read from.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::exec_words::{ExecWord, Segment};
use crate::formula::{sat_set, to_ghml, Formula};
use crate::gst::SymbolicGst;
use crate::kripke::{KripkeStructure, StateId};
use crate::surrogate::build_surrogate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// Block id of every state. Blocks are numbered in first-seen state order.
    pub block_of: Vec<usize>,
    pub blocks: Vec<Vec<StateId>>,
}

impl Partition {
    fn from_ids(block_of: Vec<usize>) -> Self {
        let count = block_of.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (s, b) in block_of.iter().enumerate() {
            blocks[*b].push(s);
        }
        Partition { block_of, blocks }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BisimVerdict {
    /// The largest bisimulation between the two structures, as state-name
    /// pairs; contains the queried pair.
    Bisimilar { relation: Vec<(String, String)> },
    /// Holds at the first state and fails at the second.
    Distinguished { formula: Formula },
}

impl BisimVerdict {
    pub fn is_bisimilar(&self) -> bool {
        matches!(self, BisimVerdict::Bisimilar { .. })
    }

    pub fn formula(&self) -> Option<&Formula> {
        match self {
            BisimVerdict::Distinguished { formula } => Some(formula),
            BisimVerdict::Bisimilar { .. } => None,
        }
    }
}

fn renumber<K: std::hash::Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Vec<usize> {
    let mut ids = HashMap::new();
    keys.into_iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect()
}

/// Partitions after each refinement round; the last one is stable.
pub fn refinement_history(ks: &KripkeStructure) -> Vec<Vec<usize>> {
    let n = ks.num_states();
    let adj = ks.adjacency();
    let mut history = vec![renumber((0..n).map(|s| ks.true_props(s)))];
    loop {
        let prev = history.last().unwrap();
        let next = renumber((0..n).map(|s| {
            let succ: BTreeSet<(&ExecWord, usize)> = adj[s].iter().map(|(w, t)| (*w, prev[*t])).collect();
            (prev[s], succ)
        }));
        let stable = next.iter().max() == prev.iter().max();
        if stable {
            return history;
        }
        history.push(next);
    }
}

/// Coarsest valuation-respecting bisimulation and the induced quotient.
///
/// Quotient states take the name of their first member.
pub fn minimize(ks: &KripkeStructure) -> (Partition, KripkeStructure) {
    let history = refinement_history(ks);
    let partition = Partition::from_ids(history.last().unwrap().clone());
    let mut q = KripkeStructure::new(ks.name.clone());
    for l in ks.labels() {
        q.declare_label(l.clone());
    }
    for block in &partition.blocks {
        q.add_state(ks.state_name(block[0]).to_string());
    }
    for (s, w, t) in ks.transitions() {
        q.add_transition(partition.block_of[*s], w.clone(), partition.block_of[*t]);
    }
    for p in ks.props() {
        q.declare_prop(p.clone());
    }
    for (b, block) in partition.blocks.iter().enumerate() {
        for p in ks.true_props(block[0]) {
            q.set_prop(p, b);
        }
    }
    if let Some(init) = ks.initial() {
        q.set_initial(partition.block_of[init]);
    }
    (partition, q)
}

/// Decides `s ~ t` for `s` in `ks1` and `t` in `ks2`.
pub fn bisim(ks1: &KripkeStructure, s: StateId, ks2: &KripkeStructure, t: StateId) -> Result<BisimVerdict> {
    check_state(ks1, s)?;
    check_state(ks2, t)?;
    let union = KripkeStructure::disjoint_union(ks1, ks2);
    let offset = ks1.num_states();
    let history = refinement_history(&union);
    let last = history.last().unwrap();
    if last[s] == last[t + offset] {
        let relation = (0..ks1.num_states())
            .flat_map(|a| (0..ks2.num_states()).map(move |b| (a, b)))
            .filter(|(a, b)| last[*a] == last[b + offset])
            .map(|(a, b)| (ks1.state_name(a).to_string(), ks2.state_name(b).to_string()))
            .collect();
        return Ok(BisimVerdict::Bisimilar { relation });
    }
    let formula = Distinguisher::new(&union, &history).distinguish(s, t + offset);
    validate_witness(&union, s, t + offset, &formula);
    Ok(BisimVerdict::Distinguished { formula })
}

fn check_state(ks: &KripkeStructure, s: StateId) -> Result<()> {
    if s < ks.num_states() {
        Ok(())
    } else {
        Err(Error::UnknownState(s.to_string()))
    }
}

fn validate_witness(ks: &KripkeStructure, s: StateId, t: StateId, f: &Formula) {
    let sat = sat_set(ks, f);
    assert!(sat[s] && !sat[t], "distinguishing formula {f} failed validation");
}

/// A formula true at `s` (in `ks1`) and false at `t` (in `ks2`).
pub fn distinguishing_formula(ks1: &KripkeStructure, s: StateId, ks2: &KripkeStructure, t: StateId) -> Result<Formula> {
    match bisim(ks1, s, ks2, t)? {
        BisimVerdict::Distinguished { formula } => Ok(formula),
        BisimVerdict::Bisimilar { .. } => Err(Error::Bisimilar),
    }
}

struct Distinguisher<'a> {
    ks: &'a KripkeStructure,
    adj: Vec<Vec<(&'a ExecWord, StateId)>>,
    history: &'a [Vec<usize>],
    memo: HashMap<(StateId, StateId), Formula>,
}

impl<'a> Distinguisher<'a> {
    fn new(ks: &'a KripkeStructure, history: &'a [Vec<usize>]) -> Self {
        Distinguisher { ks, adj: ks.adjacency(), history, memo: HashMap::new() }
    }

    fn distinguish(&mut self, s: StateId, t: StateId) -> Formula {
        if let Some(f) = self.memo.get(&(s, t)) {
            return f.clone();
        }
        let f = self.build(s, t);
        self.memo.insert((s, t), f.clone());
        f
    }

    fn build(&mut self, s: StateId, t: StateId) -> Formula {
        let round = self.history.iter().position(|p| p[s] != p[t]).expect("distinguish called on equivalent states");
        if round == 0 {
            let (ps, pt) = (self.ks.true_props(s), self.ks.true_props(t));
            if let Some(p) = ps.iter().find(|p| !pt.contains(p)) {
                return Formula::prop(*p);
            }
            let p = pt.iter().find(|p| !ps.contains(p)).unwrap();
            return Formula::prop(*p).not();
        }
        let prev = &self.history[round - 1];
        let signature = |x: StateId| -> BTreeSet<(ExecWord, usize)> {
            self.adj[x].iter().map(|(w, y)| ((*w).clone(), prev[*y])).collect()
        };
        let (sig_s, sig_t) = (signature(s), signature(t));
        if let Some((w, block)) = sig_s.difference(&sig_t).next().cloned() {
            let s_next = self.adj[s].iter().find(|(w2, y)| **w2 == w && prev[*y] == block).map(|(_, y)| *y).unwrap();
            let t_nexts: Vec<StateId> = self.adj[t].iter().filter(|(w2, _)| **w2 == w).map(|(_, y)| *y).collect();
            let parts: BTreeSet<Formula> = t_nexts.into_iter().map(|t_next| self.distinguish(s_next, t_next)).collect();
            Formula::diamond(w, Formula::all(parts))
        } else {
            self.distinguish(t, s).not()
        }
    }
}

/// Whether `t` (in `ks2`) simulates `s` (in `ks1`): matching words, and every
/// variable true at the simulated state is true at the simulating one.
pub fn simulate(ks1: &KripkeStructure, s: StateId, ks2: &KripkeStructure, t: StateId) -> Result<bool> {
    check_state(ks1, s)?;
    check_state(ks2, t)?;
    let adj1 = ks1.adjacency();
    let adj2 = ks2.adjacency();
    let (n1, n2) = (ks1.num_states(), ks2.num_states());
    let mut rel = vec![vec![false; n2]; n1];
    for (p, row) in rel.iter_mut().enumerate() {
        let props = ks1.true_props(p);
        for (q, cell) in row.iter_mut().enumerate() {
            *cell = props.iter().all(|v| ks2.holds(v, q));
        }
    }
    loop {
        let mut changed = false;
        for p in 0..n1 {
            for q in 0..n2 {
                if !rel[p][q] {
                    continue;
                }
                let ok = adj1[p].iter().all(|(w, p2)| adj2[q].iter().any(|(w2, q2)| w2 == w && rel[*p2][*q2]));
                if !ok {
                    rel[p][q] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(rel[s][t]);
        }
    }
}

/// Largest `j <= k` such that `s` and `t` satisfy the same formulas of modal
/// depth `j`; `None` if they already differ on variables.
pub fn stratified(ks: &KripkeStructure, s: StateId, t: StateId, k: usize) -> Result<Option<usize>> {
    check_state(ks, s)?;
    check_state(ks, t)?;
    let history = refinement_history(ks);
    Ok(match history.iter().position(|p| p[s] != p[t]) {
        Some(0) => None,
        Some(j) => Some((j - 1).min(k)),
        None => Some(k),
    })
}

/// [`stratified`] across two structures.
pub fn stratified_between(
    ks1: &KripkeStructure,
    s: StateId,
    ks2: &KripkeStructure,
    t: StateId,
    k: usize,
) -> Result<Option<usize>> {
    check_state(ks1, s)?;
    check_state(ks2, t)?;
    let union = KripkeStructure::disjoint_union(ks1, ks2);
    stratified(&union, s, t + ks1.num_states(), k)
}

/// Weak bisimilarity of two GSTs, decided on their surrogates. A failing
/// verdict carries a GHML formula true at `g1` and false at `g2`.
pub fn weak_bisim_gst(g1: &SymbolicGst, g2: &SymbolicGst) -> BisimVerdict {
    let (k1, k2) = (build_surrogate(g1), build_surrogate(g2));
    match bisim(&k1, 0, &k2, 0).expect("surrogate roots exist") {
        BisimVerdict::Distinguished { formula } => BisimVerdict::Distinguished { formula: to_ghml(&formula) },
        verdict => verdict,
    }
}

/// The step transition system of a discrete GST: vertices as states, one
/// point-word transition per edge.
pub fn step_system(g: &SymbolicGst) -> Result<KripkeStructure> {
    if !g.is_discrete() {
        return Err(Error::NotDiscrete);
    }
    let mut ks = KripkeStructure::new(g.name.clone());
    for v in g.vertices() {
        ks.add_state(v);
    }
    for e in &g.edges {
        let s = ks.state_id(&e.source)?;
        let t = ks.state_id(&e.target)?;
        ks.add_transition(s, ExecWord::single(Segment::point(e.segment.label.clone())), t);
    }
    ks.set_initial(0);
    Ok(ks)
}

/// Strong bisimilarity of two discrete GSTs. On discrete trees trajectory
/// matching decomposes into single steps, so this is ordinary bisimilarity
/// of the step systems.
pub fn strong_bisim_discrete(g1: &SymbolicGst, g2: &SymbolicGst) -> Result<bool> {
    let (k1, k2) = (step_system(g1)?, step_system(g2)?);
    Ok(bisim(&k1, 0, &k2, 0)?.is_bisimilar())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec_words::{parse_word, Label};
    use crate::formula::parse_formula;
    use crate::gst::CutClass;
    use crate::surrogate::class_state;

    fn w(s: &str) -> ExecWord {
        parse_word(s).unwrap()
    }

    fn l(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    fn m() -> KripkeStructure {
        let mut ks = KripkeStructure::new("M");
        let s0 = ks.add_state("s0");
        let s1 = ks.add_state("s1");
        ks.add_transition(s0, w("D a"), s0);
        ks.add_transition(s0, w("D a"), s1);
        ks.set_initial(s0);
        ks
    }

    fn deadlock() -> KripkeStructure {
        let mut ks = KripkeStructure::new("D");
        ks.add_state("d");
        ks
    }

    fn g_unit() -> SymbolicGst {
        let mut g = SymbolicGst::new("unit", "r");
        g.add_edge("e1", "r", "t", Segment::dense(l("a")));
        g
    }

    fn g_dense() -> SymbolicGst {
        let mut g = g_unit();
        let mut child = SymbolicGst::child();
        child.add_edge("f1", "@", "u", Segment::point(l("b")));
        g.attach("e1", child);
        g
    }

    #[test]
    fn minimize_examples() {
        let (p, q) = minimize(&build_surrogate(&g_unit()));
        assert_eq!(p.blocks, vec![vec![0, 1], vec![2]]);
        assert_eq!(q.num_states(), 2);

        let (p, _) = minimize(&deadlock());
        assert_eq!(p.len(), 1);

        let ks = build_surrogate(&g_dense());
        let (p, _) = minimize(&ks);
        assert_eq!(p.len(), 3);
        let r = 0;
        let i = class_state(&ks, &CutClass::interior("e1")).unwrap();
        let t = class_state(&ks, &CutClass::vertex("t")).unwrap();
        let leaf = class_state(&ks, &CutClass::vertex("u").within("e1", 0)).unwrap();
        assert_eq!(p.block_of[r], p.block_of[i]);
        assert_eq!(p.block_of[t], p.block_of[leaf]);
    }

    #[test]
    fn minimize_keeps_m() {
        let (_, q) = minimize(&m());
        assert_eq!(q, {
            let mut x = m();
            x.name = "M".into();
            x
        });
    }

    #[test]
    fn bisim_examples() {
        let sur = build_surrogate(&g_unit());
        assert!(bisim(&sur, 0, &m(), 0).unwrap().is_bisimilar());
        let v = bisim(&m(), 0, &deadlock(), 0).unwrap();
        assert_eq!(v.formula(), Some(&parse_formula("<D a> true").unwrap()));
        assert!(bisim(&sur, 0, &sur, 1).unwrap().is_bisimilar());
        assert!(matches!(bisim(&sur, 9, &sur, 0), Err(Error::UnknownState(_))));
    }

    #[test]
    fn distinguishing_examples() {
        let f = distinguishing_formula(&m(), 0, &m(), 1).unwrap();
        assert_eq!(f, parse_formula("<D a> true").unwrap());
        let ks = build_surrogate(&g_dense());
        let at = class_state(&ks, &CutClass::attach_point("e1", 0)).unwrap();
        let i = class_state(&ks, &CutClass::interior("e1")).unwrap();
        let f = distinguishing_formula(&ks, at, &ks, i).unwrap();
        assert_eq!(f, parse_formula("<P b> true").unwrap());
        assert_eq!(distinguishing_formula(&m(), 0, &m(), 0), Err(Error::Bisimilar));
    }

    #[test]
    fn valuation_splits_initial_partition() {
        let mut ks = KripkeStructure::new("v");
        let a = ks.add_state("a");
        ks.add_state("b");
        ks.set_prop("p", a);
        let f = distinguishing_formula(&ks, 0, &ks, 1).unwrap();
        assert_eq!(f, Formula::prop("p"));
        let f = distinguishing_formula(&ks, 1, &ks, 0).unwrap();
        assert_eq!(f, Formula::prop("p").not());
        assert_eq!(stratified(&ks, 0, 1, 3).unwrap(), None);
    }

    #[test]
    fn simulate_examples() {
        assert!(simulate(&deadlock(), 0, &m(), 0).unwrap());
        assert!(!simulate(&m(), 0, &deadlock(), 0).unwrap());
        let mut a = KripkeStructure::new("a");
        let (x0, x1) = (a.add_state("x0"), a.add_state("x1"));
        a.add_transition(x0, w("P a"), x1);
        let mut ab = KripkeStructure::new("ab");
        let (y0, y1, y2) = (ab.add_state("y0"), ab.add_state("y1"), ab.add_state("y2"));
        ab.add_transition(y0, w("P a"), y1);
        ab.add_transition(y1, w("P b"), y2);
        assert!(simulate(&a, x0, &ab, y0).unwrap());
        assert!(!simulate(&ab, y0, &a, x0).unwrap());
    }

    #[test]
    fn stratified_examples() {
        assert_eq!(stratified(&m(), 0, 1, 3).unwrap(), Some(0));
        let sur = build_surrogate(&g_unit());
        assert_eq!(stratified(&sur, 0, 1, 5).unwrap(), Some(5));
    }

    #[test]
    fn weak_bisim_examples() {
        let mut b = SymbolicGst::new("unit_b", "r");
        b.add_edge("e1", "r", "t", Segment::dense(l("b")));
        let v = weak_bisim_gst(&g_unit(), &b);
        assert_eq!(v.formula(), Some(&parse_formula("<D a> true").unwrap()));

        let mut two = SymbolicGst::new("two", "r");
        two.add_edge("e1", "r", "m", Segment::dense(l("a")));
        two.add_edge("e2", "m", "t", Segment::dense(l("a")));
        assert!(weak_bisim_gst(&g_unit(), &two).is_bisimilar());

        let mut other = g_unit();
        let mut child = SymbolicGst::child();
        child.add_edge("leaf", "@", "z", Segment::point(l("b")));
        other.attach("e1", child);
        assert!(weak_bisim_gst(&g_dense(), &other).is_bisimilar());
    }

    #[test]
    fn strong_bisim_examples() {
        let chain = |labels: &[&str]| {
            let mut g = SymbolicGst::new("c", "v0");
            for (i, lab) in labels.iter().enumerate() {
                g.add_edge(format!("e{i}"), format!("v{i}"), format!("v{}", i + 1), Segment::point(l(lab)));
            }
            g
        };
        assert!(strong_bisim_discrete(&chain(&["a", "b"]), &chain(&["a", "b"])).unwrap());
        assert!(!strong_bisim_discrete(&chain(&["a"]), &chain(&["a", "b"])).unwrap());
        let mut two = SymbolicGst::new("two", "r");
        two.add_edge("e1", "r", "x", Segment::point(l("a")));
        two.add_edge("e2", "r", "y", Segment::point(l("a")));
        assert!(strong_bisim_discrete(&two, &chain(&["a"])).unwrap());
        assert_eq!(strong_bisim_discrete(&g_unit(), &chain(&["a"])), Err(Error::NotDiscrete));
    }
}
