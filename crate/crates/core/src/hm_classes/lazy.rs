//! Lazily generated, possibly infinite-branching Kripke structures.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec_words::ExecWord;
use crate::kripke::KripkeStructure;

/// Requirements on lazy state ids.
pub trait LazyState: Clone + Eq + Hash + Ord + fmt::Display + fmt::Debug {}

impl<T: Clone + Eq + Hash + Ord + fmt::Display + fmt::Debug> LazyState for T {}

type MemberFn<S> = Arc<dyn Fn(usize) -> S + Send + Sync>;
type HintFn = Arc<dyn Fn(usize) -> Vec<usize> + Send + Sync>;
type SuccessorFn<S> = Arc<dyn Fn(&S) -> Vec<(ExecWord, Successor<S>)> + Send + Sync>;
type ValuationFn<S> = Arc<dyn Fn(&S, &str) -> bool + Send + Sync>;
pub type RankFn<S> = Arc<dyn Fn(&S) -> Option<u64> + Send + Sync>;

/// An indexed family `{t_n : n in N}` of successors, with a class-collapse
/// hint: `representatives(d)` lists member indices such that every member
/// is claimed to be depth-`d` equivalent to one of them.
#[derive(Clone)]
pub struct Family<S> {
    pub name: String,
    member: MemberFn<S>,
    hint: HintFn,
}

impl<S> Family<S> {
    pub fn new(
        name: impl Into<String>,
        member: impl Fn(usize) -> S + Send + Sync + 'static,
        hint: impl Fn(usize) -> Vec<usize> + Send + Sync + 'static,
    ) -> Self {
        Family { name: name.into(), member: Arc::new(member), hint: Arc::new(hint) }
    }

    pub fn member(&self, n: usize) -> S {
        (self.member)(n)
    }

    pub fn representatives(&self, depth: usize) -> Vec<usize> {
        (self.hint)(depth)
    }
}

impl<S> fmt::Debug for Family<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum Successor<S> {
    One(S),
    Family(Family<S>),
}

/// A Kripke structure given by its successor function.
#[derive(Clone)]
pub struct LazyKripke<S> {
    pub name: String,
    pub initial: Vec<S>,
    pub props: Vec<String>,
    successors: SuccessorFn<S>,
    valuation: ValuationFn<S>,
    pub rank: Option<RankFn<S>>,
}

impl<S: LazyState> LazyKripke<S> {
    /// A structure with the universal valuation over `props`.
    pub fn new(
        name: impl Into<String>,
        initial: Vec<S>,
        successors: impl Fn(&S) -> Vec<(ExecWord, Successor<S>)> + Send + Sync + 'static,
    ) -> Self {
        LazyKripke {
            name: name.into(),
            initial,
            props: Vec::new(),
            successors: Arc::new(successors),
            valuation: Arc::new(|_, _| true),
            rank: None,
        }
    }

    pub fn with_valuation(
        mut self,
        props: Vec<String>,
        valuation: impl Fn(&S, &str) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.props = props;
        self.valuation = Arc::new(valuation);
        self
    }

    pub fn with_rank(mut self, rank: impl Fn(&S) -> Option<u64> + Send + Sync + 'static) -> Self {
        self.rank = Some(Arc::new(rank));
        self
    }

    pub fn successors(&self, s: &S) -> Vec<(ExecWord, Successor<S>)> {
        (self.successors)(s)
    }

    pub fn holds(&self, s: &S, prop: &str) -> bool {
        (self.valuation)(s, prop)
    }

    /// One-step successors, expanding families to the given member indices.
    pub fn expand(&self, s: &S, members: impl Fn(&Family<S>) -> Vec<usize>) -> Vec<(ExecWord, S)> {
        let mut out = Vec::new();
        for (w, succ) in self.successors(s) {
            match succ {
                Successor::One(t) => out.push((w, t)),
                Successor::Family(fam) => {
                    for n in members(&fam) {
                        out.push((w.clone(), fam.member(n)));
                    }
                }
            }
        }
        out
    }
}

impl LazyKripke<String> {
    /// A finite structure viewed lazily; states are named by their names.
    pub fn from_finite(ks: &KripkeStructure) -> Self {
        let ks = Arc::new(ks.clone());
        let succ_ks = Arc::clone(&ks);
        let val_ks = Arc::clone(&ks);
        let initial = ks.initial().map(|i| ks.state_name(i).to_string()).into_iter().collect();
        LazyKripke::new(ks.name.clone(), initial, move |s: &String| {
            let Ok(id) = succ_ks.state_id(s) else { return Vec::new() };
            succ_ks
                .transitions()
                .iter()
                .filter(|(a, _, _)| *a == id)
                .map(|(_, w, t)| (w.clone(), Successor::One(succ_ks.state_name(*t).to_string())))
                .collect()
        })
        .with_valuation(ks.props().iter().cloned().collect(), move |s, p| {
            val_ks.state_id(s).is_ok_and(|id| val_ks.holds(p, id))
        })
    }
}

type Signature = (u32, BTreeSet<(ExecWord, u32)>);

/// Depth-indexed equivalence classes of a lazy structure.
///
/// Class ids are only meaningful within one engine. Families contribute the
/// classes of their hinted representatives.
pub struct StratifiedEngine<'a, S> {
    lz: &'a LazyKripke<S>,
    memo: HashMap<(S, usize), u32>,
    base: HashMap<Vec<bool>, u32>,
    interners: Vec<HashMap<Signature, u32>>,
    budget: usize,
}

/// Default cap on memoized `(state, depth)` entries.
pub const DEFAULT_BUDGET: usize = 2_000_000;

impl<'a, S: LazyState> StratifiedEngine<'a, S> {
    pub fn new(lz: &'a LazyKripke<S>) -> Self {
        Self::with_budget(lz, DEFAULT_BUDGET)
    }

    pub fn with_budget(lz: &'a LazyKripke<S>, budget: usize) -> Self {
        StratifiedEngine { lz, memo: HashMap::new(), base: HashMap::new(), interners: Vec::new(), budget }
    }

    pub fn class(&mut self, s: &S, depth: usize) -> Result<u32> {
        if let Some(&c) = self.memo.get(&(s.clone(), depth)) {
            return Ok(c);
        }
        if self.memo.len() >= self.budget {
            return Err(Error::Exhausted(depth.saturating_sub(1)));
        }
        let c = if depth == 0 {
            let key: Vec<bool> = self.lz.props.iter().map(|p| self.lz.holds(s, p)).collect();
            let next = self.base.len() as u32;
            *self.base.entry(key).or_insert(next)
        } else {
            let own = self.class(s, depth - 1)?;
            let mut succ = BTreeSet::new();
            for (w, t) in self.lz.expand(s, |fam| fam.representatives(depth - 1)) {
                succ.insert((w, self.class(&t, depth - 1)?));
            }
            while self.interners.len() < depth {
                self.interners.push(HashMap::new());
            }
            let table = &mut self.interners[depth - 1];
            let next = table.len() as u32;
            *table.entry((own, succ)).or_insert(next)
        };
        self.memo.insert((s.clone(), depth), c);
        Ok(c)
    }

    /// Largest `j <= k` with `s` and `t` depth-`j` equivalent; `None` when
    /// they differ on variables.
    pub fn agreement(&mut self, s: &S, t: &S, k: usize) -> Result<Option<usize>> {
        for j in 0..=k {
            let agree = match (self.class(s, j), self.class(t, j)) {
                (Ok(a), Ok(b)) => a == b,
                (Err(_), _) | (_, Err(_)) => {
                    return Err(Error::Exhausted(j.saturating_sub(1)));
                }
            };
            if !agree {
                return Ok(j.checked_sub(1));
            }
        }
        Ok(Some(k))
    }
}

/// Stratified agreement of two states of a lazy structure.
pub fn stratified_lazy<S: LazyState>(lz: &LazyKripke<S>, s: &S, t: &S, k: usize) -> Result<Option<usize>> {
    StratifiedEngine::new(lz).agreement(s, t, k)
}

/// Member indices used when a family is cut to `width` members: hinted
/// representatives first, then members in index order.
pub(crate) fn truncated_members<S>(fam: &Family<S>, depth: usize, width: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut reps = fam.representatives(depth);
    reps.sort_unstable();
    for n in reps.into_iter().chain(0..) {
        if chosen.len() >= width {
            break;
        }
        if !chosen.contains(&n) {
            chosen.push(n);
        }
    }
    chosen
}

/// Breadth-first expansion to `depth` levels, keeping at most `width`
/// members of every family. States first reached at level `depth` are kept
/// without their outgoing transitions.
pub fn truncate<S: LazyState>(lz: &LazyKripke<S>, depth: usize, width: usize) -> KripkeStructure {
    let mut ks = KripkeStructure::new(format!("{}|{depth}x{width}", lz.name));
    for p in &lz.props {
        ks.declare_prop(p.clone());
    }
    let mut level: HashMap<S, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for s in &lz.initial {
        if !level.contains_key(s) {
            level.insert(s.clone(), 0);
            ks.add_state(s.to_string());
            queue.push_back(s.clone());
        }
    }
    if let Some(first) = lz.initial.first() {
        ks.set_initial(ks.state_id(&first.to_string()).unwrap());
    }
    while let Some(s) = queue.pop_front() {
        let l = level[&s];
        if l >= depth {
            continue;
        }
        let from = ks.add_state(s.to_string());
        for (w, t) in lz.expand(&s, |fam| truncated_members(fam, depth, width)) {
            if !level.contains_key(&t) {
                level.insert(t.clone(), l + 1);
                queue.push_back(t.clone());
            }
            let to = ks.add_state(t.to_string());
            ks.add_transition(from, w, to);
        }
    }
    for s in level.keys() {
        let id = ks.state_id(&s.to_string()).unwrap();
        for p in &lz.props {
            if lz.holds(s, p) {
                ks.set_prop(p, id);
            }
        }
    }
    ks
}

/// States reachable from `start` within `levels` steps, expanding families
/// to their hinted representatives at `hint_depth` plus the first `width`
/// members.
pub(crate) fn explore<S: LazyState>(
    lz: &LazyKripke<S>,
    start: &[S],
    levels: usize,
    hint_depth: usize,
    width: usize,
    keep: impl Fn(&S) -> bool,
) -> Vec<S> {
    let mut seen: HashSet<S> = start.iter().cloned().collect();
    let mut order: Vec<S> = start.to_vec();
    let mut frontier: Vec<S> = start.to_vec();
    for _ in 0..levels {
        let mut next = Vec::new();
        for s in &frontier {
            for (_, t) in lz.expand(s, |fam| truncated_members(fam, hint_depth, width)) {
                if keep(&t) && seen.insert(t.clone()) {
                    order.push(t.clone());
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    order
}

/// Checks every family reachable from the initial states (within `levels`
/// steps) against its collapse hint: for each depth `d <= max_depth`,
/// `samples` members must each be depth-`d` equivalent to a representative.
pub fn validate_hints<S: LazyState>(lz: &LazyKripke<S>, levels: usize, max_depth: usize, samples: usize) -> Result<()> {
    let states = explore(lz, &lz.initial, levels, max_depth, samples, |_| true);
    let mut checked = HashSet::new();
    let mut engine = StratifiedEngine::new(lz);
    for s in &states {
        for (_, succ) in lz.successors(s) {
            let Successor::Family(fam) = succ else { continue };
            if !checked.insert(fam.name.clone()) {
                continue;
            }
            for d in 0..=max_depth {
                let reps: Vec<u32> = fam
                    .representatives(d)
                    .into_iter()
                    .map(|n| engine.class(&fam.member(n), d))
                    .collect::<Result<_>>()?;
                for i in 0..samples {
                    let n = i * 3;
                    let member = fam.member(n);
                    if !reps.contains(&engine.class(&member, d)?) {
                        return Err(Error::InvalidHint(format!(
                            "family `{}`: member {n} ({member}) matches no representative at depth {d}",
                            fam.name
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}
