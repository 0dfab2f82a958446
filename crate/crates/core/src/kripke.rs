//! Finite Kripke structures whose transitions are labelled by [`ExecWord`]s.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exec_words::{ExecWord, Label};

pub type StateId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeStructure {
    pub name: String,
    labels: BTreeSet<Label>,
    props: BTreeSet<String>,
    states: Vec<String>,
    index: HashMap<String, StateId>,
    transitions: BTreeSet<(StateId, ExecWord, StateId)>,
    valuation: BTreeMap<String, BTreeSet<StateId>>,
    initial: Option<StateId>,
}

impl KripkeStructure {
    pub fn new(name: impl Into<String>) -> Self {
        KripkeStructure {
            name: name.into(),
            labels: BTreeSet::new(),
            props: BTreeSet::new(),
            states: Vec::new(),
            index: HashMap::new(),
            transitions: BTreeSet::new(),
            valuation: BTreeMap::new(),
            initial: None,
        }
    }

    /// Adds a state, or returns the id of an existing one with that name.
    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        let name = name.into();
        if let Some(&id) = self.index.get(&name) {
            return id;
        }
        let id = self.states.len();
        self.index.insert(name.clone(), id);
        self.states.push(name);
        id
    }

    /// Inserts a transition; returns false if it was already present.
    pub fn add_transition(&mut self, from: StateId, word: ExecWord, to: StateId) -> bool {
        assert!(from < self.states.len() && to < self.states.len(), "transition endpoint out of range");
        self.labels.extend(word.labels().cloned());
        self.transitions.insert((from, word, to))
    }

    pub fn declare_label(&mut self, label: Label) {
        self.labels.insert(label);
    }

    pub fn declare_prop(&mut self, prop: impl Into<String>) {
        let prop = prop.into();
        self.valuation.entry(prop.clone()).or_default();
        self.props.insert(prop);
    }

    pub fn set_prop(&mut self, prop: &str, state: StateId) {
        self.declare_prop(prop);
        self.valuation.get_mut(prop).unwrap().insert(state);
    }

    /// Makes every declared variable true in every state.
    pub fn make_universal(&mut self) {
        let all: BTreeSet<StateId> = (0..self.states.len()).collect();
        for set in self.valuation.values_mut() {
            *set = all.clone();
        }
    }

    pub fn set_initial(&mut self, state: StateId) {
        self.initial = Some(state);
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn labels(&self) -> &BTreeSet<Label> {
        &self.labels
    }

    pub fn props(&self) -> &BTreeSet<String> {
        &self.props
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn transitions(&self) -> &BTreeSet<(StateId, ExecWord, StateId)> {
        &self.transitions
    }

    pub fn has_transition(&self, from: StateId, word: &ExecWord, to: StateId) -> bool {
        // BTreeSet lookup needs an owned key; clone is cheap relative to scans.
        self.transitions.contains(&(from, word.clone(), to))
    }

    /// Outgoing transitions per state, in sorted order.
    pub fn adjacency(&self) -> Vec<Vec<(&ExecWord, StateId)>> {
        let mut adj = vec![Vec::new(); self.states.len()];
        for (s, w, t) in &self.transitions {
            adj[*s].push((w, *t));
        }
        adj
    }

    /// Whether `prop` holds at `state`. Undeclared variables are false.
    pub fn holds(&self, prop: &str, state: StateId) -> bool {
        self.valuation.get(prop).is_some_and(|s| s.contains(&state))
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<StateId>> {
        &self.valuation
    }

    /// The set of variables true at `state`, as a sorted list.
    pub fn true_props(&self, state: StateId) -> Vec<&str> {
        self.valuation.iter().filter(|(_, set)| set.contains(&state)).map(|(p, _)| p.as_str()).collect()
    }

    /// Disjoint union; states of `a` keep their ids, states of `b` are
    /// shifted by `a.num_states()`. Names get `1.`/`2.` prefixes.
    pub fn disjoint_union(a: &KripkeStructure, b: &KripkeStructure) -> KripkeStructure {
        let mut u = KripkeStructure::new(format!("{}+{}", a.name, b.name));
        for (prefix, ks) in [("1.", a), ("2.", b)] {
            let offset = u.num_states();
            for name in &ks.states {
                u.add_state(format!("{prefix}{name}"));
            }
            for (s, w, t) in &ks.transitions {
                u.add_transition(s + offset, w.clone(), t + offset);
            }
            u.labels.extend(ks.labels.iter().cloned());
            for p in &ks.props {
                u.declare_prop(p.clone());
            }
            for (p, set) in &ks.valuation {
                for s in set {
                    u.set_prop(p, s + offset);
                }
            }
        }
        u.initial = a.initial;
        u
    }

    /// Graphviz rendering. With `blocks`, each node is annotated with its
    /// block id.
    pub fn to_dot(&self, blocks: Option<&[usize]>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(&self.name));
        for (id, name) in self.states.iter().enumerate() {
            let label = match blocks {
                Some(b) => format!("{name}\\nblock {}", b[id]),
                None => name.clone(),
            };
            let shape = if self.initial == Some(id) { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  s{id} [label=\"{}\", shape={shape}];", escape_keep_newline(&label));
        }
        for (s, w, t) in &self.transitions {
            let _ = writeln!(out, "  s{s} -> s{t} [label=\"{}\"];", escape(&w.to_string()));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn escape_keep_newline(s: &str) -> String {
    s.replace('"', "\\\"")
}
