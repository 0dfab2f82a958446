//! Surrogate Kripke structures of symbolic GSTs.
//!
//! [`build_surrogate`] produces the finite cut-class quotient directly.
//! [`sampled_surrogate`] works from concrete sample points instead and is
//! used to cross-check the quotient.

use num_rational::Ratio;

use crate::exec_words::{normalize, ExecWord, Segment};
use crate::gst::{CutClass, CutKind, SymbolicGst, ATTACH_ROOT};
use crate::kripke::{KripkeStructure, StateId};

/// The surrogate Kripke structure of `g`: one state per cut class, named by
/// the class, with the universal valuation over `g.props`.
pub fn build_surrogate(g: &SymbolicGst) -> KripkeStructure {
    let mut ks = KripkeStructure::new(g.name.clone());
    for l in &g.labels {
        ks.declare_label(l.clone());
    }
    let classes = g.cut_classes();
    for c in &classes {
        ks.add_state(c.to_string());
    }
    for (i, c) in classes.iter().enumerate() {
        for (target, word) in g.successors(c) {
            let j = ks.add_state(target.to_string());
            ks.add_transition(i, word, j);
        }
    }
    for p in &g.props {
        ks.declare_prop(p.clone());
    }
    ks.make_universal();
    ks.set_initial(0);
    ks
}

/// State of `ks` (a surrogate built by [`build_surrogate`]) for `class`.
pub fn class_state(ks: &KripkeStructure, class: &CutClass) -> Option<StateId> {
    ks.state_id(&class.to_string()).ok()
}

/// Concrete sample points of a GST.
#[derive(Clone, Debug)]
pub struct SampledGst {
    pub structure: KripkeStructure,
    /// Cut class of each sampled state; test metadata only, the transitions
    /// are computed without it.
    pub class_of: Vec<CutClass>,
}

struct Node {
    class: CutClass,
    parent: Option<usize>,
    /// Execution piece from the parent to this node.
    piece: Option<Segment>,
    /// Dense edge instance this node is an interior sample of, with its
    /// position in `(0, 1)`.
    line: Option<(usize, Ratio<i64>)>,
    /// Nodes of the child-tree copy hanging off this attachment sample.
    children_attached: Vec<usize>,
}

struct Line {
    label: Segment,
    samples: Vec<(Ratio<i64>, usize)>,
}

struct Sampler {
    k: usize,
    nodes: Vec<Node>,
    lines: Vec<Line>,
}

impl Sampler {
    fn push(&mut self, class: CutClass, parent: Option<usize>, piece: Option<Segment>) -> usize {
        self.nodes.push(Node { class, parent, piece, line: None, children_attached: Vec::new() });
        self.nodes.len() - 1
    }

    /// Expands everything below `at`, which is a node standing for vertex `v`
    /// of `g` (in scope `scope`).
    fn expand(&mut self, g: &SymbolicGst, scope: &[(String, usize)], v: &str, at: usize) {
        let edges: Vec<_> = g.outgoing(v).cloned().collect();
        for e in edges {
            let target_class = CutClass { scope: scope.to_vec(), kind: CutKind::Vertex(e.target.clone()) };
            if !e.segment.is_dense() {
                let t = self.push(target_class, Some(at), Some(e.segment.clone()));
                self.expand(g, scope, &e.target, t);
                continue;
            }
            let attachments = g.attachments_of(&e.id).count();
            let kinds = attachments + 1;
            let total = self.k * kinds;
            let line_id = self.lines.len();
            self.lines.push(Line { label: e.segment.clone(), samples: Vec::new() });
            let mut prev = at;
            for slot in 0..total {
                let pos = Ratio::new(slot as i64 + 1, total as i64 + 1);
                let kind = slot % kinds;
                let class = if kind == 0 {
                    CutClass { scope: scope.to_vec(), kind: CutKind::Interior(e.id.clone()) }
                } else {
                    CutClass { scope: scope.to_vec(), kind: CutKind::AttachPoint(e.id.clone(), kind - 1) }
                };
                let n = self.push(class, Some(prev), Some(e.segment.clone()));
                self.nodes[n].line = Some((line_id, pos));
                self.lines[line_id].samples.push((pos, n));
                if kind > 0 {
                    let child = &g.attachment(&e.id, kind - 1).unwrap().child;
                    let mut inner = scope.to_vec();
                    inner.push((e.id.clone(), kind - 1));
                    let first = self.nodes.len();
                    self.expand(child, &inner, ATTACH_ROOT, n);
                    self.nodes[n].children_attached = (first..self.nodes.len()).collect();
                }
                prev = n;
            }
            let t = self.push(target_class, Some(prev), Some(e.segment.clone()));
            self.expand(g, scope, &e.target, t);
        }
    }

    fn path_word(&self, from: usize, to: usize) -> Option<ExecWord> {
        let mut pieces = Vec::new();
        let mut cur = to;
        while cur != from {
            let node = &self.nodes[cur];
            pieces.push(node.piece.clone()?);
            cur = node.parent?;
        }
        pieces.reverse();
        normalize(pieces).ok()
    }
}

/// Concrete sample points with their trajectory words.
///
/// Every dense edge gets `k` plain interior samples and `k` samples per
/// attachment, interleaved; each attachment sample carries its own expanded
/// copy of the child tree. Words are read off concrete paths. From an
/// interior sample `p`, the samples at or below `p` on the same edge are also
/// reachable: the rescaling `(p, end] -> (0, end]` is an order isomorphism of
/// the edge, so their images above `p` are nodes with identical futures.
pub fn sample_points(g: &SymbolicGst, k: usize) -> SampledGst {
    let mut s = Sampler { k: k.max(1), nodes: Vec::new(), lines: Vec::new() };
    let root = s.push(CutClass::vertex(g.root.clone()), None, None);
    s.expand(g, &[], &g.root, root);

    let mut ks = KripkeStructure::new(format!("{}~sampled", g.name));
    for l in &g.labels {
        ks.declare_label(l.clone());
    }
    let mut counts = std::collections::HashMap::new();
    for node in &s.nodes {
        let n = counts.entry(node.class.clone()).or_insert(0usize);
        ks.add_state(format!("{}#{}", node.class, n));
        *n += 1;
    }
    for p in 0..s.nodes.len() {
        // Proper descendants.
        for q in 0..s.nodes.len() {
            if q != p {
                if let Some(w) = s.path_word(p, q) {
                    ks.add_transition(p, w, q);
                }
            }
        }
        // Rescaled images of lower samples on the same edge.
        if let Some((line, pos)) = s.nodes[p].line {
            let step = ExecWord::single(s.lines[line].label.clone());
            for &(other_pos, q) in &s.lines[line].samples {
                if other_pos > pos {
                    continue;
                }
                ks.add_transition(p, step.clone(), q);
                for &d in &s.nodes[q].children_attached {
                    if let Some(w) = s.path_word(q, d) {
                        ks.add_transition(p, step.concat(&w), d);
                    }
                }
            }
        }
    }
    for p in &g.props {
        ks.declare_prop(p.clone());
    }
    ks.make_universal();
    ks.set_initial(root);
    SampledGst { structure: ks, class_of: s.nodes.into_iter().map(|n| n.class).collect() }
}

pub fn sampled_surrogate(g: &SymbolicGst, k: usize) -> KripkeStructure {
    sample_points(g, k).structure
}
