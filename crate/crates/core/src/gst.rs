//! Finite symbolic presentations of generalized synchronization trees.
//!
//! A [`SymbolicGst`] is a rooted tree of edges. A point edge contributes one
//! node (its target); a dense edge contributes a continuum of interior nodes
//! followed by its target, all carrying the edge's label. A dense edge may
//! carry attachments: at a dense, co-dense set of its interior points a copy
//! of the attachment's child tree branches off. Child trees are rooted at the
//! reserved vertex `@`, which stands for the attachment point.
//!
//! The nodes are grouped into finitely many [`CutClass`]es. All interior
//! points of one dense edge (excluding attachment points) are one class, and
//! all attachment points of one attachment are one class.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exec_words::{concat, ExecWord, Label, Segment, SegmentShape};

/// Root name of an attachment child tree.
pub const ATTACH_ROOT: &str = "@";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: String,
    pub target: String,
    pub segment: Segment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub host: String,
    pub child: SymbolicGst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicGst {
    pub name: String,
    pub labels: BTreeSet<Label>,
    pub props: BTreeSet<String>,
    pub root: String,
    pub edges: Vec<Edge>,
    /// Attachments in declaration order. The index of an attachment is its
    /// position among the attachments sharing its host.
    pub attachments: Vec<Attachment>,
}

/// One step into a nested attachment: host edge id and attachment index.
pub type ScopeStep = (String, usize);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CutKind {
    Vertex(String),
    Interior(String),
    AttachPoint(String, usize),
}

/// A finite class of tree nodes. `scope` locates the (possibly nested)
/// attachment child tree the class lives in; empty means the top level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CutClass {
    pub scope: Vec<ScopeStep>,
    pub kind: CutKind,
}

impl CutClass {
    pub fn vertex(v: impl Into<String>) -> Self {
        CutClass { scope: Vec::new(), kind: CutKind::Vertex(v.into()) }
    }

    pub fn interior(e: impl Into<String>) -> Self {
        CutClass { scope: Vec::new(), kind: CutKind::Interior(e.into()) }
    }

    pub fn attach_point(e: impl Into<String>, index: usize) -> Self {
        CutClass { scope: Vec::new(), kind: CutKind::AttachPoint(e.into(), index) }
    }

    fn scoped(scope: &[ScopeStep], kind: CutKind) -> Self {
        CutClass { scope: scope.to_vec(), kind }
    }

    /// The same class seen from inside attachment `(host, index)`.
    pub fn within(mut self, host: impl Into<String>, index: usize) -> Self {
        self.scope.insert(0, (host.into(), index));
        self
    }
}

impl fmt::Display for CutClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (host, i) in &self.scope {
            write!(f, "{host}:{i}/")?;
        }
        match &self.kind {
            CutKind::Vertex(v) => write!(f, "{v}"),
            CutKind::Interior(e) => write!(f, "in:{e}"),
            CutKind::AttachPoint(e, i) => write!(f, "at:{e}:{i}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidGst(self.violations))
        }
    }
}

impl SymbolicGst {
    pub fn new(name: impl Into<String>, root: impl Into<String>) -> Self {
        SymbolicGst {
            name: name.into(),
            labels: BTreeSet::new(),
            props: BTreeSet::new(),
            root: root.into(),
            edges: Vec::new(),
            attachments: Vec::new(),
        }
    }

    /// An attachment child tree, rooted at [`ATTACH_ROOT`].
    pub fn child() -> Self {
        SymbolicGst::new("", ATTACH_ROOT)
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
        segment: Segment,
    ) -> &mut Self {
        self.labels.insert(segment.label.clone());
        self.edges.push(Edge { id: id.into(), source: source.into(), target: target.into(), segment });
        self
    }

    pub fn attach(&mut self, host: impl Into<String>, child: SymbolicGst) -> &mut Self {
        self.labels.extend(child.labels.iter().cloned());
        self.attachments.push(Attachment { host: host.into(), child });
        self
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn outgoing<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.source == v)
    }

    /// Attachments hosted by edge `id`, in index order.
    pub fn attachments_of<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Attachment> + 'a {
        self.attachments.iter().filter(move |a| a.host == id)
    }

    pub fn attachment(&self, host: &str, index: usize) -> Option<&Attachment> {
        self.attachments.iter().filter(|a| a.host == host).nth(index)
    }

    /// Vertices in first-seen order: root, then edge endpoints.
    pub fn vertices(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for v in std::iter::once(&self.root).chain(self.edges.iter().flat_map(|e| [&e.source, &e.target])) {
            if seen.insert(v.as_str()) {
                out.push(v.clone());
            }
        }
        out
    }

    /// True when every edge, including those in attachments, is a point edge.
    pub fn is_discrete(&self) -> bool {
        self.attachments.is_empty() && self.edges.iter().all(|e| !e.segment.is_dense())
    }

    /// Follows `scope` into nested attachment child trees.
    pub fn resolve(&self, scope: &[ScopeStep]) -> Option<&SymbolicGst> {
        let mut g = self;
        for (host, index) in scope {
            g = &g.attachment(host, *index)?.child;
        }
        Some(g)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.validate_into("", &mut report.violations);
        report
    }

    fn validate_into(&self, ctx: &str, out: &mut Vec<String>) {
        let mut ids = HashSet::new();
        let mut incoming: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &self.edges {
            if !ids.insert(e.id.as_str()) {
                out.push(format!("{ctx}duplicate edge id `{}`", e.id));
            }
            *incoming.entry(e.target.as_str()).or_default() += 1;
            if !self.labels.contains(&e.segment.label) {
                out.push(format!("{ctx}edge `{}` uses undeclared label `{}`", e.id, e.segment.label));
            }
            if e.target == ATTACH_ROOT || (e.source == ATTACH_ROOT && self.root != ATTACH_ROOT) {
                out.push(format!("{ctx}edge `{}` misuses reserved vertex `@`", e.id));
            }
        }
        if incoming.contains_key(self.root.as_str()) {
            out.push(format!("{ctx}root `{}` has an incoming edge", self.root));
        }
        for (v, n) in &incoming {
            if *n > 1 {
                out.push(format!("{ctx}not a tree: vertex `{v}` has {n} incoming edges"));
            }
        }
        // Reachability from the root; anything left over sits on a cycle or
        // in a detached component.
        let mut reached: HashSet<&str> = HashSet::from([self.root.as_str()]);
        let mut stack = vec![self.root.as_str()];
        while let Some(v) = stack.pop() {
            for e in self.outgoing(v) {
                if reached.insert(e.target.as_str()) {
                    stack.push(e.target.as_str());
                }
            }
        }
        for v in self.vertices() {
            if !reached.contains(v.as_str()) {
                out.push(format!("{ctx}not a tree: vertex `{v}` is unreachable from the root"));
            }
        }
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for a in &self.attachments {
            let index = counts.entry(a.host.as_str()).or_default();
            match self.edge(&a.host) {
                None => out.push(format!("{ctx}attachment on unknown edge `{}`", a.host)),
                Some(e) if !e.segment.is_dense() => out.push(format!("{ctx}attachment on point edge `{}`", a.host)),
                Some(_) => {}
            }
            if a.child.root != ATTACH_ROOT {
                out.push(format!("{ctx}attachment {}:{index} must be rooted at `@`", a.host));
            }
            for l in &a.child.labels {
                if !self.labels.contains(l) {
                    out.push(format!("{ctx}attachment {}:{index} uses undeclared label `{l}`", a.host));
                }
            }
            a.child.validate_into(&format!("{ctx}{}:{index}/", a.host), out);
            *index += 1;
        }
    }

    /// All cut classes: root, then per edge its interior and attachment
    /// classes (with their child classes) followed by its target.
    pub fn cut_classes(&self) -> Vec<CutClass> {
        let mut out = vec![CutClass::vertex(self.root.clone())];
        self.collect_classes(&[], &mut out);
        out
    }

    fn collect_classes(&self, scope: &[ScopeStep], out: &mut Vec<CutClass>) {
        for e in &self.edges {
            if e.segment.is_dense() {
                out.push(CutClass::scoped(scope, CutKind::Interior(e.id.clone())));
                for (i, a) in self.attachments_of(&e.id).enumerate() {
                    out.push(CutClass::scoped(scope, CutKind::AttachPoint(e.id.clone(), i)));
                    let mut inner = scope.to_vec();
                    inner.push((e.id.clone(), i));
                    a.child.collect_classes(&inner, out);
                }
            }
            out.push(CutClass::scoped(scope, CutKind::Vertex(e.target.clone())));
        }
    }

    /// Every `(class, word)` such that each node of `class` reaches some node
    /// of the target class along a trajectory whose execution is `word`.
    pub fn successors(&self, class: &CutClass) -> Vec<(CutClass, ExecWord)> {
        let Some(g) = self.resolve(&class.scope) else {
            return Vec::new();
        };
        let scope = &class.scope;
        let mut out = Vec::new();
        match &class.kind {
            CutKind::Vertex(v) => g.below_vertex(scope, v, &mut out),
            CutKind::Interior(e) => {
                if let Some(edge) = g.edge(e) {
                    g.entering_edge(scope, edge, &mut out);
                }
            }
            CutKind::AttachPoint(e, i) => {
                if let Some(edge) = g.edge(e) {
                    g.entering_edge(scope, edge, &mut out);
                    g.below_attachment(scope, e, *i, &mut out);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn below_vertex(&self, scope: &[ScopeStep], v: &str, out: &mut Vec<(CutClass, ExecWord)>) {
        for e in self.outgoing(v) {
            self.entering_edge(scope, e, out);
        }
    }

    /// Classes reachable from a node at or before the start of edge `e`
    /// (its source, or any interior point of it; both see the same words).
    fn entering_edge(&self, scope: &[ScopeStep], e: &Edge, out: &mut Vec<(CutClass, ExecWord)>) {
        let step = ExecWord::single(e.segment.clone());
        let mut below = Vec::new();
        self.below_vertex(scope, &e.target, &mut below);
        if e.segment.is_dense() {
            out.push((CutClass::scoped(scope, CutKind::Interior(e.id.clone())), step.clone()));
            let count = self.attachments_of(&e.id).count();
            for i in 0..count {
                out.push((CutClass::scoped(scope, CutKind::AttachPoint(e.id.clone(), i)), step.clone()));
                self.below_attachment(scope, &e.id, i, &mut below);
            }
        }
        out.push((CutClass::scoped(scope, CutKind::Vertex(e.target.clone())), step.clone()));
        out.extend(below.into_iter().map(|(c, w)| (c, concat(&step, &w))));
    }

    fn below_attachment(&self, scope: &[ScopeStep], host: &str, index: usize, out: &mut Vec<(CutClass, ExecWord)>) {
        if let Some(a) = self.attachment(host, index) {
            let mut inner = scope.to_vec();
            inner.push((host.to_string(), index));
            a.child.below_vertex(&inner, ATTACH_ROOT, out);
        }
    }

    /// Words of the trajectories from a node of `c1` to a node of `c2`.
    ///
    /// Usually at most one word; an attachment point also reaches copies of
    /// its own child hanging at higher attachment points, which adds a
    /// second word with a leading dense piece. Empty when the classes are
    /// not comparable.
    pub fn exec_between(&self, c1: &CutClass, c2: &CutClass) -> BTreeSet<ExecWord> {
        self.successors(c1).into_iter().filter(|(c, _)| c == c2).map(|(_, w)| w).collect()
    }

    /// The sub-GST rooted at a representative node of `class`.
    pub fn sub_gst(&self, class: &CutClass) -> Result<SymbolicGst> {
        if let Some(((host, index), rest)) = class.scope.split_first() {
            let a = self.attachment(host, *index).ok_or_else(|| Error::UnknownState(class.to_string()))?;
            let mut child = a.child.clone();
            child.labels = self.labels.clone();
            child.props = self.props.clone();
            child.name = self.name.clone();
            return child.sub_gst(&CutClass { scope: rest.to_vec(), kind: class.kind.clone() });
        }
        let unknown = || Error::UnknownState(class.to_string());
        match &class.kind {
            CutKind::Vertex(v) => {
                if !self.vertices().contains(v) {
                    return Err(unknown());
                }
                Ok(self.subtree(v, v))
            }
            CutKind::Interior(e) | CutKind::AttachPoint(e, _) => {
                let edge = self.edge(e).filter(|e| e.segment.is_dense()).ok_or_else(unknown)?;
                let root = self.fresh_vertex("x");
                let mut sub = self.subtree(&edge.target, &edge.target);
                sub.root = root.clone();
                sub.edges.insert(
                    0,
                    Edge {
                        id: edge.id.clone(),
                        source: root.clone(),
                        target: edge.target.clone(),
                        segment: edge.segment.clone(),
                    },
                );
                let hosted: Vec<Attachment> = self.attachments_of(e).cloned().collect();
                sub.attachments.splice(0..0, hosted);
                if let CutKind::AttachPoint(_, i) = &class.kind {
                    let a = self.attachment(e, *i).ok_or_else(unknown)?;
                    let prefix = format!("{e}_{i}_");
                    let mut child = a.child.renamed(&prefix, &root);
                    sub.edges.append(&mut child.edges);
                    sub.attachments.append(&mut child.attachments);
                }
                Ok(sub)
            }
        }
    }

    /// The part of `self` below `v`, with `v` renamed to `new_root`.
    fn subtree(&self, v: &str, new_root: &str) -> SymbolicGst {
        let mut sub = SymbolicGst {
            name: self.name.clone(),
            labels: self.labels.clone(),
            props: self.props.clone(),
            root: new_root.to_string(),
            edges: Vec::new(),
            attachments: Vec::new(),
        };
        let mut keep: HashSet<&str> = HashSet::from([v]);
        // Edges are not necessarily listed parent-first, so iterate to a fixpoint.
        let mut kept_edges: Vec<&Edge> = Vec::new();
        loop {
            let before = kept_edges.len();
            for e in &self.edges {
                if keep.contains(e.source.as_str()) && !kept_edges.iter().any(|k| k.id == e.id) {
                    keep.insert(e.target.as_str());
                    kept_edges.push(e);
                }
            }
            if kept_edges.len() == before {
                break;
            }
        }
        for e in &self.edges {
            if kept_edges.iter().any(|k| k.id == e.id) {
                let mut e = e.clone();
                if e.source == v {
                    e.source = new_root.to_string();
                }
                sub.edges.push(e);
            }
        }
        for a in &self.attachments {
            if kept_edges.iter().any(|k| k.id == a.host) {
                sub.attachments.push(a.clone());
            }
        }
        sub
    }

    /// Prefixes every vertex and edge id, mapping `@` to `root`.
    fn renamed(&self, prefix: &str, root: &str) -> SymbolicGst {
        let v = |name: &str| {
            if name == ATTACH_ROOT {
                root.to_string()
            } else {
                format!("{prefix}{name}")
            }
        };
        SymbolicGst {
            name: self.name.clone(),
            labels: self.labels.clone(),
            props: self.props.clone(),
            root: v(&self.root),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    id: format!("{prefix}{}", e.id),
                    source: v(&e.source),
                    target: v(&e.target),
                    segment: e.segment.clone(),
                })
                .collect(),
            attachments: self
                .attachments
                .iter()
                .map(|a| Attachment { host: format!("{prefix}{}", a.host), child: a.child.clone() })
                .collect(),
        }
    }

    fn fresh_vertex(&self, base: &str) -> String {
        let taken = self.vertices();
        if !taken.iter().any(|v| v == base) {
            return base.to_string();
        }
        (1..).map(|i| format!("{base}{i}")).find(|c| !taken.contains(c)).unwrap()
    }
}

/// A finite rooted tree with labelled edges (a discrete synchronization tree).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiscreteTree {
    pub root: String,
    pub edges: Vec<(String, Label, String)>,
}

/// Embeds a discrete tree: each edge label becomes the label of the target
/// node, i.e. a point-segment edge.
pub fn from_discrete_st(tree: &DiscreteTree) -> SymbolicGst {
    let mut g = SymbolicGst::new("st", tree.root.clone());
    for (i, (s, l, t)) in tree.edges.iter().enumerate() {
        g.add_edge(format!("e{}", i + 1), s.clone(), t.clone(), Segment::point(l.clone()));
    }
    g
}

impl Segment {
    pub fn shape_name(&self) -> &'static str {
        match self.shape {
            SegmentShape::Point => "point",
            SegmentShape::Dense => "dense",
        }
    }
}
