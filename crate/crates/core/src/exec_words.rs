//! Modality labels: canonical words of point and dense segments.
//!
//! An [`ExecWord`] names one order-equivalence class of modal executions.
//! Every execution supported here is a finite left-to-right concatenation of
//! segments, each of which is either a single point or a half-open real
//! interval `(x, y]`, carrying one label. Two executions are order
//! equivalent exactly when their canonical words coincide.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Rational sample position used by [`realize`].
pub type Position = Ratio<i64>;

/// An action label. Must match `[A-Za-z][A-Za-z0-9_.]*`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Label(name))
        } else {
            Err(Error::InvalidLabel(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Order type of a segment.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SegmentShape {
    /// A one-element set.
    Point,
    /// A half-open real interval: dense, no least element, has a greatest one.
    Dense,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub shape: SegmentShape,
    pub label: Label,
}

impl Segment {
    pub fn point(label: Label) -> Self {
        Segment { shape: SegmentShape::Point, label }
    }

    pub fn dense(label: Label) -> Self {
        Segment { shape: SegmentShape::Dense, label }
    }

    pub fn is_dense(&self) -> bool {
        self.shape == SegmentShape::Dense
    }

    /// Whether `self` followed by `next` collapses into a single segment.
    fn merges_with(&self, next: &Segment) -> bool {
        self.is_dense() && next.is_dense() && self.label == next.label
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape {
            SegmentShape::Point => write!(f, "P {}", self.label),
            SegmentShape::Dense => write!(f, "D {}", self.label),
        }
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A canonical, nonempty word of segments.
///
/// Canonical means no two adjacent segments are both dense with the same
/// label. The only way to build one is through [`normalize`] or the
/// constructors that call it, so the invariant always holds.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExecWord {
    segments: Vec<Segment>,
}

/// Exhaustively merges adjacent same-label dense pairs.
///
/// The rewrite `Dense(l) Dense(l) -> Dense(l)` is length-reducing and its
/// critical pairs all join, so a single left-to-right pass reaches the
/// unique normal form.
pub fn normalize(raw: impl IntoIterator<Item = Segment>) -> Result<ExecWord> {
    let mut segments: Vec<Segment> = Vec::new();
    for seg in raw {
        match segments.last() {
            Some(last) if last.merges_with(&seg) => {}
            _ => segments.push(seg),
        }
    }
    if segments.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(ExecWord { segments })
}

impl ExecWord {
    pub fn single(segment: Segment) -> Self {
        ExecWord { segments: vec![segment] }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.segments.iter().map(|s| &s.label)
    }

    pub fn is_point_only(&self) -> bool {
        self.segments.iter().all(|s| !s.is_dense())
    }

    /// The canonical word of `self` followed by `other`.
    pub fn concat(&self, other: &ExecWord) -> ExecWord {
        concat(self, other)
    }
}

/// Left-open concatenation of two executions, as a canonical word.
pub fn concat(w1: &ExecWord, w2: &ExecWord) -> ExecWord {
    let mut segments = w1.segments.clone();
    let mut rest = w2.segments.iter();
    if let (Some(last), Some(first)) = (segments.last(), w2.segments.first()) {
        if last.merges_with(first) {
            rest.next();
        }
    }
    segments.extend(rest.cloned());
    ExecWord { segments }
}

/// Order equivalence of the executions two canonical words denote.
pub fn equivalent(w1: &ExecWord, w2: &ExecWord) -> bool {
    w1 == w2
}

/// All ways of writing `w` as `concat(w1, w2)`.
///
/// Every segment boundary gives one split. Every dense segment can also be
/// cut at an interior point, leaving a dense piece on both sides; cutting at
/// a boundary next to a dense segment lands on the same canonical pair when
/// the neighbour has the same label, which the set absorbs.
pub fn splits(w: &ExecWord) -> BTreeSet<(ExecWord, ExecWord)> {
    let segs = &w.segments;
    let mut out = BTreeSet::new();
    for i in 1..segs.len() {
        out.insert((ExecWord { segments: segs[..i].to_vec() }, ExecWord { segments: segs[i..].to_vec() }));
    }
    for (i, seg) in segs.iter().enumerate() {
        if seg.is_dense() {
            out.insert((ExecWord { segments: segs[..=i].to_vec() }, ExecWord { segments: segs[i..].to_vec() }));
        }
    }
    out
}

/// Concrete rational samples of an execution in the class `w`.
///
/// Segment `i` occupies `(i, i + 1]`. A point segment is sampled at `i + 1`;
/// a dense one at `i + j / (k + 1)` for `j = 1..=k` and at its right end.
pub fn realize(w: &ExecWord, k: usize) -> Vec<(Position, Label)> {
    let k = k.max(1) as i64;
    let mut out = Vec::new();
    for (i, seg) in w.segments.iter().enumerate() {
        let base = Position::from_integer(i as i64);
        if seg.is_dense() {
            for j in 1..=k {
                out.push((base + Position::new(j, k + 1), seg.label.clone()));
            }
        }
        out.push((base + 1, seg.label.clone()));
    }
    out
}

/// Parses `seg ("," seg)*` where `seg := ("D"|"P") label`. The result is
/// normalized.
pub fn parse_word(text: &str) -> Result<ExecWord> {
    parse_word_at(text, 0)
}

/// Like [`parse_word`], reporting error columns relative to `offset`.
pub(crate) fn parse_word_at(text: &str, offset: usize) -> Result<ExecWord> {
    let mut raw = Vec::new();
    let mut pos = 0;
    for piece in text.split(',') {
        let start = pos + (piece.len() - piece.trim_start().len());
        let mut parts = piece.split_whitespace();
        let shape = match parts.next() {
            Some("D") | Some("dense") => SegmentShape::Dense,
            Some("P") | Some("point") => SegmentShape::Point,
            Some(other) => return Err(Error::syntax(offset + start, format!("expected `D` or `P`, found `{other}`"))),
            None => return Err(Error::syntax(offset + start, "expected a segment")),
        };
        let label = match parts.next() {
            Some(l) => Label::new(l).map_err(|_| Error::syntax(offset + start, format!("invalid label `{l}`")))?,
            None => return Err(Error::syntax(offset + start, "missing label")),
        };
        if let Some(extra) = parts.next() {
            return Err(Error::syntax(offset + start, format!("unexpected `{extra}` after segment")));
        }
        raw.push(Segment { shape, label });
        pos += piece.len() + 1;
    }
    normalize(raw)
}

pub fn format_word(w: &ExecWord) -> String {
    w.to_string()
}

impl fmt::Display for ExecWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{seg}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExecWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for ExecWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}
