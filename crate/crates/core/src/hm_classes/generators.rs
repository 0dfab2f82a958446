//! Built-in infinite-state generators.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec_words::{ExecWord, Label, Segment};
use crate::gst::SymbolicGst;

use super::lazy::{Family, LazyKripke, Successor};

fn point(l: &str) -> Segment {
    Segment::point(Label::new(l).unwrap())
}

fn dense(l: &str) -> Segment {
    Segment::dense(Label::new(l).unwrap())
}

fn word(segments: &[Segment]) -> ExecWord {
    crate::exec_words::normalize(segments.iter().cloned()).unwrap()
}

/// States of [`gen_fig3`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fig3State {
    U,
    V,
    /// Position `i` (1-based) on the finite α-chain of length `n`.
    Chain {
        n: usize,
        i: usize,
    },
    /// Position on v's infinite α-chain.
    Inf(usize),
    /// Common deadlock reached by β.
    Dead,
}

impl Fig3State {
    /// Remaining α-steps on a finite chain.
    pub fn remaining(&self) -> Option<u64> {
        match self {
            Fig3State::Chain { n, i } => Some((n - i) as u64),
            _ => None,
        }
    }

    pub fn is_chain(&self) -> bool {
        matches!(self, Fig3State::Chain { .. })
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Fig3State::Inf(_))
    }
}

impl fmt::Display for Fig3State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fig3State::U => f.write_str("u"),
            Fig3State::V => f.write_str("v"),
            Fig3State::Chain { n, i } => write!(f, "c{n}_{i}"),
            Fig3State::Inf(i) => write!(f, "w{i}"),
            Fig3State::Dead => f.write_str("d"),
        }
    }
}

impl FromStr for Fig3State {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownState(s.to_string());
        match s {
            "u" => return Ok(Fig3State::U),
            "v" => return Ok(Fig3State::V),
            "d" => return Ok(Fig3State::Dead),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix('c') {
            let (n, i) = rest.split_once('_').ok_or_else(bad)?;
            let n: usize = n.parse().map_err(|_| bad())?;
            let i: usize = i.parse().map_err(|_| bad())?;
            if i == 0 || i > n {
                return Err(bad());
            }
            return Ok(Fig3State::Chain { n, i });
        }
        if let Some(rest) = s.strip_prefix('w') {
            return rest.parse().map(Fig3State::Inf).map_err(|_| bad());
        }
        Err(bad())
    }
}

/// The words of [`gen_fig3`]: `[P alpha]`, `[P beta]` and `[P alpha, P beta]`.
pub fn fig3_words() -> (ExecWord, ExecWord, ExecWord) {
    (word(&[point("alpha")]), word(&[point("beta")]), word(&[point("alpha"), point("beta")]))
}

/// Finite chains versus finite chains plus one infinite chain.
///
/// `u` has an α-successor `c{n}_1` for every `n >= 1`, starting a chain of
/// exactly `n` states. `v` has the same successors plus `w0`, the start of
/// an infinite α-chain. Every chain state can do β into the deadlock `d`,
/// and every state with an α-successor also has the `α·β` composite. The
/// returned pair is `(u, v)`; the rank is the remaining chain length.
pub fn gen_fig3() -> (LazyKripke<Fig3State>, Fig3State, Fig3State) {
    let (alpha, beta, alpha_beta) = fig3_words();
    let lz = LazyKripke::new("fig3", vec![Fig3State::U, Fig3State::V], move |s: &Fig3State| {
        let chains = || {
            Successor::Family(Family::new("chains", |m| Fig3State::Chain { n: m + 1, i: 1 }, |d| (0..=d + 1).collect()))
        };
        match *s {
            Fig3State::U => vec![(alpha.clone(), chains()), (alpha_beta.clone(), Successor::One(Fig3State::Dead))],
            Fig3State::V => vec![
                (alpha.clone(), chains()),
                (alpha.clone(), Successor::One(Fig3State::Inf(0))),
                (alpha_beta.clone(), Successor::One(Fig3State::Dead)),
            ],
            Fig3State::Chain { n, i } => {
                let mut out = vec![(beta.clone(), Successor::One(Fig3State::Dead))];
                if i < n {
                    out.push((alpha.clone(), Successor::One(Fig3State::Chain { n, i: i + 1 })));
                    out.push((alpha_beta.clone(), Successor::One(Fig3State::Dead)));
                }
                out
            }
            Fig3State::Inf(i) => vec![
                (alpha.clone(), Successor::One(Fig3State::Inf(i + 1))),
                (beta.clone(), Successor::One(Fig3State::Dead)),
                (alpha_beta.clone(), Successor::One(Fig3State::Dead)),
            ],
            Fig3State::Dead => Vec::new(),
        }
    })
    .with_rank(Fig3State::remaining);
    (lz, Fig3State::U, Fig3State::V)
}

/// States of [`gen_gx`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GxState {
    /// Root and the low region below every branch point.
    R,
    /// Interior between branch points `k` and `k + 1`.
    I(usize),
    /// Branch vertex `k`.
    A(usize),
    /// Leaf reached by the β point.
    F,
}

impl fmt::Display for GxState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GxState::R => f.write_str("R"),
            GxState::I(k) => write!(f, "I_{k}"),
            GxState::A(k) => write!(f, "A_{k}"),
            GxState::F => f.write_str("F"),
        }
    }
}

impl FromStr for GxState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownState(s.to_string());
        match s {
            "R" => Ok(GxState::R),
            "F" => Ok(GxState::F),
            _ => {
                let (kind, k) = s.split_once('_').ok_or_else(bad)?;
                let k: usize = k.parse().map_err(|_| bad())?;
                match kind {
                    "I" => Ok(GxState::I(k)),
                    "A" => Ok(GxState::A(k)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// Cut-class quotient of the surrogate of a dense line `a` with a β point
/// hanging off each of the countably many branch points, generated lazily.
pub fn gen_gx() -> LazyKripke<GxState> {
    let da = word(&[dense("a")]);
    let dab = word(&[dense("a"), point("b")]);
    let pb = word(&[point("b")]);
    LazyKripke::new("gx", vec![GxState::R], move |s: &GxState| {
        let hint = |d: usize| (0..=d + 2).collect::<Vec<_>>();
        let one = |w: &ExecWord, t| (w.clone(), Successor::One(t));
        match *s {
            GxState::R => vec![
                one(&da, GxState::R),
                (da.clone(), Successor::Family(Family::new("I", GxState::I, hint))),
                (da.clone(), Successor::Family(Family::new("A", GxState::A, hint))),
                one(&dab, GxState::F),
            ],
            GxState::I(k) => {
                let mut out = vec![one(&da, GxState::I(k))];
                out.extend((0..k).map(|j| one(&da, GxState::I(j))));
                out.extend((0..=k).map(|j| one(&da, GxState::A(j))));
                out.push(one(&dab, GxState::F));
                out
            }
            GxState::A(k) => {
                let mut out = vec![one(&pb, GxState::F)];
                out.extend((0..k).map(|j| one(&da, GxState::I(j))));
                out.extend((0..k).map(|j| one(&da, GxState::A(j))));
                if k > 0 {
                    out.push(one(&dab, GxState::F));
                }
                out
            }
            GxState::F => Vec::new(),
        }
    })
}

/// The unit interval: a single dense `a` edge.
pub fn gen_unit() -> SymbolicGst {
    let mut g = SymbolicGst::new("unit", "r");
    g.add_edge("e1", "r", "t", dense("a"));
    g
}

/// A dense `a` edge with a point `b` branching off a dense set of its points.
pub fn gen_dense_attach() -> SymbolicGst {
    let mut g = gen_unit();
    g.name = "denseattach".into();
    let mut child = SymbolicGst::child();
    child.add_edge("f1", "@", "u", point("b"));
    g.attach("e1", child);
    g
}
