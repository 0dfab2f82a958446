//! GHML/HML formulas and their model checking.
//!
//! Diamond modalities are labelled by canonical [`ExecWord`]s, which serve
//! both as GHML execution classes and as HML action labels of surrogate
//! structures.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec_words::{parse_word_at, ExecWord};
use crate::gst::SymbolicGst;
use crate::kripke::{KripkeStructure, StateId};
use crate::surrogate::{build_surrogate, sampled_surrogate};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    Prop(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Diamond(ExecWord, Box<Formula>),
}

impl Formula {
    pub fn tt() -> Self {
        Formula::True
    }

    pub fn ff() -> Self {
        Formula::True.not()
    }

    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        self.not().and(other.not()).not()
    }

    pub fn implies(self, other: Formula) -> Self {
        self.and(other.not()).not()
    }

    pub fn diamond(word: ExecWord, inner: Formula) -> Self {
        Formula::Diamond(word, Box::new(inner))
    }

    /// `[w] f`, i.e. `~<w>~f`.
    pub fn boxed(word: ExecWord, inner: Formula) -> Self {
        Formula::diamond(word, inner.not()).not()
    }

    /// Conjunction of all `parts`; `true` when empty.
    pub fn all(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Disjunction of all `parts`; `false` when empty.
    pub fn any(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts.into_iter().reduce(Formula::or).unwrap_or_else(Formula::ff)
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::True | Formula::Prop(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Diamond(_, f) => 1 + f.modal_depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::Prop(_) => 1,
            Formula::Not(f) | Formula::Diamond(_, f) => 1 + f.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Prop(p) => write!(f, "@{p}"),
            Formula::Not(inner) => write!(f, "~{inner}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Diamond(w, inner) => write!(f, "<{w}> {inner}"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn format_formula(f: &Formula) -> String {
    f.to_string()
}

/// Parses a formula.
///
/// ```text
/// imp   := or ("->" imp)?
/// or    := and ("|" and)*
/// and   := unary ("&" unary)*
/// unary := "~" unary | "<" word ">" unary | "[" word "]" unary | atom
/// atom  := "true" | "false" | "@" name | "(" imp ")"
/// ```
///
/// `false`, `|`, `->` and `[w]` are eliminated while parsing.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser { src: text, pos: 0 };
    let f = p.implication()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(Error::syntax(p.pos, "unexpected trailing input"));
    }
    Ok(f)
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with(kw) && !rest[kw.len()..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat("|") {
            f = f.or(self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = f.and(self.unary()?);
        }
        Ok(f)
    }

    fn word_until(&mut self, close: char) -> Result<ExecWord> {
        let start = self.pos;
        let Some(len) = self.rest().find(close) else {
            return Err(Error::syntax(start, format!("missing `{close}`")));
        };
        let word = parse_word_at(&self.src[start..start + len], start)?;
        self.pos = start + len + 1;
        Ok(word)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("~") {
            return Ok(self.unary()?.not());
        }
        if self.eat("<") {
            let w = self.word_until('>')?;
            return Ok(Formula::diamond(w, self.unary()?));
        }
        if self.eat("[") {
            let w = self.word_until(']')?;
            return Ok(Formula::boxed(w, self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.keyword("true") {
            return Ok(Formula::True);
        }
        if self.keyword("false") {
            return Ok(Formula::ff());
        }
        if self.eat("@") {
            let rest = self.rest();
            let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '.')).unwrap_or(rest.len());
            if len == 0 || !rest.starts_with(|c: char| c.is_ascii_alphabetic()) {
                return Err(Error::syntax(self.pos, "expected a variable name after `@`"));
            }
            let name = rest[..len].to_string();
            self.pos += len;
            return Ok(Formula::Prop(name));
        }
        if self.eat("(") {
            let f = self.implication()?;
            if !self.eat(")") {
                return Err(Error::syntax(self.pos, "expected `)`"));
            }
            return Ok(f);
        }
        self.skip_ws();
        if self.pos >= self.src.len() {
            Err(Error::syntax(self.pos, "unexpected end of formula"))
        } else {
            Err(Error::syntax(self.pos, "expected a formula"))
        }
    }
}

/// Satisfaction set of `f` over all states of `ks`.
pub fn sat_set(ks: &KripkeStructure, f: &Formula) -> Vec<bool> {
    let n = ks.num_states();
    match f {
        Formula::True => vec![true; n],
        Formula::Prop(p) => {
            if !ks.props().contains(p) {
                log::warn!("variable `{p}` is not declared in `{}`; treating it as false", ks.name);
            }
            (0..n).map(|s| ks.holds(p, s)).collect()
        }
        Formula::Not(inner) => sat_set(ks, inner).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => {
            let (a, b) = (sat_set(ks, a), sat_set(ks, b));
            a.into_iter().zip(b).map(|(x, y)| x && y).collect()
        }
        Formula::Diamond(w, inner) => {
            let target = sat_set(ks, inner);
            let mut out = vec![false; n];
            for (s, word, t) in ks.transitions() {
                if word == w && target[*t] {
                    out[*s] = true;
                }
            }
            out
        }
    }
}

pub fn mc_kripke(ks: &KripkeStructure, state: StateId, f: &Formula) -> Result<bool> {
    if state >= ks.num_states() {
        return Err(Error::UnknownState(state.to_string()));
    }
    Ok(sat_set(ks, f)[state])
}

/// Reads a GHML formula as an HML formula over execution-class labels.
///
/// Both readings share one syntax tree here, so the translation is the
/// identity; it is kept as a named step to mark where one logic is traded
/// for the other.
pub fn to_hml(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::Prop(p) => Formula::Prop(p.clone()),
        Formula::Not(inner) => to_hml(inner).not(),
        Formula::And(a, b) => to_hml(a).and(to_hml(b)),
        Formula::Diamond(w, inner) => Formula::diamond(w.clone(), to_hml(inner)),
    }
}

/// Inverse reading of [`to_hml`].
pub fn to_ghml(f: &Formula) -> Formula {
    to_hml(f)
}

/// Whether the root of `g` satisfies `f`, decided on the surrogate.
pub fn mc_gst(g: &SymbolicGst, f: &Formula) -> bool {
    let ks = build_surrogate(g);
    sat_set(&ks, &to_hml(f))[0]
}

/// Evaluates `f` over concrete sample points of `g` without the cut-class
/// quotient. Intended as a cross-check of [`mc_gst`].
pub fn mc_gst_direct(g: &SymbolicGst, f: &Formula, k: usize) -> bool {
    let ks = sampled_surrogate(g, k.max(2));
    let root = ks.initial().unwrap_or(0);
    sat_set(&ks, f)[root]
}
