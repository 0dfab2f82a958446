//! Line-oriented text format for symbolic GSTs and Kripke structures.
//!
//! ```text
//! # G_[0,1] with a point b hanging off every interior point
//! gst dense {
//!   labels a, b;
//!   root r;
//!   edge e1: r -> t [dense a];
//!   attach e1 { edge f1: @ -> u [point b]; }
//! }
//!
//! kripke m {
//!   labels a;
//!   props p;
//!   state s0 init;
//!   state s1;
//!   prop p: s0;
//!   trans s0 -> s0 [D a];
//!   trans s0 -> s1 [D a];
//! }
//! ```
//!
//! Names made of `[A-Za-z0-9_.#/@~']` may be written bare (a `#` at the
//! start of a token opens a comment); anything else is written as a
//! double-quoted string.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exec_words::{is_identifier, normalize, ExecWord, Label, Segment, SegmentShape};
use crate::gst::{SymbolicGst, ATTACH_ROOT};
use crate::kripke::KripkeStructure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelFile {
    Gst(SymbolicGst),
    Kripke(KripkeStructure),
}

impl ModelFile {
    pub fn labels(&self) -> &BTreeSet<Label> {
        match self {
            ModelFile::Gst(g) => &g.labels,
            ModelFile::Kripke(k) => k.labels(),
        }
    }

    pub fn props(&self) -> &BTreeSet<String> {
        match self {
            ModelFile::Gst(g) => &g.props,
            ModelFile::Kripke(k) => k.props(),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            ModelFile::Gst(g) => &g.name,
            ModelFile::Kripke(k) => &k.name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Name,
    Punct(char),
    Arrow,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    text: String,
    line: usize,
    col: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "_.#/@~'".contains(c)
}

fn model_err(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Model { line, col, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            _ if c.is_whitespace() => {
                bump(&mut chars);
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            '{' | '}' | ';' | ',' | ':' | '[' | ']' => {
                bump(&mut chars);
                tokens.push(Token { kind: Kind::Punct(c), text: c.to_string(), line: tl, col: tc });
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() != Some(&'>') {
                    return Err(model_err(tl, tc, "expected `->`"));
                }
                bump(&mut chars);
                tokens.push(Token { kind: Kind::Arrow, text: "->".into(), line: tl, col: tc });
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match chars.peek() {
                        None | Some('\n') => return Err(model_err(tl, tc, "unterminated string")),
                        Some('"') => {
                            bump(&mut chars);
                            break;
                        }
                        Some('\\') => {
                            bump(&mut chars);
                            match chars.peek() {
                                Some('"') | Some('\\') => s.push(bump(&mut chars)),
                                _ => return Err(model_err(line, col, "invalid escape")),
                            }
                        }
                        Some(_) => s.push(bump(&mut chars)),
                    }
                }
                tokens.push(Token { kind: Kind::Name, text: s, line: tl, col: tc });
            }
            _ if is_name_char(c) => {
                let mut s = String::new();
                while chars.peek().is_some_and(|&c| is_name_char(c)) {
                    s.push(bump(&mut chars));
                }
                tokens.push(Token { kind: Kind::Name, text: s, line: tl, col: tc });
            }
            _ => return Err(model_err(tl, tc, format!("unexpected character `{c}`"))),
        }
    }
    tokens.push(Token { kind: Kind::Eof, text: String::new(), line, col });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != Kind::Eof {
            self.pos += 1;
        }
        t
    }

    fn err(&self, t: &Token, message: impl Into<String>) -> Error {
        model_err(t.line, t.col, message)
    }

    fn describe(t: &Token) -> String {
        match t.kind {
            Kind::Eof => "end of input".into(),
            _ => format!("`{}`", t.text),
        }
    }

    fn punct(&mut self, c: char) -> Result<Token> {
        let t = self.next();
        if t.kind == Kind::Punct(c) {
            Ok(t)
        } else {
            Err(self.err(&t, format!("expected `{c}`, found {}", Self::describe(&t))))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().kind == Kind::Punct(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn arrow(&mut self) -> Result<()> {
        let t = self.next();
        if t.kind == Kind::Arrow {
            Ok(())
        } else {
            Err(self.err(&t, format!("expected `->`, found {}", Self::describe(&t))))
        }
    }

    fn name(&mut self, what: &str) -> Result<Token> {
        let t = self.next();
        if t.kind == Kind::Name {
            Ok(t)
        } else {
            Err(self.err(&t, format!("expected {what}, found {}", Self::describe(&t))))
        }
    }

    fn name_list(&mut self, what: &str) -> Result<Vec<Token>> {
        let mut out = vec![self.name(what)?];
        while self.eat(',') {
            out.push(self.name(what)?);
        }
        Ok(out)
    }

    fn label(&mut self, declared: &BTreeSet<Label>) -> Result<Label> {
        let t = self.name("a label")?;
        let label = Label::new(&t.text).map_err(|_| self.err(&t, format!("invalid label `{}`", t.text)))?;
        if !declared.contains(&label) {
            return Err(self.err(&t, format!("undeclared label `{}`", t.text)));
        }
        Ok(label)
    }

    fn declared_labels(&mut self) -> Result<BTreeSet<Label>> {
        let mut labels = BTreeSet::new();
        for t in self.name_list("a label")? {
            let l = Label::new(&t.text).map_err(|_| self.err(&t, format!("invalid label `{}`", t.text)))?;
            labels.insert(l);
        }
        self.punct(';')?;
        Ok(labels)
    }

    fn declared_props(&mut self) -> Result<BTreeSet<String>> {
        let mut props = BTreeSet::new();
        for t in self.name_list("a variable")? {
            if !is_identifier(&t.text) {
                return Err(self.err(&t, format!("invalid variable `{}`", t.text)));
            }
            props.insert(t.text);
        }
        self.punct(';')?;
        Ok(props)
    }

    fn model(&mut self) -> Result<ModelFile> {
        let head = self.name("`gst` or `kripke`")?;
        let model = match head.text.as_str() {
            "gst" => ModelFile::Gst(self.gst(&head)?),
            "kripke" => ModelFile::Kripke(self.kripke()?),
            other => return Err(self.err(&head, format!("expected `gst` or `kripke`, found `{other}`"))),
        };
        let t = self.next();
        if t.kind != Kind::Eof {
            return Err(self.err(&t, format!("unexpected {} after model", Self::describe(&t))));
        }
        Ok(model)
    }

    fn gst(&mut self, head: &Token) -> Result<SymbolicGst> {
        let name = self.name("a model name")?.text;
        self.punct('{')?;
        let mut labels = BTreeSet::new();
        let mut props = BTreeSet::new();
        let mut root = None;
        loop {
            let t = self.peek().clone();
            match (&t.kind, t.text.as_str()) {
                (Kind::Punct('}'), _) => {
                    self.next();
                    break;
                }
                (Kind::Name, "labels") => {
                    self.next();
                    labels.extend(self.declared_labels()?);
                }
                (Kind::Name, "props") => {
                    self.next();
                    props.extend(self.declared_props()?);
                }
                (Kind::Name, "root") => {
                    self.next();
                    if root.is_some() {
                        return Err(self.err(&t, "duplicate `root`"));
                    }
                    let r = self.name("a vertex")?;
                    if r.text == ATTACH_ROOT {
                        return Err(self.err(&r, "`@` is reserved for attachment roots"));
                    }
                    root = Some(r.text);
                    self.punct(';')?;
                    break;
                }
                _ => {
                    return Err(
                        self.err(&t, format!("expected `labels`, `props` or `root`, found {}", Self::describe(&t)))
                    )
                }
            }
        }
        let Some(root) = root else {
            return Err(self.err(head, "missing `root`"));
        };
        let mut g = SymbolicGst::new(name, root);
        g.labels = labels.clone();
        g.props = props;
        self.gst_body(&mut g, &labels)?;
        g.validate().into_result().map_err(|e| self.err(head, e.to_string()))?;
        Ok(g)
    }

    /// Edge and attach statements up to and including the closing brace.
    fn gst_body(&mut self, g: &mut SymbolicGst, labels: &BTreeSet<Label>) -> Result<()> {
        loop {
            let t = self.next();
            match (&t.kind, t.text.as_str()) {
                (Kind::Punct('}'), _) => return Ok(()),
                (Kind::Name, "edge") => {
                    let id = self.name("an edge id")?;
                    if g.edge(&id.text).is_some() {
                        return Err(self.err(&id, format!("duplicate edge `{}`", id.text)));
                    }
                    self.punct(':')?;
                    let source = self.name("a vertex")?.text;
                    self.arrow()?;
                    let target = self.name("a vertex")?.text;
                    self.punct('[')?;
                    let shape_tok = self.name("`dense` or `point`")?;
                    let shape = match shape_tok.text.as_str() {
                        "dense" | "D" => SegmentShape::Dense,
                        "point" | "P" => SegmentShape::Point,
                        other => {
                            return Err(self.err(&shape_tok, format!("expected `dense` or `point`, found `{other}`")))
                        }
                    };
                    let label = self.label(labels)?;
                    self.punct(']')?;
                    self.punct(';')?;
                    g.add_edge(id.text, source, target, Segment { shape, label });
                }
                (Kind::Name, "attach") => {
                    let host = self.name("an edge id")?;
                    match g.edge(&host.text) {
                        None => return Err(self.err(&host, format!("unknown edge `{}`", host.text))),
                        Some(e) if !e.segment.is_dense() => {
                            return Err(self.err(&host, format!("attachment on point edge `{}`", host.text)))
                        }
                        Some(_) => {}
                    }
                    self.punct('{')?;
                    let mut child = SymbolicGst::child();
                    self.gst_body(&mut child, labels)?;
                    g.attach(host.text, child);
                }
                _ => {
                    return Err(self.err(&t, format!("expected `edge`, `attach` or `}}`, found {}", Self::describe(&t))))
                }
            }
        }
    }

    fn kripke(&mut self) -> Result<KripkeStructure> {
        let name = self.name("a model name")?.text;
        self.punct('{')?;
        let mut ks = KripkeStructure::new(name);
        let mut labels = BTreeSet::new();
        loop {
            let t = self.next();
            match (&t.kind, t.text.as_str()) {
                (Kind::Punct('}'), _) => return Ok(ks),
                (Kind::Name, "labels") => {
                    for l in self.declared_labels()? {
                        ks.declare_label(l.clone());
                        labels.insert(l);
                    }
                }
                (Kind::Name, "props") => {
                    for p in self.declared_props()? {
                        ks.declare_prop(p);
                    }
                }
                (Kind::Name, "state") => {
                    let s = self.name("a state name")?;
                    if ks.state_id(&s.text).is_ok() {
                        return Err(self.err(&s, format!("duplicate state `{}`", s.text)));
                    }
                    let id = ks.add_state(s.text);
                    if self.peek().kind == Kind::Name && self.peek().text == "init" {
                        let init = self.next();
                        if ks.initial().is_some() {
                            return Err(self.err(&init, "second initial state"));
                        }
                        ks.set_initial(id);
                    }
                    self.punct(';')?;
                }
                (Kind::Name, "prop") => {
                    let p = self.name("a variable")?;
                    if !ks.props().contains(&p.text) {
                        return Err(self.err(&p, format!("undeclared variable `{}`", p.text)));
                    }
                    self.punct(':')?;
                    for s in self.name_list("a state name")? {
                        let id =
                            ks.state_id(&s.text).map_err(|_| self.err(&s, format!("undeclared state `{}`", s.text)))?;
                        ks.set_prop(&p.text, id);
                    }
                    self.punct(';')?;
                }
                (Kind::Name, "trans") => {
                    let s = self.name("a state name")?;
                    let from =
                        ks.state_id(&s.text).map_err(|_| self.err(&s, format!("undeclared state `{}`", s.text)))?;
                    self.arrow()?;
                    let t2 = self.name("a state name")?;
                    let to =
                        ks.state_id(&t2.text).map_err(|_| self.err(&t2, format!("undeclared state `{}`", t2.text)))?;
                    let word = self.word(&labels)?;
                    self.punct(';')?;
                    ks.add_transition(from, word, to);
                }
                _ => {
                    return Err(self.err(
                        &t,
                        format!(
                            "expected `labels`, `props`, `state`, `prop`, `trans` or `}}`, found {}",
                            Self::describe(&t)
                        ),
                    ))
                }
            }
        }
    }

    fn word(&mut self, labels: &BTreeSet<Label>) -> Result<ExecWord> {
        let open = self.punct('[')?;
        let mut raw = Vec::new();
        loop {
            let shape_tok = self.name("`D` or `P`")?;
            let shape = match shape_tok.text.as_str() {
                "D" | "dense" => SegmentShape::Dense,
                "P" | "point" => SegmentShape::Point,
                other => return Err(self.err(&shape_tok, format!("expected `D` or `P`, found `{other}`"))),
            };
            raw.push(Segment { shape, label: self.label(labels)? });
            if !self.eat(',') {
                break;
            }
        }
        self.punct(']')?;
        normalize(raw).map_err(|e| self.err(&open, e.to_string()))
    }
}

/// Parses one GST or Kripke model. Diagnostics carry `line:col`.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let mut p = Parser { tokens: lex(text)?, pos: 0 };
    p.model()
}

fn quote(name: &str) -> String {
    if !name.is_empty() && !name.starts_with('#') && name.chars().all(is_name_char) {
        name.to_string()
    } else {
        format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

fn join<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    items.into_iter().map(quote).collect::<Vec<_>>().join(", ")
}

fn format_body(g: &SymbolicGst, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    for e in &g.edges {
        let _ = writeln!(
            out,
            "{pad}edge {}: {} -> {} [{} {}];",
            quote(&e.id),
            quote(&e.source),
            quote(&e.target),
            e.segment.shape_name(),
            e.segment.label
        );
    }
    for a in &g.attachments {
        let _ = writeln!(out, "{pad}attach {} {{", quote(&a.host));
        format_body(&a.child, indent + 1, out);
        let _ = writeln!(out, "{pad}}}");
    }
}

/// Canonical text of a model; [`parse_model`] reads it back unchanged.
pub fn format_model(m: &ModelFile) -> String {
    let mut out = String::new();
    match m {
        ModelFile::Gst(g) => {
            let _ = writeln!(out, "gst {} {{", quote(&g.name));
            if !g.labels.is_empty() {
                let _ = writeln!(out, "  labels {};", join(g.labels.iter().map(Label::as_str)));
            }
            if !g.props.is_empty() {
                let _ = writeln!(out, "  props {};", join(g.props.iter().map(String::as_str)));
            }
            let _ = writeln!(out, "  root {};", quote(&g.root));
            format_body(g, 1, &mut out);
        }
        ModelFile::Kripke(ks) => {
            let _ = writeln!(out, "kripke {} {{", quote(&ks.name));
            if !ks.labels().is_empty() {
                let _ = writeln!(out, "  labels {};", join(ks.labels().iter().map(Label::as_str)));
            }
            if !ks.props().is_empty() {
                let _ = writeln!(out, "  props {};", join(ks.props().iter().map(String::as_str)));
            }
            for (id, name) in ks.state_names().iter().enumerate() {
                let init = if ks.initial() == Some(id) { " init" } else { "" };
                let _ = writeln!(out, "  state {}{init};", quote(name));
            }
            for (p, set) in ks.valuation() {
                if !set.is_empty() {
                    let _ = writeln!(out, "  prop {}: {};", quote(p), join(set.iter().map(|s| ks.state_name(*s))));
                }
            }
            for (s, w, t) in ks.transitions() {
                let _ = writeln!(out, "  trans {} -> {} [{w}];", quote(ks.state_name(*s)), quote(ks.state_name(*t)));
            }
        }
    }
    out.push_str("}\n");
    out
}
