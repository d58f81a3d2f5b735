//! Quivers, paths, words with formal inverses, and the line-oriented
//! presentation format used for algebra files.
//!
//! Composition is right to left throughout: the path `w1*w2*...*wn` requires
//! `s(w_i) = e(w_{i+1})`, and `wn` is applied first. A representation
//! evaluates it as the matrix product `X_{w1} X_{w2} ... X_{wn}`.
//!
//! Algebra file grammar:
//!
//! ```text
//! algebra "<name>"
//! char <any|2>
//! vertex <id> ...
//! arrow <name> <source> <target>
//! relations
//!   <term> [(+|-) <term>]*
//! ```
//!
//! where a term is `[<coeff>*] factor (* factor)*` and a factor is an arrow
//! name or a parenthesised product, optionally raised to `^<n>`.

use std::cmp::Ordering;

use thiserror::Error;

pub type VertexId = usize;
pub type ArrowId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: {msg}")]
    Composition { line: usize, msg: String },
    #[error("line {line}: duplicate name `{name}`")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error("line {line}: unknown arrow `{name}`")]
    UnknownArrow { line: usize, name: String },
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("algebra {name} requires characteristic 2, got p = {p}")]
    CharMismatch { name: String, p: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId, String> {
        if self.vertex_index(name).is_some() {
            return Err(name.to_string());
        }
        self.vertices.push(name.to_string());
        Ok(self.vertices.len() - 1)
    }

    pub fn add_arrow(&mut self, name: &str, source: VertexId, target: VertexId) -> Result<ArrowId, String> {
        if self.arrow_index(name).is_some() {
            return Err(name.to_string());
        }
        assert!(source < self.vertices.len() && target < self.vertices.len());
        self.arrows.push(Arrow {
            name: name.to_string(),
            source,
            target,
        });
        Ok(self.arrows.len() - 1)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

/// A nonempty path `w1 ... wn` of arrows; `wn` acts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrowPath(Vec<ArrowId>);

impl ArrowPath {
    pub fn new(letters: Vec<ArrowId>) -> Self {
        assert!(!letters.is_empty(), "paths are nonempty");
        Self(letters)
    }

    pub fn letters(&self) -> &[ArrowId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Source of the path: the source of its last letter.
    pub fn source(&self, q: &Quiver) -> VertexId {
        q.arrow(*self.0.last().unwrap()).source
    }

    /// Target of the path: the target of its first letter.
    pub fn target(&self, q: &Quiver) -> VertexId {
        q.arrow(self.0[0]).target
    }

    pub fn is_composable(&self, q: &Quiver) -> bool {
        self.0
            .windows(2)
            .all(|w| q.arrow(w[0]).source == q.arrow(w[1]).target)
    }

    /// Lexicographic order on letter sequences by arrow index.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }

    pub fn display(&self, q: &Quiver) -> String {
        self.0
            .iter()
            .map(|&a| q.arrow(a).name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: i64,
    pub path: ArrowPath,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    Monomial,
    Binomial,
    Polynomial,
}

/// Linear combination of parallel paths, kept in normal form: terms sorted
/// lexicographically, duplicate paths merged, leading coefficient positive.
///
/// Coefficients are integers; they are reduced into `F_p` when an algebra
/// is built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    terms: Vec<Term>,
}

impl Relation {
    pub fn new(mut terms: Vec<Term>) -> Option<Self> {
        terms.sort_by(|a, b| a.path.lex_cmp(&b.path));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.path == t.path => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0);
        if merged.is_empty() {
            return None;
        }
        if merged[0].coeff < 0 {
            merged.iter_mut().for_each(|t| t.coeff = -t.coeff);
        }
        Some(Self { terms: merged })
    }

    pub fn monomial(path: ArrowPath) -> Self {
        Self {
            terms: vec![Term { coeff: 1, path }],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn kind(&self) -> RelationKind {
        match self.terms.len() {
            1 => RelationKind::Monomial,
            2 => RelationKind::Binomial,
            _ => RelationKind::Polynomial,
        }
    }

    pub fn source(&self, q: &Quiver) -> VertexId {
        self.terms[0].path.source(q)
    }

    pub fn target(&self, q: &Quiver) -> VertexId {
        self.terms[0].path.target(q)
    }

    pub fn min_len(&self) -> usize {
        self.terms.iter().map(|t| t.path.len()).min().unwrap_or(0)
    }

    pub fn max_len(&self) -> usize {
        self.terms.iter().map(|t| t.path.len()).max().unwrap_or(0)
    }

    pub fn display(&self, q: &Quiver) -> String {
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let c = t.coeff;
            if i > 0 {
                out.push_str(if c < 0 { " - " } else { " + " });
            } else if c < 0 {
                out.push('-');
            }
            if c.abs() != 1 {
                out.push_str(&format!("{}*", c.abs()));
            }
            out.push_str(&t.path.display(q));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharConstraint {
    Any,
    Only2,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    pub name: String,
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub char_constraint: CharConstraint,
}

impl Presentation {
    pub fn check_char(&self, p: u32) -> Result<(), DslError> {
        match self.char_constraint {
            CharConstraint::Only2 if p != 2 => Err(DslError::CharMismatch {
                name: self.name.clone(),
                p,
            }),
            _ => Ok(()),
        }
    }

    /// Canonical text form; parses back to an equal presentation.
    pub fn serialize(&self) -> String {
        let q = &self.quiver;
        let mut out = String::new();
        out.push_str(&format!("algebra \"{}\"\n", self.name));
        out.push_str(match self.char_constraint {
            CharConstraint::Any => "char any\n",
            CharConstraint::Only2 => "char 2\n",
        });
        out.push_str("vertex ");
        out.push_str(&q.vertices.join(" "));
        out.push('\n');
        for a in &q.arrows {
            out.push_str(&format!(
                "arrow {} {} {}\n",
                a.name, q.vertices[a.source], q.vertices[a.target]
            ));
        }
        out.push_str("relations\n");
        for r in &self.relations {
            out.push_str("  ");
            out.push_str(&r.display(q));
            out.push('\n');
        }
        out
    }
}

/// A letter of a word: an arrow or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Direct(ArrowId),
    Inverse(ArrowId),
}

impl Letter {
    pub fn arrow(self) -> ArrowId {
        match self {
            Letter::Direct(a) | Letter::Inverse(a) => a,
        }
    }

    pub fn is_inverse(self) -> bool {
        matches!(self, Letter::Inverse(_))
    }

    pub fn inverse(self) -> Self {
        match self {
            Letter::Direct(a) => Letter::Inverse(a),
            Letter::Inverse(a) => Letter::Direct(a),
        }
    }

    pub fn source(self, q: &Quiver) -> VertexId {
        match self {
            Letter::Direct(a) => q.arrow(a).source,
            Letter::Inverse(a) => q.arrow(a).target,
        }
    }

    pub fn target(self, q: &Quiver) -> VertexId {
        match self {
            Letter::Direct(a) => q.arrow(a).target,
            Letter::Inverse(a) => q.arrow(a).source,
        }
    }

    pub fn display(self, q: &Quiver) -> String {
        match self {
            Letter::Direct(a) => q.arrow(a).name.clone(),
            Letter::Inverse(a) => format!("{}^-1", q.arrow(a).name),
        }
    }
}

/// A word in arrows and formal inverses, or the empty word `1_u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Word {
    Empty(VertexId),
    Letters(Vec<Letter>),
}

impl Word {
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        assert!(!letters.is_empty(), "use Word::Empty for the empty word");
        Word::Letters(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        match self {
            Word::Empty(_) => &[],
            Word::Letters(l) => l,
        }
    }

    pub fn len(&self) -> usize {
        self.letters().len()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Word::Empty(_))
    }

    pub fn source(&self, q: &Quiver) -> VertexId {
        match self {
            Word::Empty(u) => *u,
            Word::Letters(l) => l.last().unwrap().source(q),
        }
    }

    pub fn target(&self, q: &Quiver) -> VertexId {
        match self {
            Word::Empty(u) => *u,
            Word::Letters(l) => l[0].target(q),
        }
    }

    pub fn is_composable(&self, q: &Quiver) -> bool {
        self.letters()
            .windows(2)
            .all(|w| w[0].source(q) == w[1].target(q))
    }

    /// `(w1 ... wn)^{-1} = wn^{-1} ... w1^{-1}`, and `1_u` is its own inverse.
    pub fn inverse(&self) -> Self {
        match self {
            Word::Empty(u) => Word::Empty(*u),
            Word::Letters(l) => Word::Letters(l.iter().rev().map(|x| x.inverse()).collect()),
        }
    }

    /// `w_i != w_{i+1}^{-1}` for all consecutive letters.
    pub fn is_reduced(&self) -> bool {
        self.letters().windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn display(&self, q: &Quiver) -> String {
        match self {
            Word::Empty(u) => format!("1_{}", q.vertex_name(*u)),
            Word::Letters(l) => l.iter().map(|x| x.display(q)).collect::<Vec<_>>().join("*"),
        }
    }

    /// Parses `gamma*delta^-1*eta^-1`, `(alpha^-1*gamma*beta)^2*alpha^-1`, or `1_0`.
    pub fn parse(text: &str, q: &Quiver) -> Result<Self, DslError> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix("1_") {
            let u = q.vertex_index(v).ok_or_else(|| DslError::UnknownVertex {
                line: 1,
                name: v.to_string(),
            })?;
            return Ok(Word::Empty(u));
        }
        let tokens = tokenize(text, 1)?;
        let mut parser = TermParser {
            tokens: &tokens,
            pos: 0,
            line: 1,
        };
        let letters = parser.word_product(q)?;
        if parser.pos != tokens.len() {
            return Err(parser.error("trailing input in word"));
        }
        if letters.is_empty() {
            return Err(DslError::Syntax {
                line: 1,
                col: 1,
                msg: "empty word".into(),
            });
        }
        let w = Word::Letters(letters);
        if !w.is_composable(q) {
            return Err(DslError::Composition {
                line: 1,
                msg: format!("word `{text}` is not composable (right-to-left)"),
            });
        }
        Ok(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
    Caret,
}

fn tokenize(s: &str, line: usize) -> Result<Vec<(Tok, usize)>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '*' => out.push((Tok::Star, col)),
            '+' => out.push((Tok::Plus, col)),
            '-' => out.push((Tok::Minus, col)),
            '(' => out.push((Tok::LParen, col)),
            ')' => out.push((Tok::RParen, col)),
            '^' => out.push((Tok::Caret, col)),
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse::<i64>().map_err(|_| DslError::Syntax {
                    line,
                    col,
                    msg: format!("integer `{text}` out of range"),
                })?;
                out.push((Tok::Int(n), col));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            other => {
                return Err(DslError::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct TermParser<'a> {
    tokens: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
}

impl TermParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or(self.tokens.last())
            .map_or(1, |(_, c)| *c)
    }

    fn error(&self, msg: &str) -> DslError {
        DslError::Syntax {
            line: self.line,
            col: self.col(),
            msg: msg.to_string(),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn exponent(&mut self) -> Result<Option<i64>, DslError> {
        if !self.eat(&Tok::Caret) {
            return Ok(None);
        }
        let neg = self.eat(&Tok::Minus);
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Some(if neg { -n } else { n }))
            }
            _ => Err(self.error("expected integer exponent")),
        }
    }

    /// relation := ['-'] term (('+'|'-') term)*
    fn relation(&mut self, q: &Quiver) -> Result<Vec<Term>, DslError> {
        let mut terms = Vec::new();
        let mut sign = if self.eat(&Tok::Minus) { -1 } else { 1 };
        loop {
            let (c, path) = self.term(q)?;
            terms.push(Term {
                coeff: sign * c,
                path: ArrowPath::new(path),
            });
            if self.eat(&Tok::Plus) {
                sign = 1;
            } else if self.eat(&Tok::Minus) {
                sign = -1;
            } else {
                break;
            }
        }
        if self.pos != self.tokens.len() {
            return Err(self.error("expected `+`, `-` or end of line"));
        }
        Ok(terms)
    }

    /// term := [int '*'] factor ('*' factor)*
    fn term(&mut self, q: &Quiver) -> Result<(i64, Vec<ArrowId>), DslError> {
        let mut coeff = 1;
        if let Some(Tok::Int(n)) = self.peek().cloned() {
            self.pos += 1;
            coeff = n;
            if !self.eat(&Tok::Star) {
                return Err(self.error("expected `*` after coefficient"));
            }
        }
        let path = self.path_product(q)?;
        Ok((coeff, path))
    }

    fn path_product(&mut self, q: &Quiver) -> Result<Vec<ArrowId>, DslError> {
        let mut out = self.path_factor(q)?;
        while self.eat(&Tok::Star) {
            out.extend(self.path_factor(q)?);
        }
        Ok(out)
    }

    fn path_factor(&mut self, q: &Quiver) -> Result<Vec<ArrowId>, DslError> {
        let base = match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let a = q.arrow_index(&name).ok_or(DslError::UnknownArrow {
                    line: self.line,
                    name,
                })?;
                vec![a]
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.path_product(q)?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                inner
            }
            _ => return Err(self.error("expected arrow name or `(`")),
        };
        match self.exponent()? {
            None => Ok(base),
            Some(n) if n >= 1 => Ok(base.repeat(n as usize)),
            Some(_) => Err(self.error("path exponents must be positive")),
        }
    }

    fn word_product(&mut self, q: &Quiver) -> Result<Vec<Letter>, DslError> {
        let mut out = self.word_factor(q)?;
        while self.eat(&Tok::Star) {
            out.extend(self.word_factor(q)?);
        }
        Ok(out)
    }

    fn word_factor(&mut self, q: &Quiver) -> Result<Vec<Letter>, DslError> {
        let base = match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let a = q.arrow_index(&name).ok_or(DslError::UnknownArrow {
                    line: self.line,
                    name,
                })?;
                vec![Letter::Direct(a)]
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.word_product(q)?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                inner
            }
            _ => return Err(self.error("expected arrow name or `(`")),
        };
        match self.exponent()? {
            None => Ok(base),
            Some(0) => Err(self.error("zero exponent")),
            Some(n) if n > 0 => Ok(base.repeat(n as usize)),
            Some(n) => {
                let inv: Vec<Letter> = base.iter().rev().map(|l| l.inverse()).collect();
                Ok(inv.repeat((-n) as usize))
            }
        }
    }
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> DslError {
    DslError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parses an algebra file.
pub fn parse_presentation(text: &str) -> Result<Presentation, DslError> {
    let mut name: Option<String> = None;
    let mut char_constraint = CharConstraint::Any;
    let mut quiver = Quiver::new();
    let mut relations = Vec::new();
    let mut in_relations = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let line = line.trim();
        if in_relations && !starts_with_keyword(line) {
            let tokens = tokenize(line, line_no)?;
            let mut p = TermParser {
                tokens: &tokens,
                pos: 0,
                line: line_no,
            };
            let terms = p.relation(&quiver)?;
            for t in &terms {
                if !t.path.is_composable(&quiver) {
                    return Err(DslError::Composition {
                        line: line_no,
                        msg: format!(
                            "path `{}` is not composable right to left",
                            t.path.display(&quiver)
                        ),
                    });
                }
            }
            let (s0, t0) = (terms[0].path.source(&quiver), terms[0].path.target(&quiver));
            if terms
                .iter()
                .any(|t| t.path.source(&quiver) != s0 || t.path.target(&quiver) != t0)
            {
                return Err(DslError::Composition {
                    line: line_no,
                    msg: "terms of a relation must share source and target".into(),
                });
            }
            let rel = Relation::new(terms).ok_or_else(|| syntax(line_no, indent + 1, "relation is zero"))?;
            relations.push(rel);
            continue;
        }
        let mut parts = line.split_whitespace();
        let kw = parts.next().unwrap();
        let args: Vec<&str> = parts.collect();
        match kw {
            "algebra" => {
                let rest = line["algebra".len()..].trim();
                let inner = rest
                    .strip_prefix('"')
                    .and_then(|r| r.strip_suffix('"'))
                    .ok_or_else(|| syntax(line_no, indent + 9, "expected quoted algebra name"))?;
                if inner.is_empty() || inner.contains('"') {
                    return Err(syntax(line_no, indent + 9, "bad algebra name"));
                }
                name = Some(inner.to_string());
            }
            "char" => {
                char_constraint = match args.as_slice() {
                    ["any"] => CharConstraint::Any,
                    ["2"] => CharConstraint::Only2,
                    _ => return Err(syntax(line_no, indent + 6, "expected `any` or `2`")),
                };
            }
            "vertex" => {
                if args.is_empty() {
                    return Err(syntax(line_no, indent + 7, "expected vertex ids"));
                }
                for v in args {
                    if !is_ident(v) {
                        return Err(syntax(line_no, indent + 8, format!("bad vertex id `{v}`")));
                    }
                    quiver.add_vertex(v).map_err(|name| DslError::DuplicateName { line: line_no, name })?;
                }
            }
            "arrow" => {
                let [a, s, t] = args.as_slice() else {
                    return Err(syntax(line_no, indent + 6, "expected `arrow <name> <source> <target>`"));
                };
                if !is_ident(a) || a.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                    return Err(syntax(line_no, indent + 7, format!("bad arrow name `{a}`")));
                }
                let lookup = |v: &str| {
                    quiver.vertex_index(v).ok_or_else(|| DslError::UnknownVertex {
                        line: line_no,
                        name: v.to_string(),
                    })
                };
                let (s, t) = (lookup(s)?, lookup(t)?);
                quiver
                    .add_arrow(a, s, t)
                    .map_err(|name| DslError::DuplicateName { line: line_no, name })?;
            }
            "relations" => {
                if !args.is_empty() {
                    return Err(syntax(line_no, indent + 11, "unexpected tokens after `relations`"));
                }
                in_relations = true;
            }
            other => return Err(syntax(line_no, indent + 1, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| syntax(1, 1, "missing `algebra` line"))?;
    if quiver.num_vertices() == 0 {
        return Err(syntax(1, 1, "no vertices declared"));
    }
    Ok(Presentation {
        name,
        quiver,
        relations,
        char_constraint,
    })
}

fn starts_with_keyword(line: &str) -> bool {
    let first = line.split_whitespace().next().unwrap_or("");
    matches!(first, "algebra" | "char" | "vertex" | "arrow" | "relations")
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Names of the twelve built-in algebras, in catalog order.
pub const CATALOG_NAMES: [&str; 12] = [
    "D(1)_0",
    "D(1)_1",
    "D(2A)_0",
    "D(2A)_1",
    "D(3A)_1",
    "D(3A)_2",
    "D(3B)_{2,1}",
    "D(3B)_{2,2}",
    "D(3D)_2",
    "D(3K)",
    "D(3L)",
    "D(3Q)",
];

const CATALOG_TEXT: [&str; 12] = [
    include_str!("../data/algebras/d1_0.alg"),
    include_str!("../data/algebras/d1_1.alg"),
    include_str!("../data/algebras/d2a_0.alg"),
    include_str!("../data/algebras/d2a_1.alg"),
    include_str!("../data/algebras/d3a_1.alg"),
    include_str!("../data/algebras/d3a_2.alg"),
    include_str!("../data/algebras/d3b_21.alg"),
    include_str!("../data/algebras/d3b_22.alg"),
    include_str!("../data/algebras/d3d_2.alg"),
    include_str!("../data/algebras/d3k.alg"),
    include_str!("../data/algebras/d3l.alg"),
    include_str!("../data/algebras/d3q.alg"),
];

fn name_key(s: &str) -> String {
    s.chars()
        .filter(|c| !matches!(c, '{' | '}' | '(' | ')' | ',' | ' ' | '_'))
        .flat_map(char::to_lowercase)
        .collect()
}

/// Resolves loose spellings such as `D(3B)_21` or `d(3b)_{2,1}`.
pub fn canonical_name(name: &str) -> Option<&'static str> {
    let key = name_key(name);
    CATALOG_NAMES.iter().copied().find(|n| name_key(n) == key)
}

/// Raw catalog text for an algebra.
pub fn catalog_text(name: &str) -> Result<&'static str, DslError> {
    let canon = canonical_name(name).ok_or_else(|| DslError::UnknownAlgebra(name.to_string()))?;
    let idx = CATALOG_NAMES.iter().position(|n| *n == canon).unwrap();
    Ok(CATALOG_TEXT[idx])
}

/// Built-in presentation, checked against the characteristic `p`.
pub fn catalog(name: &str, p: u32) -> Result<Presentation, DslError> {
    let pres = parse_presentation(catalog_text(name)?)?;
    pres.check_char(p)?;
    Ok(pres)
}
