//! Parser for group expressions.
//!
//! ```text
//! expr  := "1" | "Z" ["^" int] | "F(" int ")" | "raag(" path ")"
//!        | "prod(" expr {"," expr} ")" | "ext(" expr "," expr ")"
//!        | "amalgam(" expr "," expr "," "over=" path ")"
//!        | "gog(" "vertices=[" exprs "]" ["," "edges=[" exprs "]"] ")"
//!        | "assume(" name "," "{" fact {"," fact} "}" ")"
//! fact  := "pos(" n "," m ")" | "neg(" n "," m ")" | "fin(" n ")"
//! ```
//! `n`, `m` are integers or `inf`. Paths are bare or double-quoted; `#` starts a comment.

use std::collections::BTreeSet;
use std::path::Path;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::extnat::ExtNat;
use crate::input::load_complex;

use super::expr::{AssumedFacts, GroupExpr, NamedComplex};
use super::pair::CoherencePair;

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    origin: &'a str,
    resolve: &'a mut dyn FnMut(&str) -> Result<SimplicialComplex>,
}

#[derive(Clone, Copy)]
struct Loc {
    line: usize,
    column: usize,
}

impl Parser<'_> {
    fn loc(&self) -> Loc {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..self.pos] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Loc { line, column }
    }

    fn error_at(&self, loc: Loc, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.origin.to_string(),
            line: loc.line,
            column: loc.column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.loc(), message)
    }

    fn skip_space(&mut self) {
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == '#' {
                while self.chars.get(self.pos).is_some_and(|&c| c != '\n') {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_space();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |f| format!("`{f}`"));
            Err(self.error(format!("expected `{c}`, found {found}")))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_space();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&c| c.is_alphanumeric() || c == '_' || (c == '-' && self.pos > start))
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        let loc = self.loc();
        match self.ident() {
            Some(w) if w == word => Ok(()),
            _ => Err(self.error_at(loc, format!("expected `{word}`"))),
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_space();
        let loc = self.loc();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse()
            .map_err(|_| self.error_at(loc, "expected a non-negative integer"))
    }

    fn extnat(&mut self) -> Result<ExtNat> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(ExtNat::Fin(self.number()?)),
            _ => {
                let loc = self.loc();
                if self.eat('∞') {
                    return Ok(ExtNat::Inf);
                }
                match self.ident().as_deref() {
                    Some("inf") => Ok(ExtNat::Inf),
                    _ => Err(self.error_at(loc, "expected an integer or `inf`")),
                }
            }
        }
    }

    fn path(&mut self) -> Result<(String, Loc)> {
        self.skip_space();
        let loc = self.loc();
        if self.eat('"') {
            let start = self.pos;
            while self.chars.get(self.pos).is_some_and(|&c| c != '"') {
                self.pos += 1;
            }
            if self.pos == self.chars.len() {
                return Err(self.error_at(loc, "unterminated string"));
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            self.pos += 1;
            return Ok((s, loc));
        }
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&c| c != ',' && c != ')' && c != '\n')
        {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .trim()
            .to_string();
        if s.is_empty() {
            return Err(self.error_at(loc, "expected a complex file path"));
        }
        Ok((s, loc))
    }

    fn complex(&mut self) -> Result<NamedComplex> {
        let (source, loc) = self.path()?;
        let complex =
            (self.resolve)(&source).map_err(|e| self.error_at(loc, format!("cannot load `{source}`: {e}")))?;
        complex
            .require_flag()
            .map_err(|e| self.error_at(loc, format!("`{source}`: {e}")))?;
        Ok(NamedComplex::new(source, complex))
    }

    fn list(&mut self, close: char) -> Result<Vec<GroupExpr>> {
        let mut items = vec![self.expr()?];
        while self.eat(',') {
            items.push(self.expr()?);
        }
        self.expect(close)?;
        Ok(items)
    }

    fn expr(&mut self) -> Result<GroupExpr> {
        self.skip_space();
        let loc = self.loc();
        if self.peek() == Some('1') {
            self.pos += 1;
            return Ok(GroupExpr::Trivial);
        }
        let Some(head) = self.ident() else {
            return Err(self.error_at(loc, "expected a group expression"));
        };
        match head.as_str() {
            "Z" => {
                let k = if self.eat('^') { self.number()? } else { 1 };
                Ok(GroupExpr::FreeAbelian(k))
            }
            "trivial" => Ok(GroupExpr::Trivial),
            "F" => {
                self.expect('(')?;
                let k = self.number()?;
                self.expect(')')?;
                Ok(GroupExpr::Free(k))
            }
            "raag" => {
                self.expect('(')?;
                let c = self.complex()?;
                self.expect(')')?;
                Ok(GroupExpr::Raag(c))
            }
            "prod" => {
                self.expect('(')?;
                Ok(GroupExpr::DirectProduct(self.list(')')?))
            }
            "ext" => {
                self.expect('(')?;
                let kernel = self.expr()?;
                self.expect(',')?;
                let quotient = self.expr()?;
                self.expect(')')?;
                Ok(GroupExpr::Extension {
                    kernel: Box::new(kernel),
                    quotient: Box::new(quotient),
                })
            }
            "amalgam" => {
                self.expect('(')?;
                let left = self.expr()?;
                self.expect(',')?;
                let right = self.expr()?;
                self.expect(',')?;
                self.keyword("over")?;
                self.expect('=')?;
                let over_loc = self.loc();
                let over = self.complex()?;
                self.expect(')')?;
                for side in [&left, &right] {
                    if let GroupExpr::Raag(s) = side {
                        if !is_full_by_labels(&over.complex, &s.complex) {
                            return Err(self.error_at(
                                over_loc,
                                format!("`{}` is not a full subcomplex of `{}`", over.source, s.source),
                            ));
                        }
                    }
                }
                Ok(GroupExpr::AmalgamOverRaag {
                    left: Box::new(left),
                    right: Box::new(right),
                    over,
                })
            }
            "gog" => {
                self.expect('(')?;
                self.keyword("vertices")?;
                self.expect('=')?;
                self.expect('[')?;
                let vertices = self.list(']')?;
                let mut edges = Vec::new();
                if self.eat(',') {
                    self.keyword("edges")?;
                    self.expect('=')?;
                    self.expect('[')?;
                    if !self.eat(']') {
                        edges = self.list(']')?;
                    }
                }
                self.expect(')')?;
                Ok(GroupExpr::GraphOfGroups { vertices, edges })
            }
            "assume" => {
                self.expect('(')?;
                let label_loc = self.loc();
                let label = self
                    .ident()
                    .ok_or_else(|| self.error_at(label_loc, "expected a name"))?;
                self.expect(',')?;
                self.expect('{')?;
                let mut facts = AssumedFacts::default();
                if !self.eat('}') {
                    loop {
                        self.fact(&mut facts)?;
                        if !self.eat(',') {
                            break;
                        }
                    }
                    self.expect('}')?;
                }
                self.expect(')')?;
                Ok(GroupExpr::Assumed { label, facts })
            }
            other => Err(self.error_at(loc, format!("unknown constructor `{other}`"))),
        }
    }

    fn fact(&mut self, facts: &mut AssumedFacts) -> Result<()> {
        self.skip_space();
        let loc = self.loc();
        let kind = self.ident().unwrap_or_default();
        self.expect('(')?;
        match kind.as_str() {
            "pos" | "neg" => {
                let n = self.extnat()?;
                self.expect(',')?;
                let m = self.extnat()?;
                self.expect(')')?;
                let pair = CoherencePair::new(n, m)
                    .ok_or_else(|| self.error_at(loc, format!("pair ({n},{m}) needs n < m")))?;
                if kind == "pos" {
                    facts.positive.push(pair);
                } else {
                    facts.negative.push(pair);
                }
            }
            "fin" => {
                let n = self.extnat()?;
                self.expect(')')?;
                facts.finiteness = Some(facts.finiteness.map_or(n, |f| f.max(n)));
            }
            _ => return Err(self.error_at(loc, "expected `pos`, `neg` or `fin`")),
        }
        Ok(())
    }
}

/// Whether `sub` is the full subcomplex of `sup` on its labels.
pub fn is_full_by_labels(sub: &SimplicialComplex, sup: &SimplicialComplex) -> bool {
    let Ok(restricted) = sup.full_subcomplex_by_labels(sub.labels()) else {
        return false;
    };
    let facet_labels = |c: &SimplicialComplex| -> BTreeSet<BTreeSet<String>> {
        c.facets()
            .iter()
            .map(|f| f.iter().map(|i| c.labels()[i].clone()).collect())
            .collect()
    };
    facet_labels(&restricted) == facet_labels(sub)
}

/// Parses `text`, loading complexes through `resolve`.
pub fn parse_expr_with(
    text: &str,
    origin: &str,
    resolve: &mut dyn FnMut(&str) -> Result<SimplicialComplex>,
) -> Result<GroupExpr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        origin,
        resolve,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses `text`; complex paths are relative to `base`.
pub fn parse_expr(text: &str, origin: &str, base: &Path) -> Result<GroupExpr> {
    let mut resolve = |p: &str| load_complex(&base.join(p));
    parse_expr_with(text, origin, &mut resolve)
}

/// Reads and parses an expression file.
pub fn load_expr(path: &Path) -> Result<GroupExpr> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_expr(&text, &path.display().to_string(), base)
}
