//! Recursive-descent parser for product expressions.
//!
//! ```text
//! expr := leaf | "product(" expr ("," expr)+ ")"
//! leaf := "sphere(" int ["," "codim=" int] ")" | "torus(" "k=" int ")"
//!       | "veronese()" | "isoparametric(" int "," "g=" int ")"
//!       | "otfkm(" "k=" int ")" | "lawson(" int "," int ")"
//!       | "bipolar_tau31()" | "file(" path ")" | NAME
//! ```
//!
//! Whitespace between tokens is ignored. A bare `NAME` refers to a user
//! descriptor registered with a [`UserCatalog`](crate::composer::UserCatalog).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::catalog::{Builtin, NamedSurface};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leaf {
    Builtin(Builtin),
    File(String),
    Named(String),
}

/// Syntax tree of a product expression, before any file is read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Leaf(Leaf),
    Product(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at offset {position}: expected {}, found {found}", expected_list(.expected))]
pub struct ParseError {
    pub position: usize,
    pub expected: BTreeSet<String>,
    pub found: String,
}

fn expected_list(set: &BTreeSet<String>) -> String {
    let items: Vec<_> = set.iter().map(|s| format!("`{s}`")).collect();
    match items.len() {
        0 => "nothing".into(),
        1 => items[0].clone(),
        _ => format!("one of {}", items.join(", ")),
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn error<I, S>(&self, expected: I) -> ParseError
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let found = match self.rest().chars().next() {
            Some(c) => format!("`{c}`"),
            None => "end of input".into(),
        };
        ParseError {
            position: self.pos,
            expected: expected.into_iter().map(Into::into).collect(),
            found,
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> PResult<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error([token]))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '^'))
            .unwrap_or(self.rest().len());
        if len == 0 || !self.rest().starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return None;
        }
        let id = &self.rest()[..len];
        self.pos += len;
        Some(id)
    }

    fn int(&mut self) -> PResult<u32> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error(["integer"]));
        }
        let start = self.pos;
        let value = self.rest()[..len].parse().map_err(|_| ParseError {
            position: start,
            expected: ["integer below 2^32".to_string()].into(),
            found: self.rest()[..len].to_string(),
        })?;
        self.pos += len;
        Ok(value)
    }

    fn keyword_int(&mut self, key: &str) -> PResult<u32> {
        self.expect(key)?;
        self.expect("=")?;
        self.int()
    }

    fn path(&mut self) -> PResult<String> {
        self.skip_ws();
        if self.eat("\"") {
            let Some(end) = self.rest().find('"') else {
                self.pos = self.src.len();
                return Err(self.error(["\""]));
            };
            let path = self.rest()[..end].to_string();
            self.pos += end + 1;
            return Ok(path);
        }
        let end = self.rest().find(')').unwrap_or(self.rest().len());
        let path = self.rest()[..end].trim().to_string();
        if path.is_empty() {
            return Err(self.error(["path"]));
        }
        self.pos += end;
        Ok(path)
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.skip_ws();
        let start = self.pos;
        let Some(id) = self.ident() else {
            return Err(self.error(["product(", "leaf"]));
        };
        if !self.eat("(") {
            return match id {
                "product" | "sphere" | "torus" | "veronese" | "isoparametric" | "otfkm" | "lawson"
                | "bipolar_tau31" | "file" => Err(self.error(["("])),
                _ => Ok(Expr::Leaf(Leaf::Named(id.to_string()))),
            };
        }
        let node = match id {
            "product" => {
                let mut children = vec![self.expr()?];
                loop {
                    if self.eat(",") {
                        children.push(self.expr()?);
                        continue;
                    }
                    self.skip_ws();
                    let closing = self.rest().starts_with(')');
                    if closing && children.len() >= 2 {
                        self.pos += 1;
                        break;
                    }
                    // a lone child still needs a second factor
                    return Err(if closing { self.error([","]) } else { self.error([",", ")"]) });
                }
                return Ok(Expr::Product(children));
            }
            "sphere" => {
                let dim = self.int()?;
                let codim = if self.eat(",") { self.keyword_int("codim")? } else { 0 };
                Leaf::Builtin(Builtin::Sphere { dim, codim })
            }
            "torus" => Leaf::Builtin(Builtin::FlatTorus { k: self.keyword_int("k")? }),
            "veronese" => Leaf::Builtin(Builtin::Veronese),
            "isoparametric" => {
                let dim = self.int()?;
                self.expect(",")?;
                let g = self.keyword_int("g")?;
                Leaf::Builtin(Builtin::Isoparametric { dim, g })
            }
            "otfkm" => Leaf::Builtin(Builtin::OtfkmFocal { k: self.keyword_int("k")? }),
            "lawson" => {
                let m = self.int()?;
                self.expect(",")?;
                let k = self.int()?;
                Leaf::Builtin(Builtin::Named(NamedSurface::Lawson { m, k }))
            }
            "bipolar_tau31" => Leaf::Builtin(Builtin::Named(NamedSurface::BipolarTau31)),
            "file" => Leaf::File(self.path()?),
            _ => {
                return Err(ParseError {
                    position: start,
                    expected: ["product", "sphere", "torus", "veronese", "isoparametric", "otfkm", "lawson", "bipolar_tau31", "file"]
                        .into_iter()
                        .map(String::from)
                        .collect(),
                    found: format!("`{id}(`"),
                })
            }
        };
        if matches!(node, Leaf::Builtin(Builtin::Sphere { .. })) {
            if !self.eat(")") {
                return Err(self.error([",", ")"]));
            }
        } else {
            self.expect(")")?;
        }
        Ok(Expr::Leaf(node))
    }
}

/// Parses a complete product expression.
pub fn parse_expression(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let expr = p.expr()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return Err(p.error(["end of input"]));
    }
    Ok(expr)
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Builtin(b) => write!(f, "{b}"),
            Leaf::File(path) if path.contains(')') || path.trim() != path => write!(f, "file(\"{path}\")"),
            Leaf::File(path) => write!(f, "file({path})"),
            Leaf::Named(name) => f.write_str(name),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Leaf(leaf) => write!(f, "{leaf}"),
            Expr::Product(children) => {
                f.write_str("product(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}
