//! Formal composition expressions: `gen NAME | id(E) | comp_i(E, E)`.
//!
//! A name may carry a `@dim` suffix to pick a generator when the same name
//! is used in several dimensions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compose::{compose, identity};
use crate::error::{Error, Result};
use crate::model::{Body, Cell, Polygraph};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Gen { name: String, dim: Option<usize> },
    Id(Box<Expr>),
    Comp(usize, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn gen(name: &str) -> Expr {
        Expr::Gen {
            name: name.to_string(),
            dim: None,
        }
    }

    pub fn id(e: Expr) -> Expr {
        Expr::Id(Box::new(e))
    }

    pub fn comp(i: usize, a: Expr, b: Expr) -> Expr {
        Expr::Comp(i, Box::new(a), Box::new(b))
    }

    /// Number of generator leaves.
    pub fn size(&self) -> usize {
        match self {
            Expr::Gen { .. } => 1,
            Expr::Id(a) => a.size(),
            Expr::Comp(_, a, b) => a.size() + b.size(),
        }
    }

    pub fn to_json(&self) -> ExprJson {
        match self {
            Expr::Gen { name, dim } => ExprJson::Gen {
                name: name.clone(),
                dim: *dim,
            },
            Expr::Id(a) => ExprJson::Id {
                arg: Box::new(a.to_json()),
            },
            Expr::Comp(i, a, b) => ExprJson::Comp {
                dim: *i,
                args: vec![a.to_json(), b.to_json()],
            },
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Gen { name, dim: None } => write!(f, "gen {name}"),
            Expr::Gen { name, dim: Some(d) } => write!(f, "gen {name}@{d}"),
            Expr::Id(a) => write!(f, "id({a})"),
            Expr::Comp(i, a, b) => write!(f, "comp_{i}({a}, {b})"),
        }
    }
}

/// JSON form of an expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum ExprJson {
    Gen {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Id {
        arg: Box<ExprJson>,
    },
    Comp {
        dim: usize,
        args: Vec<ExprJson>,
    },
}

impl ExprJson {
    pub fn to_expr(&self) -> Result<Expr> {
        Ok(match self {
            ExprJson::Gen { name, dim } => Expr::Gen {
                name: name.clone(),
                dim: *dim,
            },
            ExprJson::Id { arg } => Expr::id(arg.to_expr()?),
            ExprJson::Comp { dim, args } => {
                if args.len() != 2 {
                    return Err(Error::Input(format!(
                        "comp_{dim} takes two arguments, got {}",
                        args.len()
                    )));
                }
                Expr::comp(*dim, args[0].to_expr()?, args[1].to_expr()?)
            }
        })
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.s[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.ws();
        let start = self.pos;
        if self.keyword("gen") {
            let before = self.pos;
            self.ws();
            if self.pos == before {
                return Err(self.err("expected whitespace after gen"));
            }
            return self.name();
        }
        if self.keyword("id") {
            if !self.eat(b'(') {
                return Err(self.err("expected ( after id"));
            }
            let a = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("id takes one argument"));
            }
            return Ok(Expr::id(a));
        }
        if self.keyword("comp_") {
            let d0 = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == d0 {
                return Err(self.err("expected a dimension after comp_"));
            }
            let i: usize = std::str::from_utf8(&self.s[d0..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("dimension out of range"))?;
            if !self.eat(b'(') {
                return Err(self.err("expected ( after comp_i"));
            }
            let a = self.expr()?;
            if !self.eat(b',') {
                return Err(self.err(&format!("comp_{i} takes two arguments")));
            }
            let b = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err(&format!("comp_{i} takes two arguments")));
            }
            return Ok(Expr::comp(i, a, b));
        }
        self.pos = start;
        Err(self.err("expected gen, id or comp_i"))
    }

    fn name(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            if c.is_ascii_whitespace() || c == b',' || c == b'(' || c == b')' {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a generator name"));
        }
        let raw = std::str::from_utf8(&self.s[start..self.pos])
            .map_err(|_| self.err("generator name is not valid UTF-8"))?;
        match raw.rsplit_once('@') {
            Some((name, d)) if !name.is_empty() && !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => {
                Ok(Expr::Gen {
                    name: name.to_string(),
                    dim: Some(d.parse().map_err(|_| self.err("dimension out of range"))?),
                })
            }
            _ if raw.contains('@') => Err(self.err("malformed name@dim")),
            _ => Ok(Expr::gen(raw)),
        }
    }
}

/// Evaluates an expression with [`compose`] and [`identity`].
pub fn eval(p: &Polygraph, e: &Expr) -> Result<Cell> {
    match e {
        Expr::Gen { name, dim } => Ok(p.lookup(name, *dim)?.cell()),
        Expr::Id(a) => Ok(identity(&eval(p, a)?)),
        Expr::Comp(i, a, b) => compose(&eval(p, a)?, *i, &eval(p, b)?),
    }
}

/// Reads a normal form back as an expression: entries chained right-nested,
/// each entry built from the inside out with identity whiskers omitted.
/// With a polygraph, names that occur in several dimensions get `@dim`.
pub fn cell_to_expr(u: &Cell, p: Option<&Polygraph>) -> Expr {
    let leaf = |g: &crate::model::GenRef| Expr::Gen {
        name: g.name().to_string(),
        dim: p.filter(|p| p.is_ambiguous(g.name())).map(|_| g.dim()),
    };
    match u.body() {
        Body::Point(g) => leaf(g),
        Body::Identity(b) => Expr::id(cell_to_expr(b, p)),
        Body::Whiskers(es) => {
            let d = u.dim();
            let mut parts: Vec<Expr> = es
                .iter()
                .map(|e| {
                    let mut x = leaf(&e.generator);
                    for (j, w) in e.context.levels.iter().enumerate() {
                        if !w.left.is_identity() {
                            x = Expr::comp(j, cell_to_expr(&w.left, p), x);
                        }
                        if !w.right.is_identity() {
                            x = Expr::comp(j, x, cell_to_expr(&w.right, p));
                        }
                    }
                    x
                })
                .collect();
            let mut acc = parts.pop().unwrap();
            while let Some(prev) = parts.pop() {
                acc = Expr::comp(d - 1, prev, acc);
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn parses_interchange_expression() {
        let e = parse("comp_1(comp_0(gen phi, gen g), comp_0(gen f', gen psi))").unwrap();
        assert_eq!(
            e,
            Expr::comp(
                1,
                Expr::comp(0, Expr::gen("phi"), Expr::gen("g")),
                Expr::comp(0, Expr::gen("f'"), Expr::gen("psi")),
            )
        );
    }

    #[test]
    fn parses_identity() {
        assert_eq!(parse("id(gen x)").unwrap(), Expr::id(Expr::gen("x")));
        assert_eq!(parse("  id( gen x )  ").unwrap(), Expr::id(Expr::gen("x")));
    }

    #[test]
    fn arity_errors_carry_position() {
        let e = parse("comp_0(gen phi)").unwrap_err();
        match e {
            Error::Parse { pos, message } => {
                assert_eq!(pos, 14);
                assert!(message.contains("two arguments"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("id(gen x, gen y)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("gen"), Err(Error::Parse { .. })));
        assert!(matches!(parse("comp(gen x, gen y)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("gen x gen y"), Err(Error::Parse { .. })));
    }

    #[test]
    fn dim_suffix() {
        assert_eq!(
            parse("gen x@1").unwrap(),
            Expr::Gen {
                name: "x".into(),
                dim: Some(1)
            }
        );
        assert!(parse("gen x@").is_err());
    }

    #[test]
    fn json_form_round_trips() {
        let e = parse("comp_1(comp_0(gen phi, gen g), id(gen f@1))").unwrap();
        let j = serde_json::to_string(&e.to_json()).unwrap();
        let back: ExprJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_expr().unwrap(), e);
        let bad: ExprJson =
            serde_json::from_str(r#"{"op":"comp","dim":0,"args":[{"op":"gen","name":"x"}]}"#).unwrap();
        assert!(bad.to_expr().is_err());
    }

    #[test]
    fn cell_to_expr_evaluates_back() {
        let p = fixtures::fix_int();
        let e = parse("comp_1(comp_0(gen phi, gen g), comp_0(gen f', gen psi))").unwrap();
        let u = eval(&p, &e).unwrap();
        let back = cell_to_expr(&u, Some(&p));
        assert_eq!(eval(&p, &back).unwrap(), u);
    }

    fn arb_name() -> impl Strategy<Value = String> {
        "[a-zA-Z][a-zA-Z0-9_'.]{0,5}"
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = (arb_name(), proptest::option::of(0usize..4))
            .prop_map(|(name, dim)| Expr::Gen { name, dim });
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Expr::id),
                (0usize..4, inner.clone(), inner).prop_map(|(i, a, b)| Expr::comp(i, a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(e in arb_expr()) {
            prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
    }
}
