use std::fmt;

use super::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

pub const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

/// A term over operation symbols and variables.
///
/// Variables 0, 1, 2 print as `x`, `y`, `z`; higher indices print as `x3`, `x4`, ….
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Apply(String, Vec<Term>),
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term::Var(index)
    }

    pub fn apply(symbol: impl Into<String>, children: Vec<Term>) -> Term {
        Term::Apply(symbol.into(), children)
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Apply(_, ch) => 1 + ch.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Apply(_, ch) => 1 + ch.iter().map(Term::node_count).sum::<usize>(),
        }
    }

    /// Replaces variable `i` with `subst[i]`.
    pub fn substitute(&self, subst: &[Term]) -> Term {
        match self {
            Term::Var(i) => subst.get(*i).cloned().unwrap_or(Term::Var(*i)),
            Term::Apply(s, ch) => {
                Term::Apply(s.clone(), ch.iter().map(|c| c.substitute(subst)).collect())
            }
        }
    }

    /// Evaluates bottom-up with `args[i]` bound to variable `i`.
    pub fn eval(&self, alg: &FiniteAlgebra, args: &[Elem]) -> Result<Elem> {
        match self {
            Term::Var(i) => args.get(*i).copied().ok_or(Error::UnboundVariable {
                index: *i,
                available: args.len(),
            }),
            Term::Apply(symbol, children) => {
                let op = alg
                    .op(symbol)
                    .ok_or_else(|| Error::UnknownSymbol(symbol.clone()))?;
                if op.arity() != children.len() {
                    return Err(Error::ArityMismatch {
                        symbol: symbol.clone(),
                        expected: op.arity(),
                        found: children.len(),
                    });
                }
                let mut vals = [0; super::MAX_ARITY];
                for (slot, child) in vals.iter_mut().zip(children) {
                    *slot = child.eval(alg, args)?;
                }
                Ok(op.apply(alg.size(), &vals[..children.len()]))
            }
        }
    }

    /// The ternary term operation as a flat table indexed by `x·s² + y·s + z`.
    pub fn ternary_table(&self, alg: &FiniteAlgebra) -> Result<Vec<Elem>> {
        let s = alg.size();
        let mut table = Vec::with_capacity(s * s * s);
        for x in 0..s {
            for y in 0..s {
                for z in 0..s {
                    table.push(self.eval(alg, &[x, y, z])?);
                }
            }
        }
        Ok(table)
    }

    pub(crate) fn parse_var(name: &str) -> Option<usize> {
        if let Some(i) = VAR_NAMES.iter().position(|v| *v == name) {
            return Some(i);
        }
        let digits = name.strip_prefix('x')?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        digits.parse().ok()
    }

    /// Parses prefix notation such as `join(meet(x,y),z)`. Bare identifiers other
    /// than variable names are nullary operations.
    pub fn parse(text: &str) -> Result<Term> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse("trailing input", p.pos + 1));
        }
        Ok(t)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            return Err(Error::parse("expected identifier", start + 1));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn term(&mut self) -> Result<Term> {
        let start = self.pos;
        let name = self.ident()?;
        if self.peek() != Some(b'(') {
            return Ok(match Term::parse_var(&name) {
                Some(i) => Term::Var(i),
                None => Term::Apply(name, Vec::new()),
            });
        }
        if Term::parse_var(&name).is_some() {
            return Err(Error::parse(
                format!("variable `{name}` cannot be applied"),
                start + 1,
            ));
        }
        self.pos += 1;
        let mut children = Vec::new();
        if self.peek() == Some(b')') {
            self.pos += 1;
            return Ok(Term::Apply(name, children));
        }
        loop {
            children.push(self.term()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(Term::Apply(name, children));
                }
                _ => return Err(Error::parse("expected `,` or `)`", self.pos + 1)),
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) if *i < VAR_NAMES.len() => f.write_str(VAR_NAMES[*i]),
            Term::Var(i) => write!(f, "x{i}"),
            Term::Apply(s, ch) if ch.is_empty() => f.write_str(s),
            Term::Apply(s, ch) => {
                write!(f, "{s}(")?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl std::str::FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Term> {
        Term::parse(s)
    }
}
