//! Recursive-descent parser for the expression DSL.
//!
//! Grammar (EBNF sketch):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-'? factor ('*' factor)*
//! factor := rational | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Identifiers are `[A-Za-z][A-Za-z0-9_]*`; rationals are `int` or
//! `int '/' int`. The built-in call forms are `tr(e)`, `bracket(a, b)`,
//! `intS(e)`, `intC(e)`, and `intM(e)`; every other call form (the
//! derivations and contractions: `delta`, `d`, `D`, `s`, `dH`, `F`, `iota`,
//! `iotaV`, `gauge`, `onshell`, `stokes`) is resolved through the
//! [`OperatorHooks`] callback so that the parser does not depend on the
//! calculus layer. Bare identifiers resolve against the generator table.

use super::{AlgebraError, Context, Domain, Expression, Term};
use num::{BigInt, BigRational};
use std::str::FromStr;

/// Resolver for operator keywords that live above the plain algebra
/// (derivations, contractions, substitutions).
pub trait OperatorHooks {
    /// Applies the named operator to already-parsed arguments, or reports
    /// why it cannot (unknown keyword, wrong arity, ...).
    fn apply(&self, name: &str, args: Vec<Expression>) -> Result<Expression, String>;
}

/// A hook set with no extended operators; suitable for plain algebra tests.
pub struct NoHooks;

impl OperatorHooks for NoHooks {
    fn apply(&self, name: &str, _args: Vec<Expression>) -> Result<Expression, String> {
        Err(format!("unknown operator `{name}`"))
    }
}

pub fn parse_with(
    ctx: &Context,
    hooks: &dyn OperatorHooks,
    text: &str,
) -> Result<Expression, AlgebraError> {
    let mut p = Parser {
        ctx,
        hooks,
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    ctx: &'a Context,
    hooks: &'a dyn OperatorHooks,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> AlgebraError {
        AlgebraError::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), AlgebraError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expression, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t).map_err(|e| self.lift(e))?;
                }
                Some('-') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t).map_err(|e| self.lift(e))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expression, AlgebraError> {
        self.skip_ws();
        let negate = self.eat('-');
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat('*') {
                let f = self.factor()?;
                acc = acc.mul(&f).map_err(|e| self.lift(e))?;
            } else {
                break;
            }
        }
        Ok(if negate { acc.neg() } else { acc })
    }

    fn factor(&mut self) -> Result<Expression, AlgebraError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                self.skip_ws();
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c) if c.is_ascii_alphabetic() => self.call_or_atom(),
            Some(c) => Err(self.error(format!("unexpected character `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn rational(&mut self) -> Result<Expression, AlgebraError> {
        let numer = self.integer()?;
        self.skip_ws();
        let value = if self.eat('/') {
            self.skip_ws();
            let denom = self.integer()?;
            if denom == BigInt::from(0) {
                return Err(self.error("zero denominator"));
            }
            BigRational::new(numer, denom)
        } else {
            BigRational::from_integer(numer)
        };
        let term = Term {
            coeff: value,
            domain: None,
            scalars: vec![],
            traces: vec![],
            open: vec![],
        };
        Expression::from_terms(vec![term]).map_err(|e| self.lift(e))
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        let mut digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        BigInt::from_str(&digits).map_err(|_| self.error("invalid number"))
    }

    fn ident(&mut self) -> String {
        let mut name = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            name.push(self.bump().unwrap());
        }
        name
    }

    fn call_or_atom(&mut self) -> Result<Expression, AlgebraError> {
        let name = self.ident();
        self.skip_ws();
        if !self.eat('(') {
            return self.ctx.atom(&name).map_err(|e| self.lift(e));
        }
        let mut args = Vec::new();
        self.skip_ws();
        if !self.eat(')') {
            loop {
                args.push(self.expr()?);
                self.skip_ws();
                if self.eat(',') {
                    continue;
                }
                self.expect(')')?;
                break;
            }
        }
        self.apply(&name, args)
    }

    fn apply(&mut self, name: &str, mut args: Vec<Expression>) -> Result<Expression, AlgebraError> {
        let arity = |n: usize, args: &[Expression]| -> Result<(), AlgebraError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(AlgebraError::Parse {
                    line: self.line,
                    col: self.col,
                    msg: format!("`{name}` takes {n} argument(s), got {}", args.len()),
                })
            }
        };
        let lifted = |this: &Self, e: AlgebraError| this.lift(e);
        match name {
            "tr" => {
                arity(1, &args)?;
                args.pop().unwrap().trace().map_err(|e| lifted(self, e))
            }
            "bracket" => {
                arity(2, &args)?;
                let b = args.pop().unwrap();
                let a = args.pop().unwrap();
                a.bracket(&b).map_err(|e| lifted(self, e))
            }
            "intS" | "intC" | "intM" => {
                arity(1, &args)?;
                let dom = match name {
                    "intS" => Domain::Sigma,
                    "intC" => Domain::C,
                    _ => Domain::M,
                };
                args.pop()
                    .unwrap()
                    .integrate(dom)
                    .map_err(|e| lifted(self, e))
            }
            _ => self
                .hooks
                .apply(name, args)
                .map_err(|msg| self.error(msg)),
        }
    }

    /// Re-tags an algebra error with the current source position so that
    /// semantic failures (unknown atom, degree mismatch) still point at the
    /// offending spot.
    fn lift(&self, e: AlgebraError) -> AlgebraError {
        match e {
            AlgebraError::Parse { .. } => e,
            other => AlgebraError::Parse {
                line: self.line,
                col: self.col,
                msg: other.to_string(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums_products_and_rationals() {
        let ctx = Context::standard();
        let e = parse_with(&ctx, &NoHooks, "1/2 * bracket(w, w) - w * w").unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn rejects_unknown_atoms_with_position() {
        let ctx = Context::standard();
        let err = parse_with(&ctx, &NoHooks, "E + nope").unwrap_err();
        match err {
            AlgebraError::Parse { msg, .. } => assert!(msg.contains("nope")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_mixed_degree_sums() {
        let ctx = Context::standard();
        let err = parse_with(&ctx, &NoHooks, "A + E").unwrap_err();
        assert!(matches!(err, AlgebraError::Parse { .. }));
    }
}
