//! Pretty-printer emitting DSL-parseable text. `parse(pretty_print(e))`
//! reproduces `e` exactly (both are canonical), which the property tests
//! assert.

use super::{Atom, Domain, Expression, Term};
use num::{One, Signed};
use std::fmt;

fn atom_text(a: &Atom) -> String {
    let mut s = a.symbol.clone();
    if a.d_flag {
        s = format!("d({s})");
    }
    if a.delta_flag {
        s = format!("delta({s})");
    }
    s
}

fn term_body(t: &Term) -> String {
    let mut parts: Vec<String> = Vec::new();
    for a in &t.scalars {
        parts.push(atom_text(a));
    }
    for trace in &t.traces {
        if trace.is_empty() {
            parts.push("tr(1)".to_string());
        } else {
            let inner: Vec<String> = trace.iter().map(atom_text).collect();
            parts.push(format!("tr({})", inner.join(" * ")));
        }
    }
    for a in &t.open {
        parts.push(atom_text(a));
    }
    parts.join(" * ")
}

fn term_text(t: &Term) -> String {
    let body = term_body(t);
    let wrapped = match t.domain {
        None => body,
        Some(Domain::Sigma) => format!("intS({body})"),
        Some(Domain::C) => format!("intC({body})"),
        Some(Domain::M) => format!("intM({body})"),
    };
    let magnitude = t.coeff.abs();
    if wrapped.is_empty() {
        return format!("{magnitude}");
    }
    if magnitude.is_one() {
        wrapped
    } else {
        format!("{magnitude} * {wrapped}")
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms().is_empty() {
            return write!(out, "0");
        }
        for (i, t) in self.terms().iter().enumerate() {
            if i == 0 {
                if t.coeff.is_negative() {
                    write!(out, "-")?;
                }
            } else if t.coeff.is_negative() {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            write!(out, "{}", term_text(t))?;
        }
        Ok(())
    }
}

/// Canonical textual form of an expression, suitable for reports and for
/// feeding back into the parser.
pub fn pretty_print(e: &Expression) -> String {
    e.to_string()
}
