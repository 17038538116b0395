//! Expression DSL: wires the calculus operators into the parser's hook
//! mechanism so identities can be written as plain text.
//!
//! Operator call forms, beyond the parser built-ins `tr`, `bracket`,
//! `intS`/`intC`/`intM`:
//!
//! | form          | meaning                                               |
//! |---------------|-------------------------------------------------------|
//! | `delta(e)`    | field-space exterior derivative                       |
//! | `d(e)`        | spacetime exterior derivative                         |
//! | `D(e)`        | gauge-covariant derivative `d e + [A, e]`             |
//! | `s(e)`        | BRST operator                                         |
//! | `dH(e)`       | horizontal derivative `delta - s`                     |
//! | `F()`         | expanded functional curvature `delta w + 1/2 [w, w]`  |
//! | `Fo`          | (atom) opaque curvature symbol                        |
//! | `expandF(e)`  | replace `Fo` by the expansion                          |
//! | `iota(X, e)`  | contraction with the fundamental vector of `X`        |
//! | `iotaV(e)`    | contraction with the ghost-valued vertical vector     |
//! | `gauge(e)`    | finite gauge transformation by `b`                    |
//! | `onshell(e)`  | impose the Gauss constraint `D_A E = 0`               |
//! | `stokes(e)`   | move exact slice integrands to the corner             |

use crate::algebra::{parse_with, AlgebraError, Expression, OperatorHooks};
use crate::calculus::Engine;

struct EngineHooks<'a> {
    engine: &'a Engine,
}

impl OperatorHooks for EngineHooks<'_> {
    fn apply(&self, name: &str, mut args: Vec<Expression>) -> Result<Expression, String> {
        let g = self.engine;
        let one_arg = |args: &mut Vec<Expression>| -> Result<Expression, String> {
            if args.len() == 1 {
                Ok(args.pop().unwrap())
            } else {
                Err(format!("`{name}` takes 1 argument, got {}", args.len()))
            }
        };
        let lift = |r: Result<Expression, AlgebraError>| r.map_err(|e| e.to_string());
        match name {
            "delta" => lift(g.delta(&one_arg(&mut args)?)),
            "d" => lift(g.d(&one_arg(&mut args)?)),
            "D" => lift(g.covariant_d(&one_arg(&mut args)?)),
            "s" => lift(g.brst_s(&one_arg(&mut args)?)),
            "dH" => lift(g.delta_h(&one_arg(&mut args)?)),
            "F" => {
                if args.is_empty() {
                    Ok(g.curvature())
                } else {
                    Err("`F` takes no arguments".to_string())
                }
            }
            "expandF" => lift(g.expand_curvature(&one_arg(&mut args)?)),
            "iotaV" => lift(g.iota_v(&one_arg(&mut args)?)),
            "gauge" => lift(g.gauge_substitute(&one_arg(&mut args)?)),
            "onshell" => lift(g.onshell_reduce(&one_arg(&mut args)?)),
            "stokes" => lift(g.stokes(&one_arg(&mut args)?)),
            "iota" => {
                if args.len() != 2 {
                    return Err(format!("`iota` takes 2 arguments, got {}", args.len()));
                }
                let body = args.pop().unwrap();
                let parameter = args.pop().unwrap();
                let symbol = bare_symbol(&parameter).ok_or_else(|| {
                    "first argument of `iota` must be a bare gauge-parameter symbol".to_string()
                })?;
                lift(g.contract_fundamental(&symbol, &body))
            }
            _ => Err(format!("unknown operator `{name}`")),
        }
    }
}

/// If the expression is a single unit-coefficient unflagged atom, returns
/// its symbol.
fn bare_symbol(e: &Expression) -> Option<String> {
    use num::One;
    let [term] = e.terms() else { return None };
    if !term.coeff.is_one()
        || term.domain.is_some()
        || !term.scalars.is_empty()
        || !term.traces.is_empty()
    {
        return None;
    }
    let [atom] = term.open.as_slice() else {
        return None;
    };
    if atom.delta_flag || atom.d_flag {
        return None;
    }
    Some(atom.symbol.clone())
}

/// Parses DSL text against the engine's generator table and operator set.
pub fn parse(engine: &Engine, text: &str) -> Result<Expression, AlgebraError> {
    parse_with(engine.context(), &EngineHooks { engine }, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_parse_and_agree_with_direct_calls() {
        let g = Engine::standard();
        let via_text = g.parse("dH(w) - F()").unwrap();
        assert!(via_text.is_zero());
        let via_text = g.parse("s(s(A))").unwrap();
        assert!(via_text.is_zero());
    }

    #[test]
    fn iota_requires_a_bare_parameter() {
        let g = Engine::standard();
        let err = g.parse("iota(delta(A), delta(A))").unwrap_err();
        assert!(err.to_string().contains("bare"));
        let ok = g.parse("iota(X, delta(A)) - D(X)").unwrap();
        assert!(ok.is_zero());
    }

    #[test]
    fn mixed_pipeline_round_trips_through_the_printer() {
        let g = Engine::standard();
        let e = g
            .parse("intS(tr(E * dH(delta(A))) ) + intC(tr(delta(E) * w))")
            .unwrap();
        let text = crate::algebra::pretty_print(&e);
        let back = g.parse(&text).unwrap();
        assert!(back.equals(&e).unwrap());
    }
}
