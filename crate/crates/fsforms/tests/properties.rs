//! Randomized property tests for the graded algebra and the derivations:
//! sign coherence of products and traces, bracket antisymmetry, the graded
//! Jacobi identity, nilpotency and commutation of the differentials, the
//! Leibniz rule, and printer/parser round-tripping.

use fsforms::algebra::pretty_print;
use fsforms::{Bidegree, Engine, Expression};
use num::BigRational;
use proptest::prelude::*;

const SYMBOLS: &[&str] = &["A", "E", "w", "X"];

fn engine() -> Engine {
    Engine::standard()
}

/// A random adjoint-valued atom, possibly carrying derivative flags, as an
/// expression.
fn atom_expr(engine: &Engine, sym: usize, with_delta: bool, with_d: bool) -> Expression {
    let mut e = engine.atom(SYMBOLS[sym % SYMBOLS.len()]).unwrap();
    if with_d {
        e = engine.d(&e).unwrap();
    }
    if with_delta {
        e = engine.delta(&e).unwrap();
    }
    e
}

fn word_strategy() -> impl Strategy<Value = Vec<(usize, bool, bool)>> {
    prop::collection::vec((0usize..4, any::<bool>(), any::<bool>()), 1..4)
}

/// Product of random atoms; `None` when the product vanishes (repeated odd
/// factor) — callers skip those.
fn product(engine: &Engine, word: &[(usize, bool, bool)]) -> Option<Expression> {
    let mut acc: Option<Expression> = None;
    for &(s, fd, fs) in word {
        let factor = atom_expr(engine, s, fd, fs);
        acc = Some(match acc {
            None => factor,
            Some(prev) => prev.mul(&factor).unwrap(),
        });
    }
    let out = acc.unwrap();
    if out.is_zero() {
        None
    } else {
        Some(out)
    }
}

fn koszul(a: Bidegree, b: Bidegree) -> bool {
    (a.f * b.f + a.s * b.s) % 2 == 1
}

proptest! {
    #[test]
    fn bracket_is_graded_antisymmetric(wa in word_strategy(), wb in word_strategy()) {
        let g = engine();
        let (Some(a), Some(b)) = (product(&g, &wa), product(&g, &wb)) else { return Ok(()) };
        // [a,b] = -(-1)^k [b,a]
        let ab = a.bracket(&b).unwrap();
        let ba = b.bracket(&a).unwrap();
        let sign = koszul(a.bidegree().unwrap(), b.bidegree().unwrap());
        let expected = if sign { ba } else { ba.neg() };
        prop_assert!(ab.equals(&expected).unwrap(), "bracket antisymmetry failed");
    }

    #[test]
    fn graded_jacobi_holds(
        wa in word_strategy(), wb in word_strategy(), wc in word_strategy()
    ) {
        let g = engine();
        let (Some(a), Some(b), Some(c)) =
            (product(&g, &wa), product(&g, &wb), product(&g, &wc))
        else { return Ok(()) };
        let (da, db, dc) = (
            a.bidegree().unwrap(), b.bidegree().unwrap(), c.bidegree().unwrap(),
        );
        // [a,[b,c]] = [[a,b],c] + (-1)^{k(a,b)} [b,[a,c]]
        let lhs = a.bracket(&b.bracket(&c).unwrap()).unwrap();
        let mut rhs = a.bracket(&b).unwrap().bracket(&c).unwrap();
        let cross = b.bracket(&a.bracket(&c).unwrap()).unwrap();
        rhs = if koszul(da, db) { rhs.sub(&cross).unwrap() } else { rhs.add(&cross).unwrap() };
        let _ = dc;
        prop_assert!(lhs.equals(&rhs).unwrap(), "graded Jacobi failed");
    }

    #[test]
    fn trace_rotation_signs_are_coherent(word in word_strategy(), rot in 0usize..4) {
        // tr(x y ... z) equals the trace of any cyclic rotation with the
        // Koszul sign of moving the front block past the rest; comparing
        // the engine's canonical forms of both traces checks the sign rule
        // against an independent composition of pairwise swaps.
        let g = engine();
        let Some(e) = product(&g, &word) else { return Ok(()) };
        if word.len() < 2 { return Ok(()) }
        let rot = 1 + rot % (word.len() - 1);
        let (front, back) = word.split_at(rot);
        let rotated: Vec<_> = back.iter().chain(front.iter()).cloned().collect();
        let Some(er) = product(&g, &rotated) else { return Ok(()) };
        // Sign: front block of degree (f1,s1) moves past the rest (f2,s2).
        let total = e.bidegree().unwrap();
        let front_deg = match product(&g, front) {
            Some(fe) => fe.bidegree().unwrap(),
            None => return Ok(()),
        };
        let rest = Bidegree::new(total.f - front_deg.f, total.s - front_deg.s);
        let tr_a = e.trace().unwrap();
        let tr_b = er.trace().unwrap();
        let expected = if koszul(front_deg, rest) { tr_b.neg() } else { tr_b };
        prop_assert!(tr_a.equals(&expected).unwrap(), "cyclic trace sign failed");
    }

    #[test]
    fn differentials_are_nilpotent_and_commute(word in word_strategy()) {
        let g = engine();
        let Some(e) = product(&g, &word) else { return Ok(()) };
        prop_assert!(g.delta(&g.delta(&e).unwrap()).unwrap().is_zero());
        prop_assert!(g.d(&g.d(&e).unwrap()).unwrap().is_zero());
        let dd = g.d(&g.delta(&e).unwrap()).unwrap();
        let del = g.delta(&g.d(&e).unwrap()).unwrap();
        prop_assert!(dd.equals(&del).unwrap());
        prop_assert!(g.brst_s(&g.brst_s(&e).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn derivations_satisfy_the_graded_leibniz_rule(
        wa in word_strategy(), wb in word_strategy()
    ) {
        let g = engine();
        let (Some(a), Some(b)) = (product(&g, &wa), product(&g, &wb)) else { return Ok(()) };
        let prod = a.mul(&b).unwrap();
        let da = a.bidegree().unwrap();
        // delta: sign (-1)^f crossing a.
        let lhs = g.delta(&prod).unwrap();
        let cross = a.mul(&g.delta(&b).unwrap()).unwrap();
        let mut rhs = g.delta(&a).unwrap().mul(&b).unwrap();
        rhs = if da.f % 2 == 1 { rhs.sub(&cross).unwrap() } else { rhs.add(&cross).unwrap() };
        prop_assert!(lhs.equals(&rhs).unwrap(), "delta Leibniz failed");
        // d: sign (-1)^s crossing a.
        let lhs = g.d(&prod).unwrap();
        let cross = a.mul(&g.d(&b).unwrap()).unwrap();
        let mut rhs = g.d(&a).unwrap().mul(&b).unwrap();
        rhs = if da.s % 2 == 1 { rhs.sub(&cross).unwrap() } else { rhs.add(&cross).unwrap() };
        prop_assert!(lhs.equals(&rhs).unwrap(), "d Leibniz failed");
    }

    #[test]
    fn scaling_and_addition_are_coherent(word in word_strategy(), n in -6i64..6) {
        let g = engine();
        let Some(e) = product(&g, &word) else { return Ok(()) };
        let k = BigRational::from_integer(n.into());
        let scaled = e.scale(&k);
        let mut sum = Expression::zero();
        for _ in 0..n.unsigned_abs() {
            sum = sum.add(&e).unwrap();
        }
        if n < 0 {
            sum = sum.neg();
        }
        prop_assert!(scaled.equals(&sum).unwrap_or(n == 0 && sum.is_zero()));
    }

    #[test]
    fn printer_parser_round_trip(word in word_strategy(), traced in any::<bool>()) {
        let g = engine();
        let Some(mut e) = product(&g, &word) else { return Ok(()) };
        if traced {
            e = e.trace().unwrap();
        }
        let text = pretty_print(&e);
        let back = g.parse(&text).unwrap();
        prop_assert!(back.equals(&e).unwrap(), "round trip failed for `{text}`");
    }

    #[test]
    fn canonicalization_is_idempotent(word in word_strategy(), traced in any::<bool>()) {
        let g = engine();
        let Some(mut e) = product(&g, &word) else { return Ok(()) };
        if traced {
            e = e.trace().unwrap();
        }
        let again = e.canonicalize();
        prop_assert!(again.equals(&e).unwrap());
    }

    #[test]
    fn traced_factors_commute_with_the_koszul_sign(
        wa in word_strategy(), wb in word_strategy()
    ) {
        // Traces are scalar-valued, so tr(a) * tr(b) and tr(b) * tr(a)
        // canonicalize to the same term up to the Koszul sign of the two
        // total bidegrees. (Open matrix words, by contrast, never reorder.)
        let g = engine();
        let (Some(a), Some(b)) = (product(&g, &wa), product(&g, &wb)) else { return Ok(()) };
        let (ta, tb) = (a.trace().unwrap(), b.trace().unwrap());
        let ab = ta.mul(&tb).unwrap();
        let ba = tb.mul(&ta).unwrap();
        let expected = if koszul(a.bidegree().unwrap(), b.bidegree().unwrap()) {
            ba.neg()
        } else {
            ba
        };
        prop_assert!(ab.equals(&expected).unwrap(), "trace factor reordering sign failed");
    }

    #[test]
    fn horizontality_of_the_curvature_is_stable_under_products(word in word_strategy()) {
        // iota annihilates dH-images of products of covariant generators.
        let g = engine();
        let picks: Vec<usize> = word.iter().map(|w| w.0).collect();
        let mut e = g.atom(["E", "X"][picks[0] % 2]).unwrap();
        for p in &picks[1..] {
            e = e.mul(&g.atom(["E", "X"][p % 2]).unwrap()).unwrap();
        }
        let dh = g.delta_h(&e).unwrap();
        let contracted = g.contract_fundamental("X", &dh);
        match contracted {
            Ok(c) => prop_assert!(c.is_zero(), "dH image not horizontal: {c}"),
            Err(_) => prop_assert!(dh.is_zero()),
        }
    }
}

/// A deliberately non-proptest check on a known pair: the traces of w*X
/// (total degree (1,0)) and d(w)*X (total degree (1,1)) anticommute as
/// scalar factors, and the open matrix words w*dw and dw*w stay distinct.
#[test]
fn koszul_helper_matches_engine_on_known_pair() {
    let g = engine();
    let w = g.atom("w").unwrap();
    let x = g.atom("X").unwrap();
    let dw = g.d(&w).unwrap();
    let ta = w.mul(&x).unwrap().trace().unwrap();
    let tb = dw.mul(&x).unwrap().trace().unwrap();
    let ab = ta.mul(&tb).unwrap();
    let ba = tb.mul(&ta).unwrap();
    assert!(ab.equals(&ba.neg()).unwrap());
    let open_ab = w.mul(&dw).unwrap();
    let open_ba = dw.mul(&w).unwrap();
    assert!(!open_ab.equals(&open_ba).unwrap() && !open_ab.equals(&open_ba.neg()).unwrap());
}
