//! The derivations and contraction operators: the field-space differential
//! `delta`, the spacetime differential `d`, the gauge-covariant derivative
//! `D`, the BRST (vertical) operator `s`, the horizontal differential
//! `dH = delta - s`, the functional curvature `F = delta(w) + 1/2 [w,w]`,
//! gauge substitution, on-shell reduction, symbolic integration with a
//! Stokes move, and contraction with fundamental vector fields.
//!
//! Convention notes (all are exercised by the property tests):
//!
//! * `delta` and `d` are graded derivations of bidegree (1,0) and (0,1);
//!   crossing a factor of bidegree `(f,s)` costs `(-1)^f` resp. `(-1)^s`.
//!   They commute: `d(delta(e)) = delta(d(e))`, encoded by giving atoms an
//!   unordered pair of derivative flags.
//! * The BRST operator is the unique nilpotent derivation of bidegree (1,0)
//!   with `s A = D_A w`, and nilpotency forces `s E = [E, w]` and
//!   `s w = -1/2 [w, w]` (Maurer-Cartan sign). On derivative atoms it is
//!   extended by `s(delta a) = -delta(s a)` and `s(d a) = d(s a)`, the
//!   unique extension keeping `s` nilpotent on the full atom alphabet. The
//!   horizontal derivative `dH` is *not* `delta - s`: see [`Engine::delta_h`].
//! * Contraction with the ghost-valued vertical vector (`iota_v`) is *not*
//!   a graded derivation of the usual kind; it is implemented as an even
//!   derivation with the atom rules `iota_v(delta A) = D_A w`,
//!   `iota_v(delta E) = [E, w]`, `iota_v(delta w) = 1/2 [w, w]`, and
//!   `iota_v(w) = -1/2 w`, which reproduces exactly the two identities it
//!   exists for: the Maurer-Cartan reading of `delta w` on vertical vectors
//!   and the horizontality `iota_v(F) = 0` of the expanded curvature.
//! * Contraction with the fundamental vector of a field-independent gauge
//!   parameter `X` uses the table forced by horizontality of `dH`-images
//!   (`iota(w) = X`, `iota(delta A) = D_A X`, `iota(delta E) = -[X, E]`,
//!   `iota(delta w) = -[X, w]`).

use crate::algebra::{
    AlgebraError, Atom, Bidegree, Context, Domain, Expression, Term, Valuedness,
};
use num::{BigRational, One, Zero};

/// The calculus engine: a frozen generator table plus the operator rule
/// tables built over it. All methods are pure; the engine is freely
/// shareable across threads.
pub struct Engine {
    ctx: Context,
}

/// Leibniz sign discipline of an operator crossing a factor of bidegree
/// `(f, s)`.
#[derive(Clone, Copy)]
enum Parity {
    /// `(-1)^f` — field-space-odd operators: `delta`, `s`, contractions.
    FieldOdd,
    /// `(-1)^s` — spacetime-odd operators: `d`.
    SpaceOdd,
    /// No sign — the vertical ghost contraction.
    Even,
}

impl Parity {
    fn odd(self, deg: Bidegree) -> bool {
        match self {
            Parity::FieldOdd => deg.f % 2 == 1,
            Parity::SpaceOdd => deg.s % 2 == 1,
            Parity::Even => false,
        }
    }
}

impl Default for Engine {
    fn default() -> Self {
        Engine::standard()
    }
}

impl Engine {
    /// Engine over the standard Yang-Mills generator alphabet.
    pub fn standard() -> Self {
        Engine {
            ctx: Context::standard(),
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn atom(&self, symbol: &str) -> Result<Expression, AlgebraError> {
        self.ctx.atom(symbol)
    }

    pub fn parse(&self, text: &str) -> Result<Expression, AlgebraError> {
        crate::dsl::parse(self, text)
    }

    // ----- the two exterior differentials --------------------------------

    /// Field-space exterior derivative, a graded derivation of bidegree
    /// (1,0) with `delta(delta(e)) = 0`.
    pub fn delta(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        self.derive(e, Parity::FieldOdd, &|a| Ok(self.delta_atom(a)))
    }

    /// Spacetime exterior derivative, a graded derivation of bidegree (0,1)
    /// with `d(d(e)) = 0` and `d(delta(e)) = delta(d(e))`. Refuses to cross
    /// an integral sign.
    pub fn d(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        if e.terms().iter().any(|t| t.domain.is_some()) {
            return Err(AlgebraError::DUnderIntegral);
        }
        self.derive(e, Parity::SpaceOdd, &|a| Ok(self.d_atom(a)))
    }

    fn delta_atom(&self, a: &Atom) -> Expression {
        if a.delta_flag {
            return Expression::zero();
        }
        if a.valuedness == Valuedness::GroupInverse {
            // delta(binv) = -binv delta(b) binv, the derivative of
            // b * binv = 1; a spacetime flag commutes through.
            if a.d_flag {
                let mut base = a.clone();
                base.d_flag = false;
                let db = self
                    .d(&self.delta_atom(&base))
                    .expect("group relation stays integrand-level");
                return db;
            }
            let binv = Expression::from_atom(a.clone());
            let b = self.group_partner(a);
            let delta_b = self.delta(&b).unwrap();
            return binv.mul(&delta_b).unwrap().mul(&binv).unwrap().neg();
        }
        match a.with_delta() {
            Some(flagged) => Expression::from_atom(flagged),
            None => Expression::zero(),
        }
    }

    fn d_atom(&self, a: &Atom) -> Expression {
        if a.d_flag {
            return Expression::zero();
        }
        if a.valuedness == Valuedness::GroupInverse {
            if a.delta_flag {
                let mut base = a.clone();
                base.delta_flag = false;
                return self.delta(&self.d_atom(&base)).unwrap();
            }
            let binv = Expression::from_atom(a.clone());
            let b = self.group_partner(a);
            let d_b = self.d(&b).unwrap();
            return binv.mul(&d_b).unwrap().mul(&binv).unwrap().neg();
        }
        match a.with_d() {
            Some(flagged) => Expression::from_atom(flagged),
            None => Expression::zero(),
        }
    }

    fn group_partner(&self, inverse: &Atom) -> Expression {
        let symbol = inverse
            .inverse_of
            .as_deref()
            .expect("group-inverse atoms carry their partner symbol");
        self.ctx.atom(symbol).expect("partner is declared")
    }

    // ----- covariant and horizontal structure ----------------------------

    /// Gauge-covariant derivative `D_A e = d e + [A, e]`; the graded bracket
    /// makes this `dX - [X, A]` on gauge parameters.
    pub fn covariant_d(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        if e.is_zero() {
            return Ok(Expression::zero());
        }
        if !e.is_matrix() {
            return Err(AlgebraError::BracketOfScalar);
        }
        let a = self.atom("A")?;
        self.d(e)?.add(&a.bracket(e)?)
    }

    /// The BRST operator extended as a bidegree-(1,0) graded derivation.
    pub fn brst_s(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        self.derive(e, Parity::FieldOdd, &|a| self.s_atom(a))
    }

    fn s_atom(&self, a: &Atom) -> Result<Expression, AlgebraError> {
        if a.delta_flag {
            let mut base = a.clone();
            base.delta_flag = false;
            return Ok(self.delta(&self.s_atom(&base)?)?.neg());
        }
        if a.d_flag {
            let mut base = a.clone();
            base.d_flag = false;
            return self.d(&self.s_atom(&base)?);
        }
        let w = self.atom("w")?;
        Ok(match a.symbol.as_str() {
            "A" => self.covariant_d(&w)?,
            "E" => self.atom("E")?.bracket(&w)?,
            "w" => w.bracket(&w)?.scale(&-half()),
            "b" => self.atom("b")?.mul(&w)?,
            "binv" => {
                // s(binv) = -binv (s b) binv = -w binv.
                let binv = self.atom("binv")?;
                let sb = self.atom("b")?.mul(&w)?;
                binv.mul(&sb)?.mul(&binv)?.neg()
            }
            "Fo" => self.atom("Fo")?.bracket(&w)?,
            _ => Expression::zero(),
        })
    }

    /// Horizontal field-space derivative `dH = delta - V`, where `V` is the
    /// vertical variation along the functional connection. On generators
    /// `V` agrees with the BRST operator (`dH E = delta E + [w, E]`,
    /// `dH A = delta A + [w, A] - d w`, `dH w = F`), but on derivative
    /// atoms it differs: because the vertical vector field is
    /// field-dependent, `V(delta a) = -delta(V a) - [F, a]` carries the
    /// curvature of that dependence. The correction is exactly what makes
    /// `dH` square to the curvature bracket (`dH dH E = [F, E]`,
    /// `dH dH A = -D F`) instead of vanishing identically as `delta - s`
    /// would.
    pub fn delta_h(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        let vertical = self.derive(e, Parity::FieldOdd, &|a| self.v_atom(a))?;
        self.delta(e)?.sub(&vertical)
    }

    fn v_atom(&self, a: &Atom) -> Result<Expression, AlgebraError> {
        if a.delta_flag {
            let mut base = a.clone();
            base.delta_flag = false;
            let out = self.delta(&self.v_atom(&base)?)?.neg();
            return out.add(&self.curvature_variation(&base)?);
        }
        if a.d_flag {
            let mut base = a.clone();
            base.d_flag = false;
            return self.d(&self.v_atom(&base)?);
        }
        let w = self.atom("w")?;
        Ok(match a.symbol.as_str() {
            "A" => self.covariant_d(&w)?,
            "E" => self.atom("E")?.bracket(&w)?,
            "w" => w.bracket(&w)?.scale(&-half()),
            "X" => self.atom("X")?.bracket(&w)?,
            "b" => self.atom("b")?.mul(&w)?,
            "binv" => w.mul(&self.atom("binv")?)?.neg(),
            _ => Expression::zero(),
        })
    }

    /// The functional curvature `F = delta(w) + 1/2 [w, w]` (Yang-Mills
    /// sign convention), expanded.
    pub fn curvature(&self) -> Expression {
        let w = self.atom("w").unwrap();
        self.delta(&w)
            .unwrap()
            .add(&w.bracket(&w).unwrap().scale(&half()))
            .unwrap()
    }

    /// Rewrites every occurrence of the opaque curvature atom `Fo` (and its
    /// derivative images) by the expansion `delta(w) + 1/2 [w, w]`.
    pub fn expand_curvature(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        let expansion = self.curvature();
        self.substitute_chain(e, &|a| {
            Ok(if a.symbol == "Fo" {
                expansion.clone()
            } else {
                Expression::from_atom(a.clone())
            })
        })
    }

    // ----- substitutions -------------------------------------------------

    /// Finite gauge transformation by the group-valued field `b`:
    /// `A -> b A binv - d(b) binv`, `E -> b E binv`,
    /// `w -> b w binv - delta(b) binv`, `X -> b X binv`; derivative atoms
    /// are replaced by the derivative of the image (chain rule through the
    /// group relations).
    pub fn gauge_substitute(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        let b = self.atom("b")?;
        let binv = self.atom("binv")?;
        let conj = |x: &Expression| -> Result<Expression, AlgebraError> {
            b.mul(x)?.mul(&binv)
        };
        self.substitute_chain(e, &|a| {
            let bare = Expression::from_atom(a.clone());
            Ok(match a.symbol.as_str() {
                "A" => conj(&bare)?.sub(&self.d(&b)?.mul(&binv)?)?,
                "w" => conj(&bare)?.sub(&self.delta(&b)?.mul(&binv)?)?,
                "E" | "X" | "Fo" => conj(&bare)?,
                _ => bare,
            })
        })
    }

    /// On-shell reduction: imposes the Gauss constraint `D_A E = 0` by
    /// rewriting `d(E) -> -[A, E]`, together with its field-space
    /// prolongation `d(delta E) -> -[delta A, E] - [A, delta E]` (the
    /// constraint holds on a field-space subvariety, so its `delta` vanishes
    /// there too).
    pub fn onshell_reduce(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        let a = self.atom("A")?;
        let en = self.atom("E")?;
        let de = self.delta(&en)?;
        let da = self.delta(&a)?;
        self.substitute_chain_flagged(e, &|atom| {
            Ok(match (atom.symbol.as_str(), atom.delta_flag, atom.d_flag) {
                ("E", false, true) => Some(a.bracket(&en)?.neg()),
                ("E", true, true) => Some(da.bracket(&en)?.add(&a.bracket(&de)?)?.neg()),
                _ => None,
            })
        })
    }

    /// Parallel substitution of base generators, pushing `delta`/`d` flags
    /// through by differentiating the image (chain rule).
    fn substitute_chain(
        &self,
        e: &Expression,
        base_map: &dyn Fn(&Atom) -> Result<Expression, AlgebraError>,
    ) -> Result<Expression, AlgebraError> {
        self.substitute(e, &|a| {
            let mut bare = a.clone();
            bare.delta_flag = false;
            bare.d_flag = false;
            let mut image = base_map(&bare)?;
            if a.d_flag {
                image = self.d(&image)?;
            }
            if a.delta_flag {
                image = self.delta(&image)?;
            }
            Ok(image)
        })
    }

    /// Substitution keyed on the full flagged atom; `None` leaves the atom
    /// untouched.
    fn substitute_chain_flagged(
        &self,
        e: &Expression,
        map: &dyn Fn(&Atom) -> Result<Option<Expression>, AlgebraError>,
    ) -> Result<Expression, AlgebraError> {
        self.substitute(e, &|a| {
            Ok(match map(a)? {
                Some(image) => image,
                None => Expression::from_atom(a.clone()),
            })
        })
    }

    /// Core parallel substitution: rebuilds every term as the ordered
    /// product of the factor images. Images must be degree-homogeneous of
    /// the replaced atom's bidegree, so no reordering signs arise.
    fn substitute(
        &self,
        e: &Expression,
        map: &dyn Fn(&Atom) -> Result<Expression, AlgebraError>,
    ) -> Result<Expression, AlgebraError> {
        let mut acc = Expression::zero();
        for term in e.terms() {
            let mut product = constant(term.coeff.clone());
            for s in &term.scalars {
                product = product.mul(&map(s)?)?;
            }
            for word in &term.traces {
                let mut factor = constant(BigRational::one());
                for a in word {
                    factor = factor.mul(&map(a)?)?;
                }
                product = product.mul(&factor.trace()?)?;
            }
            for a in &term.open {
                product = product.mul(&map(a)?)?;
            }
            if let Some(dom) = term.domain {
                product = product.integrate(dom)?;
            }
            acc = acc.add(&product)?;
        }
        Ok(acc)
    }

    // ----- contractions --------------------------------------------------

    /// The field-dependence correction entering `V(delta a)`: an
    /// infinitesimal gauge variation with the curvature `F` as parameter,
    /// so `D F` on the connection atom and `[a, F]` on covariant atoms,
    /// pushed through spacetime-derivative flags.
    fn curvature_variation(&self, base: &Atom) -> Result<Expression, AlgebraError> {
        if base.d_flag {
            let mut inner = base.clone();
            inner.d_flag = false;
            return self.d(&self.curvature_variation(&inner)?);
        }
        if base.valuedness != Valuedness::Adjoint {
            return Ok(Expression::zero());
        }
        let f = self.curvature();
        if base.symbol == "A" {
            self.d(&f)?.add(&self.atom("A")?.bracket(&f)?)
        } else {
            Expression::from_atom(base.clone()).bracket(&f)
        }
    }

    /// Contraction with the fundamental vector field of a field-independent
    /// gauge parameter `X`, extended as a field-space-odd graded derivation.
    /// The atom table is the one forced by `iota(w) = X` together with
    /// horizontality of the curvature and of the `dH`-images:
    /// `iota(delta A) = D_A X`, `iota(delta E) = -[X, E]`,
    /// `iota(delta w) = -[X, w]`.
    pub fn contract_fundamental(
        &self,
        x_symbol: &str,
        e: &Expression,
    ) -> Result<Expression, AlgebraError> {
        let x = self.atom(x_symbol)?;
        if !x.is_matrix() || x.bidegree() != Some(Bidegree::new(0, 0)) {
            return Err(AlgebraError::NothingToContract);
        }
        if let Some(deg) = e.bidegree() {
            if deg.f == 0 {
                return Err(AlgebraError::NothingToContract);
            }
        }
        self.derive(e, Parity::FieldOdd, &|a| self.iota_atom(&x, a))
    }

    fn iota_atom(&self, x: &Expression, a: &Atom) -> Result<Expression, AlgebraError> {
        if a.d_flag {
            let mut base = a.clone();
            base.d_flag = false;
            let inner = self.iota_atom(x, &base)?;
            return self.d(&inner);
        }
        Ok(match (a.symbol.as_str(), a.delta_flag) {
            ("w", false) => x.clone(),
            ("w", true) => x.bracket(&self.atom("w")?)?.neg(),
            ("A", true) => self.d(x)?.add(&self.atom("A")?.bracket(x)?)?,
            ("E", true) => x.bracket(&self.atom("E")?)?.neg(),
            _ => Expression::zero(),
        })
    }

    /// Contraction with the ghost-valued vertical vector field. See the
    /// module docs: an even derivation whose atom rules encode
    /// `iota_v(delta(generator)) = vertical variation` with the grading
    /// weight that makes the expanded curvature horizontal.
    pub fn iota_v(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        self.derive(e, Parity::Even, &|a| self.iota_v_atom(a))
    }

    fn iota_v_atom(&self, a: &Atom) -> Result<Expression, AlgebraError> {
        if a.d_flag {
            let mut base = a.clone();
            base.d_flag = false;
            let inner = self.iota_v_atom(&base)?;
            return self.d(&inner);
        }
        let w = self.atom("w")?;
        Ok(match (a.symbol.as_str(), a.delta_flag) {
            ("A", true) => self.covariant_d(&w)?,
            ("E", true) => self.atom("E")?.bracket(&w)?,
            ("w", true) => w.bracket(&w)?.scale(&half()),
            ("w", false) => w.scale(&-half()),
            _ => Expression::zero(),
        })
    }

    // ----- integration and the Stokes move -------------------------------

    pub fn integrate(
        &self,
        e: &Expression,
        domain: Domain,
    ) -> Result<Expression, AlgebraError> {
        e.integrate(domain)
    }

    /// Rewrites every spatial-slice term whose word is an exact `d(...)` as
    /// the corner term of its primitive: `intS(d(a)) -> intC(a)`. Exactness
    /// is detected syntactically: candidate primitives are obtained by
    /// clearing one `d` flag (words of length at most 4), differentiated,
    /// and matched as an exact rational multiple against the slice terms.
    /// Non-exact terms are untouched; the move is idempotent because a
    /// candidate is only accepted when it strictly reduces the number of
    /// slice terms.
    pub fn stokes(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        self.stokes_with(e, &|x| Ok(x.clone()))
    }

    /// Full on-shell reduction pipeline: impose the Gauss constraint, then
    /// apply the Stokes move with constraint-aware exactness matching (the
    /// differentiated primitive is itself reduced on shell before being
    /// matched, so terms that are exact only modulo the constraint still
    /// move to the corner).
    pub fn reduce_onshell(&self, e: &Expression) -> Result<Expression, AlgebraError> {
        let reduced = self.onshell_reduce(e)?;
        self.stokes_with(&reduced, &|x| self.onshell_reduce(x))
    }

    fn stokes_with(
        &self,
        e: &Expression,
        post: &dyn Fn(&Expression) -> Result<Expression, AlgebraError>,
    ) -> Result<Expression, AlgebraError> {
        let mut current = e.clone();
        'again: loop {
            let sigma_terms: Vec<Term> = current
                .terms()
                .iter()
                .filter(|t| t.domain == Some(Domain::Sigma))
                .cloned()
                .collect();
            let sigma_count = sigma_terms.len();
            for t in &sigma_terms {
                if t.factor_paths().len() > 4 {
                    continue;
                }
                for (path, atom) in t.factor_paths() {
                    if !atom.d_flag {
                        continue;
                    }
                    let mut stripped = atom.clone();
                    stripped.d_flag = false;
                    let mut primitive_terms = t.splice(&path, &Expression::from_atom(stripped));
                    for pt in &mut primitive_terms {
                        pt.coeff = BigRational::one();
                        pt.domain = None;
                    }
                    let Ok(primitive) = Expression::from_terms(primitive_terms) else {
                        continue;
                    };
                    if primitive.is_zero() {
                        continue;
                    }
                    let image = post(&self.d(&primitive)?)?;
                    if image.is_zero() {
                        continue;
                    }
                    // Match the differentiated primitive against the slice
                    // terms: find the multiplier from the term we started at.
                    let mut bare = t.clone();
                    bare.domain = None;
                    let bare = Expression::from_terms(vec![bare])?;
                    let Some(multiplier) = coefficient_of(&image, &bare) else {
                        continue;
                    };
                    let moved = image
                        .scale(&multiplier)
                        .integrate(Domain::Sigma)?;
                    let corner = primitive
                        .scale(&multiplier)
                        .integrate(Domain::C)?;
                    let candidate = current.sub(&moved)?.add(&corner)?;
                    let new_count = candidate
                        .terms()
                        .iter()
                        .filter(|t| t.domain == Some(Domain::Sigma))
                        .count();
                    if new_count < sigma_count {
                        current = candidate;
                        continue 'again;
                    }
                }
            }
            return Ok(current);
        }
    }

    // ----- generic derivation machinery ----------------------------------

    fn derive(
        &self,
        e: &Expression,
        parity: Parity,
        rule: &dyn Fn(&Atom) -> Result<Expression, AlgebraError>,
    ) -> Result<Expression, AlgebraError> {
        let mut out = Vec::new();
        for term in e.terms() {
            let mut odd = false;
            for (path, atom) in term.factor_paths() {
                let image = rule(&atom)?;
                if !image.is_zero() {
                    let mut spliced = term.splice(&path, &image);
                    if odd {
                        for t in &mut spliced {
                            t.coeff = -std::mem::replace(&mut t.coeff, BigRational::zero());
                        }
                    }
                    out.extend(spliced);
                }
                odd ^= parity.odd(atom.bidegree());
            }
        }
        Expression::from_terms(out)
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn constant(value: BigRational) -> Expression {
    Expression::from_terms(vec![Term {
        coeff: value,
        domain: None,
        scalars: vec![],
        traces: vec![],
        open: vec![],
    }])
    .expect("a bare constant is homogeneous")
}

/// If `needle` (a single canonical monomial, possibly scaled) occurs in
/// `hay` up to a rational multiple, returns `hay_coeff / needle_coeff` for
/// the matching term.
fn coefficient_of(hay: &Expression, needle: &Expression) -> Option<BigRational> {
    let nt = needle.terms().first()?;
    for ht in hay.terms() {
        if ht.domain == nt.domain
            && ht.scalars == nt.scalars
            && ht.traces == nt.traces
            && ht.open == nt.open
        {
            // multiplier m with m * hay_term = needle_term
            return Some(&nt.coeff / &ht.coeff);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eng() -> Engine {
        Engine::standard()
    }

    #[test]
    fn delta_is_nilpotent_on_generators() {
        let g = eng();
        for sym in ["A", "E", "w", "X", "b", "binv"] {
            let a = g.atom(sym).unwrap();
            assert!(g.delta(&g.delta(&a).unwrap()).unwrap().is_zero(), "{sym}");
        }
    }

    #[test]
    fn d_and_delta_commute_on_group_inverse() {
        let g = eng();
        let binv = g.atom("binv").unwrap();
        let dd = g.d(&g.delta(&binv).unwrap()).unwrap();
        let del = g.delta(&g.d(&binv).unwrap()).unwrap();
        assert!(dd.equals(&del).unwrap());
    }

    #[test]
    fn delta_of_group_inverse_is_forced_by_the_product_rule() {
        // delta(b * binv) = delta(1) = 0 must hold term by term.
        let g = eng();
        let prod = g.atom("b").unwrap().mul(&g.atom("binv").unwrap()).unwrap();
        assert!(g.delta(&prod).unwrap().is_zero());
        assert!(g.d(&prod).unwrap().is_zero());
    }

    #[test]
    fn covariant_d_matches_gauge_transformation_form() {
        // D_A X = dX + [A,X] = dX - [X,A].
        let g = eng();
        let x = g.atom("X").unwrap();
        let lhs = g.covariant_d(&x).unwrap();
        let rhs = g
            .d(&x)
            .unwrap()
            .sub(&x.bracket(&g.atom("A").unwrap()).unwrap())
            .unwrap();
        assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn squared_covariant_d_is_the_field_strength_bracket() {
        let g = eng();
        let x = g.atom("X").unwrap();
        let lhs = g.covariant_d(&g.covariant_d(&x).unwrap()).unwrap();
        let a = g.atom("A").unwrap();
        let fd = g
            .d(&a)
            .unwrap()
            .add(&a.bracket(&a).unwrap().scale(&half()))
            .unwrap();
        let rhs = fd.bracket(&x).unwrap();
        assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn brst_is_nilpotent_on_generators() {
        let g = eng();
        for sym in ["A", "E", "w", "X", "b", "binv", "Fo"] {
            let a = g.atom(sym).unwrap();
            let ssa = g.brst_s(&g.brst_s(&a).unwrap()).unwrap();
            assert!(ssa.is_zero(), "s^2 {sym} = {ssa}");
        }
    }

    #[test]
    fn delta_h_on_generators_matches_the_defining_formulas() {
        let g = eng();
        let (a, e, w) = (
            g.atom("A").unwrap(),
            g.atom("E").unwrap(),
            g.atom("w").unwrap(),
        );
        let dh_e = g.delta_h(&e).unwrap();
        let expected_e = g.delta(&e).unwrap().add(&w.bracket(&e).unwrap()).unwrap();
        assert!(dh_e.equals(&expected_e).unwrap());

        let dh_a = g.delta_h(&a).unwrap();
        let expected_a = g
            .delta(&a)
            .unwrap()
            .add(&w.bracket(&a).unwrap())
            .unwrap()
            .sub(&g.d(&w).unwrap())
            .unwrap();
        assert!(dh_a.equals(&expected_a).unwrap());

        // dH w = F.
        let dh_w = g.delta_h(&w).unwrap();
        assert!(dh_w.equals(&g.curvature()).unwrap());
    }

    #[test]
    fn curvature_is_horizontal_both_ways() {
        let g = eng();
        let f = g.curvature();
        assert!(g.iota_v(&f).unwrap().is_zero());
        assert!(g.contract_fundamental("X", &f).unwrap().is_zero());
    }

    #[test]
    fn dh_images_are_horizontal() {
        let g = eng();
        for sym in ["A", "E"] {
            let img = g.delta_h(&g.atom(sym).unwrap()).unwrap();
            let contracted = g.contract_fundamental("X", &img).unwrap();
            assert!(contracted.is_zero(), "iota dH {sym} = {contracted}");
        }
    }

    #[test]
    fn contraction_of_a_field_space_scalar_errors() {
        let g = eng();
        let e = g.atom("E").unwrap();
        assert!(matches!(
            g.contract_fundamental("X", &e),
            Err(AlgebraError::NothingToContract)
        ));
    }

    #[test]
    fn onshell_kills_the_gauss_constraint_and_its_variation() {
        let g = eng();
        let gauss = g.covariant_d(&g.atom("E").unwrap()).unwrap();
        assert!(g.onshell_reduce(&gauss).unwrap().is_zero());
        let varied = g.delta(&gauss).unwrap();
        assert!(g.onshell_reduce(&varied).unwrap().is_zero());
    }

    #[test]
    fn stokes_moves_an_exact_slice_term_to_the_corner() {
        let g = eng();
        let ew = g
            .atom("E")
            .unwrap()
            .mul(&g.atom("w").unwrap())
            .unwrap()
            .trace()
            .unwrap();
        let exact = g.d(&ew).unwrap().integrate(Domain::Sigma).unwrap();
        let moved = g.stokes(&exact).unwrap();
        let expected = ew.integrate(Domain::C).unwrap();
        assert!(moved.equals(&expected).unwrap());
        // Idempotence and inertness on non-exact terms.
        assert!(g.stokes(&moved).unwrap().equals(&expected).unwrap());
        let theta = g
            .atom("E")
            .unwrap()
            .mul(&g.delta(&g.atom("A").unwrap()).unwrap())
            .unwrap()
            .trace()
            .unwrap()
            .integrate(Domain::Sigma)
            .unwrap();
        assert!(g.stokes(&theta).unwrap().equals(&theta).unwrap());
    }

    #[test]
    fn opaque_curvature_expands_consistently() {
        let g = eng();
        let fo = g.atom("Fo").unwrap();
        assert!(g
            .expand_curvature(&fo)
            .unwrap()
            .equals(&g.curvature())
            .unwrap());
        // The opaque atom's BRST rule matches the expansion's.
        let s_opaque = g.expand_curvature(&g.brst_s(&fo).unwrap()).unwrap();
        let s_expanded = g.brst_s(&g.curvature()).unwrap();
        assert!(s_opaque.equals(&s_expanded).unwrap());
    }

    #[test]
    fn gauge_substitution_fixes_group_atoms_and_conjugates_e() {
        let g = eng();
        let e = g.atom("E").unwrap();
        let image = g.gauge_substitute(&e).unwrap();
        let expected = g
            .atom("b")
            .unwrap()
            .mul(&e)
            .unwrap()
            .mul(&g.atom("binv").unwrap())
            .unwrap();
        assert!(image.equals(&expected).unwrap());
    }
}
