//! The free bigraded algebra: atoms, words, terms, expressions, and their
//! canonical forms.
//!
//! Every value is a formal rational-linear combination of *terms*; a term is
//! a product of commuting scalar atoms, traced matrix words, and one open
//! (untraced) matrix word, optionally wrapped in a symbolic integral over a
//! fixed domain. Matrix factors never reorder; scalar factors and whole
//! traces reorder freely at the cost of the Koszul sign
//! `(-1)^(f1*f2 + s1*s2)` of the bidegrees involved. A traced word is
//! identified with all of its cyclic rotations up to the rotation's Koszul
//! sign, which makes trace ad-invariance (`tr([x,y]z) = tr(x[y,z])`) a
//! consequence of bracket expansion plus cyclic minimality — no separate
//! rewrite rule is needed.
//!
//! Canonical form: brackets expanded, group relations (`b * binv = 1`)
//! applied, traced words rotated to the lexicographically minimal cyclic
//! representative with the accumulated sign, traces and scalars sorted with
//! signed swaps, like terms merged, zero coefficients dropped. Two
//! expressions are equal iff their canonical term lists coincide.

mod parse;
mod print;

pub use parse::{parse_with, NoHooks, OperatorHooks};
pub use print::pretty_print;

use num::BigRational;
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Joint grading by field-space form degree `f` (ghost number) and
/// spacetime form degree `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bidegree {
    pub f: u32,
    pub s: u32,
}

impl Bidegree {
    pub const fn new(f: u32, s: u32) -> Self {
        Bidegree { f, s }
    }

    pub fn plus(self, other: Bidegree) -> Bidegree {
        Bidegree::new(self.f + other.f, self.s + other.s)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({},{})", self.f, self.s)
    }
}

/// Koszul sign acquired when two homogeneous factors are permuted:
/// `true` means odd, i.e. the swap costs a factor of -1.
pub fn koszul_odd(a: Bidegree, b: Bidegree) -> bool {
    (a.f * b.f + a.s * b.s) % 2 == 1
}

/// How an atom multiplies: as a commuting scalar, as a Lie-algebra-valued
/// matrix (adjoint), or as a group element / its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuedness {
    Adjoint,
    Group,
    GroupInverse,
    Scalar,
}

/// Symbolic integration domain: the spatial slice (dimension 3), its corner
/// (dimension 2), or spacetime (dimension 4). The spacetime dimension is
/// fixed at 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Domain {
    Sigma,
    C,
    M,
}

impl Domain {
    pub fn dimension(self) -> u32 {
        match self {
            Domain::Sigma => 3,
            Domain::C => 2,
            Domain::M => 4,
        }
    }
}

/// A generator, possibly carrying one field-space derivative (`delta`) and
/// one spacetime derivative (`d`). The derivative pair is unordered because
/// the two differentials commute; each applies at most once because both
/// square to zero on atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub symbol: String,
    pub base: Bidegree,
    pub valuedness: Valuedness,
    /// For a `GroupInverse` atom, the symbol of the group atom it inverts.
    pub inverse_of: Option<String>,
    pub delta_flag: bool,
    pub d_flag: bool,
}

impl Atom {
    /// Effective bidegree: the base degree plus one unit of `f` per
    /// field-space derivative and one unit of `s` per spacetime derivative.
    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(
            self.base.f + self.delta_flag as u32,
            self.base.s + self.d_flag as u32,
        )
    }

    pub(crate) fn with_delta(&self) -> Option<Atom> {
        if self.delta_flag {
            return None; // delta^2 = 0
        }
        let mut a = self.clone();
        a.delta_flag = true;
        Some(a)
    }

    pub(crate) fn with_d(&self) -> Option<Atom> {
        if self.d_flag {
            return None; // d^2 = 0
        }
        let mut a = self.clone();
        a.d_flag = true;
        Some(a)
    }
}

/// Errors surfaced by algebra construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("atom `{0}` is already declared")]
    Duplicate(String),
    #[error("unknown atom `{0}`")]
    Unknown(String),
    #[error("group-valued atom `{0}` must have bidegree (0,0)")]
    GroupDegree(String),
    #[error("inhomogeneous sum: {0} vs {1}")]
    Inhomogeneous(String, String),
    #[error("operands have mismatched valuedness")]
    Valuedness,
    #[error("cannot multiply two integrated expressions")]
    DomainClash,
    #[error("integrand spacetime degree {got} does not match domain {dom:?} (needs {need})")]
    DegreeDomain { dom: Domain, got: u32, need: u32 },
    #[error("cannot trace a scalar-valued expression")]
    TraceOfScalar,
    #[error("bracket requires matrix-valued operands")]
    BracketOfScalar,
    #[error("spacetime differential cannot cross an integral over a spatial domain")]
    DUnderIntegral,
    #[error("contraction of a field-space 0-form: nothing to contract")]
    NothingToContract,
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

/// The write-once generator table. Atoms are declared here once at setup;
/// the derivation rewrite tables and the parser consult it read-only.
#[derive(Clone, Debug, Default)]
pub struct Context {
    atoms: BTreeMap<String, Atom>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    /// The Yang-Mills generator alphabet used by every shipped suite:
    /// `A` (0,1) the gauge connection, `E` (0,2) the electric field,
    /// `w` (1,0) the functional connection, `X` (0,0) a gauge parameter,
    /// `b`/`binv` a group-valued transformation and its inverse, and
    /// `Fo` (2,0) an opaque alias for the functional curvature.
    pub fn standard() -> Self {
        let mut ctx = Context::new();
        ctx.declare("A", Bidegree::new(0, 1), Valuedness::Adjoint)
            .unwrap();
        ctx.declare("E", Bidegree::new(0, 2), Valuedness::Adjoint)
            .unwrap();
        ctx.declare("w", Bidegree::new(1, 0), Valuedness::Adjoint)
            .unwrap();
        ctx.declare("X", Bidegree::new(0, 0), Valuedness::Adjoint)
            .unwrap();
        ctx.declare_group_pair("b", "binv").unwrap();
        ctx.declare("Fo", Bidegree::new(2, 0), Valuedness::Adjoint)
            .unwrap();
        ctx
    }

    /// Registers a generator. Group-valued atoms must be declared through
    /// [`Context::declare_group_pair`] so that the inverse relation is known.
    pub fn declare(
        &mut self,
        symbol: &str,
        bidegree: Bidegree,
        valuedness: Valuedness,
    ) -> Result<Atom, AlgebraError> {
        if matches!(valuedness, Valuedness::Group | Valuedness::GroupInverse) {
            return Err(AlgebraError::GroupDegree(symbol.to_string()));
        }
        self.insert(symbol, bidegree, valuedness, None)
    }

    /// Registers a group element and its inverse as a linked pair, enabling
    /// the cancellation `b * binv = binv * b = 1` and the derivative
    /// relations `delta(binv) = -binv delta(b) binv` (same for `d`).
    pub fn declare_group_pair(
        &mut self,
        symbol: &str,
        inverse_symbol: &str,
    ) -> Result<(Atom, Atom), AlgebraError> {
        let g = self.insert(symbol, Bidegree::new(0, 0), Valuedness::Group, None)?;
        let ginv = self.insert(
            inverse_symbol,
            Bidegree::new(0, 0),
            Valuedness::GroupInverse,
            Some(symbol.to_string()),
        )?;
        Ok((g, ginv))
    }

    fn insert(
        &mut self,
        symbol: &str,
        bidegree: Bidegree,
        valuedness: Valuedness,
        inverse_of: Option<String>,
    ) -> Result<Atom, AlgebraError> {
        if self.atoms.contains_key(symbol) {
            return Err(AlgebraError::Duplicate(symbol.to_string()));
        }
        if matches!(valuedness, Valuedness::Group | Valuedness::GroupInverse)
            && bidegree != Bidegree::new(0, 0)
        {
            return Err(AlgebraError::GroupDegree(symbol.to_string()));
        }
        let atom = Atom {
            symbol: symbol.to_string(),
            base: bidegree,
            valuedness,
            inverse_of,
            delta_flag: false,
            d_flag: false,
        };
        self.atoms.insert(symbol.to_string(), atom.clone());
        Ok(atom)
    }

    pub fn lookup(&self, symbol: &str) -> Result<&Atom, AlgebraError> {
        self.atoms
            .get(symbol)
            .ok_or_else(|| AlgebraError::Unknown(symbol.to_string()))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.values()
    }

    /// Convenience: the bare atom as a one-term expression.
    pub fn atom(&self, symbol: &str) -> Result<Expression, AlgebraError> {
        Ok(Expression::from_atom(self.lookup(symbol)?.clone()))
    }
}

/// One monomial: an exact rational coefficient times commuting scalar atoms,
/// traced matrix words, and an open matrix word, optionally integrated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigRational,
    pub domain: Option<Domain>,
    pub scalars: Vec<Atom>,
    pub traces: Vec<Vec<Atom>>,
    pub open: Vec<Atom>,
}

/// The structural part of a term that identifies it for merging; everything
/// except the coefficient.
type TermKey<'a> = (
    &'a Option<Domain>,
    &'a Vec<Atom>,
    &'a Vec<Vec<Atom>>,
    &'a Vec<Atom>,
);

impl Term {
    fn key(&self) -> TermKey<'_> {
        (&self.domain, &self.scalars, &self.traces, &self.open)
    }

    /// Total bidegree over every factor (ignoring the integration domain).
    fn raw_bidegree(&self) -> Bidegree {
        let mut total = Bidegree::default();
        for a in self.factors() {
            total = total.plus(a.bidegree());
        }
        total
    }

    fn factors(&self) -> impl Iterator<Item = &Atom> {
        self.scalars
            .iter()
            .chain(self.traces.iter().flatten())
            .chain(self.open.iter())
    }

    /// Homogeneity signature: residual bidegree after integration, whether
    /// the term is matrix-valued, net group-atom imbalance, and whether it
    /// is integrated. All terms of an expression must share one signature.
    fn signature(&self) -> Signature {
        let raw = self.raw_bidegree();
        let s_eff = raw.s - self.domain.map_or(0, Domain::dimension);
        let imbalance: i64 = self
            .factors()
            .map(|a| match a.valuedness {
                Valuedness::Group => 1,
                Valuedness::GroupInverse => -1,
                _ => 0,
            })
            .sum();
        Signature {
            bidegree: Bidegree::new(raw.f, s_eff),
            matrix: !self.open.is_empty(),
            imbalance,
            integrated: self.domain.is_some(),
        }
    }

    /// Rewrites the term into canonical form, folding every rotation and
    /// reordering sign into the coefficient. Returns `None` when the term is
    /// identically zero (zero coefficient, a self-annihilating trace, or a
    /// repeated odd factor).
    fn canonicalize(mut self) -> Option<Term> {
        if self.coeff.is_zero() {
            return None;
        }
        let mut sign_flips = 0u32;

        cancel_group_pairs(&mut self.open, false);
        for trace in &mut self.traces {
            cancel_group_pairs(trace, true);
        }

        let mut traces = Vec::with_capacity(self.traces.len());
        for trace in std::mem::take(&mut self.traces) {
            let (word, odd) = canonical_rotation(trace)?;
            sign_flips += odd as u32;
            traces.push(word);
        }
        self.traces = traces;

        sign_flips += sorted_with_koszul(&mut self.traces, |w| word_bidegree(w))?;
        sign_flips += sorted_with_koszul(&mut self.scalars, |a| a.bidegree())?;

        if sign_flips % 2 == 1 {
            self.coeff = -self.coeff;
        }
        Some(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Signature {
    bidegree: Bidegree,
    matrix: bool,
    imbalance: i64,
    integrated: bool,
}

impl fmt::Display for Signature {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "{}{}{}",
            self.bidegree,
            if self.matrix { " matrix" } else { " scalar" },
            if self.integrated { " integrated" } else { "" },
        )
    }
}

pub fn word_bidegree(word: &[Atom]) -> Bidegree {
    word.iter()
        .fold(Bidegree::default(), |acc, a| acc.plus(a.bidegree()))
}

/// Removes adjacent `group * group-inverse` pairs (cyclically adjacent for
/// traced words). Only bare atoms cancel: a derivative of a group atom is
/// not a group element.
fn cancel_group_pairs(word: &mut Vec<Atom>, cyclic: bool) {
    let cancels = |x: &Atom, y: &Atom| -> bool {
        if x.delta_flag || x.d_flag || y.delta_flag || y.d_flag {
            return false;
        }
        match (x.valuedness, y.valuedness) {
            (Valuedness::Group, Valuedness::GroupInverse) => {
                y.inverse_of.as_deref() == Some(&x.symbol)
            }
            (Valuedness::GroupInverse, Valuedness::Group) => {
                x.inverse_of.as_deref() == Some(&y.symbol)
            }
            _ => false,
        }
    };
    'outer: loop {
        let n = word.len();
        if n < 2 {
            return;
        }
        let last = if cyclic { n } else { n - 1 };
        for i in 0..last {
            let j = (i + 1) % n;
            if i != j && cancels(&word[i], &word[j]) {
                // Group atoms have bidegree (0,0), so removal costs no sign.
                let (lo, hi) = (i.min(j), i.max(j));
                word.remove(hi);
                word.remove(lo);
                continue 'outer;
            }
        }
        return;
    }
}

/// Rotates a traced word to its lexicographically minimal cyclic
/// representative, tracking the Koszul sign of the rotation. Moving the
/// front factor `x` past the remainder costs
/// `(-1)^(f_x*(F - f_x) + s_x*(S - s_x))` with `(F,S)` the word's total
/// bidegree. Returns `None` when some rotation maps the word to itself with
/// sign -1 (the trace then vanishes identically, e.g. `tr(w w)` for the odd
/// one-form `w`); otherwise the minimal word and whether its sign is odd.
fn canonical_rotation(word: Vec<Atom>) -> Option<(Vec<Atom>, bool)> {
    if word.len() <= 1 {
        return Some((word, false));
    }
    let total = word_bidegree(&word);
    let mut best: Option<(Vec<Atom>, bool)> = None;
    let mut current = word.clone();
    let mut odd = false;
    for _ in 0..word.len() {
        match &mut best {
            None => best = Some((current.clone(), odd)),
            Some((bw, bodd)) => {
                if current == *bw {
                    if odd != *bodd {
                        return None; // self-rotation with sign -1
                    }
                } else if current < *bw {
                    *bw = current.clone();
                    *bodd = odd;
                }
            }
        }
        // Rotate one step: move the front factor to the back.
        let front = current.remove(0);
        let d = front.bidegree();
        let rest = Bidegree::new(total.f - d.f, total.s - d.s);
        odd ^= koszul_odd(d, rest);
        current.push(front);
    }
    best
}

/// Stable-sorts commuting factors, accumulating one sign flip per swap of
/// two odd-Koszul factors. Returns the number of flips, or `None` when two
/// equal adjacent factors with odd self-Koszul square to zero.
fn sorted_with_koszul<T: Ord + Eq>(
    items: &mut [T],
    degree: impl Fn(&T) -> Bidegree,
) -> Option<u32> {
    let mut flips = 0u32;
    // Insertion sort: the factor lists are tiny and we need swap-by-swap
    // sign bookkeeping.
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && items[j] < items[j - 1] {
            if koszul_odd(degree(&items[j]), degree(&items[j - 1])) {
                flips += 1;
            }
            items.swap(j, j - 1);
            j -= 1;
        }
    }
    for pair in items.windows(2) {
        let d = degree(&pair[0]);
        if pair[0] == pair[1] && koszul_odd(d, d) {
            return None; // x*x = 0 for odd commuting factors
        }
    }
    Some(flips)
}

/// A homogeneous formal sum of terms in canonical form. The canonical form
/// is maintained by every constructor, so structural equality of the term
/// lists decides mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expression {
    terms: Vec<Term>,
}

impl Expression {
    pub fn zero() -> Self {
        Expression::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn from_atom(atom: Atom) -> Self {
        let term = match atom.valuedness {
            Valuedness::Scalar => Term {
                coeff: BigRational::one(),
                domain: None,
                scalars: vec![atom],
                traces: vec![],
                open: vec![],
            },
            _ => Term {
                coeff: BigRational::one(),
                domain: None,
                scalars: vec![],
                traces: vec![],
                open: vec![atom],
            },
        };
        Expression::from_terms(vec![term]).expect("single atom is homogeneous")
    }

    /// Builds the canonical expression, rejecting mixed-signature sums.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self, AlgebraError> {
        let mut canonical: Vec<Term> = terms.into_iter().filter_map(Term::canonicalize).collect();
        if let Some(first) = canonical.first() {
            let sig = first.signature();
            for t in &canonical[1..] {
                let other = t.signature();
                if other != sig {
                    return Err(AlgebraError::Inhomogeneous(
                        sig.to_string(),
                        other.to_string(),
                    ));
                }
            }
        }
        canonical.sort_by(|a, b| a.key().cmp(&b.key()));
        let mut merged: Vec<Term> = Vec::with_capacity(canonical.len());
        for term in canonical {
            match merged.last_mut() {
                Some(last) if last.key() == term.key() => last.coeff += term.coeff,
                _ => merged.push(term),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        Ok(Expression { terms: merged })
    }

    fn signature(&self) -> Option<Signature> {
        self.terms.first().map(Term::signature)
    }

    pub fn bidegree(&self) -> Option<Bidegree> {
        self.signature().map(|s| s.bidegree)
    }

    /// `true` when every term carries an open matrix word. The zero
    /// expression is compatible with either valuedness.
    pub fn is_matrix(&self) -> bool {
        self.signature().map(|s| s.matrix).unwrap_or(false)
    }

    pub fn is_scalar_valued(&self) -> bool {
        self.signature().map(|s| !s.matrix).unwrap_or(true)
    }

    pub fn add(&self, other: &Expression) -> Result<Expression, AlgebraError> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Expression::from_terms(terms)
    }

    pub fn sub(&self, other: &Expression) -> Result<Expression, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expression {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, by: &BigRational) -> Expression {
        if by.is_zero() {
            return Expression::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.coeff *= by;
                t
            })
            .collect();
        Expression { terms }
    }

    /// Bilinear graded product. Matrix words concatenate in order; the only
    /// sign is the Koszul sign of moving the right factor's commuting part
    /// past the left factor's open word.
    pub fn mul(&self, other: &Expression) -> Result<Expression, AlgebraError> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for left in &self.terms {
            for right in &other.terms {
                terms.push(term_mul(left, right)?);
            }
        }
        Expression::from_terms(terms)
    }

    /// Graded bracket `[a,b] = a b - (-1)^kappa b a`. Both operands must be
    /// matrix-valued; the Koszul sign uses the operand bidegrees.
    pub fn bracket(&self, other: &Expression) -> Result<Expression, AlgebraError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Expression::zero());
        }
        if !self.is_matrix() || !other.is_matrix() {
            return Err(AlgebraError::BracketOfScalar);
        }
        let odd = koszul_odd(self.bidegree().unwrap(), other.bidegree().unwrap());
        let forward = self.mul(other)?;
        let backward = other.mul(self)?;
        if odd {
            forward.add(&backward)
        } else {
            forward.sub(&backward)
        }
    }

    /// Closes the open word of every term into a matrix trace. The result is
    /// scalar-valued; equality thereafter respects cyclic rotation with
    /// Koszul signs (and hence trace ad-invariance).
    pub fn trace(&self) -> Result<Expression, AlgebraError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.open.is_empty() {
                return Err(AlgebraError::TraceOfScalar);
            }
            let mut t = t.clone();
            let word = std::mem::take(&mut t.open);
            t.traces.push(word);
            terms.push(t);
        }
        Expression::from_terms(terms)
    }

    /// Attaches the symbolic integration marker. The integrand's spacetime
    /// degree must equal the domain dimension.
    pub fn integrate(&self, domain: Domain) -> Result<Expression, AlgebraError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.domain.is_some() {
                return Err(AlgebraError::DomainClash);
            }
            let s = t.raw_bidegree().s;
            if s != domain.dimension() {
                return Err(AlgebraError::DegreeDomain {
                    dom: domain,
                    got: s,
                    need: domain.dimension(),
                });
            }
            let mut t = t.clone();
            t.domain = Some(domain);
            terms.push(t);
        }
        Expression::from_terms(terms)
    }

    /// Canonical-form equality: `a = b` iff `canonicalize(a - b) = 0`.
    /// Comparing a matrix-valued with a scalar-valued expression is an
    /// error; a bidegree mismatch is simply `false`.
    pub fn equals(&self, other: &Expression) -> Result<bool, AlgebraError> {
        match (self.signature(), other.signature()) {
            (Some(a), Some(b)) => {
                if a.matrix != b.matrix {
                    return Err(AlgebraError::Valuedness);
                }
                if a.bidegree != b.bidegree || a.imbalance != b.imbalance {
                    return Ok(false);
                }
                Ok(self.terms == other.terms)
            }
            _ => Ok(self.terms == other.terms),
        }
    }

    /// Re-runs canonicalization from the raw term list. The result is always
    /// identical to `self` (idempotence); exposed so that property tests can
    /// assert exactly that.
    pub fn canonicalize(&self) -> Expression {
        Expression::from_terms(self.terms.clone()).expect("canonical input stays homogeneous")
    }

    /// Splits off the integration domain per term: `(domain, coefficient-1
    /// copy of the term)`. Used by the Stokes move and the reports.
    pub fn partition_by_domain(&self) -> Vec<(Option<Domain>, Term)> {
        self.terms.iter().map(|t| (t.domain, t.clone())).collect()
    }

    /// The largest absolute numerator/denominator size, as a cheap
    /// complexity measure for reports.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

fn term_mul(left: &Term, right: &Term) -> Result<Term, AlgebraError> {
    let domain = match (left.domain, right.domain) {
        (Some(_), Some(_)) => return Err(AlgebraError::DomainClash),
        (d, None) => d,
        (None, d) => d,
    };
    // Normal form orders factors as scalars, traces, open word. Rebuilding
    // that order from the concatenation `s1 T1 w1 s2 T2 w2` costs three
    // crossings: the right scalars pass the left traces and open word, and
    // the right traces pass the left open word.
    let scalars_right = right
        .scalars
        .iter()
        .fold(Bidegree::default(), |acc, a| acc.plus(a.bidegree()));
    let traces_right = right
        .traces
        .iter()
        .flatten()
        .fold(Bidegree::default(), |acc, a| acc.plus(a.bidegree()));
    let traces_left = left
        .traces
        .iter()
        .flatten()
        .fold(Bidegree::default(), |acc, a| acc.plus(a.bidegree()));
    let open_left = word_bidegree(&left.open);
    let mut coeff = &left.coeff * &right.coeff;
    if koszul_odd(scalars_right, traces_left.plus(open_left)) ^ koszul_odd(traces_right, open_left)
    {
        coeff = -coeff;
    }
    let mut scalars = left.scalars.clone();
    scalars.extend(right.scalars.iter().cloned());
    let mut traces = left.traces.clone();
    traces.extend(right.traces.iter().cloned());
    let mut open = left.open.clone();
    open.extend(right.open.iter().cloned());
    Ok(Term {
        coeff,
        domain,
        scalars,
        traces,
        open,
    })
}

/// Helpers shared with the calculus module: rebuild a term with one factor
/// position replaced by an arbitrary (monomial) expression of the same or a
/// derived bidegree.
pub(crate) struct FactorPath {
    /// Index into the flattened factor list: scalars, then traces in order,
    /// then the open word.
    pub slot: FactorSlot,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum FactorSlot {
    Scalar(usize),
    Trace { word: usize, pos: usize },
    Open(usize),
}

impl Term {
    /// Enumerates factor positions left-to-right in normal-form order
    /// (scalars, traces, open word) together with each factor's bidegree.
    pub(crate) fn factor_paths(&self) -> Vec<(FactorPath, Atom)> {
        let mut out = Vec::new();
        for (i, a) in self.scalars.iter().enumerate() {
            out.push((
                FactorPath {
                    slot: FactorSlot::Scalar(i),
                },
                a.clone(),
            ));
        }
        for (w, word) in self.traces.iter().enumerate() {
            for (p, a) in word.iter().enumerate() {
                out.push((
                    FactorPath {
                        slot: FactorSlot::Trace { word: w, pos: p },
                    },
                    a.clone(),
                ));
            }
        }
        for (i, a) in self.open.iter().enumerate() {
            out.push((
                FactorPath {
                    slot: FactorSlot::Open(i),
                },
                a.clone(),
            ));
        }
        out
    }

    /// Replaces the factor at `path` by each monomial term of `replacement`
    /// in place, yielding one new term per replacement monomial. The
    /// replacement terms must be pure open words (no scalars, traces, or
    /// domain of their own) unless the replaced slot is a scalar slot, in
    /// which case they must be pure scalar monomials.
    pub(crate) fn splice(&self, path: &FactorPath, replacement: &Expression) -> Vec<Term> {
        let mut out = Vec::with_capacity(replacement.terms.len());
        for rep in &replacement.terms {
            debug_assert!(rep.domain.is_none() && rep.traces.is_empty());
            let mut t = self.clone();
            t.coeff = &t.coeff * &rep.coeff;
            match path.slot {
                FactorSlot::Scalar(i) => {
                    debug_assert!(rep.open.is_empty());
                    t.scalars.splice(i..=i, rep.scalars.iter().cloned());
                }
                FactorSlot::Trace { word, pos } => {
                    debug_assert!(rep.scalars.is_empty());
                    t.traces[word].splice(pos..=pos, rep.open.iter().cloned());
                }
                FactorSlot::Open(i) => {
                    debug_assert!(rep.scalars.is_empty());
                    t.open.splice(i..=i, rep.open.iter().cloned());
                }
            }
            out.push(t);
        }
        out
    }
}
