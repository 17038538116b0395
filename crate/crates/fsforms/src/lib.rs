//! A small computer-algebra engine for the bigraded exterior calculus of
//! field space, paired with a numerical 1-D lattice gauge-theory module.
//!
//! The symbolic half works with formal rational-linear combinations of graded
//! words over a fixed alphabet of generators (a gauge connection `A`, an
//! electric field `E`, a functional connection one-form `w`, a gauge
//! parameter `X`, and a group-valued transformation `b`), each carrying a
//! bidegree `(f, s)`: `f` counts field-space form degree (equivalently ghost
//! number), `s` counts spacetime form degree. Products follow the Koszul sign
//! rule `(-1)^(f1*f2 + s1*s2)`; traced words are identified with their cyclic
//! rotations up to that sign. On top of the algebra sit the derivations
//! (field-space differential `delta`, spacetime differential `d`, the BRST
//! operator `s`, the horizontal differential `dH`), contractions, gauge
//! substitution, symbolic integration with a Stokes move, and a registry of
//! verifiable identities ("suites").
//!
//! The numerical half ([`lattice`]) samples gauge fields on a 1-D lattice,
//! realizes the functional connection as an orthogonal (Coulomb-type)
//! vertical projection built from the Faddeev-Popov operator, and probes its
//! curvature, corner charges, and the Gribov zero-mode crossing.

pub mod algebra;
pub mod calculus;
pub mod dsl;
pub mod lattice;
pub mod report;
pub mod suite;

pub use algebra::{Atom, Bidegree, Context, Domain, Expression, Term, Valuedness};
pub use calculus::Engine;
pub use report::{CaseOutcome, Report, Verdict};
pub use suite::{SuiteRegistry, TheoremCase};
