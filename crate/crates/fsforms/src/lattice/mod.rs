//! Numerical 1-D lattice gauge module: a concrete finite-dimensional
//! realization of the functional-connection geometry. Gauge fields,
//! electric fields, tangent vectors, and gauge parameters are
//! Lie-algebra-valued site fields on a chain; the functional connection is
//! the orthogonal projection onto gauge-orbit directions; on top of it sit
//! probes for equivariance, curvature, corner charges, and the Gribov
//! zero-mode crossing of the Faddeev-Popov operator.

pub mod experiments;
pub mod field;
pub mod gribov;
pub mod group;
pub mod ops;
pub mod probes;

pub use field::{exponentiated, rough_field, seeded, windowed, Boundary, Lattice, SmoothProfile};
pub use group::{Element, Group};
pub use ops::{
    covariant_difference, covariant_extended, difference, fp_operator, fp_symmetric,
    fundamental_vector, gauge_transform, Connection, LatticeError,
};
