//! Discrete gauge-covariant operators on the chain, and the functional
//! connection realized as an orthogonal projection onto gauge orbits.
//!
//! Conventions:
//!
//! * The covariant difference `D_A` maps a site field to the `sites - 1`
//!   links by forward differences: `(D_A v)_i = (v_{i+1} - v_i)/dx +
//!   [A_i, v_i]`.
//! * Its square extension pads a backward-difference row at the last site,
//!   so infinitesimal gauge motions of the gauge field, `X# = -D_A X`,
//!   live in the same space as the gauge field itself.
//! * The Faddeev-Popov operator is `G^T D_A` with `G` the plain (flat)
//!   difference; for the abelian group it reduces to the Neumann
//!   path-graph Laplacian, whose spectrum is known in closed form and
//!   serves as the test oracle.
//! * The connection form `w_A(v)` is the minimizer of `|v + D_A X|^2`
//!   over gauge parameters `X`, computed from a singular value
//!   decomposition of the extended covariant difference. Singular values
//!   below `1e-13` of the largest are structural kernel directions
//!   (sitewise constants) and are deflated; values in the band
//!   `[1e-13, 1e-10)` are reported as a degeneracy error instead of being
//!   silently resolved either way.

use super::field::{Boundary, Lattice};
use super::group::Element;
use nalgebra::{DMatrix, DVector};

/// Relative singular-value threshold below which a direction is treated
/// as exact structural kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-13;
/// Relative singular-value threshold below which a direction is too close
/// to the kernel to classify reliably.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error(
        "near-degenerate orbit solve: relative singular value {ratio:.3e} \
         falls in the ambiguous band [{KERNEL_THRESHOLD:.0e}, {DEGENERACY_THRESHOLD:.0e})"
    )]
    Degenerate { ratio: f64 },
    #[error("invalid lattice configuration: {0}")]
    Config(String),
}

/// The plain forward-difference operator, `(sites-1) x sites` blocks.
pub fn difference(lat: &Lattice) -> DMatrix<f64> {
    covariant_difference(lat, &lat.zero_field())
}

/// The covariant forward difference on links.
pub fn covariant_difference(lat: &Lattice, a: &DVector<f64>) -> DMatrix<f64> {
    let d = lat.group.dim();
    let inv_dx = 1.0 / lat.dx();
    let mut m = DMatrix::zeros((lat.sites - 1) * d, lat.sites * d);
    for i in 0..lat.sites - 1 {
        let ad = lat.group.ad(&lat.site(a, i));
        for r in 0..d {
            m[(i * d + r, (i + 1) * d + r)] += inv_dx;
            m[(i * d + r, i * d + r)] -= inv_dx;
            for c in 0..d {
                m[(i * d + r, i * d + c)] += ad[(r, c)];
            }
        }
    }
    m
}

/// The square extension of the covariant difference: forward differences
/// everywhere, a backward difference at the last site. Maps gauge
/// parameters to tangent vectors of the space of gauge fields.
pub fn covariant_extended(lat: &Lattice, a: &DVector<f64>) -> DMatrix<f64> {
    let d = lat.group.dim();
    let n = lat.sites;
    let inv_dx = 1.0 / lat.dx();
    let mut m = DMatrix::zeros(n * d, n * d);
    m.view_mut((0, 0), ((n - 1) * d, n * d))
        .copy_from(&covariant_difference(lat, a));
    let last = n - 1;
    let ad = lat.group.ad(&lat.site(a, last));
    for r in 0..d {
        m[(last * d + r, last * d + r)] += inv_dx;
        m[(last * d + r, (last - 1) * d + r)] -= inv_dx;
        for c in 0..d {
            m[(last * d + r, last * d + c)] += ad[(r, c)];
        }
    }
    if lat.boundary == Boundary::Fixed {
        // Gauge parameters vanish at the endpoints: remove their columns.
        for r in 0..n * d {
            for c in 0..d {
                m[(r, c)] = 0.0;
                m[(r, last * d + c)] = 0.0;
            }
        }
    }
    m
}

/// The fundamental (vertical) vector of the gauge parameter `x` at the
/// gauge field `a`: the infinitesimal orbit direction `-D_A x`.
pub fn fundamental_vector(lat: &Lattice, a: &DVector<f64>, x: &DVector<f64>) -> DVector<f64> {
    -(covariant_extended(lat, a) * x)
}

/// The Faddeev-Popov operator `G^T D_A` (flat divergence of the covariant
/// gradient), `sites x sites` blocks.
pub fn fp_operator(lat: &Lattice, a: &DVector<f64>) -> DMatrix<f64> {
    difference(lat).transpose() * covariant_difference(lat, a)
}

/// Symmetrized Faddeev-Popov operator, used for spectral scans.
pub fn fp_symmetric(lat: &Lattice, a: &DVector<f64>) -> DMatrix<f64> {
    let m = fp_operator(lat, a);
    (&m + m.transpose()) * 0.5
}

/// Finite gauge transformation of the gauge field:
/// `A_i -> Ad_{g_i} A_i - log(g_{i+1} g_i^{-1}) / dx`, with a backward
/// difference at the last site, mirroring the extended covariant
/// difference.
pub fn gauge_transform(lat: &Lattice, a: &DVector<f64>, g: &[Element]) -> DVector<f64> {
    let grp = lat.group;
    let inv_dx = 1.0 / lat.dx();
    let mut out = lat.zero_field();
    for i in 0..lat.sites {
        let rotated = grp.adjoint(&g[i], &lat.site(a, i));
        let (hi, lo) = if i + 1 < lat.sites {
            (&g[i + 1], &g[i])
        } else {
            (&g[i], &g[i - 1])
        };
        let step = grp.log(&grp.multiply(hi, &grp.inverse(lo)));
        lat.set_site(&mut out, i, &(rotated - step * inv_dx));
    }
    out
}

/// The functional connection at a fixed gauge field: resolves any tangent
/// vector into its vertical part (an orbit motion) and the orthogonal
/// horizontal remainder.
pub struct Connection {
    lat: Lattice,
    /// Pseudo-inverse of the extended covariant difference.
    pinv: DMatrix<f64>,
    vertical_map: DMatrix<f64>,
}

impl Connection {
    pub fn new(lat: &Lattice, a: &DVector<f64>) -> Result<Self, LatticeError> {
        let m = covariant_extended(lat, a);
        let svd = m.clone().svd(true, true);
        let max = svd
            .singular_values
            .iter()
            .cloned()
            .fold(0.0_f64, f64::max);
        if max == 0.0 {
            return Err(LatticeError::Config("zero covariant difference".into()));
        }
        for s in svd.singular_values.iter() {
            let ratio = s / max;
            if (KERNEL_THRESHOLD..DEGENERACY_THRESHOLD).contains(&ratio) {
                return Err(LatticeError::Degenerate { ratio });
            }
        }
        let mut pinv = svd
            .pseudo_inverse(KERNEL_THRESHOLD * max)
            .expect("svd computed with both factor sets");
        // The SVD iteration leaves a relative defect of order 1e-8 in the
        // factorization even though the computed singular subspaces are
        // orthonormal to machine precision. Newton-Schulz refinement,
        // which preserves the range and corange of its starting point,
        // polishes the pseudo-inverse back to solver precision.
        for _ in 0..2 {
            pinv = &pinv * 2.0 - &pinv * (&m * &pinv);
        }
        Ok(Connection {
            lat: *lat,
            pinv,
            vertical_map: m,
        })
    }

    /// The connection form: the gauge parameter whose orbit motion best
    /// matches `v` (minimal-norm representative when the orbit map has a
    /// kernel).
    pub fn omega(&self, v: &DVector<f64>) -> DVector<f64> {
        -(&self.pinv * v)
    }

    /// Vertical projection of a tangent vector.
    pub fn vertical(&self, v: &DVector<f64>) -> DVector<f64> {
        -(&self.vertical_map * self.omega(v))
    }

    /// Horizontal projection of a tangent vector.
    pub fn horizontal(&self, v: &DVector<f64>) -> DVector<f64> {
        v - self.vertical(v)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }
}
