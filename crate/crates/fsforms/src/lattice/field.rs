//! Lattice geometry, site fields, and reproducible field sampling.
//!
//! The lattice is a 1-D chain of `sites` points spanning `[0, length]`.
//! Every field in play — the gauge field, tangent vectors to the space of
//! gauge fields, electric fields, and gauge parameters — is a
//! Lie-algebra-valued site field, stored as one flat vector of
//! `sites * algebra_dim` coordinates (site-major).
//!
//! Resolution studies need the *same continuum field* sampled at several
//! resolutions, so random smooth fields are drawn as low-order cosine
//! series with seeded coefficients and then evaluated pointwise.

use super::group::{Element, Group};
use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Gauge parameters are unconstrained at the endpoints.
    Free,
    /// Gauge parameters vanish at both endpoints.
    Fixed,
}

impl std::str::FromStr for Boundary {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "free" => Ok(Boundary::Free),
            "fixed" => Ok(Boundary::Fixed),
            other => Err(format!("unknown boundary `{other}` (expected free or fixed)")),
        }
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct Lattice {
    pub group: Group,
    pub sites: usize,
    pub length: f64,
    pub boundary: Boundary,
}

impl Lattice {
    pub fn new(group: Group, sites: usize) -> Self {
        Lattice {
            group,
            sites,
            length: 1.0,
            boundary: Boundary::Free,
        }
    }

    pub fn dx(&self) -> f64 {
        self.length / (self.sites as f64 - 1.0)
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    /// Total number of real coordinates of a site field.
    pub fn dof(&self) -> usize {
        self.sites * self.group.dim()
    }

    pub fn zero_field(&self) -> DVector<f64> {
        DVector::zeros(self.dof())
    }

    /// The algebra coordinates of a site field at site `i`.
    pub fn site(&self, field: &DVector<f64>, i: usize) -> DVector<f64> {
        let d = self.group.dim();
        field.rows(i * d, d).into_owned()
    }

    pub fn set_site(&self, field: &mut DVector<f64>, i: usize, value: &DVector<f64>) {
        let d = self.group.dim();
        field.rows_mut(i * d, d).copy_from(value);
    }

    /// Sitewise adjoint action of a group-valued field.
    pub fn adjoint(&self, g: &[Element], field: &DVector<f64>) -> DVector<f64> {
        let mut out = self.zero_field();
        for i in 0..self.sites {
            let v = self.group.adjoint(&g[i], &self.site(field, i));
            self.set_site(&mut out, i, &v);
        }
        out
    }

    /// `L^2`-type inner product of two site fields: `dx * sum_i <a_i, b_i>`.
    pub fn inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        self.dx() * a.dot(b)
    }

    pub fn norm(&self, a: &DVector<f64>) -> f64 {
        self.inner(a, a).sqrt()
    }

    /// Removes the sitewise-constant component in each algebra direction.
    pub fn project_out_constants(&self, field: &DVector<f64>) -> DVector<f64> {
        let d = self.group.dim();
        let mut out = field.clone();
        for a in 0..d {
            let mean: f64 =
                (0..self.sites).map(|i| field[i * d + a]).sum::<f64>() / self.sites as f64;
            for i in 0..self.sites {
                out[i * d + a] -= mean;
            }
        }
        out
    }
}

/// A smooth algebra-valued profile on `[0, L]`: a low-order cosine series
/// with one coefficient vector per harmonic. Evaluating the same profile
/// on lattices of different resolution samples the same continuum field.
#[derive(Debug, Clone)]
pub struct SmoothProfile {
    /// `coeffs[k][a]`: coefficient of `cos(k pi x / L)` in direction `a`.
    coeffs: Vec<Vec<f64>>,
}

impl SmoothProfile {
    pub const HARMONICS: usize = 4;

    /// Draws a profile with standard-normal coefficients, damped by 1/(k+1).
    pub fn random(rng: &mut ChaCha8Rng, dim: usize) -> Self {
        let coeffs = (0..Self::HARMONICS)
            .map(|k| {
                (0..dim)
                    .map(|_| normal(rng) / (k as f64 + 1.0))
                    .collect()
            })
            .collect();
        SmoothProfile { coeffs }
    }

    pub fn scaled(mut self, s: f64) -> Self {
        for c in &mut self.coeffs {
            for v in c.iter_mut() {
                *v *= s;
            }
        }
        self
    }

    /// A single-harmonic profile pointing in a fixed algebra direction.
    pub fn harmonic(dim: usize, direction: usize, k: usize, amplitude: f64) -> Self {
        let mut coeffs = vec![vec![0.0; dim]; k + 1];
        coeffs[k][direction] = amplitude;
        SmoothProfile { coeffs }
    }

    pub fn sample(&self, lat: &Lattice) -> DVector<f64> {
        let d = lat.group.dim();
        let mut out = lat.zero_field();
        for i in 0..lat.sites {
            let x = lat.x(i) / lat.length;
            for (k, c) in self.coeffs.iter().enumerate() {
                let basis = (k as f64 * std::f64::consts::PI * x).cos();
                for a in 0..d.min(c.len()) {
                    out[i * d + a] += c[a] * basis;
                }
            }
        }
        out
    }
}

/// Multiplies a site field by the smooth window `4 x (L - x) / L^2`, which
/// vanishes at both endpoints: the pointwise product of a smooth continuum
/// profile with the window is still resolution-consistent, and the result
/// is an admissible gauge parameter for the fixed-endpoint boundary
/// condition.
pub fn windowed(lat: &Lattice, field: &DVector<f64>) -> DVector<f64> {
    let d = lat.group.dim();
    let mut out = field.clone();
    for i in 0..lat.sites {
        let x = lat.x(i);
        let w = 4.0 * x * (lat.length - x) / (lat.length * lat.length);
        for a in 0..d {
            out[i * d + a] *= w;
        }
    }
    out
}

/// Standard normal via Box-Muller on the crate RNG (keeps the dependency
/// set to the plain `rand` core).
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rough (white-noise) site field, for stress tests that should not rely
/// on smoothness.
pub fn rough_field(lat: &Lattice, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(lat.dof(), |_, _| normal(rng))
}

/// A group-valued field obtained by exponentiating a sampled algebra field.
pub fn exponentiated(lat: &Lattice, algebra_field: &DVector<f64>) -> Vec<Element> {
    (0..lat.sites)
        .map(|i| lat.group.exp(&lat.site(algebra_field, i)))
        .collect()
}
