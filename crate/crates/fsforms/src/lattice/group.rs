//! The two gauge groups realized numerically: the circle group (abelian,
//! one algebra direction) and the unit quaternions (nonabelian, three
//! algebra directions, bracket = cross product in the standard basis).
//!
//! Lie-algebra elements are real coordinate vectors in an orthonormal
//! basis of the algebra; the invariant pairing is the Euclidean dot
//! product in those coordinates, and `Ad` acts by isometries (rotations),
//! which is what makes the orthogonal-projection construction of the
//! functional connection exactly equivariant in the continuum.

use nalgebra::{DMatrix, DVector, Vector3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    U1,
    Su2,
}

impl std::str::FromStr for Group {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "u1" => Ok(Group::U1),
            "su2" => Ok(Group::Su2),
            other => Err(format!("unknown group `{other}` (expected u1 or su2)")),
        }
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Group::U1 => "u1",
            Group::Su2 => "su2",
        })
    }
}

/// A group element at one site: an angle for the circle, a unit quaternion
/// `(w, x, y, z)` for the three-sphere.
#[derive(Debug, Clone, Copy)]
pub enum Element {
    U1(f64),
    Su2([f64; 4]),
}

impl Group {
    /// Dimension of the Lie algebra.
    pub fn dim(self) -> usize {
        match self {
            Group::U1 => 1,
            Group::Su2 => 3,
        }
    }

    /// Lie bracket of two algebra coordinate vectors.
    pub fn bracket(self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        match self {
            Group::U1 => DVector::zeros(1),
            Group::Su2 => {
                let a = Vector3::new(x[0], x[1], x[2]);
                let b = Vector3::new(y[0], y[1], y[2]);
                let c = a.cross(&b);
                DVector::from_column_slice(&[c.x, c.y, c.z])
            }
        }
    }

    /// Matrix of `ad_x = [x, .]` acting on algebra coordinates.
    pub fn ad(self, x: &DVector<f64>) -> DMatrix<f64> {
        match self {
            Group::U1 => DMatrix::zeros(1, 1),
            Group::Su2 => DMatrix::from_row_slice(
                3,
                3,
                &[0.0, -x[2], x[1], x[2], 0.0, -x[0], -x[1], x[0], 0.0],
            ),
        }
    }

    /// Exponential map from algebra coordinates to a group element. For the
    /// quaternions, `exp(x)` rotates by the angle `|x|` about `x/|x|`.
    pub fn exp(self, x: &DVector<f64>) -> Element {
        match self {
            Group::U1 => Element::U1(x[0]),
            Group::Su2 => {
                let theta = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                let (w, s) = if theta < 1e-12 {
                    (1.0 - theta * theta / 8.0, 0.5 - theta * theta / 48.0)
                } else {
                    ((theta / 2.0).cos(), (theta / 2.0).sin() / theta)
                };
                Element::Su2([w, s * x[0], s * x[1], s * x[2]])
            }
        }
    }

    /// Logarithm back to algebra coordinates (principal branch).
    pub fn log(self, g: &Element) -> DVector<f64> {
        match (self, g) {
            (Group::U1, Element::U1(a)) => DVector::from_element(1, *a),
            (Group::Su2, Element::Su2(q)) => {
                let [w, x, y, z] = *q;
                let v = (x * x + y * y + z * z).sqrt();
                let theta = 2.0 * v.atan2(w);
                let s = if v < 1e-12 { 2.0 / w } else { theta / v };
                DVector::from_column_slice(&[s * x, s * y, s * z])
            }
            _ => panic!("group element of the wrong group"),
        }
    }

    pub fn identity(self) -> Element {
        match self {
            Group::U1 => Element::U1(0.0),
            Group::Su2 => Element::Su2([1.0, 0.0, 0.0, 0.0]),
        }
    }

    pub fn multiply(self, g: &Element, h: &Element) -> Element {
        match (self, g, h) {
            (Group::U1, Element::U1(a), Element::U1(b)) => Element::U1(a + b),
            (Group::Su2, Element::Su2(p), Element::Su2(q)) => {
                let [pw, px, py, pz] = *p;
                let [qw, qx, qy, qz] = *q;
                Element::Su2([
                    pw * qw - px * qx - py * qy - pz * qz,
                    pw * qx + px * qw + py * qz - pz * qy,
                    pw * qy - px * qz + py * qw + pz * qx,
                    pw * qz + px * qy - py * qx + pz * qw,
                ])
            }
            _ => panic!("group elements of the wrong group"),
        }
    }

    pub fn inverse(self, g: &Element) -> Element {
        match (self, g) {
            (Group::U1, Element::U1(a)) => Element::U1(-a),
            (Group::Su2, Element::Su2(q)) => Element::Su2([q[0], -q[1], -q[2], -q[3]]),
            _ => panic!("group element of the wrong group"),
        }
    }

    /// Adjoint action of a group element on algebra coordinates. For the
    /// quaternions this is the rotation the quaternion represents; it is
    /// an isometry of the pairing.
    pub fn adjoint(self, g: &Element, x: &DVector<f64>) -> DVector<f64> {
        match (self, g) {
            (Group::U1, Element::U1(_)) => x.clone(),
            (Group::Su2, Element::Su2(q)) => {
                let [w, qx, qy, qz] = *q;
                let u = Vector3::new(qx, qy, qz);
                let v = Vector3::new(x[0], x[1], x[2]);
                // Rodrigues form of quaternion rotation.
                let r = v + 2.0 * u.cross(&(u.cross(&v) + w * v));
                DVector::from_column_slice(&[r.x, r.y, r.z])
            }
            _ => panic!("group element of the wrong group"),
        }
    }

    /// Invariant pairing on the algebra (the "trace form" in the
    /// orthonormal basis).
    pub fn pairing(self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v3(a: f64, b: f64, c: f64) -> DVector<f64> {
        DVector::from_column_slice(&[a, b, c])
    }

    #[test]
    fn bracket_satisfies_jacobi() {
        let g = Group::Su2;
        let (x, y, z) = (v3(0.3, -1.2, 0.7), v3(1.1, 0.4, -0.5), v3(-0.2, 0.9, 1.3));
        let total = g.bracket(&x, &g.bracket(&y, &z))
            + g.bracket(&y, &g.bracket(&z, &x))
            + g.bracket(&z, &g.bracket(&x, &y));
        assert!(total.norm() < 1e-14);
    }

    #[test]
    fn exp_log_round_trip() {
        let g = Group::Su2;
        let x = v3(0.4, -0.8, 1.1);
        let back = g.log(&g.exp(&x));
        assert!((back - x).norm() < 1e-12);
        let u = Group::U1;
        let y = DVector::from_element(1, 0.37);
        assert!((u.log(&u.exp(&y)) - y).norm() < 1e-15);
    }

    #[test]
    fn adjoint_is_a_bracket_homomorphism_and_isometry() {
        let g = Group::Su2;
        let h = g.exp(&v3(0.9, 0.2, -0.4));
        let (x, y) = (v3(0.3, -1.2, 0.7), v3(1.1, 0.4, -0.5));
        let lhs = g.adjoint(&h, &g.bracket(&x, &y));
        let rhs = g.bracket(&g.adjoint(&h, &x), &g.adjoint(&h, &y));
        assert!((lhs - rhs).norm() < 1e-12);
        assert!((g.adjoint(&h, &x).norm() - x.norm()).abs() < 1e-12);
    }

    #[test]
    fn adjoint_matches_conjugation_through_exp() {
        // Ad_g x = log(g exp(x) g^{-1}) for small x.
        let g = Group::Su2;
        let h = g.exp(&v3(0.5, -0.3, 0.8));
        let x = v3(0.01, 0.02, -0.015);
        let conj = g.multiply(&g.multiply(&h, &g.exp(&x)), &g.inverse(&h));
        let lhs = g.log(&conj);
        let rhs = g.adjoint(&h, &x);
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn ad_matrix_matches_bracket() {
        let g = Group::Su2;
        let (x, y) = (v3(0.3, -1.2, 0.7), v3(1.1, 0.4, -0.5));
        let lhs = g.ad(&x) * &y;
        assert!((lhs - g.bracket(&x, &y)).norm() < 1e-14);
    }
}
