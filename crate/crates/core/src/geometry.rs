//! Hyperbolic plane primitives: half-plane and disk points, boundary points,
//! real Möbius isometries, distances and the positive definite representation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Point `x + iy` of the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && y > 0.0) {
            return Err(Error::InvalidInput(format!("not in the half plane: {x} + {y}i")));
        }
        Ok(PlanePoint { x, y })
    }

    pub fn i() -> Self {
        PlanePoint { x: 0.0, y: 1.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

/// Point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskCoord {
    pub w: Complex64,
}

impl DiskCoord {
    pub fn new(w: Complex64) -> Result<Self> {
        if !(w.norm_sqr() < 1.0) {
            return Err(Error::InvalidInput(format!("not in the open disk: {w}")));
        }
        Ok(DiskCoord { w })
    }
}

/// Boundary point of the half plane: a real number or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint {
    Real(f64),
    Infinity,
}

impl BoundaryPoint {
    /// Disk form of the boundary point, an angle in `[0, 2π)`.
    pub fn disk_angle(self) -> f64 {
        reduce_angle(hyperbolic_angle(self))
    }

    /// Inverse of [`BoundaryPoint::disk_angle`]; the angle need not be reduced.
    pub fn from_disk_angle(theta: f64) -> Self {
        let t = reduce_angle(theta);
        if t == 0.0 {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Real(-1.0 / (t / 2.0).tan())
        }
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Real 2×2 matrix with positive determinant acting by fractional linear maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl IsometryMatrix {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = IsometryMatrix { a, b, c, d };
        if !(m.det() > 0.0) {
            return Err(Error::InvalidInput(format!("isometry needs det > 0, got {}", m.det())));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        IsometryMatrix { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// The affine matrix `[[1, -x], [0, y]]`, which sends `x + iy` to `i`.
    pub fn affine(p: PlanePoint) -> Self {
        IsometryMatrix { a: 1.0, b: -p.x, c: 0.0, d: p.y }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &IsometryMatrix) -> IsometryMatrix {
        IsometryMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// Things a real isometry can act on.
pub trait Moebius: Sized {
    fn moebius(self, m: &IsometryMatrix) -> Self;
}

impl Moebius for PlanePoint {
    fn moebius(self, m: &IsometryMatrix) -> Self {
        let z = self.to_complex();
        let w = (z * m.a + m.b) / (z * m.c + m.d);
        PlanePoint { x: w.re, y: w.im }
    }
}

impl Moebius for BoundaryPoint {
    fn moebius(self, m: &IsometryMatrix) -> Self {
        match self {
            BoundaryPoint::Infinity => {
                if m.c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Real(m.a / m.c)
                }
            }
            BoundaryPoint::Real(r) => {
                let den = m.c * r + m.d;
                if den == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Real((m.a * r + m.b) / den)
                }
            }
        }
    }
}

/// Projective action of `m` on a point or boundary point.
pub fn apply_isometry<P: Moebius>(m: &IsometryMatrix, p: P) -> P {
    p.moebius(m)
}

/// Cayley transform `U(z) = (z - i)/(z + i)` from the half plane to the disk.
pub fn cayley(p: PlanePoint) -> DiskCoord {
    let z = p.to_complex();
    let i = Complex64::i();
    DiskCoord { w: (z - i) / (z + i) }
}

/// Inverse Cayley transform `i (w + 1)/(1 - w)`.
pub fn cayley_inv(d: DiskCoord) -> PlanePoint {
    let w = d.w;
    let z = Complex64::i() * (w + 1.0) / (Complex64::new(1.0, 0.0) - w);
    // 1 - |w|^2 keeps y positive even when the ratio above rounds badly
    let y = (1.0 - w.norm_sqr()) / (Complex64::new(1.0, 0.0) - w).norm_sqr();
    PlanePoint { x: z.re, y }
}

/// Cayley transform on the boundary, as an angle in `[0, 2π)`.
pub fn cayley_boundary(b: BoundaryPoint) -> f64 {
    b.disk_angle()
}

/// Inverse Cayley transform of the boundary point `e^{iθ}`.
pub fn cayley_inv_boundary(theta: f64) -> BoundaryPoint {
    BoundaryPoint::from_disk_angle(theta)
}

/// `1 - |U(z)|^2` computed without cancellation.
pub fn disk_defect(p: PlanePoint) -> f64 {
    4.0 * p.y / (p.x * p.x + (p.y + 1.0) * (p.y + 1.0))
}

pub fn hyperbolic_distance(p: PlanePoint, q: PlanePoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let u = (dx * dx + dy * dy) / (2.0 * p.y * q.y);
    // acosh(1 + u) = log(1 + u + sqrt(u (u + 2))), accurate for small u
    (u + (u * (u + 2.0)).sqrt()).ln_1p()
}

fn horo_to_i(xi: BoundaryPoint, a: PlanePoint) -> f64 {
    match xi {
        BoundaryPoint::Infinity => -a.y.ln(),
        BoundaryPoint::Real(q) => {
            let dx = a.x - q;
            ((dx * dx + a.y * a.y) / ((1.0 + q * q) * a.y)).ln()
        }
    }
}

/// Signed horocyclic distance `d_ξ(a, b) = d_ξ(a, i) - d_ξ(b, i)`.
pub fn horocyclic_distance(xi: BoundaryPoint, a: PlanePoint, b: PlanePoint) -> f64 {
    horo_to_i(xi, a) - horo_to_i(xi, b)
}

/// `XᵗX / det X` for `X = [[1, -x], [0, y]]`, as rows.
pub fn positive_definite_rep(p: PlanePoint) -> [[f64; 2]; 2] {
    let PlanePoint { x, y } = p;
    [[1.0 / y, -x / y], [-x / y, (x * x + y * y) / y]]
}

/// `angle(∞, i, r) = -2 arccot(r)`, with values in `(-2π, 0]`.
pub fn hyperbolic_angle(r: BoundaryPoint) -> f64 {
    match r {
        BoundaryPoint::Infinity => 0.0,
        BoundaryPoint::Real(r) => -2.0 * 1.0f64.atan2(r),
    }
}

/// Half-plane coordinate of the boundary point with disk angle `phi`, `-cot(φ/2)`.
/// Infinite at multiples of 2π.
pub fn boundary_coordinate(phi: f64) -> f64 {
    let h = phi / 2.0;
    -h.cos() / h.sin()
}

/// Inverse of [`boundary_coordinate`] on `(0, 2π)`.
pub fn angle_of_coordinate(r: f64) -> f64 {
    2.0 * 1.0f64.atan2(-r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn cayley_examples() {
        assert_abs_diff_eq!(cayley(PlanePoint::i()).w.norm(), 0.0, epsilon = 1e-15);
        let w = cayley(PlanePoint::new(0.0, 2.0).unwrap()).w;
        assert_abs_diff_eq!(w.re, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w.im, 0.0, epsilon = 1e-15);
        assert_eq!(cayley_boundary(BoundaryPoint::Infinity), 0.0);
        assert_abs_diff_eq!(cayley_boundary(BoundaryPoint::Real(0.0)), PI, epsilon = 1e-15);
    }

    #[test]
    fn boundary_angle_matches_cayley_formula() {
        for r in [-3.0, -0.5, 0.25, 1.0, 7.0] {
            let z = Complex64::new(r, 0.0);
            let w = (z - Complex64::i()) / (z + Complex64::i());
            let th = cayley_boundary(BoundaryPoint::Real(r));
            assert_abs_diff_eq!(w.re, th.cos(), epsilon = 1e-14);
            assert_abs_diff_eq!(w.im, th.sin(), epsilon = 1e-14);
            match cayley_inv_boundary(th) {
                BoundaryPoint::Real(s) => assert_abs_diff_eq!(s, r, epsilon = 1e-12),
                BoundaryPoint::Infinity => panic!("lost a finite point"),
            }
        }
        assert_eq!(cayley_inv_boundary(0.0), BoundaryPoint::Infinity);
        assert_eq!(cayley_inv_boundary(TAU), BoundaryPoint::Infinity);
    }

    #[test]
    fn distance_examples() {
        let i = PlanePoint::i();
        assert_eq!(hyperbolic_distance(i, i), 0.0);
        let two_i = PlanePoint::new(0.0, 2.0).unwrap();
        assert_abs_diff_eq!(hyperbolic_distance(i, two_i), 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn horocyclic_examples() {
        let i = PlanePoint::i();
        let two_i = PlanePoint::new(0.0, 2.0).unwrap();
        let p = PlanePoint::new(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            horocyclic_distance(BoundaryPoint::Infinity, two_i, i),
            0.5f64.ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            horocyclic_distance(BoundaryPoint::Real(0.0), p, i),
            2f64.ln(),
            epsilon = 1e-15
        );
        assert_eq!(horocyclic_distance(BoundaryPoint::Real(3.0), p, p), 0.0);
    }

    #[test]
    fn isometry_examples() {
        let p = PlanePoint::new(1.5, 0.25).unwrap();
        assert_eq!(apply_isometry(&IsometryMatrix::identity(), p), p);
        let q = apply_isometry(&IsometryMatrix::affine(p), p);
        assert_abs_diff_eq!(q.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.y, 1.0, epsilon = 1e-15);
        let j = IsometryMatrix::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(apply_isometry(&j, BoundaryPoint::Real(0.0)), BoundaryPoint::Infinity);
        assert_eq!(apply_isometry(&j, BoundaryPoint::Infinity), BoundaryPoint::Real(0.0));
        assert!(IsometryMatrix::new(1.0, 0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn positive_definite_examples() {
        assert_eq!(positive_definite_rep(PlanePoint::i()), [[1.0, 0.0], [0.0, 1.0]]);
        let r = positive_definite_rep(PlanePoint::new(0.0, 2.0).unwrap());
        assert_eq!(r, [[0.5, 0.0], [0.0, 2.0]]);
        let r = positive_definite_rep(PlanePoint::new(1.0, 1.0).unwrap());
        assert_eq!(r, [[1.0, -1.0], [-1.0, 2.0]]);
    }

    #[test]
    fn hyperbolic_angle_examples() {
        assert_eq!(hyperbolic_angle(BoundaryPoint::Infinity), 0.0);
        assert_abs_diff_eq!(hyperbolic_angle(BoundaryPoint::Real(0.0)), -PI, epsilon = 1e-15);
        assert_abs_diff_eq!(hyperbolic_angle(BoundaryPoint::Real(1.0)), -PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn coordinate_helpers_are_inverse() {
        for phi in [0.1, 1.0, PI, 4.0, 6.2] {
            assert_abs_diff_eq!(angle_of_coordinate(boundary_coordinate(phi)), phi, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_points() {
        assert!(PlanePoint::new(0.0, 0.0).is_err());
        assert!(PlanePoint::new(f64::NAN, 1.0).is_err());
        assert!(DiskCoord::new(Complex64::new(1.0, 0.0)).is_err());
    }
}
