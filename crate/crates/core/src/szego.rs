//! Finite unitary pipeline: Szegő recursion, (deformed) Verblunsky
//! coefficients and the piecewise constant carousel they drive.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::dirac::{BoundaryCondition, DiracOperator, DrivingPath, EndpointClass, Provenance};
use crate::error::{Error, Result};
use crate::geometry::{cayley_inv, BoundaryPoint, DiskCoord, PlanePoint};

const UNIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerblunskyCoefficients {
    coeffs: Vec<Complex64>,
}

impl VerblunskyCoefficients {
    /// Checks `|α_k| < 1` before the last entry and `|α_{n-1}| = 1`; the last
    /// entry is renormalised onto the circle.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        check_unit_sequence(&coeffs)?;
        let last = coeffs.last_mut().unwrap();
        *last /= last.norm();
        Ok(VerblunskyCoefficients { coeffs })
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformedVerblunsky {
    coeffs: Vec<Complex64>,
}

impl DeformedVerblunsky {
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        check_unit_sequence(&coeffs)?;
        if let Some(k) = coeffs.iter().position(|g| (Complex64::new(1.0, 0.0) - g).norm() < 1e-12) {
            return Err(Error::DenominatorBlowup(k));
        }
        let last = coeffs.last_mut().unwrap();
        *last /= last.norm();
        Ok(DeformedVerblunsky { coeffs })
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn check_unit_sequence(c: &[Complex64]) -> Result<()> {
    let n = c.len();
    if n == 0 {
        return Err(Error::InvalidInput("need at least one coefficient".into()));
    }
    if let Some(k) = c[..n - 1].iter().position(|a| !(a.norm() < 1.0)) {
        return Err(Error::InvalidInput(format!("coefficient {k} is not inside the unit disk")));
    }
    if (c[n - 1].norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidInput(format!(
            "last coefficient has modulus {}, expected 1",
            c[n - 1].norm()
        )));
    }
    Ok(())
}

/// Sorted distinct angles in `[-π, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenAngles {
    angles: Vec<f64>,
}

impl EigenAngles {
    /// Angles are reduced to `[-π, π)` and sorted.
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        let mut a: Vec<f64> = angles
            .into_iter()
            .map(|t| {
                let r = (t + PI).rem_euclid(TAU) - PI;
                if r >= PI {
                    -PI
                } else {
                    r
                }
            })
            .collect();
        if a.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("angles must be finite".into()));
        }
        a.sort_by(|x, y| x.total_cmp(y));
        Ok(EigenAngles { angles: a })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// One Szegő step `(Φ, Φ*) ↦ A_k Z (Φ, Φ*)`.
#[inline]
fn szego_step(alpha: Complex64, z: Complex64, (p, q): (Complex64, Complex64)) -> (Complex64, Complex64) {
    let zp = z * p;
    (zp - alpha.conj() * q, q - alpha * zp)
}

/// `(Φ_n(z), Φ_n*(z))`.
pub fn szego_eval(alpha: &VerblunskyCoefficients, z: Complex64) -> (Complex64, Complex64) {
    szego_partial(alpha.as_slice(), z)
}

fn szego_partial(alpha: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    alpha.iter().fold((one, one), |s, a| szego_step(*a, z, s))
}

/// Verblunsky coefficients of `Σ w_j δ_{e^{iλ_j}}`.
pub fn verblunsky_from_measure(angles: &EigenAngles, weights: &[f64]) -> Result<VerblunskyCoefficients> {
    let n = angles.len();
    if n == 0 || weights.len() != n {
        return Err(Error::InvalidInput("need one positive weight per angle".into()));
    }
    if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidInput("weights must be positive".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("weights sum to {total}, expected 1")));
    }
    let a = angles.as_slice();
    for k in 0..n {
        let next = if k + 1 < n { a[k + 1] } else { a[0] + TAU };
        if next - a[k] < 1e-12 {
            return Err(Error::DegenerateMeasure(format!("angles {} and {} coincide", a[k], next)));
        }
    }
    let z: Vec<Complex64> = a.iter().map(|t| Complex64::from_polar(1.0, *t)).collect();
    let dot = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
        (0..n).map(|j| weights[j] * u[j] * v[j].conj()).sum()
    };
    // Φ_k at the atoms; Φ*_k = z^k conj(Φ_k) there, so only Φ_k is carried
    let mut basis: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0); n]];
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        let phi = &basis[k];
        let star: Vec<Complex64> =
            (0..n).map(|j| Complex64::from_polar(1.0, k as f64 * a[j]) * phi[j].conj()).collect();
        let num: Complex64 = (0..n).map(|j| weights[j] * z[j] * phi[j]).sum();
        let den: Complex64 = (0..n).map(|j| weights[j] * star[j]).sum();
        let mut alpha = (num / den).conj();
        if k + 1 == n {
            if (alpha.norm() - 1.0).abs() > 1e-6 {
                return Err(Error::DegenerateMeasure(format!("last coefficient has modulus {}", alpha.norm())));
            }
            coeffs.push(alpha / alpha.norm());
            break;
        }
        if !(alpha.norm() < 1.0) {
            alpha *= (1.0 - f64::EPSILON) / alpha.norm();
        }
        let mut next: Vec<Complex64> = (0..n).map(|j| szego_step(alpha, z[j], (phi[j], star[j])).0).collect();
        // two passes of Gram-Schmidt against lower degrees keep Φ_{k+1} monic and orthogonal
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&next, b) / dot(b, b);
                for j in 0..n {
                    next[j] -= c * b[j];
                }
            }
        }
        basis.push(next);
        coeffs.push(alpha);
    }
    VerblunskyCoefficients::new(coeffs)
}

/// With `|α_{n-1}| = 1`, `Φ_n* = −α_{n-1} Φ_n`, so `Φ_n(e^{iθ}) e^{−inθ/2}` has a
/// fixed phase `u`, `u² = −ᾱ_{n-1}`. Dividing it out leaves a real function whose
/// zeros are the roots of `Φ_n`.
fn real_phi(alpha: &[Complex64], u: Complex64, theta: f64) -> f64 {
    let n = alpha.len();
    let z = Complex64::from_polar(1.0, theta);
    let (p, q) = szego_partial(&alpha[..n - 1], z);
    let last = alpha[n - 1] / alpha[n - 1].norm();
    let phi = z * p - last.conj() * q;
    (phi * Complex64::from_polar(1.0, -0.5 * n as f64 * theta) * u.conj()).re
}

/// Roots of `Φ_n` on the unit circle: sign changes of the real-normalized `Φ_n`
/// on a doubling angular scan, then bisection.
pub fn eigen_angles_oracle(alpha: &VerblunskyCoefficients) -> Result<EigenAngles> {
    let a = alpha.as_slice();
    let n = a.len();
    let last = a[n - 1] / a[n - 1].norm();
    let u = (-last.conj()).sqrt();
    let f = |t: f64| real_phi(a, u, t);
    let max_m = (1usize << 14) * n;
    let mut m = 8 * n;
    let mut found = 0;
    while m <= max_m {
        // offset keeps symmetric roots such as 0 and π off the grid
        let theta = |j: usize| -PI + TAU * (j as f64 + 0.381_966_011_250_105) / m as f64;
        let vals: Vec<f64> = (0..=m).map(|j| f(theta(j))).collect();
        let mut roots = Vec::with_capacity(n);
        for j in 0..m {
            let (v0, v1) = (vals[j], vals[j + 1]);
            if v0 == 0.0 {
                roots.push(theta(j));
                continue;
            }
            if v0.signum() == v1.signum() || v1 == 0.0 {
                continue;
            }
            let (mut lo, mut hi) = (theta(j), theta(j + 1));
            while hi - lo > 1e-15 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                } else if fm.signum() == v0.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        found = roots.len();
        if found == n {
            return EigenAngles::new(roots);
        }
        m *= 2;
    }
    Err(Error::RootCountMismatch { found, expected: n })
}

/// Disk carousel centers `b_0, …, b_n` of the Szegő recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryCarousel {
    /// `b_k` for `k = 0..=n`; `|b_n| = 1`.
    pub centers: Vec<Complex64>,
    /// `1 - |b_k|²` for `k < n`, from the transfer determinant rather than from `b_k`.
    pub defects: Vec<f64>,
}

impl UnitaryCarousel {
    pub fn n(&self) -> usize {
        self.centers.len() - 1
    }

    /// Terminal boundary point `b(1)`.
    pub fn terminal(&self) -> Complex64 {
        self.centers[self.n()]
    }

    /// Half-plane path `U⁻¹(b_k)` on cells `[k/n, (k+1)/n)`, `f = 1/2`.
    pub fn driving_path(&self) -> Result<DrivingPath> {
        let n = self.n();
        let grid = (0..=n).map(|k| k as f64 / n as f64).collect();
        let one = Complex64::new(1.0, 0.0);
        let values = self.centers[..n]
            .iter()
            .zip(&self.defects)
            .map(|(b, d)| PlanePoint { x: cayley_inv(DiskCoord { w: *b }).x, y: d / (one - b).norm_sqr() })
            .collect();
        DrivingPath::piecewise_constant(grid, values)
    }
}

/// `b_k = P [[1, ᾱ₀], [α₀, 1]] ⋯ [[1, ᾱ_{k-1}], [α_{k-1}, 1]] (0, 1)ᵗ`.
pub fn carousel_path(alpha: &VerblunskyCoefficients) -> UnitaryCarousel {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = [[one, zero], [zero, one]];
    let mut centers = vec![zero];
    let mut defects = vec![1.0];
    // det m, tracked through the scaling; 1 - |b|² = det m / |m₁₁|²
    let mut det = 1.0;
    for a in alpha.as_slice() {
        let (ab, a) = (a.conj(), *a);
        let next = [
            [m[0][0] + m[0][1] * a, m[0][0] * ab + m[0][1]],
            [m[1][0] + m[1][1] * a, m[1][0] * ab + m[1][1]],
        ];
        let s = next.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        m = next.map(|r| r.map(|c| c / s));
        det *= (1.0 - a.norm()) * (1.0 + a.norm()) / (s * s);
        centers.push(m[0][1] / m[1][1]);
        defects.push(det / m[1][1].norm_sqr());
    }
    defects.pop();
    let last = centers.last_mut().unwrap();
    *last /= last.norm();
    UnitaryCarousel { centers, defects }
}

/// Deformed coefficients `γ_k = ᾱ_k Φ*_k(1)/Φ_k(1)`.
pub fn deform(alpha: &VerblunskyCoefficients) -> Result<DeformedVerblunsky> {
    let one = Complex64::new(1.0, 0.0);
    let mut s = (one, one);
    let mut out = Vec::with_capacity(alpha.len());
    for a in alpha.as_slice() {
        if s.0.norm() < 1e-12 {
            return Err(Error::DegenerateMeasure("1 is an eigenvalue".into()));
        }
        out.push(a.conj() * s.1 / s.0);
        s = szego_step(*a, one, s);
    }
    if s.0.norm() < 1e-12 * s.1.norm().max(1.0) {
        return Err(Error::DegenerateMeasure("1 is an eigenvalue".into()));
    }
    DeformedVerblunsky::new(out)
}

/// Output of the affine walk driven by deformed coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineWalk {
    /// `x_k + i y_k` for `k < n`.
    pub points: Vec<PlanePoint>,
    /// `x_n`; the walk ends on the boundary (`y_n = 0`).
    pub terminal: f64,
    /// Disk centers `b_0, …, b_n` from the deformed recursion, for cross-checks.
    pub centers: Vec<Complex64>,
}

impl AffineWalk {
    pub fn driving_path(&self) -> Result<DrivingPath> {
        let n = self.points.len();
        let grid = (0..=n).map(|k| k as f64 / n as f64).collect();
        DrivingPath::piecewise_constant(grid, self.points.clone())
    }
}

/// `x_{k+1} = x_k + v_k y_k`, `y_{k+1} = y_k (1 + w_k)` from `x₀ + iy₀ = i`.
pub fn deformed_pipeline(gamma: &DeformedVerblunsky) -> Result<AffineWalk> {
    let one = Complex64::new(1.0, 0.0);
    let g = gamma.as_slice();
    let n = g.len();
    let (mut x, mut y) = (0.0, 1.0);
    let mut points = Vec::with_capacity(n);
    let mut b = Complex64::new(0.0, 0.0);
    let mut centers = vec![b];
    for (k, gk) in g.iter().enumerate() {
        let d = one - gk;
        if d.norm() < 1e-12 {
            return Err(Error::DenominatorBlowup(k));
        }
        points.push(PlanePoint { x, y });
        let v = -2.0 * (gk / d).im;
        x += v * y;
        // 1 + w = (1 - |γ|²)/|1 - γ|², without the cancellation near |γ| = 1
        y *= (1.0 - gk.norm()) * (1.0 + gk.norm()) / d.norm_sqr();
        let e = gk * (one - b) / (one - b.conj());
        b = (b + e) / (one + b.conj() * e);
        centers.push(b);
    }
    Ok(AffineWalk { points, terminal: x, centers })
}

/// Coefficients accepted by [`unitary_dirac_operator`].
#[derive(Debug, Clone, PartialEq)]
pub enum UnitaryCoefficients {
    Standard(VerblunskyCoefficients),
    Deformed(DeformedVerblunsky),
}

/// Dirac operator on `[0, 1)` whose spectrum is `{nλ_k + 2πnj}`.
pub fn unitary_dirac_operator(c: &UnitaryCoefficients) -> Result<DiracOperator> {
    match c {
        UnitaryCoefficients::Standard(alpha) => {
            let car = carousel_path(alpha);
            let op = DiracOperator::new(
                car.driving_path()?.with_tail_rule(EndpointClass::LimitCircle),
                BoundaryCondition::from_angle(0.0),
                BoundaryCondition::from_angle(car.terminal().arg()),
            )?;
            Ok(op.with_provenance(Provenance::new("unitary", None, Some(format!("n={}", alpha.len())))))
        }
        UnitaryCoefficients::Deformed(gamma) => {
            let walk = deformed_pipeline(gamma)?;
            let op = DiracOperator::with_boundary_points(
                walk.driving_path()?.with_tail_rule(EndpointClass::LimitCircle),
                BoundaryPoint::Infinity,
                BoundaryPoint::Real(walk.terminal),
            )?;
            Ok(op.with_provenance(Provenance::new(
                "unitary-deformed",
                None,
                Some(format!("n={}", gamma.len())),
            )))
        }
    }
}

/// `Σ_k Σ_j (nλ_k + 2πnj)⁻² = Σ_k 1/(4n² sin²(λ_k/2))`.
pub fn spectral_hs_sum(angles: &EigenAngles) -> f64 {
    let n = angles.len() as f64;
    angles
        .as_slice()
        .iter()
        .map(|t| 1.0 / (4.0 * n * n * (t / 2.0).sin().powi(2)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{eigenvalues, hs_norm_squared, SolverConfig};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn szego_initial_and_one_step() {
        let a = VerblunskyCoefficients::new(vec![c(1.0, 0.0)]).unwrap();
        let z = c(0.3, 0.7);
        let (p, _) = szego_eval(&a, z);
        assert!((p - (z - 1.0)).norm() < 1e-15);
        assert_eq!(szego_partial(&[], z), (c(1.0, 0.0), c(1.0, 0.0)));
    }

    #[test]
    fn reversed_modulus_on_circle() {
        let a = VerblunskyCoefficients::new(vec![c(0.3, -0.2), c(-0.5, 0.1), c(0.0, 1.0)]).unwrap();
        for t in [0.1, 1.0, 2.5, -3.0] {
            let (p, q) = szego_eval(&a, Complex64::from_polar(1.0, t));
            assert!((p.norm() - q.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficient_validation() {
        assert!(VerblunskyCoefficients::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(VerblunskyCoefficients::new(vec![c(0.5, 0.0)]).is_err());
        assert!(VerblunskyCoefficients::new(vec![]).is_err());
        assert_eq!(
            DeformedVerblunsky::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap_err(),
            Error::DenominatorBlowup(1)
        );
    }

    #[test]
    fn measure_examples() {
        let l = 0.9;
        let a = verblunsky_from_measure(&EigenAngles::new(vec![l]).unwrap(), &[1.0]).unwrap();
        assert!((a.as_slice()[0] - Complex64::from_polar(1.0, -l)).norm() < 1e-15);
        let a = verblunsky_from_measure(&EigenAngles::new(vec![0.0, PI]).unwrap(), &[0.5, 0.5]).unwrap();
        assert!(a.as_slice()[0].norm() < 1e-15);
        assert!((a.as_slice()[1] - 1.0).norm() < 1e-15);
        let dup = EigenAngles::new(vec![0.5, 0.5]).unwrap();
        assert!(matches!(verblunsky_from_measure(&dup, &[0.5, 0.5]), Err(Error::DegenerateMeasure(_))));
    }

    #[test]
    fn permuted_weights_same_coefficients() {
        let ang = EigenAngles::new(vec![-2.0, 0.4, 1.9]).unwrap();
        let a = verblunsky_from_measure(&ang, &[0.2, 0.3, 0.5]).unwrap();
        let ang2 = EigenAngles::new(vec![1.9, -2.0, 0.4]).unwrap();
        // the constructor sorts, so pass weights in sorted order again
        let b = verblunsky_from_measure(&ang2, &[0.2, 0.3, 0.5]).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn oracle_examples() {
        let a = VerblunskyCoefficients::new(vec![c(1.0, 0.0)]).unwrap();
        let e = eigen_angles_oracle(&a).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e.as_slice()[0].abs() < 1e-12);
        let a = VerblunskyCoefficients::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let e = eigen_angles_oracle(&a).unwrap();
        let circ = |x: f64, y: f64| ((x - y + PI).rem_euclid(TAU) - PI).abs();
        let mut got = e.as_slice().to_vec();
        got.sort_by(|x, y| circ(*x, 0.0).total_cmp(&circ(*y, 0.0)));
        assert!(circ(got[0], 0.0) < 1e-12 && circ(got[1], PI) < 1e-12);
    }

    #[test]
    fn round_trip() {
        let ang = EigenAngles::new(vec![-2.9, -1.0, -0.2, 0.7, 1.3, 2.2, 3.0]).unwrap();
        let w = vec![1.0 / 7.0; 7];
        let a = verblunsky_from_measure(&ang, &w).unwrap();
        let back = eigen_angles_oracle(&a).unwrap();
        for (x, y) in ang.as_slice().iter().zip(back.as_slice()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn carousel_examples() {
        let a = VerblunskyCoefficients::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.6, 0.8)]).unwrap();
        let car = carousel_path(&a);
        assert_eq!(car.centers[0], c(0.0, 0.0));
        assert!(car.centers[..3].iter().all(|b| b.norm() < 1e-15));
        assert!((car.terminal().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn affine_walk_examples() {
        let g = DeformedVerblunsky::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        let w = deformed_pipeline(&g).unwrap();
        assert!(w.points.iter().all(|p| p.x == 0.0 && p.y == 1.0));
        let g = DeformedVerblunsky::new(vec![c(0.0, 0.5), c(-1.0, 0.0)]).unwrap();
        let w = deformed_pipeline(&g).unwrap();
        assert!((w.points[1].x + 0.8).abs() < 1e-15);
        assert!((w.points[1].y - 0.6).abs() < 1e-15);
    }

    #[test]
    fn deformation_keeps_modulus() {
        let a = VerblunskyCoefficients::new(vec![c(0.3, -0.2), c(-0.5, 0.1), c(0.1, 0.4), c(0.0, 1.0)]).unwrap();
        let g = deform(&a).unwrap();
        for (x, y) in a.as_slice().iter().zip(g.as_slice()) {
            assert!((x.norm() - y.norm()).abs() < 1e-14);
        }
        let walk = deformed_pipeline(&g).unwrap();
        let car = carousel_path(&a);
        for (p, b) in walk.points.iter().zip(&car.centers) {
            let q = cayley_inv(DiskCoord { w: *b });
            assert!((p.x - q.x).abs() < 1e-10 && (p.y - q.y).abs() < 1e-10);
        }
    }

    #[test]
    fn single_atom_spectrum() {
        let a = VerblunskyCoefficients::new(vec![Complex64::from_polar(1.0, -0.7)]).unwrap();
        let op = unitary_dirac_operator(&UnitaryCoefficients::Standard(a)).unwrap();
        let s = eigenvalues(&op, (-10.0, 10.0), &SolverConfig::default()).unwrap();
        let want = [0.7 - TAU, 0.7, 0.7 + TAU];
        assert_eq!(s.len(), 3);
        for (x, y) in s.points.iter().zip(want) {
            assert!((x - y).abs() < 1e-10);
        }
        // an eigenvalue at 1 makes the boundary conditions parallel
        let a = VerblunskyCoefficients::new(vec![c(1.0, 0.0)]).unwrap();
        assert!(unitary_dirac_operator(&UnitaryCoefficients::Standard(a)).is_err());
    }

    #[test]
    fn unitary_spectrum_matches_angles() {
        let ang = EigenAngles::new(vec![-2.5, -0.9, 0.3, 1.1, 2.8]).unwrap();
        let a = verblunsky_from_measure(&ang, &[0.2; 5]).unwrap();
        let n = 5.0;
        let cfg = SolverConfig::default();
        let want: Vec<f64> = ang.as_slice().iter().map(|t| n * t).collect();
        for coeffs in [UnitaryCoefficients::Standard(a.clone()), UnitaryCoefficients::Deformed(deform(&a).unwrap())] {
            let op = unitary_dirac_operator(&coeffs).unwrap();
            let s = eigenvalues(&op, (-n * PI, n * PI), &cfg).unwrap();
            assert_eq!(s.len(), 5);
            for (x, y) in s.points.iter().zip(&want) {
                assert!((x - y).abs() < 1e-8, "{x} vs {y}");
            }
            let hs = hs_norm_squared(&op, &cfg).unwrap();
            let closed = spectral_hs_sum(&ang);
            assert!((hs - closed).abs() < 1e-8 * closed, "{hs} vs {closed}");
        }
    }
}
