use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{PI, TAU};

use super::path_rng;
use crate::error::{Error, Result};
use crate::szego::{DeformedVerblunsky, VerblunskyCoefficients};

/// Attempts allowed for one coefficient before giving up.
pub const HP_STALL_LIMIT: u64 = 10_000_000;

/// Second Beta parameter of `|α_k|²`.
pub(crate) fn beta_shape(n: usize, k: usize, beta: f64) -> f64 {
    beta * (n - k - 1) as f64 / 2.0
}

fn check(n: usize, beta: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

/// `U ∈ (0, 1]`.
fn open_uniform<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// `r` with `r² ~ Beta(1, s)` by inversion.
fn radius<R: Rng>(rng: &mut R, s: f64) -> f64 {
    (1.0 - open_uniform(rng).powf(1.0 / s)).sqrt()
}

pub fn circular_beta_coeffs_with<R: Rng>(n: usize, beta: f64, rng: &mut R) -> Result<VerblunskyCoefficients> {
    check(n, beta)?;
    let mut out = Vec::with_capacity(n);
    for k in 0..n - 1 {
        let r = radius(rng, beta_shape(n, k, beta));
        let th = TAU * rng.random::<f64>();
        out.push(Complex64::from_polar(r, th));
    }
    out.push(Complex64::from_polar(1.0, TAU * rng.random::<f64>()));
    VerblunskyCoefficients::new(out)
}

/// Killip–Nenciu coefficients of the circular β-ensemble.
pub fn circular_beta_coeffs(n: usize, beta: f64, seed: u64) -> Result<VerblunskyCoefficients> {
    circular_beta_coeffs_with(n, beta, &mut path_rng(seed, 0))
}

/// `ln Γ(z)` for `Re z > 0` (Lanczos, g = 7).
fn ln_gamma(z: Complex64) -> Complex64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let z = z - 1.0;
    let mut x = Complex64::new(C[0], 0.0);
    for (i, c) in C.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Weight `|(1-z)^{δ̄}|²` and its circle averages.
struct HpWeight {
    a: f64,
    b: f64,
    delta: Complex64,
    /// Average over the unit circle, the supremum of the radial averages.
    h_one: f64,
}

impl HpWeight {
    fn new(delta: Complex64) -> Self {
        let a = delta.re;
        let h_one = (ln_gamma(Complex64::new(1.0 + 2.0 * a, 0.0)) - 2.0 * ln_gamma(1.0 + delta).re).re.exp();
        HpWeight { a, b: delta.im, delta, h_one }
    }

    fn at(&self, z: Complex64) -> f64 {
        let w = Complex64::new(1.0, 0.0) - z;
        (2.0 * (self.a * w.norm().ln() + self.b * w.arg())).exp()
    }

    /// `(1/2π)∫ h(re^{iθ}) dθ = Σ |(-δ)_m/m!|² r^{2m}`.
    fn radial_mean(&self, r: f64) -> f64 {
        let r2 = r * r;
        let (mut c, mut p) = (1.0, 1.0);
        let (mut sum, mut sum_one) = (1.0, 1.0);
        let mut m = 0.0;
        while m < 2.0e6 {
            c *= (Complex64::new(m, 0.0) - self.delta).norm_sqr() / ((m + 1.0) * (m + 1.0));
            p *= r2;
            m += 1.0;
            sum += c * p;
            sum_one += c;
            if c * p < 1e-17 * sum && (p < 1e-3 || c < 1e-300) {
                return sum;
            }
        }
        // remaining terms bounded through the full-circle sum
        sum + p * (self.h_one - sum_one).max(0.0)
    }

    /// Bound for `h` on the circle of radius `r`.
    fn envelope(&self, r: f64) -> f64 {
        let modulus = if self.a >= 0.0 { (1.0 + r).powf(2.0 * self.a) } else { (1.0 - r).powf(2.0 * self.a) };
        modulus * (2.0 * self.b.abs() * r.min(1.0).asin()).exp()
    }
}

fn stall(tries: u64) -> Result<()> {
    if tries > HP_STALL_LIMIT {
        Err(Error::RejectionStall(tries))
    } else {
        Ok(())
    }
}

fn hp_interior<R: Rng>(w: &HpWeight, s: f64, plain: bool, rng: &mut R) -> Result<Complex64> {
    let mut tries = 0u64;
    let r = loop {
        tries += 1;
        stall(tries)?;
        let r = radius(rng, s);
        if plain || rng.random::<f64>() * w.h_one <= w.radial_mean(r) {
            break r;
        }
    };
    loop {
        tries += 1;
        stall(tries)?;
        let z = Complex64::from_polar(r, TAU * rng.random::<f64>());
        if plain || rng.random::<f64>() * w.envelope(r) <= w.at(z) {
            return Ok(z);
        }
    }
}

/// Last coefficient: density `∝ (2 sin(θ/2))^{2a} e^{b(θ-π)}` on the circle.
fn hp_last<R: Rng>(w: &HpWeight, plain: bool, rng: &mut R) -> Result<Complex64> {
    if plain {
        return Ok(Complex64::from_polar(1.0, TAU * rng.random::<f64>()));
    }
    let (a, b) = (w.a, w.b);
    let tilt = (b.abs() * PI).exp();
    let mut tries = 0u64;
    loop {
        tries += 1;
        stall(tries)?;
        if a >= 0.0 {
            let th = TAU * rng.random::<f64>();
            let target = (2.0 * (th / 2.0).sin()).powf(2.0 * a) * (b * (th - PI)).exp();
            if rng.random::<f64>() * 2f64.powf(2.0 * a) * tilt <= target {
                return Ok(Complex64::from_polar(1.0, th));
            }
        } else {
            // distance m to the singular point 1 drawn with density ∝ m^{2a} on (0, π]
            let m = PI * open_uniform(rng).powf(1.0 / (2.0 * a + 1.0));
            let th = if rng.random::<bool>() { m } else { TAU - m };
            let ratio = (2.0 * (m / 2.0).sin() / m).powf(2.0 * a) * (b * (th - PI)).exp();
            if rng.random::<f64>() * (2.0 / PI).powf(2.0 * a) * tilt <= ratio {
                return Ok(Complex64::from_polar(1.0, th));
            }
        }
    }
}

pub fn hua_pickrell_coeffs_with<R: Rng>(
    n: usize,
    beta: f64,
    delta: Complex64,
    rng: &mut R,
) -> Result<DeformedVerblunsky> {
    check(n, beta)?;
    if !(delta.re > -0.5 && delta.is_finite()) {
        return Err(Error::InvalidInput(format!("Re delta must exceed -1/2, got {delta}")));
    }
    let plain = delta == Complex64::new(0.0, 0.0);
    let w = HpWeight::new(delta);
    let mut out = Vec::with_capacity(n);
    for k in 0..n - 1 {
        out.push(hp_interior(&w, beta_shape(n, k, beta), plain, rng)?);
    }
    let last = hp_last(&w, plain, rng)?;
    if (last - 1.0).norm() < 1e-12 {
        // measure zero event; the deformed recursion needs γ ≠ 1
        return Err(Error::DenominatorBlowup(n - 1));
    }
    out.push(last);
    DeformedVerblunsky::new(out)
}

/// Deformed coefficients of the circular Jacobi ensemble.
pub fn hua_pickrell_coeffs(n: usize, beta: f64, delta: Complex64, seed: u64) -> Result<DeformedVerblunsky> {
    hua_pickrell_coeffs_with(n, beta, delta, &mut path_rng(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_parameter() {
        assert_eq!(beta_shape(4, 0, 2.0), 3.0);
        let a = circular_beta_coeffs(5, 2.0, 1).unwrap();
        assert_eq!(a.as_slice()[4].norm(), 1.0);
    }

    #[test]
    fn mean_of_first_modulus() {
        let (n, beta) = (6, 1.5);
        let mut rng = path_rng(11, 0);
        let m = 20_000;
        let mut sum = 0.0;
        for _ in 0..m {
            sum += circular_beta_coeffs_with(n, beta, &mut rng).unwrap().as_slice()[0].norm_sqr();
        }
        let s = beta_shape(n, 0, beta);
        let mean = 1.0 / (1.0 + s);
        let sd = (s / ((1.0 + s) * (1.0 + s) * (2.0 + s))).sqrt() / (m as f64).sqrt();
        assert!((sum / m as f64 - mean).abs() < 4.0 * sd);
    }

    #[test]
    fn zero_delta_reproduces_circular_stream() {
        let a = circular_beta_coeffs(8, 2.0, 5).unwrap();
        let g = hua_pickrell_coeffs(8, 2.0, Complex64::new(0.0, 0.0), 5).unwrap();
        assert_eq!(a.as_slice(), g.as_slice());
    }

    #[test]
    fn gamma_values() {
        assert!((ln_gamma(Complex64::new(5.0, 0.0)).re - 24f64.ln()).abs() < 1e-12);
        // |Γ(1 + i)|² = π / sinh π
        let v = (2.0 * ln_gamma(Complex64::new(1.0, 1.0)).re).exp();
        assert!((v - PI / PI.sinh()).abs() < 1e-12);
    }

    #[test]
    fn radial_mean_matches_quadrature() {
        let w = HpWeight::new(Complex64::new(0.3, -0.4));
        for r in [0.2, 0.7, 0.95] {
            let m = 20_000;
            let q: f64 = (0..m).map(|j| w.at(Complex64::from_polar(r, TAU * (j as f64 + 0.5) / m as f64))).sum::<f64>()
                / m as f64;
            assert!((q - w.radial_mean(r)).abs() < 1e-9 * q, "{r}: {q} vs {}", w.radial_mean(r));
            assert!(w.radial_mean(r) <= w.h_one);
        }
        let w = HpWeight::new(Complex64::new(-0.3, 0.0));
        // Γ(0.4)/Γ(0.7)²
        let want = (statrs::function::gamma::ln_gamma(0.4) - 2.0 * statrs::function::gamma::ln_gamma(0.7)).exp();
        assert!((w.h_one - want).abs() < 1e-12);
    }

    fn circle_mean_cos(delta: Complex64) -> f64 {
        let w = HpWeight::new(delta);
        let m = 200_000;
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..m {
            let th = TAU * (j as f64 + 0.5) / m as f64;
            let d = w.at(Complex64::from_polar(1.0, th));
            num += d * th.cos();
            den += d;
        }
        num / den
    }

    #[test]
    fn last_coefficient_law() {
        for delta in [Complex64::new(0.4, 0.3), Complex64::new(-0.3, -0.2)] {
            let w = HpWeight::new(delta);
            let mut rng = path_rng(3, 0);
            let m = 40_000;
            let xs: Vec<f64> = (0..m).map(|_| hp_last(&w, false, &mut rng).unwrap().re).collect();
            let mean = xs.iter().sum::<f64>() / m as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m as f64;
            let want = circle_mean_cos(delta);
            assert!((mean - want).abs() < 4.0 * (var / m as f64).sqrt(), "{delta}: {mean} vs {want}");
        }
    }

    #[test]
    fn interior_coefficient_law() {
        let delta = Complex64::new(0.6, 0.5);
        let w = HpWeight::new(delta);
        let s = 1.0;
        // E[Re γ] under (1-|z|²)^{s-1} h(z) by polar quadrature
        let (nr, nt) = (400, 400);
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..nr {
            let r = (i as f64 + 0.5) / nr as f64;
            for j in 0..nt {
                let z = Complex64::from_polar(r, TAU * (j as f64 + 0.5) / nt as f64);
                let d = r * (1.0 - r * r).powf(s - 1.0) * w.at(z);
                num += d * z.re;
                den += d;
            }
        }
        let want = num / den;
        let mut rng = path_rng(9, 0);
        let m = 40_000;
        let xs: Vec<f64> = (0..m).map(|_| hp_interior(&w, s, false, &mut rng).unwrap().re).collect();
        let mean = xs.iter().sum::<f64>() / m as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m as f64;
        assert!((mean - want).abs() < 4.0 * (var / m as f64).sqrt(), "{mean} vs {want}");
    }
}
