use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use super::{path_rng, ModelParams};
use crate::dirac::{PointSample, Provenance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryConfig {
    /// Counting horizon; the noise covers twice this for the doubling check.
    pub horizon: f64,
    /// Noise resolution; the potential is constant on each step.
    pub step: f64,
    /// Canonical-system sub-steps per noise step.
    pub substeps: usize,
}

impl Default for AiryConfig {
    fn default() -> Self {
        AiryConfig { horizon: 12.0, step: 1e-3, substeps: 4 }
    }
}

/// Brownian increments of the soft-edge potential `t + (2/√β) B'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AiryNoise {
    pub beta: f64,
    pub seed: u64,
    pub config: AiryConfig,
    pub db: Vec<f64>,
}

impl AiryNoise {
    /// Potential on step `k`.
    fn potential(&self, k: usize) -> f64 {
        let h = self.config.step;
        (k as f64 + 0.5) * h + 2.0 / self.beta.sqrt() * self.db[k] / h
    }

    fn steps(&self, horizon: f64) -> usize {
        ((horizon / self.config.step).round() as usize).min(self.db.len())
    }
}

pub fn airy_noise(beta: f64, cfg: &AiryConfig, seed: u64) -> Result<AiryNoise> {
    ModelParams::airy(beta)?;
    if !(cfg.horizon > 0.0 && cfg.step > 0.0 && cfg.substeps > 0) {
        return Err(Error::InvalidInput("horizon, step and substeps must be positive".into()));
    }
    let n = (2.0 * cfg.horizon / cfg.step).round() as usize;
    let mut rng = path_rng(seed, 0);
    let sq = cfg.step.sqrt();
    let db = (0..n).map(|_| sq * rng.sample::<f64, _>(StandardNormal)).collect();
    Ok(AiryNoise { beta, seed, config: *cfg, db })
}

/// Exact propagator of `w'' = q w` over `h`: returns `(w, w')` at the end.
#[inline]
fn propagate(q: f64, h: f64, w: f64, dw: f64) -> (f64, f64) {
    if q > 0.0 {
        let o = q.sqrt();
        let (c, s) = ((o * h).cosh(), (o * h).sinh());
        (c * w + s / o * dw, o * s * w + c * dw)
    } else if q < 0.0 {
        let o = (-q).sqrt();
        let (s, c) = (o * h).sin_cos();
        (c * w + s / o * dw, -o * s * w + c * dw)
    } else {
        (w + h * dw, dw)
    }
}

/// Signed number of blow-ups of `r' = λ(r u₁ + u₂)²` on `[0, horizon]`.
///
/// Writing `r = -cot α`, blow-ups are the passages of `α` through `πℤ`. With
/// `α* = atan2(u₁, u₂)` the offset `β = α - α*` obeys
/// `β' = λ|u|² sin²β + 1/|u|²`, which is split into the exact frozen-`u` flow
/// (`cot β` decreases by `λ|u|²h`) and the drift of `α*`. `β` is stored as its
/// cell index and cotangent so that offsets far below machine precision
/// relative to `π` survive, which the growth of `u` makes routine.
fn canonical_count(noise: &AiryNoise, lambda: f64, horizon: f64) -> i64 {
    let m = noise.config.substeps;
    let h = noise.config.step;
    let hs = h / m as f64;
    let (mut u1, mut du1, mut u2, mut du2) = (1.0, 0.0, 0.0, 1.0);
    // β = kπ + arccot(c); β(0) = 0⁺
    let mut k = 0i64;
    let mut c = f64::INFINITY;
    let mut drift = 0.0;
    let shift = |k: &mut i64, c: &mut f64, d: f64| {
        if c.is_infinite() {
            *c = 1.0 / d.tan();
            return;
        }
        let den = 1.0 + *c * d;
        if den <= 0.0 {
            *k += 1;
        }
        *c = (*c - d) / den;
    };
    for step in 0..noise.steps(horizon) {
        let q = noise.potential(step);
        for j in 0..m {
            let mid = (j as f64 + 0.5) * hs;
            let (a, _) = propagate(q, mid, u1, du1);
            let (b, _) = propagate(q, mid, u2, du2);
            let n2 = a * a + b * b;
            let d = hs / n2;
            shift(&mut k, &mut c, 0.5 * d);
            if c.is_finite() {
                c -= lambda * n2 * hs;
            }
            shift(&mut k, &mut c, 0.5 * d);
            drift += d;
        }
        (u1, du1) = propagate(q, h, u1, du1);
        (u2, du2) = propagate(q, h, u2, du2);
    }
    let b = if c.is_infinite() { 0.0 } else { 1.0f64.atan2(c) };
    let alpha = FRAC_PI_2 + k as f64 * PI + b - drift;
    if lambda > 0.0 {
        (alpha / PI).floor() as i64 - 1
    } else if lambda < 0.0 {
        (alpha / PI).ceil() as i64 - 1
    } else {
        0
    }
}

/// Prüfer angle `θ` with `w = ρ sin θ`, `w' = ρ cos θ`, advanced over one step of
/// `w'' = q w` with the lift kept exact.
fn advance_angle(theta: f64, q: f64, h: f64) -> f64 {
    if q < 0.0 {
        // in scaled coordinates (ω w, w') the motion is a rotation by ω h
        let o = (-q).sqrt();
        let k = (theta / PI).floor();
        let r = theta - k * PI;
        let scaled = k * PI + (o * r.sin()).atan2(r.cos()) + o * h;
        let k2 = (scaled / PI).floor();
        let r2 = scaled - k2 * PI;
        k2 * PI + r2.sin().atan2(o * r2.cos())
    } else {
        let (s, c) = theta.sin_cos();
        let (w, dw) = propagate(q, h, s, c);
        let raw = w.atan2(dw);
        // non-oscillatory: the angle moves by less than π/2 over a step
        raw + ((theta - raw) / PI).round() * PI
    }
}

/// Relative oscillation count on `[0, horizon]` from Prüfer angles of the
/// Dirichlet solution at `λ` and the Neumann solution at `0`.
fn pruefer_count(noise: &AiryNoise, lambda: f64, horizon: f64) -> i64 {
    let h = noise.config.step;
    let (mut tv, mut tu) = (0.0, FRAC_PI_2);
    for k in 0..noise.steps(horizon) {
        let q = noise.potential(k);
        tv = advance_angle(tv, q - lambda, h);
        tu = advance_angle(tu, q, h);
    }
    let d = tv - tu;
    if lambda > 0.0 {
        (d / PI).floor() as i64
    } else if lambda < 0.0 {
        (d / PI).ceil() as i64
    } else {
        0
    }
}

fn with_doubling(noise: &AiryNoise, f: impl Fn(f64) -> i64) -> Result<i64> {
    let t = noise.config.horizon;
    let (a, b) = (f(t), f(2.0 * t));
    if a == b {
        Ok(a)
    } else {
        Err(Error::HorizonTooShort(a, b))
    }
}

/// Soft-edge counting function from the canonical system.
///
/// Normalized so that `N(b) - N(a)` is the number of points in `(a, b]`;
/// `N(0)` is minus the number of Neumann eigenvalues at or below 0, which is
/// random, so only differences are meaningful.
pub fn airy_counting(noise: &AiryNoise, lambda: f64) -> Result<i64> {
    with_doubling(noise, |t| canonical_count(noise, lambda, t))
}

/// Same count by Sturm comparison of Prüfer angles on the identical noise.
pub fn riccati_oracle(noise: &AiryNoise, lambda: f64) -> Result<i64> {
    with_doubling(noise, |t| pruefer_count(noise, lambda, t))
}

/// Points of the soft-edge process in `(a, b]`, located to `tol` by bisecting the count.
pub fn airy_points(noise: &AiryNoise, window: (f64, f64), tol: f64) -> Result<PointSample> {
    let (a, b) = window;
    if !(a < b && a.is_finite() && b.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!("bad window [{a}, {b}] or tolerance {tol}")));
    }
    let mut out = Vec::new();
    let mut stack = vec![(a, b, airy_counting(noise, a)?, airy_counting(noise, b)?)];
    while let Some((lo, hi, nlo, nhi)) = stack.pop() {
        if nhi <= nlo {
            continue;
        }
        if hi - lo <= tol {
            out.extend(std::iter::repeat_n(0.5 * (lo + hi), (nhi - nlo) as usize));
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let nm = airy_counting(noise, mid)?;
        stack.push((lo, mid, nlo, nm));
        stack.push((mid, hi, nm, nhi));
    }
    let grid = format!("step={:e},horizon={}", noise.config.step, noise.config.horizon);
    Ok(PointSample::new(out, window, Provenance::new("airy", Some(noise.seed), Some(grid))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn propagator_matches_closed_forms() {
        let (w, dw) = propagate(-4.0, 0.3, 1.0, 0.0);
        assert!((w - 0.6f64.cos()).abs() < 1e-15 && (dw + 2.0 * 0.6f64.sin()).abs() < 1e-15);
        let (w, _) = propagate(1.0, 0.5, 0.0, 1.0);
        assert!((w - 0.5f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn angle_rotation_is_exact() {
        // w'' = -w: the angle of (sin, cos) advances by h
        let mut th = 0.1;
        for _ in 0..1000 {
            th = advance_angle(th, -1.0, 0.01);
        }
        assert!((th - 10.1).abs() < 1e-9);
    }

    #[test]
    fn deep_negative_lambda_counts_zero() {
        let n = airy_noise(2.0, &AiryConfig::default(), 3).unwrap();
        assert_eq!(airy_counting(&n, -30.0).unwrap(), 0);
        assert_eq!(riccati_oracle(&n, -30.0).unwrap(), 0);
    }

    #[test]
    fn counts_agree() {
        let n = airy_noise(4.0, &AiryConfig::default(), 5).unwrap();
        let mut last = 0;
        for lambda in [-5.0, -1.0, 0.5, 2.0, 4.0, 6.0] {
            let a = airy_counting(&n, lambda).unwrap();
            let b = riccati_oracle(&n, lambda).unwrap();
            assert_eq!(a, b, "λ = {lambda}");
            assert!(a >= last);
            last = a;
        }
        assert!(last > 0);
    }

    #[test]
    fn points_match_count_differences() {
        let n = airy_noise(2.0, &AiryConfig::default(), 8).unwrap();
        let p = airy_points(&n, (-2.0, 6.0), 1e-6).unwrap();
        let want = airy_counting(&n, 6.0).unwrap() - airy_counting(&n, -2.0).unwrap();
        assert_eq!(p.len() as i64, want);
        for x in &p.points {
            assert_eq!(airy_counting(&n, x + 1e-5).unwrap() - airy_counting(&n, x - 1e-5).unwrap(), 1);
        }
    }

    #[test]
    fn deterministic_limit_counts_airy_zeros() {
        // -d² + x with Dirichlet at 0: eigenvalues 2.3381, 4.0879, 5.5206
        let n = airy_noise(1e12, &AiryConfig::default(), 1).unwrap();
        for (l, want) in [(-1.0, 0), (1e-3, 0), (2.3, 0), (2.4, 1), (4.0, 1), (4.1, 2), (5.5, 2), (5.6, 3)] {
            assert_eq!(airy_counting(&n, l).unwrap(), want, "λ = {l}");
            assert_eq!(riccati_oracle(&n, l).unwrap(), want, "λ = {l}");
        }
    }

    #[test]
    fn count_is_continuous_at_zero() {
        for seed in 0..8 {
            let n = airy_noise(1.0, &AiryConfig::default(), seed).unwrap();
            let (a, b) = (airy_counting(&n, -1e-9).unwrap(), airy_counting(&n, 1e-9).unwrap());
            assert_eq!(a, b, "seed {seed}");
            assert_eq!(b, riccati_oracle(&n, 1e-9).unwrap());
        }
    }
}
