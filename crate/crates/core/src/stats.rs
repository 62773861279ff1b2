//! Point-process statistics for the validation harness.

use serde::{Deserialize, Serialize};

use crate::dirac::PointSample;
use crate::error::{Error, Result};

/// Fraction of the window dropped on each side before taking gaps.
pub const DEFAULT_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSample {
    pub gaps: Vec<f64>,
}

impl GapSample {
    /// Consecutive differences of the points inside the window shrunk by
    /// `margin · |window|` on both sides.
    pub fn from_sample(s: &PointSample, margin: f64) -> Result<Self> {
        Self::pooled(std::slice::from_ref(s), margin)
    }

    pub fn pooled(samples: &[PointSample], margin: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&margin) {
            return Err(Error::InvalidInput(format!("margin must lie in [0, 1/2), got {margin}")));
        }
        let mut gaps = Vec::new();
        for s in samples {
            let (a, b) = s.window;
            let (lo, hi) = (a + margin * (b - a), b - margin * (b - a));
            let inner: Vec<f64> = s.points.iter().copied().filter(|p| *p >= lo && *p <= hi).collect();
            gaps.extend(inner.windows(2).map(|w| w[1] - w[0]).filter(|g| *g > 0.0));
        }
        Ok(GapSample { gaps })
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityEstimate {
    pub window: (f64, f64),
    /// Mean number of points per unit length.
    pub mean: f64,
    pub standard_error: f64,
    pub paths: usize,
}

impl IntensityEstimate {
    /// Distance of `target` from the estimate in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target) / self.standard_error
    }
}

/// Mean count per unit length over `[a, b)` with its Monte Carlo standard error.
pub fn intensity_estimate(samples: &[PointSample], window: (f64, f64)) -> Result<IntensityEstimate> {
    let (a, b) = window;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput(format!("bad window [{a}, {b})")));
    }
    if samples.len() < 2 {
        return Err(Error::InvalidInput("need at least two samples for a standard error".into()));
    }
    if let Some(s) = samples.iter().find(|s| s.window.0 > a || s.window.1 < b) {
        return Err(Error::WindowMismatch(format!(
            "sample window [{}, {}] does not cover [{a}, {b})",
            s.window.0, s.window.1
        )));
    }
    let counts: Vec<f64> =
        samples.iter().map(|s| s.points.iter().filter(|p| **p >= a && **p < b).count() as f64).collect();
    intensity_from_counts(&counts, window)
}

/// Same estimate from per-path counts already taken over `window`.
pub fn intensity_from_counts(counts: &[f64], window: (f64, f64)) -> Result<IntensityEstimate> {
    let (a, b) = window;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput(format!("bad window [{a}, {b})")));
    }
    if counts.len() < 2 {
        return Err(Error::InvalidInput("need at least two samples for a standard error".into()));
    }
    let len = b - a;
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / n / len;
    let var = counts.iter().map(|c| (c / len - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(IntensityEstimate { window, mean, standard_error: (var / n).sqrt(), paths: counts.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub threshold: f64,
    pub alpha: f64,
    pub reject: bool,
}

/// Asymptotic Kolmogorov constant `c(α) = √(-ln(α/2)/2)`.
pub fn ks_constant(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

fn sorted(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::InvalidInput("empty sample".into()));
    }
    if v.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidInput("sample contains NaN".into()));
    }
    let mut v = v.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    Ok(v)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Two-sample Kolmogorov–Smirnov test with threshold `c(α)√((m+n)/(mn))`.
pub fn ks_two_sample(a: &[f64], b: &[f64], alpha: f64) -> Result<KsResult> {
    check_alpha(alpha)?;
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (m, n) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < m && j < n {
        let x = a[i].min(b[j]);
        while i < m && a[i] <= x {
            i += 1;
        }
        while j < n && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / m as f64 - j as f64 / n as f64).abs());
    }
    let (mf, nf) = (m as f64, n as f64);
    let threshold = ks_constant(alpha) * ((mf + nf) / (mf * nf)).sqrt();
    Ok(KsResult { statistic: d, threshold, alpha, reject: d > threshold })
}

/// One-sample test against a continuous CDF, threshold `c(α)/√n`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F, alpha: f64) -> Result<KsResult> {
    check_alpha(alpha)?;
    let s = sorted(sample)?;
    let n = s.len() as f64;
    let d = s
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let threshold = ks_constant(alpha) / n.sqrt();
    Ok(KsResult { statistic: d, threshold, alpha, reject: d > threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::Provenance;
    use std::f64::consts::PI;

    fn lattice() -> PointSample {
        let pts = (-5..5).map(|k| PI + 2.0 * PI * k as f64).collect();
        PointSample::new(pts, (-20.0, 20.0), Provenance::default())
    }

    #[test]
    fn lattice_intensity() {
        let e = intensity_estimate(&[lattice(), lattice()], (-20.0, 20.0)).unwrap();
        assert!((e.mean - 0.15).abs() < 1e-15);
        assert_eq!(e.standard_error, 0.0);
    }

    #[test]
    fn intensity_guards() {
        assert!(matches!(intensity_estimate(&[lattice()], (-20.0, 20.0)), Err(Error::InvalidInput(_))));
        assert!(matches!(intensity_estimate(&[lattice(), lattice()], (-30.0, 20.0)), Err(Error::WindowMismatch(_))));
    }

    #[test]
    fn ks_extremes() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_two_sample(&a, &a, 0.01).unwrap().statistic, 0.0);
        let r = ks_two_sample(&a, &[10.0, 11.0], 0.5).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!(r.reject);
    }

    #[test]
    fn ks_constant_value() {
        // c(0.05) ≈ 1.358
        assert!((ks_constant(0.05) - 1.3581).abs() < 1e-4);
    }

    #[test]
    fn one_sample_uniform() {
        let s: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let r = ks_one_sample(&s, |x| x.clamp(0.0, 1.0), 0.01).unwrap();
        assert!((r.statistic - 0.0005).abs() < 1e-12);
        assert!(!r.reject);
    }

    #[test]
    fn lattice_gaps() {
        let g = GapSample::from_sample(&lattice(), DEFAULT_MARGIN).unwrap();
        // inner window [-16, 16] holds ±π, ±3π, ±5π
        assert_eq!(g.len(), 5);
        assert!(g.gaps.iter().all(|x| (x - 2.0 * PI).abs() < 1e-12));
    }
}
