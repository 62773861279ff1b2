use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::path_rng;
use crate::dirac::{DiracOperator, DrivingPath, EndpointClass, Provenance};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, PlanePoint};

/// Weight of the noise clock in the blended coordinate `ξ = (1 - e^{-s}) + κ s`
/// the log grid is uniform in; keeps the tail cells bounded in `s`.
const TAIL_WEIGHT: f64 = 1.0 / 200.0;

/// Noise-clock values of the log grid with `n` cells: nodes uniform in the
/// blended coordinate `ξ`, ending at `-log ε`.
pub(crate) fn log_clock(eps: f64, n: usize) -> Vec<f64> {
    let s_end = -eps.ln();
    let xi = |s: f64| -(-s).exp_m1() + TAIL_WEIGHT * s;
    let xi_end = xi(s_end);
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut s = 0.0;
    for k in 1..n {
        let target = xi_end * k as f64 / n as f64;
        // concave increasing: Newton from the left converges monotonically
        for _ in 0..60 {
            let step = (target - xi(s)) / ((-s).exp() + TAIL_WEIGHT);
            s += step;
            if step.abs() < 1e-15 * s.max(1.0) {
                break;
            }
        }
        out.push(s);
    }
    out.push(s_end);
    out
}

/// Relative height below which a limit point path is cut.
const LP_DEPTH_FLOOR: f64 = 1e-8;

/// Fine step used when extending a path past the horizon to locate `q`.
const EXTENSION_STEP: f64 = 1.0 / 160.0;
const EXTENSION_MAX: f64 = 2000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeChange {
    Identity,
    /// `t ↦ -log(1 - t)`, mapping `[0, 1)` onto `[0, ∞)`.
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub cells: usize,
    pub time_change: TimeChange,
    /// Distance from the singular endpoint where the log grid stops.
    pub eps: f64,
    /// Noise sub-steps per cell.
    pub refinement: usize,
}

impl GridSpec {
    pub fn log(cells: usize) -> Self {
        GridSpec { cells, time_change: TimeChange::Log, eps: 1e-10, refinement: 16 }
    }

    pub fn identity(cells: usize) -> Self {
        GridSpec { cells, time_change: TimeChange::Identity, eps: 1e-10, refinement: 16 }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_refinement(mut self, r: usize) -> Self {
        self.refinement = r;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells < 2 {
            return Err(Error::InvalidInput("grid needs at least 2 cells".into()));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidInput(format!("grid eps must lie in (0, 1), got {}", self.eps)));
        }
        if self.refinement == 0 {
            return Err(Error::InvalidInput("refinement must be at least 1".into()));
        }
        Ok(())
    }

    /// Cell nodes in the operator clock `t` and the noise clock `s`.
    pub fn nodes(&self, horizon: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        self.validate()?;
        match self.time_change {
            TimeChange::Identity => {
                if !(horizon > 0.0 && horizon.is_finite()) {
                    return Err(Error::InvalidInput(format!("bad horizon {horizon}")));
                }
                let t: Vec<f64> = (0..=self.cells).map(|k| horizon * k as f64 / self.cells as f64).collect();
                Ok((t.clone(), t))
            }
            TimeChange::Log => {
                if horizon != 1.0 {
                    return Err(Error::InvalidInput("log time change lives on [0, 1)".into()));
                }
                let s_nodes = log_clock(self.eps, self.cells);
                let t = s_nodes.iter().map(|s| -(-s).exp_m1()).collect();
                Ok((t, s_nodes))
            }
        }
    }
}

/// Coefficients of `dy = (γ₁dt + α₁dB₁) y`, `dx = (γ₂dt + α₂dB₂) y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl AffineParams {
    pub fn sine(beta: f64) -> Self {
        let a = (4.0 / beta).sqrt();
        AffineParams { alpha1: a, alpha2: a, gamma1: 0.0, gamma2: 0.0 }
    }

    /// Hard edge row of the classification table. The Bessel operator itself
    /// is built from the explicit exponent, see [`super::bessel_operator`].
    pub fn bessel(beta: f64, a: f64) -> Self {
        AffineParams { alpha1: (8.0 / beta).sqrt(), alpha2: 0.0, gamma1: 2.0 * a + 1.0 - 4.0 / beta, gamma2: 0.0 }
    }

    pub fn hua_pickrell(beta: f64, delta: Complex64) -> Self {
        let a = (4.0 / beta).sqrt();
        AffineParams { alpha1: a, alpha2: a, gamma1: -4.0 / beta * delta.re, gamma2: 4.0 / beta * delta.im }
    }

    /// Standard hyperbolic Brownian motion.
    pub fn standard() -> Self {
        AffineParams { alpha1: 1.0, alpha2: 1.0, gamma1: 0.0, gamma2: 0.0 }
    }

    /// Exponential decay rate of `y`; positive when the path exits to the boundary.
    pub fn decay_rate(&self) -> f64 {
        self.alpha1 * self.alpha1 / 2.0 - self.gamma1
    }
}

/// Gaussian increments on the fine noise grid, replayable by seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseRecord {
    pub seed: u64,
    /// Fine grid in the noise clock.
    pub s: Vec<f64>,
    pub db1: Vec<f64>,
    pub db2: Vec<f64>,
}

impl NoiseRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: NoiseRecord = serde_json::from_str(s)?;
        if r.db1.len() + 1 != r.s.len() || r.db2.len() != r.db1.len() {
            return Err(Error::InvalidInput("noise record lengths disagree".into()));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdePath {
    /// Cell nodes in the operator clock.
    pub t: Vec<f64>,
    /// Cell nodes in the noise clock.
    pub s: Vec<f64>,
    /// Value at the middle of each cell.
    pub values: Vec<PlanePoint>,
    /// `x` and `y` at the cell nodes.
    pub nodes: Vec<PlanePoint>,
    /// Boundary limit `q = x(∞)` estimated by extending the simulation.
    pub q: f64,
    /// Rough size of the part of `x(∞) - x` left after the extension.
    pub q_uncertainty: f64,
    pub noise: NoiseRecord,
    /// Index into the noise record where the extension past the horizon starts.
    pub extension_start: usize,
}

impl SdePath {
    pub fn driving_path(&self) -> Result<DrivingPath> {
        DrivingPath::piecewise_constant(self.t.clone(), self.values.clone())
    }
}

pub fn affine_bm_path(params: &AffineParams, horizon: f64, grid: &GridSpec, seed: u64) -> Result<SdePath> {
    let (t, s_nodes) = grid.nodes(horizon)?;
    let mut rng = path_rng(seed, 0);
    let sub = grid.refinement;
    let cells = t.len() - 1;
    let AffineParams { alpha1, alpha2, gamma1, gamma2 } = *params;
    let drift = gamma1 - alpha1 * alpha1 / 2.0;

    let mut fine_s = Vec::with_capacity(cells * sub + 1);
    let mut db1 = Vec::with_capacity(cells * sub);
    let mut db2 = Vec::with_capacity(cells * sub);
    fine_s.push(0.0);
    let (mut b1, mut x, mut y) = (0.0, 0.0, 1.0);
    let mut values = Vec::with_capacity(cells);
    let mut nodes = vec![PlanePoint { x, y }];
    let mut step = |rng: &mut rand_chacha::ChaCha8Rng, s0: f64, s1: f64, b1: &mut f64, x: &mut f64, y: &mut f64| {
        let ds = s1 - s0;
        let sq = ds.sqrt();
        let n1: f64 = rng.sample(StandardNormal);
        let n2: f64 = rng.sample(StandardNormal);
        let (d1, d2) = (sq * n1, sq * n2);
        *x += *y * (gamma2 * ds + alpha2 * d2);
        *b1 += d1;
        *y = (alpha1 * *b1 + drift * s1).exp();
        db1.push(d1);
        db2.push(d2);
        fine_s.push(s1);
    };
    for k in 0..cells {
        let (s0, s1) = (s_nodes[k], s_nodes[k + 1]);
        for j in 0..sub {
            if j == sub / 2 {
                values.push(PlanePoint { x, y });
            }
            let a = s0 + (s1 - s0) * j as f64 / sub as f64;
            let b = if j + 1 == sub { s1 } else { s0 + (s1 - s0) * (j + 1) as f64 / sub as f64 };
            step(&mut rng, a, b, &mut b1, &mut x, &mut y);
        }
        nodes.push(PlanePoint { x, y });
    }
    if values.iter().chain(&nodes).any(|p| !(p.y > 0.0 && p.x.is_finite())) {
        return Err(Error::InvalidInput("path underflowed; increase grid eps".into()));
    }
    let extension_start = cells * sub;
    let rate = params.decay_rate();
    let mut s = *s_nodes.last().unwrap();
    if alpha2 != 0.0 || gamma2 != 0.0 {
        let s_stop = s + EXTENSION_MAX;
        while y >= 1e-8 * x.abs().max(1.0) && s < s_stop {
            step(&mut rng, s, s + EXTENSION_STEP, &mut b1, &mut x, &mut y);
            s += EXTENSION_STEP;
        }
    }
    let q_uncertainty = if alpha2 == 0.0 && gamma2 == 0.0 {
        0.0
    } else if rate > 0.0 {
        alpha2.abs() * y / (2.0 * rate).sqrt() + gamma2.abs() * y / rate
    } else {
        f64::INFINITY
    };
    Ok(SdePath {
        t,
        s: s_nodes,
        values,
        nodes,
        q: x,
        q_uncertainty,
        noise: NoiseRecord { seed, s: fine_s, db1, db2 },
        extension_start,
    })
}

fn operator_from(path: &SdePath, class: EndpointClass, prov: Provenance) -> Result<DiracOperator> {
    if !path.q.is_finite() {
        return Err(Error::InvalidInput("boundary limit is not finite".into()));
    }
    let mut dp = path.driving_path()?;
    if class == EndpointClass::LimitPoint {
        // Past this depth the phase cannot tell boundary points near q apart in
        // double precision, and a limit point tail carries no further information.
        let floor = LP_DEPTH_FLOOR * path.q.abs().max(1.0);
        if let Some(k) = path.values.iter().position(|p| p.y < floor) {
            dp = dp.truncated(path.t[k.max(2)])?;
        }
    }
    let dp = dp.with_boundary_limit(BoundaryPoint::Real(path.q)).with_tail_rule(class);
    Ok(DiracOperator::with_boundary_points(dp, BoundaryPoint::Infinity, BoundaryPoint::Real(path.q))?.with_provenance(prov))
}

fn grid_label(grid: &GridSpec) -> Option<String> {
    Some(format!("cells={},eps={:e},refinement={}", grid.cells, grid.eps, grid.refinement))
}

/// `Dir(x̃ + iỹ, ∞, q)` on `[0, 1)` driven by hyperbolic Brownian motion with variance `4/β`.
pub fn sine_beta_operator(beta: f64, grid: &GridSpec, seed: u64) -> Result<DiracOperator> {
    super::ModelParams::sine(beta)?;
    if grid.time_change != TimeChange::Log {
        return Err(Error::InvalidInput("the sine operator needs the log time change".into()));
    }
    let path = affine_bm_path(&AffineParams::sine(beta), 1.0, grid, seed)?;
    let class = if beta > 2.0 { EndpointClass::LimitCircle } else { EndpointClass::LimitPoint };
    operator_from(&path, class, Provenance::new("sine", Some(seed), grid_label(grid)))
}

pub fn hua_pickrell_operator(beta: f64, delta: Complex64, grid: &GridSpec, seed: u64) -> Result<DiracOperator> {
    super::ModelParams::hua_pickrell(beta, delta)?;
    if grid.time_change != TimeChange::Log {
        return Err(Error::InvalidInput("the Hua-Pickrell operator needs the log time change".into()));
    }
    let path = affine_bm_path(&AffineParams::hua_pickrell(beta, delta), 1.0, grid, seed)?;
    let class = if delta.re + 0.5 < beta / 4.0 { EndpointClass::LimitCircle } else { EndpointClass::LimitPoint };
    operator_from(&path, class, Provenance::new("hp", Some(seed), grid_label(grid)))
}

/// `Dir(x + iy, ∞, q)` on `[0, ν)` for standard hyperbolic Brownian motion.
pub fn schrodinger_operator(nu: f64, grid: &GridSpec, seed: u64) -> Result<DiracOperator> {
    super::ModelParams::schrodinger(nu)?;
    let g = GridSpec { time_change: TimeChange::Identity, ..*grid };
    let path = affine_bm_path(&AffineParams::standard(), nu, &g, seed)?;
    operator_from(&path, EndpointClass::LimitCircle, Provenance::new("schrodinger", Some(seed), grid_label(&g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{eigenvalues, SolverConfig};

    #[test]
    fn log_grid_shape() {
        let g = GridSpec::log(2000);
        let (t, s) = g.nodes(1.0).unwrap();
        assert_eq!(t.len(), 2001);
        assert_eq!(t[0], 0.0);
        assert!((1.0 - t[2000] - 1e-10).abs() < 1e-16);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        let max_ds = s.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        assert!(max_ds < 0.12, "{max_ds}");
        // t and s related by the log time change
        for (a, b) in t.iter().zip(&s).filter(|(a, _)| **a < 0.999) {
            assert!((-(-a).ln_1p() - b).abs() < 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn zero_noise_path() {
        let p = AffineParams { alpha1: 0.0, alpha2: 0.0, gamma1: 0.0, gamma2: 0.0 };
        let path = affine_bm_path(&p, 1.0, &GridSpec::log(50), 1).unwrap();
        assert!(path.values.iter().all(|v| v.x == 0.0 && v.y == 1.0));
        assert_eq!(path.q, 0.0);
    }

    #[test]
    fn table_rows() {
        let s = AffineParams::sine(2.0);
        assert!((s.alpha1 * s.alpha1 - 2.0).abs() < 1e-15 && (s.alpha2 * s.alpha2 - 2.0).abs() < 1e-15);
        let b = AffineParams::bessel(2.0, 0.5);
        assert!((b.alpha1 * b.alpha1 - 4.0).abs() < 1e-15);
        assert_eq!((b.alpha2, b.gamma1, b.gamma2), (0.0, 0.0, 0.0));
        let h = AffineParams::hua_pickrell(4.0, Complex64::new(0.0, 0.0));
        assert_eq!(h, AffineParams::sine(4.0));
    }

    #[test]
    fn positive_paths_and_finite_q() {
        for (beta, seed) in [(1.0, 1), (2.0, 2), (4.0, 3)] {
            let p = affine_bm_path(&AffineParams::sine(beta), 1.0, &GridSpec::log(400), seed).unwrap();
            assert!(p.values.iter().all(|v| v.y > 0.0));
            assert!(p.q.is_finite() && p.q_uncertainty < 1e-6 * p.q.abs().max(1.0));
        }
        let op = hua_pickrell_operator(2.0, Complex64::new(0.3, 0.7), &GridSpec::log(400), 5).unwrap();
        assert!(op.path().boundary_limit().is_some());
    }

    #[test]
    fn schrodinger_grid_covers_interval() {
        let op = schrodinger_operator(3.0, &GridSpec::identity(300), 1).unwrap();
        assert_eq!(op.path().horizon(), 3.0);
        assert_eq!(op.path().grid()[0], 0.0);
    }

    #[test]
    fn noise_record_round_trip() {
        let p = affine_bm_path(&AffineParams::sine(2.0), 1.0, &GridSpec::log(20).with_refinement(2), 4).unwrap();
        let back = NoiseRecord::from_json(&p.noise.to_json().unwrap()).unwrap();
        assert_eq!(back, p.noise);
    }

    #[test]
    fn sine_operator_spectrum_is_sane() {
        let op = sine_beta_operator(4.0, &GridSpec::log(1000), 9).unwrap();
        let s = eigenvalues(&op, (0.0, 30.0), &SolverConfig { bisection_tol: 1e-9, ..Default::default() }).unwrap();
        assert!(s.len() >= 2 && s.len() <= 9, "{}", s.len());
    }
}
