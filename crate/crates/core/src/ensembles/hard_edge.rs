use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use super::paths::{log_clock, GridSpec, NoiseRecord, TimeChange};
use super::{path_rng, ModelParams};
use crate::dirac::{DiracOperator, DrivingPath, EndpointClass, Interpolation, Provenance};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, PlanePoint};

/// Height of `ỹ` past which a limit point path is cut.
const LP_HEIGHT_CAP: f64 = 1e12;

/// The reference record has at least `2^MIN_LEVELS` intervals.
const MIN_LEVELS: u32 = 16;

/// Brownian motion at the nodes `x[0] = 0 < … < x[2^L]`, built by midpoint
/// bridges level by level so that the coarse nodes do not depend on `L`.
fn brownian_bridge<R: Rng>(x: &[f64], rng: &mut R) -> Vec<f64> {
    let n = x.len() - 1;
    let mut b = vec![0.0; n + 1];
    b[n] = x[n].sqrt() * rng.sample::<f64, _>(StandardNormal);
    let mut half = n / 2;
    while half >= 1 {
        let mut m = half;
        while m < n {
            let (l, r) = (m - half, m + half);
            let (xl, xm, xr) = (x[l], x[m], x[r]);
            let mean = b[l] + (b[r] - b[l]) * (xm - xl) / (xr - xl);
            let var = (xm - xl) * (xr - xm) / (xr - xl);
            b[m] = mean + var.sqrt() * rng.sample::<f64, _>(StandardNormal);
            m += 2 * half;
        }
        half /= 2;
    }
    b
}

/// Relative movement allowed when the oracle interval is doubled.
const ORACLE_TRUNCATION_TOL: f64 = 1e-3;

/// Hard-edge operator together with the Brownian record it was built from.
#[derive(Debug, Clone)]
pub struct BesselSample {
    pub beta: f64,
    pub a: f64,
    /// Cell nodes in `x = 2τ(t)`.
    pub x: Vec<f64>,
    /// `B` held on each cell, read at the cell midpoint of the fine record.
    pub b: Vec<f64>,
    /// Operator clock nodes `t = 1 - e^{-x/2}`.
    pub t: Vec<f64>,
    pub noise: NoiseRecord,
    grid_label: String,
}

/// `∫_{x0}^{x1} e^{r z} dz`.
fn exp_integral(r: f64, x0: f64, x1: f64) -> f64 {
    let d = x1 - x0;
    if (r * d).abs() < 1e-300 {
        d * (r * x0).exp()
    } else {
        (r * x0).exp() * (r * d).exp_m1() / r
    }
}

impl BesselSample {
    fn c(&self) -> f64 {
        2.0 / self.beta.sqrt()
    }

    /// `∫ m` over cell `k`, `m = e^{-(a+1)x - cB}`.
    pub fn cell_m(&self, k: usize) -> f64 {
        (-self.c() * self.b[k]).exp() * exp_integral(-(self.a + 1.0), self.x[k], self.x[k + 1])
    }

    /// `∫ s` over cell `k`, `s = e^{ax + cB}`.
    pub fn cell_s(&self, k: usize) -> f64 {
        (self.c() * self.b[k]).exp() * exp_integral(self.a, self.x[k], self.x[k + 1])
    }

    /// `Dir(iỹ, 0, ∞)` built from the record.
    pub fn operator(&self) -> Result<DiracOperator> {
        let cells = self.b.len();
        let mut values = Vec::with_capacity(cells);
        let mut weight = Vec::with_capacity(cells);
        for k in 0..cells {
            let (im, is) = (self.cell_m(k), self.cell_s(k));
            values.push(PlanePoint { x: 0.0, y: (is / im).sqrt() });
            weight.push((im * is).sqrt() / (4.0 * (self.t[k + 1] - self.t[k])));
        }
        let class = if self.a < 0.0 { EndpointClass::LimitCircle } else { EndpointClass::LimitPoint };
        let mut t = self.t.clone();
        if class == EndpointClass::LimitPoint {
            // the tail carries no spectral information once ỹ is this large, and
            // the phase can no longer resolve it in double precision
            if let Some(cut) = values.iter().position(|p| p.y > LP_HEIGHT_CAP) {
                let cut = cut.max(2);
                values.truncate(cut);
                weight.truncate(cut);
                t.truncate(cut + 1);
            }
        }
        let path = DrivingPath::new(t, values, Interpolation::PiecewiseConstant, weight)?.with_tail_rule(class);
        Ok(DiracOperator::with_boundary_points(path, BoundaryPoint::Real(0.0), BoundaryPoint::Infinity)?
            .with_provenance(Provenance::new("bessel", Some(self.noise.seed), Some(self.grid_label.clone()))))
    }

    fn m_at(&self, k: usize, x: f64) -> f64 {
        (-(self.a + 1.0) * x - self.c() * self.b[k]).exp()
    }

    /// `S(x) = ∫₀ˣ s` for `x` in cell `k`, given `S(x_k)`.
    fn big_s(&self, k: usize, s_left: f64, x: f64) -> f64 {
        s_left + (self.c() * self.b[k]).exp() * exp_integral(self.a, self.x[k], x)
    }
}

/// Brownian record for the hard-edge operator `Dir(iỹ, 0, ∞)`, `ỹ = √(s/m)` on
/// the log time change of `x/2`. On each cell `ỹ` and the weight are fixed by
/// the cell integrals of `m` and `s`, so the canonical system reproduces `∫m`
/// and `∫s` cell by cell.
pub fn bessel_operator(beta: f64, a: f64, grid: &GridSpec, seed: u64) -> Result<BesselSample> {
    ModelParams::bessel(beta, a)?;
    if grid.time_change != TimeChange::Log {
        return Err(Error::InvalidInput("the Bessel operator needs the log time change".into()));
    }
    let (t, s_nodes) = grid.nodes(1.0)?;
    let x: Vec<f64> = s_nodes.iter().map(|s| 2.0 * s).collect();
    let cells = t.len() - 1;
    let levels = ((cells * grid.refinement) as f64).log2().ceil().max(MIN_LEVELS as f64) as u32;
    let n_ref = 1usize << levels;
    let x_ref: Vec<f64> = log_clock(grid.eps, n_ref).iter().map(|s| 2.0 * s).collect();
    let b_ref = brownian_bridge(&x_ref, &mut path_rng(seed, 0));
    // B at the ξ-midpoint of each cell, read off the reference record
    let b = (0..cells)
        .map(|k| {
            let pos = (k as f64 + 0.5) * n_ref as f64 / cells as f64;
            let j = (pos.floor() as usize).min(n_ref - 1);
            let w = pos - j as f64;
            (1.0 - w) * b_ref[j] + w * b_ref[j + 1]
        })
        .collect();
    let db = b_ref.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(BesselSample {
        beta,
        a,
        x,
        b,
        t,
        noise: NoiseRecord { seed, s: x_ref, db1: db, db2: Vec::new() },
        grid_label: format!("cells={},eps={:e},refinement={}", grid.cells, grid.eps, grid.refinement),
    })
}

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    GL_NODES.iter().zip(GL_WEIGHTS.iter()).map(|(x, w)| w * f(m + r * x)).sum::<f64>() * r
}

/// Smallest `k` eigenvalues of the Sturm–Liouville operator on the first `cells` cells.
fn sl_eigenvalues(sample: &BesselSample, cells: usize, k: usize) -> Result<Vec<f64>> {
    let mut s_left = vec![0.0; cells + 1];
    for j in 0..cells {
        s_left[j + 1] = s_left[j] + sample.cell_s(j);
    }
    let im: Vec<f64> = (0..cells).map(|j| sample.cell_m(j)).collect();
    let sm: Vec<f64> = (0..cells)
        .map(|j| quad(|x| sample.big_s(j, s_left[j], x) * sample.m_at(j, x), sample.x[j], sample.x[j + 1]))
        .collect();
    // kernel S(x ∧ y) against m(x)m(y) on indicator functions, scaled by B^{-1/2}
    let mut a = DMatrix::<f64>::zeros(cells, cells);
    for i in 0..cells {
        let (x0, x1) = (sample.x[i], sample.x[i + 1]);
        let inner = |y: f64| quad(|x| sample.big_s(i, s_left[i], x) * sample.m_at(i, x), x0, y);
        let diag = 2.0 * quad(|y| sample.m_at(i, y) * inner(y), x0, x1);
        a[(i, i)] = diag / im[i];
        for j in i + 1..cells {
            let v = sm[i] * im[j] / (im[i] * im[j]).sqrt();
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let mut kappa: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    kappa.sort_by(|p, q| q.total_cmp(p));
    if kappa.len() < k || kappa[k - 1] <= 0.0 {
        return Err(Error::InvalidInput("oracle matrix has too few positive eigenvalues".into()));
    }
    Ok(kappa[..k].iter().map(|v| 1.0 / v).collect())
}

/// Lowest `k` eigenvalues of `-(1/m) d/dx (1/s) d/dx` with Dirichlet condition at 0,
/// from a Galerkin discretization of its inverse, the integral operator with
/// kernel `∫₀^{x∧y} s` against `m(y)dy`, on the cells of the shared record.
///
/// The computation is repeated on the first half of the interval; if the
/// eigenvalues move by more than a relative `1e-3` the truncation is reported
/// as unconverged.
pub fn hard_edge_sl_oracle(sample: &BesselSample, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let cells = sample.b.len();
    let x_end = sample.x[cells];
    let half = sample.x.partition_point(|&x| x <= 0.5 * x_end) - 1;
    let full = sl_eigenvalues(sample, cells, k)?;
    let short = sl_eigenvalues(sample, half.max(k), k)?;
    let moved = full.iter().zip(&short).map(|(p, q)| ((p - q) / p).abs()).fold(0.0, f64::max);
    if moved > ORACLE_TRUNCATION_TOL {
        return Err(Error::TruncationNotConverged(format!(
            "oracle eigenvalues move by {moved:.2e} when the interval doubles"
        )));
    }
    Ok(full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{eigenvalues, SolverConfig};

    #[test]
    fn exp_integral_limits() {
        assert!((exp_integral(0.0, 1.0, 3.0) - 2.0).abs() < 1e-15);
        assert!((exp_integral(1.0, 0.0, 1.0) - (1f64.exp() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn symmetric_spectrum() {
        let s = bessel_operator(2.0, -0.5, &GridSpec::log(300), 3).unwrap();
        let cfg = SolverConfig { bisection_tol: 1e-10, ..Default::default() };
        let p = eigenvalues(&s.operator().unwrap(), (-30.0, 30.0), &cfg).unwrap();
        let neg: Vec<f64> = p.points.iter().filter(|x| **x < 0.0).map(|x| -x).rev().collect();
        let pos: Vec<f64> = p.points.iter().filter(|x| **x > 0.0).copied().collect();
        assert_eq!(neg.len(), pos.len());
        for (u, v) in neg.iter().zip(&pos) {
            assert!((u - v).abs() < 1e-8, "{u} {v}");
        }
    }

    #[test]
    fn per_path_identity() {
        for (a, seed) in [(-0.5, 1), (0.5, 2), (2.0, 3)] {
            let s = bessel_operator(2.0, a, &GridSpec::log(300).with_eps(1e-14), seed).unwrap();
            let cfg = SolverConfig { bisection_tol: 1e-10, ..Default::default() };
            let oracle = hard_edge_sl_oracle(&s, 3).unwrap();
            let hi = 4.0 * oracle[2].sqrt() * 1.2;
            let mu = eigenvalues(&s.operator().unwrap(), (0.0, hi), &cfg).unwrap();
            assert!(mu.len() >= 3);
            for (m, l) in mu.points.iter().zip(&oracle) {
                let r = (m / 4.0).powi(2);
                assert!(((r - l) / l).abs() < 1e-3, "a={a}: {r} vs {l}");
            }
        }
    }

    #[test]
    fn record_is_shared_across_refinements() {
        let g = GridSpec::log(100).with_eps(1e-12);
        let coarse = bessel_operator(2.0, 0.5, &g, 5).unwrap();
        let fine = bessel_operator(2.0, 0.5, &GridSpec { cells: 200, ..g }, 5).unwrap();
        assert_eq!(coarse.noise, fine.noise);
        assert_eq!(coarse.x[50], fine.x[100]);
    }
}
