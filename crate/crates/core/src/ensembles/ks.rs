use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::{path_rng, ModelParams};
use crate::dirac::{PointSample, Provenance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsConfig {
    /// Initial start time `ε` of the approximating equation.
    pub eps0: f64,
    /// Log-grid ratio: nodes at `t_j = e^{-jκ}`.
    pub kappa: f64,
    /// Point sets closer than this are considered stable under halving `ε`.
    pub stability_tol: f64,
    pub max_halvings: u32,
    pub root_tol: f64,
}

impl Default for KsConfig {
    fn default() -> Self {
        KsConfig { eps0: 1e-2, kappa: 2e-3, stability_tol: 1e-3, max_halvings: 20, root_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsSample {
    pub theta: f64,
    /// Scan mesh and `ψ_λ(1)` on it for the final `ε`.
    pub lambdas: Vec<f64>,
    pub psi: Vec<f64>,
    pub points: PointSample,
    pub eps: f64,
    /// Mesh points where `λ(ψ_{λ,ε/2} - ψ_{λ,ε})` came out negative.
    pub coupling_violations: usize,
}

/// Noise on the log grid, generated from `t = 1` backwards so that smaller
/// start times extend rather than replace it.
struct Noise {
    rng: ChaCha8Rng,
    db1: Vec<f64>,
    db2: Vec<f64>,
    kappa: f64,
}

impl Noise {
    fn extend_to(&mut self, steps: usize) {
        while self.db1.len() < steps {
            let j = self.db1.len();
            let dt = (-(j as f64) * self.kappa).exp() * (-(-self.kappa).exp_m1());
            let sq = dt.sqrt();
            let a: f64 = self.rng.sample(StandardNormal);
            let b: f64 = self.rng.sample(StandardNormal);
            self.db1.push(sq * a);
            self.db2.push(sq * b);
        }
    }
}

/// `ψ_λ(1)` by Euler–Maruyama from `ψ(t_J) = 0`, `t_J = e^{-Jκ}`.
fn terminal(lambda: f64, beta: f64, noise: &Noise, steps: usize) -> f64 {
    let k = noise.kappa;
    let amp = 2.0 / beta.sqrt();
    let mut psi = 0.0f64;
    for j in (0..steps).rev() {
        // interval [t_{j+1}, t_j]
        let t_left = (-((j + 1) as f64) * k).exp();
        let dt = t_left * k.exp_m1();
        let (s, c) = psi.sin_cos();
        psi += lambda * dt + amp / t_left.sqrt() * ((c - 1.0) * noise.db1[j] + s * noise.db2[j]);
        if lambda * psi < 0.0 {
            psi = 0.0;
        }
    }
    psi
}

fn steps_for(eps: f64, kappa: f64) -> usize {
    (-eps.ln() / kappa).ceil() as usize
}

fn illinois<F: FnMut(f64) -> f64>(g: &mut F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> f64 {
    let mut side = 0i8;
    for it in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if it % 4 == 3 || !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = g(c);
        if fc == 0.0 {
            return c;
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa /= 2.0;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb /= 2.0;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

fn roots(lambdas: &[f64], psi: &[f64], theta: f64, mut g: impl FnMut(f64) -> f64, tol: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..lambdas.len() - 1 {
        let (a, b) = (lambdas[i], lambdas[i + 1]);
        let (ga, gb) = (psi[i], psi[i + 1]);
        let lo = ((ga.min(gb) - theta) / TAU).ceil() as i64;
        let hi = ((ga.max(gb) - theta) / TAU).floor() as i64;
        for k in lo..=hi {
            let level = theta + TAU * k as f64;
            let (fa, fb) = (ga - level, gb - level);
            if fa == 0.0 {
                if i == 0 {
                    out.push(a);
                }
                continue;
            }
            if fb == 0.0 {
                out.push(b);
                continue;
            }
            out.push(illinois(&mut |l| g(l) - level, a, b, fa, fb, tol));
        }
    }
    out.sort_by(|p, q| p.total_cmp(q));
    out
}

/// Point set `{λ : ψ_λ(1) ∈ θ + 2πℤ}` in `window`, scanned on a mesh of spacing `mesh`.
///
/// The start time `ε` is halved until two consecutive point sets agree.
pub fn killip_stoiciu_sample(
    beta: f64,
    window: (f64, f64),
    mesh: f64,
    seed: u64,
    cfg: &KsConfig,
) -> Result<KsSample> {
    ModelParams::killip_stoiciu(beta)?;
    if !(window.0 < window.1 && window.0.is_finite() && window.1.is_finite()) {
        return Err(Error::InvalidInput(format!("bad window [{}, {}]", window.0, window.1)));
    }
    if !(mesh > 0.0) || !(cfg.eps0 > 0.0 && cfg.eps0 < 1.0) || !(cfg.kappa > 0.0) {
        return Err(Error::InvalidInput("mesh, eps0 and kappa must be positive".into()));
    }
    let mut rng = path_rng(seed, 0);
    let theta = rng.random::<f64>() * TAU;
    let mut noise = Noise { rng, db1: Vec::new(), db2: Vec::new(), kappa: cfg.kappa };
    let n = ((window.1 - window.0) / mesh).ceil().max(1.0) as usize;
    let lambdas: Vec<f64> = (0..=n).map(|i| window.0 + (window.1 - window.0) * i as f64 / n as f64).collect();

    let mut eps = cfg.eps0;
    let mut steps = steps_for(eps, cfg.kappa);
    noise.extend_to(steps);
    let mut psi: Vec<f64> = lambdas.iter().map(|&l| terminal(l, beta, &noise, steps)).collect();
    let mut pts = roots(&lambdas, &psi, theta, |l| terminal(l, beta, &noise, steps), cfg.root_tol);
    let mut violations = 0;
    for _ in 0..cfg.max_halvings {
        eps /= 2.0;
        steps = steps_for(eps, cfg.kappa);
        noise.extend_to(steps);
        let next: Vec<f64> = lambdas.iter().map(|&l| terminal(l, beta, &noise, steps)).collect();
        violations += lambdas.iter().zip(next.iter().zip(&psi)).filter(|(l, (a, b))| **l * (*a - *b) < -1e-12).count();
        let cur = roots(&lambdas, &next, theta, |l| terminal(l, beta, &noise, steps), cfg.root_tol);
        psi = next;
        let stable = cur.len() == pts.len() && cur.iter().zip(&pts).all(|(a, b)| (a - b).abs() <= cfg.stability_tol);
        pts = cur;
        if stable {
            return Ok(KsSample {
                theta,
                lambdas,
                psi,
                points: PointSample::new(pts, window, Provenance::new("ks", Some(seed), Some(format!("eps={eps:e}")))),
                eps,
                coupling_violations: violations,
            });
        }
    }
    Err(Error::TruncationNotConverged(format!("point set still moving at eps = {eps:e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_lambda_stays_at_zero() {
        let mut noise = Noise { rng: path_rng(1, 0), db1: vec![], db2: vec![], kappa: 2e-3 };
        noise.extend_to(3000);
        assert_eq!(terminal(0.0, 2.0, &noise, 3000), 0.0);
    }

    #[test]
    fn sign_and_monotonicity() {
        let s = killip_stoiciu_sample(2.0, (-15.0, 15.0), 0.25, 4, &KsConfig::default()).unwrap();
        for (l, p) in s.lambdas.iter().zip(&s.psi) {
            assert!(l * p >= 0.0);
        }
        assert!(s.theta >= 0.0 && s.theta < TAU);
        assert!(s.points.len() >= 1 && s.points.len() <= 12);
    }

    #[test]
    fn deterministic_in_seed() {
        let cfg = KsConfig::default();
        let a = killip_stoiciu_sample(1.0, (-10.0, 0.0), 0.25, 9, &cfg).unwrap();
        let b = killip_stoiciu_sample(1.0, (-10.0, 0.0), 0.25, 9, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
