use num_complex::Complex64;
use std::cell::Cell;
use std::f64::consts::{PI, TAU};

use super::{
    DiracOperator, DrivingPath, EndpointClass, Interpolation, PhaseFunction, PointSample, SolverConfig,
};
use crate::error::{Error, Result};
use crate::geometry::{cayley, disk_defect, PlanePoint};
use crate::ode::{integrate, integrate_with, Tolerance};

/// One cell of the carousel for a constant center `p`, in half-angle form.
///
/// The boundary point with lifted half-angle `h` is moved by the affine chart
/// sending `p` to `i`, rotated by `dh` (half of the rotation angle) and moved
/// back. Both chart maps fix the boundary point ∞, so the lift is preserved.
#[inline]
pub(crate) fn cell_step_half(h: f64, p: PlanePoint, dh: f64) -> f64 {
    let k = (h / PI).floor();
    let hr = h - k * PI;
    let (s, c) = hr.sin_cos();
    let g = k * PI + (p.y * s).atan2(c + p.x * s) + dh;
    let k2 = (g / PI).floor();
    let gr = g - k2 * PI;
    let (s2, c2) = gr.sin_cos();
    k2 * PI + s2.atan2(p.y * c2 - p.x * s2)
}

/// Rotation speed `2 f |e^{iφ} - γ|² / (1 - |γ|²)` of the disk carousel at unit λ.
#[inline]
fn disk_speed(phi: f64, p: PlanePoint, f: f64) -> f64 {
    let gamma = cayley(p).w;
    let e = Complex64::from_polar(1.0, phi);
    2.0 * f * (e - gamma).norm_sqr() / disk_defect(p)
}

fn tolerance(cfg: &SolverConfig) -> Tolerance {
    Tolerance { rel: cfg.ode_rel_tol, abs: cfg.ode_abs_tol }
}

fn guard(phi: f64, cfg: &SolverConfig) -> Result<()> {
    if !phi.is_finite() || phi.abs() > cfg.max_winding as f64 * TAU {
        Err(Error::WindingGuardExceeded(cfg.max_winding))
    } else {
        Ok(())
    }
}

/// Forward phase of `path` from `phi0`; fills `samples` with the value at each node.
fn forward_path(
    path: &DrivingPath,
    lambda: f64,
    phi0: f64,
    cfg: &SolverConfig,
    mut samples: Option<&mut Vec<f64>>,
) -> Result<f64> {
    let grid = path.grid();
    let w = path.weight();
    if let Some(s) = samples.as_deref_mut() {
        s.push(phi0);
    }
    match path.interpolation() {
        Interpolation::PiecewiseConstant => {
            let mut h = phi0 / 2.0;
            let vals = path.values();
            for k in 0..path.cells() {
                let dh = w[k] * lambda * (grid[k + 1] - grid[k]);
                h = cell_step_half(h, vals[k], dh);
                if let Some(s) = samples.as_deref_mut() {
                    s.push(2.0 * h);
                }
            }
            let phi = 2.0 * h;
            guard(phi, cfg)?;
            Ok(phi)
        }
        Interpolation::LinearInLogY => {
            let tol = tolerance(cfg);
            let mut phi = phi0;
            for k in 0..path.cells() {
                if lambda != 0.0 {
                    let f = w[k];
                    phi = integrate(
                        |t, y| lambda * disk_speed(y, path.point_in_cell(k, t), f),
                        grid[k],
                        grid[k + 1],
                        phi,
                        tol,
                    );
                }
                guard(phi, cfg)?;
                if let Some(s) = samples.as_deref_mut() {
                    s.push(phi);
                }
            }
            Ok(phi)
        }
    }
}

/// Reverse phase: solve backwards from `phi_end` at the horizon, return the value at 0.
fn reverse_path(path: &DrivingPath, lambda: f64, phi_end: f64, cfg: &SolverConfig) -> Result<f64> {
    let grid = path.grid();
    let w = path.weight();
    match path.interpolation() {
        Interpolation::PiecewiseConstant => {
            let mut h = phi_end / 2.0;
            let vals = path.values();
            for k in (0..path.cells()).rev() {
                let dh = w[k] * lambda * (grid[k + 1] - grid[k]);
                h = cell_step_half(h, vals[k], -dh);
            }
            let phi = 2.0 * h;
            guard(phi, cfg)?;
            Ok(phi)
        }
        Interpolation::LinearInLogY => {
            let tol = tolerance(cfg);
            let mut phi = phi_end;
            for k in (0..path.cells()).rev() {
                if lambda != 0.0 {
                    let f = w[k];
                    phi = integrate(
                        |t, y| lambda * disk_speed(y, path.point_in_cell(k, t), f),
                        grid[k + 1],
                        grid[k],
                        phi,
                        tol,
                    );
                }
                guard(phi, cfg)?;
            }
            Ok(phi)
        }
    }
}

/// Endpoint classification of the right endpoint.
///
/// A model rule attached to the path wins. Otherwise the quadrature of
/// `f/(1-|γ|²)` is inspected: if the last tenth of the time span carries at most
/// a fifth of the total the integral is taken to converge, if it carries at least
/// half it is taken to diverge, anything in between is indeterminate.
pub fn classify_endpoint(op: &DiracOperator) -> Result<EndpointClass> {
    op.class_cell()
        .get_or_init(|| {
            let path = op.path();
            if let Some(c) = path.tail_rule() {
                return Ok(c);
            }
            let grid = path.grid();
            let cut = 0.9 * path.horizon();
            let (mut total, mut tail) = (0.0, 0.0);
            for k in 0..path.cells() {
                let (t0, t1) = (grid[k], grid[k + 1]);
                let dens = path.weight()[k] / disk_defect(path.cell_value(k));
                total += dens * (t1 - t0);
                if t1 > cut {
                    tail += dens * (t1 - t0.max(cut));
                }
            }
            let ratio = tail / total;
            if ratio <= 0.2 {
                Ok(EndpointClass::LimitCircle)
            } else if ratio >= 0.5 {
                Ok(EndpointClass::LimitPoint)
            } else {
                Err(Error::IndeterminateClassification(ratio))
            }
        })
        .clone()
}

fn truncation_point(path: &DrivingPath, eps: f64) -> f64 {
    let t = path.horizon();
    if eps < t {
        t - eps
    } else {
        t / 2.0
    }
}

/// Path the phase is evaluated on: the full path for limit circle endpoints,
/// the truncation at `T - ε` otherwise.
fn working_path(op: &DiracOperator, eps: f64) -> Result<DrivingPath> {
    match classify_endpoint(op)? {
        EndpointClass::LimitCircle => Ok(op.path().clone()),
        EndpointClass::LimitPoint => op.path().truncated(truncation_point(op.path(), eps)),
    }
}

/// Lifted phase function `φ_λ` on the path grid, starting at `φ₀`.
pub fn phase_forward(op: &DiracOperator, lambda: f64, cfg: &SolverConfig) -> Result<PhaseFunction> {
    cfg.validate()?;
    let path = working_path(op, cfg.truncation_eps)?;
    let mut phi = Vec::with_capacity(path.cells() + 1);
    forward_path(&path, lambda, op.bc0().angle(), cfg, Some(&mut phi))?;
    Ok(PhaseFunction { lambda, times: path.grid().to_vec(), phi })
}

/// Terminal value `φ_λ(T)` without keeping the samples.
pub fn terminal_phase(op: &DiracOperator, lambda: f64, cfg: &SolverConfig) -> Result<f64> {
    let path = working_path(op, cfg.truncation_eps)?;
    forward_path(&path, lambda, op.bc0().angle(), cfg, None)
}

/// Number of `k` with `base + 2πk` in `(lo, hi]`.
fn passages(base: f64, lo: f64, hi: f64) -> i64 {
    ((hi - base) / TAU).floor() as i64 - ((lo - base) / TAU).floor() as i64
}

fn count_from_phase(phi0: f64, phi1: f64, end: f64, lambda: f64) -> i64 {
    if lambda > 0.0 {
        passages(phi1, phi0, end)
    } else if lambda < 0.0 {
        // open interval (end, φ₀): an eigenvalue at λ itself is not counted
        let open = ((phi0 - phi1) / TAU).ceil() as i64 - 1 - ((end - phi1) / TAU).floor() as i64;
        -open.max(0)
    } else {
        0
    }
}

/// Right-continuous counting function `N(λ)`.
pub fn counting_function(op: &DiracOperator, lambda: f64, cfg: &SolverConfig) -> Result<i64> {
    if lambda == 0.0 {
        return Ok(0);
    }
    let end = terminal_phase(op, lambda, cfg)?;
    Ok(count_from_phase(op.bc0().angle(), op.bc1().angle(), end, lambda))
}

/// Solve `g(λ) = target` for increasing `g` with `g(lo) < target <= g(hi)`.
fn solve_increasing<F: FnMut(f64) -> Result<f64>>(
    g: &mut F,
    target: f64,
    mut lo: f64,
    mut glo: f64,
    mut hi: f64,
    mut ghi: f64,
    tol: f64,
) -> Result<f64> {
    if ghi == target {
        return Ok(hi);
    }
    let mut side = 0i32;
    let mut iter = 0;
    while hi - lo > tol && iter < 300 {
        iter += 1;
        let (flo, fhi) = (glo - target, ghi - target);
        let mut x = if iter % 4 == 0 { 0.5 * (lo + hi) } else { (lo * fhi - hi * flo) / (fhi - flo) };
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let gx = g(x)?;
        if gx == target {
            return Ok(x);
        }
        if gx < target {
            lo = x;
            glo = gx;
            if side == -1 {
                ghi = target + 0.5 * (ghi - target);
            }
            side = -1;
        } else {
            hi = x;
            ghi = gx;
            if side == 1 {
                glo = target + 0.5 * (glo - target);
            }
            side = 1;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All `λ ∈ [a, b]` with `w(λ) ∈ base + 2πℤ`, for strictly increasing `w`.
fn roots_in_window<F: FnMut(f64) -> Result<f64>>(
    mut w: F,
    a: f64,
    b: f64,
    base: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    let wa = w(a)?;
    let wb = w(b)?;
    let k_lo = ((wa - base) / TAU).ceil() as i64;
    let k_hi = ((wb - base) / TAU).floor() as i64;
    if k_hi < k_lo {
        return Ok(Vec::new());
    }
    let targets = (k_hi - k_lo + 1) as usize;
    // sweep to isolate the targets before refining
    let m = 2 * targets + 8;
    let mut xs = Vec::with_capacity(m + 1);
    let mut ws = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let x = if j == m { b } else { a + (b - a) * j as f64 / m as f64 };
        let v = if j == 0 {
            wa
        } else if j == m {
            wb
        } else {
            w(x)?
        };
        xs.push(x);
        ws.push(v);
    }
    let mut out = Vec::with_capacity(targets);
    let mut j = 0;
    for k in k_lo..=k_hi {
        let target = base + TAU * k as f64;
        if ws[0] == target {
            out.push(a);
            continue;
        }
        while j + 1 < xs.len() && ws[j + 1] < target {
            j += 1;
        }
        if j + 1 >= xs.len() {
            break;
        }
        let r = solve_increasing(&mut w, target, xs[j], ws[j], xs[j + 1], ws[j + 1], tol)?;
        out.push(r);
    }
    Ok(out)
}

fn window_roots(op: &DiracOperator, path: &DrivingPath, a: f64, b: f64, cfg: &SolverConfig) -> Result<Vec<f64>> {
    let phi0 = op.bc0().angle();
    roots_in_window(|l| forward_path(path, l, phi0, cfg, None), a, b, op.bc1().angle(), cfg.bisection_tol)
}

fn window_roots_reverse(
    op: &DiracOperator,
    path: &DrivingPath,
    a: f64,
    b: f64,
    cfg: &SolverConfig,
) -> Result<Vec<f64>> {
    let phi1 = op.bc1().angle();
    // ρ_λ(0) decreases in λ, so solve for its negative
    roots_in_window(
        |l| reverse_path(path, l, phi1, cfg).map(|v| -v),
        a,
        b,
        -op.bc0().angle(),
        cfg.bisection_tol,
    )
}

fn same_points(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn stabilized<F>(op: &DiracOperator, cfg: &SolverConfig, mut solve: F) -> Result<Vec<f64>>
where
    F: FnMut(&DrivingPath) -> Result<Vec<f64>>,
{
    match classify_endpoint(op)? {
        EndpointClass::LimitCircle => solve(op.path()),
        EndpointClass::LimitPoint => {
            let mut eps = cfg.truncation_eps;
            let mut prev = solve(&op.path().truncated(truncation_point(op.path(), eps))?)?;
            for _ in 0..cfg.max_refinements {
                eps /= 2.0;
                let cur = solve(&op.path().truncated(truncation_point(op.path(), eps))?)?;
                if same_points(&prev, &cur, cfg.bisection_tol.max(1e-14)) {
                    return Ok(cur);
                }
                prev = cur;
            }
            Err(Error::TruncationNotConverged(format!(
                "point set still moving at truncation distance {eps:e}"
            )))
        }
    }
}

fn check_window(window: (f64, f64)) -> Result<()> {
    if !(window.0.is_finite() && window.1.is_finite() && window.0 < window.1) {
        return Err(Error::InvalidInput(format!("bad window [{}, {}]", window.0, window.1)));
    }
    Ok(())
}

/// Eigenvalues in `window` from the forward phase: `φ_λ(T) ∈ φ₁ + 2πℤ`.
pub fn eigenvalues(op: &DiracOperator, window: (f64, f64), cfg: &SolverConfig) -> Result<PointSample> {
    cfg.validate()?;
    check_window(window)?;
    let pts = stabilized(op, cfg, |p| window_roots(op, p, window.0, window.1, cfg))?;
    Ok(PointSample::new(pts, window, op.provenance().clone()))
}

/// Eigenvalues in `window` from the reverse phase: `ρ_λ(0) ∈ φ₀ + 2πℤ`.
pub fn eigenvalues_reverse(op: &DiracOperator, window: (f64, f64), cfg: &SolverConfig) -> Result<PointSample> {
    cfg.validate()?;
    check_window(window)?;
    let pts = stabilized(op, cfg, |p| window_roots_reverse(op, p, window.0, window.1, cfg))?;
    Ok(PointSample::new(pts, window, op.provenance().clone()))
}

/// `ρ_λ(0)`, the reverse phase started from `φ₁` at the right end.
pub fn phase_reverse(op: &DiracOperator, lambda: f64, cfg: &SolverConfig) -> Result<f64> {
    cfg.validate()?;
    let phi1 = op.bc1().angle();
    match classify_endpoint(op)? {
        EndpointClass::LimitCircle => reverse_path(op.path(), lambda, phi1, cfg),
        EndpointClass::LimitPoint => {
            let mut eps = cfg.truncation_eps;
            let trunc = |e: f64| op.path().truncated(truncation_point(op.path(), e));
            let mut prev = reverse_path(&trunc(eps)?, lambda, phi1, cfg)?;
            for _ in 0..cfg.max_refinements {
                eps /= 2.0;
                let cur = reverse_path(&trunc(eps)?, lambda, phi1, cfg)?;
                if (cur - prev).abs() <= cfg.bisection_tol {
                    return Ok(cur);
                }
                prev = cur;
            }
            Err(Error::TruncationNotConverged(format!("reverse phase still moving at {eps:e}")))
        }
    }
}

/// Forward phase through the half-plane carousel equation
/// `r' = λ f (y² + (x - r)²)/y`, restarting at -∞ after each blow-up.
///
/// Exists as an independent check on the disk integration.
pub fn phase_forward_halfplane(op: &DiracOperator, lambda: f64, cfg: &SolverConfig) -> Result<PhaseFunction> {
    cfg.validate()?;
    let path = working_path(op, cfg.truncation_eps)?;
    let tol = tolerance(cfg);
    let grid = path.grid();
    let phi0 = op.bc0().angle();

    // chart A: φ = 2πk + 2 atan2(1, -r);  chart B: φ = 2πk + 2 atan(s), s = -1/r
    let kk = (phi0 / TAU).round();
    let d = phi0 - kk * TAU;
    let (mut in_b, mut k, mut v) = if d.abs() < PI / 2.0 {
        (true, kk, (d / 2.0).tan())
    } else {
        let k = (phi0 / TAU).floor();
        let h = (phi0 - k * TAU) / 2.0;
        (false, k, -h.cos() / h.sin())
    };
    let angle = |in_b: bool, k: f64, v: f64| {
        if in_b {
            k * TAU + 2.0 * v.atan()
        } else {
            k * TAU + 2.0 * 1.0f64.atan2(-v)
        }
    };
    let mut phi = vec![angle(in_b, k, v)];
    for c in 0..path.cells() {
        let f = path.weight()[c];
        let chart = Cell::new((in_b, k));
        let rhs = |t: f64, val: f64| {
            let p = path.point_in_cell(c, t);
            let (b, _) = chart.get();
            if b {
                let q = p.x * val + 1.0;
                lambda * f * (p.y * p.y * val * val + q * q) / p.y
            } else {
                let q = p.x - val;
                lambda * f * (p.y * p.y + q * q) / p.y
            }
        };
        let hook = |_t: f64, val: f64| {
            let (b, k) = chart.get();
            if !b && val.abs() > 2.0 {
                chart.set((true, if val > 0.0 { k + 1.0 } else { k }));
                Some(-1.0 / val)
            } else if b && val.abs() > 2.0 {
                chart.set((false, if val < 0.0 { k - 1.0 } else { k }));
                Some(-1.0 / val)
            } else {
                None
            }
        };
        if lambda != 0.0 {
            v = integrate_with(rhs, grid[c], grid[c + 1], v, tol, hook);
        }
        let (b, kk) = chart.get();
        in_b = b;
        k = kk;
        let a = angle(in_b, k, v);
        guard(a, cfg)?;
        phi.push(a);
    }
    Ok(PhaseFunction { lambda, times: grid.to_vec(), phi })
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

/// `uᵗ R u` for `R = (f/y)[[1, -x], [-x, x² + y²]]`.
fn quadratic_form(u: [f64; 2], p: PlanePoint, f: f64) -> f64 {
    let a = u[0] - p.x * u[1];
    f * (a * a + p.y * p.y * u[1] * u[1]) / p.y
}

/// `‖τ⁻¹‖²₂ = 2 ∫₀ᵀ ∫₀ˣ u₀ᵗR(y)u₀ · u₁ᵗR(x)u₁ dy dx` with `u₀ᵗJu₁ = 1`.
pub fn hs_norm_squared(op: &DiracOperator, cfg: &SolverConfig) -> Result<f64> {
    let path = op.path();
    let u0 = op.bc0().vector();
    let u1 = op.bc1().vector();
    // u₀ᵗ J u₁ = sin((φ₁ - φ₀)/2) for the unit vectors
    let cross = u0[1] * u1[0] - u0[0] * u1[1];
    let norm = 1.0 / (cross * cross);
    let grid = path.grid();
    let w = path.weight();
    let mut acc_a = 0.0;
    let mut total = 0.0;
    for k in 0..path.cells() {
        let (t0, t1) = (grid[k], grid[k + 1]);
        let dt = t1 - t0;
        match path.interpolation() {
            Interpolation::PiecewiseConstant => {
                let p = path.values()[k];
                let a = quadratic_form(u0, p, w[k]);
                let b = quadratic_form(u1, p, w[k]);
                total += b * (acc_a * dt + 0.5 * a * dt * dt);
                acc_a += a * dt;
            }
            Interpolation::LinearInLogY => {
                let a_at = |t: f64| quadratic_form(u0, path.point_in_cell(k, t), w[k]);
                let b_at = |t: f64| quadratic_form(u1, path.point_in_cell(k, t), w[k]);
                total += quad(|x| b_at(x) * (acc_a + quad(a_at, t0, x)), t0, t1);
                acc_a += quad(a_at, t0, t1);
            }
        }
        if 2.0 * total * norm > cfg.hs_ceiling {
            return Err(Error::DivergentNorm(cfg.hs_ceiling));
        }
    }
    Ok(2.0 * total * norm)
}

/// Disk-model data of an operator: `γ = U(x + iy)` per cell (or node) and the
/// boundary angles.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskOperator {
    pub grid: Vec<f64>,
    pub gamma: Vec<Complex64>,
    pub weight: Vec<f64>,
    pub interpolation: Interpolation,
    pub phi0: f64,
    pub phi1: f64,
}

impl DiskOperator {
    /// Phase through the disk equation `φ' = 2fλ|e^{iφ}-γ|²/(1-|γ|²)` with `γ`
    /// held constant on each cell (nodes are averaged for interpolated paths).
    pub fn phase(&self, lambda: f64, cfg: &SolverConfig) -> Vec<f64> {
        let tol = tolerance(cfg);
        let mut phi = self.phi0;
        let mut out = vec![phi];
        for k in 0..self.grid.len() - 1 {
            let g = match self.interpolation {
                Interpolation::PiecewiseConstant => self.gamma[k],
                Interpolation::LinearInLogY => 0.5 * (self.gamma[k] + self.gamma[k + 1]),
            };
            let f = self.weight[k];
            let defect = 1.0 - g.norm_sqr();
            phi = integrate(
                |_, y| 2.0 * f * lambda * (Complex64::from_polar(1.0, y) - g).norm_sqr() / defect,
                self.grid[k],
                self.grid[k + 1],
                phi,
                tol,
            );
            out.push(phi);
        }
        out
    }
}

pub fn to_disk_coordinates(op: &DiracOperator) -> DiskOperator {
    let path = op.path();
    DiskOperator {
        grid: path.grid().to_vec(),
        gamma: path.values().iter().map(|p| cayley(*p).w).collect(),
        weight: path.weight().to_vec(),
        interpolation: path.interpolation(),
        phi0: op.bc0().angle(),
        phi1: op.bc1().angle(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{BoundaryCondition, DiracOperator};
    use crate::geometry::BoundaryPoint;

    fn clock() -> DiracOperator {
        let path = DrivingPath::constant(PlanePoint::i(), 1.0, 1).unwrap();
        DiracOperator::with_boundary_points(path, BoundaryPoint::Real(0.0), BoundaryPoint::Infinity).unwrap()
    }

    #[test]
    fn cell_step_matches_rotation_about_i() {
        let h = cell_step_half(0.3, PlanePoint::i(), 0.7);
        assert!((h - 1.0).abs() < 1e-15);
        // rotation by a full turn returns to the same point one turn higher
        let p = PlanePoint::new(0.4, 0.3).unwrap();
        let h = cell_step_half(1.1, p, PI);
        assert!((h - (1.1 + PI)).abs() < 1e-12);
    }

    #[test]
    fn cell_step_inverse() {
        let p = PlanePoint::new(-1.3, 0.05).unwrap();
        for h in [0.0, 0.2, 1.5, 3.0, -2.0, 10.0] {
            let g = cell_step_half(h, p, 0.37);
            assert!((cell_step_half(g, p, -0.37) - h).abs() < 1e-12);
        }
    }

    #[test]
    fn cell_step_agrees_with_ode() {
        let p = PlanePoint::new(0.7, 0.4).unwrap();
        let cfg = SolverConfig::default();
        let lambda = 3.3;
        let exact = 2.0 * cell_step_half(0.6, p, 0.5 * lambda * 0.8);
        let ode = integrate(|_, y| lambda * disk_speed(y, p, 0.5), 0.0, 0.8, 1.2, tolerance(&cfg));
        assert!((exact - ode).abs() < 1e-9, "{exact} vs {ode}");
    }

    #[test]
    fn clock_phase_closed_form() {
        let op = clock();
        let cfg = SolverConfig::default();
        assert_eq!(phase_forward(&op, 0.0, &cfg).unwrap().terminal(), PI);
        let ph = phase_forward(&op, PI, &cfg).unwrap();
        assert!((ph.terminal() - TAU).abs() < 1e-14);
        assert_eq!(counting_function(&op, TAU, &cfg).unwrap(), 1);
        assert_eq!(counting_function(&op, 0.0, &cfg).unwrap(), 0);
        assert_eq!(counting_function(&op, -TAU, &cfg).unwrap(), -1);
        assert_eq!(counting_function(&op, PI, &cfg).unwrap(), 1);
        assert_eq!(counting_function(&op, -PI, &cfg).unwrap(), 0);
    }

    #[test]
    fn clock_spectrum() {
        let op = clock();
        let cfg = SolverConfig::default();
        let s = eigenvalues(&op, (-20.0, 20.0), &cfg).unwrap();
        let want = [-5.0, -3.0, -1.0, 1.0, 3.0, 5.0].map(|k| k * PI);
        assert_eq!(s.len(), 6);
        for (a, b) in s.points.iter().zip(want) {
            assert!((a - b).abs() < 1e-11);
        }
        let r = eigenvalues_reverse(&op, (-20.0, 20.0), &cfg).unwrap();
        assert!(same_points(&s.points, &r.points, 1e-11));
    }

    #[test]
    fn clock_hs_norm() {
        let v = hs_norm_squared(&clock(), &SolverConfig::default()).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn degenerate_sine_path() {
        // constant path at i, η₀ = ∞, η₁ = 0: r_λ(t) = -cot(λt/2)
        let path = DrivingPath::constant(PlanePoint::i(), 1.0, 1).unwrap();
        let op = DiracOperator::with_boundary_points(path, BoundaryPoint::Infinity, BoundaryPoint::Real(0.0)).unwrap();
        let s = eigenvalues(&op, (-10.0, 10.0), &SolverConfig::default()).unwrap();
        assert_eq!(s.len(), 4);
        assert!((s.points[2] - PI).abs() < 1e-11);
    }

    #[test]
    fn reverse_at_zero_is_phi1() {
        let op = clock();
        assert_eq!(phase_reverse(&op, 0.0, &SolverConfig::default()).unwrap(), 0.0);
    }

    #[test]
    fn parallel_conditions_rejected() {
        let path = DrivingPath::constant(PlanePoint::i(), 1.0, 1).unwrap();
        let bc = BoundaryCondition::from_angle(1.0);
        assert!(DiracOperator::new(path, bc, BoundaryCondition::from_angle(1.0 + TAU)).is_err());
    }

    #[test]
    fn classification_of_constant_path() {
        assert_eq!(classify_endpoint(&clock()).unwrap(), EndpointClass::LimitCircle);
    }

    #[test]
    fn disk_data_of_constant_paths() {
        let d = to_disk_coordinates(&clock());
        assert!(d.gamma[0].norm() < 1e-15);
        let path = DrivingPath::constant(PlanePoint::new(0.0, 2.0).unwrap(), 1.0, 3).unwrap();
        let op = DiracOperator::with_boundary_points(path, BoundaryPoint::Real(0.0), BoundaryPoint::Infinity).unwrap();
        let d = to_disk_coordinates(&op);
        assert!(d.gamma.iter().all(|g| (g - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn weight_scaling_of_hs_norm() {
        let op = clock();
        let scaled = op.with_path(op.path().scaled_weight(3.0).unwrap());
        let cfg = SolverConfig::default();
        let (a, b) = (hs_norm_squared(&op, &cfg).unwrap(), hs_norm_squared(&scaled, &cfg).unwrap());
        assert!((b - 9.0 * a).abs() < 1e-14);
    }
}
