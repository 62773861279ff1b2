//! Adaptive Dormand–Prince 5(4) integrator for scalar ODEs.

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One attempted step; returns the new value and the error estimate.
fn step<F: FnMut(f64, f64) -> f64>(f: &mut F, t: f64, y: f64, h: f64, k1: f64) -> (f64, f64, f64) {
    let k2 = f(t + C2 * h, y + h * A21 * k1);
    let k3 = f(t + C3 * h, y + h * (A31 * k1 + A32 * k2));
    let k4 = f(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
    let k5 = f(t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
    let k6 = f(t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
    let y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    let k7 = f(t + h, y5);
    let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    (y5, err, k7)
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
///
/// `hook` sees every accepted step and may replace the state, which is how
/// chart switches are done; returning `Some` also resets the stage cache.
pub fn integrate_with<F, H>(mut f: F, t0: f64, t1: f64, y0: f64, tol: Tolerance, mut hook: H) -> f64
where
    F: FnMut(f64, f64) -> f64,
    H: FnMut(f64, f64) -> Option<f64>,
{
    let span = t1 - t0;
    if span == 0.0 {
        return y0;
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, y);
    let scale0 = tol.abs + tol.rel * y.abs();
    let mut h = if k1.abs() > 0.0 {
        (0.01 * scale0.powf(0.2) / k1.abs().powf(0.2)).min(span.abs()) * dir
    } else {
        span.abs() * 0.1 * dir
    };
    if h == 0.0 {
        h = span * 1e-3;
    }
    let mut rejects = 0u32;
    loop {
        let remaining = t1 - t;
        if remaining * dir <= 0.0 {
            break;
        }
        let last = (h.abs() >= remaining.abs()) || (remaining.abs() - h.abs()) < 1e-14 * span.abs();
        let h_try = if last { remaining } else { h };
        let (y_new, err, k7) = step(&mut f, t, y, h_try, k1);
        let sc = tol.abs + tol.rel * y.abs().max(y_new.abs());
        let ratio = (err / sc).abs();
        if ratio <= 1.0 || !ratio.is_finite() && h_try.abs() < 1e-14 * span.abs() {
            t = if last { t1 } else { t + h_try };
            y = y_new;
            k1 = k7;
            if let Some(y2) = hook(t, y) {
                y = y2;
                k1 = f(t, y);
            }
            rejects = 0;
            let fac = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            h = h_try * fac;
            if last {
                break;
            }
        } else {
            rejects += 1;
            let fac = if ratio.is_finite() { (0.9 * ratio.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h = h_try * fac;
            if rejects > 200 {
                // step size underflow; accept to guarantee progress
                t += h_try;
                y = y_new;
                k1 = f(t, y);
                rejects = 0;
            }
        }
    }
    y
}

pub fn integrate<F: FnMut(f64, f64) -> f64>(f: F, t0: f64, t1: f64, y0: f64, tol: Tolerance) -> f64 {
    integrate_with(f, t0, t1, y0, tol, |_, _| None)
}
