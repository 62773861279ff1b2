//! Dirac operators `τ = R⁻¹ J d/dt` driven by hyperbolic paths: endpoint
//! classification, phase functions, eigenvalues and the Hilbert–Schmidt norm.

mod path;
mod solve;

pub use path::{DrivingPath, Interpolation};
pub use solve::{
    classify_endpoint, counting_function, eigenvalues, eigenvalues_reverse, hs_norm_squared,
    phase_forward, phase_forward_halfplane, phase_reverse, terminal_phase, to_disk_coordinates,
    DiskOperator,
};

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::geometry::{reduce_angle, BoundaryPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndpointClass {
    LimitCircle,
    LimitPoint,
}

/// Boundary condition `u ∥ (cos(φ/2), -sin(φ/2))`, stored by its angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    phi: f64,
}

impl BoundaryCondition {
    pub fn from_angle(phi: f64) -> Self {
        BoundaryCondition { phi: reduce_angle(phi) }
    }

    /// Condition whose vector points at the boundary point `b` (`r = u₁/u₂`).
    pub fn from_boundary(b: BoundaryPoint) -> Self {
        BoundaryCondition { phi: b.disk_angle() }
    }

    pub fn angle(&self) -> f64 {
        self.phi
    }

    pub fn vector(&self) -> [f64; 2] {
        [(self.phi / 2.0).cos(), -(self.phi / 2.0).sin()]
    }

    pub fn boundary_point(&self) -> BoundaryPoint {
        BoundaryPoint::from_disk_angle(self.phi)
    }
}

/// Where a point set came from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub model: String,
    pub seed: Option<u64>,
    pub grid: Option<String>,
}

impl Provenance {
    pub fn new(model: &str, seed: Option<u64>, grid: Option<String>) -> Self {
        Provenance { model: model.to_string(), seed, grid }
    }
}

/// Sorted spectrum points inside a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    pub points: Vec<f64>,
    pub window: (f64, f64),
    pub provenance: Provenance,
}

impl PointSample {
    pub fn new(mut points: Vec<f64>, window: (f64, f64), provenance: Provenance) -> Self {
        points.sort_by(|a, b| a.total_cmp(b));
        points.retain(|p| *p >= window.0 && *p <= window.1);
        PointSample { points, window, provenance }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points restricted to a sub-window.
    pub fn restrict(&self, a: f64, b: f64) -> PointSample {
        PointSample::new(self.points.clone(), (a, b), self.provenance.clone())
    }
}

/// Lifted phase angle sampled on the grid of the driving path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseFunction {
    pub lambda: f64,
    pub times: Vec<f64>,
    pub phi: Vec<f64>,
}

impl PhaseFunction {
    pub fn terminal(&self) -> f64 {
        *self.phi.last().expect("phase has at least one sample")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub ode_rel_tol: f64,
    pub ode_abs_tol: f64,
    pub bisection_tol: f64,
    /// Distance from the right endpoint used when it is limit point.
    pub truncation_eps: f64,
    pub max_refinements: u32,
    pub max_winding: u64,
    pub hs_ceiling: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            ode_rel_tol: 1e-12,
            ode_abs_tol: 1e-13,
            bisection_tol: 1e-12,
            truncation_eps: 1e-6,
            max_refinements: 40,
            max_winding: 10_000_000,
            hs_ceiling: 1e12,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.ode_rel_tol > 0.0
            && self.ode_abs_tol > 0.0
            && self.bisection_tol > 0.0
            && self.truncation_eps > 0.0
            && self.max_winding > 0
            && self.hs_ceiling > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("solver tolerances must be positive".into()))
        }
    }
}

/// `Dir(path, u₀, u₁)` on `[0, T)`.
#[derive(Debug, Clone)]
pub struct DiracOperator {
    path: DrivingPath,
    bc0: BoundaryCondition,
    bc1: BoundaryCondition,
    class: OnceLock<Result<EndpointClass>>,
    provenance: Provenance,
}

impl DiracOperator {
    pub fn new(path: DrivingPath, bc0: BoundaryCondition, bc1: BoundaryCondition) -> Result<Self> {
        let d = (bc0.angle() - bc1.angle()).rem_euclid(TAU);
        if d < 1e-12 || TAU - d < 1e-12 {
            return Err(Error::InvalidInput("boundary conditions are parallel".into()));
        }
        Ok(DiracOperator {
            path,
            bc0,
            bc1,
            class: OnceLock::new(),
            provenance: Provenance::new("custom", None, None),
        })
    }

    /// `Dir(path, η₀, η₁)` with boundary points in half-plane form.
    pub fn with_boundary_points(path: DrivingPath, eta0: BoundaryPoint, eta1: BoundaryPoint) -> Result<Self> {
        Self::new(path, BoundaryCondition::from_boundary(eta0), BoundaryCondition::from_boundary(eta1))
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = p;
        self
    }

    pub fn path(&self) -> &DrivingPath {
        &self.path
    }

    pub fn bc0(&self) -> BoundaryCondition {
        self.bc0
    }

    pub fn bc1(&self) -> BoundaryCondition {
        self.bc1
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Same boundary data on a different path (truncations, rescaled weights).
    pub fn with_path(&self, path: DrivingPath) -> DiracOperator {
        DiracOperator {
            path,
            bc0: self.bc0,
            bc1: self.bc1,
            class: OnceLock::new(),
            provenance: self.provenance.clone(),
        }
    }

    pub(crate) fn class_cell(&self) -> &OnceLock<Result<EndpointClass>> {
        &self.class
    }
}
