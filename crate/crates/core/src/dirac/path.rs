use serde::{Deserialize, Serialize};

use crate::dirac::EndpointClass;
use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, PlanePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interpolation {
    /// One value per cell, held constant on the cell.
    PiecewiseConstant,
    /// One value per grid node; `x` linear and `log y` linear on each cell.
    LinearInLogY,
}

/// Time-gridded hyperbolic path together with the weight `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrivingPath {
    grid: Vec<f64>,
    values: Vec<PlanePoint>,
    interpolation: Interpolation,
    weight: Vec<f64>,
    boundary_limit: Option<BoundaryPoint>,
    tail_rule: Option<EndpointClass>,
}

impl DrivingPath {
    pub fn new(
        grid: Vec<f64>,
        values: Vec<PlanePoint>,
        interpolation: Interpolation,
        weight: Vec<f64>,
    ) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidInput("grid needs at least one cell".into()));
        }
        if grid[0] != 0.0 {
            return Err(Error::InvalidInput("grid must start at 0".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || !grid[grid.len() - 1].is_finite() {
            return Err(Error::InvalidInput("grid must be finite and strictly increasing".into()));
        }
        let cells = grid.len() - 1;
        let want = match interpolation {
            Interpolation::PiecewiseConstant => cells,
            Interpolation::LinearInLogY => cells + 1,
        };
        if values.len() != want {
            return Err(Error::InvalidInput(format!(
                "expected {want} path values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|p| !(p.y > 0.0 && p.y.is_finite() && p.x.is_finite())) {
            return Err(Error::InvalidInput("path leaves the half plane".into()));
        }
        if weight.len() != cells || weight.iter().any(|f| !(*f > 0.0 && f.is_finite())) {
            return Err(Error::InvalidInput("weight must be positive, one value per cell".into()));
        }
        Ok(DrivingPath {
            grid,
            values,
            interpolation,
            weight,
            boundary_limit: None,
            tail_rule: None,
        })
    }

    /// Piecewise constant path with the common weight `f = 1/2`.
    pub fn piecewise_constant(grid: Vec<f64>, values: Vec<PlanePoint>) -> Result<Self> {
        let w = vec![0.5; grid.len().saturating_sub(1)];
        Self::new(grid, values, Interpolation::PiecewiseConstant, w)
    }

    /// Constant path at `p` on `[0, t_end)`, split into `cells` equal cells, `f = 1/2`.
    pub fn constant(p: PlanePoint, t_end: f64, cells: usize) -> Result<Self> {
        let cells = cells.max(1);
        let grid = (0..=cells).map(|k| t_end * k as f64 / cells as f64).collect();
        Self::piecewise_constant(grid, vec![p; cells])
    }

    pub fn with_boundary_limit(mut self, b: BoundaryPoint) -> Self {
        self.boundary_limit = Some(b);
        self
    }

    /// Attach the analytic endpoint classification of the generating model.
    pub fn with_tail_rule(mut self, c: EndpointClass) -> Self {
        self.tail_rule = Some(c);
        self
    }

    pub fn with_weight(mut self, weight: Vec<f64>) -> Result<Self> {
        if weight.len() != self.cells() || weight.iter().any(|f| !(*f > 0.0 && f.is_finite())) {
            return Err(Error::InvalidInput("weight must be positive, one value per cell".into()));
        }
        self.weight = weight;
        Ok(self)
    }

    /// Same path with `f` multiplied by `c`.
    pub fn scaled_weight(&self, c: f64) -> Result<Self> {
        let w = self.weight.iter().map(|f| f * c).collect();
        self.clone().with_weight(w)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[PlanePoint] {
        &self.values
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn boundary_limit(&self) -> Option<BoundaryPoint> {
        self.boundary_limit
    }

    pub fn tail_rule(&self) -> Option<EndpointClass> {
        self.tail_rule
    }

    pub fn cells(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    /// Path value at time `t` inside cell `k`.
    pub fn point_in_cell(&self, k: usize, t: f64) -> PlanePoint {
        match self.interpolation {
            Interpolation::PiecewiseConstant => self.values[k],
            Interpolation::LinearInLogY => {
                let (t0, t1) = (self.grid[k], self.grid[k + 1]);
                let u = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
                let (a, b) = (self.values[k], self.values[k + 1]);
                PlanePoint {
                    x: a.x + u * (b.x - a.x),
                    y: a.y * (b.y / a.y).powf(u),
                }
            }
        }
    }

    /// Representative value of cell `k` (its midpoint for interpolated paths).
    pub fn cell_value(&self, k: usize) -> PlanePoint {
        self.point_in_cell(k, 0.5 * (self.grid[k] + self.grid[k + 1]))
    }

    /// Restriction of the path to `[0, t_end]`; the last cell may be shortened.
    pub fn truncated(&self, t_end: f64) -> Result<Self> {
        if !(t_end > 0.0) || t_end > self.horizon() {
            return Err(Error::InvalidInput(format!("cannot truncate at {t_end}")));
        }
        let k = self.grid.partition_point(|&t| t < t_end);
        // grid[k-1] < t_end <= grid[k]
        let mut grid = self.grid[..k].to_vec();
        grid.push(t_end);
        let values = match self.interpolation {
            Interpolation::PiecewiseConstant => self.values[..k].to_vec(),
            Interpolation::LinearInLogY => {
                let mut v = self.values[..k].to_vec();
                v.push(self.point_in_cell(k - 1, t_end));
                v
            }
        };
        let weight = self.weight[..k].to_vec();
        Ok(DrivingPath {
            grid,
            values,
            interpolation: self.interpolation,
            weight,
            boundary_limit: self.boundary_limit,
            tail_rule: self.tail_rule,
        })
    }
}
