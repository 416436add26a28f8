//! Sigma-form Painlevé II route. `sigma0` solves
//! `(s'')^2 + 4 s' (s'^2 - y s' + s) = 0` through its differentiated form
//! `s''' = -6 s'^2 + 4 y s' - 2 s`, with the quadratic form kept as a
//! residual monitor. `sigma1` solves the linearised third-order equation
//! `s1''' + (12 s0' - 4y) s1' + 2 s1 = f(y)` whose forcing depends on the
//! ensemble. Both are integrated downward from large `y` where the
//! asymptotic data `xi rho0`, `xi rho1` apply.

mod assemble;
mod boundary;
mod density;
mod ode;
mod solve;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use assemble::state_at;
pub use assemble::{
    assemble_pdf, checkpoint, ode_curve, ode_curve_with_tolerance, write_solution_csv, Checkpoint,
    CHECKPOINT_TOLERANCE, SOLUTION_HEADER,
};
pub use boundary::{boundary_sigma0, boundary_sigma1, BoundaryState};
pub use density::{density_residual, DensityOde, DensityResidual};
pub use solve::{solve_sigma0, solve_sigma1, solve_system};

/// Asymptotic matching order at `y_start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryOrder {
    /// `sigma ~ xi rho`.
    Leading,
    /// Adds the `xi^2` terms of the log-determinant series.
    Extended,
}

/// Where and how the integration starts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConfig {
    pub y_start: f64,
    pub order: BoundaryOrder,
    /// Gauss–Legendre nodes for the tail integrals on `[y, y + tail_length]`.
    pub tail_nodes: usize,
    pub tail_length: f64,
    /// Spacing of the stored solution grid.
    pub step: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        BoundaryConfig {
            y_start: 8.0,
            order: BoundaryOrder::Extended,
            tail_nodes: 64,
            tail_length: 12.0,
            step: 1.0 / 64.0,
            rtol: 1e-11,
            atol: 1e-30,
        }
    }
}

impl BoundaryConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.y_start >= 4.0 && self.y_start.is_finite()) {
            return Err(Error::InvalidParameter(format!("y_start = {} must be at least 4", self.y_start)));
        }
        if self.tail_nodes < 8 || !(self.tail_length > 0.0) {
            return Err(Error::InvalidParameter("tail quadrature needs >= 8 nodes on a positive length".into()));
        }
        if !(self.step > 0.0 && self.step <= 1.0) {
            return Err(Error::InvalidParameter(format!("grid step {} must lie in (0, 1]", self.step)));
        }
        if !(self.rtol > 0.0 && self.atol >= 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Integrated trajectories on a decreasing grid starting at `y_start`.
///
/// `int0[i]` and `int1[i]` are the tail integrals of `sigma0` and
/// `sigma1` over `(grid[i], oo)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PainleveSolution {
    pub xi: f64,
    pub variant: Option<crate::kernels::Variant>,
    pub config: BoundaryConfig,
    pub grid: Vec<f64>,
    pub sigma0: Vec<f64>,
    pub sigma0p: Vec<f64>,
    pub sigma0pp: Vec<f64>,
    pub int0: Vec<f64>,
    pub sigma1: Option<Vec<f64>>,
    pub sigma1p: Option<Vec<f64>>,
    pub sigma1pp: Option<Vec<f64>>,
    pub int1: Option<Vec<f64>>,
    /// Relative residual of the quadratic sigma-form.
    pub residual0: Vec<f64>,
    /// Relative residual of the second-order `sigma1` equation.
    pub residual1: Option<Vec<f64>>,
    /// Set when the integration stopped early.
    pub diverged_at: Option<f64>,
}

impl PainleveSolution {
    pub fn y_min(&self) -> f64 {
        *self.grid.last().unwrap_or(&self.config.y_start)
    }

    pub fn max_residual0(&self) -> f64 {
        self.residual0.iter().copied().fold(0.0, f64::max)
    }
}
