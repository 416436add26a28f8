use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which soft-edge map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "ensemble", rename_all = "kebab-case")]
pub enum Ensemble {
    Gue,
    LueFixed { a: f64 },
    LueAlpha { alpha: f64 },
}

/// Affine soft-edge map `t -> s_t = center + jacobian * t`.
///
/// * GUE: `s_t = sqrt(2N) + t / (sqrt(2) N^{1/6})`
/// * LUE, fixed `a`: `s_t = 4N + 2a + 2 (2N)^{1/3} t`
/// * LUE, `a = alpha N`: `s_t = N (sqrt(1+alpha) + 1)^2 + c_alpha N^{1/3} t`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeScaling {
    ensemble: Ensemble,
    n: usize,
    center: f64,
    jacobian: f64,
}

/// `c_alpha = (sqrt(1+alpha) + 1) (1/sqrt(1+alpha) + 1)^{1/3}`; equals
/// `2 * 2^{1/3}` at `alpha = 0`.
pub fn c_alpha(alpha: f64) -> f64 {
    let r = (1.0 + alpha).sqrt();
    (r + 1.0) * (1.0 / r + 1.0).cbrt()
}

impl EdgeScaling {
    pub fn gue(n: usize) -> Result<Self> {
        check(n)?;
        let nf = n as f64;
        Ok(EdgeScaling {
            ensemble: Ensemble::Gue,
            n,
            center: (2.0 * nf).sqrt(),
            jacobian: 1.0 / (2f64.sqrt() * nf.powf(1.0 / 6.0)),
        })
    }

    pub fn lue_fixed(n: usize, a: f64) -> Result<Self> {
        check(n)?;
        if !(a.is_finite() && a > -1.0) {
            return Err(Error::InvalidParameter(format!("a = {a} must exceed -1")));
        }
        let nf = n as f64;
        Ok(EdgeScaling {
            ensemble: Ensemble::LueFixed { a },
            n,
            center: 4.0 * nf + 2.0 * a,
            jacobian: 2.0 * (2.0 * nf).cbrt(),
        })
    }

    /// `alpha = 0` is allowed here and gives the fixed `a = 0` map.
    pub fn lue_alpha(n: usize, alpha: f64) -> Result<Self> {
        check(n)?;
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} must be >= 0")));
        }
        let nf = n as f64;
        let r = (1.0 + alpha).sqrt();
        Ok(EdgeScaling {
            ensemble: Ensemble::LueAlpha { alpha },
            n,
            center: nf * (r + 1.0) * (r + 1.0),
            jacobian: c_alpha(alpha) * nf.cbrt(),
        })
    }

    pub fn ensemble(&self) -> Ensemble {
        self.ensemble
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Laguerre exponent (zero for GUE).
    pub fn a(&self) -> f64 {
        match self.ensemble {
            Ensemble::Gue => 0.0,
            Ensemble::LueFixed { a } => a,
            Ensemble::LueAlpha { alpha } => alpha * self.n as f64,
        }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn jacobian(&self) -> f64 {
        self.jacobian
    }

    pub fn s(&self, t: f64) -> f64 {
        self.center + self.jacobian * t
    }

    pub fn t_of(&self, s: f64) -> f64 {
        (s - self.center) / self.jacobian
    }

    /// Smallest admissible `t` (exclusive) for Laguerre maps.
    pub fn support_floor(&self) -> Option<f64> {
        match self.ensemble {
            Ensemble::Gue => None,
            _ => Some(self.t_of(0.0)),
        }
    }
}

fn check(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    Ok(())
}
