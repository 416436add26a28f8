//! Two-point kernels: the Airy kernel, the `N^{-2/3}` correction kernels,
//! and the soft-edge scaled finite-N GUE/LUE kernels.

mod airy_family;
mod finite;
mod scaling;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use airy_family::AiryForm;
pub use finite::FiniteKernel;
pub use scaling::{c_alpha, EdgeScaling, Ensemble};

/// Below this separation divided-difference kernels switch to a series
/// about the midpoint.
pub const DIAGONAL_DELTA: f64 = 1e-4;

/// Which kernel to evaluate, with the parameters it needs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KernelSpec {
    AiryLimit,
    CorrectionGue,
    CorrectionLue,
    CorrectionLueAlpha {
        alpha: f64,
    },
    FiniteGue {
        n: usize,
    },
    /// Fixed Laguerre exponent `a`.
    FiniteLue {
        n: usize,
        a: f64,
    },
    /// Laguerre exponent `a = alpha N`, scaled about the `alpha` edge.
    FiniteLueAlpha {
        n: usize,
        alpha: f64,
    },
}

/// The three correction settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum Variant {
    Gue,
    Lue,
    LueAlpha { alpha: f64 },
}

impl Variant {
    pub fn correction_spec(self) -> KernelSpec {
        match self {
            Variant::Gue => KernelSpec::CorrectionGue,
            Variant::Lue => KernelSpec::CorrectionLue,
            Variant::LueAlpha { alpha } => KernelSpec::CorrectionLueAlpha { alpha },
        }
    }

    pub fn validate(self) -> Result<()> {
        if let Variant::LueAlpha { alpha } = self {
            check_alpha(alpha)?;
        }
        Ok(())
    }

    pub fn tag(self) -> String {
        match self {
            Variant::Gue => "gue".into(),
            Variant::Lue => "lue".into(),
            Variant::LueAlpha { alpha } => format!("lue-alpha({alpha})"),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must be positive and finite")));
    }
    Ok(())
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::CorrectionLueAlpha { alpha } => check_alpha(alpha),
            KernelSpec::FiniteGue { n } => check_n(n),
            KernelSpec::FiniteLue { n, a } => {
                check_n(n)?;
                if !(a.is_finite() && a >= 0.0) {
                    return Err(Error::InvalidParameter(format!("a = {a} must be finite and >= 0")));
                }
                Ok(())
            }
            KernelSpec::FiniteLueAlpha { n, alpha } => {
                check_n(n)?;
                check_alpha(alpha)
            }
            _ => Ok(()),
        }
    }

    pub fn is_finite_n(&self) -> bool {
        matches!(self, KernelSpec::FiniteGue { .. } | KernelSpec::FiniteLue { .. } | KernelSpec::FiniteLueAlpha { .. })
    }

    pub fn is_correction(&self) -> bool {
        matches!(self, KernelSpec::CorrectionGue | KernelSpec::CorrectionLue | KernelSpec::CorrectionLueAlpha { .. })
    }

    /// Short tag used in exported metadata.
    pub fn tag(&self) -> String {
        match *self {
            KernelSpec::AiryLimit => "airy".into(),
            KernelSpec::CorrectionGue => "correction-gue".into(),
            KernelSpec::CorrectionLue => "correction-lue".into(),
            KernelSpec::CorrectionLueAlpha { alpha } => format!("correction-lue-alpha({alpha})"),
            KernelSpec::FiniteGue { n } => format!("finite-gue(N={n})"),
            KernelSpec::FiniteLue { n, a } => format!("finite-lue(N={n},a={a})"),
            KernelSpec::FiniteLueAlpha { n, alpha } => format!("finite-lue-alpha(N={n},alpha={alpha})"),
        }
    }

    /// Edge scaling of a finite-N spec.
    pub fn scaling(&self) -> Option<EdgeScaling> {
        match *self {
            KernelSpec::FiniteGue { n } => EdgeScaling::gue(n).ok(),
            KernelSpec::FiniteLue { n, a } => EdgeScaling::lue_fixed(n, a).ok(),
            KernelSpec::FiniteLueAlpha { n, alpha } => EdgeScaling::lue_alpha(n, alpha).ok(),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<Box<dyn Kernel>> {
        self.validate()?;
        Ok(match *self {
            KernelSpec::AiryLimit => Box::new(AiryForm::Limit),
            KernelSpec::CorrectionGue => Box::new(AiryForm::Gue),
            KernelSpec::CorrectionLue => Box::new(AiryForm::Lue),
            KernelSpec::CorrectionLueAlpha { alpha } => Box::new(AiryForm::alpha(alpha)),
            _ => Box::new(FiniteKernel::new(self)?),
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    Ok(())
}

/// A symmetric kernel that can be sampled on quadrature nodes.
pub trait Kernel: Send + Sync {
    fn eval(&self, x: f64, y: f64) -> Result<f64>;

    /// `K(x_i, x_j)` for all node pairs.
    fn matrix(&self, nodes: &[f64]) -> Result<DMatrix<f64>> {
        let m = nodes.len();
        let mut k = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = self.eval(nodes[i], nodes[j])?;
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
        Ok(k)
    }
}

/// The Airy kernel `(Ai(x)Ai'(y) - Ai'(x)Ai(y)) / (x - y)`.
pub fn airy_kernel(x: f64, y: f64) -> f64 {
    AiryForm::Limit.value(x, y)
}

/// Fixed-`a` correction kernel `L(x, y)` for [`KernelSpec::CorrectionGue`]
/// or [`KernelSpec::CorrectionLue`].
///
/// The LUE branch is the `alpha -> 0` limit of [`correction_kernel_alpha`].
/// The typeset alternative is kept as [`correction_kernel_lue_printed`]
/// for comparison only.
pub fn correction_kernel(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    match spec {
        KernelSpec::CorrectionGue => Ok(AiryForm::Gue.value(x, y)),
        KernelSpec::CorrectionLue => Ok(AiryForm::Lue.value(x, y)),
        other => Err(Error::InvalidParameter(format!(
            "correction_kernel expects a fixed-a correction kind, got {}",
            other.tag()
        ))),
    }
}

/// The LUE correction kernel as commonly typeset, with `(x^2 + xy + y^2)`
/// multiplying `Ai'(x)Ai'(y)` and a `3/2` cross term. It is not the limit
/// of the finite-N kernel; see the crate README.
pub fn correction_kernel_lue_printed(x: f64, y: f64) -> f64 {
    AiryForm::LuePrinted.value(x, y)
}

/// Correction kernel `L_alpha(x, y)` for the LUE with `a = alpha N`.
pub fn correction_kernel_alpha(alpha: f64, x: f64, y: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(AiryForm::alpha(alpha).value(x, y))
}

/// `(ds/dt) K_N(s_x, s_y)` for a finite-N spec.
pub fn finite_kernel_scaled(spec: &KernelSpec, scaling: &EdgeScaling, x: f64, y: f64) -> Result<f64> {
    let k = FiniteKernel::new(spec)?;
    if k.scaling() != scaling {
        return Err(Error::InvalidParameter(format!("scaling {scaling:?} does not belong to {}", spec.tag())));
    }
    k.eval(x, y)
}

/// Leading and correction edge densities `(rho0, rho1)` at `y`.
pub fn density_correction(variant: Variant, y: f64) -> Result<(f64, f64)> {
    variant.validate()?;
    if !y.is_finite() {
        return Err(Error::Domain(format!("density_correction: non-finite y = {y}")));
    }
    let rho0 = AiryForm::Limit.diag_jet(y)[0];
    let rho1 = AiryForm::from_variant(variant).diag_jet(y)[0];
    Ok((rho0, rho1))
}
