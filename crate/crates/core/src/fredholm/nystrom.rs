use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::QuadratureRule;
use crate::error::{Error, Result};
use crate::kernels::{Kernel, KernelSpec};

/// `det(I - xi Kw)`; `singular` marks an underflowed or degenerate factorisation
/// (in which case `value` is 0).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Determinant {
    pub value: f64,
    pub singular: bool,
}

/// Kernel matrices sampled on a quadrature rule, columns scaled by the weights.
#[derive(Clone, Debug)]
pub struct NystromSystem {
    rule: QuadratureRule,
    kw: DMatrix<f64>,
    lw: Option<DMatrix<f64>>,
}

fn weighted(mut m: DMatrix<f64>, w: &[f64]) -> DMatrix<f64> {
    for (j, &wj) in w.iter().enumerate() {
        m.column_mut(j).scale_mut(wj);
    }
    m
}

impl NystromSystem {
    pub fn new(k: &dyn Kernel, l: Option<&dyn Kernel>, rule: QuadratureRule) -> Result<Self> {
        let kw = weighted(k.matrix(rule.nodes())?, rule.weights());
        let lw = match l {
            Some(l) => Some(weighted(l.matrix(rule.nodes())?, rule.weights())),
            None => None,
        };
        Ok(NystromSystem { rule, kw, lw })
    }

    pub fn from_specs(k: &KernelSpec, l: Option<&KernelSpec>, rule: QuadratureRule) -> Result<Self> {
        let kk = k.build()?;
        let ll = l.map(|s| s.build()).transpose()?;
        Self::new(kk.as_ref(), ll.as_deref(), rule)
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn kw(&self) -> &DMatrix<f64> {
        &self.kw
    }

    pub fn lw(&self) -> Option<&DMatrix<f64>> {
        self.lw.as_ref()
    }

    /// `D^{1/2} Kw D^{-1/2}` with `D = diag(weights)`; symmetric up to rounding.
    pub fn symmetrized(&self) -> DMatrix<f64> {
        let w = self.rule.weights();
        DMatrix::from_fn(w.len(), w.len(), |i, j| w[i].sqrt() * self.kw[(i, j)] / w[j].sqrt())
    }

    fn system(&self, xi: f64) -> DMatrix<f64> {
        let m = self.kw.nrows();
        DMatrix::identity(m, m) - &self.kw * xi
    }

    pub fn determinant(&self, xi: f64) -> Determinant {
        let lu = self.system(xi).lu();
        classify(lu.determinant())
    }

    /// Determinant and, when a correction kernel is present, `Omega`.
    pub fn evaluate(&self, xi: f64) -> Result<(Determinant, Option<f64>)> {
        let lu = self.system(xi).lu();
        let det = classify(lu.determinant());
        let om = match &self.lw {
            None => None,
            Some(lw) => {
                if det.singular {
                    return Err(Error::SingularSystem { order: self.rule.order(), t: self.rule.t() });
                }
                let x =
                    lu.solve(&(lw * xi)).ok_or(Error::SingularSystem { order: self.rule.order(), t: self.rule.t() })?;
                Some(-det.value * x.trace())
            }
        };
        Ok((det, om))
    }
}

fn classify(d: f64) -> Determinant {
    if d.is_finite() && d.abs() > 1e-300 {
        Determinant { value: d, singular: false }
    } else {
        Determinant { value: 0.0, singular: true }
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::InvalidParameter(format!("xi = {xi} must lie in [0, 1]")));
    }
    Ok(())
}

/// `det(I - xi K)` on the rule's interval.
pub fn fredholm_det(spec: &KernelSpec, xi: f64, rule: &QuadratureRule) -> Result<Determinant> {
    check_xi(xi)?;
    if xi == 0.0 {
        return Ok(Determinant { value: 1.0, singular: false });
    }
    Ok(NystromSystem::from_specs(spec, None, rule.clone())?.determinant(xi))
}

/// `Omega(xi K) : xi L` on the rule's interval.
pub fn omega(spec_k: &KernelSpec, spec_l: &KernelSpec, xi: f64, rule: &QuadratureRule) -> Result<f64> {
    check_xi(xi)?;
    if !spec_l.is_correction() {
        return Err(Error::InvalidParameter(format!("{} is not a correction kernel", spec_l.tag())));
    }
    if xi == 0.0 {
        return Ok(0.0);
    }
    let sys = NystromSystem::from_specs(spec_k, Some(spec_l), rule.clone())?;
    Ok(sys.evaluate(xi)?.1.unwrap_or(0.0))
}
