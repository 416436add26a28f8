use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::airy_unchecked;

/// Linear third-order equations satisfied by edge densities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityOde {
    /// `K_N(x, x)` for the weight `e^{-x^2}`, unscaled `x`.
    GueFinite { n: usize },
    /// `K_N(x, x)` for the weight `x^a e^{-x}`, unscaled `x > 0`.
    LueFinite { n: usize, a: f64 },
    /// `rho1` of the `a = alpha N` edge, with `rho0` supplied exactly.
    AlphaLimit { alpha: f64 },
}

/// Pointwise residuals on the interior of a sampled grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityResidual {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest sum of absolute term sizes over the grid.
    pub scale: f64,
}

impl DensityResidual {
    pub fn relative_max(&self) -> f64 {
        let m = self.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if self.scale > 0.0 {
            m / self.scale
        } else {
            m
        }
    }
}

fn terms(ode: DensityOde, x: f64, d: [f64; 4]) -> Vec<f64> {
    let [s, s1, s2, s3] = d;
    match ode {
        DensityOde::GueFinite { n } => {
            let n = n as f64;
            vec![s3, -4.0 * x * x * s1, 4.0 * x * s, 8.0 * n * s1]
        }
        DensityOde::LueFinite { n, a } => {
            let m = 2.0 * n as f64 + a;
            vec![x * x * x * s3, 4.0 * x * x * s2, -x * (x * x - 2.0 * m * x + a * a - 2.0) * s1, (m * x - a * a) * s]
        }
        DensityOde::AlphaLimit { alpha } => {
            let r = (1.0 + alpha).sqrt();
            let (ai, aip) = airy_unchecked(x);
            let (r0, r0p, r0pp, r0ppp) =
                (aip * aip - x * ai * ai, -ai * ai, -2.0 * ai * aip, -2.0 * aip * aip - 2.0 * x * ai * ai);
            let c = (1.0 / r + 1.0).powf(2.0 / 3.0) * (1.0 + alpha);
            vec![
                c * s3,
                -4.0 * c * x * s1,
                2.0 * c * s,
                r * 3.0 * x * r0ppp,
                r * 4.0 * r0pp,
                -r * 6.0 * x * x * r0p,
                -(2.0 + alpha) * x * x * r0p,
                (2.0 + alpha) * x * r0,
            ]
        }
    }
}

/// Residual of `ode` for samples `values[i] = sigma(x0 + i h)`, using
/// fourth-order differences for the first two derivatives and a
/// second-order seven-point stencil for the third.
pub fn density_residual(ode: DensityOde, values: &[f64], x0: f64, h: f64) -> Result<DensityResidual> {
    if values.len() < 7 {
        return Err(Error::InvalidParameter(format!("{} samples; need at least 7", values.len())));
    }
    if !(h > 0.0 && h.is_finite() && x0.is_finite()) {
        return Err(Error::InvalidParameter(format!("bad grid x0 = {x0}, h = {h}")));
    }
    match ode {
        DensityOde::GueFinite { n } | DensityOde::LueFinite { n, .. } if n == 0 => {
            return Err(Error::InvalidParameter("N must be at least 1".into()))
        }
        DensityOde::LueFinite { a, .. } if !(a >= 0.0) => {
            return Err(Error::InvalidParameter(format!("a = {a} must be >= 0")))
        }
        DensityOde::AlphaLimit { alpha } if !(alpha > 0.0) => {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} must be positive")))
        }
        _ => {}
    }
    let mut out = DensityResidual { xs: vec![], values: vec![], scale: 0.0 };
    for i in 3..values.len() - 3 {
        let f = |k: isize| values[(i as isize + k) as usize];
        let d1 = (-f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2)) / (12.0 * h);
        let d2 = (-f(2) + 16.0 * f(1) - 30.0 * f(0) + 16.0 * f(-1) - f(-2)) / (12.0 * h * h);
        let d3 = (-f(3) + 8.0 * f(2) - 13.0 * f(1) + 13.0 * f(-1) - 8.0 * f(-2) + f(-3)) / (8.0 * h * h * h);
        let x = x0 + i as f64 * h;
        let t = terms(ode, x, [f(0), d1, d2, d3]);
        out.xs.push(x);
        out.values.push(t.iter().sum());
        out.scale = out.scale.max(t.iter().map(|v| v.abs()).sum());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{density_correction, Variant};
    use crate::specfun::Family;

    fn sample(f: impl Fn(f64) -> f64, x0: f64, h: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| f(x0 + i as f64 * h)).collect()
    }

    #[test]
    fn gue_density_satisfies_equation() {
        for n in [1, 4, 12] {
            let h = 0.005;
            let v = sample(|x| Family::Hermite.kernel_sum(n, x, x), -3.0, h, 1201);
            let r = density_residual(DensityOde::GueFinite { n }, &v, -3.0, h).unwrap();
            assert!(r.relative_max() < 1e-6, "N={n}: {}", r.relative_max());
        }
    }

    #[test]
    fn lue_density_satisfies_equation() {
        for (n, a) in [(3, 0.0), (6, 1.5), (10, 4.0)] {
            let h = 0.005;
            let v = sample(|x| Family::Laguerre(a).kernel_sum(n, x, x), 0.5, h, 2001);
            let r = density_residual(DensityOde::LueFinite { n, a }, &v, 0.5, h).unwrap();
            assert!(r.relative_max() < 1e-6, "N={n}, a={a}: {}", r.relative_max());
        }
    }

    #[test]
    fn alpha_correction_density_satisfies_equation() {
        for alpha in [0.5, 2.0, 5.0] {
            let h = 0.005;
            let v = sample(|y| density_correction(Variant::LueAlpha { alpha }, y).unwrap().1, -4.0, h, 1601);
            let r = density_residual(DensityOde::AlphaLimit { alpha }, &v, -4.0, h).unwrap();
            assert!(r.relative_max() < 1e-6, "alpha={alpha}: {}", r.relative_max());
        }
    }

    #[test]
    fn wrong_parameter_shows_up() {
        let h = 0.005;
        let v = sample(|x| Family::Hermite.kernel_sum(4, x, x), -3.0, h, 1201);
        let r = density_residual(DensityOde::GueFinite { n: 5 }, &v, -3.0, h).unwrap();
        assert!(r.relative_max() > 1e-2);
    }

    #[test]
    fn short_grid_rejected() {
        assert!(density_residual(DensityOde::GueFinite { n: 2 }, &[0.0; 6], 0.0, 0.1).is_err());
    }
}
