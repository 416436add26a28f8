use serde::{Deserialize, Serialize};

use super::{BoundaryConfig, BoundaryOrder};
use crate::fredholm::QuadratureRule;
use crate::kernels::{AiryForm, Variant};
use crate::specfun::airy_unchecked;

/// Asymptotic data at a large `y`: value, two derivatives, and the tail
/// integral over `(y, oo)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryState {
    pub sigma: f64,
    pub sigmap: f64,
    pub sigmapp: f64,
    pub tail: f64,
}

// int_y^oo (Ai'^2 - x Ai^2) dx
fn rho0_integral(y: f64) -> f64 {
    let (a, ap) = airy_unchecked(y);
    (2.0 * y * y * a * a - 2.0 * y * ap * ap - a * ap) / 3.0
}

fn rule(y: f64, cfg: &BoundaryConfig) -> QuadratureRule {
    QuadratureRule::gauss_legendre(y, y + cfg.tail_length, cfg.tail_nodes).expect("validated config")
}

// int_y^oo k1(y, z) k2(y, z) dz
fn cross(k1: &AiryForm, k2: &AiryForm, y: f64, cfg: &BoundaryConfig) -> f64 {
    rule(y, cfg).integrate(|z| k1.value(y, z) * k2.value(y, z))
}

// Tr(k1 k2) on (y, oo)
fn trace2(k1: &AiryForm, k2: &AiryForm, y: f64, cfg: &BoundaryConfig) -> f64 {
    let r = rule(y, cfg);
    let (x, w) = (r.nodes(), r.weights());
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            s += w[i] * w[j] * k1.value(x[i], x[j]) * k2.value(x[j], x[i]);
        }
    }
    s
}

fn jet(f: impl Fn(f64) -> f64, y: f64) -> [f64; 3] {
    let e = 1e-2;
    let (fm, f0, fp) = (f(y - e), f(y), f(y + e));
    [f0, (fp - fm) / (2.0 * e), (fp - 2.0 * f0 + fm) / (e * e)]
}

/// `sigma0` data: `xi rho0` plus, for the extended order,
/// `xi^2 int_y^oo K(y,z)^2 dz`. The tail is the log-determinant series
/// `xi Tr K + xi^2 Tr K^2 / 2`.
pub fn boundary_sigma0(xi: f64, y: f64, cfg: &BoundaryConfig) -> BoundaryState {
    let r = AiryForm::Limit.diag_jet(y);
    let mut s = BoundaryState { sigma: xi * r[0], sigmap: xi * r[1], sigmapp: xi * r[2], tail: xi * rho0_integral(y) };
    if cfg.order == BoundaryOrder::Extended {
        let k = AiryForm::Limit;
        let t = jet(|v| cross(&k, &k, v, cfg), y);
        s.sigma += xi * xi * t[0];
        s.sigmap += xi * xi * t[1];
        s.sigmapp += xi * xi * t[2];
        s.tail += 0.5 * xi * xi * trace2(&k, &k, y, cfg);
    }
    s
}

/// `sigma1` data: `xi rho1` plus, for the extended order,
/// `2 xi^2 int_y^oo K(y,z) L(y,z) dz`. `sigmapp` is fixed by the
/// second-order equation so the solution stays on its manifold.
pub fn boundary_sigma1(variant: Variant, xi: f64, y: f64, cfg: &BoundaryConfig, s0: &BoundaryState) -> BoundaryState {
    let l = AiryForm::from_variant(variant);
    let r = l.diag_jet(y);
    let mut s = BoundaryState {
        sigma: xi * r[0],
        sigmap: xi * r[1],
        sigmapp: xi * r[2],
        tail: xi * rule(y, cfg).integrate(|z| l.diag_jet(z)[0]),
    };
    if cfg.order == BoundaryOrder::Extended {
        let k = AiryForm::Limit;
        let u = jet(|v| 2.0 * cross(&k, &l, v, cfg), y);
        s.sigma += xi * xi * u[0];
        s.sigmap += xi * xi * u[1];
        s.tail += xi * xi * trace2(&k, &l, y, cfg);
    }
    let (a, b, c, d) = second_order_coeffs(variant, y, s0.sigma, s0.sigmap, s0.sigmapp);
    if a != 0.0 {
        s.sigmapp = (d - b * s.sigmap - c * s.sigma) / a;
    }
    s
}

/// `(A, B, C, D)` of `A s1'' + B s1' + C s1 = D`.
pub(crate) fn second_order_coeffs(v: Variant, y: f64, s: f64, sp: f64, spp: f64) -> (f64, f64, f64, f64) {
    let scale = match v {
        Variant::LueAlpha { alpha } => 1.0 + alpha,
        _ => 1.0,
    };
    let a = 2.0 * scale * spp;
    let b = 4.0 * scale * (3.0 * sp * sp - 2.0 * y * sp + s);
    let c = 4.0 * scale * sp;
    let d = match v {
        Variant::Gue => (s - y * sp) * (s - y * sp),
        Variant::Lue => {
            -2f64.powf(4.0 / 3.0)
                * (2.0 * y * s * sp - 3.0 * y * y * sp * sp
                    + 2.0 * s * sp * sp
                    + 4.0 * y * sp * sp * sp
                    + sp * spp
                    + y * spp * spp)
        }
        Variant::LueAlpha { alpha } => {
            let r = (1.0 + alpha).sqrt();
            (1.0 + 1.0 / r).cbrt()
                * (alpha * alpha * r / (1.0 + r).powi(3) * s * s - 2.0 * (1.0 + alpha + r) * y * s * sp
                    + (-8.0 + 8.0 * r - 7.0 * alpha + alpha * alpha + 9.0 * alpha * r) / alpha * y * y * sp * sp
                    - 4.0 * (1.0 + alpha) / (1.0 + r)
                        * (2.0 * s * sp * sp + sp * spp + y * spp * spp + 4.0 * y * sp * sp * sp))
        }
    };
    (a, b, c, d)
}

/// Right side `f` of `s1''' + (12 s0' - 4y) s1' + 2 s1 = f`.
pub(crate) fn forcing(v: Variant, y: f64, s: f64, sp: f64, spp: f64) -> f64 {
    match v {
        Variant::Gue => -y * s + y * y * sp,
        Variant::Lue => 2f64.cbrt() * (2.0 * y * s - 4.0 * s * sp - 2.0 * y * y * sp - 2.0 * spp),
        Variant::LueAlpha { alpha } => {
            let r = (1.0 + alpha).sqrt();
            let g = (r + 1.0).powf(-2.0 / 3.0);
            let k = g / r.cbrt();
            let p = g * r.powf(-4.0 / 3.0) * (r * r - 6.0 * r + 1.0);
            -p * y * s + p * y * y * sp - 8.0 * k * s * sp - 4.0 * k * spp
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::{build_rule, NystromSystem};
    use crate::kernels::KernelSpec;

    #[test]
    fn rho0_integral_matches_quadrature() {
        for &y in &[-3.0, 0.0, 2.5, 8.0] {
            let q = QuadratureRule::gauss_legendre(y, y.max(0.0) + 16.0, 96)
                .unwrap()
                .integrate(|z| AiryForm::Limit.diag_jet(z)[0]);
            assert!((q - rho0_integral(y)).abs() < 1e-14 * q.abs().max(1.0), "y={y}");
        }
    }

    #[test]
    fn alpha_forcing_reduces_to_lue() {
        let (y, s, sp, spp) = (0.7, 0.3, -0.2, 0.15);
        let a = forcing(Variant::LueAlpha { alpha: 1e-9 }, y, s, sp, spp);
        let b = forcing(Variant::Lue, y, s, sp, spp);
        assert!((a - b).abs() < 1e-8);
        let ca = second_order_coeffs(Variant::LueAlpha { alpha: 1e-7 }, y, s, sp, spp).3;
        let cb = second_order_coeffs(Variant::Lue, y, s, sp, spp).3;
        assert!((ca - cb).abs() < 1e-6, "{ca} {cb}");
    }

    // d/dy log det(I - xi K) from the Nyström determinant is the exact
    // sigma0; the xi^2 term must enter with a plus sign.
    #[test]
    fn extended_sign_against_determinant() {
        let xi = 1.0;
        let y = 2.0;
        let cfg = BoundaryConfig::default();
        let logdet = |t: f64| {
            let rule = build_rule(t, 96, 20.0).unwrap();
            NystromSystem::from_specs(&KernelSpec::AiryLimit, None, rule).unwrap().determinant(xi).value.ln()
        };
        let h = 1e-2;
        let exact =
            (-logdet(y + 2.0 * h) + 8.0 * logdet(y + h) - 8.0 * logdet(y - h) + logdet(y - 2.0 * h)) / (12.0 * h);
        let lead = boundary_sigma0(xi, y, &BoundaryConfig { order: BoundaryOrder::Leading, ..cfg });
        let ext = boundary_sigma0(xi, y, &cfg);
        let minus = 2.0 * lead.sigma - ext.sigma;
        assert!((ext.sigma - exact).abs() < (lead.sigma - exact).abs());
        assert!((ext.sigma - exact).abs() < 0.1 * (minus - exact).abs());
        // tail integral against -log det
        assert!((ext.tail + logdet(y)).abs() < 1e-2 * (lead.tail + logdet(y)).abs());
    }
}
