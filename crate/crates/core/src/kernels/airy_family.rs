use nalgebra::DMatrix;

use super::{Kernel, Variant, DIAGONAL_DELTA};
use crate::error::Result;
use crate::specfun::airy_unchecked;
use crate::specfun::series::{airy_series, Scalar, Series2};

/// Kernels built from `Ai` and `Ai'` at the two arguments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum AiryForm {
    Limit,
    Gue,
    Lue,
    LuePrinted,
    Alpha(AlphaCoef),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct AlphaCoef {
    c1: f64,
    c2: f64,
    p: f64,
    q: f64,
    s: f64,
}

impl AiryForm {
    pub fn alpha(alpha: f64) -> Self {
        let r = (1.0 + alpha).sqrt();
        AiryForm::Alpha(AlphaCoef {
            c1: alpha * alpha * (1.0 + alpha + r).cbrt() / (32.0 * (1.0 + alpha).powf(5.0 / 6.0) * (1.0 + r).powi(3)),
            c2: 1.0 / (160.0 * (1.0 + alpha).powf(2.0 / 3.0) * (1.0 + r).powf(2.0 / 3.0)),
            p: 2.0 + alpha - 6.0 * r,
            q: 6.0 + 2.0 * r + 3.0 * alpha,
            s: (r - 1.0) * (r - 1.0),
        })
    }

    pub fn from_variant(v: Variant) -> Self {
        match v {
            Variant::Gue => AiryForm::Gue,
            Variant::Lue => AiryForm::Lue,
            Variant::LueAlpha { alpha } => AiryForm::alpha(alpha),
        }
    }

    // Forms carrying an explicit 1/(x - y).
    fn divided(&self) -> bool {
        matches!(self, AiryForm::Limit | AiryForm::Alpha(_))
    }

    fn numerator<T: Scalar>(&self, x: T, y: T, ax: T, apx: T, ay: T, apy: T) -> T {
        match self {
            AiryForm::Limit => ax * apy - apx * ay,
            AiryForm::Gue => {
                let q = x * x + x * y + y * y;
                ((x + y) * apx * apy - q * ax * ay + (apx * ay + ax * apy).scale(1.5)).scale(1.0 / 20.0)
            }
            AiryForm::Lue => {
                let q = x * x + x * y + y * y;
                (q * ax * ay - (x + y) * apx * apy + apx * ay + ax * apy).scale(2f64.cbrt() / 10.0)
            }
            AiryForm::LuePrinted => {
                let q = x * x + x * y + y * y;
                (q * apx * apy - q * ax * ay + (apx * ay + ax * apy).scale(1.5)).scale(2f64.cbrt() / 10.0)
            }
            AiryForm::Alpha(c) => {
                let r2 = x * x + y * y;
                let r4 = r2 * r2;
                let dxy = x - y;
                let first = (r4 * (ax * apy - apx * ay)).scale(-c.c1);
                let cube = x * x * x - y * y * y;
                let sq = x * x - y * y;
                let bracket = (cube * ax * ay).scale(-8.0 * c.p)
                    + (dxy.scale(4.0 * c.q) - r4.scale(5.0 * c.s)) * ay * apx
                    + (dxy.scale(4.0 * c.q) + r4.scale(5.0 * c.s)) * ax * apy
                    + (sq * apx * apy).scale(8.0 * c.p);
                first + bracket.scale(c.c2)
            }
        }
    }

    fn eval_values(&self, x: f64, y: f64, (ax, apx): (f64, f64), (ay, apy): (f64, f64)) -> f64 {
        let num = self.numerator(x, y, ax, apx, ay, apy);
        if !self.divided() {
            return num;
        }
        let d = x - y;
        if d.abs() >= DIAGONAL_DELTA {
            num / d
        } else {
            self.near_diagonal(x, y)
        }
    }

    // Quotient expanded in d = x - y about the midpoint.
    fn near_diagonal(&self, x: f64, y: f64) -> f64 {
        let m = 0.5 * (x + y);
        let d = x - y;
        let xs = Series2::<1, 6>::affine(m, 0.0, 0.5);
        let ys = Series2::<1, 6>::affine(m, 0.0, -0.5);
        let (ax, apx) = airy_series::<1, 6>(m, 0.0, 0.5);
        let (ay, apy) = airy_series::<1, 6>(m, 0.0, -0.5);
        let n = self.numerator(xs, ys, ax, apx, ay, apy);
        n.c[0][1..].iter().rev().fold(0.0, |acc, &c| acc * d + c)
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.eval_values(x, y, airy_unchecked(x), airy_unchecked(y))
    }

    /// `k(y, y)` with its first two derivatives along the diagonal.
    pub fn diag_jet(&self, y: f64) -> [f64; 3] {
        let xs = Series2::<3, 2>::affine(y, 1.0, 0.5);
        let ys = Series2::<3, 2>::affine(y, 1.0, -0.5);
        let (ax, apx) = airy_series::<3, 2>(y, 1.0, 0.5);
        let (ay, apy) = airy_series::<3, 2>(y, 1.0, -0.5);
        let n = self.numerator(xs, ys, ax, apx, ay, apy);
        let col = usize::from(self.divided());
        [n.c[0][col], n.c[1][col], 2.0 * n.c[2][col]]
    }
}

impl Kernel for AiryForm {
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.value(x, y))
    }

    fn matrix(&self, nodes: &[f64]) -> Result<DMatrix<f64>> {
        let m = nodes.len();
        let vals: Vec<(f64, f64)> = nodes.iter().map(|&x| airy_unchecked(x)).collect();
        let mut k = DMatrix::zeros(m, m);
        for i in 0..m {
            k[(i, i)] = self.diag_jet(nodes[i])[0];
            for j in i + 1..m {
                let v = self.eval_values(nodes[i], nodes[j], vals[i], vals[j]);
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{
        airy_kernel, correction_kernel, correction_kernel_alpha, correction_kernel_lue_printed, density_correction,
        KernelSpec,
    };
    use crate::specfun::airy;
    use proptest::prelude::*;

    const AI0: f64 = 0.355_028_053_887_817_2;
    const AIP0: f64 = -0.258_819_403_792_806_8;

    fn rho1_lue(y: f64) -> f64 {
        let (a, ap) = airy_unchecked(y);
        2f64.cbrt() / 10.0 * (3.0 * y * y * a * a - 2.0 * y * ap * ap + 2.0 * a * ap)
    }

    fn rho1_gue(y: f64) -> f64 {
        let (a, ap) = airy_unchecked(y);
        -(3.0 * y * y * a * a - 2.0 * y * ap * ap - 3.0 * a * ap) / 20.0
    }

    #[test]
    fn airy_kernel_values() {
        assert!((airy_kernel(0.0, 0.0) - AIP0 * AIP0).abs() < 1e-15);
        assert!((airy_kernel(0.0, 0.0) - 0.066_987_483_779_664).abs() < 1e-15);
        let a2 = airy(2.0).unwrap();
        let a1 = airy(1.0).unwrap();
        let want = a2.ai * a1.ai_prime - a2.ai_prime * a1.ai;
        assert!((airy_kernel(2.0, 1.0) - want).abs() < 1e-16);
        assert_eq!(airy_kernel(1.3, -0.7), airy_kernel(-0.7, 1.3));
    }

    #[test]
    fn correction_diagonals() {
        let g = correction_kernel(&KernelSpec::CorrectionGue, 0.0, 0.0).unwrap();
        assert!((g - 0.15 * AI0 * AIP0).abs() < 1e-15);
        assert!((g + 0.013_784).abs() < 1e-6);
        let l = correction_kernel(&KernelSpec::CorrectionLue, -1.0, -1.0).unwrap();
        assert!((l - rho1_lue(-1.0)).abs() < 1e-15);
        for &y in &[-3.0, -0.5, 0.0, 1.7] {
            let (r0, r1) = density_correction(Variant::Gue, y).unwrap();
            assert!((r1 - rho1_gue(y)).abs() < 1e-15);
            let (a, ap) = airy_unchecked(y);
            assert!((r0 - (ap * ap - y * a * a)).abs() < 1e-15);
        }
        assert!(correction_kernel(&KernelSpec::AiryLimit, 0.0, 0.0).is_err());
    }

    #[test]
    fn rho0_shared_by_all_variants() {
        for &y in &[-2.0, 0.0, 2.0] {
            let g = density_correction(Variant::Gue, y).unwrap().0;
            let l = density_correction(Variant::Lue, y).unwrap().0;
            let a = density_correction(Variant::LueAlpha { alpha: 0.5 }, y).unwrap().0;
            assert_eq!(g, l);
            assert_eq!(g, a);
        }
    }

    #[test]
    fn alpha_limit_reduces_to_lue() {
        let lim = correction_kernel_alpha(1e-8, 0.5, -0.5).unwrap();
        let lue = correction_kernel(&KernelSpec::CorrectionLue, 0.5, -0.5).unwrap();
        assert!((lim - lue).abs() < 1e-6, "{lim} vs {lue}");
        let r_alpha = density_correction(Variant::LueAlpha { alpha: 1e-8 }, 1.0).unwrap().1;
        let r_lue = density_correction(Variant::Lue, 1.0).unwrap().1;
        assert!((r_alpha - r_lue).abs() < 1e-6);
    }

    #[test]
    fn printed_lue_branch_is_not_the_limit() {
        let lim = correction_kernel_alpha(1e-8, 0.3, -0.9).unwrap();
        let printed = correction_kernel_lue_printed(0.3, -0.9);
        assert!((lim - printed).abs() > 1e-2);
    }

    #[test]
    fn alpha_symmetry_and_guard() {
        let a = correction_kernel_alpha(5.0, 1.0, 2.0).unwrap();
        let b = correction_kernel_alpha(5.0, 2.0, 1.0).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!(correction_kernel_alpha(0.0, 1.0, 2.0).is_err());
        assert!(correction_kernel_alpha(-1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn diagonal_continuity() {
        for form in [AiryForm::Limit, AiryForm::Gue, AiryForm::Lue, AiryForm::alpha(0.5), AiryForm::alpha(5.0)] {
            for &x in &[-3.3, 0.0, 1.9] {
                let k0 = form.diag_jet(x)[0];
                assert!((form.value(x, x) - k0).abs() < 1e-15);
                let mut gaps = vec![];
                for &h in &[1e-3, 1e-4, 1e-5] {
                    gaps.push((form.value(x, x + h) - k0).abs());
                }
                // first order in h; the slope is half the diagonal derivative
                let slope = 0.5 * form.diag_jet(x)[1].abs();
                for (g, h) in gaps.iter().zip([1e-3, 1e-4, 1e-5]) {
                    assert!((g - slope * h).abs() <= 2.0 * h * h + 1e-14, "{form:?} x={x} h={h}");
                }
            }
        }
    }

    #[test]
    fn seam_at_delta_is_smooth() {
        for form in [AiryForm::Limit, AiryForm::alpha(0.5)] {
            let x = 0.8;
            let below = form.value(x + 0.999_999 * DIAGONAL_DELTA, x);
            let above = form.value(x + 1.000_001 * DIAGONAL_DELTA, x);
            assert!((below - above).abs() < 1e-11, "{form:?}: {below} {above}");
        }
    }

    #[test]
    fn diag_jet_matches_finite_differences() {
        for form in [AiryForm::Limit, AiryForm::Gue, AiryForm::Lue, AiryForm::alpha(5.0)] {
            let y = -1.2;
            let h = 1e-3;
            let f = |y: f64| form.diag_jet(y)[0];
            let j = form.diag_jet(y);
            let d1 = (f(y + h) - f(y - h)) / (2.0 * h);
            let d2 = (f(y + h) - 2.0 * f(y) + f(y - h)) / (h * h);
            assert!((j[1] - d1).abs() < 1e-6, "{form:?}");
            assert!((j[2] - d2).abs() < 1e-5, "{form:?}");
        }
    }

    #[test]
    fn airy_kernel_diagonal_positive() {
        for i in 0..200 {
            let x = -10.0 + i as f64 * 0.08;
            assert!(AiryForm::Limit.diag_jet(x)[0] > 0.0, "x={x}");
        }
    }

    #[test]
    fn matrix_matches_pointwise() {
        let nodes = [-2.0, -1.5, 0.1, 0.10005, 3.0];
        for form in [AiryForm::Limit, AiryForm::Lue, AiryForm::alpha(0.5)] {
            let m = form.matrix(&nodes).unwrap();
            for i in 0..nodes.len() {
                for j in 0..nodes.len() {
                    assert!((m[(i, j)] - form.value(nodes[i], nodes[j])).abs() < 1e-15);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn kernels_symmetric(x in -6.0f64..4.0, y in -6.0f64..4.0) {
            for form in [AiryForm::Limit, AiryForm::Gue, AiryForm::Lue, AiryForm::alpha(0.5), AiryForm::alpha(5.0)] {
                let a = form.value(x, y);
                let b = form.value(y, x);
                prop_assert!((a - b).abs() <= 1e-12, "{:?} {} {}", form, a, b);
            }
        }
    }
}
