use nalgebra::DMatrix;

use super::{EdgeScaling, Kernel, KernelSpec, DIAGONAL_DELTA};
use crate::error::{Error, Result};
use crate::specfun::{Family, Tail};

/// Soft-edge scaled finite-N kernel `(ds/dt) K_N(s_x, s_y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteKernel {
    family: Family,
    n: usize,
    scaling: EdgeScaling,
}

impl FiniteKernel {
    pub fn new(spec: &KernelSpec) -> Result<Self> {
        spec.validate()?;
        let scaling = spec
            .scaling()
            .ok_or_else(|| Error::InvalidParameter(format!("{} is not a finite-N kernel", spec.tag())))?;
        let family = match spec {
            KernelSpec::FiniteGue { .. } => Family::Hermite,
            _ => Family::Laguerre(scaling.a()),
        };
        Ok(FiniteKernel { family, n: scaling.n(), scaling })
    }

    pub fn scaling(&self) -> &EdgeScaling {
        &self.scaling
    }

    fn point(&self, t: f64) -> Result<f64> {
        let s = self.scaling.s(t);
        if matches!(self.family, Family::Laguerre(_)) && s <= 0.0 {
            return Err(Error::OutsideSupport { t, point: s });
        }
        Ok(s)
    }

    // sqrt(h_N / h_{N-1})
    fn cd_factor(&self) -> f64 {
        let n = self.n as f64;
        match self.family {
            Family::Hermite => (0.5 * n).sqrt(),
            Family::Laguerre(a) => (n * (n + a)).sqrt(),
        }
    }

    fn confluent(&self, s: f64, t: &Tail) -> f64 {
        let n = self.n as f64;
        let [p2, p1, p0] = t.m;
        let v = match self.family {
            Family::Hermite => n * p1 * p1 - (n * (n - 1.0)).sqrt() * p2 * p0,
            Family::Laguerre(a) => {
                let r = (n * (n + a)).sqrt();
                let r1 = ((n - 1.0) * (n + a - 1.0)).max(0.0).sqrt();
                r / s * (p0 * p1 + r * p1 * p1 - r1 * p2 * p0)
            }
        };
        crate::specfun::ldexp2(v, 2 * t.exp2)
    }

    fn pair(&self, sx: f64, tx: &Tail, sy: f64, ty: &Tail) -> f64 {
        let num = tx.m[2] * ty.m[1] - tx.m[1] * ty.m[2];
        self.cd_factor() * crate::specfun::ldexp2(num, tx.exp2 + ty.exp2) / (sx - sy)
    }

    fn unscaled(&self, x: f64, y: f64, sx: f64, sy: f64, tx: &Tail, ty: &Tail) -> f64 {
        if x == y {
            self.confluent(sx, tx)
        } else if (x - y).abs() < DIAGONAL_DELTA {
            self.family.kernel_sum(self.n, sx, sy)
        } else {
            self.pair(sx, tx, sy, ty)
        }
    }
}

impl Kernel for FiniteKernel {
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let sx = self.point(x)?;
        let sy = self.point(y)?;
        let tx = self.family.tail(self.n, sx);
        let ty = self.family.tail(self.n, sy);
        Ok(self.scaling.jacobian() * self.unscaled(x, y, sx, sy, &tx, &ty))
    }

    fn matrix(&self, nodes: &[f64]) -> Result<DMatrix<f64>> {
        let m = nodes.len();
        let s: Vec<f64> = nodes.iter().map(|&t| self.point(t)).collect::<Result<_>>()?;
        let tails: Vec<Tail> = s.iter().map(|&v| self.family.tail(self.n, v)).collect();
        let jac = self.scaling.jacobian();
        let mut k = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = jac * self.unscaled(nodes[i], nodes[j], s[i], s[j], &tails[i], &tails[j]);
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
    use crate::kernels::{airy_kernel, correction_kernel_alpha, finite_kernel_scaled, AiryForm};
    use std::f64::consts::PI;

    fn k(spec: KernelSpec, x: f64, y: f64) -> f64 {
        FiniteKernel::new(&spec).unwrap().eval(x, y).unwrap()
    }

    #[test]
    fn gue_n1_closed_form() {
        let s = 2f64.sqrt();
        let want = (-s * s).exp() / PI.sqrt() / 2f64.sqrt();
        let got = k(KernelSpec::FiniteGue { n: 1 }, 0.0, 0.0);
        assert!((got - want).abs() < 1e-16, "{got} vs {want}");
        let sc = EdgeScaling::gue(1).unwrap();
        let via = finite_kernel_scaled(&KernelSpec::FiniteGue { n: 1 }, &sc, 0.0, 0.0).unwrap();
        assert_eq!(via, got);
        let wrong = EdgeScaling::gue(2).unwrap();
        assert!(finite_kernel_scaled(&KernelSpec::FiniteGue { n: 1 }, &wrong, 0.0, 0.0).is_err());
    }

    #[test]
    fn confluent_matches_sum() {
        for spec in [
            KernelSpec::FiniteGue { n: 10 },
            KernelSpec::FiniteGue { n: 1 },
            KernelSpec::FiniteLue { n: 10, a: 1.0 },
            KernelSpec::FiniteLue { n: 1, a: 0.0 },
            KernelSpec::FiniteLueAlpha { n: 30, alpha: 5.0 },
        ] {
            let fk = FiniteKernel::new(&spec).unwrap();
            let floor = fk.scaling().support_floor().unwrap_or(f64::NEG_INFINITY);
            for &t in [-2.0, 0.0, 1.5].iter().filter(|&&t| t > floor) {
                let s = fk.scaling().s(t);
                let sum = fk.scaling().jacobian() * fk.family.kernel_sum(fk.n, s, s);
                let c = fk.eval(t, t).unwrap();
                assert!((c - sum).abs() < 1e-12 * sum.abs().max(1e-6), "{spec:?} t={t}: {c} vs {sum}");
            }
        }
    }

    #[test]
    fn near_diagonal_consistent() {
        for spec in [KernelSpec::FiniteGue { n: 40 }, KernelSpec::FiniteLue { n: 40, a: 2.0 }] {
            let a = k(spec, 0.3, 0.3 + 0.9999 * DIAGONAL_DELTA);
            let b = k(spec, 0.3, 0.3 + 1.0001 * DIAGONAL_DELTA);
            assert!((a - b).abs() < 1e-9, "{spec:?}: {a} {b}");
        }
    }

    #[test]
    fn symmetric() {
        let spec = KernelSpec::FiniteGue { n: 10 };
        for &(x, y) in &[(0.3, -1.2), (2.0, -3.0), (0.0, 0.5)] {
            assert!((k(spec, x, y) - k(spec, y, x)).abs() < 1e-15);
        }
    }

    #[test]
    fn lue_window_rejected() {
        let fk = FiniteKernel::new(&KernelSpec::FiniteLue { n: 2, a: 0.0 }).unwrap();
        let floor = fk.scaling().support_floor().unwrap();
        assert!(matches!(fk.eval(floor - 0.1, 0.0), Err(Error::OutsideSupport { .. })));
        assert!(fk.eval(floor + 0.1, 0.0).is_ok());
    }

    #[test]
    fn converges_to_airy_at_rate_two_thirds() {
        // (0,1): the gap shrinks by about 4^{-2/3} per fourfold N
        for (spec_a, spec_b) in [
            (KernelSpec::FiniteGue { n: 100 }, KernelSpec::FiniteGue { n: 400 }),
            (KernelSpec::FiniteLue { n: 100, a: 0.0 }, KernelSpec::FiniteLue { n: 400, a: 0.0 }),
        ] {
            let ga = (k(spec_a, 0.0, 1.0) - airy_kernel(0.0, 1.0)).abs();
            let gb = (k(spec_b, 0.0, 1.0) - airy_kernel(0.0, 1.0)).abs();
            let ratio = gb / ga;
            assert!(
                (ratio - 0.25f64.powf(2.0 / 3.0)).abs() < 0.3 * 0.25f64.powf(2.0 / 3.0),
                "{spec_a:?} ratio {ratio}"
            );
        }
    }

    #[test]
    fn sup_gap_decreases() {
        let pts = [(-2.0, -1.0), (0.0, 0.0), (0.0, 1.0), (1.0, 2.5), (-1.5, 0.5)];
        for (make, ns) in [(0usize, [50usize, 200]), (1, [50, 200])] {
            let sup = |n: usize| {
                let spec = if make == 0 { KernelSpec::FiniteGue { n } } else { KernelSpec::FiniteLue { n, a: 1.0 } };
                pts.iter().map(|&(x, y)| (k(spec, x, y) - airy_kernel(x, y)).abs()).fold(0.0, f64::max)
            };
            assert!(sup(ns[1]) < sup(ns[0]));
        }
    }

    // Extrapolated N^{2/3}(K_N - K) is an oracle for the correction kernels
    // independent of their closed forms. The remainder is O(N^{-1/3}).
    #[test]
    fn correction_kernels_from_finite_n() {
        let est = |spec_of: &dyn Fn(usize) -> KernelSpec, x: f64, y: f64| {
            let e = |n: usize| (n as f64).powf(2.0 / 3.0) * (k(spec_of(n), x, y) - airy_kernel(x, y));
            2.0 * e(1600) - e(200)
        };
        let (x, y) = (0.3, -0.9);
        let lue = est(&|n| KernelSpec::FiniteLue { n, a: 0.0 }, x, y);
        assert!((lue - AiryForm::Lue.value(x, y)).abs() < 2e-3, "lue {lue} vs {}", AiryForm::Lue.value(x, y));
        let gue = est(&|n| KernelSpec::FiniteGue { n }, x, y);
        assert!((gue - AiryForm::Gue.value(x, y)).abs() < 2e-3, "gue {gue} vs {}", AiryForm::Gue.value(x, y));
        for alpha in [0.5, 5.0] {
            let a = est(&|n| KernelSpec::FiniteLueAlpha { n, alpha }, x, y);
            let want = correction_kernel_alpha(alpha, x, y).unwrap();
            assert!((a - want).abs() < 2e-3, "alpha {alpha}: {a} vs {want}");
        }
    }
}
