//! Truncated bivariate power series in `(e, d)`, used to evaluate kernel
//! formulas near the diagonal `x = y` where a quotient by `x - y`
//! cancels. With `x = m + e + d/2` and `y = m + e - d/2` the coefficient
//! of `e^i d^j` carries the `i`-th derivative along the diagonal.

use std::ops::{Add, Mul, Neg, Sub};

use super::airy::airy_taylor;

/// Arithmetic needed to evaluate a kernel numerator.
pub(crate) trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn scale(self, v: f64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn scale(self, v: f64) -> Self {
        self * v
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Series2<const E: usize, const D: usize> {
    pub c: [[f64; D]; E],
}

impl<const E: usize, const D: usize> Series2<E, D> {
    pub fn zero() -> Self {
        Series2 { c: [[0.0; D]; E] }
    }

    /// `m + se e + sd d`
    pub fn affine(m: f64, se: f64, sd: f64) -> Self {
        let mut s = Self::zero();
        s.c[0][0] = m;
        if E > 1 {
            s.c[1][0] = se;
        }
        if D > 1 {
            s.c[0][1] = sd;
        }
        s
    }

    /// Evaluate the polynomial with coefficients `coef` (ascending) at `self`.
    pub fn compose(coef: &[f64], h: Self) -> Self {
        let mut r = Self::zero();
        for &a in coef.iter().rev() {
            r = r * h;
            r.c[0][0] += a;
        }
        r
    }
}

impl<const E: usize, const D: usize> Add for Series2<E, D> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for i in 0..E {
            for j in 0..D {
                self.c[i][j] += o.c[i][j];
            }
        }
        self
    }
}

impl<const E: usize, const D: usize> Sub for Series2<E, D> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for i in 0..E {
            for j in 0..D {
                self.c[i][j] -= o.c[i][j];
            }
        }
        self
    }
}

impl<const E: usize, const D: usize> Neg for Series2<E, D> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const E: usize, const D: usize> Mul for Series2<E, D> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut r = Self::zero();
        for i1 in 0..E {
            for j1 in 0..D {
                let a = self.c[i1][j1];
                if a == 0.0 {
                    continue;
                }
                for i2 in 0..E - i1 {
                    for j2 in 0..D - j1 {
                        r.c[i1 + i2][j1 + j2] += a * o.c[i2][j2];
                    }
                }
            }
        }
        r
    }
}

impl<const E: usize, const D: usize> Scalar for Series2<E, D> {
    fn scale(mut self, v: f64) -> Self {
        for row in self.c.iter_mut() {
            for x in row.iter_mut() {
                *x *= v;
            }
        }
        self
    }
}

/// `(Ai, Ai')` at `m + se e + sd d` as series.
pub(crate) fn airy_series<const E: usize, const D: usize>(m: f64, se: f64, sd: f64) -> (Series2<E, D>, Series2<E, D>) {
    let mut a = [0.0; 24];
    let n = E + D + 1;
    debug_assert!(n <= a.len());
    airy_taylor(m, &mut a[..n]);
    let d: Vec<f64> = (1..n).map(|k| k as f64 * a[k]).collect();
    let h = Series2::<E, D>::affine(0.0, se, sd);
    (Series2::compose(&a[..n - 1], h), Series2::compose(&d, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::airy_unchecked;

    #[test]
    fn product_truncates() {
        let x = Series2::<3, 2>::affine(1.0, 1.0, 0.5);
        let sq = x * x;
        // (1 + e + d/2)^2 = 1 + 2e + d + e^2 + e d + d^2/4
        assert_eq!(sq.c[0][0], 1.0);
        assert_eq!(sq.c[1][0], 2.0);
        assert_eq!(sq.c[0][1], 1.0);
        assert_eq!(sq.c[2][0], 1.0);
        assert_eq!(sq.c[1][1], 1.0);
    }

    #[test]
    fn airy_series_derivatives() {
        let (ai, aip) = airy_series::<3, 1>(-1.7, 1.0, 0.0);
        let (a, ap) = airy_unchecked(-1.7);
        assert!((ai.c[0][0] - a).abs() < 1e-15);
        assert!((ai.c[1][0] - ap).abs() < 1e-15);
        // Ai'' = x Ai, second coefficient is Ai''/2
        assert!((ai.c[2][0] - 0.5 * -1.7 * a).abs() < 1e-15);
        assert!((aip.c[0][0] - ap).abs() < 1e-15);
    }
}
