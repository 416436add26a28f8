use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

/// `phi_n(x) = p_n(x) sqrt(w(x) / h_n)` for the monic orthogonal
/// polynomials `p_n` of the weight `w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedPolyValue {
    pub n: usize,
    /// Laguerre parameter; zero for Hermite.
    pub a: f64,
    pub x: f64,
    pub phi: f64,
}

/// Orthonormal Hermite function for the weight `e^{-x^2}`.
pub fn hermite_weighted(n: usize, x: f64) -> Result<WeightedPolyValue> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("hermite_weighted: non-finite x = {x}")));
    }
    let phi = Family::Hermite.tail(n, x).get(2);
    Ok(WeightedPolyValue { n, a: 0.0, x, phi })
}

/// Orthonormal Laguerre function for the weight `x^a e^{-x}` on `x >= 0`.
pub fn laguerre_weighted(n: usize, a: f64, x: f64) -> Result<WeightedPolyValue> {
    if !x.is_finite() || !a.is_finite() {
        return Err(Error::Domain(format!("laguerre_weighted: non-finite input (a = {a}, x = {x})")));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("laguerre_weighted: x = {x} is negative")));
    }
    if a <= -1.0 {
        return Err(Error::InvalidParameter(format!("laguerre_weighted: a = {a} must exceed -1")));
    }
    if x == 0.0 && a < 0.0 {
        return Err(Error::Domain(format!("laguerre_weighted: weight is infinite at x = 0 for a = {a}")));
    }
    let phi = Family::Laguerre(a).tail(n, x).get(2);
    Ok(WeightedPolyValue { n, a, x, phi })
}

/// Which classical weight the recurrence belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Family {
    Hermite,
    Laguerre(f64),
}

/// `phi_{n-2}, phi_{n-1}, phi_n` as mantissas sharing one power of two.
/// Entries with negative index are zero.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Tail {
    pub m: [f64; 3],
    pub exp2: i32,
}

impl Tail {
    pub fn get(&self, i: usize) -> f64 {
        ldexp(self.m[i], self.exp2)
    }
}

pub(crate) fn ldexp(m: f64, mut e: i32) -> f64 {
    let mut r = m;
    while e > 1000 {
        r *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        r *= 2f64.powi(-1000);
        e += 1000;
    }
    r * 2f64.powi(e)
}

const BIG: f64 = 1.157_920_892_373_162e77; // 2^256
const SMALL: f64 = 8.636_168_555_094_445e-78; // 2^-256

// Rescale so the largest mantissa lands in [1, 2).
fn renorm(m: &mut [f64], exp2: &mut i32) {
    let big = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if big > BIG || (big < SMALL && big > 0.0) {
        let e = big.log2().floor() as i32;
        let s = 2f64.powi(-e);
        for v in m.iter_mut() {
            *v *= s;
        }
        *exp2 += e;
    }
}

impl Family {
    // ln phi_0(x); None when phi_0 vanishes identically.
    fn ln_phi0(self, x: f64) -> Option<f64> {
        match self {
            Family::Hermite => Some(-0.5 * x * x - 0.25 * PI.ln()),
            Family::Laguerre(a) => {
                if x == 0.0 {
                    if a == 0.0 {
                        Some(0.0)
                    } else {
                        None
                    }
                } else {
                    Some(0.5 * (a * x.ln() - x - ln_gamma(a + 1.0)))
                }
            }
        }
    }

    // phi_{k+1} = (c0 phi_k - c1 phi_{k-1}) / den
    #[inline]
    fn coeffs(self, k: usize, x: f64) -> (f64, f64, f64) {
        let kf = k as f64;
        match self {
            Family::Hermite => (x, (0.5 * kf).sqrt(), (0.5 * (kf + 1.0)).sqrt()),
            Family::Laguerre(a) => {
                (x - (2.0 * kf + a + 1.0), (kf * (kf + a)).sqrt(), ((kf + 1.0) * (kf + 1.0 + a)).sqrt())
            }
        }
    }

    fn start(self, x: f64) -> ([f64; 3], i32) {
        match self.ln_phi0(x) {
            None => ([0.0; 3], 0),
            Some(l) => {
                let e = (l / LN_2).floor();
                ([0.0, 0.0, (l - e * LN_2).exp()], e as i32)
            }
        }
    }

    pub fn tail(self, n: usize, x: f64) -> Tail {
        let (mut m, mut exp2) = self.start(x);
        for k in 0..n {
            let (c0, c1, den) = self.coeffs(k, x);
            let next = (c0 * m[2] - c1 * m[1]) / den;
            m = [m[1], m[2], next];
            renorm(&mut m, &mut exp2);
        }
        Tail { m, exp2 }
    }

    /// `sum_{k<n} phi_k(x) phi_k(y)`, the kernel as a plain sum. Used where
    /// the Christoffel–Darboux quotient cancels badly.
    pub fn kernel_sum(self, n: usize, x: f64, y: f64) -> f64 {
        let (mut mx, mut ex) = self.start(x);
        let (mut my, mut ey) = self.start(y);
        let (mut acc, mut ea) = (0.0f64, 0i32);
        for k in 0..n {
            let t = mx[2] * my[2];
            let et = ex + ey;
            if t != 0.0 {
                if acc == 0.0 {
                    acc = t;
                    ea = et;
                } else if et > ea {
                    acc = ldexp(acc, ea - et) + t;
                    ea = et;
                } else {
                    acc += ldexp(t, et - ea);
                }
                let mut one = [acc];
                renorm(&mut one, &mut ea);
                acc = one[0];
            }
            if k + 1 == n {
                break;
            }
            let (c0, c1, den) = self.coeffs(k, x);
            mx = [mx[1], mx[2], (c0 * mx[2] - c1 * mx[1]) / den];
            renorm(&mut mx, &mut ex);
            let (c0, c1, den) = self.coeffs(k, y);
            my = [my[1], my[2], (c0 * my[2] - c1 * my[1]) / den];
            renorm(&mut my, &mut ey);
        }
        ldexp(acc, ea)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    // 2^{-n} H_n(x) e^{-x^2/2} / sqrt(sqrt(pi) 2^{-n} n!) from the explicit sum
    fn hermite_direct(n: usize, x: f64) -> f64 {
        let mut h = 0.0;
        for m in 0..=n / 2 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            h += sign * (2.0 * x).powi((n - 2 * m) as i32) / (fact(m) * fact(n - 2 * m));
        }
        h *= fact(n);
        let p = h / 2f64.powi(n as i32);
        p * (-0.5 * x * x).exp() / (PI.sqrt() * fact(n) / 2f64.powi(n as i32)).sqrt()
    }

    // Double-double arithmetic for the oracle: the explicit Laguerre sum
    // cancels heavily at moderate x.
    #[derive(Clone, Copy)]
    struct Dd(f64, f64);

    impl Dd {
        fn quick(a: f64, b: f64) -> Dd {
            let s = a + b;
            Dd(s, b - (s - a))
        }
        fn add(self, o: Dd) -> Dd {
            let s = self.0 + o.0;
            let bb = s - self.0;
            let e = (self.0 - (s - bb)) + (o.0 - bb) + self.1 + o.1;
            Dd::quick(s, e)
        }
        fn mul(self, o: Dd) -> Dd {
            let p = self.0 * o.0;
            let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
            Dd::quick(p, e)
        }
        fn div(self, b: f64) -> Dd {
            let q1 = self.0 / b;
            let r = self.add(Dd(q1, 0.0).mul(Dd(-b, 0.0)));
            Dd::quick(q1, r.0 / b)
        }
    }

    // (-1)^n n! L_n^a(x) sqrt(x^a e^{-x} / (n! Gamma(n+a+1)))
    fn laguerre_direct(n: usize, a: f64, x: f64) -> f64 {
        let mut l = Dd(0.0, 0.0);
        for i in 0..=n {
            // binom(n + a, n - i) = prod_{k=1}^{n-i} (a + i + k) / k
            let mut term = Dd(1.0, 0.0);
            for k in 1..=n - i {
                term = term.mul(Dd(a + (i + k) as f64, 0.0)).div(k as f64);
            }
            for k in 1..=i {
                term = term.mul(Dd(x, 0.0)).div(k as f64);
            }
            if i % 2 == 1 {
                term = Dd(-term.0, -term.1);
            }
            l = l.add(term);
        }
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let p = sign * fact(n) * (l.0 + l.1);
        p * (x.powf(a) * (-x).exp() / (fact(n) * ln_gamma(n as f64 + a + 1.0).exp())).sqrt()
    }

    #[test]
    fn hermite_small_cases() {
        let v = hermite_weighted(0, 0.0).unwrap().phi;
        assert!((v - PI.powf(-0.25)).abs() < 1e-15);
        let v2 = hermite_weighted(2, 0.0).unwrap().phi;
        let want = -0.5 / (PI.sqrt() * 0.25 * 2.0).sqrt();
        assert!((v2 - want).abs() < 1e-15);
        assert!(v2 < 0.0);
    }

    #[test]
    fn laguerre_small_cases() {
        let v = laguerre_weighted(0, 0.0, 1.0).unwrap().phi;
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
        let w = laguerre_weighted(1, 0.0, 0.0).unwrap().phi;
        assert!((w + 1.0).abs() < 1e-15);
        assert_eq!(laguerre_weighted(4, 1.5, 0.0).unwrap().phi, 0.0);
        assert!(laguerre_weighted(2, 0.0, -0.1).is_err());
        assert!(laguerre_weighted(2, -1.0, 1.0).is_err());
    }

    #[test]
    fn recurrences_match_direct_forms() {
        for n in 0..=10 {
            for &x in &[-3.1, -1.0, 0.0, 0.37, 2.5, 4.0] {
                let r = hermite_weighted(n, x).unwrap().phi;
                let d = hermite_direct(n, x);
                assert!((r - d).abs() <= 1e-12 * d.abs().max(1e-3), "H n={n} x={x}: {r} vs {d}");
            }
            for &a in &[0.0, 0.5, 2.0] {
                for &x in &[0.2, 1.0, 3.3, 9.0, 17.0] {
                    let r = laguerre_weighted(n, a, x).unwrap().phi;
                    let d = laguerre_direct(n, a, x);
                    assert!((r - d).abs() <= 1e-12 * d.abs().max(1e-3), "L n={n} a={a} x={x}: {r} vs {d}");
                }
            }
        }
    }

    #[test]
    fn hermite_normalisation() {
        let h = 1e-3;
        for &n in &[0usize, 5, 50] {
            let mut s = 0.0;
            let steps = 120_000;
            for i in 0..=steps {
                let x = -60.0 + i as f64 * h;
                let v = hermite_weighted(n, x).unwrap().phi;
                let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
                s += w * v * v;
            }
            assert!((s * h - 1.0).abs() < 1e-8, "n={n}: {}", s * h);
        }
    }

    #[test]
    fn laguerre_normalisation() {
        // x = u^2 keeps the integrand smooth at the origin
        let h = 2e-4;
        for &(n, a) in &[(3usize, 1.0), (20, 0.5)] {
            let steps = 75_000;
            let mut s = 0.0;
            for i in 1..=steps {
                let u = i as f64 * h;
                let v = laguerre_weighted(n, a, u * u).unwrap().phi;
                let w = if i == steps { 0.5 } else { 1.0 };
                s += w * 2.0 * u * v * v;
            }
            assert!((s * h - 1.0).abs() < 1e-8, "n={n} a={a}: {}", s * h);
        }
    }

    #[test]
    fn large_index_stays_finite() {
        let n = 1000;
        let a = 5.0 * n as f64;
        // soft edge of LUE-alpha at alpha = 5
        let edge = n as f64 * (6f64.sqrt() + 1.0).powi(2);
        for &dx in &[-50.0, 0.0, 50.0] {
            let v = laguerre_weighted(n, a, edge + dx).unwrap().phi;
            assert!(v.is_finite() && v != 0.0, "dx={dx}: {v}");
        }
        let g = hermite_weighted(10_000, (2.0f64 * 10_000.0).sqrt()).unwrap().phi;
        assert!(g.is_finite() && g != 0.0);
    }

    #[test]
    fn kernel_sum_matches_naive() {
        for fam in [Family::Hermite, Family::Laguerre(1.5)] {
            let (x, y) = match fam {
                Family::Hermite => (0.7, 1.1),
                _ => (3.0, 4.5),
            };
            let naive: f64 = (0..12).map(|k| fam.tail(k, x).get(2) * fam.tail(k, y).get(2)).sum();
            let s = fam.kernel_sum(12, x, y);
            assert!((s - naive).abs() < 1e-14, "{s} vs {naive}");
        }
    }
}
