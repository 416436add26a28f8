use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on a finite interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    t: f64,
    upper: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Truncation length so that the interval ends at `max(t, 0) + 16`.
pub fn default_tail(t: f64) -> f64 {
    t.max(0.0) + 16.0 - t
}

/// Rule of `order` points on `[t, t + tail]`.
pub fn build_rule(t: f64, order: usize, tail: f64) -> Result<QuadratureRule> {
    if order < 8 {
        return Err(Error::InvalidParameter(format!("quadrature order {order} is below 8")));
    }
    if !(tail > 0.0 && tail.is_finite()) {
        return Err(Error::InvalidParameter(format!("tail length {tail} must be positive")));
    }
    QuadratureRule::gauss_legendre(t, t + tail, order)
}

// Newton on P_n from the Tricomi initial guesses.
fn legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

impl QuadratureRule {
    /// `order`-point Gauss–Legendre rule on `[a, b]`.
    pub fn gauss_legendre(a: f64, b: f64, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("quadrature order must be positive".into()));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!("bad interval [{a}, {b}]")));
        }
        let (x, w) = legendre(order);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Ok(QuadratureRule {
            t: a,
            upper: b,
            nodes: x.iter().map(|&z| mid + half * z).collect(),
            weights: w.iter().map(|&v| half * v).collect(),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}
