use serde::{Deserialize, Serialize};

use super::SampleBatch;
use crate::error::{Error, Result};
use crate::fredholm::DistributionCurve;

/// Binned draws; `density = count / (total * width)` where `total`
/// includes draws outside the bins (and thinning atoms).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
    pub total: usize,
}

impl Histogram {
    pub fn from_edges(values: &[f64], edges: Vec<f64>, total: usize) -> Result<Self> {
        if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("bin edges must be strictly increasing, at least two".into()));
        }
        if total < values.len() || total == 0 {
            return Err(Error::InvalidParameter(format!("total {total} is below the {} values", values.len())));
        }
        let nb = edges.len() - 1;
        let mut counts = vec![0u64; nb];
        let (lo, hi) = (edges[0], edges[nb]);
        for &v in values {
            if v < lo || v > hi {
                continue;
            }
            let k = edges.partition_point(|&e| e <= v).saturating_sub(1).min(nb - 1);
            counts[k] += 1;
        }
        let density = (0..nb).map(|k| counts[k] as f64 / (total as f64 * (edges[k + 1] - edges[k]))).collect();
        Ok(Histogram { edges, counts, density, total })
    }

    /// Freedman–Diaconis width `2 IQR n^{-1/3}` over the sample range.
    pub fn freedman_diaconis(values: &[f64], total: usize) -> Result<Self> {
        if values.len() < 4 {
            return Err(Error::InvalidParameter("need at least 4 values for Freedman–Diaconis bins".into()));
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let x = p * (v.len() - 1) as f64;
            let i = x.floor() as usize;
            let f = x - i as f64;
            v[i] + f * (v[(i + 1).min(v.len() - 1)] - v[i])
        };
        let (lo, hi) = (v[0], v[v.len() - 1]);
        let width = 2.0 * (q(0.75) - q(0.25)) / (v.len() as f64).cbrt();
        let nb = if width > 0.0 && hi > lo { ((hi - lo) / width).ceil().max(1.0) as usize } else { 1 };
        let hi = if hi > lo { hi } else { lo + 1.0 };
        let edges = (0..=nb).map(|k| lo + (hi - lo) * k as f64 / nb as f64).collect();
        Self::from_edges(values, edges, total)
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// `sum density * width`, the fraction of `total` inside the bins.
    pub fn mass(&self) -> f64 {
        self.density.iter().zip(self.edges.windows(2)).map(|(d, w)| d * (w[1] - w[0])).sum()
    }
}

// cubic Lagrange value and slope through the four grid points around x
fn cubic(ts: &[f64], ys: &[f64], x: f64) -> (f64, f64) {
    let n = ts.len();
    let k = ts.partition_point(|&t| t <= x).clamp(2, n - 2) - 2;
    let (xs, fs) = (&ts[k..k + 4], &ys[k..k + 4]);
    let (mut v, mut d) = (0.0, 0.0);
    for i in 0..4 {
        let mut li = 1.0;
        let mut dli = 0.0;
        for j in 0..4 {
            if j == i {
                continue;
            }
            let mut prod = 1.0 / (xs[i] - xs[j]);
            for m in 0..4 {
                if m != i && m != j {
                    prod *= (x - xs[m]) / (xs[i] - xs[m]);
                }
            }
            dli += prod;
            li *= (x - xs[j]) / (xs[i] - xs[j]);
        }
        v += fs[i] * li;
        d += fs[i] * dli;
    }
    (v, d)
}

/// `N^power (histogram - p0)` at bin centres, with the least-squares
/// coefficient of `p0'` when `power = 1/3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionFit {
    pub power: f64,
    pub histogram: Histogram,
    pub centers: Vec<f64>,
    pub scaled: Vec<f64>,
    pub c: Option<f64>,
}

impl CorrectionFit {
    pub fn max_abs(&self) -> f64 {
        self.scaled.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

pub fn correction_extract(
    batch: &SampleBatch,
    reference: &DistributionCurve,
    power: f64,
    edges: Option<Vec<f64>>,
) -> Result<CorrectionFit> {
    let third = (power - 1.0 / 3.0).abs() < 1e-12;
    if !third && (power - 2.0 / 3.0).abs() >= 1e-12 {
        return Err(Error::InvalidParameter(format!("power {power} must be 1/3 or 2/3")));
    }
    if reference.ts.len() < 4 {
        return Err(Error::RangeMismatch("reference curve needs at least 4 points".into()));
    }
    let histogram = match edges {
        Some(e) => Histogram::from_edges(&batch.values, e, batch.count)?,
        None => Histogram::freedman_diaconis(&batch.values, batch.count)?,
    };
    let centers = histogram.centers();
    let (lo, hi) = (reference.ts[0], reference.ts[reference.ts.len() - 1]);
    if centers[0] < lo || centers[centers.len() - 1] > hi {
        return Err(Error::RangeMismatch(format!(
            "bins span [{}, {}] outside the reference range [{lo}, {hi}]",
            centers[0],
            centers[centers.len() - 1]
        )));
    }
    let scale = (batch.n as f64).powf(power);
    let mut scaled = Vec::with_capacity(centers.len());
    let (mut num, mut den) = (0.0, 0.0);
    for (k, &x) in centers.iter().enumerate() {
        let (p, dp) = cubic(&reference.ts, &reference.p0, x);
        let r = scale * (histogram.density[k] - p);
        scaled.push(r);
        num += r * dp;
        den += dp * dp;
    }
    let c = (third && den > 0.0).then(|| num / den);
    Ok(CorrectionFit { power, histogram, centers, scaled, c })
}
