//! Monte Carlo samplers for the largest eigenvalue, with optional
//! thinning, plus last-passage percolation and histogram tools.
//!
//! Scale conventions follow the weights `e^{-x^2}` and `x^a e^{-x}`.
//! The GUE tridiagonal model has diagonal `N(0, 1/2)` and off-diagonal
//! `chi_{2k} / 2`; the LUE bidiagonal factor `B` has diagonal
//! `chi_{2(N+a-i)} / sqrt 2` and subdiagonal `chi_{2(N-1-i)} / sqrt 2`
//! (zero based), with eigenvalues taken from `B B^T`.

mod export;
mod histogram;
mod lpp;
mod tridiag;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::EdgeScaling;
use crate::par::{self, Execution};

pub use export::{read_batch_csv, write_batch, write_histogram, BATCH_HEADER, HISTOGRAM_HEADER};
pub use histogram::{correction_extract, CorrectionFit, Histogram};
pub use lpp::{last_passage, lpp_asymptotic_cdf, lpp_sample, LppAsymptotics, LppGrid, LppRegime};
pub use tridiag::{Hermitian, Tridiagonal};

/// Samples per RNG substream.
pub const CHUNK: usize = 1024;

/// Generator for substream `chunk` of `seed`.
pub fn stream(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Matrix model whose largest eigenvalue is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "ensemble", rename_all = "lowercase")]
pub enum Model {
    Gue {
        n: usize,
    },
    Lue {
        n: usize,
        a: f64,
    },
    /// `Y = (X + X^H)/2` with entries of `X` uniform on `(±1 ± i)/sqrt 2`.
    Wigner4 {
        n: usize,
    },
}

impl Model {
    pub fn n(&self) -> usize {
        match *self {
            Model::Gue { n } | Model::Lue { n, .. } | Model::Wigner4 { n } => n,
        }
    }

    pub fn tag(&self) -> String {
        match *self {
            Model::Gue { n } => format!("gue(N={n})"),
            Model::Lue { n, a } => format!("lue(N={n},a={a})"),
            Model::Wigner4 { n } => format!("wigner4(N={n})"),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Model::Gue { n: 0 } => Err(Error::InvalidParameter("N must be at least 1".into())),
            Model::Lue { n, a } if n == 0 || !(a >= 0.0 && a.is_finite()) => {
                Err(Error::InvalidParameter(format!("LUE needs N >= 1 and finite a >= 0 (N={n}, a={a})")))
            }
            Model::Wigner4 { n } if n < 2 => Err(Error::InvalidParameter("Wigner ensemble needs N >= 2".into())),
            _ => Ok(()),
        }
    }

    /// One tridiagonal draw with the spectrum of the model.
    pub fn draw<R: Rng>(&self, rng: &mut R) -> Tridiagonal {
        match *self {
            Model::Gue { n } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let diag = (0..n).map(|_| s * rng.sample::<f64, _>(StandardNormal)).collect();
                let off_sq = (1..n)
                    .rev()
                    .map(|k| 0.25 * ChiSquared::new(2.0 * k as f64).expect("positive dof").sample(rng))
                    .collect();
                Tridiagonal { diag, off_sq }
            }
            Model::Lue { n, a } => {
                let d2: Vec<f64> = (0..n)
                    .map(|i| 0.5 * ChiSquared::new(2.0 * (n as f64 + a - i as f64)).expect("positive dof").sample(rng))
                    .collect();
                let e2: Vec<f64> = (0..n.saturating_sub(1))
                    .map(|i| 0.5 * ChiSquared::new(2.0 * (n - 1 - i) as f64).expect("positive dof").sample(rng))
                    .collect();
                let diag = (0..n).map(|i| d2[i] + if i > 0 { e2[i - 1] } else { 0.0 }).collect();
                let off_sq = (0..n.saturating_sub(1)).map(|i| d2[i] * e2[i]).collect();
                Tridiagonal { diag, off_sq }
            }
            Model::Wigner4 { n } => wigner4_matrix(n, rng).tridiagonalize(),
        }
    }
}

/// Dense four-point Wigner matrix `(X + X^H)/2`.
pub fn wigner4_matrix<R: Rng>(n: usize, rng: &mut R) -> Hermitian {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut x_re = vec![0.0; n * n];
    let mut x_im = vec![0.0; n * n];
    let mut bits = 0u64;
    let mut left = 0;
    for k in 0..n * n {
        if left == 0 {
            bits = rng.random();
            left = 32;
        }
        x_re[k] = if bits & 1 == 0 { s } else { -s };
        x_im[k] = if bits & 2 == 0 { s } else { -s };
        bits >>= 2;
        left -= 1;
    }
    let mut h = Hermitian::zeros(n);
    for i in 0..n {
        for j in 0..n {
            h.re[i * n + j] = 0.5 * (x_re[i * n + j] + x_re[j * n + i]);
            h.im[i * n + j] = 0.5 * (x_im[i * n + j] - x_im[j * n + i]);
        }
    }
    h
}

/// How raw eigenvalues are mapped before storage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    Raw,
    /// Soft-edge map of the ensemble: GUE/Wigner `sqrt(2N)` centring, LUE
    /// fixed-`a` centring `4N + 2a`.
    Edge,
    /// LUE with `a = alpha N`, centred at `N (sqrt(1+alpha) + 1)^2`.
    EdgeAlpha,
    /// `t = sqrt 2 N^{1/6} (lambda - sqrt(2N))`.
    Cc,
    /// `t + 1 / (2 N^{1/3})`.
    Cc2,
}

impl Scaling {
    fn map(self, model: &Model) -> Result<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
        let n = model.n();
        let edge = |s: EdgeScaling| -> Box<dyn Fn(f64) -> f64 + Send + Sync> { Box::new(move |x| s.t_of(x)) };
        Ok(match (self, *model) {
            (Scaling::Raw, _) => Box::new(|x| x),
            (Scaling::Edge | Scaling::Cc, Model::Gue { .. } | Model::Wigner4 { .. }) => edge(EdgeScaling::gue(n)?),
            (Scaling::Cc2, Model::Gue { .. } | Model::Wigner4 { .. }) => {
                let s = EdgeScaling::gue(n)?;
                let shift = 0.5 / (n as f64).cbrt();
                Box::new(move |x| s.t_of(x) + shift)
            }
            (Scaling::Edge, Model::Lue { a, .. }) => edge(EdgeScaling::lue_fixed(n, a)?),
            (Scaling::EdgeAlpha, Model::Lue { a, .. }) => edge(EdgeScaling::lue_alpha(n, a / n as f64)?),
            (s, m) => {
                return Err(Error::InvalidParameter(format!("scaling {s:?} does not apply to {}", m.tag())));
            }
        })
    }
}

/// A Monte Carlo request.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleJob {
    pub model: Model,
    pub xi: f64,
    pub scaling: Scaling,
    pub count: usize,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Execution,
}

impl SampleJob {
    pub fn new(model: Model, count: usize, seed: u64) -> Self {
        SampleJob { model, xi: 1.0, scaling: Scaling::Raw, count, seed, exec: Execution::Auto }
    }

    pub fn xi(self, xi: f64) -> Self {
        SampleJob { xi, ..self }
    }

    pub fn scaling(self, scaling: Scaling) -> Self {
        SampleJob { scaling, ..self }
    }

    pub fn exec(self, exec: Execution) -> Self {
        SampleJob { exec, ..self }
    }
}

/// Draws of a (scaled) largest eigenvalue or passage time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub ensemble: String,
    pub n: usize,
    pub a: Option<f64>,
    pub alpha: Option<f64>,
    pub xi: f64,
    /// Requested draws; `values.len() + atom_count == count`.
    pub count: usize,
    pub seed: u64,
    pub scaling: Scaling,
    /// Draws in which thinning removed every eigenvalue.
    pub atom_count: usize,
    pub values: Vec<f64>,
}

impl SampleBatch {
    pub fn atom_fraction(&self) -> f64 {
        self.atom_count as f64 / self.count.max(1) as f64
    }

    /// Empirical CDF at `x`, counting atoms as `-oo`.
    pub fn ecdf(&self, x: f64) -> f64 {
        (self.atom_count + self.values.iter().filter(|&&v| v <= x).count()) as f64 / self.count.max(1) as f64
    }
}

fn chunks(count: usize) -> Vec<(u64, usize)> {
    (0..count.div_ceil(CHUNK)).map(|c| (c as u64, CHUNK.min(count - c * CHUNK))).collect()
}

/// Sample the largest surviving eigenvalue. With `xi < 1` the spectrum
/// is scanned from the top and each eigenvalue kept with probability
/// `xi`, so the law is exact; `xi = 1` draws no coins and reproduces the
/// unthinned stream.
pub fn sample_max(job: &SampleJob) -> Result<SampleBatch> {
    job.model.validate()?;
    if !(job.xi > 0.0 && job.xi <= 1.0) {
        return Err(Error::InvalidParameter(format!("xi = {} must lie in (0, 1]", job.xi)));
    }
    let map = job.scaling.map(&job.model)?;
    let xi = job.xi;
    let parts = par::map(job.exec, &chunks(job.count), |&(c, m)| {
        let mut rng = stream(job.seed, c);
        let mut out = Vec::with_capacity(m);
        let mut atoms = 0;
        for _ in 0..m {
            let t = job.model.draw(&mut rng);
            let mut kept = None;
            for k in 1..=t.len() {
                if xi >= 1.0 || rng.random::<f64>() < xi {
                    kept = Some(t.kth_largest(k));
                    break;
                }
            }
            match kept {
                Some(x) => out.push(map(x)),
                None => atoms += 1,
            }
        }
        (out, atoms)
    });
    let mut values = Vec::with_capacity(job.count);
    let mut atom_count = 0;
    for (v, a) in parts {
        values.extend(v);
        atom_count += a;
    }
    let (a, alpha) = match job.model {
        Model::Lue { n, a } => (Some(a), Some(a / n as f64)),
        _ => (None, None),
    };
    Ok(SampleBatch {
        ensemble: job.model.tag(),
        n: job.model.n(),
        a,
        alpha,
        xi,
        count: job.count,
        seed: job.seed,
        scaling: job.scaling,
        atom_count,
        values,
    })
}

pub fn sample_gue_max(n: usize, count: usize, seed: u64, scaling: Scaling) -> Result<SampleBatch> {
    sample_max(&SampleJob::new(Model::Gue { n }, count, seed).scaling(scaling))
}

pub fn sample_lue_max(n: usize, a: f64, count: usize, seed: u64, scaling: Scaling) -> Result<SampleBatch> {
    sample_max(&SampleJob::new(Model::Lue { n, a }, count, seed).scaling(scaling))
}

pub fn sample_thinned_max(model: Model, xi: f64, count: usize, seed: u64, scaling: Scaling) -> Result<SampleBatch> {
    sample_max(&SampleJob::new(model, count, seed).xi(xi).scaling(scaling))
}

/// Four-point Wigner draws with centring `Cc` or `Cc2` (or `Raw`).
pub fn sample_wigner4_max(n: usize, count: usize, seed: u64, centring: Scaling) -> Result<SampleBatch> {
    if !matches!(centring, Scaling::Cc | Scaling::Cc2 | Scaling::Raw) {
        return Err(Error::InvalidParameter(format!("centring {centring:?} is not cc, cc2 or raw")));
    }
    sample_max(&SampleJob::new(Model::Wigner4 { n }, count, seed).scaling(centring))
}
