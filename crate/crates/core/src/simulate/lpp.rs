use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use super::{chunks, stream, SampleBatch, Scaling};
use crate::error::{Error, Result};
use crate::kernels::{EdgeScaling, Variant};
use crate::painleve::{solve_system, state_at, BoundaryConfig, PainleveSolution};
use crate::par::{self, Execution};

/// `rows x cols` lattice with `cols >= rows`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LppGrid {
    pub rows: usize,
    pub cols: usize,
}

impl LppGrid {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols < rows {
            return Err(Error::InvalidParameter(format!("grid {rows}x{cols} needs 1 <= rows <= cols")));
        }
        Ok(LppGrid { rows, cols })
    }

    /// Laguerre parameter of the matching ensemble.
    pub fn a(&self) -> f64 {
        (self.cols - self.rows) as f64
    }
}

/// Up/right last-passage time through row-major `weights`.
pub fn last_passage(weights: &[f64], rows: usize, cols: usize) -> f64 {
    assert_eq!(weights.len(), rows * cols);
    let mut l = vec![0.0f64; cols];
    for i in 0..rows {
        let mut left = 0.0f64;
        for j in 0..cols {
            left = weights[i * cols + j] + left.max(l[j]);
            l[j] = left;
        }
    }
    l[cols - 1]
}

/// Passage times with i.i.d. rate-1 exponential weights. `Edge` and
/// `EdgeAlpha` apply the LUE maps with `a = cols - rows`.
pub fn lpp_sample(grid: LppGrid, count: usize, seed: u64, scaling: Scaling, exec: Execution) -> Result<SampleBatch> {
    let grid = LppGrid::new(grid.rows, grid.cols)?;
    let (n, a) = (grid.rows, grid.a());
    let map: Box<dyn Fn(f64) -> f64 + Send + Sync> = match scaling {
        Scaling::Raw => Box::new(|x| x),
        Scaling::Edge => {
            let s = EdgeScaling::lue_fixed(n, a)?;
            Box::new(move |x| s.t_of(x))
        }
        Scaling::EdgeAlpha => {
            let s = EdgeScaling::lue_alpha(n, a / n as f64)?;
            Box::new(move |x| s.t_of(x))
        }
        s => return Err(Error::InvalidParameter(format!("scaling {s:?} does not apply to passage times"))),
    };
    let parts = par::map(exec, &chunks(count), |&(c, m)| {
        let mut rng = stream(seed, c);
        let mut w = vec![0.0; grid.rows * grid.cols];
        (0..m)
            .map(|_| {
                for x in w.iter_mut() {
                    *x = Exp1.sample(&mut rng);
                }
                map(last_passage(&w, grid.rows, grid.cols))
            })
            .collect::<Vec<f64>>()
    });
    Ok(SampleBatch {
        ensemble: format!("lpp(N={},n={})", grid.rows, grid.cols),
        n,
        a: Some(a),
        alpha: Some(a / n as f64),
        xi: 1.0,
        count,
        seed,
        scaling,
        atom_count: 0,
        values: parts.into_iter().flatten().collect(),
    })
}

/// Which limit the lattice shape follows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "kebab-case")]
pub enum LppRegime {
    /// `cols - rows` fixed.
    FixedA,
    /// `cols = rows (1 + alpha)`.
    Alpha { alpha: f64 },
}

impl LppRegime {
    fn variant(self) -> Variant {
        match self {
            LppRegime::FixedA => Variant::Lue,
            LppRegime::Alpha { alpha } => Variant::LueAlpha { alpha },
        }
    }

    /// Edge map for an `rows x cols` lattice.
    pub fn scaling(self, grid: LppGrid) -> Result<EdgeScaling> {
        match self {
            LppRegime::FixedA => EdgeScaling::lue_fixed(grid.rows, grid.a()),
            LppRegime::Alpha { alpha } => {
                let expect = grid.rows as f64 * (1.0 + alpha);
                if (grid.cols as f64 - expect).abs() > 0.5 + 1e-9 {
                    return Err(Error::InvalidParameter(format!(
                        "{}x{} lattice does not have cols = rows (1 + {alpha})",
                        grid.rows, grid.cols
                    )));
                }
                EdgeScaling::lue_alpha(grid.rows, alpha)
            }
        }
    }
}

/// Leading and corrected limiting CDFs of the scaled passage time, backed
/// by one `xi = 1` Painlevé solve.
#[derive(Clone, Debug)]
pub struct LppAsymptotics {
    pub regime: LppRegime,
    sol: PainleveSolution,
}

impl LppAsymptotics {
    pub fn new(regime: LppRegime, cfg: &BoundaryConfig, y_min: f64) -> Result<Self> {
        let sol = solve_system(Some(regime.variant()), 1.0, cfg, y_min)?;
        if let Some(y) = sol.diverged_at {
            return Err(Error::IntegrationDivergence { y, reason: "sigma0 branch lost".into() });
        }
        Ok(LppAsymptotics { regime, sol })
    }

    /// `(exp(-int_s sigma0), leading * (1 - N^{-2/3} int_s sigma1))`.
    pub fn cdf(&self, grid: LppGrid, s: f64) -> Result<(f64, f64)> {
        let grid = LppGrid::new(grid.rows, grid.cols)?;
        self.regime.scaling(grid)?;
        let [_, i0, _, i1] = state_at(&self.sol, s)
            .ok_or_else(|| Error::RangeMismatch(format!("s = {s} below the solved range {}", self.sol.y_min())))?;
        let lead = (-i0).exp();
        Ok((lead, lead * (1.0 - (grid.rows as f64).powf(-2.0 / 3.0) * i1)))
    }
}

/// One-shot [`LppAsymptotics::cdf`] with the default boundary setup.
pub fn lpp_asymptotic_cdf(grid: LppGrid, s: f64, regime: LppRegime) -> Result<(f64, f64)> {
    LppAsymptotics::new(regime, &BoundaryConfig::default(), s.min(0.0) - 1.0)?.cdf(grid, s)
}
