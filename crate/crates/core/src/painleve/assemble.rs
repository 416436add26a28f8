use std::path::Path;

use serde::{Deserialize, Serialize};

use super::boundary::{boundary_sigma0, boundary_sigma1};
use super::solve::solve_system;
use super::{BoundaryConfig, PainleveSolution};
use crate::error::{Error, Result};
use crate::fredholm::{curve, CurveMeta, CurveParams, DistributionCurve, Route};
use crate::kernels::{KernelSpec, Variant};

pub const SOLUTION_HEADER: [&str; 6] = ["y", "sigma0", "sigma0p", "sigma0pp", "sigma1", "residual0"];

/// Operator/ODE disagreement that marks a checkpoint as failed.
pub const CHECKPOINT_TOLERANCE: f64 = 1e-2;
const CHECKPOINTS: usize = 5;

// quintic Hermite on [a, a + h] from value, first and second derivative
fn hermite5(u: f64, h: f64, f0: [f64; 3], f1: [f64; 3]) -> f64 {
    let (u2, u3) = (u * u, u * u * u);
    let (u4, u5) = (u3 * u, u3 * u2);
    let h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
    let h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
    let h2 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
    let h3 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
    let h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
    let h5 = 0.5 * (u3 - 2.0 * u4 + u5);
    f0[0] * h0 + h * f0[1] * h1 + h * h * f0[2] * h2 + f1[0] * h3 + h * f1[1] * h4 + h * h * f1[2] * h5
}

/// `(sigma0, I0, sigma1, I1)` at `t`, or `None` below the solved range.
pub(crate) fn state_at(sol: &PainleveSolution, t: f64) -> Option<[f64; 4]> {
    let cfg = &sol.config;
    if t >= cfg.y_start {
        let b0 = boundary_sigma0(sol.xi, t, cfg);
        let (s1, i1) = match sol.variant {
            Some(v) => {
                let b1 = boundary_sigma1(v, sol.xi, t, cfg, &b0);
                (b1.sigma, b1.tail)
            }
            None => (0.0, 0.0),
        };
        return Some([b0.sigma, b0.tail, s1, i1]);
    }
    let pos = (cfg.y_start - t) / cfg.step;
    let mut i = pos.floor() as usize;
    if i + 1 >= sol.grid.len() {
        if i + 1 == sol.grid.len() && (sol.grid[i] - t).abs() < 1e-12 * cfg.step {
            i -= 1;
        } else {
            return None;
        }
    }
    let h = sol.grid[i + 1] - sol.grid[i];
    let u = (t - sol.grid[i]) / h;
    let interp =
        |f: &[f64], fp: &[f64], fpp: &[f64]| hermite5(u, h, [f[i], fp[i], fpp[i]], [f[i + 1], fp[i + 1], fpp[i + 1]]);
    let s0 = interp(&sol.sigma0, &sol.sigma0p, &sol.sigma0pp);
    let i0 = hermite5(
        u,
        h,
        [sol.int0[i], -sol.sigma0[i], -sol.sigma0p[i]],
        [sol.int0[i + 1], -sol.sigma0[i + 1], -sol.sigma0p[i + 1]],
    );
    let (s1, i1) = match (&sol.sigma1, &sol.sigma1p, &sol.sigma1pp, &sol.int1) {
        (Some(a), Some(ap), Some(app), Some(int)) => {
            (interp(a, ap, app), hermite5(u, h, [int[i], -a[i], -ap[i]], [int[i + 1], -a[i + 1], -ap[i + 1]]))
        }
        _ => (0.0, 0.0),
    };
    Some([s0, i0, s1, i1])
}

fn tag(variant: Option<Variant>) -> String {
    variant.map_or_else(|| "airy".into(), |v| v.correction_spec().tag())
}

/// `F = exp(-I0)`, `p0 = sigma0 F` and `p1 = (sigma1 - sigma0 I1) F` on
/// `ts`. Points below a lost branch come out as NaN and are flagged.
pub fn assemble_pdf(sol: &PainleveSolution, ts: &[f64]) -> Result<DistributionCurve> {
    crate::fredholm::check_grid(ts, sol.xi)?;
    if sol.diverged_at.is_none() && ts[0] < sol.y_min() - 1e-12 {
        return Err(Error::RangeMismatch(format!("grid starts at {} below the solved range {}", ts[0], sol.y_min())));
    }
    let n = ts.len();
    let (mut f, mut p0, mut p1) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let mut lost = vec![false; n];
    for (k, &t) in ts.iter().enumerate() {
        match state_at(sol, t) {
            Some([s0, i0, s1, i1]) => {
                let ff = (-i0).exp();
                f.push(ff);
                p0.push(s0 * ff);
                p1.push((s1 - s0 * i1) * ff);
            }
            None => {
                lost[k] = true;
                f.push(f64::NAN);
                p0.push(f64::NAN);
                p1.push(f64::NAN);
            }
        }
    }
    let mut notes = vec![];
    let untrusted_from = if lost.iter().any(|&b| b) {
        notes.push(format!("integration stopped at y = {}", sol.diverged_at.unwrap_or(f64::NAN)));
        ts.iter().zip(&lost).filter(|(_, &b)| b).map(|(t, _)| *t).fold(f64::NEG_INFINITY, f64::max).into()
    } else {
        None
    };
    let meta = CurveMeta {
        variant: tag(sol.variant),
        xi: sol.xi,
        route: Route::Ode,
        order: None,
        h: Some(sol.config.step),
        tail: None,
        clip: None,
        untrusted_from,
        notes,
    };
    Ok(DistributionCurve {
        meta,
        ts: ts.to_vec(),
        f,
        p0,
        p1: sol.variant.map(|_| p1),
        untrusted: untrusted_from.map(|_| lost),
    })
}

/// ODE and operator values of `(F, p0, p1)` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub t: f64,
    pub ode: [f64; 3],
    pub operator: [f64; 3],
    pub mismatch: f64,
}

impl Checkpoint {
    pub fn failed(&self, tol: f64) -> bool {
        !(self.mismatch <= tol)
    }
}

/// Compare the ODE curve at `curve.ts[k]` against the operator route.
pub fn checkpoint(
    ode: &DistributionCurve,
    k: usize,
    variant: Option<Variant>,
    params: &CurveParams,
) -> Result<Checkpoint> {
    let t = ode.ts[k];
    let l = variant.map(|v| v.correction_spec());
    let op = curve(&KernelSpec::AiryLimit, l.as_ref(), ode.meta.xi, &[t], params)?;
    let ov = [ode.f[k], ode.p0[k], ode.p1.as_ref().map_or(0.0, |p| p[k])];
    let pv = [op.f[0], op.p0[0], op.p1.as_ref().map_or(0.0, |p| p[0])];
    let mismatch =
        ov.iter()
            .zip(&pv)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, |m: f64, d| if d.is_nan() { f64::NAN } else { m.max(d) });
    Ok(Checkpoint { t, ode: ov, operator: pv, mismatch })
}

/// ODE-route curve. For `xi < 1` a few grid points are checked against
/// the operator route; from the first failure (scanning downward) every
/// point at or below it is flagged untrusted.
pub fn ode_curve(
    variant: Option<Variant>,
    xi: f64,
    ts: &[f64],
    cfg: &BoundaryConfig,
    params: &CurveParams,
) -> Result<DistributionCurve> {
    ode_curve_with_tolerance(variant, xi, ts, cfg, params, CHECKPOINT_TOLERANCE)
}

/// [`ode_curve`] with an explicit checkpoint tolerance.
pub fn ode_curve_with_tolerance(
    variant: Option<Variant>,
    xi: f64,
    ts: &[f64],
    cfg: &BoundaryConfig,
    params: &CurveParams,
    tol: f64,
) -> Result<DistributionCurve> {
    crate::fredholm::check_grid(ts, xi)?;
    let y_min = ts[0].min(cfg.y_start - 1.0);
    let sol = solve_system(variant, xi, cfg, y_min)?;
    let mut out = assemble_pdf(&sol, ts)?;
    if xi >= 1.0 {
        return Ok(out);
    }
    let n = ts.len();
    let mut picks: Vec<usize> =
        (0..CHECKPOINTS).map(|j| (j * (n - 1) + (CHECKPOINTS - 1) / 2) / (CHECKPOINTS - 1)).collect();
    picks.dedup();
    picks.reverse();
    for &k in &picks {
        if out.untrusted.as_ref().is_some_and(|u| u[k]) {
            continue;
        }
        let c = checkpoint(&out, k, variant, params)?;
        if c.failed(tol) {
            out.meta.notes.push(format!("checkpoint at t = {} failed: mismatch {:e}", c.t, c.mismatch));
            let from = out.meta.untrusted_from.map_or(c.t, |u| u.max(c.t));
            out.meta.untrusted_from = Some(from);
            out.untrusted = Some(ts.iter().map(|&t| t <= from).collect());
            break;
        }
        out.meta.notes.push(format!("checkpoint at t = {} passed: mismatch {:e}", c.t, c.mismatch));
    }
    Ok(out)
}

/// `y,sigma0,sigma0p,sigma0pp,sigma1,residual0` on the solution grid.
pub fn write_solution_csv(sol: &PainleveSolution, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SOLUTION_HEADER)?;
    for i in 0..sol.grid.len() {
        w.write_record([
            sol.grid[i].to_string(),
            sol.sigma0[i].to_string(),
            sol.sigma0p[i].to_string(),
            sol.sigma0pp[i].to_string(),
            sol.sigma1.as_ref().map(|s| s[i].to_string()).unwrap_or_default(),
            sol.residual0[i].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
