use super::boundary::{boundary_sigma0, boundary_sigma1, forcing, second_order_coeffs};
use super::ode::Dopri;
use super::{BoundaryConfig, PainleveSolution};
use crate::error::{Error, Result};
use crate::kernels::Variant;

/// Relative size of the quadratic residual at which the `sigma0` branch is
/// considered lost.
const RESIDUAL_LIMIT: f64 = 1e-6;

fn check(xi: f64, cfg: &BoundaryConfig, y_min: f64) -> Result<()> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::InvalidParameter(format!("xi = {xi} must lie in [0, 1]")));
    }
    if !(y_min.is_finite() && y_min < cfg.y_start) {
        return Err(Error::InvalidParameter(format!("y_min = {y_min} must lie below y_start = {}", cfg.y_start)));
    }
    Ok(())
}

pub(crate) fn residual0(y: f64, s: f64, sp: f64, spp: f64) -> f64 {
    let q = spp * spp + 4.0 * sp * (sp * sp - y * sp + s);
    let scale = spp * spp + 4.0 * sp.abs() * (sp * sp + (y * sp).abs() + s.abs());
    if scale == 0.0 {
        0.0
    } else {
        q.abs() / scale
    }
}

pub(crate) fn residual1(v: Variant, y: f64, st: &[f64; 8]) -> f64 {
    let (a, b, c, d) = second_order_coeffs(v, y, st[0], st[1], st[2]);
    let lhs = [a * st[6], b * st[5], c * st[4]];
    let scale = lhs.iter().map(|v| v.abs()).sum::<f64>() + d.abs();
    if scale == 0.0 {
        0.0
    } else {
        (lhs.iter().sum::<f64>() - d).abs() / scale
    }
}

fn rhs(variant: Option<Variant>) -> impl Fn(f64, &[f64; 8]) -> [f64; 8] {
    move |y, s| {
        let s0ppp = -6.0 * s[1] * s[1] + 4.0 * y * s[1] - 2.0 * s[0];
        let f = variant.map_or(0.0, |v| forcing(v, y, s[0], s[1], s[2]));
        let s1ppp = f - (12.0 * s[1] - 4.0 * y) * s[5] - 2.0 * s[4];
        [s[1], s[2], s0ppp, -s[0], s[5], s[6], s1ppp, -s[4]]
    }
}

/// Integrate `sigma0` (and `sigma1` when `variant` is given) from
/// `cfg.y_start` down to at least `y_min`. A lost branch stops the
/// integration and is reported through `diverged_at`; the trajectory up
/// to that point is kept.
pub fn solve_system(variant: Option<Variant>, xi: f64, cfg: &BoundaryConfig, y_min: f64) -> Result<PainleveSolution> {
    check(xi, cfg, y_min)?;
    if let Some(v) = variant {
        v.validate()?;
    }
    let y0 = cfg.y_start;
    let b0 = boundary_sigma0(xi, y0, cfg);
    let mut st = [b0.sigma, b0.sigmap, b0.sigmapp, b0.tail, 0.0, 0.0, 0.0, 0.0];
    if let Some(v) = variant {
        let b1 = boundary_sigma1(v, xi, y0, cfg, &b0);
        st[4..].copy_from_slice(&[b1.sigma, b1.sigmap, b1.sigmapp, b1.tail]);
    }
    let n = ((y0 - y_min) / cfg.step).ceil() as usize;
    let mut sol = PainleveSolution {
        xi,
        variant,
        config: *cfg,
        grid: Vec::with_capacity(n + 1),
        sigma0: Vec::with_capacity(n + 1),
        sigma0p: Vec::with_capacity(n + 1),
        sigma0pp: Vec::with_capacity(n + 1),
        int0: Vec::with_capacity(n + 1),
        sigma1: variant.map(|_| Vec::with_capacity(n + 1)),
        sigma1p: variant.map(|_| Vec::with_capacity(n + 1)),
        sigma1pp: variant.map(|_| Vec::with_capacity(n + 1)),
        int1: variant.map(|_| Vec::with_capacity(n + 1)),
        residual0: Vec::with_capacity(n + 1),
        residual1: variant.map(|_| Vec::with_capacity(n + 1)),
        diverged_at: None,
    };
    let f = rhs(variant);
    let mut ode = Dopri::new(cfg.rtol, cfg.atol, -1e-3);
    let push = |sol: &mut PainleveSolution, y: f64, st: &[f64; 8]| {
        sol.grid.push(y);
        sol.sigma0.push(st[0]);
        sol.sigma0p.push(st[1]);
        sol.sigma0pp.push(st[2]);
        sol.int0.push(st[3]);
        sol.residual0.push(residual0(y, st[0], st[1], st[2]));
        if let Some(v) = variant {
            sol.sigma1.as_mut().unwrap().push(st[4]);
            sol.sigma1p.as_mut().unwrap().push(st[5]);
            sol.sigma1pp.as_mut().unwrap().push(st[6]);
            sol.int1.as_mut().unwrap().push(st[7]);
            sol.residual1.as_mut().unwrap().push(residual1(v, y, st));
        }
    };
    push(&mut sol, y0, &st);
    for i in 1..=n {
        let (ya, yb) = (y0 - (i - 1) as f64 * cfg.step, y0 - i as f64 * cfg.step);
        let mut next = st;
        if let Err((at, _)) = ode.advance(&f, ya, yb, &mut next) {
            sol.diverged_at = Some(at);
            break;
        }
        if next.iter().any(|v| !v.is_finite()) || residual0(yb, next[0], next[1], next[2]) > RESIDUAL_LIMIT {
            sol.diverged_at = Some(yb);
            break;
        }
        st = next;
        push(&mut sol, yb, &st);
    }
    Ok(sol)
}

/// `sigma0` alone; a lost branch is an error.
pub fn solve_sigma0(xi: f64, cfg: &BoundaryConfig, y_min: f64) -> Result<PainleveSolution> {
    let sol = solve_system(None, xi, cfg, y_min)?;
    match sol.diverged_at {
        Some(y) => Err(Error::IntegrationDivergence {
            y,
            reason: format!("quadratic residual above {RESIDUAL_LIMIT:e} or non-finite state"),
        }),
        None => Ok(sol),
    }
}

/// `sigma1` for `variant`, reusing the parameters of an existing `sigma0`
/// solution. The two are integrated together so that `sigma1` sees the
/// exact `sigma0` at every stage; the result covers the same grid.
pub fn solve_sigma1(variant: Variant, sol0: &PainleveSolution) -> Result<PainleveSolution> {
    let sol = solve_system(Some(variant), sol0.xi, &sol0.config, sol0.y_min())?;
    if let Some(y) = sol.diverged_at {
        return Err(Error::IntegrationDivergence { y, reason: "joint integration lost the sigma0 branch".into() });
    }
    let n = sol0.grid.len().min(sol.grid.len());
    let drift = (0..n).map(|i| (sol.sigma0[i] - sol0.sigma0[i]).abs()).fold(0.0, f64::max);
    let size = sol0.sigma0.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if drift > 1e-9 * size.max(1e-300) {
        return Err(Error::RangeMismatch(format!("sigma0 trajectories differ by {drift:e}")));
    }
    Ok(sol)
}
