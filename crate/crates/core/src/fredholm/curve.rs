use serde::{Deserialize, Serialize};

use super::{build_rule, default_tail, NystromSystem};
use crate::error::{Error, Result};
use crate::kernels::{KernelSpec, Variant};
use crate::par::{self, Execution};

/// How a curve was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Operator,
    Ode,
    FiniteN,
}

/// Resolution of the operator route.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    pub order: usize,
    /// Interval length; `None` means [`default_tail`].
    pub tail: Option<f64>,
    /// Central-difference step.
    pub h: f64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for CurveParams {
    fn default() -> Self {
        CurveParams { order: 96, tail: None, h: 1e-3, exec: Execution::Auto }
    }
}

impl CurveParams {
    fn validate(&self) -> Result<()> {
        if self.order < 8 {
            return Err(Error::InvalidParameter(format!("order {} is below 8", self.order)));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidParameter(format!("step h = {} must be positive", self.h)));
        }
        if let Some(tail) = self.tail {
            if !(tail > 0.0) {
                return Err(Error::InvalidParameter(format!("tail {tail} must be positive")));
            }
        }
        Ok(())
    }

    fn tail_at(&self, t: f64) -> f64 {
        self.tail.unwrap_or_else(|| default_tail(t))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub variant: String,
    pub xi: f64,
    pub route: Route,
    pub order: Option<usize>,
    pub h: Option<f64>,
    pub tail: Option<f64>,
    /// Smallest grid point kept after clipping to the Laguerre support.
    pub clip: Option<f64>,
    /// First grid point from which an ODE curve failed its checkpoints.
    pub untrusted_from: Option<f64>,
    pub notes: Vec<String>,
}

/// `t -> (F, p0, p1)` on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionCurve {
    pub meta: CurveMeta,
    pub ts: Vec<f64>,
    pub f: Vec<f64>,
    pub p0: Vec<f64>,
    pub p1: Option<Vec<f64>>,
    /// Per-point flag, present only for ODE curves that were checked.
    pub untrusted: Option<Vec<bool>>,
}

impl DistributionCurve {
    /// Trapezoid integral of `values` over the curve grid.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        self.ts.windows(2).zip(values.windows(2)).map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1])).sum()
    }

    /// Largest decrease of `F` between neighbours (zero when monotone).
    pub fn max_decrease(&self) -> f64 {
        self.f.windows(2).map(|w| (w[0] - w[1]).max(0.0)).fold(0.0, f64::max)
    }
}

pub(crate) fn check_grid(ts: &[f64], xi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::InvalidParameter(format!("xi = {xi} must lie in [0, 1]")));
    }
    if ts.is_empty() {
        return Err(Error::InvalidParameter("empty t grid".into()));
    }
    if ts.iter().any(|t| !t.is_finite()) || ts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("t grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

struct Point {
    f: f64,
    p0: f64,
    p1: Option<f64>,
}

fn point(k: &KernelSpec, l: Option<&KernelSpec>, xi: f64, t: f64, p: &CurveParams) -> Result<Point> {
    let eval = |s: f64, with_l: bool| -> Result<(f64, Option<f64>)> {
        let rule = build_rule(s, p.order, p.tail_at(s))?;
        let sys = NystromSystem::from_specs(k, if with_l { l } else { None }, rule)?;
        let (d, om) = sys.evaluate(xi)?;
        Ok((d.value, om))
    };
    let (f, _) = eval(t, false)?;
    let (fp, op) = eval(t + p.h, true)?;
    let (fm, om) = eval(t - p.h, true)?;
    let p1 = match (op, om) {
        (Some(a), Some(b)) => Some((a - b) / (2.0 * p.h)),
        _ => None,
    };
    Ok(Point { f, p0: (fp - fm) / (2.0 * p.h), p1 })
}

fn assemble(points: Vec<Point>, ts: Vec<f64>, meta: CurveMeta, with_l: bool) -> DistributionCurve {
    let f = points.iter().map(|p| p.f).collect();
    let p0 = points.iter().map(|p| p.p0).collect();
    let p1 = with_l.then(|| points.iter().map(|p| p.p1.unwrap_or(0.0)).collect());
    DistributionCurve { meta, ts, f, p0, p1, untrusted: None }
}

/// Operator-route curve for the limiting kernel `k`, with `p1` when a
/// correction kernel `l` is supplied.
pub fn curve(
    k: &KernelSpec,
    l: Option<&KernelSpec>,
    xi: f64,
    ts: &[f64],
    params: &CurveParams,
) -> Result<DistributionCurve> {
    params.validate()?;
    check_grid(ts, xi)?;
    k.validate()?;
    if let Some(l) = l {
        if !l.is_correction() {
            return Err(Error::InvalidParameter(format!("{} is not a correction kernel", l.tag())));
        }
        l.validate()?;
    }
    let points = par::try_map(params.exec, ts, |&t| point(k, l, xi, t, params))?;
    let variant = match l {
        Some(l) => l.tag(),
        None => k.tag(),
    };
    let meta = CurveMeta {
        variant,
        xi,
        route: Route::Operator,
        order: Some(params.order),
        h: Some(params.h),
        tail: params.tail,
        clip: None,
        untrusted_from: None,
        notes: vec![],
    };
    Ok(assemble(points, ts.to_vec(), meta, l.is_some()))
}

/// Finite-N curve in the scaled variable. Laguerre grids are clipped so
/// every determinant stays inside the support; the first kept point is
/// recorded in `meta.clip`.
pub fn finite_curve(spec: &KernelSpec, xi: f64, ts: &[f64], params: &CurveParams) -> Result<DistributionCurve> {
    params.validate()?;
    check_grid(ts, xi)?;
    if !spec.is_finite_n() {
        return Err(Error::InvalidParameter(format!("{} is not a finite-N kernel", spec.tag())));
    }
    spec.validate()?;
    let scaling = spec.scaling().expect("validated finite spec");
    let (kept, clip) = match scaling.support_floor() {
        Some(floor) => {
            let kept: Vec<f64> = ts.iter().copied().filter(|&t| t - params.h > floor).collect();
            let clip = (kept.len() < ts.len()).then(|| kept.first().copied().unwrap_or(f64::NAN));
            (kept, clip)
        }
        None => (ts.to_vec(), None),
    };
    if kept.is_empty() {
        return Err(Error::OutsideSupport { t: ts[ts.len() - 1], point: scaling.s(ts[ts.len() - 1]) });
    }
    let points = par::try_map(params.exec, &kept, |&t| point(spec, None, xi, t, params))?;
    let meta = CurveMeta {
        variant: spec.tag(),
        xi,
        route: Route::FiniteN,
        order: Some(params.order),
        h: Some(params.h),
        tail: params.tail,
        clip,
        untrusted_from: None,
        notes: vec![],
    };
    Ok(assemble(points, kept, meta, false))
}

/// `N^{2/3} (p_N - p0)` next to the limiting correction `p1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledDifference {
    pub n: usize,
    pub xi: f64,
    pub variant: Variant,
    pub ts: Vec<f64>,
    pub scaled: Vec<f64>,
    pub p1: Vec<f64>,
    pub clip: Option<f64>,
}

impl ScaledDifference {
    /// `sup_t |scaled - p1|`.
    pub fn sup_gap(&self) -> f64 {
        self.scaled.iter().zip(&self.p1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Scaled finite-size difference for a finite-N spec against its limit.
pub fn scaled_difference(spec: &KernelSpec, xi: f64, ts: &[f64], params: &CurveParams) -> Result<ScaledDifference> {
    let (n, variant) = match *spec {
        KernelSpec::FiniteGue { n } => (n, Variant::Gue),
        KernelSpec::FiniteLue { n, .. } => (n, Variant::Lue),
        KernelSpec::FiniteLueAlpha { n, alpha } => (n, Variant::LueAlpha { alpha }),
        _ => return Err(Error::InvalidParameter(format!("{} is not a finite-N kernel", spec.tag()))),
    };
    let fin = finite_curve(spec, xi, ts, params)?;
    let lim = curve(&KernelSpec::AiryLimit, Some(&variant.correction_spec()), xi, &fin.ts, params)?;
    let scale = (n as f64).powf(2.0 / 3.0);
    let scaled = fin.p0.iter().zip(&lim.p0).map(|(a, b)| scale * (a - b)).collect();
    Ok(ScaledDifference { n, xi, variant, ts: fin.ts, scaled, p1: lim.p1.unwrap_or_default(), clip: fin.meta.clip })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(a: f64, b: f64, step: f64) -> Vec<f64> {
        let n = ((b - a) / step).round() as usize;
        (0..=n).map(|i| a + i as f64 * step).collect()
    }

    #[test]
    fn limit_curve_normalisation() {
        let ts = grid(-10.0, 6.0, 0.05);
        for spec in [KernelSpec::CorrectionGue, KernelSpec::CorrectionLue] {
            let c = curve(&KernelSpec::AiryLimit, Some(&spec), 1.0, &ts, &CurveParams::default()).unwrap();
            let i0 = c.trapezoid(&c.p0);
            let i1 = c.trapezoid(c.p1.as_ref().unwrap());
            assert!((i0 - 1.0).abs() < 1e-6, "{i0}");
            assert!(i1.abs() < 1e-5, "{i1}");
            assert!(c.p0.iter().all(|&v| v >= -1e-8));
            assert_eq!(c.max_decrease(), 0.0);
            assert!(c.f.iter().all(|&v| (-1e-10..=1.0 + 1e-10).contains(&v)));
            assert!((c.f.last().unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn xi_zero_curve() {
        let ts = grid(-3.0, 1.0, 0.5);
        let c =
            curve(&KernelSpec::AiryLimit, Some(&KernelSpec::CorrectionLue), 0.0, &ts, &CurveParams::default()).unwrap();
        assert!(c.f.iter().all(|&v| v == 1.0));
        assert!(c.p0.iter().all(|&v| v == 0.0));
        assert!(c.p1.unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn finite_n1_gue_closed_form() {
        // F(t) = int_{-oo}^{s_t} e^{-x^2}/sqrt(pi) = (1 + erf(s_t)) / 2
        let ts = grid(-4.0, 3.0, 0.5);
        let c = finite_curve(&KernelSpec::FiniteGue { n: 1 }, 1.0, &ts, &CurveParams::default()).unwrap();
        let sc = crate::kernels::EdgeScaling::gue(1).unwrap();
        // independent oracle: Simpson on the Gaussian density
        let cdf = |s: f64| {
            let a = -12.0;
            let m = 20_000;
            let h = (s - a) / m as f64;
            let f = |x: f64| (-x * x).exp() / PI.sqrt();
            let mut acc = f(a) + f(s);
            for i in 1..m {
                acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc * h / 3.0
        };
        for (t, f) in ts.iter().zip(&c.f) {
            let want = cdf(sc.s(*t));
            assert!((f - want).abs() < 1e-10, "t={t}: {f} vs {want}");
        }
        assert_eq!(c.meta.route, Route::FiniteN);
    }

    #[test]
    fn finite_monotone_and_clipped() {
        let ts = grid(-6.0, 3.0, 0.25);
        let c = finite_curve(&KernelSpec::FiniteGue { n: 10 }, 1.0, &ts, &CurveParams::default()).unwrap();
        assert_eq!(c.max_decrease(), 0.0);
        let l = finite_curve(&KernelSpec::FiniteLue { n: 1, a: 0.0 }, 1.0, &ts, &CurveParams::default()).unwrap();
        let floor = KernelSpec::FiniteLue { n: 1, a: 0.0 }.scaling().unwrap().support_floor().unwrap();
        assert!(l.meta.clip.is_some());
        assert!(l.ts[0] > floor);
        assert!(l.ts.len() < ts.len());
    }

    #[test]
    fn finite_n_gap_ratio() {
        let ts = grid(-5.0, 3.0, 0.25);
        let p = CurveParams { order: 64, ..Default::default() };
        let lim = curve(&KernelSpec::AiryLimit, None, 1.0, &ts, &p).unwrap();
        let gap = |n: usize| {
            let c = finite_curve(&KernelSpec::FiniteGue { n }, 1.0, &ts, &p).unwrap();
            c.f.iter().zip(&lim.f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let r = gap(100) / gap(400);
        let want = 4f64.powf(2.0 / 3.0);
        assert!((r - want).abs() < 0.3 * want, "ratio {r}");
    }

    #[test]
    fn scaled_difference_zero_at_xi_zero() {
        let ts = grid(-2.0, 1.0, 0.5);
        let d = scaled_difference(&KernelSpec::FiniteGue { n: 20 }, 0.0, &ts, &CurveParams::default()).unwrap();
        assert!(d.scaled.iter().all(|&v| v == 0.0));
        assert!(d.p1.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        let p = CurveParams::default();
        assert!(curve(&KernelSpec::AiryLimit, None, 1.0, &[1.0, 0.0], &p).is_err());
        assert!(curve(&KernelSpec::AiryLimit, None, 1.2, &[0.0], &p).is_err());
        assert!(curve(&KernelSpec::AiryLimit, Some(&KernelSpec::AiryLimit), 1.0, &[0.0], &p).is_err());
        let bad = CurveParams { h: 0.0, ..p };
        assert!(curve(&KernelSpec::AiryLimit, None, 1.0, &[0.0], &bad).is_err());
        assert!(finite_curve(&KernelSpec::AiryLimit, 1.0, &[0.0], &p).is_err());
    }
}
