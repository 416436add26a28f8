//! The acceptance battery: nine numbered checks, each producing measured
//! numbers next to their bounds.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fredholm::{
    build_rule, curve, default_tail, fredholm_det, scaled_difference, CurveParams, DistributionCurve,
};
use crate::kernels::{correction_kernel, correction_kernel_alpha, correction_kernel_lue_printed, KernelSpec, Variant};
use crate::painleve::{density_residual, ode_curve, BoundaryConfig, DensityOde};
use crate::par::Execution;
use crate::simulate::{
    correction_extract, lpp_sample, sample_gue_max, sample_lue_max, sample_wigner4_max, LppGrid, SampleBatch, Scaling,
};
use crate::specfun::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    RouteEquivalence,
    FiniteSize,
    AlphaLimit,
    DensityOde,
    Quadrature,
    Lpp,
    TrivialLaws,
    Wigner,
    Normalization,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::RouteEquivalence,
        Suite::FiniteSize,
        Suite::AlphaLimit,
        Suite::DensityOde,
        Suite::Quadrature,
        Suite::Lpp,
        Suite::TrivialLaws,
        Suite::Wigner,
        Suite::Normalization,
    ];

    pub fn id(self) -> u8 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u8 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::RouteEquivalence => "route-equivalence",
            Suite::FiniteSize => "finite-size",
            Suite::AlphaLimit => "alpha-limit",
            Suite::DensityOde => "density-ode",
            Suite::Quadrature => "quadrature",
            Suite::Lpp => "lpp",
            Suite::TrivialLaws => "trivial-laws",
            Suite::Wigner => "wigner",
            Suite::Normalization => "normalization",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(k) = s.parse::<usize>() {
            if (1..=9).contains(&k) {
                return Ok(Suite::ALL[k - 1]);
            }
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// One measured quantity. `pass` is `value <= bound` unless stated
/// otherwise in `name`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Measurement {
    fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Measurement { name: name.into(), value, bound, pass: value <= bound }
    }

    fn flag(name: impl Into<String>, ok: bool) -> Self {
        Measurement { name: name.into(), value: f64::from(u8::from(ok)), bound: 1.0, pass: ok }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub suite: Suite,
    pub pass: bool,
    pub seconds: f64,
    pub measurements: Vec<Measurement>,
    pub notes: Vec<String>,
}

impl CriterionReport {
    /// `PASS [k] name: m1 = v <= b; ...`
    pub fn line(&self) -> String {
        let parts: Vec<String> = self
            .measurements
            .iter()
            .map(|m| format!("{}{} = {:.3e} (bound {:.3e})", if m.pass { "" } else { "!" }, m.name, m.value, m.bound))
            .collect();
        format!(
            "{} [{}] {} ({:.1}s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.suite,
            self.seconds,
            parts.join("; ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub version: String,
    pub seed: u64,
    pub pass: bool,
    pub criteria: Vec<CriterionReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 20_240_601, exec: Execution::Auto }
    }
}

fn grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = ((b - a) / step).round() as usize;
    (0..=n).map(|i| a + i as f64 * step).collect()
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, |m: f64, d| if d.is_nan() { f64::NAN } else { m.max(d) })
}

fn params(exec: Execution) -> CurveParams {
    CurveParams { exec, ..Default::default() }
}

type Body = (Vec<Measurement>, Vec<String>);

fn route_equivalence(o: &VerifyOptions) -> Result<Body> {
    let ts = grid(-6.0, 2.0, 0.1);
    let mut m = vec![];
    for v in [Variant::Gue, Variant::Lue, Variant::LueAlpha { alpha: 0.5 }, Variant::LueAlpha { alpha: 5.0 }] {
        let start = Instant::now();
        let ode = ode_curve(Some(v), 1.0, &ts, &BoundaryConfig::default(), &params(o.exec))?;
        let op = curve(&KernelSpec::AiryLimit, Some(&v.correction_spec()), 1.0, &ts, &params(o.exec))?;
        let gap = sup(ode.p1.as_deref().unwrap_or(&[]), op.p1.as_deref().unwrap_or(&[]));
        m.push(Measurement::at_most(format!("{} sup|p1 ode - operator|", v.tag()), gap, 5e-3));
        m.push(Measurement::at_most(format!("{} seconds", v.tag()), start.elapsed().as_secs_f64(), 120.0));
    }
    Ok((m, vec![]))
}

fn finite_size(o: &VerifyOptions) -> Result<Body> {
    let ts = grid(-6.0, 2.0, 0.1);
    let mut m = vec![];
    let mut notes = vec![];
    for xi in [0.6, 1.0] {
        let d: Vec<f64> = [50, 100, 200, 400]
            .iter()
            .map(|&n| scaled_difference(&KernelSpec::FiniteGue { n }, xi, &ts, &params(o.exec)).map(|s| s.sup_gap()))
            .collect::<Result<_>>()?;
        let shown: Vec<String> = d.iter().map(|x| format!("{x:.3e}")).collect();
        notes.push(format!("xi = {xi}: D(50, 100, 200, 400) = {}", shown.join(", ")));
        let decreasing = d.windows(2).all(|w| w[1] < w[0]);
        m.push(Measurement::flag(format!("xi={xi} D(N) strictly decreasing"), decreasing));
        m.push(Measurement::at_most(format!("xi={xi} D(400)/D(50)"), d[3] / d[0], 1.0));
    }
    Ok((m, notes))
}

fn alpha_limit(_: &VerifyOptions) -> Result<Body> {
    let xs = grid(-4.0, 4.0, 0.4);
    let (mut gap, mut printed) = (0.0f64, 0.0f64);
    for &x in &xs {
        for &y in &xs {
            let lim = correction_kernel_alpha(1e-8, x, y)?;
            gap = gap.max((lim - correction_kernel(&KernelSpec::CorrectionLue, x, y)?).abs());
            printed = printed.max((lim - correction_kernel_lue_printed(x, y)).abs());
        }
    }
    let notes = vec![format!(
        "printed LUE branch (coefficient x^2+xy+y^2 on both Ai'Ai' and AiAi) differs from the alpha -> 0 limit by up to {printed:.3e}; the limit is the reference"
    )];
    Ok((vec![Measurement::at_most("sup |L_alpha(1e-8) - L_lue|", gap, 1e-5)], notes))
}

fn density_ode(_: &VerifyOptions) -> Result<Body> {
    let h = 0.005;
    let mut m = vec![];
    for alpha in [0.5, 5.0] {
        let v = Variant::LueAlpha { alpha };
        let ys = grid(-4.0 - 3.0 * h, 4.0 + 3.0 * h, h);
        let vals: Vec<f64> =
            ys.iter().map(|&y| crate::kernels::density_correction(v, y).map(|r| r.1)).collect::<Result<_>>()?;
        let r = density_residual(DensityOde::AlphaLimit { alpha }, &vals, ys[0], h)?;
        m.push(Measurement::at_most(format!("alpha={alpha} relative residual"), r.relative_max(), 1e-6));
    }
    let xs = grid(-3.0 - 3.0 * h, 3.0 + 3.0 * h, h);
    let vals: Vec<f64> = xs.iter().map(|&x| Family::Hermite.kernel_sum(10, x, x)).collect();
    let r = density_residual(DensityOde::GueFinite { n: 10 }, &vals, xs[0], h)?;
    m.push(Measurement::at_most("GUE N=10 relative residual", r.relative_max(), 1e-5));
    let xs = grid(0.5, 60.0, h);
    let vals: Vec<f64> = xs.iter().map(|&x| Family::Laguerre(1.0).kernel_sum(10, x, x)).collect();
    let r = density_residual(DensityOde::LueFinite { n: 10, a: 1.0 }, &vals, xs[0], h)?;
    m.push(Measurement::at_most("LUE N=10 a=1 relative residual", r.relative_max(), 1e-5));
    Ok((m, vec![]))
}

fn quadrature(_: &VerifyOptions) -> Result<Body> {
    let mut worst = 0.0f64;
    for xi in [0.3, 1.0] {
        for t in [-8.0, -4.0, 0.0, 4.0] {
            let tail = default_tail(t);
            let a = fredholm_det(&KernelSpec::AiryLimit, xi, &build_rule(t, 48, tail)?)?.value;
            let b = fredholm_det(&KernelSpec::AiryLimit, xi, &build_rule(t, 96, tail)?)?.value;
            worst = worst.max((a - b).abs());
        }
    }
    Ok((vec![Measurement::at_most("max |F_96 - F_48|", worst, 1e-9)], vec![]))
}

fn ecdf_gap(b: &SampleBatch, c: &DistributionCurve) -> f64 {
    let mut v = b.values.clone();
    v.sort_by(f64::total_cmp);
    let n = b.count as f64;
    c.ts.iter()
        .zip(&c.f)
        .map(|(&t, &f)| ((v.partition_point(|&x| x <= t) + b.atom_count) as f64 / n - f).abs())
        .fold(0.0, f64::max)
}

fn lpp(o: &VerifyOptions) -> Result<Body> {
    let count = 100_000;
    let b = lpp_sample(LppGrid::new(4, 6)?, count, o.seed, Scaling::Edge, o.exec)?;
    let c = crate::fredholm::finite_curve(
        &KernelSpec::FiniteLue { n: 4, a: 2.0 },
        1.0,
        &grid(-4.5, 6.0, 0.02),
        &params(o.exec),
    )?;
    let band = ((2.0f64 / 0.01).ln() / (2.0 * count as f64)).sqrt();
    Ok((vec![Measurement::at_most("sup |ecdf - F_LUE(N=4,a=2)|", ecdf_gap(&b, &c), band)], vec![]))
}

fn trivial_laws(o: &VerifyOptions) -> Result<Body> {
    let n = 1_000_000;
    let nf = n as f64;
    let mut m = vec![];
    let g = sample_gue_max(1, n, o.seed, Scaling::Raw)?;
    let mean = g.values.iter().sum::<f64>() / nf;
    let var = g.values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    m.push(Measurement::at_most("GUE N=1 |mean| / se", mean.abs() / (0.5 / nf).sqrt(), 4.0));
    m.push(Measurement::at_most("GUE N=1 |var - 1/2| / se", (var - 0.5).abs() / (0.5 * (2.0 / nf).sqrt()), 4.0));
    let l = sample_lue_max(1, 0.0, n, o.seed + 1, Scaling::Raw)?;
    let mean = l.values.iter().sum::<f64>() / nf;
    m.push(Measurement::at_most("LUE N=1 a=0 |mean - 1| / se", (mean - 1.0).abs() / (1.0 / nf).sqrt(), 4.0));
    let p = lpp_sample(LppGrid::new(1, 2)?, n, o.seed + 2, Scaling::Raw, o.exec)?;
    let exact = 1.0 - 3.0 * (-2.0f64).exp();
    let se = (exact * (1.0 - exact) / nf).sqrt();
    m.push(Measurement::at_most("LPP 1x2 |P(l <= 2) - exact| / se", (p.ecdf(2.0) - exact).abs() / se, 4.0));
    Ok((m, vec![]))
}

fn wigner(o: &VerifyOptions) -> Result<Body> {
    let count = 1_000_000;
    let reference = curve(&KernelSpec::AiryLimit, None, 1.0, &grid(-9.0, 7.0, 0.01), &params(o.exec))?;
    let b = sample_wigner4_max(50, count, o.seed, Scaling::Cc)?;
    let fit = correction_extract(&b, &reference, 1.0 / 3.0, None)?;
    let c = fit.c.unwrap_or(f64::NAN);
    let b50 = sample_wigner4_max(50, count, o.seed + 1, Scaling::Cc2)?;
    let r50 = correction_extract(&b50, &reference, 2.0 / 3.0, None)?.max_abs();
    let b60 = sample_wigner4_max(60, count, o.seed + 2, Scaling::Cc2)?;
    let r60 = correction_extract(&b60, &reference, 2.0 / 3.0, None)?.max_abs();
    let notes = vec![format!("c = {c:.4}; cc2 max-abs N=50: {r50:.4}, N=60: {r60:.4}")];
    Ok((
        vec![
            Measurement::at_most("|c - 1/2|", (c - 0.5).abs(), 0.1),
            Measurement::at_most("cc2 max-abs ratio N=60 / N=50", r60 / r50, 2.0),
        ],
        notes,
    ))
}

fn normalization(o: &VerifyOptions) -> Result<Body> {
    let mut m = vec![];
    let ts = grid(-10.0, 6.0, 0.05);
    let ode_ts = grid(-8.0, 6.0, 0.05);
    for v in [Variant::Gue, Variant::Lue] {
        let op = curve(&KernelSpec::AiryLimit, Some(&v.correction_spec()), 1.0, &ts, &params(o.exec))?;
        let ode = ode_curve(Some(v), 1.0, &ode_ts, &BoundaryConfig::default(), &params(o.exec))?;
        for (route, c) in [("operator", &op), ("ode", &ode)] {
            let p1 = c.p1.as_deref().unwrap_or(&[]);
            m.push(Measurement::at_most(
                format!("{} {route} |int p0 - 1|", v.tag()),
                (c.trapezoid(&c.p0) - 1.0).abs(),
                1e-5,
            ));
            m.push(Measurement::at_most(format!("{} {route} |int p1|", v.tag()), c.trapezoid(p1).abs(), 1e-5));
            m.push(Measurement::at_most(format!("{} {route} max decrease of F", v.tag()), c.max_decrease(), 1e-12));
        }
    }
    Ok((m, vec![]))
}

/// Run one criterion. Errors inside the computation become a failing
/// report carrying the message.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> CriterionReport {
    let start = Instant::now();
    let body = match suite {
        Suite::RouteEquivalence => route_equivalence(opts),
        Suite::FiniteSize => finite_size(opts),
        Suite::AlphaLimit => alpha_limit(opts),
        Suite::DensityOde => density_ode(opts),
        Suite::Quadrature => quadrature(opts),
        Suite::Lpp => lpp(opts),
        Suite::TrivialLaws => trivial_laws(opts),
        Suite::Wigner => wigner(opts),
        Suite::Normalization => normalization(opts),
    };
    let (measurements, notes) = match body {
        Ok(b) => b,
        Err(e) => (vec![Measurement::flag("completed", false)], vec![e.to_string()]),
    };
    CriterionReport {
        id: suite.id(),
        suite,
        pass: !measurements.is_empty() && measurements.iter().all(|m| m.pass),
        seconds: start.elapsed().as_secs_f64(),
        measurements,
        notes,
    }
}

pub fn run(suites: &[Suite], opts: &VerifyOptions) -> VerifyReport {
    let criteria: Vec<CriterionReport> = suites.iter().map(|&s| run_suite(s, opts)).collect();
    VerifyReport {
        version: env!("CARGO_PKG_VERSION").into(),
        seed: opts.seed,
        pass: criteria.iter().all(|c| c.pass),
        criteria,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(s.id().to_string().parse::<Suite>().unwrap(), s);
            let j = serde_json::to_string(&s).unwrap();
            assert_eq!(j, format!("\"{}\"", s.name()));
        }
        assert!("nope".parse::<Suite>().is_err());
        assert!("10".parse::<Suite>().is_err());
    }

    #[test]
    fn quick_suites_pass_and_serialise() {
        let r = run(&[Suite::AlphaLimit, Suite::Quadrature], &VerifyOptions::default());
        assert!(r.pass, "{:#?}", r);
        let back: VerifyReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(r.criteria[0].line().starts_with("PASS [3] alpha-limit"));
    }
}
