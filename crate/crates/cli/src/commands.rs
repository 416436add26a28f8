use std::path::{Path, PathBuf};

use serde_json::json;
use softedge::fredholm::{
    curve, finite_curve, scaled_difference, write_curve, write_scaled_difference, CurveParams, DistributionCurve,
};
use softedge::kernels::{KernelSpec, Variant};
use softedge::painleve::{ode_curve, BoundaryConfig};
use softedge::simulate::{
    lpp_sample, sample_max, write_batch, write_histogram, Histogram, LppGrid, Model, SampleJob, Scaling,
};
use softedge::verify::{run, Suite, VerifyOptions};
use softedge::Execution;

use crate::args::{FormatArg, ModelArg, RouteArg, ScalingArg, VariantArg};
use crate::config::JobConfig;
use crate::error::CliError;

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub untrusted: Vec<String>,
    pub summary: Vec<String>,
}

pub struct Ctx<'a> {
    pub command: &'a str,
    pub threads: Option<usize>,
    pub cfg: &'a JobConfig,
}

impl Ctx<'_> {
    fn run_meta(&self) -> serde_json::Value {
        json!({
            "command": self.command,
            "config": self.cfg,
            "threads": self.threads,
            "version": env!("CARGO_PKG_VERSION"),
            "parallel": cfg!(feature = "parallel"),
        })
    }
}

fn params(cfg: &JobConfig) -> CurveParams {
    CurveParams { order: cfg.order, tail: cfg.tail, h: cfg.h, exec: Execution::Auto }
}

fn sibling(out: &Path, tag: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    out.with_file_name(format!("{stem}.{tag}.csv"))
}

fn emit(ctx: &Ctx, c: &DistributionCurve, out: &Path, o: &mut Outcome) -> Result<(), CliError> {
    if let (Some(from), Some(_)) = (c.meta.untrusted_from, &c.untrusted) {
        o.untrusted.push(format!("{} {:?} curve untrusted for t <= {from}", c.meta.variant, c.meta.route));
    }
    match ctx.cfg.format {
        FormatArg::Csv => {
            let side = write_curve(c, out, &ctx.run_meta())?;
            o.files.push(out.to_path_buf());
            o.files.push(side);
        }
        FormatArg::Json => {
            let path = out.with_extension("json");
            let doc = json!({ "curve": c, "run": ctx.run_meta() });
            std::fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")?;
            o.files.push(path);
        }
    }
    Ok(())
}

fn variant(kind: Option<VariantArg>, alpha: Option<f64>, what: &str) -> Result<Variant, CliError> {
    match kind {
        None => Err(CliError::Usage(format!("--{what} is required"))),
        Some(VariantArg::Gue) => Ok(Variant::Gue),
        Some(VariantArg::Lue) => Ok(Variant::Lue),
        Some(VariantArg::LueAlpha) => match alpha {
            Some(alpha) => Ok(Variant::LueAlpha { alpha }),
            None => Err(CliError::Usage(format!("--{what} lue-alpha needs --alpha"))),
        },
    }
}

fn boundary(cfg: &JobConfig) -> BoundaryConfig {
    BoundaryConfig { y_start: cfg.y_start, ..Default::default() }
}

pub fn limit(ctx: &Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    cfg.check_xi()?;
    cfg.check_order()?;
    let ts = cfg.grid()?;
    let c = match cfg.route {
        RouteArg::Operator => curve(&KernelSpec::AiryLimit, None, cfg.xi, &ts, &params(cfg))?,
        RouteArg::Ode => ode_curve(None, cfg.xi, &ts, &boundary(cfg), &params(cfg))?,
    };
    let mut o = Outcome::default();
    emit(ctx, &c, &cfg.out_or("limit.csv"), &mut o)?;
    o.summary.push(format!("{} rows, F({}) = {:.10}", c.ts.len(), c.ts[c.ts.len() - 1], c.f[c.f.len() - 1]));
    Ok(o)
}

pub fn correction(ctx: &Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let v = variant(cfg.variant, cfg.alpha, "variant")?;
    cfg.check_xi()?;
    cfg.check_order()?;
    let ts = cfg.grid()?;
    let out = cfg.out_or("correction.csv");
    let mut o = Outcome::default();
    let operator = || curve(&KernelSpec::AiryLimit, Some(&v.correction_spec()), cfg.xi, &ts, &params(cfg));
    let ode = || ode_curve(Some(v), cfg.xi, &ts, &boundary(cfg), &params(cfg));
    if cfg.compare {
        let a = operator()?;
        let b = ode()?;
        emit(ctx, &a, &sibling(&out, "operator"), &mut o)?;
        emit(ctx, &b, &sibling(&out, "ode"), &mut o)?;
        let (pa, pb) = (a.p1.unwrap_or_default(), b.p1.unwrap_or_default());
        let path = sibling(&out, "compare");
        let mut w = std::fs::File::create(&path).map(std::io::BufWriter::new)?;
        use std::io::Write;
        writeln!(w, "t,p1_operator,p1_ode,difference")?;
        let mut worst = 0.0f64;
        for i in 0..ts.len() {
            let d = pb[i] - pa[i];
            worst = worst.max(d.abs());
            writeln!(w, "{},{},{},{}", ts[i], pa[i], pb[i], d)?;
        }
        w.flush()?;
        let side = path.with_extension("json");
        let doc = json!({ "variant": v.tag(), "xi": cfg.xi, "max_abs_difference": worst, "run": ctx.run_meta() });
        std::fs::write(&side, serde_json::to_string_pretty(&doc)? + "\n")?;
        o.files.push(path);
        o.files.push(side);
        o.summary.push(format!("max |ode - operator| = {worst:.3e}"));
    } else {
        let c = match cfg.route {
            RouteArg::Operator => operator()?,
            RouteArg::Ode => ode()?,
        };
        emit(ctx, &c, &out, &mut o)?;
        o.summary.push(format!("{} rows", c.ts.len()));
    }
    Ok(o)
}

pub fn finite(ctx: &Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    cfg.check_xi()?;
    cfg.check_order()?;
    let n = cfg.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let spec = match variant(Some(cfg.ensemble.unwrap_or(VariantArg::Gue)), cfg.alpha, "ensemble")? {
        Variant::Gue => KernelSpec::FiniteGue { n },
        Variant::Lue => KernelSpec::FiniteLue { n, a: cfg.a.unwrap_or(0.0) },
        Variant::LueAlpha { alpha } => KernelSpec::FiniteLueAlpha { n, alpha },
    };
    let ts = cfg.grid()?;
    let out = cfg.out_or("finite.csv");
    let mut o = Outcome::default();
    let c = finite_curve(&spec, cfg.xi, &ts, &params(cfg))?;
    if let Some(clip) = c.meta.clip {
        o.summary.push(format!("grid clipped to t >= {clip} to stay inside the support"));
    }
    emit(ctx, &c, &out, &mut o)?;
    if cfg.difference {
        let d = scaled_difference(&spec, cfg.xi, &ts, &params(cfg))?;
        let path = sibling(&out, "difference");
        let side = write_scaled_difference(&d, &path, &ctx.run_meta())?;
        o.summary.push(format!("sup |scaled - p1| = {:.3e}", d.sup_gap()));
        o.files.push(path);
        o.files.push(side);
    }
    Ok(o)
}

fn scaling(s: ScalingArg) -> Scaling {
    match s {
        ScalingArg::Raw => Scaling::Raw,
        ScalingArg::Edge => Scaling::Edge,
        ScalingArg::EdgeAlpha => Scaling::EdgeAlpha,
        ScalingArg::Cc => Scaling::Cc,
        ScalingArg::Cc2 => Scaling::Cc2,
    }
}

pub fn simulate(ctx: &Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let n = cfg.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    if !(cfg.xi > 0.0 && cfg.xi <= 1.0) {
        return Err(CliError::Usage(format!("xi = {} must lie in (0, 1] for sampling", cfg.xi)));
    }
    if cfg.count == 0 {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    let model = cfg.model.unwrap_or(ModelArg::Gue);
    let default_scaling = if model == ModelArg::Wigner4 { ScalingArg::Cc } else { ScalingArg::Edge };
    let sc = scaling(cfg.scaling.unwrap_or(default_scaling));
    let batch = match model {
        ModelArg::Lpp => {
            if cfg.xi < 1.0 {
                return Err(CliError::Usage("thinning does not apply to lpp".into()));
            }
            let cols = cfg.cols.ok_or_else(|| CliError::Usage("lpp needs --cols".into()))?;
            lpp_sample(LppGrid::new(n, cols)?, cfg.count, cfg.seed, sc, Execution::Auto)?
        }
        m => {
            let model = match m {
                ModelArg::Gue => Model::Gue { n },
                ModelArg::Lue => Model::Lue { n, a: cfg.a.unwrap_or(0.0) },
                _ => Model::Wigner4 { n },
            };
            sample_max(&SampleJob::new(model, cfg.count, cfg.seed).xi(cfg.xi).scaling(sc))?
        }
    };
    let out = cfg.out_or("samples.csv");
    let mut o = Outcome::default();
    let side = write_batch(&batch, &out, &ctx.run_meta())?;
    o.files.push(out.clone());
    o.files.push(side);
    if batch.values.len() >= 4 {
        let h = match cfg.bins {
            Some(k) if k > 0 => {
                let lo = batch.values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = batch.values.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(lo + 1e-12);
                let edges = (0..=k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect();
                Histogram::from_edges(&batch.values, edges, batch.count)?
            }
            Some(_) => return Err(CliError::Usage("--bins must be positive".into())),
            None => Histogram::freedman_diaconis(&batch.values, batch.count)?,
        };
        let hp = sibling(&out, "hist");
        write_histogram(&h, &hp)?;
        o.files.push(hp);
    }
    o.summary.push(format!("{} draws, {} atoms", batch.values.len(), batch.atom_count));
    Ok(o)
}

pub fn verify(ctx: &Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let suites: Vec<Suite> = if cfg.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        cfg.suite
            .iter()
            .map(|s| s.parse::<Suite>().map_err(|e| CliError::Usage(e.to_string())))
            .collect::<Result<_, _>>()?
    };
    let report = run(&suites, &VerifyOptions { seed: cfg.seed, exec: Execution::Auto });
    let mut o = Outcome::default();
    for c in &report.criteria {
        o.summary.push(c.line());
        if !c.pass {
            o.untrusted.push(format!("criterion {} ({}) failed", c.id, c.suite));
        }
    }
    let out = cfg.out_or("verify.json");
    let doc = json!({ "report": report, "run": ctx.run_meta() });
    std::fs::write(&out, serde_json::to_string_pretty(&doc)? + "\n")?;
    o.files.push(out);
    Ok(o)
}
