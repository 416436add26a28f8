use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{CurveMeta, DistributionCurve, ScaledDifference};
use crate::error::{Error, Result};

pub const CURVE_HEADER: [&str; 4] = ["t", "F", "p0", "p1"];

/// Sidecar path next to a CSV file.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Write `t,F,p0,p1` (plus `untrusted` when present) and a JSON sidecar
/// holding the curve metadata merged with `extra`. Returns the sidecar path.
pub fn write_curve(curve: &DistributionCurve, csv_path: &Path, extra: &serde_json::Value) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(csv_path)?;
    let flagged = curve.untrusted.is_some();
    let mut header: Vec<&str> = CURVE_HEADER.to_vec();
    if flagged {
        header.push("untrusted");
    }
    w.write_record(&header)?;
    for i in 0..curve.ts.len() {
        let mut row = vec![
            curve.ts[i].to_string(),
            curve.f[i].to_string(),
            curve.p0[i].to_string(),
            curve.p1.as_ref().map(|p| p[i].to_string()).unwrap_or_default(),
        ];
        if let Some(u) = &curve.untrusted {
            row.push(u8::from(u[i]).to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    let side = sidecar_path(csv_path);
    let doc = serde_json::json!({
        "meta": curve.meta,
        "rows": curve.ts.len(),
        "columns": header,
        "run": extra,
    });
    write_json(&side, &doc)?;
    Ok(side)
}

pub(crate) fn write_json(path: &Path, v: &serde_json::Value) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, v)?;
    writeln!(f)?;
    Ok(())
}

/// Read back a curve CSV written by [`write_curve`]; metadata comes from
/// the caller.
pub fn read_curve_csv(csv_path: &Path, meta: CurveMeta) -> Result<DistributionCurve> {
    let mut r = csv::Reader::from_path(csv_path)?;
    let header = r.headers()?.clone();
    if header.iter().take(4).collect::<Vec<_>>() != CURVE_HEADER {
        return Err(Error::RangeMismatch(format!("unexpected curve header {header:?}")));
    }
    let flagged = header.len() > 4;
    let (mut ts, mut f, mut p0, mut p1, mut un) = (vec![], vec![], vec![], vec![], vec![]);
    let mut has_p1 = true;
    for rec in r.records() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i].parse().map_err(|_| Error::RangeMismatch(format!("bad number {:?}", &rec[i])))
        };
        ts.push(num(0)?);
        f.push(num(1)?);
        p0.push(num(2)?);
        if rec[3].is_empty() {
            has_p1 = false;
        } else {
            p1.push(num(3)?);
        }
        if flagged {
            un.push(&rec[4] == "1");
        }
    }
    Ok(DistributionCurve { meta, ts, f, p0, p1: has_p1.then_some(p1), untrusted: flagged.then_some(un) })
}

/// `t,scaled,p1` for the scaled finite-size difference.
pub fn write_scaled_difference(d: &ScaledDifference, csv_path: &Path, extra: &serde_json::Value) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(csv_path)?;
    w.write_record(["t", "scaled", "p1"])?;
    for i in 0..d.ts.len() {
        w.write_record([d.ts[i].to_string(), d.scaled[i].to_string(), d.p1[i].to_string()])?;
    }
    w.flush()?;
    let side = sidecar_path(csv_path);
    let doc = serde_json::json!({
        "n": d.n,
        "xi": d.xi,
        "variant": d.variant,
        "clip": d.clip,
        "sup_gap": d.sup_gap(),
        "run": extra,
    });
    write_json(&side, &doc)?;
    Ok(side)
}
