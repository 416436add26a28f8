use std::path::{Path, PathBuf};

use super::{Histogram, SampleBatch};
use crate::error::{Error, Result};
use crate::fredholm::{sidecar_path, write_json};

pub const BATCH_HEADER: [&str; 1] = ["value"];
pub const HISTOGRAM_HEADER: [&str; 4] = ["bin_left", "bin_right", "count", "density"];

/// `value` column plus a JSON sidecar with everything but the values.
pub fn write_batch(batch: &SampleBatch, csv_path: &Path, extra: &serde_json::Value) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(csv_path)?;
    w.write_record(BATCH_HEADER)?;
    for v in &batch.values {
        w.write_record([v.to_string()])?;
    }
    w.flush()?;
    let side = sidecar_path(csv_path);
    let doc = serde_json::json!({
        "ensemble": batch.ensemble,
        "N": batch.n,
        "a": batch.a,
        "alpha": batch.alpha,
        "xi": batch.xi,
        "seed": batch.seed,
        "count": batch.count,
        "scaling": batch.scaling,
        "atom_count": batch.atom_count,
        "run": extra,
    });
    write_json(&side, &doc)?;
    Ok(side)
}

pub fn read_batch_csv(csv_path: &Path) -> Result<Vec<f64>> {
    let mut r = csv::Reader::from_path(csv_path)?;
    if r.headers()?.iter().collect::<Vec<_>>() != BATCH_HEADER {
        return Err(Error::RangeMismatch("expected a single `value` column".into()));
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            rec[0].parse().map_err(|_| Error::RangeMismatch(format!("bad number {:?}", &rec[0])))
        })
        .collect()
}

pub fn write_histogram(h: &Histogram, csv_path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(csv_path)?;
    w.write_record(HISTOGRAM_HEADER)?;
    for k in 0..h.counts.len() {
        w.write_record([
            h.edges[k].to_string(),
            h.edges[k + 1].to_string(),
            h.counts[k].to_string(),
            h.density[k].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
