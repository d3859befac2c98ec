//! CSV and JSON emitters for run results. Numbers use the shortest
//! representation that round-trips, so files are byte-stable per seed.

use std::io::Write;

use serde::Serialize;

use super::engine::{HistoryRow, ParetoMember};
use crate::error::{Error, Result};
use crate::space::DecodedConfig;

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

/// `f1,f2,canonical_key`, one row per member.
pub fn write_pareto_front<W: Write>(pareto: &[ParetoMember], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["f1", "f2", "canonical_key"]).map_err(csv_err)?;
    for m in pareto {
        w.write_record([m.f[0].to_string(), m.f[1].to_string(), m.key.to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// `gen,fes,mean_f1_front,mean_f2_front,hv,igd`; `igd` is empty when the
/// problem has no reference front.
pub fn write_history<W: Write>(rows: &[HistoryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["gen", "fes", "mean_f1_front", "mean_f2_front", "hv", "igd"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.gen.to_string(),
            r.fes.to_string(),
            r.mean_f1.to_string(),
            r.mean_f2.to_string(),
            r.hv.to_string(),
            r.igd.map(|v| v.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ConfigEntry<'a> {
    key: String,
    f1: f64,
    f2: f64,
    config: &'a DecodedConfig,
}

/// Pretty JSON array of `{key, f1, f2, config}` with active variables only.
pub fn write_pareto_configs<W: Write>(pareto: &[ParetoMember], mut out: W) -> Result<()> {
    let entries: Vec<ConfigEntry> = pareto
        .iter()
        .map(|m| ConfigEntry {
            key: m.key.to_string(),
            f1: m.f[0],
            f2: m.f[1],
            config: &m.decoded,
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &entries)?;
    out.write_all(b"\n")?;
    Ok(())
}
