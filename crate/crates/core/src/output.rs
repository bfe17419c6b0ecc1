//! CSV tables and the JSON mirror with config echo and provenance.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiment::{
    AsymptoticRow, ChannelPoint, Engine, ExperimentConfig, ResultRow, TimeSeries, ValidationReport, CSV_HEADER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

/// Where a result came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub engine: Engine,
    pub version: &'static str,
    pub seed: u64,
    /// Seconds spent in the whole run.
    pub wall_time: f64,
}

impl Provenance {
    pub fn new(cfg: &ExperimentConfig, engine: Engine, wall_time: f64) -> Self {
        Self { engine, version: env!("CARGO_PKG_VERSION"), seed: cfg.seed, wall_time }
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    config: &'a ExperimentConfig,
    provenance: &'a Provenance,
    #[serde(flatten)]
    data: &'a T,
}

/// Anything a subcommand can emit.
pub trait Table: Serialize {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()>;
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
pub struct Rows<'a> {
    pub rows: &'a [ResultRow],
}

impl Table for Rows<'_> {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in self.rows {
            r.check()?;
            w.write_record(r.csv_record())?;
        }
        w.flush()?;
        Ok(())
    }
}

impl Table for TimeSeries {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "F", "C", "u", "w", "A"])?;
        for p in &self.points {
            let ChannelPoint { t, f, c, u, w: wv, a } = *p;
            w.write_record([t.to_string(), f.to_string(), c.to_string(), opt(u), opt(wv), opt(a)])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl Table for crate::experiment::GridResult {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        Rows { rows: &self.rows }.write_csv(out)
    }
}

#[derive(Serialize)]
pub struct Asymptotics<'a> {
    pub rows: &'a [AsymptoticRow],
}

impl Table for Asymptotics<'_> {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl Table for ValidationReport {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["model", "N", "anisotropy", "h", "t", "init", "choi", "F", "C", "u", "w", "phi_u", "phi_w", "A"])?;
        for t in &self.tuples {
            let d = &t.deviations;
            let mut rec = vec![
                t.model.as_str().to_string(),
                t.n.to_string(),
                t.anisotropy.to_string(),
                t.h.to_string(),
                t.t.to_string(),
                t.init.as_str().to_string(),
            ];
            rec.extend([d.choi, d.f, d.c, d.u, d.w, d.phi_u, d.phi_w, d.a].map(|x| x.to_string()));
            w.write_record(rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Write `data` as CSV, or as JSON together with the config and provenance.
pub fn write_table<T: Table>(
    out: &mut dyn Write,
    format: Format,
    data: &T,
    cfg: &ExperimentConfig,
    provenance: &Provenance,
) -> Result<()> {
    match format {
        Format::Csv => data.write_csv(out),
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &Report { config: cfg, provenance, data })?;
            writeln!(out)?;
            Ok(())
        }
    }
}
