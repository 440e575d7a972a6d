//! CSV and metadata writers. Output bytes depend only on the inputs and the seed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use dualrlpn::duality::SurvivalCurve;
use serde_json::{json, Value};

use crate::config::FORMAT_VERSION;

/// Plain decimal in `[1e-4, 1e15)`, scientific outside. Both forms round-trip.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> anyhow::Result<Self> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Csv { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> anyhow::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn curve(&mut self, c: &SurvivalCurve) -> anyhow::Result<()> {
        for i in 0..c.thresholds.len() {
            self.row([
                c.label.as_str().to_string(),
                fmt_f64(c.thresholds[i]),
                fmt_f64(c.counts[i]),
                fmt_f64(c.ci_low[i]),
                fmt_f64(c.ci_high[i]),
            ])?;
        }
        Ok(())
    }

    pub fn into_bytes(self) -> anyhow::Result<Vec<u8>> {
        self.writer.into_inner().map_err(|e| anyhow::anyhow!("csv buffer: {}", e.error()))
    }
}

/// `curves.csv` → `curves.meta.json`.
pub fn meta_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

pub struct Meta {
    pub command: String,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_ms: u128,
    pub config: Value,
    pub notes: Value,
}

impl Meta {
    pub fn to_json(&self) -> Value {
        json!({
            "format_version": FORMAT_VERSION,
            "version": env!("CARGO_PKG_VERSION"),
            "git_describe": env!("DUALRLPN_GIT_DESCRIBE"),
            "command": self.command,
            "seed": self.seed,
            "threads": self.threads,
            "wall_time_ms": self.wall_time_ms,
            "config": self.config,
            "notes": self.notes,
        })
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Writes the CSV and its metadata sidecar.
pub fn write_csv(out: &Path, csv: Csv, meta: &Meta) -> anyhow::Result<()> {
    write_file(out, &csv.into_bytes()?)?;
    let mut text = serde_json::to_string_pretty(&meta.to_json())?;
    text.push('\n');
    write_file(&meta_path(out), text.as_bytes())
}
