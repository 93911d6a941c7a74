use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::solver::{CriticalPointRecord, ResultSet, SearchConfig, SearchStats};
use crate::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

/// Column order of the CSV export.
pub const CSV_COLUMNS: [&str; 12] = [
    "period",
    "c_re",
    "c_im",
    "z_re",
    "z_im",
    "zp_re",
    "zp_im",
    "lambda_re",
    "lambda_im",
    "lambda_abs",
    "residual",
    "inside_mandelbrot",
];

fn default_dedup_delta() -> f64 {
    1e-6
}

/// On-disk form of a result set. JSON is the canonical store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: String,
    pub period: usize,
    pub bound: usize,
    pub complete: bool,
    pub seed: u64,
    pub tolerance: f64,
    #[serde(default = "default_dedup_delta")]
    pub dedup_delta: f64,
    #[serde(default)]
    pub guesses_used: usize,
    #[serde(default)]
    pub stats: SearchStats,
    pub records: Vec<CriticalPointRecord>,
}

impl ResultDocument {
    pub fn from_set(set: &ResultSet, cfg: &SearchConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            period: set.period,
            bound: set.bound,
            complete: set.complete,
            seed: cfg.seed,
            tolerance: cfg.tol,
            dedup_delta: set.dedup_delta,
            guesses_used: set.guesses_used,
            stats: set.stats.clone(),
            records: set.records.clone(),
        }
    }

    pub fn to_set(&self) -> ResultSet {
        ResultSet {
            period: self.period,
            records: self.records.clone(),
            bound: self.bound,
            complete: self.complete,
            guesses_used: self.guesses_used,
            dedup_delta: self.dedup_delta,
            stats: self.stats.clone(),
        }
    }

    /// Search settings matching the document, for re-verification.
    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            tol: self.tolerance,
            seed: self.seed,
            dedup_delta: self.dedup_delta,
            ..SearchConfig::for_period(self.period)
        }
    }

    pub fn to_json(&self) -> String {
        // serialization of plain data cannot fail
        let mut s = serde_json::to_string_pretty(self).unwrap_or_default();
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            Error::Parse { field, line: inner.line(), column: inner.column(), message: inner.to_string() }
        })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(CSV_COLUMNS).map_err(io)?;
        for r in &self.records {
            w.write_record([
                r.period.to_string(),
                r.c.re.to_string(),
                r.c.im.to_string(),
                r.z.re.to_string(),
                r.z.im.to_string(),
                r.zp.re.to_string(),
                r.zp.im.to_string(),
                r.lambda.re.to_string(),
                r.lambda.im.to_string(),
                r.lambda_abs.to_string(),
                r.residual.to_string(),
                r.inside_mandelbrot.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

pub fn write_document(path: &Path, doc: &ResultDocument) -> Result<()> {
    write_text(path, &doc.to_json())
}

pub fn write_csv(path: &Path, doc: &ResultDocument) -> Result<()> {
    write_text(path, &doc.to_csv()?)
}

pub fn read_document(path: &Path) -> Result<ResultDocument> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ResultDocument::from_json(&text)
}
