//! Subcommand bodies. Each writes its report to the given sink; the binary
//! maps the results to exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};

use super::document::{read_document, write_csv, write_document, ResultDocument};
use super::plot::{render_svg, PlotWindow};
use super::verify::verify_document;
use crate::analysis::{c0_scan, stats, C0_TOL, MAX_C0_PERIOD};
use crate::dynamics::{n_pi, nu, upper_bound};
use crate::solver::{dedup_insert, search_from, ResultSet, SearchConfig};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
/// Usage and I/O errors.
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCOMPLETE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

/// Counting table for `n_min..=n_max`.
pub fn cmd_bound(n_min: u32, n_max: u32, out: &mut dyn Write) -> Result<()> {
    if n_min < 1 || n_min > n_max || n_max > 30 {
        return Err(Error::Domain(format!("need 1 <= n_min <= n_max <= 30, got {n_min}..{n_max}")));
    }
    writeln!(out, "{:>3} {:>12} {:>10} {:>11} {:>10} {:>12}", "n", "nu", "deg_pi", "deg_lambda", "N_pi", "bound")
        .map_err(io)?;
    for n in n_min..=n_max {
        let v = nu(n)?;
        writeln!(
            out,
            "{:>3} {:>12} {:>10} {:>11} {:>10} {:>12}",
            n,
            v,
            v / n as u128,
            v / 2,
            n_pi(n)?,
            upper_bound(n)?
        )
        .map_err(io)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub n: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Defaults to `10000 n` samples.
    pub budget: Option<usize>,
    pub seed: u64,
    pub radius: f64,
    pub out: PathBuf,
    pub format: OutputFormat,
    /// Existing JSON document whose records seed the search.
    pub merge: Option<PathBuf>,
    pub progress: bool,
}

impl SearchOptions {
    pub fn new(n: usize, out: impl Into<PathBuf>) -> Self {
        let d = SearchConfig::for_period(n);
        Self {
            n,
            tol: d.tol,
            max_iter: d.max_newton_iters,
            budget: None,
            seed: d.seed,
            radius: d.sample_radius,
            out: out.into(),
            format: OutputFormat::Json,
            merge: None,
            progress: false,
        }
    }

    pub fn config(&self) -> SearchConfig {
        let d = SearchConfig::for_period(self.n);
        SearchConfig {
            tol: self.tol,
            max_newton_iters: self.max_iter,
            budget: self.budget.unwrap_or(d.budget),
            seed: self.seed,
            sample_radius: self.radius,
            ..d
        }
    }
}

fn merged_start(path: &Path, n: usize, cfg: &SearchConfig) -> Result<ResultSet> {
    let doc = read_document(path)?;
    if doc.period != n {
        return Err(Error::Domain(format!("{} holds period {}, not {n}", path.display(), doc.period)));
    }
    let mut set = ResultSet::new(n, upper_bound(n as u32)? as usize, cfg.dedup_delta);
    set.guesses_used = doc.guesses_used;
    set.stats = doc.stats;
    for r in doc.records {
        dedup_insert(&mut set, r)?;
    }
    Ok(set)
}

/// Runs the search, writes the document and prints the summary row.
/// Returns [`EXIT_OK`] for a complete set and [`EXIT_INCOMPLETE`] otherwise.
pub fn cmd_search(opts: &SearchOptions, out: &mut dyn Write) -> Result<i32> {
    let cfg = opts.config();
    cfg.validate()?;
    if !(3..=12).contains(&opts.n) {
        return Err(Error::Domain(format!("search supports 3 <= n <= 12, got {}", opts.n)));
    }
    let start = match &opts.merge {
        Some(path) => merged_start(path, opts.n, &cfg)?,
        None => ResultSet::new(opts.n, upper_bound(opts.n as u32)? as usize, cfg.dedup_delta),
    };
    let show = opts.progress;
    let mut last = usize::MAX;
    let set = search_from(start, opts.n, &cfg, &mut |s| {
        if show && s.len() != last {
            last = s.len();
            eprintln!("samples {:>7}  records {:>4}/{}", s.guesses_used, s.len(), s.bound);
        }
    })?;
    let doc = ResultDocument::from_set(&set, &cfg);
    match opts.format {
        OutputFormat::Json => write_document(&opts.out, &doc)?,
        OutputFormat::Csv => write_csv(&opts.out, &doc)?,
    }
    print_stats(&set, out)?;
    Ok(if set.complete { EXIT_OK } else { EXIT_INCOMPLETE })
}

fn print_stats(set: &ResultSet, out: &mut dyn Write) -> Result<()> {
    match stats(set) {
        Ok(row) => writeln!(out, "{row}").map_err(io),
        Err(_) => writeln!(out, "n={} count=0/{}", set.period, set.bound).map_err(io),
    }
}

/// Re-verifies a stored document; `Ok(true)` iff every check passes.
pub fn cmd_verify(path: &Path, out: &mut dyn Write) -> Result<bool> {
    let doc = read_document(path)?;
    let report = verify_document(&doc);
    writeln!(out, "{report}").map_err(io)?;
    Ok(report.passed())
}

/// Periods `<= max_n` for which `c = 0` is a critical point, one line per
/// period with every critical cycle's smallest angle.
pub fn cmd_czero(max_n: usize, out: &mut dyn Write) -> Result<()> {
    if max_n > MAX_C0_PERIOD {
        return Err(Error::Domain(format!("max_n must be at most {MAX_C0_PERIOD}")));
    }
    let scan = c0_scan(max_n, C0_TOL)?;
    writeln!(out, "{:>3} {:>7}  angles", "n", "orbits").map_err(io)?;
    for (n, angles) in &scan.critical {
        let list: Vec<String> = angles.iter().map(|a| a.to_string()).collect();
        writeln!(out, "{:>3} {:>7}  {}", n, angles.len(), list.join(" ")).map_err(io)?;
    }
    for (n, angles) in &scan.marginal {
        let list: Vec<String> = angles.iter().map(|a| a.to_string()).collect();
        writeln!(out, "marginal {n}: {}", list.join(" ")).map_err(io)?;
    }
    Ok(())
}

pub fn cmd_stats(path: &Path, out: &mut dyn Write) -> Result<()> {
    let doc = read_document(path)?;
    print_stats(&doc.to_set(), out)
}

pub fn cmd_plot(path: &Path, svg_out: &Path) -> Result<()> {
    let doc = read_document(path)?;
    let svg = render_svg(&doc, &PlotWindow::default());
    std::fs::write(svg_out, svg).map_err(|e| Error::Io(format!("{}: {e}", svg_out.display())))
}
