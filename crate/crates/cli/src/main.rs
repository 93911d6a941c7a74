use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multiplier_crit::io::commands::{
    cmd_bound, cmd_czero, cmd_plot, cmd_search, cmd_stats, cmd_verify, OutputFormat, SearchOptions, EXIT_ERROR,
    EXIT_OK, EXIT_VERIFY_FAILED,
};

/// Critical points of the period-n multiplier map of z^2 + c.
#[derive(Parser)]
#[command(name = "multcrit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the counting table and the upper bound on the number of critical points.
    Bound { n_min: u32, n_max: u32 },
    /// Search for all critical points of period n.
    Search {
        n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        /// Number of random parameter samples [default: 10000 n]
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Radius of the disc the parameters are drawn from.
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Resume from the records of an existing JSON document.
        #[arg(long)]
        merge: Option<PathBuf>,
        /// Report progress on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Re-check every record of a stored document.
    Verify { path: PathBuf },
    /// List the periods for which c = 0 is a critical point.
    Czero {
        #[arg(default_value_t = 30)]
        max_n: usize,
    },
    /// Print the summary row of a stored document.
    Stats { path: PathBuf },
    /// Draw the parameters of a stored document over the Mandelbrot set.
    Plot {
        path: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(command: Command) -> multiplier_crit::error::Result<i32> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Bound { n_min, n_max } => cmd_bound(n_min, n_max, &mut out).map(|_| EXIT_OK),
        Command::Search { n, tol, max_iter, budget, seed, radius, out: path, format, merge, progress } => {
            let opts = SearchOptions {
                tol,
                max_iter,
                budget,
                seed,
                radius,
                format: match format {
                    Format::Json => OutputFormat::Json,
                    Format::Csv => OutputFormat::Csv,
                },
                merge,
                progress,
                ..SearchOptions::new(n, path)
            };
            cmd_search(&opts, &mut out)
        }
        Command::Verify { path } => cmd_verify(&path, &mut out).map(|ok| if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }),
        Command::Czero { max_n } => cmd_czero(max_n, &mut out).map(|_| EXIT_OK),
        Command::Stats { path } => cmd_stats(&path, &mut out).map(|_| EXIT_OK),
        Command::Plot { path, out: svg } => cmd_plot(&path, &svg).map(|_| EXIT_OK),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { EXIT_OK as u8 });
        }
    };
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("multcrit: {e}");
            EXIT_ERROR
        }
    };
    let _ = std::io::stdout().flush();
    ExitCode::from(code as u8)
}
