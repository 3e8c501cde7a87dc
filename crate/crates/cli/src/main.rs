use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

mod commands;
mod params;
mod report;

use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "leibniz-lab",
    version,
    about = "Exact computations with Leibniz algebras"
)]
struct Cli {
    /// Seed for every sampling-based check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the strictly upper triangular algebra T(n).
    Triangular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a member of the master extension family from a parameter file.
    Extend {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive a relation set, check maximal-rank extensions, or test the
    /// N1n dichotomy on an algebra file.
    #[command(group(ArgGroup::new("what").required(true).args(["lemma", "theorem", "eq"])))]
    Verify {
        #[arg(long, value_parser = ["3.1", "3.2"])]
        lemma: Option<String>,
        #[arg(long, value_parser = ["3.4"])]
        theorem: Option<String>,
        #[arg(long, value_parser = ["3"])]
        eq: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        f: Option<usize>,
        /// Algebra file, for `--eq 3`.
        file: Option<PathBuf>,
    },
    /// Leibniz and Lie verdicts and series dimensions of an algebra file.
    Check { file: PathBuf },
    /// Lower central and derived series with bases.
    Series { file: PathBuf },
    /// Dimension and a basis of the derivation algebra.
    Derivations { file: PathBuf },
    /// Normalize a one-generator extension of T(4) to its canonical form.
    #[command(name = "classify-l41")]
    ClassifyL41 {
        #[arg(long)]
        params: PathBuf,
        /// Also write the witness basis change here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Write a canonical table.
    Canonical {
        #[arg(long)]
        form: String,
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("LEIBNIZ_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("LEIBNIZ_LAB_THREADS must be a count, got {raw:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Structured => Format::Structured,
    };
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let report = match configure_threads() {
        Ok(()) => commands::run(&cli.command, cli.seed, echo),
        Err(e) => {
            let mut r = Report::new(echo);
            r.error = Some(e);
            r.exit_code = 2;
            r
        }
    };
    match (format, &report.error) {
        (Format::Text, Some(e)) => {
            eprintln!("error: {e}");
            let mut rest = report.clone();
            rest.error = None;
            print!("{}", rest.render(format));
        }
        _ => print!("{}", report.render(format)),
    }
    ExitCode::from(report.exit_code)
}
