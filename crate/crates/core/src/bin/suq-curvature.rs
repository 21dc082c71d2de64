use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use suq_curvature::sweep::{run_sweep, write_output, Grid, OutputFormat, SweepMode, SweepOutput, SweepRequest};
use suq_curvature::{Dimension, Normalization, QuadratureConfig, Statistics};

const EXIT_USAGE: u8 = 1;
const EXIT_ALL_POINTS_FAILED: u8 = 2;
const EXIT_SELFCHECK_FAILED: u8 = 3;

/// Scalar curvature and virial coefficients of SU_q(2) quantum group gases.
#[derive(Parser, Debug)]
#[command(name = "suq-curvature", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// R as a function of fugacity, one curve per q
    CurvatureZ(SweepArgs),
    /// R as a function of q, one curve per fugacity
    CurvatureQ(SweepArgs),
    /// alpha, delta, eta and zeta as functions of q
    Virial(SweepArgs),
    /// Sign of R in the dilute limit for every gas
    Signtable(SweepArgs),
    /// Run the oracle cross-validations
    Selfcheck(SweepArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StatArg {
    Boson,
    Fermion,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    Paper,
    Raw,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    stat: Option<StatArg>,

    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=3))]
    dim: Option<u32>,

    /// Comma-separated list or lo:hi[:n] range
    #[arg(long)]
    q: Option<String>,

    /// Comma-separated list or lo:hi[:n] range
    #[arg(long)]
    z: Option<String>,

    /// Point count for lo:hi ranges
    #[arg(long, default_value_t = 49)]
    points: usize,

    #[arg(long, value_enum, default_value = "paper")]
    normalization: NormArg,

    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,

    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,

    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build_request(mode: SweepMode, args: &SweepArgs) -> suq_curvature::Result<SweepRequest> {
    let mut req = SweepRequest::new(mode);
    req.statistics = args.stat.map(|s| match s {
        StatArg::Boson => Statistics::Boson,
        StatArg::Fermion => Statistics::Fermion,
    });
    req.dimension = args.dim.map(Dimension::try_from).transpose()?;
    req.q = args.q.as_deref().map(|t| Grid::parse(t, args.points)).transpose()?;
    req.z = args.z.as_deref().map(|t| Grid::parse(t, args.points)).transpose()?;
    req.normalization = match args.normalization {
        NormArg::Paper => Normalization::PaperFactor2,
        NormArg::Raw => Normalization::Raw,
    };
    req.format = match args.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    req.quadrature = QuadratureConfig::default().with_rel_tol(args.rel_tol);
    req.validate()?;
    Ok(req)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };

    let (mode, args) = match &cli.command {
        Command::CurvatureZ(a) => (SweepMode::RvsZ, a),
        Command::CurvatureQ(a) => (SweepMode::RvsQ, a),
        Command::Virial(a) => (SweepMode::VirialCurves, a),
        Command::Signtable(a) => (SweepMode::SignTable, a),
        Command::Selfcheck(a) => (SweepMode::SelfCheck, a),
    };

    let req = match build_request(mode, args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let output = match run_sweep(&req) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let sink: Box<dyn Write> = match &args.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    if let Err(e) = write_output(&req, &output, sink) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }

    match &output {
        SweepOutput::SelfCheck(report) if !report.all_passed() => ExitCode::from(EXIT_SELFCHECK_FAILED),
        o if o.all_points_failed() => ExitCode::from(EXIT_ALL_POINTS_FAILED),
        _ => ExitCode::SUCCESS,
    }
}
