use clap::{Args, Parser, Subcommand, ValueEnum};
use dirac_damping::cli::{
    self, CliError, Model, OutputFormat, Placement, RunConfig,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dirac-damping",
    version,
    about = "Spectra, trace identities and basis diagnostics for the wave equation with a point damping"
)]
struct DiracDamping {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue table in a spectral window, sorted by Im λ
    Spectrum(CommonArgs),
    /// Star-graph spectrum (spectrum with --model star)
    GraphSpectrum(CommonArgs),
    /// Livšic trace identity report and the Riesz-basis verdict
    Verify(CommonArgs),
    /// Gram-condition ladder and biorthogonality residuals
    Basis(CommonArgs),
    /// Green kernel values on a uniform grid
    Green(CommonArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Interval,
    Star,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// Model to solve
    #[arg(long, value_enum, default_value = "interval")]
    model: ModelArg,
    /// Rational damping position a = Pπ/Q
    #[arg(long, value_name = "P/Q")]
    pq: Option<String>,
    /// Damping position a ∈ (0, π)
    #[arg(long)]
    a: Option<f64>,
    /// Star-graph edge count
    #[arg(long)]
    n: Option<u32>,
    /// Damping constant, e.g. "2", "1+2i", "-0.5-3i"
    #[arg(long, default_value = "0")]
    alpha: String,
    /// Window half-height: Im λ ∈ [-IM_MAX, IM_MAX]
    #[arg(long, default_value_t = 10.0)]
    im_max: f64,
    /// Window half-width (default: adaptive strip bound)
    #[arg(long)]
    re_max: Option<f64>,
    /// Truncation order (branch count / Gram ladder cap)
    #[arg(long, default_value_t = 200)]
    trunc: u32,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Residual/consistency tolerance override
    #[arg(long)]
    tol: Option<f64>,
    /// Spectral parameter for the Green kernel
    #[arg(long, default_value = "0")]
    lambda: String,
    /// Grid points per axis for the Green kernel
    #[arg(long, default_value_t = 21)]
    grid: u32,
}

fn build_config(args: &CommonArgs, force_star: bool) -> Result<RunConfig, CliError> {
    let model = if force_star {
        Model::Star
    } else {
        match args.model {
            ModelArg::Interval => Model::Interval,
            ModelArg::Star => Model::Star,
        }
    };
    let placement = match model {
        Model::Star => {
            let n = args.n.ok_or_else(|| CliError::Config("star model requires --n".into()))?;
            Placement::Edges(n)
        }
        Model::Interval => match (&args.pq, args.a) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("--pq and --a are mutually exclusive".into()))
            }
            (Some(pq), None) => {
                let (p, q) = cli::parse_fraction(pq)?;
                Placement::Rational { p, q }
            }
            (None, Some(a)) => Placement::Position(a),
            (None, None) => {
                return Err(CliError::Config("interval model requires --pq or --a".into()))
            }
        },
    };
    Ok(RunConfig {
        model,
        placement,
        alpha: cli::parse_complex(&args.alpha)?,
        im_max: args.im_max,
        re_max: args.re_max,
        trunc: args.trunc,
        format: match args.format {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        },
        out: args.out.clone(),
        tol: args.tol,
        lambda: cli::parse_complex(&args.lambda)?,
        grid: args.grid,
    })
}

fn run() -> Result<(), CliError> {
    let parsed = DiracDamping::parse();
    let (config, output) = match &parsed.command {
        Command::Spectrum(args) => {
            let cfg = build_config(args, false)?;
            let out = cli::cmd_spectrum(&cfg)?;
            (cfg, out)
        }
        Command::GraphSpectrum(args) => {
            let cfg = build_config(args, true)?;
            let out = cli::cmd_spectrum(&cfg)?;
            (cfg, out)
        }
        Command::Verify(args) => {
            let cfg = build_config(args, false)?;
            let out = cli::cmd_verify(&cfg)?;
            (cfg, out)
        }
        Command::Basis(args) => {
            let cfg = build_config(args, false)?;
            let out = cli::cmd_basis(&cfg)?;
            (cfg, out)
        }
        Command::Green(args) => {
            let cfg = build_config(args, false)?;
            let out = cli::cmd_green(&cfg)?;
            (cfg, out)
        }
    };
    cli::write_output(&config, &output)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
