//! `hyperlev`: series prices, Greeks, roots and inversion oracles from the
//! command line.

mod commands;
mod output;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use output::{Format, Precision};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] hyperlev::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn kind(&self) -> String {
        match self {
            CliError::Config(_) => "ConfigError".into(),
            CliError::Model(hyperlev::Error::Fixture(_)) => "FixtureError".into(),
            CliError::Model(e) => {
                let dbg = format!("{e:?}");
                dbg.split(|c: char| !c.is_alphanumeric())
                    .next()
                    .unwrap_or("Error")
                    .to_string()
            }
            CliError::Io(_) => "IoError".into(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hyperlev",
    version,
    about = "Series pricing for hyperexponential Levy models"
)]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Regenerate one of the reference tables.
    #[arg(long, value_enum)]
    reproduce: Option<presets::Preset>,

    /// Include the (1e7, 1e5) row of table1 (takes minutes).
    #[arg(long)]
    extended: bool,

    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    /// Number formatting.
    #[arg(long, value_enum, default_value = "six", global = true)]
    precision: Precision,

    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Add wall-time columns (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Parameter set: 1, 2, a name under $HYPERLEV_FIXTURES, or a .toml path.
    #[arg(long, default_value = "1")]
    pub set: String,
    /// Override the set's Gaussian volatility.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Risk-free rate; the drift is chosen so that psi(1) = r.
    #[arg(long, default_value_t = 0.03)]
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Call,
    Put,
}

#[derive(Debug, Clone, Args)]
pub struct OptionArgs {
    #[arg(long)]
    pub s0: f64,
    #[arg(long)]
    pub k: f64,
    /// Comma-separated maturities.
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long, value_enum, default_value = "call")]
    pub kind: Kind,
    /// Comma-separated truncation vector; defaults to (15, ..., 15, 30, 30, 60).
    #[arg(long)]
    pub trunc: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Numeric,
    Hybrid,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Roots of psi(z) = q: real q, or along the contour q = c + iu.
    Roots {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated real q values.
        #[arg(long)]
        q: Option<String>,
        /// Contour abscissa c.
        #[arg(long)]
        contour: Option<f64>,
        /// Contour range `a:b`.
        #[arg(long)]
        u: Option<String>,
        /// Grid points on the contour range.
        #[arg(long, default_value_t = 141)]
        points: usize,
        /// Expansion order used for the series columns.
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// European prices from the time series.
    Price {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        option: OptionArgs,
    },
    /// Price, theta, delta and gamma (delta and gamma need sigma > 0).
    Greeks {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        option: OptionArgs,
    },
    /// ATM implied volatility expansion (r = 0, S0 = K = 1).
    ImpliedVol {
        #[arg(long, default_value = "2")]
        set: String,
        #[arg(long)]
        sigma: Option<f64>,
        /// Comma-separated expansion orders.
        #[arg(long, default_value = "1,2,5,10")]
        orders: String,
        /// Comma-separated maturities; defaults to 0.001, 0.002, ..., 0.05.
        #[arg(long)]
        t: Option<String>,
    },
    /// Up-and-out digital by Bromwich inversion.
    Digital {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0.25)]
        t: f64,
        /// Barrier as a multiple of S0.
        #[arg(long, default_value_t = 1.1)]
        k: f64,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 1000.0)]
        upper: f64,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        /// Hybrid mode switches to expansions above this u.
        #[arg(long, default_value_t = 80.0)]
        switch_u: f64,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// European call by Fourier inversion in the log-strike.
    FourierPrice {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        option: OptionArgs,
        /// Abscissa in (1 - rho_1, 0); defaults to the strip midpoint capped at -2.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
        #[arg(long, default_value_t = 1e5)]
        upper: f64,
        #[arg(long, default_value_t = 400_000)]
        steps: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let table = match (cli.command, cli.reproduce) {
        (None, None) => return Err(CliError::Config("give a subcommand or --reproduce".into())),
        (None, Some(p)) => presets::reproduce(p, cli.extended, cli.timings)?,
        (Some(cmd), _) => match cmd {
            Command::Roots {
                model,
                q,
                contour,
                u,
                points,
                order,
            } => commands::roots(&model, q.as_deref(), contour, u.as_deref(), points, order)?,
            Command::Price { model, option } => commands::price(&model, &option)?,
            Command::Greeks { model, option } => commands::greeks(&model, &option)?,
            Command::ImpliedVol { set, sigma, orders, t } => commands::implied_vol(&set, sigma, &orders, t.as_deref())?,
            Command::Digital {
                model,
                t,
                k,
                c,
                steps,
                upper,
                mode,
                switch_u,
                order,
            } => {
                let req = commands::DigitalRequest {
                    t,
                    k,
                    c,
                    steps,
                    upper,
                    mode,
                    switch_u,
                    order,
                    timings: cli.timings,
                };
                commands::digital(&model, &req)?
            }
            Command::FourierPrice {
                model,
                option,
                c,
                upper,
                steps,
            } => commands::fourier(&model, &option, c, upper, steps)?,
        },
    };
    table.emit(cli.output.as_deref(), cli.format, cli.precision)
}

fn report(err: &CliError) {
    let record = serde_json::json!({ "error": err.kind(), "message": err.to_string() });
    eprintln!("{record}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Config(e.to_string().trim().to_string());
            report(&err);
            return ExitCode::from(err.exit_code());
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report(&err);
            ExitCode::from(err.exit_code())
        }
    }
}
