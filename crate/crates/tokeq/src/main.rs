use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use tokeq::config::{parse_config, ParamOverrides};
use tokeq::crra::{solve_equity_crra, solve_token_crra, FixedPointConfig};
use tokeq::model::ModelParams;
use tokeq::sweep::{figure_data, rows_to_csv, sweep_1d, GridSpec, SweepParam};
use tokeq::{report, svg, verify};

const EXIT_SOLVER: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tokeq",
    version,
    about = "Token-versus-equity startup financing: equilibrium prices, payoffs, comparative statics, and a brute-force verification suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat key=value parameter file (keys: R, lambda, phi1, phi2, y1, y2,
    /// omega, I, W, sigma). Command-line overrides win over the file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write output to this file instead of stdout. For `figure` this is
    /// the SVG path; the CSV lands next to it.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Full-precision numbers plus solver diagnostics.
    #[arg(short, long, global = true)]
    verbose: bool,

    /// Gross risk-free rate per period.
    #[arg(long = "R", global = true, value_name = "NUM")]
    r: Option<f64>,
    /// Probability an investor must consume in the middle period.
    #[arg(long, global = true, value_name = "NUM")]
    lambda: Option<f64>,
    /// Fraction of launch tokens sellable in the middle period.
    #[arg(long, global = true, value_name = "NUM")]
    phi1: Option<f64>,
    /// Fraction of the remaining tokens sellable in the final period.
    #[arg(long, global = true, value_name = "NUM")]
    phi2: Option<f64>,
    /// Digital-good output in the middle period.
    #[arg(long, global = true, value_name = "NUM")]
    y1: Option<f64>,
    /// Digital-good output in the final period.
    #[arg(long, global = true, value_name = "NUM")]
    y2: Option<f64>,
    /// Per-period fixed production cost.
    #[arg(long, global = true, value_name = "NUM")]
    omega: Option<f64>,
    /// Required initial investment.
    #[arg(long = "I", global = true, value_name = "NUM")]
    invest: Option<f64>,
    /// Investor initial wealth.
    #[arg(long = "W", global = true, value_name = "NUM")]
    wealth: Option<f64>,
    /// Relative risk aversion (0 = risk neutral).
    #[arg(long, global = true, value_name = "NUM")]
    sigma: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    /// Flat CSV record, one row per financing mode.
    Csv,
    /// Aligned key-value text.
    StructuredText,
}

#[derive(Subcommand)]
enum Command {
    /// Solve both financing modes at one parameter point.
    Solve {
        #[arg(long, value_enum, default_value_t = OutputFormat::StructuredText)]
        format: OutputFormat,
    },
    /// Evaluate both modes over a parameter grid and emit CSV.
    Sweep {
        /// Parameter to sweep: R, lambda, phi1, phi2, y1, y2, omega, I, W, or sigma.
        #[arg(long)]
        param: String,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        /// Number of grid points, endpoints included.
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
    /// Emit the payoff-versus-risk-aversion dataset (CSV) and chart (SVG).
    Figure {
        #[arg(long, default_value_t = 0.0)]
        sigma_lo: f64,
        #[arg(long, default_value_t = 5.0)]
        sigma_hi: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
    /// Run the full verification suite and exit nonzero on any breach.
    Verify,
}

impl Cli {
    fn overrides(&self) -> ParamOverrides {
        ParamOverrides {
            r: self.r,
            lambda: self.lambda,
            phi1: self.phi1,
            phi2: self.phi2,
            y1: self.y1,
            y2: self.y2,
            omega: self.omega,
            invest: self.invest,
            wealth: self.wealth,
            sigma: self.sigma,
        }
    }

    /// Defaults, then the config file, then command-line flags.
    fn resolve_params(&self) -> Result<ModelParams, tokeq::Error> {
        let mut params = ModelParams::default();
        if let Some(path) = &self.config {
            params = parse_config(path)?.apply(&params);
        }
        params = self.overrides().apply(&params);
        params.validate()
    }
}

fn emit(path: Option<&Path>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> u8 {
    let params = match cli.resolve_params() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("tokeq: {e}");
            return EXIT_USAGE;
        }
    };
    let cfg = FixedPointConfig::default();
    match &cli.command {
        Command::Solve { format } => {
            let equity = solve_equity_crra(&params, &cfg);
            let token = solve_token_crra(&params, &cfg);
            let text = match format {
                OutputFormat::Csv => report::solution_csv(&params, &equity, &token, cli.verbose),
                OutputFormat::StructuredText => {
                    report::solution_text(&params, &equity, &token, cli.verbose)
                }
            };
            if let Err(e) = emit(cli.output.as_deref(), &text) {
                eprintln!("tokeq: cannot write output: {e}");
                return EXIT_USAGE;
            }
            for (leg, err) in [("equity", equity.err()), ("token", token.err())] {
                if let Some(e) = err {
                    eprintln!("tokeq: {leg} leg failed: {e}");
                    return EXIT_SOLVER;
                }
            }
            0
        }
        Command::Sweep {
            param,
            lo,
            hi,
            steps,
        } => {
            let param: SweepParam = match param.parse() {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("tokeq: {e}");
                    return EXIT_USAGE;
                }
            };
            let grid = match GridSpec::new(param, *lo, *hi, *steps) {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("tokeq: {e}");
                    return EXIT_USAGE;
                }
            };
            let rows = sweep_1d(&params, &grid, &cfg);
            let csv = rows_to_csv(&rows, cli.verbose);
            if let Err(e) = emit(cli.output.as_deref(), &csv) {
                eprintln!("tokeq: cannot write output: {e}");
                return EXIT_USAGE;
            }
            0
        }
        Command::Figure {
            sigma_lo,
            sigma_hi,
            steps,
        } => {
            let grid = match GridSpec::new(SweepParam::Sigma, *sigma_lo, *sigma_hi, *steps) {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("tokeq: {e}");
                    return EXIT_USAGE;
                }
            };
            let rows = match figure_data(&params, &grid, &cfg) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("tokeq: {e}");
                    return EXIT_SOLVER;
                }
            };
            let svg_path = cli
                .output
                .clone()
                .unwrap_or_else(|| PathBuf::from("figure1.svg"));
            let csv_path = svg_path.with_extension("csv");
            let csv = rows_to_csv(&rows, cli.verbose);
            let chart = svg::figure_svg(&rows);
            if let Err(e) = std::fs::write(&csv_path, csv) {
                eprintln!("tokeq: cannot write {}: {e}", csv_path.display());
                return EXIT_USAGE;
            }
            if let Err(e) = std::fs::write(&svg_path, chart) {
                eprintln!("tokeq: cannot write {}: {e}", svg_path.display());
                return EXIT_USAGE;
            }
            println!("wrote {}", csv_path.display());
            println!("wrote {}", svg_path.display());
            0
        }
        Command::Verify => {
            let results = verify::run_all();
            print!("{}", verify::render_table(&results));
            if verify::all_passed(&results) {
                0
            } else {
                EXIT_VERIFY
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(&cli))
}
