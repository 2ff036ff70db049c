use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use extropy::continuum::NORMALIZATION_TOLERANCE;
use extropy::io::report::{
    continuum_report, contract_report, diverge_report, measure_report, parse_pmf, score_report,
    to_json, DivergeMode,
};
use extropy::io::{
    contour_grid, parse_forecasts, read_density_with_tolerance, ForecastFormat, IoError,
};
use extropy::scoring::parse_rules;

#[derive(Parser)]
#[command(
    name = "extropy",
    version,
    about = "Entropy and extropy of distributions, densities and forecasts"
)]
struct Cli {
    /// Output format; each command accepts a subset and has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy, extropy and the complement of a pmf.
    Measure {
        /// Masses such as `0.25,0.5,0.25` or `1/4,1/2,1/4`.
        pmf: Option<String>,
        /// Read the pmf from a file instead.
        #[arg(long, conflicts_with = "pmf")]
        file: Option<PathBuf>,
    },
    /// Relative entropy, relative extropy and half squared Euclidean distance.
    Diverge {
        p: String,
        s: String,
        #[arg(long, default_value = "all")]
        mode: String,
    },
    /// Score a forecast file under one or more rules.
    Score {
        file: PathBuf,
        #[arg(long, default_value = "log,totallog,quadratic")]
        rules: String,
        /// Forecast file format; inferred from the extension when absent.
        #[arg(long)]
        input_format: Option<String>,
    },
    /// Entropy and extropy over the barycentric lattice of the 2-simplex.
    Contours {
        #[arg(long)]
        resolution: usize,
    },
    /// Iterate the complement map.
    Contract {
        pmf: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Differential measures of a tabulated density and discretization probes.
    Continuum {
        /// Density `f` (two-column text or JSON).
        f: PathBuf,
        /// Reference density `g` on the same nodes; uniform when absent.
        g: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "11,101,1001")]
        grid: Vec<usize>,
        /// Accepted |∫ f - 1| for the input densities.
        #[arg(long, default_value_t = NORMALIZATION_TOLERANCE)]
        tolerance: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => match emit(cli.output.as_deref(), &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(&e),
        },
        Err(e) => fail(&e),
    }
}

fn fail(e: &IoError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), IoError> {
    let result = match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    result.map_err(|source| IoError::Io {
        path: path.map_or_else(|| "<stdout>".into(), |p| p.display().to_string()),
        source,
    })
}

fn pick(requested: Option<Format>, allowed: &[Format], command: &str) -> Result<Format, IoError> {
    match requested {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(IoError::Format(format!(
            "`{command}` does not support --format {}",
            f.to_possible_value()
                .expect("no skipped variants")
                .get_name()
        ))),
    }
}

fn run(cli: &Cli) -> Result<String, IoError> {
    use Format::*;
    match &cli.command {
        Command::Measure { pmf, file } => {
            pick(cli.format, &[Json], "measure")?;
            let text = match (pmf, file) {
                (Some(p), _) => p.clone(),
                (None, Some(path)) => {
                    std::fs::read_to_string(path).map_err(|source| IoError::Io {
                        path: path.display().to_string(),
                        source,
                    })?
                }
                (None, None) => return Err(IoError::Format("give a pmf or --file".into())),
            };
            Ok(to_json(&measure_report(&parse_pmf(&text)?)))
        }
        Command::Diverge { p, s, mode } => {
            pick(cli.format, &[Json], "diverge")?;
            let mode: DivergeMode = mode.parse()?;
            let report = diverge_report(&parse_pmf(p)?, &parse_pmf(s)?, mode)?;
            Ok(to_json(&report))
        }
        Command::Score {
            file,
            rules,
            input_format,
        } => {
            let format = pick(cli.format, &[Json, Csv], "score")?;
            let rules = parse_rules(rules)?;
            let input = match input_format {
                Some(f) => f.parse()?,
                None => ForecastFormat::from_path(file),
            };
            let parsed = parse_forecasts(file, input)?;
            for w in &parsed.warnings {
                eprintln!("warning: {w}");
            }
            let out = score_report(&parsed, &rules)?;
            Ok(match format {
                Csv => out.to_csv(),
                _ => to_json(&out),
            })
        }
        Command::Contours { resolution } => {
            let format = pick(cli.format, &[Tsv, Json], "contours")?;
            let grid = contour_grid(*resolution)?;
            Ok(match format {
                Json => grid.to_json(),
                _ => grid.to_tsv(),
            })
        }
        Command::Contract { pmf, steps } => {
            let format = pick(cli.format, &[Json, Tsv], "contract")?;
            let report = contract_report(&parse_pmf(pmf)?, *steps)?;
            Ok(match format {
                Tsv => report.to_tsv(),
                _ => to_json(&report),
            })
        }
        Command::Continuum {
            f,
            g,
            grid,
            tolerance,
        } => {
            let format = pick(cli.format, &[Json, Tsv], "continuum")?;
            let read = |p: &Path| read_density_with_tolerance(p, *tolerance);
            let f = read(f)?;
            let g = g.as_deref().map(read).transpose()?;
            let report = continuum_report(&f, g.as_ref(), grid)?;
            Ok(match format {
                Tsv => report.to_tsv(),
                _ => to_json(&report),
            })
        }
    }
}
