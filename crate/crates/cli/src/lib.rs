//! Command-line front end: evaluate, fit, sample, compare and tabulate
//! HypoXG distributions.

use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypoxg::estimation::{compare_models, fit_model, ModelSpec, ObservationSet, OptimizerOptions};
use hypoxg::oracle::mc_sample_sum;
use hypoxg::{Category, MixtureRepresentation, ParamVector};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Library(#[from] hypoxg::Error),
}

impl CliError {
    pub fn category(&self) -> Category {
        match self {
            CliError::Config(_) => Category::Config,
            CliError::Data(_) => Category::Data,
            CliError::Library(e) => e.category(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.category() {
            Category::Config => 2,
            Category::Data => 3,
            Category::Numeric | Category::Budget => 4,
        }
    }

    /// One-line message prefixed with the error category.
    pub fn diagnostic(&self) -> String {
        let text = self.to_string().replace('\n', " ");
        format!("{}: {text}", self.category().prefix())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "hypoxg",
    version,
    about = "Sums of independent XGamma lifetimes"
)]
pub struct Cli {
    /// Output format for structured results.
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density, distribution, reliability and hazard at given points.
    Eval(EvalArgs),
    /// Maximum-likelihood fit to a file of lifetimes.
    Fit(FitArgs),
    /// Draw a seeded sample, one value per line.
    Sample(SampleArgs),
    /// Fit several models and rank them by AIC.
    Compare(CompareArgs),
    /// Tabulate pdf, cdf, reliability and hazard on a grid as CSV.
    Curves(CurvesArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Comma-separated rates.
    #[arg(long)]
    pub params: String,
    /// Comma-separated evaluation points.
    #[arg(long)]
    pub at: String,
    /// Also report raw moments of order 1..=k.
    #[arg(long)]
    pub moments: Option<u32>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Observation file, or `-` for standard input.
    #[arg(long)]
    pub input: String,
    /// `hypoxg`, `hypoxg:<n>` or `hypoexp2`.
    #[arg(long, default_value = "hypoxg")]
    pub model: String,
    /// Number of XGamma components.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random restarts besides the moment-matched start.
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub params: String,
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub input: String,
    /// Comma-separated model list, e.g. `hypoxg:2,hypoexp2`.
    #[arg(long, default_value = "hypoxg:2,hypoexp2")]
    pub models: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(long)]
    pub params: String,
    /// `tmin:tmax:npoints`.
    #[arg(long)]
    pub grid: String,
    /// Destination file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Where observations come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Stdin,
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let span = self.t_max - self.t_min;
        let last = (self.n_points - 1) as f64;
        (0..self.n_points).map(move |i| {
            if i + 1 == self.n_points {
                self.t_max
            } else {
                self.t_min + span * i as f64 / last
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Eval { at: Vec<f64>, moments: Option<u32> },
    Fit { model: ModelSpec },
    Sample { count: usize },
    Compare { models: Vec<ModelSpec> },
    Curves { grid: Grid, out: Option<PathBuf> },
}

/// Validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub params: Option<ParamVector>,
    pub input: Option<Input>,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub restarts: usize,
}

fn parse_list(text: &str, what: &str) -> CliResult<Vec<f64>> {
    let values: Vec<f64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Config(format!("{what}: '{s}' is not a number")))
        })
        .collect::<CliResult<_>>()?;
    if values.is_empty() {
        return Err(CliError::Config(format!("{what}: empty list")));
    }
    Ok(values)
}

pub fn parse_params(text: &str) -> CliResult<ParamVector> {
    Ok(ParamVector::new(parse_list(text, "--params")?)?)
}

pub fn parse_grid(text: &str) -> CliResult<Grid> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Config(format!("--grid: expected tmin:tmax:npoints, got '{text}'"));
    let [lo, hi, n] = parts.as_slice() else {
        return Err(bad());
    };
    let t_min: f64 = lo.trim().parse().map_err(|_| bad())?;
    let t_max: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n_points: usize = n.trim().parse().map_err(|_| bad())?;
    if !(t_min >= 0.0 && t_max > t_min && t_max.is_finite()) {
        return Err(CliError::Config(format!(
            "--grid: need 0 <= tmin < tmax, got {t_min}:{t_max}"
        )));
    }
    if n_points < 2 {
        return Err(CliError::Config("--grid: need at least 2 points".into()));
    }
    Ok(Grid {
        t_min,
        t_max,
        n_points,
    })
}

fn parse_model(name: &str, n: Option<usize>) -> CliResult<ModelSpec> {
    let lower = name.trim().to_ascii_lowercase();
    if lower == "hypoxg" {
        let n = n.ok_or_else(|| CliError::Config("--model hypoxg needs --n".into()))?;
        return Ok(format!("hypoxg:{n}").parse()?);
    }
    let spec: ModelSpec = lower.parse()?;
    match (spec, n) {
        (ModelSpec::HypoXg { n: a }, Some(b)) if a != b => Err(CliError::Config(format!(
            "--model {name} conflicts with --n {b}"
        ))),
        (ModelSpec::Hypoexp2, Some(b)) if b != 2 => Err(CliError::Config(format!(
            "hypoexp2 has two rates, got --n {b}"
        ))),
        _ => Ok(spec),
    }
}

fn parse_input(text: &str) -> Input {
    if text == "-" {
        Input::Stdin
    } else {
        Input::File(PathBuf::from(text))
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> CliResult<Self> {
        let mut config = RunConfig {
            task: Task::Sample { count: 0 },
            params: None,
            input: None,
            output_format: cli.format,
            seed: 0,
            restarts: 8,
        };
        match cli.command {
            Command::Eval(a) => {
                let at = parse_list(&a.at, "--at")?;
                if let Some(t) = at.iter().find(|t| !t.is_finite()) {
                    return Err(CliError::Config(format!("--at: {t} is not finite")));
                }
                config.params = Some(parse_params(&a.params)?);
                config.task = Task::Eval {
                    at,
                    moments: a.moments,
                };
            }
            Command::Fit(a) => {
                config.task = Task::Fit {
                    model: parse_model(&a.model, a.n)?,
                };
                config.input = Some(parse_input(&a.input));
                config.seed = a.seed;
                config.restarts = a.restarts;
            }
            Command::Sample(a) => {
                if a.count == 0 {
                    return Err(CliError::Config("--count must be at least 1".into()));
                }
                config.params = Some(parse_params(&a.params)?);
                config.task = Task::Sample { count: a.count };
                config.seed = a.seed;
            }
            Command::Compare(a) => {
                let models = a
                    .models
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.parse::<ModelSpec>())
                    .collect::<Result<Vec<_>, _>>()?;
                config.task = Task::Compare { models };
                config.input = Some(parse_input(&a.input));
                config.seed = a.seed;
                config.restarts = a.restarts;
            }
            Command::Curves(a) => {
                config.params = Some(parse_params(&a.params)?);
                config.task = Task::Curves {
                    grid: parse_grid(&a.grid)?,
                    out: a.out,
                };
            }
        }
        Ok(config)
    }

    fn options(&self) -> OptimizerOptions {
        OptimizerOptions {
            seed: self.seed,
            restarts: self.restarts,
            ..OptimizerOptions::default()
        }
    }
}

/// Reads lifetimes: numbers separated by commas or whitespace, blank lines
/// and `#` lines ignored.
pub fn parse_observations<R: BufRead>(input: R, label: &str) -> CliResult<ObservationSet> {
    let mut values = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| CliError::Data(format!("line {}: {e}", i + 1)))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        for token in trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
        {
            let v: f64 = token.parse().map_err(|_| {
                CliError::Data(format!("line {}: '{token}' is not a number", i + 1))
            })?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Data(format!(
                    "line {}: '{token}' is not a positive finite lifetime",
                    i + 1
                )));
            }
            values.push(v);
        }
    }
    if values.is_empty() {
        return Err(CliError::Data("input contains no observations".into()));
    }
    Ok(ObservationSet::new(values, label)?)
}

fn load(input: &Input, stdin: &mut dyn Read) -> CliResult<ObservationSet> {
    match input {
        Input::Stdin => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| CliError::Data(format!("reading standard input: {e}")))?;
            parse_observations(text.as_bytes(), "stdin")
        }
        Input::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_observations(text.as_bytes(), &path.display().to_string())
        }
    }
}

#[derive(Debug, Serialize)]
struct PointRow {
    t: f64,
    pdf: f64,
    cdf: f64,
    reliability: f64,
    hazard: Option<f64>,
}

#[derive(Debug, Serialize)]
struct MomentRow {
    order: u32,
    value: f64,
}

#[derive(Debug, Serialize)]
struct EvalReport<'a> {
    params: &'a [f64],
    points: Vec<PointRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    moments: Vec<MomentRow>,
}

#[derive(Debug, Serialize)]
struct FitReport {
    model: String,
    estimates: Vec<f64>,
    log_likelihood: f64,
    aic: f64,
    converged: bool,
    n_evaluations: usize,
    seed: u64,
}

fn point(m: &MixtureRepresentation, t: f64) -> PointRow {
    PointRow {
        t,
        pdf: m.pdf(t),
        cdf: m.cdf(t),
        reliability: m.reliability(t),
        hazard: m.hazard(t).ok(),
    }
}

const CSV_HEADER: &str = "t,pdf,cdf,reliability,hazard";

fn write_csv_rows(rows: &[PointRow], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let hazard = r
            .hazard
            .map_or_else(|| "nan".to_string(), |h| format!("{h:.14e}"));
        writeln!(
            out,
            "{:.14e},{:.14e},{:.14e},{:.14e},{hazard}",
            r.t, r.pdf, r.cdf, r.reliability
        )?;
    }
    Ok(())
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serializing output: {e}")))?;
    writeln!(out, "{text}").map_err(write_error)
}

fn write_error(e: io::Error) -> CliError {
    CliError::Config(format!("writing output: {e}"))
}

fn require_json(config: &RunConfig, what: &str) -> CliResult<()> {
    if config.output_format == OutputFormat::Csv {
        return Err(CliError::Config(format!("{what} output is JSON only")));
    }
    Ok(())
}

/// Executes `config`, reading observations from `stdin` when the input is
/// `-` and writing documents to `out`.
pub fn run(config: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write) -> CliResult<()> {
    match &config.task {
        Task::Eval { at, moments } => {
            let params = config.params.as_ref().expect("eval has params");
            let m = MixtureRepresentation::new(params);
            let points: Vec<PointRow> = at.iter().map(|&t| point(&m, t)).collect();
            match config.output_format {
                OutputFormat::Csv => write_csv_rows(&points, out).map_err(write_error),
                OutputFormat::Json => {
                    let moments = (1..=moments.unwrap_or(0))
                        .map(|order| MomentRow {
                            order,
                            value: m.moment(order),
                        })
                        .collect();
                    write_json(
                        &EvalReport {
                            params: params.rates(),
                            points,
                            moments,
                        },
                        out,
                    )
                }
            }
        }
        Task::Fit { model } => {
            require_json(config, "fit")?;
            let data = load(config.input.as_ref().expect("fit has input"), stdin)?;
            let fit = fit_model(&data, *model, &config.options())?;
            write_json(
                &FitReport {
                    model: model.to_string(),
                    estimates: fit.estimates,
                    log_likelihood: fit.log_likelihood,
                    aic: fit.aic,
                    converged: fit.converged,
                    n_evaluations: fit.n_evaluations,
                    seed: config.seed,
                },
                out,
            )
        }
        Task::Sample { count } => {
            let params = config.params.as_ref().expect("sample has params");
            let batch = mc_sample_sum(params, *count, config.seed)?;
            let mut text = String::with_capacity(24 * batch.values.len());
            for v in &batch.values {
                text.push_str(&format!("{v}\n"));
            }
            out.write_all(text.as_bytes()).map_err(write_error)
        }
        Task::Compare { models } => {
            require_json(config, "compare")?;
            let data = load(config.input.as_ref().expect("compare has input"), stdin)?;
            let table = compare_models(&data, models, &config.options())?;
            write_json(&table, out)
        }
        Task::Curves { grid, out: path } => {
            let params = config.params.as_ref().expect("curves has params");
            let m = MixtureRepresentation::new(params);
            let rows: Vec<PointRow> = grid.points().map(|t| point(&m, t)).collect();
            match path {
                Some(p) => {
                    let mut buf = Vec::new();
                    write_csv_rows(&rows, &mut buf).map_err(write_error)?;
                    fs::write(p, buf)
                        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display())))
                }
                None => write_csv_rows(&rows, out).map_err(write_error),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observations_with_comments_and_separators() {
        let o = parse_observations("# comment\n1.0\n2.0".as_bytes(), "x").unwrap();
        assert_eq!(o.len(), 2);
        let o = parse_observations("1, 2 3\n\n  4,5\n".as_bytes(), "x").unwrap();
        assert_eq!(o.values(), &[1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn observation_errors_name_line_and_token() {
        let e = parse_observations("1.0, -3".as_bytes(), "x").unwrap_err();
        assert!(e.to_string().contains("'-3'") && e.to_string().contains("line 1"));
        assert_eq!(e.exit_code(), 3);
        let e = parse_observations("1\n2\nabc".as_bytes(), "x").unwrap_err();
        assert!(e.to_string().contains("line 3") && e.to_string().contains("abc"));
        let e = parse_observations("# nothing\n\n".as_bytes(), "x").unwrap_err();
        assert_eq!(e.diagnostic(), "data: input contains no observations");
    }

    #[test]
    fn grid_validation() {
        let g = parse_grid("0:10:101").unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts.len(), 101);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[100], 10.0);
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
        assert!(parse_grid("0:10:1").is_err());
        assert!(parse_grid("5:1:10").is_err());
        assert!(parse_grid("0:10").is_err());
    }

    #[test]
    fn model_arguments() {
        assert_eq!(
            parse_model("hypoxg", Some(2)).unwrap(),
            ModelSpec::HypoXg { n: 2 }
        );
        assert_eq!(
            parse_model("hypoxg:3", None).unwrap(),
            ModelSpec::HypoXg { n: 3 }
        );
        assert_eq!(
            parse_model("hypoexp2", Some(2)).unwrap(),
            ModelSpec::Hypoexp2
        );
        assert!(parse_model("hypoxg", None).is_err());
        assert!(parse_model("hypoxg:3", Some(2)).is_err());
        assert!(parse_model("gamma", None).is_err());
    }

    #[test]
    fn library_errors_keep_their_category() {
        let e = CliError::from(hypoxg::Error::MgfDomain { t: 2.0, limit: 1.0 });
        assert_eq!(e.exit_code(), 4);
        assert!(e.diagnostic().starts_with("numeric: "));
        assert_eq!(parse_params("1,1").unwrap_err().exit_code(), 2);
        assert_eq!(parse_params("1,x").unwrap_err().exit_code(), 2);
    }
}
