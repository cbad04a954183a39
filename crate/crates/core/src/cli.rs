//! Command-line front end: CSV loading, argument parsing and dispatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::conditional::{
    conditional_cdf, log_return_transform, markov_impute, sequential_generate, ConditioningSpec,
};
use crate::curve::{linspace, CurveEstimate};
use crate::dataset::Dataset;
use crate::distribution::{cdf_estimate, default_grid, sample_batch, SincCdf};
use crate::error::{Error, Result};
use crate::integral::{rate_check, TestFunction};
use crate::kernel::KernelKind;
use crate::mixing::{bandwidth_profile, median_curve, mixing_cdf, GModel, MixingParams};
use crate::params::EstimatorParams;
use crate::quantile::{quantile_estimate, QuantileRequest};

/// Reads a numeric CSV file. Rows are numbered from 1 as they appear in the
/// file, header included, so diagnostics point at the offending line.
pub fn load_csv(path: &Path, has_header: bool) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    read_csv(file, has_header)
}

/// [`load_csv`] from any reader.
pub fn read_csv<R: io::Read>(reader: R, has_header: bool) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let labels = if has_header {
        let header = reader.headers().map_err(csv_error)?;
        Some(header.iter().map(str::to_string).collect::<Vec<_>>())
    } else {
        None
    };
    let mut width = labels.as_ref().map(Vec::len);
    let mut values = Vec::new();
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::input(format!(
                "row {line}: expected {expected} fields, found {}",
                record.len()
            )));
        }
        for (j, cell) in record.iter().enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| Error::input(format!("row {line}, column {j}: '{cell}' is not a number")))?;
            if !v.is_finite() {
                return Err(Error::input(format!("row {line}, column {j}: value '{cell}' is not finite")));
            }
            values.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::input("no data rows"));
    }
    let data = Dataset::new(rows, width.unwrap_or(0), values)?;
    match labels {
        Some(l) => data.with_labels(l),
        None => Ok(data),
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line());
    match (e.into_kind(), line) {
        (csv::ErrorKind::Io(io), _) => Error::Io(io),
        (kind, Some(line)) => Error::input(format!("row {line}: {kind:?}")),
        (kind, None) => Error::input(format!("{kind:?}")),
    }
}

fn io_error(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// `min:max:points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.points)
    }
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, points] = parts[..] else {
            return Err(format!("grid '{s}' is not of the form min:max:points"));
        };
        let min: f64 = min.trim().parse().map_err(|_| format!("bad grid minimum '{min}'"))?;
        let max: f64 = max.trim().parse().map_err(|_| format!("bad grid maximum '{max}'"))?;
        let points: usize = points.trim().parse().map_err(|_| format!("bad grid size '{points}'"))?;
        if !(min.is_finite() && max.is_finite()) {
            return Err(format!("grid '{s}' has non-finite ends"));
        }
        if points == 1 && min != max || points > 1 && min >= max || points == 0 {
            return Err(format!("grid '{s}' needs min < max and at least 2 points"));
        }
        Ok(GridSpec { min, max, points })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    /// `10 log(y_{i+1} / y_i)` applied to every column.
    #[value(name = "log-return10")]
    LogReturn10,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelArg {
    Sin,
    Haar,
}

impl From<KernelArg> for KernelKind {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Sin => KernelKind::Sin,
            KernelArg::Haar => KernelKind::Haar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    Linear,
    PlugIn,
}

impl From<ModelArg> for GModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Linear => GModel::Linear,
            ModelArg::PlugIn => GModel::PlugIn,
        }
    }
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "fourier-est", version, about = "Sinc-kernel distribution estimators")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Io {
    /// CSV input file.
    #[arg(long)]
    pub input: PathBuf,
    /// The first CSV line holds column labels.
    #[arg(long)]
    pub has_header: bool,
    /// Transform applied to every column after loading.
    #[arg(long, value_enum)]
    pub transform: Option<Transform>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MixingArgs {
    /// Column holding the covariate x.
    #[arg(long, default_value = "0")]
    pub x_col: String,
    /// Column holding the response y.
    #[arg(long, default_value = "1")]
    pub y_col: String,
    #[arg(long, default_value_t = 0.1)]
    pub h: f64,
    #[arg(long = "R", default_value_t = 10.0)]
    pub r: f64,
    #[arg(long = "R1", default_value_t = 10.0)]
    pub r1: f64,
    #[arg(long = "R2", default_value_t = 10.0)]
    pub r2: f64,
    /// Monte Carlo size N.
    #[arg(long, default_value_t = 10_000)]
    pub mc_samples: usize,
    /// Stratify the s draws over (0, R).
    #[arg(long)]
    pub stratified: bool,
}

impl MixingArgs {
    fn params(&self, seed: u64, isotonic: bool) -> MixingParams {
        MixingParams {
            h: self.h,
            r: self.r,
            r1: self.r1,
            r2: self.r2,
            n: self.mc_samples,
            seed,
            stratified: self.stratified,
            isotonic,
        }
    }

    fn data(&self, data: &Dataset) -> Result<Dataset> {
        data.select(&[data.column_index(&self.x_col)?, data.column_index(&self.y_col)?])
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Smoothed distribution function of one column on a grid.
    #[command(allow_negative_numbers = true)]
    Cdf {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value = "0")]
        col: String,
        #[arg(long = "R", default_value_t = 5.0)]
        r: f64,
        #[arg(long, value_enum, default_value = "sin")]
        kernel: KernelArg,
        /// Evaluation grid min:max:points (default: 256 points over ±3 sd).
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        /// Project the curve onto non-decreasing functions.
        #[arg(long)]
        isotonic: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Draws from the smoothed distribution of one column.
    #[command(allow_negative_numbers = true)]
    Sample {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value = "0")]
        col: String,
        #[arg(long = "R", default_value_t = 5.0)]
        r: f64,
        #[arg(long, value_enum, default_value = "sin")]
        kernel: KernelArg,
        #[arg(long, default_value_t = 1000)]
        n_samples: usize,
    },
    /// Conditional distribution of one column given values of others.
    #[command(allow_negative_numbers = true)]
    CondCdf {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value = "0")]
        target: String,
        /// Conditioning columns, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        given: Vec<String>,
        /// Conditioning values, one per given column.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        at: Vec<f64>,
        #[arg(long = "R1", default_value_t = 10.0)]
        r1: f64,
        #[arg(long = "R2", default_value_t = 6.0)]
        r2: f64,
        #[arg(long, value_enum, default_value = "sin")]
        kernel: KernelArg,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        #[arg(long)]
        isotonic: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Synthetic rows from the chain of conditional distributions.
    #[command(allow_negative_numbers = true)]
    Generate {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 100)]
        n_samples: usize,
        #[arg(long = "R1", default_value_t = 10.0)]
        r1: f64,
        #[arg(long = "R2", default_value_t = 6.0)]
        r2: f64,
        #[arg(long, value_enum, default_value = "sin")]
        kernel: KernelArg,
    },
    /// Draws for a gap in a series given its two neighbours.
    #[command(allow_negative_numbers = true)]
    Impute {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value = "0")]
        col: String,
        /// Row of the gap (0-based, after any transform).
        #[arg(long)]
        index: usize,
        #[arg(long = "R1", default_value_t = 10.0)]
        r1: f64,
        #[arg(long = "R2", default_value_t = 6.0)]
        r2: f64,
        #[arg(long, value_enum, default_value = "sin")]
        kernel: KernelArg,
        #[arg(long, default_value_t = 1000)]
        n_samples: usize,
    },
    /// Conditional quantiles of y at covariate values x.
    #[command(allow_negative_numbers = true)]
    Quantile {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value = "0")]
        x_col: String,
        #[arg(long, default_value = "1")]
        y_col: String,
        /// Quantile levels, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<f64>,
        /// Covariate values, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long = "R", default_value_t = 10.0)]
        r: f64,
        /// Defaults to R.
        #[arg(long = "R1")]
        r1: Option<f64>,
        /// Defaults to R.
        #[arg(long = "R2")]
        r2: Option<f64>,
        #[arg(long, default_value_t = 5000)]
        mc_samples: usize,
        /// Skip the monotone rearrangement across levels.
        #[arg(long)]
        no_monotone: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Mixing distribution G(theta|x0) under a Gaussian kernel of scale h.
    #[command(allow_negative_numbers = true)]
    Mixing {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        mixing: MixingArgs,
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        /// Skip the isotonic projection.
        #[arg(long)]
        no_isotonic: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Bandwidth h minimising the deconvolution mismatch over a grid.
    #[command(allow_negative_numbers = true)]
    SelectH {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        mixing: MixingArgs,
        /// Bandwidth grid min:max:points.
        #[arg(long, default_value = "0.01:0.3:30")]
        h_grid: GridSpec,
        /// Probe covariate (default: sample mean).
        #[arg(long, allow_hyphen_values = true, requires = "probe_y")]
        probe_x: Option<f64>,
        /// Probe response (default: sample mean).
        #[arg(long, allow_hyphen_values = true, requires = "probe_x")]
        probe_y: Option<f64>,
        #[arg(long, value_enum, default_value = "linear")]
        model: ModelArg,
    },
    /// Median of the mixing distribution along a covariate grid.
    #[command(allow_negative_numbers = true)]
    MedianCurve {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        mixing: MixingArgs,
        #[arg(long, allow_hyphen_values = true)]
        x_grid: GridSpec,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Empirical approximation rate of the kernel integral.
    #[command(allow_negative_numbers = true)]
    RateCheck {
        #[arg(long, default_value = "gauss-pdf")]
        function: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        y: f64,
        #[arg(long = "R-grid", value_delimiter = ',', default_value = "2,4,8,16,32")]
        r_grid: Vec<f64>,
        #[arg(long, value_enum, default_value = "sin")]
        kernel: KernelArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Cdf { .. } => "cdf",
            Command::Sample { .. } => "sample",
            Command::CondCdf { .. } => "cond-cdf",
            Command::Generate { .. } => "generate",
            Command::Impute { .. } => "impute",
            Command::Quantile { .. } => "quantile",
            Command::Mixing { .. } => "mixing",
            Command::SelectH { .. } => "select-h",
            Command::MedianCurve { .. } => "median-curve",
            Command::RateCheck { .. } => "rate-check",
        }
    }

    fn seed(&self) -> u64 {
        match self {
            Command::Cdf { io, .. }
            | Command::Sample { io, .. }
            | Command::CondCdf { io, .. }
            | Command::Generate { io, .. }
            | Command::Impute { io, .. }
            | Command::Quantile { io, .. }
            | Command::Mixing { io, .. }
            | Command::SelectH { io, .. }
            | Command::MedianCurve { io, .. } => io.seed,
            Command::RateCheck { .. } => 0,
        }
    }
}

/// The line echoed to standard error before a run: everything needed to
/// repeat it.
pub fn reproducibility_line(cli: &Cli) -> String {
    #[derive(Serialize)]
    struct Line<'a> {
        program: &'static str,
        version: &'static str,
        subcommand: &'static str,
        seed: u64,
        threads: usize,
        config: &'a Command,
    }
    let line = Line {
        program: "fourier-est",
        version: crate::VERSION,
        subcommand: cli.command.name(),
        seed: cli.command.seed(),
        threads: rayon::current_num_threads(),
        config: &cli.command,
    };
    format!("reproduce: {}", serde_json::to_string(&line).unwrap_or_default())
}

fn load(io: &Io) -> Result<Dataset> {
    let data = load_csv(&io.input, io.has_header)?;
    match io.transform {
        None => Ok(data),
        Some(Transform::LogReturn10) => {
            let columns = (0..data.cols())
                .map(|j| log_return_transform(&data.column(j)?))
                .collect::<Result<Vec<_>>>()?;
            let out = Dataset::from_columns(&columns)?;
            match data.labels() {
                Some(l) => out.with_labels(l.to_vec()),
                None => Ok(out),
            }
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn curve_text(curve: &CurveEstimate, format: Format) -> Result<String> {
    match format {
        Format::Json => curve.to_json().map(|s| s + "\n"),
        Format::Csv => Ok(curve.to_csv()),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    #[derive(Serialize)]
    struct Tagged<'a, T> {
        schema: &'static str,
        #[serde(flatten)]
        value: &'a T,
    }
    serde_json::to_string_pretty(&Tagged {
        schema: crate::curve::SCHEMA,
        value,
    })
    .map(|s| s + "\n")
    .map_err(|e| Error::Numeric(format!("cannot serialise output: {e}")))
}

fn column_csv(header: &str, values: &[f64]) -> String {
    let mut out = format!("{header}\n");
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    out
}

fn grid_or_default(grid: Option<GridSpec>, data: &[f64]) -> Vec<f64> {
    grid.map_or_else(|| default_grid(data), |g| g.values())
}

/// Executes one parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Cdf {
            io,
            col,
            r,
            kernel,
            grid,
            isotonic,
            format,
        } => {
            let params = EstimatorParams::with_r(*r).kernel((*kernel).into()).seed(io.seed);
            params.validate()?;
            let data = load(io)?;
            let y = data.column(data.column_index(col)?)?;
            let mut curve = cdf_estimate(&y, &grid_or_default(*grid, &y), &params)?;
            if *isotonic {
                curve = crate::curve::isotonic_projection(&curve);
            }
            write_output(io.output.as_deref(), &curve_text(&curve, *format)?)
        }
        Command::Sample {
            io,
            col,
            r,
            kernel,
            n_samples,
        } => {
            let params = EstimatorParams::with_r(*r).kernel((*kernel).into());
            params.validate()?;
            let data = load(io)?;
            let y = data.column(data.column_index(col)?)?;
            let eval = SincCdf::new(&y, *r, params.cyclic_kernel())?;
            let draws = sample_batch(&eval, *n_samples, io.seed)?;
            write_output(io.output.as_deref(), &column_csv("y", &draws))
        }
        Command::CondCdf {
            io,
            target,
            given,
            at,
            r1,
            r2,
            kernel,
            grid,
            isotonic,
            format,
        } => {
            let params = EstimatorParams::conditional(*r1, *r2).kernel((*kernel).into()).seed(io.seed);
            params.validate()?;
            let data = load(io)?;
            let target = data.column_index(target)?;
            let given = given.iter().map(|g| data.column_index(g)).collect::<Result<Vec<_>>>()?;
            let spec = ConditioningSpec::new(target, given, at.clone());
            let grid = grid_or_default(*grid, &data.column(target)?);
            let mut curve = conditional_cdf(&data, &spec, &grid, &params)?;
            if *isotonic {
                curve = crate::curve::isotonic_projection(&curve);
            }
            write_output(io.output.as_deref(), &curve_text(&curve, *format)?)
        }
        Command::Generate {
            io,
            n_samples,
            r1,
            r2,
            kernel,
        } => {
            let params = EstimatorParams::conditional(*r1, *r2).kernel((*kernel).into()).seed(io.seed);
            params.validate()?;
            let data = load(io)?;
            let out = sequential_generate(&data, *n_samples, &params)?;
            let header: Vec<String> = match data.labels() {
                Some(l) => l.to_vec(),
                None => (0..data.cols()).map(|j| format!("y{j}")).collect(),
            };
            let mut text = header.join(",") + "\n";
            for i in 0..out.rows() {
                let row: Vec<String> = out.row(i).iter().map(f64::to_string).collect();
                text.push_str(&row.join(","));
                text.push('\n');
            }
            write_output(io.output.as_deref(), &text)
        }
        Command::Impute {
            io,
            col,
            index,
            r1,
            r2,
            kernel,
            n_samples,
        } => {
            let params = EstimatorParams::conditional(*r1, *r2).kernel((*kernel).into()).seed(io.seed);
            params.validate()?;
            let data = load(io)?;
            let series = data.column(data.column_index(col)?)?;
            let draws = markov_impute(&series, *index, &params, *n_samples)?;
            write_output(io.output.as_deref(), &column_csv("y", &draws))
        }
        Command::Quantile {
            io,
            x_col,
            y_col,
            u,
            x,
            r,
            r1,
            r2,
            mc_samples,
            no_monotone,
            format,
        } => {
            let req = QuantileRequest {
                r1: r1.unwrap_or(*r),
                r2: r2.unwrap_or(*r),
                mc_samples: *mc_samples,
                seed: io.seed,
                monotone: !no_monotone,
                ..QuantileRequest::new(u.clone(), x.clone(), *r)
            };
            req.validate()?;
            let data = load(io)?;
            let data = data.select(&[data.column_index(x_col)?, data.column_index(y_col)?])?;
            let matrix = quantile_estimate(&data, &req)?;
            let text = match format {
                Format::Json => json(&matrix)?,
                Format::Csv => matrix.to_csv(),
            };
            write_output(io.output.as_deref(), &text)
        }
        Command::Mixing {
            io,
            mixing,
            x0,
            grid,
            no_isotonic,
            format,
        } => {
            let params = mixing.params(io.seed, !no_isotonic);
            params.validate()?;
            let data = mixing.data(&load(io)?)?;
            warn_variance(&params);
            let grid = grid_or_default(*grid, &data.column(1)?);
            let curve = mixing_cdf(&data, *x0, &grid, &params)?;
            write_output(io.output.as_deref(), &curve_text(&curve, *format)?)
        }
        Command::SelectH {
            io,
            mixing,
            h_grid,
            probe_x,
            probe_y,
            model,
        } => {
            let params = mixing.params(io.seed, true);
            params.validate()?;
            let data = mixing.data(&load(io)?)?;
            let probes = probe_x.zip(*probe_y);
            let report = bandwidth_profile(&data, &h_grid.values(), probes, (*model).into(), &params)?;
            write_output(io.output.as_deref(), &json(&report)?)
        }
        Command::MedianCurve {
            io,
            mixing,
            x_grid,
            format,
        } => {
            let params = mixing.params(io.seed, true);
            params.validate()?;
            let data = mixing.data(&load(io)?)?;
            warn_variance(&params);
            let curve = median_curve(&data, &x_grid.values(), &params)?;
            let text = match format {
                Format::Json => json(&curve)?,
                Format::Csv => {
                    let mut out = String::from("x,median\n");
                    for (x, m) in curve.x_grid.iter().zip(&curve.values) {
                        match m {
                            Some(m) => out.push_str(&format!("{x},{m}\n")),
                            None => out.push_str(&format!("{x},\n")),
                        }
                    }
                    out
                }
            };
            write_output(io.output.as_deref(), &text)
        }
        Command::RateCheck {
            function,
            y,
            r_grid,
            kernel,
            output,
        } => {
            let f: TestFunction = function.parse()?;
            let report = rate_check(f, *y, r_grid, crate::kernel::CyclicKernel::new((*kernel).into()))?;
            write_output(output.as_deref(), &json(&report)?)
        }
    }
}

fn warn_variance(params: &MixingParams) {
    if params.variance_warning() {
        eprintln!(
            "warning: R*h = {} exceeds {}; the estimate will be noisy",
            params.r * params.h,
            crate::mixing::WARN_RH
        );
    }
}

/// Machine-readable error report written to standard error.
pub fn error_json(e: &Error) -> String {
    serde_json::json!({
        "error": {
            "category": e.category().as_str(),
            "code": e.category().exit_code(),
            "message": e.to_string(),
        }
    })
    .to_string()
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        let built = if threads == 0 {
            Err(Error::param("--threads must be at least 1"))
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| Error::param(format!("cannot configure {threads} threads: {e}")))
        };
        if let Err(e) = built {
            eprintln!("{}", error_json(&e));
            return e.category().exit_code();
        }
    }
    eprintln!("{}", reproducibility_line(&cli));
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            e.category().exit_code()
        }
    }
}
