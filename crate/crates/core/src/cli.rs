//! Command-line front end: `sample`, `compare`, `gram`, `fit`, `predict`, `bench`.
//!
//! Exit codes: 0 on success, 2 for usage and validation errors, 1 for
//! runtime failures. Error messages are printed as `error: <message>`.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::dist::RandomStream;
use crate::error::Error;
use crate::kernels::{Family, Kernel, KernelSpec, Mode, SigmaMatrix};
use crate::rff::{self, FeatureMap, RidgeModel};
use crate::spectral::{self, ProjectionSet};

pub const THREADS_ENV: &str = "SPECTRAL_RFF_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(Error::Io(_) | Error::Domain { .. }) => 1,
            CliError::Lib(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "spectral-rff", version, about = "Random Fourier features for stable-mixture kernels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample projection vectors and write them as CSV.
    Sample(SampleArgs),
    /// Compare the analytic kernel with its random-feature estimate on a grid.
    Compare(CompareArgs),
    /// Eigenvalue summary of an analytic or random-feature Gram matrix.
    Gram(GramArgs),
    /// Fit ridge regression on random features.
    Fit(FitArgs),
    /// Predict with a fitted model.
    Predict(PredictArgs),
    /// Report variate counts and sampling throughput for both modes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// Family (exponential_power, generalized_cauchy, generalized_matern, kummer, beta, tricomi)
    /// or preset (laplace, gaussian, matern, power, student, rational_quadratic, cauchy_generalized).
    #[arg(long)]
    pub kernel: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lengthscale: f64,
    /// File holding a symmetric d x d matrix (rows on lines, comma or space separated).
    #[arg(long)]
    pub sigma: Option<PathBuf>,
    #[arg(long, default_value = "isotropic")]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub features: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// 1 or 2.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub features: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// lo:hi:n, per axis.
    #[arg(long, default_value = "-5:5:201", allow_hyphen_values = true)]
    pub grid: String,
    /// Read projections from a file written by `sample` instead of sampling.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// CSV of points, one per row.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Number of uniform points to generate when --points is absent.
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Box lo:hi for generated points.
    #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
    pub range: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the random-feature Gram matrix instead of the analytic one.
    #[arg(long)]
    pub approx: bool,
    #[arg(long, default_value_t = 1000)]
    pub features: usize,
    /// Also write the matrix as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Training CSV: header row, feature columns, then the target column.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Target column name (default: last column).
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, default_value_t = 500)]
    pub features: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub ridge: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// CSV of inputs; an extra trailing column (such as a training target) is ignored.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "generalized_cauchy")]
    pub kernel: String,
    #[arg(long, default_value_t = 1.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.5)]
    pub gamma: f64,
    /// Comma-separated dimensions.
    #[arg(long, default_value = "1,10,100")]
    pub dims: String,
    #[arg(long, default_value_t = 10_000)]
    pub features: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Omit wall-clock throughput so the report is reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

/// Builds a kernel spec from flags. Presets fill their own parameters; explicit
/// flags override them.
pub fn kernel_spec(args: &KernelArgs) -> CliResult<KernelSpec<f64>> {
    let name = args.kernel.as_str();
    let mut spec = match name {
        "laplace" => KernelSpec::laplace(),
        "gaussian" => KernelSpec::gaussian(),
        "matern" => KernelSpec::matern(args.beta.unwrap_or(1.5)),
        "power" => KernelSpec::power(args.alpha.unwrap_or(1.0)),
        "student" | "rational_quadratic" => KernelSpec::student(args.beta.unwrap_or(1.0)),
        "cauchy_generalized" => KernelSpec::cauchy_generalized(args.alpha.unwrap_or(1.0), args.beta.unwrap_or(1.0), false),
        family => {
            let family: Family = family.parse().map_err(|_| usage(format!("unknown kernel `{name}`")))?;
            let alpha = args.alpha.ok_or_else(|| usage(format!("--alpha is required for {family}")))?;
            KernelSpec::family(family, alpha, args.beta, args.gamma)
        }
    };
    let is_family = name.parse::<Family>().is_ok();
    if !is_family {
        if let Some(a) = args.alpha {
            spec.alpha = a;
        }
        if args.gamma.is_some() {
            return Err(usage(format!("preset `{name}` takes no --gamma")));
        }
        if args.beta.is_some() && spec.beta.is_none() {
            return Err(usage(format!("preset `{name}` takes no --beta")));
        }
    }
    if let Some(l) = args.lambda {
        spec.lambda = Some(l);
    }
    spec.lengthscale = args.lengthscale;
    spec.mode = args.mode.parse::<Mode>()?;
    if let Some(path) = &args.sigma {
        spec.sigma = Some(SigmaMatrix::read(path)?);
    }
    Ok(spec)
}

fn resolve_dim(kernel: &Kernel<f64>, dim: Option<usize>) -> CliResult<usize> {
    match (kernel.required_dim(), dim) {
        (Some(req), Some(d)) if req != d => Err(CliError::Lib(Error::DimensionMismatch { expected: req, got: d })),
        (Some(req), _) => Ok(req),
        (None, Some(0)) => Err(usage("--dim must be at least 1")),
        (None, Some(d)) => Ok(d),
        (None, None) => Ok(1),
    }
}

fn positive_features(m: usize) -> CliResult<usize> {
    if m == 0 {
        Err(usage("--features must be at least 1"))
    } else {
        Ok(m)
    }
}

/// `lo:hi:n` with n >= 2.
pub fn parse_grid(text: &str) -> CliResult<(f64, f64, usize)> {
    let bad = || usage(format!("--grid expects lo:hi:n with n >= 2, got `{text}`"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n < 2 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    Ok((lo, hi, n))
}

fn parse_range(text: &str) -> CliResult<(f64, f64)> {
    let bad = || usage(format!("--range expects lo:hi, got `{text}`"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo < hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn grid_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

/// A numeric CSV table; the first line is a header unless every field parses as a number.
pub struct Table {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_table(path: &Path) -> CliResult<Table> {
    let reader = BufReader::new(File::open(path)?);
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let row = match parsed {
            Ok(row) if row.iter().all(|x| x.is_finite()) => row,
            _ if header.is_none() && rows.is_empty() => {
                header = Some(fields.iter().map(|s| s.to_string()).collect::<Vec<_>>());
                width = Some(fields.len());
                continue;
            }
            _ => {
                let bad = fields.iter().find(|f| !f.parse::<f64>().is_ok_and(f64::is_finite)).unwrap_or(&"");
                return Err(Error::Parse { line: lineno, msg: format!("not a finite number: `{bad}`") }.into());
            }
        };
        match width {
            Some(w) if w != row.len() => {
                return Err(Error::Parse { line: lineno, msg: format!("expected {w} columns, got {}", row.len()) }.into())
            }
            None => width = Some(row.len()),
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Empty("data rows").into());
    }
    Ok(Table { header, rows })
}

fn open_out(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_sample(args: &SampleArgs) -> CliResult<()> {
    let kernel = kernel_spec(&args.kernel)?.validate()?;
    let dim = resolve_dim(&kernel, args.dim)?;
    let pset = spectral::sample_projections(&kernel, dim, positive_features(args.features)?, args.seed, args.stream)?;
    let mut out = open_out(args.out.as_deref())?;
    pset.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_compare(args: &CompareArgs) -> CliResult<()> {
    let kernel = kernel_spec(&args.kernel)?.validate()?;
    let dim = resolve_dim(&kernel, args.dim)?;
    if dim > 2 {
        return Err(usage("compare supports --dim 1 or 2"));
    }
    let (lo, hi, n) = parse_grid(&args.grid)?;
    let pset = match &args.input {
        Some(path) => {
            let p = ProjectionSet::<f64>::read_csv(BufReader::new(File::open(path)?))?;
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() }.into());
            }
            p
        }
        None => spectral::sample_projections(&kernel, dim, positive_features(args.features)?, args.seed, args.stream)?,
    };
    let axis = grid_axis(lo, hi, n);
    let grid: Vec<Vec<f64>> = if dim == 1 {
        axis.iter().map(|&r| vec![r]).collect()
    } else {
        axis.iter().flat_map(|&a| axis.iter().map(move |&b| vec![a, b])).collect()
    };
    let report = rff::error_report(&kernel, &pset, &grid)?;
    let mut out = open_out(args.out.as_deref())?;
    writeln!(out, "{}", if dim == 1 { "r,analytic,approx,diff" } else { "u1,u2,analytic,approx,diff" })?;
    for p in &report.points {
        let coords: Vec<String> = p.u.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{},{},{},{}", coords.join(","), p.analytic, p.approx, p.diff)?;
    }
    out.flush()?;
    eprintln!("sup_error={} rms_error={} band={} features={}", report.sup, report.rms, report.band, report.features);
    Ok(())
}

fn cmd_gram(args: &GramArgs) -> CliResult<()> {
    let kernel = kernel_spec(&args.kernel)?.validate()?;
    let points: Vec<Vec<f64>> = match &args.points {
        Some(path) => read_table(path)?.rows,
        None => {
            let dim = resolve_dim(&kernel, args.dim)?;
            if args.n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let (lo, hi) = parse_range(&args.range)?;
            let mut stream = RandomStream::new(args.seed, 1);
            (0..args.n).map(|_| (0..dim).map(|_| lo + (hi - lo) * stream.uniform_open()).collect()).collect()
        }
    };
    let summary = if args.approx {
        let dim = points[0].len();
        let pset = spectral::sample_projections(&kernel, dim, positive_features(args.features)?, args.seed, 0)?;
        FeatureMap::new(pset).gram(&points)?
    } else {
        kernel.gram(&points)?
    };
    if let Some(path) = &args.out {
        let mut out = open_out(Some(path))?;
        for row in summary.matrix.chunks(summary.n) {
            writeln!(out, "{}", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))?;
        }
        out.flush()?;
    }
    println!(
        "n={} kind={} min_eigenvalue={:e} max_eigenvalue={:e}",
        summary.n,
        if args.approx { "approx" } else { "analytic" },
        summary.min_eigenvalue,
        summary.max_eigenvalue
    );
    Ok(())
}

fn split_training(table: Table, target: Option<&str>) -> CliResult<(Vec<Vec<f64>>, Vec<f64>)> {
    let width = table.rows[0].len();
    let col = match (target, &table.header) {
        (Some(name), Some(header)) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| usage(format!("target column `{name}` not found in header")))?,
        (Some(name), None) => return Err(usage(format!("target column `{name}` requested but the file has no header"))),
        (None, _) => width - 1,
    };
    if width < 2 {
        return Err(usage("training data needs feature columns followed by a target column"));
    }
    let mut x = Vec::with_capacity(table.rows.len());
    let mut y = Vec::with_capacity(table.rows.len());
    for mut row in table.rows {
        y.push(row.remove(col));
        x.push(row);
    }
    Ok((x, y))
}

fn cmd_fit(args: &FitArgs) -> CliResult<()> {
    let kernel = kernel_spec(&args.kernel)?.validate()?;
    let (x, y) = split_training(read_table(&args.input)?, args.target.as_deref())?;
    let dim = resolve_dim(&kernel, Some(x[0].len()))?;
    let pset = spectral::sample_projections(&kernel, dim, positive_features(args.features)?, args.seed, args.stream)?;
    let model = rff::krr_fit(&kernel, FeatureMap::new(pset), &x, &y, args.ridge)?;
    let fitted = rff::krr_predict(&model, &x)?;
    model.save(&args.out)?;
    println!("n={} dim={} features={} train_rmse={}", x.len(), dim, args.features, rff::rmse(&fitted, &y));
    Ok(())
}

fn cmd_predict(args: &PredictArgs) -> CliResult<()> {
    let model = RidgeModel::<f64>::load(&args.model)?;
    let d = model.input_dim();
    let table = read_table(&args.input)?;
    let width = table.rows[0].len();
    if width != d && width != d + 1 {
        return Err(Error::DimensionMismatch { expected: d, got: width }.into());
    }
    let x: Vec<Vec<f64>> = table.rows.into_iter().map(|mut r| {
        r.truncate(d);
        r
    }).collect();
    let pred = rff::krr_predict(&model, &x)?;
    let mut out = open_out(args.out.as_deref())?;
    writeln!(out, "prediction")?;
    for p in pred {
        writeln!(out, "{p}")?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    let dims: Vec<usize> = args
        .dims
        .split(',')
        .map(|s| s.trim().parse::<usize>().ok().filter(|&d| d > 0))
        .collect::<Option<_>>()
        .ok_or_else(|| usage(format!("--dims expects positive integers, got `{}`", args.dims)))?;
    let family: Family = args.kernel.parse().map_err(|_| usage(format!("bench takes a family name, got `{}`", args.kernel)))?;
    let base = KernelSpec::family(
        family,
        args.alpha,
        (family != Family::ExponentialPower).then_some(args.beta),
        matches!(family, Family::Kummer | Family::Beta | Family::Tricomi).then_some(args.gamma),
    );
    let m = positive_features(args.features)?;
    let iso = base.clone().validate()?;
    let ten = base.with_mode(Mode::Tensor).validate()?;
    println!("kernel={} alpha={} features={}", family, args.alpha, m);
    for d in dims {
        let t0 = Instant::now();
        let (_, ci) = spectral::sample_projections_counted(&iso, d, m, args.seed, 0)?;
        let ti = t0.elapsed().as_secs_f64();
        let t1 = Instant::now();
        let (_, ct) = spectral::sample_projections_counted(&ten, d, m, args.seed, 0)?;
        let tt = t1.elapsed().as_secs_f64();
        let (pi, pt) = (ci.total() as f64 / m as f64, ct.total() as f64 / m as f64);
        let mut line = format!("d={d} isotropic_variates={pi} tensor_variates={pt} ratio={:.4}", pt / pi);
        if !args.no_timing {
            line += &format!(" isotropic_rows_per_sec={:.0} tensor_rows_per_sec={:.0}", m as f64 / ti, m as f64 / tt);
        }
        println!("{line}");
    }
    Ok(())
}

fn configure_threads() -> CliResult<()> {
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Lib(Error::domain("threads", e.to_string())))?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<()> {
    configure_threads()?;
    match &cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Gram(a) => cmd_gram(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// Parses `std::env::args`, runs the command and returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
