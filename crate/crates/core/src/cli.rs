//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage or input errors, 3 for numerical
//! failures. [`run`] takes explicit writers so the commands can be driven
//! from tests.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::figures::{figure_dataset, FigureError, FigureOptions};
use crate::frontier::{find_above_werner, scan_simplex, FrontierError, RngStream, SearchConfig, SearchSpace};
use crate::linalg::DensityMatrix;
use crate::measures::{
    curve_lines, linear_entropy, negativity, ppt_by_purity, werner_ceiling, werner_state, LINES_CURVE_MAX_ENTROPY,
};
use crate::output::{fmt_sig, read_state, write_state, Dataset, StateFileError, Value};
use crate::symmetry::{canonical_representative, classify_subset, orbit, PointSet};
use crate::weyl::{bell_coefficients, named_family, simplex_state, Family, ModIndex, ProbabilityVector9};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Probabilities must sum to one within this before renormalization.
const SUM_TOLERANCE: f64 = 1e-9;
/// Deviations above this are renormalized with a warning.
const RENORMALIZE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "magic-simplex", version, about = "Entanglement of Bell-diagonal two-qutrit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Negativity, linear entropy, purity and Bell coefficients of a state.
    Measure(MeasureArgs),
    /// Equivalence class, orbit size and canonical form of 1 to 4 grid points `m,n`.
    Classify {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Entropy and negativity of uniformly sampled Bell-diagonal states, as CSV.
    Scan {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hill-climbing search for states above the Werner curve.
    Frontier {
        #[arg(long, value_name = "LO,HI")]
        band: String,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long)]
        seed: u64,
        /// Restrict the search to Bell-diagonal states.
        #[arg(long)]
        bell_diagonal: bool,
        /// Where to write the best state found.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the accepted points as CSV.
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Data behind figure 1, 2, 3 or 4, as CSV.
    Figure {
        id: u32,
        #[arg(long, default_value_t = 60)]
        resolution: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Simplex samples in figure 4.
        #[arg(long, default_value_t = 2000)]
        count: usize,
        /// Search iterations per entropy band in figure 4.
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Bell index of the Werner state's entangled component.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    alpha: String,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct SpecArgs {
    #[arg(long, value_name = "P")]
    werner: Option<f64>,
    #[arg(long, value_name = "P1,P2")]
    pair: Option<String>,
    #[arg(long, value_name = "P1,P2,P3")]
    line: Option<String>,
    #[arg(long, value_name = "P1,P2,P3")]
    triangle: Option<String>,
    #[arg(long, value_name = "P1,..,P4")]
    rect: Option<String>,
    #[arg(long, value_name = "P1,..,P4")]
    gamma: Option<String>,
    /// Nine Bell weights in the order (0,0),(0,1),..,(2,2).
    #[arg(long, value_name = "P1,..,P9")]
    simplex: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
}

/// A state described on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Simplex(Vec<f64>),
    Family(Family, Vec<f64>),
    Werner { p: f64, alpha: ModIndex },
    File(PathBuf),
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

impl From<FrontierError> for CliError {
    fn from(e: FrontierError) -> Self {
        match e {
            FrontierError::Numerical { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<FigureError> for CliError {
    fn from(e: FigureError) -> Self {
        match e {
            FigureError::InvalidFigure(_) | FigureError::MissingSeed | FigureError::ZeroResolution => {
                CliError::Usage(e.to_string())
            }
            FigureError::Frontier(f) => f.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Parses comma-separated probabilities, checks the count and the sum, and
/// renormalizes small deviations with a warning on `warn`.
pub fn parse_probabilities(text: &str, expected: usize, warn: &mut dyn Write) -> Result<Vec<f64>, String> {
    let mut probs = Vec::with_capacity(expected);
    for field in text.split(',') {
        let x: f64 = field.trim().parse().map_err(|_| format!("`{field}` is not a number"))?;
        if !x.is_finite() || x < 0.0 {
            return Err(format!("probability `{field}` must be finite and nonnegative"));
        }
        probs.push(x);
    }
    if probs.len() != expected {
        return Err(format!("expected {expected} probabilities, got {}", probs.len()));
    }
    let sum: f64 = probs.iter().sum();
    let deviation = (sum - 1.0).abs();
    if deviation > SUM_TOLERANCE {
        return Err(format!("probabilities sum to {}, not 1", fmt_sig(sum)));
    }
    if deviation > RENORMALIZE_THRESHOLD {
        let _ = writeln!(warn, "warning: probabilities sum to {sum:e}; renormalizing");
        probs.iter_mut().for_each(|x| *x /= sum);
    }
    Ok(probs)
}

fn parse_band(text: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || CliError::Usage(format!("band must be `lo,hi`, got `{text}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo = parts[0].trim().parse().map_err(|_| bad())?;
    let hi = parts[1].trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn spec_from_args(args: &MeasureArgs, warn: &mut dyn Write) -> Result<StateSpec, CliError> {
    let s = &args.spec;
    let probs = |text: &str, n: usize, warn: &mut dyn Write| parse_probabilities(text, n, warn).map_err(CliError::Usage);
    if let Some(p) = s.werner {
        let alpha: ModIndex = args.alpha.parse().map_err(CliError::Usage)?;
        return Ok(StateSpec::Werner { p, alpha });
    }
    let families = [
        (&s.pair, Family::Pair),
        (&s.line, Family::Line),
        (&s.triangle, Family::Triangle),
        (&s.rect, Family::Rectangle),
        (&s.gamma, Family::Gamma),
    ];
    for (text, family) in families {
        if let Some(text) = text {
            return Ok(StateSpec::Family(family, probs(text, family.support_size(), warn)?));
        }
    }
    if let Some(text) = &s.simplex {
        return Ok(StateSpec::Simplex(probs(text, 9, warn)?));
    }
    if let Some(path) = &s.file {
        return Ok(StateSpec::File(path.clone()));
    }
    Err(CliError::Usage("no state given".into()))
}

fn load_state(path: &Path) -> Result<DensityMatrix<f64>, CliError> {
    let file = File::open(path).map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
    read_state(BufReader::new(file)).map_err(|e| match e {
        StateFileError::Invalid(inner) => CliError::Usage(format!("{}: {inner}", path.display())),
        other => CliError::Usage(format!("{}: {other}", path.display())),
    })
}

impl StateSpec {
    fn describe(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|&x| fmt_sig(x)).collect::<Vec<_>>().join(",");
        match self {
            StateSpec::Simplex(p) => format!("simplex {}", join(p)),
            StateSpec::Family(f, p) => format!("{f} {}", join(p)),
            StateSpec::Werner { p, alpha } => format!("werner p={} alpha={alpha}", fmt_sig(*p)),
            StateSpec::File(path) => format!("file {}", path.display()),
        }
    }

    fn build(&self) -> Result<DensityMatrix<f64>, CliError> {
        let usage = |e: &dyn std::fmt::Display| CliError::Usage(e.to_string());
        match self {
            StateSpec::Simplex(p) => {
                let arr: [f64; 9] = p.as_slice().try_into().map_err(|_| CliError::Usage("need 9 probabilities".into()))?;
                let pv = ProbabilityVector9::new(arr).map_err(|e| usage(&e))?;
                Ok(simplex_state(&pv))
            }
            StateSpec::Family(f, p) => named_family(*f, p).map_err(|e| usage(&e)),
            StateSpec::Werner { p, alpha } => werner_state(*p, *alpha).map_err(|e| usage(&e)),
            StateSpec::File(path) => load_state(path),
        }
    }
}

fn write_output(path: &Option<PathBuf>, contents: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => Ok(out.write_all(contents.as_bytes())?),
    }
}

fn cmd_measure(args: &MeasureArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = spec_from_args(args, err)?;
    let rho = spec.build()?;
    let n = negativity(&rho).map_err(numerical)?;
    let coeffs = bell_coefficients(&rho);
    let coeff_text: Vec<String> = coeffs.as_array().iter().map(|&x| fmt_sig(x)).collect();
    writeln!(out, "state = {}", spec.describe())?;
    writeln!(out, "negativity = {}", fmt_sig(n))?;
    writeln!(out, "linear_entropy = {}", fmt_sig(linear_entropy(&rho)))?;
    writeln!(out, "purity = {}", fmt_sig(rho.purity()))?;
    writeln!(out, "ppt_by_purity = {}", ppt_by_purity(&rho))?;
    writeln!(out, "bell_coefficients = {}", coeff_text.join(","))?;
    Ok(())
}

fn cmd_classify(points: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let parsed: Vec<ModIndex> = points.iter().map(|p| p.parse().map_err(CliError::Usage)).collect::<Result<_, _>>()?;
    let set = PointSet::from_points(&parsed);
    if set.len() != parsed.len() {
        return Err(CliError::Usage("points must be distinct".into()));
    }
    let class = classify_subset(set).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out, "points = {set}")?;
    writeln!(out, "class = {class}")?;
    writeln!(out, "orbit_size = {}", orbit(set).len())?;
    writeln!(out, "canonical = {}", canonical_representative(set))?;
    Ok(())
}

fn cmd_scan(count: usize, seed: u64, workers: usize, path: &Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let records = scan_simplex(seed, count, workers.max(1))?;
    let mut d = Dataset::new(vec!["seed", "index", "s", "n"]);
    let (mut max_n, mut max_margin) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let (mut upper, mut lower) = (0usize, 0usize);
    for r in &records {
        let p = r.point;
        d.push(vec![Value::Int(r.seed_path.seed), Value::Int(r.seed_path.stream), Value::Num(p.s), Value::Num(p.n)]);
        max_n = max_n.max(p.n);
        max_margin = max_margin.max(p.werner_margin());
        upper += usize::from(p.n > werner_ceiling(p.s) + 1e-9);
        if p.s <= LINES_CURVE_MAX_ENTROPY {
            lower += usize::from(p.n < curve_lines(p.s).map_err(numerical)? - 1e-9);
        }
    }
    write_output(path, &d.to_csv(), out)?;
    let summary: &mut dyn Write = if path.is_some() { out } else { err };
    writeln!(summary, "records = {}", records.len())?;
    writeln!(summary, "max_n = {}", fmt_sig(max_n))?;
    writeln!(summary, "max_werner_margin = {}", fmt_sig(max_margin))?;
    writeln!(summary, "violations = {}", upper + lower)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_frontier(
    band: &str,
    budget: usize,
    seed: u64,
    bell_diagonal: bool,
    state_path: &Option<PathBuf>,
    dataset_path: &Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut config = SearchConfig::new(parse_band(band)?, budget);
    if bell_diagonal {
        config = config.bell_diagonal();
    }
    let result = find_above_werner(&RngStream::new(seed, 0), &config)?;
    if let Some(path) = state_path {
        let file = File::create(path).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        write_state(&result.state, io::BufWriter::new(file))?;
    }
    if let Some(path) = dataset_path {
        let mut d = Dataset::new(vec!["iteration", "s", "n", "margin", "in_band"]);
        for a in &result.accepted {
            d.push(vec![
                Value::Int(a.iteration as u64),
                Value::Num(a.point.s),
                Value::Num(a.point.n),
                Value::Num(a.margin),
                Value::Text(if a.in_band { "true" } else { "false" }),
            ]);
        }
        write_output(&Some(path.clone()), &d.to_csv(), out)?;
    }
    let space = match config.space {
        SearchSpace::General => "general",
        SearchSpace::BellDiagonal => "bell_diagonal",
    };
    writeln!(out, "band = {},{}", fmt_sig(config.band.0), fmt_sig(config.band.1))?;
    writeln!(out, "space = {space}")?;
    writeln!(out, "iterations = {}", result.iterations)?;
    writeln!(out, "s = {}", fmt_sig(result.point.s))?;
    writeln!(out, "n = {}", fmt_sig(result.point.n))?;
    writeln!(out, "margin = {}", fmt_sig(result.margin))?;
    writeln!(out, "in_band = {}", result.in_band(&config))?;
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Measure(args) => cmd_measure(&args, out, err),
        Command::Classify { points } => cmd_classify(&points, out),
        Command::Scan { count, seed, workers, out: path } => cmd_scan(count, seed, workers, &path, out, err),
        Command::Frontier { band, budget, seed, bell_diagonal, out: path, dataset } => {
            cmd_frontier(&band, budget, seed, bell_diagonal, &path, &dataset, out)
        }
        Command::Figure { id, resolution, seed, count, budget, workers, out: path } => {
            let opts = FigureOptions { resolution, seed, simplex_count: count, search_budget: budget, workers: workers.max(1) };
            let d = figure_dataset(id, &opts)?;
            write_output(&path, &d.to_csv(), out)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}
