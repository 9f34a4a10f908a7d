//! Command-line front end for `gasket-spectra`.
//!
//! [`run`] parses arguments and writes to the given streams, so the whole
//! interface is testable in-process. Exit codes: 0 success, 1 verification
//! or computation failure, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use gasket_spectra::dynamics::{parse_rational, preimage_tree, MapKind};
use gasket_spectra::eigen::{full_basis_with, spectrum, BASIS_MAX_LEVEL};
use gasket_spectra::io;
use gasket_spectra::laplacian::laplacian_matrix;
use gasket_spectra::verify::{oracle_spectrum, run_suite, spectra_match, Suite, SuiteConfig, SPECTRUM_TOLERANCE};
use gasket_spectra::{build_graph, Error, Execution, Family};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gasket", version, about = "Spectra of Sierpinski gasket and Hanoi towers graphs")]
pub struct Cli {
    /// Worker threads for independent tasks; 1 runs everything sequentially.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyArg {
    G,
    H,
    J,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::G => Family::G,
            FamilyArg::H => Family::H,
            FamilyArg::J => Family::J,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BasisFamilyArg {
    G,
    H,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GraphFormat {
    Edgelist,
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SpectrumFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TreeFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MapArg {
    R2,
    R3,
    Rg,
    Rh,
}

impl From<MapArg> for MapKind {
    fn from(m: MapArg) -> MapKind {
        match m {
            MapArg::R2 => MapKind::R2,
            MapArg::R3 => MapKind::R3,
            MapArg::Rg => MapKind::RG,
            MapArg::Rh => MapKind::RH,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SuiteArg {
    All,
    Similarity,
    Spectrum,
    Basis,
    Graphs,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Similarity => Suite::Similarity,
            SuiteArg::Spectrum => Suite::Spectrum,
            SuiteArg::Basis => Suite::Basis,
            SuiteArg::Graphs => Suite::Graphs,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a graph.
    Build {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
        /// Also write the dense Laplacian matrix as CSV.
        #[arg(long, value_name = "PATH")]
        laplacian_csv: Option<PathBuf>,
    },
    /// Print the spectrum with multiplicities.
    Spectrum {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: SpectrumFormat,
        /// Compare against the dense eigensolver and fail on mismatch.
        #[arg(long)]
        verify: bool,
    },
    /// Write eigenfunctions as CSV files plus a JSON bundle.
    Eigenbasis {
        #[arg(long, value_enum)]
        family: BasisFamilyArg,
        #[arg(long)]
        level: usize,
        /// Index into the spectrum listing; all entries when omitted.
        #[arg(long)]
        eigenvalue_index: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a preimage tree of a decimation map.
    Decimate {
        #[arg(long, value_enum)]
        map: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: TreeFormat,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 4)]
        max_level: usize,
        /// Override every check's tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Print the report as JSON instead of one line per check.
        #[arg(long)]
        json: bool,
    },
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Ok,
    Failed,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LevelTooLarge { .. }
            | Error::LevelTooSmall { .. }
            | Error::DepthTooLarge { .. }
            | Error::DimensionCap { .. }
            | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let (result, stdout, stderr) = with_threads(cli.threads as usize, |exec| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let r = dispatch(&cli.command, exec, &mut o, &mut e);
        (r, o, e)
    });
    let _ = out.write_all(&stdout);
    let _ = err.write_all(&stderr);
    match result {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Failed) => EXIT_FAILURE,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(threads: usize, f: impl FnOnce(Execution) -> R + Send) -> R {
    if threads <= 1 {
        return f(Execution::Sequential);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| f(Execution::Parallel)),
        Err(_) => f(Execution::Sequential),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R>(_threads: usize, f: impl FnOnce(Execution) -> R) -> R {
    f(Execution::Sequential)
}

fn dispatch(cmd: &Command, exec: Execution, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome, Failure> {
    match cmd {
        Command::Build {
            family,
            level,
            format,
            laplacian_csv,
        } => build(Family::from(*family), *level, *format, laplacian_csv.as_deref(), out),
        Command::Spectrum {
            family,
            level,
            format,
            verify,
        } => spectrum_cmd(Family::from(*family), *level, *format, *verify, out, err),
        Command::Eigenbasis {
            family,
            level,
            eigenvalue_index,
            out: dir,
        } => {
            let family = match family {
                BasisFamilyArg::G => Family::G,
                BasisFamilyArg::H => Family::H,
            };
            eigenbasis(family, *level, *eigenvalue_index, dir, exec, out)
        }
        Command::Decimate {
            map,
            seed,
            depth,
            format,
        } => decimate(MapKind::from(*map), seed, *depth, *format, out),
        Command::Verify {
            suite,
            max_level,
            tol,
            json,
        } => verify(Suite::from(*suite), *max_level, *tol, *json, exec, out),
    }
}

fn build(
    family: Family,
    level: usize,
    format: GraphFormat,
    laplacian_csv: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Outcome, Failure> {
    let graph = build_graph(family, level)?;
    match format {
        GraphFormat::Edgelist => out.write_all(io::graph_edgelist(&graph).as_bytes())?,
        GraphFormat::Dot => out.write_all(io::graph_dot(&graph).as_bytes())?,
        GraphFormat::Json => writeln!(out, "{}", pretty(&io::graph_json(&graph)))?,
    }
    if let Some(path) = laplacian_csv {
        fs::write(path, laplacian_matrix(&graph).to_csv())?;
    }
    Ok(Outcome::Ok)
}

fn spectrum_cmd(
    family: Family,
    level: usize,
    format: SpectrumFormat,
    verify: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Outcome, Failure> {
    let entries = spectrum(family, level)?;
    match format {
        SpectrumFormat::Json => writeln!(out, "{}", pretty(&io::spectrum_json(family, level, &entries)))?,
        SpectrumFormat::Csv => out.write_all(io::spectrum_csv(&entries).as_bytes())?,
    }
    if !verify {
        return Ok(Outcome::Ok);
    }
    let oracle = oracle_spectrum(&build_graph(family, level)?)?;
    let report = spectra_match(&entries, &oracle, SPECTRUM_TOLERANCE)?;
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    writeln!(
        err,
        "{verdict} oracle {family}_{level}: {} eigenvalues, max deviation {:.3e}",
        report.count, report.max_deviation
    )?;
    Ok(if report.passed { Outcome::Ok } else { Outcome::Failed })
}

fn eigenbasis(
    family: Family,
    level: usize,
    index: Option<usize>,
    dir: &Path,
    exec: Execution,
    out: &mut dyn Write,
) -> Result<Outcome, Failure> {
    if level > BASIS_MAX_LEVEL {
        return Err(Failure::Usage(format!(
            "eigenbases are built up to level {BASIS_MAX_LEVEL}, got {level}"
        )));
    }
    let graph = build_graph(family, level)?;
    let bases = full_basis_with(family, level, exec)?;
    let selected: Vec<(usize, _)> = match index {
        Some(k) if k >= bases.len() => {
            return Err(Failure::Usage(format!(
                "eigenvalue index {k} out of range: {family}_{level} has {} spectrum entries",
                bases.len()
            )))
        }
        Some(k) => vec![(k, &bases[k])],
        None => bases.iter().enumerate().collect(),
    };
    fs::create_dir_all(dir)?;
    let stem = format!("{}{level}", family.to_string().to_lowercase());
    for &(k, basis) in &selected {
        for (i, f) in basis.functions.iter().enumerate() {
            let name = format!("{stem}_e{k}_b{i}.csv");
            fs::write(dir.join(&name), io::eigenfunction_csv(&graph, f))?;
        }
        writeln!(out, "{k}\t{:?}\t{}", basis.eigenvalue(), basis.len())?;
    }
    let bundle = io::basis_bundle_json(&graph, &selected);
    fs::write(dir.join(format!("{stem}_basis.json")), pretty(&bundle) + "\n")?;
    Ok(Outcome::Ok)
}

fn decimate(map: MapKind, seed: &str, depth: usize, format: TreeFormat, out: &mut dyn Write) -> Result<Outcome, Failure> {
    let seed = parse_rational(seed)?;
    let levels = preimage_tree(map, seed, depth)?;
    match format {
        TreeFormat::Text => out.write_all(io::decimation_tree_text(&levels).as_bytes())?,
        TreeFormat::Json => writeln!(out, "{}", pretty(&io::decimation_tree_json(&levels)))?,
    }
    Ok(Outcome::Ok)
}

fn verify(
    suite: Suite,
    max_level: usize,
    tol: Option<f64>,
    json: bool,
    exec: Execution,
    out: &mut dyn Write,
) -> Result<Outcome, Failure> {
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Usage(format!("tolerance must be positive, got {t}")));
        }
    }
    let config = SuiteConfig {
        max_level,
        tolerance: tol,
        exec,
    };
    let report = run_suite(suite, &config);
    if json {
        writeln!(out, "{}", pretty(&serde_json::to_value(&report).unwrap_or_default()))?;
    } else {
        for c in &report.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict} {} {}: {}", c.suite, c.name, c.detail)?;
        }
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        writeln!(out, "{} checks, {failed} failed", report.checks.len())?;
    }
    Ok(if report.passed { Outcome::Ok } else { Outcome::Failed })
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default()
}
