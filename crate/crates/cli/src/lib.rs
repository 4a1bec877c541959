//! `glt` command-line harness.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use glt_core::analysis::{
    acs_certificate, canonical_family, case_default_suite, case_rearrangement, default_ms, default_ns, hat_suite,
    rearrangement_compare_with, table2, weyl_compare, DistributionReport, Mode, Table2Row, TestFunction,
    DEFAULT_QUAD_RES, TABLE2_R,
};
use glt_core::builders::{default_resolver, list_cases, CaseSpec, DiscretizationCase, CASE_NAMES};
use glt_core::symbol::Coefficient;
use glt_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Nodes of a `random` coefficient table.
const RANDOM_NODES: usize = 9;

#[derive(Parser, Debug)]
#[command(name = "glt", version, about = "Spectral distribution experiments for FD/FE matrix sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List registered cases with their symbols and normalizations.
    List,
    /// Sorted eigenvalues (or singular values) of the scaled matrices.
    Spectrum(RunArgs),
    /// Weyl functionals, rearrangement gap and outliers per n.
    Compare(CompareArgs),
    /// Reproduce the rearrangement gap table for a(x) = x e^{-x}.
    Table2(Table2Args),
    /// Evaluate a family of inequality certificates.
    Certify(CertifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sigma,
    Lambda,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Sigma => Mode::Sigma,
            ModeArg::Lambda => Mode::Lambda,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Case spec, `name[:key=value,...]`, e.g. `fd_t7:q=2` or `fe_t1:a=exp,c=x`.
    #[arg(long)]
    pub case: String,
    /// Overrides `a`: a preset, `csv:PATH` or `random` (needs --seed).
    #[arg(long)]
    pub coeff: Option<String>,
    /// Comma-separated ascending sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value = "lambda")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for `random` coefficients.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Rearrangement resolution (lattice points per axis).
    #[arg(long, default_value_t = 1000)]
    pub r: usize,
    #[arg(long, default_value_t = DEFAULT_QUAD_RES)]
    pub quad_res: usize,
    /// Hat-function window `lo,hi`; required for unbounded symbols.
    #[arg(long, value_delimiter = ',')]
    pub window: Option<Vec<f64>>,
    #[arg(long, default_value_t = 7)]
    pub hats: usize,
    /// Overlay CSV path; defaults to `<out stem>_overlay.csv` next to --out.
    #[arg(long)]
    pub overlay: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Table2Args {
    #[arg(long, default_value_t = TABLE2_R)]
    pub r: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CertifyArgs {
    /// Certificate family (thm2, fd_t2, fd_t3, fd_t4, fd_t5, fd_t7, fe_t1).
    #[arg(long)]
    pub family: String,
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Self { code: EXIT_NUMERIC, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownCase(_) => {
                Failure::usage(format!("{e}; registered cases: {}", CASE_NAMES.join(", ")))
            }
            Error::UnknownCoefficient(_)
            | Error::UnknownFamily(_)
            | Error::InvalidArgument(_)
            | Error::ContinuityRequired(_)
            | Error::UnboundedSymbol
            | Error::Json(_) => Failure::usage(e.to_string()),
            other => Failure::numeric(other.to_string()),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code; diagnostics go to stderr.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::List => {
            emit(None, &(list_cases().join("\n") + "\n"))?;
            Ok(EXIT_OK)
        }
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Table2(a) => cmd_table2(a),
        Command::Certify(a) => cmd_certify(a),
    }
}

/// Resolves a coefficient token: a preset, `csv:PATH`, or `random`.
pub fn resolve_coefficient(token: &str, seed: Option<u64>) -> Result<Coefficient, Failure> {
    if let Some(path) = token.strip_prefix("csv:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read coefficient CSV `{path}`: {e}")))?;
        let name = Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.to_string());
        return Ok(Coefficient::from_csv_str(format!("csv({name})"), &text)?);
    }
    if token == "random" {
        let seed = seed.ok_or_else(|| Failure::usage("coefficient `random` needs --seed"))?;
        return Ok(random_coefficient(seed)?);
    }
    Ok(default_resolver(token)?)
}

/// Positive piecewise-linear coefficient with values in [0.5, 2] drawn from `seed`.
pub fn random_coefficient(seed: u64) -> glt_core::Result<Coefficient> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..RANDOM_NODES).map(|i| i as f64 / (RANDOM_NODES - 1) as f64).collect();
    let vs: Vec<f64> = xs.iter().map(|_| rng.gen_range(0.5..2.0)).collect();
    Coefficient::from_table(format!("random({seed})"), xs, vs)
}

fn build_case(run: &RunArgs) -> Result<DiscretizationCase, Failure> {
    let mut spec = CaseSpec::parse(&run.case)?;
    if let Some(c) = &run.coeff {
        spec.params.insert("a".into(), c.clone());
    }
    let resolve = |token: &str| -> glt_core::Result<Coefficient> {
        resolve_coefficient(token, run.seed).map_err(|f| Error::InvalidArgument(f.message))
    };
    Ok(spec.instantiate(&resolve)?)
}

fn check_ns(ns: &[usize], case: &DiscretizationCase) -> Result<(), Failure> {
    if ns.is_empty() || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::usage("--n must be a nonempty ascending list"));
    }
    if ns[0] < case.min_n() {
        return Err(Failure::usage(format!("case {} needs n >= {}", case.name(), case.min_n())));
    }
    Ok(())
}

/// 17 significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Serialize)]
struct SpectrumBlock {
    case: String,
    n: usize,
    alpha_n: f64,
    mode: Mode,
    values: Vec<f64>,
}

fn cmd_spectrum(a: &RunArgs) -> CmdResult {
    let case = build_case(a)?;
    check_ns(&a.n, &case)?;
    let mode = Mode::from(a.mode);
    let mut blocks = Vec::with_capacity(a.n.len());
    for &n in &a.n {
        let alpha = case.alpha(n);
        let built = case.build(n)?;
        let spec = match mode {
            Mode::Lambda => built.real_eigenvalues(alpha)?,
            Mode::Sigma => built.singular_values(alpha)?,
        };
        blocks.push(SpectrumBlock { case: case.name().into(), n, alpha_n: alpha, mode, values: spec.into_values() });
    }
    let text = match a.format {
        Format::Json => to_json(&blocks)?,
        Format::Csv => {
            let mut s = String::from("n,index,value\n");
            for b in &blocks {
                for (i, v) in b.values.iter().enumerate() {
                    let _ = writeln!(s, "{},{},{}", b.n, i + 1, num(*v));
                }
            }
            s
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn compare_suite(case: &DiscretizationCase, a: &CompareArgs, mode: Mode) -> Result<Vec<TestFunction>, Failure> {
    match &a.window {
        Some(w) if w.len() == 2 && w[0] < w[1] => Ok(hat_suite((w[0], w[1]), a.hats)?),
        Some(_) => Err(Failure::usage("--window takes lo,hi with lo < hi")),
        None => case_default_suite(case, mode).map_err(|e| match e {
            Error::UnboundedSymbol => {
                Failure::usage(format!("case {} has an unbounded symbol; pass --window lo,hi", case.name()))
            }
            other => other.into(),
        }),
    }
}

/// Weyl report per n, with the rearrangement gap and overlay attached when
/// the symbol is bounded and the mode is lambda.
pub fn compare_reports(case: &DiscretizationCase, a: &CompareArgs) -> Result<Vec<DistributionReport>, Failure> {
    check_ns(&a.run.n, case)?;
    if a.r < 10 {
        return Err(Failure::usage("--r must be at least 10"));
    }
    if a.quad_res < 2 {
        return Err(Failure::usage("--quad-res must be at least 2"));
    }
    let mode = Mode::from(a.run.mode);
    let suite = compare_suite(case, a, mode)?;
    let rearr = if mode == Mode::Lambda && case.bounded_symbol() {
        Some(case_rearrangement(case, a.r)?)
    } else {
        None
    };
    let mut reports = Vec::with_capacity(a.run.n.len());
    for &n in &a.run.n {
        let mut rep = weyl_compare(case, n, &suite, mode, a.quad_res)?;
        if let Some(r) = &rearr {
            let rr = rearrangement_compare_with(case, n, r)?;
            rep.rearrangement_gap = rr.rearrangement_gap;
            rep.rearrangement_r = rr.rearrangement_r;
            rep.overlay = rr.overlay;
        }
        reports.push(rep);
    }
    Ok(reports)
}

fn overlay_path(a: &CompareArgs) -> Option<PathBuf> {
    if a.overlay.is_some() {
        return a.overlay.clone();
    }
    let out = a.run.out.as_ref()?;
    let stem = out.file_stem()?.to_string_lossy();
    Some(out.with_file_name(format!("{stem}_overlay.csv")))
}

pub const OVERLAY_HEADER: &str = "n,t,rearrangement,eigenvalue";

fn cmd_compare(a: &CompareArgs) -> CmdResult {
    let case = build_case(&a.run)?;
    let reports = compare_reports(&case, a)?;
    let text = match a.run.format {
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            let mut s = String::from(DistributionReport::CSV_HEADER);
            s.push('\n');
            for r in &reports {
                for row in r.csv_rows() {
                    s.push_str(&row);
                    s.push('\n');
                }
            }
            s
        }
    };
    emit(a.run.out.as_deref(), &text)?;
    if let Some(path) = overlay_path(a) {
        if reports.iter().any(|r| !r.overlay.is_empty()) {
            let mut s = String::from(OVERLAY_HEADER);
            s.push('\n');
            for r in &reports {
                for o in &r.overlay {
                    let _ = writeln!(s, "{},{},{},{}", r.n, num(o.t), num(o.rearrangement), num(o.eigenvalue));
                }
            }
            emit(Some(&path), &s)?;
        }
    }
    for r in &reports {
        let gap = r.rearrangement_gap.map(|g| format!(" rearrangement_gap={g:.4e}")).unwrap_or_default();
        eprintln!(
            "{} n={} max_weyl_gap={:.4e}{gap} outliers={}",
            r.case,
            r.n,
            r.max_gap(),
            r.outliers.count
        );
    }
    Ok(EXIT_OK)
}

fn cmd_table2(a: &Table2Args) -> CmdResult {
    if a.r < 10 {
        return Err(Failure::usage("--r must be at least 10"));
    }
    let rows: Vec<Table2Row> = table2(a.r)?;
    let text = match a.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut s = String::from("n,gap,reference,tolerance,pass\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.n, num(r.gap), r.reference, r.tolerance, r.pass);
            }
            s
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(if rows.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_NUMERIC })
}

fn cmd_certify(a: &CertifyArgs) -> CmdResult {
    let family = canonical_family(&a.family)?;
    let ns = match &a.n {
        Some(ns) => ns.clone(),
        None => default_ns(family)?,
    };
    let ms = match &a.m {
        Some(ms) => ms.clone(),
        None => default_ms(family)?,
    };
    let report = acs_certificate(family, &ns, &ms)?;
    let text = match a.format {
        Some(Format::Json) => to_json(&report)?,
        Some(Format::Csv) => {
            let mut s = String::from("family,inequality,params,n,m,lhs,rhs,pass\n");
            for c in &report.checks {
                let m = c.m.map(|m| m.to_string()).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{},\"{}\",\"{}\",{},{},{},{},{}",
                    c.family,
                    c.inequality,
                    c.params,
                    c.n,
                    m,
                    num(c.lhs),
                    num(c.rhs),
                    c.pass
                );
            }
            s
        }
        None => report.lines().join("\n") + "\n",
    };
    emit(a.out.as_deref(), &text)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_NUMERIC })
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Failure::numeric(format!("serialization failed: {e}")))
}

/// Writes `text` to `path` via a temp file and rename, or to stdout.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::numeric(format!("stdout: {e}")))
        }
        Some(p) => write_atomic(p, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
    }
}

pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn num_round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.0 - 2.0 * (0.3f64).cos(), 1e-300, -7.5e12] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn random_coefficient_is_seeded() {
        let a = random_coefficient(7).unwrap();
        let b = random_coefficient(7).unwrap();
        let c = random_coefficient(8).unwrap();
        let probe = [0.1, 0.37, 0.9];
        assert!(probe.iter().all(|&x| a.eval(x) == b.eval(x)));
        assert!(probe.iter().any(|&x| a.eval(x) != c.eval(x)));
        assert!(probe.iter().all(|&x| (0.5..2.0).contains(&a.eval(x))));
    }

    #[test]
    fn random_needs_seed() {
        let f = resolve_coefficient("random", None).unwrap_err();
        assert_eq!(f.code, EXIT_USAGE);
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::UnknownCase("x".into())).code, EXIT_USAGE);
        assert_eq!(Failure::from(Error::UnknownFamily("x".into())).code, EXIT_USAGE);
        assert_eq!(Failure::from(Error::NoConvergence { algorithm: "qr", iterations: 1 }).code, EXIT_NUMERIC);
    }
}
