//! Command-line front end: argument parsing, dispatch and report formatting.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ztensor::error::{FormatError, HarnessError, SimilarityError, SpectraError, StructureError, ZFormError};
use ztensor::harness::{check_theorem, regression_suite, CheckConfig, TheoremReport, THEOREM_IDS};
use ztensor::io::read_tensor;
use ztensor::similarity::solve_sign_similarity;
use ztensor::spectra::{
    brute_force_h_eigenpairs, char_poly_dim2, largest_h_eigenvalue_z, perron_pair, power_iteration_rho, EigenPair,
    SolverOptions, ZEigenRoute,
};
use ztensor::structure::{find_bipartitions, find_reducing_set, is_weakly_irreducible, BipartiteKind, DEFAULT_WITNESS_LIMIT};
use ztensor::{z_decompose, IndexSet, Tensor64};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ztensor", version, about = "Structure and H-spectra of Z-tensors and their absolute tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Odd,
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Power,
    Brute,
    Auto,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shape, entry count, symmetry, Z-form validity and weak irreducibility.
    Inspect { file: PathBuf },
    /// Bipartitions of the off-diagonal part.
    Bipartite {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Odd)]
        kind: Kind,
        /// Require the strict property instead of the weak one.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = DEFAULT_WITNESS_LIMIT)]
        limit: usize,
    },
    /// Reducibility verdict with a witness set.
    Irreducible { file: PathBuf },
    /// Eigenpairs with residuals.
    Eig {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Largest H-eigenvalue of A against that of |A|.
    Compare {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
        tol: f64,
    },
    /// Sign similarity between |A| and A.
    Similar { file: PathBuf },
    /// Characteristic polynomial of a dimension-2 tensor.
    Charpoly { file: PathBuf },
    /// Seeded property checks.
    Verify {
        /// Check id; all checks when omitted.
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Equality tolerance of the spectral checks.
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
        /// Directory for counterexample tensors.
        #[arg(long)]
        report_dir: Option<PathBuf>,
    },
    /// Fixed regression tensors.
    Regression,
}

/// What a verb produced: exit code plus the two renderings of its report.
#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: u8,
    table: String,
    value: Value,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::input(e)
    }
}

impl From<StructureError> for Failure {
    fn from(e: StructureError) -> Self {
        Failure::input(e)
    }
}

impl From<ZFormError> for Failure {
    fn from(e: ZFormError) -> Self {
        Failure::input(e)
    }
}

impl From<SimilarityError> for Failure {
    fn from(e: SimilarityError) -> Self {
        Failure::input(e)
    }
}

impl From<SpectraError> for Failure {
    fn from(e: SpectraError) -> Self {
        let code = match e {
            SpectraError::MaxItersExceeded { .. }
            | SpectraError::LostPositivity { .. }
            | SpectraError::NoEigenpairFound
            | SpectraError::DegeneratePolynomial => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Spectra(s) => s.into(),
            HarnessError::RetriesExhausted(_) => Self {
                code: EXIT_NUMERICAL,
                message: e.to_string(),
            },
            other => Failure::input(other),
        }
    }
}

/// Parses `argv` (program name first) and runs the verb.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => Outcome {
            code: report.code,
            stdout: match cli.format {
                Format::Table => report.table,
                Format::Structured => serde_json::to_string_pretty(&report.value).expect("reports serialize") + "\n",
            },
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn dispatch(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Inspect { file } => inspect(&load(file)?),
        Command::Bipartite {
            file,
            kind,
            strict,
            limit,
        } => bipartite(&load(file)?, *kind, *strict, *limit),
        Command::Irreducible { file } => irreducible(&load(file)?),
        Command::Eig { file, method, seed } => eig(&load(file)?, *method, *seed),
        Command::Compare { file, tol } => compare(&load(file)?, *tol),
        Command::Similar { file } => similar(&load(file)?),
        Command::Charpoly { file } => charpoly(&load(file)?),
        Command::Verify {
            theorem,
            trials,
            seed,
            tol,
            report_dir,
        } => verify(theorem.as_deref(), *trials, *seed, *tol, report_dir.clone()),
        Command::Regression => regression(),
    }
}

fn load(path: &Path) -> Result<Tensor64, Failure> {
    read_tensor(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// `x` with 12 significant digits, trailing zeros dropped.
pub fn g12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
        s.to_string()
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        let mantissa = if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
        format!("{mantissa}e{exponent}")
    }
}

/// `x` rounded to 12 significant digits, for structured output.
fn r12(x: f64) -> Value {
    if x.is_finite() {
        json!(g12(x).parse::<f64>().expect("g12 output parses"))
    } else {
        Value::Null
    }
}

fn r12_vec(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| r12(*x)).collect())
}

fn vec_text(xs: &[f64]) -> String {
    format!("({})", xs.iter().map(|x| g12(*x)).collect::<Vec<_>>().join(", "))
}

fn set_value(s: &IndexSet) -> Value {
    json!(s.to_one_based())
}

fn pair_value(p: &EigenPair<f64>) -> Value {
    json!({
        "lambda": r12(p.lambda),
        "x": r12_vec(&p.x),
        "residual": r12(p.residual),
        "iterations": p.iterations,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn inspect(t: &Tensor64) -> Result<Report, Failure> {
    let z = z_decompose(t);
    let z_form = match &z {
        Ok(_) => "valid".to_string(),
        Err(e) => format!("invalid ({e})"),
    };
    let c_weak = z.as_ref().ok().map(|z| is_weakly_irreducible(&z.c));
    let weak = is_weakly_irreducible(t);
    let mut table = String::new();
    writeln!(table, "order                 {}", t.order()).unwrap();
    writeln!(table, "dim                   {}", t.dim()).unwrap();
    writeln!(table, "entries               {}", t.nnz()).unwrap();
    writeln!(table, "symmetric             {}", yes_no(t.is_symmetric())).unwrap();
    writeln!(table, "nonnegative           {}", yes_no(t.is_nonnegative())).unwrap();
    writeln!(table, "z-form                {z_form}").unwrap();
    writeln!(table, "weakly irreducible    {}", yes_no(weak)).unwrap();
    if let Some(c) = c_weak {
        writeln!(table, "C weakly irreducible  {}", yes_no(c)).unwrap();
    }
    Ok(Report {
        code: EXIT_OK,
        table,
        value: json!({
            "order": t.order(),
            "dim": t.dim(),
            "entries": t.nnz(),
            "symmetric": t.is_symmetric(),
            "nonnegative": t.is_nonnegative(),
            "z_form_valid": z.is_ok(),
            "z_form_error": z.as_ref().err().map(ToString::to_string),
            "weakly_irreducible": weak,
            "c_weakly_irreducible": c_weak,
        }),
    })
}

fn bipartite(t: &Tensor64, kind: Kind, strict: bool, limit: usize) -> Result<Report, Failure> {
    let kind = match (kind, strict) {
        (Kind::Odd, false) => BipartiteKind::OddWeak,
        (Kind::Odd, true) => BipartiteKind::OddStrict,
        (Kind::Even, false) => BipartiteKind::EvenWeak,
        (Kind::Even, true) => BipartiteKind::EvenStrict,
    };
    let off = t.filter(|idx, _| !idx.is_diagonal());
    let found = find_bipartitions(&off, kind, limit);
    let mut table = format!("{kind} (off-diagonal part): ");
    if found.is_empty() {
        table.push_str("none\n");
    } else {
        table.push_str(&format!("{} witness(es)\n", found.len()));
        for v in &found {
            writeln!(table, "  V = {v}").unwrap();
        }
    }
    Ok(Report {
        code: if found.is_empty() { EXIT_FALSE } else { EXIT_OK },
        table,
        value: json!({
            "kind": kind.to_string(),
            "limit": limit,
            "witnesses": found.iter().map(set_value).collect::<Vec<_>>(),
        }),
    })
}

fn irreducible(t: &Tensor64) -> Result<Report, Failure> {
    let witness = find_reducing_set(t)?;
    let table = match &witness {
        None => "irreducible\n".to_string(),
        Some(v) => format!("reducible, V = {v}\n"),
    };
    Ok(Report {
        code: if witness.is_none() { EXIT_OK } else { EXIT_FALSE },
        table,
        value: json!({
            "irreducible": witness.is_none(),
            "witness": witness.as_ref().map(set_value),
        }),
    })
}

fn pairs_table(pairs: &[EigenPair<f64>]) -> String {
    let mut table = format!("{:<20} {:<20} x\n", "lambda", "residual");
    for p in pairs {
        writeln!(table, "{:<20} {:<20} {}", g12(p.lambda), g12(p.residual), vec_text(&p.x)).unwrap();
    }
    table
}

fn eig(t: &Tensor64, method: Method, seed: u64) -> Result<Report, Failure> {
    let opts = SolverOptions {
        seed,
        ..SolverOptions::default()
    };
    let (name, pairs) = match method {
        Method::Power => ("power", vec![power_iteration_rho(t, &opts)?]),
        Method::Brute => ("brute", brute_force_h_eigenpairs(t, &opts)?),
        Method::Auto if t.is_nonnegative() => ("perron", vec![perron_pair(t, &opts)?]),
        Method::Auto => ("brute", brute_force_h_eigenpairs(t, &opts)?),
    };
    let mut table = format!("method {name}, {} eigenpair(s)\n", pairs.len());
    table.push_str(&pairs_table(&pairs));
    Ok(Report {
        code: EXIT_OK,
        table,
        value: json!({
            "method": name,
            "pairs": pairs.iter().map(pair_value).collect::<Vec<_>>(),
        }),
    })
}

fn route_text(route: &ZEigenRoute) -> String {
    let set = |v: &[usize]| format!("{{{}}}", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    match route {
        ZEigenRoute::SignFlip { set: v } => format!("sign flip, V = {}", set(v)),
        ZEigenRoute::SignSimilarity { negative } => format!("sign similarity, p negative on {}", set(negative)),
        ZEigenRoute::Oracle => "oracle, no bipartition".into(),
    }
}

fn compare(a: &Tensor64, tol: f64) -> Result<Report, Failure> {
    let r = largest_h_eigenvalue_z(a, &SolverOptions::default())?;
    let diff = (r.pair.lambda - r.abs_pair.lambda).abs();
    let equal = diff <= tol;
    let mut table = String::new();
    writeln!(table, "lambda(A)    {}  residual {}", g12(r.pair.lambda), g12(r.pair.residual)).unwrap();
    writeln!(table, "lambda(|A|)  {}  residual {}", g12(r.abs_pair.lambda), g12(r.abs_pair.residual)).unwrap();
    writeln!(table, "difference   {}", g12(diff)).unwrap();
    writeln!(table, "equal        {} (tol {})", yes_no(equal), g12(tol)).unwrap();
    writeln!(table, "route        {}", route_text(&r.route)).unwrap();
    Ok(Report {
        code: if equal { EXIT_OK } else { EXIT_FALSE },
        table,
        value: json!({
            "lambda_a": r12(r.pair.lambda),
            "lambda_abs": r12(r.abs_pair.lambda),
            "difference": r12(diff),
            "tol": r12(tol),
            "equal": equal,
            "route": r.route,
            "pair": pair_value(&r.pair),
            "abs_pair": pair_value(&r.abs_pair),
        }),
    })
}

fn similar(a: &Tensor64) -> Result<Report, Failure> {
    let w = solve_sign_similarity(a)?;
    let table = match &w {
        Some(w) => format!("p = {}\n", vec_text(&w.p)),
        None => "none\n".to_string(),
    };
    Ok(Report {
        code: if w.is_some() { EXIT_OK } else { EXIT_FALSE },
        table,
        value: json!({ "p": w.as_ref().map(|w| r12_vec(&w.p)) }),
    })
}

fn charpoly(t: &Tensor64) -> Result<Report, Failure> {
    let p = char_poly_dim2(t)?;
    let s = p.summary();
    let mut table = format!("p(λ) = {}\n", p.poly());
    writeln!(table, "{:<6} {:<24} exact", "power", "coefficient").unwrap();
    for (k, (c, e)) in s.coefficients.iter().zip(&s.exact).enumerate() {
        writeln!(table, "{k:<6} {:<24} {e}", g12(*c)).unwrap();
    }
    writeln!(table, "roots").unwrap();
    for (re, im) in &s.roots {
        writeln!(table, "  {} {} {}i", g12(*re), if *im < 0.0 { "-" } else { "+" }, g12(im.abs())).unwrap();
    }
    writeln!(table, "spectral radius {}", g12(s.spectral_radius)).unwrap();
    Ok(Report {
        code: EXIT_OK,
        table,
        value: json!({
            "order": s.order,
            "coefficients": r12_vec(&s.coefficients),
            "exact": s.exact,
            "roots": s.roots.iter().map(|(re, im)| json!([r12(*re), r12(*im)])).collect::<Vec<_>>(),
            "spectral_radius": r12(s.spectral_radius),
        }),
    })
}

fn reports_table(reports: &[TheoremReport]) -> String {
    let mut table = format!("{:<26} {:>7} {:>7} {:>7} {:>7} {:>9}\n", "id", "trials", "pass", "inconcl", "fail", "seconds");
    for r in reports {
        writeln!(
            table,
            "{:<26} {:>7} {:>7} {:>7} {:>7} {:>9.2}",
            r.theorem_id,
            r.trials,
            r.passes,
            r.inconclusive,
            r.failures.len(),
            r.wall_time_secs
        )
        .unwrap();
        for f in &r.failures {
            write!(table, "  seed {}: {}", f.seed, f.reason).unwrap();
            if let Some(path) = &f.tensor_file {
                write!(table, " [{path}]").unwrap();
            }
            table.push('\n');
        }
    }
    table
}

fn reports_value(reports: &[TheoremReport]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                let mut v = serde_json::to_value(r).expect("reports serialize");
                v["wall_time_secs"] = r12(r.wall_time_secs);
                v
            })
            .collect(),
    )
}

fn reports_outcome(reports: Vec<TheoremReport>) -> Report {
    let clean = reports.iter().all(TheoremReport::is_clean);
    Report {
        code: if clean { EXIT_OK } else { EXIT_FALSE },
        table: reports_table(&reports),
        value: reports_value(&reports),
    }
}

fn verify(
    theorem: Option<&str>,
    trials: usize,
    seed: u64,
    tol: Option<f64>,
    report_dir: Option<PathBuf>,
) -> Result<Report, Failure> {
    let mut cfg = CheckConfig::new(trials, seed);
    if let Some(tol) = tol {
        cfg.equality_tol = tol;
    }
    cfg.report_dir = report_dir;
    let ids: Vec<&str> = match theorem {
        Some(id) => vec![id],
        None => THEOREM_IDS.to_vec(),
    };
    let reports = ids
        .into_iter()
        .map(|id| check_theorem(id, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reports_outcome(reports))
}

fn regression() -> Result<Report, Failure> {
    Ok(reports_outcome(regression_suite()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(g12(3.0), "3");
        assert_eq!(g12(2.999999999964), "2.99999999996");
        assert_eq!(g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(g12(-1234.5), "-1234.5");
        assert_eq!(g12(1e-9), "1e-9");
        assert_eq!(g12(-1.5e-7), "-1.5e-7");
        assert_eq!(g12(6.02214076e23), "6.02214076e23");
        assert_eq!(g12(0.0), "0");
        assert_eq!(g12(f64::INFINITY), "inf");
    }

    #[test]
    fn argument_errors_are_input_errors() {
        assert_eq!(run(["ztensor"]).code, EXIT_INPUT);
        assert_eq!(run(["ztensor", "eig", "x", "--method", "nope"]).code, EXIT_INPUT);
        assert_eq!(run(["ztensor", "--help"]).code, EXIT_OK);
    }

    #[test]
    fn solver_errors_map_to_exit_codes() {
        assert_eq!(Failure::from(SpectraError::NoEigenpairFound).code, EXIT_NUMERICAL);
        assert_eq!(Failure::from(SpectraError::NotDimensionTwo(3)).code, EXIT_INPUT);
        assert_eq!(Failure::from(HarnessError::RetriesExhausted(1)).code, EXIT_NUMERICAL);
        assert_eq!(Failure::from(HarnessError::UnknownTheorem("x".into())).code, EXIT_INPUT);
    }
}
