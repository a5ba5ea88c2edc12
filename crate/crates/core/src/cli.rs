//! Command-line front end: instance files, command dispatch and report
//! formatting.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::Error;
use crate::face::Face;
use crate::linalg::{AbelianGroup, CharMatrix, Coefficients, GradedGroup};
use crate::toric::{self, Method, ToricSpace};

/// Environment variable naming the directory searched for bare instance names.
pub const CORPUS_ENV: &str = "REALTORIC_CORPUS";

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

/// An instance file: `m`, 1-based `facets`, 0/1 rows of `lambda`, and an
/// optional shelling given as 1-based positions in `facets`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub m: usize,
    pub facets: Vec<Vec<usize>>,
    pub lambda: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shelling: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Compute(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(Error::Mismatch(_)) | CliError::Compute(Error::DivisibilityFailure { .. }) => EXIT_MISMATCH,
            CliError::Compute(Error::DifferentialNotSquareZero(_)) | CliError::Compute(Error::ReductionFailure(_)) => EXIT_MISMATCH,
            _ => EXIT_INVALID,
        }
    }
}

fn invalid(e: Error) -> CliError {
    CliError::Validation(e.to_string())
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<ProblemInstance, CliError> {
    let inst: ProblemInstance =
        serde_json::from_str(text).map_err(|e| CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    inst.complex()?;
    inst.char_matrix()?;
    if inst.lambda.len() != inst.complex()?.facet_size() {
        return Err(CliError::Validation(format!(
            "lambda has {} rows but facets have {} vertices",
            inst.lambda.len(),
            inst.complex()?.facet_size()
        )));
    }
    if let Some(order) = &inst.shelling {
        if let Some(&bad) = order.iter().find(|&&i| i == 0 || i > inst.facets.len()) {
            return Err(CliError::Validation(format!("shelling index {bad} is outside 1..={}", inst.facets.len())));
        }
    }
    if let Some(labels) = &inst.labels {
        if labels.len() != inst.m {
            return Err(CliError::Validation(format!("{} labels for {} vertices", labels.len(), inst.m)));
        }
    }
    Ok(inst)
}

impl ProblemInstance {
    pub fn complex(&self) -> Result<SimplicialComplex, CliError> {
        if self.m == 0 || self.m > crate::face::MAX_VERTICES {
            return Err(CliError::Validation(format!("m = {} is outside 1..={}", self.m, crate::face::MAX_VERTICES)));
        }
        for f in &self.facets {
            if let Some(&v) = f.iter().find(|&&v| v == 0 || v > self.m) {
                return Err(CliError::Validation(format!("vertex {v} is outside 1..={}", self.m)));
            }
        }
        let facets: Vec<Face> = self.facets.iter().map(|f| Face::new(f)).collect();
        let k = SimplicialComplex::new(self.m, facets).map_err(invalid)?;
        if !k.is_pure() {
            return Err(invalid(Error::NotPure));
        }
        Ok(k)
    }

    pub fn char_matrix(&self) -> Result<CharMatrix, CliError> {
        if let Some(&bad) = self.lambda.iter().flatten().find(|&&x| x > 1) {
            return Err(CliError::Validation(format!("lambda entry {bad} is not 0 or 1")));
        }
        CharMatrix::from_rows_with_width(self.m, &self.lambda).map_err(invalid)
    }

    pub fn space(&self) -> Result<ToricSpace, CliError> {
        let k = self.complex()?;
        let lambda = self.char_matrix()?;
        let order: Option<Vec<Face>> = self.shelling.as_ref().map(|idx| idx.iter().map(|&i| Face::new(&self.facets[i - 1])).collect());
        ToricSpace::new(k, lambda, order.as_deref()).map_err(invalid)
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "instance".to_string())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Formula,
    Morse,
    Cells,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Formula => Method::Formula,
            MethodArg::Morse => Method::Morse,
            MethodArg::Cells => Method::Cells,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "realtoric", version, about = "Cohomology of real toric spaces from a shellable complex and a characteristic matrix")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate an instance and print its combinatorial data.
    Validate(Common),
    /// Print (or find) a shelling and its restriction faces.
    Shelling(Common),
    /// Cohomology of Y.
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// Run one pipeline; by default all three run and must agree.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Z, Q, Zq:<q> or Z2k:<k>.
        #[arg(long, default_value = "Z")]
        coeff: String,
    },
    /// Mod-2 Bockstein pages of Y and their comparison with the subcomplexes.
    Bockstein {
        #[command(flatten)]
        common: Common,
        /// Number of pages to print (default: until stable).
        #[arg(long)]
        pages: Option<usize>,
    },
    /// Subcomplex cohomology table and, for 3- and 4-spheres, the small-cover row.
    Table(Common),
    /// Compare both readings of the Z_{2^(k+1)} coefficient statement.
    Claim {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Run every cross-validation; exits 1 if any fails.
    Check(Common),
}

#[derive(clap::Args, Debug)]
pub struct Common {
    /// Instance file, or a bare name looked up in the corpus directory.
    pub instance: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Default corpus shipped with the crate.
pub fn default_corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Resolves a path or a corpus name (`klein` or `klein.json`).
pub fn resolve_instance(arg: &str) -> Result<PathBuf, CliError> {
    let direct = PathBuf::from(arg);
    if direct.is_file() {
        return Ok(direct);
    }
    let dir = std::env::var_os(CORPUS_ENV).map(PathBuf::from).unwrap_or_else(default_corpus_dir);
    let file = if arg.ends_with(".json") { arg.to_string() } else { format!("{arg}.json") };
    let candidate = dir.join(file);
    if candidate.is_file() {
        Ok(candidate)
    } else {
        Err(CliError::Io(format!("no instance file {arg:?} (also looked in {})", dir.display())))
    }
}

pub fn load_instance(arg: &str) -> Result<ProblemInstance, CliError> {
    let path = resolve_instance(arg)?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut inst = parse_instance(&text)?;
    if inst.name.is_none() {
        inst.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    Ok(inst)
}

/// A finished report and its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub code: u8,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, code: EXIT_OK }
    }
}

fn group_json(a: &AbelianGroup) -> serde_json::Value {
    serde_json::json!({
        "rank": a.rank,
        "torsion": a.torsion.iter().map(u64::to_string).collect::<Vec<_>>(),
    })
}

/// `{degree: {rank, torsion}}` over `lo..=hi`, zero groups included.
pub fn graded_json(g: &GradedGroup, lo: i32, hi: i32) -> serde_json::Value {
    let map: BTreeMap<String, serde_json::Value> = (lo..=hi).map(|d| (d.to_string(), group_json(&g.get(d)))).collect();
    serde_json::to_value(map).expect("plain data")
}

fn graded_text(g: &GradedGroup, lo: i32, hi: i32, coeff: Coefficients) -> String {
    let show = |a: AbelianGroup| match (coeff, a.rank) {
        (Coefficients::Q, 0) => "0".to_string(),
        (Coefficients::Q, 1) => "Q".to_string(),
        (Coefficients::Q, r) => format!("Q^{r}"),
        _ => a.to_string(),
    };
    (lo..=hi).map(|d| format!("H{d} = {}", show(g.get(d)))).collect::<Vec<_>>().join("\n")
}

fn faces_json(faces: &[Face]) -> serde_json::Value {
    serde_json::Value::Array(faces.iter().map(|f| serde_json::json!(f.to_vec())).collect())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("plain data")
}

fn validate_report(inst: &ProblemInstance, space: &ToricSpace, format: Format) -> Result<Report, CliError> {
    let k = &space.k;
    let f = k.f_vector();
    let h = k.h_vector()?;
    let row = space.lambda.row_space().len();
    Ok(Report::ok(match format {
        Format::Json => pretty(&serde_json::json!({
            "name": inst.display_name(), "m": k.m(), "n": space.n(), "facets": k.facets().len(),
            "f_vector": f, "h_vector": h, "row_space": row, "non_singular": true,
            "cohen_macaulay": k.reisner_cm_check(),
        })),
        Format::Text => format!(
            "{}: m = {}, n = {}, {} facets\nf-vector {:?}\nh-vector {:?}\nrow space of size {row}\nnon-singular: yes\nCohen-Macaulay over Z_2: {}",
            inst.display_name(),
            k.m(),
            space.n(),
            k.facets().len(),
            f,
            h,
            if k.reisner_cm_check() { "yes" } else { "no" }
        ),
    }))
}

fn shelling_report(inst: &ProblemInstance, space: &ToricSpace, format: Format) -> Result<Report, CliError> {
    let sh = &space.shelling;
    let positions: Vec<usize> = sh
        .order()
        .iter()
        .map(|f| inst.facets.iter().position(|g| Face::new(g) == *f).map_or(0, |p| p + 1))
        .collect();
    let counts = sh.restriction_counts();
    Ok(Report::ok(match format {
        Format::Json => pretty(&serde_json::json!({
            "order": positions, "facets": faces_json(sh.order()), "restrictions": faces_json(sh.restrictions()),
            "h_vector": counts,
        })),
        Format::Text => {
            let mut s = String::new();
            for (j, (f, r)) in sh.order().iter().zip(sh.restrictions()).enumerate() {
                let _ = writeln!(s, "{:>3}. facet #{} {f}  r = {r}", j + 1, positions[j]);
            }
            let _ = write!(s, "restriction sizes {counts:?}");
            s
        }
    }))
}

fn cohomology_report(space: &ToricSpace, method: Option<Method>, coeff: Coefficients, format: Format) -> Result<Report, CliError> {
    let n = space.n() as i32;
    let methods: Vec<Method> = method.map_or_else(|| Method::ALL.to_vec(), |m| vec![m]);
    let mut results: Vec<(Method, GradedGroup)> = Vec::new();
    for m in methods {
        results.push((m, space.cohomology(m, coeff)?));
    }
    let agree = results.windows(2).all(|w| w[0].1 == w[1].1);
    let code = if agree { EXIT_OK } else { EXIT_MISMATCH };
    let text = match format {
        Format::Json => {
            let per: BTreeMap<String, serde_json::Value> = results.iter().map(|(m, g)| (m.to_string(), graded_json(g, 0, n))).collect();
            pretty(&serde_json::json!({
                "coefficients": coeff.to_string(),
                "cohomology": graded_json(&results[0].1, 0, n),
                "methods": per,
                "agree": agree,
            }))
        }
        Format::Text => {
            let mut s = format!("H^*(Y; {coeff})\n{}", graded_text(&results[0].1, 0, n, coeff));
            if results.len() > 1 {
                let names: Vec<String> = results.iter().map(|(m, _)| m.to_string()).collect();
                let _ = write!(s, "\n{}: {}", names.join(", "), if agree { "agree" } else { "DISAGREE" });
                if !agree {
                    for (m, g) in &results {
                        let _ = write!(s, "\n{m}: {g}");
                    }
                }
            }
            s
        }
    };
    Ok(Report { text, code })
}

fn bockstein_report(space: &ToricSpace, pages: Option<usize>, format: Format) -> Result<Report, CliError> {
    let rep = space.bockstein()?;
    let n = space.n() as i32;
    let hy = space.cohomology(Method::Cells, Coefficients::Z)?;
    let count = pages.unwrap_or(toric::k_max(&hy) + 1).max(1);
    let shown = toric::bockstein_pages(&hy, 0, n, count);
    let sq = crate::facering::sq1_matrix(&space.k, &space.lambda, &space.shelling)?;
    let code = if rep.holds() { EXIT_OK } else { EXIT_MISMATCH };
    let text = match format {
        Format::Json => pretty(&serde_json::json!({
            "pages": shown.dims, "infinity": shown.infinity,
            "sq1_ranks": (0..=space.n()).map(|d| sq.rank(d)).collect::<Vec<_>>(),
            "subcomplex_identity": rep.holds(),
        })),
        Format::Text => {
            let ranks: Vec<usize> = (0..=space.n()).map(|d| sq.rank(d)).collect();
            format!("{shown}\nSq^1 ranks by degree {ranks:?}\nsubcomplex page identity: {}", if rep.holds() { "holds" } else { "FAILS" })
        }
    };
    Ok(Report { text, code })
}

fn table_report(space: &ToricSpace, format: Format) -> Result<Report, CliError> {
    let table = space.subcomplex_table();
    let n = space.n();
    let row = if (n == 3 || n == 4) && space.k.check_homology_sphere().is_ok() { Some(space.small_cover_table()?) } else { None };
    let text = match format {
        Format::Json => {
            let entries: Vec<serde_json::Value> = table
                .iter()
                .map(|(w, g)| serde_json::json!({"omega": w.to_vec(), "cohomology": graded_json(g, -1, n as i32 - 1)}))
                .collect();
            let row_json = row.as_ref().map(|r| {
                serde_json::json!({
                    "orientable": r.orientable, "b": r.b, "c": r.c, "d": r.d,
                    "predicted": graded_json(&r.predicted, 0, n as i32),
                })
            });
            pretty(&serde_json::json!({"subcomplexes": entries, "small_cover": row_json}))
        }
        Format::Text => {
            let mut s = String::new();
            for (w, g) in table.iter() {
                let _ = writeln!(s, "{:<16} {g}", w.to_string());
            }
            let _ = write!(s, "b = {}, c = {}, d = {}", table.betti_sum(0), table.betti_sum(1), table.betti_sum(2));
            if let Some(r) = &row {
                let _ = write!(s, "\n{r}");
            }
            s
        }
    };
    Ok(Report::ok(text))
}

fn claim_report(space: &ToricSpace, k: u32, format: Format) -> Result<Report, CliError> {
    let rep = space.claim_check(k)?;
    Ok(Report::ok(match format {
        Format::Text => rep.to_string(),
        Format::Json => {
            let degrees: Vec<serde_json::Value> = rep
                .degrees
                .iter()
                .map(|d| {
                    serde_json::json!({
                        "degree": d.degree, "lhs": group_json(&d.lhs), "literal_rhs": group_json(&d.rhs_literal),
                        "doubled_rhs": group_json(&d.rhs_doubled), "literal_match": d.literal_match(), "doubled_match": d.doubled_match(),
                    })
                })
                .collect();
            pretty(&serde_json::json!({"k": k, "degrees": degrees}))
        }
    }))
}

fn check_report(space: &ToricSpace, format: Format) -> Report {
    let items = space.run_checks();
    let all = items.iter().all(|i| i.passed);
    let text = match format {
        Format::Json => pretty(&serde_json::json!({
            "passed": all,
            "checks": items.iter().map(|i| serde_json::json!({"name": i.name, "passed": i.passed, "detail": i.detail})).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = String::new();
            for i in &items {
                let _ = write!(s, "{} {}", if i.passed { "ok  " } else { "FAIL" }, i.name);
                if !i.detail.is_empty() {
                    let _ = write!(s, ": {}", i.detail);
                }
                s.push('\n');
            }
            let _ = write!(s, "{}", if all { "all checks passed" } else { "some checks FAILED" });
            s
        }
    };
    Report { text, code: if all { EXIT_OK } else { EXIT_MISMATCH } }
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let common = match &cli.command {
        Command::Validate(c) | Command::Shelling(c) | Command::Table(c) | Command::Check(c) => c,
        Command::Cohomology { common, .. } | Command::Bockstein { common, .. } | Command::Claim { common, .. } => common,
    };
    let inst = load_instance(&common.instance)?;
    let space = inst.space()?;
    let format = common.format;
    match &cli.command {
        Command::Validate(_) => validate_report(&inst, &space, format),
        Command::Shelling(_) => shelling_report(&inst, &space, format),
        Command::Cohomology { method, coeff, .. } => {
            let coeff: Coefficients = coeff.parse().map_err(CliError::Validation)?;
            cohomology_report(&space, method.map(Method::from), coeff, format)
        }
        Command::Bockstein { pages, .. } => bockstein_report(&space, *pages, format),
        Command::Table(_) => table_report(&space, format),
        Command::Claim { k, .. } => claim_report(&space, *k, format),
        Command::Check(_) => Ok(check_report(&space, format)),
    }
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(r) => {
            println!("{}", r.text);
            r.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
