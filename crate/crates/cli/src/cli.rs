//! Command-line interface.
//!
//! Exit codes: `0` success, `1` a check failed, `2` bad input (arguments,
//! files, or an unwritable output path).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spark_forge_core::audit::{construction_checks, dictionary_checks, kernel_check};
use spark_forge_core::designs::{a_matrix, latin_family};
use spark_forge_core::dict::{
    build_dictionary, build_null_vector, coherence, spark_certify, uniqueness_threshold,
    DictError, Family, Rational, ScaledDictionary, SparkCertificate, SparseVector, Verdict,
};
use spark_forge_core::gf::{ExtensionField, Field};
use spark_forge_core::hadamard::permuted_hadamard;
use spark_forge_core::search::{binomial, ColumnSet, DEFAULT_BUDGET};
use spark_forge_core::CheckReport;

use crate::formats::{self, Format};
use crate::parallel::{budget_from_env, default_workers, spark_bruteforce};
use crate::render::render_svg;
use crate::report::RunReport;

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Input(String),
    /// Exit code 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<DictError> for CliError {
    fn from(e: DictError) -> Self {
        CliError::Input(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    Family::parse(s).ok_or_else(|| format!("unknown family `{s}` (expected thm1 or thm2)"))
}

#[derive(Parser, Debug)]
#[command(name = "spark-forge", version, about = "Build and certify spark-tight sign dictionaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the dictionary, its null vector and a run report.
    Construct(ConstructArgs),
    /// Run every structural check; exit 1 if any fails.
    Verify(VerifyArgs),
    /// Certify the spark, optionally confirming it by brute force.
    Spark(SparkArgs),
    /// Draw the dictionary and vector as an SVG heat map.
    Render(RenderArgs),
    /// Write the dictionary, vector and construction tables.
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Dictionary family.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    /// Field order, a power of two.
    #[arg(long)]
    pub q: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    #[command(flatten)]
    pub target: Target,
    /// Read the dictionary from a file instead of building it.
    #[arg(long)]
    pub dict: Option<PathBuf>,
    /// Read the sparse vector from a file instead of building it.
    #[arg(long)]
    pub vector: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub target: Target,
    /// Directory for the written files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// File format for matrices and vectors.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print the report as JSON instead of text.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct SparkArgs {
    #[command(flatten)]
    pub source: Source,
    /// Confirm minimality by exhaustive search.
    #[arg(long)]
    pub brute_force: bool,
    /// Largest subset size to search [default: support size, at most 8].
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Search threads [default: available parallelism].
    #[arg(long)]
    pub workers: Option<usize>,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print the report as JSON instead of text.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[command(flatten)]
    pub source: Source,
    /// Output file [default: <out-dir>/<family>_q<q>.svg].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for the written files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Item {
    All,
    Dictionary,
    Vector,
    Field,
    Latin,
    AMatrix,
    Hadamard,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[command(flatten)]
    pub target: Target,
    /// Directory for the written files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// File format for matrices and vectors.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// What to write.
    #[arg(long, value_enum, default_value_t = Item::All)]
    pub item: Item,
}

/// Parses `args` and runs the command, printing errors to stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Input(m) => eprintln!("error: {m}"),
                CliError::Failed(m) => eprintln!("{m}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Spark(a) => spark(a),
        Command::Render(a) => render(a),
        Command::Export(a) => export(a),
    }
}

fn stem(family: Family, q: usize) -> String {
    format!("{family}_q{q}")
}

fn require_target(t: &Target) -> Result<(Family, usize)> {
    let family = t
        .family
        .ok_or_else(|| CliError::Input("--family is required".into()))?;
    let q = t.q.ok_or_else(|| CliError::Input("--q is required".into()))?;
    family.validate_q(q)?;
    Ok((family, q))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A dictionary and vector resolved from flags or files.
struct Loaded {
    family: Family,
    q: usize,
    dict: Option<ScaledDictionary>,
    vector: Option<SparseVector>,
}

fn load(src: &Source, need_dict: bool) -> Result<Loaded> {
    let file_dict = match &src.dict {
        Some(p) => Some(
            formats::parse_dictionary(&read(p)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    let file_vec = match &src.vector {
        Some(p) => Some(
            formats::parse_vector(&read(p)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    let (family, q) = match (&file_dict, &file_vec) {
        (Some(d), _) => (d.family(), d.q()),
        (None, Some(v)) => (v.family, v.q),
        (None, None) => require_target(&src.target)?,
    };
    if src.target.family.is_some_and(|f| f != family) || src.target.q.is_some_and(|t| t != q) {
        return Err(CliError::Input(format!(
            "flags disagree with the input file ({family}, q = {q})"
        )));
    }
    if let Some(v) = &file_vec {
        if (v.family, v.q) != (family, q) {
            return Err(CliError::Input(format!(
                "vector is for {} q = {}, dictionary is {family} q = {q}",
                v.family, v.q
            )));
        }
    }
    let from_files = src.dict.is_some() || src.vector.is_some();
    let dict = match file_dict {
        Some(d) => Some(d),
        None if need_dict || !from_files => Some(build_dictionary(family, q)?),
        None => None,
    };
    let vector = match file_vec {
        Some(v) => Some(v.vector),
        None if src.vector.is_none() && (src.dict.is_none() || need_dict) => {
            Some(build_null_vector(family, q)?)
        }
        None => None,
    };
    if let (Some(d), Some(v)) = (&dict, &vector) {
        if v.len() != d.n_cols() {
            return Err(CliError::Input(format!(
                "vector has length {}, dictionary has {} columns",
                v.len(),
                d.n_cols()
            )));
        }
    }
    Ok(Loaded {
        family,
        q,
        dict,
        vector,
    })
}

fn finish(report: &mut RunReport, started: Instant) {
    report.timing.elapsed_ms = started.elapsed().as_millis() as u64;
}

fn construct(a: ConstructArgs) -> Result<()> {
    let started = Instant::now();
    let (family, q) = require_target(&a.target)?;
    let d = build_dictionary(family, q)?;
    let x = build_null_vector(family, q)?;
    let mut report = RunReport::new("construct", family.as_str(), q);
    report.set_dictionary(&d);
    report.add_check(&kernel_check(&d, &x));
    let cert = spark_certify(&d, &x)?;
    report.set_certificate(&cert);

    let s = stem(family, q);
    let ext = a.format.extension();
    let dict_path = a.out_dir.join(format!("{s}.dict.{ext}"));
    let vec_path = a.out_dir.join(format!("{s}.null.{ext}"));
    let report_path = a.out_dir.join(format!("{s}.report.json"));
    write(&dict_path, &formats::write_dictionary(&d, a.format))?;
    write(&vec_path, &formats::write_vector(&x, family, q, a.format))?;
    finish(&mut report, started);
    write(&report_path, &report.to_json())?;
    println!(
        "wrote {} ({} x {}, scale_sq = {})",
        dict_path.display(),
        d.dimension(),
        d.n_cols(),
        d.scale_sq()
    );
    println!("wrote {} (support {})", vec_path.display(), x.support_size());
    println!("wrote {}", report_path.display());
    Ok(())
}

fn expected_coherence(family: Family, q: usize) -> Rational {
    Rational::new(1, family.scale_sq(q))
}

fn verify(a: VerifyArgs) -> Result<()> {
    let started = Instant::now();
    let l = load(&a.source, true)?;
    let d = l.dict.as_ref().expect("verify loads a dictionary");
    let mut report = RunReport::new("verify", l.family.as_str(), l.q);
    report.set_dictionary(d);

    let mut checks = construction_checks(l.family, l.q)?;
    checks.extend(dictionary_checks(d));
    let mut coh = CheckReport::new("coherence");
    match coherence(d) {
        Ok(c) => {
            let want = expected_coherence(l.family, l.q);
            coh.check(c.value == want, || format!("mu = {}, expected {want}", c.value));
            report.set_coherence(&c);
        }
        Err(e) => coh.fail(e.to_string()),
    }
    checks.push(coh);
    if let Some(x) = &l.vector {
        checks.push(kernel_check(d, x));
        report.set_null_vector(x.support());
    }
    for c in &checks {
        report.add_check(c);
    }
    finish(&mut report, started);
    if let Some(p) = &a.report {
        write(p, &report.to_json())?;
    }

    let failed = checks.iter().filter(|c| !c.passed()).count();
    if a.format == Some(Format::Json) {
        print!("{}", report.to_json());
    } else {
        for c in &checks {
            println!("{c}");
        }
        if let Some(mu) = &report.coherence {
            println!("coherence mu = {mu}");
        }
        if failed == 0 {
            println!("all {} checks passed", checks.len());
        }
    }
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}

fn list(cols: &[usize]) -> String {
    cols.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
}

fn verdict_line(cert: &SparkCertificate) -> String {
    match cert.verdict {
        Verdict::Exact { spark, by_bound, by_search } => {
            let how = match (by_bound, by_search) {
                (true, true) => "certified + brute force".to_string(),
                (true, false) => {
                    let union = cert.union_bound.is_some_and(|u| u.ceil().to_integer() as usize >= spark);
                    let which = if union { "union-of-bases" } else { "coherence" };
                    format!("certified by {which} bound")
                }
                (false, _) => "brute force".to_string(),
            };
            format!("spark = {spark} ({how})")
        }
        Verdict::Interval { lower, upper } => format!("spark in [{lower}, {upper}]"),
    }
}

fn spark(a: SparkArgs) -> Result<()> {
    let started = Instant::now();
    let l = load(&a.source, true)?;
    let d = l.dict.as_ref().expect("spark loads a dictionary");
    let x = l.vector.as_ref().expect("spark loads a vector");
    let mut report = RunReport::new("spark", l.family.as_str(), l.q);
    report.set_dictionary(d);
    let mut cert = match spark_certify(d, x) {
        Ok(c) => c,
        Err(e @ (DictError::NotInKernel { .. } | DictError::ZeroVector)) => {
            return Err(CliError::Failed(format!("cannot certify: {e}")));
        }
        Err(e) => return Err(e.into()),
    };

    let mut out = String::new();
    writeln!(
        out,
        "{} q = {}: {} x {} dictionary, {} blocks",
        l.family,
        l.q,
        d.dimension(),
        d.n_cols(),
        d.blocks()
    )
    .unwrap();
    writeln!(out, "coherence mu = {}", cert.coherence).unwrap();
    writeln!(out, "coherence bound 1 + 1/mu = {}", cert.coherence_bound).unwrap();
    if let Some(u) = cert.union_bound {
        writeln!(out, "union-of-bases bound (1 + 1/{})/mu = {u}", cert.bases - 1).unwrap();
    }
    writeln!(out, "null vector support {}: columns {}", cert.upper_bound, list(&cert.support)).unwrap();

    let mut warning = None;
    if a.brute_force {
        let budget = budget_from_env(DEFAULT_BUDGET).map_err(CliError::Input)?;
        let k_max = a.k_max.unwrap_or(cert.upper_bound.min(8));
        let workers = a.workers.unwrap_or_else(default_workers);
        let cols = ColumnSet::from_sign_columns(d.columns());
        let outcome = spark_bruteforce(&cols, k_max, workers, budget)
            .map_err(|e| CliError::Failed(format!("brute force: {e}")))?;
        match &outcome.witness {
            Some(w) => writeln!(
                out,
                "brute force: smallest dependent subset has size {}: columns {}",
                w.len(),
                list(w)
            )
            .unwrap(),
            None => {
                let k = outcome.k_checked;
                writeln!(
                    out,
                    "brute force: no dependent subset of size ≤ {k} ({} subsets of size {k}, {} in total)",
                    binomial(d.n_cols(), k),
                    outcome.exhausted_subsets()
                )
                .unwrap();
            }
        }
        if outcome.budget_exhausted {
            warning = Some(format!(
                "warning: subset budget {budget} exhausted; searched sizes ≤ {} of {k_max}",
                outcome.k_checked
            ));
        }
        report.set_brute_force(&outcome, k_max, budget);
        cert = cert.with_search(&outcome);
    }
    report.set_certificate(&cert);
    writeln!(out, "{}", verdict_line(&cert)).unwrap();
    writeln!(out, "eta * mu = {}", cert.tightness_product()).unwrap();
    if let Some(t) = uniqueness_threshold(&cert) {
        writeln!(out, "uniqueness threshold = {t} (a representation with at most {t} nonzeros is the unique sparsest)").unwrap();
    }
    finish(&mut report, started);
    if let Some(p) = &a.report {
        write(p, &report.to_json())?;
    }
    if a.format == Some(Format::Json) {
        print!("{}", report.to_json());
    } else {
        print!("{out}");
    }
    if let Some(w) = warning {
        eprintln!("{w}");
    }
    Ok(())
}

fn render(a: RenderArgs) -> Result<()> {
    let l = load(&a.source, false)?;
    let dense = l.dict.as_ref().map(|d| d.columns().to_dense());
    let strip = l.vector.as_ref().map(SparseVector::to_dense);
    let svg = render_svg(dense.as_deref(), strip.as_deref());
    let path = a
        .out
        .unwrap_or_else(|| a.out_dir.join(format!("{}.svg", stem(l.family, l.q))));
    write(&path, &svg)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn table_header(item: &str, family: Family, q: usize, field: &Field) -> String {
    format!(
        "# spark-forge {item} v1, family={family}, q={q}, order={}\n",
        field.order()
    )
}

fn csv_rows<T: ToString>(rows: impl IntoIterator<Item = Vec<T>>) -> String {
    let mut s = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().map(T::to_string).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn tables_json(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string(&value).expect("tables serialize");
    s.push('\n');
    s
}

fn export(a: ExportArgs) -> Result<()> {
    let (family, q) = require_target(&a.target)?;
    let base = Field::of_order(q).map_err(|e| CliError::Input(e.to_string()))?;
    let ext = match family {
        Family::Base => None,
        Family::Extension => Some(ExtensionField::new(&base).map_err(|e| CliError::Input(e.to_string()))?),
    };
    // tables describe the field the net is built over
    let field = ext.as_ref().map_or(&base, ExtensionField::field);
    let s = stem(family, q);
    let fmt = a.format;
    let wanted = |i: Item| a.item == Item::All || a.item == i;
    let mut files = Vec::new();

    if wanted(Item::Dictionary) {
        let d = build_dictionary(family, q)?;
        files.push((format!("{s}.dict"), formats::write_dictionary(&d, fmt)));
    }
    if wanted(Item::Vector) {
        let x = build_null_vector(family, q)?;
        files.push((format!("{s}.null"), formats::write_vector(&x, family, q, fmt)));
    }
    let idx = |e: spark_forge_core::FieldElement| e.index();
    if wanted(Item::Field) {
        let mul: Vec<Vec<usize>> = field
            .elements()
            .map(|i| field.elements().map(|j| field.mul(i, j).index()).collect())
            .collect();
        let add: Vec<Vec<usize>> = field
            .elements()
            .map(|i| field.elements().map(|j| field.add(i, j).index()).collect())
            .collect();
        let body = match fmt {
            Format::Csv => {
                let mut t = table_header("field", family, q, field);
                t.push_str("# multiplication\n");
                t.push_str(&csv_rows(mul));
                t.push_str("# addition\n");
                t.push_str(&csv_rows(add));
                t
            }
            Format::Json => tables_json(serde_json::json!({
                "item": "field", "family": family.as_str(), "q": q, "order": field.order(),
                "multiplication": mul, "addition": add,
            })),
        };
        files.push((format!("{s}.field"), body));
    }
    if wanted(Item::Latin) {
        let squares = latin_family(field);
        let body = match fmt {
            Format::Csv => {
                let mut t = table_header("latin", family, q, field);
                for sq in &squares {
                    writeln!(t, "# r={}", sq.label()).unwrap();
                    t.push_str(&csv_rows(field.elements().map(|i| sq.row(i).iter().map(|&e| idx(e)).collect())));
                }
                t
            }
            Format::Json => {
                let all: Vec<Vec<Vec<usize>>> = squares
                    .iter()
                    .map(|sq| field.elements().map(|i| sq.row(i).iter().map(|&e| idx(e)).collect()).collect())
                    .collect();
                tables_json(serde_json::json!({
                    "item": "latin", "family": family.as_str(), "q": q, "order": field.order(),
                    "squares": all,
                }))
            }
        };
        files.push((format!("{s}.latin"), body));
    }
    if wanted(Item::AMatrix) {
        let am = a_matrix(field);
        let rows: Vec<Vec<usize>> = field
            .elements()
            .map(|i| am.row(i).iter().map(|&e| idx(e)).collect())
            .collect();
        let body = match fmt {
            Format::Csv => table_header("a-matrix", family, q, field) + &csv_rows(rows),
            Format::Json => tables_json(serde_json::json!({
                "item": "a-matrix", "family": family.as_str(), "q": q, "order": field.order(),
                "entries": rows,
            })),
        };
        files.push((format!("{s}.a_matrix"), body));
    }
    if wanted(Item::Hadamard) {
        let h = permuted_hadamard(field.degree()).map_err(|e| CliError::Input(e.to_string()))?;
        let rows = h.to_dense();
        let labels: Vec<u32> = (0..h.order()).map(|i| h.row_label(i)).collect();
        let body = match fmt {
            Format::Csv => {
                let mut t = table_header("hadamard", family, q, field);
                writeln!(t, "# row labels: {}", list(&labels.iter().map(|&l| l as usize).collect::<Vec<_>>())).unwrap();
                t + &csv_rows(rows)
            }
            Format::Json => tables_json(serde_json::json!({
                "item": "hadamard", "family": family.as_str(), "q": q, "order": field.order(),
                "row_labels": labels, "entries": rows,
            })),
        };
        files.push((format!("{s}.hadamard"), body));
    }

    for (name, body) in files {
        let path = a.out_dir.join(format!("{name}.{}", fmt.extension()));
        write(&path, &body)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
