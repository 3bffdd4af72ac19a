//! Command-line front end for the `minprod` engine.
//!
//! [`run`] takes the full argument list and returns what the process should
//! print and its exit status, so tests can drive it without spawning.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use minprod::analyzer::{self, AnalysisReport, BoundCheck, BoundOutcome, Sourced};
use minprod::catalog::{Builtin, Demand, Fact};
use minprod::composer::{self, ProductExpression, UserCatalog};
use minprod::rational::to_pair_i128;
use minprod::{oracle, parse_expression, Bound, Error, ManifoldDescriptor, ParseError, Rational, Spectrum};
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_INSUFFICIENT: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_BOUND: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "minprod", version, about = "Exact spectra, index and nullity of minimal products in spheres")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Descriptor file to register; its `name` becomes usable as a bare leaf.
    #[arg(long = "catalog", value_name = "FILE", global = true)]
    catalogs: Vec<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Laplace,
    Jacobi,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full analysis: index, nullity, first eigenvalues, bounds, curvature.
    Report { expression: String },
    /// Laplace and Jacobi eigenvalues with multiplicities up to a bound.
    Spectrum {
        expression: String,
        /// Largest eigenvalue to list (default 4n).
        #[arg(long, value_parser = parse_bound)]
        bound: Option<Rational>,
        #[arg(long, value_enum, default_value_t = Kind::Both)]
        kind: Kind,
    },
    /// Morse index.
    Index { expression: String },
    /// Nullity of the Jacobi operator.
    Nullity { expression: String },
    /// First nonzero Laplace eigenvalue.
    Lambda1 { expression: String },
    /// Squared norm of the second fundamental form and scalar curvature.
    Curvature { expression: String },
    /// Runs the brute-force oracle suite.
    Verify {
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Lists builtins, or prints the descriptor file of an expression.
    Catalog {
        expression: Option<String>,
        /// Completeness bound for the emitted spectra.
        #[arg(long, value_parser = parse_bound)]
        bound: Option<Rational>,
    },
}

fn parse_bound(s: &str) -> Result<Rational, String> {
    minprod::parse_rational(s)
}

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug)]
enum Failure {
    Parse(ParseError),
    Core(Error),
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => Failure::Parse(p),
            other => Failure::Core(other),
        }
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Core(Error::InsufficientData(_)) => EXIT_INSUFFICIENT,
            Failure::Core(Error::BoundExceeded { .. }) => EXIT_BOUND,
            Failure::Core(_) | Failure::Checks(_) => EXIT_OTHER,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Parse(p) => p.to_string(),
            Failure::Core(e) => e.to_string(),
            Failure::Checks(s) => s.clone(),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stderr: text, code: EXIT_OTHER, ..Outcome::default() }
            } else {
                Outcome { stdout: text, code: EXIT_OK, ..Outcome::default() }
            };
        }
    };
    let mut out = String::new();
    match execute(&cli, &mut out) {
        Ok(()) => Outcome { stdout: out, code: EXIT_OK, ..Outcome::default() },
        Err(f) => Outcome {
            stdout: out,
            stderr: format!("error: {}\n", f.message()),
            code: f.code(),
        },
    }
}

fn execute(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    let mut catalog = UserCatalog::new();
    for path in &cli.catalogs {
        catalog.load_file(path)?;
    }
    let expression = |src: &str| -> Result<ProductExpression, Failure> {
        let ast = parse_expression(src).map_err(Failure::Parse)?;
        Ok(ProductExpression::resolve(&ast, &catalog)?)
    };
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Report { expression: src } => {
            let report = analyzer::analyze(&expression(src)?)?;
            if json {
                emit_json(out, &report_json(&report)?);
            } else {
                out.push_str(&report_table(&report));
            }
        }
        Command::Spectrum { expression: src, bound, kind } => {
            let expr = expression(src)?;
            let bound = bound.clone().unwrap_or_else(|| minprod::int(4 * expr.dim() as i64));
            spectrum(&expr, &bound, *kind, json, out)?;
        }
        Command::Index { expression: src } => count(&expression(src)?, Fact::Index, json, out)?,
        Command::Nullity { expression: src } => count(&expression(src)?, Fact::Nullity, json, out)?,
        Command::Lambda1 { expression: src } => lambda1(&expression(src)?, json, out)?,
        Command::Curvature { expression: src } => curvature(&expression(src)?, json, out)?,
        Command::Verify { seed } => verify(*seed, json, out)?,
        Command::Catalog { expression: None, .. } => listing(&catalog, json, out),
        Command::Catalog { expression: Some(src), bound } => {
            let demand = bound.as_ref().map_or_else(Demand::none, Demand::uniform);
            let d = composer::evaluate(&expression(src)?, &demand)?;
            out.push_str(&minprod::save_descriptor(&d)?);
        }
    }
    Ok(())
}

fn emit_json(out: &mut String, v: &Value) {
    out.push_str(&serde_json::to_string_pretty(v).expect("JSON values always serialize"));
    out.push('\n');
}

/// A rational as a `[numerator, denominator]` pair.
pub fn rational_json(r: &Rational) -> Result<Value, Error> {
    let (a, b) = to_pair_i128(r).ok_or_else(|| Error::InvalidParameter(format!("{r} does not fit in 128-bit JSON integers")))?;
    let number = |x: i128| {
        serde_json::Number::from_i128(x)
            .map(Value::Number)
            .ok_or_else(|| Error::InvalidParameter(format!("{r} does not fit in 64-bit JSON integers")))
    };
    Ok(Value::Array(vec![number(a)?, number(b)?]))
}

fn sourced(value: Value, provenance: &str) -> Value {
    json!({ "value": value, "provenance": provenance })
}

fn sourced_rational(s: &Option<Sourced<Rational>>) -> Result<Value, Error> {
    Ok(match s {
        Some(s) => sourced(rational_json(&s.value)?, &s.provenance),
        None => Value::Null,
    })
}

fn sourced_count(s: &Option<Sourced<u64>>) -> Value {
    s.as_ref().map_or(Value::Null, |s| sourced(json!(s.value), &s.provenance))
}

fn dimension_provenance(expr_is_leaf: bool) -> (&'static str, &'static str) {
    if expr_is_leaf {
        ("catalog", "catalog")
    } else {
        ("closed-form: n = sum n_j", "closed-form: p = sum p_j + k - 1")
    }
}

fn outcome_word(o: &BoundOutcome) -> &'static str {
    match o {
        BoundOutcome::Checked { satisfied: true } => "satisfied",
        BoundOutcome::Checked { satisfied: false } => "violated",
        BoundOutcome::Skipped(_) => "skipped",
    }
}

fn bound_json(b: &BoundCheck) -> Value {
    let rule = format!("closed-form: {}", b.name);
    let mut m = Map::new();
    m.insert("name".into(), json!(b.name));
    m.insert("required".into(), b.required.map_or(Value::Null, |v| sourced(json!(v), &rule)));
    m.insert(
        "actual".into(),
        b.actual.map_or(Value::Null, |v| sourced(json!(v), "spectral-composition")),
    );
    m.insert("outcome".into(), json!(outcome_word(&b.outcome)));
    if let BoundOutcome::Skipped(reason) = &b.outcome {
        m.insert("reason".into(), json!(reason));
    }
    Value::Object(m)
}

fn is_leaf(report: &AnalysisReport) -> bool {
    !report.expression.starts_with("product(")
}

/// The report as a JSON value; object keys serialize in sorted order.
pub fn report_json(r: &AnalysisReport) -> Result<Value, Error> {
    let (dim_rule, codim_rule) = dimension_provenance(is_leaf(r));
    let breakdown = match &r.breakdown {
        Some(b) => {
            let count = |v: u64, what: &str| sourced(json!(v), &format!("spectral-composition: {what}"));
            json!({
                "factor_index": [count(b.factor_index[0], "first factor index"), count(b.factor_index[1], "second factor index")],
                "factor_nullity": [count(b.factor_nullity[0], "first factor nullity"), count(b.factor_nullity[1], "second factor nullity")],
                "i0": count(b.i0, "normal line block"),
                "i1": count(b.i1, "first normal block"),
                "ihat1": count(b.ihat1, "second normal block"),
                "n0": count(b.n0, "normal line block"),
                "n1": count(b.n1, "first normal block"),
                "nhat1": count(b.nhat1, "second normal block"),
            })
        }
        None => Value::Null,
    };
    Ok(json!({
        "expression": r.expression,
        "dim": sourced(json!(r.dim), dim_rule),
        "codim": sourced(json!(r.codim), codim_rule),
        "index": sourced_count(&r.index),
        "nullity": sourced_count(&r.nullity),
        "mu1": sourced_rational(&r.mu1)?,
        "lambda1": sourced_rational(&r.lambda1)?,
        "by_first_eigenfunctions": r.by_first_eigenfunctions,
        "breakdown": breakdown,
        "bounds": r.bounds.iter().map(bound_json).collect::<Vec<_>>(),
        "s": sourced_rational(&r.s)?,
        "s_constant": r.s_constant,
        "r": sourced_rational(&r.r)?,
        "killing_dim": sourced_count(&r.killing_dim),
        "degenerate": r.degenerate,
        "classification": r.classification.map(|c| c.to_string()),
        "missing": r.missing,
    }))
}

fn row(out: &mut String, label: &str, value: impl std::fmt::Display, note: &str) {
    if note.is_empty() {
        let _ = writeln!(out, "{label:<24} {value}");
    } else {
        let _ = writeln!(out, "{label:<24} {value:<12} [{note}]");
    }
}

fn flag(b: Option<bool>) -> String {
    b.map_or_else(|| "unknown".into(), |b| b.to_string())
}

fn sourced_row<T: std::fmt::Display>(out: &mut String, label: &str, s: &Option<Sourced<T>>, missing: Option<&String>) {
    match (s, missing) {
        (Some(s), _) => row(out, label, &s.value, &s.provenance),
        (None, Some(why)) => row(out, label, "unavailable", why),
        (None, None) => row(out, label, "n/a", ""),
    }
}

pub fn report_table(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let (dim_rule, codim_rule) = dimension_provenance(is_leaf(r));
    row(&mut out, "expression", &r.expression, "");
    row(&mut out, "dim", r.dim, dim_rule);
    row(&mut out, "codim", r.codim, codim_rule);
    sourced_row(&mut out, "index", &r.index, r.missing.get("index"));
    sourced_row(&mut out, "nullity", &r.nullity, r.missing.get("nullity"));
    sourced_row(&mut out, "mu1", &r.mu1, r.missing.get("mu1"));
    sourced_row(&mut out, "lambda1", &r.lambda1, r.missing.get("lambda1"));
    row(&mut out, "by first eigenfunctions", flag(r.by_first_eigenfunctions), "");
    sourced_row(&mut out, "S", &r.s, r.missing.get("S"));
    if r.s.is_some() {
        let kind = match r.s_constant {
            Some(true) => "constant",
            Some(false) => "average",
            None => "unknown",
        };
        row(&mut out, "S kind", kind, "");
    }
    sourced_row(&mut out, "R", &r.r, None);
    sourced_row(&mut out, "killing dim", &r.killing_dim, None);
    row(&mut out, "degenerate", flag(r.degenerate), "");
    if let Some(c) = r.classification {
        row(&mut out, "classification", c, "");
    }
    if let Some(b) = &r.breakdown {
        out.push_str("\nbreakdown\n");
        row(&mut out, "  factor index", format!("{} + {}", b.factor_index[0], b.factor_index[1]), "");
        row(&mut out, "  factor nullity", format!("{} + {}", b.factor_nullity[0], b.factor_nullity[1]), "");
        row(&mut out, "  I0 I1 I1^", format!("{} {} {}", b.i0, b.i1, b.ihat1), "");
        row(&mut out, "  N0 N1 N1^", format!("{} {} {}", b.n0, b.n1, b.nhat1), "");
    } else if let Some(why) = r.missing.get("breakdown") {
        out.push_str("\nbreakdown unavailable: ");
        out.push_str(why);
        out.push('\n');
    }
    if !r.bounds.is_empty() {
        out.push_str("\nlower bounds\n");
        for b in &r.bounds {
            let show = |v: Option<u64>| v.map_or_else(|| "?".to_string(), |v| v.to_string());
            let detail = format!("{} vs {}", show(b.actual), show(b.required));
            let status = match &b.outcome {
                BoundOutcome::Skipped(reason) => format!("skipped: {reason}"),
                o => outcome_word(o).to_string(),
            };
            let _ = writeln!(out, "  {:<44} {:<12} {status}", b.name, detail);
        }
    }
    out
}

fn spectrum_in_range(spec: &Spectrum, bound: &Rational, context: String) -> Result<Spectrum, Error> {
    if !spec.bound().covers(bound) {
        return Err(Error::BoundExceeded {
            context,
            requested: bound.clone(),
            available: spec.bound().clone(),
        });
    }
    Ok(spec.truncate(&Bound::Finite(bound.clone())))
}

fn spectrum_json(spec: &Spectrum) -> Result<Value, Error> {
    let entries = spec
        .entries()
        .iter()
        .map(|(v, m)| Ok(json!({ "value": rational_json(v)?, "multiplicity": m })))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Value::Array(entries))
}

fn spectrum_table(out: &mut String, title: &str, spec: &Spectrum) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "  {:<16} multiplicity", "value");
    for (v, m) in spec.entries() {
        let _ = writeln!(out, "  {:<16} {m}", v.to_string());
    }
}

fn spectrum(expr: &ProductExpression, bound: &Rational, kind: Kind, json: bool, out: &mut String) -> Result<(), Error> {
    let d = composer::evaluate(expr, &Demand::uniform(bound))?;
    let mut doc = Map::new();
    doc.insert("expression".into(), json!(expr.to_string()));
    doc.insert("bound".into(), rational_json(bound)?);
    let mut text = String::new();
    let _ = writeln!(text, "{expr} through {bound}");
    let wanted = |k: Kind| kind == Kind::Both || kind == k;
    if wanted(Kind::Laplace) {
        let lap = spectrum_in_range(d.laplace.require()?, bound, format!("Laplace spectrum of {}", d.name))?;
        doc.insert("laplace".into(), spectrum_json(&lap)?);
        text.push('\n');
        spectrum_table(&mut text, "laplace", &lap);
    }
    if wanted(Kind::Jacobi) {
        match d.jacobi.require() {
            Ok(jac) => {
                let jac = spectrum_in_range(jac, bound, format!("Jacobi spectrum of {}", d.name))?;
                doc.insert("jacobi".into(), spectrum_json(&jac)?);
                text.push('\n');
                spectrum_table(&mut text, "jacobi", &jac);
            }
            // only an explicit request for the Jacobi spectrum makes this fatal
            Err(e) if kind == Kind::Both => {
                doc.insert("jacobi".into(), json!({ "unavailable": e.to_string() }));
                let _ = writeln!(text, "\njacobi unavailable: {e}");
            }
            Err(e) => return Err(e),
        }
    }
    if json {
        emit_json(out, &Value::Object(doc));
    } else {
        out.push_str(&text);
    }
    Ok(())
}

fn jacobi_ready(expr: &ProductExpression) -> Result<ManifoldDescriptor, Error> {
    composer::evaluate(
        expr,
        &Demand {
            laplace: None,
            jacobi: Some(Rational::default()),
        },
    )
}

fn provenance(expr: &ProductExpression, d: &ManifoldDescriptor, fact: Fact, spectral: &str) -> String {
    match (expr, d.provenance_of(fact)) {
        (ProductExpression::Leaf(_), Some(p)) => p.to_string(),
        _ => spectral.to_string(),
    }
}

fn emit_sourced(out: &mut String, json: bool, label: &str, value: Value, shown: String, prov: &str) {
    if json {
        emit_json(out, &json!({ label: sourced(value, prov) }));
    } else {
        row(out, label, shown, prov);
    }
}

fn count(expr: &ProductExpression, fact: Fact, json: bool, out: &mut String) -> Result<(), Error> {
    let d = jacobi_ready(expr)?;
    let (label, value, spectral) = match fact {
        Fact::Index => ("index", analyzer::index(&d)?, "spectral-composition: negative Jacobi eigenvalues"),
        _ => ("nullity", analyzer::nullity(&d)?, "spectral-composition: zero Jacobi eigenvalues"),
    };
    let prov = provenance(expr, &d, fact, spectral);
    emit_sourced(out, json, label, json!(value), value.to_string(), &prov);
    Ok(())
}

fn lambda1(expr: &ProductExpression, json: bool, out: &mut String) -> Result<(), Error> {
    let d = composer::evaluate(expr, &Demand::none())?;
    let value = d
        .lambda1
        .clone()
        .ok_or_else(|| Error::InsufficientData(format!("λ₁ of {} unknown", d.name)))?;
    let prov = d.provenance_of(Fact::Lambda1).map_or_else(|| "spectral-composition".into(), |p| p.to_string());
    if json {
        emit_json(
            out,
            &json!({
                "lambda1": sourced(rational_json(&value)?, &prov),
                "by_first_eigenfunctions": d.flags.by_first_eigenfunctions,
            }),
        );
    } else {
        row(out, "lambda1", &value, &prov);
        row(out, "by first eigenfunctions", flag(d.flags.by_first_eigenfunctions), "");
    }
    Ok(())
}

fn curvature(expr: &ProductExpression, json: bool, out: &mut String) -> Result<(), Error> {
    let d = composer::evaluate(expr, &Demand::none())?;
    let s = composer::second_fundamental(expr)?;
    let s_prov = d.provenance_of(Fact::S).map_or_else(|| "closed-form".into(), |p| p.to_string());
    let r = composer::scalar_curvature(&d);
    let mut doc = Map::new();
    let mut text = String::new();
    match s.value() {
        Some(v) => {
            doc.insert("s".into(), sourced(rational_json(v)?, &s_prov));
            doc.insert("s_constant".into(), json!(s.is_constant()));
            row(&mut text, "S", v, &s_prov);
            row(&mut text, "S kind", if s.is_constant() { "constant" } else { "average" }, "");
        }
        None => {
            doc.insert("s".into(), Value::Null);
            row(&mut text, "S", "unknown", "");
        }
    }
    const R_RULE: &str = "closed-form: R = n(n-1) - S";
    match &r {
        Some(v) => {
            doc.insert("r".into(), sourced(rational_json(v)?, R_RULE));
            row(&mut text, "R", v, R_RULE);
        }
        None => {
            doc.insert("r".into(), Value::Null);
        }
    }
    if let ProductExpression::Product(_) = expr {
        let avg = analyzer::average_s_identity(expr)?;
        const AVG_RULE: &str = "closed-form: S >= (k-1)n";
        doc.insert("s_lower_bound".into(), sourced(rational_json(&avg.lower_bound)?, AVG_RULE));
        doc.insert("s_equality".into(), json!(avg.equality));
        row(&mut text, "S lower bound", &avg.lower_bound, AVG_RULE);
        row(&mut text, "equality", flag(avg.equality), "");
        if let Some((d1, d2)) = composer::factor_pair(expr, &Rational::default())? {
            match analyzer::constant_s_classify(&d1, &d2) {
                Ok((class, _)) => {
                    doc.insert("classification".into(), json!(class.to_string()));
                    row(&mut text, "classification", class, "");
                }
                Err(e) => {
                    doc.insert("classification".into(), Value::Null);
                    row(&mut text, "classification", "unavailable", &e.to_string());
                }
            }
            let ratio = composer::scalar_ratio_identity(&d, &d1, &d2);
            doc.insert("ratio_identity".into(), json!(ratio));
            row(&mut text, "ratio identity holds", flag(ratio), "");
        }
    }
    if json {
        emit_json(out, &Value::Object(doc));
    } else {
        out.push_str(&text);
    }
    Ok(())
}

fn verify(seed: u64, json: bool, out: &mut String) -> Result<(), Failure> {
    let checks = oracle::verify_all(seed);
    if json {
        let doc: Vec<Value> = checks
            .iter()
            .map(|c| json!({ "name": c.name, "cases": c.cases, "passed": c.passed(), "failures": c.failures }))
            .collect();
        emit_json(out, &Value::Array(doc));
    } else {
        for c in &checks {
            let _ = writeln!(out, "{c}");
            for f in c.failures.iter().take(10) {
                let _ = writeln!(out, "  {f}");
            }
        }
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        return Err(Failure::Checks(format!("{failed} oracle check(s) failed")));
    }
    Ok(())
}

fn listing(catalog: &UserCatalog, json: bool, out: &mut String) {
    let builtins: Vec<(String, u32)> = Builtin::listing().iter().map(|b| (b.to_string(), b.dim())).collect();
    let user: Vec<(String, u32)> = catalog.iter().map(|d| (d.name.clone(), d.dim)).collect();
    if json {
        let entries = |list: &[(String, u32)]| -> Vec<Value> {
            list.iter().map(|(name, dim)| json!({ "name": name, "dim": dim })).collect()
        };
        emit_json(out, &json!({ "builtin": entries(&builtins), "user": entries(&user) }));
        return;
    }
    out.push_str("builtin\n");
    for (name, dim) in &builtins {
        let _ = writeln!(out, "  {name:<28} dim {dim}");
    }
    if !user.is_empty() {
        out.push_str("user\n");
        for (name, dim) in &user {
            let _ = writeln!(out, "  {name:<28} dim {dim}");
        }
    }
}

