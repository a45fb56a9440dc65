//! Request handling and reporting for the `rootval` command line tool.
//!
//! [`run`] turns a [`Request`] into a report and an exit code. Reports are
//! JSON objects with sorted keys, so identical requests give identical bytes.

pub mod text;

use std::fmt::Write as _;

use rootval::branch::{
    branch_exponents, branch_pairs, branch_semigroup, conjugate_difference_valuation, intersection_number,
    invert_parametrization, standard_branch, Branch, CharPairs,
};
use rootval::certificate::LocalQuotientCertificate;
use rootval::disc::{build_miniversal, compose_with_phi, discriminant_polynomial, verify_rank_and_nash};
use rootval::local::{analyze_germ, germ_branch_data};
use rootval::spectral::{
    aggregate_invariants, eigen_expansions, equisingularity_datum, equisingularity_isomorphism, root_valuation_datum,
    verify_gkm_lemma, EquisingularityDatum, MatrixSeries, RootValuationDatum, Verdict,
};
use rootval::{Error, ErrorClass, Rational, Result};
use serde_json::{json, Map, Value};

use crate::text::{
    format_branch, format_matrix, format_polynomial, format_rat, parse_branch, parse_germ, parse_matrix,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

pub const MIN_PRECISION: i64 = 4;
pub const DEFAULT_SAMPLES: &str = "1,2,-1,1/2";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Invariants,
    Branch,
    Rootval,
    Equising,
    Intersect,
    GkmCheck,
    DiscDemo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::Branch => "branch",
            Command::Rootval => "rootval",
            Command::Equising => "equising",
            Command::Intersect => "intersect",
            Command::GkmCheck => "gkm-check",
            Command::DiscDemo => "disc-demo",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Raw textual inputs; which ones a command reads is documented per command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Inputs {
    pub poly: Option<String>,
    pub branches: Vec<String>,
    pub matrix: Option<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub n: Option<usize>,
    pub samples: Option<String>,
    /// Contents of an input file, used when the inline input is absent.
    pub file: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Request {
    pub command: Command,
    pub inputs: Inputs,
    pub format: Format,
    pub precision: Option<i64>,
}

impl Request {
    pub fn new(command: Command, inputs: Inputs) -> Self {
        Request { command, inputs, format: Format::Json, precision: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Response {
    pub exit_code: i32,
    pub output: String,
}

struct Report {
    inputs_echo: Value,
    result: Value,
    certificates: Value,
    warnings: Vec<String>,
    /// Set when a checked implication or identity failed.
    violated: bool,
}

pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Input => EXIT_INPUT,
        ErrorClass::Precision => EXIT_PRECISION,
        ErrorClass::Internal => EXIT_INTERNAL,
    }
}

pub fn run(req: &Request) -> Response {
    match execute(req) {
        Ok(report) => {
            let mut obj = Map::new();
            obj.insert("command".into(), json!(req.command.name()));
            obj.insert("inputs_echo".into(), report.inputs_echo);
            obj.insert("result".into(), report.result);
            obj.insert("certificates".into(), report.certificates);
            obj.insert("warnings".into(), json!(report.warnings));
            let value = Value::Object(obj);
            let exit_code = if report.violated { EXIT_INTERNAL } else { EXIT_OK };
            Response { exit_code, output: render(&value, req.format) }
        }
        Err(e) => Response { exit_code: exit_code(&e), output: render(&error_value(&e), req.format) },
    }
}

pub fn error_value(e: &Error) -> Value {
    let mut obj = Map::new();
    obj.insert("error".into(), json!(e.kind()));
    obj.insert("detail".into(), json!(e.to_string()));
    if let Some(at) = e.location() {
        obj.insert("location".into(), json!(at));
    }
    Value::Object(obj)
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("serializable report");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            render_text(value, 0, &mut out);
            out
        }
    }
}

fn render_text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(m) if !m.is_empty() => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_text(v, indent + 1, out);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", inline(v));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", inline(other));
        }
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => {
            let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}: {}", inline(v))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn execute(req: &Request) -> Result<Report> {
    if let Some(p) = req.precision {
        if p < MIN_PRECISION {
            return Err(Error::InvalidInput(format!("precision must be at least {MIN_PRECISION}, got {p}")));
        }
    }
    let mut report = match req.command {
        Command::Invariants => invariants(req),
        Command::Branch => branch(req),
        Command::Rootval => rootval(req),
        Command::Equising => equising(req),
        Command::Intersect => intersect(req),
        Command::GkmCheck => gkm_check(req),
        Command::DiscDemo => disc_demo(req),
    }?;
    if let (Some(p), Value::Object(echo)) = (req.precision, &mut report.inputs_echo) {
        echo.insert("precision".into(), json!(p));
    }
    Ok(report)
}

fn missing(what: &str) -> Error {
    Error::InvalidInput(format!("missing input: {what}"))
}

fn primary_text(inline: &Option<String>, file: &Option<String>, what: &str) -> Result<String> {
    inline.clone().or_else(|| file.clone()).map(|s| s.trim().to_string()).ok_or_else(|| missing(what))
}

/// Inline `--branch` values, or the non-empty lines of the input file.
fn branch_texts(inputs: &Inputs) -> Vec<String> {
    if !inputs.branches.is_empty() {
        return inputs.branches.clone();
    }
    inputs
        .file
        .as_deref()
        .map(|f| f.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
        .unwrap_or_default()
}

/// `--a`/`--b`, or the first two non-empty lines of the input file.
fn comparison_texts(inputs: &Inputs) -> Result<(String, String)> {
    if let (Some(a), Some(b)) = (&inputs.a, &inputs.b) {
        return Ok((a.clone(), b.clone()));
    }
    if inputs.a.is_some() || inputs.b.is_some() {
        return Err(missing("both --a and --b"));
    }
    let lines: Vec<String> = inputs
        .file
        .as_deref()
        .map(|f| f.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
        .unwrap_or_default();
    match lines.as_slice() {
        [a, b] => Ok((a.clone(), b.clone())),
        _ => Err(missing("two objects to compare (--a and --b)")),
    }
}

/// Never extends a branch beyond its declared truncation.
fn cap_branch(b: Branch, precision: Option<i64>) -> Result<Branch> {
    match precision {
        Some(p) if b.trunc().is_none_or(|t| p < t) => Branch::new(b.d(), b.y().truncated(p)),
        _ => Ok(b),
    }
}

fn parse_branches(texts: &[String], precision: Option<i64>) -> Result<Vec<Branch>> {
    texts.iter().map(|t| cap_branch(parse_branch(t)?, precision)).collect()
}

fn rat(q: &Rational) -> Value {
    json!(format_rat(q))
}

fn certificate(c: &LocalQuotientCertificate) -> Value {
    json!({
        "value": c.value,
        "stabilized_at": c.stabilized_at,
        "rechecked_at": c.rechecked_at,
        "method": c.method.name(),
    })
}

fn w_cycles(datum: &RootValuationDatum) -> Value {
    json!(datum.cycles().iter().map(|c| c.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn r_matrix(datum: &RootValuationDatum) -> Value {
    let d = datum.size();
    let rows: Vec<Vec<String>> =
        (0..d).map(|i| (0..d).map(|j| datum.r(i, j).map(format_rat).unwrap_or_default()).collect()).collect();
    json!(rows)
}

fn rootval_value(datum: &RootValuationDatum) -> Value {
    json!({ "w_cycles": w_cycles(datum), "r": r_matrix(datum) })
}

fn equising_value(e: &EquisingularityDatum) -> Value {
    json!({
        "branches": e.branches.iter().map(CharPairs::to_string).collect::<Vec<_>>(),
        "inter": inter_value(&e.inter),
    })
}

/// Intersection matrix with `null` on the diagonal.
fn inter_value(inter: &[Vec<u64>]) -> Value {
    let rows: Vec<Value> = inter
        .iter()
        .enumerate()
        .map(|(i, row)| {
            json!(row.iter().enumerate().map(|(j, v)| if i == j { Value::Null } else { json!(v) }).collect::<Vec<_>>())
        })
        .collect();
    json!(rows)
}

fn branch_list(bs: &[Branch]) -> Value {
    json!(bs.iter().map(format_branch).collect::<Vec<_>>())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn invariants(req: &Request) -> Result<Report> {
    let src = primary_text(&req.inputs.poly, &req.inputs.file, "--poly")?;
    let f = parse_germ(&src)?;
    let g = analyze_germ(&f, req.precision)?;
    let datum = EquisingularityDatum::new(g.germ.pairs.clone(), g.germ.inter.clone())?;
    let agg = aggregate_invariants(&datum)?;
    let r = g.germ.branches.len() as u64;
    let (mu, delta) = (g.mu.value, g.delta.value);
    let relation = mu + r == 2 * delta + 1 && agg.delta == delta && agg.milnor == mu;
    let mut warnings = Vec::new();
    if mu == 0 {
        warnings.push("NotSingular: the germ is smooth at the origin".to_string());
    }
    if g.germ.shear != 0 {
        warnings.push(format!("branches computed after the coordinate change x -> x + {}*y", g.germ.shear));
    }
    Ok(Report {
        inputs_echo: json!({ "poly": format_polynomial(&f) }),
        result: json!({
            "mu": mu,
            "tau": g.tau.value,
            "delta": delta,
            "branch_count": r,
            "milnor_relation_check": verdict(relation),
        }),
        certificates: json!({
            "mu": certificate(&g.mu),
            "tau": certificate(&g.tau),
            "delta": certificate(&g.delta),
            "aggregate": {
                "delta": agg.delta,
                "milnor": agg.milnor,
                "branch_deltas": agg.branch_deltas,
            },
            "branches": branch_list(&g.germ.branches),
            "equisingularity": equising_value(&datum),
            "shear": g.germ.shear,
            "expansion_precision": g.germ.precision,
        }),
        warnings,
        violated: !relation,
    })
}

fn branch(req: &Request) -> Result<Report> {
    let texts = branch_texts(&req.inputs);
    let [text] = texts.as_slice() else {
        return Err(Error::InvalidInput(format!("branch takes exactly one --branch, got {}", texts.len())));
    };
    let b = cap_branch(parse_branch(text)?, req.precision)?;
    let pairs = branch_pairs(&b)?;
    let exponents = branch_exponents(&b)?;
    let mut counts: std::collections::BTreeMap<Rational, u64> = std::collections::BTreeMap::new();
    for j in 1..b.d() {
        *counts.entry(conjugate_difference_valuation(&b, j)?).or_insert(0) += 1;
    }
    let valuations: Vec<Value> = counts.iter().map(|(v, c)| json!({ "value": format_rat(v), "count": c })).collect();
    let mut warnings = Vec::new();
    let semigroup = match branch_semigroup(&b) {
        Ok(s) => s,
        Err(Error::InsufficientPrecision(_)) => {
            warnings.push("semigroup computed from the characteristic pairs on a unit-coefficient branch".to_string());
            branch_semigroup(&standard_branch(&pairs))?
        }
        Err(e) => return Err(e),
    };
    let inverted = match invert_parametrization(&pairs) {
        Ok(p) => json!(p.to_string()),
        Err(_) => Value::Null,
    };
    Ok(Report {
        inputs_echo: json!({ "branch": format_branch(&b) }),
        result: json!({
            "ramification": b.d(),
            "exponents": exponents.to_string(),
            "pairs": pairs.to_string(),
            "inverted_pairs": inverted,
            "conjugate_valuations": valuations,
            "delta": semigroup.certificate.value,
            "conductor": semigroup.conductor,
            "semigroup_generators": semigroup.generators,
        }),
        certificates: json!({ "delta": certificate(&semigroup.certificate) }),
        warnings,
        violated: false,
    })
}

fn rootval(req: &Request) -> Result<Report> {
    let (branches, echo) =
        if req.inputs.matrix.is_some() || (req.inputs.branches.is_empty() && req.inputs.file.is_some()) {
            let src = primary_text(&req.inputs.matrix, &req.inputs.file, "--matrix")?;
            let m = parse_matrix(&src)?;
            (eigen_expansions(&m, req.precision)?, json!({ "matrix": format_matrix(&m) }))
        } else if !req.inputs.branches.is_empty() {
            let bs = parse_branches(&req.inputs.branches, req.precision)?;
            let echo = json!({ "branches": branch_list(&bs) });
            (bs, echo)
        } else {
            return Err(missing("--matrix or --branch"));
        };
    let datum = root_valuation_datum(&branches)?;
    Ok(Report {
        inputs_echo: echo,
        result: rootval_value(&datum),
        certificates: json!({ "branches": branch_list(&branches) }),
        warnings: Vec::new(),
        violated: false,
    })
}

/// A comparison operand: a matrix (`d=…`), branches separated by `|`, or a
/// germ polynomial.
fn operand_branches(src: &str, precision: Option<i64>) -> Result<(Vec<Branch>, Value)> {
    let src = src.trim();
    if src.starts_with("d=") || src.starts_with("d =") {
        let m = parse_matrix(src)?;
        Ok((eigen_expansions(&m, precision)?, json!(format_matrix(&m))))
    } else if src.contains('=') {
        let texts: Vec<String> = src.split('|').map(|s| s.trim().to_string()).collect();
        let bs = parse_branches(&texts, precision)?;
        let echo = json!(bs.iter().map(format_branch).collect::<Vec<_>>().join(" | "));
        Ok((bs, echo))
    } else {
        let f = parse_germ(src)?;
        let g = germ_branch_data(&f, precision)?;
        Ok((g.branches, json!(format_polynomial(&f))))
    }
}

fn equising(req: &Request) -> Result<Report> {
    let (sa, sb) = comparison_texts(&req.inputs)?;
    let (ba, ea) = operand_branches(&sa, req.precision)?;
    let (bb, eb) = operand_branches(&sb, req.precision)?;
    let da = equisingularity_datum(&ba)?;
    let db = equisingularity_datum(&bb)?;
    let witness = equisingularity_isomorphism(&da, &db);
    let mut result = Map::new();
    result.insert("equal".into(), json!(witness.is_some()));
    if let Some(w) = &witness {
        result.insert("witness_bijection".into(), json!(w.iter().map(|i| i + 1).collect::<Vec<_>>()));
    }
    Ok(Report {
        inputs_echo: json!({ "a": ea, "b": eb }),
        result: Value::Object(result),
        certificates: json!({ "a": equising_value(&da), "b": equising_value(&db) }),
        warnings: Vec::new(),
        violated: false,
    })
}

fn intersect(req: &Request) -> Result<Report> {
    let texts = branch_texts(&req.inputs);
    if texts.len() != 2 {
        return Err(Error::InvalidInput(format!("intersect takes exactly two --branch values, got {}", texts.len())));
    }
    let bs = parse_branches(&texts, req.precision)?;
    let number = intersection_number(&bs[0], &bs[1])?;
    Ok(Report {
        inputs_echo: json!({ "branches": branch_list(&bs) }),
        result: json!({ "number": number }),
        certificates: json!({}),
        warnings: Vec::new(),
        violated: false,
    })
}

fn gkm_check(req: &Request) -> Result<Report> {
    let (sa, sb) = comparison_texts(&req.inputs)?;
    let ma: MatrixSeries = parse_matrix(&sa)?;
    let mb: MatrixSeries = parse_matrix(&sb)?;
    let report = verify_gkm_lemma(&ma, &mb, req.precision)?;
    let failed = report.implication == Verdict::Fail;
    let mut warnings = Vec::new();
    if report.equising_equal && !report.rootval_equal {
        warnings.push("equisingular with different root valuation data; the converse is not asserted".to_string());
    }
    Ok(Report {
        inputs_echo: json!({ "a": format_matrix(&ma), "b": format_matrix(&mb) }),
        result: json!({
            "rootval_equal": report.rootval_equal,
            "equising_equal": report.equising_equal,
            "implication": report.implication.name(),
        }),
        certificates: json!({
            "a": {
                "branches": branch_list(&report.branches.0),
                "rootval": rootval_value(&report.rootval.0),
                "equising": equising_value(&report.equising.0),
            },
            "b": {
                "branches": branch_list(&report.branches.1),
                "rootval": rootval_value(&report.rootval.1),
                "equising": equising_value(&report.equising.1),
            },
            "rootval_witness": report.rootval_witness.map(|w| w.iter().map(|i| i + 1).collect::<Vec<_>>()),
            "equising_witness": report.equising_witness.map(|w| w.iter().map(|i| i + 1).collect::<Vec<_>>()),
        }),
        warnings,
        violated: failed,
    })
}

fn disc_demo(req: &Request) -> Result<Report> {
    let n = req.inputs.n.ok_or_else(|| missing("--n"))?;
    let samples_text = req.inputs.samples.clone().unwrap_or_else(|| DEFAULT_SAMPLES.to_string());
    let samples = text::parse_samples(&samples_text)?;
    let m = build_miniversal(n)?;
    let disc = discriminant_polynomial(&m)?;
    let annihilated = compose_with_phi(&m, &disc).is_zero();
    let nash = verify_rank_and_nash(&m, &samples)?;
    let applicable = |ok: bool| if nash.applicable { verdict(ok) } else { "N/A" };
    let sample_values: Vec<Value> = nash
        .samples
        .iter()
        .map(|s| {
            json!({
                "x": format_rat(&s.x),
                "rank": s.rank,
                "hyperplane": s.hyperplane.iter().map(|row| row.iter().map(rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut warnings = Vec::new();
    if !nash.applicable {
        warnings.push("n = 2: the critical locus is a point, sample checks do not apply".to_string());
    }
    Ok(Report {
        inputs_echo: json!({
            "n": n,
            "samples": samples.iter().map(format_rat).collect::<Vec<_>>(),
        }),
        result: json!({
            "n": n,
            "discriminant": format_polynomial(&disc),
            "checks": {
                "phi_annihilates": verdict(annihilated),
                "rank_at_least_n_minus_2": applicable(nash.rank_ok()),
                "depends_only_on_x": applicable(nash.depends_only_on_x()),
                "injective": applicable(nash.injective),
            },
        }),
        certificates: json!({
            "family": format_polynomial(m.family()),
            "parametrization": m.phi().iter().map(format_polynomial).collect::<Vec<_>>(),
            "samples": sample_values,
            "failure": nash.failure.as_ref().map(format_rat),
        }),
        warnings,
        violated: !annihilated || !nash.passed(),
    })
}
