//! Report assembly for the `floerkit` command-line tool.
//!
//! Every command returns a JSON document carrying `schema_version` and
//! `command`.  Object keys are emitted in sorted order, so two runs with the
//! same inputs and seed produce byte-identical output.  Errors carry a kind
//! that fixes the process exit code: 2 for unreadable or invalid input, 3
//! when the working precision cannot decide, 4 when a search or field budget
//! is exhausted and 1 for any other failure.

pub mod selftest;

use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::coeff::{CoeffError, Field, FiniteField, NumberField, Rat};
use crate::filtered::{
    bottleneck_distance, parse_complex, AnyComplex, FilteredComplex, FilteredError, Generator,
};
use crate::novikov::{LinalgError, NovikovError, NovikovSeries};
use crate::polytope::{parse_polytope, presets, Polytope, PolytopeError};
use crate::potential::{
    build_fiber_potential, build_ghv, certify_convenient, classify_inside, classify_inside_with_offset,
    critical_points, ks_evaluate, ks_surjectivity_check, multi_indices, search_convenient_bulk, BulkDeformation,
    CriticalSet, PotentialError, SearchOptions, DEFAULT_FIELD_BUDGET,
};
use crate::semisimple::{
    certify_semisimple, discriminant_valuation, exclusion_primes, from_critical_set, mod_p_transfer, parse_algebra,
    parse_series, AlgebraOverNovikov, Element, SemisimpleError,
};
use crate::tate::{quasi_frobenius_check, BorelMorseComplex, TateError};

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Package version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Primes used by `pipeline` when none are given.
pub const DEFAULT_PRIMES: [u64; 4] = [5, 7, 11, 13];

/// Preset names accepted in addition to [`presets::NAMES`].
pub const EXTRA_PRESETS: [&str; 2] = ["cp3", "cp1xcp1"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Precision,
    Budget,
    Failure,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Parse => 2,
            ErrorKind::Precision => 3,
            ErrorKind::Budget => 4,
            ErrorKind::Failure => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Parse => "parse",
            ErrorKind::Precision => "precision",
            ErrorKind::Budget => "budget",
            ErrorKind::Failure => "failure",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        CliError::new(ErrorKind::Parse, message)
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    /// Error document for `command`.
    pub fn to_json(&self, command: &str) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "error": {"kind": self.kind.as_str(), "message": self.message, "exit_code": self.exit_code()},
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind.as_str(), self.message)
    }
}

impl std::error::Error for CliError {}

fn novikov_kind(e: &NovikovError) -> ErrorKind {
    match e {
        NovikovError::Parse(_) => ErrorKind::Parse,
        NovikovError::IndeterminateValuation(_) => ErrorKind::Precision,
        NovikovError::Coeff(c) => coeff_kind(c),
        _ => ErrorKind::Failure,
    }
}

fn coeff_kind(e: &CoeffError) -> ErrorKind {
    match e {
        CoeffError::FieldBudgetExceeded { .. } => ErrorKind::Budget,
        _ => ErrorKind::Failure,
    }
}

fn linalg_kind(e: &LinalgError) -> ErrorKind {
    match e {
        LinalgError::PrecisionInsufficient => ErrorKind::Precision,
        LinalgError::Novikov(n) => novikov_kind(n),
        LinalgError::Singular => ErrorKind::Failure,
    }
}

impl From<PolytopeError> for CliError {
    fn from(e: PolytopeError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<PotentialError> for CliError {
    fn from(e: PotentialError) -> Self {
        let kind = match &e {
            PotentialError::Parse(_)
            | PotentialError::ZeroBulkCoefficient { .. }
            | PotentialError::NotGaussianInteger { .. }
            | PotentialError::BulkLengthMismatch { .. }
            | PotentialError::NotInterior
            | PotentialError::NotDelzant => ErrorKind::Parse,
            PotentialError::PrecisionInsufficient => ErrorKind::Precision,
            PotentialError::FieldBudgetExceeded { .. } | PotentialError::SearchExhausted { .. } => ErrorKind::Budget,
            PotentialError::Novikov(n) => novikov_kind(n),
            PotentialError::Linalg(l) => linalg_kind(l),
            PotentialError::Coeff(c) => coeff_kind(c),
            _ => ErrorKind::Failure,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<FilteredError> for CliError {
    fn from(e: FilteredError) -> Self {
        let kind = match &e {
            FilteredError::Parse(_) | FilteredError::Invalid(_) | FilteredError::ChainLength { .. } => {
                ErrorKind::Parse
            }
            FilteredError::Novikov(n) => novikov_kind(n),
            FilteredError::Linalg(l) => linalg_kind(l),
            FilteredError::Coeff(c) => coeff_kind(c),
            _ => ErrorKind::Failure,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<SemisimpleError> for CliError {
    fn from(e: SemisimpleError) -> Self {
        CliError::new(semisimple_kind(&e), e.to_string())
    }
}

fn semisimple_kind(e: &SemisimpleError) -> ErrorKind {
    match e {
        SemisimpleError::Parse(_)
        | SemisimpleError::Shape(_)
        | SemisimpleError::UnitAxiom { .. }
        | SemisimpleError::NotAssociative { .. } => ErrorKind::Parse,
        SemisimpleError::PrecisionInsufficient | SemisimpleError::DiscriminantZeroToPrecision => {
            ErrorKind::Precision
        }
        SemisimpleError::FieldBudgetExceeded { .. } => ErrorKind::Budget,
        SemisimpleError::Novikov(n) => novikov_kind(n),
        SemisimpleError::Linalg(l) => linalg_kind(l),
        SemisimpleError::Coeff(c) => coeff_kind(c),
        _ => ErrorKind::Failure,
    }
}

impl From<TateError> for CliError {
    fn from(e: TateError) -> Self {
        let kind = match &e {
            TateError::FieldMismatch { .. } | TateError::EvenPrime | TateError::NotOverValuationRing => {
                ErrorKind::Parse
            }
            TateError::WindowTooSmall { .. } => ErrorKind::Budget,
            TateError::Linalg(l) => linalg_kind(l),
            _ => ErrorKind::Failure,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<NovikovError> for CliError {
    fn from(e: NovikovError) -> Self {
        CliError::new(novikov_kind(&e), e.to_string())
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Working precision `Z`.
    pub precision: Rat,
    /// Largest degree of an adjoined root field.
    pub field_budget: usize,
    /// Number of bulk candidates examined by the search.
    pub trial_budget: usize,
    pub seed: u64,
    /// Half-width `M` of the Tate truncation window.
    pub u_window: usize,
    /// Bound on the real and imaginary parts of random bulk coefficients.
    pub norm_bound: i64,
    /// Primes examined by the mod-p table.
    pub primes: Vec<u64>,
    /// Report destination; standard output when `None`.
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: Rat::from_int(4),
            field_budget: DEFAULT_FIELD_BUDGET,
            trial_budget: 20,
            seed: 0,
            u_window: 4,
            norm_bound: 3,
            primes: DEFAULT_PRIMES.to_vec(),
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.precision.is_positive() {
            return Err(CliError::parse("precision must be positive"));
        }
        if self.field_budget < 1 || self.trial_budget < 1 {
            return Err(CliError::parse("budgets must be at least 1"));
        }
        if self.norm_bound < 1 {
            return Err(CliError::parse("norm bound must be at least 1"));
        }
        if self.u_window < 2 {
            return Err(CliError::parse("the Tate window must be at least 2"));
        }
        if self.primes.iter().any(|&p| !crate::coeff::is_prime(p)) {
            return Err(CliError::parse("prime list contains a non-prime"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "precision": self.precision.to_string(),
            "field_budget": self.field_budget,
            "trial_budget": self.trial_budget,
            "seed": self.seed,
            "u_window": self.u_window,
            "norm_bound": self.norm_bound,
            "primes": self.primes,
        })
    }

    fn search_options(&self) -> SearchOptions {
        SearchOptions {
            norm_bound: self.norm_bound,
            trials: self.trial_budget,
            seed: self.seed,
            precision: self.precision.clone(),
            field_budget: self.field_budget,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes `v` to the configured output path, or returns it for printing.
pub fn emit(v: &Value, cfg: &RunConfig) -> Result<Option<String>, CliError> {
    let text = render(v);
    match &cfg.output_path {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| CliError::new(ErrorKind::Failure, format!("cannot write {}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

fn header(command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m
}

fn strs(v: &[Rat]) -> Vec<String> {
    v.iter().map(Rat::to_string).collect()
}

/// Where a polytope comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeSource {
    Preset(String),
    File(PathBuf),
}

pub fn load_polytope(src: &PolytopeSource) -> Result<Polytope, CliError> {
    match src {
        PolytopeSource::Preset(name) => {
            presets::by_name(name).ok_or_else(|| CliError::parse(format!("unknown preset {name}")))
        }
        PolytopeSource::File(path) => Ok(parse_polytope(&read_file(path)?)?),
    }
}

/// Comma-separated rationals such as `1/4,1/3`.
pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<Rat>().map_err(|_| CliError::parse(format!("not a rational: {t}"))))
        .collect()
}

pub fn parse_rat(s: &str) -> Result<Rat, CliError> {
    s.trim().parse::<Rat>().map_err(|_| CliError::parse(format!("not a rational: {s}")))
}

fn parse_bulk(p: &Polytope, bulk: Option<&str>) -> Result<BulkDeformation, CliError> {
    match bulk {
        Some(s) => Ok(s.parse::<BulkDeformation>()?),
        None => Ok(BulkDeformation::trivial(p.facet_count())),
    }
}

fn polytope_summary(p: &Polytope) -> Value {
    let mut v = p.to_json();
    v["vertex_count"] = json!(p.vertex_count());
    v["kouchnirenko_bound"] = json!(p.kouchnirenko_bound());
    v
}

fn critical_set_json(set: &CriticalSet) -> Value {
    json!({
        "field": set.field.describe(),
        "precision": set.precision.to_string(),
        "points": set.points.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        "issues": set.issues.iter().map(|i| i.to_json()).collect::<Vec<_>>(),
        "kouchnirenko_bound": set.kouchnirenko_bound,
        "exponent_denominator": set.exponent_denominator,
    })
}

/// `potential analyze`: critical points, classification and certificates
/// for `W_b` on `p`, or for the fiber potential at `fiber`.
pub fn potential_analyze(
    p: &Polytope,
    bulk: Option<&str>,
    fiber: Option<&str>,
    cfg: &RunConfig,
) -> Result<Value, CliError> {
    cfg.validate()?;
    let b = parse_bulk(p, bulk)?;
    let offset = fiber.map(parse_rat_list).transpose()?;
    let w = match &offset {
        Some(u) => build_fiber_potential(p, &b, u)?,
        None => build_ghv(p, &b)?,
    };
    let cert = certify_convenient(&w, &cfg.precision, cfg.field_budget)?;
    let mut set = cert.critical_set;
    let cl = match &offset {
        Some(u) => classify_inside_with_offset(&mut set.points, p, u)?,
        None => classify_inside(&mut set.points, p)?,
    };
    let mut m = header("potential analyze");
    m.insert("polytope".into(), polytope_summary(p));
    m.insert("bulk".into(), b.to_json());
    m.insert("fiber".into(), json!(offset.as_deref().map(strs)));
    m.insert("potential".into(), json!(w.format()));
    m.insert("critical_points".into(), critical_set_json(&set));
    m.insert(
        "certificates".into(),
        json!({
            "morse": cert.morse,
            "distinct_values": cert.distinct_values,
            "kouchnirenko_bound": p.kouchnirenko_bound(),
            "betti": p.vertex_count(),
            "inside": cl.inside.len(),
            "outside": cl.outside.len(),
            "certified_precision": cert.precision.to_string(),
        }),
    );
    Ok(Value::Object(m))
}

/// `bulk search`: the first convenient bulk in the seeded sequence.
pub fn bulk_search(p: &Polytope, cfg: &RunConfig) -> Result<Value, CliError> {
    cfg.validate()?;
    let out = search_convenient_bulk(p, &cfg.search_options())?;
    let mut points = out.certificate.critical_set.points.clone();
    let cl = classify_inside(&mut points, p)?;
    let mut m = header("bulk search");
    m.insert("polytope".into(), polytope_summary(p));
    m.insert("config".into(), cfg.to_json());
    m.insert("bulk".into(), out.bulk.to_json());
    m.insert("trial".into(), json!(out.trial));
    m.insert(
        "certificate".into(),
        json!({
            "morse": out.certificate.morse,
            "distinct_values": out.certificate.distinct_values,
            "saturated": out.certificate.critical_set.saturated(),
            "precision": out.certificate.precision.to_string(),
            "critical_points": out.certificate.critical_set.points.len(),
            "inside": cl.inside.len(),
            "outside": cl.outside.len(),
            "field": out.certificate.critical_set.field.describe(),
        }),
    );
    Ok(Value::Object(m))
}

/// Restricts a critical set to the listed points.
fn restrict(set: &CriticalSet, keep: &[usize]) -> CriticalSet {
    let mut out = set.clone();
    out.points = keep.iter().map(|&i| set.points[i].clone()).collect();
    out
}

/// Number of times the critical-point precision is doubled while the
/// splitting of the inside algebra cannot be certified.
pub const MAX_SPLIT_ESCALATIONS: u32 = 3;

/// The diagonal algebra on the inside critical points of `W_b` together
/// with its certified splitting at precision `cfg.precision`.  Critical
/// values are recomputed at doubled precision while the splitting reports
/// a precision failure.
pub struct InsideModel {
    pub set: CriticalSet,
    pub inside: Vec<usize>,
    pub outside: Vec<usize>,
    pub algebra: AlgebraOverNovikov<NumberField>,
    pub element: Element<NumberField>,
    pub split: crate::semisimple::IdempotentSplit<NumberField>,
    /// Precision at which the critical values were computed.
    pub value_precision: Rat,
}

pub fn inside_model(p: &Polytope, b: &BulkDeformation, cfg: &RunConfig) -> Result<InsideModel, CliError> {
    let w = build_ghv(p, b)?;
    let mut pz = cfg.precision.clone();
    let mut attempt = 0;
    loop {
        let mut set = critical_points(&w, &pz, cfg.field_budget)?;
        let cl = classify_inside(&mut set.points, p)?;
        let (algebra, element) = from_critical_set(&restrict(&set, &cl.inside));
        match certify_semisimple(&algebra, &element, &cfg.precision, cfg.field_budget) {
            Ok(split) => {
                return Ok(InsideModel {
                    set,
                    inside: cl.inside,
                    outside: cl.outside,
                    algebra,
                    element,
                    split,
                    value_precision: pz,
                })
            }
            Err(e) if semisimple_kind(&e) == ErrorKind::Precision && attempt < MAX_SPLIT_ESCALATIONS => {
                attempt += 1;
                pz = &pz + &pz;
            }
            Err(e) => return Err(e.into()),
        }
    }
}

/// Input of `algebra split`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraInput {
    File(PathBuf),
    /// The diagonal algebra on the inside critical points of `W_b`, with
    /// the critical values as the splitting element.
    FromPotential { polytope: PolytopeSource, bulk: Option<String> },
}

/// Comma-separated series over `k`.
pub fn parse_element(k: &NumberField, s: &str) -> Result<Element<NumberField>, CliError> {
    s.split(',').map(|t| Ok(parse_series(k, &Value::String(t.trim().to_string()))?)).collect()
}

fn load_algebra(
    input: &AlgebraInput,
    cfg: &RunConfig,
) -> Result<(AlgebraOverNovikov<NumberField>, Option<Element<NumberField>>, Value), CliError> {
    match input {
        AlgebraInput::File(path) => {
            let (alg, a) = parse_algebra(&read_file(path)?)?;
            Ok((alg, a, json!({"file": path.display().to_string()})))
        }
        AlgebraInput::FromPotential { polytope, bulk } => {
            let p = load_polytope(polytope)?;
            let b = parse_bulk(&p, bulk.as_deref())?;
            let model = inside_model(&p, &b, cfg)?;
            let src = json!({
                "polytope": p.name(),
                "bulk": b.to_json(),
                "points": "inside",
                "inside": model.inside.len(),
                "outside": model.outside.len(),
                "value_precision": model.value_precision.to_string(),
            });
            Ok((model.algebra, Some(model.element), src))
        }
    }
}

/// `algebra split`: eigenvalues, idempotents and their valuations, the
/// discriminant and optionally the transfer to `F_p`.
pub fn algebra_split(
    input: &AlgebraInput,
    element: Option<&str>,
    mod_p: Option<u64>,
    cfg: &RunConfig,
) -> Result<Value, CliError> {
    cfg.validate()?;
    let (alg, default_element, source) = load_algebra(input, cfg)?;
    let a = match element {
        Some(s) => parse_element(alg.field(), s)?,
        None => default_element.ok_or_else(|| CliError::parse("no element given"))?,
    };
    if a.len() != alg.dim() {
        return Err(CliError::parse(format!("element must have {} coordinates", alg.dim())));
    }
    let split = certify_semisimple(&alg, &a, &cfg.precision, cfg.field_budget)?;
    let disc = discriminant_valuation(&alg, &a)?;
    let primes = exclusion_primes(&alg, &a)?;
    let mut m = header("algebra split");
    m.insert("source".into(), source);
    m.insert("algebra".into(), alg.to_json());
    m.insert("element".into(), alg.element_to_json(&a));
    m.insert("split".into(), split.to_json());
    m.insert(
        "discriminant".into(),
        json!({
            "valuation": disc.valuation.to_string(),
            "leading": alg.field().format_elem(&disc.leading),
            "exclusion_primes": primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        }),
    );
    if let Some(p) = mod_p {
        let r = mod_p_transfer(&alg, &a, p, &cfg.precision, cfg.field_budget)?;
        m.insert("transfer".into(), r.to_json());
    }
    Ok(Value::Object(m))
}

/// Subcommands of `filtered`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilteredCommand {
    Barcode,
    Depth,
    Tau,
    Rho,
    Bottleneck,
}

impl FilteredCommand {
    pub fn as_str(self) -> &'static str {
        match self {
            FilteredCommand::Barcode => "barcode",
            FilteredCommand::Depth => "depth",
            FilteredCommand::Tau => "tau",
            FilteredCommand::Rho => "rho",
            FilteredCommand::Bottleneck => "bottleneck",
        }
    }
}

/// Options of `filtered`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilteredOptions {
    /// Chains for `rho`, each `label=series,label=series`.
    pub chains: Vec<String>,
    /// Second complex for `bottleneck`.
    pub other: Option<PathBuf>,
}

fn parse_chain<F: Field>(c: &FilteredComplex<F>, text: &str) -> Result<Vec<NovikovSeries<F>>, CliError> {
    let k = c.field();
    let mut chain = vec![NovikovSeries::zero(k); c.len()];
    for part in text.split(',') {
        let (label, series) =
            part.split_once('=').ok_or_else(|| CliError::parse(format!("chain entry {part} lacks '='")))?;
        let i = c
            .generators()
            .iter()
            .position(|g| g.label == label.trim())
            .ok_or_else(|| CliError::parse(format!("unknown generator {label}")))?;
        chain[i] = &chain[i] + &NovikovSeries::parse(k, series)?;
    }
    Ok(chain)
}

fn label(gens: &[Generator], i: usize) -> &str {
    &gens[i].label
}

fn barcode_section<F: Field>(c: &FilteredComplex<F>) -> Result<Value, CliError> {
    let b = c.barcode()?;
    let mut v = b.to_json();
    v["generators"] = json!(c.len());
    v["endpoint_count"] = json!(b.endpoint_count());
    if c.is_action_monotone() {
        let gens = c.generators();
        let intervals: Vec<Value> = c
            .intervals()?
            .iter()
            .map(|iv| {
                json!({
                    "birth": iv.birth.to_string(),
                    "death": iv.death.as_ref().map(Rat::to_string),
                    "birth_generator": label(gens, iv.birth_generator),
                    "death_generator": iv.death_generator.map(|j| label(gens, j)),
                })
            })
            .collect();
        v["intervals"] = Value::Array(intervals);
    }
    Ok(v)
}

fn rho_section<F: Field>(c: &FilteredComplex<F>, chains: &[String]) -> Result<Value, CliError> {
    let inputs: Vec<(String, Vec<NovikovSeries<F>>)> = if chains.is_empty() {
        let d = c.differential();
        (0..c.len())
            .filter(|&j| d.iter().all(|row| row[j].is_exact_zero()))
            .map(|j| {
                let mut v = vec![NovikovSeries::zero(c.field()); c.len()];
                v[j] = NovikovSeries::one(c.field());
                (format!("{}=1", c.generators()[j].label), v)
            })
            .collect()
    } else {
        chains.iter().map(|t| Ok((t.clone(), parse_chain(c, t)?))).collect::<Result<_, CliError>>()?
    };
    let mut out = Vec::with_capacity(inputs.len());
    for (text, chain) in inputs {
        let r = c.spectral_with_representative(&chain)?;
        out.push(json!({
            "chain": text,
            "rho": r.value.to_string(),
            "representative": r.representative.iter().map(|s| s.format()).collect::<Vec<_>>(),
        }));
    }
    Ok(Value::Array(out))
}

fn filtered_generic<F: Field>(
    c: &FilteredComplex<F>,
    cmd: FilteredCommand,
    opts: &FilteredOptions,
    m: &mut serde_json::Map<String, Value>,
) -> Result<(), CliError> {
    let b = c.barcode()?;
    m.insert("field".into(), json!(c.field().describe()));
    m.insert("barcode".into(), barcode_section(c)?);
    match cmd {
        FilteredCommand::Barcode => {}
        FilteredCommand::Depth => {
            m.insert("boundary_depth".into(), json!(b.boundary_depth().to_string()));
        }
        FilteredCommand::Tau => {
            m.insert("total_bar_length".into(), json!(b.total_bar_length().to_string()));
        }
        FilteredCommand::Rho => {
            m.insert("spectral_invariants".into(), rho_section(c, &opts.chains)?);
        }
        FilteredCommand::Bottleneck => {
            let path = opts.other.as_ref().ok_or_else(|| CliError::parse("bottleneck needs a second complex"))?;
            let other = match parse_complex(&read_file(path)?)? {
                AnyComplex::Rational(c2) => c2.barcode()?,
                AnyComplex::Prime(c2) => c2.barcode()?,
            };
            m.insert("other_barcode".into(), other.to_json());
            m.insert("bottleneck".into(), bottleneck_distance(&b, &other).to_json());
        }
    }
    Ok(())
}

/// `filtered barcode|depth|tau|rho|bottleneck`.
pub fn filtered(cmd: FilteredCommand, complex: &Path, opts: &FilteredOptions) -> Result<Value, CliError> {
    let mut m = header(&format!("filtered {}", cmd.as_str()));
    match parse_complex(&read_file(complex)?)? {
        AnyComplex::Rational(c) => filtered_generic(&c, cmd, opts, &mut m)?,
        AnyComplex::Prime(c) => filtered_generic(&c, cmd, opts, &mut m)?,
    }
    Ok(Value::Object(m))
}

/// Reduces a complex over `Q` to `F_p`.
pub fn reduce_complex(
    c: &FilteredComplex<crate::coeff::QField>,
    p: u64,
) -> Result<FilteredComplex<FiniteField>, CliError> {
    let k = FiniteField::prime(p).map_err(|e| CliError::parse(e.to_string()))?;
    let reduce = |s: &NovikovSeries<crate::coeff::QField>| {
        s.map_coeffs(&k, |r| k.from_rat(r).ok_or(CoeffError::DenominatorDivisibleByP { p }))
    };
    let d = c
        .differential()
        .iter()
        .map(|row| row.iter().map(reduce).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::parse(e.to_string()))?;
    Ok(FilteredComplex::new(&k, c.generators().to_vec(), d, c.mode())?)
}

/// `tate check`: Tate torsion against `p` times the base torsion, with
/// the Borel ranks of the same window.
pub fn tate_check(complex: &Path, p: u64, cfg: &RunConfig) -> Result<Value, CliError> {
    cfg.validate()?;
    let c = match parse_complex(&read_file(complex)?)? {
        AnyComplex::Rational(c) => reduce_complex(&c, p)?,
        AnyComplex::Prime(c) => c,
    };
    let r = quasi_frobenius_check(&c, p, cfg.u_window)?;
    let mut m = header("tate check");
    if let Value::Object(body) = r.to_json() {
        m.extend(body);
    }
    let borel = BorelMorseComplex::new(p, cfg.u_window).ok_or(TateError::EvenPrime)?;
    let k = c.field();
    m.insert("borel_ranks".into(), json!(borel.homology_ranks(k)));
    Ok(Value::Object(m))
}

/// Kodaira–Spencer checks on the inside points: the sum of the basic
/// disk terms against the critical value at each point, and the rank of
/// the evaluation matrix on `{z^I : |I| <= dim}`.
pub fn ks_section(p: &Polytope, b: &BulkDeformation, inside: &CriticalSet, z: &Rat) -> Result<Value, CliError> {
    let n = p.facet_count();
    let etas = inside.etas();
    let mut sum = vec![NovikovSeries::zero(&inside.field); etas.len()];
    for j in 0..n {
        let mut alpha = vec![0u32; n];
        alpha[j] = 1;
        let v = ks_evaluate(p, b, &alpha, &etas, &inside.field, z)?;
        for (s, x) in sum.iter_mut().zip(&v) {
            *s = &*s + x;
        }
    }
    let sum_matches: Vec<bool> = sum
        .iter()
        .zip(&inside.points)
        .map(|(s, pt)| (s - &pt.critical_value).truncate(z).has_no_terms())
        .collect();
    let monomials = multi_indices(n, p.dim() as u32);
    let rank = ks_surjectivity_check(p, b, &monomials, &etas, &inside.field, z)?;
    Ok(json!({
        "sum_matches_value": sum_matches,
        "monomials": monomials.len(),
        "rank": rank,
        "surjective": rank == etas.len(),
    }))
}

/// `pipeline`: bulk search, critical points, classification, the diagonal
/// algebra on the inside points and the mod-p table.
pub fn pipeline(p: &Polytope, cfg: &RunConfig) -> Result<Value, CliError> {
    cfg.validate()?;
    let out = search_convenient_bulk(p, &cfg.search_options())?;
    let model = inside_model(p, &out.bulk, cfg)?;
    let (alg, a) = (&model.algebra, &model.element);
    let mut table = Vec::with_capacity(cfg.primes.len());
    for &q in &cfg.primes {
        table.push(match mod_p_transfer(alg, a, q, &cfg.precision, cfg.field_budget) {
            Ok(r) => json!({"p": q, "ok": true, "report": r.to_json()}),
            Err(e) => {
                let kind = semisimple_kind(&e);
                json!({"p": q, "ok": false, "error": {"kind": kind.as_str(), "message": e.to_string()}})
            }
        });
    }
    let set = &model.set;
    let inside = restrict(set, &model.inside);
    let ks = ks_section(p, &out.bulk, &inside, &set.precision)?;
    let mut m = header("pipeline");
    m.insert("config".into(), cfg.to_json());
    m.insert("polytope".into(), polytope_summary(p));
    m.insert("bulk".into(), json!({"coefficients": out.bulk.to_json(), "trial": out.trial}));
    m.insert("critical_points".into(), critical_set_json(set));
    m.insert(
        "classification".into(),
        json!({
            "inside": model.inside,
            "outside": model.outside,
            "inside_equals_betti": model.inside.len() == p.vertex_count(),
            "within_kouchnirenko": set.points.len() as u64 <= p.kouchnirenko_bound(),
        }),
    );
    m.insert(
        "certificates".into(),
        json!({
            "morse": out.certificate.morse,
            "distinct_values": out.certificate.distinct_values,
            "precision": out.certificate.precision.to_string(),
        }),
    );
    m.insert("semisimple".into(), model.split.to_json());
    m.insert("mod_p".into(), Value::Array(table));
    m.insert("kodaira_spencer".into(), ks);
    Ok(Value::Object(m))
}

/// `presets`: the shipped polytopes with their vertex counts and bounds.
pub fn presets_report() -> Value {
    let describe = |name: &str| {
        let p = presets::by_name(name).expect("listed preset exists");
        json!({"name": name, "dim": p.dim(), "vertex_count": p.vertex_count(), "kouchnirenko_bound": p.kouchnirenko_bound()})
    };
    let mut m = header("presets");
    m.insert("presets".into(), json!(presets::NAMES));
    m.insert("extra".into(), json!(EXTRA_PRESETS));
    m.insert(
        "details".into(),
        Value::Array(presets::NAMES.iter().chain(EXTRA_PRESETS.iter()).map(|n| describe(n)).collect()),
    );
    Value::Object(m)
}

/// `version`.
pub fn version_report() -> Value {
    let mut m = header("version");
    m.insert("name".into(), json!("floerkit"));
    m.insert("version".into(), json!(VERSION));
    Value::Object(m)
}
