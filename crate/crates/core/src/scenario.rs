//! Scenario files, suite runner and the structured report.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::{CartanDatum, Coweight};
use crate::error::{Error, Result};
use crate::gklo::{self, CMode, Check, Family, GkloContext, RelationRanges};
use crate::minors;
use crate::poly::{Poly, RatFunc, Var, Q};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Relations,
    ProofIdentities,
    Grading,
    Classical,
    Casimir,
    Minors,
    Kleinian,
    Hilbert,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Relations,
        Suite::ProofIdentities,
        Suite::Grading,
        Suite::Classical,
        Suite::Casimir,
        Suite::Minors,
        Suite::Kleinian,
        Suite::Hilbert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::ProofIdentities => "proof-identities",
            Suite::Grading => "grading",
            Suite::Classical => "classical",
            Suite::Casimir => "casimir",
            Suite::Minors => "minors",
            Suite::Kleinian => "kleinian",
            Suite::Hilbert => "hilbert",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OrientationChoice {
    #[default]
    Default,
    Reversed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub fn to_q(&self) -> Result<Q> {
        match self {
            Number::Int(n) => Ok(Q::from_integer((*n).into())),
            Number::Text(s) => s.trim().parse::<Q>().map_err(|_| Error::Invalid(format!("not a rational number: {:?}", s))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartanSpec {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
    #[serde(default)]
    pub orientation: OrientationChoice,
    /// Explicit arrows `[from, to]`, 1-based; overrides the default orientation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Fundamental,
    Coroot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub basis: Basis,
    pub coords: Vec<Number>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CSpec {
    /// "symbolic" or "numeric".
    pub mode: String,
    /// Per node, the values `c^{(1)}, ..., c^{(λ_i)}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Vec<Number>>>,
}

impl Default for CSpec {
    fn default() -> Self {
        CSpec { mode: "symbolic".into(), values: None }
    }
}

fn default_samples() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    pub order: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub suites: Vec<Suite>,
    pub cartan: CartanSpec,
    pub lambda: WeightSpec,
    pub mu: WeightSpec,
    #[serde(default)]
    pub c: CSpec,
}

/// A scenario after validation against the Cartan data.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub scenario: Scenario,
    pub cd: CartanDatum,
    pub lambda: Coweight,
    pub mu: Coweight,
    pub c_mode: CMode,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Scenario> {
        toml::from_str(text).map_err(|e| Error::Invalid(format!("scenario parse error: {}", e)))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn resolve(&self) -> Result<Resolved> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Invalid(format!("unsupported schema_version {}", self.schema_version)));
        }
        if self.order == 0 || self.order > 12 {
            return Err(Error::Invalid(format!("order must be in 1..=12, got {}", self.order)));
        }
        let mut kind = self.cartan.kind.trim().chars();
        let letter = match (kind.next(), kind.next()) {
            (Some(c), None) => c.to_ascii_uppercase(),
            _ => return Err(Error::Invalid(format!("bad Cartan type {:?}", self.cartan.kind))),
        };
        let edges = match &self.cartan.edges {
            Some(list) => {
                let mut out = Vec::new();
                for [a, b] in list {
                    if *a == 0 || *b == 0 {
                        return Err(Error::Invalid("edges are 1-based".into()));
                    }
                    out.push((a - 1, b - 1));
                }
                Some(out)
            }
            None => None,
        };
        let mut cd = CartanDatum::build(letter, self.cartan.rank, edges)?;
        if self.cartan.orientation == OrientationChoice::Reversed {
            cd = cd.reversed();
        }
        let weight = |w: &WeightSpec| -> Result<Coweight> {
            if w.coords.len() != cd.rank {
                return Err(Error::Invalid(format!("expected {} coordinates, got {}", cd.rank, w.coords.len())));
            }
            match w.basis {
                Basis::Fundamental => {
                    let mut v = Vec::new();
                    for x in &w.coords {
                        let r = x.to_q()?;
                        if !r.is_integer() {
                            return Err(Error::Invalid("fundamental coordinates must be integers".into()));
                        }
                        v.push(r.to_integer().try_into().map_err(|_| Error::Invalid("coordinate too large".into()))?);
                    }
                    Coweight::from_fund(&cd, v)
                }
                Basis::Coroot => Coweight::from_coroot(&cd, w.coords.iter().map(|x| x.to_q()).collect::<Result<_>>()?),
            }
        };
        let lambda = weight(&self.lambda)?;
        let mu = weight(&self.mu)?;
        let sd = crate::cartan::ShiftData::new(&cd, &lambda, &mu)?;
        let c_mode = match self.c.mode.as_str() {
            "symbolic" => {
                if self.c.values.is_some() {
                    return Err(Error::Invalid("symbolic c takes no values".into()));
                }
                CMode::Symbolic
            }
            "numeric" => {
                let vals = self.c.values.as_ref().ok_or_else(|| Error::Invalid("numeric c needs values".into()))?;
                if vals.len() != cd.rank {
                    return Err(Error::Invalid(format!("numeric c needs {} rows", cd.rank)));
                }
                let mut rows = Vec::new();
                for (i, row) in vals.iter().enumerate() {
                    if row.len() != sd.lam[i] {
                        return Err(Error::Invalid(format!(
                            "node {} needs {} values of c, got {}",
                            i + 1,
                            sd.lam[i],
                            row.len()
                        )));
                    }
                    rows.push(row.iter().map(|x| x.to_q()).collect::<Result<Vec<_>>>()?);
                }
                CMode::Numeric(rows)
            }
            other => return Err(Error::Invalid(format!("unknown c mode {:?}", other))),
        };
        if self.suites.is_empty() {
            return Err(Error::Invalid("no suites selected".into()));
        }
        Ok(Resolved { scenario: self.clone(), cd, lambda, mu, c_mode })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Failure {
    pub name: String,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<Check>, failures: Vec<Failure>) -> SuiteReport {
        let pass = checks.iter().all(|c| c.pass) && failures.is_empty();
        SuiteReport { suite: suite.name().into(), pass, checks, failures }
    }

    fn error(suite: Suite, e: &Error) -> SuiteReport {
        SuiteReport {
            suite: suite.name().into(),
            pass: false,
            checks: vec![Check::new("suite completed", false, Some(e.to_string()))],
            failures: vec![],
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Environment {
    pub cartan: String,
    pub rank: usize,
    pub order: usize,
    pub seed: u64,
    pub samples: usize,
    /// Arrows `[from, to]`, 1-based.
    pub orientation: Vec<[usize; 2]>,
    pub symmetrizer: Vec<i64>,
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
    pub m: Vec<usize>,
    pub lambda_i: Vec<usize>,
    pub mu_i: Vec<usize>,
    pub c_mode: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub schema_version: u32,
    pub scenario: String,
    pub environment: Environment,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct Timings {
    pub context_ms: u128,
    pub suites_ms: BTreeMap<String, u128>,
    pub total_ms: u128,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub order: Option<usize>,
    pub seed: Option<u64>,
    pub orientation: Option<OrientationChoice>,
}

/// Apply command-line overrides before validation.
pub fn apply_overrides(s: &Scenario, opts: &RunOptions) -> Scenario {
    let mut s = s.clone();
    if let Some(n) = opts.order {
        s.order = n;
    }
    if let Some(seed) = opts.seed {
        s.seed = seed;
    }
    if let Some(o) = opts.orientation {
        s.cartan.orientation = o;
    }
    s
}

fn environment(r: &Resolved, ctx: Option<&GkloContext>) -> Environment {
    let sd = crate::cartan::ShiftData::new(&r.cd, &r.lambda, &r.mu).ok();
    let sd = ctx.map(|c| c.sd.clone()).or(sd);
    Environment {
        cartan: r.cd.label(),
        rank: r.cd.rank,
        order: r.scenario.order,
        seed: r.scenario.seed,
        samples: r.scenario.samples,
        orientation: r.cd.orientation.iter().map(|(a, b)| [a + 1, b + 1]).collect(),
        symmetrizer: r.cd.d.clone(),
        lambda: r.lambda.fund.clone(),
        mu: r.mu.fund.clone(),
        m: sd.as_ref().map(|s| s.m.clone()).unwrap_or_default(),
        lambda_i: sd.as_ref().map(|s| s.lam.clone()).unwrap_or_default(),
        mu_i: sd.as_ref().map(|s| s.mu.clone()).unwrap_or_default(),
        c_mode: match r.c_mode {
            CMode::Symbolic => "symbolic".into(),
            CMode::Numeric(_) => "numeric".into(),
        },
    }
}

const MAX_FAILURES: usize = 20;

fn relations_suite(ctx: &GkloContext) -> Result<SuiteReport> {
    let rep = gklo::verify_relations(ctx, RelationRanges::for_context(ctx))?;
    let mut checks = Vec::new();
    for fam in Family::ALL {
        let (ok, total) = rep.count(fam);
        checks.push(Check::new(fam.to_string(), ok == total, Some(format!("{}/{} cells zero", ok, total))));
    }
    let failures = rep
        .failures()
        .into_iter()
        .take(MAX_FAILURES)
        .map(|e| Failure { name: format!("{} {:?}", e.family, e.indices), residual: e.residual.to_string() })
        .collect();
    Ok(SuiteReport::new(Suite::Relations, checks, failures))
}

/// `c^{(2)} = -½C + ¼(c^{(1)})² - ¼h²` for the computed Casimir value `C`.
fn casimir_suite(ctx: &GkloContext) -> Result<SuiteReport> {
    let a1 = ctx.cd.kind == 'A' && ctx.cd.rank == 1 && ctx.lambda.fund == vec![2] && ctx.mu.fund == vec![0];
    if !a1 {
        let c = Check::new("applicable", true, Some("needs A1, lambda = alpha, mu = 0; skipped".into()));
        return Ok(SuiteReport::new(Suite::Casimir, vec![c], vec![]));
    }
    let val = gklo::sl2_casimir_check(ctx)?;
    let (c1, c2) = match &ctx.c_mode {
        CMode::Symbolic => (Poly::var(Var::c(0, 1)), Poly::var(Var::c(0, 2))),
        CMode::Numeric(v) => (Poly::constant(v[0][0].clone()), Poly::constant(v[0][1].clone())),
    };
    let h = Poly::h();
    let quarter = Q::new(1.into(), 4.into());
    let rhs = val
        .scale(&Q::new((-1).into(), 2.into()))
        .add(&RatFunc::from(c1.pow(2).scale(&quarter)))
        .sub(&RatFunc::from(h.pow(2).scale(&quarter)));
    let checks = vec![
        Check::new("image of the Casimir is a scalar", true, Some(val.to_string())),
        Check::new("c^(2) = -C/2 + (c^(1))^2/4 - h^2/4", rhs == RatFunc::from(c2), None),
    ];
    Ok(SuiteReport::new(Suite::Casimir, checks, vec![]))
}

/// Coefficients of `∏_{i≥1} (1 - q^i)^{-dim}` up to `q^n`.
pub fn free_partition_series(dim: usize, n: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::zero(); n + 1];
    c[0] = BigUint::one();
    for i in 1..=n {
        for _ in 0..dim {
            for k in i..=n {
                let add = c[k - i].clone();
                c[k] += add;
            }
        }
    }
    c
}

fn hilbert_suite(r: &Resolved) -> Result<SuiteReport> {
    let n = r.scenario.order;
    let a = r.cd.hilbert_count_slice(&r.mu, n)?;
    let b = r.cd.count_pbw_monomials(&r.mu, n)?;
    let show = |v: &[BigUint]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let mut checks = vec![Check::new(
        format!("slice count = PBW count to q^{}", n),
        a == b,
        Some(format!("[{}] vs [{}]", show(&a), show(&b))),
    )];
    if r.mu.fund.iter().all(|&x| x == 0) {
        let p = free_partition_series(r.cd.dim_g(), n);
        checks.push(Check::new("mu = 0 gives prod (1-q^i)^(-dim g)", a == p, None));
    }
    Ok(SuiteReport::new(Suite::Hilbert, checks, vec![]))
}

fn minors_suite(r: &Resolved) -> Result<SuiteReport> {
    let n = r.scenario.order;
    let mut checks = minors::jacobi_suite(50, n.min(3), r.scenario.seed)?;
    checks.extend(minors::det_ideal_check(n.min(3))?);
    checks.extend(minors::phi_bracket_check(n.min(4))?);
    Ok(SuiteReport::new(Suite::Minors, compress(checks, "Jacobi"), vec![]))
}

/// Fold many sampled checks with a common prefix into one.
fn compress(checks: Vec<Check>, prefix: &str) -> Vec<Check> {
    let (sampled, mut rest): (Vec<_>, Vec<_>) = checks.into_iter().partition(|c| c.name.starts_with(prefix));
    if sampled.is_empty() {
        return rest;
    }
    let bad: Vec<&Check> = sampled.iter().filter(|c| !c.pass).collect();
    let detail = match bad.first() {
        None => format!("{} samples", sampled.len()),
        Some(c) => format!("{}/{} failed, first: {}", bad.len(), sampled.len(), c.name),
    };
    rest.push(Check::new(format!("{} (sampled)", prefix), bad.is_empty(), Some(detail)));
    rest
}

/// Run every selected suite. Errors inside a suite are recorded as failures.
pub fn run(r: &Resolved) -> (Report, Timings) {
    let start = Instant::now();
    let mut timings = Timings::default();
    let s = &r.scenario;
    let needs_ctx = s.suites.iter().any(|x| {
        matches!(x, Suite::Relations | Suite::ProofIdentities | Suite::Grading | Suite::Classical | Suite::Casimir)
    });
    let ctx = if needs_ctx {
        let t = Instant::now();
        let c = GkloContext::build(&r.cd, &r.lambda, &r.mu, r.c_mode.clone(), s.order);
        timings.context_ms = t.elapsed().as_millis();
        Some(c)
    } else {
        None
    };
    let mut suites: Vec<Suite> = s.suites.clone();
    suites.sort();
    suites.dedup();
    let mut reports = Vec::new();
    for suite in suites {
        let t = Instant::now();
        let rep = (|| -> Result<SuiteReport> {
            let ctx = || -> Result<&GkloContext> {
                match &ctx {
                    Some(Ok(c)) => Ok(c),
                    Some(Err(e)) => Err(e.clone()),
                    None => unreachable!(),
                }
            };
            Ok(match suite {
                Suite::Relations => relations_suite(ctx()?)?,
                Suite::ProofIdentities => {
                    let mut checks = gklo::verify_proof_identities(ctx()?)?;
                    checks.extend(gklo::quotient_facts(ctx()?));
                    SuiteReport::new(suite, checks, vec![])
                }
                Suite::Grading => {
                    // numeric c is a specialization; grade the generic images
                    let c = ctx()?;
                    let checks = match c.c_mode {
                        CMode::Symbolic => gklo::grading_check(c).1,
                        CMode::Numeric(_) => {
                            let sym = GkloContext::build(&r.cd, &r.lambda, &r.mu, CMode::Symbolic, s.order)?;
                            let mut checks = gklo::grading_check(&sym).1;
                            for ch in &mut checks {
                                ch.detail = Some("graded with symbolic c".into());
                            }
                            checks
                        }
                    };
                    SuiteReport::new(suite, checks, vec![])
                }
                Suite::Classical => {
                    let checks = gklo::classical_compatibility(ctx()?, s.samples, s.seed)?;
                    let bad: Vec<Failure> = checks
                        .iter()
                        .filter(|c| !c.pass)
                        .take(MAX_FAILURES)
                        .map(|c| Failure { name: c.name.clone(), residual: c.detail.clone().unwrap_or_default() })
                        .collect();
                    let total = checks.len();
                    let ok = checks.iter().filter(|c| c.pass).count();
                    let summary = Check::new("[X,Y]/h at h=0 equals the Poisson bracket", ok == total, Some(format!("{}/{} pairs", ok, total)));
                    SuiteReport::new(suite, vec![summary], bad)
                }
                Suite::Casimir => casimir_suite(ctx()?)?,
                Suite::Minors => minors_suite(r)?,
                Suite::Kleinian => {
                    let mut checks = Vec::new();
                    for n in 0..=3 {
                        checks.extend(minors::verify_kleinian(n)?);
                    }
                    SuiteReport::new(suite, checks, vec![])
                }
                Suite::Hilbert => hilbert_suite(r)?,
            })
        })()
        .unwrap_or_else(|e| SuiteReport::error(suite, &e));
        timings.suites_ms.insert(suite.name().into(), t.elapsed().as_millis());
        reports.push(rep);
    }
    let env = environment(r, ctx.as_ref().and_then(|c| c.as_ref().ok()));
    timings.total_ms = start.elapsed().as_millis();
    let report = Report {
        schema_version: SCHEMA_VERSION,
        scenario: s.name.clone(),
        environment: env,
        pass: reports.iter().all(|x| x.pass),
        suites: reports,
    };
    (report, timings)
}

pub fn summary_text(rep: &Report, t: &Timings) -> String {
    let mut out = String::new();
    let e = &rep.environment;
    out.push_str(&format!(
        "scenario {}  {}  order {}  seed {}  lambda {:?}  mu {:?}  m {:?}\n",
        rep.scenario, e.cartan, e.order, e.seed, e.lambda, e.mu, e.m
    ));
    out.push_str(&format!("context built in {} ms\n", t.context_ms));
    for s in &rep.suites {
        let ms = t.suites_ms.get(&s.suite).copied().unwrap_or(0);
        out.push_str(&format!("{} {:<17} {:>8} ms\n", if s.pass { "PASS" } else { "FAIL" }, s.suite, ms));
        for c in s.checks.iter().filter(|c| !c.pass) {
            out.push_str(&format!("    failed: {}{}\n", c.name, c.detail.as_ref().map(|d| format!(" ({})", d)).unwrap_or_default()));
        }
        for f in &s.failures {
            out.push_str(&format!("    residual {}: {}\n", f.name, f.residual));
        }
    }
    out.push_str(&format!("{} in {} ms\n", if rep.pass { "ALL PASS" } else { "FAILURES" }, t.total_ms));
    out
}

/// Image coefficient tables in canonical JSON.
pub fn dump_images(ctx: &GkloContext) -> serde_json::Value {
    let nodes: Vec<serde_json::Value> = (0..ctx.rank())
        .map(|i| {
            let table = |f: &dyn Fn(usize) -> serde_json::Value, shift: usize| -> Vec<serde_json::Value> {
                (1..=ctx.order).map(|s| serde_json::json!({ "index": s + shift, "value": f(s) })).collect()
            };
            serde_json::json!({
                "node": i + 1,
                "A": table(&|s| serde_json::to_value(ctx.a[i].coeff(s).to_json()).unwrap(), 0),
                "H": table(&|s| serde_json::to_value(ctx.h[i].coeff(s).to_json()).unwrap(), 0),
                "E": table(&|s| serde_json::to_value(ctx.e[i].coeff(s).to_json()).unwrap(), 0),
                "F": table(&|s| serde_json::to_value(ctx.f[i].coeff(s).to_json()).unwrap(), ctx.sd.mu[i]),
            })
        })
        .collect();
    serde_json::json!({
        "cartan": ctx.cd.label(),
        "order": ctx.order,
        "m": ctx.sd.m,
        "lambda_i": ctx.sd.lam,
        "mu_i": ctx.sd.mu,
        "nodes": nodes,
    })
}

pub fn dump_rseries(ctx: &GkloContext) -> serde_json::Value {
    let nodes: Vec<serde_json::Value> = (0..ctx.rank())
        .map(|i| {
            let coeffs: Vec<serde_json::Value> =
                (0..=ctx.order).map(|s| serde_json::to_value(ctx.r[i].coeff(s).to_json()).unwrap()).collect();
            serde_json::json!({ "node": i + 1, "r": coeffs })
        })
        .collect();
    serde_json::json!({ "cartan": ctx.cd.label(), "order": ctx.order, "nodes": nodes })
}

pub fn report_schema() -> serde_json::Value {
    let check = serde_json::json!({
        "type": "object",
        "required": ["name", "pass"],
        "properties": {
            "name": { "type": "string" },
            "pass": { "type": "boolean" },
            "detail": { "type": "string" }
        }
    });
    serde_json::json!({
        "$schema": "http://json-schema.org/draft-07/schema#",
        "title": "yangian verification report",
        "type": "object",
        "required": ["schema_version", "scenario", "environment", "pass", "suites"],
        "properties": {
            "schema_version": { "const": SCHEMA_VERSION },
            "scenario": { "type": "string" },
            "pass": { "type": "boolean" },
            "environment": {
                "type": "object",
                "required": ["cartan", "rank", "order", "seed", "samples", "orientation", "symmetrizer",
                             "lambda", "mu", "m", "lambda_i", "mu_i", "c_mode"],
                "properties": {
                    "cartan": { "type": "string" },
                    "rank": { "type": "integer" },
                    "order": { "type": "integer" },
                    "seed": { "type": "integer" },
                    "samples": { "type": "integer" },
                    "orientation": { "type": "array", "items": { "type": "array", "items": { "type": "integer" } } },
                    "symmetrizer": { "type": "array", "items": { "type": "integer" } },
                    "lambda": { "type": "array", "items": { "type": "integer" } },
                    "mu": { "type": "array", "items": { "type": "integer" } },
                    "m": { "type": "array", "items": { "type": "integer" } },
                    "lambda_i": { "type": "array", "items": { "type": "integer" } },
                    "mu_i": { "type": "array", "items": { "type": "integer" } },
                    "c_mode": { "enum": ["symbolic", "numeric"] }
                }
            },
            "suites": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["suite", "pass", "checks", "failures"],
                    "properties": {
                        "suite": { "enum": Suite::ALL.iter().map(|s| s.name()).collect::<Vec<_>>() },
                        "pass": { "type": "boolean" },
                        "checks": { "type": "array", "items": check },
                        "failures": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["name", "residual"],
                                "properties": { "name": { "type": "string" }, "residual": { "type": "string" } }
                            }
                        }
                    }
                }
            }
        }
    })
}
