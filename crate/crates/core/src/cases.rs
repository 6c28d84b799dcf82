//! Fixtures, case scripts and the end-to-end pipeline behind the CLI.
//!
//! A fixture holds the surface, the divisor order table, the symmetry of the
//! dual graph and one script per residual pair. A script lists branches:
//! each branch covers a region of weight space and closes it with one
//! method. A pair is certified when the closed proof branches cover every
//! positive weight.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::Rational;
use crate::fm::{self, Constraint};
use crate::groebner::{self, Budget};
use crate::jets::{self, DivisorRecord, SurfaceEquation, WedgeVarSpec};
use crate::multipoly::{MonomialOrder, Polynomial, Var};
use crate::valuative::{self, IntersectionMatrix, NonInclusionTask, OrderTable, Pair, Symmetry, TaskStatus};
use crate::wedge::{self, Normalization, RefutationCertificate, Verdict, WedgeError, WedgeProblem};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("JSON error at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("invalid fixture: {0}")]
    Invalid(String),
    #[error("no case script for pair {0}")]
    NoScript(String),
    #[error("[{stage}] {msg}")]
    Stage { stage: &'static str, msg: String },
}

impl From<serde_json::Error> for CaseError {
    fn from(e: serde_json::Error) -> Self {
        CaseError::Json { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}

fn stage<E: std::fmt::Display>(stage: &'static str) -> impl Fn(E) -> CaseError {
    move |e| CaseError::Stage { stage, msg: e.to_string() }
}

// ---------------------------------------------------------------------------
// fixture schema

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub schema_version: u32,
    pub name: String,
    pub surface: String,
    pub test_functions: Vec<String>,
    pub divisors: Vec<DivisorRecord>,
    #[serde(default)]
    pub symmetry: SymmetrySpec,
    /// Rows in divisor order.
    #[serde(default)]
    pub intersection_matrix: Option<Vec<Vec<i64>>>,
    /// Level used for the jet stage of run-all.
    #[serde(default = "default_jet_k")]
    pub jet_k: u32,
    #[serde(default)]
    pub cases: Vec<CaseScript>,
}

/// Swaps generating the symmetry of the dual graph, with the induced swaps
/// of test functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SymmetrySpec {
    #[serde(default)]
    pub divisors: Vec<(String, String)>,
    #[serde(default)]
    pub functions: Vec<(String, String)>,
}

fn default_jet_k() -> u32 {
    12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseScript {
    pub source: String,
    pub target: String,
    pub k: u32,
    /// Indices u of the target equations f_{target,u} used.
    pub equations: Vec<u32>,
    #[serde(default)]
    pub substitutions: BTreeMap<String, String>,
    #[serde(default)]
    pub extra_equations: Vec<LabelledPoly>,
    /// Equations of the source family on the parameters.
    #[serde(default)]
    pub source_equations: Vec<String>,
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelledPoly {
    pub label: String,
    pub poly: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub value: String,
    /// Exact weights belong to coefficients known to be nonzero; the others
    /// are lower bounds.
    #[serde(default)]
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    #[default]
    Proof,
    /// Reproduces a computation for comparison; never used for the verdict.
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    Unsat,
    NotUnsat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub name: String,
    #[serde(default)]
    pub role: Role,
    #[serde(default)]
    pub region: Vec<String>,
    /// Equation labels used; all of the case's equations when absent.
    #[serde(default)]
    pub equations: Option<Vec<String>>,
    #[serde(default)]
    pub weights: BTreeMap<String, WeightSpec>,
    #[serde(default)]
    pub pins: BTreeMap<String, String>,
    pub method: Method,
    #[serde(default)]
    pub audit: Option<Audit>,
    #[serde(default)]
    pub expect: Option<Expect>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Method {
    /// The nominal leading form of one equation is a single monomial in
    /// exact unknowns times a generically nonzero parameter polynomial.
    Monomial { equation: String },
    /// The nominal leading system with the source equations has no point
    /// where the listed polynomials are nonzero.
    Generic { nonzero: Vec<String> },
    /// At one point of the source family the nominal leading system forces
    /// every unknown in it to zero.
    Specialize {
        point: BTreeMap<String, String>,
        #[serde(default)]
        relations: Vec<String>,
        #[serde(default)]
        exclusions: Vec<String>,
    },
    /// An explicitly written homogeneous system.
    Printed {
        system: Vec<String>,
        unknowns: Vec<String>,
        #[serde(default)]
        point: BTreeMap<String, String>,
        #[serde(default)]
        relations: Vec<String>,
        #[serde(default)]
        exclusions: Vec<String>,
    },
    /// Every dominant configuration in the region, each closed on its own.
    Enumerate {
        normalization: Normalization,
        #[serde(default)]
        leaves: Vec<Vec<String>>,
        #[serde(default = "default_enum_budget")]
        budget: u64,
    },
    /// First and second nonzero s-coefficients from a concrete wedge
    /// expansion with integer orders.
    NextOrder {
        orders: BTreeMap<String, u32>,
        #[serde(default)]
        pinned: Vec<String>,
        nonzero: Vec<String>,
        depth: u32,
        /// Optional parameter point, completed on the source family.
        #[serde(default)]
        point: BTreeMap<String, String>,
    },
}

fn default_enum_budget() -> u64 {
    200_000
}

/// Every configuration of the region (under the normalization) must meet
/// the branch's nominal weights: equal for exact ones, at least otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Audit {
    pub normalization: Normalization,
    #[serde(default)]
    pub equations: Option<Vec<String>>,
    #[serde(default = "default_enum_budget")]
    pub budget: u64,
}

impl Fixture {
    pub fn from_json(text: &str) -> Result<Fixture, CaseError> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        if let Some(n) = v.get("schema_version").and_then(|x| x.as_u64()) {
            if n != SCHEMA_VERSION as u64 {
                return Err(CaseError::Schema(n as u32));
            }
        }
        let fx: Fixture = serde_json::from_str(text)?;
        fx.validate()?;
        Ok(fx)
    }

    pub fn load(path: &Path) -> Result<Fixture, CaseError> {
        let text = std::fs::read_to_string(path).map_err(|e| CaseError::Io { path: path.display().to_string(), source: e })?;
        Fixture::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CaseError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CaseError::Schema(self.schema_version));
        }
        self.surface_equation()?;
        let t = self.order_table()?;
        for d in &self.divisors {
            for (f, m) in ["x", "y", "z"].iter().zip(d.mu) {
                if let Some(o) = d.test_orders.get(*f) {
                    if *o != m {
                        return Err(CaseError::Invalid(format!("{}: order of {} is {} but mu gives {}", d.name, f, o, m)));
                    }
                }
            }
        }
        let sym = self.symmetry()?;
        if !sym.preserves(&t) {
            return Err(CaseError::Invalid("declared symmetry does not preserve the order table".into()));
        }
        if let Some(m) = self.intersection()? {
            if m.size() != self.divisors.len() {
                return Err(CaseError::Invalid("intersection matrix size differs from the divisor count".into()));
            }
        }
        for c in &self.cases {
            t.index(&c.source).map_err(|e| CaseError::Invalid(e.to_string()))?;
            t.index(&c.target).map_err(|e| CaseError::Invalid(e.to_string()))?;
            if c.branches.is_empty() {
                return Err(CaseError::Invalid(format!("case {} -> {} has no branches", c.source, c.target)));
            }
        }
        Ok(())
    }

    pub fn surface_equation(&self) -> Result<SurfaceEquation, CaseError> {
        SurfaceEquation::parse(&self.surface).map_err(|e| CaseError::Invalid(format!("surface: {}", e)))
    }

    pub fn order_table(&self) -> Result<OrderTable, CaseError> {
        OrderTable::new(self.test_functions.clone(), self.divisors.clone()).map_err(|e| CaseError::Invalid(e.to_string()))
    }

    pub fn symmetry(&self) -> Result<Symmetry, CaseError> {
        let t = self.order_table()?;
        Symmetry::from_swaps(&t, &self.symmetry.divisors, &self.symmetry.functions).map_err(|e| CaseError::Invalid(e.to_string()))
    }

    pub fn intersection(&self) -> Result<Option<IntersectionMatrix>, CaseError> {
        match &self.intersection_matrix {
            None => Ok(None),
            Some(rows) => IntersectionMatrix::new(rows.clone()).map(Some).map_err(|e| CaseError::Invalid(e.to_string())),
        }
    }

    pub fn divisor(&self, token: &str) -> Result<&DivisorRecord, CaseError> {
        let alt = format!("E{}", token);
        self.divisors
            .iter()
            .find(|d| d.name == token || d.name == alt)
            .ok_or_else(|| CaseError::Invalid(format!("unknown divisor {}", token)))
    }

    /// The script for "source not inside target", given as "J,I".
    pub fn case(&self, pair: &str) -> Result<&CaseScript, CaseError> {
        let (j, i) = pair.split_once(',').ok_or_else(|| CaseError::Invalid(format!("pair must look like J,I: {}", pair)))?;
        let (j, i) = (self.divisor(j.trim())?.name.clone(), self.divisor(i.trim())?.name.clone());
        self.cases.iter().find(|c| c.source == j && c.target == i).ok_or_else(|| CaseError::NoScript(pair.to_string()))
    }
}

pub fn pair_label(source: &str, target: &str) -> String {
    format!("{},{}", source.trim_start_matches('E'), target.trim_start_matches('E'))
}

// ---------------------------------------------------------------------------
// reports

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub saturator: String,
    pub unit: bool,
    /// Reduced basis of the saturation when it is the unit ideal.
    #[serde(default)]
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertRecord {
    Saturation {
        label: String,
        system: Vec<String>,
        checks: Vec<CheckRecord>,
        verdict: String,
        #[serde(default)]
        detail: Option<String>,
        #[serde(default)]
        witness: BTreeMap<String, String>,
    },
    Monomial {
        label: String,
        form: String,
        unknowns: Vec<String>,
        nonzero_unknowns: Vec<String>,
        source_equations: Vec<String>,
    },
}

impl CertRecord {
    fn from_refutation(label: &str, c: &RefutationCertificate) -> CertRecord {
        let (detail, witness) = match &c.verdict {
            Verdict::Inconclusive(s) => (Some(s.clone()), BTreeMap::new()),
            Verdict::Sat(p) => (None, p.iter().map(|(v, x)| (v.to_string(), x.to_string())).collect()),
            Verdict::Unsat => (None, BTreeMap::new()),
        };
        CertRecord::Saturation {
            label: label.to_string(),
            system: c.system.iter().map(|p| p.to_string()).collect(),
            checks: c
                .checks
                .iter()
                .map(|k| CheckRecord {
                    saturator: k.saturator.to_string(),
                    unit: k.unit,
                    basis: if k.unit { vec!["1".into()] } else { Vec::new() },
                })
                .collect(),
            verdict: c.verdict.tag().to_string(),
            detail,
            witness,
        }
    }

    pub fn is_unsat(&self) -> bool {
        match self {
            CertRecord::Saturation { verdict, .. } => verdict == "unsat",
            CertRecord::Monomial { .. } => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub passed: bool,
    pub configurations: usize,
    pub explored: u64,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigReport {
    pub witness: BTreeMap<String, String>,
    pub constraints: Vec<String>,
    pub leading: Vec<(String, String)>,
    pub closed_by: String,
    pub closed: bool,
    /// Inside the union of the scripted leaves (when leaves are given).
    pub covered: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub name: String,
    pub role: Role,
    pub method: String,
    pub region: Vec<String>,
    pub closed: bool,
    pub summary: String,
    #[serde(default)]
    pub expected: Option<Expect>,
    #[serde(default)]
    pub matches_expectation: Option<bool>,
    pub system: Vec<(String, String)>,
    pub certificates: Vec<CertRecord>,
    #[serde(default)]
    pub audit: Option<AuditReport>,
    #[serde(default)]
    pub configurations: Vec<ConfigReport>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseVerdict {
    Certified,
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub schema_version: u32,
    pub kind: String,
    pub fixture: String,
    pub pair: String,
    pub source: String,
    pub target: String,
    pub verdict: CaseVerdict,
    /// Closed proof-branch regions cover all positive weights.
    pub covered: bool,
    pub branches: Vec<BranchReport>,
    pub timing_ms: u128,
}

// ---------------------------------------------------------------------------
// running a case

fn pv(s: &str) -> Result<Polynomial, CaseError> {
    Polynomial::parse(s).map_err(|e| CaseError::Invalid(format!("polynomial {:?}: {}", s, e)))
}

fn rational(s: &str) -> Result<Rational, CaseError> {
    s.trim().parse::<Rational>().map_err(|_| CaseError::Invalid(format!("bad rational {:?}", s)))
}

fn constraints(v: &[String]) -> Result<Vec<Constraint>, CaseError> {
    v.iter().map(|s| Constraint::parse(s).map_err(|e| CaseError::Invalid(format!("constraint {:?}: {}", s, e)))).collect()
}

fn var_map(m: &BTreeMap<String, String>) -> Result<BTreeMap<Var, Polynomial>, CaseError> {
    m.iter().map(|(k, v)| Ok((Var::from_name(k), pv(v)?))).collect()
}

fn polys(v: &[String]) -> Result<Vec<Polynomial>, CaseError> {
    v.iter().map(|s| pv(s)).collect()
}

const WEDGE: &str = "wedge";

pub fn build_problem(fx: &Fixture, case: &CaseScript) -> Result<WedgeProblem, CaseError> {
    let surface = fx.surface_equation()?;
    let source = fx.divisor(&case.source)?;
    let target = fx.divisor(&case.target)?;
    let subs = var_map(&case.substitutions)?;
    let extra: Vec<(String, Polynomial)> =
        case.extra_equations.iter().map(|e| Ok((e.label.clone(), pv(&e.poly)?))).collect::<Result<_, CaseError>>()?;
    WedgeProblem::from_divisors(
        &pair_label(&case.source, &case.target),
        &surface,
        source,
        target,
        case.k,
        &case.equations,
        &subs,
        &extra,
        polys(&case.source_equations)?,
    )
    .map_err(stage(WEDGE))
}

struct Prepared<'a> {
    problem: &'a WedgeProblem,
    labels: Vec<String>,
    weights: BTreeMap<Var, Rational>,
    exact: BTreeSet<Var>,
    pins: BTreeMap<Var, Polynomial>,
    region: Vec<Constraint>,
}

fn prepare<'a>(problem: &'a WedgeProblem, b: &Branch) -> Result<Prepared<'a>, CaseError> {
    let labels = b.equations.clone().unwrap_or_else(|| problem.labels());
    let mut weights = BTreeMap::new();
    let mut exact = BTreeSet::new();
    for (name, w) in &b.weights {
        let v = Var::from_name(name);
        if !problem.unknowns.contains(&v) {
            return Err(CaseError::Invalid(format!("branch {}: {} is not an unknown", b.name, name)));
        }
        weights.insert(v.clone(), rational(&w.value)?);
        if w.exact {
            exact.insert(v);
        }
    }
    let pins = var_map(&b.pins)?;
    for v in pins.keys() {
        if !exact.contains(v) {
            return Err(CaseError::Invalid(format!("branch {}: pinned {} must have an exact weight", b.name, v)));
        }
    }
    Ok(Prepared { problem, labels, weights, exact, pins, region: constraints(&b.region)? })
}

fn run_audit(p: &Prepared, a: &Audit, gb: Budget) -> Result<AuditReport, CaseError> {
    let labels = a.equations.clone().unwrap_or_else(|| p.labels.clone());
    let en = wedge::enumerate_configurations(p.problem, &labels, &p.region, Some(&a.normalization), a.budget, gb)
        .map_err(stage(WEDGE))?;
    let mut failures = Vec::new();
    for cfg in &en.configurations {
        for (v, w) in &p.weights {
            let sym = fm::LinExpr::var(&v.to_string());
            let c = if p.exact.contains(v) {
                Constraint::eq(&sym, &fm::LinExpr::constant(w.clone()))
            } else {
                Constraint::ge(&sym, &fm::LinExpr::constant(w.clone()))
            };
            if !fm::implies(&cfg.constraints, &c) {
                failures.push(format!("{} fails at {}", c, show_witness(&cfg.witness)));
            }
        }
    }
    Ok(AuditReport { passed: failures.is_empty(), configurations: en.configurations.len(), explored: en.explored, failures })
}

fn show_witness(w: &BTreeMap<String, Rational>) -> String {
    w.iter().map(|(k, v)| format!("{}={}", k, v)).collect::<Vec<_>>().join(" ")
}

fn strings(sys: &[(String, Polynomial)]) -> Vec<(String, String)> {
    sys.iter().map(|(l, p)| (l.clone(), p.to_string())).collect()
}

fn method_name(m: &Method) -> &'static str {
    match m {
        Method::Monomial { .. } => "monomial",
        Method::Generic { .. } => "generic",
        Method::Specialize { .. } => "specialize",
        Method::Printed { .. } => "printed",
        Method::Enumerate { .. } => "enumerate",
        Method::NextOrder { .. } => "next-order",
    }
}

pub fn run_branch(problem: &WedgeProblem, b: &Branch, gb: Budget) -> Result<BranchReport, CaseError> {
    let p = prepare(problem, b)?;
    let mut rep = BranchReport {
        name: b.name.clone(),
        role: b.role,
        method: method_name(&b.method).to_string(),
        region: b.region.clone(),
        closed: false,
        summary: String::new(),
        expected: b.expect,
        matches_expectation: None,
        system: Vec::new(),
        certificates: Vec::new(),
        audit: None,
        configurations: Vec::new(),
        note: b.note.clone(),
    };
    let nominal = || wedge::leading_system(problem, &p.labels, &p.weights, &p.pins).map_err(stage(WEDGE));
    let unsat;
    match &b.method {
        Method::Monomial { equation } => {
            let lf = wedge::leading_system(problem, std::slice::from_ref(equation), &p.weights, &p.pins).map_err(stage(WEDGE))?;
            let (_, form) = &lf[0];
            unsat = wedge::monomial_obstruction(problem, form, &p.exact, gb).map_err(stage(WEDGE))?;
            rep.summary = format!("leading form of {} is {}", equation, form);
            rep.system = strings(&lf);
            if unsat {
                rep.certificates.push(CertRecord::Monomial {
                    label: equation.clone(),
                    form: form.to_string(),
                    unknowns: problem.symbols(),
                    nonzero_unknowns: p.exact.iter().map(|v| v.to_string()).collect(),
                    source_equations: problem.source_equations.iter().map(|e| e.to_string()).collect(),
                });
            }
        }
        Method::Generic { nonzero } => {
            let sys = nominal()?;
            rep.system = strings(&sys);
            let mut all: Vec<Polynomial> = sys.into_iter().map(|(_, q)| q).filter(|q| !q.is_zero()).collect();
            all.extend(problem.source_equations.iter().cloned());
            let cert = wedge::refute(&all, &polys(nonzero)?, gb).map_err(stage(WEDGE))?;
            unsat = cert.verdict.is_unsat();
            rep.summary = format!("generic saturation: {}", cert.verdict.tag());
            rep.certificates.push(CertRecord::from_refutation("generic", &cert));
        }
        Method::Specialize { point, relations, exclusions } => {
            if !p.pins.is_empty() {
                return Err(CaseError::Invalid(format!("branch {}: specialization cannot pin unknowns", b.name)));
            }
            let sys = nominal()?;
            let rels = polys(relations)?;
            let sub = wedge::complete_point(problem, &var_map(point)?, &rels, gb).map_err(stage(WEDGE))?;
            let spec: Vec<(String, Polynomial)> =
                sys.iter().map(|(l, q)| (l.clone(), q.substitute(&sub))).filter(|(_, q)| !q.is_zero()).collect();
            rep.system = strings(&spec);
            let qs: Vec<Polynomial> = spec.iter().map(|(_, q)| q.clone()).collect();
            let wv = problem.weight_vector(&p.weights).map_err(stage(WEDGE))?;
            if !wedge::all_homogeneous(&qs, &wv).map_err(stage(WEDGE))? {
                return Err(CaseError::Stage { stage: WEDGE, msg: format!("branch {}: specialized system is not homogeneous", b.name) });
            }
            let present: Vec<Var> = problem.unknowns.iter().filter(|u| qs.iter().any(|q| q.vars().contains(*u))).cloned().collect();
            let cert = wedge::refute_projective(&qs, &present, &rels, &polys(exclusions)?, gb).map_err(stage(WEDGE))?;
            let has_exact = present.iter().any(|u| p.exact.contains(u));
            unsat = cert.verdict.is_unsat() && has_exact;
            let at: Vec<String> = point.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
            rep.summary = format!(
                "at {}{}: {}",
                at.join(", "),
                if relations.is_empty() { String::new() } else { format!(" with {}", relations.join(", ")) },
                cert.verdict.tag()
            );
            rep.certificates.push(CertRecord::from_refutation("specialized", &cert));
        }
        Method::Printed { system, unknowns, point, relations, exclusions } => {
            let sub = var_map(point)?;
            let spec: Vec<(String, Polynomial)> = system
                .iter()
                .enumerate()
                .map(|(n, s)| Ok((format!("G{}", n + 1), pv(s)?.substitute(&sub))))
                .collect::<Result<_, CaseError>>()?;
            rep.system = strings(&spec);
            let qs: Vec<Polynomial> = spec.iter().map(|(_, q)| q.clone()).collect();
            let us: Vec<Var> = unknowns.iter().map(|u| Var::from_name(u)).collect();
            let cert = wedge::refute_projective(&qs, &us, &polys(relations)?, &polys(exclusions)?, gb).map_err(stage(WEDGE))?;
            unsat = cert.verdict.is_unsat();
            rep.summary = format!("printed system: {}", cert.verdict.tag());
            rep.certificates.push(CertRecord::from_refutation("printed", &cert));
        }
        Method::Enumerate { normalization, leaves, budget } => {
            let en = wedge::enumerate_configurations(problem, &p.labels, &p.region, Some(normalization), *budget, gb)
                .map_err(stage(WEDGE))?;
            let leaves: Vec<Vec<Constraint>> = leaves.iter().map(|l| constraints(l)).collect::<Result<_, _>>()?;
            let mut all_closed = true;
            let mut all_covered = true;
            let results: Vec<_> = en
                .configurations
                .par_iter()
                .map(|cfg| wedge::close_configuration(problem, cfg, gb).map(|r| (cfg, r)))
                .collect::<Result<_, WedgeError>>()
                .map_err(stage(WEDGE))?;
            for (n, (cfg, (how, cert))) in results.into_iter().enumerate() {
                let covered = if leaves.is_empty() { None } else { Some(fm::covered_by(&cfg.constraints, &leaves)) };
                all_covered &= covered.unwrap_or(true);
                let closed = cert.verdict.is_unsat();
                all_closed &= closed;
                rep.configurations.push(ConfigReport {
                    witness: cfg.witness.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                    constraints: cfg.constraints.iter().map(|c| c.to_string()).collect(),
                    leading: strings(&cfg.leading),
                    closed_by: how.clone(),
                    closed,
                    covered,
                });
                let label = format!("configuration {}", n + 1);
                if how.starts_with("monomial") {
                    let (l, form) = cfg.leading.iter().find(|(l, _)| how.ends_with(l.as_str())).expect("named equation");
                    rep.certificates.push(CertRecord::Monomial {
                        label: format!("{} ({})", label, l),
                        form: form.to_string(),
                        unknowns: problem.symbols(),
                        nonzero_unknowns: problem.symbols(),
                        source_equations: problem.source_equations.iter().map(|e| e.to_string()).collect(),
                    });
                } else {
                    rep.certificates.push(CertRecord::from_refutation(&label, &cert));
                }
            }
            unsat = all_closed;
            rep.summary = format!("{} configurations ({} branches explored)", en.configurations.len(), en.explored);
            if !leaves.is_empty() {
                rep.audit = Some(AuditReport {
                    passed: all_covered,
                    configurations: en.configurations.len(),
                    explored: en.explored,
                    failures: rep
                        .configurations
                        .iter()
                        .filter(|c| c.covered == Some(false))
                        .map(|c| format!("outside the scripted leaves: {:?}", c.witness))
                        .collect(),
                });
            }
        }
        Method::NextOrder { orders, pinned, nonzero, depth, point } => {
            let (sys, cert) = next_order(problem, &p.labels, orders, pinned, nonzero, *depth, point, gb)?;
            rep.system = strings(&sys);
            unsat = cert.verdict.is_unsat();
            rep.summary = format!("first two coefficients: {}", cert.verdict.tag());
            rep.certificates.push(CertRecord::from_refutation("next-order", &cert));
        }
    }
    let needs_audit = matches!(b.method, Method::Monomial { .. } | Method::Generic { .. } | Method::Specialize { .. });
    if let Some(a) = &b.audit {
        rep.audit = Some(run_audit(&p, a, gb)?);
    }
    let audit_ok = match &rep.audit {
        Some(a) => a.passed,
        None => !needs_audit || b.role == Role::Check,
    };
    rep.closed = unsat && audit_ok;
    if unsat && !audit_ok {
        rep.summary.push_str("; nominal weights not justified by the audit");
    }
    if let Some(e) = b.expect {
        rep.matches_expectation = Some((e == Expect::Unsat) == unsat);
    }
    Ok(rep)
}

/// Expands the wedge with concrete integer orders; parameters get order-0
/// series. The system is every equation's first and second nonzero
/// coefficient together with the source equations to first order.
pub fn next_order(
    problem: &WedgeProblem,
    labels: &[String],
    orders: &BTreeMap<String, u32>,
    pinned: &[String],
    nonzero: &[String],
    depth: u32,
    point: &BTreeMap<String, String>,
    gb: Budget,
) -> Result<(Vec<(String, Polynomial)>, RefutationCertificate), CaseError> {
    let mut specs = BTreeMap::new();
    for (n, o) in orders {
        specs.insert(Var::from_name(n), WedgeVarSpec { order: *o, pinned: pinned.contains(n) });
    }
    for v in &problem.params {
        specs.entry(v.clone()).or_insert(WedgeVarSpec { order: 0, pinned: false });
    }
    let mut eqs: Vec<(u32, Polynomial)> = Vec::new();
    for (n, l) in labels.iter().enumerate() {
        eqs.push((n as u32, problem.equation(l).map_err(stage(WEDGE))?.clone()));
    }
    let base = eqs.len() as u32;
    for (n, e) in problem.source_equations.iter().enumerate() {
        eqs.push((base + n as u32, e.clone()));
    }
    let ex = jets::expand_wedge(&eqs, &specs, depth);
    let mut sys = Vec::new();
    for (n, l) in labels.iter().enumerate() {
        let (t, g) = ex.extract_g_theta(n as u32).map_err(stage(WEDGE))?;
        let (t1, h) = ex.extract_next(n as u32).map_err(stage(WEDGE))?;
        sys.push((format!("{}@s^{}", l, t), g));
        sys.push((format!("{}@s^{}", l, t1), h));
    }
    for n in 0..problem.source_equations.len() as u32 {
        for v in 0..=1u32 {
            if let Some(q) = ex.coefficients.get(&(base + n, v)) {
                sys.push((format!("source{}@s^{}", n + 1, v), ex.leading_notation(q)));
            }
        }
    }
    let mut nz = polys(nonzero)?;
    if !point.is_empty() {
        let sub = wedge::complete_point(problem, &var_map(point)?, &[], gb).map_err(stage(WEDGE))?;
        for (_, q) in sys.iter_mut() {
            *q = q.substitute(&sub);
        }
        nz = nz.iter().map(|q| q.substitute(&sub)).collect();
        if nz.iter().any(|q| q.is_zero()) {
            return Err(CaseError::Invalid("next-order point violates a nonzero condition".into()));
        }
        nz.retain(|q| q.as_constant().is_none());
    }
    let qs: Vec<Polynomial> = sys.iter().map(|(_, q)| q.clone()).filter(|q| !q.is_zero()).collect();
    let cert = wedge::refute(&qs, &nz, gb).map_err(stage(WEDGE))?;
    Ok((sys, cert))
}

pub fn run_case(fx: &Fixture, case: &CaseScript, gb: Budget) -> Result<CaseReport, CaseError> {
    let t0 = Instant::now();
    let problem = build_problem(fx, case)?;
    let branches: Vec<BranchReport> =
        case.branches.iter().map(|b| run_branch(&problem, b, gb)).collect::<Result<_, CaseError>>()?;
    let closed_regions: Vec<Vec<Constraint>> = case
        .branches
        .iter()
        .zip(&branches)
        .filter(|(b, r)| b.role == Role::Proof && r.closed)
        .map(|(b, _)| constraints(&b.region))
        .collect::<Result<_, _>>()?;
    let covered = !closed_regions.is_empty() && fm::covered_by(&problem.positivity(), &closed_regions);
    Ok(CaseReport {
        schema_version: SCHEMA_VERSION,
        kind: "wedge-certificate".into(),
        fixture: fx.name.clone(),
        pair: pair_label(&case.source, &case.target),
        source: case.source.clone(),
        target: case.target.clone(),
        verdict: if covered { CaseVerdict::Certified } else { CaseVerdict::Open },
        covered,
        branches,
        timing_ms: t0.elapsed().as_millis(),
    })
}

// ---------------------------------------------------------------------------
// certificate validation

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub records: usize,
    pub failures: Vec<String>,
    pub certified: bool,
}

impl Validation {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes every stored saturation and re-derives every monomial
/// obstruction; also recomputes the case verdict from the branch flags.
pub fn validate_certificate(rep: &CaseReport, gb: Budget) -> Result<Validation, CaseError> {
    if rep.schema_version != SCHEMA_VERSION {
        return Err(CaseError::Schema(rep.schema_version));
    }
    let mut failures = Vec::new();
    let mut records = 0;
    for b in &rep.branches {
        let mut all_unsat = !b.certificates.is_empty();
        for c in &b.certificates {
            records += 1;
            let ok = check_record(c, gb)?;
            if !ok {
                failures.push(format!("branch {}: record does not revalidate", b.name));
            }
            all_unsat &= c.is_unsat();
        }
        if b.closed && b.role == Role::Proof && !all_unsat {
            failures.push(format!("branch {} is marked closed without refutations", b.name));
        }
        if b.closed && b.audit.as_ref().map_or(false, |a| !a.passed) {
            failures.push(format!("branch {} is marked closed with a failed audit", b.name));
        }
    }
    let regions: Vec<Vec<Constraint>> = rep
        .branches
        .iter()
        .filter(|b| b.role == Role::Proof && b.closed)
        .map(|b| constraints(&b.region))
        .collect::<Result<_, _>>()?;
    let mut syms: BTreeSet<String> = BTreeSet::new();
    for r in &regions {
        for c in r {
            syms.extend(c.expr.vars().cloned());
        }
    }
    let pos: Vec<Constraint> = syms.iter().map(|s| Constraint::gt(&fm::LinExpr::var(s), &fm::LinExpr::zero())).collect();
    let covered = !regions.is_empty() && fm::covered_by(&pos, &regions);
    if covered != (rep.verdict == CaseVerdict::Certified) {
        failures.push("stored verdict disagrees with branch coverage".into());
    }
    Ok(Validation { records, failures, certified: covered })
}

fn check_record(c: &CertRecord, gb: Budget) -> Result<bool, CaseError> {
    match c {
        CertRecord::Saturation { system, checks, verdict, .. } => {
            let sys = polys(system)?;
            for k in checks {
                let d = pv(&k.saturator)?;
                let unit = groebner::saturation_is_unit(&sys, &d, gb).map_err(stage("validate"))?;
                if unit != k.unit || (unit && k.basis != vec!["1".to_string()]) {
                    return Ok(false);
                }
            }
            let all = !checks.is_empty() && checks.iter().all(|k| k.unit);
            Ok(all == (verdict == "unsat"))
        }
        CertRecord::Monomial { form, unknowns, nonzero_unknowns, source_equations, .. } => {
            let f = pv(form)?;
            let us: BTreeSet<Var> = unknowns.iter().map(|u| Var::from_name(u)).collect();
            let nz: BTreeSet<Var> = nonzero_unknowns.iter().map(|u| Var::from_name(u)).collect();
            let parts = wedge::split_by_unknowns(&f, &us);
            if parts.len() != 1 {
                return Ok(false);
            }
            let (m, p) = parts.into_iter().next().unwrap();
            if !m.vars().all(|v| nz.contains(v)) || p.is_zero() {
                return Ok(false);
            }
            let src = polys(source_equations)?;
            if src.is_empty() {
                return Ok(true);
            }
            let i = groebner::buchberger(&src, &MonomialOrder::grevlex(), gb).map_err(stage("validate"))?;
            Ok(!i.is_member(&p))
        }
    }
}

// ---------------------------------------------------------------------------
// pipeline

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JetStageEntry {
    pub divisor: String,
    pub mu: [u32; 3],
    pub o_i: u32,
    pub leading: String,
    pub factors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuativeReport {
    pub tasks: Vec<NonInclusionTask>,
    pub residual_full: Vec<String>,
    pub residual_reduced: Vec<String>,
    pub partial_order: Vec<(String, String)>,
    #[serde(default)]
    pub lipman_vector: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub max_steps: u64,
    pub max_basis: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub fixture: String,
    pub verdict: String,
    pub certified: bool,
    pub jets: Vec<JetStageEntry>,
    pub valuative: ValuativeReport,
    pub cases: Vec<CaseReport>,
    pub open_pairs: Vec<String>,
    pub budget: BudgetReport,
    pub timing_ms: u128,
}

pub fn jet_stage(fx: &Fixture, k: u32) -> Result<Vec<JetStageEntry>, CaseError> {
    let eq = fx.surface_equation()?;
    let js = jets::expand_jet(&eq, k);
    let mut out = Vec::new();
    for d in &fx.divisors {
        let fam = jets::reduce_to_family(&js, d).map_err(stage("jets"))?;
        let lead = fam.leading().clone();
        let factors = match jets::factor_leading_form(&lead) {
            Ok(jets::Factorization::Factored(fs)) => fs.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("({})^{}", p, e) }).collect(),
            Ok(jets::Factorization::Irreducible(p)) => vec![p.to_string()],
            Err(_) => vec![lead.to_string()],
        };
        out.push(JetStageEntry { divisor: d.name.clone(), mu: d.mu, o_i: fam.o_i, leading: lead.to_string(), factors });
    }
    Ok(out)
}

pub fn valuative_stage(fx: &Fixture) -> Result<(ValuativeReport, Vec<Pair>), CaseError> {
    let t = fx.order_table()?;
    let sym = fx.symmetry()?;
    let res = valuative::residual_pairs(&t, &sym);
    let tasks = t.all_pairs().into_iter().map(|p| valuative::classify(&t, p)).collect();
    let show = |p: &Pair| pair_label(t.name(p.source), t.name(p.target));
    let lipman = match fx.intersection()? {
        Some(m) => Some(valuative::lipman_vector(&m).map_err(stage("valuative"))?),
        None => None,
    };
    let rep = ValuativeReport {
        tasks,
        residual_full: res.full.iter().map(show).collect(),
        residual_reduced: res.reduced.iter().map(show).collect(),
        partial_order: valuative::partial_order(&t).into_iter().map(|(i, j)| (t.name(i).to_string(), t.name(j).to_string())).collect(),
        lipman_vector: lipman,
    };
    Ok((rep, res.reduced))
}

/// Runs the listed cases on a pool of `jobs` threads; results keep input
/// order.
pub fn run_cases(fx: &Fixture, cases: &[&CaseScript], gb: Budget, jobs: usize) -> Result<Vec<CaseReport>, CaseError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(stage("pool"))?;
    pool.install(|| cases.par_iter().map(|c| run_case(fx, c, gb)).collect())
}

pub fn run_all(fx: &Fixture, gb: Budget, jobs: usize) -> Result<RunReport, CaseError> {
    let t0 = Instant::now();
    let jets = jet_stage(fx, fx.jet_k)?;
    let (mut val, reduced) = valuative_stage(fx)?;
    let t = fx.order_table()?;
    let sym = fx.symmetry()?;
    let scripts: Vec<&CaseScript> = reduced
        .iter()
        .filter_map(|p| fx.cases.iter().find(|c| c.source == t.name(p.source) && c.target == t.name(p.target)))
        .collect();
    let cases = run_cases(fx, &scripts, gb, jobs)?;
    let certified_pairs: BTreeSet<String> =
        cases.iter().filter(|c| c.verdict == CaseVerdict::Certified).map(|c| c.pair.clone()).collect();
    let mut open_pairs = Vec::new();
    for p in &reduced {
        let l = pair_label(t.name(p.source), t.name(p.target));
        if !certified_pairs.contains(&l) {
            open_pairs.push(l);
        }
    }
    // a residual pair is settled when its orbit representative is
    let rep_of = |p: Pair| -> Pair {
        let mut best = p;
        let mut q = sym.apply(p);
        while q != p {
            if (q.target, q.source) < (best.target, best.source) {
                best = q;
            }
            q = sym.apply(q);
        }
        best
    };
    for task in val.tasks.iter_mut() {
        if task.status == TaskStatus::RequiresWedge {
            let p = Pair { source: t.index(&task.source).unwrap(), target: t.index(&task.target).unwrap() };
            let r = rep_of(p);
            let l = pair_label(t.name(r.source), t.name(r.target));
            if certified_pairs.contains(&l) {
                task.status = TaskStatus::ProvedWedge { certificate: l };
            }
        }
    }
    let certified = open_pairs.is_empty();
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        fixture: fx.name.clone(),
        verdict: if certified { "Nash surjectivity certified for fixture".into() } else { "partial: residual pairs open".into() },
        certified,
        jets,
        valuative: val,
        cases,
        open_pairs,
        budget: BudgetReport { max_steps: gb.max_steps, max_basis: gb.max_basis },
        timing_ms: t0.elapsed().as_millis(),
    })
}
