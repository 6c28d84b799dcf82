//! Dominant-weight analysis of wedges and algebraic refutation of the
//! resulting leading systems.
//!
//! A wedge problem has two kinds of variables. *Unknowns* are coefficients
//! alive on the target family but killed on the source: along the wedge
//! they are series in s vanishing at s = 0, with a positive s-order (the
//! weight symbol, named after the variable). *Parameters* are the remaining
//! coefficients; their constant terms are a point of the source family and
//! they carry weight 0.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{GaussianRational, Rational};
use crate::fm::{self, Constraint, LinExpr};
use crate::groebner::{self, Budget, GroebnerError};
use crate::jets::{self, DivisorRecord, JetError, SurfaceEquation};
use crate::multipoly::{Monomial, MonomialOrder, PolyError, Polynomial, Var, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WedgeError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("configuration budget exhausted after {explored} branches")]
    BudgetExhausted { explored: u64 },
    #[error("no weight given for unknown {0}")]
    MissingWeight(String),
    #[error("specialization: {0}")]
    Specialization(String),
    #[error("a weight class of {0} vanishes on the source family; drop the equation or raise its order")]
    DegenerateClass(String),
    #[error("unknown equation label {0}")]
    UnknownEquation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeProblem {
    pub label: String,
    /// Target-side equations, labelled (e.g. "f2_7", "g24").
    pub equations: Vec<(String, Polynomial)>,
    pub unknowns: BTreeSet<Var>,
    pub params: BTreeSet<Var>,
    /// Parameters nonzero at a generic point of the source family.
    pub nonzero_params: Vec<Var>,
    /// Equations satisfied by the parameters.
    pub source_equations: Vec<Polynomial>,
}

impl WedgeProblem {
    pub fn new(
        label: &str,
        equations: Vec<(String, Polynomial)>,
        unknowns: BTreeSet<Var>,
        nonzero_params: Vec<Var>,
        source_equations: Vec<Polynomial>,
    ) -> Self {
        let mut params = BTreeSet::new();
        for (_, e) in &equations {
            params.extend(e.vars().into_iter().filter(|v| !unknowns.contains(v)));
        }
        for e in &source_equations {
            params.extend(e.vars().into_iter().filter(|v| !unknowns.contains(v)));
        }
        let nonzero_params = nonzero_params.into_iter().filter(|v| params.contains(v)).collect();
        WedgeProblem { label: label.to_string(), equations, unknowns, params, nonzero_params, source_equations }
    }

    /// Builds the problem for "source family inside target family closure":
    /// target equations f_{target,u} for u in `indices`, after
    /// `substitutions`, plus `extra` equations. Unknowns are the variables
    /// killed by the source divisor and any aux variables.
    #[allow(clippy::too_many_arguments)]
    pub fn from_divisors(
        label: &str,
        surface: &SurfaceEquation,
        source: &DivisorRecord,
        target: &DivisorRecord,
        k: u32,
        indices: &[u32],
        substitutions: &BTreeMap<Var, Polynomial>,
        extra: &[(String, Polynomial)],
        source_equations: Vec<Polynomial>,
    ) -> Result<Self, WedgeError> {
        let js = jets::expand_jet(surface, k);
        let fam = jets::reduce_to_family(&js, target)?;
        let mut equations: Vec<(String, Polynomial)> = extra.to_vec();
        for &u in indices {
            let f = fam.get(u).ok_or(JetError::NoEquation(u))?;
            equations.push((format!("f{}_{}", target.name.trim_start_matches('E'), u), f.substitute(substitutions)));
        }
        let mut unknowns = BTreeSet::new();
        for (_, e) in &equations {
            for v in e.vars() {
                if matches!(v, Var::Aux(_)) || source.kills(&v) {
                    unknowns.insert(v);
                }
            }
        }
        let firsts: Vec<Var> = [Var::a(source.mu[0]), Var::b(source.mu[1]), Var::c(source.mu[2])].into();
        Ok(WedgeProblem::new(label, equations, unknowns, firsts, source_equations))
    }

    pub fn equation(&self, label: &str) -> Result<&Polynomial, WedgeError> {
        self.equations
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, p)| p)
            .ok_or_else(|| WedgeError::UnknownEquation(label.to_string()))
    }

    pub fn labels(&self) -> Vec<String> {
        self.equations.iter().map(|(l, _)| l.clone()).collect()
    }

    /// Weight vector with parameters at 0.
    pub fn weight_vector(&self, w: &BTreeMap<Var, Rational>) -> Result<WeightVector, WedgeError> {
        let mut wv = WeightVector::with_default(Rational::zero());
        for u in &self.unknowns {
            let x = w.get(u).ok_or_else(|| WedgeError::MissingWeight(u.to_string()))?;
            wv.set(u.clone(), x.clone());
        }
        Ok(wv)
    }

    /// Symbolic weight of a monomial: sum of exponent * symbol.
    pub fn linear_form(&self, m: &Monomial) -> LinExpr {
        let mut e = LinExpr::zero();
        for (v, k) in m.pairs() {
            if self.unknowns.contains(v) {
                e = e.add(&LinExpr::term(&v.to_string(), Rational::from_integer((*k).into())));
            }
        }
        e
    }

    pub fn symbols(&self) -> Vec<String> {
        self.unknowns.iter().map(|v| v.to_string()).collect()
    }

    /// All weight symbols positive.
    pub fn positivity(&self) -> Vec<Constraint> {
        self.symbols().iter().map(|s| Constraint::gt(&LinExpr::var(s), &LinExpr::zero())).collect()
    }

    fn source_ideal(&self, budget: Budget) -> Result<Option<groebner::IdealHandle>, WedgeError> {
        if self.source_equations.is_empty() {
            return Ok(None);
        }
        Ok(Some(groebner::buchberger(&self.source_equations, &MonomialOrder::grevlex(), budget)?))
    }
}

/// Monomials of one equation sharing a symbolic weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightClass {
    pub form: LinExpr,
    pub poly: Polynomial,
    /// True when the class is (unknown monomial) * (parameter polynomial that
    /// is nonzero at a generic source point): it can never be the sole
    /// minimum.
    pub lone_monomial: bool,
    /// Every parameter coefficient vanishes on the source family, so the
    /// class's true s-order is not its form.
    pub vanishing: bool,
}

/// Splits a polynomial as sum over unknown-monomials of m * P_m(params).
pub fn split_by_unknowns(p: &Polynomial, unknowns: &BTreeSet<Var>) -> BTreeMap<Monomial, Polynomial> {
    let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (mut u, mut r) = (Vec::new(), Vec::new());
        for (v, k) in m.pairs() {
            if unknowns.contains(v) {
                u.push((v.clone(), *k));
            } else {
                r.push((v.clone(), *k));
            }
        }
        out.entry(Monomial::from_pairs(u)).or_insert_with(Polynomial::zero).add_term(Monomial::from_pairs(r), c);
    }
    out
}

fn generic_nonzero(p: &Polynomial, src: &Option<groebner::IdealHandle>) -> bool {
    match src {
        None => !p.is_zero(),
        Some(i) => !i.is_member(p),
    }
}

pub fn weight_classes(problem: &WedgeProblem, eq: &Polynomial, budget: Budget) -> Result<Vec<WeightClass>, WedgeError> {
    let src = problem.source_ideal(budget)?;
    Ok(classes_with(problem, eq, &src))
}

fn classes_with(problem: &WedgeProblem, eq: &Polynomial, src: &Option<groebner::IdealHandle>) -> Vec<WeightClass> {
    let mut by_form: BTreeMap<LinExpr, Polynomial> = BTreeMap::new();
    for (m, c) in eq.terms() {
        by_form.entry(problem.linear_form(m)).or_insert_with(Polynomial::zero).add_term(m.clone(), c);
    }
    by_form
        .into_iter()
        .map(|(form, poly)| {
            let parts = split_by_unknowns(&poly, &problem.unknowns);
            let lone_monomial = parts.len() == 1 && parts.values().all(|q| generic_nonzero(q, src));
            let vanishing = parts.values().all(|q| !generic_nonzero(q, src));
            WeightClass { form, poly, lone_monomial, vanishing }
        })
        .collect()
}

/// The ways equation `label` can have its minimum attained admissibly:
/// two classes tie below all others, or one class that is not a lone
/// monomial sits below all others.
pub fn weight_constraints(problem: &WedgeProblem, label: &str, budget: Budget) -> Result<Vec<Vec<Constraint>>, WedgeError> {
    let eq = problem.equation(label)?;
    let classes = weight_classes(problem, eq, budget)?;
    let pos = problem.positivity();
    let mut out = Vec::new();
    let below_rest = |i: usize, cons: &mut Vec<Constraint>| {
        for (j, d) in classes.iter().enumerate() {
            if j != i {
                cons.push(Constraint::ge(&d.form, &classes[i].form));
            }
        }
    };
    for i in 0..classes.len() {
        if !classes[i].lone_monomial {
            let mut cons = Vec::new();
            below_rest(i, &mut cons);
            out.push(cons);
        }
        for j in i + 1..classes.len() {
            let mut cons = vec![Constraint::eq(&classes[i].form, &classes[j].form)];
            below_rest(i, &mut cons);
            out.push(cons);
        }
    }
    out.retain(|alt| {
        let mut all = pos.clone();
        all.extend(alt.iter().cloned());
        fm::is_feasible(&all)
    });
    for alt in out.iter_mut() {
        alt.sort();
        alt.dedup();
        // drop constraints implied by the others
        let mut k = 0;
        while k < alt.len() {
            let mut rest = pos.clone();
            rest.extend(alt.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, c)| c.clone()));
            if fm::implies(&rest, &alt[k]) {
                alt.remove(k);
            } else {
                k += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominantConfiguration {
    /// Per equation: the minimal classes' combined polynomial (the exact
    /// leading form on this region).
    pub leading: Vec<(String, Polynomial)>,
    pub constraints: Vec<Constraint>,
    pub witness: BTreeMap<String, Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    pub configurations: Vec<DominantConfiguration>,
    pub explored: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub symbol: String,
    pub value: String,
}

struct Enumerator<'a> {
    classes: Vec<(String, Vec<WeightClass>)>,
    budget: u64,
    explored: u64,
    out: Vec<DominantConfiguration>,
    _p: std::marker::PhantomData<&'a ()>,
}

impl<'a> Enumerator<'a> {
    fn go(&mut self, eq_idx: usize, cons: Vec<Constraint>, leading: Vec<(String, Polynomial)>) -> Result<(), WedgeError> {
        self.explored += 1;
        if self.explored > self.budget {
            return Err(WedgeError::BudgetExhausted { explored: self.explored });
        }
        if eq_idx == self.classes.len() {
            let witness = fm::feasible(&cons).expect("feasible branch");
            self.out.push(DominantConfiguration { leading, constraints: cons, witness });
            return Ok(());
        }
        let classes = self.classes[eq_idx].1.clone();
        // candidates: classes not forced strictly above another class
        let cand: Vec<usize> = (0..classes.len())
            .filter(|&i| {
                !(0..classes.len())
                    .any(|j| j != i && fm::implies(&cons, &Constraint::gt(&classes[i].form, &classes[j].form)))
            })
            .collect();
        for (x, &i) in cand.iter().enumerate() {
            for &j in &cand[x + 1..] {
                let eq = Constraint::eq(&classes[i].form, &classes[j].form);
                if fm::implies(&cons, &eq) {
                    continue;
                }
                for c in [Constraint::lt(&classes[i].form, &classes[j].form), eq, Constraint::gt(&classes[i].form, &classes[j].form)] {
                    let mut next = cons.clone();
                    next.push(c);
                    if fm::is_feasible(&next) {
                        self.go(eq_idx, next, leading.clone())?;
                    }
                }
                return Ok(());
            }
        }
        // all candidates tie: they form the minimum
        if cand.len() == 1 && classes[cand[0]].lone_monomial {
            return Ok(());
        }
        let mut lead = Polynomial::zero();
        for &i in &cand {
            lead = lead.add(&classes[i].poly);
        }
        let mut leading = leading;
        leading.push((self.classes[eq_idx].0.clone(), lead));
        self.go(eq_idx + 1, cons, leading)
    }
}

/// All admissible dominant configurations over the listed equations, in the
/// region `side` (plus positivity and the normalization).
pub fn enumerate_configurations(
    problem: &WedgeProblem,
    labels: &[String],
    side: &[Constraint],
    normalization: Option<&Normalization>,
    budget: u64,
    gb_budget: Budget,
) -> Result<Enumeration, WedgeError> {
    let src = problem.source_ideal(gb_budget)?;
    let mut classes = Vec::new();
    for l in labels {
        let cs = classes_with(problem, problem.equation(l)?, &src);
        if cs.iter().any(|c| c.vanishing) {
            return Err(WedgeError::DegenerateClass(l.clone()));
        }
        classes.push((l.clone(), cs));
    }
    let mut cons = problem.positivity();
    cons.extend(side.iter().cloned());
    if let Some(n) = normalization {
        let v = Constraint::parse(&format!("{} = {}", n.symbol, n.value))
            .map_err(|e| WedgeError::Specialization(e.to_string()))?;
        cons.push(v);
    }
    let mut en = Enumerator { classes, budget, explored: 0, out: Vec::new(), _p: std::marker::PhantomData };
    if fm::is_feasible(&cons) {
        en.go(0, cons, Vec::new())?;
    }
    Ok(Enumeration { configurations: en.out, explored: en.explored })
}

/// Nominal leading forms at the given weights (unknowns only; parameters
/// weigh 0), after substituting `pins`.
pub fn leading_system(
    problem: &WedgeProblem,
    labels: &[String],
    weights: &BTreeMap<Var, Rational>,
    pins: &BTreeMap<Var, Polynomial>,
) -> Result<Vec<(String, Polynomial)>, WedgeError> {
    let wv = problem.weight_vector(weights)?;
    let mut out = Vec::new();
    for l in labels {
        let p = problem.equation(l)?;
        let lf = if p.is_zero() { Polynomial::zero() } else { p.leading_form(&wv)? };
        out.push((l.clone(), lf.substitute(pins)));
    }
    Ok(out)
}

/// The leading system of a configuration (its exact minimal forms).
pub fn configuration_system(cfg: &DominantConfiguration) -> Vec<(String, Polynomial)> {
    cfg.leading.clone()
}

// ---------------------------------------------------------------------------
// refutation

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationCheck {
    pub saturator: Polynomial,
    pub unit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Unsat,
    Sat(BTreeMap<Var, GaussianRational>),
    Inconclusive(String),
}

impl Verdict {
    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Unsat => "unsat",
            Verdict::Sat(_) => "sat",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefutationCertificate {
    pub system: Vec<Polynomial>,
    pub nonzero: Vec<Polynomial>,
    pub checks: Vec<SaturationCheck>,
    pub verdict: Verdict,
}

impl RefutationCertificate {
    /// Recomputes every saturation and compares.
    pub fn revalidate(&self, budget: Budget) -> Result<bool, WedgeError> {
        for c in &self.checks {
            if groebner::saturation_is_unit(&self.system, &c.saturator, budget)? != c.unit {
                return Ok(false);
            }
        }
        let all_unit = !self.checks.is_empty() && self.checks.iter().all(|c| c.unit);
        Ok(all_unit == self.verdict.is_unsat())
    }
}

fn product(ps: &[Polynomial]) -> Polynomial {
    ps.iter().fold(Polynomial::one(), |a, p| a.mul(p))
}

/// Small Gaussian-rational values, simplest first.
pub fn grid_values() -> Vec<GaussianRational> {
    let mut reals: Vec<Rational> = Vec::new();
    for d in 1..=3i64 {
        for n in -3..=3i64 {
            let r = Rational::new(n.into(), d.into());
            if !reals.contains(&r) {
                reals.push(r);
            }
        }
    }
    reals.sort_by_key(|r| (r.numer().abs() + r.denom(), r.is_negative()));
    let mut out = Vec::new();
    for s in 0..reals.len() * 2 {
        for (a, x) in reals.iter().enumerate() {
            for (b, y) in reals.iter().enumerate() {
                if a + b == s {
                    out.push(GaussianRational::new(x.clone(), y.clone()));
                }
            }
        }
    }
    out
}

pub const GRID_CAP: usize = 200_000;

/// Searches the small grid for a point where `system` vanishes and each of
/// `nonzero` does not.
pub fn grid_search(system: &[Polynomial], nonzero: &[Polynomial], cap: usize) -> Option<BTreeMap<Var, GaussianRational>> {
    let mut vars: BTreeSet<Var> = BTreeSet::new();
    for p in system.iter().chain(nonzero) {
        vars.extend(p.vars());
    }
    let vars: Vec<Var> = vars.into_iter().collect();
    let vals = grid_values();
    let n = vars.len();
    // widen the grid progressively while the total stays under the cap
    let mut width = 1;
    let mut tried = 0usize;
    loop {
        let w = width.min(vals.len());
        let total = (w as f64).powi(n as i32);
        if total > cap as f64 - tried as f64 && width > 1 {
            return None;
        }
        let mut idx = vec![0usize; n];
        loop {
            if idx.iter().any(|&i| i + 1 == w) || w == 1 {
                let point: BTreeMap<Var, GaussianRational> =
                    vars.iter().cloned().zip(idx.iter().map(|&i| vals[i].clone())).collect();
                tried += 1;
                let ok = system.iter().all(|p| p.evaluate(&point).map_or(false, |v| v.is_zero()))
                    && nonzero.iter().all(|p| p.evaluate(&point).map_or(false, |v| !v.is_zero()));
                if ok {
                    return Some(point);
                }
                if tried > cap {
                    return None;
                }
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < w {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        if w == vals.len() {
            return None;
        }
        width += 1;
    }
}

/// UNSAT iff 1 lies in (system) : (prod nonzero)^infinity.
pub fn refute(system: &[Polynomial], nonzero: &[Polynomial], budget: Budget) -> Result<RefutationCertificate, WedgeError> {
    let sat = product(nonzero);
    let unit = groebner::saturation_is_unit(system, &sat, budget)?;
    let checks = vec![SaturationCheck { saturator: sat, unit }];
    let verdict = if unit {
        Verdict::Unsat
    } else {
        match grid_search(system, nonzero, GRID_CAP) {
            Some(p) => Verdict::Sat(p),
            None => Verdict::Inconclusive("saturation is proper; no small witness found".into()),
        }
    };
    Ok(RefutationCertificate { system: system.to_vec(), nonzero: nonzero.to_vec(), checks, verdict })
}

/// Refutation of a weighted homogeneous system at a specialized point:
/// the system plus `relations` must force every unknown to zero, i.e. each
/// saturation by (unknown * prod exclusions) is the unit ideal.
pub fn refute_projective(
    system: &[Polynomial],
    unknowns: &[Var],
    relations: &[Polynomial],
    exclusions: &[Polynomial],
    budget: Budget,
) -> Result<RefutationCertificate, WedgeError> {
    let mut all = system.to_vec();
    all.extend(relations.iter().cloned());
    all.retain(|p| !p.is_zero());
    let excl = product(exclusions);
    let mut checks = Vec::new();
    for u in unknowns {
        let d = Polynomial::var(u.clone()).mul(&excl);
        let unit = groebner::saturation_is_unit(&all, &d, budget)?;
        checks.push(SaturationCheck { saturator: d, unit });
    }
    let verdict = if !checks.is_empty() && checks.iter().all(|c| c.unit) {
        Verdict::Unsat
    } else {
        let bad: Vec<String> = checks.iter().filter(|c| !c.unit).map(|c| c.saturator.to_string()).collect();
        let mut nz = exclusions.to_vec();
        let witness = unknowns.iter().find_map(|u| {
            nz.push(Polynomial::var(u.clone()));
            let r = grid_search(&all, &nz, GRID_CAP / 4);
            nz.pop();
            r
        });
        match witness {
            Some(p) => Verdict::Sat(p),
            None => Verdict::Inconclusive(format!("proper saturation by {}", bad.join(", "))),
        }
    };
    Ok(RefutationCertificate { system: all, nonzero: exclusions.to_vec(), checks, verdict })
}

/// Completes a partial parameter point to a point of the source family:
/// each source equation still involving free parameters is solved for one
/// that occurs linearly with a nonzero constant coefficient; the remaining
/// free parameters are set to 0. Returns the substitution and any
/// relations (for algebraic values) carried along.
pub fn complete_point(
    problem: &WedgeProblem,
    point: &BTreeMap<Var, Polynomial>,
    relations: &[Polynomial],
    budget: Budget,
) -> Result<BTreeMap<Var, Polynomial>, WedgeError> {
    let mut sub = point.clone();
    let mut pending: Vec<Polynomial> = problem.source_equations.iter().map(|e| e.substitute(&sub)).collect();
    let fixed: BTreeSet<Var> = relations.iter().flat_map(|r| r.vars()).collect();
    loop {
        let mut progress = false;
        for e in pending.iter_mut() {
            let free: Vec<Var> = e.vars().into_iter().filter(|v| !fixed.contains(v)).collect();
            if free.is_empty() {
                continue;
            }
            let pick = free.iter().find(|v| {
                e.degree_in(v) == 1 && {
                    let d = e.partial_derivative(v);
                    d.as_constant().map_or(false, |c| !c.is_zero())
                }
            });
            let Some(v) = pick.cloned() else { continue };
            let d = e.partial_derivative(&v).as_constant().unwrap();
            let rest = e.substitute_one(&v, &Polynomial::zero());
            let val = rest.scale(&(-d.inv().unwrap()));
            sub.insert(v.clone(), val.clone());
            progress = true;
        }
        pending = problem.source_equations.iter().map(|e| e.substitute(&sub)).collect();
        if !progress {
            break;
        }
    }
    // free parameters left in the problem go to 0
    let mut all_params: BTreeSet<Var> = problem.params.clone();
    for e in &pending {
        all_params.extend(e.vars());
    }
    for v in all_params {
        if !sub.contains_key(&v) && !fixed.contains(&v) {
            sub.insert(v, Polynomial::zero());
        }
    }
    // re-substitute until values only mention relation variables
    for _ in 0..8 {
        let snapshot = sub.clone();
        for val in sub.values_mut() {
            *val = val.substitute(&snapshot);
        }
    }
    // the point must lie on the source family
    let mut rel_ideal_gens = relations.to_vec();
    rel_ideal_gens.retain(|p| !p.is_zero());
    for e in &problem.source_equations {
        let v = e.substitute(&sub);
        let on = if rel_ideal_gens.is_empty() {
            v.is_zero()
        } else {
            groebner::buchberger(&rel_ideal_gens, &MonomialOrder::grevlex(), budget)?.is_member(&v)
        };
        if !on {
            return Err(WedgeError::Specialization(format!("point is not on the source family: {} = {}", e, v)));
        }
    }
    Ok(sub)
}

/// Whether every polynomial is weighted homogeneous for `w`.
pub fn all_homogeneous(system: &[Polynomial], w: &WeightVector) -> Result<bool, WedgeError> {
    for p in system {
        if !p.is_weighted_homogeneous(w)?.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A monomial obstruction: the leading form is c * m * P with m an
/// unknown monomial in `nonzero_unknowns` and P a parameter polynomial
/// nonzero at a generic source point.
pub fn monomial_obstruction(
    problem: &WedgeProblem,
    lf: &Polynomial,
    nonzero_unknowns: &BTreeSet<Var>,
    budget: Budget,
) -> Result<bool, WedgeError> {
    if lf.is_zero() {
        return Ok(false);
    }
    let parts = split_by_unknowns(lf, &problem.unknowns);
    if parts.len() != 1 {
        return Ok(false);
    }
    let (m, p) = parts.into_iter().next().unwrap();
    if !m.vars().all(|v| nonzero_unknowns.contains(v)) {
        return Ok(false);
    }
    let src = problem.source_ideal(budget)?;
    Ok(generic_nonzero(&p, &src))
}

/// Closes one configuration: monomial obstruction, or generic
/// unsatisfiability of growing prefixes of its leading system together
/// with the source equations, saturating by every unknown that occurs and
/// the nonzero parameters.
pub fn close_configuration(
    problem: &WedgeProblem,
    cfg: &DominantConfiguration,
    budget: Budget,
) -> Result<(String, RefutationCertificate), WedgeError> {
    let nz_unknowns: BTreeSet<Var> = problem.unknowns.clone();
    for (l, p) in &cfg.leading {
        if monomial_obstruction(problem, p, &nz_unknowns, budget)? {
            let cert = RefutationCertificate {
                system: vec![p.clone()],
                nonzero: Vec::new(),
                checks: Vec::new(),
                verdict: Verdict::Unsat,
            };
            return Ok((format!("monomial {}", l), cert));
        }
    }
    let sys: Vec<Polynomial> = cfg.leading.iter().map(|(_, p)| p.clone()).collect();
    let mut last = None;
    for n in 1..=sys.len() {
        let mut part: Vec<Polynomial> = sys[..n].to_vec();
        let mut vars: BTreeSet<Var> = BTreeSet::new();
        for p in &part {
            vars.extend(p.vars());
        }
        if vars.iter().any(|v| problem.params.contains(v)) {
            part.extend(problem.source_equations.iter().cloned());
            for e in &problem.source_equations {
                vars.extend(e.vars());
            }
        }
        let nonzero: Vec<Polynomial> = vars
            .iter()
            .filter(|v| nz_unknowns.contains(v) || problem.nonzero_params.contains(v))
            .map(|v| Polynomial::var(v.clone()))
            .collect();
        let cert = refute_generic(&part, &nonzero, budget)?;
        if cert.verdict.is_unsat() {
            return Ok((format!("generic on first {} equations", n), cert));
        }
        last = Some(cert);
    }
    Ok(("not closed".into(), last.expect("nonempty system")))
}

/// As `refute`, but without the grid search (used inside enumeration loops).
pub fn refute_generic(system: &[Polynomial], nonzero: &[Polynomial], budget: Budget) -> Result<RefutationCertificate, WedgeError> {
    let sat = product(nonzero);
    let unit = groebner::saturation_is_unit(system, &sat, budget)?;
    Ok(RefutationCertificate {
        system: system.to_vec(),
        nonzero: nonzero.to_vec(),
        checks: vec![SaturationCheck { saturator: sat, unit }],
        verdict: if unit { Verdict::Unsat } else { Verdict::Inconclusive("saturation is proper".into()) },
    })
}
