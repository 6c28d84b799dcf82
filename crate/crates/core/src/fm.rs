//! Exact Fourier-Motzkin elimination over Q for systems mixing strict,
//! non-strict and equality constraints. Used for weight feasibility,
//! implication and region coverage.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::Rational;
use crate::parse::parse_polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FmError {
    #[error("constraint `{0}` is not linear")]
    NotLinear(String),
    #[error("cannot read constraint `{0}`: {1}")]
    Syntax(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinExpr {
    pub coeffs: BTreeMap<String, Rational>,
    pub constant: Rational,
}

impl LinExpr {
    pub fn zero() -> Self {
        LinExpr::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinExpr { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn var(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), Rational::one());
        LinExpr { coeffs, constant: Rational::zero() }
    }

    pub fn term(name: &str, c: Rational) -> Self {
        LinExpr::var(name).scale(&c)
    }

    pub fn add(&self, o: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (v, c) in &o.coeffs {
            let e = out.coeffs.entry(v.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(v);
            }
        }
        out.constant += &o.constant;
        out
    }

    pub fn sub(&self, o: &LinExpr) -> LinExpr {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> LinExpr {
        if r.is_zero() {
            return LinExpr::zero();
        }
        LinExpr { coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * r)).collect(), constant: &self.constant * r }
    }

    pub fn coeff(&self, v: &str) -> Rational {
        self.coeffs.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Replaces `v` by `e`.
    pub fn substitute(&self, v: &str, e: &LinExpr) -> LinExpr {
        match self.coeffs.get(v) {
            None => self.clone(),
            Some(c) => {
                let mut rest = self.clone();
                rest.coeffs.remove(v);
                rest.add(&e.scale(c))
            }
        }
    }

    pub fn eval(&self, point: &BTreeMap<String, Rational>) -> Rational {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc += c * point.get(v).cloned().unwrap_or_else(Rational::zero);
        }
        acc
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.coeffs.keys()
    }

    /// Divides by the absolute value of the leading coefficient.
    fn normalized(&self) -> LinExpr {
        match self.coeffs.values().next() {
            Some(c) => self.scale(&c.abs().recip()),
            None => self.clone(),
        }
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if a.is_one() {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}*{}", a, v)?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)?;
        } else if !self.constant.is_zero() {
            let neg = self.constant.is_negative();
            write!(f, " {} {}", if neg { "-" } else { "+" }, self.constant.abs())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rel {
    Gt,
    Ge,
    Eq,
}

/// `expr rel 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub expr: LinExpr,
    pub rel: Rel,
}

impl Constraint {
    pub fn gt(a: &LinExpr, b: &LinExpr) -> Self {
        Constraint { expr: a.sub(b), rel: Rel::Gt }
    }
    pub fn ge(a: &LinExpr, b: &LinExpr) -> Self {
        Constraint { expr: a.sub(b), rel: Rel::Ge }
    }
    /// Equalities are stored with a positive leading coefficient.
    pub fn eq(a: &LinExpr, b: &LinExpr) -> Self {
        let e = a.sub(b);
        let flip = e.coeffs.values().next().map_or(false, |c| c.is_negative());
        Constraint { expr: if flip { e.scale(&-Rational::one()) } else { e }, rel: Rel::Eq }
    }
    pub fn lt(a: &LinExpr, b: &LinExpr) -> Self {
        Constraint::gt(b, a)
    }
    pub fn le(a: &LinExpr, b: &LinExpr) -> Self {
        Constraint::ge(b, a)
    }

    pub fn holds(&self, point: &BTreeMap<String, Rational>) -> bool {
        let v = self.expr.eval(point);
        match self.rel {
            Rel::Gt => v.is_positive(),
            Rel::Ge => !v.is_negative(),
            Rel::Eq => v.is_zero(),
        }
    }

    /// The negation as a disjunction of constraints.
    pub fn negate(&self) -> Vec<Constraint> {
        let neg = self.expr.scale(&-Rational::one());
        match self.rel {
            Rel::Gt => vec![Constraint { expr: neg, rel: Rel::Ge }],
            Rel::Ge => vec![Constraint { expr: neg, rel: Rel::Gt }],
            Rel::Eq => vec![Constraint { expr: self.expr.clone(), rel: Rel::Gt }, Constraint { expr: neg, rel: Rel::Gt }],
        }
    }

    /// Reads `lhs op rhs` with op one of `>= <= > < =`.
    pub fn parse(s: &str) -> Result<Constraint, FmError> {
        for (op, flip, rel) in
            [(">=", false, Rel::Ge), ("<=", true, Rel::Ge), ("==", false, Rel::Eq), (">", false, Rel::Gt), ("<", true, Rel::Gt), ("=", false, Rel::Eq)]
        {
            if let Some((l, r)) = s.split_once(op) {
                let l = linear(l.trim(), s)?;
                let r = linear(r.trim(), s)?;
                if rel == Rel::Eq {
                    return Ok(Constraint::eq(&l, &r));
                }
                let expr = if flip { r.sub(&l) } else { l.sub(&r) };
                return Ok(Constraint { expr, rel });
            }
        }
        Err(FmError::Syntax(s.to_string(), "no relation operator".into()))
    }
}

fn linear(side: &str, whole: &str) -> Result<LinExpr, FmError> {
    let p = parse_polynomial(side).map_err(|e| FmError::Syntax(whole.to_string(), e.to_string()))?;
    let mut out = LinExpr::zero();
    for (m, c) in p.terms() {
        if !c.is_real() {
            return Err(FmError::NotLinear(whole.to_string()));
        }
        match m.degree() {
            0 => out.constant += &c.re,
            1 => {
                let v = m.vars().next().expect("one variable").to_string();
                out = out.add(&LinExpr::term(&v, c.re.clone()));
            }
            _ => return Err(FmError::NotLinear(whole.to_string())),
        }
    }
    Ok(out)
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.rel {
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Eq => "=",
        };
        write!(f, "{} {} 0", self.expr, op)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Ineq {
    expr: LinExpr,
    strict: bool,
}

/// Satisfiability over Q. Returns a witness point on success.
pub fn feasible(cons: &[Constraint]) -> Option<BTreeMap<String, Rational>> {
    let mut vars: BTreeSet<String> = BTreeSet::new();
    for c in cons {
        vars.extend(c.expr.vars().cloned());
    }
    // substitute equalities away
    let mut eqs: Vec<LinExpr> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for c in cons {
        match c.rel {
            Rel::Eq => eqs.push(c.expr.clone()),
            Rel::Gt => ineqs.push(Ineq { expr: c.expr.clone(), strict: true }),
            Rel::Ge => ineqs.push(Ineq { expr: c.expr.clone(), strict: false }),
        }
    }
    let mut solved: Vec<(String, LinExpr)> = Vec::new();
    while let Some(e) = eqs.pop() {
        let Some((v, c)) = e.coeffs.iter().next().map(|(v, c)| (v.clone(), c.clone())) else {
            if e.constant.is_zero() {
                continue;
            }
            return None;
        };
        let mut rest = e.clone();
        rest.coeffs.remove(&v);
        let val = rest.scale(&-(c.recip()));
        for other in eqs.iter_mut() {
            *other = other.substitute(&v, &val);
        }
        for q in ineqs.iter_mut() {
            q.expr = q.expr.substitute(&v, &val);
        }
        for (_, s) in solved.iter_mut() {
            *s = s.substitute(&v, &val);
        }
        solved.push((v, val));
    }
    let solved_names: BTreeSet<String> = solved.iter().map(|(v, _)| v.clone()).collect();
    let order: Vec<String> = vars.iter().filter(|v| !solved_names.contains(*v)).cloned().collect();

    let mut stages: Vec<Vec<Ineq>> = Vec::new();
    let mut cur = dedup(ineqs);
    for v in &order {
        stages.push(cur.clone());
        let (mut lo, mut hi, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for q in cur {
            let c = q.expr.coeff(v);
            if c.is_positive() {
                lo.push(q);
            } else if c.is_negative() {
                hi.push(q);
            } else {
                keep.push(q);
            }
        }
        for l in &lo {
            for h in &hi {
                let cl = l.expr.coeff(v);
                let ch = -h.expr.coeff(v);
                let comb = l.expr.scale(&ch).add(&h.expr.scale(&cl));
                keep.push(Ineq { expr: comb, strict: l.strict || h.strict });
            }
        }
        cur = dedup(keep);
        if cur.iter().any(|q| q.expr.is_constant() && !const_ok(q)) {
            return None;
        }
    }
    if cur.iter().any(|q| !const_ok(q)) {
        return None;
    }
    // back-substitution
    let mut point: BTreeMap<String, Rational> = BTreeMap::new();
    for (k, v) in order.iter().enumerate().rev() {
        let mut lo: Option<(Rational, bool)> = None;
        let mut hi: Option<(Rational, bool)> = None;
        for q in &stages[k] {
            let c = q.expr.coeff(v);
            if c.is_zero() {
                continue;
            }
            let mut rest = q.expr.clone();
            rest.coeffs.remove(v);
            let bound = -rest.eval(&point) / &c;
            if c.is_positive() {
                if lo.as_ref().map_or(true, |(b, s)| bound > *b || (bound == *b && q.strict && !s)) {
                    lo = Some((bound, q.strict));
                }
            } else if hi.as_ref().map_or(true, |(b, s)| bound < *b || (bound == *b && q.strict && !s)) {
                hi = Some((bound, q.strict));
            }
        }
        let val = match (lo, hi) {
            (Some((l, _)), Some((h, _))) => {
                if l == h {
                    l
                } else {
                    (l + h) / Rational::from_integer(2.into())
                }
            }
            (Some((l, _)), None) => l.floor() + Rational::one(),
            (None, Some((h, _))) => h.ceil() - Rational::one(),
            (None, None) => Rational::zero(),
        };
        point.insert(v.clone(), val);
    }
    for (v, e) in solved.iter().rev() {
        let val = e.eval(&point);
        point.insert(v.clone(), val);
    }
    debug_assert!(cons.iter().all(|c| c.holds(&point)));
    Some(point)
}

fn const_ok(q: &Ineq) -> bool {
    if !q.expr.is_constant() {
        return true;
    }
    if q.strict {
        q.expr.constant.is_positive()
    } else {
        !q.expr.constant.is_negative()
    }
}

fn dedup(v: Vec<Ineq>) -> Vec<Ineq> {
    let mut best: BTreeMap<LinExpr, bool> = BTreeMap::new();
    let mut out = Vec::new();
    for q in v {
        if q.expr.is_constant() {
            if !const_ok(&q) {
                return vec![q];
            }
            continue;
        }
        let n = q.expr.normalized();
        let e = best.entry(n).or_insert(false);
        *e |= q.strict;
    }
    for (expr, strict) in best {
        out.push(Ineq { expr, strict });
    }
    out
}

pub fn is_feasible(cons: &[Constraint]) -> bool {
    feasible(cons).is_some()
}

/// Whether every point of `cons` satisfies `c`.
pub fn implies(cons: &[Constraint], c: &Constraint) -> bool {
    c.negate().into_iter().all(|n| {
        let mut all = cons.to_vec();
        all.push(n);
        !is_feasible(&all)
    })
}

/// Whether the region `p` lies inside the union of `leaves`.
pub fn covered_by(p: &[Constraint], leaves: &[Vec<Constraint>]) -> bool {
    if !is_feasible(p) {
        return true;
    }
    let Some((first, rest)) = leaves.split_first() else {
        return false;
    };
    // p minus first = union over i of p & c_1..c_{i-1} & not c_i
    let mut prefix = p.to_vec();
    for c in first {
        for n in c.negate() {
            let mut piece = prefix.clone();
            piece.push(n);
            if !covered_by(&piece, rest) {
                return false;
            }
        }
        prefix.push(c.clone());
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Constraint {
        Constraint::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let k = c("2*g3 = 3*b2");
        assert_eq!(k.rel, Rel::Eq);
        assert!(Constraint::parse("x*y > 0").is_err());
        assert!(Constraint::parse("x").is_err());
        assert_eq!(c("a2 >= 1/2*a1").to_string(), "-1/2*a1 + a2 >= 0");
    }

    #[test]
    fn feasibility_and_witness() {
        let sys = vec![c("x > 0"), c("y > 0"), c("2*x = 3*y"), c("x < 2*y")];
        let w = feasible(&sys).unwrap();
        assert!(sys.iter().all(|k| k.holds(&w)));
        assert!(!is_feasible(&[c("x > 0"), c("x < 0")]));
        assert!(!is_feasible(&[c("x >= 1"), c("x < 1")]));
        assert!(is_feasible(&[c("x >= 1"), c("x <= 1")]));
        assert!(!is_feasible(&[c("x = 1"), c("x = 2")]));
    }

    #[test]
    fn implication_and_cover() {
        let base = vec![c("b2 > 0"), c("2*g3 = 3*b2")];
        assert!(implies(&base, &c("g3 < 2*b2")));
        assert!(implies(&base, &c("g3 >= b2")));
        assert!(!implies(&base, &c("g3 > 2*b2")));
        let leaves = vec![vec![c("x >= 1")], vec![c("x < 1")]];
        assert!(covered_by(&[], &leaves));
        assert!(!covered_by(&[], &leaves[..1]));
        assert!(covered_by(&[c("x > 2")], &leaves[..1]));
    }
}
