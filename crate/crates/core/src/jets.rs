//! Jet-scheme equations, divisor families and wedge expansions.
//!
//! A k-jet is x(t) = a1 t + ... + ak t^k (same for y, z with b, c). The
//! coefficient of t^l in F(x(t), y(t), z(t)) is the jet equation f_l.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{GaussianRational, Rational};
use crate::multipoly::{Family, Monomial, Polynomial, Var, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("surface equation has a constant or linear part")]
    NotSingular,
    #[error("surface equation may only use x, y, z (found {0})")]
    ForeignVariable(String),
    #[error("k = {k} < o_i = {o} for divisor {name}")]
    KTooSmall { name: String, k: u32, o: u32 },
    #[error("unsupported leading form pattern: {0}")]
    Unsupported(String),
    #[error("all wedge coefficients of equation {u} vanish up to depth {depth}; raise the depth")]
    DepthExhausted { u: u32, depth: u32 },
    #[error("claimed factorization does not multiply back to the input")]
    BadFactorization,
    #[error("no equation with index {0}")]
    NoEquation(u32),
}

/// Power series in one parameter as a dense coefficient list.
pub type Series = Vec<Polynomial>;

pub fn series_mul(p: &Series, q: &Series, n: usize) -> Series {
    let mut out = vec![Polynomial::zero(); n + 1];
    for (i, a) in p.iter().enumerate().take(n + 1) {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate().take(n + 1 - i) {
            if b.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&a.mul(b));
        }
    }
    out
}

fn series_pow_table(s: &Series, max_e: u32, n: usize) -> Vec<Series> {
    let mut one = vec![Polynomial::zero(); n + 1];
    one[0] = Polynomial::one();
    let mut table = vec![one];
    for e in 1..=max_e as usize {
        let next = series_mul(&table[e - 1], s, n);
        table.push(next);
    }
    table
}

/// Substitutes truncated series for variables of `f` and returns the
/// coefficients of t^0..t^n.
pub fn compose_truncated(f: &Polynomial, series: &BTreeMap<Var, Series>, n: usize) -> Series {
    let mut tables: BTreeMap<Var, Vec<Series>> = BTreeMap::new();
    for v in f.vars() {
        let s = match series.get(&v) {
            Some(s) => s,
            None => continue,
        };
        tables.insert(v.clone(), series_pow_table(s, f.degree_in(&v), n));
    }
    let mut out = vec![Polynomial::zero(); n + 1];
    for (m, c) in f.terms() {
        let mut acc: Series = vec![Polynomial::zero(); n + 1];
        acc[0] = Polynomial::constant(c.clone());
        for (v, e) in m.pairs() {
            match tables.get(v) {
                Some(t) => acc = series_mul(&acc, &t[*e as usize], n),
                None => {
                    let mono = Monomial::from_pairs([(v.clone(), *e)]);
                    acc = acc.iter().map(|p| p.mul_monomial(&mono)).collect();
                }
            }
        }
        for (i, p) in acc.into_iter().enumerate() {
            if !p.is_zero() {
                out[i] = out[i].add(&p);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceEquation {
    pub f: Polynomial,
}

impl SurfaceEquation {
    pub fn new(f: Polynomial) -> Result<Self, JetError> {
        let allowed = [Var::aux("x"), Var::aux("y"), Var::aux("z")];
        for v in f.vars() {
            if !allowed.contains(&v) {
                return Err(JetError::ForeignVariable(v.to_string()));
            }
        }
        if f.terms().any(|(m, _)| m.degree() <= 1) {
            return Err(JetError::NotSingular);
        }
        Ok(SurfaceEquation { f })
    }

    pub fn parse(s: &str) -> Result<Self, Box<dyn std::error::Error + Send + Sync>> {
        Ok(SurfaceEquation::new(Polynomial::parse(s)?)?)
    }

    pub fn e6() -> Self {
        SurfaceEquation::new(crate::multipoly::poly("z^2+y^3+x^4")).expect("E6 is singular at 0")
    }

    /// (degree in x, degree in y, degree in z) for every monomial.
    fn exponent_triples(&self) -> Vec<[u32; 3]> {
        let xyz = [Var::aux("x"), Var::aux("y"), Var::aux("z")];
        self.f.terms().map(|(m, _)| [m.exponent(&xyz[0]), m.exponent(&xyz[1]), m.exponent(&xyz[2])]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorRecord {
    pub name: String,
    pub mu: [u32; 3],
    #[serde(default)]
    pub test_orders: BTreeMap<String, u32>,
}

impl DivisorRecord {
    pub fn new(name: &str, mu: [u32; 3]) -> Self {
        DivisorRecord { name: name.to_string(), mu, test_orders: BTreeMap::new() }
    }

    /// The coefficients forced to vanish: a_1..a_{mu_x - 1} and so on.
    pub fn vanishing(&self) -> Vec<Var> {
        let mut v = Vec::new();
        for (f, m) in [(Family::A, self.mu[0]), (Family::B, self.mu[1]), (Family::C, self.mu[2])] {
            for j in 1..m {
                v.push(Var::jet(f, j));
            }
        }
        v
    }

    pub fn mu_of(&self, f: Family) -> u32 {
        match f {
            Family::A => self.mu[0],
            Family::B => self.mu[1],
            Family::C => self.mu[2],
        }
    }

    pub fn kills(&self, v: &Var) -> bool {
        match v {
            Var::Jet { family, index, .. } => *index < self.mu_of(*family),
            Var::Aux(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JetSystem {
    pub surface: SurfaceEquation,
    pub k: u32,
    /// equations[l - 1] is f_l.
    pub equations: Vec<Polynomial>,
}

impl JetSystem {
    pub fn f(&self, l: u32) -> &Polynomial {
        &self.equations[(l - 1) as usize]
    }
}

fn jet_series(k: u32, n: usize, keep: impl Fn(&Var) -> bool) -> BTreeMap<Var, Series> {
    let mut m = BTreeMap::new();
    for (name, fam) in [("x", Family::A), ("y", Family::B), ("z", Family::C)] {
        let mut s = vec![Polynomial::zero(); n + 1];
        for j in 1..=k.min(n as u32) {
            let v = Var::jet(fam, j);
            if keep(&v) {
                s[j as usize] = Polynomial::var(v);
            }
        }
        m.insert(Var::aux(name), s);
    }
    m
}

pub fn expand_jet(eq: &SurfaceEquation, k: u32) -> JetSystem {
    let series = jet_series(k, k as usize, |_| true);
    let coeffs = compose_truncated(&eq.f, &series, k as usize);
    JetSystem { surface: eq.clone(), k, equations: coeffs.into_iter().skip(1).collect() }
}

/// Weight of a jet variable in the t-grading: wt(a_j) = j.
pub fn t_grading(p: &Polynomial) -> WeightVector {
    let mut w = WeightVector::new();
    for v in p.vars() {
        let j = v.index().unwrap_or(0);
        w.set(v, Rational::from_integer(j.into()));
    }
    w
}

/// (o_i, o_ik): the order of F along the divisor, and the last equation
/// index whose coefficients only involve variables of index at most k.
pub fn contact_orders(eq: &SurfaceEquation, d: &DivisorRecord, k: u32) -> (u32, u32) {
    let mut o = u32::MAX;
    let mut ok = u32::MAX;
    for e in eq.exponent_triples() {
        let base: u32 = (0..3).map(|t| e[t] * d.mu[t]).sum();
        o = o.min(base);
        for t in 0..3 {
            if e[t] > 0 {
                ok = ok.min(base - d.mu[t] + k);
            }
        }
    }
    (o, ok)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySystem {
    pub divisor: DivisorRecord,
    pub k: u32,
    pub o_i: u32,
    pub o_ik: u32,
    /// (u, f_{i,u}) for u = o_i..=o_ik.
    pub reduced: Vec<(u32, Polynomial)>,
    pub vanishing: Vec<Var>,
}

impl FamilySystem {
    pub fn get(&self, u: u32) -> Option<&Polynomial> {
        self.reduced.iter().find(|(v, _)| *v == u).map(|(_, p)| p)
    }

    pub fn equations(&self) -> Vec<Polynomial> {
        self.reduced.iter().map(|(_, p)| p.clone()).filter(|p| !p.is_zero()).collect()
    }

    pub fn leading(&self) -> &Polynomial {
        &self.reduced[0].1
    }
}

pub fn reduce_to_family(js: &JetSystem, d: &DivisorRecord) -> Result<FamilySystem, JetError> {
    let (o, ok) = contact_orders(&js.surface, d, js.k);
    if js.k < o {
        return Err(JetError::KTooSmall { name: d.name.clone(), k: js.k, o });
    }
    let series = jet_series(js.k, ok as usize, |v| !d.kills(v));
    let coeffs = compose_truncated(&js.surface.f, &series, ok as usize);
    let reduced = (o..=ok).map(|u| (u, coeffs[u as usize].clone())).collect();
    Ok(FamilySystem { divisor: d.clone(), k: js.k, o_i: o, o_ik: ok, reduced, vanishing: d.vanishing() })
}

/// Gaussian-rational square root, when it exists.
pub fn gq_sqrt(z: &GaussianRational) -> Option<GaussianRational> {
    use num_traits::{Signed, Zero};
    fn rat_sqrt(r: &Rational) -> Option<Rational> {
        if r.is_negative() {
            return None;
        }
        let n = r.numer().sqrt();
        let d = r.denom().sqrt();
        if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }
    if z.is_zero() {
        return Some(GaussianRational::zero());
    }
    let modulus = rat_sqrt(&z.norm())?;
    let two = Rational::from_integer(2.into());
    let x = rat_sqrt(&((&z.re + &modulus) / &two));
    let y = rat_sqrt(&((&modulus - &z.re) / &two));
    let (x, y) = (x?, y?);
    // pick signs so that 2xy = im
    let cand = [
        GaussianRational::new(x.clone(), y.clone()),
        GaussianRational::new(x.clone(), -y.clone()),
    ];
    let _ = Rational::zero();
    cand.into_iter().find(|c| &(c * c) == z)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Factorization {
    /// Factors with multiplicities; their product is the input.
    Factored(Vec<(Polynomial, u32)>),
    /// Not a product over Q(i); the reason is recorded.
    Irreducible(String),
}

/// Factors leading forms of the shape alpha*v^2 + beta*w^(2e) over Q(i).
/// Shapes alpha*v^2 + beta*w^(odd) are reported irreducible.
pub fn factor_leading_form(p: &Polynomial) -> Result<Factorization, JetError> {
    let unsupported = || JetError::Unsupported(p.to_string());
    if p.len() != 2 {
        return Err(unsupported());
    }
    let terms: Vec<(&Monomial, &GaussianRational)> = p.terms().collect();
    // find the square of a single variable
    let is_square_of_var = |m: &Monomial| m.pairs().len() == 1 && m.pairs()[0].1 == 2;
    let is_pure_power = |m: &Monomial| m.pairs().len() == 1;
    let (sq, other) = if is_square_of_var(terms[0].0) && is_pure_power(terms[1].0) {
        (terms[0], terms[1])
    } else if is_square_of_var(terms[1].0) && is_pure_power(terms[0].0) {
        (terms[1], terms[0])
    } else {
        return Err(unsupported());
    };
    let v = sq.0.pairs()[0].0.clone();
    let (w, e) = other.0.pairs()[0].clone();
    if w == v {
        return Err(unsupported());
    }
    let alpha = sq.1.clone();
    let ratio = other.1.checked_div(&alpha).expect("nonzero");
    if e % 2 == 1 {
        return Ok(Factorization::Irreducible(format!(
            "{} is quadratic in {} and {}^{} is not a square",
            p, v, w, e
        )));
    }
    let r = match gq_sqrt(&-ratio) {
        Some(r) => r,
        None => return Ok(Factorization::Irreducible(format!("{} has no square root in Q(i)", -other.1.clone()))),
    };
    // v^2 + ratio*w^e2 = (v - r w^(e/2)) (v + r w^(e/2)) with r^2 = -ratio
    let half = Polynomial::term(r, Monomial::from_pairs([(w, e / 2)]));
    let vp = Polynomial::var(v);
    let mut factors = Vec::new();
    if !alpha.is_one() {
        factors.push((Polynomial::constant(alpha), 1));
    }
    factors.push((vp.add(&half), 1));
    factors.push((vp.sub(&half), 1));
    let out = Factorization::Factored(factors);
    verify_factorization(p, &out)?;
    Ok(out)
}

pub fn verify_factorization(p: &Polynomial, f: &Factorization) -> Result<(), JetError> {
    if let Factorization::Factored(fs) = f {
        let mut prod = Polynomial::one();
        for (q, m) in fs {
            prod = prod.mul(&q.pow(*m));
        }
        if &prod != p {
            return Err(JetError::BadFactorization);
        }
    }
    Ok(())
}

/// Index shift a_l -> a_{l+i} on jet variables.
fn shift(v: &Var, i: u32) -> Var {
    match v {
        Var::Jet { family, index, sub } => Var::Jet { family: *family, index: index + i, sub: *sub },
        v => v.clone(),
    }
}

/// The remainder f_{r+i} - (df_r/da_l a_{l+i} + df_r/db_m b_{m+i} + df_r/dc_n c_{n+i}).
pub fn recursion_remainder(fs: &FamilySystem, i: u32) -> Result<Polynomial, JetError> {
    let r = fs.o_i;
    let fr = fs.get(r).ok_or(JetError::NoEquation(r))?;
    let fri = fs.get(r + i).ok_or(JetError::NoEquation(r + i))?;
    let mut lin = Polynomial::zero();
    for fam in [Family::A, Family::B, Family::C] {
        let base = Var::jet(fam, fs.divisor.mu_of(fam));
        lin = lin.add(&fr.partial_derivative(&base).mul(&Polynomial::var(shift(&base, i))));
    }
    Ok(fri.sub(&lin))
}

/// Checks the shape of f_{r+i} for every i <= max_i available in the family:
/// the remainder only involves a_l..a_{l+i-1}, b_m..b_{m+i-1}, c_n..c_{n+i-1}.
pub fn verify_recursion(fs: &FamilySystem, max_i: u32) -> Result<bool, JetError> {
    for i in 0..=max_i {
        if i == 0 {
            continue;
        }
        let rem = recursion_remainder(fs, i)?;
        for v in rem.vars() {
            let (fam, idx) = match (&v.family(), v.index()) {
                (Some(f), Some(j)) => (*f, j),
                _ => return Ok(false),
            };
            let lo = fs.divisor.mu_of(fam);
            if idx < lo || idx >= lo + i {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// How one coefficient behaves in the wedge: its s-order and whether the
/// leading coefficient is pinned (normalisation a_n(s) = s^alpha).
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeVarSpec {
    pub order: u32,
    pub pinned: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WedgeExpansion {
    pub depth: u32,
    pub specs: BTreeMap<Var, WedgeVarSpec>,
    /// (u, v) -> f'_{u,v}, the coefficient of s^v of equation u.
    pub coefficients: BTreeMap<(u32, u32), Polynomial>,
}

/// The double-indexed coefficient of s^p of a wedge variable.
pub fn wedge_var(v: &Var, p: u32) -> Var {
    match v {
        Var::Jet { family, index, .. } => Var::wedge(*family, *index, p),
        Var::Aux(n) => Var::aux(&format!("{}_{}", n, p)),
    }
}

/// Expands each equation in s. A variable with spec (order w) becomes
/// sum_{p=w}^{depth} V_p s^p; variables without a spec are left alone
/// (treated as constants); `pinned` variables become s^w exactly.
pub fn expand_wedge(equations: &[(u32, Polynomial)], specs: &BTreeMap<Var, WedgeVarSpec>, depth: u32) -> WedgeExpansion {
    let n = depth as usize;
    let mut series = BTreeMap::new();
    for (v, sp) in specs {
        let mut s = vec![Polynomial::zero(); n + 1];
        if (sp.order as usize) <= n {
            if sp.pinned {
                s[sp.order as usize] = Polynomial::one();
            } else {
                for p in sp.order..=depth {
                    s[p as usize] = Polynomial::var(wedge_var(v, p));
                }
            }
        }
        series.insert(v.clone(), s);
    }
    let mut coefficients = BTreeMap::new();
    for (u, f) in equations {
        let c = compose_truncated(f, &series, n);
        for (v, p) in c.into_iter().enumerate() {
            coefficients.insert((*u, v as u32), p);
        }
    }
    WedgeExpansion { depth, specs: specs.clone(), coefficients }
}

impl WedgeExpansion {
    /// Renames leading coefficients V_{order} back to V, the usual notation.
    pub fn leading_notation(&self, p: &Polynomial) -> Polynomial {
        let mut back: BTreeMap<Var, Var> = BTreeMap::new();
        for (v, sp) in &self.specs {
            back.insert(wedge_var(v, sp.order), v.clone());
        }
        p.map_vars(|v| back.get(v).cloned().unwrap_or_else(|| v.clone()))
    }

    /// First nonzero s-coefficient of equation u: (theta_u, g_theta_u).
    /// Coefficients of s^p below the declared order are absent by
    /// construction, which plays the role of reducing modulo J.
    pub fn extract_g_theta(&self, u: u32) -> Result<(u32, Polynomial), JetError> {
        for v in 0..=self.depth {
            match self.coefficients.get(&(u, v)) {
                Some(p) if !p.is_zero() => return Ok((v, self.leading_notation(p))),
                Some(_) => continue,
                None => return Err(JetError::NoEquation(u)),
            }
        }
        Err(JetError::DepthExhausted { u, depth: self.depth })
    }

    /// The coefficient right after g_theta_u.
    pub fn extract_next(&self, u: u32) -> Result<(u32, Polynomial), JetError> {
        let (theta, _) = self.extract_g_theta(u)?;
        if theta + 1 > self.depth {
            return Err(JetError::DepthExhausted { u, depth: self.depth });
        }
        let p = self.coefficients.get(&(u, theta + 1)).ok_or(JetError::NoEquation(u))?;
        Ok((theta + 1, self.leading_notation(p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::poly;

    #[test]
    fn e6_small_jets() {
        let js = expand_jet(&SurfaceEquation::e6(), 4);
        assert_eq!(js.f(1), &Polynomial::zero());
        assert_eq!(js.f(2), &poly("c1^2"));
        assert_eq!(js.f(3), &poly("2*c1*c2+b1^3"));
        assert_eq!(js.f(4), &poly("2*c1*c3+c2^2+3*b1^2*b2+a1^4"));
    }

    #[test]
    fn contact_orders_e6() {
        let e = SurfaceEquation::e6();
        assert_eq!(contact_orders(&e, &DivisorRecord::new("E2", [1, 2, 2]), 8), (4, 10));
        assert_eq!(contact_orders(&e, &DivisorRecord::new("E6", [3, 4, 6]), 12).0, 12);
        assert_eq!(contact_orders(&e, &DivisorRecord::new("E1", [2, 2, 3]), 8), (6, 11));
        assert_eq!(contact_orders(&e, &DivisorRecord::new("E4", [2, 3, 4]), 8), (8, 12));
    }

    #[test]
    fn k_too_small() {
        let js = expand_jet(&SurfaceEquation::e6(), 5);
        let err = reduce_to_family(&js, &DivisorRecord::new("E6", [3, 4, 6])).unwrap_err();
        assert!(matches!(err, JetError::KTooSmall { .. }));
    }

    #[test]
    fn factorizations() {
        match factor_leading_form(&poly("c2^2+a1^4")).unwrap() {
            Factorization::Factored(fs) => {
                let set: Vec<Polynomial> = fs.iter().map(|(p, _)| p.clone()).collect();
                assert!(set.contains(&poly("c2+i*a1^2")));
                assert!(set.contains(&poly("c2-i*a1^2")));
            }
            f => panic!("{:?}", f),
        }
        assert!(matches!(factor_leading_form(&poly("c3^2+b2^3")).unwrap(), Factorization::Irreducible(_)));
        assert!(factor_leading_form(&poly("c3^2+b2^3+a1")).is_err());
    }

    #[test]
    fn gaussian_square_roots() {
        for z in ["-1", "4", "2*i", "-9/4", "3+4*i"] {
            let z = GaussianRational::parse(z).unwrap();
            let r = gq_sqrt(&z).unwrap();
            assert_eq!(&r * &r, z);
        }
        assert!(gq_sqrt(&GaussianRational::from_int(2)).is_none());
    }
}
