//! Sparse multivariate polynomials over Q(i).
//!
//! Variables are either jet coefficients (`a3`, `c4`, or wedge coefficients
//! `a2_5` with a secondary index) or free-form auxiliary names (`x`, `t`, `u`).
//! Terms live in a `BTreeMap` keyed by monomial so that iteration, printing
//! and hashing are deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeff::{GaussianRational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
            Family::C => 'c',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        match c {
            'a' => Some(Family::A),
            'b' => Some(Family::B),
            'c' => Some(Family::C),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Var {
    Jet { family: Family, index: u32, sub: Option<u32> },
    Aux(Arc<str>),
}

impl Var {
    pub fn jet(family: Family, index: u32) -> Var {
        Var::Jet { family, index, sub: None }
    }

    pub fn wedge(family: Family, index: u32, p: u32) -> Var {
        Var::Jet { family, index, sub: Some(p) }
    }

    pub fn a(n: u32) -> Var {
        Var::jet(Family::A, n)
    }

    pub fn b(n: u32) -> Var {
        Var::jet(Family::B, n)
    }

    pub fn c(n: u32) -> Var {
        Var::jet(Family::C, n)
    }

    pub fn aux(name: &str) -> Var {
        Var::Aux(Arc::from(name))
    }

    /// Maps a textual name onto a variable: `a3`, `b2_7`, anything else is aux.
    pub fn from_name(name: &str) -> Var {
        let mut chars = name.chars();
        if let Some(fam) = chars.next().and_then(Family::from_letter) {
            let rest = &name[1..];
            let (main, sub) = match rest.split_once('_') {
                Some((m, s)) => (m, Some(s)),
                None => (rest, None),
            };
            let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
            if digits(main) && sub.map_or(true, digits) {
                if let Ok(index) = main.parse::<u32>() {
                    if index >= 1 {
                        let sub = sub.map(|s| s.parse::<u32>().unwrap_or(0));
                        return Var::Jet { family: fam, index, sub };
                    }
                }
            }
        }
        Var::aux(name)
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            Var::Jet { family, .. } => Some(*family),
            Var::Aux(_) => None,
        }
    }

    pub fn index(&self) -> Option<u32> {
        match self {
            Var::Jet { index, .. } => Some(*index),
            Var::Aux(_) => None,
        }
    }

    /// Drops the secondary index, if any.
    pub fn base(&self) -> Var {
        match self {
            Var::Jet { family, index, .. } => Var::jet(*family, *index),
            v => v.clone(),
        }
    }

    fn rank_key(&self) -> (u8, u32, i64, &str) {
        match self {
            Var::Aux(n) => (3, 0, 0, n),
            Var::Jet { family, index, sub } => {
                let f = match family {
                    Family::A => 0,
                    Family::B => 1,
                    Family::C => 2,
                };
                (f, *index, sub.map_or(-1, |p| p as i64), "")
            }
        }
    }
}

/// Default ranking: aux > c > b > a, then primary index, then secondary
/// index, larger meaning higher rank.
impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank_key().cmp(&other.rank_key())
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Aux(n) => write!(f, "{}", n),
            Var::Jet { family, index, sub: None } => write!(f, "{}{}", family.letter(), index),
            Var::Jet { family, index, sub: Some(p) } => write!(f, "{}{}_{}", family.letter(), index, p),
        }
    }
}

/// A power product, stored highest-ranked variable first with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Monomial {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().rev().collect())
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (&self.0[i], &other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0.clone(), a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }

    pub fn weight(&self, w: &WeightVector) -> Result<Rational, PolyError> {
        let mut acc = Rational::zero();
        for (v, e) in &self.0 {
            let wv = w.get(v).ok_or_else(|| PolyError::MissingWeight(v.clone()))?;
            acc += wv * Rational::from_integer((*e).into());
        }
        Ok(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{}^{}", v, e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("weighted order of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("no weight assigned to variable {0}")]
    MissingWeight(Var),
    #[error("no value assigned to variable {0}")]
    MissingValue(Var),
}

/// Weights on variables; used for weighted orders and leading forms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightVector {
    weights: BTreeMap<Var, Rational>,
    default: Option<Rational>,
}

impl WeightVector {
    pub fn new() -> Self {
        WeightVector::default()
    }

    /// Every variable not listed gets `d`.
    pub fn with_default(d: Rational) -> Self {
        WeightVector { weights: BTreeMap::new(), default: Some(d) }
    }

    pub fn set(&mut self, v: Var, w: Rational) -> &mut Self {
        self.weights.insert(v, w);
        self
    }

    pub fn with(mut self, v: Var, w: Rational) -> Self {
        self.weights.insert(v, w);
        self
    }

    pub fn get(&self, v: &Var) -> Option<&Rational> {
        self.weights.get(v).or(self.default.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Rational)> {
        self.weights.iter()
    }

    /// The t-grading of jet variables: weight of a_j is j.
    pub fn jet_grading() -> Self {
        WeightVector::default()
    }

    pub fn scaled(&self, r: &Rational) -> Self {
        WeightVector {
            weights: self.weights.iter().map(|(v, w)| (v.clone(), w * r)).collect(),
            default: self.default.as_ref().map(|d| d * r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderKind {
    Grevlex,
    Lex,
    /// The listed variables form a first block, compared before the rest;
    /// both blocks use grevlex internally.
    Block(BTreeSet<Var>),
}

/// A monomial order: a kind plus an optional explicit ranking of variables
/// (highest first). Unlisted variables follow the default ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub ranking: Vec<Var>,
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::grevlex()
    }
}

impl MonomialOrder {
    pub fn grevlex() -> Self {
        MonomialOrder { kind: OrderKind::Grevlex, ranking: Vec::new() }
    }

    pub fn lex() -> Self {
        MonomialOrder { kind: OrderKind::Lex, ranking: Vec::new() }
    }

    pub fn elimination(kill: impl IntoIterator<Item = Var>) -> Self {
        MonomialOrder { kind: OrderKind::Block(kill.into_iter().collect()), ranking: Vec::new() }
    }

    pub fn with_ranking(mut self, ranking: Vec<Var>) -> Self {
        self.ranking = ranking;
        self
    }

    /// Lays out `vars` highest rank first, as this order sees them.
    pub fn arrange(&self, vars: &BTreeSet<Var>) -> Vec<Var> {
        let mut listed: Vec<Var> = self.ranking.iter().filter(|v| vars.contains(v)).cloned().collect();
        let seen: BTreeSet<Var> = listed.iter().cloned().collect();
        let rest: Vec<Var> = vars.iter().rev().filter(|v| !seen.contains(v)).cloned().collect();
        listed.extend(rest);
        if let OrderKind::Block(first) = &self.kind {
            let (mut a, b): (Vec<Var>, Vec<Var>) = listed.into_iter().partition(|v| first.contains(v));
            a.extend(b);
            a
        } else {
            listed
        }
    }

    /// Compares two monomials under this order. Used for printing and tests;
    /// the Groebner kernel uses its own dense comparison.
    pub fn cmp(&self, x: &Monomial, y: &Monomial) -> std::cmp::Ordering {
        let mut vars = BTreeSet::new();
        vars.extend(x.vars().cloned());
        vars.extend(y.vars().cloned());
        let layout = self.arrange(&vars);
        let ex: Vec<u32> = layout.iter().map(|v| x.exponent(v)).collect();
        let ey: Vec<u32> = layout.iter().map(|v| y.exponent(v)).collect();
        let split = match &self.kind {
            OrderKind::Block(first) => layout.iter().filter(|v| first.contains(v)).count(),
            _ => 0,
        };
        match &self.kind {
            OrderKind::Lex => ex.cmp(&ey),
            OrderKind::Grevlex => grevlex_cmp(&ex, &ey),
            OrderKind::Block(_) => grevlex_cmp(&ex[..split], &ey[..split])
                .then_with(|| grevlex_cmp(&ex[split..], &ey[split..])),
        }
    }
}

pub(crate) fn grevlex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for k in (0..a.len()).rev() {
            if a[k] != b[k] {
                return b[k].cmp(&a[k]);
            }
        }
        std::cmp::Ordering::Equal
    })
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Polynomial::constant(GaussianRational::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(GaussianRational::one(), Monomial::var(v))
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn parse(s: &str) -> Result<Self, crate::parse::ParseError> {
        crate::parse::parse_polynomial(s)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars().cloned()).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), &-c);
        }
        r
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut r = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        r
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replaces each variable in `assignment` by its image; other variables stay.
    pub fn substitute(&self, assignment: &BTreeMap<Var, Polynomial>) -> Polynomial {
        let mut cache: BTreeMap<(Var, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = Polynomial::constant(c.clone());
            for (v, e) in m.pairs() {
                match assignment.get(v) {
                    Some(img) => {
                        let pw = cache.entry((v.clone(), *e)).or_insert_with(|| img.pow(*e)).clone();
                        acc = acc.mul(&pw);
                        if acc.is_zero() {
                            break;
                        }
                    }
                    None => kept.push((v.clone(), *e)),
                }
            }
            if !kept.is_empty() {
                acc = acc.mul_monomial(&Monomial::from_pairs(kept));
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn substitute_one(&self, v: &Var, img: &Polynomial) -> Polynomial {
        let mut m = BTreeMap::new();
        m.insert(v.clone(), img.clone());
        self.substitute(&m)
    }

    pub fn partial_derivative(&self, v: &Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let pairs = m.pairs().iter().map(|(w, f)| if w == v { (w.clone(), f - 1) } else { (w.clone(), *f) });
            out.add_term(Monomial::from_pairs(pairs), &c.scale(&Rational::from_integer(e.into())));
        }
        out
    }

    pub fn weighted_order(&self, w: &WeightVector) -> Result<Rational, PolyError> {
        let mut best: Option<Rational> = None;
        for m in self.terms.keys() {
            let x = m.weight(w)?;
            if best.as_ref().map_or(true, |b| x < *b) {
                best = Some(x);
            }
        }
        best.ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_form(&self, w: &WeightVector) -> Result<Polynomial, PolyError> {
        let o = self.weighted_order(w)?;
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if m.weight(w)? == o {
                out.add_term(m.clone(), c);
            }
        }
        Ok(out)
    }

    /// Returns (true, Some(d)) when all monomials share the weighted degree d;
    /// the zero polynomial counts as homogeneous with no degree.
    pub fn is_weighted_homogeneous(&self, w: &WeightVector) -> Result<(bool, Option<Rational>), PolyError> {
        let mut deg: Option<Rational> = None;
        for m in self.terms.keys() {
            let x = m.weight(w)?;
            match &deg {
                None => deg = Some(x),
                Some(d) if *d != x => return Ok((false, None)),
                _ => {}
            }
        }
        Ok((true, deg))
    }

    /// Part of weighted degree exactly `d`.
    pub fn weighted_part(&self, w: &WeightVector, d: &Rational) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if m.weight(w)? == *d {
                out.add_term(m.clone(), c);
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &BTreeMap<Var, GaussianRational>) -> Result<GaussianRational, PolyError> {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.pairs() {
                let x = point.get(v).ok_or_else(|| PolyError::MissingValue(v.clone()))?;
                t = &t * &x.pow(*e);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Terms sorted from largest to smallest under `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(&Monomial, &GaussianRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|x, y| ord.cmp(y.0, x.0));
        v
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<(Monomial, GaussianRational)> {
        self.sorted_terms(ord).first().map(|(m, c)| ((*m).clone(), (*c).clone()))
    }

    /// Divides by the leading coefficient under `ord`.
    pub fn monic(&self, ord: &MonomialOrder) -> Polynomial {
        match self.leading_term(ord) {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => Polynomial::zero(),
        }
    }

    /// True when `self` is a nonzero scalar multiple of `other`.
    pub fn is_associate(&self, other: &Polynomial) -> bool {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return false;
        }
        let (m0, c0) = self.terms.iter().next().unwrap();
        let d0 = match other.terms.get(m0) {
            Some(d) => d,
            None => return false,
        };
        let ratio = c0.checked_div(d0).unwrap();
        other.scale(&ratio) == *self
    }

    /// Keeps only the monomials whose variables all satisfy `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        Polynomial { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn map_vars(&self, mut f: impl FnMut(&Var) -> Var) -> Polynomial {
        Polynomial::from_terms(
            self.terms.iter().map(|(m, c)| (Monomial::from_pairs(m.pairs().iter().map(|(v, e)| (f(v), *e))), c.clone())),
        )
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let ord = MonomialOrder::grevlex();
        let mut first = true;
        for (m, c) in self.sorted_terms(&ord) {
            let (neg, mag) = if c.is_real() && c.re < Rational::zero() {
                (true, -c.clone())
            } else if c.re.is_zero() && c.im < Rational::zero() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            let cs = if c.is_compound() { format!("({})", mag) } else { mag.to_string() };
            let body = if m.is_one() {
                cs
            } else if mag.is_one() {
                m.to_string()
            } else {
                format!("{}*{}", cs, m)
            };
            if first {
                write!(f, "{}{}", if neg { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        Polynomial::add(self, o)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        Polynomial::sub(self, o)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        Polynomial::mul(self, o)
    }
}

/// Parses or panics; for literals in tests and examples.
pub fn poly(s: &str) -> Polynomial {
    Polynomial::parse(s).unwrap_or_else(|e| panic!("bad polynomial `{}`: {}", s, e))
}

pub fn weights(pairs: &[(&str, i64)]) -> WeightVector {
    let mut w = WeightVector::new();
    for (n, x) in pairs {
        w.set(Var::from_name(n), Rational::from_integer((*x).into()));
    }
    w
}

pub fn one_rational() -> Rational {
    Rational::one()
}
