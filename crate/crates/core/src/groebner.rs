//! Buchberger's algorithm over Q(i) with Gebauer-Moeller pair pruning,
//! plus the ideal operations built on it: normal forms, elimination,
//! Rabinowitsch saturation, dimension and distinguished ideals.
//!
//! Polynomials are converted to a dense exponent layout for the duration of
//! a computation. Column 0 is the highest-ranked variable.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::GaussianRational;
use crate::multipoly::{Monomial, MonomialOrder, OrderKind, Polynomial, Var};

/// Environment variable holding the default term-operation budget.
pub const BUDGET_ENV: &str = "JETSPACE_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_basis: usize,
    pub max_steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_basis: 4000, max_steps: 20_000_000 }
    }
}

impl Budget {
    pub fn steps(max_steps: u64) -> Self {
        Budget { max_steps, ..Budget::default() }
    }

    /// Default budget, overridden by `JETSPACE_BUDGET` when it parses.
    pub fn from_env() -> Self {
        match std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse::<u64>().ok()) {
            Some(n) => Budget::steps(n),
            None => Budget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("groebner budget exceeded ({what}: basis {basis}, steps {steps})")]
    BudgetExceeded { what: &'static str, basis: usize, steps: u64 },
    #[error("operation needs a proper ideal")]
    UnitIdeal,
    #[error("the set S_j is empty")]
    EmptyS,
    #[error("saturating by the zero polynomial")]
    ZeroSaturator,
    #[error("{0} does not divide exactly")]
    NotDivisible(String),
}

// ---------------------------------------------------------------------------
// dense kernel

#[derive(Debug, Clone)]
struct Layout {
    vars: Vec<Var>,
    kind: Kind,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Grevlex,
    Lex,
    Block(usize),
}

type Exp = Vec<u16>;

#[derive(Debug, Clone)]
struct Term {
    e: Exp,
    c: GaussianRational,
}

/// Terms sorted by decreasing monomial.
type DPoly = Vec<Term>;

impl Layout {
    fn new(ord: &MonomialOrder, vars: &BTreeSet<Var>) -> Layout {
        let vars = ord.arrange(vars);
        let kind = match &ord.kind {
            OrderKind::Grevlex => Kind::Grevlex,
            OrderKind::Lex => Kind::Lex,
            OrderKind::Block(first) => Kind::Block(vars.iter().filter(|v| first.contains(v)).count()),
        };
        Layout { vars, kind }
    }

    fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        match self.kind {
            Kind::Lex => a.cmp(b),
            Kind::Grevlex => grevlex16(a, b),
            Kind::Block(s) => grevlex16(&a[..s], &b[..s]).then_with(|| grevlex16(&a[s..], &b[s..])),
        }
    }

    fn to_dense(&self, p: &Polynomial) -> DPoly {
        let mut out: DPoly = p
            .terms()
            .map(|(m, c)| {
                let mut e = vec![0u16; self.vars.len()];
                for (v, k) in m.pairs() {
                    let col = self.vars.iter().position(|w| w == v).expect("variable in layout");
                    e[col] = *k as u16;
                }
                Term { e, c: c.clone() }
            })
            .collect();
        out.sort_by(|x, y| self.cmp(&y.e, &x.e));
        out
    }

    fn to_sparse(&self, p: &DPoly) -> Polynomial {
        Polynomial::from_terms(p.iter().map(|t| {
            let m = Monomial::from_pairs(
                t.e.iter().enumerate().filter(|(_, k)| **k > 0).map(|(i, k)| (self.vars[i].clone(), *k as u32)),
            );
            (m, t.c.clone())
        }))
    }
}

fn grevlex16(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&x| x as u32).sum();
    let db: u32 = b.iter().map(|&x| x as u32).sum();
    da.cmp(&db).then_with(|| {
        for k in (0..a.len()).rev() {
            if a[k] != b[k] {
                return b[k].cmp(&a[k]);
            }
        }
        Ordering::Equal
    })
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u16], b: &[u16]) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn deg(a: &[u16]) -> u32 {
    a.iter().map(|&x| x as u32).sum()
}

fn make_monic(p: &mut DPoly) {
    if let Some(first) = p.first() {
        if !first.c.is_one() {
            let inv = first.c.inv().expect("nonzero leading coefficient");
            for t in p.iter_mut() {
                t.c = &t.c * &inv;
            }
        }
    }
}

/// p - c * x^shift * g, where the leading terms are known to cancel when
/// `skip_lead` is set.
fn sub_mul(l: &Layout, p: &[Term], c: &GaussianRational, shift: &[u16], g: &[Term]) -> DPoly {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let scaled = |t: &Term| Term {
        e: t.e.iter().zip(shift).map(|(a, b)| a + b).collect(),
        c: -(&t.c * c),
    };
    let mut pending: Option<Term> = None;
    while i < p.len() || j < g.len() {
        if pending.is_none() && j < g.len() {
            pending = Some(scaled(&g[j]));
        }
        match (&pending, i < p.len()) {
            (Some(q), true) => match l.cmp(&p[i].e, &q.e) {
                Ordering::Greater => {
                    out.push(p[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(pending.take().unwrap());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &p[i].c + &q.c;
                    if !s.is_zero() {
                        out.push(Term { e: p[i].e.clone(), c: s });
                    }
                    pending = None;
                    i += 1;
                    j += 1;
                }
            },
            (Some(_), false) => {
                out.push(pending.take().unwrap());
                j += 1;
            }
            (None, true) => {
                out.push(p[i].clone());
                i += 1;
            }
            (None, false) => break,
        }
    }
    out
}

struct Counter {
    steps: u64,
    budget: Budget,
}

impl Counter {
    fn tick(&mut self, basis: usize, cost: u64) -> Result<(), GroebnerError> {
        self.steps += cost;
        if self.steps > self.budget.max_steps {
            return Err(GroebnerError::BudgetExceeded { what: "term operations", basis, steps: self.steps });
        }
        Ok(())
    }
}

/// Full reduction of p by the (monic) polynomials in `g`.
fn reduce(l: &Layout, p: DPoly, g: &[&DPoly], ctr: &mut Counter) -> Result<DPoly, GroebnerError> {
    let mut rem: DPoly = Vec::new();
    let mut cur = p;
    let mut start = 0;
    while start < cur.len() {
        let lt = &cur[start];
        let hit = g.iter().find(|q| divides(&q[0].e, &lt.e));
        match hit {
            Some(q) => {
                // charge for the terms touched and the coefficient size, not just the step
                let touched = (cur.len() - start + q.len()) as u64;
                ctr.tick(g.len(), touched * (1 + lt.c.bits() / 64))?;
                let shift: Exp = lt.e.iter().zip(&q[0].e).map(|(a, b)| a - b).collect();
                let c = lt.c.clone();
                cur = sub_mul(l, &cur[start + 1..], &c, &shift, &q[1..]);
                start = 0;
            }
            None => {
                rem.push(cur[start].clone());
                start += 1;
            }
        }
    }
    Ok(rem)
}

fn spoly(l: &Layout, f: &DPoly, g: &DPoly) -> DPoly {
    let m = lcm(&f[0].e, &g[0].e);
    let sf: Exp = m.iter().zip(&f[0].e).map(|(a, b)| a - b).collect();
    let sg: Exp = m.iter().zip(&g[0].e).map(|(a, b)| a - b).collect();
    let fs: DPoly = f[1..]
        .iter()
        .map(|t| Term { e: t.e.iter().zip(&sf).map(|(a, b)| a + b).collect(), c: t.c.clone() })
        .collect();
    // f, g are monic, so S = x^sf f - x^sg g with leading terms cancelled
    sub_mul(l, &fs, &GaussianRational::one(), &sg, &g[1..])
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exp,
}

struct Engine<'a> {
    l: &'a Layout,
    polys: Vec<DPoly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    ctr: Counter,
}

impl<'a> Engine<'a> {
    fn reduce_active(&mut self, p: DPoly) -> Result<DPoly, GroebnerError> {
        let refs: Vec<&DPoly> = self.polys.iter().zip(&self.active).filter(|(_, a)| **a).map(|(p, _)| p).collect();
        reduce(self.l, p, &refs, &mut self.ctr)
    }

    fn n_active(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }

    /// Gebauer-Moeller update with the new polynomial at index h.
    fn update(&mut self, h: usize) {
        let lh = self.polys[h][0].e.clone();
        let olds: Vec<usize> = (0..h).filter(|&g| self.active[g]).collect();
        let cands: Vec<(usize, Exp)> = olds.iter().map(|&g| (g, lcm(&lh, &self.polys[g][0].e))).collect();
        let mut keep: Vec<(usize, Exp)> = Vec::new();
        for (idx, (g, m)) in cands.iter().enumerate() {
            let disjoint = coprime(&lh, &self.polys[*g][0].e);
            let dominated_later = cands[idx + 1..].iter().any(|(_, m2)| divides(m2, m));
            let dominated_kept = keep.iter().any(|(_, m2)| divides(m2, m));
            if disjoint || (!dominated_later && !dominated_kept) {
                keep.push((*g, m.clone()));
            }
        }
        let new_pairs: Vec<Pair> = keep
            .into_iter()
            .filter(|(g, _)| !coprime(&lh, &self.polys[*g][0].e))
            .map(|(g, m)| Pair { i: g, j: h, lcm: m })
            .collect();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            let li = lcm(&polys[p.i][0].e, &lh);
            let lj = lcm(&polys[p.j][0].e, &lh);
            !(divides(&lh, &p.lcm) && li != p.lcm && lj != p.lcm)
        });
        self.pairs.extend(new_pairs);
        for g in olds {
            if divides(&lh, &self.polys[g][0].e) {
                self.active[g] = false;
            }
        }
    }

    fn add(&mut self, mut p: DPoly) -> Result<bool, GroebnerError> {
        make_monic(&mut p);
        let is_unit = p.len() == 1 && p[0].e.iter().all(|&x| x == 0);
        self.polys.push(p);
        self.active.push(true);
        let h = self.polys.len() - 1;
        self.update(h);
        if self.n_active() > self.ctr.budget.max_basis {
            return Err(GroebnerError::BudgetExceeded {
                what: "basis size",
                basis: self.n_active(),
                steps: self.ctr.steps,
            });
        }
        Ok(is_unit)
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let l = self.l;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let ord = deg(&a.lcm).cmp(&deg(&b.lcm)).then_with(|| l.cmp(&a.lcm, &b.lcm));
            if ord == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn run(&mut self, gens: Vec<DPoly>) -> Result<Vec<DPoly>, GroebnerError> {
        for g in gens {
            let r = self.reduce_active(g)?;
            if !r.is_empty() && self.add(r)? {
                return Ok(vec![vec![Term { e: vec![0; self.l.vars.len()], c: GaussianRational::one() }]]);
            }
        }
        while let Some(pair) = self.select() {
            let s = spoly(self.l, &self.polys[pair.i], &self.polys[pair.j]);
            let r = self.reduce_active(s)?;
            if !r.is_empty() && self.add(r)? {
                return Ok(vec![vec![Term { e: vec![0; self.l.vars.len()], c: GaussianRational::one() }]]);
            }
        }
        // reduced basis
        let mut basis: Vec<DPoly> =
            self.polys.iter().zip(&self.active).filter(|(_, a)| **a).map(|(p, _)| p.clone()).collect();
        basis.sort_by(|a, b| self.l.cmp(&a[0].e, &b[0].e));
        let mut out: Vec<DPoly> = Vec::with_capacity(basis.len());
        for k in 0..basis.len() {
            let others: Vec<&DPoly> = basis.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p).collect();
            let head = basis[k][0].clone();
            let tail = reduce(self.l, basis[k][1..].to_vec(), &others, &mut self.ctr)?;
            let mut p = vec![head];
            p.extend(tail);
            out.push(p);
        }
        Ok(out)
    }
}

fn groebner_dense(l: &Layout, gens: Vec<DPoly>, budget: Budget) -> Result<(Vec<DPoly>, u64), GroebnerError> {
    let mut eng = Engine { l, polys: Vec::new(), active: Vec::new(), pairs: Vec::new(), ctr: Counter { steps: 0, budget } };
    let gens: Vec<DPoly> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    let basis = eng.run(gens)?;
    Ok((basis, eng.ctr.steps))
}

// ---------------------------------------------------------------------------
// public interface

/// Generators plus the reduced Groebner basis for a fixed order.
#[derive(Debug, Clone)]
pub struct IdealHandle {
    pub generators: Vec<Polynomial>,
    pub order: MonomialOrder,
    ring: Vec<Var>,
    basis: Vec<Polynomial>,
    pub steps: u64,
}

fn ring_of(gens: &[Polynomial], extra: &[Var]) -> BTreeSet<Var> {
    let mut vars: BTreeSet<Var> = extra.iter().cloned().collect();
    for g in gens {
        vars.extend(g.vars());
    }
    vars
}

pub fn buchberger(gens: &[Polynomial], ord: &MonomialOrder, budget: Budget) -> Result<IdealHandle, GroebnerError> {
    buchberger_in(gens, &[], ord, budget)
}

/// As `buchberger`, with extra ambient variables that may not occur in the
/// generators (they matter for dimension counts).
pub fn buchberger_in(
    gens: &[Polynomial],
    ring: &[Var],
    ord: &MonomialOrder,
    budget: Budget,
) -> Result<IdealHandle, GroebnerError> {
    let vars = ring_of(gens, ring);
    let l = Layout::new(ord, &vars);
    let dense: Vec<DPoly> = gens.iter().map(|g| l.to_dense(g)).collect();
    let (basis, steps) = groebner_dense(&l, dense, budget)?;
    Ok(IdealHandle {
        generators: gens.to_vec(),
        order: ord.clone(),
        ring: l.vars.clone(),
        basis: basis.iter().map(|p| l.to_sparse(p)).collect(),
        steps,
    })
}

impl IdealHandle {
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn ring(&self) -> &[Var] {
        &self.ring
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].as_constant().map_or(false, |c| !c.is_zero())
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let vars = ring_of(std::slice::from_ref(p), &self.ring);
        let l = Layout::new(&self.order.clone().with_ranking(self.ring.clone()), &vars);
        let basis: Vec<DPoly> = self.basis.iter().map(|g| l.to_dense(g)).collect();
        let refs: Vec<&DPoly> = basis.iter().collect();
        let mut ctr = Counter { steps: 0, budget: Budget { max_basis: usize::MAX, max_steps: u64::MAX } };
        let r = reduce(&l, l.to_dense(p), &refs, &mut ctr).expect("unbounded");
        l.to_sparse(&r)
    }

    pub fn is_member(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Same ideal, recomputed for another order.
    pub fn with_order(&self, ord: &MonomialOrder, budget: Budget) -> Result<IdealHandle, GroebnerError> {
        buchberger_in(&self.basis, &self.ring, ord, budget)
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        let ord = self.order.clone().with_ranking(self.ring.clone());
        self.basis.iter().filter_map(|g| g.leading_term(&ord).map(|(m, _)| m)).collect()
    }

    /// Buchberger's criterion on the cached basis: every S-polynomial
    /// reduces to zero.
    pub fn verify_criterion(&self) -> bool {
        let vars: BTreeSet<Var> = self.ring.iter().cloned().collect();
        let l = Layout::new(&self.order.clone().with_ranking(self.ring.clone()), &vars);
        let mut basis: Vec<DPoly> = self.basis.iter().map(|g| l.to_dense(g)).collect();
        for b in basis.iter_mut() {
            make_monic(b);
        }
        let refs: Vec<&DPoly> = basis.iter().collect();
        let mut ctr = Counter { steps: 0, budget: Budget { max_basis: usize::MAX, max_steps: u64::MAX } };
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = spoly(&l, &basis[i], &basis[j]);
                if !reduce(&l, s, &refs, &mut ctr).expect("unbounded").is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Equality of ideals by comparing reduced bases (same order).
    pub fn same_ideal(&self, other: &IdealHandle) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn contains_ideal(&self, other: &IdealHandle) -> bool {
        other.basis.iter().all(|g| self.is_member(g))
    }
}

pub fn is_unit_ideal(gens: &[Polynomial], budget: Budget) -> Result<bool, GroebnerError> {
    Ok(buchberger(gens, &MonomialOrder::grevlex(), budget)?.is_unit())
}

/// I intersected with the subring without the `kill` variables.
pub fn eliminate(i: &IdealHandle, kill: &BTreeSet<Var>, budget: Budget) -> Result<IdealHandle, GroebnerError> {
    if kill.is_empty() {
        return Ok(i.clone());
    }
    let ord = MonomialOrder::elimination(kill.iter().cloned());
    let full = buchberger_in(&i.generators, &i.ring, &ord, budget)?;
    let kept: Vec<Polynomial> = full.basis.iter().filter(|g| g.vars().is_disjoint(kill)).cloned().collect();
    let ring: Vec<Var> = i.ring.iter().filter(|v| !kill.contains(v)).cloned().collect();
    buchberger_in(&kept, &ring, &i.order, budget)
}

#[derive(Debug, Clone)]
pub struct SaturationResult {
    pub ideal: IdealHandle,
    /// Smallest N <= 64 with d^N g in I for every basis element g of the
    /// saturation; None when the search cap is hit.
    pub exponent_bound: Option<u32>,
}

fn fresh_aux(prefix: &str, avoid: &BTreeSet<Var>) -> Var {
    let mut k = 0;
    loop {
        let v = Var::aux(&format!("{}{}", prefix, k));
        if !avoid.contains(&v) {
            return v;
        }
        k += 1;
    }
}

pub const EXPONENT_SEARCH_CAP: u32 = 64;

/// (I : d^infinity) by adjoining u with u*d - 1 and eliminating u.
pub fn saturate(i: &IdealHandle, d: &Polynomial, budget: Budget) -> Result<SaturationResult, GroebnerError> {
    if d.is_zero() {
        return Err(GroebnerError::ZeroSaturator);
    }
    let mut vars: BTreeSet<Var> = i.ring.iter().cloned().collect();
    vars.extend(d.vars());
    let u = fresh_aux("_u", &vars);
    let mut gens = i.generators.clone();
    gens.push(Polynomial::var(u.clone()).mul(d).sub(&Polynomial::one()));
    let ring: Vec<Var> = vars.iter().cloned().chain(std::iter::once(u.clone())).collect();
    let aug = IdealHandle { generators: gens, order: i.order.clone(), ring, basis: Vec::new(), steps: 0 };
    let kill: BTreeSet<Var> = std::iter::once(u).collect();
    let sat = eliminate(&aug, &kill, budget)?;
    let base = if i.basis.is_empty() && !i.generators.is_empty() {
        buchberger_in(&i.generators, &i.ring, &i.order, budget)?
    } else {
        i.clone()
    };
    let exponent_bound = exponent_search(&base, &sat, d);
    Ok(SaturationResult { ideal: sat, exponent_bound })
}

fn exponent_search(base: &IdealHandle, sat: &IdealHandle, d: &Polynomial) -> Option<u32> {
    let mut worst = 0;
    for g in sat.basis() {
        let mut p = g.clone();
        let mut found = None;
        for n in 0..=EXPONENT_SEARCH_CAP {
            if base.is_member(&p) {
                found = Some(n);
                break;
            }
            p = p.mul(d);
        }
        worst = worst.max(found?);
    }
    Some(worst)
}

/// Decides 1 in (I : d^infinity) directly: 1 lies in I + (1 - t d).
pub fn saturation_is_unit(gens: &[Polynomial], d: &Polynomial, budget: Budget) -> Result<bool, GroebnerError> {
    if d.is_zero() {
        return Err(GroebnerError::ZeroSaturator);
    }
    let vars = ring_of(gens, &d.vars().into_iter().collect::<Vec<_>>());
    let t = fresh_aux("_t", &vars);
    let mut all = gens.to_vec();
    all.push(Polynomial::one().sub(&Polynomial::var(t).mul(d)));
    is_unit_ideal(&all, budget)
}

/// One colon step (I : d) = (I intersect (d)) / d.
pub fn colon(i: &IdealHandle, d: &Polynomial, budget: Budget) -> Result<IdealHandle, GroebnerError> {
    let mut vars: BTreeSet<Var> = i.ring.iter().cloned().collect();
    vars.extend(d.vars());
    let t = fresh_aux("_w", &vars);
    let tp = Polynomial::var(t.clone());
    let mut gens: Vec<Polynomial> = i.generators.iter().map(|g| g.mul(&tp)).collect();
    gens.push(d.mul(&Polynomial::one().sub(&tp)));
    let ring: Vec<Var> = vars.iter().cloned().chain(std::iter::once(t.clone())).collect();
    let aug = IdealHandle { generators: gens, order: i.order.clone(), ring, basis: Vec::new(), steps: 0 };
    let inter = eliminate(&aug, &std::iter::once(t).collect(), budget)?;
    let mut quot = Vec::new();
    for g in inter.basis() {
        quot.push(divide_exact(g, d)?);
    }
    let ring: Vec<Var> = vars.into_iter().collect();
    buchberger_in(&quot, &ring, &i.order, budget)
}

/// Saturation by repeated colon until the ideal stops growing.
pub fn saturate_iterated(i: &IdealHandle, d: &Polynomial, budget: Budget) -> Result<IdealHandle, GroebnerError> {
    let mut cur = if i.basis.is_empty() { buchberger_in(&i.generators, &i.ring, &i.order, budget)? } else { i.clone() };
    loop {
        let next = colon(&cur, d, budget)?;
        if cur.contains_ideal(&next) {
            return Ok(cur);
        }
        cur = next;
    }
}

/// Exact quotient h / d; errors when d does not divide h.
pub fn divide_exact(h: &Polynomial, d: &Polynomial) -> Result<Polynomial, GroebnerError> {
    if d.is_zero() {
        return Err(GroebnerError::ZeroSaturator);
    }
    let vars = ring_of(&[h.clone(), d.clone()], &[]);
    let l = Layout::new(&MonomialOrder::grevlex(), &vars);
    let dd = l.to_dense(d);
    let inv = dd[0].c.inv().expect("nonzero");
    let mut cur = l.to_dense(h);
    let mut q: DPoly = Vec::new();
    while !cur.is_empty() {
        if !divides(&dd[0].e, &cur[0].e) {
            return Err(GroebnerError::NotDivisible(d.to_string()));
        }
        let shift: Exp = cur[0].e.iter().zip(&dd[0].e).map(|(a, b)| a - b).collect();
        let c = &cur[0].c * &inv;
        q.push(Term { e: shift.clone(), c: c.clone() });
        cur = sub_mul(&l, &cur[1..], &c, &shift, &dd[1..]);
    }
    Ok(l.to_sparse(&q))
}

/// Krull dimension from the leading monomials of a basis: the largest set
/// of ring variables such that no leading monomial uses only them.
pub fn ideal_dimension(i: &IdealHandle) -> Result<usize, GroebnerError> {
    if i.is_unit() {
        return Err(GroebnerError::UnitIdeal);
    }
    let lms = i.leading_monomials();
    let n = i.ring.len();
    let masks: Vec<u64> = lms
        .iter()
        .map(|m| {
            m.vars().fold(0u64, |acc, v| acc | (1u64 << i.ring.iter().position(|w| w == v).expect("ring variable")))
        })
        .collect();
    assert!(n <= 60, "dimension search supports at most 60 variables");
    fn dfs(k: usize, n: usize, set: u64, size: usize, masks: &[u64], best: &mut usize) {
        if size + (n - k) <= *best {
            return;
        }
        if k == n {
            *best = size;
            return;
        }
        let with = set | (1u64 << k);
        if masks.iter().all(|m| m & !with != 0) {
            dfs(k + 1, n, with, size + 1, masks, best);
        }
        dfs(k + 1, n, set, size, masks, best);
    }
    let mut best = 0;
    dfs(0, n, 0, 0, &masks, &mut best);
    Ok(best)
}

/// The saturation (I + (g_j)) : (prod S_j)^infinity. Its primality is not
/// certified: it contains g and misses every element of S.
pub fn distinguished_ideal(
    i: &IdealHandle,
    g: &Polynomial,
    s: &[Polynomial],
    budget: Budget,
) -> Result<IdealHandle, GroebnerError> {
    if s.is_empty() {
        return Err(GroebnerError::EmptyS);
    }
    let prod = s.iter().fold(Polynomial::one(), |acc, p| acc.mul(p));
    let mut gens = i.generators.clone();
    gens.push(g.clone());
    let ring = ring_of(&gens, &i.ring).into_iter().collect::<Vec<_>>();
    let base = IdealHandle { generators: gens, order: i.order.clone(), ring, basis: Vec::new(), steps: 0 };
    Ok(saturate(&base, &prod, budget)?.ideal)
}
