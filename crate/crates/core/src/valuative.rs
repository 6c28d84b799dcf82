//! The valuative stage: comparing divisor orders of test functions, and the
//! Lipman-cone vector of an intersection matrix.
//!
//! A function f with ord_{E_a} f < ord_{E_b} f shows that the arc family of
//! E_a is not inside the closure of the family of E_b. Pairs with no such
//! witness are left for the wedge stage.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jets::DivisorRecord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuativeError {
    #[error("divisor {divisor} has no order for test function {function}")]
    MissingOrder { divisor: String, function: String },
    #[error("duplicate divisor {0}")]
    DuplicateDivisor(String),
    #[error("unknown divisor {0}")]
    UnknownDivisor(String),
    #[error("intersection matrix is not square")]
    NotSquare,
    #[error("intersection matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("intersection matrix is not negative definite (leading minor {0} has the wrong sign)")]
    NotNegativeDefinite(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderTable {
    pub functions: Vec<String>,
    pub divisors: Vec<DivisorRecord>,
}

/// An ordered pair (source, target) standing for the claim that the family
/// of `source` is not contained in the closure of the family of `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TaskStatus {
    ProvedValuative { witness: String, source_order: u32, target_order: u32 },
    RequiresWedge,
    ProvedWedge { certificate: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonInclusionTask {
    pub source: String,
    pub target: String,
    #[serde(flatten)]
    pub status: TaskStatus,
}

impl OrderTable {
    pub fn new(functions: Vec<String>, divisors: Vec<DivisorRecord>) -> Result<Self, ValuativeError> {
        for (n, d) in divisors.iter().enumerate() {
            if divisors[..n].iter().any(|e| e.name == d.name) {
                return Err(ValuativeError::DuplicateDivisor(d.name.clone()));
            }
            for f in &functions {
                if !d.test_orders.contains_key(f) {
                    return Err(ValuativeError::MissingOrder { divisor: d.name.clone(), function: f.clone() });
                }
            }
        }
        Ok(OrderTable { functions, divisors })
    }

    pub fn index(&self, name: &str) -> Result<usize, ValuativeError> {
        self.divisors
            .iter()
            .position(|d| d.name == name)
            .ok_or_else(|| ValuativeError::UnknownDivisor(name.to_string()))
    }

    pub fn order(&self, d: usize, f: &str) -> u32 {
        self.divisors[d].test_orders[f]
    }

    pub fn name(&self, d: usize) -> &str {
        &self.divisors[d].name
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn all_pairs(&self) -> Vec<Pair> {
        let n = self.len();
        (0..n).flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| Pair { source: s, target: t })).collect()
    }
}

/// First test function (in declared order) with ord_i f < ord_j f; it
/// proves that the family of E_i is not inside the closure of that of E_j.
pub fn valuative_check(t: &OrderTable, i: usize, j: usize) -> Option<String> {
    t.functions.iter().find(|f| t.order(i, f) < t.order(j, f)).cloned()
}

pub fn classify(t: &OrderTable, p: Pair) -> NonInclusionTask {
    let status = match valuative_check(t, p.source, p.target) {
        Some(f) => TaskStatus::ProvedValuative {
            source_order: t.order(p.source, &f),
            target_order: t.order(p.target, &f),
            witness: f,
        },
        None => TaskStatus::RequiresWedge,
    };
    NonInclusionTask { source: t.name(p.source).to_string(), target: t.name(p.target).to_string(), status }
}

/// A permutation of the divisors together with the matching permutation
/// of the test functions, both given as swaps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Symmetry {
    map: Vec<usize>,
    functions: BTreeMap<String, String>,
}

impl Symmetry {
    pub fn identity(n: usize) -> Self {
        Symmetry { map: (0..n).collect(), functions: BTreeMap::new() }
    }

    pub fn from_swaps(
        t: &OrderTable,
        divisor_swaps: &[(String, String)],
        function_swaps: &[(String, String)],
    ) -> Result<Self, ValuativeError> {
        let mut s = Symmetry::identity(t.len());
        for (a, b) in divisor_swaps {
            let (x, y) = (t.index(a)?, t.index(b)?);
            s.map.swap(x, y);
        }
        for (f, g) in function_swaps {
            for h in [f, g] {
                if !t.functions.contains(h) {
                    return Err(ValuativeError::MissingOrder { divisor: "(symmetry)".into(), function: h.clone() });
                }
            }
            s.functions.insert(f.clone(), g.clone());
            s.functions.insert(g.clone(), f.clone());
        }
        Ok(s)
    }

    pub fn apply(&self, p: Pair) -> Pair {
        Pair { source: self.map[p.source], target: self.map[p.target] }
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn apply_function<'a>(&'a self, f: &'a str) -> &'a str {
        self.functions.get(f).map(|s| s.as_str()).unwrap_or(f)
    }

    /// ord of the image function on the image divisor equals ord of f on E.
    pub fn preserves(&self, t: &OrderTable) -> bool {
        (0..t.len()).all(|i| t.functions.iter().all(|f| t.order(i, f) == t.order(self.map[i], self.apply_function(f))))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residuals {
    pub full: Vec<Pair>,
    /// One pair per symmetry orbit: the least by (target, source).
    pub reduced: Vec<Pair>,
}

pub fn residual_pairs(t: &OrderTable, sym: &Symmetry) -> Residuals {
    let full: Vec<Pair> = t.all_pairs().into_iter().filter(|p| valuative_check(t, p.source, p.target).is_none()).collect();
    let key = |p: &Pair| (p.target, p.source);
    let mut reduced: Vec<Pair> = Vec::new();
    for p in &full {
        // walk the orbit of p under the symmetry
        let mut orbit = vec![*p];
        let mut q = sym.apply(*p);
        while q != *p {
            orbit.push(q);
            q = sym.apply(q);
        }
        let rep = *orbit.iter().min_by_key(|q| key(q)).unwrap();
        if !reduced.contains(&rep) {
            reduced.push(rep);
        }
    }
    reduced.sort_by_key(key);
    Residuals { full, reduced }
}

/// Strict relations E_i < E_j: ord_i f <= ord_j f for all f, with at least
/// one strict.
pub fn partial_order(t: &OrderTable) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if t.functions.is_empty() {
        return out;
    }
    for p in t.all_pairs() {
        let (i, j) = (p.source, p.target);
        let le = t.functions.iter().all(|f| t.order(i, f) <= t.order(j, f));
        let lt = t.functions.iter().any(|f| t.order(i, f) < t.order(j, f));
        if le && lt {
            out.push((i, j));
        }
    }
    debug_assert!(out.iter().all(|&(i, j)| !out.contains(&(j, i))));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl IntersectionMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, ValuativeError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ValuativeError::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(ValuativeError::NotSymmetric(i, j));
                }
            }
        }
        Ok(IntersectionMatrix { rows })
    }

    /// Self-intersection on the diagonal, 1 for each edge of the graph.
    pub fn from_graph(n: usize, self_int: &[i64], edges: &[(usize, usize)]) -> Result<Self, ValuativeError> {
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = self_int[i];
        }
        for &(a, b) in edges {
            rows[a][b] += 1;
            rows[b][a] += 1;
        }
        IntersectionMatrix::new(rows)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, m: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().zip(m).map(|(a, b)| a * b).sum()).collect()
    }

    /// Leading principal minors, exactly (fraction-free elimination).
    pub fn leading_minors(&self) -> Vec<BigInt> {
        (1..=self.size()).map(|k| bareiss_det(&self.rows[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>())).collect()
    }

    /// Negative definite iff the k-th leading minor has sign (-1)^k.
    pub fn check_negative_definite(&self) -> Result<(), ValuativeError> {
        for (k, d) in self.leading_minors().iter().enumerate() {
            let want_negative = k % 2 == 0;
            if d.is_zero() || d.is_negative() != want_negative {
                return Err(ValuativeError::NotNegativeDefinite(k + 1));
            }
        }
        Ok(())
    }

    pub fn permuted(&self, perm: &[usize]) -> IntersectionMatrix {
        let rows = perm.iter().map(|&i| perm.iter().map(|&j| self.rows[i][j]).collect()).collect();
        IntersectionMatrix { rows }
    }
}

fn bareiss_det(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else { return BigInt::zero() };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    m[n - 1][n - 1].clone() * sign
}

/// Least positive integer vector m with M m <= 0: start from all ones and
/// raise any coordinate whose entry of M m is positive.
pub fn lipman_vector(mat: &IntersectionMatrix) -> Result<Vec<i64>, ValuativeError> {
    mat.check_negative_definite()?;
    let mut m = vec![1i64; mat.size()];
    loop {
        let v = mat.apply(&m);
        match v.iter().position(|&x| x > 0) {
            Some(q) => m[q] += 1,
            None => return Ok(m),
        }
    }
}

/// Names of the test functions with their orders, one map per divisor.
pub fn order_rows(t: &OrderTable) -> BTreeMap<String, Vec<u32>> {
    t.divisors
        .iter()
        .map(|d| (d.name.clone(), t.functions.iter().map(|f| d.test_orders[f]).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: &[(&str, [u32; 2])]) -> OrderTable {
        let fs = vec!["x".to_string(), "y".to_string()];
        let ds = rows
            .iter()
            .map(|(n, o)| {
                let mut d = DivisorRecord::new(n, [1, 1, 1]);
                d.test_orders = fs.iter().cloned().zip(o.iter().copied()).collect();
                d
            })
            .collect();
        OrderTable::new(fs, ds).unwrap()
    }

    #[test]
    fn identical_rows_are_all_residual() {
        let t = table(&[("A", [1, 2]), ("B", [1, 2]), ("C", [1, 2])]);
        let r = residual_pairs(&t, &Symmetry::identity(3));
        assert_eq!(r.full.len(), 6);
        assert!(partial_order(&t).is_empty());
        let one = table(&[("A", [1, 2])]);
        assert!(residual_pairs(&one, &Symmetry::identity(1)).full.is_empty());
    }

    #[test]
    fn witness_is_first_declared() {
        let t = table(&[("A", [1, 1]), ("B", [2, 2])]);
        assert_eq!(valuative_check(&t, 0, 1).as_deref(), Some("x"));
        assert_eq!(valuative_check(&t, 1, 0), None);
        assert_eq!(partial_order(&t), vec![(0, 1)]);
    }

    #[test]
    fn missing_order_is_rejected() {
        let mut d = DivisorRecord::new("A", [1, 1, 1]);
        d.test_orders.insert("x".into(), 1);
        let e = OrderTable::new(vec!["x".into(), "y".into()], vec![d]).unwrap_err();
        assert!(matches!(e, ValuativeError::MissingOrder { .. }));
    }

    #[test]
    fn small_lipman_vectors() {
        let m = IntersectionMatrix::new(vec![vec![-1]]).unwrap();
        assert_eq!(lipman_vector(&m).unwrap(), vec![1]);
        let m = IntersectionMatrix::new(vec![vec![-2, 0], vec![0, -2]]).unwrap();
        assert_eq!(lipman_vector(&m).unwrap(), vec![1, 1]);
        let bad = IntersectionMatrix::new(vec![vec![-1, 2], vec![2, -1]]).unwrap();
        assert!(lipman_vector(&bad).is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(bareiss_det(&[vec![2, 1], vec![1, 2]]), BigInt::from(3));
        assert_eq!(bareiss_det(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        // E6 Cartan-type matrix has determinant 3 up to sign
        let m = IntersectionMatrix::from_graph(6, &[-2; 6], &[(1, 3), (3, 5), (5, 4), (4, 2), (0, 5)]).unwrap();
        assert_eq!(m.leading_minors()[5], BigInt::from(3));
    }
}
