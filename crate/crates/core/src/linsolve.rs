//! Exact sparse Gaussian elimination over [`Scalar`].
//!
//! Pivots prefer constant coefficients and then the smallest column, so the
//! particular solution (free unknowns set to zero) is deterministic.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

pub type Row<K> = BTreeMap<K, Scalar>;

/// Reduced row echelon form, one normalized row per pivot column.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Copy> {
    rows: BTreeMap<K, Row<K>>,
}

impl<K: Ord + Copy> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: BTreeMap::new(),
        }
    }
}

fn axpy<K: Ord + Copy>(row: &mut Row<K>, c: &Scalar, other: &Row<K>) {
    for (k, v) in other {
        let t = c * v;
        match row.get_mut(k) {
            Some(e) => {
                let s = &*e - &t;
                if s.is_zero() {
                    row.remove(k);
                } else {
                    *e = s;
                }
            }
            None => {
                if !t.is_zero() {
                    row.insert(*k, -t);
                }
            }
        }
    }
}

impl<K: Ord + Copy> Echelon<K> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&K, &Row<K>)> {
        self.rows.iter()
    }

    /// Eliminates every pivot column from `row`.
    pub fn reduce(&self, row: &mut Row<K>) {
        let hits: Vec<(K, Scalar)> = row
            .iter()
            .filter(|(k, _)| self.rows.contains_key(k))
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        for (k, c) in hits {
            axpy(row, &c, &self.rows[&k]);
        }
    }

    /// Adds a row; returns the new pivot column if it was independent.
    /// Columns rejected by `allowed` never become pivots.
    pub fn insert(&mut self, mut row: Row<K>, allowed: &dyn Fn(&K) -> bool) -> Option<K> {
        self.reduce(&mut row);
        let pivot = row
            .iter()
            .filter(|(k, _)| allowed(k))
            .find(|(_, v)| v.as_constant().is_some())
            .or_else(|| row.iter().find(|(k, _)| allowed(k)))
            .map(|(k, v)| (*k, v.clone()))?;
        let inv = pivot.1.recip().expect("pivot is nonzero");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        let p = pivot.0;
        for r in self.rows.values_mut() {
            if let Some(c) = r.get(&p).cloned() {
                axpy(r, &c, &row);
            }
        }
        self.rows.insert(p, row);
        Some(p)
    }
}

/// Linear equations `sum_k a_k u_k = r` in `n` unknowns.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    n: usize,
    eqs: Vec<(Row<usize>, Scalar)>,
}

/// Affine solution set: `particular + span(kernel)`, both sparse.
#[derive(Clone, Debug)]
pub struct Solved {
    pub particular: BTreeMap<usize, Scalar>,
    pub kernel: Vec<BTreeMap<usize, Scalar>>,
}

impl Solved {
    pub fn value(&self, k: usize) -> Scalar {
        self.particular.get(&k).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Debug)]
pub enum Solution {
    Solved(Solved),
    Inconsistent,
}

impl Solution {
    pub fn solved(self) -> Option<Solved> {
        match self {
            Solution::Solved(s) => Some(s),
            Solution::Inconsistent => None,
        }
    }
}

impl LinearSystem {
    pub fn new(n: usize) -> Self {
        LinearSystem { n, eqs: Vec::new() }
    }

    pub fn unknowns(&self) -> usize {
        self.n
    }

    pub fn equations(&self) -> usize {
        self.eqs.len()
    }

    pub fn add_equation(&mut self, coeffs: impl IntoIterator<Item = (usize, Scalar)>, rhs: Scalar) {
        let mut row = Row::new();
        for (k, c) in coeffs {
            assert!(k < self.n, "unknown index out of range");
            if c.is_zero() {
                continue;
            }
            let e = row.entry(k).or_insert_with(Scalar::zero);
            *e = &*e + &c;
        }
        row.retain(|_, v| !v.is_zero());
        if row.is_empty() && rhs.is_zero() {
            return;
        }
        self.eqs.push((row, rhs));
    }

    pub fn solve(&self, with_kernel: bool) -> Solution {
        let rows = self.eqs.iter().map(|(row, rhs)| {
            let mut r = row.clone();
            if !rhs.is_zero() {
                r.insert(self.n, rhs.clone());
            }
            r
        });
        let (mut parts, kernel) = solve_columns(self.n, 1, rows, with_kernel);
        match parts.pop().flatten() {
            Some(particular) => Solution::Solved(Solved { particular, kernel }),
            None => Solution::Inconsistent,
        }
    }

    /// Residual of `sum a_k u_k - r` for every equation.
    pub fn residuals(&self, u: &BTreeMap<usize, Scalar>) -> Vec<Scalar> {
        self.eqs
            .iter()
            .map(|(row, rhs)| {
                let mut s = -rhs;
                for (k, a) in row {
                    if let Some(x) = u.get(k) {
                        s = &s + &(a * x);
                    }
                }
                s
            })
            .collect()
    }
}

/// Sparse solution vector, by unknown.
pub type Assignment = BTreeMap<usize, Scalar>;

/// Solves one coefficient matrix against several right-hand sides. Row keys
/// `0..n` are unknowns and `n + r` holds the value of right-hand side `r`.
/// Returns one particular solution per right-hand side (`None` when that
/// side is inconsistent) and the shared kernel.
pub fn solve_columns(
    n: usize,
    nrhs: usize,
    rows: impl IntoIterator<Item = Row<usize>>,
    with_kernel: bool,
) -> (Vec<Option<Assignment>>, Vec<Assignment>) {
    let mut ech: Echelon<usize> = Echelon::default();
    let mut bad = vec![false; nrhs];
    for r in rows {
        let mut r = r;
        if ech.insert(r.clone(), &|k| *k < n).is_none() {
            ech.reduce(&mut r);
            for k in r.keys() {
                if *k >= n {
                    bad[*k - n] = true;
                }
            }
        }
    }
    let mut parts: Vec<Option<BTreeMap<usize, Scalar>>> = bad
        .iter()
        .map(|b| (!b).then(BTreeMap::new))
        .collect();
    for (p, row) in ech.rows() {
        for (k, v) in row.range(n..) {
            if let Some(Some(part)) = parts.get_mut(*k - n) {
                part.insert(*p, v.clone());
            }
        }
    }
    let mut kernel = Vec::new();
    if with_kernel {
        let mut by_free: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        for (p, row) in ech.rows() {
            for (k, v) in row.range(..n) {
                if *k != *p {
                    by_free.entry(*k).or_default().insert(*p, -v);
                }
            }
        }
        for f in 0..n {
            if ech.is_pivot(&f) {
                continue;
            }
            let mut v = by_free.remove(&f).unwrap_or_default();
            v.insert(f, Scalar::one());
            kernel.push(v);
        }
    }
    (parts, kernel)
}

/// Row-space basis in reduced echelon form, ordered by pivot.
pub fn row_basis<K: Ord + Copy>(rows: impl IntoIterator<Item = Row<K>>) -> Vec<(K, Row<K>)> {
    let mut ech = Echelon::default();
    for r in rows {
        ech.insert(r, &|_| true);
    }
    ech.rows.into_iter().collect()
}
