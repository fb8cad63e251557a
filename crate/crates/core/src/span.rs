//! Function-coefficient spans of forms or multivectors, kept as a reduced
//! echelon basis so membership is read off the pivot coefficients.

use crate::exterior::{contract, subsets, Form, Idx, MultiVector};
use crate::linsolve::{row_basis, LinearSystem, Row};
use crate::scalar::Scalar;

pub trait Sparse: Clone {
    fn degree(&self) -> usize;
    fn row(&self) -> Row<Idx>;
    fn from_row(deg: usize, row: Row<Idx>) -> Self;
}

macro_rules! sparse_impl {
    ($t:ident) => {
        impl Sparse for $t {
            fn degree(&self) -> usize {
                self.deg()
            }
            fn row(&self) -> Row<Idx> {
                self.terms().map(|(i, c)| (*i, c.clone())).collect()
            }
            fn from_row(deg: usize, row: Row<Idx>) -> Self {
                $t::from_terms(deg, row)
            }
        }
    };
}

sparse_impl!(Form);
sparse_impl!(MultiVector);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span<T: Sparse> {
    deg: usize,
    basis: Vec<T>,
    pivots: Vec<Idx>,
}

pub type FormSpan = Span<Form>;
pub type MvSpan = Span<MultiVector>;

impl<T: Sparse> Span<T> {
    pub fn new(deg: usize, gens: impl IntoIterator<Item = T>) -> Self {
        let rows = row_basis(gens.into_iter().map(|g| {
            debug_assert!(g.row().is_empty() || g.degree() == deg);
            g.row()
        }));
        let mut basis = Vec::with_capacity(rows.len());
        let mut pivots = Vec::with_capacity(rows.len());
        for (p, r) in rows {
            pivots.push(p);
            basis.push(T::from_row(deg, r));
        }
        Span { deg, basis, pivots }
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn basis(&self) -> &[T] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Pivot keys of the echelon basis; basis element `t` has coefficient 1
    /// at `pivots()[t]` and 0 at every other pivot.
    pub fn pivots(&self) -> &[Idx] {
        &self.pivots
    }

    /// Coordinates of `x` on the basis, `None` if `x` is outside the span.
    pub fn coefficients(&self, x: &T) -> Option<Vec<Scalar>> {
        let row = x.row();
        if row.is_empty() {
            return Some(vec![Scalar::zero(); self.basis.len()]);
        }
        if x.degree() != self.deg {
            return None;
        }
        let mut rest = row.clone();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for (b, p) in self.basis.iter().zip(&self.pivots) {
            let c = row.get(p).cloned().unwrap_or_default();
            if !c.is_zero() {
                for (k, v) in b.row() {
                    let t = &c * &v;
                    let e = rest.remove(&k).unwrap_or_default();
                    let s = &e - &t;
                    if !s.is_zero() {
                        rest.insert(k, s);
                    }
                }
            }
            coeffs.push(c);
        }
        rest.is_empty().then_some(coeffs)
    }

    pub fn contains(&self, x: &T) -> bool {
        self.coefficients(x).is_some()
    }

    pub fn contains_span(&self, o: &Span<T>) -> bool {
        o.basis.iter().all(|b| self.contains(b))
    }

    pub fn same_as(&self, o: &Span<T>) -> bool {
        self.deg == o.deg && self.rank() == o.rank() && self.contains_span(o)
    }
}

/// Degree-`p` multivectors killed by every form of the span.
pub fn annihilator(s: &FormSpan, m: usize, p: usize) -> MvSpan {
    let cols = subsets(m, p);
    let mut sys = LinearSystem::new(cols.len());
    for g in s.basis() {
        // i_{d_J} g, collected per result component
        let mut eqs: std::collections::BTreeMap<Idx, Vec<(usize, Scalar)>> = Default::default();
        for (k, j) in cols.iter().enumerate() {
            if let Ok(f) = contract(&MultiVector::basis(*j), g) {
                for (i, c) in f.terms() {
                    eqs.entry(*i).or_default().push((k, c.clone()));
                }
            }
        }
        for (_, e) in eqs {
            sys.add_equation(e, Scalar::zero());
        }
    }
    let sol = sys.solve(true).solved().expect("homogeneous system");
    Span::new(
        p,
        sol.kernel
            .into_iter()
            .map(|v| MultiVector::from_terms(p, v.into_iter().map(|(k, c)| (cols[k], c)))),
    )
}
