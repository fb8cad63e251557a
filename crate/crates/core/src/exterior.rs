//! Sparse forms, multivectors and multivector-valued forms on a coordinate
//! chart of dimension at most 64. A multi-index is a bitmask of coordinate
//! positions; basis elements are taken in ascending order.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Idx = u64;

pub const MAX_DIM: usize = 64;

pub fn bit(i: usize) -> Idx {
    1u64 << i
}

pub fn positions(i: Idx) -> impl Iterator<Item = usize> {
    let mut rest = i;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let p = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(p)
    })
}

pub fn mask_of(ix: &[usize]) -> Idx {
    ix.iter().fold(0, |m, &i| m | bit(i))
}

fn below(i: Idx, k: usize) -> u32 {
    (i & (bit(k) - 1)).count_ones()
}

/// Sign of `dx^a ^ dx^b = s dx^(a|b)`, `None` on overlap.
pub fn wedge_sign(a: Idx, b: Idx) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    for k in positions(b) {
        swaps += (a >> k).count_ones();
    }
    Some(swaps % 2 == 1)
}

/// `i_{d_J} dx^I = s dx^(I\J)` with `i_{u^v} = i_v . i_u`.
pub fn contract_sign(j: Idx, i: Idx) -> Option<(Idx, bool)> {
    if j & !i != 0 {
        return None;
    }
    let mut e = 0u32;
    for (t, k) in positions(j).enumerate() {
        e += below(i, k) - t as u32;
    }
    Some((i & !j, e % 2 == 1))
}

/// All `k`-element subsets of `{0..m}` in increasing numeric order.
pub fn subsets(m: usize, k: usize) -> Vec<Idx> {
    if k > m {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    if k == 64 {
        return vec![u64::MAX];
    }
    let mut out = Vec::new();
    let mut s: Idx = (1u64 << k) - 1;
    let lim = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    loop {
        out.push(s);
        let c = s & s.wrapping_neg();
        let r = s.wrapping_add(c);
        if r == 0 {
            break;
        }
        s = (((r ^ s) >> 2) / c) | r;
        if s > lim || s & !lim != 0 {
            break;
        }
    }
    out
}

/// Subsets of a given mask with `k` elements.
pub fn subsets_of(mask: Idx, k: usize) -> Vec<Idx> {
    let pos: Vec<usize> = positions(mask).collect();
    subsets(pos.len(), k)
        .into_iter()
        .map(|s| positions(s).fold(0, |m, p| m | bit(pos[p])))
        .collect()
}

/// Sparse linear combination with scalar coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comb<K: Ord>(BTreeMap<K, Scalar>);

impl<K: Ord> Default for Comb<K> {
    fn default() -> Self {
        Comb(BTreeMap::new())
    }
}

impl<K: Ord + Copy> Comb<K> {
    pub fn add_term(&mut self, k: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.0.iter()
    }

    pub fn get(&self, k: &K) -> Scalar {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.0.keys()
    }

    fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Comb::default();
        }
        Comb(self.0.iter().map(|(k, v)| (*k, v * c)).collect())
    }

    fn plus(&self, o: &Self, sign: bool) -> Self {
        let mut r = self.clone();
        for (k, v) in &o.0 {
            r.add_term(*k, if sign { -v } else { v.clone() });
        }
        r
    }

    fn map(&self, f: &dyn Fn(&Scalar) -> Scalar) -> Self {
        let mut r = Comb::default();
        for (k, v) in &self.0 {
            r.add_term(*k, f(v));
        }
        r
    }
}

/// Differential form of fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    deg: usize,
    terms: Comb<Idx>,
}

/// Multivector field of fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiVector {
    deg: usize,
    terms: Comb<Idx>,
}

/// Element of `Omega^a (x) V_p`, keyed by (form index, vector index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvForm {
    fdeg: usize,
    vdeg: usize,
    terms: Comb<(Idx, Idx)>,
}

macro_rules! graded_common {
    ($t:ident) => {
        impl $t {
            pub fn zero(deg: usize) -> Self {
                $t {
                    deg,
                    terms: Comb::default(),
                }
            }

            pub fn scalar(s: Scalar) -> Self {
                let mut terms = Comb::default();
                terms.add_term(0, s);
                $t { deg: 0, terms }
            }

            pub fn basis(i: Idx) -> Self {
                Self::term(i, Scalar::one())
            }

            pub fn term(i: Idx, c: Scalar) -> Self {
                let mut terms = Comb::default();
                terms.add_term(i, c);
                $t {
                    deg: i.count_ones() as usize,
                    terms,
                }
            }

            pub fn from_terms(deg: usize, it: impl IntoIterator<Item = (Idx, Scalar)>) -> Self {
                let mut terms = Comb::default();
                for (i, c) in it {
                    debug_assert_eq!(i.count_ones() as usize, deg);
                    terms.add_term(i, c);
                }
                $t { deg, terms }
            }

            pub fn deg(&self) -> usize {
                self.deg
            }

            pub fn terms(&self) -> impl Iterator<Item = (&Idx, &Scalar)> {
                self.terms.iter()
            }

            pub fn coeff(&self, i: Idx) -> Scalar {
                self.terms.get(&i)
            }

            pub fn num_terms(&self) -> usize {
                self.terms.len()
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn support(&self) -> Idx {
                self.terms.keys().fold(0, |m, i| m | i)
            }

            pub fn scale(&self, c: &Scalar) -> Self {
                $t {
                    deg: self.deg,
                    terms: self.terms.scaled(c),
                }
            }

            pub fn map_coeffs(&self, f: &dyn Fn(&Scalar) -> Scalar) -> Self {
                $t {
                    deg: self.deg,
                    terms: self.terms.map(f),
                }
            }

            pub fn try_add(&self, o: &Self) -> Result<Self> {
                if self.deg != o.deg && !self.is_zero() && !o.is_zero() {
                    return Err(Error::Degree(format!(
                        "cannot add degree {} and degree {}",
                        self.deg, o.deg
                    )));
                }
                let deg = if self.is_zero() { o.deg } else { self.deg };
                Ok($t {
                    deg,
                    terms: self.terms.plus(&o.terms, false),
                })
            }

            pub fn add_term(&mut self, i: Idx, c: Scalar) {
                debug_assert_eq!(i.count_ones() as usize, self.deg);
                self.terms.add_term(i, c);
            }

            /// Wedge product of basis elements, summed.
            pub fn wedge(&self, o: &Self) -> Self {
                let mut terms = Comb::default();
                for (a, ca) in self.terms.iter() {
                    for (b, cb) in o.terms.iter() {
                        if let Some(neg) = wedge_sign(*a, *b) {
                            let c = ca * cb;
                            terms.add_term(a | b, if neg { -c } else { c });
                        }
                    }
                }
                $t {
                    deg: self.deg + o.deg,
                    terms,
                }
            }
        }

        impl Add<&$t> for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                self.try_add(o).expect("degree mismatch in sum")
            }
        }

        impl Sub<&$t> for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                self.try_add(&-o).expect("degree mismatch in difference")
            }
        }

        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }

        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                self.scale(&Scalar::from_i64(-1))
            }
        }

        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

graded_common!(Form);
graded_common!(MultiVector);

impl Form {
    /// `i_{d_k}` on a single coordinate vector.
    pub fn contract_coord(&self, k: usize) -> Form {
        if self.deg == 0 {
            return Form::zero(0);
        }
        let mut terms = Comb::default();
        for (i, c) in self.terms.iter() {
            if let Some((r, neg)) = contract_sign(bit(k), *i) {
                terms.add_term(r, if neg { -c } else { c.clone() });
            }
        }
        Form {
            deg: self.deg - 1,
            terms,
        }
    }

    pub fn to_scalar(&self) -> Option<Scalar> {
        (self.deg == 0).then(|| self.coeff(0))
    }

    pub fn tensor(&self, u: &MultiVector) -> MvForm {
        let mut terms = Comb::default();
        for (i, a) in self.terms.iter() {
            for (j, b) in u.terms.iter() {
                terms.add_term((*i, *j), a * b);
            }
        }
        MvForm {
            fdeg: self.deg,
            vdeg: u.deg,
            terms,
        }
    }
}

impl MultiVector {
    pub fn to_scalar(&self) -> Option<Scalar> {
        (self.deg == 0).then(|| self.coeff(0))
    }

    /// Dual contraction `i_eps U` of a form into a multivector.
    pub fn contract_form(&self, eps: &Form) -> Result<MultiVector> {
        if eps.deg() > self.deg {
            return Err(Error::Degree(format!(
                "cannot contract a {}-form into a {}-vector",
                eps.deg(),
                self.deg
            )));
        }
        let mut terms = Comb::default();
        for (j, a) in eps.terms() {
            for (i, b) in self.terms.iter() {
                if let Some((r, neg)) = contract_sign(*j, *i) {
                    let c = a * b;
                    terms.add_term(r, if neg { -c } else { c });
                }
            }
        }
        Ok(MultiVector {
            deg: self.deg - eps.deg(),
            terms,
        })
    }
}

/// `i_U alpha`, defined for `deg U <= deg alpha`.
pub fn contract(u: &MultiVector, alpha: &Form) -> Result<Form> {
    if u.deg() > alpha.deg() {
        return Err(Error::Degree(format!(
            "cannot contract a {}-vector into a {}-form",
            u.deg(),
            alpha.deg()
        )));
    }
    let mut terms = Comb::default();
    for (j, a) in u.terms() {
        for (i, b) in alpha.terms() {
            if let Some((r, neg)) = contract_sign(*j, *i) {
                let c = a * b;
                terms.add_term(r, if neg { -c } else { c });
            }
        }
    }
    Ok(Form {
        deg: alpha.deg() - u.deg(),
        terms,
    })
}

/// Contraction that returns zero when the vector degree exceeds the form
/// degree.
pub fn contract_or_zero(u: &MultiVector, alpha: &Form) -> Form {
    contract(u, alpha).unwrap_or_else(|_| Form::zero(0))
}

impl MvForm {
    pub fn zero(fdeg: usize, vdeg: usize) -> Self {
        MvForm {
            fdeg,
            vdeg,
            terms: Comb::default(),
        }
    }

    pub fn fdeg(&self) -> usize {
        self.fdeg
    }

    pub fn vdeg(&self) -> usize {
        self.vdeg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Idx, Idx), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: Idx, j: Idx) -> Scalar {
        self.terms.get(&(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn from_terms(
        fdeg: usize,
        vdeg: usize,
        it: impl IntoIterator<Item = ((Idx, Idx), Scalar)>,
    ) -> Self {
        let mut terms = Comb::default();
        for (k, c) in it {
            terms.add_term(k, c);
        }
        MvForm { fdeg, vdeg, terms }
    }

    pub fn add_term(&mut self, i: Idx, j: Idx, c: Scalar) {
        self.terms.add_term((i, j), c);
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        MvForm {
            fdeg: self.fdeg,
            vdeg: self.vdeg,
            terms: self.terms.scaled(c),
        }
    }

    pub fn map_coeffs(&self, f: &dyn Fn(&Scalar) -> Scalar) -> Self {
        MvForm {
            fdeg: self.fdeg,
            vdeg: self.vdeg,
            terms: self.terms.map(f),
        }
    }

    pub fn try_add(&self, o: &MvForm) -> Result<MvForm> {
        let bidegree_differs = (self.fdeg, self.vdeg) != (o.fdeg, o.vdeg);
        if bidegree_differs && !self.is_zero() && !o.is_zero() {
            return Err(Error::Degree(format!(
                "cannot add bidegree ({},{}) and ({},{})",
                self.fdeg, self.vdeg, o.fdeg, o.vdeg
            )));
        }
        let (fdeg, vdeg) = if self.is_zero() {
            (o.fdeg, o.vdeg)
        } else {
            (self.fdeg, self.vdeg)
        };
        Ok(MvForm {
            fdeg,
            vdeg,
            terms: self.terms.plus(&o.terms, false),
        })
    }

    /// `sum_I dx^I (x) d_I` over all `a`-subsets of `m` coordinates.
    pub fn identity(m: usize, a: usize) -> MvForm {
        let mut terms = Comb::default();
        for i in subsets(m, a) {
            terms.add_term((i, i), Scalar::one());
        }
        MvForm {
            fdeg: a,
            vdeg: a,
            terms,
        }
    }

    /// `i_{theta (x) U} gamma = theta ^ i_U gamma`.
    pub fn contract_into(&self, gamma: &Form) -> Result<Form> {
        if self.vdeg > gamma.deg() {
            return Err(Error::Degree(format!(
                "cannot contract a ({},{}) tensor into a {}-form",
                self.fdeg,
                self.vdeg,
                gamma.deg()
            )));
        }
        let mut terms = Comb::default();
        for ((i, j), c) in self.terms.iter() {
            for (g, cg) in gamma.terms() {
                let Some((r, neg1)) = contract_sign(*j, *g) else {
                    continue;
                };
                let Some(neg2) = wedge_sign(*i, r) else {
                    continue;
                };
                let v = c * cg;
                terms.add_term(i | r, if neg1 ^ neg2 { -v } else { v });
            }
        }
        Ok(Form {
            deg: gamma.deg() + self.fdeg - self.vdeg,
            terms,
        })
    }

    /// `(theta (x) V) ^ U = theta (x) (V ^ U)`.
    pub fn wedge_mv(&self, u: &MultiVector) -> MvForm {
        let mut terms = Comb::default();
        for ((i, j), c) in self.terms.iter() {
            for (k, cu) in u.terms() {
                if let Some(neg) = wedge_sign(*j, *k) {
                    let v = c * cu;
                    terms.add_term((*i, j | k), if neg { -v } else { v });
                }
            }
        }
        MvForm {
            fdeg: self.fdeg,
            vdeg: self.vdeg + u.deg(),
            terms,
        }
    }

    /// `(theta (x) U) ^ (eta (x) V) = (theta ^ eta) (x) (U ^ V)`.
    pub fn wedge(&self, o: &MvForm) -> MvForm {
        let mut terms = Comb::default();
        for ((i1, j1), c1) in self.terms.iter() {
            for ((i2, j2), c2) in o.terms.iter() {
                let (Some(n1), Some(n2)) = (wedge_sign(*i1, *i2), wedge_sign(*j1, *j2)) else {
                    continue;
                };
                let v = c1 * c2;
                terms.add_term((i1 | i2, j1 | j2), if n1 ^ n2 { -v } else { v });
            }
        }
        MvForm {
            fdeg: self.fdeg + o.fdeg,
            vdeg: self.vdeg + o.vdeg,
            terms,
        }
    }

    /// `i_{d_k}` applied to the form slot.
    pub fn contract_form_slot(&self, k: usize) -> MvForm {
        let mut terms = Comb::default();
        for ((i, j), c) in self.terms.iter() {
            if let Some((r, neg)) = contract_sign(bit(k), *i) {
                terms.add_term((r, *j), if neg { -c } else { c.clone() });
            }
        }
        MvForm {
            fdeg: self.fdeg.saturating_sub(1),
            vdeg: self.vdeg,
            terms,
        }
    }

    /// Vector part attached to the form basis element `dx^I`.
    pub fn vector_at(&self, i: Idx) -> MultiVector {
        MultiVector::from_terms(
            self.vdeg,
            self.terms
                .iter()
                .filter(|((a, _), _)| *a == i)
                .map(|((_, b), c)| (*b, c.clone())),
        )
    }

    /// Form part attached to the vector basis element `d_J`.
    pub fn form_at(&self, j: Idx) -> Form {
        Form::from_terms(
            self.fdeg,
            self.terms
                .iter()
                .filter(|((_, b), _)| *b == j)
                .map(|((a, _), c)| (*a, c.clone())),
        )
    }

    pub fn form_keys(&self) -> Vec<Idx> {
        let mut v: Vec<Idx> = self.terms.keys().map(|(i, _)| *i).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn vector_keys(&self) -> Vec<Idx> {
        let mut v: Vec<Idx> = self.terms.keys().map(|(_, j)| *j).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl Add<&MvForm> for &MvForm {
    type Output = MvForm;
    fn add(self, o: &MvForm) -> MvForm {
        self.try_add(o).expect("bidegree mismatch in sum")
    }
}

impl Sub<&MvForm> for &MvForm {
    type Output = MvForm;
    fn sub(self, o: &MvForm) -> MvForm {
        self.try_add(&o.scale(&Scalar::from_i64(-1)))
            .expect("bidegree mismatch in difference")
    }
}

impl Neg for &MvForm {
    type Output = MvForm;
    fn neg(self) -> MvForm {
        self.scale(&Scalar::from_i64(-1))
    }
}

/// Generalized Kronecker delta on ordered multi-indices.
pub fn kron_delta(upper: &[usize], lower: &[usize]) -> i64 {
    if upper.len() != lower.len() {
        return 0;
    }
    let mut u = upper.to_vec();
    let mut l = lower.to_vec();
    let su = match sort_sign(&mut u) {
        Some(s) => s,
        None => return 0,
    };
    let sl = match sort_sign(&mut l) {
        Some(s) => s,
        None => return 0,
    };
    if u != l {
        return 0;
    }
    su * sl
}

/// Sorts in place and returns the permutation sign, `None` on repeats.
pub fn sort_sign(v: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}
