//! Coordinate charts and the chart-dependent calculus: exterior derivative,
//! Lie derivatives along multivectors, the Schouten bracket and a radial
//! Poincare primitive.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{
    bit, contract, contract_or_zero, positions, Form, Idx, MultiVector, MvForm, MAX_DIM,
};
use crate::scalar::{Scalar, Var, Q};

/// Ordered coordinates; the first `n` are base coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    names: Vec<Arc<str>>,
    n_base: usize,
    index: HashMap<Arc<str>, usize>,
}

fn valid_name(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic())
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
        && s != "d"
        && s != "dX"
}

impl Chart {
    pub fn new<S: AsRef<str>>(base: &[S], fiber: &[S]) -> Result<Chart> {
        let names: Vec<Arc<str>> = base
            .iter()
            .chain(fiber.iter())
            .map(|s| Arc::from(s.as_ref()))
            .collect();
        if names.len() > MAX_DIM {
            return Err(Error::Chart(format!(
                "{} coordinates exceed the supported {MAX_DIM}",
                names.len()
            )));
        }
        if base.is_empty() {
            return Err(Error::Chart("chart needs at least one base coordinate".into()));
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::Chart(format!("invalid coordinate name `{n}`")));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Chart(format!("duplicate coordinate `{n}`")));
            }
        }
        Ok(Chart {
            names,
            n_base: base.len(),
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Base dimension, the order of the structures living on this chart.
    pub fn n(&self) -> usize {
        self.n_base
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|s| &**s)
    }

    pub fn base_names(&self) -> Vec<&str> {
        self.names[..self.n_base].iter().map(|s| &**s).collect()
    }

    pub fn fiber_names(&self) -> Vec<&str> {
        self.names[self.n_base..].iter().map(|s| &**s).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn idx(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::Chart(format!("unknown coordinate `{name}`")))
    }

    pub fn is_base(&self, i: usize) -> bool {
        i < self.n_base
    }

    pub fn base_mask(&self) -> Idx {
        (1u64 << self.n_base) - 1
    }

    pub fn fiber_mask(&self) -> Idx {
        self.full_mask() & !self.base_mask()
    }

    pub fn full_mask(&self) -> Idx {
        if self.dim() == 64 {
            u64::MAX
        } else {
            (1u64 << self.dim()) - 1
        }
    }

    pub fn coord(&self, name: &str) -> Result<Scalar> {
        self.idx(name)?;
        Ok(Scalar::coord(name))
    }

    pub fn x(&self, i: usize) -> Scalar {
        Scalar::coord(&self.names[i])
    }

    pub fn dx(&self, name: &str) -> Result<Form> {
        Ok(Form::basis(bit(self.idx(name)?)))
    }

    pub fn partial(&self, name: &str) -> Result<MultiVector> {
        Ok(MultiVector::basis(bit(self.idx(name)?)))
    }

    /// Generic function of every coordinate.
    pub fn function(&self, name: &str) -> Scalar {
        let args: Vec<&str> = self.names().collect();
        Scalar::func(name, &args)
    }

    /// `d^n x`.
    pub fn volume(&self) -> Form {
        Form::basis(self.base_mask())
    }

    /// `i_{d_mu1 ^ ... ^ d_muk} d^n x` with 1-based base indices.
    pub fn dxv(&self, mus: &[usize]) -> Result<Form> {
        let mut u = MultiVector::scalar(Scalar::one());
        for &mu in mus {
            if mu == 0 || mu > self.n_base {
                return Err(Error::Chart(format!(
                    "base index {mu} outside 1..={}",
                    self.n_base
                )));
            }
            u = u.wedge(&MultiVector::basis(bit(mu - 1)));
        }
        if u.is_zero() {
            return Ok(Form::zero(self.n_base - mus.len()));
        }
        contract(&u, &self.volume())
    }

    pub fn check_form(&self, a: &Form) -> Result<()> {
        if a.support() & !self.full_mask() != 0 {
            return Err(Error::Chart("form uses coordinates outside the chart".into()));
        }
        Ok(())
    }

    pub fn d(&self, a: &Form) -> Form {
        let mut out = Form::zero(a.deg() + 1);
        for (i, c) in a.terms() {
            for k in 0..self.dim() {
                if i & bit(k) != 0 {
                    continue;
                }
                let dc = c.diff(&self.names[k]);
                if dc.is_zero() {
                    continue;
                }
                out = &out + &Form::term(bit(k), dc).wedge(&Form::basis(*i));
            }
        }
        out
    }

    pub fn d_scalar(&self, f: &Scalar) -> Form {
        self.d(&Form::scalar(f.clone()))
    }

    /// `X(f)` for a vector field `X`.
    pub fn apply(&self, x: &MultiVector, f: &Scalar) -> Scalar {
        let mut s = Scalar::zero();
        for (i, c) in x.terms() {
            let k = i.trailing_zeros() as usize;
            s = &s + &(c * &f.diff(&self.names[k]));
        }
        s
    }

    /// Jacobian commutator of vector fields.
    pub fn vf_bracket(&self, x: &MultiVector, y: &MultiVector) -> MultiVector {
        let mut out = MultiVector::zero(1);
        for (j, cy) in y.terms() {
            let v = self.apply(x, cy);
            if !v.is_zero() {
                out.add_term(*j, v);
            }
        }
        for (j, cx) in x.terms() {
            let v = self.apply(y, cx);
            if !v.is_zero() {
                out.add_term(*j, -v);
            }
        }
        out
    }

    /// `L_U alpha = d i_U alpha - (-1)^p i_U d alpha`.
    pub fn lie(&self, u: &MultiVector, a: &Form) -> Result<Form> {
        let p = u.deg();
        if p > a.deg() + 1 {
            return Err(Error::Degree(format!(
                "Lie derivative along a {p}-vector of a {}-form",
                a.deg()
            )));
        }
        let second = contract(u, &self.d(a))?;
        let second = if p.is_multiple_of(2) { -second } else { second };
        if p == a.deg() + 1 {
            return Ok(second);
        }
        Ok(&self.d(&contract(u, a)?) + &second)
    }

    fn split(&self, u: &MultiVector) -> Vec<Vec<MultiVector>> {
        u.terms()
            .map(|(i, c)| {
                positions(*i)
                    .enumerate()
                    .map(|(t, k)| {
                        MultiVector::term(bit(k), if t == 0 { c.clone() } else { Scalar::one() })
                    })
                    .collect()
            })
            .collect()
    }

    /// Schouten bracket, expanded over decomposable terms:
    /// `[X1^..^Xp, Y1^..^Yq] = sum (-1)^(i+j) [Xi,Yj] ^ X.. ^ Y..` with hats.
    pub fn schouten(&self, u: &MultiVector, v: &MultiVector) -> Result<MultiVector> {
        let (p, q) = (u.deg(), v.deg());
        if p == 0 || q == 0 {
            return Err(Error::Degree("Schouten bracket needs degrees >= 1".into()));
        }
        let mut out = MultiVector::zero(p + q - 1);
        for xs in self.split(u) {
            for ys in self.split(v) {
                for (a, xa) in xs.iter().enumerate() {
                    for (b, yb) in ys.iter().enumerate() {
                        let br = self.vf_bracket(xa, yb);
                        if br.is_zero() {
                            continue;
                        }
                        let mut t = br;
                        for (k, x) in xs.iter().enumerate() {
                            if k != a {
                                t = t.wedge(x);
                            }
                        }
                        for (k, y) in ys.iter().enumerate() {
                            if k != b {
                                t = t.wedge(y);
                            }
                        }
                        out = if (a + b) % 2 == 0 { &out + &t } else { &out - &t };
                    }
                }
            }
        }
        Ok(out)
    }

    /// Lie derivative of a multivector-valued form along a vector field.
    pub fn lie_mvform(&self, x: &MultiVector, w: &MvForm) -> Result<MvForm> {
        if x.deg() != 1 {
            return Err(Error::Degree("expected a vector field".into()));
        }
        let mut out = MvForm::zero(w.fdeg(), w.vdeg());
        for ((i, j), c) in w.terms() {
            let theta = Form::term(*i, c.clone());
            let lt = self.lie(x, &theta)?;
            out = &out + &lt.tensor(&MultiVector::basis(*j));
            if w.vdeg() > 0 {
                let br = self.schouten(x, &MultiVector::basis(*j))?;
                out = &out + &Form::basis(*i).tensor(&br.scale(c));
            }
        }
        Ok(out)
    }

    /// Radial homotopy primitive about the origin for closed polynomial forms.
    pub fn poincare_primitive(&self, a: &Form) -> Result<Form> {
        if a.deg() == 0 {
            return Err(Error::Degree("primitive of a 0-form".into()));
        }
        if !self.d(a).is_zero() {
            return Err(Error::NotClosed(format!("degree {} form", a.deg())));
        }
        let mut out = Form::zero(a.deg() - 1);
        let coords: Vec<&str> = self.names().collect();
        for (i, c) in a.terms() {
            if !c.is_polynomial() || c.has_functions() {
                return Err(Error::NotPolynomial(c.to_string()));
            }
            // integral of t^(a-1) c(t x) dt, monomial by monomial
            let mut integrated = Scalar::zero();
            for (m, k) in c.numer().terms() {
                if m.0.iter().any(|(v, _)| match v {
                    Var::Coord(n) => !coords.contains(&&**n),
                    Var::Func(_) => true,
                }) {
                    return Err(Error::NotPolynomial(c.to_string()));
                }
                let w = m.total_degree() as i64 + a.deg() as i64;
                let mono = m.0.iter().fold(Scalar::one(), |acc, (v, e)| {
                    &acc * &Scalar::var(v.clone()).pow(*e)
                });
                let coef = k / Q::from_integer(w.into());
                integrated = &integrated + &mono.scale_q(&coef);
            }
            let euler = MultiVector::from_terms(
                1,
                (0..self.dim()).map(|k| (bit(k), self.x(k))),
            );
            let t = contract_or_zero(&euler, &Form::term(*i, integrated));
            out = &out + &t;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> Chart {
        Chart::new(&["x", "y"], &["p"]).unwrap()
    }

    #[test]
    fn volume_contraction() {
        let c = Chart::new(&["x1", "x2", "x3"], &[] as &[&str]).unwrap();
        let v = c.dxv(&[2]).unwrap();
        // i_{d2}(dx1^dx2^dx3) = -dx1^dx3
        assert_eq!(v.coeff(0b101), Scalar::from_i64(-1));
        let w = c.dxv(&[1, 2]).unwrap();
        assert_eq!(w.coeff(0b100), Scalar::one());
        assert_eq!(c.dxv(&[2, 1]).unwrap(), -w);
    }

    #[test]
    fn schouten_pinned_example() {
        let c = plane();
        let dy = c.partial("y").unwrap();
        let u = c
            .partial("x")
            .unwrap()
            .scale(&c.coord("y").unwrap())
            .wedge(&c.partial("p").unwrap());
        let r = c.schouten(&dy, &u).unwrap();
        let expect = c.partial("x").unwrap().wedge(&c.partial("p").unwrap());
        assert_eq!(r, expect);
    }

    #[test]
    fn primitive_of_area_form() {
        let c = plane();
        let a = c.dx("x").unwrap().wedge(&c.dx("y").unwrap());
        let b = c.poincare_primitive(&a).unwrap();
        assert_eq!(c.d(&b), a);
    }

    #[test]
    fn primitive_rejects_functions() {
        let c = plane();
        let h = c.function("H");
        let a = c.d_scalar(&h);
        assert!(matches!(
            c.poincare_primitive(&a),
            Err(Error::NotPolynomial(_))
        ));
    }
}
