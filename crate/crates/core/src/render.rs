//! Canonical text rendering, the inverse of [`crate::parse`].
//!
//! Basis forms put fiber differentials first and express the base part
//! through `dX[..]`, the contraction of the volume form: on a chart with base
//! `x1,x2`, `d(y1) ^ dx1` renders as `-d(y1) ^ dX[2]`.

use crate::chart::Chart;
use crate::exterior::{bit, positions, Form, Idx, MultiVector, MvForm};
use crate::scalar::Scalar;

pub fn scalar(s: &Scalar) -> String {
    s.to_string()
}

/// Basis text and the sign relating it to `dx^I`.
fn form_basis(chart: &Chart, i: Idx) -> (String, bool) {
    let base = i & chart.base_mask();
    let fiber = i & !chart.base_mask();
    let mut parts: Vec<String> = positions(fiber)
        .map(|k| format!("d({})", chart.name(k)))
        .collect();
    let mut rebuilt = Form::basis(fiber);
    if base != 0 {
        let comp: Vec<usize> = (0..chart.n())
            .filter(|k| base & bit(*k) == 0)
            .map(|k| k + 1)
            .collect();
        let list: Vec<String> = comp.iter().map(|k| k.to_string()).collect();
        parts.push(format!("dX[{}]", list.join(",")));
        let v = chart.dxv(&comp).expect("indices in range");
        rebuilt = rebuilt.wedge(&v);
    }
    let neg = rebuilt.coeff(i).is_negative_leading();
    (parts.join(" ^ "), neg)
}

fn vector_basis(chart: &Chart, j: Idx) -> String {
    positions(j)
        .map(|k| format!("@/{}", chart.name(k)))
        .collect::<Vec<_>>()
        .join(" ^ ")
}

fn join_terms(terms: Vec<(Scalar, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, basis)) in terms.into_iter().enumerate() {
        let compound = c.is_compound();
        let neg = !compound && c.is_negative_leading();
        let mag = if neg { -&c } else { c };
        let coef = if basis.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            String::new()
        } else if compound {
            format!("({mag}) * ")
        } else {
            format!("{mag} * ")
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&coef);
        out.push_str(&basis);
    }
    out
}

pub fn form(chart: &Chart, f: &Form) -> String {
    let terms = f
        .terms()
        .map(|(i, c)| {
            let (b, neg) = form_basis(chart, *i);
            (if neg { -c } else { c.clone() }, b)
        })
        .collect();
    join_terms(terms)
}

pub fn multivector(chart: &Chart, u: &MultiVector) -> String {
    let terms = u
        .terms()
        .map(|(j, c)| (c.clone(), vector_basis(chart, *j)))
        .collect();
    join_terms(terms)
}

pub fn mvform(chart: &Chart, w: &MvForm) -> String {
    let terms = w
        .terms()
        .map(|((i, j), c)| {
            let (b, neg) = form_basis(chart, *i);
            let fb = if b.is_empty() { "1".to_string() } else { b };
            let vb = if *j == 0 {
                "1".to_string()
            } else {
                vector_basis(chart, *j)
            };
            (if neg { -c } else { c.clone() }, format!("{fb} & {vb}"))
        })
        .collect();
    join_terms(terms)
}
