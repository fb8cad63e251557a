//! Hamiltonians, the Hamilton–De Donder–Weyl equations, the connection
//! induced by an extension table, and special Hamiltonian forms.

use crate::chart::Chart;
use crate::dirac::Structure;
use crate::error::{Error, Result};
use crate::exterior::{bit, contract, positions, subsets, Form, MultiVector, MvForm};
use crate::extensions::{
    bracket_ext1, bracket_extj, equiv_mod_kn, sharp1_tilde, solve_extension, wedge_decompose,
    ExtensionTable,
};
use crate::linsolve::{solve_columns, Row};
use crate::maps::CoordMap;
use crate::render;
use crate::report::Report;
use crate::scalar::Scalar;

/// An `n`-form whose `sharp~_1(dH)` differs from `1_n` by a semi-basic
/// tensor.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    pub form: Form,
    pub d: Form,
    pub sharp1: MvForm,
}

impl Hamiltonian {
    pub fn new(s: &Structure, form: &Form) -> Result<Hamiltonian> {
        let rep = check_hamiltonian(s, form);
        if let Some(f) = rep.failures().next() {
            return Err(Error::NotHamiltonian(format!("{}: {}", f.id, f.detail)));
        }
        let d = s.chart().d(form);
        let sharp1 = sharp1_tilde(s, &d)?;
        Ok(Hamiltonian {
            form: form.clone(),
            d,
            sharp1,
        })
    }
}

/// The Hamiltonian conditions in order; stops at the first failure.
pub fn check_hamiltonian(s: &Structure, form: &Form) -> Report {
    let mut rep = Report::new();
    let chart = s.chart();
    let n = s.n();
    if form.deg() != n {
        rep.push("hamiltonian-degree", false, format!("degree {} instead of {n}", form.deg()));
        return rep;
    }
    rep.push("hamiltonian-degree", true, format!("{n}-form"));
    let d = chart.d(form);
    if let Err(e) = wedge_decompose(s, &d) {
        rep.push("hamiltonian-wedge", false, e.to_string());
        return rep;
    }
    rep.push("hamiltonian-wedge", true, "dH is generated by wedges of S^1");
    if let Err(e) = solve_extension(s, n, &d) {
        rep.push("hamiltonian-tower", false, e.to_string());
        return rep;
    }
    rep.push("hamiltonian-tower", true, format!("dH lies in S^{}[{n}]", n + 1));
    let w = match sharp1_tilde(s, &d) {
        Ok(w) => w,
        Err(e) => {
            rep.push("hamiltonian-semibasic", false, e.to_string());
            return rep;
        }
    };
    let defect = &MvForm::identity(chart.dim(), n) - &w;
    let zero = MvForm::zero(n - 1, n);
    for v in positions(chart.fiber_mask()) {
        if !equiv_mod_kn(s, &defect.contract_form_slot(v), &zero) {
            rep.push(
                "hamiltonian-semibasic",
                false,
                format!("1_n - sharp~_1(dH) is not annihilated by @/{}", chart.name(v)),
            );
            return rep;
        }
    }
    rep.push("hamiltonian-semibasic", true, "1_n - sharp~_1(dH) is semi-basic");
    match w.contract_into(&chart.volume()) {
        Ok(f) if f.is_zero() => rep.push("hamiltonian-volume", true, "i_{sharp~_1(dH)} dX[] = 0"),
        Ok(f) => rep.push(
            "hamiltonian-volume",
            false,
            format!("i_{{sharp~_1(dH)}} dX[] = {}", render::form(chart, &f)),
        ),
        Err(e) => rep.push("hamiltonian-volume", false, e.to_string()),
    }
    rep
}

pub fn is_hamiltonian(s: &Structure, form: &Form) -> bool {
    check_hamiltonian(s, form).all_pass()
}

/// A generic section `x -> (x, u(x))`: every fiber coordinate becomes a
/// formal function of the base coordinates.
#[derive(Clone, Debug)]
pub struct Section {
    map: CoordMap,
}

impl Section {
    pub fn generic(chart: &Chart) -> Result<Section> {
        let base = chart.base_names();
        let source = Chart::new(&base, &[] as &[&str])?;
        let images = chart
            .names()
            .enumerate()
            .map(|(k, c)| {
                if chart.is_base(k) {
                    Scalar::coord(c)
                } else {
                    Scalar::func(c, &base)
                }
            })
            .collect();
        Ok(Section {
            map: CoordMap::new(source, chart.clone(), images)?,
        })
    }

    pub fn base(&self) -> &Chart {
        self.map.source()
    }

    /// `psi^* a`.
    pub fn pull(&self, a: &Form) -> Form {
        self.map.pull_form(a)
    }

    /// Evaluates a semi-basic form along the section.
    pub fn restrict(&self, a: &Form) -> Result<Form> {
        let chart = self.map.target();
        let fiber = chart.fiber_mask();
        let mut out = Form::zero(a.deg());
        for (i, c) in a.terms() {
            if i & fiber != 0 {
                return Err(Error::MapCondition(format!(
                    "{} is not semi-basic",
                    render::form(chart, a)
                )));
            }
            // base coordinates come first in both charts
            out.add_term(*i, self.map.pull_scalar(c));
        }
        Ok(out)
    }
}

/// One Hamilton–De Donder–Weyl equation `psi^*(d alpha) = (d alpha + {alpha, H}) o psi`.
#[derive(Clone, Debug)]
pub struct Residual {
    pub generator: Form,
    pub lhs: Form,
    pub rhs: Form,
}

impl Residual {
    pub fn residual(&self) -> Form {
        &self.lhs - &self.rhs
    }

    pub fn holds(&self) -> bool {
        self.residual().is_zero()
    }

    /// `lhs == rhs` on the base chart.
    pub fn render(&self, base: &Chart) -> String {
        format!("{} == {}", render::form(base, &self.lhs), render::form(base, &self.rhs))
    }
}

pub fn hdw_residuals(
    s: &Structure,
    ham: &Hamiltonian,
    psi: &Section,
    generators: &[Form],
) -> Result<Vec<Residual>> {
    let chart = s.chart();
    generators
        .iter()
        .map(|g| {
            let dg = chart.d(g);
            let evolved = &dg + &bracket_ext1(s, g, &ham.form)?;
            Ok(Residual {
                generator: g.clone(),
                lhs: psi.pull(&dg),
                rhs: psi.restrict(&evolved)?,
            })
        })
        .collect()
}

/// Horizontal lift `d/dx^mu + sum_u Gamma^u_mu d/du`, fixed up to the fiber
/// directions listed in `ambiguity`.
#[derive(Clone, Debug)]
pub struct Connection {
    chart: Chart,
    lifts: Vec<MultiVector>,
    pub ambiguity: Vec<MultiVector>,
}

impl Connection {
    pub fn lift(&self, mu: usize) -> &MultiVector {
        &self.lifts[mu]
    }

    /// `Gamma^u_mu` for the coordinate `u`.
    pub fn coefficient(&self, mu: usize, u: &str) -> Result<Scalar> {
        Ok(self.lifts[mu].coeff(bit(self.chart.idx(u)?)))
    }

    /// `h^* dz = sum_mu dz(lift_mu) dx^mu`.
    fn pull_differential(&self, k: usize) -> Form {
        let mut f = Form::zero(1);
        for (mu, l) in self.lifts.iter().enumerate() {
            f.add_term(bit(mu), l.coeff(bit(k)));
        }
        f
    }

    /// Pullback through the connection; coefficients are kept.
    pub fn pull_form(&self, a: &Form) -> Form {
        let dz: Vec<Form> = (0..self.chart.dim()).map(|k| self.pull_differential(k)).collect();
        let mut out = Form::zero(a.deg());
        for (i, c) in a.terms() {
            let mut t = Form::scalar(c.clone());
            for k in positions(*i) {
                t = t.wedge(&dz[k]);
                if t.is_zero() {
                    break;
                }
            }
            out = &out + &t;
        }
        out
    }

    pub fn render(&self) -> String {
        self.lifts
            .iter()
            .enumerate()
            .map(|(mu, l)| {
                format!(
                    "lift @/{} = {}\n",
                    self.chart.name(mu),
                    render::multivector(&self.chart, l)
                )
            })
            .collect()
    }
}

fn require_top_table(s: &Structure, table: &ExtensionTable) -> Result<()> {
    if table.j != s.n() {
        return Err(Error::Degree(format!(
            "connection needs an extension of degree {}, got {}",
            s.n(),
            table.j
        )));
    }
    Ok(())
}

/// Dualizes `theta -> theta - i_W theta` on `S^1`, `W = sharp~_n(dH)`.
pub fn gamma_h(s: &Structure, ham: &Hamiltonian, table: &ExtensionTable) -> Result<Connection> {
    require_top_table(s, table)?;
    let chart = s.chart();
    let n = s.n();
    let w = table.value(s, &ham.d)?;
    if w.vector_keys().iter().any(|j| j & chart.base_mask() != 0) {
        return Err(Error::Input(format!(
            "sharp~_n(dH) = {} is not vertical",
            render::mvform(chart, &w)
        )));
    }
    let defect = &MvForm::identity(chart.dim(), 1) - &w;
    for v in positions(chart.fiber_mask()) {
        let u = defect.contract_form_slot(v).vector_at(0);
        if !s.in_k(1, &u) {
            return Err(Error::Input(format!(
                "1_1 - sharp~_n(dH) is not annihilated by @/{}",
                chart.name(v)
            )));
        }
    }
    let fibers: Vec<usize> = positions(chart.fiber_mask()).collect();
    let nf = fibers.len();
    let mut rows: Vec<Row<usize>> = Vec::new();
    for theta in s.span(1).basis() {
        let image = theta.try_add(&-&w.contract_into(theta)?)?;
        let mut row = Row::new();
        for (c, k) in fibers.iter().enumerate() {
            let v = theta.coeff(bit(*k));
            if !v.is_zero() {
                row.insert(c, v);
            }
        }
        for mu in 0..n {
            let b = &image.coeff(bit(mu)) - &theta.coeff(bit(mu));
            if !b.is_zero() {
                row.insert(nf + mu, b);
            }
        }
        rows.push(row);
    }
    let (parts, kernel) = solve_columns(nf, n, rows, true);
    let mut lifts = Vec::with_capacity(n);
    for (mu, p) in parts.into_iter().enumerate() {
        let sol = p.ok_or(Error::Inconsistent)?;
        let mut l = MultiVector::basis(bit(mu));
        for (c, v) in sol {
            l.add_term(bit(fibers[c]), v);
        }
        lifts.push(l);
    }
    let ambiguity = kernel
        .into_iter()
        .map(|k| {
            MultiVector::from_terms(1, k.into_iter().map(|(c, v)| (bit(fibers[c]), v)))
        })
        .collect();
    Ok(Connection {
        chart: chart.clone(),
        lifts,
        ambiguity,
    })
}

/// The inverse direction: the table on `dH` defined by
/// `i_W dz = dz - h^* dz`.
pub fn table_from_connection(s: &Structure, ham: &Hamiltonian, h: &Connection) -> Result<ExtensionTable> {
    let chart = s.chart();
    let mut w = MvForm::zero(1, 1);
    for k in 0..chart.dim() {
        let part = &Form::basis(bit(k)) - &h.pull_differential(k);
        for (i, c) in part.terms() {
            w.add_term(*i, bit(k), c.clone());
        }
    }
    ExtensionTable::from_entries(s, s.n(), vec![(ham.d.clone(), w)])
}

/// `h^*(d alpha) = d alpha + {alpha, H}` for each form.
pub fn check_evolution(
    s: &Structure,
    ham: &Hamiltonian,
    table: &ExtensionTable,
    h: &Connection,
    forms: &[Form],
) -> Report {
    let chart = s.chart();
    let mut rep = Report::new();
    for (k, a) in forms.iter().enumerate() {
        let id = format!("evolution[{k}]");
        let da = chart.d(a);
        let lhs = h.pull_form(&da);
        match bracket_extj(s, table, a, &ham.form) {
            Ok(b) => {
                let rhs = &da + &b;
                if lhs.try_add(&-&rhs).map(|d| d.is_zero()) == Ok(true) {
                    rep.push(id, true, format!("h*(d a) = {}", render::form(chart, &lhs)));
                } else {
                    rep.push(
                        id,
                        false,
                        format!(
                            "h*(d a) = {} but d a + {{a, H}} = {}",
                            render::form(chart, &lhs),
                            render::form(chart, &rhs)
                        ),
                    );
                }
            }
            Err(e) => rep.push(id, false, e.to_string()),
        }
    }
    rep
}

/// Constant basic forms `dx^I` of degree `b`.
pub fn basic_monomials(chart: &Chart, b: usize) -> Vec<Form> {
    subsets(chart.n(), b).into_iter().map(Form::basis).collect()
}

/// The first `dx^I` of degree `n-1-a` with `alpha ^ dx^I` not Hamiltonian.
pub fn special_witness(s: &Structure, alpha: &Form) -> Result<Option<Form>> {
    let n = s.n();
    if !s.is_hamiltonian_form(alpha) {
        return Err(Error::NotHamiltonian(render::form(s.chart(), alpha)));
    }
    let a = alpha.deg();
    Ok(basic_monomials(s.chart(), n - 1 - a)
        .into_iter()
        .find(|eps| !s.is_hamiltonian_form(&alpha.wedge(eps))))
}

pub fn is_special_hamiltonian(s: &Structure, alpha: &Form) -> Result<bool> {
    Ok(special_witness(s, alpha)?.is_none())
}

/// `C` with `v = C u` modulo `K_p`, read off the pairings with `S^p`.
/// `None` when no constant works; `Some(None)` when both vanish.
fn proportionality(s: &Structure, p: usize, v: &MultiVector, u: &MultiVector) -> Result<Option<Option<Scalar>>> {
    let gens = s.span(p).basis();
    let mut c: Option<Scalar> = None;
    for g in gens {
        let cu = contract(u, g)?;
        let cv = contract(v, g)?;
        let first = cu.terms().next().map(|(i, x)| &cv.coeff(*i) / x);
        if first.is_some() {
            c = first;
            break;
        }
    }
    match c {
        None => Ok(if s.in_k(p, v) { Some(None) } else { None }),
        Some(c) => {
            if c.as_constant().is_none() || c.is_zero() {
                return Ok(None);
            }
            Ok(s.same_coset(p, v, &u.scale(&c)).then_some(Some(c)))
        }
    }
}

/// `sharp_{a+1}(d alpha) = U` and `sharp_{a+b+1}(d alpha ^ eps) = C i_eps U`
/// modulo the annihilators, for every constant basic `eps`.
pub fn check_subalgebra_condition(s: &Structure, alpha: &Form, u: &MultiVector) -> Result<Report> {
    let chart = s.chart();
    let n = s.n();
    if let Some(eps) = special_witness(s, alpha)? {
        return Err(Error::NotHamiltonian(format!(
            "{} is not special: wedge with {} is not Hamiltonian",
            render::form(chart, alpha),
            render::form(chart, &eps)
        )));
    }
    let a = alpha.deg();
    if u.deg() != n - a {
        return Err(Error::Degree(format!("U must be an {}-vector", n - a)));
    }
    let da = chart.d(alpha);
    let mut rep = Report::new();
    let v = s.sharp(a + 1, &da)?;
    if s.same_coset(n - a, &v, u) {
        rep.push("subalgebra-sharp", true, format!("sharp(d a) = {}", render::multivector(chart, &v)));
    } else {
        let hint = match proportionality(s, n - a, &v, u)? {
            Some(Some(c)) => format!(" = {c} U"),
            _ => String::new(),
        };
        rep.push(
            "subalgebra-sharp",
            false,
            format!("sharp(d a) = {}{hint}", render::multivector(chart, &v)),
        );
    }
    for b in 1..n - a {
        for eps in basic_monomials(chart, b) {
            let id = format!("subalgebra[{}]", render::form(chart, &eps));
            let v = s.sharp(a + b + 1, &da.wedge(&eps))?;
            let ie = u.contract_form(&eps)?;
            match proportionality(s, n - a - b, &v, &ie)? {
                Some(Some(c)) => rep.push(id, true, format!("C = {c}")),
                Some(None) => rep.push(id, true, "both sides vanish"),
                None => rep.push(
                    id,
                    false,
                    format!(
                        "sharp = {} is not a constant multiple of i_eps U = {}",
                        render::multivector(chart, &v),
                        render::multivector(chart, &ie)
                    ),
                ),
            }
        }
    }
    Ok(rep)
}

/// Evolution of `alpha` under each table, `d alpha + {alpha, H}`.
pub fn evolutions(
    s: &Structure,
    ham: &Hamiltonian,
    tables: &[&ExtensionTable],
    alpha: &Form,
) -> Result<Vec<Form>> {
    let da = s.chart().d(alpha);
    tables
        .iter()
        .map(|t| Ok(&da + &bracket_extj(s, t, alpha, &ham.form)?))
        .collect()
}
