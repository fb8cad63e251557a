//! Regular graded Dirac structures: the contraction tower `S^1..S^n`, the
//! derived sharp maps modulo annihilators, the graded bracket on Hamiltonian
//! forms and checks of the defining axioms.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{contract, subsets, subsets_of, Form, Idx, MultiVector};
use crate::linsolve::{solve_columns, Row};
use crate::render;
use crate::report::Report;
use crate::sampler::Sampler;
use crate::scalar::Scalar;
use crate::span::{FormSpan, Span};

/// Representative of a class in `V_p / K_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRep {
    pub deg: usize,
    pub rep: MultiVector,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 2,
            seed: crate::sampler::DEFAULT_SEED,
        }
    }
}

type SharpCache = OnceLock<std::result::Result<Vec<MultiVector>, Error>>;

#[derive(Clone, Debug)]
pub struct Structure {
    chart: Chart,
    table: Vec<(Form, MultiVector)>,
    tower: Vec<FormSpan>,
    sharp_cache: Vec<SharpCache>,
}

fn sign(odd: bool) -> Scalar {
    Scalar::from_i64(if odd { -1 } else { 1 })
}

impl Structure {
    /// Builds the structure from `S^n` generators and their `sharp_n`
    /// values. Lower degrees are derived by contraction.
    pub fn new(chart: Chart, table: Vec<(Form, MultiVector)>) -> Result<Structure> {
        let n = chart.n();
        for (f, v) in &table {
            chart.check_form(f)?;
            if f.deg() != n && !f.is_zero() {
                return Err(Error::Degree(format!(
                    "S^n generator of degree {} on a chart of order {n}",
                    f.deg()
                )));
            }
            if v.deg() != 1 && !v.is_zero() {
                return Err(Error::Degree("sharp_n values must be vector fields".into()));
            }
        }
        let table: Vec<(Form, MultiVector)> = table
            .into_iter()
            .filter(|(f, _)| !f.is_zero())
            .map(|(f, v)| (f, if v.is_zero() { MultiVector::zero(1) } else { v }))
            .collect();
        let mut tower = vec![Span::new(n, table.iter().map(|(f, _)| f.clone()))];
        for a in (1..n).rev() {
            let upper = tower.last().unwrap();
            let mut gens = Vec::new();
            for g in upper.basis() {
                for k in 0..chart.dim() {
                    let c = g.contract_coord(k);
                    if !c.is_zero() {
                        gens.push(c);
                    }
                }
            }
            tower.push(Span::new(a, gens));
        }
        tower.reverse();
        let s = Structure {
            chart,
            table,
            tower,
            sharp_cache: (0..n).map(|_| OnceLock::new()).collect(),
        };
        s.check_table_relations()?;
        Ok(s)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn n(&self) -> usize {
        self.chart.n()
    }

    pub fn table(&self) -> &[(Form, MultiVector)] {
        &self.table
    }

    /// `S^a` for `1 <= a <= n`.
    pub fn span(&self, a: usize) -> &FormSpan {
        &self.tower[a - 1]
    }

    pub fn in_span(&self, a: usize, f: &Form) -> bool {
        if f.is_zero() {
            return true;
        }
        a >= 1 && a <= self.n() && f.deg() == a && self.span(a).contains(f)
    }

    /// `U` lies in `K_p`, the annihilator of `S^p`.
    pub fn in_k(&self, p: usize, u: &MultiVector) -> bool {
        if u.is_zero() {
            return true;
        }
        if p == 0 || p > self.n() || u.deg() != p {
            return false;
        }
        self.span(p).basis().iter().all(|g| {
            contract(u, g)
                .map(|s| s.is_zero())
                .unwrap_or(false)
        })
    }

    pub fn same_coset(&self, p: usize, u: &MultiVector, v: &MultiVector) -> bool {
        match u.try_add(&-v) {
            Ok(d) => self.in_k(p, &d),
            Err(_) => false,
        }
    }

    fn check_table_relations(&self) -> Result<()> {
        let gens: Vec<Form> = self.table.iter().map(|(f, _)| f.clone()).collect();
        let mut rows: BTreeMap<Idx, Row<usize>> = BTreeMap::new();
        for (k, g) in gens.iter().enumerate() {
            for (i, c) in g.terms() {
                rows.entry(*i).or_default().insert(k, c.clone());
            }
        }
        let (_, kernel) = solve_columns(gens.len(), 0, rows.into_values(), true);
        for h in kernel {
            let mut v = MultiVector::zero(1);
            for (k, c) in &h {
                v = &v + &self.table[*k].1.scale(c);
            }
            if !self.in_k(1, &v) {
                return Err(Error::IllDefined(format!(
                    "relation among S^n generators maps to {} outside K_1",
                    render::multivector(&self.chart, &v)
                )));
            }
        }
        Ok(())
    }

    /// Unknowns `(k, J)` for decompositions `theta = sum f i_{d_J} g_k`.
    fn unknowns(&self, a: usize) -> Vec<(usize, Idx)> {
        let r = self.n() - a;
        let mut out = Vec::new();
        for (k, (g, _)) in self.table.iter().enumerate() {
            let mut js: Vec<Idx> = Vec::new();
            for (i, _) in g.terms() {
                js.extend(subsets_of(*i, r));
            }
            js.sort_unstable();
            js.dedup();
            out.extend(js.into_iter().map(|j| (k, j)));
        }
        out
    }

    fn compute_sharp_basis(&self, a: usize) -> Result<Vec<MultiVector>> {
        let n = self.n();
        let unknowns = self.unknowns(a);
        let nu = unknowns.len();
        let basis = self.span(a).basis();
        let mut rows: BTreeMap<Idx, Row<usize>> = BTreeMap::new();
        for (u, (k, j)) in unknowns.iter().enumerate() {
            let piece = contract(&MultiVector::basis(*j), &self.table[*k].0)?;
            for (i, c) in piece.terms() {
                rows.entry(*i).or_default().insert(u, c.clone());
            }
        }
        for (r, b) in basis.iter().enumerate() {
            for (i, c) in b.terms() {
                rows.entry(*i).or_default().insert(nu + r, c.clone());
            }
        }
        let (parts, kernel) = solve_columns(nu, basis.len(), rows.into_values(), a < n);
        let value = |coeffs: &BTreeMap<usize, Scalar>| -> MultiVector {
            let mut v = MultiVector::zero(n + 1 - a);
            for (u, c) in coeffs {
                let (k, j) = unknowns[*u];
                let t = self.table[k].1.wedge(&MultiVector::basis(j)).scale(c);
                v = &v + &t;
            }
            v
        };
        for h in &kernel {
            let v = value(h);
            if !self.in_k(n + 1 - a, &v) {
                return Err(Error::DecompositionDependent(format!(
                    "sharp_{a}: two decompositions differ by {}",
                    render::multivector(&self.chart, &v)
                )));
            }
        }
        parts
            .into_iter()
            .zip(basis)
            .map(|(p, b)| {
                p.map(|c| value(&c)).ok_or_else(|| {
                    Error::NotInSpan(format!(
                        "{} has no decomposition over S^n",
                        render::form(&self.chart, b)
                    ))
                })
            })
            .collect()
    }

    /// Representatives of `sharp_a` on the echelon basis of `S^a`; the
    /// decomposition independence is verified when first computed.
    pub fn sharp_basis(&self, a: usize) -> Result<&[MultiVector]> {
        if a == 0 || a > self.n() {
            return Err(Error::Degree(format!("sharp_{a} is not defined")));
        }
        match self.sharp_cache[a - 1].get_or_init(|| self.compute_sharp_basis(a)) {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    /// A representative of `sharp_a(theta)`.
    pub fn sharp(&self, a: usize, theta: &Form) -> Result<MultiVector> {
        let vals = self.sharp_basis(a)?;
        if theta.is_zero() {
            return Ok(MultiVector::zero(self.n() + 1 - a));
        }
        if theta.deg() != a {
            return Err(Error::Degree(format!(
                "sharp_{a} applied to a {}-form",
                theta.deg()
            )));
        }
        let coeffs = self.span(a).coefficients(theta).ok_or_else(|| {
            Error::NotInSpan(format!(
                "{} is not in S^{a}",
                render::form(&self.chart, theta)
            ))
        })?;
        let mut v = MultiVector::zero(self.n() + 1 - a);
        for (c, s) in coeffs.iter().zip(vals) {
            if !c.is_zero() {
                v = &v + &s.scale(c);
            }
        }
        Ok(v)
    }

    pub fn derive_sharp(&self, a: usize, theta: &Form) -> Result<CosetRep> {
        Ok(CosetRep {
            deg: self.n() + 1 - a,
            rep: self.sharp(a, theta)?,
        })
    }

    pub fn coset_eq(&self, x: &CosetRep, y: &CosetRep) -> bool {
        x.deg == y.deg && self.same_coset(x.deg, &x.rep, &y.rep)
    }

    pub fn is_hamiltonian_form(&self, alpha: &Form) -> bool {
        let a = alpha.deg();
        a < self.n() && self.in_span(a + 1, &self.chart.d(alpha))
    }

    fn require_hamiltonian(&self, alpha: &Form) -> Result<()> {
        if self.is_hamiltonian_form(alpha) {
            Ok(())
        } else {
            Err(Error::NotHamiltonian(render::form(&self.chart, alpha)))
        }
    }

    /// `{alpha, beta} = (-1)^(n-1-b) i_{sharp_{b+1}(d beta)} d alpha`.
    pub fn bracket(&self, alpha: &Form, beta: &Form) -> Result<Form> {
        self.require_hamiltonian(alpha)?;
        self.require_hamiltonian(beta)?;
        let (a, b, n) = (alpha.deg(), beta.deg(), self.n());
        let u = self.sharp(b + 1, &self.chart.d(beta))?;
        if a + b + 1 < n {
            return Ok(Form::zero(0));
        }
        let r = contract(&u, &self.chart.d(alpha))?;
        Ok(r.scale(&sign((n - 1 - b) % 2 == 1)))
    }

    /// The form `theta` of the integrability axiom for representatives
    /// `U = sharp_a(alpha)`, `V = sharp_b(beta)`.
    pub fn integrability_form(
        &self,
        alpha: &Form,
        u: &MultiVector,
        beta: &Form,
        v: &MultiVector,
    ) -> Result<Form> {
        let (p, q) = (u.deg(), v.deg());
        let c = &self.chart;
        let t1 = c.lie(u, beta)?.scale(&sign((p + 1) * q % 2 == 1));
        let t2 = c.lie(v, alpha)?.scale(&sign(q % 2 == 1));
        let inner = &contract(v, alpha)? + &contract(u, beta)?.scale(&sign(p * q % 2 == 1));
        let t3 = c.d(&inner).scale(&(sign(q % 2 == 1) * Scalar::ratio(-1, 2)));
        Ok(&(&t1 + &t2) + &t3)
    }

    fn check_pair(&self, alpha: &Form, beta: &Form, integrable: bool) -> Result<Option<String>> {
        let n = self.n();
        let (a, b) = (alpha.deg(), beta.deg());
        let u = self.sharp(a, alpha)?;
        let v = self.sharp(b, beta)?;
        let (p, q) = (u.deg(), v.deg());
        if !integrable {
            let lhs = contract(&u, beta)?;
            let rhs = contract(&v, alpha)?.scale(&sign(p * q % 2 == 1));
            if lhs != rhs {
                return Ok(Some(format!(
                    "alpha = {}, beta = {}: {} != {}",
                    render::form(&self.chart, alpha),
                    render::form(&self.chart, beta),
                    render::form(&self.chart, &lhs),
                    render::form(&self.chart, &rhs)
                )));
            }
            return Ok(None);
        }
        let theta = self.integrability_form(alpha, &u, beta, &v)?;
        let k = a + b - n;
        if !self.in_span(k, &theta) {
            return Ok(Some(format!(
                "alpha = {}, beta = {}: theta = {} not in S^{k}",
                render::form(&self.chart, alpha),
                render::form(&self.chart, beta),
                render::form(&self.chart, &theta)
            )));
        }
        let st = self.sharp(k, &theta)?;
        let uv = self.chart.schouten(&u, &v)?;
        if !self.same_coset(p + q - 1, &st, &uv) {
            return Ok(Some(format!(
                "alpha = {}, beta = {}: sharp(theta) = {} but [U,V] = {}",
                render::form(&self.chart, alpha),
                render::form(&self.chart, beta),
                render::multivector(&self.chart, &st),
                render::multivector(&self.chart, &uv)
            )));
        }
        Ok(None)
    }

    /// Skew-symmetry and integrability on basis pairs and sampled sections.
    pub fn verify_axioms(&self, opts: &VerifyOptions) -> Report {
        let mut rep = Report::new();
        let n = self.n();
        let mut ok = true;
        for a in 1..=n {
            match self.sharp_basis(a) {
                Ok(v) => rep.push(
                    format!("sharp-defined[{a}]"),
                    true,
                    format!("{} basis forms, decomposition independent", v.len()),
                ),
                Err(e) => {
                    ok = false;
                    rep.push(format!("sharp-defined[{a}]"), false, e.to_string());
                }
            }
        }
        if !ok {
            return rep;
        }
        let mut sampler = Sampler::new(opts.seed);
        for kind in ["skew", "integrable"] {
            for a in 1..=n {
                for b in 1..=n {
                    if a + b < n + 1 || (kind == "skew" && b < a) {
                        continue;
                    }
                    let mut pairs: Vec<(Form, Form)> = Vec::new();
                    for x in self.span(a).basis() {
                        for y in self.span(b).basis() {
                            pairs.push((x.clone(), y.clone()));
                        }
                    }
                    for _ in 0..opts.samples {
                        let x = self.sample_section(a, &mut sampler);
                        let y = self.sample_section(b, &mut sampler);
                        pairs.push((x, y));
                    }
                    let total = pairs.len();
                    let mut failure = None;
                    for (x, y) in &pairs {
                        match self.check_pair(x, y, kind == "integrable") {
                            Ok(None) => {}
                            Ok(Some(w)) => {
                                failure = Some(w);
                                break;
                            }
                            Err(e) => {
                                failure = Some(e.to_string());
                                break;
                            }
                        }
                    }
                    let id = format!("{kind}[a={a},b={b}]");
                    match failure {
                        None => rep.push(id, true, format!("{total} pairs")),
                        Some(w) => rep.push(id, false, w),
                    }
                }
            }
        }
        rep
    }

    /// Random section of `S^a` with polynomial coefficients.
    pub fn sample_section(&self, a: usize, s: &mut Sampler) -> Form {
        let mut f = Form::zero(a);
        for b in self.span(a).basis() {
            if s.int(0, 2) == 0 {
                continue;
            }
            let c = s.poly(&self.chart, 1, 1);
            f = &f + &b.scale(&c);
        }
        f
    }

    /// Fibered over the base coordinates: every `S^a` consists of
    /// `(a-1)`-horizontal forms and contains all semi-basic `a`-forms.
    pub fn verify_fibered(&self) -> Report {
        let mut rep = Report::new();
        let n = self.n();
        let vertical: Vec<usize> = (n..self.chart.dim()).collect();
        for a in 1..=n {
            let mut witness = None;
            'outer: for g in self.span(a).basis() {
                for (i, &v1) in vertical.iter().enumerate() {
                    for &v2 in &vertical[i + 1..] {
                        let c = g.contract_coord(v1).contract_coord(v2);
                        if !c.is_zero() {
                            witness = Some(format!(
                                "{} is not {}-horizontal (vertical pair {}, {})",
                                render::form(&self.chart, g),
                                a - 1,
                                self.chart.name(v1),
                                self.chart.name(v2)
                            ));
                            break 'outer;
                        }
                    }
                }
            }
            match witness {
                None => rep.push(format!("horizontal[{a}]"), true, format!("S^{a} is {}-horizontal", a - 1)),
                Some(w) => rep.push(format!("horizontal[{a}]"), false, w),
            }
            let missing = subsets(n, a)
                .into_iter()
                .map(Form::basis)
                .find(|f| !self.span(a).contains(f));
            match missing {
                None => rep.push(
                    format!("semi-basic[{a}]"),
                    true,
                    format!("all semi-basic {a}-forms lie in S^{a}"),
                ),
                Some(f) => rep.push(
                    format!("semi-basic[{a}]"),
                    false,
                    format!("{} is not in S^{a}", render::form(&self.chart, &f)),
                ),
            }
        }
        rep
    }

    /// Cyclic Jacobiator `sum (-1)^(h_x h_z) {{x, y}, z}` over cyclic
    /// permutations, `h` the Hamiltonian degree.
    pub fn jacobiator(&self, x: &Form, y: &Form, z: &Form) -> Result<Form> {
        let n = self.n() as i64;
        let h = |f: &Form| n - 1 - f.deg() as i64;
        let term = |p: &Form, q: &Form, r: &Form| -> Result<Form> {
            let inner = self.bracket(p, q)?;
            let outer = self.bracket(&inner, r)?;
            Ok(outer.scale(&sign((h(p) * h(r)).rem_euclid(2) == 1)))
        };
        let mut sum = term(x, y, z)?;
        sum = sum.try_add(&term(y, z, x)?)?;
        sum = sum.try_add(&term(z, x, y)?)?;
        Ok(sum)
    }
}
