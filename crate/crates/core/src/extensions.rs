//! Extensions of the sharp maps to forms of degree above `n`: the
//! anti-derivation `sharp~_1`, the subbundles `S^a[j]` with their solved
//! values `sharp~_j`, and the brackets these induce.

use std::collections::BTreeMap;

use crate::chart::Chart;
use crate::dirac::Structure;
use crate::error::{Error, Result};
use crate::exterior::{contract, subsets, Form, Idx, MultiVector, MvForm};
use crate::linsolve::{solve_columns, Row};
use crate::render;
use crate::report::Report;
use crate::scalar::{binom, Scalar};
use crate::span::{FormSpan, Span};

fn sign(odd: bool) -> Scalar {
    Scalar::from_i64(if odd { -1 } else { 1 })
}

fn wedge_all(basis: &[Form], ts: &[usize]) -> Form {
    let mut f = Form::scalar(Scalar::one());
    for &t in ts {
        f = f.wedge(&basis[t]);
    }
    f
}

/// Writes `theta` as `sum c_T b_{t1} ^ ... ^ b_{ta}` over the echelon basis
/// of `S^1`. Each term is read off at the pivot set of its factors.
pub fn wedge_decompose(s: &Structure, theta: &Form) -> Result<Vec<(Vec<usize>, Scalar)>> {
    let s1 = s.span(1);
    let basis = s1.basis();
    let pivots = s1.pivots();
    let a = theta.deg();
    let mut out: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    let not_in = || {
        Error::NotInSpan(format!(
            "{} is not a combination of wedge products of S^1",
            render::form(s.chart(), theta)
        ))
    };
    for (i, c) in theta.terms() {
        let ts: Vec<usize> = (0..pivots.len()).filter(|t| pivots[*t] & i != 0).collect();
        if ts.len() != a {
            continue;
        }
        out.insert(ts, c.clone());
    }
    let mut rebuilt = Form::zero(a);
    for (ts, c) in &out {
        rebuilt = &rebuilt + &wedge_all(basis, ts).scale(c);
    }
    if rebuilt.try_add(&-theta).map(|d| d.is_zero()) != Ok(true) {
        return Err(not_in());
    }
    Ok(out.into_iter().collect())
}

/// `(-1)^(a+1) sum_j (-1)^(j+1) b_1 ^ .. ^ b_j^ ^ .. ^ b_a (x) sharp_1(b_j)`.
fn sharp1_tilde_wedge(basis: &[Form], vals: &[MultiVector], n: usize, ts: &[usize]) -> MvForm {
    let a = ts.len();
    let mut w = MvForm::zero(a - 1, n);
    for j in 0..a {
        let rest: Vec<usize> = ts.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, t)| *t).collect();
        let term = wedge_all(basis, &rest).tensor(&vals[ts[j]]);
        w = &w + &term.scale(&sign((a + 1 + j) % 2 == 1));
    }
    w
}

/// The anti-derivation extension of `sharp_1` to `(S^1)^{^a}`.
pub fn sharp1_tilde(s: &Structure, theta: &Form) -> Result<MvForm> {
    let n = s.n();
    let a = theta.deg();
    if a == 0 {
        return Err(Error::Degree("sharp~_1 of a 0-form".into()));
    }
    if theta.is_zero() {
        return Ok(MvForm::zero(a - 1, n));
    }
    let parts = wedge_decompose(s, theta)?;
    let basis = s.span(1).basis();
    let vals = s.sharp_basis(1)?;
    let mut w = MvForm::zero(a - 1, n);
    for (ts, c) in parts {
        w = &w + &sharp1_tilde_wedge(basis, vals, n, &ts).scale(&c);
    }
    Ok(w)
}

/// `W` and `V` agree modulo `K_n`: equal contractions into every `S^n`
/// generator.
pub fn equiv_mod_kn(s: &Structure, w: &MvForm, v: &MvForm) -> bool {
    s.span(s.n()).basis().iter().all(|g| {
        match (w.contract_into(g), v.contract_into(g)) {
            (Ok(x), Ok(y)) => x.try_add(&-&y).map(|d| d.is_zero()).unwrap_or(false),
            _ => false,
        }
    })
}

/// Checks `i_{sharp_n(alpha)} theta = (-1)^(n+1-a) i_{W} alpha` for every
/// generator `alpha` of `S^n`; returns the first failing generator.
pub fn pairing_defect(s: &Structure, theta: &Form, w: &MvForm) -> Result<Option<Form>> {
    let n = s.n();
    let a = theta.deg();
    let vals = s.sharp_basis(n)?;
    for (g, v) in s.span(n).basis().iter().zip(vals) {
        let lhs = contract(v, theta)?;
        let rhs = w.contract_into(g)?.scale(&sign((n + 1 + a) % 2 == 1));
        if lhs.try_add(&-&rhs).map(|d| d.is_zero()) != Ok(true) {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}

/// `i_{sharp_n(alpha)} theta` for each pair, the contraction data behind the
/// tower solve.
pub fn contraction_table(s: &Structure, alphas: &[Form], thetas: &[Form]) -> Result<Vec<Vec<Form>>> {
    let n = s.n();
    alphas
        .iter()
        .map(|al| {
            let v = s.sharp(n, al)?;
            thetas.iter().map(|t| contract(&v, t)).collect()
        })
        .collect()
}

fn require_top_hamiltonian(s: &Structure, alpha: &Form) -> Result<()> {
    if alpha.deg() + 1 != s.n() || !s.is_hamiltonian_form(alpha) {
        return Err(Error::NotHamiltonian(format!(
            "{} is not a Hamiltonian (n-1)-form",
            render::form(s.chart(), alpha)
        )));
    }
    Ok(())
}

/// `{alpha, theta} = (-1)^(n-1-a) i_{sharp~_1(d theta)} d alpha` for a
/// Hamiltonian `(n-1)`-form `alpha` and an `a`-form `theta`.
pub fn bracket_ext1(s: &Structure, alpha: &Form, theta: &Form) -> Result<Form> {
    require_top_hamiltonian(s, alpha)?;
    let a = theta.deg();
    let dt = s.chart().d(theta);
    if dt.is_zero() {
        return Ok(Form::zero(a));
    }
    let w = sharp1_tilde(s, &dt)?;
    let r = w.contract_into(&s.chart().d(alpha))?;
    Ok(r.scale(&sign((n_plus(s) + a) % 2 == 1)))
}

fn n_plus(s: &Structure) -> usize {
    s.n() + 1
}

/// Columns `dx^I (x) d_J` of `MvForm<a-j, n+1-j>` paired against `S^n`.
struct PairingSystem {
    cols: Vec<(Idx, Idx)>,
    /// `(generator, component) -> coefficients over the columns`
    rows: BTreeMap<(usize, Idx), Row<usize>>,
    fdeg: usize,
    vdeg: usize,
}

impl PairingSystem {
    fn new(s: &Structure, a: usize, j: usize) -> Result<PairingSystem> {
        let n = s.n();
        let m = s.chart().dim();
        if j == 0 || j > n || a < j {
            return Err(Error::Degree(format!("no extension of degree {j} on {a}-forms")));
        }
        let (fdeg, vdeg) = (a - j, n + 1 - j);
        let is = subsets(m, fdeg);
        let js = subsets(m, vdeg);
        let mut cols = Vec::with_capacity(is.len() * js.len());
        let mut rows: BTreeMap<(usize, Idx), Row<usize>> = BTreeMap::new();
        for (g, alpha) in s.span(n).basis().iter().enumerate() {
            let inner: Vec<Form> = js
                .iter()
                .map(|jj| contract(&MultiVector::basis(*jj), alpha))
                .collect::<Result<_>>()?;
            let mut k = 0;
            for i in &is {
                for (jk, c) in inner.iter().enumerate() {
                    if g == 0 {
                        cols.push((*i, js[jk]));
                    }
                    if !c.is_zero() {
                        for (key, v) in Form::basis(*i).wedge(c).terms() {
                            rows.entry((g, *key)).or_default().insert(k, v.clone());
                        }
                    }
                    k += 1;
                }
            }
        }
        if s.span(n).rank() == 0 {
            for i in &is {
                for jj in &js {
                    cols.push((*i, *jj));
                }
            }
        }
        Ok(PairingSystem {
            cols,
            rows,
            fdeg,
            vdeg,
        })
    }

    fn mvform(&self, sol: &BTreeMap<usize, Scalar>) -> MvForm {
        MvForm::from_terms(
            self.fdeg,
            self.vdeg,
            sol.iter()
                .filter(|(k, _)| **k < self.cols.len())
                .map(|(k, c)| (self.cols[*k], c.clone())),
        )
    }

    /// Right-hand sides `i_{sharp~_1(theta)} alpha_g`.
    fn rhs(s: &Structure, theta: &Form) -> Result<BTreeMap<(usize, Idx), Scalar>> {
        let w = sharp1_tilde(s, theta)?;
        let mut out = BTreeMap::new();
        for (g, alpha) in s.span(s.n()).basis().iter().enumerate() {
            for (k, c) in w.contract_into(alpha)?.terms() {
                out.insert((g, *k), c.clone());
            }
        }
        Ok(out)
    }

    /// Particular solution and homogeneous freedom for each right-hand side.
    fn solve(&self, s: &Structure, thetas: &[Form]) -> Result<(Vec<Option<MvForm>>, Vec<MvForm>)> {
        self.solve_within(s, thetas, &|_| true)
    }

    /// As [`PairingSystem::solve`], with the columns outside `allowed` forced
    /// to zero.
    fn solve_within(
        &self,
        s: &Structure,
        thetas: &[Form],
        allowed: &dyn Fn((Idx, Idx)) -> bool,
    ) -> Result<(Vec<Option<MvForm>>, Vec<MvForm>)> {
        let nc = self.cols.len();
        let mut rows = self.rows.clone();
        for (k, col) in self.cols.iter().enumerate() {
            if !allowed(*col) {
                rows.insert((usize::MAX, k as Idx), Row::from([(k, Scalar::one())]));
            }
        }
        for (r, t) in thetas.iter().enumerate() {
            for (key, c) in PairingSystem::rhs(s, t)? {
                rows.entry(key).or_default().insert(nc + r, c);
            }
        }
        let (parts, kernel) = solve_columns(nc, thetas.len(), rows.into_values(), true);
        let parts = parts.into_iter().map(|p| p.map(|p| self.mvform(&p))).collect();
        let freedom = kernel.iter().map(|k| self.mvform(k)).collect();
        Ok((parts, freedom))
    }
}

/// Solves `i_W alpha = i_{sharp~_1(theta)} alpha` for all `alpha` in `S^n`
/// with `W` in `MvForm<a-j, n+1-j>`: a particular solution (free variables
/// set to zero) and the homogeneous freedom.
pub fn solve_extension(s: &Structure, j: usize, theta: &Form) -> Result<(MvForm, Vec<MvForm>)> {
    let sys = PairingSystem::new(s, theta.deg(), j)?;
    let (mut parts, freedom) = sys.solve(s, std::slice::from_ref(theta))?;
    match parts.pop().flatten() {
        Some(w) => Ok((w, freedom)),
        None => Err(Error::NotInSpan(format!(
            "{} is not in S^{}[{j}]",
            render::form(s.chart(), theta),
            theta.deg()
        ))),
    }
}

/// As [`solve_extension`], restricted to values whose vector part is
/// vertical.
pub fn solve_vertical_extension(s: &Structure, j: usize, theta: &Form) -> Result<(MvForm, Vec<MvForm>)> {
    let sys = PairingSystem::new(s, theta.deg(), j)?;
    let base = s.chart().base_mask();
    let (mut parts, freedom) = sys.solve_within(s, std::slice::from_ref(theta), &|(_, v)| v & base == 0)?;
    match parts.pop().flatten() {
        Some(w) => Ok((w, freedom)),
        None => Err(Error::NotInSpan(format!(
            "{} has no vertical-valued extension of degree {j}",
            render::form(s.chart(), theta)
        ))),
    }
}

/// One level `S^a[j]` of the tower.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub a: usize,
    pub j: usize,
    /// Wedge products of `S^1` generators tried as candidates.
    pub candidates: Vec<Form>,
    pub admitted: FormSpan,
    /// Candidates outside the admitted span.
    pub rejected: Vec<Form>,
    /// A solved `sharp~_j` value for each admitted basis element.
    pub values: Vec<MvForm>,
    pub freedom: Vec<MvForm>,
}

impl TowerLevel {
    pub fn table(&self) -> ExtensionTable {
        ExtensionTable {
            j: self.j,
            entries: self
                .admitted
                .basis()
                .iter()
                .cloned()
                .zip(self.values.iter().cloned())
                .collect(),
            freedom: self.freedom.clone(),
        }
    }
}

/// Computes `S^a[j]`: combinations `sum c_T e_T` of wedge products of `S^1`
/// generators for which the pairing system has a solution.
pub fn build_span_tower(s: &Structure, a: usize, j: usize) -> Result<TowerLevel> {
    let n = s.n();
    let sys = PairingSystem::new(s, a, j)?;
    let basis = s.span(1).basis();
    let vals = s.sharp_basis(1)?;
    let nw = sys.cols.len();
    let mut candidates = Vec::new();
    let mut rows = sys.rows.clone();
    for t in subsets(basis.len(), a) {
        let ts: Vec<usize> = crate::exterior::positions(t).collect();
        let e = wedge_all(basis, &ts);
        if e.is_zero() {
            continue;
        }
        let w = sharp1_tilde_wedge(basis, vals, n, &ts);
        let col = nw + candidates.len();
        for (g, alpha) in s.span(n).basis().iter().enumerate() {
            for (k, c) in w.contract_into(alpha)?.terms() {
                rows.entry((g, *k)).or_default().insert(col, -c);
            }
        }
        candidates.push(e);
    }
    let (_, kernel) = solve_columns(nw + candidates.len(), 0, rows.into_values(), true);
    let admitted = Span::new(
        a,
        kernel.iter().map(|v| {
            let mut f = Form::zero(a);
            for (k, c) in v.range(nw..) {
                f = &f + &candidates[*k - nw].scale(c);
            }
            f
        }),
    );
    let rejected = candidates
        .iter()
        .filter(|c| !admitted.contains(c))
        .cloned()
        .collect();
    let (parts, freedom) = sys.solve(s, admitted.basis())?;
    let values = parts
        .into_iter()
        .map(|p| p.ok_or(Error::Inconsistent))
        .collect::<Result<_>>()?;
    Ok(TowerLevel {
        a,
        j,
        candidates,
        admitted,
        rejected,
        values,
        freedom,
    })
}

/// A chosen `sharp~_j` on generators, extended by function-linearity.
#[derive(Clone, Debug)]
pub struct ExtensionTable {
    pub j: usize,
    pub entries: Vec<(Form, MvForm)>,
    /// Homogeneous solutions shared by all entries of one form degree.
    pub freedom: Vec<MvForm>,
}

impl ExtensionTable {
    /// Accepts the given values after checking the defining pairing.
    pub fn from_entries(s: &Structure, j: usize, entries: Vec<(Form, MvForm)>) -> Result<ExtensionTable> {
        let n = s.n();
        for (f, w) in &entries {
            let a = f.deg();
            if a < j || (w.fdeg(), w.vdeg()) != (a - j, n + 1 - j) && !w.is_zero() {
                return Err(Error::Degree(format!(
                    "value for {} must have bidegree ({},{})",
                    render::form(s.chart(), f),
                    a.saturating_sub(j),
                    n + 1 - j
                )));
            }
            let want = sharp1_tilde(s, f)?;
            for g in s.span(n).basis() {
                let lhs = w.contract_into(g)?;
                let rhs = want.contract_into(g)?;
                if lhs.try_add(&-&rhs).map(|d| d.is_zero()) != Ok(true) {
                    return Err(Error::IllDefined(format!(
                        "value of {} fails the pairing against {}: {} vs {}",
                        render::form(s.chart(), f),
                        render::form(s.chart(), g),
                        render::form(s.chart(), &lhs),
                        render::form(s.chart(), &rhs)
                    )));
                }
            }
        }
        let freedom = match entries.first() {
            Some((f, _)) => PairingSystem::new(s, f.deg(), j)?.solve(s, &[])?.1,
            None => Vec::new(),
        };
        Ok(ExtensionTable { j, entries, freedom })
    }

    /// Solves a value for each generator.
    pub fn solve(s: &Structure, j: usize, gens: &[Form]) -> Result<ExtensionTable> {
        let mut entries = Vec::new();
        let mut freedom = Vec::new();
        for g in gens {
            let (w, f) = solve_extension(s, j, g)?;
            if freedom.is_empty() {
                freedom = f;
            }
            entries.push((g.clone(), w));
        }
        Ok(ExtensionTable { j, entries, freedom })
    }

    /// Copy with `scale * freedom[k]` added to entry `e`.
    pub fn shifted(&self, e: usize, k: usize, scale: &Scalar) -> Result<ExtensionTable> {
        let mut out = self.clone();
        let f = self
            .freedom
            .get(k)
            .ok_or_else(|| Error::Input(format!("no freedom direction {k}")))?;
        let entry = out
            .entries
            .get_mut(e)
            .ok_or_else(|| Error::Input(format!("no entry {e}")))?;
        entry.1 = entry.1.try_add(&f.scale(scale))?;
        Ok(out)
    }

    /// Value on an arbitrary function combination of the generators.
    pub fn value(&self, s: &Structure, theta: &Form) -> Result<MvForm> {
        let n = s.n();
        let a = theta.deg();
        let zero = MvForm::zero(a.saturating_sub(self.j), n + 1 - self.j);
        if theta.is_zero() {
            return Ok(zero);
        }
        let gens: Vec<usize> = (0..self.entries.len())
            .filter(|k| self.entries[*k].0.deg() == a)
            .collect();
        let mut rows: BTreeMap<Idx, Row<usize>> = BTreeMap::new();
        for (c, k) in gens.iter().enumerate() {
            for (i, v) in self.entries[*k].0.terms() {
                rows.entry(*i).or_default().insert(c, v.clone());
            }
        }
        for (i, v) in theta.terms() {
            rows.entry(*i).or_default().insert(gens.len(), v.clone());
        }
        let (parts, _) = solve_columns(gens.len(), 1, rows.into_values(), false);
        let sol = parts.into_iter().next().flatten().ok_or_else(|| {
            Error::NotInSpan(format!(
                "{} is not generated by the table",
                render::form(s.chart(), theta)
            ))
        })?;
        let mut w = zero;
        for (c, v) in sol {
            w = w.try_add(&self.entries[gens[c]].1.scale(&v))?;
        }
        Ok(w)
    }

    /// Every value has vertical vector part.
    pub fn is_vertical(&self, chart: &Chart) -> bool {
        self.entries
            .iter()
            .all(|(_, w)| w.vector_keys().iter().all(|j| j & chart.base_mask() == 0))
    }

    /// `extend <form> => <mvform>` lines.
    pub fn render(&self, chart: &Chart) -> String {
        self.entries
            .iter()
            .map(|(f, w)| {
                format!(
                    "extend {} => {}\n",
                    render::form(chart, f),
                    render::mvform(chart, w)
                )
            })
            .collect()
    }
}

/// `{alpha, theta} = (-1)^(n-1-deg theta) i_{sharp~_j(d theta)} d alpha`.
pub fn bracket_extj(s: &Structure, table: &ExtensionTable, alpha: &Form, theta: &Form) -> Result<Form> {
    let n = s.n();
    let j = table.j;
    if alpha.deg() + j < n || !s.is_hamiltonian_form(alpha) {
        return Err(Error::NotHamiltonian(format!(
            "{} is not a Hamiltonian form of degree at least {}",
            render::form(s.chart(), alpha),
            n - j
        )));
    }
    let dt = s.chart().d(theta);
    let out_deg = theta.deg() + alpha.deg() + 1 - n;
    if dt.is_zero() {
        return Ok(Form::zero(out_deg));
    }
    let w = table.value(s, &dt)?;
    let r = w.contract_into(&s.chart().d(alpha))?;
    Ok(r.scale(&sign((n_plus(s) + theta.deg()) % 2 == 1)))
}

/// `sharp~_i = C(j-1, j-i)^{-1} sharp~_j ^ 1_{j-i}` on every entry, checked
/// against the defining pairing at level `i`.
pub fn compat_lower(s: &Structure, table: &ExtensionTable, i: usize) -> Result<(ExtensionTable, Report)> {
    let j = table.j;
    if i == 0 || i > j {
        return Err(Error::Degree(format!("cannot lower from {j} to {i}")));
    }
    let n = s.n();
    let m = s.chart().dim();
    let c = Scalar::from_q(binom((j - 1) as i64, (j - i) as i64));
    let inv = c.recip().ok_or(Error::Inconsistent)?;
    let id = MvForm::identity(m, j - i);
    let mut rep = Report::new();
    let mut entries = Vec::new();
    for (k, (f, w)) in table.entries.iter().enumerate() {
        let v = w.wedge(&id).scale(&inv);
        let mut ok_a = true;
        if n + 1 - i <= n {
            for g in s.span(n + 1 - i).basis() {
                let lhs = v.contract_into(g)?;
                let rhs = w.contract_into(g)?.scale(&inv);
                ok_a &= lhs.try_add(&-&rhs).map(|d| d.is_zero()).unwrap_or(false);
            }
        }
        rep.push(
            format!("compat-ladder[{k}]"),
            ok_a,
            format!("i_(sharp~_{i}) = C({},{})^-1 i_(sharp~_{j}) on S^{}", j - 1, j - i, n + 1 - i),
        );
        let pairing = pairing_defect(s, f, &v)?;
        rep.push(
            format!("compat-pairing[{k}]"),
            pairing.is_none(),
            match &pairing {
                None => format!("{} paired against S^n", render::form(s.chart(), f)),
                Some(g) => format!("fails against {}", render::form(s.chart(), g)),
            },
        );
        entries.push((f.clone(), v));
    }
    Ok((
        ExtensionTable {
            j: i,
            entries,
            freedom: Vec::new(),
        },
        rep,
    ))
}

fn show(chart: &Chart, f: &Form) -> String {
    render::form(chart, f)
}

fn eq_forms(a: &Form, b: &Form) -> bool {
    a.try_add(&-b).map(|d| d.is_zero()).unwrap_or(false)
}

fn push_eq(rep: &mut Report, chart: &Chart, id: String, r: Result<(Form, Form)>) {
    match r {
        Ok((l, rr)) if eq_forms(&l, &rr) => rep.push(id, true, show(chart, &l)),
        Ok((l, rr)) => rep.push(id, false, format!("{} != {}", show(chart, &l), show(chart, &rr))),
        Err(e) => rep.push(id, false, e.to_string()),
    }
}

/// Identities of the first extended bracket on sampled forms, plus the
/// pairing and compatibility of a table when given.
pub fn check_extension_properties(
    s: &Structure,
    table: Option<&ExtensionTable>,
    alphas: &[Form],
    thetas: &[Form],
) -> Report {
    let chart = s.chart();
    let n = s.n();
    let mut rep = Report::new();
    let br = |a: &Form, t: &Form| bracket_ext1(s, a, t);
    for (ti, t) in thetas.iter().enumerate() {
        let dt = chart.d(t);
        for (ai, a) in alphas.iter().enumerate() {
            let tag = format!("[a{ai},t{ti}]");
            let closure = br(a, t).map(|b| {
                let db = chart.d(&b);
                db.is_zero() || wedge_decompose(s, &db).is_ok()
            });
            rep.push(
                format!("closure{tag}"),
                closure == Ok(true),
                "d{a, theta} lies in the wedge span of S^1",
            );
            let lie = (|| -> Result<bool> {
                let b = br(a, t)?;
                let db = chart.d(&b);
                if dt.is_zero() {
                    return Ok(db.is_zero());
                }
                let lhs = if db.is_zero() {
                    MvForm::zero(t.deg(), n)
                } else {
                    sharp1_tilde(s, &db)?
                };
                let x = s.sharp(n, &chart.d(a))?;
                let rhs = -&chart.lie_mvform(&x, &sharp1_tilde(s, &dt)?)?;
                Ok(equiv_mod_kn(s, &lhs, &rhs))
            })();
            rep.push(
                format!("sharp-of-bracket{tag}"),
                lie == Ok(true),
                "sharp~_1(d{a, theta}) = -L_{sharp_n(d a)} sharp~_1(d theta) mod K_n",
            );
            for (bi, b) in alphas.iter().enumerate().skip(ai) {
                let jac = (|| -> Result<Form> {
                    let ab = s.bracket(a, b)?;
                    let j1 = br(a, &br(b, t)?)?;
                    let j2 = -&br(&ab, t)?;
                    let j3 = -&br(b, &br(a, t)?)?;
                    j1.try_add(&j2)?.try_add(&j3)
                })();
                let id = format!("jacobi[a{ai},a{bi},t{ti}]");
                match jac {
                    Ok(j) => {
                        let closed = chart.d(&j).is_zero();
                        let prim = if j.is_zero() || j.deg() == 0 {
                            "zero".to_string()
                        } else {
                            match chart.poincare_primitive(&j) {
                                Ok(p) if eq_forms(&chart.d(&p), &j) => "primitive verified".into(),
                                Ok(_) => "primitive mismatch".into(),
                                Err(e) => e.to_string(),
                            }
                        };
                        rep.push(id, closed, format!("jacobiator closed, {prim}"));
                    }
                    Err(e) => rep.push(id, false, e.to_string()),
                }
            }
            // both identities below come out with a plus sign for the
            // anti-derivation form of sharp~_1
            if let Some(u) = symmetry_of(chart, t) {
                let r = (|| {
                    let l = br(a, &t.contract_coord(u))?;
                    let r = br(a, t)?.contract_coord(u);
                    Ok((l, r))
                })();
                push_eq(&mut rep, chart, format!("invariance{tag}"), r);
            }
        }
        if t.deg() >= 1 && !t.is_zero() {
            if let Ok(w) = sharp1_tilde(s, t) {
                let mut ok = true;
                for k in 0..chart.dim() {
                    let it = t.contract_coord(k);
                    let lhs = if it.is_zero() || it.deg() == 0 {
                        MvForm::zero(t.deg().saturating_sub(2), n)
                    } else {
                        match sharp1_tilde(s, &it) {
                            Ok(v) => v,
                            Err(_) => {
                                ok = false;
                                continue;
                            }
                        }
                    };
                    let rhs = w.contract_form_slot(k);
                    if it.deg() > 0 && !equiv_mod_kn(s, &lhs, &rhs) {
                        ok = false;
                    }
                }
                rep.push(
                    format!("contraction[t{ti}]"),
                    ok,
                    "sharp~_1(i_X theta) = i_X sharp~_1(theta)",
                );
            }
        }
    }
    for (k, (t1, t2)) in thetas.iter().zip(thetas.iter().skip(1)).enumerate() {
        let prod = t1.wedge(&chart.d(t2));
        if prod.is_zero() {
            continue;
        }
        for (ai, a) in alphas.iter().enumerate() {
            let r = (|| {
                let l = bracket_ext1(s, a, &prod)?;
                let r1 = bracket_ext1(s, a, t1)?.wedge(&chart.d(t2));
                let r2 = chart
                    .d(t1)
                    .wedge(&bracket_ext1(s, a, t2)?)
                    .scale(&sign(t1.deg() % 2 == 0));
                Ok((l, r1.try_add(&r2)?))
            })();
            push_eq(&mut rep, chart, format!("leibniz[a{ai},t{k}]"), r);
        }
    }
    if let Some(tab) = table {
        for (k, (f, w)) in tab.entries.iter().enumerate() {
            let r = sharp1_tilde(s, f).map(|want| {
                let ok = s.span(n).basis().iter().all(|g| {
                    match (w.contract_into(g), want.contract_into(g)) {
                        (Ok(x), Ok(y)) => eq_forms(&x, &y),
                        _ => false,
                    }
                });
                let lowered = if tab.j > 1 {
                    equiv_mod_kn(s, &w.wedge(&MvForm::identity(chart.dim(), tab.j - 1)), &want)
                } else {
                    equiv_mod_kn(s, w, &want)
                };
                (ok, lowered)
            });
            match r {
                Ok((p, c)) => {
                    rep.push(
                        format!("table-pairing[{k}]"),
                        p,
                        format!("{} => {}", show(chart, f), render::mvform(chart, w)),
                    );
                    rep.push(
                        format!("table-compat[{k}]"),
                        c,
                        "sharp~_1 = sharp~_j ^ 1_(j-1) mod K_n",
                    );
                }
                Err(e) => rep.push(format!("table-pairing[{k}]"), false, e.to_string()),
            }
        }
    }
    rep
}

/// A coordinate `u` with `L_{d_u} theta = 0` and `i_{d_u} theta != 0`.
fn symmetry_of(chart: &Chart, t: &Form) -> Option<usize> {
    (0..chart.dim()).find(|&u| {
        let name = chart.name(u);
        !t.contract_coord(u).is_zero() && t.terms().all(|(_, c)| !c.depends_on(name))
    })
}
