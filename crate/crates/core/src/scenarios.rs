//! Built-in structures: the extended and reduced canonical multisymplectic
//! structures and the Yang–Mills constraint submanifold.

use crate::chart::Chart;
use crate::dirac::Structure;
use crate::error::{Error, Result};
use crate::exterior::{bit, Form, MultiVector, MvForm};
use crate::extensions::{solve_vertical_extension, ExtensionTable};
use crate::maps::{pullback, pushforward, CoordMap};
use crate::scalar::Scalar;

/// Lie algebra data for the Yang–Mills scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Algebra {
    /// `k` commuting generators.
    Abelian(usize),
    /// `su(2)` with structure constants `eps_{ijk}`.
    Su2,
}

impl Algebra {
    pub fn dim(&self) -> usize {
        match self {
            Algebra::Abelian(k) => *k,
            Algebra::Su2 => 3,
        }
    }

    /// `f^i_{jk}` with 0-based indices.
    pub fn f(&self, i: usize, j: usize, k: usize) -> i64 {
        match self {
            Algebra::Abelian(_) => 0,
            Algebra::Su2 => levi_civita(i, j, k),
        }
    }

    /// Antisymmetry in the lower indices and the Jacobi identity.
    pub fn check(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if self.f(i, j, k) != -self.f(i, k, j) {
                        return Err(Error::Input("structure constants are not antisymmetric".into()));
                    }
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let s: i64 = (0..d)
                            .map(|l| {
                                self.f(l, a, b) * self.f(e, l, c)
                                    + self.f(l, b, c) * self.f(e, l, a)
                                    + self.f(l, c, a) * self.f(e, l, b)
                            })
                            .sum();
                        if s != 0 {
                            return Err(Error::Input("structure constants violate Jacobi".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

#[derive(Clone, Debug)]
pub struct YangMills {
    pub algebra: Algebra,
    /// Diagonal of the flat metric, entries `+-1`.
    pub signature: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub structure: Structure,
    /// Distinguished Hamiltonian `n`-form.
    pub hamiltonian: Form,
    /// Hamiltonian `(n-1)`-forms generating the field equations.
    pub generators: Vec<Form>,
    pub yang_mills: Option<YangMills>,
}

impl Scenario {
    pub fn chart(&self) -> &Chart {
        self.structure.chart()
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }
}

pub fn base_name(mu: usize) -> String {
    format!("x{mu}")
}

pub fn field_name(i: usize) -> String {
    format!("y{i}")
}

/// `p^mu_i`.
pub fn momentum_name(mu: usize, i: usize) -> String {
    format!("p{mu}{i}")
}

/// `A^i_mu`.
pub fn gauge_name(i: usize, mu: usize) -> String {
    format!("A{i}{mu}")
}

/// Reduced momentum `p^nu` of the field `A^i_mu`.
pub fn gauge_momentum_name(i: usize, mu: usize, nu: usize) -> String {
    format!("p{i}{mu}{nu}")
}

/// `pt^{mu nu}_i` for `mu < nu` on the constraint submanifold.
pub fn constrained_momentum_name(i: usize, mu: usize, nu: usize) -> String {
    format!("pt{i}{mu}{nu}")
}

fn check_params(n: usize, k: usize) -> Result<()> {
    if !(1..=9).contains(&n) || !(1..=9).contains(&k) {
        return Err(Error::Input(format!(
            "unsupported parameters n = {n}, fields = {k} (both must be in 1..=9)"
        )));
    }
    Ok(())
}

/// Chart `x^mu, fields, p, p^mu_field` and the Liouville form.
fn liouville(n: usize, fields: &[String], mom: &dyn Fn(usize, usize) -> String) -> Result<(Chart, Form)> {
    let base: Vec<String> = (1..=n).map(base_name).collect();
    let mut fiber: Vec<String> = fields.to_vec();
    fiber.push("p".into());
    for f in 1..=fields.len() {
        for mu in 1..=n {
            fiber.push(mom(mu, f));
        }
    }
    let chart = Chart::new(&base, &fiber)?;
    let mut theta = chart.volume().scale(&chart.coord("p")?);
    for (f, y) in fields.iter().enumerate() {
        for mu in 1..=n {
            let t = chart.dx(y)?.wedge(&chart.dxv(&[mu])?);
            theta = &theta + &t.scale(&chart.coord(&mom(mu, f + 1))?);
        }
    }
    Ok((chart, theta))
}

/// `sharp_n = flat^{-1}` for the multisymplectic form `-d theta`.
fn canonical_structure(chart: Chart, theta: &Form) -> Result<Structure> {
    let omega = -&chart.d(theta);
    let table = (0..chart.dim())
        .map(|u| (omega.contract_coord(u), MultiVector::basis(bit(u))))
        .filter(|(f, _)| !f.is_zero())
        .collect();
    Structure::new(chart, table)
}

/// `H d^n x - p^mu_i dy^i ^ d^{n-1}x_mu` with a generic `H`.
fn canonical_hamiltonian(chart: &Chart, n: usize, k: usize) -> Result<Form> {
    let mut args: Vec<String> = (1..=n).map(base_name).collect();
    args.extend((1..=k).map(field_name));
    for i in 1..=k {
        for mu in 1..=n {
            args.push(momentum_name(mu, i));
        }
    }
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let mut h = chart.volume().scale(&Scalar::func("H", &args));
    for i in 1..=k {
        for mu in 1..=n {
            let t = chart.dx(&field_name(i))?.wedge(&chart.dxv(&[mu])?);
            h = &h - &t.scale(&chart.coord(&momentum_name(mu, i))?);
        }
    }
    Ok(h)
}

/// `y^i d^{n-1}x_mu` and `sum_mu p^mu_i d^{n-1}x_mu`.
fn canonical_generators(chart: &Chart, n: usize, k: usize) -> Result<Vec<Form>> {
    let mut out = Vec::new();
    for i in 1..=k {
        for mu in 1..=n {
            out.push(chart.dxv(&[mu])?.scale(&chart.coord(&field_name(i))?));
        }
    }
    for i in 1..=k {
        let mut f = Form::zero(n - 1);
        for mu in 1..=n {
            f = &f + &chart.dxv(&[mu])?.scale(&chart.coord(&momentum_name(mu, i))?);
        }
        out.push(f);
    }
    Ok(out)
}

fn fields(k: usize) -> Vec<String> {
    (1..=k).map(field_name).collect()
}

pub fn extended_canonical(n: usize, k: usize) -> Result<Scenario> {
    check_params(n, k)?;
    let (chart, theta) = liouville(n, &fields(k), &momentum_name)?;
    let structure = canonical_structure(chart, &theta)?;
    let hamiltonian = canonical_hamiltonian(structure.chart(), n, k)?;
    let generators = canonical_generators(structure.chart(), n, k)?;
    Ok(Scenario {
        name: "extended-canonical".into(),
        structure,
        hamiltonian,
        generators,
        yang_mills: None,
    })
}

pub fn reduced_canonical(n: usize, k: usize) -> Result<Scenario> {
    let ext = extended_canonical(n, k)?;
    let structure = pushforward(&ext.structure, &["p"])?;
    let hamiltonian = canonical_hamiltonian(structure.chart(), n, k)?;
    let generators = canonical_generators(structure.chart(), n, k)?;
    Ok(Scenario {
        name: "reduced-canonical".into(),
        structure,
        hamiltonian,
        generators,
        yang_mills: None,
    })
}

/// The reduced structure with gauge fields `A^i_mu` as fields, before the
/// constraint.
pub fn yang_mills_ambient(n: usize, dim_g: usize) -> Result<Structure> {
    check_params(n, dim_g)?;
    let mut names = Vec::new();
    for i in 1..=dim_g {
        for mu in 1..=n {
            names.push(gauge_name(i, mu));
        }
    }
    let mom = |nu: usize, f: usize| {
        let (i, mu) = ((f - 1) / n + 1, (f - 1) % n + 1);
        gauge_momentum_name(i, mu, nu)
    };
    let (chart, theta) = liouville(n, &names, &mom)?;
    let ext = canonical_structure(chart, &theta)?;
    pushforward(&ext, &["p"])
}

/// Chart of the constraint submanifold `p^{mu nu}_i + p^{nu mu}_i = 0`.
pub fn yang_mills_chart(n: usize, dim_g: usize) -> Result<Chart> {
    let base: Vec<String> = (1..=n).map(base_name).collect();
    let mut fiber = Vec::new();
    for i in 1..=dim_g {
        for mu in 1..=n {
            fiber.push(gauge_name(i, mu));
        }
    }
    for i in 1..=dim_g {
        for mu in 1..=n {
            for nu in mu + 1..=n {
                fiber.push(constrained_momentum_name(i, mu, nu));
            }
        }
    }
    Chart::new(&base, &fiber)
}

/// Antisymmetric `pt^{mu nu}_i` as a scalar on the constraint chart.
pub fn pt(chart: &Chart, i: usize, mu: usize, nu: usize) -> Scalar {
    use std::cmp::Ordering::*;
    match mu.cmp(&nu) {
        Less => chart.coord(&constrained_momentum_name(i, mu, nu)).expect("chart coordinate"),
        Greater => -&chart.coord(&constrained_momentum_name(i, nu, mu)).expect("chart coordinate"),
        Equal => Scalar::zero(),
    }
}

/// The embedding of the constraint submanifold into the ambient chart.
pub fn yang_mills_embedding(ambient: &Chart, n: usize, dim_g: usize) -> Result<CoordMap> {
    let sub = yang_mills_chart(n, dim_g)?;
    let mut images = Vec::new();
    for name in ambient.names() {
        let img = if sub.index_of(name).is_some() {
            sub.coord(name)?
        } else {
            let d: Vec<usize> = name[1..]
                .chars()
                .map(|c| c.to_digit(10).map(|v| v as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Chart(format!("unexpected coordinate `{name}`")))?;
            if d.len() != 3 {
                return Err(Error::Chart(format!("unexpected coordinate `{name}`")));
            }
            pt(&sub, d[0], d[1], d[2])
        };
        images.push(img);
    }
    CoordMap::new(sub, ambient.clone(), images)
}

/// `-1/4 eta eta pt^2 + 1/2 f pt A A` in `d^n x`, minus `pt dA ^ d^{n-1}x`.
pub fn yang_mills_hamiltonian(chart: &Chart, ym: &YangMills) -> Result<Form> {
    let n = chart.n();
    let g = &ym.algebra;
    let mut h = Scalar::zero();
    let mut kinetic = Form::zero(n);
    for i in 1..=g.dim() {
        for mu in 1..=n {
            for nu in 1..=n {
                let p = pt(chart, i, mu, nu);
                if p.is_zero() {
                    continue;
                }
                let eta = ym.signature[mu - 1] * ym.signature[nu - 1];
                h = &h + &(&p * &p).scale_q(&crate::scalar::qf(-eta, 4));
                for j in 1..=g.dim() {
                    for k in 1..=g.dim() {
                        let f = g.f(i - 1, j - 1, k - 1);
                        if f == 0 {
                            continue;
                        }
                        let a = &chart.coord(&gauge_name(j, mu))? * &chart.coord(&gauge_name(k, nu))?;
                        h = &h + &(&p * &a).scale_q(&crate::scalar::qf(f, 2));
                    }
                }
                let t = chart.dx(&gauge_name(i, mu))?.wedge(&chart.dxv(&[nu])?);
                kinetic = &kinetic + &t.scale(&p);
            }
        }
    }
    Ok(&chart.volume().scale(&h) - &kinetic)
}

/// `A^i_mu d^{n-1}x_nu - A^i_nu d^{n-1}x_mu` and `sum_mu pt^{mu nu}_i d^{n-1}x_mu`.
fn yang_mills_generators(chart: &Chart, dim_g: usize) -> Result<Vec<Form>> {
    let n = chart.n();
    let mut out = Vec::new();
    for i in 1..=dim_g {
        for mu in 1..=n {
            for nu in mu + 1..=n {
                let a = chart.dxv(&[nu])?.scale(&chart.coord(&gauge_name(i, mu))?);
                let b = chart.dxv(&[mu])?.scale(&chart.coord(&gauge_name(i, nu))?);
                out.push(&a - &b);
            }
        }
    }
    for i in 1..=dim_g {
        for nu in 1..=n {
            let mut f = Form::zero(n - 1);
            for mu in 1..=n {
                f = &f + &chart.dxv(&[mu])?.scale(&pt(chart, i, mu, nu));
            }
            out.push(f);
        }
    }
    Ok(out)
}

pub fn yang_mills(n: usize, algebra: Algebra, signature: Option<Vec<i64>>) -> Result<Scenario> {
    algebra.check()?;
    let signature = signature.unwrap_or_else(|| vec![1; n]);
    if signature.len() != n || signature.iter().any(|s| s.abs() != 1) {
        return Err(Error::Input(format!(
            "signature must list {n} entries of +1 or -1"
        )));
    }
    if n < 2 {
        return Err(Error::Input("Yang-Mills needs n >= 2".into()));
    }
    let dim_g = algebra.dim();
    let ambient = yang_mills_ambient(n, dim_g)?;
    let emb = yang_mills_embedding(ambient.chart(), n, dim_g)?;
    let structure = pullback(&ambient, &emb)?.structure;
    let ym = YangMills { algebra, signature };
    let hamiltonian = yang_mills_hamiltonian(structure.chart(), &ym)?;
    let generators = yang_mills_generators(structure.chart(), dim_g)?;
    Ok(Scenario {
        name: "yang-mills".into(),
        structure,
        hamiltonian,
        generators,
        yang_mills: Some(ym),
    })
}

/// Dispatch by name as used on the command line.
pub fn scenario(
    name: &str,
    n: usize,
    fields: usize,
    algebra: Option<&str>,
    signature: Option<Vec<i64>>,
) -> Result<Scenario> {
    match name {
        "extended-canonical" => extended_canonical(n, fields),
        "reduced-canonical" => reduced_canonical(n, fields),
        "yang-mills" => {
            let alg = match algebra.unwrap_or("abelian") {
                "su2" => Algebra::Su2,
                "abelian" => Algebra::Abelian(fields),
                other => return Err(Error::Input(format!("unknown algebra `{other}`"))),
            };
            yang_mills(n, alg, signature)
        }
        other => Err(Error::Input(format!("unknown scenario `{other}`"))),
    }
}

/// The extension table used for dynamics on a scenario: the canonical table
/// on the reduced chart, a vertical solve on `dH` for Yang–Mills, none for
/// the extended chart (it is not fibered).
pub fn scenario_extension_table(sc: &Scenario) -> Result<Option<ExtensionTable>> {
    let s = &sc.structure;
    let n = sc.n();
    if sc.yang_mills.is_some() {
        let d = s.chart().d(&sc.hamiltonian);
        let (w, _) = solve_vertical_extension(s, n, &d)?;
        return ExtensionTable::from_entries(s, n, vec![(d, w)]).map(Some);
    }
    if sc.name == "reduced-canonical" {
        let k = s.chart().fiber_names().len() / (n + 1);
        return canonical_extension_table(sc, k).map(Some);
    }
    Ok(None)
}

/// The vertical-valued `sharp~_n` on the generators of `S^{n+1}[n]` of the
/// reduced canonical structure:
/// `dy^j ^ d^n x => 1/n sum dx^mu (x) d/dp^mu_j`,
/// `dp^a_j ^ d^n x => -dx^a (x) d/dy^j`,
/// `sum_mu dp^mu_i ^ dy^j ^ d^{n-1}x_mu => -(dy^j (x) d/dy^i + sum_mu dp^mu_i (x) d/dp^mu_j)`.
pub fn canonical_extension_table(sc: &Scenario, k: usize) -> Result<ExtensionTable> {
    let s = &sc.structure;
    let c = s.chart();
    let n = c.n();
    let vol = c.volume();
    let inv_n = Scalar::ratio(1, n as i64);
    let mut entries = Vec::new();
    for j in 1..=k {
        let mut w = MvForm::zero(1, 1);
        for mu in 1..=n {
            let t = c.dx(&base_name(mu))?.tensor(&c.partial(&momentum_name(mu, j))?);
            w = &w + &t.scale(&inv_n);
        }
        entries.push((c.dx(&field_name(j))?.wedge(&vol), w));
    }
    for j in 1..=k {
        for al in 1..=n {
            let w = -&c.dx(&base_name(al))?.tensor(&c.partial(&field_name(j))?);
            entries.push((c.dx(&momentum_name(al, j))?.wedge(&vol), w));
        }
    }
    for i in 1..=k {
        for j in 1..=k {
            let mut f = Form::zero(n + 1);
            let mut w = c.dx(&field_name(j))?.tensor(&c.partial(&field_name(i))?);
            for mu in 1..=n {
                let dp = c.dx(&momentum_name(mu, i))?;
                f = &f + &dp.wedge(&c.dx(&field_name(j))?).wedge(&c.dxv(&[mu])?);
                w = &w + &dp.tensor(&c.partial(&momentum_name(mu, j))?);
            }
            entries.push((f, -&w));
        }
    }
    ExtensionTable::from_entries(s, n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::VerifyOptions;

    #[test]
    fn reduced_table_n2() {
        let s = reduced_canonical(2, 1).unwrap();
        let st = &s.structure;
        let c = st.chart();
        let vol = c.volume();
        assert!(st.sharp(2, &vol).unwrap().is_zero() || st.in_k(1, &st.sharp(2, &vol).unwrap()));
        for mu in 1..=2 {
            let f = c.dx("y1").unwrap().wedge(&c.dxv(&[mu]).unwrap());
            let v = st.sharp(2, &f).unwrap();
            let want = -&c.partial(&momentum_name(mu, 1)).unwrap();
            assert!(st.same_coset(1, &v, &want));
        }
        assert!(st.verify_axioms(&VerifyOptions::default()).all_pass());
        assert!(st.verify_fibered().all_pass());
    }

    #[test]
    fn extended_is_dirac_but_not_fibered() {
        let s = extended_canonical(2, 1).unwrap();
        assert!(s.structure.verify_axioms(&VerifyOptions::default()).all_pass());
        assert!(!s.structure.verify_fibered().all_pass());
    }

    #[test]
    fn su2_constants() {
        assert!(Algebra::Su2.check().is_ok());
    }
}
