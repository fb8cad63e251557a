//! Coordinate maps between charts and the induced pushforward and pullback
//! of Dirac structures.

use std::collections::BTreeMap;

use crate::chart::Chart;
use crate::dirac::Structure;
use crate::error::{Error, Result};
use crate::exterior::{bit, positions, Form, MultiVector};
use crate::linsolve::{solve_columns, Row};
use crate::render;
use crate::report::Report;
use crate::scalar::{Scalar, Var};
use crate::span::annihilator;

/// `f: source -> target`, given by the images of the target coordinates as
/// functions on the source.
#[derive(Clone, Debug)]
pub struct CoordMap {
    source: Chart,
    target: Chart,
    images: Vec<Scalar>,
}

impl CoordMap {
    pub fn new(source: Chart, target: Chart, images: Vec<Scalar>) -> Result<CoordMap> {
        if images.len() != target.dim() {
            return Err(Error::Chart(format!(
                "{} images for a target of dimension {}",
                images.len(),
                target.dim()
            )));
        }
        for s in &images {
            for v in s.vars() {
                if let Var::Coord(c) = &v {
                    if source.index_of(c).is_none() {
                        return Err(Error::Chart(format!("image uses unknown coordinate `{c}`")));
                    }
                }
            }
        }
        Ok(CoordMap {
            source,
            target,
            images,
        })
    }

    /// The projection forgetting the listed fiber coordinates.
    pub fn projection(source: &Chart, dropped: &[&str]) -> Result<CoordMap> {
        for d in dropped {
            let k = source.idx(d)?;
            if source.is_base(k) {
                return Err(Error::Chart(format!("cannot drop base coordinate `{d}`")));
            }
        }
        let fiber: Vec<&str> = source
            .fiber_names()
            .into_iter()
            .filter(|c| !dropped.contains(c))
            .collect();
        let target = Chart::new(&source.base_names(), &fiber)?;
        let images = target.names().map(Scalar::coord).collect();
        CoordMap::new(source.clone(), target, images)
    }

    pub fn identity(chart: &Chart) -> CoordMap {
        let images = chart.names().map(Scalar::coord).collect();
        CoordMap {
            source: chart.clone(),
            target: chart.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn images(&self) -> &[Scalar] {
        &self.images
    }

    /// Composes a target scalar with the map.
    pub fn pull_scalar(&self, s: &Scalar) -> Scalar {
        s.subs(&|v| match v {
            Var::Coord(c) => self.target.index_of(c).map(|k| self.images[k].clone()),
            Var::Func(_) => None,
        })
    }

    pub fn pull_form(&self, a: &Form) -> Form {
        let dimg: Vec<Form> = self
            .images
            .iter()
            .map(|s| self.source.d_scalar(s))
            .collect();
        let mut out = Form::zero(a.deg());
        for (i, c) in a.terms() {
            let mut t = Form::scalar(self.pull_scalar(c));
            for k in positions(*i) {
                t = t.wedge(&dimg[k]);
                if t.is_zero() {
                    break;
                }
            }
            if !t.is_zero() {
                out = &out + &t;
            }
        }
        out
    }

    /// Image of a coordinate vector field of the source.
    fn push_basis(&self, k: usize) -> MultiVector {
        let name = self.source.name(k);
        let mut v = MultiVector::zero(1);
        for (u, img) in self.images.iter().enumerate() {
            let c = img.diff(name);
            if !c.is_zero() {
                v.add_term(bit(u), c);
            }
        }
        v
    }

    /// Pushes a multivector; coefficients remain functions on the source.
    pub fn push(&self, x: &MultiVector) -> MultiVector {
        let mut out = MultiVector::zero(x.deg());
        for (j, c) in x.terms() {
            let mut t = MultiVector::scalar(c.clone());
            for k in positions(*j) {
                t = t.wedge(&self.push_basis(k));
                if t.is_zero() {
                    break;
                }
            }
            if !t.is_zero() {
                out = &out + &t;
            }
        }
        out
    }
}

fn independent_of(s: &Scalar, dropped: &[&str]) -> bool {
    dropped.iter().all(|d| !s.depends_on(d))
}

/// Pushforward along a fiber projection. `S~^n` consists of the forms whose
/// pullback lies in `S^n`; values are the projected sharp values.
pub fn pushforward(s: &Structure, dropped: &[&str]) -> Result<Structure> {
    let map = CoordMap::projection(s.chart(), dropped)?;
    let src = s.chart();
    let n = s.n();
    let mut dmask = 0;
    for d in dropped {
        dmask |= bit(src.idx(d)?);
    }
    let basis = s.span(n).basis();
    let values = s.sharp_basis(n)?;
    let mut rows: BTreeMap<u64, Row<usize>> = BTreeMap::new();
    for (r, b) in basis.iter().enumerate() {
        for (i, c) in b.terms() {
            if i & dmask != 0 {
                rows.entry(*i).or_default().insert(r, c.clone());
            }
        }
    }
    let (_, kernel) = solve_columns(basis.len(), 0, rows.into_values(), true);
    let tgt = map.target();
    let reindex = |i: u64| -> u64 {
        positions(i)
            .map(|k| bit(tgt.idx(src.name(k)).expect("kept coordinate")))
            .fold(0, |a, b| a | b)
    };
    let mut table = Vec::new();
    for h in kernel {
        let mut f = Form::zero(n);
        let mut v = MultiVector::zero(1);
        for (r, c) in &h {
            f = &f + &basis[*r].scale(c);
            v = &v + &values[*r].scale(c);
        }
        let pushed = map.push(&v);
        for (_, c) in f.terms().chain(pushed.terms()) {
            if !independent_of(c, dropped) {
                return Err(Error::MapCondition(format!(
                    "generator {} with value {} depends on a dropped coordinate",
                    render::form(src, &f),
                    render::multivector(src, &v)
                )));
            }
        }
        let f_t = Form::from_terms(n, f.terms().map(|(i, c)| (reindex(*i), c.clone())));
        table.push((f_t, pushed));
    }
    let out = Structure::new(tgt.clone(), table)?;
    for a in 1..=n {
        out.sharp_basis(a)?;
    }
    Ok(out)
}

/// Result of pulling a structure back along an embedding.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub structure: Structure,
    /// Ambient `S^n` forms whose sharp value is tangent, with coefficients
    /// restricted to the submanifold.
    pub tangent_forms: Vec<Form>,
}

/// Pullback along an embedding `f: N -> M`. Tangent forms solve
/// `sum h_r sharp(b_r) = f_* W + kappa` with `kappa` in `K_1`.
pub fn pullback(s: &Structure, f: &CoordMap) -> Result<Pullback> {
    if f.target().names().ne(s.chart().names()) || f.target().n() != s.n() {
        return Err(Error::Chart("map target is not the structure's chart".into()));
    }
    let n = s.n();
    let amb = s.chart();
    let sub = f.source();
    let basis = s.span(n).basis();
    let values = s.sharp_basis(n)?;
    let k1 = annihilator(s.span(1), amb.dim(), 1);
    let nr = basis.len();
    let nw = sub.dim();
    let nk = k1.rank();
    let restrict = |v: &MultiVector| v.map_coeffs(&|c| f.pull_scalar(c));
    let mut rows: BTreeMap<u64, Row<usize>> = BTreeMap::new();
    let mut put = |col: usize, v: &MultiVector, neg: bool| {
        for (j, c) in v.terms() {
            rows.entry(*j)
                .or_default()
                .insert(col, if neg { -c } else { c.clone() });
        }
    };
    for (r, v) in values.iter().enumerate() {
        put(r, &restrict(v), false);
    }
    for l in 0..nw {
        put(nr + l, &f.push_basis(l), true);
    }
    for (t, g) in k1.basis().iter().enumerate() {
        put(nr + nw + t, &restrict(g), true);
    }
    let (_, kernel) = solve_columns(nr + nw + nk, 0, rows.into_values(), true);
    let mut table = Vec::new();
    let mut tangent_forms = Vec::new();
    for h in kernel {
        let mut alpha = Form::zero(n);
        let mut w = MultiVector::zero(1);
        for (k, c) in &h {
            if *k < nr {
                alpha = &alpha + &basis[*k].map_coeffs(&|x| f.pull_scalar(x)).scale(c);
            } else if *k < nr + nw {
                w = &w + &MultiVector::term(bit(*k - nr), c.clone());
            }
        }
        if alpha.is_zero() {
            continue;
        }
        table.push((f.pull_form(&alpha), w));
        tangent_forms.push(alpha);
    }
    let structure = Structure::new(sub.clone(), table)?;
    for a in 1..=n {
        structure.sharp_basis(a)?;
    }
    Ok(Pullback {
        structure,
        tangent_forms,
    })
}

/// Checks `{f*alpha, f*beta} = f*{alpha, beta}` on the given target pairs.
pub fn check_dirac_map(
    f: &CoordMap,
    source: &Structure,
    target: &Structure,
    pairs: &[(Form, Form)],
) -> Report {
    let mut rep = Report::new();
    for (k, (a, b)) in pairs.iter().enumerate() {
        let id = format!("map-bracket[{k}]");
        let lhs = source.bracket(&f.pull_form(a), &f.pull_form(b));
        let rhs = target.bracket(a, b).map(|r| f.pull_form(&r));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                let d = l.try_add(&-&r);
                if d.as_ref().map(Form::is_zero).unwrap_or(false) {
                    rep.push(id, true, render::form(f.source(), &l));
                } else {
                    rep.push(
                        id,
                        false,
                        format!(
                            "{{f*a, f*b}} = {} but f*{{a, b}} = {}",
                            render::form(f.source(), &l),
                            render::form(f.source(), &r)
                        ),
                    );
                }
            }
            (Err(e), _) | (_, Err(e)) => rep.push(id, false, e.to_string()),
        }
    }
    rep
}
