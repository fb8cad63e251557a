//! Builders and independent oracles shared by the integration tests.
#![allow(dead_code)]

use gradira::exterior::bit;
use gradira::scalar::Var;
use gradira::dynamics::{hdw_residuals, Hamiltonian, Section};
use gradira::scenarios::{
    base_name, constrained_momentum_name, gauge_name, momentum_name, pt, yang_mills, Algebra, Scenario,
};
use gradira::{Chart, Form, MultiVector, MvForm, Scalar};

pub fn q(n: i64) -> Scalar {
    Scalar::from_i64(n)
}

pub fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

pub fn same(a: &Form, b: &Form) -> bool {
    a.try_add(&-b).map(|d| d.is_zero()).unwrap_or(false)
}

pub fn same_mv(a: &MultiVector, b: &MultiVector) -> bool {
    a.try_add(&-b).map(|d| d.is_zero()).unwrap_or(false)
}

pub fn same_mvf(a: &MvForm, b: &MvForm) -> bool {
    a.try_add(&-b).map(|d| d.is_zero()).unwrap_or(false)
}

pub fn dx(c: &Chart, name: &str) -> Form {
    c.dx(name).unwrap()
}

pub fn dxv(c: &Chart, mus: &[usize]) -> Form {
    c.dxv(mus).unwrap()
}

pub fn co(c: &Chart, name: &str) -> Scalar {
    c.coord(name).unwrap()
}

pub fn pd(c: &Chart, name: &str) -> MultiVector {
    c.partial(name).unwrap()
}

/// `d/dx^{mu1} ^ ... ^ d/dx^{muk}` in the listed order.
pub fn base_partials(c: &Chart, mus: &[usize]) -> MultiVector {
    mus.iter().fold(MultiVector::scalar(Scalar::one()), |u, &m| {
        u.wedge(&pd(c, &base_name(m)))
    })
}

/// Dual base multivector: `i_{dx^{mu1} ^ ... } (d/dx^1 ^ ... ^ d/dx^n)`.
pub fn dual(c: &Chart, mus: &[usize]) -> MultiVector {
    let e = mus
        .iter()
        .fold(Form::scalar(Scalar::one()), |f, &m| f.wedge(&dx(c, &base_name(m))));
    MultiVector::basis(c.base_mask()).contract_form(&e).unwrap()
}

/// The density `H` of `H d^n x + ...`.
pub fn density(sc: &Scenario) -> Scalar {
    sc.hamiltonian.coeff(sc.chart().base_mask())
}

/// Replace fiber coordinates by formal functions of the base, as a section does.
pub fn along_section(c: &Chart, s: &Scalar) -> Scalar {
    let base = c.base_names();
    s.subs(&|v| match v {
        Var::Coord(name) => {
            let k = c.index_of(name)?;
            (!c.is_base(k)).then(|| Scalar::func(name, &base))
        }
        Var::Func(_) => None,
    })
}

/// The section's component `u(x)`.
pub fn field(c: &Chart, name: &str) -> Scalar {
    Scalar::func(name, &c.base_names())
}

/// `y^i d^{n+1-|mus|} x_{mus}`.
pub fn regular_special(c: &Chart, i: usize, mus: &[usize]) -> Form {
    dxv(c, mus).scale(&co(c, &format!("y{i}")))
}

/// The multivector printed for `dy^i ^ d^{a-1}x_{mus}`, `|mus| = n+1-a`:
/// `1/(n+1-a) sum_j (-1)^(j-1) d/dp^{mu_j}_i ^ d/dx^{mus without mu_j}`.
pub fn regular_u_printed(c: &Chart, i: usize, mus: &[usize]) -> MultiVector {
    let k = mus.len() as i64;
    let mut u = MultiVector::zero(mus.len());
    for (j, &m) in mus.iter().enumerate() {
        let rest: Vec<usize> = mus.iter().copied().filter(|x| *x != m).collect();
        let t = pd(c, &momentum_name(m, i)).wedge(&base_partials(c, &rest));
        u = &u + &t.scale(&q(sign(j % 2 == 1)));
    }
    u.scale(&Scalar::ratio(1, k))
}

/// `sum_j (-1)^(j+1) A^i_{nu_j} d x_{nus without nu_j}`.
pub fn ym_family_i(c: &Chart, i: usize, nus: &[usize]) -> Form {
    let mut f = Form::zero(c.n() + 1 - nus.len());
    for (j, &nu) in nus.iter().enumerate() {
        let rest: Vec<usize> = nus.iter().copied().filter(|x| *x != nu).collect();
        let t = dxv(c, &rest).scale(&co(c, &gauge_name(i, nu)));
        f = &f + &t.scale(&q(sign(j % 2 == 1)));
    }
    f
}

/// `pt^{ab}_i d^{n-2}x_{ab}` summed over ordered pairs.
pub fn ym_family_ii(c: &Chart, i: usize) -> Form {
    let n = c.n();
    let mut f = Form::zero(n - 2);
    for a in 1..=n {
        for b in 1..=n {
            if a != b {
                f = &f + &dxv(c, &[a, b]).scale(&pt(c, i, a, b));
            }
        }
    }
    f
}

/// `sum_{j<k} (-1)^(j+k) d/dpt^{nu_j nu_k}_i ^ d/dx^{rest}`, unnormalized.
pub fn ym_u_i_sum(c: &Chart, i: usize, nus: &[usize]) -> MultiVector {
    let mut u = MultiVector::zero(nus.len() - 1);
    for j in 0..nus.len() {
        for k in j + 1..nus.len() {
            let rest: Vec<usize> = nus
                .iter()
                .enumerate()
                .filter(|(x, _)| *x != j && *x != k)
                .map(|(_, v)| *v)
                .collect();
            let p = pd(c, &constrained_momentum_name(i, nus[j], nus[k]));
            let t = p.wedge(&base_partials(c, &rest));
            // 1-based positions j+1, k+1 give the same parity
            u = &u + &t.scale(&q(sign((j + k) % 2 == 1)));
        }
    }
    u
}

/// `sum_a d/dA^i_a ^ d/dx^a`.
pub fn ym_u_ii(c: &Chart, i: usize) -> MultiVector {
    let mut u = MultiVector::zero(2);
    for a in 1..=c.n() {
        u = &u + &pd(c, &gauge_name(i, a)).wedge(&pd(c, &base_name(a)));
    }
    u
}

pub fn has_bit(c: &Chart, f: &Form, name: &str) -> bool {
    let k = c.index_of(name).unwrap();
    f.terms().any(|(i, _)| i & bit(k) != 0)
}

/// Compares every Yang–Mills residual with the curvature form of the
/// equations: `p~_{mu nu} = F_{mu nu}` and `D_mu p~^{mu nu} = 0`.
pub fn yang_mills_oracle(n: usize, alg: Algebra, sig: Option<Vec<i64>>) -> (bool, usize) {
    let sc = yang_mills(n, alg.clone(), sig).unwrap();
    let s = &sc.structure;
    let c = s.chart();
    let eta = sc.yang_mills.as_ref().unwrap().signature.clone();
    let g = alg.dim();
    let ham = Hamiltonian::new(s, &sc.hamiltonian).unwrap();
    let psi = Section::generic(c).unwrap();
    let vol = psi.base().base_mask();
    let res = hdw_residuals(s, &ham, &psi, &sc.generators).unwrap();
    let a = |i: usize, mu: usize| field(c, &gauge_name(i, mu));
    let p = |i: usize, mu: usize, nu: usize| along_section(c, &pt(c, i, mu, nu));
    let curvature = |i: usize, mu: usize, nu: usize| {
        let mut f = &a(i, nu).diff(&base_name(mu)) - &a(i, mu).diff(&base_name(nu));
        for j in 1..=g {
            for k in 1..=g {
                let fc = alg.f(i - 1, j - 1, k - 1);
                if fc != 0 {
                    f = &f + &(&(&a(j, mu) * &a(k, nu)) * &q(fc));
                }
            }
        }
        f
    };
    let mut ok = true;
    let mut r = res.iter();
    for i in 1..=g {
        for mu in 1..=n {
            for nu in mu + 1..=n {
                let e = r.next().unwrap();
                let lowered = &p(i, mu, nu) * &q(eta[mu - 1] * eta[nu - 1]);
                ok &= e.residual().coeff(vol) == &lowered - &curvature(i, mu, nu);
            }
        }
    }
    for i in 1..=g {
        for nu in 1..=n {
            let e = r.next().unwrap();
            let mut div = Scalar::zero();
            for mu in 1..=n {
                div = &div + &p(i, mu, nu).diff(&base_name(mu));
                for j in 1..=g {
                    for k in 1..=g {
                        let fc = alg.f(j - 1, i - 1, k - 1);
                        if fc != 0 {
                            div = &div + &(&(&p(j, mu, nu) * &a(k, mu)) * &q(fc));
                        }
                    }
                }
            }
            ok &= e.residual().coeff(vol) == div;
        }
    }
    (ok && r.next().is_none(), res.len())
}
