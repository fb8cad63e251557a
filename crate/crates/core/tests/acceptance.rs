//! Acceptance run: one PASS/FAIL line per criterion, with sub-checks below.
//!
//! Sub-checks marked `deviation` compare against a printed claim that the
//! computation contradicts. They are reported as they come out and do not
//! fail the run; every other sub-check does.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use gradira::dirac::VerifyOptions;
use gradira::dynamics::{
    check_evolution, check_subalgebra_condition, evolutions, gamma_h, hdw_residuals,
    is_special_hamiltonian, Hamiltonian, Section,
};
use gradira::extensions::{
    bracket_ext1, build_span_tower, contraction_table, equiv_mod_kn, sharp1_tilde,
};
use gradira::maps::{pullback, pushforward};
use gradira::render;
use gradira::sampler::{seed_from_env, Sampler};
use gradira::scenarios::*;
use gradira::span::Span;
use gradira::{Form, MultiVector, MvForm, Scalar};

struct Sub {
    ok: bool,
    deviation: bool,
    text: String,
}

#[derive(Default)]
struct Outcome {
    subs: Vec<Sub>,
}

impl Outcome {
    fn check(&mut self, ok: bool, text: impl Into<String>) {
        self.subs.push(Sub { ok, deviation: false, text: text.into() });
    }

    fn deviation(&mut self, ok: bool, text: impl Into<String>) {
        self.subs.push(Sub { ok, deviation: true, text: text.into() });
    }

    fn pass(&self) -> bool {
        self.subs.iter().all(|s| s.ok)
    }

    fn regressed(&self) -> bool {
        self.subs.iter().any(|s| !s.ok && !s.deviation)
    }
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::default();
    for n in [2, 3] {
        for k in [1, 2] {
            let ext = extended_canonical(n, k).unwrap();
            let s = pushforward(&ext.structure, &["p"]).unwrap();
            let c = s.chart();
            let mut forms = vec![c.volume()];
            let mut values = vec![MultiVector::zero(1)];
            for i in 1..=k {
                for mu in 1..=n {
                    forms.push(dx(c, &field_name(i)).wedge(&dxv(c, &[mu])));
                    values.push(-&pd(c, &momentum_name(mu, i)));
                }
                let mut f = Form::zero(n);
                for mu in 1..=n {
                    f = &f + &dx(c, &momentum_name(mu, i)).wedge(&dxv(c, &[mu]));
                }
                forms.push(f);
                values.push(pd(c, &field_name(i)));
            }
            let span_ok = Span::new(n, forms.clone()).same_as(s.span(n));
            let table_ok = forms
                .iter()
                .zip(&values)
                .all(|(f, v)| s.sharp(n, f).map(|w| s.same_coset(1, &w, v)).unwrap_or(false));
            out.check(
                span_ok && table_ok,
                format!("n={n} k={k}: pushforward sharp_n table equals the reduced table ({} generators)", forms.len()),
            );
            let opts = VerifyOptions::default();
            let ea = ext.structure.verify_axioms(&opts).all_pass();
            let ef = ext.structure.verify_fibered().all_pass();
            let ra = s.verify_axioms(&opts).all_pass();
            let rf = s.verify_fibered().all_pass();
            out.check(
                ea && !ef && ra && rf,
                format!(
                    "n={n} k={k}: extended axioms {}, fibered {}; reduced axioms {}, fibered {}",
                    verdict(ea),
                    verdict(ef),
                    verdict(ra),
                    verdict(rf)
                ),
            );
        }
    }
    out
}

fn verdict(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::default();
    for n in [2, 3] {
        for k in [1, 2] {
            let sc = reduced_canonical(n, k).unwrap();
            let s = &sc.structure;
            let c = s.chart();
            let h = density(&sc);
            let vol = c.volume();
            let mut ok = true;
            for i in 1..=k {
                let y = field_name(i);
                let mut p_gen = Form::zero(n - 1);
                let mut dp_sum = Form::zero(n);
                for mu in 1..=n {
                    let pm = momentum_name(mu, i);
                    let a = dxv(c, &[mu]).scale(&co(c, &y));
                    let want = &vol.scale(&h.diff(&pm)) - &dx(c, &y).wedge(&dxv(c, &[mu]));
                    ok &= same(&bracket_ext1(s, &a, &sc.hamiltonian).unwrap(), &want);
                    p_gen = &p_gen + &dxv(c, &[mu]).scale(&co(c, &pm));
                    dp_sum = &dp_sum + &dx(c, &pm).wedge(&dxv(c, &[mu]));
                }
                let want = &vol.scale(&-&h.diff(&y)) - &dp_sum;
                ok &= same(&bracket_ext1(s, &p_gen, &sc.hamiltonian).unwrap(), &want);
            }
            out.check(ok, format!("n={n} k={k}: {{y d^(n-1)x_mu, H}} and {{p d^(n-1)x_mu, H}} exact"));
        }
    }
    out
}

/// The printed four-term value of `sharp~_1(dH)`; the last term is the
/// product of the two sums over `mu`.
fn example_sharp1_dh(sc: &Scenario, k: usize) -> MvForm {
    let c = sc.chart();
    let n = c.n();
    let h = density(sc);
    let vol = c.volume();
    let inv = Scalar::ratio(1, n as i64);
    let mut w = MvForm::zero(n, n);
    for i in 1..=k {
        let y = field_name(i);
        let mut forms = Form::zero(n);
        let mut vecs = MultiVector::zero(n);
        for mu in 1..=n {
            let pm = momentum_name(mu, i);
            let dm = dual(c, &[mu]);
            w = &w + &vol.tensor(&pd(c, &pm).wedge(&dm)).scale(&(&h.diff(&y) * &inv));
            w = &w - &vol.tensor(&pd(c, &y).wedge(&dm)).scale(&h.diff(&pm));
            w = &w + &dx(c, &y).wedge(&dxv(c, &[mu])).tensor(&pd(c, &y).wedge(&dm));
            forms = &forms + &dx(c, &pm).wedge(&dxv(c, &[mu]));
            vecs = &vecs + &pd(c, &pm).wedge(&dm);
        }
        w = &w + &forms.tensor(&vecs).scale(&inv);
    }
    w
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::default();
    for n in [2, 3] {
        for k in [1, 2] {
            let sc = reduced_canonical(n, k).unwrap();
            let s = &sc.structure;
            let w = sharp1_tilde(s, &s.chart().d(&sc.hamiltonian)).unwrap();
            let want = example_sharp1_dh(&sc, k);
            out.check(
                equiv_mod_kn(s, &w, &want),
                format!("n={n} k={k}: sharp~_1(dH) equals the four-term expression mod K_n"),
            );
        }
    }
    out
}

/// Table 1 entry `i_{sharp_n(alpha)} theta`, corrected and as printed.
struct Entry {
    row: &'static str,
    col: &'static str,
    theta: Form,
    alpha: Form,
    computed_oracle: Form,
    printed: Form,
}

fn table_one(sc: &Scenario, k: usize) -> Vec<Entry> {
    let c = sc.chart();
    let n = c.n();
    let vol = c.volume();
    let zero_n = Form::zero(n);
    let y = |j: usize| dx(c, &field_name(j));
    let p = |a: usize, j: usize| dx(c, &momentum_name(a, j));
    let x = |b: usize| dxv(c, &[b]);
    let delta = |a: usize, b: usize| if a == b { 1 } else { 0 };
    let mut cols: Vec<(&'static str, usize, usize, Form)> = Vec::new();
    for i in 1..=k {
        for mu in 1..=n {
            cols.push(("dy^i ^ d^(n-1)x_mu", i, mu, y(i).wedge(&x(mu))));
        }
        let mut f = Form::zero(n);
        for mu in 1..=n {
            f = &f + &p(mu, i).wedge(&x(mu));
        }
        cols.push(("dp^mu_i ^ d^(n-1)x_mu", i, 0, f));
    }
    cols.push(("d^n x", 0, 0, vol.clone()));
    let mut out = Vec::new();
    let mut push = |row: &'static str, theta: Form, f: &dyn Fn(&str, usize, usize) -> (Form, Form)| {
        for (col, i, mu, alpha) in &cols {
            let (oracle, printed) = f(col, *i, *mu);
            out.push(Entry {
                row,
                col,
                theta: theta.clone(),
                alpha: alpha.clone(),
                computed_oracle: oracle,
                printed,
            });
        }
    };
    for j in 1..=k {
        push("dy^j ^ d^n x", y(j).wedge(&vol), &|col, i, _| match col {
            "dp^mu_i ^ d^(n-1)x_mu" => {
                let v = vol.scale(&q(delta(j, i)));
                (v.clone(), v)
            }
            _ => (zero_n.clone(), zero_n.clone()),
        });
        for al in 1..=n {
            push("dp^a_j ^ d^n x", p(al, j).wedge(&vol), &|col, i, mu| match col {
                "dy^i ^ d^(n-1)x_mu" => {
                    let d = q(delta(al, mu) * delta(i, j));
                    (vol.scale(&-&d), vol.scale(&d))
                }
                _ => (zero_n.clone(), zero_n.clone()),
            });
        }
    }
    for j in 1..=k {
        for kk in 1..=k {
            for al in 1..=n {
                for be in 1..=n {
                    let theta = y(j).wedge(&p(al, kk)).wedge(&x(be));
                    push("dy^j ^ dp^a_k ^ d^(n-1)x_b", theta, &|col, i, mu| match col {
                        "dy^i ^ d^(n-1)x_mu" => {
                            let v = y(j).wedge(&x(be)).scale(&q(delta(al, mu) * delta(i, kk)));
                            (v.clone(), v)
                        }
                        "dp^mu_i ^ d^(n-1)x_mu" => {
                            let v = p(al, kk).wedge(&x(be)).scale(&q(delta(j, i)));
                            (v.clone(), v)
                        }
                        _ => (zero_n.clone(), zero_n.clone()),
                    });
                }
            }
        }
    }
    for j in 1..=k {
        for kk in j + 1..=k {
            for al in 1..=n {
                let theta = y(j).wedge(&y(kk)).wedge(&x(al));
                push("dy^j ^ dy^k ^ d^(n-1)x_a", theta, &|col, i, _| match col {
                    "dp^mu_i ^ d^(n-1)x_mu" => {
                        let v = &y(kk).wedge(&x(al)).scale(&q(delta(j, i)))
                            - &y(j).wedge(&x(al)).scale(&q(delta(kk, i)));
                        (v.clone(), v)
                    }
                    _ => (zero_n.clone(), zero_n.clone()),
                });
            }
        }
    }
    for j in 1..=k {
        for kk in 1..=k {
            for al in 1..=n {
                for be in 1..=n {
                    if (al, j) >= (be, kk) {
                        continue;
                    }
                    for ga in 1..=n {
                        let theta = p(al, j).wedge(&p(be, kk)).wedge(&x(ga));
                        push("dp^a_j ^ dp^b_k ^ d^(n-1)x_g", theta, &|col, i, mu| match col {
                            "dy^i ^ d^(n-1)x_mu" => {
                                // printed `dp^k_j` read as `dp^a_j`
                                let v = &p(be, kk).wedge(&x(ga)).scale(&q(delta(al, mu) * delta(i, j)))
                                    - &p(al, j).wedge(&x(ga)).scale(&q(delta(be, mu) * delta(i, kk)));
                                (-&v, v)
                            }
                            _ => (zero_n.clone(), zero_n.clone()),
                        });
                    }
                }
            }
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::default();
    for (n, k) in [(2, 1), (2, 2), (3, 1)] {
        let sc = reduced_canonical(n, k).unwrap();
        let s = &sc.structure;
        let c = s.chart();
        let vol = c.volume();
        let tower = build_span_tower(s, n + 1, n).unwrap();
        let mut families = Vec::new();
        for i in 1..=k {
            families.push(dx(c, &field_name(i)).wedge(&vol));
            for mu in 1..=n {
                families.push(dx(c, &momentum_name(mu, i)).wedge(&vol));
            }
            for j in 1..=k {
                let mut f = Form::zero(n + 1);
                for mu in 1..=n {
                    f = &f + &dx(c, &momentum_name(mu, i)).wedge(&dx(c, &field_name(j))).wedge(&dxv(c, &[mu]));
                }
                families.push(f);
            }
        }
        let contained = families.iter().all(|f| tower.admitted.contains(f));
        out.check(contained, format!("n={n} k={k}: the three printed families are admitted"));
        let mut dydy = Vec::new();
        let mut dpdp = Vec::new();
        for j in 1..=k {
            for kk in j + 1..=k {
                for al in 1..=n {
                    dydy.push(dx(c, &field_name(j)).wedge(&dx(c, &field_name(kk))).wedge(&dxv(c, &[al])));
                }
            }
            for kk in 1..=k {
                for al in 1..=n {
                    for be in 1..=n {
                        for ga in 1..=n {
                            let f = dx(c, &momentum_name(al, j))
                                .wedge(&dx(c, &momentum_name(be, kk)))
                                .wedge(&dxv(c, &[ga]));
                            if !f.is_zero() {
                                dpdp.push(f);
                            }
                        }
                    }
                }
            }
        }
        // no nonzero combination of the candidates is admitted
        let disjoint = |cands: &[Form]| {
            let cs = Span::new(n + 1, cands.to_vec());
            let both = Span::new(n + 1, tower.admitted.basis().iter().chain(cs.basis()).cloned());
            both.rank() == tower.admitted.rank() + cs.rank()
        };
        out.check(
            disjoint(&dpdp),
            format!("n={n} k={k}: span of the {} dp^dp^d^(n-1)x candidates meets the admitted span in 0", dpdp.len()),
        );
        if k > 1 {
            let kept: Vec<String> = dydy
                .iter()
                .filter(|f| tower.admitted.contains(f))
                .map(|f| render::form(c, f))
                .collect();
            out.deviation(
                disjoint(&dydy),
                format!(
                    "n={n} k={k}: dy^dy^d^(n-1)x candidates{}",
                    if kept.is_empty() {
                        " rejected".to_string()
                    } else {
                        format!(" admitted, e.g. {}", kept[0])
                    }
                ),
            );
        }
        let paper = Span::new(n + 1, families.clone());
        let extra: Vec<String> = tower
            .admitted
            .basis()
            .iter()
            .filter(|f| !paper.contains(f))
            .map(|f| render::form(c, f))
            .collect();
        out.deviation(
            extra.is_empty(),
            format!(
                "n={n} k={k}: admitted rank {} vs printed rank {}{}",
                tower.admitted.rank(),
                paper.rank(),
                extra.first().map(|e| format!("; extra generator {e}")).unwrap_or_default(),
            ),
        );
        let entries = table_one(&sc, k);
        let alphas: Vec<Form> = entries.iter().map(|e| e.alpha.clone()).collect();
        let mut oracle_ok = 0;
        let mut printed_bad = Vec::new();
        for (e, a) in entries.iter().zip(&alphas) {
            let got = &contraction_table(s, std::slice::from_ref(a), std::slice::from_ref(&e.theta)).unwrap()[0][0];
            if same(got, &e.computed_oracle) {
                oracle_ok += 1;
            }
            if !same(got, &e.printed) {
                let tag = format!("{} / {}", e.row, e.col);
                if !printed_bad.contains(&tag) {
                    printed_bad.push(tag);
                }
            }
        }
        out.check(
            oracle_ok == entries.len(),
            format!("n={n} k={k}: contraction data matches the sign-corrected Table 1 on {oracle_ok}/{} entries", entries.len()),
        );
        out.deviation(
            printed_bad.is_empty(),
            format!(
                "n={n} k={k}: Table 1 as printed{}",
                if printed_bad.is_empty() {
                    " matches".to_string()
                } else {
                    format!(" differs in sign at {}", printed_bad.join(", "))
                }
            ),
        );
    }
    out
}

/// Brute force over ordered index tuples: `sum sgn * [theta] * [vector]`.
fn perm_sign(v: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return 0;
            }
            if v[i] > v[j] {
                s = -s;
            }
        }
    }
    s
}

/// Coefficient of `dx^K (x) d_L` in `1_a ^ 1_b`, by expanding both factors
/// over all ordered tuples (each normalized by `1/a!`).
fn identity_wedge_oracle(a: usize, b: usize, kk: &[usize], ll: &[usize]) -> i64 {
    let fact = |x: usize| (1..=x as i64).product::<i64>();
    let mut acc = 0i64;
    for s in permutations(kk) {
        for t in permutations(ll) {
            // split K and L at a; the factors pair equal tuples
            if s[..a] == t[..a] && s[a..] == t[a..] {
                acc += perm_sign_rel(&s, kk) * perm_sign_rel(&t, ll);
            }
        }
    }
    let _ = b;
    acc / (fact(a) * fact(kk.len() - a))
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn perm_sign_rel(p: &[usize], sorted: &[usize]) -> i64 {
    let pos: Vec<usize> = p.iter().map(|x| sorted.iter().position(|y| y == x).unwrap()).collect();
    perm_sign(&pos)
}

fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// `i_{1_a} beta` evaluated on basis vectors: `sum over a-subsets J of the
/// arguments of sgn * beta(J, rest)`, i.e. `dx^J ^ beta(d_J, .)`.
fn identity_contract_oracle(beta: &dyn Fn(&[usize]) -> i64, a: usize, args: &[usize]) -> i64 {
    let b = args.len();
    let mut acc = 0;
    for p in permutations(&(0..b).collect::<Vec<_>>()) {
        let sgn = perm_sign(&p);
        let perm: Vec<usize> = p.iter().map(|i| args[*i]).collect();
        // theta = dx^{J} with J = first a arguments, i_{d_J} beta evaluated on the rest
        acc += sgn * beta(&perm);
    }
    let fact = |x: usize| (1..=x as i64).product::<i64>();
    acc / (fact(a) * fact(b - a))
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::default();
    let mut sampler = Sampler::new(seed_from_env());
    let mut checked_c = 0;
    let mut ok_c = true;
    let mut checked_w = 0;
    let mut ok_w = true;
    for m in 1..=6 {
        let names: Vec<String> = (1..=m).map(|i| format!("z{i}")).collect();
        let chart = gradira::Chart::new(&names[..1], &names[1..]).unwrap();
        for b in 1..=4.min(m) {
            // random constant-coefficient b-form as an antisymmetric array
            let subsets = gradira::exterior::subsets(m, b);
            let coeffs: Vec<i64> = subsets.iter().map(|_| sampler.int(-5, 5)).collect();
            let beta = Form::from_terms(b, subsets.iter().zip(&coeffs).map(|(i, c)| (*i, q(*c))));
            let dense = |t: &[usize]| -> i64 {
                let mut v = t.to_vec();
                let s = perm_sign(&v);
                if s == 0 {
                    return 0;
                }
                v.sort();
                let mask = gradira::exterior::mask_of(&v);
                subsets.iter().position(|x| *x == mask).map(|k| s * coeffs[k]).unwrap_or(0)
            };
            for a in 1..=b {
                let got = MvForm::identity(m, a).contract_into(&beta).unwrap();
                for (k, mask) in subsets.iter().enumerate() {
                    let args: Vec<usize> = gradira::exterior::positions(*mask).collect();
                    let oracle = identity_contract_oracle(&dense, a, &args);
                    let want = binom(b, a) * coeffs[k];
                    ok_c &= oracle == want && got.coeff(*mask) == q(oracle);
                    checked_c += 1;
                }
            }
            let _ = &chart;
        }
        for a in 1..=4 {
            for b in 1..=4 {
                if a + b > m {
                    continue;
                }
                let w = MvForm::identity(m, a).wedge(&MvForm::identity(m, b));
                for kk in gradira::exterior::subsets(m, a + b) {
                    for ll in gradira::exterior::subsets(m, a + b) {
                        let kv: Vec<usize> = gradira::exterior::positions(kk).collect();
                        let lv: Vec<usize> = gradira::exterior::positions(ll).collect();
                        let oracle = if kk == ll {
                            identity_wedge_oracle(a, b, &kv, &lv)
                        } else {
                            0
                        };
                        let want = if kk == ll { binom(a + b, a) } else { 0 };
                        ok_w &= oracle == want && w.coeff(kk, ll) == q(oracle);
                        checked_w += 1;
                    }
                }
            }
        }
    }
    out.check(ok_c, format!("i_(1_a) beta = C(b,a) beta on {checked_c} coefficients, a <= b <= 4, dim <= 6"));
    out.check(ok_w, format!("1_a ^ 1_b = C(a+b,a) 1_(a+b) on {checked_w} coefficients, a, b <= 4, dim <= 6"));
    out
}

/// A random polynomial Hamiltonian form of degree 0 or 1 on the reduced
/// chart with `n = 2, k = 1`.
fn sample_hamiltonian(sc: &Scenario, deg: usize, s: &mut Sampler) -> Form {
    let c = sc.chart();
    let xy = |s: &mut Sampler| -> Scalar {
        let mons = [
            Scalar::one(),
            co(c, "x1"),
            co(c, "x2"),
            co(c, "y1"),
            &co(c, "y1") * &co(c, "y1"),
            &co(c, "x1") * &co(c, "y1"),
        ];
        mons.iter().fold(Scalar::zero(), |acc, m| &acc + &m.scale_q(&gradira::scalar::q(s.int(-3, 3))))
    };
    if deg == 0 {
        return Form::scalar(s.poly(c, 2, 3));
    }
    let mut f = Form::zero(1);
    for mu in 1..=2 {
        f = &f + &dxv(c, &[mu]).scale(&xy(s));
    }
    let lead = &xy(s) + &(&co(c, "y1") * &co(c, "x2")).scale_q(&gradira::scalar::q(s.int(-2, 2)));
    for mu in 1..=2 {
        f = &f + &dxv(c, &[mu]).scale(&(&lead * &co(c, &momentum_name(mu, 1))));
    }
    &f + &c.d_scalar(&s.poly(c, 2, 2))
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::default();
    let sc = reduced_canonical(2, 1).unwrap();
    let s = &sc.structure;
    let c = s.chart();
    let mut sampler = Sampler::new(seed_from_env());
    let degs = [(1, 1, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0), (0, 0, 1), (0, 1, 0)];
    let (mut closed, mut prims, mut nonzero) = (0, 0, 0);
    let total = 24;
    let mut all_ham = true;
    for t in 0..total {
        let (a, b, d) = degs[t % degs.len()];
        let x = sample_hamiltonian(&sc, a, &mut sampler);
        let y = sample_hamiltonian(&sc, b, &mut sampler);
        let z = sample_hamiltonian(&sc, d, &mut sampler);
        all_ham &= [&x, &y, &z].iter().all(|f| s.is_hamiltonian_form(f));
        let j = s.jacobiator(&x, &y, &z).unwrap();
        if c.d(&j).is_zero() {
            closed += 1;
        }
        if !j.is_zero() {
            nonzero += 1;
        }
        if j.deg() == 0 {
            // closed 0-form: a constant is its own witness
            prims += usize::from(j.to_scalar().and_then(|v| v.as_constant()).is_some());
        } else if let Ok(p) = c.poincare_primitive(&j) {
            prims += usize::from(same(&c.d(&p), &j));
        }
    }
    out.check(all_ham, "sampled forms are Hamiltonian");
    out.check(closed == total, format!("jacobiator closed on {closed}/{total} triples ({nonzero} nonzero)"));
    out.check(prims == total, format!("verified primitive on {prims}/{total} triples"));
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::default();
    for (n, k) in [(2, 1), (3, 1), (2, 2)] {
        let sc = reduced_canonical(n, k).unwrap();
        let s = &sc.structure;
        let c = s.chart();
        let ham = Hamiltonian::new(s, &sc.hamiltonian).unwrap();
        let psi = Section::generic(c).unwrap();
        let base = psi.base();
        let h = density(&sc);
        let res = hdw_residuals(s, &ham, &psi, &sc.generators).unwrap();
        let mut ok = res.len() == k * (n + 1);
        for i in 1..=k {
            for mu in 1..=n {
                let r = &res[(i - 1) * n + mu - 1];
                let lhs = field(c, &field_name(i)).diff(&base_name(mu));
                let rhs = along_section(c, &h.diff(&momentum_name(mu, i)));
                ok &= r.lhs.coeff(base.base_mask()) == lhs && r.rhs.coeff(base.base_mask()) == rhs;
            }
            let r = &res[k * n + i - 1];
            let lhs = (1..=n).fold(Scalar::zero(), |acc, mu| {
                &acc + &field(c, &momentum_name(mu, i)).diff(&base_name(mu))
            });
            let rhs = -&along_section(c, &h.diff(&field_name(i)));
            ok &= r.lhs.coeff(base.base_mask()) == lhs && r.rhs.coeff(base.base_mask()) == rhs;
        }
        out.check(ok, format!("reduced n={n} k={k}: dy/dx^mu = dH/dp^mu and div p = -dH/dy"));
    }
    for alg in [Algebra::Su2, Algebra::Abelian(2)] {
        let name = format!("{alg:?}");
        let (ok, count) = yang_mills_oracle(3, alg, None);
        out.check(ok, format!("yang-mills n=3 {name}: {count} residuals equal p~_mn - F_mn and D_m p~^mn"));
    }
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::default();
    for (n, k) in [(2, 1), (3, 1), (2, 2)] {
        let sc = reduced_canonical(n, k).unwrap();
        let s = &sc.structure;
        let c = s.chart();
        let ham = Hamiltonian::new(s, &sc.hamiltonian).unwrap();
        let table = canonical_extension_table(&sc, k).unwrap();
        let h = gamma_h(s, &ham, &table).unwrap();
        let hd = density(&sc);
        let mut lift_ok = true;
        for mu in 0..n {
            for i in 1..=k {
                let p = momentum_name(mu + 1, i);
                lift_ok &= h.coefficient(mu, &field_name(i)).unwrap() == hd.diff(&p);
                let want = hd.diff(&field_name(i)).scale_q(&gradira::scalar::qf(-1, n as i64));
                lift_ok &= h.coefficient(mu, &p).unwrap() == want;
            }
        }
        out.check(
            lift_ok,
            format!("n={n} k={k}: lift of d/dx^mu has dH/dp^mu_i along y^i and -1/n dH/dy^i along p^mu_i"),
        );
        let mut forms = Vec::new();
        for i in 1..=k {
            forms.push(Form::scalar(co(c, &field_name(i))));
        }
        forms.extend(sc.generators.iter().cloned());
        forms.push(Form::scalar(co(c, "x1")));
        forms.push(dxv(c, &[n]).scale(&co(c, "x1")));
        if n > 2 {
            forms.push(dxv(c, &[1, 2]).scale(&(&co(c, "x3") * &co(c, "x2"))));
        }
        let rep = check_evolution(s, &ham, &table, &h, &forms);
        out.check(
            rep.all_pass(),
            format!(
                "n={n} k={k}: h*(d a) = d a + {{a, H}} on {} forms (y, generators, basic)",
                rep.checks.len()
            ),
        );
    }
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::default();
    // membership, reduced chart
    for n in [2, 3, 4] {
        let sc = reduced_canonical(n, 1).unwrap();
        let s = &sc.structure;
        let c = s.chart();
        let mut special = sc.generators.clone();
        for q_deg in 0..=n - 2 {
            for mus in subsets_1(n, n - q_deg) {
                special.push(regular_special(c, 1, &mus));
            }
        }
        special.push(dxv(c, &[1]).scale(&co(c, "x2")));
        let mut not_special = vec![Form::scalar(co(c, &momentum_name(1, 1)))];
        if n >= 3 {
            let mut f = Form::zero(1.max(n - 2));
            for mu in 2..=n {
                f = &f + &dxv(c, &[mu, 1]).scale(&co(c, &momentum_name(mu, 1)));
            }
            not_special.push(f);
        }
        let ok = special.iter().all(|f| is_special_hamiltonian(s, f).unwrap())
            && not_special.iter().all(|f| !is_special_hamiltonian(s, f).unwrap());
        out.check(
            ok,
            format!(
                "reduced n={n}: {} printed special forms accepted, {} p-bearing low-degree forms refused",
                special.len(),
                not_special.len()
            ),
        );
    }
    // membership, Yang–Mills n = 3
    for alg in [Algebra::Su2, Algebra::Abelian(1)] {
        let sc = yang_mills(3, alg.clone(), None).unwrap();
        let s = &sc.structure;
        let c = s.chart();
        let mut special = sc.generators.clone();
        for i in 1..=alg.dim() {
            special.push(ym_family_i(c, i, &[1, 2, 3]));
            for (a, b) in [(1, 2), (1, 3), (2, 3)] {
                special.push(ym_family_i(c, i, &[a, b]));
            }
            special.push(ym_family_ii(c, i));
        }
        let not_special = [
            Form::scalar(co(c, "pt112")),
            Form::scalar(co(c, "A11")),
            dxv(c, &[1, 2]).scale(&co(c, "pt112")),
        ];
        let ok = special.iter().all(|f| is_special_hamiltonian(s, f).unwrap())
            && not_special.iter().all(|f| !is_special_hamiltonian(s, f).unwrap());
        out.check(
            ok,
            format!(
                "yang-mills n=3 {alg:?}: {} printed special forms accepted, {} other candidates refused",
                special.len(),
                not_special.len()
            ),
        );
    }
    // regular U, as printed and with the sign (-1)^(n-q)
    for n in [2, 3, 4] {
        let sc = reduced_canonical(n, 1).unwrap();
        let s = &sc.structure;
        let c = s.chart();
        let mut printed_fail = Vec::new();
        let mut corrected_ok = true;
        for q_deg in 0..=n - 2 {
            let mus: Vec<usize> = (1..=n - q_deg).collect();
            let alpha = regular_special(c, 1, &mus);
            let u = regular_u_printed(c, 1, &mus);
            let rep = check_subalgebra_condition(s, &alpha, &u).unwrap();
            if !rep.all_pass() {
                printed_fail.push(format!("q={q_deg}"));
            }
            let fixed = u.scale(&q(sign((n - q_deg) % 2 == 1)));
            corrected_ok &= check_subalgebra_condition(s, &alpha, &fixed).unwrap().all_pass();
        }
        out.check(corrected_ok, format!("reduced n={n}: subalgebra condition holds with (-1)^(n-q) U"));
        out.deviation(
            printed_fail.is_empty(),
            format!(
                "reduced n={n}: printed U{}",
                if printed_fail.is_empty() {
                    " passes".into()
                } else {
                    format!(" has the wrong sign at {}", printed_fail.join(", "))
                }
            ),
        );
    }
    // Yang–Mills U and the closing bracket
    let sc = yang_mills(3, Algebra::Su2, None).unwrap();
    let s = &sc.structure;
    let c = s.chart();
    let n = 3usize;
    let mut printed_u = Vec::new();
    let mut corrected = true;
    for nus in [vec![1, 2, 3], vec![1, 2], vec![1, 3], vec![2, 3]] {
        let a = n + 2 - nus.len();
        let alpha = ym_family_i(c, 1, &nus);
        let sum = ym_u_i_sum(c, 1, &nus);
        let printed = sum.scale(&Scalar::ratio(1, (n + 2 - a) as i64));
        let fixed = sum.scale(&Scalar::ratio(sign((n - a) % 2 == 1), (n + 1 - a) as i64));
        let rp = check_subalgebra_condition(s, &alpha, &printed).unwrap();
        if !rp.all_pass() {
            let d = rp.get("subalgebra-sharp").map(|c| c.detail.clone()).unwrap_or_default();
            printed_u.push(format!("a={a}: {}", d.rsplit(" = ").next().unwrap_or("")));
        }
        corrected &= check_subalgebra_condition(s, &alpha, &fixed).unwrap().all_pass();
    }
    printed_u.dedup();
    let ii = check_subalgebra_condition(s, &ym_family_ii(c, 1), &ym_u_ii(c, 1)).unwrap();
    out.check(ii.all_pass(), "yang-mills n=3: d/dA^i_a ^ d/dx^a passes for dp~^ab_i ^ d^(n-2)x_ab");
    out.check(
        corrected,
        "yang-mills n=3: subalgebra condition holds with U = (-1)^(n-a)/(n+1-a) sum (-1)^(i+j) ...",
    );
    out.deviation(
        printed_u.is_empty(),
        format!(
            "yang-mills n=3: printed 1/(n+2-a) U{}",
            if printed_u.is_empty() {
                " passes".to_string()
            } else {
                format!(" fails ({}; sharp = that multiple of U)", printed_u.join(", "))
            }
        ),
    );
    let mut middle_ok = true;
    let mut closed_form_ok = true;
    let mut printed_bad = Vec::new();
    for nus in [vec![1, 2, 3], vec![1, 2]] {
        let a = n + 2 - nus.len();
        for i in 1..=3 {
            for j in 1..=3 {
                let br = s.bracket(&ym_family_i(c, i, &nus), &ym_family_ii(c, j)).unwrap();
                let delta = if i == j { 1 } else { 0 };
                let mut middle = Form::zero(a - 2);
                for (k, &nu) in nus.iter().enumerate() {
                    let mut idx: Vec<usize> = nus.iter().copied().filter(|x| *x != nu).collect();
                    idx.push(nu);
                    middle = &middle - &dxv(c, &idx).scale(&q(sign(k % 2 == 1) * delta));
                }
                middle_ok &= same(&br, &middle);
                let coef = (n + 2 - a) as i64 * delta;
                closed_form_ok &= same(&br, &dxv(c, &nus).scale(&q(sign((n - a) % 2 == 1) * coef)));
                if !same(&br, &dxv(c, &nus).scale(&q(sign(a % 2 == 1) * coef))) && i == j {
                    printed_bad.push(format!("a={a}: got {}", render::form(c, &br)));
                }
            }
        }
    }
    out.check(middle_ok, "yang-mills n=3: closing brackets equal the unsimplified sum");
    out.check(closed_form_ok, "yang-mills n=3: closing brackets equal (-1)^(n-a) (n+2-a) delta d^(a-2)x");
    printed_bad.dedup();
    out.deviation(
        printed_bad.is_empty(),
        format!(
            "yang-mills n=3: printed (-1)^a (n+2-a){}",
            if printed_bad.is_empty() {
                " matches".to_string()
            } else {
                format!(" has the opposite sign ({})", printed_bad.join(", "))
            }
        ),
    );
    out
}

/// Increasing `k`-subsets of `1..=n`.
fn subsets_1(n: usize, k: usize) -> Vec<Vec<usize>> {
    gradira::exterior::subsets(n, k)
        .into_iter()
        .map(|m| gradira::exterior::positions(m).map(|p| p + 1).collect())
        .collect()
}

fn criterion_10() -> Outcome {
    let mut out = Outcome::default();
    for n in [2, 3] {
        let sc = reduced_canonical(n, 1).unwrap();
        let s = &sc.structure;
        let c = s.chart();
        let ham = Hamiltonian::new(s, &sc.hamiltonian).unwrap();
        let base = canonical_extension_table(&sc, 1).unwrap();
        let mut shifted = Vec::new();
        for e in 0..base.entries.len() {
            for k in 0..base.freedom.len() {
                shifted.push(base.shifted(e, k, &co(c, "x1")).unwrap());
            }
        }
        let mut tables = vec![&base];
        tables.extend(shifted.iter());
        let mut specials = sc.generators.clone();
        specials.push(Form::scalar(co(c, "y1")));
        specials.push(regular_special(c, 1, &(1..n).collect::<Vec<_>>()));
        let mut equal = true;
        for a in &specials {
            let ev = evolutions(s, &ham, &tables, a).unwrap();
            equal &= ev.iter().all(|e| same(e, &ev[0]));
        }
        out.check(
            equal,
            format!(
                "reduced n={n}: {} special forms evolve identically under {} tables",
                specials.len(),
                tables.len()
            ),
        );
        // control: a non-special form sees the freedom
        let p = Form::scalar(co(c, &momentum_name(1, 1)));
        let ev = evolutions(s, &ham, &tables, &p).unwrap();
        out.check(
            ev.iter().any(|e| !same(e, &ev[0])),
            format!("reduced n={n}: the non-special p^1_1 depends on the table"),
        );
    }
    let sc = yang_mills(3, Algebra::Su2, None).unwrap();
    let s = &sc.structure;
    let c = s.chart();
    let ham = Hamiltonian::new(s, &sc.hamiltonian).unwrap();
    let base = scenario_extension_table(&sc).unwrap().unwrap();
    let shifted: Vec<_> = (0..base.freedom.len())
        .step_by(5)
        .map(|k| base.shifted(0, k, &co(c, "x2")).unwrap())
        .collect();
    let mut tables = vec![&base];
    tables.extend(shifted.iter());
    let mut specials = sc.generators.clone();
    specials.push(ym_family_i(c, 1, &[1, 2, 3]));
    specials.push(ym_family_ii(c, 2));
    let equal = specials.iter().all(|a| {
        let ev = evolutions(s, &ham, &tables, a).unwrap();
        ev.iter().all(|e| same(e, &ev[0]))
    });
    out.check(
        equal,
        format!(
            "yang-mills n=3 su2: {} special forms evolve identically under {} tables",
            specials.len(),
            tables.len()
        ),
    );
    out
}

fn criterion_11() -> Outcome {
    let mut out = Outcome::default();
    for (n, alg) in [(3, Algebra::Su2), (3, Algebra::Abelian(1)), (2, Algebra::Abelian(2))] {
        let g = alg.dim();
        let ambient = yang_mills_ambient(n, g).unwrap();
        let amb = ambient.chart();
        let emb = yang_mills_embedding(amb, n, g).unwrap();
        let pb = pullback(&ambient, &emb).unwrap();
        // ambient tangent forms, with the printed generators
        let mut printed = vec![amb.volume()];
        for i in 1..=g {
            for mu in 1..=n {
                for nu in mu + 1..=n {
                    printed.push(
                        &dx(amb, &gauge_name(i, mu)).wedge(&dxv(amb, &[nu]))
                            - &dx(amb, &gauge_name(i, nu)).wedge(&dxv(amb, &[mu])),
                    );
                }
            }
            for mu in 1..=n {
                let mut f = Form::zero(n);
                for nu in 1..=n {
                    f = &f + &dx(amb, &gauge_momentum_name(i, mu, nu)).wedge(&dxv(amb, &[nu]));
                }
                printed.push(f);
            }
        }
        let tangent_ok = printed.iter().all(|f| {
            let r = f.map_coeffs(&|x| emb.pull_scalar(x));
            Span::new(n, pb.tangent_forms.clone()).contains(&r)
        }) && Span::new(n, printed.clone()).rank() == pb.tangent_forms.len();
        out.check(tangent_ok, format!("n={n} {alg:?}: tangent forms are the printed generators"));
        let s = &pb.structure;
        let c = s.chart();
        let mut forms = vec![c.volume()];
        let mut values = vec![MultiVector::zero(1)];
        for i in 1..=g {
            for mu in 1..=n {
                for nu in mu + 1..=n {
                    forms.push(
                        &dx(c, &gauge_name(i, mu)).wedge(&dxv(c, &[nu]))
                            - &dx(c, &gauge_name(i, nu)).wedge(&dxv(c, &[mu])),
                    );
                    values.push(-&pd(c, &constrained_momentum_name(i, mu, nu)));
                }
            }
            for mu in 1..=n {
                let mut f = Form::zero(n);
                for nu in 1..=n {
                    f = &f + &c.d_scalar(&pt(c, i, mu, nu)).wedge(&dxv(c, &[nu]));
                }
                forms.push(f);
                values.push(pd(c, &gauge_name(i, mu)));
            }
        }
        let span_ok = Span::new(n, forms.clone()).same_as(s.span(n));
        let table_ok = forms
            .iter()
            .zip(&values)
            .all(|(f, v)| s.sharp(n, f).map(|w| s.same_coset(1, &w, v)).unwrap_or(false));
        out.check(
            span_ok && table_ok,
            format!("n={n} {alg:?}: induced S^n and sharp_n on N match ({} generators)", forms.len()),
        );
    }
    out
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("canonical tables", criterion_1),
        ("bracket goldens", criterion_2),
        ("sharp~_1(dH) four-term expression", criterion_3),
        ("tower S^(n+1)[n] and Table 1", criterion_4),
        ("binomial lemmas", criterion_5),
        ("jacobi up to exact", criterion_6),
        ("HDW residuals", criterion_7),
        ("evolution identity", criterion_8),
        ("special forms and subalgebra condition", criterion_9),
        ("extension independence", criterion_10),
        ("Yang-Mills pullback", criterion_11),
    ];
    let mut regressed = false;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = f();
        println!(
            "{} criterion {}: {title} ({:.1}s)",
            if out.pass() { "PASS" } else { "FAIL" },
            k + 1,
            t0.elapsed().as_secs_f64()
        );
        for s in &out.subs {
            let tag = match (s.ok, s.deviation) {
                (true, _) => "ok",
                (false, true) => "deviation",
                (false, false) => "FAILED",
            };
            println!("    [{tag}] {}", s.text);
        }
        regressed |= out.regressed();
    }
    if regressed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
