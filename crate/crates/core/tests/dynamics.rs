//! Field equations, connections and extension choices on the built-in
//! scenarios.

mod common;

use common::*;
use gradira::dynamics::{
    check_evolution, evolutions, gamma_h, hdw_residuals, is_special_hamiltonian,
    table_from_connection, Hamiltonian, Section,
};
use gradira::extensions::build_span_tower;
use gradira::sampler::Sampler;
use gradira::scenarios::*;
use gradira::{Form, Scalar};
use proptest::prelude::*;

/// `h d^n x - sum p^mu_i dy^i ^ d^(n-1)x_mu` for a given density.
fn with_density(sc: &Scenario, h: &Scalar) -> Form {
    let c = sc.chart();
    let vol = c.volume();
    &sc.hamiltonian + &vol.scale(&(h - &density(sc)))
}

#[test]
fn yang_mills_with_lorentzian_signature() {
    let (ok, count) = yang_mills_oracle(3, Algebra::Su2, Some(vec![-1, 1, 1]));
    assert!(ok);
    assert_eq!(count, 18);
    let (ok, _) = yang_mills_oracle(3, Algebra::Abelian(1), Some(vec![1, -1, -1]));
    assert!(ok);
}

#[test]
fn yang_mills_in_two_dimensions() {
    let (ok, count) = yang_mills_oracle(2, Algebra::Su2, None);
    assert!(ok);
    // one curvature component and two divergence equations per generator
    assert_eq!(count, 9);
}

#[test]
fn basic_density_does_not_change_the_equations() {
    let sc = reduced_canonical(2, 1).unwrap();
    let s = &sc.structure;
    let c = s.chart();
    let psi = Section::generic(c).unwrap();
    let shift = &(&co(c, "x1") * &co(c, "x1")) * &co(c, "x2");
    let base = Hamiltonian::new(s, &sc.hamiltonian).unwrap();
    let moved = Hamiltonian::new(s, &with_density(&sc, &(&density(&sc) + &shift))).unwrap();
    let r0 = hdw_residuals(s, &base, &psi, &sc.generators).unwrap();
    let r1 = hdw_residuals(s, &moved, &psi, &sc.generators).unwrap();
    assert_eq!(r0.len(), r1.len());
    for (a, b) in r0.iter().zip(&r1) {
        assert!(same(&a.residual(), &b.residual()));
    }
}

#[test]
fn connection_and_table_round_trip() {
    for sc in [
        reduced_canonical(2, 1).unwrap(),
        reduced_canonical(3, 2).unwrap(),
        yang_mills(3, Algebra::Su2, None).unwrap(),
    ] {
        let s = &sc.structure;
        let ham = Hamiltonian::new(s, &sc.hamiltonian).unwrap();
        let table = scenario_extension_table(&sc).unwrap().unwrap();
        let h = gamma_h(s, &ham, &table).unwrap();
        let back = table_from_connection(s, &ham, &h).unwrap();
        let h2 = gamma_h(s, &ham, &back).unwrap();
        for mu in 0..s.n() {
            assert!(same_mv(h.lift(mu), h2.lift(mu)), "{}", sc.name);
        }
        assert!(check_evolution(s, &ham, &back, &h2, &sc.generators).all_pass());
    }
}

#[test]
fn tower_counts_for_one_field_in_two_dimensions() {
    let sc = reduced_canonical(2, 1).unwrap();
    let t = build_span_tower(&sc.structure, 3, 2).unwrap();
    assert_eq!(t.candidates.len(), 10);
    assert_eq!(t.admitted.rank(), 7);
    assert_eq!(t.rejected.len(), 3);
    assert_eq!(t.freedom.len(), 3);
}

#[test]
fn corrected_regular_u_in_four_dimensions() {
    let sc = reduced_canonical(4, 1).unwrap();
    let s = &sc.structure;
    let c = s.chart();
    for q_deg in 0..=2usize {
        let mus: Vec<usize> = (1..=4 - q_deg).collect();
        let alpha = regular_special(c, 1, &mus);
        let u = regular_u_printed(c, 1, &mus).scale(&q(sign((4 - q_deg) % 2 == 1)));
        let rep = gradira::dynamics::check_subalgebra_condition(s, &alpha, &u).unwrap();
        assert!(rep.all_pass(), "q={q_deg}: {rep}");
    }
}

#[test]
fn yang_mills_closing_bracket_in_four_dimensions() {
    let sc = yang_mills(4, Algebra::Abelian(1), None).unwrap();
    let s = &sc.structure;
    let c = s.chart();
    let n = 4usize;
    for nus in [vec![1, 2, 3, 4], vec![1, 2, 4], vec![2, 3]] {
        let a = n + 2 - nus.len();
        let br = s.bracket(&ym_family_i(c, 1, &nus), &ym_family_ii(c, 1)).unwrap();
        let want = dxv(c, &nus).scale(&q(sign((n - a) % 2 == 1) * (n + 2 - a) as i64));
        assert!(same(&br, &want), "nus={nus:?}: {}", gradira::render::form(c, &br));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn evolution_holds_for_polynomial_densities(seed in any::<u64>()) {
        let sc = reduced_canonical(2, 1).unwrap();
        let s = &sc.structure;
        let c = s.chart();
        let mut r = Sampler::new(seed);
        let h = r.poly(c, 3, 4);
        let ham = Hamiltonian::new(s, &with_density(&sc, &h)).unwrap();
        let table = canonical_extension_table(&sc, 1).unwrap();
        let conn = gamma_h(s, &ham, &table).unwrap();
        let mut forms = sc.generators.clone();
        forms.push(Form::scalar(co(c, "y1")));
        forms.push(dxv(c, &[2]).scale(&r.poly(c, 2, 2).subs(&|v| match v {
            gradira::scalar::Var::Coord(n) if !n.starts_with('x') => Some(Scalar::one()),
            _ => None,
        })));
        let rep = check_evolution(s, &ham, &table, &conn, &forms);
        prop_assert!(rep.all_pass(), "{}", rep);
    }

    #[test]
    fn special_forms_ignore_polynomial_freedom(seed in any::<u64>()) {
        let sc = reduced_canonical(2, 1).unwrap();
        let s = &sc.structure;
        let c = s.chart();
        let mut r = Sampler::new(seed);
        let ham = Hamiltonian::new(s, &sc.hamiltonian).unwrap();
        let base = canonical_extension_table(&sc, 1).unwrap();
        let e = r.index(base.entries.len());
        let k = r.index(base.freedom.len());
        let shifted = base.shifted(e, k, &r.poly(c, 2, 3)).unwrap();
        for a in &sc.generators {
            prop_assert!(is_special_hamiltonian(s, a).unwrap());
            let ev = evolutions(s, &ham, &[&base, &shifted], a).unwrap();
            prop_assert!(same(&ev[0], &ev[1]));
        }
    }

    #[test]
    fn axioms_hold_for_any_sampling_seed(seed in any::<u64>()) {
        let sc = reduced_canonical(2, 1).unwrap();
        let rep = sc.structure.verify_axioms(&gradira::dirac::VerifyOptions { samples: 1, seed });
        prop_assert!(rep.all_pass(), "{}", rep);
    }
}

#[test]
fn contraction_and_symmetry_identities() {
    let sc = reduced_canonical(2, 1).unwrap();
    let s = &sc.structure;
    let c = s.chart();
    let h = &(&co(c, "y1") * &co(c, "y1")) + &(&co(c, "p11") * &co(c, "p21"));
    // no x dependence, so d/dx^mu are symmetries
    let theta = with_density(&sc, &h);
    let rep = gradira::extensions::check_extension_properties(
        s,
        None,
        &sc.generators,
        &[theta.clone(), c.d(&theta)],
    );
    assert!(rep.all_pass(), "{rep}");
    assert!(rep.get("invariance[a0,t0]").is_some());
    assert!(rep.get("contraction[t1]").is_some());
}
