use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use modlie::autos::{demushkin_endo, demushkin_lift, general_linear_group, induced_lie_auto, CheckMode};
use modlie::cartan::{
    build_classical, build_hamiltonian, build_jacobson_witt, standard_generic_torus, ClassicalKind, JacobsonWitt,
};
use modlie::io::{AlgebraFile, Meta};
use modlie::restrict::{p_envelope, semisimple_part, torus_generated};
use modlie::suites::{run_suite, SuiteConfig};
use modlie::weights::{decompose, verify_bracket_additivity, verify_weight_linearity, Module};
use modlie::{LieAlgebra, Matrix, PrimeField};

fn f5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

fn w1() -> &'static JacobsonWitt {
    static W: OnceLock<JacobsonWitt> = OnceLock::new();
    W.get_or_init(|| build_jacobson_witt(f5(), 1).unwrap())
}

fn w2() -> &'static JacobsonWitt {
    static W: OnceLock<JacobsonWitt> = OnceLock::new();
    W.get_or_init(|| build_jacobson_witt(f5(), 2).unwrap())
}

/// W(1;1), W(2;1), sl_2, gl_2, H(2;1)^(2).
fn catalog() -> &'static [LieAlgebra] {
    static C: OnceLock<Vec<LieAlgebra>> = OnceLock::new();
    C.get_or_init(|| {
        let f = f5();
        vec![
            w1().algebra.clone(),
            w2().algebra.clone(),
            build_classical(f, ClassicalKind::Sl, 2, false).unwrap(),
            build_classical(f, ClassicalKind::Gl, 2, false).unwrap(),
            build_hamiltonian(f, 2).unwrap(),
        ]
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ad_nilpotent(a: &LieAlgebra, u: &modlie::FVector) -> bool {
    let m = a.ad_matrix(u).pow(a.dim() as u64);
    m == Matrix::zeros(a.field(), a.dim(), a.dim())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ad_of_p_power_is_p_th_power_of_ad(seed in any::<u64>(), which in 0usize..5) {
        let a = &catalog()[which];
        let u = a.random_element(&mut rng(seed));
        let up = a.jacobson_p_power(&u).unwrap();
        prop_assert_eq!(a.ad_matrix(&up), a.ad_matrix(&u).pow(5));
    }

    #[test]
    fn jacobson_matches_derivation_composition(seed in any::<u64>(), two in any::<bool>()) {
        let w = if two { w2() } else { w1() };
        let u = w.algebra.random_element(&mut rng(seed));
        prop_assert_eq!(w.algebra.jacobson_p_power(&u).unwrap(), w.composition_p_power(&u));
    }

    #[test]
    fn centralizer_contains_center(seed in any::<u64>(), which in 0usize..5, k in 1usize..3) {
        let a = &catalog()[which];
        let mut r = rng(seed);
        let gens: Vec<_> = (0..k).map(|_| a.random_element(&mut r)).collect();
        prop_assert!(a.center().is_subspace_of(&a.centralizer(&a.span(&gens))));
    }

    #[test]
    fn derived_series_strictly_decreases(seed in any::<u64>(), which in 0usize..5) {
        let a = &catalog()[which];
        let mut r = rng(seed);
        let s = a.subalgebra_closure(&[a.random_element(&mut r), a.random_element(&mut r)]);
        let series = a.derived_series(&s).unwrap();
        for pair in series.windows(2) {
            prop_assert!(pair[1].dim() < pair[0].dim());
        }
        let last = series.last().unwrap();
        prop_assert_eq!(a.bracket_subspaces(last, last).dim(), last.dim());
    }

    #[test]
    fn semisimple_part_is_idempotent_with_nilpotent_rest(seed in any::<u64>(), which in 0usize..4) {
        let a = &catalog()[which];
        let u = a.random_element(&mut rng(seed));
        let s = semisimple_part(a, &u).unwrap();
        prop_assert_eq!(semisimple_part(a, &s).unwrap(), s.clone());
        let f = a.field();
        prop_assert!(ad_nilpotent(a, &f.sub_vectors(&u, &s)));
    }

    #[test]
    fn generated_tori_pass_checks_and_respect_mu(seed in any::<u64>(), which in 0usize..4) {
        let a = &catalog()[which];
        let u = a.random_element(&mut rng(seed));
        let s = semisimple_part(a, &u).unwrap();
        let t = torus_generated(a, &s).unwrap();
        prop_assert!(t.check(a).unwrap().passed());
        let mu = [1, 2, 1, 2][which];
        prop_assert!(t.dim() <= mu);
    }

    #[test]
    fn p_envelope_is_idempotent(seed in any::<u64>(), which in 0usize..5) {
        let a = &catalog()[which];
        let s = a.subalgebra_closure(&[a.random_element(&mut rng(seed))]);
        let env = p_envelope(a, &s).unwrap();
        prop_assert!(s.is_subspace_of(&env.closure));
        prop_assert_eq!(p_envelope(a, &env.closure).unwrap().closure, env.closure);
    }

    #[test]
    fn weight_spaces_partition_and_are_linear(seed in any::<u64>(), which in 0usize..5) {
        let a = &catalog()[which];
        let u = a.random_element(&mut rng(seed));
        let t = torus_generated(a, &semisimple_part(a, &u).unwrap()).unwrap();
        let wd = decompose(a, &t, Module::Adjoint).unwrap();
        prop_assert_eq!(wd.table.values().sum::<usize>() + wd.zero_space.dim(), a.dim());
        prop_assert!(verify_weight_linearity(a, &wd));
        prop_assert!(verify_bracket_additivity(a, &wd));
    }

    #[test]
    fn catalog_round_trips(which in 0usize..5) {
        let a = &catalog()[which];
        let file = AlgebraFile::from_algebra(a, Meta::default());
        let back = AlgebraFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(&back.to_algebra().unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lifts_are_restricted_automorphisms(seed in any::<u64>(), k in 0usize..480) {
        let w = w2();
        let g = &general_linear_group(w.algebra.field(), 2)[k];
        let lift = demushkin_lift(w, g).unwrap();
        let check = lift.check(w, CheckMode::Sampled(100), &mut rng(seed));
        prop_assert!(check.passed(), "{:?}", check);
    }

    #[test]
    fn induced_respects_composition(i in 0usize..480, j in 0usize..480) {
        let w = w2();
        let group = general_linear_group(w.algebra.field(), 2);
        let e1 = demushkin_endo(&w.ring, &group[i]).unwrap();
        let e2 = demushkin_endo(&w.ring, &group[j]).unwrap();
        let a1 = induced_lie_auto(w, &e1).unwrap();
        let a2 = induced_lie_auto(w, &e2).unwrap();
        let a12 = induced_lie_auto(w, &e1.compose(&e2)).unwrap();
        prop_assert_eq!(a12.matrix, a1.compose(&a2).matrix);
    }

    #[test]
    fn restriction_is_multiplicative(i in 0usize..480, j in 0usize..480) {
        let w = w2();
        let t0 = standard_generic_torus(w).unwrap();
        let group = general_linear_group(w.algebra.field(), 2);
        let r = |m: &Matrix| demushkin_lift(w, m).unwrap().restriction_to_torus(&t0).unwrap();
        prop_assert_eq!(r(&group[i].mul(&group[j])), r(&group[i]).mul(&r(&group[j])));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn reports_are_deterministic(seed in any::<u64>(), suite in prop::sample::select(vec!["jacobson", "fibers", "transport"])) {
        let cfg = SuiteConfig { seed, restarts: 8, ..SuiteConfig::default() };
        let a = run_suite(suite, &cfg, false).unwrap();
        let b = run_suite(suite, &cfg, true).unwrap();
        prop_assert_eq!(a.without_timing(), b.without_timing());
    }
}
