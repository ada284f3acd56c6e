use num_complex::Complex64;
use proptest::prelude::*;

use hardylab::fixtures::{fixture_rng, random_band_limited, random_laurent, random_polynomial, random_unimodular_tuple};
use hardylab::{
    build_invariant, decompose_mod_n, is_simply_invariant, p_norm, synthesize, CircleGrid, InvarianceStatus,
    LaurentPoly, NormFunctional, RotationNorm, StructureFit, UnimodularTuple, Window,
};

fn grid() -> CircleGrid {
    CircleGrid::new(256).unwrap()
}

fn norms() -> Vec<NormFunctional> {
    vec![
        NormFunctional::p(1.0).unwrap(),
        NormFunctional::p(3.0).unwrap(),
        NormFunctional::Sup,
        NormFunctional::orlicz_power(2.5).unwrap(),
        NormFunctional::orlicz_exp(),
    ]
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mod_n_round_trip_is_exact(seed in any::<u64>(), n in 1usize..6, lo in -20i64..0, len in 1i64..40) {
        let p = random_laurent(&mut fixture_rng(seed, 0), Window::new(lo, lo + len).unwrap());
        let d = decompose_mod_n(&p, n).unwrap();
        prop_assert!(d.supports_in_nz());
        prop_assert!(d.reconstruct().unwrap().distance(&p) <= 1e-12);
    }

    #[test]
    fn mod_n_round_trip_on_grid(seed in any::<u64>(), n in 1usize..6) {
        let f = random_band_limited(&mut fixture_rng(seed, 0), 40, grid()).unwrap();
        let back = decompose_mod_n(&f, n).unwrap().reconstruct().unwrap();
        prop_assert!(back.max_distance(&f).unwrap() <= 1e-12);
    }

    #[test]
    fn norms_are_rotation_invariant(seed in any::<u64>(), k in 0usize..256) {
        let f = random_band_limited(&mut fixture_rng(seed, 0), 12, grid()).unwrap();
        let g = f.rotate_nodes(k);
        for alpha in norms() {
            let gap = relative_gap(alpha.eval(&f).unwrap(), alpha.eval(&g).unwrap());
            prop_assert!(gap <= 1e-12, "{} changed by {gap:e}", alpha.label());
        }
    }

    #[test]
    fn monomial_multiplication_is_isometric(seed in any::<u64>(), k in -30i64..30) {
        let f = random_band_limited(&mut fixture_rng(seed, 0), 12, grid()).unwrap();
        let g = f.shift(k);
        for alpha in norms() {
            let gap = relative_gap(alpha.eval(&f).unwrap(), alpha.eval(&g).unwrap());
            prop_assert!(gap <= 1e-10, "{} changed by {gap:e}", alpha.label());
        }
    }

    #[test]
    fn norms_are_homogeneous_and_subadditive(seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let mut rng = fixture_rng(seed, 0);
        let f = random_band_limited(&mut rng, 10, grid()).unwrap();
        let g = random_band_limited(&mut rng, 10, grid()).unwrap();
        let c = Complex64::new(re, im);
        prop_assume!(c.norm() > 1e-3);
        for alpha in norms() {
            let af = alpha.eval(&f).unwrap();
            let scaled = alpha.eval(&f.scale(c)).unwrap();
            prop_assert!(relative_gap(scaled, c.norm() * af) <= 1e-9, "{} scaling", alpha.label());
            let sum = alpha.eval(&f.add(&g).unwrap()).unwrap();
            prop_assert!(sum <= af + alpha.eval(&g).unwrap() + 1e-9, "{} triangle", alpha.label());
        }
    }

    #[test]
    fn p_norms_increase_with_p(seed in any::<u64>()) {
        let f = random_band_limited(&mut fixture_rng(seed, 0), 10, grid()).unwrap();
        let values: Vec<f64> = [1.0, 1.5, 2.0, 3.0, 6.0].iter().map(|&p| p_norm(&f, p).unwrap()).collect();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-12)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn built_subspaces_are_invariant_and_contain_their_products(
        seed in any::<u64>(),
        n in 1usize..4,
        r_choice in 0usize..3,
        with_kernel in any::<bool>(),
    ) {
        let r = r_choice % n + 1;
        let mut rng = fixture_rng(seed, 0);
        let t = random_unimodular_tuple(&mut rng, n, r, 2);
        let kappas = if with_kernel && r < n { t.kernel_vectors() } else { Vec::new() };
        let tuple = UnimodularTuple::from_laurent(n, t.phis.clone(), grid()).unwrap();
        let step = n as i64;
        let window = Window::new(-step, 10 * step).unwrap();
        let m = build_invariant(&tuple, &kappas, window).unwrap();

        let report = is_simply_invariant(&m, n, 1e-9);
        prop_assert!(matches!(report.status, InvarianceStatus::Simply | InvarianceStatus::Doubly), "{:?}", report.message);

        let fit = StructureFit::new(&m, &tuple).unwrap();
        let kernel_dim = fit.fit(&LaurentPoly::zero(), 1e-9).kernel_dim;
        prop_assert_eq!(kernel_dim == 0, kappas.is_empty());
        for j in 0..r {
            let h = random_polynomial(&mut rng, 3);
            let h = LaurentPoly::from_terms(h.iter().map(|(k, c)| (k * step, c)));
            let f = &t.phis[j] * &h;
            if f.supported_in(&window) {
                prop_assert!(m.contains(&f, 1e-9));
                let member = fit.fit(&f, 1e-9);
                prop_assert!(member.pass, "residual {:e}", member.residual);
                prop_assert!(member.h.iter().all(|hj| hj.iter().all(|(k, _)| k >= 0 && k % step == 0)));
            }
        }
        for kappa in &kappas {
            prop_assert!(m.contains(kappa, 1e-9));
        }
        let basis = m.basis();
        if let Some(b) = basis.first() {
            let g = synthesize(b, grid()).unwrap();
            prop_assert!(g.to_laurent().restrict(&window).distance(b) <= 1e-12);
        }
    }
}
