use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use rhs_lab::harness::rng::interior_vector;
use rhs_lab::hermite::HermiteModel;
use rhs_lab::integrator::{self, DualPairing, IntegrableFamily};
use rhs_lab::lie::{GroupElement, X3Sign};
use rhs_lab::linalg::{self, c, CVector};
use rhs_lab::nilpotent::{block_generators, rep_operator};
use rhs_lab::scale::build_scale_chain;
use rhs_lab::semigroup::resolvent_matrix;

const N: usize = 32;

fn vector(seed: u64, dim: usize, support: usize) -> CVector {
    interior_vector(&mut ChaCha20Rng::seed_from_u64(seed), dim, support)
}

fn coord(r: f64) -> impl Strategy<Value = f64> {
    -r..=r
}

fn element(r: f64) -> impl Strategy<Value = GroupElement> {
    (coord(r), coord(r), coord(r)).prop_map(|(a, b, c)| GroupElement::new(a, b, c))
}

fn dyadic(r: f64) -> impl Strategy<Value = GroupElement> {
    let k = (r * 1024.0) as i64;
    let d = move || (-k..=k).prop_map(|v| v as f64 / 1024.0);
    (d(), d(), d()).prop_map(|(a, b, c)| GroupElement::new(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grams_are_invariant_under_rotation(theta in -3.2f64..3.2) {
        let model = HermiteModel::new(N, X3Sign::Consistent, 1e-8).unwrap();
        let (s, co) = theta.sin_cos();
        let o = DMatrix::from_row_slice(2, 2, &[co, -s, s, co]);
        let a = build_scale_chain(&model.scale_family, 2).unwrap();
        let b = build_scale_chain(&model.scale_family.recombined(&o), 2).unwrap();
        for n in 0..=2 {
            let d = linalg::max_abs(&(a.gram(n).unwrap() - b.gram(n).unwrap()));
            prop_assert!(d <= 1e-10 * linalg::max_abs(a.gram(n).unwrap()).max(1.0));
        }
    }

    #[test]
    fn scale_norms_are_nested_seminorms(seed in any::<u64>(), k in -3.0f64..3.0) {
        let model = HermiteModel::new(N, X3Sign::Consistent, 1e-8).unwrap();
        let chain = build_scale_chain(&model.scale_family, 3).unwrap();
        let (phi, psi) = (vector(seed, N, 8), vector(seed ^ 1, N, 8));
        for n in 0..3 {
            let here = chain.norm(&phi, n).unwrap();
            let up = chain.norm(&phi, n + 1).unwrap();
            prop_assert!(here <= up * (1.0 + 1e-12));
            for x in &model.scale_family.gens {
                prop_assert!(chain.norm(&(x * &phi), n).unwrap() <= up * (1.0 + 1e-12));
            }
            let scaled = chain.norm(&(&phi * c(k, 0.0)), n).unwrap();
            prop_assert!((scaled - k.abs() * here).abs() <= 1e-12 * here.max(1.0) * k.abs().max(1.0));
            let sum = chain.norm(&(&phi + &psi), n).unwrap();
            prop_assert!(sum <= (here + chain.norm(&psi, n).unwrap()) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn factored_action_is_unitary_and_multiplicative(g in element(0.5), h in element(0.5), seed in any::<u64>()) {
        let model = HermiteModel::new(N, X3Sign::Consistent, 1e-8).unwrap();
        let phi = vector(seed, N, 8);
        let tphi = model.factored(&g, &phi).unwrap();
        prop_assert!((tphi.norm() - 1.0).abs() < 1e-8);
        let lhs = model.factored(&g, &model.factored(&h, &phi).unwrap()).unwrap();
        let rhs = model.factored(&g.mul(&h), &phi).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-7);
    }

    #[test]
    fn resolvent_identity(l in 0.5f64..8.0, m in 0.5f64..8.0, il in -4.0f64..4.0) {
        let model = HermiteModel::new(N, X3Sign::Consistent, 1e-8).unwrap();
        let x = &model.family.gens[1];
        let (lambda, mu) = (c(l, il), c(m, 0.0));
        let rl = resolvent_matrix(x, lambda).unwrap();
        let rm = resolvent_matrix(x, mu).unwrap();
        let d = &rl - &rm - (&rl * &rm) * (mu - lambda);
        prop_assert!(linalg::max_abs(&d) < 1e-9);
    }

    #[test]
    fn block_representation_is_exact(g in dyadic(2.0), h in dyadic(2.0), t in -4.0f64..4.0) {
        let fam = block_generators(7).unwrap();
        let lhs = rep_operator(&g, &fam) * rep_operator(&h, &fam);
        prop_assert_eq!(lhs, rep_operator(&g.mul(&h), &fam));
        for x in &fam.gens {
            let e = linalg::expm(&(x * c(t, 0.0)));
            let affine = linalg::identity(fam.dim()) + x * c(t, 0.0);
            prop_assert!(linalg::max_abs(&(e - affine)) < 1e-12 * t.abs().max(1.0) * 49.0);
        }
    }

    #[test]
    fn chart_product_matches_block_representation(g in dyadic(2.0)) {
        let fam = block_generators(5).unwrap();
        let ifam = IntegrableFamily::blocks(&fam, 2.0).unwrap();
        let d = integrator::integrate_chart(&ifam, &g).unwrap() - rep_operator(&g, &fam);
        prop_assert!(linalg::max_abs(&d) < 1e-12);
    }

    #[test]
    fn dual_is_involutive(g in element(1.0), z in -2.0f64..2.0) {
        let fam = block_generators(4).unwrap();
        let chain = build_scale_chain(&fam.to_family(), 1).unwrap();
        let p = DualPairing { chain: &chain, n: 1 };
        let a = rep_operator(&g, &fam) * c(1.0, z);
        prop_assert_eq!(integrator::dual_operator(&integrator::dual_operator(&a, &p), &p), a);
    }

    #[test]
    fn conjugation_rows_match_series(t in -0.5f64..0.5, seed in any::<u64>()) {
        let ifam = IntegrableFamily::hermite(N, X3Sign::Consistent, 2.0).unwrap();
        let model = HermiteModel::new(N, X3Sign::Consistent, 1e-8).unwrap();
        let chain = build_scale_chain(&model.scale_family, 2).unwrap();
        let phi = vector(seed, N, 8);
        for i in 0..3 {
            for j in 0..3 {
                let rows = integrator::int_rows_check(&ifam, X3Sign::Consistent, i, j, t, &phi, &chain, 0).unwrap();
                let series = integrator::int_identity_check(&ifam, i, j, t, &phi, &chain, 0, 1e-15).unwrap();
                prop_assert!(rows < 1e-8 && series < 1e-8);
            }
        }
    }
}
