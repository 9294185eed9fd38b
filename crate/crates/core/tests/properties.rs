use proptest::prelude::*;

use ztensor::harness::{gen_z_tensor, GenSpec};
use ztensor::io::{from_json, from_plain, to_json, to_plain};
use ztensor::similarity::diag_similar_transform;
use ztensor::spectra::{brute_force_h_eigenpairs, char_poly_dim2, perron_pair, residual, SolverOptions};
use ztensor::structure::{
    find_weak_odd_bipartitions, is_even_bipartite, is_odd_bipartite, is_weakly_even_bipartite, is_weakly_odd_bipartite,
};
use ztensor::{compose, z_decompose, IndexSet, Sign, Tensor64};

/// Random tensor with 1-based entries of order `2..=max_order` and
/// dimension `1..=max_dim`.
fn tensor(max_order: usize, max_dim: usize) -> impl Strategy<Value = Tensor64> {
    (2..=max_order, 1..=max_dim).prop_flat_map(|(m, n)| {
        let entry = (prop::collection::vec(1..=n, m), -2.0..2.0f64);
        prop::collection::btree_map(entry.0, entry.1, 0..12).prop_map(move |raw| Tensor64::new(m, n, raw).unwrap())
    })
}

fn same_shape_pair() -> impl Strategy<Value = (Tensor64, Tensor64)> {
    (2..=4usize, 1..=3usize).prop_flat_map(|(m, n)| {
        let entries = prop::collection::btree_map(prop::collection::vec(1..=n, m), -2.0..2.0f64, 0..10);
        (entries.clone(), entries).prop_map(move |(a, b)| (Tensor64::new(m, n, a).unwrap(), Tensor64::new(m, n, b).unwrap()))
    })
}

fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, n)
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

/// Symmetric Z-tensor with weakly irreducible `C` and the given seed.
fn z_tensor(order: usize, dim: usize, seed: u64) -> Tensor64 {
    gen_z_tensor(&GenSpec {
        symmetric: true,
        require_weakly_irreducible: true,
        density: 0.5,
        ..GenSpec::new(order, dim, seed)
    })
    .unwrap()
}

proptest! {
    #[test]
    fn apply_is_homogeneous(t in tensor(4, 3), c in -3.0..3.0f64, seed in any::<u64>()) {
        let x: Vec<f64> = (0..t.dim()).map(|i| ((seed >> (8 * i)) & 0xff) as f64 / 64.0 - 2.0).collect();
        let cx: Vec<f64> = x.iter().map(|v| c * v).collect();
        let lhs = t.apply(&cx).unwrap();
        let rhs: Vec<f64> = t.apply(&x).unwrap().iter().map(|v| c.powi(t.order() as i32 - 1) * v).collect();
        prop_assert!(close(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn apply_is_linear_in_the_tensor((a, b) in same_shape_pair(), x in vector(3)) {
        let x = &x[..a.dim()];
        let sum = a.add(&b).unwrap().apply(x).unwrap();
        let parts: Vec<f64> = a.apply(x).unwrap().iter().zip(b.apply(x).unwrap()).map(|(p, q)| p + q).collect();
        prop_assert!(close(&sum, &parts, 1e-9));
    }

    #[test]
    fn files_round_trip(t in tensor(5, 4)) {
        prop_assert_eq!(from_json(&to_json(&t)).unwrap(), t.clone());
        if !t.is_zero() {
            prop_assert_eq!(from_plain(&to_plain(&t)).unwrap(), t);
        }
    }

    #[test]
    fn z_form_round_trip(seed in any::<u64>(), m in 2..=4usize, n in 2..=4usize) {
        let a = gen_z_tensor(&GenSpec::new(m, n, seed)).unwrap();
        let z = z_decompose(&a).unwrap();
        prop_assert_eq!(compose(&z.d, &z.c, Sign::Minus).unwrap(), a.clone());
        prop_assert_eq!(compose(&z.d, &z.c, Sign::Plus).unwrap(), a.abs());
    }

    #[test]
    fn bipartite_duality_at_odd_order(t in tensor(5, 4), bits in any::<u64>()) {
        prop_assume!(t.order() % 2 == 1 && t.dim() >= 2);
        let n = t.dim();
        let v = IndexSet::from_bits(n, 1 + bits % ((1 << n) - 2));
        let vc = v.complement();
        prop_assert_eq!(is_weakly_even_bipartite(&t, &v).unwrap(), is_weakly_odd_bipartite(&t, &vc).unwrap());
        prop_assert_eq!(is_even_bipartite(&t, &v).unwrap(), is_odd_bipartite(&t, &vc).unwrap());
    }

    #[test]
    fn detector_matches_exhaustive_search(t in tensor(5, 5)) {
        prop_assume!(t.dim() >= 2);
        let c = t.filter(|idx, _| !idx.is_diagonal());
        let mut found = find_weak_odd_bipartitions(&c, usize::MAX);
        let mut expected: Vec<IndexSet> = IndexSet::all_proper(t.dim())
            .into_iter()
            .filter(|v| is_weakly_odd_bipartite(&c, v).unwrap())
            .collect();
        found.sort_by_key(|s| s.to_one_based());
        expected.sort_by_key(|s| s.to_one_based());
        prop_assert_eq!(found, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn no_eigenvalue_of_a_exceeds_rho_of_abs(seed in any::<u64>(), m in 3..=4usize, n in 2..=3usize) {
        let a = z_tensor(m, n, seed);
        let opts = SolverOptions::default();
        let rho = perron_pair(&a.abs(), &opts).unwrap().lambda;
        for p in brute_force_h_eigenpairs(&a, &opts).unwrap() {
            prop_assert!(p.lambda <= rho + 1e-6, "λ = {} > ρ = {}", p.lambda, rho);
        }
    }

    #[test]
    fn shift_moves_every_eigenpair(seed in any::<u64>(), a in 0.1..2.0f64, neg in any::<bool>(), b in -2.0..2.0f64) {
        let a = if neg { -a } else { a };
        let t = z_tensor(3, 2, seed);
        let opts = SolverOptions::default();
        let shifted = t.shift(&a, &b);
        for p in brute_force_h_eigenpairs(&t, &opts).unwrap() {
            prop_assert!(residual(&shifted, a * (p.lambda + b), &p.x).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn similarity_transports_eigenpairs(seed in any::<u64>(), p in prop::collection::vec(0.25..4.0f64, 3), signs in any::<u8>()) {
        let a = z_tensor(4, 3, seed).abs();
        let p: Vec<f64> = p.iter().enumerate().map(|(i, v)| if signs >> i & 1 == 1 { -v } else { *v }).collect();
        let b = diag_similar_transform(&a, &p).unwrap();
        let pair = perron_pair(&a, &SolverOptions::default()).unwrap();
        // B y = λ y^{[m-1]} with y = P^{-1} x
        let y: Vec<f64> = pair.x.iter().zip(&p).map(|(x, q)| x / q).collect();
        prop_assert!(residual(&b, pair.lambda, &y).unwrap() <= 1e-7);
    }

    #[test]
    fn dimension_two_oracle_values_are_char_poly_roots(seed in any::<u64>(), m in 3..=4usize) {
        let a = z_tensor(m, 2, seed);
        let roots = char_poly_dim2(&a).unwrap().real_roots();
        for p in brute_force_h_eigenpairs(&a, &SolverOptions::default()).unwrap() {
            let nearest = roots.iter().map(|r| (r - p.lambda).abs()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest <= 1e-5, "λ = {} not among {:?}", p.lambda, roots);
        }
    }
}
