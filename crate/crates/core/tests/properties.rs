use num_complex::Complex;
use proptest::prelude::*;

use qsemis::hamiltonian::{cost_diagonal, ground_manifold, pauli_terms};
use qsemis::qaoa::qaoa_state;
use qsemis::qse::{build_kernels, build_kernels_full, generator_times, reencode_probability, solve_truncated};
use qsemis::{brute_force_mis, generate_er, Graph, ShotModel};

fn graph() -> impl Strategy<Value = Graph> {
    (2usize..=9, 0.1f64..0.9, any::<u64>()).prop_map(|(n, rho, seed)| generate_er(n, rho, seed).unwrap())
}

fn angles() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=3).prop_flat_map(|l| (prop::collection::vec(0.0..3.1, l), prop::collection::vec(0.0..3.1, l)))
}

/// Largest independent sets by checking every subset against the edge list.
fn naive_mis(g: &Graph) -> (usize, Vec<u64>) {
    let mut best = (0, Vec::new());
    for x in 0u64..1 << g.n() {
        if g.edges().iter().any(|&(u, v)| x >> u & 1 == 1 && x >> v & 1 == 1) {
            continue;
        }
        let size = x.count_ones() as usize;
        if size > best.0 {
            best = (size, vec![x]);
        } else if size == best.0 {
            best.1.push(x);
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_matches_naive_enumeration(g in graph()) {
        let o = brute_force_mis(&g).unwrap();
        let (size, sols) = naive_mis(&g);
        prop_assert_eq!(o.size, size);
        prop_assert_eq!(&o.solutions, &sols);
        let d = cost_diagonal(&g).unwrap();
        let (emin, ground) = ground_manifold(&d);
        prop_assert_eq!(emin, -(size as i32));
        // The independent members of the ground manifold are exactly the maximum independent sets.
        let independent: Vec<u64> = ground.iter().copied().filter(|&x| g.is_independent_mask(x)).collect();
        prop_assert_eq!(independent, sols);
    }

    #[test]
    fn pauli_terms_reconstruct_the_diagonal(g in graph()) {
        let d = cost_diagonal(&g).unwrap();
        let p = pauli_terms(&g);
        for (x, &e) in d.values().iter().enumerate() {
            prop_assert_eq!(p.eval(x as u64), (e as i64).into());
        }
    }

    #[test]
    fn subspace_energy_is_bracketed(g in graph(), (gm, bt) in angles(), k in 1usize..=8) {
        let d = cost_diagonal(&g).unwrap();
        let phi = qaoa_state::<f64>(&d, &gm, &bt).unwrap();
        let reference = phi.expect_diagonal(&d).unwrap();
        let kern = build_kernels(&phi, &d, &generator_times(k).unwrap(), &ShotModel::exact()).unwrap();
        let e = solve_truncated(&kern, 1e-3).unwrap().ground_energy();
        prop_assert!(e <= reference + 1e-9, "{} > {}", e, reference);
        prop_assert!(e >= d.min() as f64 - 1e-9);
    }

    #[test]
    fn doubling_generators_never_raises_energy(g in graph(), (gm, bt) in angles(), k in 1usize..=6) {
        let d = cost_diagonal(&g).unwrap();
        let phi = qaoa_state::<f64>(&d, &gm, &bt).unwrap();
        let solve = |k: usize| {
            let kern = build_kernels(&phi, &d, &generator_times(k).unwrap(), &ShotModel::exact()).unwrap();
            solve_truncated(&kern, 1e-8).unwrap().ground_energy()
        };
        let (small, large) = (solve(k), solve(2 * k));
        prop_assert!(large <= small + 1e-6, "K = {}: {} > {}", k, large, small);
    }

    #[test]
    fn toeplitz_kernels_match_pairwise_kernels(g in graph(), (gm, bt) in angles(), k in 1usize..=7) {
        let d = cost_diagonal(&g).unwrap();
        let phi = qaoa_state::<f64>(&d, &gm, &bt).unwrap();
        let grid = generator_times(k).unwrap();
        let a = build_kernels(&phi, &d, &grid, &ShotModel::exact()).unwrap();
        let b = build_kernels_full(&phi, &d, grid.times(), &ShotModel::exact()).unwrap();
        for i in 0..k {
            for j in 0..k {
                prop_assert!((a.s[(i, j)] - b.s[(i, j)]).norm() < 1e-10);
                prop_assert!((a.h[(i, j)] - b.h[(i, j)]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn reencode_probability_is_a_probability(
        (gm, bt) in angles(),
        f in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
    ) {
        prop_assume!(f.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3));
        let d = cost_diagonal(&Graph::cube()).unwrap();
        let phi = qaoa_state::<f64>(&d, &gm, &bt).unwrap();
        let kern = build_kernels(&phi, &d, &generator_times(4).unwrap(), &ShotModel::exact()).unwrap();
        let f: Vec<Complex<f64>> = f.into_iter().map(|(a, b)| Complex::new(a, b)).collect();
        let p = reencode_probability(&f, &kern).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p), "p = {}", p);
    }
}
