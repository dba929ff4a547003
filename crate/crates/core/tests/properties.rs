use eof_core::conc_bounds::{concurrence_bounds, LowerFamilies};
use eof_core::densmat::{
    partial_trace, partial_transpose_a, pure_concurrence, purity, realign, schmidt_coefficients,
    trace_norm, von_neumann_entropy, BipartiteDensityMatrix, ComplexMatrix, SchmidtVector,
    Subsystem,
};
use eof_core::envelope::{alpha_beta, build_envelopes, f_value, segment_bounds};
use eof_core::eof_bounds::{eof_bounds, two_qubit_concurrence};
use eof_core::roof_oracle::{
    random_density_matrix, random_density_matrix_with, random_pure_state, random_unitary,
};
use eof_core::states::{example2_functionals, example2_state, werner};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 2usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_states_are_normalized_hermitian((m, n) in dims(), rank in 1usize..=16, seed in any::<u64>()) {
        let rank = rank.min(m * n);
        let rho = random_density_matrix(m, n, rank, seed).unwrap();
        for (which, d) in [(Subsystem::B, m), (Subsystem::A, n)] {
            let r = partial_trace(rho.matrix(), m, n, which).unwrap();
            prop_assert_eq!(r.rows(), d);
            prop_assert!(r.hermiticity_deviation() < 1e-12);
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_is_trace_preserving_involution((m, n) in dims(), seed in any::<u64>()) {
        let rho = random_density_matrix(m, n, m * n, seed).unwrap();
        let pt = partial_transpose_a(rho.matrix(), m, n).unwrap();
        prop_assert!((pt.trace() - rho.matrix().trace()).norm() < 1e-12);
        let back = partial_transpose_a(&pt, m, n).unwrap();
        prop_assert_eq!(back.max_abs_diff(rho.matrix()), 0.0);
        prop_assert!(trace_norm(&pt).unwrap() >= pt.trace().norm() - 1e-12);
    }

    #[test]
    fn realigned_product_has_factorized_norm((m, n) in dims(), seed in any::<u64>()) {
        let a = random_density_matrix(1, m, m, seed).unwrap();
        let b = random_density_matrix(1, n, n, seed ^ 0x5555).unwrap();
        let prod = a.matrix().kron(b.matrix());
        let r = realign(&prod, m, n).unwrap();
        let want = (purity(a.matrix()).unwrap() * purity(b.matrix()).unwrap()).sqrt();
        prop_assert!((trace_norm(&r).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn pure_state_entropy_and_concurrence_agree((m, n) in dims(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_pure_state(&mut rng, m * n);
        let rho = BipartiteDensityMatrix::from_pure(&psi, m, n).unwrap();
        let mu = schmidt_coefficients(&psi, m, n).unwrap();
        let ra = rho.reduced_a();
        prop_assert!((von_neumann_entropy(&ra).unwrap() - mu.entropy()).abs() < 1e-10);
        let c = (2.0 * (1.0 - purity(&ra).unwrap())).sqrt();
        prop_assert!((c - pure_concurrence(&mu)).abs() < 1e-10);

        // both sides collapse to the pure concurrence
        let b = concurrence_bounds(&rho, LowerFamilies::all()).unwrap();
        prop_assert!((b.c_lower() - c).abs() < 1e-9);
        prop_assert!((b.c_upper() - c).abs() < 1e-9);
    }

    #[test]
    fn mixed_bounds_are_ordered((m, n) in dims(), rank in 1usize..=16, seed in any::<u64>()) {
        let rank = rank.min(m * n);
        let rho = random_density_matrix(m, n, rank, seed).unwrap();
        let b = concurrence_bounds(&rho, LowerFamilies::all()).unwrap();
        prop_assert!(b.c_lower() >= 0.0);
        prop_assert!(b.c_lower() <= b.c_upper() + 1e-9);
    }

    #[test]
    fn two_qubit_concurrence_is_sandwiched(rank in 1usize..=4, seed in any::<u64>()) {
        let rho = random_density_matrix(2, 2, rank, seed).unwrap();
        let b = concurrence_bounds(&rho, LowerFamilies::all()).unwrap();
        let c = two_qubit_concurrence(&rho).unwrap();
        prop_assert!(b.c_lower() <= c + 1e-9 && c <= b.c_upper() + 1e-9);
    }

    #[test]
    fn werner_states_are_unitarily_invariant(d in 2usize..=4, f in -1.0f64..=1.0, seed in any::<u64>()) {
        let rho = werner(d, f).unwrap();
        let u = random_unitary(&mut ChaCha8Rng::seed_from_u64(seed), d);
        let uu = u.kron(&u);
        let rotated = &(&uu * rho.matrix()) * &uu.adjoint();
        prop_assert!(rotated.max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn example2_closed_forms_hold(a in 0.0f64..=1.0, x in 0.0f64..=1.0) {
        let rho = example2_state(a, x).unwrap();
        let pa = purity(&rho.reduced_a()).unwrap();
        let f = example2_functionals(a, x).unwrap();
        prop_assert!((rho.purity() - pa - f.purity_gap).abs() < 1e-12);
        prop_assert!((1.0 - pa - f.one_minus_purity_a).abs() < 1e-12);
    }

    #[test]
    fn alpha_beta_meet_constraints(n1 in 1usize..=5, n2 in 1usize..=5, u in 0.01f64..0.99) {
        let t = n1 + n2 - 1;
        let (lo, hi) = segment_bounds(t);
        let c = lo + u * (hi - lo);
        let (alpha, beta) = alpha_beta(n1, n2, c).unwrap();
        let (k1, k2) = (n1 as f64, n2 as f64);
        prop_assert!((k1 * alpha + k2 * beta - 1.0).abs() < 1e-12);
        prop_assert!((k1 * alpha * alpha + k2 * beta * beta - (1.0 - c * c / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn f_value_is_a_schmidt_entropy(n1 in 1usize..=4, n2 in 1usize..=4, u in 0.01f64..0.99) {
        let t = n1 + n2 - 1;
        let (lo, hi) = segment_bounds(t);
        let c = lo + u * (hi - lo);
        let (alpha, beta) = alpha_beta(n1, n2, c).unwrap();
        let mut w = vec![alpha; n1];
        w.extend(std::iter::repeat_n(beta, n2));
        let mu = SchmidtVector::new(w).unwrap();
        let diag = ComplexMatrix::from_real_diagonal(mu.coeffs());
        prop_assert!((f_value(n1, n2, c).unwrap() - von_neumann_entropy(&diag).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn eof_bounds_are_ordered_for_random_states() {
    let tables: Vec<_> = (2..=4).map(|m| build_envelopes(m, 1024).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..200 {
        let (m, n) = (2 + k % 3, 2 + (k / 3) % 3);
        let rank = 1 + k % (m * n);
        let rho = random_density_matrix_with(&mut rng, m, n, rank).unwrap();
        let r = eof_bounds(&rho, &tables[m.min(n) - 2]).unwrap();
        assert!(r.eof_lower >= 0.0);
        assert!(r.eof_lower <= r.eof_upper + 1e-9, "k={k}: {r:?}");
        assert!(r.eof_upper <= (m.min(n) as f64).ln() + 1e-9);
    }
}

#[test]
fn bounds_are_monotone_in_concurrence() {
    // ε and η are nondecreasing, so larger concurrence bounds never lower them
    let table = build_envelopes(3, 1024).unwrap();
    let mut prev = (0.0, 0.0);
    for k in 0..=400 {
        let c = table.c_max * k as f64 / 400.0;
        let now = (table.epsilon(c).unwrap(), table.eta(c).unwrap());
        assert!(now.0 >= prev.0 - 1e-12 && now.1 >= prev.1 - 1e-12);
        prev = now;
    }
}
