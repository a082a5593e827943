//! Property-based invariant checks across the linear-algebra kernel, state
//! representations, measures, and convex-roof machinery. Inputs are drawn
//! through the crate's own seeded generators so every failure is replayable
//! from the proptest-reported seed values.

use proptest::prelude::*;

use quent_core::linalg::{
    hermitian_eigensystem, hermitian_eigenvalues, singular_value_decomposition, trace_norm,
    Complex64, ComplexMatrix, DEFAULT_HERMITICITY_TOL,
};
use quent_core::measures::{
    chen_gap, concurrence_pure, concurrence_schmidt, negativity, negativity_operator,
    negativity_schmidt, qutrit_residual, symmetric_invariants,
};
use quent_core::rng::SplitMix64;
use quent_core::roof::{convex_roof, ensemble_from_isometry, OptimizerConfig, RoofMeasure};
use quent_core::states::{
    apply_local_unitaries, coefficient_matrix, from_schmidt, partial_transpose, random_mixed_state,
    random_pure_state, random_schmidt_vector, random_unitary, reduced_density, schmidt_decompose,
    BipartiteDims, DensityMatrix, PureState, Subsystem,
};

fn dims(m: usize, n: usize) -> BipartiteDims {
    BipartiteDims::new(m, n).unwrap()
}

fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| rng.complex_normal());
    let adj = g.adjoint();
    g.add(&adj).unwrap().scale(Complex64::new(0.5, 0.0))
}

/// Matrix with i.i.d. entries uniform on the complex unit disk.
fn random_unit_disk_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    ComplexMatrix::from_fn(rows, cols, |_, _| loop {
        let re = 2.0 * rng.uniform() - 1.0;
        let im = 2.0 * rng.uniform() - 1.0;
        if re * re + im * im <= 1.0 {
            return Complex64::new(re, im);
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_eigensystem_reconstructs(dim in 1usize..=16, seed: u64) {
        let h = random_hermitian(dim, seed);
        let (evals, vecs) = hermitian_eigensystem(&h, DEFAULT_HERMITICITY_TOL).unwrap();
        let lambda = ComplexMatrix::from_real_diagonal(&evals);
        let rebuilt = vecs.matmul(&lambda).unwrap().matmul(&vecs.adjoint()).unwrap();
        prop_assert!(h.max_abs_diff(&rebuilt).unwrap() <= 1e-9);
        // Eigenpair residuals H·v = λ·v and orthonormality within 10·tol.
        for (j, &lam) in evals.iter().enumerate() {
            let v = vecs.column(j);
            let hv = h.matvec(&v).unwrap();
            for (hv_i, v_i) in hv.iter().zip(&v) {
                prop_assert!((hv_i - v_i.scale(lam)).norm() <= 1e-9);
            }
        }
        let gram = vecs.adjoint().matmul(&vecs).unwrap();
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)).unwrap() <= 1e-9);
        // Sorted descending.
        for w in evals.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn svd_reconstructs(rows in 1usize..=16, cols in 1usize..=16, seed: u64) {
        let a = random_unit_disk_matrix(rows, cols, seed);
        let (u, sigma, v) = singular_value_decomposition(&a).unwrap();
        let rebuilt = u
            .matmul(&ComplexMatrix::from_real_diagonal(&sigma))
            .unwrap()
            .matmul(&v.adjoint())
            .unwrap();
        prop_assert!(a.max_abs_diff(&rebuilt).unwrap() <= 1e-10);
        let k = rows.min(cols);
        let iu = u.adjoint().matmul(&u).unwrap();
        let iv = v.adjoint().matmul(&v).unwrap();
        prop_assert!(iu.max_abs_diff(&ComplexMatrix::identity(k)).unwrap() <= 1e-10);
        prop_assert!(iv.max_abs_diff(&ComplexMatrix::identity(k)).unwrap() <= 1e-10);
        for w in sigma.windows(2) {
            prop_assert!(w[0] >= w[1] && w[1] >= 0.0);
        }
    }

    #[test]
    fn trace_norm_dominates_trace(dim in 1usize..=12, seed: u64) {
        let h = random_hermitian(dim, seed);
        let tn = trace_norm(&h, DEFAULT_HERMITICITY_TOL).unwrap();
        prop_assert!(tn >= h.trace().re.abs() - 1e-12);
    }

    #[test]
    fn trace_norm_of_psd_equals_trace(m in 1usize..=3, n in 1usize..=3, seed: u64) {
        let d = dims(m, n);
        let rho = random_mixed_state(d, 1 + (seed % d.total() as u64) as usize, seed).unwrap();
        let tn = trace_norm(rho.matrix(), DEFAULT_HERMITICITY_TOL).unwrap();
        prop_assert!((tn - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn spectrum_invariant_under_unitary_conjugation(dim in 1usize..=8, seed: u64) {
        let h = random_hermitian(dim, seed);
        let p = random_unitary(dim, seed ^ 0xabcdef).unwrap();
        let conj = p.matmul(&h).unwrap().matmul(&p.adjoint()).unwrap();
        let a = hermitian_eigenvalues(&h, DEFAULT_HERMITICITY_TOL).unwrap();
        let b = hermitian_eigenvalues(&conj, 1e-8).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schmidt_round_trip(d in 1usize..=8, seed: u64) {
        let k = random_schmidt_vector(d, seed).unwrap();
        let psi = from_schmidt(&k, dims(d, d)).unwrap();
        let back = schmidt_decompose(&psi).unwrap();
        for (a, b) in k.coefficients().iter().zip(back.coefficients()) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn purity_equals_quartic_schmidt_sum(m in 2usize..=4, n in 2usize..=4, seed: u64) {
        let psi = random_pure_state(dims(m, n), seed);
        let rho_a = reduced_density(&psi, Subsystem::A).unwrap();
        let k = schmidt_decompose(&psi).unwrap();
        let quartic: f64 = k.coefficients().iter().map(|x| x.powi(4)).sum();
        prop_assert!((rho_a.purity() - quartic).abs() <= 1e-10);
    }

    #[test]
    fn partial_transpose_involution_and_conservation(
        m in 2usize..=3,
        n in 2usize..=3,
        rank in 1usize..=4,
        seed: u64,
    ) {
        let d = dims(m, n);
        let rank = rank.min(d.total());
        let rho = random_mixed_state(d, rank, seed).unwrap();
        let pt = partial_transpose(&rho);
        prop_assert!(pt.hermiticity_deviation().unwrap() <= 1e-12);
        prop_assert!((pt.trace().re - 1.0).abs() <= 1e-12);
        let again = DensityMatrix::new(d, pt.clone());
        // ρ^{T_A} need not be a state, so transpose the raw matrix instead.
        drop(again);
        let back = ComplexMatrix::from_fn(d.total(), d.total(), |row, col| {
            let (i, j) = (row / n, row % n);
            let (k, l) = (col / n, col % n);
            pt.get(k * n + j, i * n + l)
        });
        prop_assert!(back.max_abs_diff(rho.matrix()).unwrap() == 0.0);
        // Spectrum stays inside the sanity window [−1/2, 1].
        let evals = hermitian_eigenvalues(&pt, 1e-9).unwrap();
        prop_assert!(evals[0] <= 1.0 + 1e-10);
        prop_assert!(*evals.last().unwrap() >= -0.5 - 1e-10);
    }

    #[test]
    fn schmidt_form_invariant_under_local_unitaries(d in 2usize..=4, seed: u64) {
        let psi = random_pure_state(dims(d, d), seed);
        let u = random_unitary(d, seed ^ 0x1111).unwrap();
        let v = random_unitary(d, seed ^ 0x2222).unwrap();
        let rotated = apply_local_unitaries(&psi, &u, &v).unwrap();
        let a = schmidt_decompose(&psi).unwrap();
        let b = schmidt_decompose(&rotated).unwrap();
        for (x, y) in a.coefficients().iter().zip(b.coefficients()) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn two_qubit_negativity_equals_concurrence(seed: u64) {
        let psi = random_pure_state(dims(2, 2), seed);
        let k = schmidt_decompose(&psi).unwrap();
        let c = concurrence_pure(&psi);
        let n = negativity_schmidt(&k).unwrap();
        let pair = 2.0 * k.coefficients()[0] * k.coefficients()[1];
        prop_assert!((n - c).abs() <= 1e-10);
        prop_assert!((n - pair).abs() <= 1e-10);
        prop_assert!((c - pair).abs() <= 1e-10);
    }

    #[test]
    fn trace_norm_negativity_matches_schmidt(m in 2usize..=4, n in 2usize..=4, seed: u64) {
        let psi = random_pure_state(dims(m, n), seed);
        let from_trace = negativity(&psi.projector()).unwrap();
        let from_schmidt_form = negativity_schmidt(&schmidt_decompose(&psi).unwrap()).unwrap();
        prop_assert!((from_trace - from_schmidt_form).abs() <= 1e-8);
    }

    #[test]
    fn operator_form_matches_pair_sum(d in 2usize..=10, seed: u64) {
        let k = random_schmidt_vector(d, seed).unwrap();
        let a = negativity_operator(&k).unwrap();
        let b = negativity_schmidt(&k).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn chen_bound_holds(d in 2usize..=8, seed: u64) {
        let k = random_schmidt_vector(d, seed).unwrap();
        prop_assert!(chen_gap(&k).unwrap() >= -1e-12);
    }

    #[test]
    fn qutrit_identity_holds(seed: u64) {
        let k = random_schmidt_vector(3, seed).unwrap();
        prop_assert!(qutrit_residual(&k).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn qutrit_triple_product_is_determinant(seed: u64) {
        let psi = random_pure_state(dims(3, 3), seed);
        let k = schmidt_decompose(&psi).unwrap();
        let triple: f64 = k.coefficients().iter().product();
        let m = coefficient_matrix(&psi);
        // 3x3 determinant by cofactor expansion.
        let det = m.get(0, 0) * (m.get(1, 1) * m.get(2, 2) - m.get(1, 2) * m.get(2, 1))
            - m.get(0, 1) * (m.get(1, 0) * m.get(2, 2) - m.get(1, 2) * m.get(2, 0))
            + m.get(0, 2) * (m.get(1, 0) * m.get(2, 1) - m.get(1, 1) * m.get(2, 0));
        prop_assert!((triple - det.norm()).abs() <= 1e-10);
    }

    #[test]
    fn measure_ranges(d in 2usize..=8, seed: u64) {
        let k = random_schmidt_vector(d, seed).unwrap();
        let n = negativity_schmidt(&k).unwrap();
        let c = concurrence_schmidt(&k);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&n));
        let cmax = (2.0 * (1.0 - 1.0 / d as f64)).sqrt();
        prop_assert!((-1e-12..=cmax + 1e-12).contains(&c));
    }

    #[test]
    fn two_coefficient_subspace_concurrence_capped(d in 2usize..=8, seed: u64) {
        // Exactly two nonzero Schmidt coefficients: C ≤ 1.
        let pair = random_schmidt_vector(2, seed).unwrap();
        let mut k = pair.coefficients().to_vec();
        k.resize(d, 0.0);
        let k = quent_core::states::SchmidtForm::new(k).unwrap();
        prop_assert!(concurrence_schmidt(&k) <= 1.0 + 1e-12);
    }

    #[test]
    fn measures_invariant_under_local_unitaries(d in 2usize..=4, seed: u64) {
        let psi = random_pure_state(dims(d, d), seed);
        let u = random_unitary(d, seed ^ 0x3333).unwrap();
        let v = random_unitary(d, seed ^ 0x4444).unwrap();
        let rotated = apply_local_unitaries(&psi, &u, &v).unwrap();

        let ka = schmidt_decompose(&psi).unwrap();
        let kb = schmidt_decompose(&rotated).unwrap();
        prop_assert!((concurrence_pure(&psi) - concurrence_pure(&rotated)).abs() <= 1e-9);
        let na = negativity_schmidt(&ka).unwrap();
        let nb = negativity_schmidt(&kb).unwrap();
        prop_assert!((na - nb).abs() <= 1e-9);
        let ia = symmetric_invariants(&ka);
        let ib = symmetric_invariants(&kb);
        for (x, y) in ia.values().iter().zip(ib.values()) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn roof_of_pure_state_matches_pure_measure(seed: u64, qutrit: bool) {
        let d = if qutrit { 3 } else { 2 };
        let psi = random_pure_state(dims(d, d), seed);
        let rho = psi.projector();
        let config = OptimizerConfig { restarts: 2, seed, ..OptimizerConfig::default() };
        for measure in [RoofMeasure::Concurrence, RoofMeasure::Negativity] {
            let expected = match measure {
                RoofMeasure::Concurrence => concurrence_pure(&psi),
                RoofMeasure::Negativity => {
                    negativity_schmidt(&schmidt_decompose(&psi).unwrap()).unwrap()
                }
            };
            let result = convex_roof(&rho, measure, &config).unwrap();
            prop_assert!((result.value - expected).abs() <= 1e-9);
        }
    }

    #[test]
    fn roof_below_eigendecomposition_average(rank in 2usize..=4, seed: u64) {
        let rho = random_mixed_state(dims(2, 2), rank, seed).unwrap();
        let eigen = ensemble_from_isometry(&rho, &ComplexMatrix::identity(rank)).unwrap();
        let eigen_avg = eigen.average(RoofMeasure::Concurrence).unwrap();
        let config = OptimizerConfig {
            restarts: 4,
            max_iterations: 300,
            seed,
            ..OptimizerConfig::default()
        };
        let result = convex_roof(&rho, RoofMeasure::Concurrence, &config).unwrap();
        prop_assert!(result.value <= eigen_avg + 1e-9);
        prop_assert!(result.value >= 0.0);
        // The returned ensemble is a genuine decomposition of ρ.
        prop_assert!(result.ensemble.reconstruction_error(&rho) <= 1e-8);
        let total_p: f64 = result.ensemble.members().iter().map(|(p, _)| p).sum();
        prop_assert!((total_p - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn roof_invariant_under_local_unitaries(rank in 2usize..=3, seed: u64) {
        let rho = random_mixed_state(dims(2, 2), rank, seed).unwrap();
        let u = random_unitary(2, seed ^ 0x5555).unwrap();
        let v = random_unitary(2, seed ^ 0x6666).unwrap();
        let uv = u.kron(&v);
        let rotated_matrix = uv.matmul(rho.matrix()).unwrap().matmul(&uv.adjoint()).unwrap();
        let rotated = DensityMatrix::new(dims(2, 2), rotated_matrix).unwrap();
        let config = OptimizerConfig {
            restarts: 6,
            max_iterations: 400,
            seed,
            ..OptimizerConfig::default()
        };
        let a = convex_roof(&rho, RoofMeasure::Concurrence, &config).unwrap();
        let b = convex_roof(&rotated, RoofMeasure::Concurrence, &config).unwrap();
        prop_assert!((a.value - b.value).abs() <= 3e-3, "{} vs {}", a.value, b.value);
    }
}

#[test]
fn pure_state_projector_round_trip() {
    let psi = random_pure_state(dims(2, 3), 9);
    let rho = psi.projector();
    let evals = rho.eigenvalues().unwrap();
    assert!((evals[0] - 1.0).abs() < 1e-12);
    assert!(evals[1].abs() < 1e-12);
    let _ = PureState::new(psi.dims(), psi.amplitudes().to_vec()).unwrap();
}
