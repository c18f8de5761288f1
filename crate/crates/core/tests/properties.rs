use ancilla_tomography::dynamics::{evolve, expectation, hamiltonian_interaction, Hamiltonian, Observable};
use ancilla_tomography::entanglement::{entropy_pure, entropy_pure_side, von_neumann_entropy};
use ancilla_tomography::linalg::{det, det_and_cofactors, kron, partial_trace, ComplexMatrix, Keep, RealMatrix, C64};
use ancilla_tomography::state::{
    ancilla_state, coherence_from_density, density_from_coherence, gell_mann, pauli, product_state, random_state,
    random_unitary, CoherenceVector, DensityMatrix,
};
use ancilla_tomography::tomography::{build_map_with_probe, probe_amplitude, qubit_observable_rows, ObservablePair};
use proptest::prelude::*;

fn complex_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| ComplexMatrix::from_vec(n, n, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

fn real_matrix(n: usize) -> impl Strategy<Value = RealMatrix> {
    prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| RealMatrix::from_vec(n, n, v).unwrap())
}

fn bloch() -> impl Strategy<Value = [f64; 3]> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(r, th, ph)| [r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()])
}

fn qubit(r: [f64; 3]) -> DensityMatrix {
    density_from_coherence(&CoherenceVector::new(2, r.to_vec()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_is_associative(a in complex_matrix(2), b in complex_matrix(2), c in complex_matrix(2)) {
        let l = kron(&kron(&a, &b), &c);
        let r = kron(&a, &kron(&b, &c));
        prop_assert!(l.max_abs_diff(&r) < 1e-14);
    }

    #[test]
    fn kron_mixed_product(a in complex_matrix(2), b in complex_matrix(3), c in complex_matrix(2), d in complex_matrix(3)) {
        let l = kron(&a, &b).matmul(&kron(&c, &d));
        let r = kron(&a.matmul(&c), &b.matmul(&d));
        prop_assert!(l.max_abs_diff(&r) < 1e-13);
    }

    #[test]
    fn partial_trace_is_linear(x in complex_matrix(6), y in complex_matrix(6), s in -2.0f64..2.0) {
        for keep in [Keep::S, Keep::A] {
            let lhs = partial_trace(&(&x + &y.scale_re(s)), 2, 3, keep).unwrap();
            let rhs = &partial_trace(&x, 2, 3, keep).unwrap() + &partial_trace(&y, 2, 3, keep).unwrap().scale_re(s);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
        }
    }

    #[test]
    fn partial_trace_of_product(a in complex_matrix(2), b in complex_matrix(3)) {
        let ab = kron(&a, &b);
        let ra = partial_trace(&ab, 2, 3, Keep::S).unwrap();
        prop_assert!(ra.max_abs_diff(&a.scale(b.trace())) < 1e-13);
        let rb = partial_trace(&ab, 2, 3, Keep::A).unwrap();
        prop_assert!(rb.max_abs_diff(&b.scale(a.trace())) < 1e-13);
    }

    #[test]
    fn cofactor_expansion_along_any_line(m in real_matrix(5), line in 0usize..5) {
        let (d, cof) = det_and_cofactors(&m).unwrap();
        let row: f64 = (0..5).map(|j| m[(line, j)] * cof[(line, j)]).sum();
        let col: f64 = (0..5).map(|i| m[(i, line)] * cof[(i, line)]).sum();
        let scale = 1.0 + d.abs();
        prop_assert!((row - d).abs() < 1e-11 * scale);
        prop_assert!((col - d).abs() < 1e-11 * scale);
    }

    #[test]
    fn det_is_multiplicative(a in real_matrix(4), b in real_matrix(4)) {
        let lhs = det(&a.matmul(&b)).unwrap();
        let rhs = det(&a).unwrap() * det(&b).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn bloch_eigenvalues(r in bloch()) {
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        let ev = qubit(r).eigenvalues();
        prop_assert!((ev[0] - (1.0 - len) / 2.0).abs() < 1e-12);
        prop_assert!((ev[1] - (1.0 + len) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn coherence_round_trip(seed in 0u64..10_000, n in 2usize..5) {
        let rho = random_state(n, seed % 2 == 0, seed);
        let back = density_from_coherence(&coherence_from_density(&rho)).unwrap();
        prop_assert!(back.mat().max_abs_diff(rho.mat()) < 1e-13);
    }

    #[test]
    fn entropy_invariant_under_local_unitaries(seed in 0u64..10_000) {
        let psi = random_state(4, true, seed);
        let u = kron(&random_unitary(2, seed + 1), &random_unitary(2, seed + 2));
        let moved = DensityMatrix::new(u.conjugate(psi.mat())).unwrap();
        let e0 = entropy_pure(&psi, 2, 2).unwrap();
        let e1 = entropy_pure(&moved, 2, 2).unwrap();
        prop_assert!((e0 - e1).abs() < 1e-10);
        let side = entropy_pure_side(&moved, 2, 2, Keep::A).unwrap();
        prop_assert!((e1 - side).abs() < 1e-9);
    }

    #[test]
    fn evolution_preserves_spectrum(seed in 0u64..10_000, phi in 0.0f64..1.5, t in -10.0f64..10.0) {
        let rho = random_state(4, false, seed);
        let out = evolve(&rho, &hamiltonian_interaction(phi), t).unwrap();
        let (a, b) = (rho.eigenvalues(), out.eigenvalues());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        prop_assert!((von_neumann_entropy(&rho) - von_neumann_entropy(&out)).abs() < 1e-10);
    }

    #[test]
    fn expectation_is_linear(seed in 0u64..10_000, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let rho = random_state(4, false, seed);
        let o1 = Observable::new(kron(&pauli().elements()[0], &pauli().elements()[2])).unwrap();
        let o2 = Observable::new(kron(&ComplexMatrix::identity(2), &pauli().elements()[1])).unwrap();
        let combo = Observable::new(&o1.mat().scale_re(a) + &o2.mat().scale_re(b)).unwrap();
        let lhs = expectation(&rho, &combo).unwrap();
        let rhs = a * expectation(&rho, &o1).unwrap() + b * expectation(&rho, &o2).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn measurements_are_affine(r1 in bloch(), r2 in bloch(), w in 0.0f64..1.0, t in 0.0f64..20.0, l in bloch()) {
        let h = hamiltonian_interaction(0.4);
        let anc = ancilla_state(l).unwrap();
        let rows = qubit_observable_rows(&ObservablePair::from_pauli([0.2, 0.0, 0.0, 1.0], [0.0, 1.0, 0.3, 0.0]));
        let p = |r: [f64; 3]| -> Vec<f64> {
            let total = product_state(&qubit(r), &anc);
            let out = evolve(&total, &h, t).unwrap();
            rows.iter().map(|o| expectation(&out, o).unwrap()).collect()
        };
        let mix: [f64; 3] = std::array::from_fn(|i| w * r1[i] + (1.0 - w) * r2[i]);
        let (a, b, c) = (p(r1), p(r2), p(mix));
        for i in 0..3 {
            prop_assert!((c[i] - (w * a[i] + (1.0 - w) * b[i])).abs() < 1e-11);
        }
    }

    #[test]
    fn map_is_independent_of_probe(t in 0.0f64..20.0, l in bloch()) {
        let h = hamiltonian_interaction(0.6);
        let anc = ancilla_state(l).unwrap();
        let rows = qubit_observable_rows(&ObservablePair::from_pauli([0.0, 1.0, 1.0, 1.0], [0.0, 1.0, 0.5, 0.0]));
        let eps = probe_amplitude(2).unwrap();
        let a = build_map_with_probe(&h, &anc, &rows, t, eps).unwrap();
        let b = build_map_with_probe(&h, &anc, &rows, t, eps / 2.0).unwrap();
        prop_assert!(a.omega.max_abs_diff(&b.omega) < 1e-9);
    }
}

#[test]
fn gell_mann_bases_are_complete() {
    for n in 2..=4 {
        let basis = gell_mann(n);
        assert_eq!(basis.len(), n * n - 1);
        for (i, a) in basis.elements().iter().enumerate() {
            assert!(a.trace().norm() < 1e-15);
            for (j, b) in basis.elements().iter().enumerate() {
                let g = a.trace_product(b);
                let want = if i == j { 2.0 } else { 0.0 };
                assert!((g - C64::new(want, 0.0)).norm() < 1e-14);
            }
        }
        // Σ_a (T_a)_{ij} (T_a)_{kl} = 2 δ_il δ_jk − (2/N) δ_ij δ_kl
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s: C64 = basis.elements().iter().map(|t| t[(i, j)] * t[(k, l)]).sum();
                        let want = 2.0 * f64::from(u8::from(i == l && j == k))
                            - 2.0 / n as f64 * f64::from(u8::from(i == j && k == l));
                        assert!((s - C64::new(want, 0.0)).norm() < 1e-13);
                    }
                }
            }
        }
    }
}

#[test]
fn o0_terms_leave_the_determinant_unchanged() {
    let h = hamiltonian_interaction(0.5);
    let anc = ancilla_state([0.0, 0.25, 0.25]).unwrap();
    let eps = probe_amplitude(2).unwrap();
    let (s0, a0) = (0.7, -0.3);
    let plain = qubit_observable_rows(&ObservablePair::from_pauli([0.0, 1.0, 1.0, 1.0], [0.0, 1.0, 0.5, 0.0]));
    let shifted = qubit_observable_rows(&ObservablePair::from_pauli([s0, 1.0, 1.0, 1.0], [a0, 1.0, 0.5, 0.0]));
    for t in [0.3, 1.1, 4.0] {
        let a = build_map_with_probe(&h, &anc, &plain, t, eps).unwrap();
        let b = build_map_with_probe(&h, &anc, &shifted, t, eps).unwrap();
        // Single-side rows are untouched; the product row picks up
        // O⁰_A·(row 0) + O⁰_S·(row 1).
        for j in 0..3 {
            assert!((a.omega[(0, j)] - b.omega[(0, j)]).abs() < 1e-12);
            assert!((a.omega[(1, j)] - b.omega[(1, j)]).abs() < 1e-12);
            let want = a.omega[(2, j)] + a0 * a.omega[(0, j)] + s0 * a.omega[(1, j)];
            assert!((b.omega[(2, j)] - want).abs() < 1e-12);
        }
        assert!((det(&a.omega).unwrap() - det(&b.omega).unwrap()).abs() < 1e-12);
        assert!((b.kvec[0] - a.kvec[0] - s0).abs() < 1e-12);
    }
}

#[test]
fn zero_hamiltonian_keeps_products() {
    let h = Hamiltonian::zero(4);
    let rho = product_state(&qubit([0.3, 0.4, 0.5]), &qubit([0.0, 0.6, 0.8]));
    let out = evolve(&rho, &h, 7.0).unwrap();
    assert!(out.mat().max_abs_diff(rho.mat()) < 1e-15);
}
