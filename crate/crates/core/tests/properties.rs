use jrsp::bases::{
    build_f, compose_phases, g_basis, h_basis, validate_orthonormal, wrap_phases, AmplitudeProfile, PhaseProfile,
    PhaseShares,
};
use jrsp::protocol::{compressed_target, parity_expand, target_state};
use jrsp::qstate::{fidelity_up_to_phase, phase_aligned_deviation, BasisSet, Complex64, GateMatrix, StateVector};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec(complex(), 1 << n)
        .prop_filter("nonzero", |v| v.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|v| StateVector::from_unnormalized(v).unwrap())
}

fn amplitudes() -> impl Strategy<Value = AmplitudeProfile> {
    prop::array::uniform8(0.0f64..1.0)
        .prop_filter("nonzero", |x| x.iter().map(|v| v * v).sum::<f64>() > 1e-3)
        .prop_map(|x| {
            let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            AmplitudeProfile::new(x.map(|v| v / n)).unwrap()
        })
}

fn phases() -> impl Strategy<Value = PhaseProfile> {
    prop::array::uniform7(0.0f64..std::f64::consts::TAU).prop_map(|d| {
        let mut full = [0.0; 8];
        full[1..].copy_from_slice(&d);
        PhaseProfile::new(full).unwrap()
    })
}

fn distinct_triple(n: usize) -> impl Strategy<Value = [usize; 3]> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| [v[0], v[1], v[2]])
}

/// A unitary on three qubits built from random single-qubit rotations and CNOTs.
fn random_unitary8(angles: &[f64]) -> GateMatrix {
    let rot = |t: f64, p: f64| {
        GateMatrix::from_rows(&[
            [Complex64::new(t.cos(), 0.0), -Complex64::from_polar(t.sin(), p)],
            [Complex64::from_polar(t.sin(), -p), Complex64::new(t.cos(), 0.0)],
        ])
        .unwrap()
    };
    let layer = rot(angles[0], angles[1]).kron(&rot(angles[2], angles[3])).kron(&rot(angles[4], angles[5]));
    let cx = GateMatrix::cnot().kron(&GateMatrix::identity(2));
    layer.matmul(&cx).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(s in state(5), q in 0usize..5, c in 0usize..5, t in 0usize..5) {
        let x = s.apply_single(q, &GateMatrix::pauli_x()).unwrap();
        prop_assert!((x.norm() - 1.0).abs() < 1e-12);
        if c != t {
            let y = s.apply_cnot(c, t).unwrap();
            prop_assert!((y.norm() - 1.0).abs() < 1e-12);
            prop_assert_eq!(y.apply_cnot(c, t).unwrap(), s.clone());
        }
    }

    #[test]
    fn subset_gate_matches_singles(s in state(5), qs in distinct_triple(5)) {
        let (x, z) = (GateMatrix::pauli_x(), GateMatrix::pauli_z());
        let gate = x.kron(&z).kron(&x.matmul(&z).unwrap());
        let joint = s.apply_on_subset(&qs, &gate).unwrap();
        let singles = s
            .apply_single(qs[2], &x.matmul(&z).unwrap()).unwrap()
            .apply_single(qs[1], &z).unwrap()
            .apply_single(qs[0], &x).unwrap();
        for (a, b) in joint.amplitudes().iter().zip(singles.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn measurement_is_complete_and_consistent(
        s in state(5),
        qs in distinct_triple(5),
        angles in prop::collection::vec(0.0f64..6.3, 6),
    ) {
        let u = random_unitary8(&angles);
        let vectors: [[Complex64; 8]; 8] = std::array::from_fn(|k| std::array::from_fn(|m| u.entry(k, m)));
        let basis = BasisSet::from_vectors(vectors);
        let branches = s.measure_in_basis(qs, &basis).unwrap();
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for b in &branches {
            let p = s.project(qs, &basis, b.outcome).unwrap();
            prop_assert!((p.probability - b.probability).abs() < 1e-14);
            match (&b.collapsed, &p.collapsed) {
                (Some(c), Some(d)) => {
                    prop_assert_eq!(c.n_qubits(), 2);
                    prop_assert!((c.norm() - 1.0).abs() < 1e-12);
                    prop_assert!(phase_aligned_deviation(c, d).unwrap() < 1e-12);
                }
                (None, None) => prop_assert!(b.probability < 1e-12),
                _ => prop_assert!(false, "collapse flags disagree"),
            }
        }
    }

    #[test]
    fn fidelity_ignores_global_phase(s in state(4), theta in -10.0f64..10.0) {
        let f = fidelity_up_to_phase(&s, &s.with_global_phase(theta)).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-12);
        prop_assert!(phase_aligned_deviation(&s, &s.with_global_phase(theta)).unwrap() < 1e-12);
    }

    #[test]
    fn amplitude_matrix_is_orthogonal(x in amplitudes()) {
        let f = build_f(&x);
        for a in 0..8 {
            for b in 0..8 {
                let dot: f64 = (0..8).map(|m| f[a][m] * f[b][m]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                prop_assert!((dot - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn phase_bases_are_unitary(delta in phases(), s1 in phases(), s2 in phases(), k in 0usize..8) {
        prop_assert!(validate_orthonormal(&g_basis(k, &delta).unwrap()).pass);
        let shares = PhaseShares::from_profiles(vec![s1, s2]).unwrap();
        for l in 1..=2 {
            prop_assert!(validate_orthonormal(&h_basis(k, l, &shares).unwrap()).pass);
        }
    }

    #[test]
    fn composition_commutes_and_associates(a in phases(), b in phases(), c in phases()) {
        let ab = compose_phases(&PhaseShares::from_profiles(vec![a.clone(), b.clone()]).unwrap());
        let ba = compose_phases(&PhaseShares::from_profiles(vec![b.clone(), a.clone()]).unwrap());
        prop_assert_eq!(wrap_phases(&ab), wrap_phases(&ba));
        let ab_c = compose_phases(&PhaseShares::from_profiles(vec![ab, c.clone()]).unwrap());
        let bc = compose_phases(&PhaseShares::from_profiles(vec![b, c]).unwrap());
        let a_bc = compose_phases(&PhaseShares::from_profiles(vec![a, bc]).unwrap());
        for (u, v) in wrap_phases(&ab_c).values().iter().zip(wrap_phases(&a_bc).values()) {
            let d = (u - v).abs();
            prop_assert!(d < 1e-12 || (d - std::f64::consts::TAU).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_expansion_builds_target(x in amplitudes(), delta in phases()) {
        let expanded = parity_expand(&compressed_target(&x, &delta)).unwrap();
        let direct = target_state(&x, &delta);
        for (a, b) in expanded.amplitudes().iter().zip(direct.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}
