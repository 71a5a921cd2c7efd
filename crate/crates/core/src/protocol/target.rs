use num_complex::Complex64;

use crate::bases::{AmplitudeProfile, PhaseProfile};
use crate::error::{Error, Result};
use crate::qstate::StateVector;

/// Four-qubit kets carrying `x_j e^{i delta_j}`, in `j` order.
pub const CHI_KETS: [usize; 8] = [0b0000, 0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100, 0b1111];

fn coefficients<'a>(x: &'a AmplitudeProfile, delta: &'a PhaseProfile) -> impl Iterator<Item = Complex64> + 'a {
    x.values()
        .iter()
        .zip(delta.values())
        .map(|(&a, &d)| Complex64::from_polar(a, d))
}

/// `sum_j x_j e^{i delta_j} |CHI_KETS[j]>` on four qubits.
pub fn target_state(x: &AmplitudeProfile, delta: &PhaseProfile) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for (c, ket) in coefficients(x, delta).zip(CHI_KETS) {
        amps[ket] = c;
    }
    StateVector::from_raw(4, amps)
}

/// `sum_j x_j e^{i delta_j} |j>` on three qubits.
pub fn compressed_target(x: &AmplitudeProfile, delta: &PhaseProfile) -> StateVector {
    StateVector::from_raw(3, coefficients(x, delta).collect())
}

/// Appends an ancilla `|0>` and applies CNOTs C3->C4, C2->C4, C1->C4, so that
/// `|abc> -> |abc, a^b^c>`.
pub fn parity_expand(s3: &StateVector) -> Result<StateVector> {
    if s3.n_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: s3.n_qubits(),
        });
    }
    let s4 = s3.tensor(&StateVector::zero(1)?)?;
    s4.apply_cnot(2, 3)?.apply_cnot(1, 3)?.apply_cnot(0, 3)
}

/// The canonical chi state written ket by ket:
/// `(|0000> - |0011> - |0101> + |0110> + |1001> + |1010> + |1100> + |1111>)/(2 sqrt 2)`.
pub fn chi_state() -> StateVector {
    let h = 1.0 / 8f64.sqrt();
    let signed = [
        (0b0000, h),
        (0b0011, -h),
        (0b0101, -h),
        (0b0110, h),
        (0b1001, h),
        (0b1010, h),
        (0b1100, h),
        (0b1111, h),
    ];
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for (ket, v) in signed {
        amps[ket] = Complex64::new(v, 0.0);
    }
    StateVector::from_raw(4, amps)
}

/// Profile parameters reproducing [`chi_state`].
pub fn chi_profile() -> (AmplitudeProfile, PhaseProfile) {
    use std::f64::consts::PI;
    let delta = PhaseProfile::new([0.0, PI, PI, 0.0, 0.0, 0.0, 0.0, 0.0]).expect("leading phase is zero");
    (AmplitudeProfile::uniform(), delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::phase_aligned_deviation;

    #[test]
    fn unit_profile_is_all_zero_ket() {
        let x = AmplitudeProfile::unit(0).unwrap();
        let delta = PhaseProfile::new([0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 0.5]).unwrap();
        assert_eq!(target_state(&x, &delta), StateVector::basis(4, 0).unwrap());
        assert_eq!(compressed_target(&x, &delta), StateVector::basis(3, 0).unwrap());
    }

    #[test]
    fn chi_fixture() {
        let (x, delta) = chi_profile();
        let t = target_state(&x, &delta);
        assert!(phase_aligned_deviation(&t, &chi_state()).unwrap() < 1e-12);
        for (a, b) in t.amplitudes().iter().zip(chi_state().amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn parity_expand_kets() {
        let cases = [(0b101, 0b1010), (0b111, 0b1111), (0b000, 0b0000), (0b001, 0b0011), (0b110, 0b1100)];
        for (input, output) in cases {
            let s = parity_expand(&StateVector::basis(3, input).unwrap()).unwrap();
            assert_eq!(s, StateVector::basis(4, output).unwrap());
        }
        // Oracle: the expansion maps ket j onto CHI_KETS[j].
        for (j, ket) in CHI_KETS.iter().enumerate() {
            let s = parity_expand(&StateVector::basis(3, j).unwrap()).unwrap();
            assert_eq!(s.support(0.5), vec![*ket]);
        }
        assert!(parity_expand(&StateVector::zero(2).unwrap()).is_err());
    }

    #[test]
    fn uniform_compressed() {
        let t = compressed_target(&AmplitudeProfile::uniform(), &PhaseProfile::zero());
        for a in t.amplitudes() {
            assert!((a.re - 1.0 / 8f64.sqrt()).abs() < 1e-16 && a.im == 0.0);
        }
    }
}
