use std::fmt;

use num_complex::Complex64;

use super::{ALGEBRA_TOL, MAX_QUBITS};
use crate::error::{Error, Result};

/// Normalized dense amplitude vector over `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// Index of the computational ket whose bits (qubit 0 first) are `bits`.
pub fn encode_index(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b & 1))
}

/// Inverse of [`encode_index`] for an `n_qubits` register.
pub fn decode_index(index: usize, n_qubits: usize) -> Vec<u8> {
    (0..n_qubits)
        .map(|q| ((index >> (n_qubits - 1 - q)) & 1) as u8)
        .collect()
}

pub(crate) fn check_register_size(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        return Err(Error::RegisterTooLarge(n_qubits));
    }
    Ok(())
}

impl StateVector {
    /// Computational basis ket `|index>` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_register_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                what: "basis ket",
                value: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Wraps an already-normalized amplitude array.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amps.len())?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm = norm_of(&amps);
        if (norm - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { n_qubits, amps })
    }

    /// Normalizes `amps` and wraps them. Fails on a zero vector.
    pub fn from_unnormalized(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amps.len())?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm = norm_of(&amps);
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n_qubits, amps })
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << n_qubits);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amps)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Kronecker product; `self` occupies the most significant qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n_qubits = self.n_qubits + other.n_qubits;
        check_register_size(n_qubits)?;
        let mut amps = Vec::with_capacity(1usize << n_qubits);
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn with_global_phase(&self, theta: f64) -> StateVector {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }

    /// Indices whose amplitude modulus exceeds `threshold`, ascending.
    pub fn support(&self, threshold: f64) -> Vec<usize> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(i, _)| i)
            .collect()
    }

    pub(crate) fn check_qubit(&self, index: usize) -> Result<()> {
        if index >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Bit mask selecting qubit `q` within an amplitude index.
    pub(crate) fn mask_of(&self, q: usize) -> usize {
        1usize << (self.n_qubits - 1 - q)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() < 1e-15 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let bits: String = decode_index(i, self.n_qubits)
                .iter()
                .map(|b| char::from(b'0' + b))
                .collect();
            write!(f, "({:.6}{:+.6}i)|{}>", a.re, a.im, bits)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: len.next_power_of_two().max(1),
            found: len,
        });
    }
    let n = len.trailing_zeros() as usize;
    check_register_size(n)?;
    Ok(n)
}

fn norm_of(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// `|<a|b>|^2`, clamped to `[0, 1]`.
pub fn fidelity_up_to_phase(a: &StateVector, b: &StateVector) -> Result<f64> {
    let overlap = a.inner(b)?;
    Ok(overlap.norm_sqr().clamp(0.0, 1.0))
}

/// Max amplitude distance between `a` and `b` after rotating `a` onto `b`'s
/// global phase.
pub fn phase_aligned_deviation(a: &StateVector, b: &StateVector) -> Result<f64> {
    let overlap = a.inner(b)?;
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn tensor_of_basis_kets() {
        let zero = StateVector::basis(1, 0).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let s = zero.tensor(&one).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0), c(1.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn tensor_plus_with_zero() {
        let plus = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        let zero = StateVector::zero(1).unwrap();
        let s = plus.tensor(&zero).unwrap();
        let expected = [c(FRAC_1_SQRT_2), c(0.0), c(FRAC_1_SQRT_2), c(0.0)];
        for (a, b) in s.amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn ghz_triple_tensor_support() {
        let h = 1.0 / 2f64.sqrt();
        let mut amps = vec![c(0.0); 8];
        amps[0] = c(h);
        amps[7] = c(h);
        let ghz = StateVector::from_amplitudes(amps).unwrap();
        let s = ghz.tensor(&ghz).unwrap().tensor(&ghz).unwrap();
        assert_eq!(s.n_qubits(), 9);

        // Oracle: each 3-bit block is all-zero or all-one.
        let expected: Vec<usize> = (0..512usize)
            .filter(|i| (0..3).all(|g| matches!((i >> (3 * g)) & 7, 0 | 7)))
            .collect();
        assert_eq!(expected, vec![0, 7, 56, 63, 448, 455, 504, 511]);
        assert_eq!(s.support(1e-12), expected);
        for &i in &expected {
            assert!((s.amplitude(i) - c(1.0 / 8f64.sqrt())).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_lengths_and_norms() {
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(1.0); 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::from_unnormalized(vec![c(0.0), c(0.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(f64::NAN), c(0.0)]),
            Err(Error::NonFinite(_))
        ));
        assert!(StateVector::basis(2, 4).is_err());
    }

    #[test]
    fn index_round_trip() {
        for n in 1..=12 {
            for i in 0..(1usize << n) {
                assert_eq!(encode_index(&decode_index(i, n)), i);
            }
        }
        assert_eq!(encode_index(&[0, 0, 1, 1]), 3);
        assert_eq!(decode_index(9, 4), vec![1, 0, 0, 1]);
    }

    #[test]
    fn fidelity_basics() {
        let zero = StateVector::zero(1).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        assert_eq!(fidelity_up_to_phase(&zero, &zero).unwrap(), 1.0);
        assert_eq!(fidelity_up_to_phase(&zero, &one).unwrap(), 0.0);
        let s = StateVector::from_unnormalized(vec![c(0.3), Complex64::new(0.1, -0.7)]).unwrap();
        for theta in [0.0, 0.4, 2.5, -1.3] {
            let f = fidelity_up_to_phase(&s, &s.with_global_phase(theta)).unwrap();
            assert!((f - 1.0).abs() < 1e-15);
            assert!(phase_aligned_deviation(&s, &s.with_global_phase(theta)).unwrap() < 1e-15);
        }
        let two = StateVector::zero(2).unwrap();
        assert!(fidelity_up_to_phase(&zero, &two).is_err());
    }
}
