use num_complex::Complex64;

use super::state::StateVector;
use super::ALGEBRA_TOL;
use crate::error::{Error, Result};

/// Square unitary matrix acting on `log2(dim)` qubits, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl GateMatrix {
    /// Builds a gate from row-major entries, rejecting non-unitary input.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(1),
                found: dim,
            });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("gate entries"));
        }
        let gate = Self { dim, entries };
        let deviation = gate.unitarity_deviation();
        if deviation > ALGEBRA_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(gate)
    }

    /// Builds a gate from rows.
    pub fn from_rows<const D: usize>(rows: &[[Complex64; D]; D]) -> Result<Self> {
        Self::new(D, rows.iter().flatten().copied().collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        Self { dim, entries }
    }

    pub fn pauli_x() -> Self {
        Self {
            dim: 2,
            entries: vec![ZERO, ONE, ONE, ZERO],
        }
    }

    pub fn pauli_z() -> Self {
        Self {
            dim: 2,
            entries: vec![ONE, ZERO, ZERO, -ONE],
        }
    }

    /// CNOT with the first (more significant) qubit as control.
    pub fn cnot() -> Self {
        let mut entries = vec![ZERO; 16];
        for (row, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            entries[row * 4 + col] = ONE;
        }
        Self { dim: 4, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// `self * other` (apply `other` first).
    pub fn matmul(&self, other: &GateMatrix) -> Result<GateMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Kronecker product; `self` acts on the more significant qubits.
    pub fn kron(&self, other: &GateMatrix) -> GateMatrix {
        let d = self.dim * other.dim;
        let mut entries = vec![ZERO; d * d];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.entry(i, j);
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        entries[(i * other.dim + k) * d + j * other.dim + l] = a * other.entry(k, l);
                    }
                }
            }
        }
        Self { dim: d, entries }
    }

    pub fn adjoint(&self) -> GateMatrix {
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        Self { dim: d, entries }
    }

    /// Largest entry of `|U U^dagger - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let dot: Complex64 = (0..d)
                    .map(|k| self.entries[i * d + k] * self.entries[j * d + k].conj())
                    .sum();
                let expected = if i == j { ONE } else { ZERO };
                worst = worst.max((dot - expected).norm());
            }
        }
        worst
    }
}

impl StateVector {
    /// Applies a one-qubit gate to qubit `q`.
    pub fn apply_single(&self, q: usize, gate: &GateMatrix) -> Result<StateVector> {
        if gate.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: gate.dim(),
            });
        }
        self.apply_on_subset(&[q], gate)
    }

    /// Flips `target` on every component whose `control` bit is set.
    pub fn apply_cnot(&self, control: usize, target: usize) -> Result<StateVector> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::DuplicateQubits(vec![control, target]));
        }
        let cmask = self.mask_of(control);
        let tmask = self.mask_of(target);
        let src = self.amplitudes();
        let amps = (0..src.len())
            .map(|i| if i & cmask != 0 { src[i ^ tmask] } else { src[i] })
            .collect();
        Ok(StateVector::from_raw(self.n_qubits(), amps))
    }

    /// Applies `gate` to the listed qubits; `qubits[0]` is the most significant
    /// bit of the gate's index.
    pub fn apply_on_subset(&self, qubits: &[usize], gate: &GateMatrix) -> Result<StateVector> {
        let offsets = self.subset_offsets(qubits)?;
        if gate.dim() != offsets.len() {
            return Err(Error::DimensionMismatch {
                expected: offsets.len(),
                found: gate.dim(),
            });
        }
        let mask: usize = offsets.iter().fold(0, |m, &o| m | o);
        let src = self.amplitudes();
        let mut out = vec![ZERO; src.len()];
        let d = gate.dim();
        let mut local = vec![ZERO; d];
        for base in (0..src.len()).filter(|i| i & mask == 0) {
            for (m, off) in offsets.iter().enumerate() {
                local[m] = src[base | off];
            }
            for (row, off) in offsets.iter().enumerate() {
                out[base | off] = (0..d).map(|col| gate.entry(row, col) * local[col]).sum();
            }
        }
        Ok(StateVector::from_raw(self.n_qubits(), out))
    }

    /// For each local index `m` over `qubits` (first qubit most significant),
    /// the global index offset of that bit pattern.
    pub(crate) fn subset_offsets(&self, qubits: &[usize]) -> Result<Vec<usize>> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::DuplicateQubits(qubits.to_vec()));
            }
        }
        let k = qubits.len();
        Ok((0..1usize << k)
            .map(|m| {
                qubits
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| (m >> (k - 1 - pos)) & 1 == 1)
                    .fold(0, |acc, (_, &q)| acc | self.mask_of(q))
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: &StateVector, b: &[Complex64]) -> bool {
        a.amplitudes().iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-15)
    }

    #[test]
    fn pauli_actions() {
        let zero = StateVector::zero(1).unwrap();
        assert!(close(&zero.apply_single(0, &GateMatrix::pauli_x()).unwrap(), &[c(0.0), c(1.0)]));
        let plus = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        let minus = plus.apply_single(0, &GateMatrix::pauli_z()).unwrap();
        assert!(close(&minus, &[c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)]));
    }

    #[test]
    fn cnot_examples() {
        let s10 = StateVector::basis(2, 0b10).unwrap();
        assert_eq!(s10.apply_cnot(0, 1).unwrap(), StateVector::basis(2, 0b11).unwrap());
        let s00 = StateVector::zero(2).unwrap();
        assert_eq!(s00.apply_cnot(0, 1).unwrap(), s00);
        let s = StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(0.0), c(FRAC_1_SQRT_2), c(0.0)])
            .unwrap();
        let bell = s.apply_cnot(0, 1).unwrap();
        assert!(close(&bell, &[c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]));
    }

    #[test]
    fn cnot_errors() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(s.apply_cnot(1, 1), Err(Error::DuplicateQubits(_))));
        assert!(matches!(s.apply_cnot(0, 2), Err(Error::QubitOutOfRange { .. })));
        assert!(matches!(
            s.apply_single(5, &GateMatrix::pauli_x()),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn cnot_matches_matrix_form() {
        let s = StateVector::from_unnormalized(
            (0..8).map(|i| Complex64::new(i as f64 + 1.0, 0.5 - i as f64)).collect(),
        )
        .unwrap();
        for (ctl, tgt) in [(0, 2), (2, 0), (1, 2)] {
            let by_bits = s.apply_cnot(ctl, tgt).unwrap();
            let by_matrix = s.apply_on_subset(&[ctl, tgt], &GateMatrix::cnot()).unwrap();
            assert!(close(&by_bits, by_matrix.amplitudes()));
        }
    }

    #[test]
    fn subset_identity_and_bit_reversal() {
        let s = StateVector::from_unnormalized(
            (0..16).map(|i| Complex64::new((i * i) as f64 * 0.1, i as f64)).collect(),
        )
        .unwrap();
        let same = s.apply_on_subset(&[3, 0, 2], &GateMatrix::identity(8)).unwrap();
        assert!(close(&same, s.amplitudes()));

        // |abc> -> |cba> on qubits 0..3 of a 4-qubit register.
        let mut entries = vec![ZERO; 64];
        for m in 0..8usize {
            let rev = ((m & 1) << 2) | (m & 2) | (m >> 2);
            entries[rev * 8 + m] = ONE;
        }
        let reverse = GateMatrix::new(8, entries).unwrap();
        let ket = StateVector::basis(4, 0b0110).unwrap();
        let out = ket.apply_on_subset(&[0, 1, 2], &reverse).unwrap();
        assert_eq!(out, StateVector::basis(4, 0b1100).unwrap());
    }

    #[test]
    fn rejects_non_unitary() {
        let err = GateMatrix::new(2, vec![ONE, ONE, ZERO, ONE]).unwrap_err();
        assert!(matches!(err, Error::NotUnitary { .. }));
        assert!(GateMatrix::new(3, vec![ONE; 9]).is_err());
        assert!(GateMatrix::new(2, vec![ONE; 3]).is_err());
    }

    #[test]
    fn subset_rejects_duplicates() {
        let s = StateVector::zero(3).unwrap();
        assert!(matches!(
            s.apply_on_subset(&[0, 1, 1], &GateMatrix::identity(8)),
            Err(Error::DuplicateQubits(_))
        ));
        assert!(s.apply_on_subset(&[0, 1], &GateMatrix::identity(8)).is_err());
    }

    #[test]
    fn kron_and_adjoint() {
        let xz = GateMatrix::pauli_x().kron(&GateMatrix::pauli_z());
        assert!(xz.unitarity_deviation() < 1e-15);
        let id = xz.matmul(&xz.adjoint()).unwrap();
        assert_eq!(id, GateMatrix::identity(4));
    }
}
