use num_complex::Complex64;

use super::state::StateVector;
use super::{ALGEBRA_TOL, ZERO_PROBABILITY};
use crate::error::{Error, Result};

/// Number of vectors in a joint three-qubit basis, and their dimension.
pub const BASIS_DIM: usize = 8;

/// Eight vectors over the kets `|000>..|111>` defining a three-qubit
/// projective measurement. Entry `[k][m]` is `<m|v_k>`.
///
/// Construction does not enforce orthonormality so that malformed bases can
/// be represented and diagnosed; measurement does enforce it.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSet {
    vectors: [[Complex64; BASIS_DIM]; BASIS_DIM],
}

impl BasisSet {
    pub fn from_vectors(vectors: [[Complex64; BASIS_DIM]; BASIS_DIM]) -> Self {
        Self { vectors }
    }

    /// Builds from real row vectors.
    pub fn from_real(rows: &[[f64; BASIS_DIM]; BASIS_DIM]) -> Self {
        let mut vectors = [[Complex64::new(0.0, 0.0); BASIS_DIM]; BASIS_DIM];
        for (dst, src) in vectors.iter_mut().zip(rows) {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = Complex64::new(s, 0.0);
            }
        }
        Self { vectors }
    }

    /// `{|000>, |001>, ..., |111>}`.
    pub fn computational() -> Self {
        let mut rows = [[0.0; BASIS_DIM]; BASIS_DIM];
        for (k, row) in rows.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        Self::from_real(&rows)
    }

    pub fn vectors(&self) -> &[[Complex64; BASIS_DIM]; BASIS_DIM] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[Complex64; BASIS_DIM] {
        &self.vectors[k]
    }

    /// Vector `k` as a normalized three-qubit state.
    pub fn ket(&self, k: usize) -> Result<StateVector> {
        StateVector::from_amplitudes(self.vectors[k].to_vec())
    }

    /// Copy with `epsilon` added to the real part of entry `[row][col]`.
    pub fn perturbed(&self, row: usize, col: usize, epsilon: f64) -> Self {
        let mut vectors = self.vectors;
        vectors[row][col].re += epsilon;
        Self { vectors }
    }

    /// `max_{p,q} |<v_p|v_q> - delta_pq|`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (p, vp) in self.vectors.iter().enumerate() {
            for (q, vq) in self.vectors.iter().enumerate() {
                let dot: Complex64 = vp.iter().zip(vq).map(|(a, b)| a.conj() * b).sum();
                let expected = if p == q { 1.0 } else { 0.0 };
                let dev = (dot - expected).norm();
                if dev.is_nan() {
                    return f64::INFINITY;
                }
                worst = worst.max(dev);
            }
        }
        worst
    }
}

/// One outcome of a projective measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBranch {
    pub outcome: usize,
    pub probability: f64,
    /// Normalized state of the unmeasured qubits, or `None` when the branch
    /// probability is below [`ZERO_PROBABILITY`].
    pub collapsed: Option<StateVector>,
}

impl MeasurementBranch {
    pub fn is_defined(&self) -> bool {
        self.collapsed.is_some()
    }
}

impl StateVector {
    /// Measures `qubits` (first qubit most significant) in `basis`.
    ///
    /// Returns all eight branches in outcome order. Measured qubits are
    /// removed; the remaining qubits keep their relative order.
    pub fn measure_in_basis(&self, qubits: [usize; 3], basis: &BasisSet) -> Result<Vec<MeasurementBranch>> {
        let (offsets, mask) = self.prepare_measurement(&qubits, basis)?;
        let src = self.amplitudes();
        let rest_dim = src.len() / BASIS_DIM;
        let mut projected = vec![vec![Complex64::new(0.0, 0.0); rest_dim]; BASIS_DIM];
        let conj = conjugated(basis);
        let mut local = [Complex64::new(0.0, 0.0); BASIS_DIM];
        for (r, base) in (0..src.len()).filter(|i| i & mask == 0).enumerate() {
            for (m, off) in offsets.iter().enumerate() {
                local[m] = src[base | off];
            }
            for (k, bra) in conj.iter().enumerate() {
                projected[k][r] = bra.iter().zip(&local).map(|(b, a)| b * a).sum();
            }
        }
        let n_rest = self.n_qubits() - 3;
        Ok(projected
            .into_iter()
            .enumerate()
            .map(|(outcome, amps)| branch_from(outcome, n_rest, amps))
            .collect())
    }

    /// Projects onto the single basis vector `outcome`.
    pub fn project(&self, qubits: [usize; 3], basis: &BasisSet, outcome: usize) -> Result<MeasurementBranch> {
        if outcome >= BASIS_DIM {
            return Err(Error::IndexOutOfRange {
                what: "measurement outcome",
                value: outcome,
            });
        }
        let (offsets, mask) = self.prepare_measurement(&qubits, basis)?;
        let src = self.amplitudes();
        let bra: Vec<Complex64> = basis.vector(outcome).iter().map(|a| a.conj()).collect();
        let amps = (0..src.len())
            .filter(|i| i & mask == 0)
            .map(|base| {
                offsets
                    .iter()
                    .zip(&bra)
                    .map(|(off, b)| b * src[base | off])
                    .sum()
            })
            .collect();
        Ok(branch_from(outcome, self.n_qubits() - 3, amps))
    }

    fn prepare_measurement(&self, qubits: &[usize; 3], basis: &BasisSet) -> Result<(Vec<usize>, usize)> {
        let offsets = self.subset_offsets(qubits)?;
        let deviation = basis.orthonormality_deviation();
        if deviation > ALGEBRA_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        let mask = offsets.iter().fold(0, |m, &o| m | o);
        Ok((offsets, mask))
    }
}

fn conjugated(basis: &BasisSet) -> [[Complex64; BASIS_DIM]; BASIS_DIM] {
    let mut out = *basis.vectors();
    for row in out.iter_mut() {
        for a in row.iter_mut() {
            *a = a.conj();
        }
    }
    out
}

fn branch_from(outcome: usize, n_rest: usize, amps: Vec<Complex64>) -> MeasurementBranch {
    let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let collapsed = (probability >= ZERO_PROBABILITY).then(|| {
        let scale = probability.sqrt();
        StateVector::from_raw(n_rest, amps.into_iter().map(|a| a / scale).collect())
    });
    MeasurementBranch {
        outcome,
        probability,
        collapsed,
    }
}
