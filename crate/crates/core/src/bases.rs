//! Measurement bases built from the senders' partial knowledge of the target.
//!
//! The amplitude holder measures in `{|eta_k>}`, rows of a signed permutation
//! matrix of the amplitudes. A phase holder measures in `{|tau_j^(k)>}`, rows
//! of a fixed 8x8 sign pattern whose columns carry the conjugate phases,
//! scaled by `1/(2*sqrt(2))`. Which phase basis is used depends on the
//! announced `k`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::{BasisSet, ALGEBRA_TOL, BASIS_DIM};

/// Real amplitudes `x_0..x_7` of the target, normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeProfile {
    x: [f64; 8],
}

impl AmplitudeProfile {
    /// Accepts `x` when `|sum x_j^2 - 1| <= 1e-12`, then rescales to unit norm.
    pub fn new(x: [f64; 8]) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("amplitude profile"));
        }
        let sum_sq: f64 = x.iter().map(|v| v * v).sum();
        if (sum_sq - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::UnnormalizedProfile { sum_sq });
        }
        let norm = sum_sq.sqrt();
        Ok(Self { x: x.map(|v| v / norm) })
    }

    /// All eight amplitudes equal to `1/(2*sqrt(2))`.
    pub fn uniform() -> Self {
        Self {
            x: [1.0 / 8f64.sqrt(); 8],
        }
    }

    /// `x = e_j`.
    pub fn unit(j: usize) -> Result<Self> {
        if j >= 8 {
            return Err(Error::IndexOutOfRange {
                what: "amplitude",
                value: j,
            });
        }
        let mut x = [0.0; 8];
        x[j] = 1.0;
        Ok(Self { x })
    }

    pub fn values(&self) -> &[f64; 8] {
        &self.x
    }
}

/// Relative phases `delta_0..delta_7` in radians, with `delta_0 = 0` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseProfile {
    delta: [f64; 8],
}

impl PhaseProfile {
    pub fn new(delta: [f64; 8]) -> Result<Self> {
        if delta.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("phase profile"));
        }
        if delta[0] != 0.0 {
            return Err(Error::NonZeroLeadingPhase(delta[0]));
        }
        Ok(Self { delta })
    }

    pub fn zero() -> Self {
        Self { delta: [0.0; 8] }
    }

    pub fn values(&self) -> &[f64; 8] {
        &self.delta
    }

    /// `r_j = e^{-i delta_j}`.
    pub fn conjugate_units(&self) -> [Complex64; 8] {
        self.delta.map(|d| Complex64::from_polar(1.0, -d))
    }
}

/// Per-sender phase shares; row `l - 1` is held by phase sender `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseShares {
    rows: Vec<PhaseProfile>,
}

impl PhaseShares {
    /// Needs at least one row (two senders in total).
    pub fn new(rows: Vec<[f64; 8]>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::TooFewSenders(1));
        }
        let rows = rows.into_iter().map(PhaseProfile::new).collect::<Result<_>>()?;
        Ok(Self { rows })
    }

    pub fn from_profiles(rows: Vec<PhaseProfile>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::TooFewSenders(1));
        }
        Ok(Self { rows })
    }

    /// Single share row equal to `delta`.
    pub fn single(delta: &PhaseProfile) -> Self {
        Self {
            rows: vec![delta.clone()],
        }
    }

    /// Total number of senders, including the amplitude holder.
    pub fn n_senders(&self) -> usize {
        self.rows.len() + 1
    }

    /// Share of phase sender `l` (1-based).
    pub fn row(&self, l: usize) -> Result<&PhaseProfile> {
        if l == 0 || l > self.rows.len() {
            return Err(Error::IndexOutOfRange {
                what: "phase sender",
                value: l,
            });
        }
        Ok(&self.rows[l - 1])
    }

    pub fn rows(&self) -> &[PhaseProfile] {
        &self.rows
    }
}

/// Entrywise sum of all share rows.
pub fn compose_phases(shares: &PhaseShares) -> PhaseProfile {
    let mut delta = [0.0; 8];
    for row in shares.rows() {
        for (d, s) in delta.iter_mut().zip(row.values()) {
            *d += s;
        }
    }
    PhaseProfile { delta }
}

/// Wraps every phase into `[0, 2pi)`; entry 0 stays 0.
pub fn wrap_phases(p: &PhaseProfile) -> PhaseProfile {
    PhaseProfile {
        delta: p.delta.map(|d| d.rem_euclid(TAU)),
    }
}

// Amplitude-basis layout: entry [k][m] is F_SIGN[k][m] * x[F_INDEX[k][m]].
const F_INDEX: [[usize; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 5, 4, 7, 6],
    [2, 3, 0, 1, 6, 7, 4, 5],
    [3, 2, 1, 0, 7, 6, 5, 4],
    [4, 5, 6, 7, 0, 1, 2, 3],
    [5, 4, 7, 6, 1, 0, 3, 2],
    [6, 7, 4, 5, 2, 3, 0, 1],
    [7, 6, 5, 4, 3, 2, 1, 0],
];

const F_SIGN: [[i8; 8]; 8] = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, -1, 1, -1, 1, -1, 1, -1],
    [1, -1, -1, 1, -1, 1, 1, -1],
    [1, 1, -1, -1, 1, 1, -1, -1],
    [1, -1, 1, -1, -1, 1, -1, 1],
    [1, 1, -1, -1, -1, -1, 1, 1],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [1, 1, 1, 1, -1, -1, -1, -1],
];

/// Sign layout of the phase-basis matrix `G(a_1..a_8)`.
pub const PHASE_SIGNS: [[i8; 8]; 8] = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, -1, 1, -1, 1, -1, 1, -1],
    [1, -1, -1, 1, -1, 1, 1, -1],
    [1, 1, -1, -1, 1, 1, -1, -1],
    [1, -1, 1, -1, -1, 1, -1, 1],
    [1, 1, -1, -1, -1, -1, 1, 1],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [1, 1, 1, 1, -1, -1, -1, -1],
];

/// Argument order of `G^(k)`: slot `m` receives `r_{PHASE_ARGS[k][m]}`, with
/// `r_0 = 1`.
pub const PHASE_ARGS: [[usize; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 5, 4, 7, 6],
    [2, 3, 0, 1, 6, 7, 4, 5],
    [3, 2, 1, 0, 7, 6, 5, 4],
    [4, 5, 6, 7, 0, 1, 2, 3],
    [5, 4, 7, 6, 1, 0, 3, 2],
    [6, 7, 4, 5, 2, 3, 0, 1],
    [7, 6, 5, 4, 3, 2, 1, 0],
];

/// 8x8 matrix of `+1`/`-1` with pairwise orthogonal rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    signs: [[i8; 8]; 8],
}

impl SignMatrix {
    pub fn new(signs: [[i8; 8]; 8]) -> Result<Self> {
        if signs.iter().flatten().any(|s| !matches!(s, 1 | -1)) {
            return Err(Error::NonOrthogonalSigns(0, 0));
        }
        for p in 0..8 {
            for q in (p + 1)..8 {
                let dot: i32 = (0..8).map(|m| i32::from(signs[p][m]) * i32::from(signs[q][m])).sum();
                if dot != 0 {
                    return Err(Error::NonOrthogonalSigns(p, q));
                }
            }
        }
        Ok(Self { signs })
    }

    /// The phase-basis sign layout.
    pub fn phase_pattern() -> Self {
        Self { signs: PHASE_SIGNS }
    }

    pub fn sign(&self, row: usize, col: usize) -> i8 {
        self.signs[row][col]
    }

    pub fn rows(&self) -> &[[i8; 8]; 8] {
        &self.signs
    }
}

/// Real 8x8 amplitude matrix `F`; rows are orthonormal for normalized `x`.
pub fn build_f(x: &AmplitudeProfile) -> [[f64; 8]; 8] {
    let mut f = [[0.0; 8]; 8];
    for k in 0..8 {
        for m in 0..8 {
            f[k][m] = f64::from(F_SIGN[k][m]) * x.x[F_INDEX[k][m]];
        }
    }
    f
}

/// `|eta_k> = sum_m F[k][m] |xi_m>`.
pub fn eta_basis(x: &AmplitudeProfile) -> BasisSet {
    BasisSet::from_real(&build_f(x))
}

/// Unscaled `G(a_1..a_8)`: entry `[row][col]` is `PHASE_SIGNS[row][col] * a[col]`.
pub fn build_sign_pattern(a: &[Complex64; 8]) -> Result<[[Complex64; 8]; 8]> {
    for (index, v) in a.iter().enumerate() {
        let modulus = v.norm();
        if (modulus - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::NonUnitModulus { index, modulus });
        }
    }
    let mut g = [[Complex64::new(0.0, 0.0); 8]; 8];
    for (row, out) in g.iter_mut().enumerate() {
        for (col, entry) in out.iter_mut().enumerate() {
            *entry = a[col] * f64::from(PHASE_SIGNS[row][col]);
        }
    }
    Ok(g)
}

fn phase_basis(k: usize, delta: &PhaseProfile) -> Result<BasisSet> {
    if k >= BASIS_DIM {
        return Err(Error::IndexOutOfRange {
            what: "amplitude outcome k",
            value: k,
        });
    }
    let r = delta.conjugate_units();
    let args = PHASE_ARGS[k].map(|j| if j == 0 { Complex64::new(1.0, 0.0) } else { r[j] });
    let scale = 1.0 / 8f64.sqrt();
    let g = build_sign_pattern(&args)?;
    Ok(BasisSet::from_vectors(g.map(|row| row.map(|v| v * scale))))
}

/// `{|tau_j^(k)>}` for the two-sender protocol: rows of `G^(k)/(2*sqrt(2))`.
pub fn g_basis(k: usize, delta: &PhaseProfile) -> Result<BasisSet> {
    phase_basis(k, delta)
}

/// `{|tau_jl^(k)>}` for phase sender `l` (1-based) in the N-sender protocol.
pub fn h_basis(k: usize, l: usize, shares: &PhaseShares) -> Result<BasisSet> {
    phase_basis(k, shares.row(l)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthonormalityReport {
    pub max_deviation: f64,
    pub pass: bool,
}

pub fn validate_orthonormal(basis: &BasisSet) -> OrthonormalityReport {
    let max_deviation = basis.orthonormality_deviation();
    OrthonormalityReport {
        max_deviation,
        pass: max_deviation <= ALGEBRA_TOL,
    }
}
