//! Seeded random profiles.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bases::{compose_phases, AmplitudeProfile, PhaseProfile, PhaseShares};
use crate::error::Result;

/// Point on the positive orthant of the unit 7-sphere: absolute values of
/// eight normalized standard normals.
pub fn random_amplitudes<R: Rng + ?Sized>(rng: &mut R) -> AmplitudeProfile {
    loop {
        let raw: [f64; 8] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal).abs());
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-6 {
            if let Ok(x) = AmplitudeProfile::new(raw.map(|v| v / norm)) {
                return x;
            }
        }
    }
}

/// Phases uniform on `[0, 2pi)` with the leading phase fixed at 0.
pub fn random_phases<R: Rng + ?Sized>(rng: &mut R) -> PhaseProfile {
    let mut delta = [0.0; 8];
    for d in delta.iter_mut().skip(1) {
        *d = rng.random_range(0.0..TAU);
    }
    PhaseProfile::new(delta).expect("leading phase is zero")
}

/// `n_senders - 1` independent share rows.
pub fn random_shares<R: Rng + ?Sized>(rng: &mut R, n_senders: usize) -> Result<PhaseShares> {
    let rows = (1..n_senders.max(2)).map(|_| random_phases(rng)).collect();
    PhaseShares::from_profiles(rows)
}

/// A full random instance: amplitudes, shares, and their composed phases.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomInstance {
    pub x: AmplitudeProfile,
    pub shares: PhaseShares,
    pub delta: PhaseProfile,
}

pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, n_senders: usize) -> Result<RandomInstance> {
    let x = random_amplitudes(rng);
    let shares = random_shares(rng, n_senders)?;
    let delta = compose_phases(&shares);
    Ok(RandomInstance { x, shares, delta })
}

/// True when every amplitude is bounded away from zero and the composed
/// phases are pairwise distinct and nonzero (mod 2pi).
pub fn is_generic(instance: &RandomInstance) -> bool {
    const MARGIN: f64 = 1e-2;
    let x_ok = instance.x.values().iter().all(|&v| v > MARGIN);
    let phases: Vec<f64> = instance.delta.values().iter().map(|d| d.rem_euclid(TAU)).collect();
    let mut phase_ok = true;
    for i in 0..8 {
        for j in (i + 1)..8 {
            let gap = (phases[i] - phases[j]).abs();
            if gap.min(TAU - gap) < MARGIN {
                phase_ok = false;
            }
        }
    }
    x_ok && phase_ok
}

/// First generic instance drawn from `seed`.
pub fn generic_instance(seed: u64, n_senders: usize) -> Result<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let instance = random_instance(&mut rng, n_senders)?;
        if is_generic(&instance) {
            return Ok(instance);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_profiles_are_valid_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let x = random_instance(&mut a, 4).unwrap();
            assert_eq!(x, random_instance(&mut b, 4).unwrap());
            let sum: f64 = x.x.values().iter().map(|v| v * v).sum();
            assert!((sum - 1.0).abs() < 1e-12);
            assert!(x.x.values().iter().all(|v| *v >= 0.0));
            assert_eq!(x.shares.n_senders(), 4);
            for row in x.shares.rows() {
                assert_eq!(row.values()[0], 0.0);
                assert!(row.values().iter().all(|d| (0.0..TAU).contains(d)));
            }
        }
    }

    #[test]
    fn generic_instance_is_generic() {
        for seed in 0..10 {
            assert!(is_generic(&generic_instance(seed, 3).unwrap()));
        }
    }
}
