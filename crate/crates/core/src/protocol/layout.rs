use std::fmt;

use crate::error::{Error, Result};
use crate::qstate::{StateVector, MAX_QUBITS};

/// A participant: the amplitude holder, phase holder `l` (1-based), or the
/// receiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Party {
    Alice,
    Bob(usize),
    Charlie,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Alice => write!(f, "alice"),
            Party::Bob(l) => write!(f, "bob{l}"),
            Party::Charlie => write!(f, "charlie"),
        }
    }
}

/// Register layout for `N` senders: three GHZ groups, each the block
/// `[A, B_1, ..., B_{N-1}, C]`, laid out group after group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QubitLayout {
    n_senders: usize,
}

impl QubitLayout {
    pub fn new(n_senders: usize) -> Result<Self> {
        if n_senders < 2 {
            return Err(Error::TooFewSenders(n_senders));
        }
        let total = 3 * (n_senders + 1);
        if total > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(total));
        }
        Ok(Self { n_senders })
    }

    pub fn n_senders(&self) -> usize {
        self.n_senders
    }

    /// Qubits per GHZ group.
    pub fn group_size(&self) -> usize {
        self.n_senders + 1
    }

    pub fn total_qubits(&self) -> usize {
        3 * self.group_size()
    }

    /// Parties in announcement order: Alice, then Bob_1..Bob_{N-1}.
    pub fn senders(&self) -> impl Iterator<Item = Party> {
        std::iter::once(Party::Alice).chain((1..self.n_senders).map(Party::Bob))
    }

    fn slot(&self, party: Party) -> Result<usize> {
        match party {
            Party::Alice => Ok(0),
            Party::Bob(l) if l >= 1 && l < self.n_senders => Ok(l),
            Party::Bob(l) => Err(Error::IndexOutOfRange {
                what: "phase sender",
                value: l,
            }),
            Party::Charlie => Ok(self.n_senders),
        }
    }

    /// The party's qubit in each GHZ group, group 1 first.
    pub fn triple(&self, party: Party) -> Result<[usize; 3]> {
        let slot = self.slot(party)?;
        let g = self.group_size();
        Ok([slot, g + slot, 2 * g + slot])
    }

    /// Qubit indices of GHZ group `group` (0-based).
    pub fn group(&self, group: usize) -> std::ops::Range<usize> {
        let g = self.group_size();
        group * g..(group + 1) * g
    }

    pub fn channel_description(&self) -> String {
        format!("3 x GHZ({})", self.group_size())
    }
}

/// `(|0...0> + |1...1>)/sqrt(2)` on `n` qubits.
pub fn ghz(n: usize) -> Result<StateVector> {
    let dim = 1usize << n;
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); dim];
    amps[0].re = 1.0;
    amps[dim - 1].re = 1.0;
    StateVector::from_unnormalized(amps)
}

/// Three GHZ groups arranged per `layout`.
pub fn prepare_channel(layout: &QubitLayout) -> Result<StateVector> {
    let block = ghz(layout.group_size())?;
    block.tensor(&block)?.tensor(&block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::BasisSet;

    #[test]
    fn triples_partition_register() {
        for n in 2..=5 {
            let layout = QubitLayout::new(n).unwrap();
            let mut seen = vec![false; layout.total_qubits()];
            let parties: Vec<Party> = layout.senders().chain([Party::Charlie]).collect();
            assert_eq!(parties.len(), n + 1);
            for p in parties {
                let t = layout.triple(p).unwrap();
                for (g, q) in t.iter().enumerate() {
                    assert!(layout.group(g).contains(q));
                    assert!(!seen[*q]);
                    seen[*q] = true;
                }
            }
            assert!(seen.iter().all(|s| *s));
        }
        let two = QubitLayout::new(2).unwrap();
        assert_eq!(two.triple(Party::Alice).unwrap(), [0, 3, 6]);
        assert_eq!(two.triple(Party::Bob(1)).unwrap(), [1, 4, 7]);
        assert_eq!(two.triple(Party::Charlie).unwrap(), [2, 5, 8]);
        assert!(two.triple(Party::Bob(2)).is_err());
        assert!(QubitLayout::new(1).is_err());
    }

    #[test]
    fn two_sender_channel_support() {
        let layout = QubitLayout::new(2).unwrap();
        let s = prepare_channel(&layout).unwrap();
        // Oracle: every GHZ block all-zero or all-one.
        let expected: Vec<usize> = (0..1usize << 9)
            .filter(|i| (0..3).all(|g| matches!((i >> (3 * g)) & 7, 0 | 7)))
            .collect();
        assert_eq!(s.support(1e-12), expected);
        for i in expected {
            assert!((s.amplitude(i).re - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn party_major_view_of_channel_support() {
        // Regrouping bits as (A1 A2 A3, B1 B2 B3, C1 C2 C3) gives the
        // interleaved index set.
        let layout = QubitLayout::new(2).unwrap();
        let s = prepare_channel(&layout).unwrap();
        let order: Vec<usize> = [Party::Alice, Party::Bob(1), Party::Charlie]
            .iter()
            .flat_map(|p| layout.triple(*p).unwrap())
            .collect();
        let mut regrouped: Vec<usize> = s
            .support(1e-12)
            .into_iter()
            .map(|i| {
                order
                    .iter()
                    .fold(0, |acc, &q| (acc << 1) | ((i >> (8 - q)) & 1))
            })
            .collect();
        regrouped.sort_unstable();
        assert_eq!(regrouped, vec![0, 73, 146, 219, 292, 365, 438, 511]);
    }

    #[test]
    fn three_sender_channel() {
        let layout = QubitLayout::new(3).unwrap();
        let s = prepare_channel(&layout).unwrap();
        assert_eq!(s.n_qubits(), 12);
        let support = s.support(1e-12);
        assert_eq!(support.len(), 8);
        for i in support {
            assert!((s.amplitude(i).re - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn single_group_marginal() {
        let g = ghz(3).unwrap();
        let branches = g.measure_in_basis([0, 1, 2], &BasisSet::computational()).unwrap();
        for b in branches {
            if b.probability > 0.0 {
                assert!(matches!(b.outcome, 0 | 7));
            }
        }
    }
}
