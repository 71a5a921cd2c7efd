use serde::ser::{Error as _, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::protocol::{CorrectionTable, ProtocolTranscript};
use crate::qstate::StateVector;

use super::HarnessError;

/// Real number serialized with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Num(pub f64);

impl Num {
    pub fn text(self) -> String {
        format!("{:.16e}", self.0)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(self.text()).map_err(S::Error::custom)?.serialize(s)
    }
}

pub fn nums(values: &[f64]) -> Vec<Num> {
    values.iter().copied().map(Num).collect()
}

/// Amplitudes as `[re, im]` pairs.
pub fn amplitude_pairs(s: &StateVector) -> Vec<[Num; 2]> {
    s.amplitudes().iter().map(|a| [Num(a.re), Num(a.im)]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub senders: usize,
    pub mode: String,
    pub trials: usize,
    pub seed: u64,
    pub profile: String,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_perturbation: Option<Num>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileEcho {
    pub x: Vec<Num>,
    pub delta: Vec<Num>,
    pub shares: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchRecord {
    pub profile: usize,
    pub outcome: String,
    pub probability: Num,
    pub correction: String,
    pub fidelity: Num,
    pub classical_bits: u32,
    /// Max over this branch's measurements of `|sum of outcome probabilities - 1|`.
    pub distribution_sum_deviation: Num,
}

impl BranchRecord {
    pub fn from_transcript(profile: usize, t: &ProtocolTranscript) -> Self {
        let deviation = t
            .steps
            .iter()
            .map(|s| (s.distribution_sum - 1.0).abs())
            .fold(0.0, f64::max);
        Self {
            profile,
            outcome: t.outcome.to_string(),
            probability: Num(t.probability),
            correction: t.correction.to_string(),
            fidelity: Num(t.fidelity),
            classical_bits: t.classical_bits,
            distribution_sum_deviation: Num(deviation),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisCheck {
    pub basis: String,
    pub max_deviation: Num,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregates {
    pub profile_count: usize,
    pub branch_count: usize,
    pub min_fidelity: Num,
    /// Exhaustive: max over profiles of `|sum of branch probabilities - 1|`.
    /// Sampled: max over branches of `distribution_sum_deviation`.
    pub max_probability_sum_deviation: Num,
    pub classical_bits_per_run: u32,
    pub bases_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub engine_version: String,
    pub config: ConfigEcho,
    pub passed: bool,
    pub aggregates: Aggregates,
    pub basis_validation: Vec<BasisCheck>,
    pub profiles: Vec<ProfileEcho>,
    pub branches: Vec<BranchRecord>,
}

impl VerificationReport {
    /// Recomputes the aggregates from the per-branch rows.
    pub fn recompute_aggregates(&self, exhaustive: bool) -> Aggregates {
        let min_fidelity = self
            .branches
            .iter()
            .map(|b| b.fidelity.0)
            .fold(f64::INFINITY, f64::min);
        let max_probability_sum_deviation = if exhaustive {
            (0..self.profiles.len())
                .filter(|p| self.branches.iter().any(|b| b.profile == *p))
                .map(|p| {
                    let sum: f64 = self
                        .branches
                        .iter()
                        .filter(|b| b.profile == p)
                        .map(|b| b.probability.0)
                        .sum();
                    (sum - 1.0).abs()
                })
                .fold(0.0, f64::max)
        } else {
            self.branches
                .iter()
                .map(|b| b.distribution_sum_deviation.0)
                .fold(0.0, f64::max)
        };
        Aggregates {
            profile_count: self.profiles.len(),
            branch_count: self.branches.len(),
            min_fidelity: Num(if self.branches.is_empty() { 0.0 } else { min_fidelity }),
            max_probability_sum_deviation: Num(max_probability_sum_deviation),
            classical_bits_per_run: self.branches.first().map_or(0, |b| b.classical_bits),
            bases_pass: self.basis_validation.iter().all(|b| b.pass),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, HarnessError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn csv_text<F>(write_rows: F) -> Result<String, HarnessError>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    write_rows(&mut w).map_err(|e| HarnessError::Io(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Io(e.to_string()))
}

pub fn report_csv(report: &VerificationReport) -> Result<String, HarnessError> {
    csv_text(|w| {
        w.write_record([
            "profile",
            "outcome",
            "probability",
            "correction",
            "fidelity",
            "classical_bits",
            "distribution_sum_deviation",
        ])?;
        for b in &report.branches {
            w.write_record([
                b.profile.to_string(),
                b.outcome.clone(),
                b.probability.text(),
                b.correction.clone(),
                b.fidelity.text(),
                b.classical_bits.to_string(),
                b.distribution_sum_deviation.text(),
            ])?;
        }
        Ok(())
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableEntryDoc {
    pub correction: [&'static str; 3],
    pub verification_fidelity: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableDocument {
    pub engine_version: String,
    pub senders: usize,
    pub entries: std::collections::BTreeMap<String, TableEntryDoc>,
}

impl TableDocument {
    pub fn new(table: &CorrectionTable) -> Self {
        Self {
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            senders: table.n_senders(),
            entries: table
                .iter()
                .map(|(o, e)| {
                    (
                        o.to_string(),
                        TableEntryDoc {
                            correction: e.correction.symbols(),
                            verification_fidelity: Num(e.verification_fidelity),
                        },
                    )
                })
                .collect(),
        }
    }
}

pub fn table_csv(table: &CorrectionTable) -> Result<String, HarnessError> {
    csv_text(|w| {
        w.write_record(["outcome", "c1", "c2", "c3", "verification_fidelity"])?;
        for (o, e) in table.iter() {
            let [a, b, c] = e.correction.symbols();
            w.write_record([o.to_string().as_str(), a, b, c, Num(e.verification_fidelity).text().as_str()])?;
        }
        Ok(())
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepDoc {
    pub party: String,
    pub basis: String,
    pub outcome: usize,
    pub probability: Num,
    pub bits: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunDocument {
    pub engine_version: String,
    pub senders: usize,
    pub seed: u64,
    pub channel: String,
    pub profile: ProfileEcho,
    pub steps: Vec<StepDoc>,
    pub outcome: String,
    pub probability: Num,
    pub classical_bits: u32,
    pub pre_correction: Vec<[Num; 2]>,
    pub correction: [&'static str; 3],
    pub final_state: Vec<[Num; 2]>,
    pub target_state: Vec<[Num; 2]>,
    pub fidelity: Num,
    pub passed: bool,
}

pub fn run_csv(doc: &RunDocument) -> Result<String, HarnessError> {
    let mut rows: Vec<(String, String)> = vec![
        ("senders".into(), doc.senders.to_string()),
        ("seed".into(), doc.seed.to_string()),
        ("channel".into(), doc.channel.clone()),
    ];
    for (i, s) in doc.steps.iter().enumerate() {
        rows.push((format!("step.{i}.party"), s.party.clone()));
        rows.push((format!("step.{i}.basis"), s.basis.clone()));
        rows.push((format!("step.{i}.outcome"), s.outcome.to_string()));
        rows.push((format!("step.{i}.probability"), s.probability.text()));
        rows.push((format!("step.{i}.bits"), s.bits.to_string()));
    }
    rows.push(("outcome".into(), doc.outcome.clone()));
    rows.push(("probability".into(), doc.probability.text()));
    rows.push(("classical_bits".into(), doc.classical_bits.to_string()));
    rows.push(("correction".into(), doc.correction.join(" ")));
    for (i, [re, im]) in doc.final_state.iter().enumerate() {
        rows.push((format!("final_state.{i}"), format!("{} {}", re.text(), im.text())));
    }
    rows.push(("fidelity".into(), doc.fidelity.text()));
    rows.push(("passed".into(), doc.passed.to_string()));
    csv_text(|w| {
        w.write_record(["key", "value"])?;
        for (k, v) in &rows {
            w.write_record([k, v])?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_17_digits() {
        let text = serde_json::to_string(&vec![Num(0.1), Num(-2.5e-300), Num(1.0)]).unwrap();
        assert_eq!(text, "[1.0000000000000001e-1,-2.5000000000000000e-300,1.0000000000000000e0]");
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vec![0.1, -2.5e-300, 1.0]);
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
    }
}
