//! Aggregate scoring of evaluation records: result-class fractions, the
//! per-class harmonic complexity ratios, and the combined test metric.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::candidate::{AnswerKind, EvaluationRecord};
use crate::error::ScoringError;

/// The four result classes, in scoring order. The first three partition
/// correct answers by how much they abstract; everything else is
/// incorrect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResultClass {
    CorrectNonPrintNonOrdinal,
    CorrectOrdinal,
    CorrectPrint,
    Incorrect,
}

impl ResultClass {
    pub const ALL: [ResultClass; 4] = [
        ResultClass::CorrectNonPrintNonOrdinal,
        ResultClass::CorrectOrdinal,
        ResultClass::CorrectPrint,
        ResultClass::Incorrect,
    ];

    pub fn of(record: &EvaluationRecord) -> Self {
        match (record.c, record.kind) {
            (false, _) => ResultClass::Incorrect,
            (true, AnswerKind::Print) => ResultClass::CorrectPrint,
            (true, AnswerKind::Ordinal) => ResultClass::CorrectOrdinal,
            (true, AnswerKind::NonBoth) => ResultClass::CorrectNonPrintNonOrdinal,
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap()
    }
}

/// Fractions of records per result class, summing to 1.
pub fn rho_vector(records: &[EvaluationRecord]) -> Result<[f64; 4], ScoringError> {
    if records.is_empty() {
        return Err(ScoringError::EmptyScores);
    }
    let mut counts = [0usize; 4];
    for r in records {
        counts[ResultClass::of(r).index()] += 1;
    }
    Ok(counts.map(|c| c as f64 / records.len() as f64))
}

/// Harmonic mean of the ratios M(D)/M(R) over the records of one correct
/// class: n / sum(M(R)/M(D)). An empty class scores 0 so its term simply
/// vanishes from the combined metric. Ratios are reported unclamped: with
/// an approximate complexity metric a candidate can come out shorter than
/// the target, pushing the value above 1.
pub fn delta_k(
    records: &[EvaluationRecord],
    class: ResultClass,
    target_complexity: &BTreeMap<String, f64>,
) -> Result<f64, ScoringError> {
    assert_ne!(class, ResultClass::Incorrect, "incorrect answers carry a fixed weight");
    let mut n = 0usize;
    let mut ratio_sum = 0.0;
    for (index, record) in records.iter().enumerate() {
        if ResultClass::of(record) != class {
            continue;
        }
        record.validate()?;
        let m_target = *target_complexity.get(&record.item_id).ok_or_else(|| {
            ScoringError::BadRecord(format!("no target complexity for item {}", record.item_id))
        })?;
        if m_target <= 0.0 || !m_target.is_finite() {
            return Err(ScoringError::ZeroTargetComplexity { index, value: m_target });
        }
        n += 1;
        ratio_sum += record.complexity_of_answer / m_target;
    }
    if n == 0 {
        Ok(0.0)
    } else {
        Ok(n as f64 / ratio_sum)
    }
}

/// The delta for each of the three correct classes, in class order.
pub fn delta_vector(
    records: &[EvaluationRecord],
    target_complexity: &BTreeMap<String, f64>,
) -> Result<[f64; 3], ScoringError> {
    Ok([
        delta_k(records, ResultClass::CorrectNonPrintNonOrdinal, target_complexity)?,
        delta_k(records, ResultClass::CorrectOrdinal, target_complexity)?,
        delta_k(records, ResultClass::CorrectPrint, target_complexity)?,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiScores {
    /// delta1*rho1 + delta2*rho2/2 + delta3*rho3/4 - rho4, the combined
    /// metric with power-law weights privileging abstraction over
    /// reproduction.
    pub phi: f64,
    /// Correct fraction minus incorrect fraction, ignoring quality.
    pub phi_a: f64,
    /// Like phi but with all three classes at full weight.
    pub phi_b: f64,
}

/// Combine class fractions and class qualities into the test metric.
/// Whenever every delta lies in [0,1], phi lies in [-1,1].
pub fn phi(rho: [f64; 4], delta: [f64; 3]) -> Result<PhiScores, ScoringError> {
    let sum: f64 = rho.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(ScoringError::BadRho(sum));
    }
    Ok(PhiScores {
        phi: delta[0] * rho[0] + delta[1] * rho[1] / 2.0 + delta[2] * rho[2] / 4.0 - rho[3],
        phi_a: rho[0] + rho[1] + rho[2] - rho[3],
        phi_b: delta[0] * rho[0] + delta[1] * rho[1] + delta[2] * rho[2] - rho[3],
    })
}

/// Shift scores to be strictly positive while preserving their order:
/// s -> alpha*(s - min) + epsilon.
pub fn affine_positive(
    scores: &[f64],
    alpha: f64,
    epsilon: f64,
) -> Result<Vec<f64>, ScoringError> {
    if scores.is_empty() {
        return Err(ScoringError::EmptyScores);
    }
    if !(alpha > 0.0 && epsilon > 0.0) {
        return Err(ScoringError::BadAffineParams);
    }
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(scores.iter().map(|s| alpha * (s - min) + epsilon).collect())
}

/// One model's full scoring row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreCard {
    pub model_id: String,
    pub rho: [f64; 4],
    pub delta: [f64; 3],
    pub phi: f64,
    pub phi_a: f64,
    pub phi_b: f64,
    /// Filled once all models are known; see [`fill_phi_positive`].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phi_positive: Option<f64>,
}

/// Score one model's records end to end.
pub fn score_model(
    model_id: &str,
    records: &[EvaluationRecord],
    target_complexity: &BTreeMap<String, f64>,
) -> Result<ScoreCard, ScoringError> {
    let rho = rho_vector(records)?;
    let delta = delta_vector(records, target_complexity)?;
    let scores = phi(rho, delta)?;
    Ok(ScoreCard {
        model_id: model_id.to_string(),
        rho,
        delta,
        phi: scores.phi,
        phi_a: scores.phi_a,
        phi_b: scores.phi_b,
        phi_positive: None,
    })
}

/// Apply the affine positive shift across a whole ranking so every model
/// gets a positive display score with the same ordering as phi.
pub fn fill_phi_positive(
    cards: &mut [ScoreCard],
    alpha: f64,
    epsilon: f64,
) -> Result<(), ScoringError> {
    let phis: Vec<f64> = cards.iter().map(|c| c.phi).collect();
    let shifted = affine_positive(&phis, alpha, epsilon)?;
    for (card, value) in cards.iter_mut().zip(shifted) {
        card.phi_positive = Some(value);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidate::AuxMetrics;
    use proptest::prelude::*;

    fn record(item: &str, c: bool, kind: AnswerKind, complexity: f64) -> EvaluationRecord {
        EvaluationRecord {
            item_id: item.into(),
            model_id: "m".into(),
            c,
            kind,
            complexity_of_answer: complexity,
            aux: AuxMetrics {
                length_chars: 1,
                normalized_length: 1,
                deflate_length: 9,
                no_compression_percent: 0.0,
            },
        }
    }

    fn targets(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn rho_examples() {
        let all_good: Vec<_> = (0..4)
            .map(|i| record(&format!("i{i}"), true, AnswerKind::NonBoth, 1.0))
            .collect();
        assert_eq!(rho_vector(&all_good).unwrap(), [1.0, 0.0, 0.0, 0.0]);

        let half: Vec<_> = vec![
            record("a", true, AnswerKind::Print, 1.0),
            record("b", false, AnswerKind::NonBoth, 1.0),
        ];
        assert_eq!(rho_vector(&half).unwrap(), [0.0, 0.0, 0.5, 0.5]);

        assert!(matches!(rho_vector(&[]), Err(ScoringError::EmptyScores)));
    }

    #[test]
    fn delta_examples() {
        let t = targets(&[("a", 1.0), ("b", 1.0)]);
        let recs = vec![
            record("a", true, AnswerKind::NonBoth, 2.0),
            record("b", true, AnswerKind::NonBoth, 4.0),
        ];
        let d = delta_k(&recs, ResultClass::CorrectNonPrintNonOrdinal, &t).unwrap();
        assert!((d - 1.0 / 3.0).abs() < 1e-12);

        let single = vec![record("a", true, AnswerKind::NonBoth, 1.0)];
        assert_eq!(delta_k(&single, ResultClass::CorrectNonPrintNonOrdinal, &t).unwrap(), 1.0);

        let equal: Vec<_> = ["a", "b", "a"]
            .iter()
            .map(|i| record(i, true, AnswerKind::Ordinal, 1.0))
            .collect();
        assert_eq!(delta_k(&equal, ResultClass::CorrectOrdinal, &t).unwrap(), 1.0);

        // empty class contributes nothing
        assert_eq!(delta_k(&single, ResultClass::CorrectPrint, &t).unwrap(), 0.0);

        let zero_t = targets(&[("a", 0.0)]);
        assert!(matches!(
            delta_k(&single, ResultClass::CorrectNonPrintNonOrdinal, &zero_t),
            Err(ScoringError::ZeroTargetComplexity { index: 0, value }) if value == 0.0
        ));
    }

    #[test]
    fn phi_examples() {
        let p = phi([1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.phi, 1.0);
        assert_eq!(p.phi_a, 1.0);

        let p = phi([0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.phi, -1.0);

        let p = phi([0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.phi, 0.25);

        assert!(matches!(
            phi([0.5, 0.0, 0.0, 0.0], [0.0; 3]),
            Err(ScoringError::BadRho(_))
        ));
    }

    #[test]
    fn affine_examples() {
        assert_eq!(
            affine_positive(&[-1.0, 0.0, 1.0], 1.0, 0.1).unwrap(),
            vec![0.1, 1.1, 2.1]
        );
        assert_eq!(affine_positive(&[42.0], 3.0, 0.5).unwrap(), vec![0.5]);
        assert!(matches!(
            affine_positive(&[1.0], 0.0, 0.1),
            Err(ScoringError::BadAffineParams)
        ));
        assert!(matches!(
            affine_positive(&[], 1.0, 0.1),
            Err(ScoringError::EmptyScores)
        ));
    }

    #[test]
    fn score_model_combines_all_parts() {
        let t = targets(&[("a", 2.0), ("b", 2.0), ("c", 2.0), ("d", 2.0)]);
        let recs = vec![
            record("a", true, AnswerKind::NonBoth, 2.0),
            record("b", true, AnswerKind::Ordinal, 2.0),
            record("c", true, AnswerKind::Print, 2.0),
            record("d", false, AnswerKind::NonBoth, 2.0),
        ];
        let card = score_model("m", &recs, &t).unwrap();
        assert_eq!(card.rho, [0.25, 0.25, 0.25, 0.25]);
        assert_eq!(card.delta, [1.0, 1.0, 1.0]);
        // 0.25 + 0.125 + 0.0625 - 0.25
        assert!((card.phi - 0.1875).abs() < 1e-12);
        assert_eq!(card.phi_a, 0.5);
        assert!((card.phi_b - 0.5).abs() < 1e-12);
    }

    #[test]
    fn phi_positive_preserves_ranking() {
        let mut cards: Vec<ScoreCard> = [(-0.25, "x"), (0.8, "y"), (0.1, "z")]
            .iter()
            .map(|(p, id)| ScoreCard {
                model_id: id.to_string(),
                rho: [0.0; 4],
                delta: [0.0; 3],
                phi: *p,
                phi_a: 0.0,
                phi_b: 0.0,
                phi_positive: None,
            })
            .collect();
        fill_phi_positive(&mut cards, 2.0, 0.01).unwrap();
        let mut by_phi = cards.clone();
        by_phi.sort_by(|a, b| b.phi.total_cmp(&a.phi));
        let mut by_pos = cards.clone();
        by_pos.sort_by(|a, b| b.phi_positive.unwrap().total_cmp(&a.phi_positive.unwrap()));
        let ids = |v: &[ScoreCard]| v.iter().map(|c| c.model_id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(&by_phi), ids(&by_pos));
        assert!(cards.iter().all(|c| c.phi_positive.unwrap() > 0.0));
    }

    proptest! {
        #[test]
        fn phi_stays_in_band_for_unit_deltas(
            raw in prop::array::uniform4(0.0f64..1.0),
            delta in prop::array::uniform3(0.0f64..=1.0),
        ) {
            let sum: f64 = raw.iter().sum();
            prop_assume!(sum > 1e-6);
            let rho = raw.map(|r| r / sum);
            let p = phi(rho, delta).unwrap();
            prop_assert!(p.phi >= -1.0 - 1e-9 && p.phi <= 1.0 + 1e-9);
        }

        #[test]
        fn print_only_band(delta3 in 0.0f64..=1.0) {
            let p = phi([0.0, 0.0, 1.0, 0.0], [0.0, 0.0, delta3]).unwrap();
            prop_assert!(p.phi >= 0.0 && p.phi <= 0.25);
        }

        #[test]
        fn ordinal_only_band(delta2 in 0.0f64..=1.0) {
            let p = phi([0.0, 1.0, 0.0, 0.0], [0.0, delta2, 0.0]).unwrap();
            prop_assert!(p.phi >= 0.0 && p.phi <= 0.5);
        }

        #[test]
        fn affine_ranking_invariance(
            scores in prop::collection::vec(-1.0f64..=1.0, 1..12),
            alpha in 0.01f64..10.0,
            epsilon in 0.001f64..1.0,
        ) {
            let shifted = affine_positive(&scores, alpha, epsilon).unwrap();
            let argsort = |v: &[f64]| {
                let mut idx: Vec<usize> = (0..v.len()).collect();
                idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
                idx
            };
            prop_assert_eq!(argsort(&scores), argsort(&shifted));
            prop_assert!(shifted.iter().all(|&s| s > 0.0));
        }
    }
}
