use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Oracle, OracleError, ScoreQuery};
use crate::concept::{ClassId, ClassLabels, ConceptId, ConceptSet, Vocabulary};
use crate::error::{Error, Result};
use crate::instance::argmax_class;

/// Additive scoring model: `f_c(x_S) = Σ_{o ∈ S} w[c][o]`.
///
/// With `monotone` set every weight is non-negative, so the score can only
/// grow as concepts are added. Without it, negative weights are allowed and
/// the sum is clamped at zero; that variant exists for stress tests.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticModel {
    weights: Vec<Vec<f64>>,
    monotone: bool,
    seed: u64,
}

/// `{"weights": {class: {concept: weight}}, "monotone": bool, "seed": int}`.
/// Zero weights are omitted when writing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub weights: BTreeMap<String, BTreeMap<String, f64>>,
    pub monotone: bool,
    pub seed: u64,
}

impl SyntheticModel {
    /// `weights[class][concept]`; every row must have the same length.
    pub fn new(weights: Vec<Vec<f64>>, monotone: bool, seed: u64) -> Result<Self> {
        let width = weights.first().map_or(0, Vec::len);
        if weights.iter().any(|row| row.len() != width) {
            return Err(Error::Config("weight rows differ in length".into()));
        }
        if weights.iter().flatten().any(|w| !w.is_finite()) {
            return Err(Error::Config("non-finite weight".into()));
        }
        if monotone && weights.iter().flatten().any(|&w| w < 0.0) {
            return Err(Error::Config("monotone model with a negative weight".into()));
        }
        Ok(SyntheticModel { weights, monotone, seed })
    }

    pub fn num_classes(&self) -> usize {
        self.weights.len()
    }

    pub fn num_concepts(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn weight(&self, class: ClassId, concept: ConceptId) -> f64 {
        self.weights[class.index()][concept.index()]
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    /// Class score of a concept subset, summed in ascending concept order.
    pub fn class_score(&self, class: ClassId, subset: &ConceptSet) -> Result<f64, OracleError> {
        let row = self.weights.get(class.index()).ok_or(OracleError::UnknownClass(class.0))?;
        let mut sum = 0.0;
        for c in subset {
            sum += *row.get(c.index()).ok_or(OracleError::UnknownConcept(c.0))?;
        }
        Ok(if self.monotone { sum } else { sum.max(0.0) })
    }

    pub fn class_scores(&self, objects: &ConceptSet) -> Result<BTreeMap<ClassId, f64>, OracleError> {
        (0..self.num_classes() as u32).map(|c| Ok((ClassId(c), self.class_score(ClassId(c), objects)?))).collect()
    }

    pub fn from_record(record: &ModelRecord, vocabulary: &Vocabulary, classes: &ClassLabels) -> Result<Self> {
        let mut weights = vec![vec![0.0; vocabulary.len()]; classes.len()];
        for (class, row) in &record.weights {
            let c = classes.id(class)?;
            for (concept, &w) in row {
                weights[c.index()][vocabulary.id(concept)?.index()] = w;
            }
        }
        SyntheticModel::new(weights, record.monotone, record.seed)
    }

    pub fn to_record(&self, vocabulary: &Vocabulary, classes: &ClassLabels) -> ModelRecord {
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(c, row)| {
                let row = row
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(o, &w)| (vocabulary.name(ConceptId(o as u32)).to_string(), w))
                    .collect();
                (classes.name(ClassId(c as u32)).to_string(), row)
            })
            .collect();
        ModelRecord { weights, monotone: self.monotone, seed: self.seed }
    }
}

impl Oracle for SyntheticModel {
    fn score(&self, query: &ScoreQuery) -> Result<f64, OracleError> {
        self.class_score(query.class_id, &query.subset)
    }
}

/// `argmax_c f_c(objects)`, ties to the lowest class id.
pub fn synthetic_predict(model: &SyntheticModel, objects: &ConceptSet) -> ClassId {
    argmax_class((0..model.num_classes() as u32).map(|c| {
        let c = ClassId(c);
        (c, model.class_score(c, objects).unwrap_or(0.0))
    }))
    .unwrap_or(ClassId(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[u32]) -> ConceptSet {
        ConceptSet::from_ids(ids.iter().map(|&i| ConceptId(i)))
    }

    fn query(class: u32, ids: &[u32]) -> ScoreQuery {
        ScoreQuery { instance_id: "x".into(), class_id: ClassId(class), subset: set(ids) }
    }

    // bed = 0, wall = 1, lamp = 2
    fn bedroom() -> SyntheticModel {
        SyntheticModel::new(vec![vec![0.9, 0.05, 0.05]], true, 0).unwrap()
    }

    #[test]
    fn additive_score() {
        let m = bedroom();
        assert!((m.score(&query(0, &[0, 1])).unwrap() - 0.95).abs() < 1e-12);
        assert_eq!(m.score(&query(0, &[])).unwrap(), 0.0);
        assert_eq!(m.score(&query(0, &[0, 1, 2])).unwrap(), 1.0);
    }

    #[test]
    fn unknown_class_or_concept() {
        let m = bedroom();
        assert!(matches!(m.score(&query(3, &[0])), Err(OracleError::UnknownClass(3))));
        assert!(matches!(m.score(&query(0, &[9])), Err(OracleError::UnknownConcept(9))));
    }

    #[test]
    fn predict_examples() {
        // a = 0, b = 1
        let m = SyntheticModel::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], true, 0).unwrap();
        assert_eq!(synthetic_predict(&m, &set(&[0])), ClassId(0));
        let tie = SyntheticModel::new(vec![vec![0.3, 0.7], vec![0.3, 0.7]], true, 0).unwrap();
        assert_eq!(synthetic_predict(&tie, &set(&[0, 1])), ClassId(0));
        let m = SyntheticModel::new(vec![vec![1.0, 1.0], vec![0.0, 3.0]], true, 0).unwrap();
        assert_eq!(synthetic_predict(&m, &set(&[0, 1])), ClassId(1));
    }

    #[test]
    fn monotone_rejects_negative_weights() {
        assert!(SyntheticModel::new(vec![vec![0.5, -0.1]], true, 0).is_err());
        let m = SyntheticModel::new(vec![vec![0.5, -1.0]], false, 0).unwrap();
        assert_eq!(m.score(&query(0, &[0, 1])).unwrap(), 0.0);
        assert_eq!(m.score(&query(0, &[0])).unwrap(), 0.5);
    }

    #[test]
    fn record_round_trip() {
        let vocab = Vocabulary::new(["bed", "wall", "lamp"]).unwrap();
        let classes = ClassLabels::new(["Bedroom"]);
        let m = bedroom();
        let rec = m.to_record(&vocab, &classes);
        assert_eq!(rec.weights["Bedroom"]["bed"], 0.9);
        assert_eq!(SyntheticModel::from_record(&rec, &vocab, &classes).unwrap(), m);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // random chains S_0 ⊆ S_1 ⊆ ... built by inserting a permutation
            #[test]
            fn monotone_along_random_chains(
                weights in prop::collection::vec(0.0f64..2.0, 12),
                order in Just((0u32..12).collect::<Vec<_>>()).prop_shuffle(),
            ) {
                let m = SyntheticModel::new(vec![weights], true, 0).unwrap();
                let mut s = ConceptSet::empty();
                let mut prev = m.class_score(ClassId(0), &s).unwrap();
                for id in order {
                    s = s.with(ConceptId(id));
                    let next = m.class_score(ClassId(0), &s).unwrap();
                    prop_assert!(next >= prev);
                    prev = next;
                }
            }

            #[test]
            fn deterministic(weights in prop::collection::vec(0.0f64..2.0, 8), ids in prop::collection::vec(0u32..8, 0..8)) {
                let m = SyntheticModel::new(vec![weights], true, 1).unwrap();
                let q = query(0, &ids);
                prop_assert_eq!(m.score(&q).unwrap().to_bits(), m.score(&q).unwrap().to_bits());
            }
        }
    }
}
