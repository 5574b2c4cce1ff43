//! Local explanations: the complete set of minimally sufficient concept sets
//! for one instance and class.
//!
//! A concept set `S` is sufficient when `f_y(x_S) >= tau_p * f_y(x)`, where the
//! reference `f_y(x)` is the oracle's score of the full object set.
//! [`beam_add`] is the workhorse; [`exact_complete_explanation`] enumerates the
//! power set and serves as ground truth on small instances.

mod beam;
mod exact;
mod minimize;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concept::{ClassId, ConceptSet};
use crate::error::{Error, Result};
use crate::explanation::{CompleteExplanation, Mscx, SearchStatus};
use crate::instance::Instance;
use crate::oracle::{Oracle, ScoreQuery};

pub use beam::{beam_add, beam_search, SearchOutcome, SearchStats};
pub use exact::exact_complete_explanation;
pub use minimize::minimize_set;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Sufficiency ratio, in `(0, 1]`.
    pub tau_p: f64,
    pub beam_width: usize,
    /// Non-sufficient extensions each frontier set may pass on; `None` is
    /// unlimited.
    pub max_successors: Option<usize>,
    pub max_depth: Option<usize>,
    /// Largest object count the exact enumerator accepts.
    pub exact_k_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { tau_p: 0.95, beam_width: 3, max_successors: Some(5), max_depth: None, exact_k_limit: 15 }
    }
}

impl SearchConfig {
    /// Beam wide enough to keep every candidate for `k` objects, with no
    /// successor throttling.
    pub fn exhaustive(k: usize, tau_p: f64) -> Self {
        SearchConfig {
            tau_p,
            beam_width: 1usize << k.min(62),
            max_successors: None,
            max_depth: None,
            exact_k_limit: SearchConfig::default().exact_k_limit,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_p > 0.0 && self.tau_p <= 1.0) {
            return Err(Error::Config(format!("tau_p must be in (0, 1], got {}", self.tau_p)));
        }
        if self.beam_width == 0 {
            return Err(Error::Config("beam width must be at least 1".into()));
        }
        if self.max_successors == Some(0) {
            return Err(Error::Config("max successors must be at least 1".into()));
        }
        Ok(())
    }
}

/// Scores subsets of one instance for one class, memoizing locally so that
/// each distinct subset reaches the oracle once per run.
pub(crate) struct Scorer<'a, O: Oracle + ?Sized> {
    oracle: &'a O,
    instance: &'a Instance,
    class: ClassId,
    tau_p: f64,
    reference: f64,
    memo: HashMap<ConceptSet, f64>,
}

impl<'a, O: Oracle + ?Sized> Scorer<'a, O> {
    pub(crate) fn new(oracle: &'a O, instance: &'a Instance, class: ClassId, tau_p: f64) -> Result<Self> {
        let mut scorer = Scorer { oracle, instance, class, tau_p, reference: f64::NAN, memo: HashMap::new() };
        let reference = scorer.score(instance.objects())?;
        if !(reference > 0.0) {
            return Err(Error::NonPositiveReference { id: instance.id().to_string(), score: reference });
        }
        scorer.reference = reference;
        Ok(scorer)
    }

    pub(crate) fn threshold(&self) -> f64 {
        self.tau_p * self.reference
    }

    /// Distinct subsets sent to the oracle so far, the reference included.
    pub(crate) fn queries(&self) -> usize {
        self.memo.len()
    }

    pub(crate) fn score(&mut self, set: &ConceptSet) -> Result<f64> {
        if let Some(&v) = self.memo.get(set) {
            return Ok(v);
        }
        let q = ScoreQuery::new(self.instance, self.class, set.clone())?;
        let v = self.oracle.score(&q)?;
        self.memo.insert(set.clone(), v);
        Ok(v)
    }

    /// Scores every set not yet memoized in one oracle batch.
    pub(crate) fn prefetch<'s>(&mut self, sets: impl IntoIterator<Item = &'s ConceptSet>) -> Result<()> {
        let mut fresh: Vec<ScoreQuery> = Vec::new();
        let mut pending = std::collections::HashSet::new();
        for s in sets {
            if !self.memo.contains_key(s) && pending.insert(s.clone()) {
                fresh.push(ScoreQuery::new(self.instance, self.class, s.clone())?);
            }
        }
        if fresh.is_empty() {
            return Ok(());
        }
        let scores = self.oracle.score_batch(&fresh)?;
        for (q, v) in fresh.into_iter().zip(scores) {
            self.memo.insert(q.subset, v);
        }
        Ok(())
    }

    pub(crate) fn is_sufficient(&mut self, set: &ConceptSet) -> Result<bool> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.score(set)? >= self.threshold())
    }

    pub(crate) fn mscx(&mut self, set: ConceptSet) -> Result<Mscx> {
        let ratio = self.score(&set)? / self.reference;
        Ok(Mscx {
            concepts: set,
            instance_id: self.instance.id().to_string(),
            class_id: self.class,
            score_ratio: ratio,
        })
    }

    pub(crate) fn explanation(&mut self, sets: Vec<ConceptSet>, status: SearchStatus) -> Result<CompleteExplanation> {
        let mscxs = sets.into_iter().map(|s| self.mscx(s)).collect::<Result<Vec<_>>>()?;
        Ok(CompleteExplanation { instance_id: self.instance.id().to_string(), class_id: self.class, mscxs, status })
    }
}

/// `f_y(x_S) >= tau_p * f_y(x)`. Rejects the empty set and non-positive
/// reference scores.
pub fn is_sufficient<O: Oracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    class: ClassId,
    set: &ConceptSet,
    tau_p: f64,
) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    Scorer::new(oracle, instance, class, tau_p)?.is_sufficient(set)
}

/// `true` iff removing any single concept from `set` breaks sufficiency.
pub fn is_one_minimal<O: Oracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    class: ClassId,
    set: &ConceptSet,
    tau_p: f64,
) -> Result<bool> {
    let mut scorer = Scorer::new(oracle, instance, class, tau_p)?;
    for c in set {
        let smaller = set.without(c);
        if !smaller.is_empty() && scorer.is_sufficient(&smaller)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Beam,
    Exact,
}

/// Explains every instance for its predicted class, in dataset order.
/// `workers = 0` uses rayon's default pool size.
pub fn explain_instances<O: Oracle + ?Sized>(
    instances: &[Instance],
    oracle: &O,
    config: &SearchConfig,
    method: Method,
    workers: usize,
) -> Result<Vec<(CompleteExplanation, SearchStats)>> {
    config.validate()?;
    let run = |inst: &Instance| -> Result<(CompleteExplanation, SearchStats)> {
        match method {
            Method::Beam => {
                let out = beam_search(oracle, inst, inst.predicted_class(), config)?;
                Ok((out.explanation, out.stats))
            }
            Method::Exact => {
                let e = exact_complete_explanation(
                    oracle,
                    inst,
                    inst.predicted_class(),
                    config.tau_p,
                    config.exact_k_limit,
                )?;
                let k = inst.objects().len();
                let stats = SearchStats { queries: (1usize << k) - 1, ..SearchStats::default() };
                Ok((e, stats))
            }
        }
    };
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| instances.par_iter().map(run).collect())
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn sufficiency_examples() {
        let (m, x) = bedroom();
        assert!(is_sufficient(&m, &x, ClassId(0), &set(&[0, 1]), 0.95).unwrap());
        assert!(!is_sufficient(&m, &x, ClassId(0), &set(&[0]), 0.95).unwrap());
        for tau in [0.1, 0.5, 0.95, 1.0] {
            assert!(is_sufficient(&m, &x, ClassId(0), &set(&[0, 1, 2]), tau).unwrap());
        }
    }

    #[test]
    fn sufficiency_errors() {
        let (m, x) = bedroom();
        assert!(matches!(is_sufficient(&m, &x, ClassId(0), &set(&[]), 0.95), Err(Error::EmptySet)));
        let (zero, x0) = additive(&[0.0, 0.0]);
        assert!(matches!(
            is_sufficient(&zero, &x0, ClassId(0), &set(&[0]), 0.95),
            Err(Error::NonPositiveReference { .. })
        ));
        assert!(is_sufficient(&m, &x, ClassId(0), &set(&[7]), 0.95).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().validate().is_ok());
        assert!(SearchConfig { tau_p: 0.0, ..Default::default() }.validate().is_err());
        assert!(SearchConfig { tau_p: 1.01, ..Default::default() }.validate().is_err());
        assert!(SearchConfig { beam_width: 0, ..Default::default() }.validate().is_err());
        assert!(SearchConfig { max_successors: Some(0), ..Default::default() }.validate().is_err());
    }
}
