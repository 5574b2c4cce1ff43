use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::minimize::minimize_with;
use super::{Scorer, SearchConfig};
use crate::concept::{antichain, ClassId, ConceptSet};
use crate::error::Result;
use crate::explanation::{CompleteExplanation, SearchStatus};
use crate::instance::Instance;
use crate::oracle::Oracle;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Distinct subsets scored, the full-object reference included.
    pub queries: usize,
    /// Sufficient sets collected during the search, before pruning.
    pub collected: usize,
    /// Depth of the last expanded layer.
    pub depth: usize,
    /// The depth cap stopped a non-empty frontier.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub explanation: CompleteExplanation,
    pub stats: SearchStats,
}

/// Descending score, then ascending lexicographic set order.
fn rank(a: &(ConceptSet, f64), b: &(ConceptSet, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

/// Bottom-up beam search over concept subsets.
///
/// Starting from the empty set, every frontier set is extended by each
/// missing object. Sufficient extensions are collected and never expanded;
/// the rest compete for the next frontier (at most `max_successors` per
/// parent, then the best `beam_width` overall). The search runs until the
/// frontier empties or `max_depth` is reached. Collected sets are pruned to
/// an antichain, each survivor is reduced by backward elimination, and the
/// result is pruned again.
pub fn beam_search<O: Oracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    class: ClassId,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    config.validate()?;
    let mut scorer = Scorer::new(oracle, instance, class, config.tau_p)?;
    let threshold = scorer.threshold();
    let objects = instance.objects().to_vec();

    let mut frontier = vec![ConceptSet::empty()];
    let mut collected: BTreeSet<ConceptSet> = BTreeSet::new();
    let mut depth = 0;
    let mut truncated = false;

    while !frontier.is_empty() {
        if config.max_depth.is_some_and(|cap| depth >= cap) {
            truncated = true;
            break;
        }
        depth += 1;

        let expansions: Vec<Vec<ConceptSet>> = frontier
            .iter()
            .map(|s| objects.iter().filter(|&&o| !s.contains(o)).map(|&o| s.with(o)).collect())
            .collect();
        scorer.prefetch(expansions.iter().flatten())?;

        let mut candidates: BTreeMap<ConceptSet, f64> = BTreeMap::new();
        for children in expansions {
            let mut failing = Vec::with_capacity(children.len());
            for t in children {
                let score = scorer.score(&t)?;
                if score >= threshold {
                    collected.insert(t);
                } else {
                    failing.push((t, score));
                }
            }
            failing.sort_by(rank);
            if let Some(m) = config.max_successors {
                failing.truncate(m);
            }
            candidates.extend(failing);
        }

        let mut ranked: Vec<(ConceptSet, f64)> = candidates.into_iter().collect();
        ranked.sort_by(rank);
        ranked.truncate(config.beam_width);
        frontier = ranked.into_iter().map(|(s, _)| s).collect();
    }

    let collected_count = collected.len();
    let mut minimized = Vec::new();
    for t in antichain(collected) {
        minimized.push(minimize_with(&mut scorer, t)?);
    }
    let sets = antichain(minimized);

    let status = match (sets.is_empty(), truncated) {
        (false, _) => SearchStatus::Found,
        (true, true) => SearchStatus::DepthLimited,
        (true, false) => SearchStatus::NoSufficientSet,
    };
    let explanation = scorer.explanation(sets, status)?;
    Ok(SearchOutcome {
        explanation,
        stats: SearchStats { queries: scorer.queries(), collected: collected_count, depth, truncated },
    })
}

/// Complete explanation by beam search; see [`beam_search`].
pub fn beam_add<O: Oracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    class: ClassId,
    config: &SearchConfig,
) -> Result<CompleteExplanation> {
    beam_search(oracle, instance, class, config).map(|o| o.explanation)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::explanation::SearchStatus;
    use crate::oracle::SyntheticModel;

    fn unlimited() -> SearchConfig {
        SearchConfig { max_successors: None, ..SearchConfig::default() }
    }

    fn sets(e: &CompleteExplanation) -> Vec<ConceptSet> {
        e.sets().cloned().collect()
    }

    #[test]
    fn bedroom_fixture() {
        let (m, x) = bedroom();
        let e = beam_add(&m, &x, ClassId(0), &unlimited()).unwrap();
        assert_eq!(sets(&e), vec![set(&[0, 1]), set(&[0, 2])]);
        assert_eq!(e.status, SearchStatus::Found);
        for mscx in &e.mscxs {
            assert!((mscx.score_ratio - 0.95).abs() < 1e-12);
        }
    }

    #[test]
    fn single_object() {
        let (m, x) = additive(&[0.4]);
        let e = beam_add(&m, &x, ClassId(0), &SearchConfig::default()).unwrap();
        assert_eq!(sets(&e), vec![set(&[0])]);
        assert_eq!(e.mscxs[0].score_ratio, 1.0);
    }

    #[test]
    fn zero_weight_concept_never_needed() {
        let (m, x) = additive(&[0.5, 0.5, 0.0]);
        let e = beam_add(&m, &x, ClassId(0), &unlimited()).unwrap();
        assert_eq!(sets(&e), vec![set(&[0, 1])]);
    }

    #[test]
    fn greedy_hill_climb_is_still_sound() {
        let (m, x) = additive(&[0.3, 0.3, 0.2, 0.1, 0.1]);
        let cfg = SearchConfig { beam_width: 1, max_successors: Some(1), ..SearchConfig::default() };
        let e = beam_add(&m, &x, ClassId(0), &cfg).unwrap();
        assert!(!e.is_empty());
        for s in e.sets() {
            assert!(crate::search::is_sufficient(&m, &x, ClassId(0), s, 0.95).unwrap());
            assert!(crate::search::is_one_minimal(&m, &x, ClassId(0), s, 0.95).unwrap());
        }
    }

    #[test]
    fn depth_cap_reports_truncation() {
        let (m, x) = additive(&[0.25, 0.25, 0.25, 0.25]);
        let cfg = SearchConfig { max_depth: Some(2), ..SearchConfig::default() };
        let out = beam_search(&m, &x, ClassId(0), &cfg).unwrap();
        assert!(out.explanation.is_empty());
        assert_eq!(out.explanation.status, SearchStatus::DepthLimited);
        assert!(out.stats.truncated);
    }

    #[test]
    fn non_monotone_can_fail_to_find_anything_but_stays_sound() {
        // only the full set reaches the reference; every strict subset is clamped to 0
        let m = SyntheticModel::new(vec![vec![1.0, 1.0, -1.5]], false, 0).unwrap();
        let x = additive(&[0.0, 0.0, 0.0]).1;
        let e = beam_add(&m, &x, ClassId(0), &unlimited()).unwrap();
        for s in e.sets() {
            assert!(crate::search::is_sufficient(&m, &x, ClassId(0), s, 0.95).unwrap());
        }
    }

    #[test]
    fn deterministic() {
        let (m, x) = additive(&[0.2, 0.2, 0.2, 0.2, 0.1, 0.1]);
        let a = beam_search(&m, &x, ClassId(0), &SearchConfig::default()).unwrap();
        let b = beam_search(&m, &x, ClassId(0), &SearchConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
