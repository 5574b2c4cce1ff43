use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{Explained, MatchMode};
use crate::concept::{ClassId, ConceptSet};
use crate::error::{Error, Result};
use crate::explanation::{CompleteExplanation, CoveringExplanation, MdnfClause};

/// Mask to the ids of the instances whose explanation contains it.
pub type CoverageMap = BTreeMap<ConceptSet, BTreeSet<String>>;

/// Largest number of distinct masks [`exact_min_cover`] enumerates over.
pub const EXACT_COVER_LIMIT: usize = 20;

pub fn build_coverage_map<'a>(explanations: impl IntoIterator<Item = &'a CompleteExplanation>) -> CoverageMap {
    let mut map = CoverageMap::new();
    for e in explanations {
        for s in e.sets() {
            map.entry(s.clone()).or_default().insert(e.instance_id.clone());
        }
    }
    map
}

fn pct(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        100.0 * n as f64 / d as f64
    }
}

/// Greedy set cover of `support` by the masks of `map`.
///
/// Each round takes the mask covering the most still-uncovered instances,
/// preferring larger total coverage and then the lexicographically smaller
/// mask. Stops once no mask adds coverage.
pub fn greedy_cover(class: ClassId, support: &BTreeSet<String>, map: &CoverageMap) -> CoveringExplanation {
    let mut uncovered = support.clone();
    let mut available: Vec<(&ConceptSet, &BTreeSet<String>)> = map.iter().collect();
    let mut clauses = Vec::new();
    while !uncovered.is_empty() {
        let best = available
            .iter()
            .enumerate()
            .map(|(i, (s, r))| (i, r.intersection(&uncovered).count(), r.len(), *s))
            .filter(|&(_, gain, _, _)| gain > 0)
            .min_by(|a, b| b.1.cmp(&a.1).then(b.2.cmp(&a.2)).then(a.3.cmp(b.3)));
        let Some((i, gain, total, _)) = best else { break };
        let (set, covered) = available.remove(i);
        uncovered.retain(|x| !covered.contains(x));
        clauses.push(MdnfClause {
            concepts: set.clone(),
            covered_total: total,
            covered_marginal: gain,
            d_total_pct: pct(total, support.len()),
            d_marginal_pct: pct(gain, support.len()),
        });
    }
    CoveringExplanation { class_id: class, clauses, support_size: support.len(), unexplained: Vec::new() }
}

/// Covering explanation of `class` from the explanations of its support.
/// Explanations of other classes are ignored; instances with no minimally
/// sufficient set are listed as unexplained and left out of the support.
pub fn cover_class(class: ClassId, explanations: &[CompleteExplanation]) -> CoveringExplanation {
    let own: Vec<&CompleteExplanation> = explanations.iter().filter(|e| e.class_id == class).collect();
    let support: BTreeSet<String> = own.iter().filter(|e| !e.is_empty()).map(|e| e.instance_id.clone()).collect();
    let unexplained = own.iter().filter(|e| e.is_empty()).map(|e| e.instance_id.clone()).collect();
    let map = build_coverage_map(own.iter().copied());
    CoveringExplanation { unexplained, ..greedy_cover(class, &support, &map) }
}

fn bits(ids: &BTreeSet<String>, index: &BTreeMap<&str, usize>, words: usize) -> Vec<u64> {
    let mut b = vec![0u64; words];
    for id in ids {
        if let Some(&i) = index.get(id.as_str()) {
            b[i / 64] |= 1 << (i % 64);
        }
    }
    b
}

/// A minimum-cardinality family of masks covering every coverable support
/// instance, by enumerating mask subsets in increasing size.
pub fn exact_min_cover(support: &BTreeSet<String>, map: &CoverageMap) -> Result<Vec<ConceptSet>> {
    if map.len() > EXACT_COVER_LIMIT {
        return Err(Error::LimitExceeded { what: "exact cover mask count", size: map.len(), limit: EXACT_COVER_LIMIT });
    }
    let index: BTreeMap<&str, usize> = support.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let words = support.len().div_ceil(64).max(1);
    let masks: Vec<(&ConceptSet, Vec<u64>)> = map.iter().map(|(s, r)| (s, bits(r, &index, words))).collect();
    let target = masks.iter().fold(vec![0u64; words], |mut acc, (_, b)| {
        acc.iter_mut().zip(b).for_each(|(a, x)| *a |= x);
        acc
    });
    for size in 0..=masks.len() {
        for combo in (0..masks.len()).combinations(size) {
            let mut acc = vec![0u64; words];
            for &i in &combo {
                acc.iter_mut().zip(&masks[i].1).for_each(|(a, x)| *a |= x);
            }
            if acc == target {
                return Ok(combo.into_iter().map(|i| masks[i].0.clone()).collect());
            }
        }
    }
    unreachable!("the full mask family covers the target")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub mode: MatchMode,
    pub n_instances: usize,
    /// Fraction covered by the whole formula.
    pub fraction: f64,
    /// `curve[i]`: fraction covered by the first `i` clauses, from 0.
    pub curve: Vec<f64>,
}

/// Coverage of `phi` over `instances`, with the cumulative curve over clause
/// prefixes in selection order.
pub fn eval_dnf_coverage(phi: &CoveringExplanation, instances: &[Explained<'_>], mode: MatchMode) -> CoverageReport {
    let n = instances.len();
    // clause index at which each instance is first covered
    let mut first = vec![0usize; phi.clauses.len() + 1];
    for x in instances {
        if let Some(i) = phi.clauses.iter().position(|c| x.matches(&c.concepts, phi.class_id, mode)) {
            first[i + 1] += 1;
        }
    }
    let mut covered = 0;
    let curve: Vec<f64> = first
        .iter()
        .map(|&k| {
            covered += k;
            if n == 0 {
                0.0
            } else {
                covered as f64 / n as f64
            }
        })
        .collect();
    CoverageReport { mode, n_instances: n, fraction: *curve.last().unwrap(), curve }
}
