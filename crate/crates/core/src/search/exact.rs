use super::Scorer;
use crate::concept::{ClassId, ConceptSet};
use crate::error::{Error, Result};
use crate::explanation::{CompleteExplanation, SearchStatus};
use crate::instance::Instance;
use crate::oracle::Oracle;

/// Every ⊆-minimal sufficient subset, found by scoring all `2^k - 1`
/// non-empty subsets of the instance's objects.
///
/// A subset is kept when it is sufficient and no strict subset is; this is
/// checked directly over the lattice, without assuming monotone scores.
pub fn exact_complete_explanation<O: Oracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    class: ClassId,
    tau_p: f64,
    k_limit: usize,
) -> Result<CompleteExplanation> {
    let objects = instance.objects().to_vec();
    let k = objects.len();
    if k > k_limit {
        return Err(Error::LimitExceeded { what: "exact enumeration object count", size: k, limit: k_limit });
    }
    let mut scorer = Scorer::new(oracle, instance, class, tau_p)?;
    let threshold = scorer.threshold();

    let full = 1usize << k;
    let subset_of = |mask: usize| -> ConceptSet { (0..k).filter(|b| mask >> b & 1 == 1).map(|b| objects[b]).collect() };
    let subsets: Vec<ConceptSet> = (0..full).map(subset_of).collect();
    scorer.prefetch(subsets[1..].iter())?;

    let mut sufficient = vec![false; full];
    // `covered[m]`: m or some non-empty subset of m is sufficient
    let mut covered = vec![false; full];
    let mut minimal = Vec::new();
    // increasing masks visit every subset of m before m
    for mask in 1..full {
        sufficient[mask] = scorer.score(&subsets[mask])? >= threshold;
        let below = (0..k).filter(|b| mask >> b & 1 == 1).any(|b| covered[mask & !(1 << b)]);
        if sufficient[mask] && !below {
            minimal.push(subsets[mask].clone());
        }
        covered[mask] = sufficient[mask] || below;
    }
    minimal.sort();
    let status = if minimal.is_empty() { SearchStatus::NoSufficientSet } else { SearchStatus::Found };
    scorer.explanation(minimal, status)
}
