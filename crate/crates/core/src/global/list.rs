use std::collections::{BTreeMap, HashMap};

use super::{Explained, MatchMode};
use crate::concept::{ClassId, ConceptSet};
use crate::error::{Error, Result};
use crate::explanation::{CompleteExplanation, ExplanationList, ExplanationRule};
use crate::instance::argmax_class;

/// Mask to the `(instance index, predicted class)` pairs whose explanation
/// contains it. Indices refer to the explanation slice it was built from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MaskIndex {
    pub masks: BTreeMap<ConceptSet, Vec<(usize, ClassId)>>,
    pub classes: Vec<ClassId>,
}

impl MaskIndex {
    pub fn new(explanations: &[CompleteExplanation]) -> Self {
        let mut masks: BTreeMap<ConceptSet, Vec<(usize, ClassId)>> = BTreeMap::new();
        for (i, e) in explanations.iter().enumerate() {
            for s in e.sets() {
                masks.entry(s.clone()).or_default().push((i, e.class_id));
            }
        }
        MaskIndex { masks, classes: explanations.iter().map(|e| e.class_id).collect() }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    fn modal_class(&self) -> ClassId {
        let mut counts: BTreeMap<ClassId, usize> = BTreeMap::new();
        for &c in &self.classes {
            *counts.entry(c).or_default() += 1;
        }
        argmax_class(counts.into_iter().map(|(c, n)| (c, n as f64))).unwrap_or(ClassId(0))
    }
}

/// Counts per predicted class among the still-uncovered holders of a mask.
fn class_counts(holders: &[(usize, ClassId)], uncovered: &[bool]) -> BTreeMap<ClassId, usize> {
    let mut n: BTreeMap<ClassId, usize> = BTreeMap::new();
    for &(i, c) in holders {
        if uncovered[i] {
            *n.entry(c).or_default() += 1;
        }
    }
    n
}

/// Ordered rule list over the masks of `index`.
///
/// Each round picks the mask that induces the fewest errors among the
/// instances it would newly cover, preferring larger coverage and then the
/// lexicographically smaller mask; the rule concludes the majority class of
/// those instances. Covered instances and the used mask are then removed. A
/// default rule for the modal predicted class closes the list.
pub fn explanation_list(index: &MaskIndex) -> ExplanationList {
    let total = index.classes.len();
    let mut uncovered = vec![true; total];
    let mut left = total;
    let mut available: BTreeMap<&ConceptSet, &Vec<(usize, ClassId)>> = index.masks.iter().collect();
    let mut rules = Vec::new();
    let pct = |n: usize| if total == 0 { 0.0 } else { 100.0 * n as f64 / total as f64 };
    loop {
        let best = available
            .iter()
            .filter_map(|(s, holders)| {
                let n = class_counts(holders, &uncovered);
                let gain: usize = n.values().sum();
                let top = n.values().copied().max()?;
                (gain > 0).then_some((gain - top, gain, *s, n))
            })
            .min_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(b.2)));
        let Some((_, gain, set, counts)) = best else { break };
        let class = argmax_class(counts.into_iter().map(|(c, n)| (c, n as f64))).expect("non-empty counts");
        for &(i, _) in available[set] {
            if uncovered[i] {
                uncovered[i] = false;
                left -= 1;
            }
        }
        available.remove(set);
        rules.push(ExplanationRule {
            antecedent: set.clone(),
            class_id: class,
            covered_marginal: gain,
            d_pct: pct(gain),
        });
    }
    let default_class = index.modal_class();
    rules.push(ExplanationRule {
        antecedent: ConceptSet::empty(),
        class_id: default_class,
        covered_marginal: left,
        d_pct: pct(left),
    });
    ExplanationList { rules, default_class }
}

/// Class assigned by the first matching rule; the default always matches.
pub fn classify_with_list(list: &ExplanationList, x: &Explained<'_>, mode: MatchMode) -> ClassId {
    let pred = x.instance.predicted_class();
    list.body().iter().find(|r| x.matches(&r.antecedent, pred, mode)).map_or(list.default_class, |r| r.class_id)
}

/// Fraction of instances whose list class equals the predicted class.
pub fn list_accuracy(list: &ExplanationList, instances: &[Explained<'_>], mode: MatchMode) -> Result<f64> {
    if instances.is_empty() {
        return Err(Error::NoInstances);
    }
    let hits = instances.iter().filter(|x| classify_with_list(list, x, mode) == x.instance.predicted_class()).count();
    Ok(hits as f64 / instances.len() as f64)
}

/// Largest instance count [`perfect_list`] searches over.
pub const PERFECT_LIST_LIMIT: usize = 24;

/// A zero-error list under mask-membership matching: rules in order, then
/// the default class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectList {
    pub rules: Vec<(ConceptSet, ClassId)>,
    pub default_class: ClassId,
}

/// Exhaustive search over rule orderings for a list that classifies every
/// instance as predicted. Each mask is used at most once, and the default
/// class is free. States are the sets of still-uncovered instances, so the
/// search is memoized over at most `2^n` states.
pub fn perfect_list(index: &MaskIndex) -> Result<Option<PerfectList>> {
    let n = index.classes.len();
    if n > PERFECT_LIST_LIMIT {
        return Err(Error::LimitExceeded { what: "perfect list instance count", size: n, limit: PERFECT_LIST_LIMIT });
    }
    let masks: Vec<(&ConceptSet, u32)> =
        index.masks.iter().map(|(s, holders)| (s, holders.iter().fold(0u32, |b, &(i, _)| b | 1 << i))).collect();

    /// The single class among `bits`, `Some(None)` when empty, `None` when mixed.
    fn single_class(bits: u32, classes: &[ClassId]) -> Option<Option<ClassId>> {
        let mut seen = None;
        for (i, &c) in classes.iter().enumerate() {
            if bits >> i & 1 == 1 {
                match seen {
                    None => seen = Some(c),
                    Some(s) if s != c => return None,
                    _ => {}
                }
            }
        }
        Some(seen)
    }

    // a rule may fire only when its newly covered instances agree on a class;
    // rules covering nothing new change no decision and are skipped
    fn search(
        uncovered: u32,
        masks: &[(&ConceptSet, u32)],
        classes: &[ClassId],
        memo: &mut HashMap<u32, Option<Vec<(usize, ClassId)>>>,
    ) -> Option<Vec<(usize, ClassId)>> {
        if let Some(hit) = memo.get(&uncovered) {
            return hit.clone();
        }
        let result = if single_class(uncovered, classes).is_some() {
            Some(Vec::new())
        } else {
            masks.iter().enumerate().find_map(|(i, m)| {
                let fresh = m.1 & uncovered;
                let class = single_class(fresh, classes)??;
                search(uncovered & !m.1, masks, classes, memo).map(|mut rest| {
                    rest.insert(0, (i, class));
                    rest
                })
            })
        };
        memo.insert(uncovered, result.clone());
        result
    }

    let all = ((1u64 << n) - 1) as u32;
    let mut memo = HashMap::new();
    Ok(search(all, &masks, &index.classes, &mut memo).map(|order| {
        let left = order.iter().fold(all, |u, &(i, _)| u & !masks[i].1);
        let default_class = single_class(left, &index.classes).flatten().unwrap_or_else(|| index.modal_class());
        PerfectList { rules: order.into_iter().map(|(i, c)| (masks[i].0.clone(), c)).collect(), default_class }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;
    use crate::search::fixtures::set;

    fn expl(id: &str, class: u32, sets: &[&[u32]]) -> CompleteExplanation {
        use crate::explanation::{Mscx, SearchStatus};
        CompleteExplanation {
            instance_id: id.into(),
            class_id: ClassId(class),
            mscxs: sets
                .iter()
                .map(|s| Mscx { concepts: set(s), instance_id: id.into(), class_id: ClassId(class), score_ratio: 1.0 })
                .collect(),
            status: SearchStatus::Found,
        }
    }

    fn inst(id: &str, objects: &[u32], class: u32) -> Instance {
        Instance::new(id, set(objects), ClassId(class), None, None).unwrap()
    }

    /// A = {0}, B = {1}; classes c1 = 1, c2 = 2.
    fn trace() -> (Vec<Instance>, Vec<CompleteExplanation>) {
        let es = vec![expl("x1", 1, &[&[0]]), expl("x2", 1, &[&[0]]), expl("x3", 2, &[&[0]]), expl("x4", 2, &[&[1]])];
        let xs = vec![inst("x1", &[0], 1), inst("x2", &[0], 1), inst("x3", &[0], 2), inst("x4", &[1], 2)];
        (xs, es)
    }

    #[test]
    fn hand_trace() {
        let (xs, es) = trace();
        let list = explanation_list(&MaskIndex::new(&es));
        let body: Vec<(ConceptSet, ClassId)> = list.body().iter().map(|r| (r.antecedent.clone(), r.class_id)).collect();
        assert_eq!(body, vec![(set(&[1]), ClassId(2)), (set(&[0]), ClassId(1))]);
        assert_eq!(list.default_class, ClassId(1));
        assert_eq!(list.rules.last().unwrap().covered_marginal, 0);
        let pairs: Vec<Explained> = xs.iter().zip(&es).map(|(i, e)| Explained::new(i, e)).collect();
        assert_eq!(list_accuracy(&list, &pairs, MatchMode::Mscx).unwrap(), 0.75);
    }

    #[test]
    fn single_class() {
        let es = vec![expl("a", 0, &[&[0], &[1]]), expl("b", 0, &[&[0]])];
        let list = explanation_list(&MaskIndex::new(&es));
        assert_eq!(list.rules.len(), 2);
        assert_eq!(list.rules[0].antecedent, set(&[0]));
        assert_eq!(list.rules[0].covered_marginal, 2);
    }

    #[test]
    fn default_only_list_scores_modal_frequency() {
        let (xs, es) = trace();
        let list = explanation_list(&MaskIndex::new(&[]));
        let list = ExplanationList {
            default_class: ClassId(1),
            rules: vec![ExplanationRule { class_id: ClassId(1), ..list.rules[0].clone() }],
        };
        let pairs: Vec<Explained> = xs.iter().zip(&es).map(|(i, e)| Explained::new(i, e)).collect();
        assert_eq!(list_accuracy(&list, &pairs, MatchMode::Presence).unwrap(), 0.5);
        assert!(list_accuracy(&list, &[], MatchMode::Presence).is_err());
    }

    #[test]
    fn classify_presence_first_match() {
        let rule = |s: &[u32], c: u32| ExplanationRule {
            antecedent: set(s),
            class_id: ClassId(c),
            covered_marginal: 0,
            d_pct: 0.0,
        };
        let list = ExplanationList { rules: vec![rule(&[0], 0), rule(&[], 1)], default_class: ClassId(1) };
        let e = expl("x", 0, &[]);
        let bed = inst("x", &[0, 1], 0);
        assert_eq!(classify_with_list(&list, &Explained::new(&bed, &e), MatchMode::Presence), ClassId(0));
        let road = inst("x", &[5], 0);
        assert_eq!(classify_with_list(&list, &Explained::new(&road, &e), MatchMode::Presence), ClassId(1));
        let ordered =
            ExplanationList { rules: vec![rule(&[1], 0), rule(&[0, 1], 2), rule(&[], 1)], default_class: ClassId(1) };
        assert_eq!(classify_with_list(&ordered, &Explained::new(&bed, &e), MatchMode::Presence), ClassId(0));
    }

    #[test]
    fn brute_force_perfect_list() {
        let (_, es) = trace();
        // A is held by both classes and B alone cannot separate x3
        assert_eq!(perfect_list(&MaskIndex::new(&es)).unwrap(), None);
        let es = vec![expl("a", 0, &[&[0]]), expl("b", 1, &[&[1]]), expl("c", 1, &[&[1], &[2]])];
        let p = perfect_list(&MaskIndex::new(&es)).unwrap().unwrap();
        assert_eq!(p.rules.len(), 1);
    }
}
