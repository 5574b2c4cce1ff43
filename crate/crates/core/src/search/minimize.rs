use super::Scorer;
use crate::concept::{ClassId, ConceptSet};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::oracle::Oracle;

/// Greedy backward elimination down to a 1-minimal sufficient subset.
///
/// Concepts are tried in ascending id order; a concept is dropped whenever
/// the remainder stays sufficient. Passes repeat until one removes nothing,
/// so the result is 1-minimal even for non-monotone oracles.
pub fn minimize_set<O: Oracle + ?Sized>(
    oracle: &O,
    instance: &Instance,
    class: ClassId,
    set: &ConceptSet,
    tau_p: f64,
) -> Result<ConceptSet> {
    let mut scorer = Scorer::new(oracle, instance, class, tau_p)?;
    minimize_with(&mut scorer, set.clone())
}

pub(crate) fn minimize_with<O: Oracle + ?Sized>(scorer: &mut Scorer<'_, O>, set: ConceptSet) -> Result<ConceptSet> {
    if !scorer.is_sufficient(&set)? {
        return Err(Error::NotSufficient(set.iter().map(|c| c.0).collect()));
    }
    let mut current = set;
    // a concept kept before a later removal may have become removable
    let mut recheck = true;
    while recheck {
        recheck = false;
        let mut kept_any = false;
        for c in current.to_vec() {
            let smaller = current.without(c);
            if !smaller.is_empty() && scorer.is_sufficient(&smaller)? {
                current = smaller;
                recheck |= kept_any;
            } else {
                kept_any = true;
            }
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::oracle::SyntheticModel;

    #[test]
    fn ascending_elimination_trace() {
        // bed fails to drop, wall drops ({bed,lamp} = 0.95), lamp cannot drop
        let (m, x) = bedroom();
        assert_eq!(minimize_set(&m, &x, ClassId(0), &set(&[0, 1, 2]), 0.95).unwrap(), set(&[0, 2]));
    }

    #[test]
    fn fixed_points() {
        let (m, x) = bedroom();
        assert_eq!(minimize_set(&m, &x, ClassId(0), &set(&[0, 1]), 0.95).unwrap(), set(&[0, 1]));
        let (m, x) = additive(&[1.0, 0.0]);
        assert_eq!(minimize_set(&m, &x, ClassId(0), &set(&[0]), 0.95).unwrap(), set(&[0]));
    }

    #[test]
    fn rejects_insufficient_input() {
        let (m, x) = bedroom();
        assert!(matches!(minimize_set(&m, &x, ClassId(0), &set(&[0]), 0.95), Err(Error::NotSufficient(_))));
    }

    #[test]
    fn second_pass_for_non_monotone() {
        // concept 0 cannot go first ({1,2} = 1.0 - 0.2... clamp) but can after 2 is gone
        // w = [0.5, 0.6, -0.2]: full = 0.9, threshold 0.855
        // drop 0 -> {1,2} = 0.4 no; drop 1 -> {0,2} = 0.3 no; drop 2 -> {0,1} = 1.1 yes
        // second pass: drop 0 -> {1} = 0.6 no; drop 1 -> {0} = 0.5 no
        let m = SyntheticModel::new(vec![vec![0.5, 0.6, -0.2]], false, 0).unwrap();
        let x = additive(&[0.0, 0.0, 0.0]).1;
        let got = minimize_set(&m, &x, ClassId(0), &set(&[0, 1, 2]), 0.95).unwrap();
        assert_eq!(got, set(&[0, 1]));
        assert!(crate::search::is_one_minimal(&m, &x, ClassId(0), &got, 0.95).unwrap());
    }
}
