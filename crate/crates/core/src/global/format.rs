use serde::{Deserialize, Serialize};

use crate::concept::{ClassLabels, ConceptSet, Vocabulary};
use crate::explanation::{CoveringExplanation, ExplanationList};

/// Which clause percentage a formula shows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PctDisplay {
    /// Share of the support first covered by the clause.
    #[default]
    Marginal,
    /// Share of the support whose explanation contains the clause.
    Total,
}

fn conjunction(set: &ConceptSet, vocabulary: &Vocabulary) -> String {
    format!("({})", vocabulary.names_of(set).join(" ∧ "))
}

/// Disjunction of the clauses at or above `min_pct`, e.g.
/// `(bed ∧ wall)_50% ∨ (bed ∧ lamp)_50%`. Empty when nothing qualifies.
pub fn format_formula(phi: &CoveringExplanation, vocabulary: &Vocabulary, display: PctDisplay, min_pct: f64) -> String {
    phi.clauses
        .iter()
        .filter_map(|c| {
            let p = match display {
                PctDisplay::Marginal => c.d_marginal_pct,
                PctDisplay::Total => c.d_total_pct,
            };
            (p >= min_pct).then(|| format!("{}_{:.0}%", conjunction(&c.concepts, vocabulary), p))
        })
        .collect::<Vec<_>>()
        .join(" ∨ ")
}

/// One line per rule: `if (bed ∧ wall) then Bedroom  [40%]`, default last.
pub fn format_list(list: &ExplanationList, vocabulary: &Vocabulary, classes: &ClassLabels) -> String {
    let mut out = String::new();
    for r in list.body() {
        out.push_str(&format!(
            "if {} then {}  [{:.0}%]\n",
            conjunction(&r.antecedent, vocabulary),
            classes.name(r.class_id),
            r.d_pct
        ));
    }
    if let Some(d) = list.rules.last() {
        out.push_str(&format!("else {}  [{:.0}%]\n", classes.name(list.default_class), d.d_pct));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::ClassId;
    use crate::explanation::MdnfClause;
    use crate::search::fixtures::set;

    fn clause(s: &[u32], marginal: f64, total: f64) -> MdnfClause {
        MdnfClause {
            concepts: set(s),
            covered_total: 0,
            covered_marginal: 0,
            d_total_pct: total,
            d_marginal_pct: marginal,
        }
    }

    #[test]
    fn bedroom_formula() {
        let vocab = Vocabulary::new(["bed", "wall", "lamp"]).unwrap();
        let phi = CoveringExplanation {
            class_id: ClassId(0),
            clauses: vec![clause(&[0, 1], 50.0, 50.0), clause(&[0, 2], 50.0, 50.0)],
            support_size: 2,
            unexplained: vec![],
        };
        assert_eq!(format_formula(&phi, &vocab, PctDisplay::Marginal, 0.0), "(bed ∧ wall)_50% ∨ (bed ∧ lamp)_50%");
    }

    #[test]
    fn min_pct_and_display() {
        let vocab = Vocabulary::new(["bed", "wall", "lamp"]).unwrap();
        let phi = CoveringExplanation {
            class_id: ClassId(0),
            clauses: vec![clause(&[0], 97.5, 97.5), clause(&[1], 2.5, 40.0)],
            support_size: 40,
            unexplained: vec![],
        };
        assert_eq!(format_formula(&phi, &vocab, PctDisplay::Marginal, 3.0), "(bed)_98%");
        assert_eq!(format_formula(&phi, &vocab, PctDisplay::Total, 3.0), "(bed)_98% ∨ (wall)_40%");
        let empty = CoveringExplanation { clauses: vec![], ..phi };
        assert_eq!(format_formula(&empty, &vocab, PctDisplay::Marginal, 0.0), "");
    }
}
