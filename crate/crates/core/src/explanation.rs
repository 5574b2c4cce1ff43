//! Local and global explanation artifacts.

use serde::{Deserialize, Serialize};

use crate::concept::{ClassId, ConceptSet};

/// One minimally sufficient concept explanation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mscx {
    pub concepts: ConceptSet,
    pub instance_id: String,
    pub class_id: ClassId,
    /// `f_y(x_S) / f_y(x)`.
    pub score_ratio: f64,
}

/// How a local search ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    /// The frontier emptied without any sufficient set.
    NoSufficientSet,
    /// The depth cap stopped the search before the frontier emptied and
    /// nothing sufficient had been found.
    DepthLimited,
}

/// All minimally sufficient explanations found for one instance and class.
/// The member sets form an antichain, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompleteExplanation {
    pub instance_id: String,
    pub class_id: ClassId,
    pub mscxs: Vec<Mscx>,
    pub status: SearchStatus,
}

impl CompleteExplanation {
    pub fn is_empty(&self) -> bool {
        self.mscxs.is_empty()
    }

    pub fn sets(&self) -> impl Iterator<Item = &ConceptSet> {
        self.mscxs.iter().map(|m| &m.concepts)
    }

    pub fn contains(&self, set: &ConceptSet) -> bool {
        self.mscxs.iter().any(|m| &m.concepts == set)
    }

    /// Union of the concepts of every member explanation.
    pub fn concept_union(&self) -> ConceptSet {
        self.sets().fold(ConceptSet::empty(), |acc, s| acc.union(s))
    }
}

/// A clause of a per-class monotone DNF, with its coverage annotations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MdnfClause {
    pub concepts: ConceptSet,
    /// Support instances whose explanation contains this set.
    pub covered_total: usize,
    /// Instances first covered by this clause at selection time.
    pub covered_marginal: usize,
    pub d_total_pct: f64,
    pub d_marginal_pct: f64,
}

/// Per-class monotone DNF. Clause order is greedy selection order; the
/// semantics are an unordered disjunction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringExplanation {
    pub class_id: ClassId,
    pub clauses: Vec<MdnfClause>,
    /// Number of explained support instances.
    pub support_size: usize,
    /// Support instances with an empty explanation, excluded from coverage.
    pub unexplained: Vec<String>,
}

impl CoveringExplanation {
    pub fn covered(&self) -> usize {
        self.clauses.iter().map(|c| c.covered_marginal).sum()
    }
}

/// `(antecedent; class)` entry of an explanation list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplanationRule {
    pub antecedent: ConceptSet,
    pub class_id: ClassId,
    pub covered_marginal: usize,
    pub d_pct: f64,
}

/// Ordered rule list. The last rule is always the default rule, with an
/// empty antecedent and `default_class` as its conclusion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplanationList {
    pub rules: Vec<ExplanationRule>,
    pub default_class: ClassId,
}

impl ExplanationList {
    /// Rules without the trailing default.
    pub fn body(&self) -> &[ExplanationRule] {
        &self.rules[..self.rules.len().saturating_sub(1)]
    }
}
