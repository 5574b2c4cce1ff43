//! Global explanations compiled from local ones: a greedy monotone-DNF cover
//! per class and a multi-class explanation list.

mod cover;
mod format;
mod list;

use serde::{Deserialize, Serialize};

use crate::explanation::CompleteExplanation;
use crate::instance::Instance;

pub use cover::{
    build_coverage_map, cover_class, eval_dnf_coverage, exact_min_cover, greedy_cover, CoverageMap, CoverageReport,
    EXACT_COVER_LIMIT,
};
pub use format::{format_formula, format_list, PctDisplay};
pub use list::{
    classify_with_list, explanation_list, list_accuracy, perfect_list, MaskIndex, PerfectList, PERFECT_LIST_LIMIT,
};

/// How an antecedent is matched against an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    /// The antecedent's concepts are all present in the instance.
    Presence,
    /// The antecedent is one of the instance's minimally sufficient sets.
    Mscx,
}

impl MatchMode {
    pub fn name(self) -> &'static str {
        match self {
            MatchMode::Presence => "presence",
            MatchMode::Mscx => "mscx",
        }
    }
}

/// An instance with its complete explanation for the predicted class.
#[derive(Clone, Copy, Debug)]
pub struct Explained<'a> {
    pub instance: &'a Instance,
    pub explanation: &'a CompleteExplanation,
}

impl<'a> Explained<'a> {
    pub fn new(instance: &'a Instance, explanation: &'a CompleteExplanation) -> Self {
        Explained { instance, explanation }
    }

    fn matches(
        &self,
        antecedent: &crate::concept::ConceptSet,
        class: crate::concept::ClassId,
        mode: MatchMode,
    ) -> bool {
        match mode {
            MatchMode::Presence => antecedent.is_subset(self.instance.objects()),
            MatchMode::Mscx => self.explanation.class_id == class && self.explanation.contains(antecedent),
        }
    }
}

/// Pairs instances with explanations by id. Instances without an
/// explanation are dropped.
pub fn pair_up<'a>(instances: &'a [Instance], explanations: &'a [CompleteExplanation]) -> Vec<Explained<'a>> {
    let by_id: std::collections::HashMap<&str, &CompleteExplanation> =
        explanations.iter().map(|e| (e.instance_id.as_str(), e)).collect();
    instances.iter().filter_map(|i| by_id.get(i.id()).map(|e| Explained::new(i, e))).collect()
}
