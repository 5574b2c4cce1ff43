//! Name-based file records for explanation artifacts.
//!
//! Local explanations (JSON lines):
//! `{"id":"img1","class":"Bedroom","mscxs":[{"concepts":["bed","wall"],"score_ratio":0.95}],"status":"found"}`
//!
//! Covering explanation:
//! `{"class":"Bedroom","support_size":2,"clauses":[{"concepts":["bed","wall"],"d_total_pct":50.0,"d_marginal_pct":50.0}],"unexplained":[]}`
//!
//! Explanation list:
//! `{"rules":[{"if":["bed"],"then":"Bedroom","d_pct":40.0,"covered":2}],"default":"Street","default_covered":1,"default_d_pct":20.0}`

use serde::{Deserialize, Serialize};

use crate::concept::{ClassLabels, ConceptSet, Vocabulary};
use crate::error::Result;
use crate::explanation::{
    CompleteExplanation, CoveringExplanation, ExplanationList, ExplanationRule, MdnfClause, Mscx, SearchStatus,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MscxEntry {
    pub concepts: Vec<String>,
    pub score_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplanationRecord {
    pub id: String,
    pub class: String,
    pub mscxs: Vec<MscxEntry>,
    #[serde(default = "found")]
    pub status: SearchStatus,
}

fn found() -> SearchStatus {
    SearchStatus::Found
}

impl ExplanationRecord {
    pub fn from_explanation(e: &CompleteExplanation, vocabulary: &Vocabulary, classes: &ClassLabels) -> Self {
        ExplanationRecord {
            id: e.instance_id.clone(),
            class: classes.name(e.class_id).to_string(),
            mscxs: e
                .mscxs
                .iter()
                .map(|m| MscxEntry { concepts: vocabulary.names_of(&m.concepts), score_ratio: m.score_ratio })
                .collect(),
            status: e.status,
        }
    }

    /// Converts back to ids, restoring the canonical sorted order of sets.
    pub fn to_explanation(&self, vocabulary: &Vocabulary, classes: &ClassLabels) -> Result<CompleteExplanation> {
        let class_id = classes.id(&self.class)?;
        let mut mscxs = self
            .mscxs
            .iter()
            .map(|m| {
                Ok(Mscx {
                    concepts: vocabulary.set_from_names(&m.concepts)?,
                    instance_id: self.id.clone(),
                    class_id,
                    score_ratio: m.score_ratio,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        mscxs.sort_by(|a, b| a.concepts.cmp(&b.concepts));
        Ok(CompleteExplanation { instance_id: self.id.clone(), class_id, mscxs, status: self.status })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClauseRecord {
    pub concepts: Vec<String>,
    pub d_total_pct: f64,
    pub d_marginal_pct: f64,
    #[serde(default)]
    pub covered_total: usize,
    #[serde(default)]
    pub covered_marginal: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringRecord {
    pub class: String,
    pub support_size: usize,
    pub clauses: Vec<ClauseRecord>,
    #[serde(default)]
    pub unexplained: Vec<String>,
}

impl CoveringRecord {
    pub fn from_covering(phi: &CoveringExplanation, vocabulary: &Vocabulary, classes: &ClassLabels) -> Self {
        CoveringRecord {
            class: classes.name(phi.class_id).to_string(),
            support_size: phi.support_size,
            clauses: phi
                .clauses
                .iter()
                .map(|c| ClauseRecord {
                    concepts: vocabulary.names_of(&c.concepts),
                    d_total_pct: c.d_total_pct,
                    d_marginal_pct: c.d_marginal_pct,
                    covered_total: c.covered_total,
                    covered_marginal: c.covered_marginal,
                })
                .collect(),
            unexplained: phi.unexplained.clone(),
        }
    }

    pub fn to_covering(&self, vocabulary: &Vocabulary, classes: &ClassLabels) -> Result<CoveringExplanation> {
        Ok(CoveringExplanation {
            class_id: classes.id(&self.class)?,
            clauses: self
                .clauses
                .iter()
                .map(|c| {
                    Ok(MdnfClause {
                        concepts: vocabulary.set_from_names(&c.concepts)?,
                        covered_total: c.covered_total,
                        covered_marginal: c.covered_marginal,
                        d_total_pct: c.d_total_pct,
                        d_marginal_pct: c.d_marginal_pct,
                    })
                })
                .collect::<Result<_>>()?,
            support_size: self.support_size,
            unexplained: self.unexplained.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleRecord {
    #[serde(rename = "if")]
    pub antecedent: Vec<String>,
    #[serde(rename = "then")]
    pub class: String,
    pub d_pct: f64,
    #[serde(default)]
    pub covered: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ListRecord {
    pub rules: Vec<RuleRecord>,
    pub default: String,
    #[serde(default)]
    pub default_covered: usize,
    #[serde(default)]
    pub default_d_pct: f64,
}

impl ListRecord {
    pub fn from_list(list: &ExplanationList, vocabulary: &Vocabulary, classes: &ClassLabels) -> Self {
        let last = list.rules.last();
        ListRecord {
            rules: list
                .body()
                .iter()
                .map(|r| RuleRecord {
                    antecedent: vocabulary.names_of(&r.antecedent),
                    class: classes.name(r.class_id).to_string(),
                    d_pct: r.d_pct,
                    covered: r.covered_marginal,
                })
                .collect(),
            default: classes.name(list.default_class).to_string(),
            default_covered: last.map_or(0, |r| r.covered_marginal),
            default_d_pct: last.map_or(0.0, |r| r.d_pct),
        }
    }

    pub fn to_list(&self, vocabulary: &Vocabulary, classes: &ClassLabels) -> Result<ExplanationList> {
        let default_class = classes.id(&self.default)?;
        let mut rules = self
            .rules
            .iter()
            .map(|r| {
                Ok(ExplanationRule {
                    antecedent: vocabulary.set_from_names(&r.antecedent)?,
                    class_id: classes.id(&r.class)?,
                    covered_marginal: r.covered,
                    d_pct: r.d_pct,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rules.push(ExplanationRule {
            antecedent: ConceptSet::empty(),
            class_id: default_class,
            covered_marginal: self.default_covered,
            d_pct: self.default_d_pct,
        });
        Ok(ExplanationList { rules, default_class })
    }
}
