//! Local-to-global logical explanations for black-box classifiers.
//!
//! Per instance, [`search`] finds the minimally sufficient concept sets
//! (MSCXs). [`global`] compiles them into per-class monotone DNF covers and a
//! multi-class explanation list. [`metrics`] scores the results and [`synth`]
//! builds datasets with known ground truth.

pub mod concept;
pub mod dataset;
pub mod error;
pub mod explanation;
pub mod global;
pub mod instance;
pub mod metrics;
pub mod oracle;
pub mod records;
pub mod search;
pub mod split;
pub mod synth;
pub mod verify;

pub use concept::{ClassId, ClassLabels, ConceptId, ConceptSet, Vocabulary};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use explanation::{
    CompleteExplanation, CoveringExplanation, ExplanationList, ExplanationRule, MdnfClause, Mscx, SearchStatus,
};
pub use global::{Explained, MatchMode};
pub use instance::Instance;
pub use oracle::{Oracle, OracleError, ScoreQuery};
pub use search::SearchConfig;
