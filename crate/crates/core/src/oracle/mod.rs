//! Black-box scoring: `f_y(x_S)` for a concept subset `S` of an instance.
//!
//! Every backend implements [`Oracle`]. Backends must be safe to call from
//! several worker threads at once.

mod cache;
mod external;
mod synthetic;
mod table;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::concept::{ClassId, ConceptSet};
use crate::instance::Instance;

pub use cache::CachedOracle;
pub use external::{ExternalOracle, DEFAULT_TIMEOUT};
pub use synthetic::{synthetic_predict, ModelRecord, SyntheticModel};
pub use table::{TableOracle, TableRecord};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("unknown class id {0}")]
    UnknownClass(u32),
    #[error("unknown concept id {0}")]
    UnknownConcept(u32),
    #[error("query subset is not contained in the objects of instance `{0}`")]
    SubsetNotInInstance(String),
    #[error("no table entry for instance `{id}`, class {class}, subset {subset:?}")]
    MissingEntry { id: String, class: u32, subset: Vec<u32> },
    #[error("duplicate table entry at line {line}")]
    DuplicateEntry { line: usize },
    #[error("oracle timed out after {0:?}")]
    Timeout(std::time::Duration),
    #[error("oracle protocol error: {0}")]
    Protocol(String),
    #[error("oracle adapter error: {0}")]
    Adapter(String),
    #[error("oracle process exited")]
    ProcessExited,
    #[error("oracle i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Score request for the masked input keeping only `subset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScoreQuery {
    pub instance_id: String,
    pub class_id: ClassId,
    pub subset: ConceptSet,
}

impl ScoreQuery {
    /// Checks `subset ⊆ O(x)`.
    pub fn new(instance: &Instance, class_id: ClassId, subset: ConceptSet) -> Result<Self, OracleError> {
        if !subset.is_subset(instance.objects()) {
            return Err(OracleError::SubsetNotInInstance(instance.id().to_string()));
        }
        Ok(ScoreQuery { instance_id: instance.id().to_string(), class_id, subset })
    }
}

pub trait Oracle: Send + Sync {
    fn score(&self, query: &ScoreQuery) -> Result<f64, OracleError>;

    /// Element-wise [`Oracle::score`]; any failure fails the whole batch.
    fn score_batch(&self, queries: &[ScoreQuery]) -> Result<Vec<f64>, OracleError> {
        queries.iter().map(|q| self.score(q)).collect()
    }
}

impl<O: Oracle + ?Sized> Oracle for &O {
    fn score(&self, query: &ScoreQuery) -> Result<f64, OracleError> {
        (**self).score(query)
    }

    fn score_batch(&self, queries: &[ScoreQuery]) -> Result<Vec<f64>, OracleError> {
        (**self).score_batch(queries)
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn score(&self, query: &ScoreQuery) -> Result<f64, OracleError> {
        (**self).score(query)
    }

    fn score_batch(&self, queries: &[ScoreQuery]) -> Result<Vec<f64>, OracleError> {
        (**self).score_batch(queries)
    }
}

impl<O: Oracle + ?Sized> Oracle for Arc<O> {
    fn score(&self, query: &ScoreQuery) -> Result<f64, OracleError> {
        (**self).score(query)
    }

    fn score_batch(&self, queries: &[ScoreQuery]) -> Result<Vec<f64>, OracleError> {
        (**self).score_batch(queries)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleStats {
    /// Queries forwarded to the wrapped backend.
    pub query_count: u64,
    pub cache_hits: u64,
}

/// Counts every query that reaches the wrapped oracle.
pub struct CountingOracle<O> {
    inner: O,
    calls: AtomicU64,
}

impl<O: Oracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        CountingOracle { inner, calls: AtomicU64::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }
}

impl<O: Oracle> Oracle for CountingOracle<O> {
    fn score(&self, query: &ScoreQuery) -> Result<f64, OracleError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.score(query)
    }

    fn score_batch(&self, queries: &[ScoreQuery]) -> Result<Vec<f64>, OracleError> {
        self.calls.fetch_add(queries.len() as u64, Ordering::Relaxed);
        self.inner.score_batch(queries)
    }
}
