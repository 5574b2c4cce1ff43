use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Oracle, OracleError, ScoreQuery};
use crate::concept::{ClassId, ClassLabels, ConceptSet, Vocabulary};
use crate::dataset::read_jsonl;
use crate::error::Result;

/// `{"id":str,"class":str,"objects":[str,...],"score":float}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRecord {
    pub id: String,
    pub class: String,
    pub objects: Vec<String>,
    pub score: f64,
}

/// Exact replay of precomputed scores. Lookups never interpolate.
#[derive(Clone, Debug, Default)]
pub struct TableOracle {
    entries: HashMap<(String, ClassId, ConceptSet), f64>,
}

impl TableOracle {
    pub fn from_records(records: Vec<TableRecord>, vocabulary: &Vocabulary, classes: &ClassLabels) -> Result<Self> {
        let mut entries = HashMap::with_capacity(records.len());
        for (n, r) in records.into_iter().enumerate() {
            let key = (r.id, classes.id(&r.class)?, vocabulary.set_from_names(&r.objects)?);
            if entries.insert(key, r.score).is_some() {
                return Err(OracleError::DuplicateEntry { line: n + 1 }.into());
            }
        }
        Ok(TableOracle { entries })
    }

    pub fn load(path: &Path, vocabulary: &Vocabulary, classes: &ClassLabels) -> Result<Self> {
        TableOracle::from_records(read_jsonl(path)?, vocabulary, classes)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Oracle for TableOracle {
    fn score(&self, q: &ScoreQuery) -> Result<f64, OracleError> {
        // the tuple key needs owned parts; queries are cheap to clone
        let key = (q.instance_id.clone(), q.class_id, q.subset.clone());
        self.entries.get(&key).copied().ok_or_else(|| OracleError::MissingEntry {
            id: q.instance_id.clone(),
            class: q.class_id.0,
            subset: q.subset.iter().map(|c| c.0).collect(),
        })
    }
}
