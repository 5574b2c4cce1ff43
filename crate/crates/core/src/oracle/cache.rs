use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, RwLock};

use lru::LruCache;

use super::{Oracle, OracleError, OracleStats, ScoreQuery};

// ScoreQuery already holds (instance_id, class_id, canonical subset)
type Key = ScoreQuery;

enum Store {
    Unbounded(RwLock<HashMap<Key, f64>>),
    Bounded(Mutex<LruCache<Key, f64>>),
}

impl Store {
    fn get(&self, key: &Key) -> Option<f64> {
        match self {
            Store::Unbounded(map) => map.read().unwrap_or_else(|p| p.into_inner()).get(key).copied(),
            Store::Bounded(lru) => lru.lock().unwrap_or_else(|p| p.into_inner()).get(key).copied(),
        }
    }

    fn insert(&self, key: Key, value: f64) {
        match self {
            Store::Unbounded(map) => {
                map.write().unwrap_or_else(|p| p.into_inner()).insert(key, value);
            }
            Store::Bounded(lru) => {
                lru.lock().unwrap_or_else(|p| p.into_inner()).put(key, value);
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            Store::Unbounded(map) => map.read().unwrap_or_else(|p| p.into_inner()).len(),
            Store::Bounded(lru) => lru.lock().unwrap_or_else(|p| p.into_inner()).len(),
        }
    }
}

/// Memoizes an oracle on `(instance, class, subset)`.
///
/// Unbounded by default; [`CachedOracle::with_capacity`] evicts least
/// recently used entries. Errors are never cached.
pub struct CachedOracle<O> {
    inner: O,
    store: Store,
    queries: AtomicU64,
    hits: AtomicU64,
}

impl<O: Oracle> CachedOracle<O> {
    pub fn new(inner: O) -> Self {
        Self::build(inner, Store::Unbounded(RwLock::new(HashMap::new())))
    }

    pub fn with_capacity(inner: O, capacity: NonZeroUsize) -> Self {
        Self::build(inner, Store::Bounded(Mutex::new(LruCache::new(capacity))))
    }

    fn build(inner: O, store: Store) -> Self {
        CachedOracle { inner, store, queries: AtomicU64::new(0), hits: AtomicU64::new(0) }
    }

    pub fn stats(&self) -> OracleStats {
        OracleStats { query_count: self.queries.load(Ordering::Relaxed), cache_hits: self.hits.load(Ordering::Relaxed) }
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: Oracle> Oracle for CachedOracle<O> {
    fn score(&self, query: &ScoreQuery) -> Result<f64, OracleError> {
        if let Some(v) = self.store.get(query) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v);
        }
        let v = self.inner.score(query)?;
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.store.insert(query.clone(), v);
        Ok(v)
    }

    /// Misses are forwarded in a single inner batch; a query repeated
    /// inside the batch is forwarded once.
    fn score_batch(&self, queries: &[ScoreQuery]) -> Result<Vec<f64>, OracleError> {
        let mut out: Vec<Option<f64>> = queries.iter().map(|q| self.store.get(q)).collect();
        let mut slots: HashMap<&ScoreQuery, usize> = HashMap::new();
        let mut misses: Vec<ScoreQuery> = Vec::new();
        for (q, v) in queries.iter().zip(&out) {
            if v.is_none() && !slots.contains_key(q) {
                slots.insert(q, misses.len());
                misses.push(q.clone());
            }
        }
        let fresh = self.inner.score_batch(&misses)?;
        for (q, &v) in misses.iter().zip(&fresh) {
            self.store.insert(q.clone(), v);
        }
        self.queries.fetch_add(misses.len() as u64, Ordering::Relaxed);
        self.hits.fetch_add((queries.len() - misses.len()) as u64, Ordering::Relaxed);
        for (q, slot) in queries.iter().zip(out.iter_mut()) {
            if slot.is_none() {
                *slot = Some(fresh[slots[q]]);
            }
        }
        Ok(out.into_iter().map(|v| v.expect("filled")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{ClassId, ConceptId, ConceptSet};
    use crate::oracle::{CountingOracle, SyntheticModel};

    fn q(ids: &[u32]) -> ScoreQuery {
        ScoreQuery {
            instance_id: "x".into(),
            class_id: ClassId(0),
            subset: ConceptSet::from_ids(ids.iter().map(|&i| ConceptId(i))),
        }
    }

    fn model() -> CountingOracle<SyntheticModel> {
        CountingOracle::new(SyntheticModel::new(vec![vec![0.1, 0.2, 0.3, 0.4]], true, 0).unwrap())
    }

    #[test]
    fn repeated_query_hits_cache() {
        let c = CachedOracle::new(model());
        let a = c.score(&q(&[0, 1])).unwrap();
        let b = c.score(&q(&[0, 1])).unwrap();
        assert_eq!(a, b);
        assert_eq!(c.inner().calls(), 1);
    }

    #[test]
    fn subset_order_is_irrelevant() {
        let c = CachedOracle::new(model());
        c.score(&q(&[2, 1])).unwrap();
        c.score(&q(&[1, 2])).unwrap();
        assert_eq!(c.inner().calls(), 1);
    }

    #[test]
    fn stats_count_distinct_and_repeats() {
        let c = CachedOracle::new(model());
        for ids in [&[0][..], &[1], &[2], &[0], &[1], &[0]] {
            c.score(&q(ids)).unwrap();
        }
        assert_eq!(c.stats(), OracleStats { query_count: 3, cache_hits: 3 });
    }

    #[test]
    fn batch_matches_single_and_dedups() {
        let c = CachedOracle::new(model());
        c.score(&q(&[3])).unwrap();
        let batch = c.score_batch(&[q(&[0]), q(&[3]), q(&[0]), q(&[1, 2])]).unwrap();
        let plain = model();
        let expect: Vec<f64> =
            [q(&[0]), q(&[3]), q(&[0]), q(&[1, 2])].iter().map(|x| plain.score(x).unwrap()).collect();
        assert_eq!(batch, expect);
        assert_eq!(c.stats(), OracleStats { query_count: 3, cache_hits: 2 });
        assert!(c.score_batch(&[]).unwrap().is_empty());
    }

    #[test]
    fn bounded_cache_evicts_lru() {
        let c = CachedOracle::with_capacity(model(), NonZeroUsize::new(2).unwrap());
        c.score(&q(&[0])).unwrap();
        c.score(&q(&[1])).unwrap();
        c.score(&q(&[0])).unwrap(); // refresh [0]
        c.score(&q(&[2])).unwrap(); // evicts [1]
        assert_eq!(c.len(), 2);
        c.score(&q(&[1])).unwrap();
        assert_eq!(c.inner().calls(), 4);
    }
}
