//! Concept and class identifiers, name tables, and the canonical [`ConceptSet`].
//!
//! A `ConceptSet` is the unit everything else is built from: a masked
//! perturbation keeps exactly the concepts of a set, a minimally sufficient
//! explanation is a set, and a DNF clause is the conjunction of a set's
//! presence literals.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Dense concept identifier, `0..V` within one [`Vocabulary`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConceptId(pub u32);

/// Dense class identifier, `0..C` within one [`ClassLabels`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(pub u32);

impl ConceptId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ClassId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "class#{}", self.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct NameTable {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl NameTable {
    fn from_ordered<I, S>(names: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = NameTable::default();
        for name in names {
            let name = name.into();
            if table.index.contains_key(&name) {
                return Err(Error::DuplicateName(name));
            }
            table.index.insert(name.clone(), table.names.len() as u32);
            table.names.push(name);
        }
        Ok(table)
    }
}

/// Concept vocabulary. Ids follow the order of the vocabulary file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary(NameTable);

impl Vocabulary {
    /// Builds a vocabulary from names in id order. Names must be unique.
    pub fn new<I, S>(names: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        NameTable::from_ordered(names).map(Vocabulary)
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn id(&self, name: &str) -> Result<ConceptId, Error> {
        self.0.index.get(name).map(|&i| ConceptId(i)).ok_or_else(|| Error::UnknownConcept(name.to_string()))
    }

    pub fn name(&self, id: ConceptId) -> &str {
        &self.0.names[id.index()]
    }

    pub fn contains(&self, id: ConceptId) -> bool {
        id.index() < self.len()
    }

    /// Canonicalizes raw ids, rejecting any id outside the vocabulary.
    pub fn canonicalize(&self, raw: &[u32]) -> Result<ConceptSet, Error> {
        if let Some(&bad) = raw.iter().find(|&&id| id as usize >= self.len()) {
            return Err(Error::UnknownConceptId(bad));
        }
        Ok(ConceptSet::from_ids(raw.iter().map(|&i| ConceptId(i))))
    }

    /// Resolves concept names to a canonical set. Repeated names collapse.
    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<ConceptSet, Error> {
        names.iter().map(|n| self.id(n.as_ref())).collect::<Result<Vec<_>, _>>().map(ConceptSet::from_ids)
    }

    pub fn names_of(&self, set: &ConceptSet) -> Vec<String> {
        set.iter().map(|id| self.name(id).to_string()).collect()
    }
}

/// Class labels. Ids are assigned in ascending name order, so the relative
/// order of two classes never depends on which other classes are known.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassLabels(NameTable);

impl ClassLabels {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        ClassLabels(NameTable::from_ordered(names).expect("deduplicated"))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn id(&self, name: &str) -> Result<ClassId, Error> {
        self.0.index.get(name).map(|&i| ClassId(i)).ok_or_else(|| Error::UnknownClass(name.to_string()))
    }

    pub fn name(&self, id: ClassId) -> &str {
        &self.0.names[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        (0..self.len() as u32).map(ClassId)
    }
}

const DENSE_BITS: u32 = 128;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Every member id is below 128.
    Dense(u128),
    /// Sorted, deduplicated; holds at least one id >= 128.
    Sparse(Box<[u32]>),
}

/// A set of concepts in canonical form.
///
/// Sets whose members all fit below id 128 are stored as a single `u128`
/// bitmask; anything larger falls back to a sorted id slice. The choice is a
/// function of the members alone, so structural equality and hashing are set
/// equality. Ordering is lexicographic over the ascending member ids, which is
/// the deterministic tie-break used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConceptSet(Repr);

impl Default for ConceptSet {
    fn default() -> Self {
        ConceptSet::empty()
    }
}

impl ConceptSet {
    pub const fn empty() -> Self {
        ConceptSet(Repr::Dense(0))
    }

    pub fn from_ids<I: IntoIterator<Item = ConceptId>>(ids: I) -> Self {
        let mut raw: Vec<u32> = ids.into_iter().map(|c| c.0).collect();
        raw.sort_unstable();
        raw.dedup();
        Self::from_sorted(raw)
    }

    fn from_sorted(raw: Vec<u32>) -> Self {
        match raw.last() {
            Some(&max) if max >= DENSE_BITS => ConceptSet(Repr::Sparse(raw.into_boxed_slice())),
            _ => ConceptSet(Repr::Dense(raw.iter().fold(0u128, |m, &i| m | (1u128 << i)))),
        }
    }

    pub fn singleton(id: ConceptId) -> Self {
        Self::from_sorted(vec![id.0])
    }

    pub fn len(&self) -> usize {
        match &self.0 {
            Repr::Dense(m) => m.count_ones() as usize,
            Repr::Sparse(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.0, Repr::Dense(0))
    }

    pub fn contains(&self, id: ConceptId) -> bool {
        match &self.0 {
            Repr::Dense(m) => id.0 < DENSE_BITS && m & (1u128 << id.0) != 0,
            Repr::Sparse(v) => v.binary_search(&id.0).is_ok(),
        }
    }

    pub fn iter(&self) -> Iter<'_> {
        match &self.0 {
            Repr::Dense(m) => Iter::Dense(*m),
            Repr::Sparse(v) => Iter::Sparse(v.iter()),
        }
    }

    /// `true` iff every member of `self` is a member of `other`.
    pub fn is_subset(&self, other: &ConceptSet) -> bool {
        match (&self.0, &other.0) {
            (Repr::Dense(a), Repr::Dense(b)) => a & !b == 0,
            // a sparse set holds an id >= 128 that no dense set can contain
            (Repr::Sparse(_), Repr::Dense(_)) => false,
            (Repr::Dense(_), Repr::Sparse(_)) => self.iter().all(|id| other.contains(id)),
            (Repr::Sparse(a), Repr::Sparse(b)) => a.len() <= b.len() && a.iter().all(|id| b.binary_search(id).is_ok()),
        }
    }

    pub fn is_proper_subset(&self, other: &ConceptSet) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    pub fn with(&self, id: ConceptId) -> ConceptSet {
        match &self.0 {
            Repr::Dense(m) if id.0 < DENSE_BITS => ConceptSet(Repr::Dense(m | (1u128 << id.0))),
            _ => Self::from_ids(self.iter().chain(std::iter::once(id))),
        }
    }

    pub fn without(&self, id: ConceptId) -> ConceptSet {
        match &self.0 {
            Repr::Dense(m) if id.0 < DENSE_BITS => ConceptSet(Repr::Dense(m & !(1u128 << id.0))),
            Repr::Dense(_) => self.clone(),
            Repr::Sparse(_) => Self::from_sorted(self.iter().filter(|&c| c != id).map(|c| c.0).collect()),
        }
    }

    pub fn union(&self, other: &ConceptSet) -> ConceptSet {
        match (&self.0, &other.0) {
            (Repr::Dense(a), Repr::Dense(b)) => ConceptSet(Repr::Dense(a | b)),
            _ => Self::from_ids(self.iter().chain(other.iter())),
        }
    }

    pub fn difference(&self, other: &ConceptSet) -> ConceptSet {
        match (&self.0, &other.0) {
            (Repr::Dense(a), Repr::Dense(b)) => ConceptSet(Repr::Dense(a & !b)),
            _ => Self::from_sorted(self.iter().filter(|&c| !other.contains(c)).map(|c| c.0).collect()),
        }
    }

    pub fn to_vec(&self) -> Vec<ConceptId> {
        self.iter().collect()
    }
}

impl Ord for ConceptSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ConceptSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ConceptSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.0)).finish()
    }
}

impl FromIterator<ConceptId> for ConceptSet {
    fn from_iter<I: IntoIterator<Item = ConceptId>>(iter: I) -> Self {
        ConceptSet::from_ids(iter)
    }
}

impl<'a> IntoIterator for &'a ConceptSet {
    type Item = ConceptId;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`ConceptSet`].
pub enum Iter<'a> {
    Dense(u128),
    Sparse(std::slice::Iter<'a, u32>),
}

impl Iterator for Iter<'_> {
    type Item = ConceptId;

    fn next(&mut self) -> Option<ConceptId> {
        match self {
            Iter::Dense(m) => {
                if *m == 0 {
                    return None;
                }
                let bit = m.trailing_zeros();
                *m &= *m - 1;
                Some(ConceptId(bit))
            }
            Iter::Sparse(it) => it.next().map(|&i| ConceptId(i)),
        }
    }
}

impl Serialize for ConceptSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|c| c.0))
    }
}

impl<'de> Deserialize<'de> for ConceptSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<u32>::deserialize(deserializer)?;
        Ok(ConceptSet::from_ids(raw.into_iter().map(ConceptId)))
    }
}

/// Removes every set that has a proper subset elsewhere in `sets`, plus
/// duplicates. The result is a sorted antichain.
pub fn antichain(sets: impl IntoIterator<Item = ConceptSet>) -> Vec<ConceptSet> {
    let mut sets: Vec<ConceptSet> = sets.into_iter().collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<ConceptSet> = Vec::with_capacity(sets.len());
    for s in sets {
        // kept only holds sets no larger than s, so any subset hit is proper
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

pub fn is_antichain(sets: &[ConceptSet]) -> bool {
    sets.iter().enumerate().all(|(i, a)| sets.iter().enumerate().all(|(j, b)| i == j || !a.is_subset(b)))
}
