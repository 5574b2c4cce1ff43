use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::concept::{ClassId, ConceptSet};
use crate::error::{Error, Result};

/// An annotated example: its concept decomposition and the model's decision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct Instance {
    id: String,
    objects: ConceptSet,
    predicted_class: ClassId,
    true_class: Option<ClassId>,
    reference_scores: Option<BTreeMap<ClassId, f64>>,
}

#[derive(Deserialize)]
struct RawInstance {
    id: String,
    objects: ConceptSet,
    predicted_class: ClassId,
    true_class: Option<ClassId>,
    reference_scores: Option<BTreeMap<ClassId, f64>>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(r: RawInstance) -> Result<Self> {
        Instance::new(r.id, r.objects, r.predicted_class, r.true_class, r.reference_scores)
    }
}

/// Index of the largest score; ties resolve to the lowest class id.
pub fn argmax_class<I>(scores: I) -> Option<ClassId>
where
    I: IntoIterator<Item = (ClassId, f64)>,
{
    let mut best: Option<(ClassId, f64)> = None;
    for (c, s) in scores {
        best = match best {
            Some((bc, bs)) if bs > s || (bs == s && bc < c) => Some((bc, bs)),
            _ => Some((c, s)),
        };
    }
    best.map(|(c, _)| c)
}

impl Instance {
    /// Validates that `objects` is non-empty and, when reference scores are
    /// given, that `predicted_class` is their argmax.
    pub fn new(
        id: impl Into<String>,
        objects: ConceptSet,
        predicted_class: ClassId,
        true_class: Option<ClassId>,
        reference_scores: Option<BTreeMap<ClassId, f64>>,
    ) -> Result<Self> {
        let id = id.into();
        if objects.is_empty() {
            return Err(Error::InvalidInstance { id, reason: "no objects".into() });
        }
        if let Some(scores) = &reference_scores {
            if scores.values().any(|s| !s.is_finite()) {
                return Err(Error::InvalidInstance { id, reason: "non-finite reference score".into() });
            }
            let best = argmax_class(scores.iter().map(|(&c, &s)| (c, s)));
            if best != Some(predicted_class) {
                return Err(Error::InvalidInstance {
                    id,
                    reason: format!("predicted class {predicted_class} is not the argmax of its scores"),
                });
            }
        }
        Ok(Instance { id, objects, predicted_class, true_class, reference_scores })
    }

    /// Builds an instance whose prediction is the argmax of `scores`.
    pub fn from_scores(
        id: impl Into<String>,
        objects: ConceptSet,
        scores: BTreeMap<ClassId, f64>,
        true_class: Option<ClassId>,
    ) -> Result<Self> {
        let id = id.into();
        let predicted = argmax_class(scores.iter().map(|(&c, &s)| (c, s)))
            .ok_or_else(|| Error::InvalidInstance { id: id.clone(), reason: "empty score map".into() })?;
        Instance::new(id, objects, predicted, true_class, Some(scores))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn objects(&self) -> &ConceptSet {
        &self.objects
    }

    pub fn predicted_class(&self) -> ClassId {
        self.predicted_class
    }

    pub fn true_class(&self) -> Option<ClassId> {
        self.true_class
    }

    pub fn reference_scores(&self) -> Option<&BTreeMap<ClassId, f64>> {
        self.reference_scores.as_ref()
    }
}
