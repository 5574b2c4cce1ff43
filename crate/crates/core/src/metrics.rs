//! Fidelity scores, MSCX size histograms and coverage-curve export.
//!
//! Aggregates use the population standard deviation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::concept::ConceptSet;
use crate::error::{Error, Result};
use crate::explanation::CompleteExplanation;
use crate::global::Explained;
use crate::instance::Instance;
use crate::oracle::{Oracle, ScoreQuery};

fn score<O: Oracle + ?Sized>(oracle: &O, x: &Instance, e: &CompleteExplanation, set: ConceptSet) -> Result<f64> {
    Ok(oracle.score(&ScoreQuery::new(x, e.class_id, set)?)?)
}

fn reference<O: Oracle + ?Sized>(oracle: &O, x: &Instance, e: &CompleteExplanation) -> Result<f64> {
    if e.is_empty() {
        return Err(Error::Unexplained(x.id().to_string()));
    }
    let r = score(oracle, x, e, x.objects().clone())?;
    if !(r > 0.0) {
        return Err(Error::NonPositiveReference { id: x.id().to_string(), score: r });
    }
    Ok(r)
}

/// Score after removing every concept that appears in some MSCX, relative
/// to the full score. Lower is better.
pub fn fidelity_plus<O: Oracle + ?Sized>(oracle: &O, x: &Instance, e: &CompleteExplanation) -> Result<f64> {
    let r = reference(oracle, x, e)?;
    let rest = x.objects().difference(&e.concept_union());
    Ok(score(oracle, x, e, rest)? / r)
}

/// Per-MSCX retention ratios `f(S) / f(O(x))`, in explanation order.
pub fn fidelity_minus_terms<O: Oracle + ?Sized>(oracle: &O, x: &Instance, e: &CompleteExplanation) -> Result<Vec<f64>> {
    let r = reference(oracle, x, e)?;
    e.sets().map(|s| Ok(score(oracle, x, e, s.clone())? / r)).collect()
}

/// Mean retention ratio over the MSCXs. Higher is better.
pub fn fidelity_minus<O: Oracle + ?Sized>(oracle: &O, x: &Instance, e: &CompleteExplanation) -> Result<f64> {
    let terms = fidelity_minus_terms(oracle, x, e)?;
    Ok(terms.iter().sum::<f64>() / terms.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFidelity {
    pub id: String,
    pub fid_plus: f64,
    pub fid_minus: f64,
    pub fid_minus_min: f64,
    pub fid_minus_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub fid_plus_mean: f64,
    pub fid_plus_std: f64,
    pub fid_minus_mean: f64,
    pub fid_minus_std: f64,
    /// Instances with a non-empty explanation.
    pub n_instances: usize,
    /// Instances skipped for an empty explanation.
    pub skipped: Vec<String>,
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

pub fn instance_fidelity<O: Oracle + ?Sized>(oracle: &O, x: &Explained<'_>) -> Result<InstanceFidelity> {
    let plus = fidelity_plus(oracle, x.instance, x.explanation)?;
    let terms = fidelity_minus_terms(oracle, x.instance, x.explanation)?;
    Ok(InstanceFidelity {
        id: x.instance.id().to_string(),
        fid_plus: plus,
        fid_minus: terms.iter().sum::<f64>() / terms.len() as f64,
        fid_minus_min: terms.iter().copied().fold(f64::INFINITY, f64::min),
        fid_minus_max: terms.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Per-instance fidelities and their aggregate. Unexplained instances are
/// skipped and listed; an input with nothing explained is an error.
pub fn aggregate_fidelity<O: Oracle + ?Sized>(
    oracle: &O,
    instances: &[Explained<'_>],
) -> Result<(FidelityReport, Vec<InstanceFidelity>)> {
    let mut skipped = Vec::new();
    let mut rows = Vec::new();
    for x in instances {
        if x.explanation.is_empty() {
            skipped.push(x.instance.id().to_string());
        } else {
            rows.push(instance_fidelity(oracle, x)?);
        }
    }
    let plus: Vec<f64> = rows.iter().map(|r| r.fid_plus).collect();
    let minus: Vec<f64> = rows.iter().map(|r| r.fid_minus).collect();
    let ((pm, ps), (mm, ms)) = mean_std(&plus).zip(mean_std(&minus)).ok_or(Error::NoInstances)?;
    let report = FidelityReport {
        fid_plus_mean: pm,
        fid_plus_std: ps,
        fid_minus_mean: mm,
        fid_minus_std: ms,
        n_instances: rows.len(),
        skipped,
    };
    Ok((report, rows))
}

/// MSCX count by cardinality, over every explanation.
pub fn mscx_size_histogram<'a>(
    explanations: impl IntoIterator<Item = &'a CompleteExplanation>,
) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for e in explanations {
        for s in e.sets() {
            *h.entry(s.len()).or_default() += 1;
        }
    }
    h
}

pub const COVERAGE_CSV_HEADER: &str = "clause_index,support_coverage_pct,validation_coverage_pct";

/// Coverage curves as CSV, one row per clause prefix starting from the empty
/// formula. Curves are fractions; the CSV holds percentages.
pub fn coverage_csv(support: &[f64], validation: &[f64]) -> String {
    let mut out = String::from(COVERAGE_CSV_HEADER);
    out.push('\n');
    for i in 0..support.len().max(validation.len()) {
        let cell = |c: &[f64]| c.get(i).or(c.last()).map_or(0.0, |v| 100.0 * v);
        out.push_str(&format!("{},{:.4},{:.4}\n", i, cell(support), cell(validation)));
    }
    out
}
