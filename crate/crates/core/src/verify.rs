//! Brute-force cross-checks of the search and global algorithms on seeded
//! synthetic problems, and soundness checks of explanation artifacts.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::concept::{is_antichain, ConceptId, ConceptSet};
use crate::error::Result;
use crate::global::{
    eval_dnf_coverage, exact_min_cover, explanation_list, greedy_cover, list_accuracy, pair_up, perfect_list,
    CoverageMap, Explained, MaskIndex, MatchMode,
};
use crate::oracle::Oracle;
use crate::search::{
    beam_search, exact_complete_explanation, explain_instances, is_one_minimal, is_sufficient, Method, SearchConfig,
};
use crate::synth::{generate, planted_list_dataset, GenConfig, PlantedConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub runs: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: BTreeMap<String, CheckSummary>,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, check: &str, ok: bool, detail: impl FnOnce() -> String) {
        let s = self.checks.entry(check.to_string()).or_default();
        s.runs += 1;
        if !ok {
            s.violations += 1;
            self.violations.push(Violation { check: check.to_string(), detail: detail() });
        }
    }

    pub fn merge(&mut self, other: VerifyReport) {
        for (k, v) in other.checks {
            let s = self.checks.entry(k).or_default();
            s.runs += v.runs;
            s.violations += v.violations;
        }
        self.violations.extend(other.violations);
    }
}

fn sets_of(e: &crate::explanation::CompleteExplanation) -> Vec<ConceptSet> {
    e.sets().cloned().collect()
}

/// Exhaustive beam search against power-set enumeration on generated
/// instances with at most `max_k` objects, plus soundness of the default
/// beam configuration on the same instances.
pub fn beam_vs_exact(seeds: std::ops::Range<u64>, max_k: usize, tau_p: f64) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for seed in seeds {
        let cfg = GenConfig {
            num_classes: 2,
            vocab_size: max_k.max(16),
            instances_per_class: 1,
            min_objects: 1,
            max_objects: max_k,
            seed,
            ..GenConfig::default()
        };
        let (ds, model) = generate(&cfg)?;
        for x in &ds.instances {
            let class = x.predicted_class();
            let k = x.objects().len();
            let exact = exact_complete_explanation(&model, x, class, tau_p, k.max(1))?;
            let beam = beam_search(&model, x, class, &SearchConfig::exhaustive(k, tau_p))?.explanation;
            report.record("beam_vs_exact", sets_of(&beam) == sets_of(&exact), || {
                format!("seed {seed} instance {}: beam {:?} exact {:?}", x.id(), sets_of(&beam), sets_of(&exact))
            });
            let narrow = beam_search(&model, x, class, &SearchConfig { tau_p, ..SearchConfig::default() })?.explanation;
            let sound = narrow.sets().all(|s| exact.contains(s)) && is_antichain(&sets_of(&narrow));
            report.record("default_beam_soundness", sound, || {
                format!("seed {seed} instance {}: {:?} not within {:?}", x.id(), sets_of(&narrow), sets_of(&exact))
            });
        }
    }
    Ok(report)
}

/// A random cover problem: up to `max_masks` masks over up to `max_images`
/// instances; the support is every instance some mask covers.
pub fn random_cover_problem(seed: u64, max_masks: usize, max_images: usize) -> (BTreeSet<String>, CoverageMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_images.max(2));
    let masks = rng.random_range(1..=max_masks.max(1));
    let mut map = CoverageMap::new();
    for m in 0..masks {
        let size = rng.random_range(1..=n.min(8));
        let holders: BTreeSet<String> = (0..size).map(|_| format!("x{:02}", rng.random_range(0..n))).collect();
        map.insert(ConceptSet::singleton(ConceptId(m as u32)), holders);
    }
    let support = map.values().flatten().cloned().collect();
    (support, map)
}

/// Greedy cover completeness and the logarithmic size bound against the
/// exact minimum cover. Problems whose support has a single instance are
/// skipped for the bound, where it degenerates to zero.
pub fn cover_bounds(seeds: std::ops::Range<u64>) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for seed in seeds {
        let (support, map) = random_cover_problem(seed, 20, 30);
        let phi = greedy_cover(crate::ClassId(0), &support, &map);
        report.record("greedy_cover_complete", phi.covered() == support.len(), || {
            format!("seed {seed}: covered {} of {}", phi.covered(), support.len())
        });
        if support.len() >= 2 {
            let m_star = exact_min_cover(&support, &map)?.len();
            let bound = (m_star as f64 * (support.len() as f64).ln()).ceil() as usize;
            let ok = phi.clauses.len() <= bound && phi.clauses.len() <= map.len();
            report.record("greedy_cover_size", ok, || {
                format!("seed {seed}: {} clauses, m* = {m_star}, bound {bound}", phi.clauses.len())
            });
        }
    }
    Ok(report)
}

/// Explanation lists on planted datasets: perfect accuracy, the size bound,
/// and, for small datasets, existence of a perfect list by exhaustive search.
pub fn planted_lists(seeds: std::ops::Range<u64>) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for seed in seeds {
        let num_classes = 1 + (seed % 4) as usize;
        let cfg = PlantedConfig {
            num_classes,
            instances_per_class: if seed % 2 == 0 { 2 } else { 3 },
            nested: seed % 3 == 0 && num_classes <= 3,
            seed,
            ..PlantedConfig::default()
        };
        let p = planted_list_dataset(&cfg)?;
        let out = explain_instances(&p.dataset.instances, &p.model, &SearchConfig::default(), Method::Exact, 1)?;
        let es: Vec<_> = out.into_iter().map(|(e, _)| e).collect();
        let index = MaskIndex::new(&es);
        let list = explanation_list(&index);
        let pairs = pair_up(&p.dataset.instances, &es);
        let acc = list_accuracy(&list, &pairs, MatchMode::Mscx)?;
        report.record("planted_list_accuracy", acc == 1.0, || format!("seed {seed}: accuracy {acc}"));
        let limit = index.len().min(es.len()) + 1;
        report.record("planted_list_size", list.rules.len() <= limit, || {
            format!("seed {seed}: {} rules > {limit}", list.rules.len())
        });
        if es.len() <= 8 {
            let exists = perfect_list(&index)?.is_some();
            report.record("planted_perfect_list_exists", exists, || format!("seed {seed}: no perfect list"));
        }
    }
    Ok(report)
}

/// Soundness of an explanation artifact: every member is sufficient and
/// 1-minimal and each explanation is an antichain. With `monotone` set,
/// instances within `k_limit` objects are also checked against exact
/// enumeration: members must be globally minimal, and exhaustive searches
/// must match it exactly.
pub fn check_explanations<O: Oracle + ?Sized>(
    oracle: &O,
    pairs: &[Explained<'_>],
    tau_p: f64,
    monotone: bool,
    k_limit: usize,
) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for p in pairs {
        let (x, e) = (p.instance, p.explanation);
        let sets = sets_of(e);
        report.record("antichain", is_antichain(&sets), || format!("{}: {sets:?}", x.id()));
        for s in &sets {
            let ok =
                is_sufficient(oracle, x, e.class_id, s, tau_p)? && is_one_minimal(oracle, x, e.class_id, s, tau_p)?;
            report.record("sufficient_and_one_minimal", ok, || format!("{}: {s:?}", x.id()));
        }
        if monotone && x.objects().len() <= k_limit {
            let exact = exact_complete_explanation(oracle, x, e.class_id, tau_p, k_limit)?;
            let ok = sets.iter().all(|s| exact.contains(s));
            report.record("within_exact", ok, || format!("{}: {sets:?} vs {:?}", x.id(), sets_of(&exact)));
        }
    }
    Ok(report)
}

/// Support coverage of greedy covers built from `pairs`, in membership mode.
pub fn support_coverage(pairs: &[Explained<'_>]) -> VerifyReport {
    let mut report = VerifyReport::default();
    let es: Vec<_> = pairs.iter().map(|p| p.explanation.clone()).collect();
    let classes: BTreeSet<_> = es.iter().map(|e| e.class_id).collect();
    for c in classes {
        let phi = crate::global::cover_class(c, &es);
        let own: Vec<Explained> =
            pairs.iter().copied().filter(|p| p.explanation.class_id == c && !p.explanation.is_empty()).collect();
        let rep = eval_dnf_coverage(&phi, &own, MatchMode::Mscx);
        let monotone = rep.curve.windows(2).all(|w| w[0] <= w[1]);
        let ok = monotone && (own.is_empty() || rep.fraction == 1.0);
        report.record("support_coverage", ok, || format!("class {c}: curve {:?}", rep.curve));
    }
    report
}
