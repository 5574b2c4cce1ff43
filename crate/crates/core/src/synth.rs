//! Reproducible synthetic datasets with additive monotone models.
//!
//! Weights are drawn from a truncated exponential, sparsified, and rounded
//! to multiples of 2^-20. Sums of such weights are exact in `f64`, so subset
//! scores are exactly monotone and independent of summation order.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::concept::{ClassId, ClassLabels, ConceptId, ConceptSet, Vocabulary};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::explanation::{ExplanationList, ExplanationRule};
use crate::instance::{argmax_class, Instance};
use crate::oracle::{synthetic_predict, SyntheticModel};

const GRID: f64 = (1u64 << 20) as f64;
const EXP_CUTOFF: f64 = 3.0;

fn quantize(w: f64) -> f64 {
    ((w * GRID).round() / GRID).max(1.0 / GRID)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub num_classes: usize,
    pub vocab_size: usize,
    pub instances_per_class: usize,
    pub min_objects: usize,
    pub max_objects: usize,
    /// Probability that a class-concept weight is zeroed.
    pub weight_sparsity: f64,
    /// Sampling mass given to concepts outside the class support, relative
    /// to the class's mean positive weight.
    pub background: f64,
    /// When set, each class gets this many near-equal dominant concepts and
    /// every other weight is scaled down to noise.
    pub dominant: Option<usize>,
    /// Split the vocabulary into contiguous per-class blocks.
    pub disjoint: bool,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            num_classes: 5,
            vocab_size: 40,
            instances_per_class: 50,
            min_objects: 3,
            max_objects: 8,
            weight_sparsity: 0.6,
            background: 0.05,
            dominant: None,
            disjoint: false,
            seed: 0,
        }
    }
}

impl GenConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.num_classes == 0 {
            return bad("at least one class is required");
        }
        if self.min_objects == 0 || self.min_objects > self.max_objects {
            return bad("object count range must satisfy 1 <= min <= max");
        }
        if self.max_objects > self.vocab_size {
            return bad("max objects per instance exceeds the vocabulary size");
        }
        if !(0.0..1.0).contains(&self.weight_sparsity) {
            return bad("weight sparsity must be in [0, 1)");
        }
        if !(self.background >= 0.0) {
            return bad("background mass must be non-negative");
        }
        if self.disjoint && self.vocab_size < self.num_classes {
            return bad("disjoint vocabularies need at least one concept per class");
        }
        if let Some(d) = self.dominant {
            if d == 0 || d > self.vocab_size / if self.disjoint { self.num_classes } else { 1 } {
                return bad("dominant concept count does not fit the vocabulary");
            }
        }
        Ok(())
    }
}

fn width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

pub fn class_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("class_{:0w$}", i, w = width(n))).collect()
}

pub fn concept_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("c{:0w$}", i, w = width(n))).collect()
}

/// Draws from Exp(1) truncated to `[0, EXP_CUTOFF]` by inverse CDF.
fn truncated_exp(rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.random();
    -(1.0 - u * (1.0 - (-EXP_CUTOFF).exp())).ln()
}

fn class_block(cfg: &GenConfig, class: usize) -> std::ops::Range<usize> {
    if cfg.disjoint {
        let v = cfg.vocab_size;
        let c = cfg.num_classes;
        (class * v / c)..((class + 1) * v / c)
    } else {
        0..cfg.vocab_size
    }
}

fn draw_weights(cfg: &GenConfig, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut weights = vec![vec![0.0; cfg.vocab_size]; cfg.num_classes];
    for (c, row) in weights.iter_mut().enumerate() {
        let block: Vec<usize> = class_block(cfg, c).collect();
        for &o in &block {
            let w = truncated_exp(rng);
            if rng.random::<f64>() >= cfg.weight_sparsity {
                row[o] = w;
            }
        }
        if let Some(d) = cfg.dominant {
            for &o in &block {
                row[o] *= 0.005;
            }
            let mut picks = block.clone();
            picks.shuffle(rng);
            for &o in &picks[..d] {
                row[o] = rng.random_range(0.9..1.1);
            }
        }
        if row.iter().all(|&w| w == 0.0) {
            let o = block[rng.random_range(0..block.len())];
            row[o] = truncated_exp(rng);
        }
        for w in row.iter_mut().filter(|w| **w != 0.0) {
            *w = quantize(*w);
        }
    }
    weights
}

/// Weighted sampling without replacement. The first draw always comes from
/// the class support so the generating class scores above zero.
fn draw_objects(row: &[f64], k: usize, background: f64, rng: &mut impl Rng) -> ConceptSet {
    let positive: Vec<f64> = row.iter().copied().filter(|&w| w > 0.0).collect();
    let mean = positive.iter().sum::<f64>() / positive.len().max(1) as f64;
    let mut mass: Vec<f64> = row.iter().map(|&w| w + background * mean).collect();
    let mut chosen = Vec::with_capacity(k);
    for draw in 0..k {
        let weights: Vec<f64> = if draw == 0 { row.to_vec() } else { mass.clone() };
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut pick = None;
            for (o, &w) in weights.iter().enumerate() {
                if w > 0.0 {
                    pick = Some(o);
                    if u < w {
                        break;
                    }
                    u -= w;
                }
            }
            pick.expect("positive total")
        } else {
            let rest: Vec<usize> = (0..row.len()).filter(|o| !chosen.contains(o)).collect();
            rest[rng.random_range(0..rest.len())]
        };
        chosen.push(pick);
        mass[pick] = 0.0;
    }
    chosen.into_iter().map(|o| ConceptId(o as u32)).collect()
}

/// Generates a dataset and the model that labels it.
///
/// Instance `true_class` is the generating class; `predicted_class` and the
/// reference scores come from the model.
pub fn generate(cfg: &GenConfig) -> Result<(Dataset, SyntheticModel)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let weights = draw_weights(cfg, &mut rng);
    let model = SyntheticModel::new(weights, true, cfg.seed)?;
    let vocabulary = Vocabulary::new(concept_names(cfg.vocab_size))?;
    let classes = ClassLabels::new(class_names(cfg.num_classes));

    let total = cfg.num_classes * cfg.instances_per_class;
    let mut instances = Vec::with_capacity(total);
    for c in 0..cfg.num_classes {
        for _ in 0..cfg.instances_per_class {
            let k = rng.random_range(cfg.min_objects..=cfg.max_objects);
            let objects = draw_objects(&model.weights()[c], k, cfg.background, &mut rng);
            let scores = model.class_scores(&objects)?;
            let predicted = synthetic_predict(&model, &objects);
            let id = format!("x{:0w$}", instances.len(), w = width(total).max(4));
            instances.push(Instance::new(id, objects, predicted, Some(ClassId(c as u32)), Some(scores))?);
        }
    }
    Ok((Dataset { vocabulary, classes, instances }, model))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedConfig {
    pub num_classes: usize,
    pub instances_per_class: usize,
    /// Concepts available for antecedents.
    pub markers: usize,
    /// Zero-weight distractor concepts.
    pub noise_concepts: usize,
    pub max_antecedent: usize,
    pub max_noise_objects: usize,
    /// Antecedents form a chain `{m0} ⊂ {m0,m1} ⊂ ...`.
    pub nested: bool,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            num_classes: 3,
            instances_per_class: 4,
            markers: 6,
            noise_concepts: 6,
            max_antecedent: 3,
            max_noise_objects: 3,
            nested: false,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlantedDataset {
    pub dataset: Dataset,
    pub model: SyntheticModel,
    pub planted: ExplanationList,
    pub antecedents: Vec<ConceptSet>,
}

/// Dataset admitting a zero-error explanation list.
///
/// Class `c` owns an antecedent `A_c`; each of its instances holds `A_c`
/// plus zero-weight noise. Concepts of `A_c` share a class strength of
/// `1 + |A_c|`, so the model predicts `c` and `A_c` is the only minimally
/// sufficient set for `c` whenever `|A_c| < 20` at the default sufficiency
/// ratio. Listing rules by decreasing antecedent size is perfect under both
/// presence and membership matching.
pub fn planted_list_dataset(cfg: &PlantedConfig) -> Result<PlantedDataset> {
    let bad = |m: &str| Err(Error::Config(m.to_string()));
    if cfg.num_classes == 0 || cfg.instances_per_class == 0 {
        return bad("planted datasets need at least one class and instance");
    }
    if cfg.max_antecedent == 0 || cfg.max_antecedent > 5 || cfg.max_antecedent > cfg.markers {
        return bad("antecedent size must be in 1..=min(5, markers)");
    }
    if cfg.max_noise_objects > cfg.noise_concepts {
        return bad("more noise objects than noise concepts");
    }
    if cfg.nested && cfg.num_classes > cfg.max_antecedent {
        return bad("a nested chain needs one antecedent size per class");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut antecedents: Vec<ConceptSet> = Vec::with_capacity(cfg.num_classes);
    for c in 0..cfg.num_classes {
        if cfg.nested {
            antecedents.push((0..=c as u32).map(ConceptId).collect());
            continue;
        }
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > 1000 {
                return bad("could not draw distinct antecedents; add markers");
            }
            let size = rng.random_range(1..=cfg.max_antecedent);
            let mut pool: Vec<u32> = (0..cfg.markers as u32).collect();
            pool.shuffle(&mut rng);
            let a: ConceptSet = pool[..size].iter().map(|&i| ConceptId(i)).collect();
            if !antecedents.contains(&a) {
                antecedents.push(a);
                break;
            }
        }
    }

    let vocab_size = cfg.markers + cfg.noise_concepts;
    let mut weights = vec![vec![0.0; vocab_size]; cfg.num_classes];
    for (c, a) in antecedents.iter().enumerate() {
        let strength = 1.0 + a.len() as f64;
        for o in a {
            weights[c][o.index()] = quantize(strength / a.len() as f64);
        }
    }
    let model = SyntheticModel::new(weights, true, cfg.seed)?;
    let vocabulary = Vocabulary::new(concept_names(vocab_size))?;
    let classes = ClassLabels::new(class_names(cfg.num_classes));

    let total = cfg.num_classes * cfg.instances_per_class;
    let mut instances = Vec::with_capacity(total);
    for (c, a) in antecedents.iter().enumerate() {
        for _ in 0..cfg.instances_per_class {
            let n = rng.random_range(0..=cfg.max_noise_objects);
            let mut noise: Vec<u32> = (cfg.markers as u32..vocab_size as u32).collect();
            noise.shuffle(&mut rng);
            let objects = a.union(&noise[..n].iter().map(|&i| ConceptId(i)).collect());
            let scores = model.class_scores(&objects)?;
            let predicted = synthetic_predict(&model, &objects);
            if predicted.index() != c {
                return bad("planted construction mispredicted an instance");
            }
            let id = format!("p{:0w$}", instances.len(), w = width(total).max(3));
            instances.push(Instance::new(id, objects, predicted, Some(ClassId(c as u32)), Some(scores))?);
        }
    }

    let mut order: Vec<usize> = if cfg.num_classes > 1 { (0..cfg.num_classes).collect() } else { Vec::new() };
    order.sort_by(|&x, &y| antecedents[y].len().cmp(&antecedents[x].len()).then(x.cmp(&y)));
    let default_class = modal_class(&instances);
    let pct = |n: usize| 100.0 * n as f64 / total as f64;
    let mut rules: Vec<ExplanationRule> = order
        .iter()
        .map(|&c| ExplanationRule {
            antecedent: antecedents[c].clone(),
            class_id: ClassId(c as u32),
            covered_marginal: cfg.instances_per_class,
            d_pct: pct(cfg.instances_per_class),
        })
        .collect();
    let leftover = total - rules.iter().map(|r| r.covered_marginal).sum::<usize>();
    rules.push(ExplanationRule {
        antecedent: ConceptSet::empty(),
        class_id: default_class,
        covered_marginal: leftover,
        d_pct: pct(leftover),
    });

    Ok(PlantedDataset {
        dataset: Dataset { vocabulary, classes, instances },
        model,
        planted: ExplanationList { rules, default_class },
        antecedents,
    })
}

/// Most frequent predicted class, ties to the lowest id.
pub fn modal_class(instances: &[Instance]) -> ClassId {
    let mut counts: BTreeMap<ClassId, usize> = BTreeMap::new();
    for i in instances {
        *counts.entry(i.predicted_class()).or_default() += 1;
    }
    argmax_class(counts.into_iter().map(|(c, n)| (c, n as f64))).unwrap_or(ClassId(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_dataset() {
        let cfg = GenConfig { seed: 11, ..GenConfig::default() };
        let (a, ma) = generate(&cfg).unwrap();
        let (b, mb) = generate(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(ma, mb);
        let (c, _) = generate(&GenConfig { seed: 12, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sizes_and_object_counts() {
        let cfg = GenConfig { num_classes: 3, vocab_size: 12, instances_per_class: 7, ..GenConfig::default() };
        let (ds, m) = generate(&cfg).unwrap();
        assert_eq!(ds.instances.len(), 21);
        assert_eq!(m.num_concepts(), 12);
        for inst in &ds.instances {
            let k = inst.objects().len();
            assert!((3..=8).contains(&k));
            let scores = inst.reference_scores().unwrap();
            assert!(scores[&inst.predicted_class()] > 0.0);
        }
    }

    #[test]
    fn weights_are_dyadic() {
        let (_, m) = generate(&GenConfig::default()).unwrap();
        for &w in m.weights().iter().flatten() {
            assert_eq!((w * GRID).fract(), 0.0);
        }
    }

    #[test]
    fn disjoint_vocabularies_predict_generating_class() {
        let cfg = GenConfig {
            num_classes: 2,
            vocab_size: 20,
            instances_per_class: 30,
            min_objects: 2,
            max_objects: 5,
            weight_sparsity: 0.0,
            background: 0.0,
            disjoint: true,
            seed: 3,
            ..GenConfig::default()
        };
        let (ds, _) = generate(&cfg).unwrap();
        for inst in &ds.instances {
            assert_eq!(Some(inst.predicted_class()), inst.true_class());
        }
    }

    #[test]
    fn infeasible_configs() {
        assert!(generate(&GenConfig { max_objects: 50, vocab_size: 40, ..GenConfig::default() }).is_err());
        assert!(generate(&GenConfig { num_classes: 0, ..GenConfig::default() }).is_err());
        assert!(generate(&GenConfig { min_objects: 4, max_objects: 3, ..GenConfig::default() }).is_err());
        assert!(planted_list_dataset(&PlantedConfig { max_antecedent: 9, ..PlantedConfig::default() }).is_err());
    }

    #[test]
    fn single_class_plant_is_default_only() {
        let p = planted_list_dataset(&PlantedConfig { num_classes: 1, ..PlantedConfig::default() }).unwrap();
        assert_eq!(p.planted.rules.len(), 1);
        assert!(p.planted.rules[0].antecedent.is_empty());
        assert_eq!(p.planted.default_class, ClassId(0));
    }

    #[test]
    fn nested_plant_orders_supersets_first() {
        let cfg = PlantedConfig { nested: true, ..PlantedConfig::default() };
        let p = planted_list_dataset(&cfg).unwrap();
        let sizes: Vec<usize> = p.planted.body().iter().map(|r| r.antecedent.len()).collect();
        assert_eq!(sizes, vec![3, 2, 1]);
        for w in p.planted.body().windows(2) {
            assert!(w[1].antecedent.is_proper_subset(&w[0].antecedent));
        }
    }
}
