//! Shared inputs for the benchmarks.

use lgx_core::oracle::SyntheticModel;
use lgx_core::search::{explain_instances, Method};
use lgx_core::synth::{generate, GenConfig};
use lgx_core::{CompleteExplanation, Instance, SearchConfig};

pub fn dataset(per_class: usize, max_objects: usize, seed: u64) -> (Vec<Instance>, SyntheticModel) {
    let cfg = GenConfig { instances_per_class: per_class, max_objects, seed, ..GenConfig::default() };
    let (ds, model) = generate(&cfg).expect("valid generator config");
    (ds.instances, model)
}

pub fn explanations(instances: &[Instance], model: &SyntheticModel) -> Vec<CompleteExplanation> {
    explain_instances(instances, model, &SearchConfig::default(), Method::Beam, 1)
        .expect("synthetic explanations")
        .into_iter()
        .map(|(e, _)| e)
        .collect()
}
