use lgx_core::dataset::write_json;
use lgx_core::records::ListRecord;
use lgx_core::synth::{generate, planted_list_dataset, GenConfig, PlantedConfig};
use serde_json::json;

use crate::args::GenArgs;
use crate::context::{ensure_dir, write_manifest, DATASET, MODEL, VOCAB};
use crate::error::CliError;

pub const PLANTED_LIST: &str = "planted_list.json";

pub fn run(args: &GenArgs) -> Result<(), CliError> {
    ensure_dir(&args.out)?;
    let mut outputs = vec![DATASET, VOCAB, MODEL];
    let (dataset, model) = if args.planted {
        let cfg = PlantedConfig {
            num_classes: args.classes,
            instances_per_class: args.per_class,
            markers: args.markers,
            noise_concepts: args.noise_concepts,
            max_antecedent: args.max_antecedent,
            max_noise_objects: args.max_noise_objects,
            nested: args.nested,
            seed: args.seed,
        };
        let p = planted_list_dataset(&cfg)?;
        let record = ListRecord::from_list(&p.planted, &p.dataset.vocabulary, &p.dataset.classes);
        write_json(&args.out.path(PLANTED_LIST), &record)?;
        outputs.push(PLANTED_LIST);
        (p.dataset, p.model)
    } else {
        let cfg = GenConfig {
            num_classes: args.classes,
            vocab_size: args.vocab_size,
            instances_per_class: args.per_class,
            min_objects: args.min_objects,
            max_objects: args.max_objects,
            weight_sparsity: args.sparsity,
            background: args.background,
            dominant: args.dominant,
            disjoint: args.disjoint,
            seed: args.seed,
        };
        generate(&cfg)?
    };
    dataset.save(&args.out.path(DATASET), &args.out.path(VOCAB))?;
    write_json(&args.out.path(MODEL), &model.to_record(&dataset.vocabulary, &dataset.classes))?;
    eprintln!(
        "generated {} instances over {} concepts and {} classes",
        dataset.instances.len(),
        dataset.vocabulary.len(),
        dataset.classes.len()
    );
    outputs.sort();
    write_manifest(&args.out, "gen", args, json!({ "seed": args.seed }), None, &outputs)
}
