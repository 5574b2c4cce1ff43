use std::collections::{BTreeMap, BTreeSet};

use lgx_core::dataset::{read_json, write_json, write_jsonl};
use lgx_core::global::{
    cover_class, eval_dnf_coverage, explanation_list, list_accuracy, pair_up, Explained, MaskIndex,
};
use lgx_core::metrics::{aggregate_fidelity, coverage_csv, mscx_size_histogram, FidelityReport};
use lgx_core::records::ListRecord;
use lgx_core::{ExplanationList, MatchMode};
use serde::Serialize;
use serde_json::json;

use crate::args::EvalArgs;
use crate::context::{
    ensure_dir, load_explanations, load_with_oracle, slug, support_ids, write_manifest, EXPLANATIONS,
};
use crate::error::CliError;

pub const METRICS: &str = "metrics.json";
pub const FIDELITY_INSTANCES: &str = "fidelity_instances.jsonl";

#[derive(Serialize)]
struct ModePair {
    presence: Option<f64>,
    mscx: Option<f64>,
}

#[derive(Serialize)]
struct ClassCoverage {
    clauses: usize,
    support_size: usize,
    unexplained_support: usize,
    validation_size: usize,
    support: ModePair,
    validation: ModePair,
}

#[derive(Serialize)]
struct SplitInfo {
    seed: u64,
    support_fraction: f64,
    support: usize,
    validation: usize,
}

#[derive(Serialize)]
struct Metrics {
    split: SplitInfo,
    fidelity: FidelityReport,
    mscx_size_histogram: BTreeMap<usize, usize>,
    list_rules: usize,
    list_accuracy: BTreeMap<&'static str, ModePair>,
    coverage: BTreeMap<String, ClassCoverage>,
}

fn accuracy(list: &ExplanationList, xs: &[Explained<'_>]) -> ModePair {
    ModePair {
        presence: list_accuracy(list, xs, MatchMode::Presence).ok(),
        mscx: list_accuracy(list, xs, MatchMode::Mscx).ok(),
    }
}

pub fn run(args: &EvalArgs) -> Result<(), CliError> {
    ensure_dir(&args.out)?;
    let (dataset, loaded) = load_with_oracle(&args.data, &args.oracle, &args.out)?;
    let explanations = load_explanations(&args.out.or_default(&args.explanations, EXPLANATIONS), &dataset)?;
    let pairs = pair_up(&dataset.instances, &explanations);
    let support_ids = support_ids(&dataset, &args.split)?;
    let (support, validation): (Vec<Explained>, Vec<Explained>) =
        pairs.iter().copied().partition(|p| support_ids.contains(p.instance.id()));

    let (fidelity, rows) = aggregate_fidelity(&loaded.oracle, &pairs)?;
    let mut outputs: Vec<String> = vec![METRICS.into()];
    if args.verbose {
        write_jsonl(&args.out.path(FIDELITY_INSTANCES), &rows)?;
        outputs.push(FIDELITY_INSTANCES.into());
    }

    let support_explanations: Vec<_> = support.iter().map(|p| p.explanation.clone()).collect();
    let list = match &args.list {
        Some(path) => read_json::<ListRecord>(path)?.to_list(&dataset.vocabulary, &dataset.classes)?,
        None => explanation_list(&MaskIndex::new(&support_explanations)),
    };
    let list_acc =
        BTreeMap::from([("support", accuracy(&list, &support)), ("validation", accuracy(&list, &validation))]);

    let mut coverage = BTreeMap::new();
    let csv_mode: MatchMode = args.coverage_mode.into();
    for class in dataset.classes.ids() {
        let name = dataset.classes.name(class).to_string();
        let phi = cover_class(class, &support_explanations);
        let explained: BTreeSet<&str> = support_explanations
            .iter()
            .filter(|e| e.class_id == class && !e.is_empty())
            .map(|e| e.instance_id.as_str())
            .collect();
        let own_support: Vec<Explained> =
            support.iter().copied().filter(|p| explained.contains(p.instance.id())).collect();
        let own_validation: Vec<Explained> =
            validation.iter().copied().filter(|p| p.instance.predicted_class() == class).collect();
        let cov = |xs: &[Explained], mode| {
            let r = eval_dnf_coverage(&phi, xs, mode);
            (!xs.is_empty()).then_some(r.fraction)
        };
        let csv = coverage_csv(
            &eval_dnf_coverage(&phi, &own_support, csv_mode).curve,
            &eval_dnf_coverage(&phi, &own_validation, csv_mode).curve,
        );
        let file = format!("coverage_{}.csv", slug(&name));
        std::fs::write(args.out.path(&file), csv).map_err(|e| CliError::Usage(format!("cannot write {file}: {e}")))?;
        outputs.push(file);
        coverage.insert(
            name,
            ClassCoverage {
                clauses: phi.clauses.len(),
                support_size: phi.support_size,
                unexplained_support: phi.unexplained.len(),
                validation_size: own_validation.len(),
                support: ModePair {
                    presence: cov(&own_support, MatchMode::Presence),
                    mscx: cov(&own_support, MatchMode::Mscx),
                },
                validation: ModePair {
                    presence: cov(&own_validation, MatchMode::Presence),
                    mscx: cov(&own_validation, MatchMode::Mscx),
                },
            },
        );
    }

    let metrics = Metrics {
        split: SplitInfo {
            seed: args.split.split_seed,
            support_fraction: args.split.support_fraction,
            support: support.len(),
            validation: validation.len(),
        },
        fidelity,
        mscx_size_histogram: mscx_size_histogram(&explanations),
        list_rules: list.rules.len(),
        list_accuracy: list_acc,
        coverage,
    };
    write_json(&args.out.path(METRICS), &metrics)?;
    let f = &metrics.fidelity;
    eprintln!(
        "fidelity+ {:.4} ± {:.4}, fidelity- {:.4} ± {:.4} over {} instances",
        f.fid_plus_mean, f.fid_plus_std, f.fid_minus_mean, f.fid_minus_std, f.n_instances
    );
    outputs.sort();
    let outputs: Vec<&str> = outputs.iter().map(String::as_str).collect();
    let oracle = json!({ "kind": loaded.kind, "monotone": loaded.monotone, "stats": loaded.stats() });
    write_manifest(&args.out, "eval", args, json!({ "split_seed": args.split.split_seed }), Some(oracle), &outputs)
}
