//! Loading inputs, constructing oracles, writing manifests.

use std::collections::BTreeSet;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::time::Duration;

use lgx_core::dataset::{read_json, read_jsonl, write_json};
use lgx_core::oracle::{CachedOracle, ExternalOracle, ModelRecord, OracleStats, SyntheticModel, TableOracle};
use lgx_core::records::ExplanationRecord;
use lgx_core::split::split_by_id;
use lgx_core::{CompleteExplanation, Dataset, Oracle};
use serde::Serialize;
use serde_json::Value;

use crate::args::{DataArgs, OracleArgs, OutDir, SplitArgs};
use crate::error::CliError;

pub const DATASET: &str = "dataset.jsonl";
pub const VOCAB: &str = "vocab.json";
pub const MODEL: &str = "model.json";
pub const EXPLANATIONS: &str = "explanations.jsonl";

pub fn ensure_dir(out: &OutDir) -> Result<(), CliError> {
    std::fs::create_dir_all(&out.out_dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out.out_dir.display())))
}

pub fn load_dataset(data: &DataArgs, out: &OutDir, extra: &[String]) -> Result<Dataset, CliError> {
    let mut classes = data.extra_classes.clone();
    classes.extend(extra.iter().cloned());
    Ok(Dataset::load(&out.or_default(&data.dataset, DATASET), &out.or_default(&data.vocab, VOCAB), &classes)?)
}

enum Source {
    Model(PathBuf),
    Table(PathBuf),
    External(String),
}

fn source(args: &OracleArgs, out: &OutDir) -> Result<Source, CliError> {
    let given = [args.model.is_some(), args.table.is_some(), args.oracle_cmd.is_some()];
    match given.iter().filter(|&&g| g).count() {
        0 => Ok(Source::Model(out.path(MODEL))),
        1 => Ok(if let Some(p) = &args.model {
            Source::Model(p.clone())
        } else if let Some(p) = &args.table {
            Source::Table(p.clone())
        } else {
            Source::External(args.oracle_cmd.clone().unwrap_or_default())
        }),
        _ => Err(CliError::Usage("give at most one of --model, --table, --oracle-cmd".into())),
    }
}

pub struct LoadedOracle {
    pub oracle: CachedOracle<Box<dyn Oracle>>,
    pub kind: &'static str,
    /// Scores are known to be monotone in the subset.
    pub monotone: bool,
}

impl LoadedOracle {
    pub fn stats(&self) -> OracleStats {
        self.oracle.stats()
    }
}

/// Loads the dataset together with its oracle. Classes named by a model
/// file join the dataset's class table.
pub fn load_with_oracle(data: &DataArgs, args: &OracleArgs, out: &OutDir) -> Result<(Dataset, LoadedOracle), CliError> {
    let src = source(args, out)?;
    let record = match &src {
        Source::Model(p) => Some(read_json::<ModelRecord>(p)?),
        _ => None,
    };
    let extra: Vec<String> = record.as_ref().map(|r| r.weights.keys().cloned().collect()).unwrap_or_default();
    let dataset = load_dataset(data, out, &extra)?;
    let (inner, kind, monotone): (Box<dyn Oracle>, _, _) = match src {
        Source::Model(_) => {
            let model = SyntheticModel::from_record(record.as_ref().unwrap(), &dataset.vocabulary, &dataset.classes)?;
            let monotone = model.is_monotone();
            (Box::new(model), "synthetic", monotone)
        }
        Source::Table(p) => (Box::new(TableOracle::load(&p, &dataset.vocabulary, &dataset.classes)?), "table", false),
        Source::External(cmd) => {
            if !(args.oracle_timeout > 0.0 && args.oracle_timeout.is_finite()) {
                return Err(CliError::Usage(format!("oracle timeout must be positive, got {}", args.oracle_timeout)));
            }
            let oracle = ExternalOracle::spawn(
                &cmd,
                &args.oracle_args,
                dataset.vocabulary.clone(),
                dataset.classes.clone(),
                Duration::from_secs_f64(args.oracle_timeout),
            )?;
            (Box::new(oracle), "external", false)
        }
    };
    let oracle = match args.cache_capacity {
        None => CachedOracle::new(inner),
        Some(n) => CachedOracle::with_capacity(
            inner,
            NonZeroUsize::new(n).ok_or_else(|| CliError::Usage("cache capacity must be positive".into()))?,
        ),
    };
    Ok((dataset, LoadedOracle { oracle, kind, monotone }))
}

pub fn load_explanations(path: &Path, dataset: &Dataset) -> Result<Vec<CompleteExplanation>, CliError> {
    let records: Vec<ExplanationRecord> = read_jsonl(path)?;
    let mut out = Vec::with_capacity(records.len());
    for r in &records {
        if dataset.find(&r.id).is_none() {
            return Err(CliError::Usage(format!("{}: instance `{}` is not in the dataset", path.display(), r.id)));
        }
        out.push(r.to_explanation(&dataset.vocabulary, &dataset.classes)?);
    }
    Ok(out)
}

/// Ids of the support split.
pub fn support_ids(dataset: &Dataset, split: &SplitArgs) -> Result<BTreeSet<String>, CliError> {
    let (support, _) = split_by_id(dataset.instances.iter(), |x| x.id(), split.split_seed, split.support_fraction)?;
    Ok(support.into_iter().map(|x| x.id().to_string()).collect())
}

/// Class names usable in file names.
pub fn slug(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    args: Value,
    seeds: Value,
    oracle: Option<Value>,
    outputs: Vec<String>,
}

/// `<command>.manifest.json` beside the outputs. Holds nothing that varies
/// between identical runs.
pub fn write_manifest<A: Serialize>(
    out: &OutDir,
    command: &str,
    args: &A,
    seeds: Value,
    oracle: Option<Value>,
    outputs: &[&str],
) -> Result<(), CliError> {
    let m = Manifest {
        tool: "lgx",
        version: env!("CARGO_PKG_VERSION"),
        command,
        args: serde_json::to_value(args).map_err(lgx_core::Error::from)?,
        seeds,
        oracle,
        outputs: outputs.iter().map(|s| s.to_string()).collect(),
    };
    write_json(&out.path(&format!("{command}.manifest.json")), &m)?;
    Ok(())
}
