use std::collections::BTreeMap;

use lgx_core::dataset::{write_json, write_jsonl};
use lgx_core::metrics::mscx_size_histogram;
use lgx_core::records::ExplanationRecord;
use lgx_core::search::{explain_instances, Method, SearchConfig};
use lgx_core::SearchStatus;
use serde::Serialize;
use serde_json::json;

use crate::args::ExplainArgs;
use crate::context::{ensure_dir, load_with_oracle, write_manifest, EXPLANATIONS};
use crate::error::CliError;

pub const STATS: &str = "explain_stats.json";

#[derive(Serialize)]
struct Stats {
    instances: usize,
    found: usize,
    no_sufficient_set: usize,
    depth_limited: usize,
    oracle_query_count: u64,
    oracle_cache_hits: u64,
    search_queries_total: usize,
    search_queries_max: usize,
    mscx_size_histogram: BTreeMap<usize, usize>,
}

pub fn run(args: &ExplainArgs) -> Result<(), CliError> {
    ensure_dir(&args.out)?;
    let (dataset, loaded) = load_with_oracle(&args.data, &args.oracle, &args.out)?;
    let config = SearchConfig {
        tau_p: args.tau,
        beam_width: args.beam,
        max_successors: (args.successors > 0).then_some(args.successors),
        max_depth: args.max_depth,
        exact_k_limit: args.exact_k_limit,
    };
    let method = if args.exact { Method::Exact } else { Method::Beam };
    let results = explain_instances(&dataset.instances, &loaded.oracle, &config, method, args.workers)?;

    let records =
        results.iter().map(|(e, _)| ExplanationRecord::from_explanation(e, &dataset.vocabulary, &dataset.classes));
    write_jsonl(&args.out.path(EXPLANATIONS), records)?;

    let count = |s: SearchStatus| results.iter().filter(|(e, _)| e.status == s).count();
    let oracle_stats = loaded.stats();
    let stats = Stats {
        instances: results.len(),
        found: count(SearchStatus::Found),
        no_sufficient_set: count(SearchStatus::NoSufficientSet),
        depth_limited: count(SearchStatus::DepthLimited),
        oracle_query_count: oracle_stats.query_count,
        oracle_cache_hits: oracle_stats.cache_hits,
        search_queries_total: results.iter().map(|(_, s)| s.queries).sum(),
        search_queries_max: results.iter().map(|(_, s)| s.queries).max().unwrap_or(0),
        mscx_size_histogram: mscx_size_histogram(results.iter().map(|(e, _)| e)),
    };
    write_json(&args.out.path(STATS), &stats)?;
    eprintln!(
        "explained {}/{} instances with {} oracle queries",
        stats.found, stats.instances, stats.oracle_query_count
    );
    let oracle = json!({ "kind": loaded.kind, "monotone": loaded.monotone, "stats": oracle_stats });
    write_manifest(&args.out, "explain", args, json!({}), Some(oracle), &[EXPLANATIONS, STATS])
}
