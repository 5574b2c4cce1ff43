use lgx_core::dataset::write_json;
use lgx_core::global::pair_up;
use lgx_core::verify::{
    beam_vs_exact, check_explanations, cover_bounds, planted_lists, support_coverage, VerifyReport,
};
use serde_json::json;

use crate::args::VerifyArgs;
use crate::context::{ensure_dir, load_explanations, load_with_oracle, write_manifest};
use crate::error::CliError;

pub const REPORT: &str = "verify_report.json";

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    ensure_dir(&args.out)?;
    let mut report = VerifyReport::default();
    let seeds = args.start_seed..args.start_seed + args.seeds;
    if !args.skip_synthetic {
        report.merge(beam_vs_exact(seeds.clone(), args.max_k, args.tau)?);
        report.merge(cover_bounds(seeds.clone())?);
        report.merge(planted_lists(seeds.clone())?);
    }
    let mut oracle_info = None;
    if let Some(path) = &args.explanations {
        let (dataset, loaded) = load_with_oracle(&args.data, &args.oracle, &args.out)?;
        let explanations = load_explanations(path, &dataset)?;
        let pairs = pair_up(&dataset.instances, &explanations);
        report.merge(check_explanations(&loaded.oracle, &pairs, args.tau, loaded.monotone, args.exact_k_limit)?);
        report.merge(support_coverage(&pairs));
        oracle_info = Some(json!({ "kind": loaded.kind, "monotone": loaded.monotone, "stats": loaded.stats() }));
    }
    write_json(&args.out.path(REPORT), &report)?;
    for (name, s) in &report.checks {
        eprintln!("{name}: {} runs, {} violations", s.runs, s.violations);
    }
    for v in report.violations.iter().take(20) {
        eprintln!("violation [{}] {}", v.check, v.detail);
    }
    let seeds_json = json!({ "start_seed": args.start_seed, "seeds": args.seeds });
    write_manifest(&args.out, "verify", args, seeds_json, oracle_info, &[REPORT])?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification(report.violations.len()))
    }
}
