use std::fmt::Write as _;

use lgx_core::dataset::write_json;
use lgx_core::global::{cover_class, format_formula, PctDisplay};
use lgx_core::records::CoveringRecord;
use serde_json::json;

use crate::args::{CoverArgs, Display};
use crate::context::{ensure_dir, load_dataset, load_explanations, slug, support_ids, write_manifest, EXPLANATIONS};
use crate::error::CliError;

pub const FORMULAS: &str = "formulas.txt";

pub fn run(args: &CoverArgs) -> Result<(), CliError> {
    ensure_dir(&args.out)?;
    let dataset = load_dataset(&args.data, &args.out, &[])?;
    let all = load_explanations(&args.out.or_default(&args.explanations, EXPLANATIONS), &dataset)?;
    let support = support_ids(&dataset, &args.split)?;
    let explanations: Vec<_> = all.into_iter().filter(|e| support.contains(&e.instance_id)).collect();
    let display = match args.display {
        Display::Marginal => PctDisplay::Marginal,
        Display::Total => PctDisplay::Total,
    };

    let mut outputs = vec![FORMULAS.to_string()];
    let mut formulas = String::new();
    for class in dataset.classes.ids() {
        let name = dataset.classes.name(class);
        let phi = cover_class(class, &explanations);
        if phi.support_size == 0 {
            eprintln!("warning: class {name} has no explained support instances");
        }
        let file = format!("cover_{}.json", slug(name));
        write_json(&args.out.path(&file), &CoveringRecord::from_covering(&phi, &dataset.vocabulary, &dataset.classes))?;
        outputs.push(file);
        let line = format!("{name}: {}", format_formula(&phi, &dataset.vocabulary, display, args.min_pct));
        println!("{line}");
        writeln!(formulas, "{line}").expect("string write");
    }
    std::fs::write(args.out.path(FORMULAS), formulas)
        .map_err(|e| CliError::Usage(format!("cannot write {FORMULAS}: {e}")))?;
    outputs.sort();
    let outputs: Vec<&str> = outputs.iter().map(String::as_str).collect();
    let seeds = json!({ "split_seed": args.split.split_seed });
    write_manifest(&args.out, "cover", args, seeds, None, &outputs)
}
