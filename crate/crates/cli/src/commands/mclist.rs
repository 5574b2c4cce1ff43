use lgx_core::dataset::write_json;
use lgx_core::global::{explanation_list, format_list, MaskIndex};
use lgx_core::records::ListRecord;
use serde_json::json;

use crate::args::ListArgs;
use crate::context::{ensure_dir, load_dataset, load_explanations, support_ids, write_manifest, EXPLANATIONS};
use crate::error::CliError;

pub const LIST: &str = "explanation_list.json";
pub const LIST_TEXT: &str = "explanation_list.txt";

pub fn run(args: &ListArgs) -> Result<(), CliError> {
    ensure_dir(&args.out)?;
    let dataset = load_dataset(&args.data, &args.out, &[])?;
    let all = load_explanations(&args.out.or_default(&args.explanations, EXPLANATIONS), &dataset)?;
    let support = support_ids(&dataset, &args.split)?;
    let explanations: Vec<_> = all.into_iter().filter(|e| support.contains(&e.instance_id)).collect();
    let list = explanation_list(&MaskIndex::new(&explanations));
    write_json(&args.out.path(LIST), &ListRecord::from_list(&list, &dataset.vocabulary, &dataset.classes))?;
    let text = format_list(&list, &dataset.vocabulary, &dataset.classes);
    print!("{text}");
    std::fs::write(args.out.path(LIST_TEXT), text)
        .map_err(|e| CliError::Usage(format!("cannot write {LIST_TEXT}: {e}")))?;
    let seeds = json!({ "split_seed": args.split.split_seed });
    write_manifest(&args.out, "mclist", args, seeds, None, &[LIST, LIST_TEXT])
}
