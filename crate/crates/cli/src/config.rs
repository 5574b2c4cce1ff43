//! Config files as flag sources.
//!
//! Top-level `key = value` pairs become `--key value` flags for every
//! subcommand; a `[name]` table applies only to subcommand `name`. The flags
//! are spliced in right after the subcommand so that flags given on the
//! command line, which come later, take precedence.

use std::ffi::OsString;
use std::path::Path;

use crate::error::CliError;

fn flag(key: &str) -> String {
    format!("--{}", key.replace('_', "-"))
}

fn push(out: &mut Vec<OsString>, key: &str, value: &toml::Value) -> Result<(), CliError> {
    match value {
        toml::Value::Boolean(true) => out.push(flag(key).into()),
        toml::Value::Boolean(false) => {}
        toml::Value::String(s) => out.extend([flag(key).into(), s.into()]),
        toml::Value::Integer(i) => out.extend([flag(key).into(), i.to_string().into()]),
        toml::Value::Float(f) => out.extend([flag(key).into(), f.to_string().into()]),
        toml::Value::Array(items) => {
            for item in items {
                push(out, key, item)?;
            }
        }
        other => return Err(CliError::Usage(format!("config key `{key}`: unsupported value {other}"))),
    }
    Ok(())
}

/// Flags for `subcommand` from the config file text.
pub fn flags_from(text: &str, subcommand: &str) -> Result<Vec<OsString>, CliError> {
    let table: toml::Table = text.parse().map_err(|e| CliError::Usage(format!("config: {e}")))?;
    let mut out = Vec::new();
    for (key, value) in &table {
        if !value.is_table() {
            push(&mut out, key, value)?;
        }
    }
    if let Some(toml::Value::Table(section)) = table.get(subcommand) {
        for (key, value) in section {
            push(&mut out, key, value)?;
        }
    }
    Ok(out)
}

/// Locates `--config PATH` and the subcommand in raw arguments.
fn scan(args: &[OsString]) -> (Option<OsString>, Option<usize>) {
    let mut config = None;
    let mut sub = None;
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy();
        if a == "--config" {
            config = args.get(i + 1).cloned();
            i += 2;
            continue;
        }
        if let Some(v) = a.strip_prefix("--config=") {
            config = Some(v.into());
        } else if sub.is_none() && !a.starts_with('-') {
            sub = Some(i);
        }
        i += 1;
    }
    (config, sub)
}

/// Raw arguments with config-file flags spliced in.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let (config, sub) = scan(&args);
    let (Some(path), Some(sub)) = (config, sub) else { return Ok(args) };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let name = args[sub].to_string_lossy().into_owned();
    let extra = flags_from(&text, &name)?;
    let mut out = args;
    out.splice(sub + 1..sub + 1, extra);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: Vec<OsString>) -> Vec<String> {
        v.into_iter().map(|s| s.into_string().unwrap()).collect()
    }

    #[test]
    fn values_become_flags() {
        let text = "beam = 4\ntau = 0.9\nexact = true\nverbose = false\nname = \"x\"\nextra_class = [\"a\", \"b\"]\n";
        assert_eq!(
            strings(flags_from(text, "explain").unwrap()),
            ["--beam", "4", "--exact", "--extra-class", "a", "--extra-class", "b", "--name", "x", "--tau", "0.9"]
        );
    }

    #[test]
    fn sections_apply_to_their_subcommand() {
        let text = "seed = 1\n[gen]\nclasses = 2\n[explain]\nbeam = 7\n";
        assert_eq!(strings(flags_from(text, "gen").unwrap()), ["--seed", "1", "--classes", "2"]);
        assert_eq!(strings(flags_from(text, "cover").unwrap()), ["--seed", "1"]);
    }

    #[test]
    fn splices_after_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.toml");
        std::fs::write(&cfg, "beam = 4\n").unwrap();
        let args: Vec<OsString> =
            ["lgx", "--config", cfg.to_str().unwrap(), "explain", "--beam", "2"].iter().map(Into::into).collect();
        let got = strings(expand(args).unwrap());
        assert_eq!(&got[3..], ["explain", "--beam", "4", "--beam", "2"]);
    }

    #[test]
    fn bad_config_is_a_usage_error() {
        assert!(matches!(flags_from("= nope", "gen"), Err(CliError::Usage(_))));
    }
}
