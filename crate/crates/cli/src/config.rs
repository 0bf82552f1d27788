//! `key = value` configuration files, merged in front of the command line.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const COMMANDS: [&str; 5] = ["verify-algebra", "spectrum", "wavefunction", "uncertainty", "limits"];

/// Parsed entries in file order; `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`, got `{}`", lineno + 1, raw.trim());
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() {
            bail!("line {}: empty key", lineno + 1);
        }
        out.push((key, value));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Result<Option<(String, Vec<String>)>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            match it.next() {
                Some(p) => path = Some(p.clone()),
                None => bail!("--config needs a path"),
            }
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a.clone());
        }
    }
    Ok(path.map(|p| (p, rest)))
}

/// Rewrites `argv` so that config entries precede the user's flags; with
/// last-wins flag semantics the command line then overrides the file.
pub fn merge(argv: Vec<String>) -> Result<Vec<String>> {
    let Some((bin, args)) = argv.split_first() else {
        return Ok(argv);
    };
    let Some((path, args)) = config_path(args)? else {
        return Ok(argv);
    };
    let text = fs::read_to_string(Path::new(&path)).with_context(|| format!("reading config {path}"))?;
    let entries = parse(&text)?;

    let position = args.iter().position(|a| COMMANDS.contains(&a.as_str()));
    let file_command = entries.iter().find(|(k, _)| k == "command").map(|(_, v)| v.clone());
    let (command, before, after) = match (position, file_command) {
        (Some(i), _) => (args[i].clone(), args[..i].to_vec(), args[i + 1..].to_vec()),
        (None, Some(c)) => (c, Vec::new(), args.to_vec()),
        (None, None) => bail!("no subcommand on the command line or in {path}"),
    };

    let mut out = vec![bin.clone()];
    out.extend(before);
    out.push(command);
    for (key, value) in entries.into_iter().filter(|(k, _)| k != "command") {
        match value.as_str() {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            _ => out.push(format!("--{key}={value}")),
        }
    }
    out.extend(after);
    Ok(out)
}

/// Best-effort `--out-dir` lookup for reporting parse failures.
pub fn out_dir_hint(argv: &[String]) -> Option<String> {
    let mut found = None;
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--out-dir" {
            found = it.next().cloned();
        } else if let Some(p) = a.strip_prefix("--out-dir=") {
            found = Some(p.to_string());
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn comments_and_underscores() {
        let e = parse("# header\nbeta_tilde = 0.5  # inline\n\nn-max=3\n").unwrap();
        assert_eq!(e, vec![("beta-tilde".into(), "0.5".into()), ("n-max".into(), "3".into())]);
        assert!(parse("oops").is_err());
    }

    #[test]
    fn file_entries_come_first() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "command = spectrum\nbeta_tilde = 0.5\ndiagnostic = true\n").unwrap();
        let argv = args(&format!("minlen --config {} --beta-tilde 0.1", path.display()));
        let merged = merge(argv).unwrap();
        assert_eq!(merged, args("minlen spectrum --beta-tilde=0.5 --diagnostic --beta-tilde 0.1"));
    }

    #[test]
    fn command_line_subcommand_wins() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "command = spectrum\nomega-tilde = 0.2\n").unwrap();
        let merged = merge(args(&format!("minlen limits --config={}", path.display()))).unwrap();
        assert_eq!(merged, args("minlen limits --omega-tilde=0.2"));
    }
}
