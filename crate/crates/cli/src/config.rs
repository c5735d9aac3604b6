//! `--config <file>` support.
//!
//! Each `key=value` line becomes `--key value`, inserted directly after the
//! subcommand so that flags given on the command line win.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected key=value", n + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(CliError::usage(format!("config line {}: invalid key {k:?}", n + 1)));
        }
        entries.push((key, v.trim().to_string()));
    }
    Ok(entries)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut iter = args.iter();
    while let Some(a) = iter.next() {
        if a == "--" {
            return None;
        }
        if a == "--config" {
            return iter.next().cloned();
        }
        if let Some(p) = a.to_str().and_then(|s| s.strip_prefix("--config=")) {
            return Some(p.into());
        }
    }
    None
}

/// Returns `args` with the referenced config file's entries spliced in
/// after the subcommand. `args[0]` is the program name, `args[1]` the
/// subcommand.
pub fn expand(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    if args.len() < 2 {
        return Ok(args);
    }
    let Some(path) = config_path(&args[2..]) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse_config(&text)?;
    let mut out = Vec::with_capacity(args.len() + 2 * entries.len());
    out.extend_from_slice(&args[..2]);
    for (k, v) in entries {
        out.push(format!("--{k}").into());
        out.push(v.into());
    }
    out.extend_from_slice(&args[2..]);
    Ok(out)
}
