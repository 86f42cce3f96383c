//! `--config FILE`: `key=value` lines turned into flags for the chosen
//! subcommand. Config flags are inserted before the command-line flags, so
//! flags given on the command line win.

use std::collections::BTreeMap;
use std::ffi::OsString;

use clap::Command;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("--config needs a file path")]
    MissingPath,
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}:{line}: expected key=value")]
    Syntax { path: String, line: usize },
}

pub fn parse(text: &str, path: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax {
            path: path.to_string(),
            line: i + 1,
        })?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

/// Removes `--config` from `args` and splices the file's settings in right
/// after the subcommand. Keys the subcommand does not know are skipped, so
/// one file can serve several subcommands. `true`/`false` toggle switches.
pub fn expand(args: Vec<OsString>, cmd: &Command) -> Result<Vec<OsString>, ConfigError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        match a.to_str() {
            Some("--config") => path = Some(it.next().ok_or(ConfigError::MissingPath)?),
            Some(s) if s.starts_with("--config=") => path = Some(OsString::from(&s["--config=".len()..])),
            _ => rest.push(a),
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let path = path.to_string_lossy().to_string();
    let text = std::fs::read_to_string(&path).map_err(|source| ConfigError::Read {
        path: path.clone(),
        source,
    })?;
    let settings = parse(&text, &path)?;

    let Some(pos) = rest
        .iter()
        .skip(1)
        .position(|a| cmd.find_subcommand(a.to_string_lossy().as_ref()).is_some())
        .map(|p| p + 1)
    else {
        return Ok(rest);
    };
    let sub = cmd.find_subcommand(rest[pos].to_string_lossy().as_ref()).unwrap();
    let mut injected = Vec::new();
    for (key, value) in &settings {
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            continue;
        };
        let is_switch = matches!(arg.get_action(), clap::ArgAction::SetTrue);
        if is_switch {
            if value.eq_ignore_ascii_case("true") {
                injected.push(OsString::from(format!("--{key}")));
            }
        } else {
            injected.push(OsString::from(format!("--{key}={value}")));
        }
    }
    rest.splice(pos + 1..pos + 1, injected);
    Ok(rest)
}
