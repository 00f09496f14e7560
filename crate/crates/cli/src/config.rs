//! `key = value` run configuration.
//!
//! Keys are long flag names (`k`, `grid-step`, `out-dir`, …; `_` may stand in
//! for `-`). The entries are appended to the command line, so they override
//! flags given there and go through the same validation.

use std::path::Path;

use crate::error::{CliError, CliResult};

pub fn parse_config(text: &str, path: &Path) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::parse(path, format!("line {}: expected `key = value`", n + 1))
        })?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key.starts_with('-') {
            return Err(CliError::parse(
                path,
                format!("line {}: bad key {:?}", n + 1, k.trim()),
            ));
        }
        if key == "config" {
            return Err(CliError::parse(
                path,
                format!("line {}: config files cannot nest", n + 1),
            ));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Extra command-line tokens equivalent to the config entries.
pub fn as_args(entries: &[(String, String)]) -> Vec<String> {
    entries.iter().map(|(k, v)| format!("--{k}={v}")).collect()
}

pub fn load(path: &Path) -> CliResult<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(as_args(&parse_config(&text, path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries() {
        let p = Path::new("run.cfg");
        let e = parse_config("# comment\nk = 4.7\n\ngrid_step=0.05  # trailing\n", p).unwrap();
        assert_eq!(
            e,
            vec![
                ("k".into(), "4.7".into()),
                ("grid-step".into(), "0.05".into())
            ]
        );
        assert_eq!(as_args(&e), ["--k=4.7", "--grid-step=0.05"]);
        assert!(parse_config("k 4.7", p).is_err());
        assert!(parse_config("config = other", p).is_err());
    }
}
