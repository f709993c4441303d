//! `key=value` experiment manifests, merged underneath command-line flags.

use std::path::Path;

/// Turns a manifest into `--key=value` arguments. Blank lines and lines
/// starting with `#` are skipped; keys are flag names without the dashes.
pub fn manifest_args(text: &str) -> Result<Vec<String>, String> {
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value, got '{line}'", lineno + 1))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(format!("line {}: empty key", lineno + 1));
        }
        if key == "config" {
            return Err(format!("line {}: manifests cannot include other manifests", lineno + 1));
        }
        args.push(format!("--{key}={}", value.trim()));
    }
    Ok(args)
}

pub fn read_manifest(path: &Path) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    manifest_args(&text)
}

/// Places manifest arguments right after the subcommand, so that flags given
/// on the command line, which come later, take precedence.
pub fn merge(argv: &[String], manifest: Vec<String>) -> Vec<String> {
    let split = argv.len().min(2);
    let mut merged = argv[..split].to_vec();
    merged.extend(manifest);
    merged.extend_from_slice(&argv[split..]);
    merged
}
