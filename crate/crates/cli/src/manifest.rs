use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hoggar::checks::CheckOutcome;
use serde::Serialize;

/// Environment variable that relocates relative output paths.
pub const OUT_DIR_ENV: &str = "HOGGAR_OUT_DIR";
pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub tool: String,
    pub format: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<CheckOutcome>,
    pub artifacts: Vec<String>,
    pub version: Versions,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            artifacts: Vec::new(),
            version: Versions {
                tool: format!("hoggar {}", env!("CARGO_PKG_VERSION")),
                format: FORMAT_VERSION.to_string(),
            },
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Resolves a user path against the output-directory override.
pub fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// `x.json` -> `x.manifest.json`; without `--out`, `<command>.manifest.json`.
pub fn manifest_path(out: Option<&Path>, command: &str) -> PathBuf {
    match out {
        Some(p) => {
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            p.with_file_name(format!("{stem}.manifest.json"))
        }
        None => resolve(Path::new(&format!("{command}.manifest.json"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_names() {
        assert_eq!(
            manifest_path(Some(Path::new("/tmp/a/hoggar.json")), "construct"),
            PathBuf::from("/tmp/a/hoggar.manifest.json")
        );
        assert_eq!(
            manifest_path(Some(Path::new("/tmp/vecs.csv")), "bloch"),
            PathBuf::from("/tmp/vecs.manifest.json")
        );
    }

    #[test]
    fn pass_aggregation() {
        let mut m = RunManifest::new("x");
        assert!(m.all_pass());
        m.checks.push(CheckOutcome::count("a", 1, 2));
        assert!(!m.all_pass());
    }
}
