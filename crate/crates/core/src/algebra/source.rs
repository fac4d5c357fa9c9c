//! Named Hadamard-matrix sources, selectable at runtime.

use std::collections::BTreeMap;
use std::path::PathBuf;

use super::hadamard::{fourier_matrix, sylvester_hadamard, HadamardMatrix};
use crate::error::{invalid, Error, Result};

pub trait HadamardSource: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn build(&self, d: usize) -> Result<HadamardMatrix>;
}

pub struct Sylvester;

impl HadamardSource for Sylvester {
    fn name(&self) -> &'static str {
        "sylvester"
    }

    fn description(&self) -> &'static str {
        "real Sylvester matrix, entry (-1)^<j,k>; d must be a power of two"
    }

    fn build(&self, d: usize) -> Result<HadamardMatrix> {
        if d < 2 || !d.is_power_of_two() {
            return invalid(format!(
                "Sylvester matrices exist only for powers of two, got d={d}"
            ));
        }
        sylvester_hadamard(d.trailing_zeros())
    }
}

pub struct Fourier;

impl HadamardSource for Fourier {
    fn name(&self) -> &'static str {
        "fourier"
    }

    fn description(&self) -> &'static str {
        "unnormalized DFT matrix exp(2 pi i jk/d)"
    }

    fn build(&self, d: usize) -> Result<HadamardMatrix> {
        fourier_matrix(d)
    }
}

/// Reads a Hadamard matrix from a JSON file in the matrix exchange format.
pub struct FileSource {
    pub path: PathBuf,
}

impl HadamardSource for FileSource {
    fn name(&self) -> &'static str {
        "file"
    }

    fn description(&self) -> &'static str {
        "JSON matrix {rows, cols, entries[, signs]} read from disk"
    }

    fn build(&self, d: usize) -> Result<HadamardMatrix> {
        let text = std::fs::read_to_string(&self.path)?;
        let h: HadamardMatrix = serde_json::from_str(&text)?;
        if h.dim() != d {
            return invalid(format!(
                "{} holds a {}x{} matrix, expected d={d}",
                self.path.display(),
                h.dim(),
                h.dim()
            ));
        }
        Ok(h)
    }
}

#[derive(Default)]
pub struct HadamardRegistry {
    sources: BTreeMap<&'static str, Box<dyn HadamardSource>>,
}

impl HadamardRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding the built-in `sylvester` and `fourier` sources.
    pub fn with_defaults() -> Self {
        let mut reg = Self::new();
        reg.register(Box::new(Sylvester));
        reg.register(Box::new(Fourier));
        reg
    }

    /// Replaces any source registered under the same name.
    pub fn register(&mut self, source: Box<dyn HadamardSource>) {
        self.sources.insert(source.name(), source);
    }

    pub fn get(&self, name: &str) -> Option<&dyn HadamardSource> {
        self.sources.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.sources.keys().copied()
    }

    pub fn build(&self, name: &str, d: usize) -> Result<HadamardMatrix> {
        let source = self.get(name).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown Hadamard source '{name}' (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })?;
        source.build(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_by_name() {
        let reg = HadamardRegistry::with_defaults();
        assert_eq!(reg.names().collect::<Vec<_>>(), ["fourier", "sylvester"]);
        assert!(reg.build("sylvester", 8).unwrap().is_sylvester());
        assert!(!reg.build("fourier", 3).unwrap().is_real());
        assert!(reg.build("sylvester", 6).is_err());
        assert!(reg.build("paley", 4).is_err());
    }

    #[test]
    fn file_source_round_trips() {
        let dir = std::env::temp_dir().join(format!("hoggar-src-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("h.json");
        let h = sylvester_hadamard(2).unwrap();
        std::fs::write(&path, serde_json::to_string(&h).unwrap()).unwrap();
        let mut reg = HadamardRegistry::with_defaults();
        reg.register(Box::new(FileSource { path: path.clone() }));
        assert_eq!(reg.build("file", 4).unwrap(), h);
        assert!(reg.build("file", 8).is_err());
        std::fs::remove_dir_all(dir).ok();
    }
}
