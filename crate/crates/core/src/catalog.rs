//! Loading the shipped rule files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::rules::{parse_rules, RuleError, RuleTable};

/// Directory holding the shipped `*.rules` files.
pub fn default_rules_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/rules"))
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("no .rules files in {0}")]
    Empty(PathBuf),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// Sorted list of `*.rules` files in `dir`.
pub fn rule_files(dir: &Path) -> Result<Vec<PathBuf>, CatalogError> {
    let io_err = |source| CatalogError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        if path.extension().is_some_and(|e| e == "rules") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Loads files in the given order without rejecting rotation conflicts.
pub fn load_files_unchecked<P: AsRef<Path>>(files: &[P]) -> Result<RuleTable, CatalogError> {
    let mut table = RuleTable::new();
    for path in files {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        table.extend(parse_rules(&name, &text)?);
    }
    Ok(table)
}

/// Loads every rule file in `dir`; rotation conflicts are an error.
pub fn load_dir(dir: &Path) -> Result<RuleTable, CatalogError> {
    let files = rule_files(dir)?;
    if files.is_empty() {
        return Err(CatalogError::Empty(dir.to_path_buf()));
    }
    let table = load_files_unchecked(&files)?;
    let report = crate::rules::check_rotation_invariance(&table);
    if !report.is_ok() {
        return Err(RuleError::DuplicateConflict(report.conflicts).into());
    }
    Ok(table)
}

pub fn load_default() -> Result<RuleTable, CatalogError> {
    load_dir(&default_rules_dir())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_catalog_loads() {
        let table = load_default().unwrap();
        assert_eq!(table.len(), 134);
        assert_eq!(table.distinct_minimal_contexts(), 121);
        assert_eq!(rule_files(&default_rules_dir()).unwrap().len(), 10);
    }

    #[test]
    fn missing_dir_is_io_error() {
        assert!(matches!(
            load_dir(Path::new("/nonexistent/rules")),
            Err(CatalogError::Io { .. })
        ));
    }
}
