//! Catalog resolution with an on-disk override.
//!
//! When `HK_CATALOG_DIR` is set, a reference such as `K3n:3` is first looked
//! up as `$HK_CATALOG_DIR/K3n_3.json` (lattice file format); missing files
//! fall back to the built-in catalog.

use std::path::PathBuf;

use hk_core::lattice::parse_catalog_ref;
use hk_core::QuadLattice;

use crate::io::{lattice_from_json, FormatError, FormatResult};

pub const CATALOG_DIR_VAR: &str = "HK_CATALOG_DIR";

fn override_path(key: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(CATALOG_DIR_VAR)?;
    let file = format!("{}.json", key.replace(':', "_"));
    let path = PathBuf::from(dir).join(file);
    path.is_file().then_some(path)
}

/// Resolves `key` or `key:param`.
pub fn lookup_ref(key: &str) -> FormatResult<QuadLattice> {
    if let Some(path) = override_path(key) {
        let text = std::fs::read_to_string(&path).map_err(|e| FormatError::Shape(format!("{}: {e}", path.display())))?;
        let v: serde_json::Value = serde_json::from_str(&text)?;
        if v.is_string() {
            return Err(FormatError::Shape(format!("{}: catalog file must hold a lattice object", path.display())));
        }
        let l = lattice_from_json(&v)?;
        return Ok(if l.name().is_some() { l } else { l.with_name(key) });
    }
    Ok(parse_catalog_ref(key)?)
}

/// As [`lookup_ref`] with a separate parameter.
pub fn lookup(key: &str, param: Option<i64>) -> FormatResult<QuadLattice> {
    match param {
        Some(p) => lookup_ref(&format!("{key}:{p}")),
        None => lookup_ref(key),
    }
}
