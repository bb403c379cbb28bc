//! Graph files on disk, one per `(p, l, N)`, written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ssgraph_core::{build_isogeny_graph, enumerate_supersingular, GraphFile};

use crate::CliError;

pub fn cache_path(dir: &Path, p: u64, l: u64, n: u64) -> PathBuf {
    dir.join(format!("G_p{p}_l{l}_N{n}.json"))
}

pub fn build_file(p: u64, l: u64, n: u64, seed: u64) -> Result<GraphFile, CliError> {
    let g = build_isogeny_graph(p, l, n, seed)?;
    let classes = enumerate_supersingular(p, seed)?;
    Ok(GraphFile::from_graph(&g, &classes, seed))
}

/// Write-temp-then-rename in the target directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Loads and re-validates a cached file, or builds and stores it. A cached
/// file built with another seed is rebuilt.
pub fn load_or_build(dir: &Path, p: u64, l: u64, n: u64, seed: u64) -> Result<GraphFile, CliError> {
    let path = cache_path(dir, p, l, n);
    if let Ok(s) = fs::read_to_string(&path) {
        let f = GraphFile::from_json(&s).map_err(|e| CliError::Cache(path.clone(), e.to_string()))?;
        let m = &f.metadata;
        if (m.p, m.l, m.n, m.seed) == (p, l, n, seed) {
            return Ok(f);
        }
    }
    let f = build_file(p, l, n, seed)?;
    write_atomic(&path, &f.to_json())?;
    Ok(f)
}
