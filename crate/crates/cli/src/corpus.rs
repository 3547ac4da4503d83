//! The frozen verification corpus, embedded into the binary.
//!
//! Every case and suite-parameter file under `corpus/v1/` is compiled
//! in together with a manifest of SHA-256 digests. Before any suite
//! runs, the digests are recomputed; a mismatch (an edited embedded
//! file, a stale manifest, or a tampered on-disk copy when one is
//! present) aborts verification rather than report results against
//! unknown inputs.

use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// One embedded corpus file.
#[derive(Debug, Clone, Copy)]
pub struct CorpusFile {
    pub name: &'static str,
    pub content: &'static str,
}

macro_rules! corpus_file {
    ($name:literal) => {
        CorpusFile {
            name: $name,
            content: include_str!(concat!("../../../corpus/v1/", $name)),
        }
    };
}

/// All embedded corpus files, manifest excluded.
pub const CORPUS_FILES: &[CorpusFile] = &[
    corpus_file!("pair-limit-exact.conf"),
    corpus_file!("pair-limit-exact.expect"),
    corpus_file!("pair-limit-convergence.conf"),
    corpus_file!("pair-limit-convergence.expect"),
    corpus_file!("product-limit-convergence.conf"),
    corpus_file!("product-limit-convergence.expect"),
    corpus_file!("uniform-capacity.conf"),
    corpus_file!("uniform-capacity.expect"),
    corpus_file!("run-length-entropy.conf"),
    corpus_file!("run-length-entropy.expect"),
    corpus_file!("oracle-suite.conf"),
    corpus_file!("martingale-suite.conf"),
    corpus_file!("structure-suite.conf"),
    corpus_file!("bound-chain-suite.conf"),
];

/// The digest manifest the corpus was frozen with.
pub const MANIFEST: &str = include_str!("../../../corpus/v1/MANIFEST.sha256");

fn sha256_hex(content: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(content.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Returns the content of one embedded corpus file.
pub fn corpus_file(name: &str) -> Result<&'static str> {
    CORPUS_FILES
        .iter()
        .find(|f| f.name == name)
        .map(|f| f.content)
        .ok_or_else(|| CliError::Io(format!("corpus file `{name}` is not embedded")))
}

/// Parses the manifest into (digest, name) pairs.
fn manifest_entries(manifest: &str) -> Result<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for line in manifest.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(digest), Some(name)) = (parts.next(), parts.next()) else {
            return Err(CliError::Suite(format!(
                "corpus manifest line is not `<digest> <name>`: `{line}`"
            )));
        };
        entries.push((digest.to_string(), name.to_string()));
    }
    Ok(entries)
}

/// Checks every embedded file against the embedded manifest: all files
/// listed, no extra listings, every digest matching.
pub fn check_embedded_corpus() -> Result<()> {
    let entries = manifest_entries(MANIFEST)?;
    for file in CORPUS_FILES {
        let Some((digest, _)) = entries.iter().find(|(_, name)| name == file.name) else {
            return Err(CliError::Suite(format!(
                "corpus file `{}` is missing from the manifest",
                file.name
            )));
        };
        let actual = sha256_hex(file.content);
        if &actual != digest {
            return Err(CliError::Suite(format!(
                "corpus file `{}` does not match its frozen digest \
                 (expected {digest}, got {actual}); refusing to verify \
                 against a modified corpus",
                file.name
            )));
        }
    }
    for (_, name) in &entries {
        if !CORPUS_FILES.iter().any(|f| f.name == *name) {
            return Err(CliError::Suite(format!(
                "manifest lists `{name}`, which is not embedded"
            )));
        }
    }
    Ok(())
}

/// If an on-disk copy of the corpus exists at `corpus/v1/` relative to
/// the working directory, checks it against the frozen digests too, so
/// a locally edited copy cannot masquerade as the verified one.
pub fn check_on_disk_corpus() -> Result<Option<usize>> {
    let dir = std::path::Path::new("corpus/v1");
    if !dir.is_dir() {
        return Ok(None);
    }
    let entries = manifest_entries(MANIFEST)?;
    let mut checked = 0;
    for (digest, name) in &entries {
        let path = dir.join(name);
        let content = std::fs::read_to_string(&path).map_err(|e| {
            CliError::Suite(format!(
                "on-disk corpus is present but `{}` cannot be read: {e}",
                path.display()
            ))
        })?;
        let actual = sha256_hex(&content);
        if &actual != digest {
            return Err(CliError::Suite(format!(
                "on-disk corpus file `{}` differs from the frozen digest; \
                 refusing to verify against a modified corpus",
                path.display()
            )));
        }
        checked += 1;
    }
    Ok(Some(checked))
}
