//! Generators and an independent model checker shared by the integration
//! tests.
#![allow(dead_code)]

pub mod gen_algebra;
pub mod gen_proof;
pub mod oracle;

use std::path::PathBuf;

/// The bundled corpus at the workspace root.
pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn read_corpus(rel: &str) -> String {
    let p = corpus_dir().join(rel);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}
