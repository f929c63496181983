//! The bundled proof scripts, their golden reports and the micro-systems.
//!
//! Scripts are compiled in; setting `ARI_CORPUS_DIR` makes [`load_corpus`]
//! read `<dir>/<name>.ari` instead.

use crate::arith::MicroSystem;
use crate::code::Code;
use crate::script::{parse_script, Script, ScriptError};

macro_rules! entries {
    ($($name:literal),* $(,)?) => {
        const ENTRIES: &[(&str, &str, &str)] = &[
            $(($name,
               include_str!(concat!("../corpus/v1/", $name, ".ari")),
               include_str!(concat!("../corpus/v1/golden/", $name, ".json")))),*
        ];
    };
}

entries!(
    "imp0", "chin", "chin2", "chinfla2", "intant", "intant2", "contrap1", "contrap2", "mtp1", "mtp2", "appendixC",
    "appendixD1", "appendixD2", "main",
);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("no corpus entry named '{0}'")]
    UnknownEntry(String),
    #[error("corpus entry {name}: {source}")]
    Parse { name: String, source: ScriptError },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Entry names in presentation order.
pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

/// Script text of an entry, honoring `ARI_CORPUS_DIR`.
pub fn text(name: &str) -> Result<String, CorpusError> {
    let entry = ENTRIES.iter().find(|e| e.0 == name).ok_or_else(|| CorpusError::UnknownEntry(name.into()))?;
    match std::env::var_os("ARI_CORPUS_DIR") {
        Some(dir) => {
            let path = std::path::Path::new(&dir).join(format!("{name}.ari"));
            std::fs::read_to_string(&path)
                .map_err(|e| CorpusError::Io { path: path.display().to_string(), message: e.to_string() })
        }
        None => Ok(entry.1.to_string()),
    }
}

/// The bundled golden JSON report of an entry.
pub fn golden(name: &str) -> Result<&'static str, CorpusError> {
    ENTRIES.iter().find(|e| e.0 == name).map(|e| e.2).ok_or_else(|| CorpusError::UnknownEntry(name.into()))
}

pub fn load_corpus(name: &str) -> Result<Script, CorpusError> {
    let t = text(name)?;
    parse_script(&t).map_err(|source| CorpusError::Parse { name: name.into(), source })
}

/// Atom codes of the micro-systems.
pub fn micro_atoms() -> (Code, Code) {
    (Code::from_u64(2), Code::from_u64(3))
}

/// `{p, p -> q}`.
pub fn micro_a() -> MicroSystem {
    let (p, q) = micro_atoms();
    MicroSystem { name: "A".into(), axioms: vec![p.clone(), MicroSystem::imp(&p, &q)] }
}

/// `{q, q -> p, p -> (p -> q)}`.
pub fn micro_b() -> MicroSystem {
    let (p, q) = micro_atoms();
    let pq = MicroSystem::imp(&p, &q);
    MicroSystem { name: "B".into(), axioms: vec![q.clone(), MicroSystem::imp(&q, &p), MicroSystem::imp(&p, &pq)] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        for n in names() {
            load_corpus(n).unwrap_or_else(|e| panic!("{e}"));
        }
        assert_eq!(load_corpus("nope"), Err(CorpusError::UnknownEntry("nope".into())));
    }

    #[test]
    fn micro_systems() {
        assert_eq!(micro_a().axioms.len(), 2);
        assert_eq!(micro_b().axioms.len(), 3);
        assert_eq!(micro_a().axioms[1].materialize(100).unwrap().to_string(), "9000");
    }
}
