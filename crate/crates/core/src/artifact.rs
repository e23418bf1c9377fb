//! Versioned JSON artifacts. Every payload is wrapped with a schema
//! version and a kind tag so golden files survive refactors; writers are
//! deterministic (struct field order, sorted collections).

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("artifact is {found}, expected {expected}")]
    KindMismatch { expected: String, found: String },
    #[error("unsupported schema version {0}")]
    Version(u32),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Serialize, Deserialize)]
struct Envelope<T> {
    schema_version: u32,
    kind: String,
    data: T,
}

pub fn to_json<T: Serialize>(kind: &str, data: &T) -> String {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        kind: kind.to_string(),
        data,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("serializable artifact");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(kind: &str, text: &str) -> Result<T, ArtifactError> {
    let env: Envelope<T> = serde_json::from_str(text)?;
    if env.schema_version != SCHEMA_VERSION {
        return Err(ArtifactError::Version(env.schema_version));
    }
    if env.kind != kind {
        return Err(ArtifactError::KindMismatch {
            expected: kind.to_string(),
            found: env.kind,
        });
    }
    Ok(env.data)
}

pub const KIND_DECOMPOSITION: &str = "cop-decomposition";
pub const KIND_CLUSTERING: &str = "clustering";
pub const KIND_MINOR: &str = "terminal-minor";
pub const KIND_COVER: &str = "tree-cover";
pub const KIND_REPORT: &str = "verify-report";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn envelope_round_trip_and_kind_check() {
        let g = graph::path(4);
        let dec = crate::copdecomp::build_decomposition(&g, 3, 2.0).unwrap();
        let text = to_json(KIND_DECOMPOSITION, &dec);
        let back: crate::copdecomp::CopDecomposition =
            from_json(KIND_DECOMPOSITION, &text).unwrap();
        assert_eq!(dec, back);
        assert!(matches!(
            from_json::<crate::copdecomp::CopDecomposition>(KIND_COVER, &text),
            Err(ArtifactError::KindMismatch { .. })
        ));
    }
}
