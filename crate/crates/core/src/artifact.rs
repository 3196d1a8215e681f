//! On-disk Hamiltonian artifacts.
//!
//! An artifact is the JSON form of a Hamiltonian: the variable table, the
//! canonical term list, and a provenance block recording where the
//! polynomial came from — the SHA-256 of the source equation file and the
//! ordered chain of transforms applied since. Tools downstream (spectrum
//! enumeration, runtime bounds) consume artifacts so a landscape can
//! always be traced back to the system and manipulations that produced it.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CoreError;
use crate::poly::{BinaryPolynomial, Monomial};
use crate::system::Hamiltonian;
use crate::vars::VarTable;

/// Format tag carried by every artifact.
pub const ARTIFACT_FORMAT: &str = "elmkit/hamiltonian-v1";

/// One monomial: its variables (in table order) and coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactTerm {
    pub vars: Vec<String>,
    pub coeff: i64,
}

/// Where the polynomial came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 (hex) of the source equation file text.
    pub source_sha256: String,
    /// Human-readable descriptions of each transform, in application order.
    pub transforms: Vec<String>,
}

/// A Hamiltonian serialized with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonianArtifact {
    pub format: String,
    pub variables: VarTable,
    pub terms: Vec<ArtifactTerm>,
    pub provenance: Provenance,
}

/// Hex SHA-256 of a text, as recorded in provenance blocks.
pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl HamiltonianArtifact {
    /// Capture a Hamiltonian. `source_text` is the equation file it was
    /// built from; `transforms` describe what happened to it since.
    pub fn capture(h: &Hamiltonian, source_text: &str, transforms: Vec<String>) -> Self {
        let table = h.table();
        let mut entries: Vec<(Vec<u32>, i64)> = h
            .poly()
            .terms()
            .map(|(m, c)| (m.indices().collect(), c))
            .collect();
        // Same order as the text form: alphabetical by variable sequence,
        // constant last.
        entries.sort_by(|(a, _), (b, _)| {
            if a.is_empty() || b.is_empty() {
                b.len().cmp(&a.len())
            } else {
                a.cmp(b)
            }
        });
        let terms = entries
            .into_iter()
            .map(|(indices, coeff)| ArtifactTerm {
                vars: indices.iter().map(|&i| table.name(i).to_string()).collect(),
                coeff,
            })
            .collect();
        HamiltonianArtifact {
            format: ARTIFACT_FORMAT.to_string(),
            variables: table.clone(),
            terms,
            provenance: Provenance {
                source_sha256: sha256_hex(source_text),
                transforms,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, CoreError> {
        let artifact: HamiltonianArtifact =
            serde_json::from_str(text).map_err(|e| CoreError::InvalidArtifact {
                detail: e.to_string(),
            })?;
        if artifact.format != ARTIFACT_FORMAT {
            return Err(CoreError::InvalidArtifact {
                detail: format!(
                    "unsupported format {:?}; this build reads {ARTIFACT_FORMAT:?}",
                    artifact.format
                ),
            });
        }
        Ok(artifact)
    }

    /// Rebuild the Hamiltonian, validating the term list against the table.
    pub fn hamiltonian(&self) -> Result<Hamiltonian, CoreError> {
        let mut poly = BinaryPolynomial::zero();
        let mut seen = std::collections::BTreeSet::new();
        for term in &self.terms {
            if term.coeff == 0 {
                return Err(CoreError::InvalidArtifact {
                    detail: "term with coefficient 0".into(),
                });
            }
            let mut indices = Vec::with_capacity(term.vars.len());
            for name in &term.vars {
                let index = self.variables.index_of(name).ok_or_else(|| {
                    CoreError::InvalidArtifact {
                        detail: format!("term references unknown variable {name:?}"),
                    }
                })?;
                if indices.contains(&index) {
                    return Err(CoreError::InvalidArtifact {
                        detail: format!("variable {name:?} repeated within one term"),
                    });
                }
                indices.push(index);
            }
            let monomial = Monomial::from_indices(indices)?;
            if !seen.insert(monomial) {
                return Err(CoreError::InvalidArtifact {
                    detail: "duplicate term in artifact".into(),
                });
            }
            poly = poly.add(&BinaryPolynomial::from_terms([(monomial, term.coeff)])?)?;
        }
        Hamiltonian::new(self.variables.clone(), poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::EquationSystem;

    fn toy() -> (EquationSystem, Hamiltonian) {
        let text = "x1 + x2 = x3 + 1\nx1 + x1*x2 = 2*x2*x3 + x2 + 1\n";
        let sys = EquationSystem::parse(text).unwrap();
        let h = sys.to_hamiltonian(None).unwrap();
        (sys, h)
    }

    #[test]
    fn capture_and_rebuild_round_trip() {
        let (sys, h) = toy();
        let artifact = HamiltonianArtifact::capture(
            &h,
            &sys.to_text(),
            vec!["uniform weights".to_string()],
        );
        let json = artifact.to_json();
        let back = HamiltonianArtifact::from_json(&json).unwrap();
        assert_eq!(back, artifact);
        let rebuilt = back.hamiltonian().unwrap();
        assert_eq!(rebuilt.poly(), h.poly());
        assert_eq!(rebuilt.table(), h.table());
        assert_eq!(back.provenance.transforms, ["uniform weights"]);
    }

    #[test]
    fn hash_is_stable_and_text_sensitive() {
        let a = sha256_hex("p1 + q1 = 1\n");
        assert_eq!(a.len(), 64);
        assert_eq!(a, sha256_hex("p1 + q1 = 1\n"));
        assert_ne!(a, sha256_hex("p1 + q1 = 2\n"));
    }

    #[test]
    fn malformed_artifacts_are_rejected() {
        let (sys, h) = toy();
        let good = HamiltonianArtifact::capture(&h, &sys.to_text(), Vec::new());

        let mut wrong_format = good.clone();
        wrong_format.format = "elmkit/hamiltonian-v0".into();
        let err = HamiltonianArtifact::from_json(&wrong_format.to_json()).unwrap_err();
        assert!(matches!(err, CoreError::InvalidArtifact { .. }));

        let mut zero_coeff = good.clone();
        zero_coeff.terms[0].coeff = 0;
        assert!(zero_coeff.hamiltonian().is_err());

        let mut stray_var = good.clone();
        stray_var.terms[0].vars = vec!["nope".into()];
        assert!(stray_var.hamiltonian().is_err());

        let mut repeated = good.clone();
        let first = repeated.terms[0].clone();
        repeated.terms.push(first);
        assert!(repeated.hamiltonian().is_err());

        // Unsorted variable tables never deserialize.
        let json = good.to_json().replace("\"x1\",", "\"x9\",");
        assert!(HamiltonianArtifact::from_json(&json).is_err());
    }
}
