use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    delta_star_conditions, verify_instance, DeltaStarCondition, FiniteCheckError, RsInstance,
    VerifyOptions,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    Verified,
    HypothesisViolation,
    Counterexample,
    DeltaStarUnverified,
}

/// How the admissibility conditions are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaStarMode {
    /// Record the conditions but never fail on them.
    Assume,
    /// A failed condition turns the certificate status into `delta_star_unverified`.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaStarAudit {
    pub mode: DeltaStarMode,
    /// `None` in assume mode, where the conditions are not evaluated.
    pub holds: Option<bool>,
    pub conditions: Vec<DeltaStarCondition>,
    pub source: String,
}

impl DeltaStarAudit {
    pub(super) fn evaluate(instance: &RsInstance, mode: DeltaStarMode) -> Self {
        let source = "Radu-Sellers 2011, p. 2255 (external)".to_string();
        match mode {
            DeltaStarMode::Assume => DeltaStarAudit {
                mode,
                holds: None,
                conditions: Vec::new(),
                source,
            },
            DeltaStarMode::Strict => {
                let conditions = delta_star_conditions(instance);
                DeltaStarAudit {
                    mode,
                    holds: Some(conditions.iter().all(|c| c.holds)),
                    conditions,
                    source,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspRow {
    pub delta: u64,
    pub p_min_num: i64,
    pub p_min_den: i64,
    pub p_star_num: i64,
    pub p_star_den: i64,
}

impl CuspRow {
    /// Sign of `p_min + p_star`, cross-multiplied over positive denominators.
    pub fn is_nonnegative(&self) -> bool {
        let lhs = self.p_min_num as i128 * self.p_star_den as i128;
        let rhs = self.p_star_num as i128 * self.p_min_den as i128;
        lhs + rhs >= 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VBoundRecord {
    pub num: i64,
    pub den: i64,
    pub floor: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueRow {
    pub t_prime: u64,
    /// `ok[n]` is true when `c_r(m n + t')` vanishes modulo `u`.
    pub ok: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A representative where the cusp sum is negative.
    Cusp {
        delta: u64,
        sum_num: i64,
        sum_den: i64,
    },
    /// A checked coefficient with nonzero residue.
    Coefficient {
        t_prime: u64,
        n: u64,
        exponent: u64,
        residue: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsCertificate {
    pub schema_version: u32,
    pub instance: RsInstance,
    pub kappa: u64,
    pub p_set: Vec<u64>,
    pub t_min: u64,
    pub index: u64,
    pub cusp_table: Vec<CuspRow>,
    pub v: VBoundRecord,
    pub checked_upto: Option<u64>,
    pub expansion_order: Option<u64>,
    pub residues: Vec<ResidueRow>,
    pub delta_star: DeltaStarAudit,
    pub status: CertificateStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub series_hash: Option<String>,
}

impl RsCertificate {
    pub fn is_verified(&self) -> bool {
        self.status == CertificateStatus::Verified
    }

    /// Maps a non-verified status to the matching error.
    pub fn ensure_verified(&self) -> Result<(), FiniteCheckError> {
        match (self.status, &self.witness) {
            (CertificateStatus::Verified, _) => Ok(()),
            (CertificateStatus::HypothesisViolation, Some(Witness::Cusp { delta, sum_num, sum_den })) => {
                Err(FiniteCheckError::HypothesisViolation {
                    delta: *delta,
                    value: format!("{sum_num}/{sum_den}"),
                })
            }
            (CertificateStatus::Counterexample, Some(Witness::Coefficient { t_prime, n, residue, .. })) => {
                Err(FiniteCheckError::CoefficientNonzero {
                    m: self.instance.m(),
                    t_prime: *t_prime,
                    n: *n,
                    residue: residue.clone(),
                    u: self.instance.u(),
                })
            }
            _ => Err(FiniteCheckError::DeltaStarUnverified {
                failed: self
                    .delta_star
                    .conditions
                    .iter()
                    .filter(|c| !c.holds)
                    .map(|c| c.id)
                    .collect(),
            }),
        }
    }

    pub fn all_residues_zero(&self) -> bool {
        self.residues.iter().all(|row| row.ok.iter().all(|&b| b))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("replay failed: {0}")]
    Verify(#[from] FiniteCheckError),
    #[error("certificate differs from a fresh run in: {0:?}")]
    Mismatch(Vec<&'static str>),
}

/// Recomputes a certificate from its instance and compares every field.
pub fn replay_certificate(cert: &RsCertificate, order_cap: usize) -> Result<(), ReplayError> {
    let options = VerifyOptions {
        delta_star: cert.delta_star.mode,
        order_cap,
        check_upto: cert.checked_upto,
    };
    let fresh = verify_instance(&cert.instance, &options)?;
    let mut diff = Vec::new();
    macro_rules! cmp {
        ($($field:ident),*) => {
            $(if fresh.$field != cert.$field { diff.push(stringify!($field)); })*
        };
    }
    cmp!(
        schema_version, kappa, p_set, t_min, index, cusp_table, v, checked_upto,
        expansion_order, residues, delta_star, status, witness, series_hash
    );
    if diff.is_empty() {
        Ok(())
    } else {
        Err(ReplayError::Mismatch(diff))
    }
}
