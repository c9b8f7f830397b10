//! End-to-end reproductions of the broken k-diamond congruence families.
//!
//! `Delta_k(n)` counts broken k-diamond partitions and has generating function
//! `f_2 f_l / (f_1^3 f_{2l})` with `l = 2k + 1`, where `f_d = (q^d; q^d)_inf`.
//! Writing it as `(f_2 / f_1^3) (f_l / f_{2l})` separates the `b(n)` series
//! from a factor supported on multiples of `l`; congruences for `b` on a
//! progression modulo `m` lift to `Delta_k` whenever `m | l`.

mod elementary;
pub mod instances;
mod report;
mod theorems;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dissect::{first_nonzero_in_progression, DissectError};
use crate::eta::{expand_eta_quotient, EtaQuotientSpec};
use crate::finite_check::{FiniteCheckError, InstanceError};
use crate::series::TruncatedSeries;

pub use elementary::{
    check_class_absent, elementary_mod5_proof, step_absence, step_binomial_lemma, step_class4_extraction,
    step_conclusion, step_jacobi_support, step_progression_identity, step_psi_dissection,
    step_reduction,
};
pub use report::{ProofReport, ProofStep, StepStatus, StepWitness, TheoremId};
pub use theorems::{default_order, regression_suite, run_theorem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    FiniteCheck(#[from] FiniteCheckError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("k must be positive")]
pub struct BrokenDiamondError;

/// The diamond parameter `k`, with `l = 2k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BrokenDiamondSpec {
    k: u64,
}

impl BrokenDiamondSpec {
    pub fn new(k: u64) -> Result<Self, BrokenDiamondError> {
        if k == 0 {
            return Err(BrokenDiamondError);
        }
        Ok(BrokenDiamondSpec { k })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn ell(&self) -> u64 {
        2 * self.k + 1
    }

    /// `{1: -3, 2: 1, l: 1, 2l: -1}`.
    pub fn eta_spec(&self) -> EtaQuotientSpec {
        let l = self.ell();
        EtaQuotientSpec::new(2 * l, [(1, -3), (2, 1), (l, 1), (2 * l, -1)])
            .expect("divisors of 2l")
    }
}

/// `sum Delta_k(n) q^n` to the given order.
pub fn broken_k_diamond_series(spec: BrokenDiamondSpec, order: usize) -> TruncatedSeries {
    expand_eta_quotient(&spec.eta_spec(), order)
}

/// `sum b(n) q^n = f_2 / f_1^3`.
pub fn b_series(order: usize) -> TruncatedSeries {
    expand_eta_quotient(&b_spec(), order)
}

pub fn b_spec() -> EtaQuotientSpec {
    EtaQuotientSpec::new(2, [(1, -3), (2, 1)]).expect("valid")
}

/// Coefficients `s(m n + t)` that should vanish modulo `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionFamily {
    pub m: u64,
    pub t: u64,
    pub u: u64,
}

impl ProgressionFamily {
    pub fn new(m: u64, t: u64, u: u64) -> Self {
        ProgressionFamily { m, t, u }
    }

    /// Series order needed to reach `n = n_max`.
    pub fn order_for(&self, n_max: u64) -> usize {
        (self.m * n_max + self.t) as usize
    }
}

/// Scans `s(m n + t)` for every `n` the series determines. Returns the
/// number of coefficients checked, or the first nonzero residue.
pub fn scan_progression(
    s: &TruncatedSeries,
    family: ProgressionFamily,
) -> Result<usize, StepWitness> {
    let (m, t) = (family.m as usize, family.t as usize);
    match first_nonzero_in_progression(s, m, t, family.u) {
        Ok(None) => Ok((s.order() - t) / m + 1),
        Ok(Some((n, residue))) => Err(StepWitness {
            exponent: (m * n + t) as u64,
            value: residue.to_string(),
            detail: format!("coefficient at {m}*{n} + {t} is {residue} mod {}", family.u),
        }),
        Err(DissectError::InsufficientOrder { order, .. }) => Err(StepWitness {
            exponent: t as u64,
            value: String::new(),
            detail: format!("order {order} does not reach the first term {t}"),
        }),
        Err(e) => Err(StepWitness {
            exponent: t as u64,
            value: String::new(),
            detail: e.to_string(),
        }),
    }
}

/// First exponent where `a` and `b` differ modulo `u` (exactly when `u` is `None`).
pub(crate) fn compare(a: &TruncatedSeries, b: &TruncatedSeries, u: Option<u64>) -> Result<(), StepWitness> {
    let diff = a - b;
    let diff = match u {
        Some(u) => diff.reduce_mod(u),
        None => diff,
    };
    match diff.first_nonzero() {
        None => Ok(()),
        Some(e) => Err(StepWitness {
            exponent: e as u64,
            value: diff.coeff(e).to_string(),
            detail: match u {
                Some(u) => format!("series differ mod {u} at q^{e}"),
                None => format!("series differ at q^{e}"),
            },
        }),
    }
}

/// Lifts `b(m n + t) = 0 (mod u)` to `Delta_k(m n + t) = 0 (mod u)`.
///
/// Needs `ell_multiple | 2k + 1` and `m | ell_multiple`, so that `f_l / f_{2l}`
/// only shifts exponents by multiples of `m`. Checks that the spectator
/// factor is supported on multiples of `l`, that the generating function
/// factors exactly, and scans `Delta_k` on the progression up to `order`.
pub fn lift_congruence(
    family: ProgressionFamily,
    ell_multiple: u64,
    spec: BrokenDiamondSpec,
    order: usize,
) -> Result<ProofStep, PipelineError> {
    let ell = spec.ell();
    if ell_multiple == 0 || !ell.is_multiple_of(ell_multiple) {
        return Err(PipelineError::PreconditionViolated(format!(
            "2k+1 = {ell} is not divisible by {ell_multiple}"
        )));
    }
    if !ell_multiple.is_multiple_of(family.m) {
        return Err(PipelineError::PreconditionViolated(format!(
            "{ell_multiple} is not a multiple of the progression modulus {}",
            family.m
        )));
    }
    let name = format!("lift k={} {}n+{} mod {}", spec.k(), family.m, family.t, family.u);

    let spectator_spec = EtaQuotientSpec::new(2 * ell, [(ell, 1), (2 * ell, -1)]).expect("valid");
    let spectator = expand_eta_quotient(&spectator_spec, order);
    if let Some(e) = spectator.support().find(|&e| !(e as u64).is_multiple_of(ell)) {
        return Ok(ProofStep::fail(
            name,
            order,
            StepWitness {
                exponent: e as u64,
                value: spectator.coeff(e).to_string(),
                detail: format!("f_l/f_2l has a term off the multiples of {ell}"),
            },
        ));
    }

    let delta = broken_k_diamond_series(spec, order);
    if let Err(w) = compare(&delta, &(&b_series(order) * &spectator), None) {
        return Ok(ProofStep::fail(name, order, w));
    }

    Ok(match scan_progression(&delta, family) {
        Ok(count) => ProofStep::pass(name, order).with_note(format!(
            "factor f_{ell}/f_{} supported on multiples of {ell}; {count} coefficients scanned",
            2 * ell
        )),
        Err(w) => ProofStep::fail(name, order, w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn delta_k_constant_term() {
        for k in [1, 2, 3, 12, 62] {
            let s = broken_k_diamond_series(BrokenDiamondSpec::new(k).unwrap(), 10);
            assert_eq!(s.coeff(0), &BigInt::from(1));
        }
        assert!(BrokenDiamondSpec::new(0).is_err());
    }

    #[test]
    fn b_starts_with_one() {
        assert_eq!(b_series(0), TruncatedSeries::one(0));
        // f2/f1^3 = 1 + 3q + 8q^2 + 19q^3 + ...
        assert_eq!(b_series(3), TruncatedSeries::from_i64s(&[1, 3, 8, 19]));
    }

    #[test]
    fn scan_reports_counts_and_witnesses() {
        let s = TruncatedSeries::from_i64s(&[5, 1, 10, 2, 3]);
        assert_eq!(scan_progression(&s, ProgressionFamily::new(2, 0, 5)), Err(StepWitness {
            exponent: 4,
            value: "3".into(),
            detail: "coefficient at 2*2 + 0 is 3 mod 5".into(),
        }));
        assert_eq!(scan_progression(&s.truncate(3), ProgressionFamily::new(2, 0, 5)), Ok(2));
        assert!(scan_progression(&s, ProgressionFamily::new(10, 7, 5)).is_err());
    }

    #[test]
    fn lift_rejects_bad_parameters() {
        let fam = ProgressionFamily::new(125, 99, 25);
        let k63 = BrokenDiamondSpec::new(63).unwrap();
        assert!(matches!(
            lift_congruence(fam, 125, k63, 200),
            Err(PipelineError::PreconditionViolated(_))
        ));
        let k62 = BrokenDiamondSpec::new(62).unwrap();
        assert!(matches!(
            lift_congruence(fam, 5, k62, 200),
            Err(PipelineError::PreconditionViolated(_))
        ));
    }
}
