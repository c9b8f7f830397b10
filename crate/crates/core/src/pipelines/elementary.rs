//! The elementary proof of `Delta_k(25n + 24) = 0 (mod 5)` for `2k + 1 = 25j`,
//! checked step by step for `j = 1`.
//!
//! Only the reduction and conclusion involve `j`; the dissection and Jacobi
//! steps are statements about `psi`, `f_1^3` and `f_2^3` alone.

use crate::dissect::{dissect, extract_arithmetic_progression};
use crate::eta::{eta_factor, expand_eta_quotient, EtaQuotientSpec};
use crate::series::TruncatedSeries;
use crate::theta::{jacobi_cube, psi_series, DissectionBlocks};

use super::report::{ProofReport, ProofStep, StepWitness, TheoremId};
use super::{broken_k_diamond_series, compare, scan_progression, BrokenDiamondSpec, ProgressionFamily};

const J_NOTE: &str = "independent of j";

fn eta(pairs: &[(u64, i64)], order: usize) -> TruncatedSeries {
    let spec = EtaQuotientSpec::from_pairs(pairs.iter().copied()).expect("valid eta spec");
    expand_eta_quotient(&spec, order)
}

/// `f_2^5 = f_10 (mod 5)`.
pub fn step_binomial_lemma(order: usize) -> ProofStep {
    let lhs = eta_factor(2, order).pow(5).expect("positive power");
    ProofStep::from_outcome("binomial_lemma", order, compare(&lhs, &eta_factor(10, order), Some(5)))
}

/// `f_2 f_25 / (f_1^3 f_50) = psi^3 / f_10 * f_25 / f_50 (mod 5)` with `j = 1`,
/// after the exact rewrite `f_2 / f_1^3 = psi^3 / f_2^5`.
pub fn step_reduction(order: usize) -> ProofStep {
    let psi = psi_series(1, order);
    let psi3 = &(&psi * &psi) * &psi;
    let exact = &psi3 * &eta(&[(2, -5)], order);
    if let Err(w) = compare(&eta(&[(1, -3), (2, 1)], order), &exact, None) {
        return ProofStep::fail("reduction", order, w);
    }
    let lhs = broken_k_diamond_series(BrokenDiamondSpec::new(12).expect("k > 0"), order);
    let rhs = &psi3 * &eta(&[(10, -1), (25, 1), (50, -1)], order);
    ProofStep::from_outcome("reduction", order, compare(&lhs, &rhs, Some(5)))
        .with_note("checked for j = 1 (k = 12)")
}

/// `psi(q) = a + q b + q^3 c` and `psi(q^5)^2 = a b + q^5 c^2`, exactly.
pub fn step_psi_dissection(order: usize) -> ProofStep {
    let blocks = DissectionBlocks::build(order);
    let psi = psi_series(1, order);
    let psi5 = psi_series(5, order);
    let outcome = compare(&blocks.recombine(), &psi, None)
        .and_then(|_| compare(&blocks.psi5_squared(), &(&psi5 * &psi5), None));
    ProofStep::from_outcome("psi_dissection", order, outcome).with_note(J_NOTE)
}

/// The `q^{5n+4}` part of `psi^3` is `q^4 psi(q^25) psi(q^5)^2 (mod 5)`.
pub fn step_class4_extraction(order: usize) -> ProofStep {
    let psi = psi_series(1, order);
    let psi3 = &(&psi * &psi) * &psi;
    let class4 = dissect(&psi3, 5).class(4).clone();
    let psi5 = psi_series(5, order);
    let target = (&psi_series(25, order) * &(&psi5 * &psi5)).shift(4);
    ProofStep::from_outcome("dissection", order, compare(&class4, &target, Some(5))).with_note(J_NOTE)
}

/// `sum Delta_12(5n + 4) q^n = psi(q^5) f_5/f_10 * f_1^3 f_2^3 / f_5 (mod 5)`.
pub fn step_progression_identity(order: usize) -> ProofStep {
    let delta = broken_k_diamond_series(BrokenDiamondSpec::new(12).expect("k > 0"), order);
    let lhs = extract_arithmetic_progression(&delta, 5, 4).expect("order >= 4");
    let n = lhs.order();
    let cube = jacobi_cube(n);
    let cube2 = cube.substitute_q_power_to(2, n);
    let rhs = &(&psi_series(5, n) * &eta(&[(10, -1)], n)) * &(&cube * &cube2);
    ProofStep::from_outcome("progression_identity", n, compare(&lhs, &rhs, Some(5)))
        .with_note("checked for j = 1 (k = 12)")
}

/// `f_1^3` modulo 5 lives on exponent classes {0, 1}; `f_2^3` on {0, 2}.
/// Classes 2 and 4 of `f_1^3` (1 and 3 of `f_2^3`) vanish identically.
pub fn step_jacobi_support(order: usize) -> ProofStep {
    let check = |s: &TruncatedSeries, empty: &[usize], zero_mod5: usize, label: &str| {
        let split = dissect(s, 5);
        for &i in empty {
            if let Some(e) = split.class(i).first_nonzero() {
                return Err(StepWitness {
                    exponent: e as u64,
                    value: s.coeff(e).to_string(),
                    detail: format!("{label} has a term in class {i}"),
                });
            }
        }
        let reduced = split.class(zero_mod5).reduce_mod(5);
        match reduced.first_nonzero() {
            None => Ok(()),
            Some(e) => Err(StepWitness {
                exponent: e as u64,
                value: reduced.coeff(e).to_string(),
                detail: format!("{label} class {zero_mod5} is nonzero mod 5"),
            }),
        }
    };
    let f1_cubed = jacobi_cube(order);
    let f2_cubed = f1_cubed.substitute_q_power_to(2, order);
    let outcome = check(&f1_cubed, &[2, 4], 3, "f1^3").and_then(|_| check(&f2_cubed, &[3, 4], 1, "f2^3"));
    ProofStep::from_outcome("jacobi_support", order, outcome).with_note(J_NOTE)
}

/// No exponent `= class (mod m)` of `series` survives reduction mod `u`.
pub fn check_class_absent(series: &TruncatedSeries, m: usize, class: usize, u: u64) -> Result<(), StepWitness> {
    let reduced = dissect(series, m).class(class).reduce_mod(u);
    match reduced.first_nonzero() {
        None => Ok(()),
        Some(e) => Err(StepWitness {
            exponent: e as u64,
            value: reduced.coeff(e).to_string(),
            detail: format!("term at q^{e} (class {class} mod {m}) is nonzero mod {u}"),
        }),
    }
}

/// `f_1^3 f_2^3 (mod 5)` has no term `q^{5n+4}`.
pub fn step_absence(order: usize) -> ProofStep {
    let f1_cubed = jacobi_cube(order);
    let product = &f1_cubed * &f1_cubed.substitute_q_power_to(2, order);
    ProofStep::from_outcome("absence", order, check_class_absent(&product, 5, 4, 5)).with_note(J_NOTE)
}

/// `Delta_k(25n + 24) = 0 (mod 5)` scanned directly.
pub fn step_conclusion(k: u64, order: usize) -> ProofStep {
    let delta = broken_k_diamond_series(BrokenDiamondSpec::new(k).expect("k > 0"), order);
    let name = if k == 12 { "conclusion".to_string() } else { format!("conclusion k={k}") };
    match scan_progression(&delta, ProgressionFamily::new(25, 24, 5)) {
        Ok(count) => ProofStep::pass(name, order).with_note(format!("{count} coefficients scanned")),
        Err(w) => ProofStep::fail(name, order, w),
    }
}

/// Every step of the elementary mod-5 argument at the given order.
pub fn elementary_mod5_proof(order: usize) -> ProofReport {
    let mut report = ProofReport::new(TheoremId::T1Mod5);
    report.push_step(step_binomial_lemma(order));
    report.push_step(step_reduction(order));
    report.push_step(step_psi_dissection(order));
    report.push_step(step_class4_extraction(order));
    report.push_step(step_progression_identity(order));
    report.push_step(step_jacobi_support(order));
    report.push_step(step_absence(order));
    report.push_step(step_conclusion(12, order));
    report
}
