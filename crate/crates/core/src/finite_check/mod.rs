//! Finite-check verification of coefficient congruences for eta quotients.
//!
//! Given `f_r(q) = sum c_r(n) q^n` and a residue `t` modulo `m`, the family
//! `c_r(m n + t')` for `t'` in the orbit `P_{m,r}(t)` vanishes modulo `u` for
//! every `n` once it vanishes for `n <= floor(v)`, provided the cusp sums
//! `p_{m,r}(gamma) + p*_{r'}(gamma)` are nonnegative at a complete set of
//! double coset representatives of `Gamma_0(N) \ Gamma / Gamma_inf`.
//! This module computes every constant in exact arithmetic, runs the finite
//! check and emits an [`RsCertificate`].

mod certificate;
mod delta_star;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::eta::{expand_eta_quotient, EtaQuotientSpec, EtaSpecError};

pub use certificate::{
    replay_certificate, CertificateStatus, CuspRow, DeltaStarAudit, DeltaStarMode, ReplayError,
    ResidueRow, RsCertificate, VBoundRecord, Witness, SCHEMA_VERSION,
};
pub use delta_star::{delta_star_conditions, DeltaStarCondition};

pub const DEFAULT_ORDER_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("progression modulus m must be positive")]
    ZeroModulus,
    #[error("group level N must be positive")]
    ZeroGroupLevel,
    #[error("residue t = {t} is not in 0..{m}")]
    ResidueOutOfRange { t: u64, m: u64 },
    #[error("congruence modulus u = {0} must be at least 2")]
    CongruenceModulus(u64),
    #[error("r: {0}")]
    R(EtaSpecError),
    #[error("r': {0}")]
    RPrime(EtaSpecError),
    #[error("r' has level {found}, expected the group level {expected}")]
    RPrimeLevel { found: u64, expected: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteCheckError {
    #[error("square unit s = {s} modulo 24m is not 1 modulo 24")]
    InternalAssertion { s: u64 },
    #[error("cusp sum at gamma_{delta} is {value} < 0; the finite-check lemma does not apply")]
    HypothesisViolation { delta: u64, value: String },
    #[error("c_r({m}*{n} + {t_prime}) = {residue} (mod {u}), not 0")]
    CoefficientNonzero {
        m: u64,
        t_prime: u64,
        n: u64,
        residue: String,
        u: u64,
    },
    #[error("instance failed the membership conditions {failed:?}")]
    DeltaStarUnverified { failed: Vec<u8> },
    #[error("required expansion order {required} exceeds the cap {cap}")]
    OrderCapExceeded { required: u128, cap: usize },
    #[error("check range {requested} is below floor(v) = {v_floor}")]
    InsufficientCheckRange { requested: u64, v_floor: i64 },
    #[error("value {0} does not fit the certificate's 64-bit fields")]
    Overflow(String),
}

/// One finite-check problem `(m, M, N, t, r, r', u)`; `M` is the level of `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceWire", into = "InstanceWire")]
pub struct RsInstance {
    m: u64,
    group_level: u64,
    t: u64,
    r: EtaQuotientSpec,
    r_prime: EtaQuotientSpec,
    u: u64,
}

impl RsInstance {
    pub fn new(
        m: u64,
        eta_level: u64,
        group_level: u64,
        t: u64,
        r: &[(u64, i64)],
        r_prime: &[(u64, i64)],
        u: u64,
    ) -> Result<Self, InstanceError> {
        let r = EtaQuotientSpec::new(eta_level, r.iter().copied()).map_err(InstanceError::R)?;
        if group_level == 0 {
            return Err(InstanceError::ZeroGroupLevel);
        }
        let r_prime = EtaQuotientSpec::new(group_level, r_prime.iter().copied())
            .map_err(InstanceError::RPrime)?;
        Self::from_specs(m, t, r, r_prime, u)
    }

    /// The group level `N` is taken from `r_prime`.
    pub fn from_specs(
        m: u64,
        t: u64,
        r: EtaQuotientSpec,
        r_prime: EtaQuotientSpec,
        u: u64,
    ) -> Result<Self, InstanceError> {
        if m == 0 {
            return Err(InstanceError::ZeroModulus);
        }
        if t >= m {
            return Err(InstanceError::ResidueOutOfRange { t, m });
        }
        if u < 2 {
            return Err(InstanceError::CongruenceModulus(u));
        }
        Ok(RsInstance {
            m,
            group_level: r_prime.level(),
            t,
            r,
            r_prime,
            u,
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `M`, the level of `r`.
    pub fn eta_level(&self) -> u64 {
        self.r.level()
    }

    /// `N`, the level of the congruence subgroup.
    pub fn group_level(&self) -> u64 {
        self.group_level
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn r(&self) -> &EtaQuotientSpec {
        &self.r
    }

    pub fn r_prime(&self) -> &EtaQuotientSpec {
        &self.r_prime
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    /// Same instance with another starting residue.
    pub fn with_t(&self, t: u64) -> Result<Self, InstanceError> {
        Self::from_specs(self.m, t, self.r.clone(), self.r_prime.clone(), self.u)
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceWire {
    m: u64,
    #[serde(rename = "M")]
    eta_level: u64,
    #[serde(rename = "N")]
    group_level: u64,
    t: u64,
    r: std::collections::BTreeMap<String, i64>,
    r_prime: std::collections::BTreeMap<String, i64>,
    u: u64,
}

impl From<RsInstance> for InstanceWire {
    fn from(inst: RsInstance) -> Self {
        let map = |s: &EtaQuotientSpec| s.entries().map(|(d, r)| (d.to_string(), r)).collect();
        InstanceWire {
            m: inst.m,
            eta_level: inst.r.level(),
            group_level: inst.group_level,
            t: inst.t,
            r: map(&inst.r),
            r_prime: map(&inst.r_prime),
            u: inst.u,
        }
    }
}

impl TryFrom<InstanceWire> for RsInstance {
    type Error = String;

    fn try_from(w: InstanceWire) -> Result<Self, Self::Error> {
        let pairs = |m: &std::collections::BTreeMap<String, i64>| {
            m.iter()
                .map(|(d, &r)| d.parse::<u64>().map(|d| (d, r)).map_err(|e| format!("divisor {d:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()
        };
        RsInstance::new(w.m, w.eta_level, w.group_level, w.t, &pairs(&w.r)?, &pairs(&w.r_prime)?, w.u)
            .map_err(|e| e.to_string())
    }
}

/// A matrix `(a b; c d)` of determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRep {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("determinant of ({a} {b}; {c} {d}) is not 1")]
pub struct DeterminantError {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CosetRep {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, DeterminantError> {
        if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
            return Err(DeterminantError { a, b, c, d });
        }
        Ok(CosetRep { a, b, c, d })
    }

    /// `gamma_delta = (1 0; delta 1)`.
    pub fn lower(delta: u64) -> Self {
        CosetRep {
            a: 1,
            b: 0,
            c: delta as i64,
            d: 1,
        }
    }

    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn distinct_primes(mut n: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            primes.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}

/// `kappa(m) = gcd(m^2 - 1, 24)`.
pub fn kappa(m: u64) -> u64 {
    let r = m % 24;
    let x = (r * r + 23) % 24;
    x.gcd(&24)
}

/// Orbit of `t` under `t -> t s + (s - 1)/24 * sum delta r_delta (mod m)` as
/// `s` runs over the squares of units modulo `24m`.
pub fn compute_p_set(instance: &RsInstance) -> Result<BTreeSet<u64>, FiniteCheckError> {
    let m = instance.m as u128;
    let big = 24 * m;
    let w = instance.r.weighted_sum() as i128;
    let squares: BTreeSet<u128> = (1..big)
        .filter(|x| x.gcd(&big) == 1)
        .map(|x| x * x % big)
        .collect();
    let mut out = BTreeSet::new();
    for s in squares {
        if s % 24 != 1 {
            return Err(FiniteCheckError::InternalAssertion { s: s as u64 });
        }
        let shift = ((s - 1) / 24) as i128 * w;
        let t_prime = (instance.t as i128 * s as i128 + shift).rem_euclid(m as i128);
        out.insert(t_prime as u64);
    }
    Ok(out)
}

/// `[Gamma : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)`.
pub fn index_gamma0(n: u64) -> u64 {
    assert!(n >= 1, "level must be positive");
    distinct_primes(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p + 1))
}

/// `{gamma_delta : delta | N}`.
pub fn coset_representatives(n: u64) -> Vec<CosetRep> {
    divisors(n).into_iter().map(CosetRep::lower).collect()
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `p_{m,r}(gamma) = min_{lambda in 0..m} 1/24 sum_delta r_delta gcd^2(delta (a + kappa lambda c), m c) / (delta m)`.
pub fn p_min(instance: &RsInstance, gamma: &CosetRep) -> BigRational {
    let m = instance.m as i128;
    let k = kappa(instance.m) as i128;
    let (a, _, c, _) = gamma.entries();
    let (a, c) = (a as i128, c as i128);
    let mc = (m * c).abs();
    (0..m)
        .map(|lambda| {
            instance
                .r
                .entries()
                .map(|(delta, r)| {
                    let delta = delta as i128;
                    let g = (delta * (a + k * lambda * c)).abs().gcd(&mc);
                    ratio(BigInt::from(r) * BigInt::from(g * g), BigInt::from(delta * m))
                })
                .fold(BigRational::zero(), |acc, x| acc + x)
                / ratio(24, 1)
        })
        .min()
        .unwrap_or_else(BigRational::zero)
}

/// `p*_{r'}(gamma) = 1/24 sum_{delta | N} r'_delta gcd^2(delta, c) / delta`.
pub fn p_star(instance: &RsInstance, gamma: &CosetRep) -> BigRational {
    let (_, _, c, _) = gamma.entries();
    let c = c.unsigned_abs();
    instance
        .r_prime
        .entries()
        .map(|(delta, r)| {
            let g = delta.gcd(&c) as i128;
            ratio(BigInt::from(r) * BigInt::from(g * g), BigInt::from(delta))
        })
        .fold(BigRational::zero(), |acc, x| acc + x)
        / ratio(24, 1)
}

/// The bound `v` and its floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VBound {
    pub exact: BigRational,
    pub floor: i64,
}

/// `v = 1/24 ((sum r + sum r') [Gamma : Gamma_0(N)] - sum delta r'_delta)
///      - 1/(24 m) sum delta r_delta - t_min / m`.
pub fn v_bound_for(instance: &RsInstance, t_min: u64) -> Result<VBound, FiniteCheckError> {
    let index = index_gamma0(instance.group_level) as i128;
    let sums = (instance.r.exponent_sum() + instance.r_prime.exponent_sum()) as i128;
    let m = instance.m as i128;
    let exact = ratio(sums * index - instance.r_prime.weighted_sum() as i128, 24)
        - ratio(instance.r.weighted_sum(), 24 * m)
        - ratio(t_min, m);
    let floor = exact.floor().to_integer();
    let floor = floor
        .to_i64()
        .ok_or_else(|| FiniteCheckError::Overflow(floor.to_string()))?;
    Ok(VBound { exact, floor })
}

pub fn v_bound(instance: &RsInstance) -> Result<VBound, FiniteCheckError> {
    let p_set = compute_p_set(instance)?;
    let t_min = *p_set.first().expect("the orbit contains t");
    v_bound_for(instance, t_min)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub delta_star: DeltaStarMode,
    pub order_cap: usize,
    /// Check `n` up to this bound instead of `floor(v)`; must not be smaller.
    pub check_upto: Option<u64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            delta_star: DeltaStarMode::Strict,
            order_cap: DEFAULT_ORDER_CAP,
            check_upto: None,
        }
    }
}

fn to_i64(x: &BigInt) -> Result<i64, FiniteCheckError> {
    x.to_i64().ok_or_else(|| FiniteCheckError::Overflow(x.to_string()))
}

/// Runs the whole finite check and returns a certificate whose `status`
/// says whether the family is proved. Structural problems (order cap,
/// overflow, a bad check range) are errors instead.
pub fn verify_instance(
    instance: &RsInstance,
    options: &VerifyOptions,
) -> Result<RsCertificate, FiniteCheckError> {
    let kappa = kappa(instance.m);
    let p_set: Vec<u64> = compute_p_set(instance)?.into_iter().collect();
    let t_min = p_set[0];
    let t_max = *p_set.last().expect("nonempty");
    let index = index_gamma0(instance.group_level);

    let mut cusp_table = Vec::new();
    let mut witness = None;
    for gamma in coset_representatives(instance.group_level) {
        let pm = p_min(instance, &gamma);
        let ps = p_star(instance, &gamma);
        let total = &pm + &ps;
        let delta = gamma.entries().2 as u64;
        if total.is_negative() && witness.is_none() {
            witness = Some(Witness::Cusp {
                delta,
                sum_num: to_i64(total.numer())?,
                sum_den: to_i64(total.denom())?,
            });
        }
        cusp_table.push(CuspRow {
            delta,
            p_min_num: to_i64(pm.numer())?,
            p_min_den: to_i64(pm.denom())?,
            p_star_num: to_i64(ps.numer())?,
            p_star_den: to_i64(ps.denom())?,
        });
    }
    let hypothesis_ok = witness.is_none();

    let v = v_bound_for(instance, t_min)?;
    let v_record = VBoundRecord {
        num: to_i64(v.exact.numer())?,
        den: to_i64(v.exact.denom())?,
        floor: v.floor,
    };

    let audit = DeltaStarAudit::evaluate(instance, options.delta_star);

    let mut cert = RsCertificate {
        schema_version: SCHEMA_VERSION,
        instance: instance.clone(),
        kappa,
        p_set: p_set.clone(),
        t_min,
        index,
        cusp_table,
        v: v_record,
        checked_upto: None,
        expansion_order: None,
        residues: Vec::new(),
        delta_star: audit,
        status: CertificateStatus::HypothesisViolation,
        witness,
        series_hash: None,
    };
    if !hypothesis_ok {
        return Ok(cert);
    }

    let upto = match options.check_upto {
        Some(requested) if (requested as i128) < v.floor as i128 => {
            return Err(FiniteCheckError::InsufficientCheckRange {
                requested,
                v_floor: v.floor,
            })
        }
        Some(requested) => Some(requested),
        None if v.floor >= 0 => Some(v.floor as u64),
        None => None,
    };

    let mut hasher = Sha256::new();
    if let Some(upto) = upto {
        let required = instance.m as u128 * upto as u128 + t_max as u128;
        if required > options.order_cap as u128 {
            return Err(FiniteCheckError::OrderCapExceeded {
                required,
                cap: options.order_cap,
            });
        }
        let order = required as usize;
        let series = expand_eta_quotient(&instance.r, order).reduce_mod(instance.u);
        for &tp in &p_set {
            let mut ok = Vec::with_capacity(upto as usize + 1);
            for n in 0..=upto {
                let e = (instance.m * n + tp) as usize;
                let c = series.coeff(e);
                hasher.update(format!("{tp}:{n}:{c}\n").as_bytes());
                let zero = c.is_zero();
                if !zero && cert.witness.is_none() {
                    cert.witness = Some(Witness::Coefficient {
                        t_prime: tp,
                        n,
                        exponent: e as u64,
                        residue: c.to_string(),
                    });
                }
                ok.push(zero);
            }
            cert.residues.push(ResidueRow { t_prime: tp, ok });
        }
        cert.checked_upto = Some(upto);
        cert.expansion_order = Some(order as u64);
    }
    cert.series_hash = Some(hex::encode(hasher.finalize()));

    cert.status = if cert.witness.is_some() {
        CertificateStatus::Counterexample
    } else if options.delta_star == DeltaStarMode::Strict && cert.delta_star.holds == Some(false) {
        CertificateStatus::DeltaStarUnverified
    } else {
        CertificateStatus::Verified
    };
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mod25() -> RsInstance {
        RsInstance::new(125, 10, 10, 99, &[(1, 22), (2, 1), (5, -5), (10, 0)], &[(1, 13)], 25).unwrap()
    }

    fn mod7(t: u64) -> RsInstance {
        RsInstance::new(49, 14, 14, t, &[(1, 4), (2, 1), (7, -1), (14, 0)], &[(1, 3)], 7).unwrap()
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(125), 24);
        assert_eq!(kappa(2), 3);
        assert_eq!(kappa(1), 24);
        assert_eq!(kappa(49), 24);
        assert_eq!(kappa(343), 24);
        for m in 1..200u64 {
            assert_eq!(kappa(m), (m * m - 1).gcd(&24), "m = {m}");
        }
    }

    #[test]
    fn index_examples() {
        assert_eq!(index_gamma0(1), 1);
        assert_eq!(index_gamma0(14), 24);
        assert_eq!(index_gamma0(10), 18);
        assert_eq!(index_gamma0(4), 6);
        assert_eq!(index_gamma0(25), 30);
    }

    #[test]
    fn representatives() {
        let reps = coset_representatives(14);
        let lower: Vec<i64> = reps.iter().map(|g| g.entries().2).collect();
        assert_eq!(lower, vec![1, 2, 7, 14]);
        assert_eq!(coset_representatives(1), vec![CosetRep::new(1, 0, 1, 1).unwrap()]);
        for g in coset_representatives(360) {
            let (a, b, c, d) = g.entries();
            assert_eq!(a * d - b * c, 1);
        }
        assert!(CosetRep::new(2, 1, 1, 2).is_err());
    }

    #[test]
    fn p_set_examples() {
        assert_eq!(compute_p_set(&mod25()).unwrap().into_iter().collect::<Vec<_>>(), vec![99]);
        assert_eq!(compute_p_set(&mod7(33)).unwrap().into_iter().collect::<Vec<_>>(), vec![19, 33, 40]);
        assert_eq!(compute_p_set(&mod7(47)).unwrap().into_iter().collect::<Vec<_>>(), vec![47]);
    }

    #[test]
    fn cusp_sum_examples() {
        let unit = RsInstance::new(1, 1, 1, 0, &[(1, 1)], &[], 2).unwrap();
        assert_eq!(p_min(&unit, &CosetRep::lower(1)), ratio(1, 24));
        let empty = RsInstance::new(5, 1, 10, 0, &[], &[], 5).unwrap();
        assert!(p_min(&empty, &CosetRep::lower(2)).is_zero());
        assert!(p_star(&empty, &CosetRep::lower(2)).is_zero());
        assert_eq!(p_star(&mod25(), &CosetRep::lower(10)), ratio(13, 24));
        assert_eq!(p_star(&mod7(33), &CosetRep::lower(14)), ratio(1, 8));
    }

    #[test]
    fn v_examples() {
        assert_eq!(v_bound(&mod25()).unwrap().floor, 21);
        assert_eq!(v_bound(&mod7(33)).unwrap().floor, 6);
    }

    #[test]
    fn negative_v_checks_nothing() {
        // all-zero r and r' give v = -t_min/m, below zero for t > 0
        let inst = RsInstance::new(5, 1, 5, 3, &[], &[], 5).unwrap();
        let cert = verify_instance(&inst, &VerifyOptions { delta_star: DeltaStarMode::Assume, ..Default::default() }).unwrap();
        assert_eq!(cert.v.floor, -1);
        assert_eq!(cert.checked_upto, None);
        assert_eq!(cert.status, CertificateStatus::Verified);
    }

    #[test]
    fn order_cap_is_enforced() {
        let opts = VerifyOptions {
            order_cap: 100,
            ..Default::default()
        };
        assert_eq!(
            verify_instance(&mod25(), &opts),
            Err(FiniteCheckError::OrderCapExceeded { required: 2724, cap: 100 })
        );
    }

    #[test]
    fn check_range_cannot_undercut_v() {
        let opts = VerifyOptions {
            check_upto: Some(3),
            ..Default::default()
        };
        assert!(matches!(
            verify_instance(&mod25(), &opts),
            Err(FiniteCheckError::InsufficientCheckRange { requested: 3, v_floor: 21 })
        ));
    }

    #[test]
    fn instance_validation() {
        assert_eq!(
            RsInstance::new(10, 10, 10, 10, &[], &[], 5),
            Err(InstanceError::ResidueOutOfRange { t: 10, m: 10 })
        );
        assert!(matches!(
            RsInstance::new(10, 10, 10, 1, &[(3, 1)], &[], 5),
            Err(InstanceError::R(EtaSpecError::NotADivisor { delta: 3, level: 10 }))
        ));
        assert_eq!(RsInstance::new(10, 10, 10, 1, &[], &[], 1), Err(InstanceError::CongruenceModulus(1)));
    }

    #[test]
    fn instance_json() {
        let json = serde_json::to_string(&mod25()).unwrap();
        assert_eq!(
            json,
            r#"{"m":125,"M":10,"N":10,"t":99,"r":{"1":22,"2":1,"5":-5},"r_prime":{"1":13},"u":25}"#
        );
        assert_eq!(serde_json::from_str::<RsInstance>(&json).unwrap(), mod25());
    }
}
