//! Admissibility conditions on `(m, M, N, t, r)` under which the finite-check
//! lemma applies.
//!
//! The six conditions are restated from Radu and Sellers (2011) and are not
//! derived here. Certificates mark them as externally sourced.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{divisors, kappa, RsInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaStarCondition {
    pub id: u8,
    pub description: String,
    pub holds: bool,
}

fn cond(id: u8, description: &str, holds: bool) -> DeltaStarCondition {
    DeltaStarCondition {
        id,
        description: description.to_string(),
        holds,
    }
}

pub fn delta_star_conditions(inst: &RsInstance) -> Vec<DeltaStarCondition> {
    let m = inst.m() as i128;
    let n = inst.group_level() as i128;
    let t = inst.t() as i128;
    let k = kappa(inst.m()) as i128;
    let r = inst.r();

    let c1 = divisors(inst.m())
        .into_iter()
        .filter(|&p| p > 1 && is_prime(p))
        .all(|p| n % p as i128 == 0);

    let c2 = r.entries().all(|(d, _)| (m * n) % d as i128 == 0);

    let c3 = c2 && {
        let s: i128 = r.entries().map(|(d, e)| e as i128 * (m * n / d as i128)).sum();
        (k * n * s).rem_euclid(24) == 0
    };

    let c4 = (k * n * r.exponent_sum() as i128).rem_euclid(8) == 0;

    let c5 = {
        let big = 24 * m;
        let g = (-24 * k * t - k * r.weighted_sum() as i128).abs().gcd(&big);
        n % (big / g) == 0
    };

    let c6 = if m % 2 == 0 {
        let (s, j_mod8) = two_adic_split(inst);
        let s = s as i128;
        let first = (k * n) % 4 == 0 && (s * n) % 8 == 0;
        let second = s % 2 == 0 && ((1 - j_mod8 as i128) * n).rem_euclid(8) == 0;
        first || second
    } else {
        true
    };

    vec![
        cond(1, "every prime dividing m divides N", c1),
        cond(2, "every delta with r_delta != 0 divides m N", c2),
        cond(3, "kappa N sum r_delta m N / delta = 0 (mod 24)", c3),
        cond(4, "kappa N sum r_delta = 0 (mod 8)", c4),
        cond(5, "24 m / gcd(-24 kappa t - kappa sum delta r_delta, 24 m) divides N", c5),
        cond(6, "if 2 | m: (4 | kappa N and 8 | s N) or (2 | s and 8 | (1 - j) N)", c6),
    ]
}

/// `prod delta^|r_delta| = 2^s j` with `j` odd; returns `(s, j mod 8)`.
fn two_adic_split(inst: &RsInstance) -> (u64, u64) {
    let mut s = 0u64;
    let mut j = 1u64;
    for (d, e) in inst.r().entries() {
        let tz = d.trailing_zeros();
        s += tz as u64 * e.unsigned_abs();
        let odd = (d >> tz) % 8;
        for _ in 0..e.unsigned_abs() {
            j = j * odd % 8;
        }
    }
    (s, j)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_hold(inst: &RsInstance) -> bool {
        delta_star_conditions(inst).iter().all(|c| c.holds)
    }

    #[test]
    fn published_instances_are_admissible() {
        let mod25 = RsInstance::new(125, 10, 10, 99, &[(1, 22), (2, 1), (5, -5)], &[(1, 13)], 25).unwrap();
        assert!(all_hold(&mod25));
        for t in [33, 47] {
            let mod7 = RsInstance::new(49, 14, 14, t, &[(1, 4), (2, 1), (7, -1)], &[(1, 3)], 7).unwrap();
            assert!(all_hold(&mod7));
        }
        let mod49 = RsInstance::new(343, 14, 14, 96, &[(1, 46), (2, 1), (7, -7)], &[(1, 18)], 49).unwrap();
        assert!(all_hold(&mod49));
    }

    #[test]
    fn prime_of_m_missing_from_n() {
        // 5 | m but 5 does not divide N = 14
        let inst = RsInstance::new(5, 2, 14, 4, &[(1, -1), (2, 1)], &[(1, 1)], 5).unwrap();
        let conds = delta_star_conditions(&inst);
        assert!(!conds[0].holds);
    }

    #[test]
    fn residue_condition_needs_the_full_level() {
        // m = 25, r = {1: 1}, t = 0: gcd(-24, 600) = 24, and 600 / 24 = 25 does not divide N = 5
        let inst = RsInstance::new(25, 1, 5, 0, &[(1, 1)], &[], 5).unwrap();
        let conds = delta_star_conditions(&inst);
        assert!(conds[0].holds);
        assert!(!conds[4].holds);
        let wider = RsInstance::new(25, 1, 25, 0, &[(1, 1)], &[], 5).unwrap();
        assert!(delta_star_conditions(&wider)[4].holds);
    }

    #[test]
    fn even_modulus_uses_two_adic_condition() {
        let inst = RsInstance::new(2, 2, 2, 1, &[(1, -1), (2, 1)], &[], 2).unwrap();
        let (s, j) = two_adic_split(&inst);
        assert_eq!((s, j), (1, 1));
        let conds = delta_star_conditions(&inst);
        // kappa(2) = 3, N = 2: 4 does not divide 6 and s = 1 is odd
        assert!(!conds[5].holds);
    }
}
