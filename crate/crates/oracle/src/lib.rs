//! Brute-force reference expansions.
//!
//! Everything here is deliberately naive: schoolbook convolution, literal
//! finite products and long division. None of it shares code with the
//! expansion routines it is used to check.

use etacert::TruncatedSeries;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn from_vec(v: Vec<BigInt>) -> TruncatedSeries {
    TruncatedSeries::from_coeffs(v).expect("nonempty")
}

/// Double-loop convolution truncated to the smaller order.
pub fn naive_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let order = a.order().min(b.order());
    let mut out = vec![BigInt::zero(); order + 1];
    for i in 0..=order {
        for j in 0..=order - i {
            out[i + j] += a.coeff(i) * b.coeff(j);
        }
    }
    from_vec(out)
}

/// Inverse by long division; `a(0)` must be 1.
pub fn naive_invert(a: &TruncatedSeries) -> TruncatedSeries {
    assert!(a.coeff(0).is_one(), "oracle inversion needs constant term 1");
    let order = a.order();
    let mut out = vec![BigInt::zero(); order + 1];
    out[0] = BigInt::one();
    for n in 1..=order {
        let mut acc = BigInt::zero();
        for k in 1..=n {
            acc += a.coeff(k) * &out[n - k];
        }
        out[n] = -acc;
    }
    from_vec(out)
}

/// `prod_{n : delta n <= order} (1 - q^{delta n})`, one factor at a time.
pub fn naive_eta(delta: u64, order: usize) -> TruncatedSeries {
    assert!(delta >= 1);
    let d = delta as usize;
    let mut c = vec![BigInt::zero(); order + 1];
    c[0] = BigInt::one();
    let mut e = d;
    while e <= order {
        let prev = c.clone();
        for i in e..=order {
            c[i] -= &prev[i - e];
        }
        e += d;
    }
    from_vec(c)
}

/// `prod_delta naive_eta(delta)^{r_delta}` built by repeated naive products
/// and quotients, in the order given.
pub fn naive_eta_quotient(pairs: &[(u64, i64)], order: usize) -> TruncatedSeries {
    let mut acc = one(order);
    for &(delta, r) in pairs {
        let base = naive_eta(delta, order);
        let factor = if r < 0 { naive_invert(&base) } else { base };
        for _ in 0..r.unsigned_abs() {
            acc = naive_mul(&acc, &factor);
        }
    }
    acc
}

/// `f_2 f_l / (f_1^3 f_{2l})` with `l = 2k + 1`, left to right.
pub fn naive_delta_k(k: u64, order: usize) -> TruncatedSeries {
    let l = 2 * k + 1;
    naive_eta_quotient(&[(2, 1), (l, 1), (1, -3), (2 * l, -1)], order)
}

fn one(order: usize) -> TruncatedSeries {
    let mut v = vec![BigInt::zero(); order + 1];
    v[0] = BigInt::one();
    from_vec(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_i64s(c)
    }

    #[test]
    fn naive_products() {
        assert_eq!(naive_mul(&s(&[1, 1, 0]), &s(&[1, -1, 0])), s(&[1, 0, -1]));
        assert_eq!(naive_eta(5, 4), s(&[1, 0, 0, 0, 0]));
        assert_eq!(naive_eta(1, 12), s(&[1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]));
        assert_eq!(naive_eta(2, 30), naive_eta(1, 15).substitute_q_power(2));
    }

    #[test]
    fn partitions_and_delta() {
        let p = naive_invert(&naive_eta(1, 10));
        assert_eq!(p, s(&[1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]));
        for k in [1, 2, 3, 12] {
            assert!(naive_delta_k(k, 30).coeff(0).is_one());
        }
        // Delta_2(14) = 0 (mod 5)
        let d2 = naive_delta_k(2, 14);
        assert!((d2.coeff(14) % BigInt::from(5)).is_zero());
    }
}
