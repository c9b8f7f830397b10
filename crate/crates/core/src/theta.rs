//! Ramanujan theta functions `f(q^alpha, q^beta)`, the triple product form,
//! `psi`, Jacobi's cube series and the 5-dissection blocks of `psi(q)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("theta parameters must be positive, got ({alpha}, {beta})")]
pub struct ThetaSpecError {
    pub alpha: u64,
    pub beta: u64,
}

/// `f(a, b)` specialised to `a = q^alpha`, `b = q^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaSpec {
    alpha: u64,
    beta: u64,
}

impl ThetaSpec {
    pub fn new(alpha: u64, beta: u64) -> Result<Self, ThetaSpecError> {
        if alpha == 0 || beta == 0 {
            return Err(ThetaSpecError { alpha, beta });
        }
        Ok(ThetaSpec { alpha, beta })
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    /// Exponent of the `n`-th term, `alpha n(n+1)/2 + beta n(n-1)/2`.
    fn exponent(&self, n: i128) -> u128 {
        let a = self.alpha as i128;
        let b = self.beta as i128;
        (a * n * (n + 1) / 2 + b * n * (n - 1) / 2) as u128
    }
}

/// `sum_{n in Z} q^{alpha n(n+1)/2 + beta n(n-1)/2}` to the given order.
///
/// Both tails are walked independently until their exponent passes the order;
/// for `n >= 0` and `n <= 0` the exponents grow strictly with `|n|`.
pub fn theta_series(spec: ThetaSpec, order: usize) -> TruncatedSeries {
    let limit = order as u128;
    let mut terms = vec![(0usize, 1i64)];
    for dir in [1i128, -1] {
        let mut n = dir;
        loop {
            let e = spec.exponent(n);
            if e > limit {
                break;
            }
            terms.push((e as usize, 1));
            n += dir;
        }
    }
    TruncatedSeries::from_terms(terms, order)
}

/// `(-q^alpha; q^s)_inf (-q^beta; q^s)_inf (q^s; q^s)_inf` with `s = alpha + beta`,
/// built one binomial factor at a time.
pub fn jtp_product(spec: ThetaSpec, order: usize) -> TruncatedSeries {
    let step = (spec.alpha + spec.beta) as usize;
    let mut c = vec![BigInt::zero(); order + 1];
    c[0] = BigInt::one();
    let mut apply = |start: usize, plus: bool| {
        let mut e = start;
        while e <= order {
            for i in (e..=order).rev() {
                let (lo, hi) = c.split_at_mut(i);
                if plus {
                    hi[0] += &lo[i - e];
                } else {
                    hi[0] -= &lo[i - e];
                }
            }
            e += step;
        }
    };
    apply(spec.alpha as usize, true);
    apply(spec.beta as usize, true);
    apply(step, false);
    TruncatedSeries::from_coeffs(c).expect("nonempty")
}

/// `psi(q^scale) = sum_{n >= 0} q^{scale n(n+1)/2}`.
pub fn psi_series(scale: u64, order: usize) -> TruncatedSeries {
    assert!(scale >= 1, "psi scale must be positive");
    let terms = triangular(order, scale).map(|(_, e)| (e, 1i64));
    TruncatedSeries::from_terms(terms, order)
}

/// Jacobi's identity for `(q; q)_inf^3`: `sum_{n >= 0} (-1)^n (2n+1) q^{n(n+1)/2}`.
pub fn jacobi_cube(order: usize) -> TruncatedSeries {
    let terms = triangular(order, 1).map(|(n, e)| {
        let w = 2 * n as i64 + 1;
        (e, if n % 2 == 0 { w } else { -w })
    });
    TruncatedSeries::from_terms(terms, order)
}

/// `(n, scale * n(n+1)/2)` for every exponent not past `order`.
fn triangular(order: usize, scale: u64) -> impl Iterator<Item = (usize, usize)> {
    (0usize..)
        .map(move |n| (n, scale as u128 * (n as u128 * (n as u128 + 1) / 2)))
        .take_while(move |&(_, e)| e <= order as u128)
        .map(|(n, e)| (n, e as usize))
}

/// The pieces of `psi(q) = a + q b + q^3 c`:
/// `a = f(q^10, q^15)`, `b = f(q^5, q^20)`, `c = psi(q^25)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DissectionBlocks {
    pub block_a: TruncatedSeries,
    pub block_b: TruncatedSeries,
    pub block_c: TruncatedSeries,
}

impl DissectionBlocks {
    pub fn build(order: usize) -> Self {
        let spec = |a, b| ThetaSpec::new(a, b).expect("positive parameters");
        DissectionBlocks {
            block_a: theta_series(spec(10, 15), order),
            block_b: theta_series(spec(5, 20), order),
            block_c: psi_series(25, order),
        }
    }

    pub fn order(&self) -> usize {
        self.block_a.order()
    }

    /// `a + q b + q^3 c`, which should reproduce `psi(q)`.
    pub fn recombine(&self) -> TruncatedSeries {
        let qb = self.block_b.shift(1);
        let q3c = self.block_c.shift(3);
        &(&self.block_a + &qb) + &q3c
    }

    /// `a b + q^5 c^2`, which should reproduce `psi(q^5)^2`.
    pub fn psi5_squared(&self) -> TruncatedSeries {
        let ab = &self.block_a * &self.block_b;
        let c2 = &self.block_c * &self.block_c;
        &ab + &c2.shift(5)
    }
}
