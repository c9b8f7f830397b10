//! Truncated formal power series in `q` with exact integer coefficients.
//!
//! A [`TruncatedSeries`] of order `N` carries the coefficients of `q^0..=q^N`.
//! Binary operations truncate to the smaller of the two orders and never
//! extend precision on their own.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term {0} is not a unit; the inverse is not integral")]
    NonUnitConstantTerm(BigInt),
    #[error("a series needs at least one coefficient")]
    Empty,
    #[error("invalid coefficient {0:?}")]
    BadCoefficient(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// `coeff * q^exp` at the given order. A monomial past the order is dropped.
    pub fn monomial(exp: usize, coeff: impl Into<BigInt>, order: usize) -> Self {
        let mut s = Self::zero(order);
        if exp <= order {
            s.coeffs[exp] = coeff.into();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Convenience constructor; panics on an empty slice.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        TruncatedSeries {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// Sparse constructor from `(exponent, coefficient)` terms; repeated
    /// exponents accumulate and terms past `order` are dropped.
    pub fn from_terms<I, C>(terms: I, order: usize) -> Self
    where
        I: IntoIterator<Item = (usize, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero(order);
        for (e, c) in terms {
            if e <= order {
                s.coeffs[e] += c.into();
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`. Panics if `n` is past the order.
    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Exponents carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.support().count()
    }

    /// Drops every coefficient past `order`. Asking for a larger order than
    /// the series carries returns the series unchanged.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        TruncatedSeries {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// `q^k * self` at the same order.
    pub fn shift(&self, k: usize) -> Self {
        let mut out = Self::zero(self.order());
        if k <= self.order() {
            out.coeffs[k..].clone_from_slice(&self.coeffs[..=self.order() - k]);
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplicative inverse via the forward recurrence
    /// `b(n) = -a(0) * sum_{k=1..n} a(k) b(n-k)`, valid when `a(0) = ±1`.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let a0 = self.unit_constant()?;
        let order = self.order();
        let nz: Vec<(usize, &BigInt)> = self.nonzero_terms().filter(|&(k, _)| k > 0).collect();
        let mut out: Vec<BigInt> = Vec::with_capacity(order + 1);
        out.push(BigInt::from(a0));
        let mut scratch = BigInt::zero();
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for &(k, ak) in &nz {
                if k > n {
                    break;
                }
                mul_acc(&mut acc, &out[n - k], ak, &mut scratch);
            }
            if a0 > 0 {
                acc = -acc;
            }
            out.push(acc);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `self^e` by repeated squaring. Negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut result = Self::one(self.order());
        let mut power = base;
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &power;
            }
            exp >>= 1;
            if exp > 0 {
                power = &power * &power;
            }
        }
        Ok(result)
    }

    /// `self^e` through the power recurrence
    /// `n a(0) b(n) = sum_{k=1..n} ((e+1)k - n) a(k) b(n-k)`.
    ///
    /// Costs one pass over the nonzero terms of `self` per output coefficient,
    /// which is much cheaper than squaring when `self` is sparse (eta factors
    /// have O(sqrt N) terms). Requires `a(0) = ±1` for every `e`.
    pub fn pow_by_recurrence(&self, e: i64) -> Result<Self, SeriesError> {
        let a0 = self.unit_constant()?;
        let order = self.order();
        let nz: Vec<(usize, &BigInt)> = self.nonzero_terms().filter(|&(k, _)| k > 0).collect();
        let mut out: Vec<BigInt> = Vec::with_capacity(order + 1);
        out.push(if a0 < 0 && e % 2 != 0 {
            -BigInt::one()
        } else {
            BigInt::one()
        });
        let e1 = BigInt::from(e) + 1;
        let mut scratch = BigInt::zero();
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for &(k, ak) in &nz {
                if k > n {
                    break;
                }
                let bn = &out[n - k];
                if bn.is_zero() {
                    continue;
                }
                let weight: BigInt = &e1 * k - n;
                if weight.is_zero() {
                    continue;
                }
                scratch.clone_from(bn);
                scratch *= ak;
                scratch *= weight;
                acc += &scratch;
            }
            let denom = BigInt::from(n) * a0;
            let (q, r) = acc.div_rem(&denom);
            debug_assert!(r.is_zero(), "power recurrence produced a non-integral coefficient");
            out.push(q);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `self(q^d)` at order `self.order() * d`.
    pub fn substitute_q_power(&self, d: usize) -> Self {
        assert!(d >= 1, "substitution exponent must be positive");
        self.substitute_q_power_to(d, self.order() * d)
    }

    /// `self(q^d)` at an explicit order. The order may reach
    /// `d * (self.order() + 1) - 1`, the last exponent whose coefficient is
    /// still determined.
    pub fn substitute_q_power_to(&self, d: usize, order: usize) -> Self {
        assert!(d >= 1, "substitution exponent must be positive");
        assert!(
            order < d * (self.order() + 1),
            "order {order} exceeds what q -> q^{d} determines"
        );
        let mut out = Self::zero(order);
        for (n, c) in self.coeffs.iter().enumerate() {
            let e = n * d;
            if e > order {
                break;
            }
            out.coeffs[e] = c.clone();
        }
        out
    }

    /// Least nonnegative residues modulo `u`.
    pub fn reduce_mod(&self, u: u64) -> Self {
        let m = BigInt::from(u);
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.mod_floor(&m)).collect(),
        }
    }

    /// True when every coefficient is divisible by `u`.
    pub fn is_zero_mod(&self, u: u64) -> bool {
        let m = BigInt::from(u);
        self.coeffs.iter().all(|c| c.is_multiple_of(&m))
    }

    pub(crate) fn nonzero_terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    fn unit_constant(&self) -> Result<i64, SeriesError> {
        let c = &self.coeffs[0];
        if c.abs().is_one() {
            Ok(if c.is_positive() { 1 } else { -1 })
        } else {
            Err(SeriesError::NonUnitConstantTerm(c.clone()))
        }
    }
}

/// `acc += x * y`, with the ±1 and small-multiplier cases kept allocation free.
fn mul_acc(acc: &mut BigInt, x: &BigInt, y: &BigInt, scratch: &mut BigInt) {
    if x.is_zero() {
        return;
    }
    match y.to_i64() {
        Some(1) => *acc += x,
        Some(-1) => *acc -= x,
        Some(small) => {
            scratch.clone_from(x);
            *scratch *= small;
            *acc += &*scratch;
        }
        None => *acc += x * y,
    }
}

/// Truncated Cauchy product. The operand with fewer nonzero terms drives the
/// outer loop so that multiplying by a sparse series stays cheap.
fn mul_truncated(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let order = a.order().min(b.order());
    let (sparse, dense) = if a.nonzero_count() <= b.nonzero_count() {
        (a, b)
    } else {
        (b, a)
    };
    let mut out = vec![BigInt::zero(); order + 1];
    let mut scratch = BigInt::zero();
    for (k, ck) in sparse.nonzero_terms() {
        if k > order {
            break;
        }
        for (i, di) in dense.coeffs[..=order - k].iter().enumerate() {
            mul_acc(&mut out[i + k], di, ck, &mut scratch);
        }
    }
    TruncatedSeries { coeffs: out }
}

impl<'a> Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &'a TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl<'a> Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &'a TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=order).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
        }
    }
}

impl<'a> Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &'a TruncatedSeries) -> TruncatedSeries {
        mul_truncated(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({self})")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.nonzero_terms() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// Wire form: `{"order": N, "coeffs": ["1", "-3", ...]}`. Coefficients are
/// decimal strings because they routinely exceed 64 bits.
#[derive(Serialize, Deserialize)]
struct SeriesWire {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesWire {
            order: self.order(),
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let wire = SeriesWire::deserialize(deserializer)?;
        if wire.coeffs.len() != wire.order + 1 {
            return Err(D::Error::custom(format!(
                "order {} needs {} coefficients, got {}",
                wire.order,
                wire.order + 1,
                wire.coeffs.len()
            )));
        }
        let coeffs = wire
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| D::Error::custom(SeriesError::BadCoefficient(s.clone())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        TruncatedSeries::from_coeffs(coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_i64s(c)
    }

    // (q;q)_inf to order 12, from the finite product prod_{n<=12}(1 - q^n).
    const EULER_12: [i64; 13] = [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1];
    const PARTITIONS_10: [i64; 11] = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];

    #[test]
    fn add_truncates_to_min_order() {
        let sum = &s(&[1, 1, 0]) + &s(&[1, -1]);
        assert_eq!(sum, s(&[2, 0]));
        let x = s(&[3, -4, 5]);
        assert_eq!(&x + &TruncatedSeries::zero(2), x);
    }

    #[test]
    fn add_euler_and_partitions() {
        let euler = s(&EULER_12[..7]);
        let parts = s(&PARTITIONS_10[..7]);
        assert_eq!(&euler + &parts, s(&[2, 0, 1, 3, 5, 8, 11]));
    }

    #[test]
    fn mul_telescopes() {
        let geometric = s(&[1; 9]);
        assert_eq!(&s(&[1, -1, 0, 0, 0, 0, 0, 0, 0]) * &geometric, TruncatedSeries::one(8));
        assert_eq!(&s(&[1, 1, 0]) * &s(&[1, -1, 0]), s(&[1, 0, -1]));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(TruncatedSeries::one(5).invert().unwrap(), TruncatedSeries::one(5));
        assert_eq!(s(&EULER_12[..11]).invert().unwrap(), s(&PARTITIONS_10));
        assert_eq!(
            s(&[2, 1]).invert(),
            Err(SeriesError::NonUnitConstantTerm(BigInt::from(2)))
        );
        // a(0) = -1
        let neg = s(&[-1, 1, 0, 0]);
        assert!((&neg * &neg.invert().unwrap()).is_one());
    }

    #[test]
    fn pow_examples() {
        assert_eq!(s(&[1, 1, 0, 0]).pow(2).unwrap(), s(&[1, 2, 1, 0]));
        assert_eq!(s(&[5, 7, 1]).pow(0).unwrap(), TruncatedSeries::one(2));
        assert!(s(&[2, 1]).pow(-1).is_err());
        assert!(s(&[2, 1]).pow(3).is_ok());
    }

    #[test]
    fn recurrence_power_matches_squaring() {
        let euler = s(&EULER_12);
        for e in -7..=7 {
            assert_eq!(euler.pow_by_recurrence(e).unwrap(), euler.pow(e).unwrap(), "e = {e}");
        }
        let neg = s(&[-1, 2, 0, 3, -1, 0, 0]);
        for e in -4..=4 {
            assert_eq!(neg.pow_by_recurrence(e).unwrap(), neg.pow(e).unwrap(), "e = {e}");
        }
    }

    #[test]
    fn substitution() {
        assert_eq!(s(&[1, 1]).substitute_q_power(5), s(&[1, 0, 0, 0, 0, 1]));
        let x = s(&[4, -2, 7]);
        assert_eq!(x.substitute_q_power(1), x);
        let doubled = s(&EULER_12[..8]).substitute_q_power(2);
        let expected =
            TruncatedSeries::from_terms([(0, 1), (2, -1), (4, -1), (10, 1), (14, 1)], 14);
        assert_eq!(doubled, expected);
        assert_eq!(x.substitute_q_power_to(3, 8).order(), 8);
    }

    #[test]
    fn reduce_mod_examples() {
        let jac = TruncatedSeries::from_terms([(0, 1), (1, -3), (3, 5)], 3);
        assert_eq!(jac.reduce_mod(5), s(&[1, 2, 0, 0]));
        let x = s(&[-7, 3, 10, -1]);
        assert_eq!(x.reduce_mod(2).reduce_mod(2), x.reduce_mod(2));
    }

    #[test]
    fn shift_and_truncate() {
        let x = s(&[1, 2, 3, 4]);
        assert_eq!(x.shift(2), s(&[0, 0, 1, 2]));
        assert_eq!(x.shift(9), TruncatedSeries::zero(3));
        assert_eq!(x.truncate(1), s(&[1, 2]));
        assert_eq!(x.truncate(10), x);
    }

    #[test]
    fn json_round_trip_keeps_big_coefficients() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let x = TruncatedSeries::from_coeffs(vec![BigInt::one(), -big]).unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"order":1,"coeffs":["1","-123456789012345678901234567890"]}"#);
        let back: TruncatedSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<TruncatedSeries>(r#"{"order":2,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn display() {
        let x = TruncatedSeries::from_terms([(0, 1), (1, -3), (3, 5)], 4);
        assert_eq!(x.to_string(), "1 - 3q + 5q^3 + O(q^5)");
    }
}
