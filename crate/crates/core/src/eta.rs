//! Eta quotients `prod_{d | M} (q^d; q^d)_inf^{r_d}` and their expansion.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaSpecError {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("divisor must be positive")]
    ZeroDivisor,
    #[error("{delta} does not divide the level {level}")]
    NotADivisor { delta: u64, level: u64 },
    #[error("divisor {0} listed more than once")]
    DuplicateDivisor(u64),
}

/// Malformed `delta:exponent,...` text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

/// Exponent vector `r` indexed by the positive divisors of a level `M`.
///
/// Zero exponents are dropped on construction so equal quotients compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "EtaSpecWire", into = "EtaSpecWire")]
pub struct EtaQuotientSpec {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl EtaQuotientSpec {
    pub fn new<I>(level: u64, pairs: I) -> Result<Self, EtaSpecError>
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        if level == 0 {
            return Err(EtaSpecError::ZeroLevel);
        }
        let mut exponents = BTreeMap::new();
        for (delta, r) in pairs {
            if delta == 0 {
                return Err(EtaSpecError::ZeroDivisor);
            }
            if !level.is_multiple_of(delta) {
                return Err(EtaSpecError::NotADivisor { delta, level });
            }
            if exponents.insert(delta, r).is_some() {
                return Err(EtaSpecError::DuplicateDivisor(delta));
            }
        }
        exponents.retain(|_, r| *r != 0);
        Ok(EtaQuotientSpec { level, exponents })
    }

    /// Spec whose level is the lcm of the listed divisors.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, EtaSpecError>
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let level = pairs.iter().fold(1u64, |acc, &(d, _)| if d == 0 { acc } else { acc.lcm(&d) });
        Self::new(level, pairs)
    }

    /// The empty quotient, which expands to 1.
    pub fn trivial(level: u64) -> Result<Self, EtaSpecError> {
        Self::new(level, [])
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// `r_delta`, zero for divisors not listed.
    pub fn exponent(&self, delta: u64) -> i64 {
        self.exponents.get(&delta).copied().unwrap_or(0)
    }

    /// Nonzero `(delta, r_delta)` pairs in ascending `delta`.
    pub fn entries(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.exponents.iter().map(|(&d, &r)| (d, r))
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `sum r_delta`.
    pub fn exponent_sum(&self) -> i64 {
        self.exponents.values().sum()
    }

    /// `sum delta * r_delta`.
    pub fn weighted_sum(&self) -> i64 {
        self.entries().map(|(d, r)| d as i64 * r).sum()
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().map(|(d, r)| format!("{d}:{r}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses `delta:exponent` pairs separated by commas. Whitespace is ignored
/// and the empty string is the empty list.
pub fn parse_pairs(text: &str) -> Result<Vec<(u64, i64)>, ParseError> {
    let mut pairs = Vec::new();
    let mut offset = 0;
    for item in text.split(',') {
        let start = offset;
        offset += item.len() + 1;
        let lead = item.len() - item.trim_start().len();
        let item = item.trim();
        if item.is_empty() {
            if text.trim().is_empty() {
                break;
            }
            return Err(ParseError {
                position: start,
                message: "empty entry".into(),
            });
        }
        let pos = start + lead;
        let (d, r) = item.split_once(':').ok_or_else(|| ParseError {
            position: pos,
            message: format!("expected delta:exponent, found {item:?}"),
        })?;
        let delta: u64 = d.trim().parse().map_err(|_| ParseError {
            position: pos,
            message: format!("bad divisor {:?}", d.trim()),
        })?;
        if delta == 0 {
            return Err(ParseError {
                position: pos,
                message: "divisor must be positive".into(),
            });
        }
        let exp: i64 = r.trim().parse().map_err(|_| ParseError {
            position: pos + d.len() + 1,
            message: format!("bad exponent {:?}", r.trim()),
        })?;
        pairs.push((delta, exp));
    }
    Ok(pairs)
}

#[derive(Debug, Error)]
pub enum SpecTextError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Spec(#[from] EtaSpecError),
}

impl FromStr for EtaQuotientSpec {
    type Err = SpecTextError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(EtaQuotientSpec::from_pairs(parse_pairs(s)?)?)
    }
}

#[derive(Serialize, Deserialize)]
struct EtaSpecWire {
    level: u64,
    exponents: BTreeMap<String, i64>,
}

impl From<EtaQuotientSpec> for EtaSpecWire {
    fn from(spec: EtaQuotientSpec) -> Self {
        EtaSpecWire {
            level: spec.level,
            exponents: spec.entries().map(|(d, r)| (d.to_string(), r)).collect(),
        }
    }
}

impl TryFrom<EtaSpecWire> for EtaQuotientSpec {
    type Error = String;

    fn try_from(wire: EtaSpecWire) -> Result<Self, Self::Error> {
        let pairs = wire
            .exponents
            .iter()
            .map(|(d, &r)| d.parse::<u64>().map(|d| (d, r)).map_err(|e| format!("divisor {d:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        EtaQuotientSpec::new(wire.level, pairs).map_err(|e| e.to_string())
    }
}

/// `(q^delta; q^delta)_inf` to the given order from the pentagonal number
/// theorem: `sum_k (-1)^k q^{delta k(3k-1)/2}` over all integers `k`.
pub fn eta_factor(delta: u64, order: usize) -> TruncatedSeries {
    assert!(delta >= 1, "eta factor needs a positive delta");
    let delta = delta as u128;
    let order_w = order as u128;
    let mut terms: Vec<(usize, i64)> = vec![(0, 1)];
    let mut k: u128 = 1;
    loop {
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        let lo = delta * (k * (3 * k - 1) / 2);
        let hi = delta * (k * (3 * k + 1) / 2);
        if lo > order_w {
            break;
        }
        terms.push((lo as usize, sign));
        if hi <= order_w {
            terms.push((hi as usize, sign));
        }
        k += 1;
    }
    TruncatedSeries::from_terms(terms, order)
}

/// Expands `prod_delta (q^delta; q^delta)_inf^{r_delta}` to the given order.
///
/// Each factor is raised with [`TruncatedSeries::pow_by_recurrence`] at order
/// `order / delta` and then spread out by `q -> q^delta`, so negative exponents
/// never need a separate inversion. Factors are multiplied densest first.
pub fn expand_eta_quotient(spec: &EtaQuotientSpec, order: usize) -> TruncatedSeries {
    let mut factors: Vec<TruncatedSeries> = spec
        .entries()
        .map(|(delta, r)| {
            let d = delta as usize;
            let base = eta_factor(1, order / d);
            base.pow_by_recurrence(r)
                .expect("eta factors have constant term 1")
                .substitute_q_power_to(d, order)
        })
        .collect();
    if factors.is_empty() {
        return TruncatedSeries::one(order);
    }
    factors.sort_by_key(|f| std::cmp::Reverse(f.nonzero_count()));
    let mut iter = factors.into_iter();
    let first = iter.next().expect("nonempty");
    iter.fold(first, |acc, f| &acc * &f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_normalizes_and_validates() {
        let a = EtaQuotientSpec::new(10, [(1, 22), (2, 1), (5, -5), (10, 0)]).unwrap();
        let b = EtaQuotientSpec::new(10, [(5, -5), (1, 22), (2, 1)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.exponent(10), 0);
        assert_eq!(a.exponent_sum(), 18);
        assert_eq!(a.weighted_sum(), -1);
        assert_eq!(
            EtaQuotientSpec::new(10, [(3, 1)]),
            Err(EtaSpecError::NotADivisor { delta: 3, level: 10 })
        );
        assert_eq!(EtaQuotientSpec::new(10, [(2, 1), (2, 3)]), Err(EtaSpecError::DuplicateDivisor(2)));
        assert_eq!(EtaQuotientSpec::new(0, []), Err(EtaSpecError::ZeroLevel));
        assert!(EtaQuotientSpec::new(4, [(1, 0)]).unwrap().is_trivial());
    }

    #[test]
    fn parse_pairs_grammar() {
        assert_eq!(parse_pairs("1:-3,2:1").unwrap(), vec![(1, -3), (2, 1)]);
        assert_eq!(parse_pairs(" 1 : 22 , 5:-5 ").unwrap(), vec![(1, 22), (5, -5)]);
        assert_eq!(parse_pairs("").unwrap(), vec![]);
        assert_eq!(parse_pairs("1:2,x:3").unwrap_err().position, 4);
        assert_eq!(parse_pairs("1:2,,3:1").unwrap_err().position, 4);
        assert_eq!(parse_pairs("1:2,3").unwrap_err().position, 4);
        assert_eq!(parse_pairs("1:2,3:z").unwrap_err().position, 6);
        assert!(parse_pairs("0:1").is_err());
        let spec: EtaQuotientSpec = "1:-3,2:1".parse().unwrap();
        assert_eq!(spec.level(), 2);
        assert_eq!(spec.to_string(), "1:-3,2:1");
    }

    #[test]
    fn spec_json() {
        let spec = EtaQuotientSpec::new(14, [(1, 4), (2, 1), (7, -1)]).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"level":14,"exponents":{"1":4,"2":1,"7":-1}}"#);
        assert_eq!(serde_json::from_str::<EtaQuotientSpec>(&json).unwrap(), spec);
        assert!(serde_json::from_str::<EtaQuotientSpec>(r#"{"level":10,"exponents":{"3":1}}"#).is_err());
    }

    #[test]
    fn eta_factor_examples() {
        assert_eq!(
            eta_factor(1, 12),
            TruncatedSeries::from_i64s(&[1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1])
        );
        assert_eq!(eta_factor(5, 4), TruncatedSeries::one(4));
        assert_eq!(eta_factor(2, 14), eta_factor(1, 7).substitute_q_power(2));
        assert_eq!(eta_factor(3, 0), TruncatedSeries::one(0));
    }

    #[test]
    fn expand_examples() {
        let trivial = EtaQuotientSpec::trivial(6).unwrap();
        assert_eq!(expand_eta_quotient(&trivial, 9), TruncatedSeries::one(9));
        // f2/f1^3 from independent squaring-based arithmetic
        let f1 = eta_factor(1, 30);
        let f2 = eta_factor(2, 30);
        let direct = &f1.pow(-3).unwrap() * &f2;
        let spec: EtaQuotientSpec = "1:-3,2:1".parse().unwrap();
        assert_eq!(expand_eta_quotient(&spec, 30), direct);
    }

    #[test]
    fn expansion_is_factor_order_independent() {
        let spec: EtaQuotientSpec = "1:4,2:1,7:-1".parse().unwrap();
        let order = 60;
        let fast = expand_eta_quotient(&spec, order);
        let mut slow = TruncatedSeries::one(order);
        for (d, r) in spec.entries() {
            slow = &slow * &eta_factor(d, order).pow(r).unwrap();
        }
        assert_eq!(fast, slow);
    }
}
