//! Residue-class dissection of a series and extraction of arithmetic
//! progressions of coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DissectError {
    #[error("residue {t} is not below the modulus {m}")]
    ResidueOutOfRange { m: usize, t: usize },
    #[error("series of order {order} has no coefficient at {t}")]
    InsufficientOrder { order: usize, t: usize },
}

/// `s = sum_i S_i` where `S_i` holds the terms of `s` with exponent `≡ i (mod m)`.
///
/// Every class keeps the full length of the original series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueClassSplit {
    modulus: usize,
    classes: Vec<TruncatedSeries>,
}

impl ResidueClassSplit {
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn class(&self, i: usize) -> &TruncatedSeries {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[TruncatedSeries] {
        &self.classes
    }

    pub fn recombine(&self) -> TruncatedSeries {
        let order = self.classes[0].order();
        self.classes
            .iter()
            .fold(TruncatedSeries::zero(order), |acc, c| &acc + c)
    }

    /// Classes with no nonzero coefficient at all.
    pub fn empty_classes(&self) -> Vec<usize> {
        (0..self.modulus).filter(|&i| self.classes[i].is_zero()).collect()
    }

    /// Classes whose coefficients are all divisible by `u`.
    pub fn vanishing_classes_mod(&self, u: u64) -> Vec<usize> {
        (0..self.modulus).filter(|&i| self.classes[i].is_zero_mod(u)).collect()
    }
}

/// Splits `s` into its `m` residue classes of exponents.
pub fn dissect(s: &TruncatedSeries, m: usize) -> ResidueClassSplit {
    assert!(m >= 1, "dissection modulus must be positive");
    let order = s.order();
    let mut classes: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); order + 1]; m];
    for (e, c) in s.coeffs().iter().enumerate() {
        if !c.is_zero() {
            classes[e % m][e] = c.clone();
        }
    }
    ResidueClassSplit {
        modulus: m,
        classes: classes
            .into_iter()
            .map(|c| TruncatedSeries::from_coeffs(c).expect("nonempty"))
            .collect(),
    }
}

/// `sum_n s(m n + t) q^n`, with order `floor((order(s) - t) / m)`.
pub fn extract_arithmetic_progression(
    s: &TruncatedSeries,
    m: usize,
    t: usize,
) -> Result<TruncatedSeries, DissectError> {
    if m == 0 || t >= m {
        return Err(DissectError::ResidueOutOfRange { m, t });
    }
    if t > s.order() {
        return Err(DissectError::InsufficientOrder { order: s.order(), t });
    }
    let coeffs = s.coeffs()[t..].iter().step_by(m).cloned().collect();
    Ok(TruncatedSeries::from_coeffs(coeffs).expect("t <= order leaves one coefficient"))
}

/// First index `n` (with its coefficient) where `s(m n + t)` is not divisible
/// by `u`, scanning every `n` the series determines.
pub fn first_nonzero_in_progression(
    s: &TruncatedSeries,
    m: usize,
    t: usize,
    u: u64,
) -> Result<Option<(usize, BigInt)>, DissectError> {
    let prog = extract_arithmetic_progression(s, m, t)?;
    let modulus = BigInt::from(u);
    Ok(prog
        .coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_multiple_of(&modulus))
        .map(|(n, c)| (n, c.mod_floor(&modulus))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::psi_series;

    #[test]
    fn constant_splits_into_class_zero() {
        let split = dissect(&TruncatedSeries::one(20), 4);
        assert_eq!(split.class(0), &TruncatedSeries::one(20));
        assert_eq!(split.empty_classes(), vec![1, 2, 3]);
        assert_eq!(split.recombine(), TruncatedSeries::one(20));
    }

    #[test]
    fn extraction() {
        let s = TruncatedSeries::from_i64s(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
        assert_eq!(extract_arithmetic_progression(&s, 1, 0).unwrap(), s);
        assert_eq!(
            extract_arithmetic_progression(&s, 3, 2).unwrap(),
            TruncatedSeries::from_i64s(&[2, 5, 8])
        );
        assert_eq!(extract_arithmetic_progression(&s, 5, 0).unwrap().order(), 2);
        assert_eq!(
            extract_arithmetic_progression(&s, 3, 3),
            Err(DissectError::ResidueOutOfRange { m: 3, t: 3 })
        );
        assert_eq!(
            extract_arithmetic_progression(&s, 50, 11),
            Err(DissectError::InsufficientOrder { order: 10, t: 11 })
        );
    }

    #[test]
    fn triangular_numbers_avoid_two_mod_five() {
        let psi = psi_series(1, 500);
        assert!(extract_arithmetic_progression(&psi, 5, 2).unwrap().is_zero());
        assert!(extract_arithmetic_progression(&psi, 5, 4).unwrap().is_zero());
    }

    #[test]
    fn first_nonzero_reports_reduced_residue() {
        let s = TruncatedSeries::from_i64s(&[5, 10, -3, 15]);
        assert_eq!(first_nonzero_in_progression(&s, 1, 0, 5).unwrap(), Some((2, BigInt::from(2))));
        assert_eq!(first_nonzero_in_progression(&s, 2, 1, 5).unwrap(), None);
    }
}
