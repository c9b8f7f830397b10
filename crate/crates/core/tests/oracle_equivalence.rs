//! Every expansion path against the brute-force oracle crate.

use etacert::pipelines::{b_series, broken_k_diamond_series, BrokenDiamondSpec};
use etacert::{eta_factor, expand_eta_quotient, EtaQuotientSpec, TruncatedSeries};
use etacert_oracle::{naive_delta_k, naive_eta, naive_eta_quotient, naive_invert, naive_mul};
use proptest::prelude::*;

const ORDER: usize = 300;

const KNOWN_SPECS: &[&[(u64, i64)]] = &[
    &[(1, -3), (2, 1)],
    &[(1, 22), (2, 1), (5, -5)],
    &[(1, 4), (2, 1), (7, -1)],
    &[(1, 46), (2, 1), (7, -7)],
    &[(1, 13)],
    &[(1, 3)],
    &[(1, 18)],
    &[(2, 5), (10, -1)],
    &[(1, -1), (2, 2)],
    &[(2, 1), (25, 1), (1, -3), (50, -1)],
];

fn by_squaring(pairs: &[(u64, i64)], order: usize) -> TruncatedSeries {
    pairs.iter().fold(TruncatedSeries::one(order), |acc, &(d, r)| {
        &acc * &eta_factor(d, order).pow(r).unwrap()
    })
}

fn by_recurrence(pairs: &[(u64, i64)], order: usize) -> TruncatedSeries {
    pairs.iter().fold(TruncatedSeries::one(order), |acc, &(d, r)| {
        &acc * &eta_factor(d, order).pow_by_recurrence(r).unwrap()
    })
}

fn assert_all_paths(pairs: &[(u64, i64)], order: usize) {
    let spec = EtaQuotientSpec::from_pairs(pairs.iter().copied()).unwrap();
    let expected = naive_eta_quotient(pairs, order);
    assert_eq!(expand_eta_quotient(&spec, order), expected, "{spec}");
    assert_eq!(by_squaring(pairs, order), expected, "{spec}");
    assert_eq!(by_recurrence(pairs, order), expected, "{spec}");
}

#[test]
fn known_quotients_match_on_every_path() {
    for pairs in KNOWN_SPECS {
        assert_all_paths(pairs, ORDER);
    }
}

#[test]
fn eta_factors_match_the_finite_product() {
    for delta in 1..=20 {
        assert_eq!(eta_factor(delta, ORDER), naive_eta(delta, ORDER), "delta {delta}");
    }
}

#[test]
fn broken_diamond_series_match() {
    for k in [1, 2, 3, 12] {
        let spec = BrokenDiamondSpec::new(k).unwrap();
        assert_eq!(broken_k_diamond_series(spec, 200), naive_delta_k(k, 200), "k = {k}");
    }
    assert_eq!(b_series(ORDER), naive_eta_quotient(&[(2, 1), (1, -3)], ORDER));
}

#[test]
fn inverse_matches_long_division() {
    for delta in [1, 2, 5, 7] {
        let f = eta_factor(delta, ORDER);
        assert_eq!(f.invert().unwrap(), naive_invert(&f));
    }
}

fn sparse_or_dense(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    (0u32..4, prop::collection::vec(-1000i64..=1000, order + 1)).prop_map(|(sparsity, mut c)| {
        // sparsity 0 keeps everything; higher values zero out most terms so
        // both multiplication paths get exercised.
        if sparsity > 0 {
            for (i, x) in c.iter_mut().enumerate() {
                if i % (3 * sparsity as usize + 1) != 0 {
                    *x = 0;
                }
            }
        }
        TruncatedSeries::from_i64s(&c)
    })
}

fn small_spec() -> impl Strategy<Value = Vec<(u64, i64)>> {
    prop::collection::btree_map(1u64..=12, -4i64..=4, 1..4).prop_map(|m| m.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplication_matches_convolution(a in sparse_or_dense(128), b in sparse_or_dense(128)) {
        prop_assert_eq!(&a * &b, naive_mul(&a, &b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_quotients_match_on_every_path(pairs in small_spec()) {
        assert_all_paths(&pairs, ORDER);
    }
}
