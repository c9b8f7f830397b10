use etacert::dissect::{dissect, extract_arithmetic_progression};
use etacert::theta::{jacobi_cube, jtp_product, psi_series, theta_series, DissectionBlocks, ThetaSpec};
use etacert::{eta_factor, expand_eta_quotient, EtaQuotientSpec, TruncatedSeries};
use proptest::prelude::*;

fn spec(a: u64, b: u64) -> ThetaSpec {
    ThetaSpec::new(a, b).unwrap()
}

#[test]
fn triple_product_on_the_dissection_blocks() {
    for (a, b) in [(1, 3), (5, 20), (10, 15), (25, 75), (1, 1), (1, 2)] {
        assert_eq!(theta_series(spec(a, b), 500), jtp_product(spec(a, b), 500), "f(q^{a}, q^{b})");
    }
}

#[test]
fn psi_is_an_eta_quotient() {
    let quotient = EtaQuotientSpec::from_pairs([(1, -1), (2, 2)]).unwrap();
    assert_eq!(psi_series(1, 800), expand_eta_quotient(&quotient, 800));
    assert_eq!(psi_series(5, 800), psi_series(1, 160).substitute_q_power(5));
}

#[test]
fn jacobi_cube_is_f1_cubed() {
    assert_eq!(jacobi_cube(2000), eta_factor(1, 2000).pow(3).unwrap());
}

#[test]
fn psi_blocks_recombine() {
    let blocks = DissectionBlocks::build(1500);
    assert_eq!(blocks.recombine(), psi_series(1, 1500));
    let psi5 = psi_series(5, 1500);
    assert_eq!(blocks.psi5_squared(), &psi5 * &psi5);
}

#[test]
fn jacobi_support_mod_5() {
    let f1 = jacobi_cube(2000).reduce_mod(5);
    let f2 = f1.substitute_q_power_to(2, 2000);
    assert_eq!(dissect(&f1, 5).vanishing_classes_mod(5), vec![2, 3, 4]);
    assert_eq!(dissect(&f2, 5).vanishing_classes_mod(5), vec![1, 3, 4]);
    let product = &f1 * &f2;
    let class4 = extract_arithmetic_progression(&product.reduce_mod(5), 5, 4).unwrap();
    assert!(class4.is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn triple_product_on_random_parameters((a, b) in (1u64..12).prop_flat_map(|a| (Just(a), 1..=12 - a))) {
        prop_assert_eq!(theta_series(spec(a, b), 500), jtp_product(spec(a, b), 500));
    }

    #[test]
    fn dissection_partitions_the_support(c in prop::collection::vec(-50i64..=50, 1..200), m in 1usize..12) {
        let s = TruncatedSeries::from_i64s(&c);
        let split = dissect(&s, m);
        prop_assert_eq!(split.recombine(), s.clone());
        for (i, class) in split.classes().iter().enumerate() {
            prop_assert!(class.support().all(|e| e % m == i));
        }
        let total: usize = split.classes().iter().map(TruncatedSeries::nonzero_count).sum();
        prop_assert_eq!(total, s.nonzero_count());
    }
}
