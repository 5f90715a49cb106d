mod common;

use proptest::prelude::*;

use hierstate::rep_theory::{clebsch_gordan, couple_pair, decompose_product, CgQuery, IrrepLabel};

fn factors() -> impl Strategy<Value = Vec<IrrepLabel>> {
    prop::collection::vec((0u32..=4).prop_map(IrrepLabel::new), 1..=6)
}

proptest! {
    #[test]
    fn dimension_identity(f in factors()) {
        let sum = decompose_product(&f).unwrap();
        let product: u64 = f.iter().map(|l| l.dim()).product();
        prop_assert_eq!(sum.total_dim(), product);
    }

    #[test]
    fn weight_multiplicities_match_enumeration(f in factors()) {
        let sum = decompose_product(&f).unwrap();
        for (twice_m, count) in common::weight_counts(&f) {
            let predicted: u64 = sum
                .iter()
                .filter(|(l, _)| l.twice_j as i32 >= twice_m.abs())
                .map(|(_, mult)| mult)
                .sum();
            prop_assert_eq!(predicted, count, "2M = {}", twice_m);
        }
    }

    #[test]
    fn coupling_is_symmetric(a in 0u32..12, b in 0u32..12) {
        prop_assert_eq!(couple_pair(IrrepLabel::new(a), IrrepLabel::new(b)), couple_pair(IrrepLabel::new(b), IrrepLabel::new(a)));
    }
}

/// Racah values against the lowering-operator construction.
#[test]
fn racah_matches_ladder_construction() {
    for tj1 in 0..=4u32 {
        for tj2 in 0..=4u32 {
            for ((tj, tm, m1, m2), expected) in common::ladder_cg_table(tj1, tj2) {
                let q = CgQuery::new(tj1, m1, tj2, m2, tj, tm);
                let got = clebsch_gordan(&q).unwrap();
                assert!(
                    (got - expected).abs() < 1e-12,
                    "<{tj1} {m1} {tj2} {m2}|{tj} {tm}>: racah {got}, ladder {expected}"
                );
            }
        }
    }
}

#[test]
fn ladder_oracle_reproduces_singlet() {
    let t = common::ladder_cg_table(1, 1);
    assert!((t[&(0, 0, 1, -1)] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((t[&(0, 0, -1, 1)] + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((t[&(2, 2, 1, 1)] - 1.0).abs() < 1e-15);
}

#[test]
fn cg_concurrent_readers_agree() {
    let handles: Vec<_> = (0..4)
        .map(|_| {
            std::thread::spawn(|| {
                (0..=6u32).step_by(2)
                    .map(|tj| clebsch_gordan(&CgQuery::new(3, 1, 3, -1, tj, 0)).unwrap())
                    .collect::<Vec<f64>>()
            })
        })
        .collect();
    let results: Vec<Vec<f64>> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert!(results.windows(2).all(|w| w[0] == w[1]));
}
