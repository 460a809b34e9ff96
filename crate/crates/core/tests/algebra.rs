use hsbar::f2core::{
    kernel_basis, moebius_transform, rank, BitTable, F2Matrix, F2Vec, SubsetIndex,
};
use hsbar::forms::{equivalent, validate_rokhlin, CupForm, EquivalenceWitness, RokhlinMap};
use hsbar::hmbar::hm_ranks;
use hsbar::rmod::{decompose, GradedModule};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = F2Matrix> {
    proptest::collection::vec(any::<bool>(), rows * cols).prop_map(move |bits| {
        let mut m = F2Matrix::zeros(rows, cols);
        for (k, b) in bits.into_iter().enumerate() {
            m.set(k / cols, k % cols, b);
        }
        m
    })
}

fn invertible(n: usize) -> impl Strategy<Value = F2Matrix> {
    matrix(n, n).prop_filter("invertible", |m| m.inverse().is_some())
}

/// Rank by brute force: the number of distinct images is `2^rank`.
fn rank_by_images(m: &F2Matrix) -> usize {
    let images: std::collections::BTreeSet<u64> = (0..1u64 << m.cols())
        .map(|x| m.mul_vec(&F2Vec::from_mask(m.cols(), x)).to_mask())
        .collect();
    images.len().trailing_zeros() as usize
}

proptest! {
    #[test]
    fn rank_matches_image_count(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assert_eq!(rank(&m), rank_by_images(&m));
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn kernel_is_complementary(m in (1usize..7, 1usize..7).prop_flat_map(|(r, c)| matrix(r, c))) {
        let k = kernel_basis(&m);
        for v in &k {
            prop_assert!(m.mul_vec(v).is_zero());
        }
        prop_assert_eq!(k.len() + rank(&m), m.cols());
        let basis = F2Matrix::from_columns(m.cols(), &k);
        prop_assert_eq!(rank(&basis), k.len());
    }

    #[test]
    fn inverse_is_two_sided(m in (1usize..7).prop_flat_map(invertible)) {
        let inv = m.inverse().unwrap();
        prop_assert_eq!(m.mul(&inv), F2Matrix::identity(m.rows()));
        prop_assert_eq!(inv.mul(&m), F2Matrix::identity(m.rows()));
    }

    #[test]
    fn moebius_is_an_involution(n in 0usize..=6, truth in any::<u64>()) {
        let mask = if n == 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
        let t = BitTable::from_truth_table(n, truth & mask);
        prop_assert_eq!(moebius_transform(&moebius_transform(&t)), t);
    }

    #[test]
    fn witnesses_compose_and_invert(
        (n, m, t, c, truth) in (1usize..=3).prop_flat_map(|n| {
            (Just(n), invertible(n), 0u32..1 << n, any::<bool>(), 0u64..1 << (1 << n))
        })
    ) {
        let w = EquivalenceWitness { matrix: m, translation: SubsetIndex::new(n, t), constant: c };
        let mu = RokhlinMap::from_values(BitTable::from_truth_table(n, truth));
        let pushed = w.push_forward(&mu);
        prop_assert_eq!(&w.pull_back(&pushed), &mu);
        prop_assert_eq!(&w.inverse().push_forward(&pushed), &mu);
        for x in SubsetIndex::all(n) {
            prop_assert_eq!(w.inverse().apply_point(w.apply_point(x)), x);
        }
    }

    #[test]
    fn equivalence_search_finds_affine_images(
        (m, t, c, low, value) in invertible(3).prop_flat_map(|m| {
            (Just(m), 0u32..8, any::<bool>(), 0u32..128, -3i64..=3)
        })
    ) {
        let mut anf = BitTable::zeros(3);
        for (i, s) in SubsetIndex::all(3).filter(|s| s.cardinality() < 3).enumerate() {
            anf.set(s, low >> i & 1 == 1);
        }
        anf.set(SubsetIndex::full(3), value % 2 != 0);
        let cup = CupForm::single(value);
        let mu = RokhlinMap::from_anf(anf);
        validate_rokhlin(&mu, &cup).unwrap();
        let w = EquivalenceWitness { matrix: m, translation: SubsetIndex::new(3, t), constant: c };
        let (mu1, cup1) = (w.push_forward(&mu), w.push_forward_cup(&cup));
        prop_assert!(validate_rokhlin(&mu1, &cup1).is_ok());
        prop_assert_eq!(cup1.value(1, 2, 3).abs(), value.abs());
        let found = equivalent(&mu, &cup, &mu1, &cup1).unwrap().expect("witness");
        prop_assert_eq!(found.pull_back(&mu1), mu.clone());
        prop_assert_eq!(hm_ranks(&cup).unwrap(), hm_ranks(&cup1).unwrap());
    }

    #[test]
    fn decomposition_recovers_modules(pairs in proptest::collection::vec((1u8..=3, 0i64..4), 0..8)) {
        let m = GradedModule::from_pairs(&pairs);
        prop_assert_eq!(decompose(&m.presentation()).unwrap(), m);
    }
}

#[test]
fn weight_is_not_an_invariant_of_linear_maps_alone() {
    // Different weights can only match through the constant.
    let a = RokhlinMap::from_monomials(2, &[&[1]]);
    let b = RokhlinMap::from_monomials(2, &[&[1, 2]]);
    let zero = CupForm::zero(2);
    assert!(equivalent(&a, &zero, &b, &zero).unwrap().is_none());
    let c = RokhlinMap::from_monomials(2, &[&[2], &[]]);
    assert!(equivalent(&a, &zero, &c, &zero).unwrap().is_some());
}
