use proptest::prelude::*;
use qarrow_core::majorder::{
    compare, greatest_element, least_element, lorenz_points, ProbVector, Relation, DEFAULT_TOL,
};

fn prob_vector(max_dim: usize) -> impl Strategy<Value = ProbVector> {
    prop::collection::vec(0.0f64..1.0, 1..=max_dim).prop_filter_map("zero mass", |w| {
        ProbVector::from_weights(w).ok()
    })
}

fn triple(max_dim: usize) -> impl Strategy<Value = (ProbVector, ProbVector, ProbVector)> {
    (1..=max_dim).prop_flat_map(|d| {
        let one = prop::collection::vec(0.0f64..1.0, d)
            .prop_filter_map("zero mass", |w| ProbVector::from_weights(w).ok());
        (one.clone(), one.clone(), one)
    })
}

fn shuffled(v: &ProbVector, seed: u64) -> ProbVector {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut values = v.as_slice().to_vec();
    values.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    ProbVector::new(values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reflexive(x in prob_vector(32)) {
        prop_assert_eq!(compare(&x, &x, DEFAULT_TOL).unwrap().relation, Relation::Equal);
    }

    #[test]
    fn antisymmetric_and_transitive((x, y, z) in triple(32)) {
        let xy = compare(&x, &y, DEFAULT_TOL).unwrap().relation;
        if xy == Relation::Equal {
            for (a, b) in x.sorted_desc().iter().zip(y.sorted_desc()) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
        }
        let yz = compare(&y, &z, DEFAULT_TOL).unwrap().relation;
        if xy.is_forward() && yz.is_forward() {
            prop_assert!(compare(&x, &z, DEFAULT_TOL).unwrap().relation.is_forward());
        }
    }

    #[test]
    fn chain_through_extremes(x in prob_vector(32)) {
        let d = x.dim();
        prop_assert!(compare(&least_element(d).unwrap(), &x, DEFAULT_TOL).unwrap().relation.is_forward());
        prop_assert!(compare(&x, &greatest_element(d).unwrap(), DEFAULT_TOL).unwrap().relation.is_forward());
    }

    #[test]
    fn permutation_invariant((x, y, _) in triple(32), seed in any::<u64>()) {
        let base = compare(&x, &y, DEFAULT_TOL).unwrap().relation;
        prop_assert_eq!(compare(&shuffled(&x, seed), &y, DEFAULT_TOL).unwrap().relation, base);
        prop_assert_eq!(compare(&x, &shuffled(&y, seed ^ 1), DEFAULT_TOL).unwrap().relation, base);
    }

    #[test]
    fn lorenz_is_concave(x in prob_vector(32)) {
        let pts = lorenz_points(&x);
        prop_assert!((pts.last().unwrap().1 - 1.0).abs() <= 1e-9);
        let increments: Vec<f64> = std::iter::once(pts[0].1)
            .chain(pts.windows(2).map(|w| w[1].1 - w[0].1))
            .collect();
        for w in increments.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-15);
        }
    }

    #[test]
    fn majorization_lowers_entropy((x, y, _) in triple(32)) {
        if compare(&x, &y, DEFAULT_TOL).unwrap().relation.is_forward() {
            prop_assert!(x.entropy() >= y.entropy() - 1e-9);
        }
    }
}

#[test]
fn entropy_check_covers_comparable_pairs() {
    // Random pairs are mostly incomparable; build comparable ones by
    // mixing toward the uniform vector, which always moves down the order.
    for d in [2usize, 5, 16, 32] {
        let y = ProbVector::from_weights((1..=d).map(|i| (i * i) as f64).collect()).unwrap();
        let u = least_element(d).unwrap();
        for step in 0..=10 {
            let t = step as f64 / 10.0;
            let x = ProbVector::new(
                y.as_slice()
                    .iter()
                    .zip(u.as_slice())
                    .map(|(a, b)| t * b + (1.0 - t) * a)
                    .collect(),
            )
            .unwrap();
            assert!(compare(&x, &y, DEFAULT_TOL).unwrap().relation.is_forward());
            assert!(x.entropy() >= y.entropy() - 1e-9);
        }
    }
}
