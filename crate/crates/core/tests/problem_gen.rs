use edmoc_core::feasibility::chain_satisfied;
use edmoc_core::problem_gen::*;
use edmoc_core::{PointCloud, SnlConfig, SymmetricMatrix};
use proptest::prelude::*;

#[test]
fn noiseless_full_range_observes_true_distances() {
    let cfg = SnlConfig::new(40, 2f64.sqrt(), 0.0, 1);
    let inst = generate_snl(&cfg).unwrap();
    let truth = inst.truth().unwrap();
    inst.delta().for_each_pair(|i, j, d| assert_eq!(d, truth.distance(i, j)));
    assert!(inst.is_fully_observed());
    assert!((density(&inst) - 39.0 / 40.0).abs() < 1e-15);
    assert_eq!(extract_chain(&truth.edm().unwrap()), *inst.chain());
}

#[test]
fn points_stay_in_region() {
    let cfg = SnlConfig { half_width: 50.0, ..SnlConfig::new(100, 20.0, 0.1, 2) };
    let inst = generate_snl(&cfg).unwrap();
    assert!(inst.truth().unwrap().coords().iter().all(|c| c.abs() <= 50.0));
}

#[test]
fn density_near_full_observation() {
    let inst = generate_snl(&SnlConfig::new(200, 1.4, 0.1, 7)).unwrap();
    assert!((density(&inst) - 0.995).abs() < 0.005);
}

#[test]
fn density_with_short_radio_range() {
    let inst = generate_snl(&SnlConfig::new(200, 0.2, 0.1, 7)).unwrap();
    assert!((density(&inst) - 0.106).abs() < 0.02, "{}", density(&inst));
}

#[test]
fn density_counting() {
    let n = 200;
    assert_eq!(density_of(&SymmetricMatrix::zeros(n).unwrap()), 0.0);
    let full = SymmetricMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { 1.0 }).unwrap();
    assert!((density_of(&full) - 0.995).abs() < 1e-15);
    let mut half = SymmetricMatrix::zeros(n).unwrap();
    let mut k = 0;
    half.clone().for_each_pair(|i, j, _| {
        if k % 2 == 0 {
            half.set(i, j, 1.0);
        }
        k += 1;
    });
    assert!((density_of(&half) - (n - 1) as f64 / (2 * n) as f64).abs() < 1e-15);
}

#[test]
fn unobserved_pairs_have_zero_weight() {
    let inst = generate_snl(&SnlConfig::new(60, 0.3, 0.1, 5)).unwrap();
    let truth = inst.truth().unwrap();
    inst.delta().for_each_pair(|i, j, d| {
        let observed = truth.distance(i, j) <= 0.3;
        assert_eq!(d > 0.0, observed);
        assert_eq!(inst.weights().get(i, j), if observed { 1.0 } else { 0.0 });
    });
}

#[test]
fn chain_from_observations_flag() {
    let cfg = SnlConfig { chain_from_delta: true, ..SnlConfig::new(30, 2.0, 0.2, 8) };
    let inst = generate_snl(&cfg).unwrap();
    assert!(chain_satisfied(&inst.delta_sq(), inst.chain(), 0.0));
}

#[test]
fn extract_chain_examples() {
    let x = PointCloud::from_points(1, &[vec![0.0], vec![1.0], vec![3.0]]).unwrap();
    assert_eq!(extract_chain(&x.edm().unwrap()).to_one_based(), [(1, 3), (2, 3), (1, 2)]);
    let zero = SymmetricMatrix::zeros(4).unwrap();
    assert_eq!(extract_chain(&zero).pairs(), edmoc_core::OrdinalChain::canonical(4).unwrap().pairs());
}

#[test]
fn completion_examples() {
    let mut path = SymmetricMatrix::zeros(4).unwrap();
    path.set(0, 1, 1.0);
    path.set(1, 2, 2.0);
    path.set(2, 3, 0.5);
    path.set(0, 3, 5.0);
    let c = shortest_path_completion(&path).unwrap();
    assert_eq!(c.get(0, 2), 3.0);
    assert_eq!(c.get(0, 3), 3.5);
    assert_eq!(c.get(1, 3), 2.5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), n in 3usize..=30) {
        let cfg = SnlConfig::new(n, 0.8, 0.1, seed);
        prop_assert_eq!(generate_snl(&cfg).unwrap(), generate_snl(&cfg).unwrap());
    }

    #[test]
    fn extracted_chain_is_satisfied(seed in any::<u64>(), n in 2usize..=20) {
        let cfg = SnlConfig::new(n.max(3), 1.0, 0.3, seed);
        let inst = generate_snl(&cfg).unwrap();
        let d = inst.delta_sq();
        let c = extract_chain(&d);
        prop_assert!(chain_satisfied(&d, &c, 0.0));
        let mut pairs = c.pairs().to_vec();
        pairs.sort();
        prop_assert_eq!(pairs, edmoc_core::OrdinalChain::canonical(d.n()).unwrap().pairs().to_vec());
    }
}
