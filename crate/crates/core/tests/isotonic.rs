use edmoc_core::isotonic::*;
use edmoc_core::{Error, IsotonicInstance};
use proptest::prelude::*;

/// Min-max block-average formula for nonincreasing regression, then clamped.
fn minmax_formula(y: &[f64], h: &[f64]) -> Vec<f64> {
    let m = y.len();
    let avg = |a: usize, b: usize| {
        let w: f64 = h[a..=b].iter().map(|v| v * v).sum();
        let s: f64 = (a..=b).map(|k| h[k] * h[k] * y[k]).sum();
        s / w
    };
    (0..m)
        .map(|i| {
            (0..=i)
                .map(|a| (i..m).map(|b| avg(a, b)).fold(f64::NEG_INFINITY, f64::max))
                .fold(f64::INFINITY, f64::min)
                .max(0.0)
        })
        .collect()
}

fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
    }
}

#[test]
fn unweighted_examples() {
    assert_eq!(pava_nonincreasing(&[3.0, 2.0, 1.0]).unwrap(), [3.0, 2.0, 1.0]);
    assert_eq!(pava_nonincreasing(&[1.0, 2.0, 3.0]).unwrap(), [2.0, 2.0, 2.0]);
    assert_eq!(pava_nonincreasing(&[3.0, 1.0, 2.0]).unwrap(), [3.0, 1.5, 1.5]);
    assert_eq!(pava_nonincreasing(&[-1.0, -2.0, -3.0]).unwrap(), [0.0, 0.0, 0.0]);
    assert!(matches!(pava_nonincreasing(&[]), Err(Error::EmptyInput)));
}

#[test]
fn weighted_examples() {
    let inst = IsotonicInstance::new(vec![1.0, 3.0], vec![1.0, 2.0]).unwrap();
    assert_close(&pava_weighted(&inst).unwrap(), &[2.6, 2.6], 1e-15);
    let fixed = IsotonicInstance::unweighted(vec![5.0, 4.0, 0.5]).unwrap();
    assert_eq!(pava_weighted(&fixed).unwrap(), [5.0, 4.0, 0.5]);
    let y = vec![0.3, 2.0, -1.0, 4.0, 1.0];
    let constant = IsotonicInstance::new(y.clone(), vec![1.7; 5]).unwrap();
    assert_close(&pava_weighted(&constant).unwrap(), &pava_nonincreasing(&y).unwrap(), 1e-14);
}

#[test]
fn oracle_examples() {
    let o = |y: Vec<f64>| oracle_exact(&IsotonicInstance::unweighted(y).unwrap()).unwrap();
    assert_close(&o(vec![1.0, 2.0, 3.0]), &[2.0, 2.0, 2.0], 1e-15);
    assert_eq!(o(vec![-5.0]), [0.0]);
    assert_eq!(o(vec![2.0, 2.0]), [2.0, 2.0]);
    let too_long = IsotonicInstance::unweighted(vec![0.0; ORACLE_MAX_LEN + 1]).unwrap();
    assert!(matches!(oracle_exact(&too_long), Err(Error::OracleTooLarge { .. })));
}

#[test]
fn instance_validation() {
    assert!(matches!(IsotonicInstance::new(vec![], vec![]), Err(Error::EmptyInput)));
    assert!(matches!(IsotonicInstance::new(vec![1.0, 2.0], vec![1.0, 0.0]), Err(Error::NonPositiveWeight(1))));
    assert!(IsotonicInstance::new(vec![1.0], vec![1.0, 1.0]).is_err());
}

#[test]
fn large_adversarial_input_is_fast() {
    let y: Vec<f64> = (0..1_000_000).map(|k| k as f64).collect();
    let start = std::time::Instant::now();
    let x = pava_nonincreasing(&y).unwrap();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert!(x.iter().all(|&v| (v - 499_999.5).abs() < 1e-6));
}

fn instance() -> impl Strategy<Value = IsotonicInstance> {
    (1usize..=10).prop_flat_map(|m| {
        (prop::collection::vec(-5.0f64..5.0, m), prop::collection::vec(0.1f64..3.0, m))
            .prop_map(|(y, h)| IsotonicInstance::new(y, h).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn weighted_matches_oracles(inst in instance()) {
        let x = pava_weighted(&inst).unwrap();
        let o = oracle_exact(&inst).unwrap();
        let f = minmax_formula(inst.targets(), inst.weights());
        for k in 0..x.len() {
            prop_assert!((x[k] - o[k]).abs() <= 1e-8);
            prop_assert!((x[k] - f[k]).abs() <= 1e-8);
        }
        prop_assert!(inst.objective(&x) <= inst.objective(&o) + 1e-10);
    }

    #[test]
    fn output_is_feasible_and_idempotent(inst in instance()) {
        let x = pava_weighted(&inst).unwrap();
        prop_assert!(x.windows(2).all(|w| w[0] - w[1] >= -1e-12));
        prop_assert!(x.iter().all(|&v| v >= 0.0));
        let again = pava_weighted(&IsotonicInstance::new(x.clone(), inst.weights().to_vec()).unwrap()).unwrap();
        for (a, b) in again.iter().zip(&x) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn blocks_preserve_weighted_means(y in prop::collection::vec(0.5f64..5.0, 1..=10), h in prop::collection::vec(0.1f64..3.0, 10)) {
        let h = &h[..y.len()];
        let x = pava_weighted(&IsotonicInstance::new(y.clone(), h.to_vec()).unwrap()).unwrap();
        let mut start = 0;
        while start < x.len() {
            let mut end = start + 1;
            while end < x.len() && x[end] == x[start] {
                end += 1;
            }
            let w: f64 = h[start..end].iter().map(|v| v * v).sum();
            let s: f64 = (start..end).map(|k| h[k] * h[k] * y[k]).sum();
            prop_assert!((s / w - x[start]).abs() <= 1e-12 * x[start].abs().max(1.0));
            start = end;
        }
    }
}
