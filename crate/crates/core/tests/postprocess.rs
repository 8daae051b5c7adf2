mod common;

use common::Lcg;
use edmoc_core::penalty_solver::ProblemInstance;
use edmoc_core::postprocess::*;
use edmoc_core::problem_gen::{extract_chain, generate_snl};
use edmoc_core::{PointCloud, SnlConfig};
use proptest::prelude::*;

fn cloud(rng: &mut Lcg, dim: usize, n: usize) -> PointCloud {
    PointCloud::new(dim, n, (0..dim * n).map(|_| rng.next()).collect()).unwrap()
}

fn transform(x: &PointCloud, q: [[f64; 2]; 2], c: [f64; 2]) -> PointCloud {
    let mut y = x.clone();
    for i in 0..x.count() {
        let p = x.point(i);
        let out = y.point_mut(i);
        for a in 0..2 {
            out[a] = q[a][0] * p[0] + q[a][1] * p[1] + c[a];
        }
    }
    y
}

fn rotation(theta: f64) -> [[f64; 2]; 2] {
    [[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]]
}

fn noiseless(x: &PointCloud) -> ProblemInstance {
    let d = x.edm().unwrap();
    ProblemInstance::with_binary_weights(d.map(f64::sqrt), extract_chain(&d), x.dim(), Some(x.clone())).unwrap()
}

#[test]
fn procrustes_inverts_rotation_and_shift() {
    let mut rng = Lcg(1);
    let truth = cloud(&mut rng, 2, 12);
    let est = transform(&truth, rotation(std::f64::consts::PI / 6.0), [0.7, -1.3]);
    let a = procrustes(&est, &truth).unwrap();
    assert!(rmsd(&a.aligned, &truth).unwrap() < 1e-10);
    assert!(a.orthogonality_error() < 1e-10);
    let inv = rotation(-std::f64::consts::PI / 6.0);
    for r in 0..2 {
        for c in 0..2 {
            assert!((a.rotation[r * 2 + c] - inv[r][c]).abs() < 1e-10);
        }
    }
}

#[test]
fn procrustes_handles_reflection() {
    let mut rng = Lcg(2);
    let truth = cloud(&mut rng, 2, 10);
    let est = transform(&truth, [[-1.0, 0.0], [0.0, 1.0]], [0.0, 0.0]);
    let a = procrustes(&est, &truth).unwrap();
    assert!(rmsd(&a.aligned, &truth).unwrap() < 1e-10);
}

#[test]
fn procrustes_identity() {
    let mut rng = Lcg(3);
    let x = cloud(&mut rng, 3, 7);
    let a = procrustes(&x, &x).unwrap();
    for r in 0..3 {
        for c in 0..3 {
            assert!((a.rotation[r * 3 + c] - if r == c { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
    assert!(a.translation.iter().all(|t| t.abs() < 1e-12));
    assert!(procrustes(&x, &cloud(&mut rng, 2, 7)).is_err());
}

#[test]
fn rmsd_examples() {
    let mut rng = Lcg(4);
    let x = cloud(&mut rng, 2, 5);
    assert_eq!(rmsd(&x, &x).unwrap(), 0.0);
    let shifted = transform(&x, [[1.0, 0.0], [0.0, 1.0]], [0.6, 0.8]);
    assert!((rmsd(&shifted, &x).unwrap() - 1.0).abs() < 1e-12);
    let a = PointCloud::from_points(1, &[vec![0.0], vec![0.0]]).unwrap();
    let b = PointCloud::from_points(1, &[vec![0.3], vec![0.4]]).unwrap();
    assert!((rmsd(&a, &b).unwrap() - 0.353_553_390_593_273_7).abs() < 1e-15);
}

#[test]
fn refine_keeps_exact_configuration() {
    let mut rng = Lcg(5);
    let truth = cloud(&mut rng, 2, 15);
    let inst = noiseless(&truth);
    let r = refine(&truth, &inst, 100).unwrap();
    assert!(rmsd(&r.points, &truth).unwrap() < 1e-12);
    assert!(r.stress_trace[0] < 1e-24);
}

#[test]
fn refine_repairs_one_perturbed_point() {
    let mut rng = Lcg(6);
    let truth = cloud(&mut rng, 2, 15);
    let inst = noiseless(&truth);
    let mut est = truth.clone();
    est.point_mut(3)[0] += 0.2;
    est.point_mut(3)[1] -= 0.1;
    let r = refine(&est, &inst, 5000).unwrap();
    assert!(r.stress_trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(*r.stress_trace.last().unwrap() <= 1e-8);
}

#[test]
fn refine_with_zero_steps_is_identity() {
    let mut rng = Lcg(7);
    let truth = cloud(&mut rng, 2, 8);
    let est = cloud(&mut rng, 2, 8);
    let r = refine(&est, &noiseless(&truth), 0).unwrap();
    assert_eq!(r.points, est);
    assert_eq!(r.stress_trace.len(), 1);
}

#[test]
fn evaluate_noiseless_truth() {
    let inst = generate_snl(&SnlConfig::new(30, 2.0, 0.0, 3)).unwrap();
    let d = inst.truth().unwrap().edm().unwrap();
    let e = evaluate(&inst, &d, 50).unwrap();
    assert!(e.rmsd < 1e-8 && e.rrmsd < 1e-8);
    assert!(e.stress_after <= e.stress_before + 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residual_is_invariant_under_rigid_motion(seed in any::<u64>(), theta in 0.0f64..6.3, sx in -3.0f64..3.0, sy in -3.0f64..3.0) {
        let mut rng = Lcg(seed);
        let (est, truth) = (cloud(&mut rng, 2, 9), cloud(&mut rng, 2, 9));
        let base = rmsd(&procrustes(&est, &truth).unwrap().aligned, &truth).unwrap();
        let moved = transform(&est, rotation(theta), [sx, sy]);
        let again = rmsd(&procrustes(&moved, &truth).unwrap().aligned, &truth).unwrap();
        prop_assert!((base - again).abs() <= 1e-10);
        let flipped = transform(&est, [[1.0, 0.0], [0.0, -1.0]], [sx, 0.0]);
        let f = rmsd(&procrustes(&flipped, &truth).unwrap().aligned, &truth).unwrap();
        prop_assert!((base - f).abs() <= 1e-10);
    }

    #[test]
    fn alignment_never_hurts(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = Lcg(seed);
        let (est, truth) = (cloud(&mut rng, dim, 11), cloud(&mut rng, dim, 11));
        let a = procrustes(&est, &truth).unwrap();
        prop_assert!(rmsd(&a.aligned, &truth).unwrap() <= rmsd(&est, &truth).unwrap() + 1e-12);
        prop_assert!(a.orthogonality_error() <= 1e-10);
    }

    #[test]
    fn gradient_matches_finite_differences(seed in any::<u64>()) {
        let mut rng = Lcg(seed);
        let inst = generate_snl(&SnlConfig::new(12, 0.9, 0.2, seed)).unwrap();
        let x = cloud(&mut rng, 2, 12);
        let g = stress_gradient(&x, &inst);
        let h = 1e-6;
        for k in 0..x.coords().len() {
            let (mut plus, mut minus) = (x.clone(), x.clone());
            plus.coords_mut()[k] += h;
            minus.coords_mut()[k] -= h;
            let fd = (stress(&plus, &inst) - stress(&minus, &inst)) / (2.0 * h);
            prop_assert!((fd - g[k]).abs() <= 1e-5 * g[k].abs().max(1.0), "{} vs {}", fd, g[k]);
        }
    }

    #[test]
    fn refine_trace_is_monotone(seed in any::<u64>()) {
        let mut rng = Lcg(seed);
        let inst = generate_snl(&SnlConfig::new(15, 0.8, 0.1, seed)).unwrap();
        let r = refine(&cloud(&mut rng, 2, 15), &inst, 200).unwrap();
        prop_assert!(r.stress_trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}
