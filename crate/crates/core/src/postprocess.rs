//! From a solved distance matrix to coordinates compared against ground truth:
//! classical MDS, orthogonal Procrustes alignment, gradient refinement of the
//! raw stress, and RMSD.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::math::{dot, sqrt};
use crate::matrix_core::{classical_mds, PointCloud, SymmetricMatrix};
use crate::penalty_solver::ProblemInstance;

const ARMIJO: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MAX_HALVINGS: usize = 60;
const REL_TOL: f64 = 1e-6;

/// `aligned_i = rotation · est_i + translation`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentResult {
    /// Row-major `r × r` orthogonal matrix; reflections are allowed.
    pub rotation: Vec<f64>,
    pub translation: Vec<f64>,
    pub aligned: PointCloud,
}

impl AlignmentResult {
    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// Largest entry of `QᵀQ − I`.
    pub fn orthogonality_error(&self) -> f64 {
        let r = self.dim();
        let q = &self.rotation;
        let mut worst: f64 = 0.0;
        for a in 0..r {
            for b in 0..r {
                let s: f64 = (0..r).map(|k| q[k * r + a] * q[k * r + b]).sum();
                worst = worst.max((s - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
        worst
    }
}

fn check_shapes(a: &PointCloud, b: &PointCloud) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: a.dim() });
    }
    if a.count() != b.count() {
        return Err(Error::DimensionMismatch { expected: b.count(), found: a.count() });
    }
    Ok(())
}

/// Orthogonal `Q` and shift `c` minimizing `Σ‖truth_i − (Q·est_i + c)‖²`.
pub fn procrustes(est: &PointCloud, truth: &PointCloud) -> Result<AlignmentResult> {
    check_shapes(est, truth)?;
    let r = est.dim();
    let (ce, ct) = (est.centroid(), truth.centroid());
    // M = Σ (t_i − t̄)(e_i − ē)ᵀ
    let mut m = DMatrix::<f64>::zeros(r, r);
    for i in 0..est.count() {
        let (e, t) = (est.point(i), truth.point(i));
        for a in 0..r {
            for b in 0..r {
                m[(a, b)] += (t[a] - ct[a]) * (e[b] - ce[b]);
            }
        }
    }
    let svd = m.svd(true, true);
    let (u, v_t) = (svd.u.expect("requested U"), svd.v_t.expect("requested Vᵀ"));
    let q = u * v_t;
    let rotation: Vec<f64> = (0..r).flat_map(|a| (0..r).map(move |b| (a, b))).map(|(a, b)| q[(a, b)]).collect();
    let translation: Vec<f64> = (0..r)
        .map(|a| ct[a] - (0..r).map(|b| rotation[a * r + b] * ce[b]).sum::<f64>())
        .collect();
    let mut aligned = est.clone();
    for i in 0..est.count() {
        let e = est.point(i);
        let out = aligned.point_mut(i);
        for a in 0..r {
            out[a] = dot(&rotation[a * r..(a + 1) * r], e) + translation[a];
        }
    }
    Ok(AlignmentResult { rotation, translation, aligned })
}

/// `√((1/n) Σ‖x_i − y_i‖²)`
pub fn rmsd(aligned: &PointCloud, truth: &PointCloud) -> Result<f64> {
    check_shapes(aligned, truth)?;
    let sum: f64 = aligned
        .coords()
        .iter()
        .zip(truth.coords())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sqrt(sum / aligned.count() as f64))
}

/// Observed pairs `(i, j, W_ij, δ_ij)`.
fn observed_edges(inst: &ProblemInstance) -> Vec<(usize, usize, f64, f64)> {
    let mut edges = Vec::new();
    let w = inst.weights();
    inst.delta().for_each_pair(|i, j, d| {
        let wij = w.get(i, j);
        if wij > 0.0 {
            edges.push((i, j, wij, d));
        }
    });
    edges
}

/// `Σ W_ij (‖x_i − x_j‖ − δ_ij)²` over observed pairs.
pub fn stress(x: &PointCloud, inst: &ProblemInstance) -> f64 {
    stress_over(x, &observed_edges(inst))
}

fn stress_over(x: &PointCloud, edges: &[(usize, usize, f64, f64)]) -> f64 {
    edges.iter().map(|&(i, j, w, d)| { let e = x.distance(i, j) - d; w * e * e }).sum()
}

/// Analytic gradient of [`stress`], laid out like [`PointCloud::coords`].
/// Coincident pairs contribute nothing.
pub fn stress_gradient(x: &PointCloud, inst: &ProblemInstance) -> Vec<f64> {
    gradient_over(x, &observed_edges(inst))
}

fn gradient_over(x: &PointCloud, edges: &[(usize, usize, f64, f64)]) -> Vec<f64> {
    let dim = x.dim();
    let mut g = vec![0.0; x.coords().len()];
    for &(i, j, w, d) in edges {
        let dist = x.distance(i, j);
        if dist == 0.0 {
            continue;
        }
        let coef = 2.0 * w * (dist - d) / dist;
        let (xi, xj) = (x.point(i), x.point(j));
        for k in 0..dim {
            let s = coef * (xi[k] - xj[k]);
            g[i * dim + k] += s;
            g[j * dim + k] -= s;
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub points: PointCloud,
    /// Stress before the first step and after every accepted step.
    pub stress_trace: Vec<f64>,
}

/// Gradient descent with Armijo backtracking on [`stress`].
///
/// Stops after `max_steps` accepted steps, when the relative decrease drops
/// below `1e-6`, or when no step length gives sufficient decrease.
pub fn refine(est: &PointCloud, inst: &ProblemInstance, max_steps: usize) -> Result<Refinement> {
    if est.count() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), found: est.count() });
    }
    let edges = observed_edges(inst);
    let mut x = est.clone();
    let mut s = stress_over(&x, &edges);
    let mut trace = vec![s];
    let mut alpha = 1.0;
    for _ in 0..max_steps {
        if s == 0.0 {
            break;
        }
        let g = gradient_over(&x, &edges);
        let gg = dot(&g, &g);
        if gg == 0.0 {
            break;
        }
        let mut accepted = None;
        let mut trial = x.clone();
        for _ in 0..MAX_HALVINGS {
            for ((t, &xc), &gc) in trial.coords_mut().iter_mut().zip(x.coords()).zip(&g) {
                *t = xc - alpha * gc;
            }
            let s_trial = stress_over(&trial, &edges);
            if s_trial <= s - ARMIJO * alpha * gg {
                accepted = Some(s_trial);
                break;
            }
            alpha *= BACKTRACK;
        }
        let Some(s_new) = accepted else { break };
        let rel = (s - s_new) / s;
        x = trial;
        s = s_new;
        trace.push(s);
        alpha /= BACKTRACK;
        if rel < REL_TOL {
            break;
        }
    }
    Ok(Refinement { points: x, stress_trace: trace })
}

/// Outcome of embedding, aligning and refining a solved matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub embedding: PointCloud,
    pub aligned: PointCloud,
    pub rmsd: f64,
    pub refined: PointCloud,
    pub rrmsd: f64,
    pub stress_before: f64,
    pub stress_after: f64,
}

/// cMDS in the instance rank, Procrustes onto the truth (RMSD), then refine
/// the aligned points, align again (rRMSD). Coordinates are zero padded when
/// the rank and the truth dimension differ.
pub fn evaluate(inst: &ProblemInstance, solution: &SymmetricMatrix, refine_steps: usize) -> Result<Evaluation> {
    let truth = inst
        .truth()
        .ok_or_else(|| Error::InvalidInstance("evaluation needs ground-truth coordinates".into()))?;
    let embedding = classical_mds(solution, inst.rank())?;
    let dim = embedding.dim().max(truth.dim());
    let truth = truth.padded(dim)?;
    let aligned = procrustes(&embedding.padded(dim)?, &truth)?.aligned;
    let rmsd_value = rmsd(&aligned, &truth)?;
    let refinement = refine(&aligned, inst, refine_steps)?;
    let refined = procrustes(&refinement.points, &truth)?.aligned;
    let rrmsd = rmsd(&refined, &truth)?;
    Ok(Evaluation {
        embedding,
        aligned,
        rmsd: rmsd_value,
        refined,
        rrmsd,
        stress_before: refinement.stress_trace[0],
        stress_after: *refinement.stress_trace.last().expect("trace starts with the initial stress"),
    })
}
