use alloc::vec;
use alloc::vec::Vec;

use super::config::{Clock, NoClock, SolveConfig, SolveReport, Termination, TraceEntry};
use super::ProblemInstance;
use crate::error::{Error, Result};
use crate::isotonic::PavaWorkspace;
use crate::matrix_core::spectral::EigenMethod;
use crate::matrix_core::spectral::leading_eigenpairs_warm;
use crate::matrix_core::{assemble_projection, center, kprog_from_parts, project_rank_cone_with, ConeProjection, SymmetricMatrix};
use crate::problem_gen::shortest_path_completion;

/// `Δ∘Δ` when every pair is observed, otherwise squared shortest-path
/// lengths over the observed pairs.
pub fn initial_guess(inst: &ProblemInstance) -> Result<SymmetricMatrix> {
    if inst.is_fully_observed() {
        Ok(inst.delta_sq())
    } else {
        Ok(shortest_path_completion(inst.delta())?.hadamard_square())
    }
}

/// `f(D) = ½‖W∘(D − Δ∘Δ)‖²` over the full matrix.
pub fn objective(inst: &ProblemInstance, d: &SymmetricMatrix) -> f64 {
    let n = inst.n();
    let (dp, dl, wp) = (d.packed(), inst.delta().packed(), inst.weights().packed());
    let mut diag = 0.0;
    let mut off = 0.0;
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            let r = wp[k] * (dp[k] - dl[k] * dl[k]);
            if i == j {
                diag += r * r;
            } else {
                off += r * r;
            }
            k += 1;
        }
    }
    0.5 * diag + off
}

fn cone_of(d: &SymmetricMatrix, rank: usize, method: EigenMethod, warm: Option<&ConeProjection>) -> Result<ConeProjection> {
    project_rank_cone_with(&d.scaled(-1.0), rank, method, warm.map(|c| &c.pairs))
}

/// Projection of `−D`, returning the seconds spent in the eigensolver alone.
fn timed_cone(
    d: &SymmetricMatrix,
    rank: usize,
    method: EigenMethod,
    warm: Option<&ConeProjection>,
    clock: &dyn Clock,
) -> Result<(ConeProjection, f64)> {
    let minus = d.scaled(-1.0);
    let centered = center(&minus);
    let t = clock.seconds();
    let pairs = leading_eigenpairs_warm(&centered, rank, method, warm.map(|c| &c.pairs))?;
    let t_eig = clock.seconds() - t;
    Ok((assemble_projection(&minus, &centered, pairs)?, t_eig))
}

/// `f(D) + ρ·g(D)`.
pub fn penalized_objective(inst: &ProblemInstance, d: &SymmetricMatrix, rho: f64) -> Result<f64> {
    let g = cone_of(d, inst.rank(), EigenMethod::Auto, None)?.half_gap_sq;
    Ok(objective(inst, d) + rho * g)
}

/// `g_m(D, Dᵏ) = ½‖D‖² − ½‖Y‖² + ⟨Y, D − Dᵏ⟩` with `Y = Π(−Dᵏ)`; an upper
/// bound on `g(D)` that is tight at `D = Dᵏ`.
pub fn majorant(d: &SymmetricMatrix, dk: &SymmetricMatrix, rank: usize) -> Result<f64> {
    let y = cone_of(dk, rank, EigenMethod::Auto, None)?.projection;
    Ok(0.5 * d.norm_sq() - 0.5 * y.norm_sq() + y.inner(&d.sub(dk)))
}

/// Chain-ordered data reused by every subproblem.
struct ChainSystem {
    n: usize,
    offsets: Vec<usize>,
    w2: Vec<f64>,
    w2_dsq: Vec<f64>,
    targets: Vec<f64>,
    h2: Vec<f64>,
    out: Vec<f64>,
    pava: PavaWorkspace,
}

impl ChainSystem {
    fn new(inst: &ProblemInstance) -> Self {
        let offsets = inst.chain().packed_offsets();
        let (w, dl) = (inst.weights().packed(), inst.delta().packed());
        let w2: Vec<f64> = offsets.iter().map(|&o| w[o] * w[o]).collect();
        let w2_dsq = offsets.iter().zip(&w2).map(|(&o, &a)| a * dl[o] * dl[o]).collect();
        let m = offsets.len();
        Self {
            n: inst.n(),
            offsets,
            w2,
            w2_dsq,
            targets: vec![0.0; m],
            h2: vec![0.0; m],
            out: vec![0.0; m],
            pava: PavaWorkspace::new(),
        }
    }

    fn scatter(&self) -> SymmetricMatrix {
        let mut d = SymmetricMatrix::zeros(self.n).expect("order validated by the instance");
        let data = d.packed_mut();
        for (&o, &v) in self.offsets.iter().zip(&self.out) {
            data[o] = v;
        }
        d
    }

    /// Closest chain-feasible matrix to `d` in the plain Frobenius norm.
    fn project(&mut self, d: &SymmetricMatrix) -> SymmetricMatrix {
        let p = d.packed();
        for (t, &o) in self.targets.iter_mut().zip(&self.offsets) {
            *t = p[o];
        }
        self.pava.solve_into(&self.targets, None, &mut self.out);
        self.scatter()
    }

    /// Minimizer of `f(D) + ρ g_m(D, Dᵏ)` over the chain, given `Y = Π(−Dᵏ)`.
    fn step(&mut self, y: &SymmetricMatrix, rho: f64) -> SymmetricMatrix {
        let yp = y.packed();
        for k in 0..self.offsets.len() {
            let h2 = self.w2[k] + rho;
            self.h2[k] = h2;
            self.targets[k] = (self.w2_dsq[k] - rho * yp[self.offsets[k]]) / h2;
        }
        self.pava.solve_into(&self.targets, Some(&self.h2), &mut self.out);
        self.scatter()
    }
}

/// One majorized subproblem at `Dᵏ` with penalty `ρ`. The result has a zero
/// diagonal and satisfies the instance's chain exactly.
pub fn majorized_subproblem(inst: &ProblemInstance, dk: &SymmetricMatrix, rho: f64) -> Result<SymmetricMatrix> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidConfig(alloc::format!("penalty must be positive, got {rho}")));
    }
    if dk.n() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), found: dk.n() });
    }
    let y = cone_of(dk, inst.rank(), EigenMethod::Auto, None)?.projection;
    Ok(ChainSystem::new(inst).step(&y, rho))
}

pub fn solve(inst: &ProblemInstance, cfg: &SolveConfig) -> Result<SolveReport> {
    solve_with_clock(inst, cfg, &NoClock)
}

/// Runs the majorized penalty iteration from the chain projection of
/// [`initial_guess`], so every iterate is feasible.
pub fn solve_with_clock(inst: &ProblemInstance, cfg: &SolveConfig, clock: &dyn Clock) -> Result<SolveReport> {
    solve_observed(inst, cfg, clock, &mut |_, _| {})
}

/// [`solve_with_clock`], calling `observer` with every new trace entry and
/// the iterate it describes.
pub fn solve_observed(
    inst: &ProblemInstance,
    cfg: &SolveConfig,
    clock: &dyn Clock,
    observer: &mut dyn FnMut(&TraceEntry, &SymmetricMatrix),
) -> Result<SolveReport> {
    cfg.validate()?;
    let start = clock.seconds();
    let rank = inst.rank();
    let method = cfg.eigen_method;

    let d0 = initial_guess(inst)?;
    let eps_g = cfg.resolved_eps_g(&d0);
    let mut rho = cfg.resolved_rho0(inst.weights());
    let mut system = ChainSystem::new(inst);
    let mut d = system.project(&d0);
    let t_init = clock.seconds() - start;

    let (mut cone, mut t_eig_total) = timed_cone(&d, rank, method, None, clock)?;
    let mut t_sub_total = 0.0;
    let mut f = objective(inst, &d);
    if !f.is_finite() || !cone.half_gap_sq.is_finite() {
        return Err(Error::NonFinite(0));
    }

    let mut trace: Vec<TraceEntry> = Vec::new();
    let termination = loop {
        let k = trace.len();
        if cone.half_gap_sq <= eps_g {
            break Termination::Residual;
        }
        if k >= cfg.max_iters {
            break Termination::MaxIters;
        }

        let t = clock.seconds();
        let d_new = system.step(&cone.projection, rho);
        let t_sub = clock.seconds() - t;

        let (cone_new, t_eig) = timed_cone(&d_new, rank, method, Some(&cone), clock)?;

        let f_new = objective(inst, &d_new);
        let g_new = cone_new.half_gap_sq;
        if !f_new.is_finite() || !g_new.is_finite() {
            return Err(Error::NonFinite(k + 1));
        }
        let fprog = (f - f_new) / (rho + f);
        let kprog = match kprog_from_parts(g_new, cone_new.centered_norm_sq, d_new.norm_sq()) {
            Ok(v) => v,
            Err(Error::DegenerateCentering) => 0.0,
            Err(e) => return Err(e),
        };
        trace.push(TraceEntry {
            iteration: k + 1,
            rho,
            f: f_new,
            g: g_new,
            penalized_before: f + rho * cone.half_gap_sq,
            penalized_after: f_new + rho * g_new,
            fprog,
            kprog,
            t_sub,
            t_eig,
        });
        observer(trace.last().expect("entry just pushed"), &d_new);
        t_sub_total += t_sub;
        t_eig_total += t_eig;
        d = d_new;
        cone = cone_new;
        f = f_new;

        if fprog <= cfg.eps1 && kprog <= cfg.eps2 && trace.len() >= cfg.min_iters {
            break Termination::Converged;
        }
        if kprog > cfg.eps2 {
            rho *= cfg.rho_growth;
        }
    };

    Ok(SolveReport {
        iterations: trace.len(),
        trace,
        termination,
        rho_final: rho,
        f_final: f,
        g_final: cone.half_gap_sq,
        eps_g,
        solution: d,
        t_init,
        t_eig: t_eig_total,
        t_sub: t_sub_total,
        t_total: clock.seconds() - start,
    })
}
