use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use edmoc_core::matrix_core::EigenMethod;
use edmoc_core::SolveConfig;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[command(name = "edmoc", version, about = "Euclidean distance matrix fitting under a full ordinal chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Generate a random sensor-network instance.
    Generate(GenerateArgs),
    /// Fit a rank-constrained distance matrix to an instance.
    Solve(SolveArgs),
    /// Embed, align and refine a solution against the ground truth.
    Evaluate(EvaluateArgs),
    /// Explicit point configurations that satisfy an ordinal chain.
    #[command(subcommand)]
    Feasibility(FeasibilityCommand),
    /// Solve and evaluate a batch of seeded instances in parallel.
    Bench(BenchArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    /// Pairs farther apart than this are unobserved.
    #[arg(long)]
    pub radio: f64,
    /// Multiplicative noise level.
    #[arg(long, default_value_t = 0.1)]
    pub nf: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Dimension of the ground-truth points.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Points are drawn from [-w, w]^dim.
    #[arg(long, default_value_t = 0.5)]
    pub half_width: f64,
    /// Rank the pairs by the noisy observations instead of the true distances.
    #[arg(long)]
    pub chain_from_delta: bool,
    /// Base name of the written files.
    #[arg(long, default_value = "instance")]
    pub name: String,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenArg {
    Auto,
    Dense,
    Krylov,
}

impl From<EigenArg> for EigenMethod {
    fn from(e: EigenArg) -> Self {
        match e {
            EigenArg::Auto => EigenMethod::Auto,
            EigenArg::Dense => EigenMethod::Dense,
            EigenArg::Krylov => EigenMethod::Krylov,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SolverArgs {
    /// Embedding dimension; defaults to the ground-truth dimension, else 2.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 1e-3)]
    pub eps1: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub eps2: f64,
    /// Absolute rank-residual threshold.
    #[arg(long)]
    pub eps_g: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub min_iters: usize,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    #[arg(long)]
    pub rho0: Option<f64>,
    #[arg(long, default_value_t = 1.25)]
    pub rho_growth: f64,
    #[arg(long, value_enum, default_value_t = EigenArg::Auto)]
    pub eigen: EigenArg,
}

impl SolverArgs {
    pub fn config(&self) -> SolveConfig {
        SolveConfig {
            eps1: self.eps1,
            eps2: self.eps2,
            eps_g: self.eps_g,
            rho0: self.rho0,
            rho_growth: self.rho_growth,
            min_iters: self.min_iters,
            max_iters: self.max_iters,
            eigen_method: self.eigen.into(),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SolveArgs {
    /// Dissimilarity matrix file.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Chain file overriding the instance's own chain.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Refinement steps used for the plot.
    #[arg(long, default_value_t = 1000)]
    pub refine_steps: usize,
    /// Also draw the aligned estimate over the ground truth.
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct EvaluateArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Solved distance matrix.
    #[arg(long)]
    pub solution: PathBuf,
    /// Solver report whose timings are copied into the summary.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub chain: Option<PathBuf>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub refine_steps: usize,
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityCommand {
    /// Regular simplex with edge length t.
    Simplex {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Two apexes over a simplex, in dimension n - 2, satisfying a chain.
    Apex {
        /// Number of points; taken from the chain when one is given.
        #[arg(long, required_unless_present = "chain")]
        n: Option<usize>,
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Coincident-point construction for chains with disjoint extreme pairs.
    Extremes {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Independent blocks, each satisfying its own chain.
    Partition {
        /// 1-based blocks such as `1,2,3,4;5,6,7,8`.
        #[arg(long)]
        parts: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Give each block a random chain drawn from this seed instead of the
        /// canonical one.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solve the four-point instance whose chain forces every point together.
    CrowdingDemo {
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct BenchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub radio: f64,
    #[arg(long, default_value_t = 0.1)]
    pub nf: f64,
    /// First seed; runs use consecutive seeds.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 1000)]
    pub refine_steps: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Output directory; defaults to the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare the new outputs with the recorded fingerprints.
    #[arg(long)]
    pub check: bool,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Solve(_) => "solve",
            Command::Evaluate(_) => "evaluate",
            Command::Feasibility(f) => match f {
                FeasibilityCommand::Simplex { .. } => "feasibility simplex",
                FeasibilityCommand::Apex { .. } => "feasibility apex",
                FeasibilityCommand::Extremes { .. } => "feasibility extremes",
                FeasibilityCommand::Partition { .. } => "feasibility partition",
                FeasibilityCommand::CrowdingDemo { .. } => "feasibility crowding-demo",
            },
            Command::Bench(_) => "bench",
            Command::Replay(_) => "replay",
        }
    }

    pub fn out_dir(&self) -> Option<&Path> {
        self.out_args().map(|o| o.out.as_path())
    }

    fn out_args(&self) -> Option<&OutArgs> {
        match self {
            Command::Generate(a) => Some(&a.out),
            Command::Solve(a) => Some(&a.out),
            Command::Evaluate(a) => Some(&a.out),
            Command::Bench(a) => Some(&a.out),
            Command::Feasibility(f) => Some(match f {
                FeasibilityCommand::Simplex { out, .. }
                | FeasibilityCommand::Apex { out, .. }
                | FeasibilityCommand::Extremes { out, .. }
                | FeasibilityCommand::Partition { out, .. }
                | FeasibilityCommand::CrowdingDemo { out } => out,
            }),
            Command::Replay(_) => None,
        }
    }

    fn paths_mut(&mut self) -> Vec<&mut PathBuf> {
        let mut v: Vec<&mut PathBuf> = Vec::new();
        match self {
            Command::Generate(a) => v.push(&mut a.out.out),
            Command::Solve(a) => {
                v.push(&mut a.input);
                v.extend(a.chain.as_mut());
                v.push(&mut a.out.out);
            }
            Command::Evaluate(a) => {
                v.push(&mut a.input);
                v.push(&mut a.solution);
                v.extend(a.report.as_mut());
                v.extend(a.chain.as_mut());
                v.push(&mut a.out.out);
            }
            Command::Bench(a) => v.push(&mut a.out.out),
            Command::Feasibility(f) => match f {
                FeasibilityCommand::Simplex { out, .. }
                | FeasibilityCommand::Partition { out, .. }
                | FeasibilityCommand::CrowdingDemo { out } => v.push(&mut out.out),
                FeasibilityCommand::Apex { chain, out, .. } => {
                    v.extend(chain.as_mut());
                    v.push(&mut out.out);
                }
                FeasibilityCommand::Extremes { chain, out, .. } => {
                    v.push(chain);
                    v.push(&mut out.out);
                }
            },
            Command::Replay(a) => {
                v.push(&mut a.manifest);
                v.extend(a.out.as_mut());
            }
        }
        v
    }

    /// Rewrites every path as an absolute one, so a recorded command can be
    /// replayed from any working directory.
    pub fn absolutize(&mut self) -> std::io::Result<()> {
        for p in self.paths_mut() {
            *p = std::path::absolute(&*p)?;
        }
        Ok(())
    }

    pub fn set_out_dir(&mut self, dir: PathBuf) {
        match self {
            Command::Generate(a) => a.out.out = dir,
            Command::Solve(a) => a.out.out = dir,
            Command::Evaluate(a) => a.out.out = dir,
            Command::Bench(a) => a.out.out = dir,
            Command::Feasibility(f) => match f {
                FeasibilityCommand::Simplex { out, .. }
                | FeasibilityCommand::Apex { out, .. }
                | FeasibilityCommand::Extremes { out, .. }
                | FeasibilityCommand::Partition { out, .. }
                | FeasibilityCommand::CrowdingDemo { out } => out.out = dir,
            },
            Command::Replay(a) => a.out = Some(dir),
        }
    }
}
