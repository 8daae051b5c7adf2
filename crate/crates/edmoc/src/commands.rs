use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use edmoc_core::feasibility::{
    chain_satisfied, construct_disjoint_extremes, construct_nontrivial_nminus2, construct_partitioned, crowding_chain,
    is_nontrivial, regular_simplex, Part,
};
use edmoc_core::matrix_core::classical_mds;
use edmoc_core::penalty_solver::{solve_with_clock, SolveReport, Termination, TraceEntry};
use edmoc_core::postprocess::evaluate;
use edmoc_core::problem_gen::{density, generate_snl};
use edmoc_core::{OrdinalChain, PointCloud, ProblemInstance, SnlConfig, SolveConfig, SymmetricMatrix};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::{BenchArgs, Cli, Command, EvaluateArgs, FeasibilityCommand, GenerateArgs, ReplayArgs, SolveArgs};
use crate::clock::WallClock;
use crate::error::{CliError, CliResult};
use crate::io::{load_instance, read_chain, read_matrix, write_chain, write_file, write_instance, write_json, write_matrix, write_points};
use crate::manifest::RunManifest;
use crate::svg::scatter;
use edmoc_core::penalty_solver::Clock;

/// Environment variable capping the number of bench worker threads.
pub const THREADS_ENV: &str = "EDMOC_THREADS";

/// What a command produced, before it is written into the manifest.
struct Outcome {
    config: Value,
    seed: Option<u64>,
    inputs: Vec<PathBuf>,
    files: Vec<PathBuf>,
}

pub fn run(cli: Cli) -> CliResult<()> {
    execute(cli.command).map(|_| ())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("configuration types serialize to JSON")
}

fn execute(mut cmd: Command) -> CliResult<Option<RunManifest>> {
    if let Command::Replay(args) = &cmd {
        return replay(args).map(Some);
    }
    cmd.absolutize().map_err(|e| CliError::io(".", e))?;
    let clock = WallClock::new();
    let outcome = match &cmd {
        Command::Generate(a) => generate(a)?,
        Command::Solve(a) => solve(a)?,
        Command::Evaluate(a) => evaluate_cmd(a)?,
        Command::Feasibility(f) => feasibility(f, cmd.out_dir().expect("feasibility commands write files"))?,
        Command::Bench(a) => bench(a)?,
        Command::Replay(_) => unreachable!("handled above"),
    };
    let mut manifest = RunManifest::new(&cmd, outcome.config, outcome.seed, outcome.inputs);
    manifest.record(&outcome.files)?;
    manifest.wall_seconds = clock.seconds();
    let path = manifest.write()?;
    println!("manifest: {}", path.display());
    Ok(Some(manifest))
}

fn generate(a: &GenerateArgs) -> CliResult<Outcome> {
    let cfg = SnlConfig {
        n: a.n,
        half_width: a.half_width,
        radio_range: a.radio,
        noise_factor: a.nf,
        seed: a.seed,
        dim: a.dim,
        rank: a.dim.min(a.n.saturating_sub(1)).max(1),
        chain_from_delta: a.chain_from_delta,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let inst = generate_snl(&cfg)?;
    let files = write_instance(&a.out.out, &a.name, &inst)?;
    let rate = density(&inst);
    println!("generated n = {} with observation density {:.4}", inst.n(), rate);
    let mut config = to_value(&cfg);
    config["density"] = json!(rate);
    Ok(Outcome { config, seed: Some(a.seed), inputs: vec![], files })
}

#[derive(Serialize)]
struct ReportJson<'a> {
    n: usize,
    rank: usize,
    iterations: usize,
    termination: Termination,
    rho_final: f64,
    f_final: f64,
    g_final: f64,
    eps_g: f64,
    t_init: f64,
    t_eig: f64,
    t_sub: f64,
    t_total: f64,
    config: &'a SolveConfig,
    trace: &'a [TraceEntry],
}

fn report_json<'a>(inst: &ProblemInstance, cfg: &'a SolveConfig, r: &'a SolveReport) -> ReportJson<'a> {
    ReportJson {
        n: inst.n(),
        rank: inst.rank(),
        iterations: r.iterations,
        termination: r.termination,
        rho_final: r.rho_final,
        f_final: r.f_final,
        g_final: r.g_final,
        eps_g: r.eps_g,
        t_init: r.t_init,
        t_eig: r.t_eig,
        t_sub: r.t_sub,
        t_total: r.t_total,
        config: cfg,
        trace: &r.trace,
    }
}

fn validated(cfg: SolveConfig) -> CliResult<SolveConfig> {
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

/// Writes the aligned-over-truth plot, or warns when there is no truth.
fn write_plot(inst: &ProblemInstance, solution: &SymmetricMatrix, refine_steps: usize, path: &Path) -> CliResult<Option<PathBuf>> {
    let Some(truth) = inst.truth() else {
        eprintln!("warning: no ground truth available; plot skipped");
        return Ok(None);
    };
    let e = evaluate(inst, solution, refine_steps)?;
    write_file(path, &scatter(&e.refined, &truth.padded(e.refined.dim())?))?;
    Ok(Some(path.to_path_buf()))
}

fn solve(a: &SolveArgs) -> CliResult<Outcome> {
    let cfg = validated(a.solver.config())?;
    let inst = load_instance(&a.input, a.solver.rank, a.chain.as_deref())?;
    let report = solve_with_clock(&inst, &cfg, &WallClock::new())?;
    let out = &a.out.out;
    let mut files = vec![out.join("solution.csv"), out.join("embedding.csv"), out.join("report.json")];
    write_matrix(&files[0], &report.solution)?;
    write_points(&files[1], &classical_mds(&report.solution, inst.rank())?)?;
    write_json(&files[2], &report_json(&inst, &cfg, &report))?;
    if a.svg {
        files.extend(write_plot(&inst, &report.solution, a.refine_steps, &out.join("plot.svg"))?);
    }
    println!(
        "{} after {} iterations: f = {:.6e}, g = {:.6e}, t_total = {:.3}s, t_eig = {:.3}s",
        report.termination, report.iterations, report.f_final, report.g_final, report.t_total, report.t_eig
    );
    let mut inputs = vec![a.input.clone()];
    inputs.extend(a.chain.clone());
    Ok(Outcome { config: json!({ "solver": to_value(&cfg), "rank": inst.rank() }), seed: None, inputs, files })
}

fn evaluate_cmd(a: &EvaluateArgs) -> CliResult<Outcome> {
    let inst = load_instance(&a.input, a.rank, a.chain.as_deref())?;
    let solution = read_matrix(&a.solution)?;
    if solution.n() != inst.n() {
        return Err(CliError::Data(format!("solution has order {}, instance has {}", solution.n(), inst.n())));
    }
    let out = &a.out.out;
    let mut files = Vec::new();
    let mut summary = json!({ "n": inst.n(), "rank": inst.rank() });
    if inst.truth().is_some() {
        let e = evaluate(&inst, &solution, a.refine_steps)?;
        let (aligned, refined) = (out.join("aligned.csv"), out.join("refined.csv"));
        write_points(&aligned, &e.aligned)?;
        write_points(&refined, &e.refined)?;
        files.extend([aligned, refined]);
        summary["rmsd"] = json!(e.rmsd);
        summary["rrmsd"] = json!(e.rrmsd);
        summary["stress_before"] = json!(e.stress_before);
        summary["stress_after"] = json!(e.stress_after);
        println!("RMSD = {:.4e}, rRMSD = {:.4e}", e.rmsd, e.rrmsd);
        if a.svg {
            files.extend(write_plot(&inst, &solution, a.refine_steps, &out.join("plot.svg"))?);
        }
    } else {
        eprintln!("warning: no ground truth available; RMSD omitted");
        summary["rmsd"] = Value::Null;
        summary["rrmsd"] = Value::Null;
        let embedding = out.join("embedding.csv");
        write_points(&embedding, &classical_mds(&solution, inst.rank())?)?;
        files.push(embedding);
    }
    if let Some(p) = &a.report {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
        let r: Value = serde_json::from_str(&text).map_err(|e| CliError::Json { path: p.clone(), source: e })?;
        for key in ["iterations", "termination", "t_init", "t_eig", "t_sub", "t_total"] {
            summary[key] = r.get(key).cloned().unwrap_or(Value::Null);
        }
    }
    let path = out.join("evaluation.json");
    write_json(&path, &summary)?;
    files.push(path);
    let mut inputs = vec![a.input.clone(), a.solution.clone()];
    inputs.extend(a.report.clone());
    inputs.extend(a.chain.clone());
    Ok(Outcome { config: json!({ "rank": inst.rank(), "refine_steps": a.refine_steps }), seed: None, inputs, files })
}

fn construction_error(e: edmoc_core::Error) -> CliError {
    CliError::Usage(format!("construction rejected: {e}"))
}

fn verdict(satisfied: bool, nontrivial: bool) -> &'static str {
    match (satisfied, nontrivial) {
        (true, true) => "satisfied, nontrivial",
        (true, false) => "satisfied, trivial",
        (false, _) => "violated",
    }
}

/// Writes points, their EDM and a verdict against `chain`.
fn write_construction(
    out: &Path,
    name: &str,
    x: &PointCloud,
    chain: Option<&OrdinalChain>,
    mut extra: Value,
) -> CliResult<Vec<PathBuf>> {
    let d = x.edm()?;
    let mut files = vec![out.join("points.csv"), out.join("edm.csv")];
    write_points(&files[0], x)?;
    write_matrix(&files[1], &d)?;
    let nontrivial = is_nontrivial(&d, 1e-9);
    let satisfied = chain.is_none_or(|c| chain_satisfied(&d, c, 1e-9));
    if let Some(c) = chain {
        let p = out.join("chain.json");
        write_chain(&p, c)?;
        files.push(p);
    }
    let v = verdict(satisfied, nontrivial);
    extra["construction"] = json!(name);
    extra["n"] = json!(x.count());
    extra["dim"] = json!(x.dim());
    extra["chain_satisfied"] = json!(satisfied);
    extra["nontrivial"] = json!(nontrivial);
    extra["verdict"] = json!(v);
    let p = out.join("feasibility.json");
    write_json(&p, &extra)?;
    files.push(p);
    println!("{name}: {v}");
    Ok(files)
}

fn parse_parts(text: &str) -> CliResult<Vec<Vec<usize>>> {
    let parts: Vec<Vec<usize>> = text
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|block| {
            block
                .split(',')
                .map(|v| match v.trim().parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => Err(CliError::Usage(format!("`{}` is not a 1-based point label", v.trim()))),
                })
                .collect()
        })
        .collect::<CliResult<_>>()?;
    let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
    all.sort_unstable();
    if all.is_empty() || all.iter().enumerate().any(|(k, &v)| k != v) {
        return Err(CliError::Usage("parts must partition the labels 1..n".into()));
    }
    Ok(parts)
}

fn feasibility(f: &FeasibilityCommand, out: &Path) -> CliResult<Outcome> {
    let mut inputs = Vec::new();
    let mut seed = None;
    let (config, files) = match f {
        FeasibilityCommand::Simplex { n, t, .. } => {
            let x = regular_simplex(*n, *t).map_err(construction_error)?;
            let chain = OrdinalChain::canonical(*n).map_err(construction_error)?;
            let files = write_construction(out, "simplex", &x, Some(&chain), json!({ "edge_squared": t * t }))?;
            (json!({ "n": n, "t": t }), files)
        }
        FeasibilityCommand::Apex { n, chain, t, .. } => {
            let chain = match chain {
                Some(p) => {
                    inputs.push(p.clone());
                    let c = read_chain(p)?;
                    if n.is_some_and(|n| n != c.n()) {
                        return Err(CliError::Usage(format!("--n {} disagrees with the chain's {} points", n.unwrap_or(0), c.n())));
                    }
                    c
                }
                None => OrdinalChain::canonical(n.unwrap_or(0)).map_err(construction_error)?,
            };
            let (x, d) = construct_nontrivial_nminus2(&chain, *t).map_err(construction_error)?;
            let (i, j) = chain.first();
            let files = write_construction(out, "apex", &x, Some(&chain), json!({ "apex_squared": d.get(i, j) }))?;
            (json!({ "n": chain.n(), "t": t }), files)
        }
        FeasibilityCommand::Extremes { chain, rank, .. } => {
            inputs.push(chain.clone());
            let c = read_chain(chain)?;
            let files = match construct_disjoint_extremes(&c, *rank).map_err(construction_error)? {
                Some(x) => write_construction(out, "extremes", &x, Some(&c), json!({}))?,
                None => {
                    let p = out.join("feasibility.json");
                    write_json(&p, &json!({ "construction": "extremes", "n": c.n(), "verdict": "no construction applies" }))?;
                    println!("extremes: no construction applies");
                    vec![p]
                }
            };
            (json!({ "rank": rank }), files)
        }
        FeasibilityCommand::Partition { parts, rank, t, seed: s, .. } => {
            seed = *s;
            let groups = parse_parts(parts)?;
            let mut built = Vec::with_capacity(groups.len());
            for (k, members) in groups.into_iter().enumerate() {
                let size = members.len();
                let part = match s {
                    Some(base) if size >= 3 => {
                        let cfg = SnlConfig { dim: 1, rank: 1, ..SnlConfig::new(size, 10.0, 0.0, base + k as u64) };
                        Part::with_chain(members, generate_snl(&cfg)?.chain().clone())
                    }
                    _ if size >= 2 => Part::with_chain(members, OrdinalChain::canonical(size)?),
                    _ => Part::new(members),
                };
                built.push(part);
            }
            let x = construct_partitioned(&built, *rank, *t).map_err(construction_error)?;
            let d = x.edm()?;
            let per_part: Vec<Value> = built
                .iter()
                .map(|p| {
                    let pairs = p.global_chain().unwrap_or_default();
                    let ok = pairs.windows(2).all(|w| d.get(w[0].0, w[0].1) >= d.get(w[1].0, w[1].1) - 1e-9);
                    json!({ "members": p.members.iter().map(|i| i + 1).collect::<Vec<_>>(), "chain_satisfied": ok,
                            "chain": pairs.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>() })
                })
                .collect();
            let files = write_construction(out, "partition", &x, None, json!({ "parts": per_part }))?;
            (json!({ "parts": parts, "rank": rank, "t": t }), files)
        }
        FeasibilityCommand::CrowdingDemo { .. } => crowding_demo(out)?,
    };
    Ok(Outcome { config, seed, inputs, files })
}

/// One-dimensional positions whose pairwise ranking disagrees with the
/// crowding chain.
const CROWDING_POINTS: [f64; 4] = [0.0, -3.0, 1.0, 0.6];

/// Collapse threshold relative to the largest squared dissimilarity.
pub const CROWDING_RATIO: f64 = 1e-3;

/// The four-point, rank-one instance with the crowding chain.
pub fn crowding_instance() -> CliResult<ProblemInstance> {
    let pts: Vec<Vec<f64>> = CROWDING_POINTS.iter().map(|&x| vec![x]).collect();
    let delta = PointCloud::from_points(1, &pts)?.edm()?.map(f64::sqrt);
    Ok(ProblemInstance::with_binary_weights(delta, crowding_chain(), 1, None)?)
}

/// Residual threshold tight enough for the collapse to show.
pub fn crowding_config(inst: &ProblemInstance) -> SolveConfig {
    SolveConfig { eps_g: Some(1e-10 * inst.delta_sq().norm_sq()), ..SolveConfig::default() }
}

fn crowding_demo(out: &Path) -> CliResult<(Value, Vec<PathBuf>)> {
    let inst = crowding_instance()?;
    let cfg = crowding_config(&inst);
    let report = solve_with_clock(&inst, &cfg, &WallClock::new())?;
    let scale = inst.delta_sq().max_offdiag();
    let ratio = report.solution.max_offdiag() / scale;
    let files = vec![out.join("solution.csv"), out.join("report.json"), out.join("feasibility.json")];
    write_matrix(&files[0], &report.solution)?;
    write_json(&files[1], &report_json(&inst, &cfg, &report))?;
    write_json(
        &files[2],
        &json!({
            "construction": "crowding-demo",
            "n": 4,
            "rank": 1,
            "collapse_ratio": ratio,
            "max_offdiag": report.solution.max_offdiag(),
            "max_delta_sq": scale,
            "collapsed": ratio <= CROWDING_RATIO,
            "iterations": report.iterations,
            "termination": report.termination,
        }),
    )?;
    println!("crowding-demo: collapse ratio {ratio:.3e} after {} iterations", report.iterations);
    Ok((json!({ "solver": to_value(&cfg), "points": CROWDING_POINTS }), files))
}

#[derive(Debug, Clone, Serialize)]
struct BenchRow {
    seed: u64,
    density: f64,
    iterations: usize,
    termination: Termination,
    rmsd: f64,
    rrmsd: f64,
    t_total: f64,
    t_eig: f64,
    t_sub: f64,
}

/// Worker count: `EDMOC_THREADS` if set, else the available parallelism,
/// never more than the number of runs.
pub fn bench_threads(runs: usize) -> CliResult<usize> {
    let cap = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?,
        Err(_) => std::thread::available_parallelism().map_or(1, usize::from),
    };
    Ok(cap.min(runs).max(1))
}

fn bench_one(a: &BenchArgs, cfg: &SolveConfig, seed: u64) -> CliResult<BenchRow> {
    let mut snl = SnlConfig::new(a.n, a.radio, a.nf, seed);
    if let Some(r) = a.solver.rank {
        snl.rank = r;
    }
    snl.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let inst = generate_snl(&snl)?;
    let report = solve_with_clock(&inst, cfg, &WallClock::new())?;
    let e = evaluate(&inst, &report.solution, a.refine_steps)?;
    Ok(BenchRow {
        seed,
        density: density(&inst),
        iterations: report.iterations,
        termination: report.termination,
        rmsd: e.rmsd,
        rrmsd: e.rrmsd,
        t_total: report.t_total,
        t_eig: report.t_eig,
        t_sub: report.t_sub,
    })
}

fn bench(a: &BenchArgs) -> CliResult<Outcome> {
    if a.runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let cfg = validated(a.solver.config())?;
    let threads = bench_threads(a.runs)?;
    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<CliResult<BenchRow>>> = Mutex::new(Vec::with_capacity(a.runs));
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= a.runs {
                    break;
                }
                let row = bench_one(a, &cfg, a.seed + k as u64);
                rows.lock().expect("no worker panics while holding the lock").push(row);
            });
        }
    });
    let mut rows = rows.into_inner().expect("workers finished").into_iter().collect::<CliResult<Vec<_>>>()?;
    rows.sort_by_key(|r| r.seed);
    let mean = |f: fn(&BenchRow) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
    let summary = json!({
        "n": a.n,
        "radio": a.radio,
        "nf": a.nf,
        "runs": a.runs,
        "mean_rmsd": mean(|r| r.rmsd),
        "mean_rrmsd": mean(|r| r.rrmsd),
        "mean_iterations": mean(|r| r.iterations as f64),
        "mean_density": mean(|r| r.density),
        "t_mean_total": mean(|r| r.t_total),
        "rows": rows,
    });
    let path = a.out.out.join("bench.json");
    write_json(&path, &summary)?;
    println!(
        "{} runs on {threads} threads: mean RMSD {:.4e}, mean rRMSD {:.4e}",
        a.runs,
        mean(|r| r.rmsd),
        mean(|r| r.rrmsd)
    );
    Ok(Outcome {
        config: json!({ "solver": to_value(&cfg), "refine_steps": a.refine_steps, "threads": threads }),
        seed: Some(a.seed),
        inputs: vec![],
        files: vec![path],
    })
}

fn replay(a: &ReplayArgs) -> CliResult<RunManifest> {
    let recorded = RunManifest::read(&a.manifest)?;
    let mut cmd = recorded.invocation.clone();
    if matches!(cmd, Command::Replay(_)) {
        return Err(CliError::Data("a manifest cannot record a replay".into()));
    }
    if let Some(out) = &a.out {
        cmd.set_out_dir(std::path::absolute(out).map_err(|e| CliError::io(out, e))?);
    }
    let fresh = execute(cmd)?.expect("non-replay commands produce a manifest");
    if a.check {
        let bad = recorded.mismatches(&fresh);
        if !bad.is_empty() {
            return Err(CliError::Data(format!("replay differs from the recording in: {}", bad.join(", "))));
        }
        println!("replay reproduced {} recorded outputs", recorded.outputs.len());
    }
    Ok(fresh)
}
