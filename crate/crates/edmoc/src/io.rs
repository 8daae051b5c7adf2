//! On-disk formats.
//!
//! * Matrices: a header line `n=<int>` followed by `n` rows of `n`
//!   comma-separated reals.
//! * Coordinates: `r` rows of `n` comma-separated reals, one column per point.
//!   An instance `name.csv` may carry its ground truth in `name.truth.csv`
//!   and its chain in `name.chain.json`.
//! * Chains: a JSON array of 1-based `[i, j]` pairs.
//!
//! Reals are written with 17 significant digits so every value round-trips.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use edmoc_core::problem_gen::{extract_chain, shortest_path_completion};
use edmoc_core::{OrdinalChain, PointCloud, ProblemInstance, SymmetricMatrix};
use serde::Serialize;

use crate::error::{CliError, CliResult};

const SYMMETRY_TOL: f64 = 1e-9;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Json { path: path.into(), source: e })?;
    text.push('\n');
    write_file(path, &text)
}

fn push_row(out: &mut String, row: impl IntoIterator<Item = f64>) {
    for (k, v) in row.into_iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{v:.16e}").expect("writing to a String cannot fail");
    }
    out.push('\n');
}

fn parse_row(path: &Path, line_no: usize, line: &str) -> CliResult<Vec<f64>> {
    line.split(',')
        .map(|field| {
            let field = field.trim();
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::parse(path, line_no, format!("`{field}` is not a finite number")))
        })
        .collect()
}

/// Non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

pub fn format_matrix(m: &SymmetricMatrix) -> String {
    let n = m.n();
    let mut out = format!("n={n}\n");
    for i in 0..n {
        push_row(&mut out, (0..n).map(|j| m.get(i, j)));
    }
    out
}

pub fn write_matrix(path: &Path, m: &SymmetricMatrix) -> CliResult<()> {
    write_file(path, &format_matrix(m))
}

pub fn parse_matrix(path: &Path, text: &str) -> CliResult<SymmetricMatrix> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| CliError::parse(path, 1, "empty file"))?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| CliError::parse(path, hline, format!("expected header `n=<int>`, found `{header}`")))?;
    if n < 2 {
        return Err(CliError::parse(path, hline, format!("matrix order must be at least 2, got {n}")));
    }
    let mut rows = Vec::with_capacity(n);
    let mut row_lines = Vec::with_capacity(n);
    let mut last = hline;
    for (line_no, line) in lines {
        if rows.len() == n {
            return Err(CliError::parse(path, line_no, format!("more than {n} matrix rows")));
        }
        let row = parse_row(path, line_no, line)?;
        if row.len() != n {
            return Err(CliError::parse(path, line_no, format!("expected {n} values, found {}", row.len())));
        }
        rows.push(row);
        row_lines.push(line_no);
        last = line_no;
    }
    if rows.len() != n {
        return Err(CliError::parse(path, last, format!("expected {n} matrix rows, found {}", rows.len())));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !((rows[i][j] - rows[j][i]).abs() <= SYMMETRY_TOL) {
                return Err(CliError::parse(
                    path,
                    row_lines[j],
                    format!("entry ({}, {}) differs from its transpose by more than {SYMMETRY_TOL:e}", j + 1, i + 1),
                ));
            }
        }
    }
    Ok(SymmetricMatrix::from_rows(&rows, SYMMETRY_TOL)?)
}

pub fn read_matrix(path: &Path) -> CliResult<SymmetricMatrix> {
    parse_matrix(path, &read(path)?)
}

pub fn format_points(x: &PointCloud) -> String {
    let mut out = String::new();
    for row in x.to_rows() {
        push_row(&mut out, row);
    }
    out
}

pub fn write_points(path: &Path, x: &PointCloud) -> CliResult<()> {
    write_file(path, &format_points(x))
}

pub fn read_points(path: &Path) -> CliResult<PointCloud> {
    let text = read(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line_no, line) in content_lines(&text) {
        let row = parse_row(path, line_no, line)?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::parse(path, line_no, format!("expected {} values, found {}", first.len(), row.len())));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::parse(path, 1, "no coordinate rows"));
    }
    Ok(PointCloud::from_rows(&rows)?)
}

pub fn write_chain(path: &Path, chain: &OrdinalChain) -> CliResult<()> {
    let pairs: Vec<[usize; 2]> = chain.to_one_based().into_iter().map(|(i, j)| [i, j]).collect();
    let mut text = String::from("[");
    for (k, [i, j]) in pairs.iter().enumerate() {
        if k > 0 {
            text.push(',');
        }
        write!(text, "[{i},{j}]").expect("writing to a String cannot fail");
    }
    text.push_str("]\n");
    write_file(path, &text)
}

/// Reads a chain; the order is inferred from the largest index.
pub fn read_chain(path: &Path) -> CliResult<OrdinalChain> {
    let text = read(path)?;
    let pairs: Vec<[usize; 2]> = serde_json::from_str(&text).map_err(|e| CliError::Json { path: path.into(), source: e })?;
    let n = pairs.iter().flatten().copied().max().unwrap_or(0);
    let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|[i, j]| (i, j)).collect();
    OrdinalChain::from_one_based(n, &pairs).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// `dir/name.truth.csv` for `dir/name.csv`.
pub fn companion(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

/// Writes `name.csv`, `name.truth.csv` (when present) and `name.chain.json`
/// into `dir`, returning the written paths.
pub fn write_instance(dir: &Path, name: &str, inst: &ProblemInstance) -> CliResult<Vec<PathBuf>> {
    let base = dir.join(format!("{name}.csv"));
    write_matrix(&base, inst.delta())?;
    let mut written = vec![base.clone()];
    if let Some(x) = inst.truth() {
        let p = companion(&base, "truth.csv");
        write_points(&p, x)?;
        written.push(p);
    }
    let p = companion(&base, "chain.json");
    write_chain(&p, inst.chain())?;
    written.push(p);
    Ok(written)
}

/// Loads a dissimilarity file with binary weights.
///
/// The chain is, in order of preference: `chain`, the companion
/// `name.chain.json`, the ranking of the companion ground truth's EDM, or the
/// ranking of the squared shortest-path completion of the dissimilarities.
/// The rank defaults to the ground-truth dimension, else 2.
pub fn load_instance(path: &Path, rank: Option<usize>, chain: Option<&Path>) -> CliResult<ProblemInstance> {
    let delta = read_matrix(path)?;
    let n = delta.n();
    for i in 0..n {
        if delta.get(i, i) != 0.0 {
            return Err(CliError::Data(format!("{}: diagonal entry {} is nonzero", path.display(), i + 1)));
        }
    }
    let mut negative = None;
    delta.for_each_pair(|i, j, v| {
        if v < 0.0 && negative.is_none() {
            negative = Some((i + 1, j + 1, v));
        }
    });
    if let Some((i, j, v)) = negative {
        return Err(CliError::Data(format!("{}: dissimilarity ({i}, {j}) = {v} is negative", path.display())));
    }

    let truth_path = companion(path, "truth.csv");
    let truth = if truth_path.exists() { Some(read_points(&truth_path)?) } else { None };
    if let Some(x) = &truth {
        if x.count() != n {
            return Err(CliError::Data(format!(
                "{}: {} points for a {n}-point instance",
                truth_path.display(),
                x.count()
            )));
        }
    }

    let chain_path = chain.map(Path::to_path_buf).or_else(|| Some(companion(path, "chain.json")).filter(|p| p.exists()));
    let chain = match (&chain_path, &truth) {
        (Some(p), _) => read_chain(p)?,
        (None, Some(x)) => extract_chain(&x.edm()?),
        (None, None) => extract_chain(&shortest_path_completion(&delta)?.hadamard_square()),
    };
    if chain.n() != n {
        return Err(CliError::Data(format!("chain covers {} points, instance has {n}", chain.n())));
    }
    let rank = rank.unwrap_or_else(|| truth.as_ref().map_or(2, PointCloud::dim));
    if rank == 0 || rank >= n {
        return Err(CliError::Usage(format!("rank must lie in 1..={}, got {rank}", n - 1)));
    }
    Ok(ProblemInstance::with_binary_weights(delta, chain, rank, truth)?)
}

/// [`load_instance`] with the default chain and rank.
pub fn load_dissimilarities(path: &Path) -> CliResult<ProblemInstance> {
    load_instance(path, None, None)
}
