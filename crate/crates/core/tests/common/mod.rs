//! Independent dense reference implementations used as test oracles.
#![allow(dead_code)]

use edmoc_core::SymmetricMatrix;

pub type Dense = Vec<Vec<f64>>;

pub fn dense(a: &SymmetricMatrix) -> Dense {
    a.to_rows()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let m = b[0].len();
    let mut c = vec![vec![0.0; m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            for j in 0..m {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn centering(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 } - 1.0 / n as f64).collect())
        .collect()
}

pub fn frob_sq(a: &Dense) -> f64 {
    a.iter().flatten().map(|v| v * v).sum()
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

/// Cyclic Jacobi rotations; eigenvalues sorted nonincreasing with matching
/// eigenvector columns.
pub fn jacobi(a: &Dense) -> (Vec<f64>, Dense) {
    let n = a.len();
    let mut m = a.clone();
    let mut v: Dense = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[i][j] * m[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[y][y].total_cmp(&m[x][x]));
    let values = order.iter().map(|&k| m[k][k]).collect();
    let vectors = (0..n).map(|i| order.iter().map(|&k| v[i][k]).collect()).collect();
    (values, vectors)
}

/// `Σ_{i<=r} max(0, λ_i) p_i p_iᵀ`
pub fn pca_plus(a: &Dense, r: usize) -> Dense {
    let n = a.len();
    let (vals, vecs) = jacobi(a);
    let mut out = vec![vec![0.0; n]; n];
    for k in 0..r {
        let l = vals[k].max(0.0);
        for i in 0..n {
            for j in 0..n {
                out[i][j] += l * vecs[i][k] * vecs[j][k];
            }
        }
    }
    out
}

/// `PCA_r⁺(JAJ) + (A − JAJ)` with `J` formed explicitly.
pub fn projection(a: &Dense, r: usize) -> Dense {
    let j = centering(a.len());
    let jaj = matmul(&matmul(&j, a), &j);
    add(&pca_plus(&jaj, r), &sub(a, &jaj))
}

/// `½‖D + Π(−D)‖²`
pub fn rank_residual(d: &Dense, r: usize) -> f64 {
    let minus: Dense = d.iter().map(|row| row.iter().map(|v| -v).collect()).collect();
    0.5 * frob_sq(&add(d, &projection(&minus, r)))
}

pub fn from_dense(a: &Dense) -> SymmetricMatrix {
    SymmetricMatrix::from_rows(a, 1e-9).unwrap()
}

/// Deterministic pseudo-random reals in `[-1, 1)`.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    pub fn symmetric(&mut self, n: usize) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(n, |_, _| self.next()).unwrap()
    }

    /// Nonnegative hollow symmetric matrix.
    pub fn hollow(&mut self, n: usize, scale: f64) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { scale * (self.next() + 1.0) }).unwrap()
    }
}
