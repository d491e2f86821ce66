//! Small dense linear algebra: Gaussian elimination with partial pivoting.

use crate::error::{Error, Result};

/// Outcome of an elimination: solution plus pivot statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Elimination {
    pub solution: Vec<f64>,
    /// Product of the pivots with the row-swap sign, i.e. the determinant.
    pub determinant: f64,
    /// `max |pivot| / min |pivot|`, a cheap conditioning estimate.
    pub pivot_ratio: f64,
}

/// `max_i Σ_j |a_ij|`.
pub fn inf_norm(matrix: &[Vec<f64>]) -> f64 {
    matrix
        .iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn check_square(matrix: &[Vec<f64>], rhs_len: usize) -> Result<usize> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::ShapeMismatch("matrix is not square".into()));
    }
    if rhs_len != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: rhs_len,
        });
    }
    Ok(n)
}

/// Row-pivoted LU factors `P A = L U`, packed in one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Lu {
    packed: Vec<Vec<f64>>,
    perm: Vec<usize>,
    determinant: f64,
    pivot_ratio: f64,
}

impl Lu {
    /// Factors `matrix`. A pivot smaller than `pivot_floor` in magnitude is
    /// reported as [`Error::SingularSystem`].
    pub fn new(matrix: &[Vec<f64>], pivot_floor: f64) -> Result<Self> {
        let n = check_square(matrix, matrix.len())?;
        let mut a: Vec<Vec<f64>> = matrix.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut det = 1.0;
        let (mut max_pivot, mut min_pivot) = (0.0f64, f64::INFINITY);

        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .expect("non-empty range");
            let pivot = a[pivot_row][col];
            if !(pivot.abs() >= pivot_floor) || pivot == 0.0 {
                return Err(Error::SingularSystem {
                    column: col,
                    pivot: pivot.abs(),
                    threshold: pivot_floor,
                });
            }
            if pivot_row != col {
                a.swap(pivot_row, col);
                perm.swap(pivot_row, col);
                det = -det;
            }
            det *= pivot;
            max_pivot = max_pivot.max(pivot.abs());
            min_pivot = min_pivot.min(pivot.abs());
            for row in col + 1..n {
                let factor = a[row][col] / pivot;
                a[row][col] = factor;
                if factor == 0.0 {
                    continue;
                }
                for k in col + 1..n {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
        Ok(Self {
            packed: a,
            perm,
            determinant: det,
            pivot_ratio: if n == 0 { 1.0 } else { max_pivot / min_pivot },
        })
    }

    pub fn determinant(&self) -> f64 {
        self.determinant
    }

    /// `max |pivot| / min |pivot|`.
    pub fn pivot_ratio(&self) -> f64 {
        self.pivot_ratio
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = check_square(&self.packed, rhs.len())?;
        let a = &self.packed;
        let mut y: Vec<f64> = self.perm.iter().map(|&i| rhs[i]).collect();
        for row in 0..n {
            let head: f64 = (0..row).map(|k| a[row][k] * y[k]).sum();
            y[row] -= head;
        }
        for row in (0..n).rev() {
            let tail: f64 = (row + 1..n).map(|k| a[row][k] * y[k]).sum();
            y[row] = (y[row] - tail) / a[row][row];
        }
        Ok(y)
    }
}

/// Solves `A x = b`. A pivot smaller than `pivot_floor` in magnitude is
/// reported as [`Error::SingularSystem`].
pub fn solve(matrix: &[Vec<f64>], rhs: &[f64], pivot_floor: f64) -> Result<Elimination> {
    check_square(matrix, rhs.len())?;
    let lu = Lu::new(matrix, pivot_floor)?;
    Ok(Elimination {
        solution: lu.solve(rhs)?,
        determinant: lu.determinant,
        pivot_ratio: lu.pivot_ratio,
    })
}

/// Error-free transformation `a·b = p + e`.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Error-free transformation `a + b = s + e`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

/// `b - A x` accumulated in doubled working precision (Ogita–Rump–Oishi Dot2).
pub fn residual_compensated(matrix: &[Vec<f64>], x: &[f64], rhs: &[f64]) -> Vec<f64> {
    matrix
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let (mut s, mut c) = (b, 0.0);
            for (&a, &xi) in row.iter().zip(x) {
                let (p, ep) = two_prod(-a, xi);
                let (t, es) = two_sum(s, p);
                s = t;
                c += ep + es;
            }
            s + c
        })
        .collect()
}

/// [`solve`] followed by up to `steps` rounds of iterative refinement with
/// compensated residuals. Stops early once a correction no longer shrinks.
pub fn solve_refined(matrix: &[Vec<f64>], rhs: &[f64], pivot_floor: f64, steps: usize) -> Result<Elimination> {
    check_square(matrix, rhs.len())?;
    let lu = Lu::new(matrix, pivot_floor)?;
    let mut x = lu.solve(rhs)?;
    let mut last = f64::INFINITY;
    for _ in 0..steps {
        let r = residual_compensated(matrix, &x, rhs);
        let d = lu.solve(&r)?;
        let size = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(size < last) {
            break;
        }
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += di;
        }
        last = size;
        if size == 0.0 {
            break;
        }
    }
    Ok(Elimination {
        solution: x,
        determinant: lu.determinant,
        pivot_ratio: lu.pivot_ratio,
    })
}

/// Determinant by elimination; exactly 0 when a column has no nonzero pivot.
pub fn determinant(matrix: &[Vec<f64>]) -> Result<f64> {
    let n = check_square(matrix, matrix.len())?;
    match solve(matrix, &vec![0.0; n], 0.0) {
        Ok(e) => Ok(e.determinant),
        Err(Error::SingularSystem { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Numerical rank of a set of row vectors; pivots below
/// `rel_tol · max |entry|` count as zero.
pub fn rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut a = rows.to_vec();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let tol = rel_tol * scale;
    let mut r = 0;
    for col in 0..cols {
        if r == a.len() {
            break;
        }
        let pivot_row = (r..a.len())
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[pivot_row][col].abs() <= tol {
            continue;
        }
        a.swap(r, pivot_row);
        for row in r + 1..a.len() {
            let factor = a[row][col] / a[r][col];
            for k in col..cols {
                a[row][k] -= factor * a[r][k];
            }
        }
        r += 1;
    }
    r
}
