//! Brute-force verification by one dense linear system per problem.
//!
//! Unknowns are `x(t)` for every offset `t ∈ [-N+1, b]`, so there are
//! `M = b + N` of them. Rows, in order:
//!
//! * `N-1` ghost closure rows,
//! * `N+1` initial condition rows (IVP), or `N` left plus one right boundary
//!   row (BVP),
//! * `b-N` equation rows for `t ∈ [N+1, b]`.
//!
//! Equation rows expand the Caputo double sum index by index; they never call
//! into the operator or the recursive solvers.

use crate::bvp::BoundarySpec;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::ivp::InitialConditions;
use crate::linalg;
use crate::monomial::taylor_monomial;
use crate::operator::{FracOperator, GhostClosure};

#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Ivp(InitialConditions),
    Bvp { spec: BoundarySpec, closure: GhostClosure },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseSystem {
    pub matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    a: f64,
    lo: i64,
}

impl DenseSystem {
    /// Column holding `x(offset)`.
    pub fn unknown_index(&self, offset: i64) -> Option<usize> {
        let k = offset - self.lo;
        (0..self.rhs.len() as i64).contains(&k).then_some(k as usize)
    }

    pub fn size(&self) -> usize {
        self.rhs.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseSolution {
    pub x: GridFunction,
    /// `max |pivot| / min |pivot|` of the elimination.
    pub pivot_ratio: f64,
}

fn choose(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficient of `x(u-k)` in `∇^n x(u)`.
fn difference_weight(n: usize, k: usize) -> f64 {
    if k > n {
        0.0
    } else if k.is_multiple_of(2) {
        choose(n, k)
    } else {
        -choose(n, k)
    }
}

/// Row (over `[-N+1, b]`) of coefficients `r_j` with
/// `Σ_j r_j x(j) = Σ_{i} coeffs[i] ∇^i x(at)`.
fn functional_row(lo: i64, size: usize, coeffs: &[f64], at: impl Fn(usize) -> i64) -> Vec<f64> {
    let mut row = vec![0.0; size];
    for (i, &c) in coeffs.iter().enumerate() {
        let t = at(i);
        for k in 0..=i {
            row[(t - k as i64 - lo) as usize] += c * difference_weight(i, k);
        }
    }
    row
}

/// Coefficient of `x(j)` in `∇_{a*}^ν x(τ) = Σ_{u=1}^{τ} H_{N-ν-1}(τ, u-1) ∇^N x(u)`.
fn caputo_coefficient(n: usize, nu: f64, tau: i64, j: i64) -> f64 {
    let first = j.max(1);
    let last = tau.min(j + n as i64);
    (first..=last)
        .map(|u| taylor_monomial(tau - u + 1, n as f64 - nu - 1.0) * difference_weight(n, (u - j) as usize))
        .sum()
}

/// Symbolic equation rows: entry `[t - N - 1][j + N - 1]` is the coefficient of
/// `x(j)` in `(L_a^ν x)(t)`.
pub fn equation_rows(op: &FracOperator) -> Vec<Vec<f64>> {
    let n = op.n();
    let lo = op.ghost_lo();
    let size = (op.b() - lo + 1) as usize;
    ((n as i64 + 1)..=op.b())
        .map(|t| {
            let p_now = op.p().at(t).expect("p covers [N, b]");
            let p_prev = op.p().at(t - 1).expect("p covers [N, b]");
            let mut row = vec![0.0; size];
            for j in lo..=t {
                let now = caputo_coefficient(n, op.nu(), t, j);
                let prev = caputo_coefficient(n, op.nu(), t - 1, j);
                row[(j - lo) as usize] = p_now * now - p_prev * prev;
            }
            row[(t - 1 - lo) as usize] += op.q().at(t).expect("q covers [N+1, b]");
            row
        })
        .collect()
}

/// The same rows obtained by applying the operator to unit vectors.
pub fn probe_rows(op: &FracOperator) -> Result<Vec<Vec<f64>>> {
    let grid = op.extended_grid();
    let eq = op.equation_grid();
    let mut rows = vec![vec![0.0; grid.len()]; eq.len()];
    for (col, j) in grid.offsets().enumerate() {
        let e = GridFunction::from_offsets(grid, |k| if k == j { 1.0 } else { 0.0 });
        for (i, (_, v)) in op.apply(&e)?.iter().enumerate() {
            rows[i][col] = v;
        }
    }
    Ok(rows)
}

pub fn assemble(op: &FracOperator, problem: &Problem, h: &GridFunction) -> Result<DenseSystem> {
    let n = op.n();
    let lo = op.ghost_lo();
    let size = (op.b() - lo + 1) as usize;
    let h = h.restrict(n as i64 + 1, op.b())?;
    let mut matrix = Vec::with_capacity(size);
    let mut rhs = Vec::with_capacity(size);

    let closure = match problem {
        Problem::Ivp(ic) => ic.closure(),
        Problem::Bvp { closure, .. } => closure,
    };
    for (k, g) in closure.ghost_values(n)?.into_iter().enumerate() {
        let mut row = vec![0.0; size];
        row[(-1 - k as i64 - lo) as usize] = 1.0;
        matrix.push(row);
        rhs.push(g);
    }

    match problem {
        Problem::Ivp(ic) => {
            if ic.values().len() != n + 1 {
                return Err(Error::LengthMismatch {
                    expected: n + 1,
                    got: ic.values().len(),
                });
            }
            for (i, &a) in ic.values().iter().enumerate() {
                let mut unit = vec![0.0; i + 1];
                unit[i] = 1.0;
                matrix.push(functional_row(lo, size, &unit, |_| i as i64));
                rhs.push(a);
            }
        }
        Problem::Bvp { spec, .. } => {
            if spec.n() != n {
                return Err(Error::InvalidBoundary(format!(
                    "{} left conditions for an operator with N = {n}",
                    spec.n()
                )));
            }
            for (alpha, &a) in spec.alpha().iter().zip(spec.left_values()) {
                matrix.push(functional_row(lo, size, alpha, |j| j as i64));
                rhs.push(a);
            }
            matrix.push(functional_row(lo, size, spec.beta(), |_| op.b()));
            rhs.push(spec.right_value());
        }
    }

    matrix.extend(equation_rows(op));
    rhs.extend_from_slice(h.values());
    debug_assert_eq!(matrix.len(), size);
    Ok(DenseSystem {
        matrix,
        rhs,
        a: op.a(),
        lo,
    })
}

/// Partial-pivot elimination of the whole system, refined with compensated
/// residuals. Pivots below `1e-13 · ‖A‖∞` are reported as
/// [`Error::SingularSystem`].
pub fn dense_solve(sys: &DenseSystem) -> Result<DenseSolution> {
    let floor = 1e-13 * linalg::inf_norm(&sys.matrix);
    let e = linalg::solve_refined(&sys.matrix, &sys.rhs, floor, 4)?;
    let hi = sys.lo + sys.size() as i64 - 1;
    let grid = crate::grid::Grid::new(sys.a, sys.lo, hi)?;
    Ok(DenseSolution {
        x: GridFunction::from_values(grid, e.solution)?,
        pivot_ratio: e.pivot_ratio,
    })
}

/// `‖L_a^ν x - h‖∞` over the equation rows.
pub fn residual(op: &FracOperator, x: &GridFunction, h: &GridFunction) -> Result<f64> {
    let lx = op.apply(x)?;
    let h = h.restrict(lx.lo(), lx.hi())?;
    Ok(lx.max_abs_diff(&h))
}
