//! (N,1) boundary value problems
//!
//! ```text
//! L_a^ν x(t) = h(t),                       t ∈ [a+N+1, b]
//! Σ_j α_ij ∇^j x(a+j) = A_i,               i = 0..N-1
//! Σ_j β_j ∇^j x(b) = B
//! ```
//!
//! solved in the affine space `x_p + span(basis)`, where `x_p` comes from
//! variation of constants and the basis is a fundamental set of `L_a^ν x = 0`.

use crate::error::{Error, Result};
use crate::fraccalc::binomial_weights;
use crate::grid::GridFunction;
use crate::ivp::variation_of_constants;
use crate::linalg;
use crate::operator::FracOperator;

/// Rank tolerance for the left condition rows.
const RANK_TOL: f64 = 1e-10;
/// Threshold on `|det D| / Π ‖row‖₂` below which `D` counts as singular.
const SCALED_DET_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpec {
    alpha: Vec<Vec<f64>>,
    left_values: Vec<f64>,
    beta: Vec<f64>,
    right_value: f64,
}

impl BoundarySpec {
    /// `alpha` holds `N` rows of length `N+1`; `left_values` the `N` values `A_i`.
    pub fn new(alpha: Vec<Vec<f64>>, left_values: Vec<f64>, beta: Vec<f64>, right_value: f64) -> Result<Self> {
        let n = alpha.len();
        if n == 0 {
            return Err(Error::InvalidBoundary("at least one left condition is required".into()));
        }
        if let Some(i) = alpha.iter().position(|row| row.len() != n + 1) {
            return Err(Error::InvalidBoundary(format!(
                "alpha row {i} has {} entries, expected {}",
                alpha[i].len(),
                n + 1
            )));
        }
        if left_values.len() != n {
            return Err(Error::InvalidBoundary(format!(
                "{} left values for {n} left conditions",
                left_values.len()
            )));
        }
        if beta.len() != n + 1 {
            return Err(Error::InvalidBoundary(format!(
                "beta has {} entries, expected {}",
                beta.len(),
                n + 1
            )));
        }
        let all_finite = alpha.iter().flatten().chain(&left_values).chain(&beta).all(|v| v.is_finite());
        if !all_finite || !right_value.is_finite() {
            return Err(Error::InvalidBoundary("non-finite coefficient".into()));
        }
        if let Some(i) = alpha.iter().position(|row| row.iter().all(|&v| v == 0.0)) {
            return Err(Error::InvalidBoundary(format!("alpha row {i} is zero")));
        }
        if beta.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidBoundary("beta is zero".into()));
        }
        if linalg::rank(&alpha, RANK_TOL) < n {
            return Err(Error::InvalidBoundary("alpha rows are linearly dependent".into()));
        }
        Ok(Self {
            alpha,
            left_values,
            beta,
            right_value,
        })
    }

    /// The (2,1) conjugate conditions `x(a) = A, ∇x(a+1) = B, x(b) = C`.
    pub fn conjugate(left: f64, slope: f64, right: f64) -> Self {
        Self::new(
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
            vec![left, slope],
            vec![1.0, 0.0, 0.0],
            right,
        )
        .expect("conjugate conditions are valid")
    }

    /// The same conditions with all boundary values set to zero.
    pub fn homogeneous(&self) -> Self {
        Self {
            alpha: self.alpha.clone(),
            left_values: vec![0.0; self.alpha.len()],
            beta: self.beta.clone(),
            right_value: 0.0,
        }
    }

    /// `N`, the number of left conditions.
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Vec<f64>] {
        &self.alpha
    }

    pub fn left_values(&self) -> &[f64] {
        &self.left_values
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn right_value(&self) -> f64 {
        self.right_value
    }
}

fn nabla_at(x: &GridFunction, j: usize, t: i64) -> Result<f64> {
    let w = binomial_weights(j);
    (0..=j).map(|k| Ok(w[k] * x.at(t - k as i64)?)).sum()
}

/// `Σ_j α_j ∇^j x(a+j)` with `a` given as an offset.
pub fn left_bc_eval(x: &GridFunction, alpha_row: &[f64], a: i64) -> Result<f64> {
    alpha_row
        .iter()
        .enumerate()
        .map(|(j, &c)| if c == 0.0 { Ok(0.0) } else { Ok(c * nabla_at(x, j, a + j as i64)?) })
        .sum()
}

/// `Σ_j β_j ∇^j x(b)` with `b` given as an offset.
pub fn right_bc_eval(x: &GridFunction, beta: &[f64], b: i64) -> Result<f64> {
    beta.iter()
        .enumerate()
        .map(|(j, &c)| if c == 0.0 { Ok(0.0) } else { Ok(c * nabla_at(x, j, b)?) })
        .sum()
}

/// The `(N+1)×(N+1)` matrix of boundary functionals applied to a basis;
/// column `k` belongs to basis function `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix {
    entries: Vec<Vec<f64>>,
}

impl DMatrix {
    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn determinant(&self) -> f64 {
        linalg::determinant(&self.entries).expect("square by construction")
    }

    /// `|det D| / Π_i ‖row_i‖₂`, which lies in `[0, 1]` by Hadamard's inequality.
    pub fn scaled_determinant(&self) -> f64 {
        let norms: f64 = self
            .entries
            .iter()
            .map(|row| row.iter().map(|v| v * v).sum::<f64>().sqrt())
            .product();
        if norms == 0.0 {
            0.0
        } else {
            self.determinant().abs() / norms
        }
    }

    /// Solves `D c = rhs`, refusing near-singular matrices.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let scaled_det = self.scaled_determinant();
        if !(scaled_det >= SCALED_DET_TOL) {
            return Err(Error::NearSingular { scaled_det });
        }
        Ok(linalg::solve(&self.entries, rhs, 0.0)?.solution)
    }
}

fn check_basis(basis: &[GridFunction], spec: &BoundarySpec, op: &FracOperator) -> Result<()> {
    let n = op.n();
    if spec.n() != n {
        return Err(Error::InvalidBoundary(format!(
            "{} left conditions for an operator with N = {n}",
            spec.n()
        )));
    }
    if basis.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            got: basis.len(),
        });
    }
    Ok(())
}

pub fn assemble_d(basis: &[GridFunction], spec: &BoundarySpec, op: &FracOperator) -> Result<DMatrix> {
    check_basis(basis, spec, op)?;
    let mut entries: Vec<Vec<f64>> = spec
        .alpha()
        .iter()
        .map(|row| basis.iter().map(|x| left_bc_eval(x, row, 0)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    entries.push(
        basis
            .iter()
            .map(|x| right_bc_eval(x, spec.beta(), op.b()))
            .collect::<Result<_>>()?,
    );
    Ok(DMatrix { entries })
}

/// Unique solution of the boundary value problem in `x_p + span(basis)`, on
/// `[-N+1, b]`.
pub fn solve_bvp(
    op: &FracOperator,
    h: &GridFunction,
    spec: &BoundarySpec,
    basis: &[GridFunction],
) -> Result<GridFunction> {
    let d = assemble_d(basis, spec, op)?;
    let particular = variation_of_constants(op, h)?;
    let mut rhs: Vec<f64> = spec
        .alpha()
        .iter()
        .zip(spec.left_values())
        .map(|(row, &a)| Ok(a - left_bc_eval(&particular, row, 0)?))
        .collect::<Result<_>>()?;
    rhs.push(spec.right_value() - right_bc_eval(&particular, spec.beta(), op.b())?);
    let coeffs = d.solve(&rhs)?;
    let grid = op.extended_grid();
    basis
        .iter()
        .zip(coeffs)
        .try_fold(particular, |acc, (x, c)| acc.axpy(c, &x.restrict(grid.lo(), grid.hi())?))
}
