//! Discrete nabla fractional calculus on unit integer grids.
//!
//! The crate covers rising functions and Taylor monomials, whole-order and
//! fractional nabla differences and sums, the operator
//! `L x(t) = ∇[p(t) ∇_{a*}^ν x(t)] + q(t) x(t-1)`, forward-recursion initial
//! value solvers with Cauchy functions, (N,1) boundary value problems and their
//! Green's functions, plus a dense brute-force oracle for cross-checking all of
//! the structured solvers.
//!
//! Grid points are always addressed by integer offsets from a real base `a`,
//! so `t = a + k` is written as the offset `k`.

pub mod bvp;
pub mod error;
pub mod fraccalc;
pub mod greens;
pub mod grid;
pub mod ivp;
pub mod linalg;
pub mod monomial;
pub mod operator;
pub mod oracle;

pub use bvp::{assemble_d, left_bc_eval, right_bc_eval, solve_bvp, BoundarySpec, DMatrix};
pub use error::{Error, Result};
pub use fraccalc::{caputo_difference, frac_integral, nabla, nabla_n, rl_difference, FracOrder};
pub use greens::{
    build_greens, compare_greens, conjugate_greens_closed_form, greens_solve, Branch,
    GreensFunction,
};
pub use grid::{nabla_integral, Grid, GridFunction};
pub use ivp::{
    cauchy_function, homogeneous_basis, ic_to_values, solve_ivp, variation_of_constants,
    BasisKind, CauchyFunction, InitialConditions,
};
pub use monomial::{rising, taylor_monomial, MonomialOrder};
pub use operator::{FracOperator, GhostClosure};
pub use oracle::{assemble, dense_solve, residual, DenseSolution, DenseSystem, Problem};
