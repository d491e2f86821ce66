//! Green's functions for the (N,1) boundary value problem.
//!
//! For each `s ∈ [N+1, b]`, `u(·,s)` solves the homogeneous equation with zero
//! left data and right data `-Σ β_j ∇^j x(b,s)`, and `v = u + x(·,s)` with the
//! Cauchy function `x`. The kernel is
//!
//! ```text
//! G(t,s) = u(t,s)   t ∈ [a, b-N],   s ∈ [max(t+1, a+N+1), b]
//! G(t,s) = v(t,s)   t ∈ [a+N, b],   s ∈ [a+N+1, min(t+1, b)]
//! ```
//!
//! Tables cover `t ∈ [-N+1, b]` so the operator can be applied to
//! `Σ_s G(t,s) h(s)`. Cells outside both listed regions keep the `u` value and
//! are tagged [`Branch::Unstated`]; there the Cauchy term vanishes anyway.

use std::fmt;

use crate::bvp::{assemble_d, right_bc_eval, BoundarySpec};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::ivp::cauchy_function;
use crate::monomial::taylor_monomial;
use crate::operator::FracOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    U,
    V,
    /// Outside both stated regions; holds the `u` value.
    Unstated,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::U => "u",
            Branch::V => "v",
            Branch::Unstated => "u*",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreensFunction {
    a: f64,
    n: usize,
    b: i64,
    /// Row-major over `t ∈ [-N+1, b]`, then `s ∈ [N+1, b]`.
    u: Vec<f64>,
    v: Vec<f64>,
}

impl GreensFunction {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn t_range(&self) -> std::ops::RangeInclusive<i64> {
        (1 - self.n as i64)..=self.b
    }

    pub fn s_range(&self) -> std::ops::RangeInclusive<i64> {
        (self.n as i64 + 1)..=self.b
    }

    fn width(&self) -> usize {
        (self.b - self.n as i64) as usize
    }

    fn index(&self, t: i64, s: i64) -> Result<usize> {
        let (tr, sr) = (self.t_range(), self.s_range());
        for (k, r) in [(t, &tr), (s, &sr)] {
            if !r.contains(&k) {
                return Err(Error::OffGrid {
                    offset: k,
                    lo: *r.start(),
                    hi: *r.end(),
                });
            }
        }
        Ok((t - tr.start()) as usize * self.width() + (s - sr.start()) as usize)
    }

    pub fn u(&self, t: i64, s: i64) -> Result<f64> {
        Ok(self.u[self.index(t, s)?])
    }

    pub fn v(&self, t: i64, s: i64) -> Result<f64> {
        Ok(self.v[self.index(t, s)?])
    }

    /// Which piece of the kernel the cell `(t, s)` belongs to. Cells in both
    /// regions (`s = t+1`) report [`Branch::U`]; the two values agree there.
    pub fn branch(&self, t: i64, s: i64) -> Branch {
        let n = self.n as i64;
        if (0..=self.b - n).contains(&t) && s >= (t + 1).max(n + 1) {
            Branch::U
        } else if (n..=self.b).contains(&t) && s <= (t + 1).min(self.b) {
            Branch::V
        } else {
            Branch::Unstated
        }
    }

    /// True when `(t, s)` lies in one of the two stated regions.
    pub fn in_stated_region(&self, t: i64, s: i64) -> bool {
        self.branch(t, s) != Branch::Unstated
    }

    /// `G(t, s)`.
    pub fn value(&self, t: i64, s: i64) -> Result<f64> {
        let i = self.index(t, s)?;
        Ok(match self.branch(t, s) {
            Branch::V => self.v[i],
            Branch::U | Branch::Unstated => self.u[i],
        })
    }

    /// `G(·, s)` on `[-N+1, b]`.
    pub fn column(&self, s: i64) -> Result<GridFunction> {
        self.index(self.b, s)?;
        let grid = Grid::new(self.a, 1 - self.n as i64, self.b)?;
        Ok(GridFunction::from_offsets(grid, |t| self.value(t, s).expect("in range")))
    }
}

/// Builds `G` from a fundamental set; only the homogeneous part of `spec` is used.
pub fn build_greens(op: &FracOperator, spec: &BoundarySpec, basis: &[GridFunction]) -> Result<GreensFunction> {
    let d = assemble_d(basis, spec, op)?;
    let cauchy = cauchy_function(op)?;
    let n = op.n();
    let grid = op.extended_grid();
    let basis: Vec<GridFunction> = basis
        .iter()
        .map(|x| x.restrict(grid.lo(), grid.hi()))
        .collect::<Result<_>>()?;

    let columns: Vec<(GridFunction, GridFunction)> = cauchy
        .s_range()
        .map(|s| {
            let x = cauchy.extended_column(s)?;
            let mut rhs = vec![0.0; n + 1];
            rhs[n] = -right_bc_eval(&x, spec.beta(), op.b())?;
            let coeffs = d.solve(&rhs)?;
            let u = basis
                .iter()
                .zip(&coeffs)
                .try_fold(GridFunction::zeros(grid), |acc, (xk, &c)| acc.axpy(c, xk))?;
            let v = u.axpy(1.0, &x)?;
            Ok((u, v))
        })
        .collect::<Result<_>>()?;

    let width = columns.len();
    let rows = grid.len();
    let mut u = vec![0.0; rows * width];
    let mut v = vec![0.0; rows * width];
    for (j, (uc, vc)) in columns.iter().enumerate() {
        for i in 0..rows {
            u[i * width + j] = uc.values()[i];
            v[i * width + j] = vc.values()[i];
        }
    }
    Ok(GreensFunction {
        a: op.a(),
        n,
        b: op.b(),
        u,
        v,
    })
}

/// `x(t) = Σ_{s=N+1}^{b} G(t,s) h(s)` on `[-N+1, b]`.
pub fn greens_solve(g: &GreensFunction, h: &GridFunction) -> Result<GridFunction> {
    let s_range = g.s_range();
    let h = h.restrict(*s_range.start(), *s_range.end())?;
    let grid = Grid::new(g.a, *g.t_range().start(), g.b)?;
    let mut values = Vec::with_capacity(grid.len());
    for t in g.t_range() {
        let mut acc = 0.0;
        for (s, hs) in h.iter() {
            acc += g.value(t, s)? * hs;
        }
        values.push(acc);
    }
    GridFunction::from_values(grid, values)
}

/// Closed-form Green's function of the (2,1) conjugate problem
/// `∇∇_{a*}^ν x = h`, `x(a) = ∇x(a+1) = x(b) = 0`, for `1 < ν < 2`.
///
/// `b` is the offset `b - a`.
pub fn conjugate_greens_closed_form(a: f64, b: i64, nu: f64) -> Result<GreensFunction> {
    if !(nu > 1.0 && nu < 2.0) {
        return Err(Error::InvalidOrder {
            nu,
            reason: "conjugate closed form needs 1 < ν < 2",
        });
    }
    if b < 3 {
        return Err(Error::InvalidOperator(format!("b - a = {b} must be at least 3")));
    }
    let denom = b as f64 - taylor_monomial(b, nu);
    if denom.abs() < 1e-12 * b as f64 {
        return Err(Error::DegenerateDenominator { value: denom });
    }
    let width = (b - 2) as usize;
    let mut u = Vec::with_capacity((b + 2) as usize * width);
    let mut v = Vec::with_capacity(u.capacity());
    for t in -1..=b {
        let shape = (t as f64 - taylor_monomial(t, nu)) / denom;
        for s in 3..=b {
            let us = -taylor_monomial(b - s + 1, nu) * shape;
            u.push(us);
            v.push(us + taylor_monomial(t - s + 1, nu));
        }
    }
    Ok(GreensFunction { a, n: 2, b, u, v })
}

/// `max |G₁(t,s) - G₂(t,s)|` over the stated regions.
pub fn compare_greens(g1: &GreensFunction, g2: &GreensFunction) -> Result<f64> {
    if g1.n != g2.n || g1.b != g2.b || g1.a != g2.a {
        return Err(Error::ShapeMismatch(format!(
            "(a={}, N={}, b={}) vs (a={}, N={}, b={})",
            g1.a, g1.n, g1.b, g2.a, g2.n, g2.b
        )));
    }
    let mut worst = 0.0f64;
    for t in g1.t_range() {
        for s in g1.s_range() {
            if g1.in_stated_region(t, s) {
                worst = worst.max((g1.value(t, s)? - g2.value(t, s)?).abs());
            }
        }
    }
    Ok(worst)
}
