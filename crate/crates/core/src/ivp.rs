//! Initial value problems for `L_a^ν x = h`: forward recursion, the Cauchy
//! function, variation of constants, and fundamental sets.

use crate::error::{Error, Result};
use crate::fraccalc::binomial_weights;
use crate::grid::{Grid, GridFunction};
use crate::monomial::{monomial_table, taylor_monomial};
use crate::operator::{FracOperator, GhostClosure};

/// Data `∇^i x(a+i) = A_i` for `i = 0..=N`, plus the ghost closure.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialConditions {
    values: Vec<f64>,
    closure: GhostClosure,
}

impl InitialConditions {
    pub fn new(values: Vec<f64>, closure: GhostClosure) -> Self {
        Self { values, closure }
    }

    /// All-zero data with zero ghosts.
    pub fn zero(n: usize) -> Self {
        Self::new(vec![0.0; n + 1], GhostClosure::Zero)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn closure(&self) -> &GhostClosure {
        &self.closure
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.values.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Unfolds `∇^i x(a+i) = A_i` into the values `x(a), ..., x(a+N)`.
pub fn ic_to_values(ic: &[f64]) -> Vec<f64> {
    let mut x: Vec<f64> = Vec::with_capacity(ic.len());
    for (i, &target) in ic.iter().enumerate() {
        let w = binomial_weights(i);
        let known: f64 = (1..=i).map(|k| w[k] * x[i - k]).sum();
        x.push(target - known);
    }
    x
}

/// Fills `x(start..=b)` so that `L_{a+base}^ν x(t) = h(t)` at each of those `t`.
///
/// `x` holds offsets `[lo, b]` with `lo <= base - N + 1`, and every value below
/// `start` must already be set. Requires `start >= base + 1`.
fn forward_fill(
    op: &FracOperator,
    base: i64,
    lo: i64,
    x: &mut [f64],
    start: i64,
    h: impl Fn(i64) -> f64,
) {
    let n = op.n();
    let w = binomial_weights(n);
    let kernel = monomial_table(n as f64 - op.nu() - 1.0, (op.b() - base + 2) as usize);
    let at = |t: i64| (t - lo) as usize;

    // d(u) = ∇^N x(u) and c(u) = ∇_{base*}^ν x(u) for u in (base, start)
    let mut d: Vec<f64> = Vec::new();
    let mut c: Vec<f64> = Vec::new();
    for u in (base + 1)..start {
        d.push((0..=n).map(|k| w[k] * x[at(u - k as i64)]).sum());
        let m = d.len();
        c.push((0..m).map(|j| kernel[m - j] * d[j]).sum());
    }

    for t in start..=op.b() {
        let m = d.len() + 1; // t = base + m
        let prev = if t - 1 > base {
            op.p_at(t - 1) * c[m - 2]
        } else {
            0.0
        };
        let ct = (h(t) + prev - op.q_at(t) * x[at(t - 1)]) / op.p_at(t);
        let history: f64 = (0..m - 1).map(|j| kernel[m - j] * d[j]).sum();
        let lower: f64 = (1..=n).map(|k| w[k] * x[at(t - k as i64)]).sum();
        let dt = ct - history;
        x[at(t)] = dt - lower;
        d.push(dt);
        c.push(ct);
    }
}

/// Solves `L_a^ν x = h` on `[N+1, b]` with the given initial data; the result
/// lives on `[-N+1, b]`. `h` must cover `[N+1, b]`.
pub fn solve_ivp(op: &FracOperator, h: &GridFunction, ic: &InitialConditions) -> Result<GridFunction> {
    let n = op.n();
    ic.check(n)?;
    let h = h.restrict(n as i64 + 1, op.b())?;
    let ghosts = ic.closure().ghost_values(n)?;
    let lo = op.ghost_lo();
    let mut x = vec![0.0; (op.b() - lo + 1) as usize];
    for (k, g) in ghosts.iter().enumerate() {
        x[n - 2 - k] = *g;
    }
    for (i, v) in ic_to_values(ic.values()).into_iter().enumerate() {
        x[n - 1 + i] = v;
    }
    forward_fill(op, 0, lo, &mut x, n as i64 + 1, |t| h.values()[(t - h.lo()) as usize]);
    GridFunction::from_values(op.extended_grid(), x)
}

/// The Cauchy function `x(t, s)` for `s ∈ [N+1, b]`.
///
/// Column `s` is stored on `[s-N, b]`, is zero on `[s-N, s-1]`, takes the value
/// `1/p(s)` at `s`, and solves `L_{a+s-1}^ν x(·,s) = 0` from `s+1` on. Below
/// `s-N` the column is zero by extension.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyFunction {
    a: f64,
    n: usize,
    b: i64,
    columns: Vec<GridFunction>,
}

impl CauchyFunction {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn s_range(&self) -> std::ops::RangeInclusive<i64> {
        (self.n as i64 + 1)..=self.b
    }

    /// The stored column for `s`, on `[s-N, b]`.
    pub fn column(&self, s: i64) -> Result<&GridFunction> {
        let first = self.n as i64 + 1;
        if s < first || s > self.b {
            return Err(Error::OffGrid {
                offset: s,
                lo: first,
                hi: self.b,
            });
        }
        Ok(&self.columns[(s - first) as usize])
    }

    /// Column `s` zero-extended to the canonical domain `[-N+1, b]`.
    pub fn extended_column(&self, s: i64) -> Result<GridFunction> {
        self.column(s)?.zero_extend(1 - self.n as i64, self.b)
    }

    /// `x(t, s)`, zero below the stored column.
    pub fn value(&self, t: i64, s: i64) -> Result<f64> {
        let col = self.column(s)?;
        if t < col.lo() {
            Ok(0.0)
        } else {
            col.at(t)
        }
    }

    /// Variation of constants `Σ_{s=N+1}^{t} x(t,s) h(s)` on `[-N+1, b]`.
    pub fn convolve(&self, h: &GridFunction) -> Result<GridFunction> {
        let h = h.restrict(self.n as i64 + 1, self.b)?;
        let grid = Grid::new(self.a, 1 - self.n as i64, self.b)?;
        Ok(GridFunction::from_offsets(grid, |t| {
            (h.lo()..=t.min(self.b))
                .map(|s| {
                    let col = &self.columns[(s - h.lo()) as usize];
                    col.values()[(t - col.lo()) as usize] * h.values()[(s - h.lo()) as usize]
                })
                .sum()
        }))
    }
}

pub fn cauchy_function(op: &FracOperator) -> Result<CauchyFunction> {
    let n = op.n() as i64;
    let columns = ((n + 1)..=op.b())
        .map(|s| {
            let base = s - 1;
            let lo = base - n + 1;
            let mut x = vec![0.0; (op.b() - lo + 1) as usize];
            x[(s - lo) as usize] = 1.0 / op.p_at(s);
            forward_fill(op, base, lo, &mut x, s + 1, |_| 0.0);
            GridFunction::from_values(Grid::new(op.a(), lo, op.b())?, x)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CauchyFunction {
        a: op.a(),
        n: op.n(),
        b: op.b(),
        columns,
    })
}

/// Solution of `L_a^ν x = h` with zero initial data, as `Σ x(t,s) h(s)`.
pub fn variation_of_constants(op: &FracOperator, h: &GridFunction) -> Result<GridFunction> {
    cauchy_function(op)?.convolve(h)
}

/// Which fundamental set [`homogeneous_basis`] builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Solutions with unit initial data `∇^i x_k(a+i) = δ_ik` and zero ghosts.
    Numeric,
    /// `H_0, ..., H_{N-1}, H_ν` based at `a`, extended naturally below `a`;
    /// only valid when `p ≡ 1` and `q ≡ 0`.
    Analytic,
}

/// `N+1` solutions of `L_a^ν x = 0` on `[-N+1, b]`.
pub fn homogeneous_basis(op: &FracOperator, kind: BasisKind) -> Result<Vec<GridFunction>> {
    let n = op.n();
    let grid = op.extended_grid();
    match kind {
        BasisKind::Numeric => {
            let h = GridFunction::zeros(op.equation_grid());
            (0..=n)
                .map(|k| {
                    let mut data = vec![0.0; n + 1];
                    data[k] = 1.0;
                    solve_ivp(op, &h, &InitialConditions::new(data, GhostClosure::Zero))
                })
                .collect()
        }
        BasisKind::Analytic => {
            if !op.is_unit() {
                return Err(Error::InvalidOperator(
                    "analytic basis requires p ≡ 1 and q ≡ 0".into(),
                ));
            }
            let nu = op.nu();
            let mut basis: Vec<GridFunction> = (0..n)
                .map(|k| GridFunction::from_offsets(grid, |m| taylor_monomial(m, k as f64)))
                .collect();
            basis.push(GridFunction::from_offsets(grid, |m| taylor_monomial(m, nu)));
            Ok(basis)
        }
    }
}

/// Residual tolerance `max(1e-9, 1e-12 · ‖x‖∞ · ‖p‖∞ · (b-a))` for solutions of
/// `L_a^ν x = h`.
pub fn residual_tolerance(op: &FracOperator, x: &GridFunction) -> f64 {
    (1e-12 * x.max_abs() * op.p().max_abs() * op.b() as f64).max(1e-9)
}
