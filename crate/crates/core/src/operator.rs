//! The operator `(L_a^ν x)(t) = ∇[p(t) ∇_{a*}^ν x(t)] + q(t) x(t-1)`.
//!
//! All offsets are relative to the operator base `a`. The canonical domain of
//! `x` is `[-N+1, b]`: the Caputo difference reaches `N-1` ghost points below
//! `a`, and [`GhostClosure`] decides what lives there.

use crate::error::{Error, Result};
use crate::fraccalc::{caputo_difference, FracOrder};
use crate::grid::{Grid, GridFunction};

/// How the `N-1` ghost values `x(a-1), ..., x(a-N+1)` are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum GhostClosure {
    /// `values[k]` is `x(a-1-k)`.
    Explicit(Vec<f64>),
    Zero,
    /// Extension carried by an analytically built function; only meaningful for
    /// basis functions constructed in closed form.
    Natural,
}

impl GhostClosure {
    /// Ghost values ordered `x(a-1), x(a-2), ...` for an operator with `N = n`.
    pub fn ghost_values(&self, n: usize) -> Result<Vec<f64>> {
        let count = n.saturating_sub(1);
        match self {
            GhostClosure::Zero => Ok(vec![0.0; count]),
            GhostClosure::Explicit(values) if values.len() == count => Ok(values.clone()),
            GhostClosure::Explicit(values) => Err(Error::InvalidClosure(format!(
                "expected {count} explicit ghost values, got {}",
                values.len()
            ))),
            GhostClosure::Natural => Err(Error::InvalidClosure(
                "natural closure is only defined for analytically built functions".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FracOperator {
    a: f64,
    order: FracOrder,
    b: i64,
    p: GridFunction,
    q: GridFunction,
}

impl FracOperator {
    /// `p` must cover offsets `[N, b]` and be strictly positive there, `q` must
    /// cover `[N+1, b]`, and `b >= N+1`. Longer tables are trimmed.
    pub fn new(a: f64, nu: f64, b: i64, p: GridFunction, q: GridFunction) -> Result<Self> {
        let order = FracOrder::fractional(nu)?;
        let n = order.n() as i64;
        if b < n + 1 {
            return Err(Error::InvalidOperator(format!(
                "b - a = {b} must be at least N + 1 = {}",
                n + 1
            )));
        }
        for (name, f) in [("p", &p), ("q", &q)] {
            if f.base() != a {
                return Err(Error::InvalidOperator(format!(
                    "{name} is based at {} but the operator at {a}",
                    f.base()
                )));
            }
        }
        let p = p.restrict(n, b)?;
        let q = q.restrict(n + 1, b)?;
        if let Some((offset, value)) = p.iter().find(|&(_, v)| !(v > 0.0)) {
            return Err(Error::NonPositiveP { offset, value });
        }
        Ok(Self { a, order, b, p, q })
    }

    pub fn with_constants(a: f64, nu: f64, b: i64, p: f64, q: f64) -> Result<Self> {
        let grid = Grid::new(a, 0, b.max(0))?;
        Self::new(a, nu, b, GridFunction::constant(grid, p), GridFunction::constant(grid, q))
    }

    /// `p` and `q` given as functions of the real point `t`.
    pub fn from_fns(
        a: f64,
        nu: f64,
        b: i64,
        p: impl FnMut(f64) -> f64,
        q: impl FnMut(f64) -> f64,
    ) -> Result<Self> {
        let grid = Grid::new(a, 0, b.max(0))?;
        Self::new(a, nu, b, GridFunction::from_fn(grid, p), GridFunction::from_fn(grid, q))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn nu(&self) -> f64 {
        self.order.nu()
    }

    pub fn n(&self) -> usize {
        self.order.n()
    }

    /// `b - a`.
    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn p(&self) -> &GridFunction {
        &self.p
    }

    pub fn q(&self) -> &GridFunction {
        &self.q
    }

    /// Lowest offset of the canonical domain, `-N+1`.
    pub fn ghost_lo(&self) -> i64 {
        1 - self.n() as i64
    }

    /// The canonical domain `[-N+1, b]`.
    pub fn extended_grid(&self) -> Grid {
        Grid::new(self.a, self.ghost_lo(), self.b).expect("b >= N + 1")
    }

    /// The equation rows `[N+1, b]`.
    pub fn equation_grid(&self) -> Grid {
        Grid::new(self.a, self.n() as i64 + 1, self.b).expect("b >= N + 1")
    }

    /// True when `p ≡ 1` and `q ≡ 0`.
    pub fn is_unit(&self) -> bool {
        self.p.values().iter().all(|&v| v == 1.0) && self.q.values().iter().all(|&v| v == 0.0)
    }

    pub(crate) fn p_at(&self, t: i64) -> f64 {
        self.p.values()[(t - self.p.lo()) as usize]
    }

    pub(crate) fn q_at(&self, t: i64) -> f64 {
        self.q.values()[(t - self.q.lo()) as usize]
    }

    /// `L_a^ν x` on `[N+1, b]`. `x` must cover `[-N+1, b]`.
    pub fn apply(&self, x: &GridFunction) -> Result<GridFunction> {
        self.apply_at_base(0, x)
    }

    /// The same operator re-based at offset `base >= 0`: returns `L_{a+base}^ν x`
    /// on `[base+N+1, b]`, for `x` covering `[base-N+1, b]`.
    pub fn apply_at_base(&self, base: i64, x: &GridFunction) -> Result<GridFunction> {
        let n = self.n() as i64;
        if base < 0 || base + n + 1 > self.b {
            return Err(Error::InvalidOperator(format!(
                "base offset {base} leaves no equation rows up to b = {}",
                self.b
            )));
        }
        if x.hi() < self.b {
            return Err(Error::GridTooShort(format!(
                "x ends at offset {}, operator needs it up to b = {}",
                x.hi(),
                self.b
            )));
        }
        let x = x.restrict(x.lo().max(base - n + 1), self.b)?;
        let caputo = caputo_difference(&x, base, self.nu())?;
        let grid = Grid::new(self.a, base + n + 1, self.b)?;
        Ok(GridFunction::from_offsets(grid, |t| {
            let now = self.p_at(t) * caputo.values()[(t - base) as usize];
            let before = self.p_at(t - 1) * caputo.values()[(t - 1 - base) as usize];
            now - before + self.q_at(t) * x.values()[(t - 1 - x.lo()) as usize]
        }))
    }

    /// Prepends the `N-1` ghost values to `x` given on `[0, b]`.
    pub fn extend_with_closure(&self, x: &GridFunction, closure: &GhostClosure) -> Result<GridFunction> {
        if x.lo() != 0 || x.hi() != self.b {
            return Err(Error::ShapeMismatch(format!(
                "expected x on [0, {}], got [{}, {}]",
                self.b,
                x.lo(),
                x.hi()
            )));
        }
        let ghosts = closure.ghost_values(self.n())?;
        let values = ghosts.iter().rev().chain(x.values()).copied().collect();
        GridFunction::from_values(self.extended_grid(), values)
    }

    /// Coefficient of `x(t)` in `(L_a^ν x)(t)`, which is `p(t)`.
    pub fn leading_coefficient(&self, t: i64) -> Result<f64> {
        let eq = self.equation_grid();
        if !eq.contains(t) {
            return Err(Error::OffGrid {
                offset: t,
                lo: eq.lo(),
                hi: eq.hi(),
            });
        }
        Ok(self.p_at(t))
    }
}
