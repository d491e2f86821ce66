//! Finite unit-step grids `{a + lo, ..., a + hi}` and real functions on them.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};

/// The finite window `N_{a+lo}^{a+hi}` of the unit grid anchored at `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    base: f64,
    lo: i64,
    hi: i64,
}

impl Grid {
    pub fn new(base: f64, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidGrid { lo, hi });
        }
        Ok(Self { base, lo, hi })
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    /// Always false; a grid holds at least one point.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, offset: i64) -> bool {
        (self.lo..=self.hi).contains(&offset)
    }

    /// The real point `base + offset`.
    pub fn point(&self, offset: i64) -> f64 {
        self.base + offset as f64
    }

    pub fn offsets(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// Same base, different offset window.
    pub fn with_offsets(&self, lo: i64, hi: i64) -> Result<Self> {
        Self::new(self.base, lo, hi)
    }
}

/// Values of a real function at every point of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    /// Tabulates `f` at every real point of `grid`.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64) -> f64) -> Self {
        let values = grid.offsets().map(|k| f(grid.point(k))).collect();
        Self { grid, values }
    }

    /// Tabulates `f` at every offset of `grid`.
    pub fn from_offsets(grid: Grid, f: impl FnMut(i64) -> f64) -> Self {
        let values = grid.offsets().map(f).collect();
        Self { grid, values }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn base(&self) -> f64 {
        self.grid.base
    }

    pub fn lo(&self) -> i64 {
        self.grid.lo
    }

    pub fn hi(&self) -> i64 {
        self.grid.hi
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at `offset`; off-grid access is an error.
    pub fn at(&self, offset: i64) -> Result<f64> {
        self.get(offset).ok_or(Error::OffGrid {
            offset,
            lo: self.grid.lo,
            hi: self.grid.hi,
        })
    }

    pub fn get(&self, offset: i64) -> Option<f64> {
        if self.grid.contains(offset) {
            Some(self.values[(offset - self.grid.lo) as usize])
        } else {
            None
        }
    }

    /// Iterates `(offset, value)` pairs in increasing offset order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.grid.offsets().zip(self.values.iter().copied())
    }

    /// Restriction to the sub-window `[lo, hi]`, which must lie inside the grid.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        let grid = self.grid.with_offsets(lo, hi)?;
        for k in [lo, hi] {
            if !self.grid.contains(k) {
                return Err(Error::OffGrid {
                    offset: k,
                    lo: self.grid.lo,
                    hi: self.grid.hi,
                });
            }
        }
        let start = (lo - self.grid.lo) as usize;
        let end = (hi - self.grid.lo) as usize;
        Ok(Self {
            grid,
            values: self.values[start..=end].to_vec(),
        })
    }

    /// Embeds the function in the window `[lo, hi]`, filling new points with zero.
    /// The window must contain the current grid.
    pub fn zero_extend(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo > self.grid.lo || hi < self.grid.hi {
            return Err(Error::ShapeMismatch(format!(
                "cannot zero-extend [{}, {}] to [{lo}, {hi}]",
                self.grid.lo, self.grid.hi
            )));
        }
        let grid = self.grid.with_offsets(lo, hi)?;
        Ok(Self::from_offsets(grid, |k| self.get(k).unwrap_or(0.0)))
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|v| factor * v)
    }

    /// `self + factor * other`, both on the same grid.
    pub fn axpy(&self, factor: f64, other: &GridFunction) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::ShapeMismatch(format!(
                "grids [{}, {}] and [{}, {}] differ",
                self.lo(),
                self.hi(),
                other.lo(),
                other.hi()
            )));
        }
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x + factor * y)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute difference over the offsets both functions share.
    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        let lo = self.lo().max(other.lo());
        let hi = self.hi().min(other.hi());
        (lo..=hi)
            .map(|k| (self.values[(k - self.lo()) as usize] - other.values[(k - other.lo()) as usize]).abs())
            .fold(0.0, f64::max)
    }
}

/// Definite nabla integral `∫_c^d f(s) ∇s`: the sum of `f` over `(c, d]`, or
/// zero when `d <= c`. Endpoints are offsets; `c` may sit one step below the
/// grid so that integrals based just outside the data are expressible.
pub fn nabla_integral(f: &GridFunction, c: i64, d: i64) -> Result<f64> {
    for k in [c, d] {
        if k < f.lo() - 1 || k > f.hi() {
            return Err(Error::OffGrid {
                offset: k,
                lo: f.lo(),
                hi: f.hi(),
            });
        }
    }
    if d <= c {
        return Ok(0.0);
    }
    Ok(((c + 1)..=d).map(|s| f.values[(s - f.lo()) as usize]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulates_points() {
        let g = Grid::new(0.0, 0, 3).unwrap();
        assert_eq!(GridFunction::from_fn(g, |t| t * t).values(), &[0.0, 1.0, 4.0, 9.0]);

        let g = Grid::new(2.5, -1, 1).unwrap();
        let f = GridFunction::from_fn(g, |_| 1.0);
        assert_eq!(f.values(), &[1.0, 1.0, 1.0]);
        assert_eq!(g.point(-1), 1.5);

        let g = Grid::new(0.0, 0, 0).unwrap();
        assert_eq!(GridFunction::from_fn(g, |_| 7.0).values(), &[7.0]);
    }

    #[test]
    fn rejects_inverted_grid() {
        assert_eq!(Grid::new(0.0, 3, 2), Err(Error::InvalidGrid { lo: 3, hi: 2 }));
    }

    #[test]
    fn off_grid_access_is_an_error() {
        let f = GridFunction::zeros(Grid::new(0.0, 0, 3).unwrap());
        assert!(f.at(4).is_err());
        assert!(f.at(-1).is_err());
        assert_eq!(f.at(3), Ok(0.0));
    }

    #[test]
    fn nabla_integral_examples() {
        let ones = GridFunction::constant(Grid::new(0.0, 0, 5).unwrap(), 1.0);
        assert_eq!(nabla_integral(&ones, 0, 5).unwrap(), 5.0);
        assert_eq!(nabla_integral(&ones, 3, 3).unwrap(), 0.0);
        assert_eq!(nabla_integral(&ones, 4, 2).unwrap(), 0.0);

        let id = GridFunction::from_fn(Grid::new(0.0, 0, 4).unwrap(), |t| t);
        assert_eq!(nabla_integral(&id, 1, 4).unwrap(), 9.0);
        assert!(nabla_integral(&id, 1, 5).is_err());
    }

    #[test]
    fn restrict_and_extend() {
        let f = GridFunction::from_offsets(Grid::new(1.0, -2, 4).unwrap(), |k| k as f64);
        let r = f.restrict(0, 2).unwrap();
        assert_eq!(r.values(), &[0.0, 1.0, 2.0]);
        let e = r.zero_extend(-1, 3).unwrap();
        assert_eq!(e.values(), &[0.0, 0.0, 1.0, 2.0, 0.0]);
        assert!(f.restrict(-3, 0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn integral_is_additive(vals in prop::collection::vec(-10.0f64..10.0, 2..20), c in 0usize..20, d in 0usize..20, e in 0usize..20) {
                let n = vals.len() as i64;
                let f = GridFunction::from_values(Grid::new(0.0, 0, n - 1).unwrap(), vals).unwrap();
                let mut pts = [c as i64 % n, d as i64 % n, e as i64 % n];
                pts.sort();
                let [c, d, e] = pts;
                let lhs = nabla_integral(&f, c, d).unwrap() + nabla_integral(&f, d, e).unwrap();
                let rhs = nabla_integral(&f, c, e).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
            }

            #[test]
            fn integral_is_linear(vals in prop::collection::vec(-10.0f64..10.0, 6), other in prop::collection::vec(-10.0f64..10.0, 6), alpha in -3.0f64..3.0) {
                let g = Grid::new(0.5, 0, 5).unwrap();
                let f = GridFunction::from_values(g, vals).unwrap();
                let h = GridFunction::from_values(g, other).unwrap();
                let combo = f.axpy(alpha, &h).unwrap();
                let lhs = nabla_integral(&combo, 0, 5).unwrap();
                let rhs = nabla_integral(&f, 0, 5).unwrap() + alpha * nabla_integral(&h, 0, 5).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
            }
        }
    }
}
