//! Whole-order nabla differences, nabla fractional sums, and the
//! Riemann–Liouville and Caputo fractional differences.
//!
//! Every operator returns a [`GridFunction`] on exactly the offsets where its
//! defining sum makes sense; nothing is padded implicitly.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::monomial::{monomial_table, MonomialOrder};

/// A positive order `ν` together with `N = ⌈ν⌉`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    nu: f64,
    n: usize,
}

impl FracOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Error::InvalidOrder {
                nu,
                reason: "order must be finite and positive",
            });
        }
        Ok(Self {
            nu,
            n: nu.ceil() as usize,
        })
    }

    /// Like [`FracOrder::new`] but rejects whole orders (`N-1 < ν < N` strictly).
    pub fn fractional(nu: f64) -> Result<Self> {
        let order = Self::new(nu)?;
        if order.is_whole() {
            return Err(Error::InvalidOrder {
                nu,
                reason: "order must not be an integer",
            });
        }
        Ok(order)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `N = ⌈ν⌉`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_whole(&self) -> bool {
        MonomialOrder::new(self.nu).is_integer()
    }
}

/// Signed binomial weights `w_k = (-1)^k C(n, k)`, so that
/// `∇^n f(t) = Σ_k w_k f(t-k)`.
pub fn binomial_weights(n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n + 1);
    let mut c = 1.0;
    for k in 0..=n {
        w.push(if k % 2 == 0 { c } else { -c });
        c = c * (n - k) as f64 / (k + 1) as f64;
    }
    w
}

/// `∇f(t) = f(t) - f(t-1)` on `[lo+1, hi]`.
pub fn nabla(f: &GridFunction) -> Result<GridFunction> {
    nabla_n(f, 1)
}

/// `∇^n f` on `[lo+n, hi]`; `n = 0` returns `f`.
pub fn nabla_n(f: &GridFunction, n: usize) -> Result<GridFunction> {
    if f.len() < n + 1 {
        return Err(Error::GridTooShort(format!(
            "order-{n} difference needs {} points, grid has {}",
            n + 1,
            f.len()
        )));
    }
    let mut values = f.values().to_vec();
    for _ in 0..n {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let grid = f.grid().with_offsets(f.lo() + n as i64, f.hi())?;
    GridFunction::from_values(grid, values)
}

/// Nabla fractional sum `∇_base^{-ν} f(t) = Σ_{s=base+1}^{t} H_{ν-1}(t, s-1) f(s)`
/// on `[base, hi]`, with value 0 at `base`.
///
/// `f` has to be known on `(base, hi]`; `base` itself may lie one step below
/// `f`'s grid.
pub fn frac_integral(f: &GridFunction, base: i64, nu: f64) -> Result<GridFunction> {
    if !nu.is_finite() || nu <= 0.0 {
        return Err(Error::InvalidOrder {
            nu,
            reason: "fractional sum order must be positive",
        });
    }
    if base < f.lo() - 1 || base > f.hi() {
        return Err(Error::OffGrid {
            offset: base,
            lo: f.lo(),
            hi: f.hi(),
        });
    }
    let len = (f.hi() - base) as usize;
    let kernel = monomial_table(nu - 1.0, len + 1);
    let data = &f.values()[(base + 1 - f.lo()) as usize..];
    let mut values = Vec::with_capacity(len + 1);
    values.push(0.0);
    for m in 1..=len {
        // t = base + m, s = base + j, H_{ν-1}(t, ρ(s)) = kernel[m - j + 1]
        let sum: f64 = (1..=m).map(|j| kernel[m - j + 1] * data[j - 1]).sum();
        values.push(sum);
    }
    GridFunction::from_values(f.grid().with_offsets(base, f.hi())?, values)
}

/// Riemann–Liouville difference `∇^N ∇_base^{-(N-ν)} f` on `[base+1, hi]`.
///
/// The inner fractional sum vanishes for `t <= base` (empty sums), which is
/// what lets the outer whole-order difference reach down to `base+1`.
pub fn rl_difference(f: &GridFunction, base: i64, nu: f64) -> Result<GridFunction> {
    let order = FracOrder::fractional(nu)?;
    let n = order.n();
    if f.hi() < base + 1 {
        return Err(Error::GridTooShort(format!(
            "no points above base {base} (grid ends at {})",
            f.hi()
        )));
    }
    let inner = frac_integral(f, base, n as f64 - nu)?;
    let extended = inner.zero_extend(base - n as i64 + 1, f.hi())?;
    nabla_n(&extended, n)
}

/// Caputo difference `∇_{base*}^ν f = ∇_base^{-(N-ν)} ∇^N f` on `[base, hi]`.
///
/// `f` must be known on `[base-N+1, hi]`, i.e. including the `N-1` points below
/// `base`. The value at `base` is 0.
pub fn caputo_difference(f: &GridFunction, base: i64, nu: f64) -> Result<GridFunction> {
    let order = FracOrder::fractional(nu)?;
    let n = order.n();
    let lo = base - n as i64 + 1;
    if f.lo() > lo {
        return Err(Error::GridTooShort(format!(
            "Caputo difference of order {nu} at base {base} needs values from offset {lo}, grid starts at {}",
            f.lo()
        )));
    }
    if f.hi() < base {
        return Err(Error::OffGrid {
            offset: base,
            lo: f.lo(),
            hi: f.hi(),
        });
    }
    if f.hi() == base {
        return Ok(GridFunction::zeros(f.grid().with_offsets(base, base)?));
    }
    let whole = nabla_n(&f.restrict(lo, f.hi())?, n)?;
    frac_integral(&whole, base, n as f64 - nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::monomial::taylor_monomial;

    fn grid(lo: i64, hi: i64) -> Grid {
        Grid::new(0.0, lo, hi).unwrap()
    }

    /// Direct double sum `Σ_s H_{ν-1}(t, s-1) f(s)` with the scalar monomial.
    fn frac_sum_oracle(f: impl Fn(i64) -> f64, base: i64, nu: f64, t: i64) -> f64 {
        ((base + 1)..=t).map(|s| taylor_monomial(t - s + 1, nu - 1.0) * f(s)).sum()
    }

    #[test]
    fn binomial_weight_rows() {
        assert_eq!(binomial_weights(0), vec![1.0]);
        assert_eq!(binomial_weights(2), vec![1.0, -2.0, 1.0]);
        assert_eq!(binomial_weights(3), vec![1.0, -3.0, 3.0, -1.0]);
    }

    #[test]
    fn fractional_order_checks() {
        assert_eq!(FracOrder::new(1.5).unwrap().n(), 2);
        assert_eq!(FracOrder::new(2.0).unwrap().n(), 2);
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::fractional(2.0).is_err());
        assert_eq!(FracOrder::fractional(0.3).unwrap().n(), 1);
    }

    #[test]
    fn nabla_of_square() {
        let f = GridFunction::from_fn(grid(0, 4), |t| t * t);
        let d = nabla(&f).unwrap();
        assert_eq!(d.lo(), 1);
        assert_eq!(d.at(3).unwrap(), 5.0);
        for (t, v) in d.iter() {
            assert_eq!(v, 2.0 * t as f64 - 1.0);
        }
        let c = nabla(&GridFunction::constant(grid(0, 4), 3.0)).unwrap();
        assert!(c.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn nabla_of_monomial_lowers_order() {
        let nu = 1.5;
        let f = GridFunction::from_offsets(grid(-1, 5), |m| taylor_monomial(m, nu));
        let d = nabla(&f).unwrap();
        for (m, v) in d.iter() {
            assert!((v - taylor_monomial(m, nu - 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn higher_differences() {
        let sq = GridFunction::from_fn(grid(0, 4), |t| t * t);
        let d2 = nabla_n(&sq, 2).unwrap();
        assert_eq!((d2.lo(), d2.hi()), (2, 4));
        assert!(d2.values().iter().all(|&v| v == 2.0));
        assert_eq!(nabla_n(&sq, 0).unwrap(), sq);
        let lin = GridFunction::from_fn(grid(0, 5), |t| t);
        assert!(nabla_n(&lin, 2).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(nabla_n(&GridFunction::zeros(grid(0, 0)), 1).is_err());
    }

    #[test]
    fn frac_integral_of_one_is_monomial() {
        let ones = GridFunction::constant(grid(1, 12), 1.0);
        for nu in [0.3, 1.5, 2.7] {
            let r = frac_integral(&ones, 0, nu).unwrap();
            assert_eq!(r.lo(), 0);
            assert_eq!(r.at(0).unwrap(), 0.0);
            for (m, v) in r.iter() {
                assert!((v - taylor_monomial(m, nu)).abs() <= 1e-12 * taylor_monomial(m, nu).max(1.0));
            }
        }
    }

    #[test]
    fn frac_integral_value_at_base_is_zero() {
        let f = GridFunction::from_fn(grid(-3, 6), |t| t.sin() + 2.0);
        assert_eq!(frac_integral(&f, 2, 0.7).unwrap().at(2).unwrap(), 0.0);
        assert!(frac_integral(&f, -5, 0.7).is_err());
        assert!(frac_integral(&f, 2, 0.0).is_err());
    }

    #[test]
    fn frac_integral_power_rule_against_double_sum() {
        let nu = 1.5;
        let f = GridFunction::from_offsets(grid(0, 10), |m| taylor_monomial(m, nu));
        let r = frac_integral(&f, 0, 1.0).unwrap();
        for m in 0..=10 {
            let oracle = frac_sum_oracle(|s| taylor_monomial(s, nu), 0, 1.0, m);
            assert!((r.at(m).unwrap() - oracle).abs() < 1e-12 * oracle.max(1.0));
            assert!((r.at(m).unwrap() - taylor_monomial(m, nu + 1.0)).abs() < 1e-11 * oracle.max(1.0));
        }
    }

    #[test]
    fn rl_difference_of_monomial() {
        let f = GridFunction::from_offsets(grid(1, 12), |m| taylor_monomial(m, 2.5));
        let r = rl_difference(&f, 0, 1.5).unwrap();
        assert_eq!((r.lo(), r.hi()), (1, 12));
        for (m, v) in r.iter() {
            assert!((v - taylor_monomial(m, 1.0)).abs() < 1e-10, "m={m}: {v}");
        }
        let z = rl_difference(&GridFunction::zeros(grid(1, 6)), 0, 0.4).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rl_undoes_fractional_sum() {
        let f = GridFunction::from_fn(grid(1, 12), |t| (0.7 * t).cos() - 0.2 * t);
        for mu in [0.4, 1.3, 2.6] {
            let sum = frac_integral(&f, 0, mu).unwrap();
            let back = rl_difference(&sum, 0, mu).unwrap();
            assert!(back.max_abs_diff(&f) < 1e-10);
        }
    }

    #[test]
    fn caputo_examples() {
        let nu = 1.5;
        let c = GridFunction::constant(grid(-1, 8), 4.0);
        let r = caputo_difference(&c, 0, nu).unwrap();
        assert_eq!((r.lo(), r.hi()), (0, 8));
        assert!(r.values().iter().all(|&v| v == 0.0));

        let lin = GridFunction::from_fn(grid(-1, 6), |t| t);
        assert!(caputo_difference(&lin, 0, nu).unwrap().max_abs() < 1e-14);

        let h = GridFunction::from_offsets(grid(-1, 6), |m| taylor_monomial(m, nu));
        let r = caputo_difference(&h, 0, nu).unwrap();
        assert_eq!(r.at(0).unwrap(), 0.0);
        for m in 1..=6 {
            // oracle: direct double sum of H_{N-ν-1} against ∇²H_ν built from scalar monomials
            let d2 = |s: i64| taylor_monomial(s, nu) - 2.0 * taylor_monomial(s - 1, nu) + taylor_monomial(s - 2, nu);
            let oracle = frac_sum_oracle(d2, 0, 2.0 - nu, m);
            assert!((oracle - 1.0).abs() < 1e-12);
            assert!((r.at(m).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn caputo_needs_ghost_points() {
        let f = GridFunction::constant(grid(0, 6), 1.0);
        assert!(matches!(caputo_difference(&f, 0, 1.5), Err(Error::GridTooShort(_))));
        assert!(caputo_difference(&f, 0, 0.5).is_ok());
        assert!(caputo_difference(&f, 0, 1.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn operators_are_linear(
                x in prop::collection::vec(-1.0f64..1.0, 12),
                y in prop::collection::vec(-1.0f64..1.0, 12),
                alpha in -2.0f64..2.0,
                nu in prop::sample::select(vec![0.3, 1.5, 2.6]),
            ) {
                let g = grid(-2, 9);
                let fx = GridFunction::from_values(g, x).unwrap();
                let fy = GridFunction::from_values(g, y).unwrap();
                let combo = fx.axpy(alpha, &fy).unwrap();
                type Op = fn(&GridFunction, f64) -> Result<GridFunction>;
                let ops: [Op; 3] = [
                    |f, nu| frac_integral(f, 0, nu),
                    |f, nu| rl_difference(f, 0, nu),
                    |f, nu| caputo_difference(f, 0, nu),
                ];
                for op in ops {
                    let lhs = op(&combo, nu).unwrap();
                    let rhs = op(&fx, nu).unwrap().axpy(alpha, &op(&fy, nu).unwrap()).unwrap();
                    prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
                }
            }
        }
    }
}
