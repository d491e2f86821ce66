//! Rising functions and nabla Taylor monomials `H_ν(t, a)`.
//!
//! Everything is evaluated with exact-step product recurrences. Raw gamma
//! ratios overflow past `m ≈ 170` and lose the sign once `ν + j` crosses zero,
//! so gamma evaluation only appears for the leading `Γ(ν+1)` factor of
//! [`rising`] and in tests.

use statrs::function::gamma::gamma;

/// An order `ν` with its integer-ness made explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonomialOrder {
    nu: f64,
}

impl MonomialOrder {
    pub fn new(nu: f64) -> Self {
        Self { nu }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `Some(k)` when `ν` is the integer `k`.
    pub fn as_integer(&self) -> Option<i64> {
        if self.nu.is_finite() && self.nu.fract() == 0.0 {
            Some(self.nu as i64)
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        self.as_integer().is_some()
    }
}

/// Generalized rising function `m^(ν̄) = Γ(m+ν)/Γ(m)` at an integer `m`.
///
/// For `m <= 0` the value is 0 (when `m+ν` is a non-positive integer as well,
/// the limit convention also gives 0). Non-negative integer orders use the
/// polynomial `m(m+1)...(m+ν-1)` at every `m`. The only undefined case, a pole
/// of `Γ(m+ν)` with `m >= 1`, yields NaN.
pub fn rising(m: i64, nu: f64) -> f64 {
    match MonomialOrder::new(nu).as_integer() {
        Some(k) if k >= 0 => (0..k).map(|j| (m + j) as f64).product(),
        Some(k) => {
            if m + k >= 1 {
                1.0 / ((m + k)..m).map(|j| j as f64).product::<f64>()
            } else if m <= 0 {
                0.0
            } else {
                f64::NAN
            }
        }
        None => {
            if m >= 1 {
                gamma(nu + 1.0) * monomial_product(m, nu)
            } else {
                0.0
            }
        }
    }
}

/// Taylor monomial `H_ν(a+m, a) = m^(ν̄)/Γ(ν+1)`.
///
/// * `ν = 0`: 1 everywhere.
/// * integer `ν = k > 0`: `m(m+1)...(m+k-1)/k!` for every integer `m`, so the
///   monomial extends polynomially below the base.
/// * otherwise: `∏_{j=1}^{m-1} (ν+j)/j` for `m >= 1` and 0 for `m <= 0`.
pub fn taylor_monomial(m: i64, nu: f64) -> f64 {
    match MonomialOrder::new(nu).as_integer() {
        Some(0) => 1.0,
        Some(k) if k > 0 => (1..=k).fold(1.0, |acc, j| acc * (m + j - 1) as f64 / j as f64),
        _ => {
            if m >= 1 {
                monomial_product(m, nu)
            } else {
                0.0
            }
        }
    }
}

/// `H_ν(a+m, a)` for `m = 0, 1, ..., len-1`.
///
/// Entries for `m >= 1` come from the recurrence
/// `H(m+1) = H(m)·(m+ν)/m`, which reproduces [`taylor_monomial`] bit for bit
/// at non-integer orders.
pub fn monomial_table(nu: f64, len: usize) -> Vec<f64> {
    if MonomialOrder::new(nu).is_integer() {
        return (0..len as i64).map(|m| taylor_monomial(m, nu)).collect();
    }
    let mut table = Vec::with_capacity(len);
    if len == 0 {
        return table;
    }
    table.push(0.0);
    let mut h = 1.0;
    for m in 1..len {
        table.push(h);
        h *= (nu + m as f64) / m as f64;
    }
    table
}

fn monomial_product(m: i64, nu: f64) -> f64 {
    let mut h = 1.0;
    for j in 1..m {
        h *= (nu + j as f64) / j as f64;
    }
    h
}
