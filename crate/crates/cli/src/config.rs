//! JSON problem configuration and its validation into solver inputs.

use nabla_green::{
    BasisKind, BoundarySpec, FracOperator, FracOrder, GhostClosure, Grid, GridFunction,
    InitialConditions,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl ConfigError {
    pub fn field(field: impl Into<String>, message: impl ToString) -> Self {
        ConfigError::Field {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl From<serde_json::Error> for ConfigError {
    fn from(e: serde_json::Error) -> Self {
        ConfigError::Syntax {
            line: e.line(),
            column: e.column(),
            message: match e.to_string().rsplit_once(" at line ") {
                Some((message, _)) => message.to_string(),
                None => e.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantCoefficient {
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedCoefficient {
    pub values: Vec<f64>,
    /// Offset of `values[0]` from `a`.
    pub start: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, expecting = "either {\"constant\": x} or {\"values\": [...], \"start\": k}")]
pub enum CoefficientSpec {
    Constant(ConstantCoefficient),
    Tabulated(TabulatedCoefficient),
}

impl CoefficientSpec {
    pub fn constant(value: f64) -> Self {
        CoefficientSpec::Constant(ConstantCoefficient { constant: value })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GhostSpec {
    #[default]
    Zero,
    /// `x(a-1), x(a-2), ...`
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisChoice {
    Numeric,
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IvpSpec {
    #[serde(rename = "A")]
    pub initial: Vec<f64>,
    #[serde(default)]
    pub ghost: GhostSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BvpSpec {
    pub alpha: Vec<Vec<f64>>,
    #[serde(rename = "A")]
    pub left: Vec<f64>,
    pub beta: Vec<f64>,
    #[serde(rename = "B")]
    pub right: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisChoice>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreensSpec {
    #[serde(default)]
    pub conjugate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisChoice>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ProblemSpec {
    Ivp(IvpSpec),
    Bvp(BvpSpec),
    Greens(GreensSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub a: f64,
    pub b_offset: i64,
    pub nu: f64,
    pub p: CoefficientSpec,
    pub q: CoefficientSpec,
    /// Forcing on offsets `[N+1, b_offset]`; zero when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<f64>>,
    pub problem: ProblemSpec,
}

/// A validated problem, ready for the solvers.
#[derive(Debug, Clone)]
pub struct Setup {
    pub op: FracOperator,
    pub h: GridFunction,
    pub kind: SetupKind,
}

#[derive(Debug, Clone)]
pub enum SetupKind {
    Ivp(InitialConditions),
    Bvp {
        spec: BoundarySpec,
        basis: BasisKind,
    },
    Greens {
        spec: BoundarySpec,
        basis: BasisKind,
        conjugate: bool,
    },
}

impl SetupKind {
    pub fn boundary(&self) -> Option<(&BoundarySpec, BasisKind)> {
        match self {
            SetupKind::Ivp(_) => None,
            SetupKind::Bvp { spec, basis } | SetupKind::Greens { spec, basis, .. } => Some((spec, *basis)),
        }
    }
}

fn tabulate(
    name: &str,
    spec: &CoefficientSpec,
    a: f64,
    lo: i64,
    hi: i64,
) -> Result<GridFunction, ConfigError> {
    let grid = Grid::new(a, lo, hi).map_err(|e| ConfigError::field(name, e))?;
    match spec {
        CoefficientSpec::Constant(c) => {
            if !c.constant.is_finite() {
                return Err(ConfigError::field(format!("{name}.constant"), "must be finite"));
            }
            Ok(GridFunction::constant(grid, c.constant))
        }
        CoefficientSpec::Tabulated(t) => {
            if t.start != lo {
                return Err(ConfigError::field(
                    format!("{name}.start"),
                    format!("must be {lo}, got {}", t.start),
                ));
            }
            table(&format!("{name}.values"), &t.values, grid)
        }
    }
}

fn table(field: &str, values: &[f64], grid: Grid) -> Result<GridFunction, ConfigError> {
    if values.len() != grid.len() {
        return Err(ConfigError::field(
            field,
            format!(
                "needs {} values for offsets [{}, {}], got {}",
                grid.len(),
                grid.lo(),
                grid.hi(),
                values.len()
            ),
        ));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(ConfigError::field(format!("{field}[{i}]"), "must be finite"));
    }
    GridFunction::from_values(grid, values.to_vec()).map_err(|e| ConfigError::field(field, e))
}

fn basis_kind(field: &str, choice: Option<BasisChoice>, op: &FracOperator) -> Result<BasisKind, ConfigError> {
    match choice {
        None if op.is_unit() => Ok(BasisKind::Analytic),
        None | Some(BasisChoice::Numeric) => Ok(BasisKind::Numeric),
        Some(BasisChoice::Analytic) if op.is_unit() => Ok(BasisKind::Analytic),
        Some(BasisChoice::Analytic) => Err(ConfigError::field(field, "analytic basis requires p ≡ 1 and q ≡ 0")),
    }
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Validates every field against the operator's domain requirements.
    pub fn build(&self) -> Result<Setup, ConfigError> {
        if !self.a.is_finite() {
            return Err(ConfigError::field("a", "must be finite"));
        }
        let order = FracOrder::fractional(self.nu).map_err(|e| ConfigError::field("nu", e))?;
        let n = order.n() as i64;
        let b = self.b_offset;
        if b < n + 1 {
            return Err(ConfigError::field(
                "b_offset",
                format!("must be at least N + 1 = {} for nu = {}", n + 1, self.nu),
            ));
        }
        let p = tabulate("p", &self.p, self.a, n, b)?;
        let q = tabulate("q", &self.q, self.a, n + 1, b)?;
        let op = FracOperator::new(self.a, self.nu, b, p, q).map_err(|e| ConfigError::field("p", e))?;
        let h = match &self.h {
            Some(values) => table("h", values, op.equation_grid())?,
            None => GridFunction::zeros(op.equation_grid()),
        };
        let kind = match &self.problem {
            ProblemSpec::Ivp(ivp) => {
                if ivp.initial.len() != n as usize + 1 {
                    return Err(ConfigError::field(
                        "problem.ivp.A",
                        format!("needs N + 1 = {} values, got {}", n + 1, ivp.initial.len()),
                    ));
                }
                let closure = match &ivp.ghost {
                    GhostSpec::Zero => GhostClosure::Zero,
                    GhostSpec::Explicit(values) => GhostClosure::Explicit(values.clone()),
                };
                closure
                    .ghost_values(n as usize)
                    .map_err(|e| ConfigError::field("problem.ivp.ghost", e))?;
                SetupKind::Ivp(InitialConditions::new(ivp.initial.clone(), closure))
            }
            ProblemSpec::Bvp(bvp) => SetupKind::Bvp {
                spec: boundary_spec("problem.bvp", n, bvp.alpha.clone(), bvp.left.clone(), bvp.beta.clone(), bvp.right)?,
                basis: basis_kind("problem.bvp.basis", bvp.basis, &op)?,
            },
            ProblemSpec::Greens(g) => {
                let spec = if g.conjugate {
                    if n != 2 || g.alpha.is_some() || g.beta.is_some() {
                        return Err(ConfigError::field(
                            "problem.greens.conjugate",
                            "conjugate conditions need 1 < nu < 2 and no explicit alpha/beta",
                        ));
                    }
                    BoundarySpec::conjugate(0.0, 0.0, 0.0)
                } else {
                    let (Some(alpha), Some(beta)) = (&g.alpha, &g.beta) else {
                        return Err(ConfigError::field(
                            "problem.greens",
                            "either conjugate = true or both alpha and beta are required",
                        ));
                    };
                    boundary_spec("problem.greens", n, alpha.clone(), vec![0.0; alpha.len()], beta.clone(), 0.0)?
                };
                SetupKind::Greens {
                    spec,
                    basis: basis_kind("problem.greens.basis", g.basis, &op)?,
                    conjugate: g.conjugate,
                }
            }
        };
        Ok(Setup { op, h, kind })
    }
}

fn boundary_spec(
    field: &str,
    n: i64,
    alpha: Vec<Vec<f64>>,
    left: Vec<f64>,
    beta: Vec<f64>,
    right: f64,
) -> Result<BoundarySpec, ConfigError> {
    if alpha.len() != n as usize {
        return Err(ConfigError::field(
            format!("{field}.alpha"),
            format!("needs N = {n} rows, got {}", alpha.len()),
        ));
    }
    BoundarySpec::new(alpha, left, beta, right).map_err(|e| ConfigError::field(field, e))
}
