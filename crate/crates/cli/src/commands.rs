use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use nabla_green::oracle::{equation_rows, probe_rows};
use nabla_green::{
    build_greens, cauchy_function, compare_greens, conjugate_greens_closed_form, dense_solve,
    greens_solve, homogeneous_basis, oracle, residual, solve_bvp, solve_ivp,
    variation_of_constants, FracOperator, GreensFunction, GridFunction, InitialConditions, Problem,
};

use crate::config::{ConfigError, ProblemConfig, Setup, SetupKind};
use crate::output;
use crate::{CliError, Command, IoArgs};

/// A verification check and its default tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
}

/// Checks run by `verify`, in report order. A failure of check `i` exits with
/// code `10 + i`.
pub const CHECKS: [Check; 8] = [
    Check { name: "ivp_residual", tolerance: 1e-8 },
    Check { name: "variation_of_constants", tolerance: 1e-9 },
    Check { name: "dense_vs_ivp", tolerance: 1e-9 },
    Check { name: "probe_vs_symbolic", tolerance: 1e-10 },
    Check { name: "bvp_residual", tolerance: 1e-8 },
    Check { name: "greens_residual", tolerance: 1e-8 },
    Check { name: "greens_vs_bvp", tolerance: 1e-8 },
    Check { name: "closed_form", tolerance: 1e-10 },
];

fn params(raw: &[String]) -> Result<BTreeMap<String, String>, CliError> {
    raw.iter()
        .map(|kv| match kv.split_once('=') {
            Some((k, v)) if !k.is_empty() => Ok((k.to_string(), v.to_string())),
            _ => Err(CliError::Argument {
                arg: kv.clone(),
                message: "expected KEY=VALUE".into(),
            }),
        })
        .collect()
}

fn param<T: std::str::FromStr>(map: &mut BTreeMap<String, String>, key: &str, default: Option<T>) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    match map.remove(key) {
        Some(v) => v.parse().map_err(|e: T::Err| CliError::Argument {
            arg: format!("{key}={v}"),
            message: e.to_string(),
        }),
        None => default.ok_or_else(|| CliError::Argument {
            arg: key.to_string(),
            message: "missing".into(),
        }),
    }
}

fn no_leftovers(map: BTreeMap<String, String>) -> Result<(), CliError> {
    match map.into_iter().next() {
        Some((k, v)) => Err(CliError::Argument {
            arg: format!("{k}={v}"),
            message: "unknown parameter".into(),
        }),
        None => Ok(()),
    }
}

fn load(io: &IoArgs, stdin: &mut dyn Read) -> Result<Setup, CliError> {
    let text = match &io.config {
        Some(path) => fs::read_to_string(path).map_err(|e| ConfigError::field("--config", format!("{}: {e}", path.display())))?,
        None => {
            let mut text = String::new();
            stdin.read_to_string(&mut text)?;
            text
        }
    };
    Ok(ProblemConfig::from_json(&text)?.build()?)
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, body: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body)?,
        None => stdout.write_all(body)?,
    }
    Ok(())
}

fn greens_for(setup: &Setup) -> Result<GreensFunction, CliError> {
    let (spec, basis) = setup
        .kind
        .boundary()
        .ok_or_else(|| ConfigError::field("problem", "a boundary value problem (bvp or greens) is required"))?;
    let basis = homogeneous_basis(&setup.op, basis)?;
    Ok(build_greens(&setup.op, spec, &basis)?)
}

pub fn execute(command: &Command, tolerance: Option<&str>, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut body = Vec::new();
    let out = match command {
        Command::Monomial { params: raw, out } => {
            let mut map = params(raw)?;
            let nu: f64 = param(&mut map, "nu", None)?;
            let len: usize = param(&mut map, "len", Some(21))?;
            let a: f64 = param(&mut map, "a", Some(0.0))?;
            no_leftovers(map)?;
            output::write_monomial(&mut body, a, nu, len)?;
            out.as_deref()
        }
        Command::Cauchy(io) => {
            let setup = load(io, stdin)?;
            output::write_cauchy(&mut body, setup.op.a(), &cauchy_function(&setup.op)?)?;
            io.out.as_deref()
        }
        Command::SolveIvp(io) => {
            let setup = load(io, stdin)?;
            let SetupKind::Ivp(ic) = &setup.kind else {
                return Err(ConfigError::field("problem", "solve-ivp needs an ivp problem").into());
            };
            output::write_solution(&mut body, &solve_ivp(&setup.op, &setup.h, ic)?)?;
            io.out.as_deref()
        }
        Command::SolveBvp(io) => {
            let setup = load(io, stdin)?;
            let Some((spec, kind)) = setup.kind.boundary() else {
                return Err(ConfigError::field("problem", "solve-bvp needs a bvp or greens problem").into());
            };
            let basis = homogeneous_basis(&setup.op, kind)?;
            output::write_solution(&mut body, &solve_bvp(&setup.op, &setup.h, spec, &basis)?)?;
            io.out.as_deref()
        }
        Command::Greens { conjugate, params: raw, io } => {
            let g = if *conjugate && io.config.is_none() {
                let mut map = params(raw)?;
                let a: f64 = param(&mut map, "a", Some(0.0))?;
                let b: f64 = param(&mut map, "b", None)?;
                let nu: f64 = param(&mut map, "nu", None)?;
                no_leftovers(map)?;
                let offset = b - a;
                if offset.fract() != 0.0 || offset.abs() > 1e9 {
                    return Err(CliError::Argument {
                        arg: format!("b={b}"),
                        message: "b - a must be an integer".into(),
                    });
                }
                conjugate_greens_closed_form(a, offset as i64, nu)?
            } else {
                if !raw.is_empty() {
                    return Err(CliError::Argument {
                        arg: raw[0].clone(),
                        message: "KEY=VALUE parameters need --conjugate without --config".into(),
                    });
                }
                greens_for(&load(io, stdin)?)?
            };
            output::write_greens(&mut body, &g)?;
            io.out.as_deref()
        }
        Command::Verify(io) => {
            let setup = load(io, stdin)?;
            let tol = match tolerance {
                Some(raw) => Some(raw.trim().parse::<f64>().ok().filter(|t| *t > 0.0).ok_or_else(|| CliError::Argument {
                    arg: format!("{}={raw}", crate::TOLERANCE_ENV),
                    message: "expected a positive decimal".into(),
                })?),
                None => None,
            };
            let results = verify(&setup)?;
            let mut first_failure = None;
            for (i, (check, value)) in CHECKS.iter().zip(&results).enumerate() {
                let limit = tol.unwrap_or(check.tolerance);
                let line = match value {
                    Some(v) => {
                        let ok = *v <= limit;
                        if !ok && first_failure.is_none() {
                            first_failure = Some(i);
                        }
                        format!("{i} {:<24} {v:.3e} <= {limit:.1e} {}", check.name, if ok { "PASS" } else { "FAIL" })
                    }
                    None => format!("{i} {:<24} skipped", check.name),
                };
                writeln!(body, "{line}")?;
            }
            emit(io.out.as_deref(), stdout, &body)?;
            return match first_failure {
                Some(index) => Err(CliError::Verify {
                    index,
                    name: CHECKS[index].name,
                }),
                None => Ok(()),
            };
        }
    };
    emit(out, stdout, &body)
}

fn max_row_diff(r1: &[Vec<f64>], r2: &[Vec<f64>]) -> f64 {
    if r1.len() != r2.len() {
        return f64::INFINITY;
    }
    r1.iter()
        .zip(r2)
        .map(|(a, b)| {
            if a.len() != b.len() {
                return f64::INFINITY;
            }
            a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
        })
        .fold(0.0, f64::max)
}

/// Measured error of each entry of [`CHECKS`], or `None` when the check does
/// not apply to this problem.
pub fn verify(setup: &Setup) -> Result<Vec<Option<f64>>, CliError> {
    let (op, h) = (&setup.op, &setup.h);
    let ic = match &setup.kind {
        SetupKind::Ivp(ic) => ic.clone(),
        _ => InitialConditions::zero(op.n()),
    };
    let x = solve_ivp(op, h, &ic)?;
    let zero_ic = solve_ivp(op, h, &InitialConditions::zero(op.n()))?;
    let dense = dense_solve(&oracle::assemble(op, &Problem::Ivp(ic), h)?)?;
    let mut results = vec![
        Some(residual(op, &x, h)?),
        Some(variation_of_constants(op, h)?.max_abs_diff(&zero_ic)),
        Some(dense.x.max_abs_diff(&x)),
        Some(max_row_diff(&equation_rows(op), &probe_rows(op)?)),
    ];
    match setup.kind.boundary() {
        Some((spec, kind)) => {
            let basis = homogeneous_basis(op, kind)?;
            let bvp = solve_bvp(op, h, spec, &basis)?;
            let g = build_greens(op, spec, &basis)?;
            let from_g = greens_solve(&g, h)?;
            // G h solves the zero-data problem; the data part solves L y = 0
            let data_part = solve_bvp(op, &GridFunction::zeros(*h.grid()), spec, &basis)?;
            results.push(Some(residual(op, &bvp, h)?));
            results.push(Some(residual(op, &from_g, h)?));
            results.push(Some(from_g.axpy(1.0, &data_part)?.max_abs_diff(&bvp)));
            results.push(closed_form_gap(op, &setup.kind, &g)?);
        }
        None => results.extend([None, None, None, None]),
    }
    Ok(results)
}

fn closed_form_gap(op: &FracOperator, kind: &SetupKind, g: &GreensFunction) -> Result<Option<f64>, CliError> {
    let SetupKind::Greens { conjugate: true, basis, .. } = kind else {
        return Ok(None);
    };
    if !op.is_unit() || *basis != nabla_green::BasisKind::Analytic {
        return Ok(None);
    }
    let closed = conjugate_greens_closed_form(op.a(), op.b(), op.nu())?;
    Ok(Some(compare_greens(g, &closed)?))
}
