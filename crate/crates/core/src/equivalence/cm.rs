//! Complete-monotonicity probes: signs of `(-1)^r f^{(r)}(λ)` on a grid.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::derivatives::{
    exp_trace_by_spectrum, exp_trace_derivatives_raw, inverse_power_derivative, EXP_NORM_LIMIT,
};
use super::quadrature::gauss_laguerre;
use crate::error::{BmvError, Result};
use crate::matcore::{check_same_dim, HermitianMatrix, MatrixFunction};
use crate::numeric::{gamma, json_f64, richardson_best, richardson_derivative};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub lambda: f64,
    pub r: usize,
    pub value: f64,
}

/// Signed derivatives `(-1)^r f^{(r)}(λ)` on a grid, with their scales and
/// every entry below `-tol · scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct CMReport {
    pub lambda_grid: Vec<f64>,
    pub orders: Vec<usize>,
    /// `values[i][r]` at `lambda_grid[i]`.
    pub values: Vec<Vec<f64>>,
    pub scales: Vec<Vec<f64>>,
    pub tol: f64,
    pub min_signed_value: f64,
    pub violations: Vec<Violation>,
    /// Largest relative gap to Richardson finite differences (orders ≤ 4),
    /// when a cross-check was requested.
    pub fd_discrepancy: Option<f64>,
}

impl CMReport {
    fn assemble(lambda_grid: Vec<f64>, r_max: usize, values: Vec<Vec<f64>>, scales: Vec<Vec<f64>>, tol: f64) -> Self {
        let mut violations = Vec::new();
        let mut min_signed_value = f64::INFINITY;
        for (i, (row, srow)) in values.iter().zip(&scales).enumerate() {
            for (r, (&v, &s)) in row.iter().zip(srow).enumerate() {
                min_signed_value = min_signed_value.min(v);
                if v < -tol * s {
                    violations.push(Violation {
                        lambda: lambda_grid[i],
                        r,
                        value: v,
                    });
                }
            }
        }
        Self {
            lambda_grid,
            orders: (0..=r_max).collect(),
            values,
            scales,
            tol,
            min_signed_value,
            violations,
            fd_discrepancy: None,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let grid = |m: &Vec<Vec<f64>>| -> Value {
            Value::Array(m.iter().map(|row| Value::Array(row.iter().map(|&x| json_f64(x)).collect())).collect())
        };
        json!({
            "lambda_grid": self.lambda_grid.iter().map(|&x| json_f64(x)).collect::<Vec<_>>(),
            "orders": self.orders,
            "values": grid(&self.values),
            "scales": grid(&self.scales),
            "tol": json_f64(self.tol),
            "min_signed_value": json_f64(self.min_signed_value),
            "violations": self.violations.iter().map(|v| json!({
                "lambda": json_f64(v.lambda),
                "r": v.r,
                "value": json_f64(v.value),
            })).collect::<Vec<_>>(),
            "fd_discrepancy": self.fd_discrepancy.map(json_f64).unwrap_or(Value::Null),
        })
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(BmvError::InvalidArgument("empty λ grid".into()));
    }
    if let Some(x) = grid.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(BmvError::InvalidArgument(format!("grid point {x} is not a finite λ ≥ 0")));
    }
    Ok(())
}

fn signed(r: usize, v: f64) -> f64 {
    if r % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Probes `λ ↦ Tr exp(A-λB)` for `B ⪰ 0`.
pub fn cm_probe_exp(a: &HermitianMatrix, b: &HermitianMatrix, r_max: usize, grid: &[f64], tol: f64) -> Result<CMReport> {
    check_same_dim(a, b)?;
    check_grid(grid)?;
    let sb = b.require_positive()?;
    let nb = sb.operator_norm();
    let na = a.operator_norm();
    let rows: Vec<(Vec<f64>, Vec<f64>)> = grid
        .par_iter()
        .map(|&lambda| {
            let bound = na + lambda * nb;
            if !(bound <= EXP_NORM_LIMIT) {
                return Err(BmvError::Overflow {
                    bound,
                    limit: EXP_NORM_LIMIT,
                });
            }
            let d = exp_trace_derivatives_raw(a.matrix(), b.matrix(), r_max, lambda);
            let tr = exp_trace_by_spectrum(a, b, lambda);
            let values = d.iter().enumerate().map(|(r, &v)| signed(r, v)).collect();
            let scales = (0..=r_max).map(|r| nb.powi(r as i32) * tr).collect();
            Ok((values, scales))
        })
        .collect::<Result<_>>()?;
    let (values, scales) = rows.into_iter().unzip();
    Ok(CMReport::assemble(grid.to_vec(), r_max, values, scales, tol))
}

/// [`cm_probe_exp`] plus a Richardson finite-difference cross-check of
/// every value with order ≤ 4.
pub fn cm_probe_exp_checked(a: &HermitianMatrix, b: &HermitianMatrix, r_max: usize, grid: &[f64], tol: f64) -> Result<CMReport> {
    let mut report = cm_probe_exp(a, b, r_max, grid, tol)?;
    let nb = b.operator_norm();
    let h = if nb > 0.0 { 0.5 / nb } else { 0.5 };
    let worst = grid
        .par_iter()
        .enumerate()
        .map(|(i, &lambda)| {
            (0..=r_max.min(4))
                .map(|r| {
                    let fd = richardson_derivative(|x| exp_trace_by_spectrum(a, b, x), lambda, r, h);
                    let v = signed(r, report.values[i][r]);
                    (v - fd.value).abs() / report.scales[i][r].max(f64::MIN_POSITIVE)
                })
                .fold(0.0, f64::max)
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max);
    report.fd_discrepancy = Some(worst);
    Ok(report)
}

/// Probes `λ ↦ Tr(A+λB)^{-p}` for integer `p`: derivatives at λ come from
/// the composition sum at the re-based point `A + λB`.
pub fn cm_probe_invpow(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r_max: usize, grid: &[f64], tol: f64) -> Result<CMReport> {
    check_same_dim(a, b)?;
    check_grid(grid)?;
    a.require_positive_definite()?;
    b.require_positive()?;
    let rows: Vec<(Vec<f64>, Vec<f64>)> = grid
        .par_iter()
        .map(|&lambda| {
            let base = a.add_scaled(lambda, b)?;
            let mut values = Vec::with_capacity(r_max + 1);
            let mut scales = Vec::with_capacity(r_max + 1);
            for r in 0..=r_max {
                let d = inverse_power_derivative(&base, b, p, r)?;
                values.push(signed(r, d.value));
                scales.push(d.scale);
            }
            Ok((values, scales))
        })
        .collect::<Result<_>>()?;
    let (values, scales) = rows.into_iter().unzip();
    Ok(CMReport::assemble(grid.to_vec(), r_max, values, scales, tol))
}

/// [`cm_probe_invpow`] plus a Richardson cross-check of orders ≤ 4.
pub fn cm_probe_invpow_checked(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    p: usize,
    r_max: usize,
    grid: &[f64],
    tol: f64,
) -> Result<CMReport> {
    let mut report = cm_probe_invpow(a, b, p, r_max, grid, tol)?;
    let worst = grid
        .par_iter()
        .enumerate()
        .map(|(i, &lambda)| -> Result<f64> {
            let base = a.add_scaled(lambda, b)?;
            let (_, bt) = crate::matcore::lemma1_transform(&base, b)?;
            let nbt = bt.operator_norm();
            let h = if nbt > 0.0 { 0.25 / nbt } else { 0.25 };
            let f = |x: f64| {
                base.add_scaled(x, b)
                    .map(|m| m.eigh().eigenvalues.iter().map(|v| v.powi(-(p as i32))).sum::<f64>())
                    .unwrap_or(f64::NAN)
            };
            Ok((0..=r_max.min(4))
                .map(|r| {
                    // stencil offsets stay below 1/‖B̃‖, inside the region where base + xB > 0
                    let fd = richardson_best(f, 0.0, r, &[h, 0.4 * h]);
                    let v = signed(r, report.values[i][r]);
                    (v - fd.value).abs() / report.scales[i][r].max(f64::MIN_POSITIVE)
                })
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report.fd_discrepancy = Some(worst);
    Ok(report)
}

/// One term `w · e^{-t x}` of a finite exponential mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureTerm {
    pub weight: f64,
    pub decay: f64,
}

fn check_mixture(mixture: &[MixtureTerm]) -> Result<()> {
    if mixture.is_empty() {
        return Err(BmvError::InvalidArgument("mixture must have at least one term".into()));
    }
    for t in mixture {
        if !(t.weight >= 0.0) || !(t.decay >= 0.0) {
            return Err(BmvError::InvalidArgument(format!(
                "mixture term (weight {}, decay {}) must be non-negative",
                t.weight, t.decay
            )));
        }
    }
    Ok(())
}

/// Probes `λ ↦ Tr f(A+λB)` for `f(x) = Σ w_k e^{-t_k x}`, by linearity over
/// `Tr exp(-t_k A - λ t_k B)`.
pub fn cm_probe_general_f(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    mixture: &[MixtureTerm],
    grid: &[f64],
    r_max: usize,
    tol: f64,
) -> Result<CMReport> {
    check_same_dim(a, b)?;
    check_grid(grid)?;
    check_mixture(mixture)?;
    a.require_positive()?;
    let nb = b.require_positive()?.operator_norm();
    let na = a.operator_norm();
    let rows: Vec<(Vec<f64>, Vec<f64>)> = grid
        .par_iter()
        .map(|&lambda| {
            let mut values = vec![0.0; r_max + 1];
            let mut scales = vec![0.0; r_max + 1];
            for term in mixture {
                if term.weight == 0.0 {
                    continue;
                }
                let ta = a.scale(-term.decay);
                let tb = b.scale(term.decay);
                // exp(-t(A+λB)) has spectrum in (0, 1]; the guard only has to
                // cover the size of the augmented block matrix.
                let bound = term.decay * (na + lambda * nb);
                if !(bound <= 50.0 * EXP_NORM_LIMIT) {
                    return Err(BmvError::Overflow {
                        bound,
                        limit: 50.0 * EXP_NORM_LIMIT,
                    });
                }
                let d = exp_trace_derivatives_raw(ta.matrix(), tb.matrix(), r_max, lambda);
                let tr = exp_trace_by_spectrum(&ta, &tb, lambda);
                for r in 0..=r_max {
                    values[r] += term.weight * signed(r, d[r]);
                    scales[r] += term.weight * (term.decay * nb).powi(r as i32) * tr;
                }
            }
            Ok((values, scales))
        })
        .collect::<Result<_>>()?;
    let (values, scales) = rows.into_iter().unzip();
    Ok(CMReport::assemble(grid.to_vec(), r_max, values, scales, tol))
}

/// Exponential mixture approximating `x ↦ x^{-p}` on `x ≥ shift` from the
/// Gamma-integral representation, discretized with the `nodes`-point
/// generalized Gauss–Laguerre rule (`α = p - 1`) after `t → t/shift`.
pub fn inverse_power_mixture(p: f64, shift: f64, nodes: usize) -> Result<Vec<MixtureTerm>> {
    if !(p > 0.0) {
        return Err(BmvError::InvalidArgument(format!("exponent {p} must be positive")));
    }
    if !(shift > 0.0) {
        return Err(BmvError::InvalidArgument(format!("shift {shift} must be positive")));
    }
    let rule = gauss_laguerre(nodes, p - 1.0);
    let norm = shift.powf(-p) / gamma(p);
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| MixtureTerm {
            // w e^{s} computed in log form to survive large nodes
            weight: norm * if w > 0.0 { (w.ln() + s).exp() } else { 0.0 },
            decay: s / shift,
        })
        .collect())
}

/// `f(x) = Σ w_k e^{-t_k x}` evaluated on the spectrum of `m`.
pub fn mixture_trace(m: &HermitianMatrix, mixture: &[MixtureTerm]) -> f64 {
    let s = m.eigh();
    mixture
        .iter()
        .map(|t| t.weight * s.eigenvalues.iter().map(|v| (-t.decay * v).exp()).sum::<f64>())
        .sum()
}

/// The spectrum-based value `Tr (A+λB)^{-p}` for real `p`.
pub fn inverse_power_trace(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64, p: f64) -> Result<f64> {
    let m = a.add_scaled(lambda, b)?;
    Ok(m.matfn(MatrixFunction::Power(-p))?.trace())
}
