//! λ-derivatives of `Tr(a+λb)^{-p}` and `Tr exp(A-λB)`.

use rayon::prelude::*;

use super::compositions::compositions;
use crate::error::{BmvError, Result};
use crate::matcore::{check_same_dim, expm, matfn_from_spectrum, CMatrix, HermitianMatrix, MatrixFunction};
use crate::numeric::{factorial, pairwise_sum, richardson_derivative, FiniteDifference};

/// Bound on `‖A‖ + |λ|‖B‖` accepted by the exponential engines.
pub const EXP_NORM_LIMIT: f64 = 200.0;

/// A derivative value with the magnitude estimate its tolerances are
/// measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub value: f64,
    /// Sum of absolute values of the contributing terms (or a bound on it).
    pub scale: f64,
}

/// r-th derivative of `λ ↦ Tr(a+λb)^{-p}` at `λ = 0`:
/// `(-1)^r r! Σ Tr(a^{-i_1} b a^{-i_2} b ⋯ b a^{-i_{r+1}})` over compositions
/// of `p + r` into `r + 1` positive parts.
pub fn inverse_power_derivative(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> Result<ScaledValue> {
    check_same_dim(a, b)?;
    let spectrum = a.require_positive_definite().map_err(|_| BmvError::Singular)?;
    if p == 0 {
        // Tr(a+λb)^0 = n for every λ.
        let n = a.dim() as f64;
        return Ok(if r == 0 {
            ScaledValue { value: n, scale: n }
        } else {
            ScaledValue { value: 0.0, scale: 0.0 }
        });
    }
    let inv_powers: Vec<CMatrix> = (0..=p)
        .map(|k| {
            matfn_from_spectrum(&spectrum, MatrixFunction::Power(-(k as f64)))
                .map(HermitianMatrix::into_matrix)
        })
        .collect::<Result<_>>()?;
    let bm = b.matrix();
    let terms: Vec<f64> = compositions(p + r, r + 1)
        .par_iter()
        .map(|c| {
            let mut acc = inv_powers[c.parts[0]].clone();
            for &k in &c.parts[1..] {
                acc = acc.matmul(bm).matmul(&inv_powers[k]);
            }
            acc.trace().re
        })
        .collect();
    let fact = factorial(r as u64);
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let abs: Vec<f64> = terms.iter().map(|t| t.abs()).collect();
    Ok(ScaledValue {
        value: sign * fact * pairwise_sum(&terms),
        scale: fact * pairwise_sum(&abs),
    })
}

fn exp_guard(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<(f64, f64)> {
    let na = a.operator_norm();
    let nb = b.operator_norm();
    let bound = na + lambda.abs() * nb;
    if !(bound <= EXP_NORM_LIMIT) {
        return Err(BmvError::Overflow {
            bound,
            limit: EXP_NORM_LIMIT,
        });
    }
    Ok((na, nb))
}

/// `[f(λ), f'(λ), …, f^{(r_max)}(λ)]` for `f(λ) = Tr exp(A-λB)`, without the
/// norm guard. Block `(0, k)` of the exponential of the block-bidiagonal
/// matrix with `A-λB` on the diagonal and `-B` above it is
/// `(1/k!) d^k/dλ^k exp(A-λB)`.
pub(crate) fn exp_trace_derivatives_raw(a: &CMatrix, b: &CMatrix, r_max: usize, lambda: f64) -> Vec<f64> {
    let n = a.dim();
    let size = (r_max + 1) * n;
    let mut shifted = a.clone();
    shifted.axpy(-lambda, b);
    let neg_b = b.scale(-1.0);
    let mut big = CMatrix::zeros(size);
    for k in 0..=r_max {
        big.set_block(k * n, k * n, &shifted);
        if k < r_max {
            big.set_block(k * n, (k + 1) * n, &neg_b);
        }
    }
    let e = expm(&big);
    (0..=r_max)
        .map(|k| factorial(k as u64) * e.block(0, k * n, n).trace().re)
        .collect()
}

pub fn exp_trace_derivatives(a: &HermitianMatrix, b: &HermitianMatrix, r_max: usize, lambda: f64) -> Result<Vec<f64>> {
    check_same_dim(a, b)?;
    exp_guard(a, b, lambda)?;
    Ok(exp_trace_derivatives_raw(a.matrix(), b.matrix(), r_max, lambda))
}

/// r-th derivative of `λ ↦ Tr exp(A-λB)` by block augmentation.
pub fn exp_trace_derivative(a: &HermitianMatrix, b: &HermitianMatrix, r: usize, lambda: f64) -> Result<f64> {
    Ok(exp_trace_derivatives(a, b, r, lambda)?[r])
}

/// `‖B‖^r Tr exp(A-λB)`: a bound on `|f^{(r)}(λ)|` for positive `B`.
pub fn exp_derivative_scale(a: &HermitianMatrix, b: &HermitianMatrix, norm_b: f64, r: usize, lambda: f64) -> Result<f64> {
    let shifted = a.add_scaled(-lambda, b)?;
    let tr = shifted.matfn(MatrixFunction::Exp)?.trace();
    Ok(norm_b.powi(r as i32) * tr)
}

/// Block-method derivative with a Richardson finite-difference cross-check
/// (the check is only formed for `r <= 4`).
#[derive(Debug, Clone, Copy)]
pub struct CheckedDerivative {
    pub value: f64,
    pub scale: f64,
    pub finite_difference: Option<FiniteDifference>,
}

impl CheckedDerivative {
    /// `|block - fd| / max(scale, |block|)`, when a cross-check exists.
    pub fn discrepancy(&self) -> Option<f64> {
        self.finite_difference
            .map(|fd| (self.value - fd.value).abs() / self.scale.max(self.value.abs()).max(f64::MIN_POSITIVE))
    }
}

/// `Tr exp(A-λB)` through the eigendecomposition, the independent route
/// used by the finite-difference check.
pub fn exp_trace_by_spectrum(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> f64 {
    let shifted = a.add_scaled(-lambda, b).expect("dimensions checked by caller");
    shifted.eigh().eigenvalues.iter().map(|v| v.exp()).sum()
}

pub fn exp_trace_derivative_checked(a: &HermitianMatrix, b: &HermitianMatrix, r: usize, lambda: f64) -> Result<CheckedDerivative> {
    check_same_dim(a, b)?;
    let (_, nb) = exp_guard(a, b, lambda)?;
    let value = exp_trace_derivatives_raw(a.matrix(), b.matrix(), r, lambda)[r];
    let scale = exp_derivative_scale(a, b, nb, r, lambda)?;
    let finite_difference = if r <= 4 {
        let h = if nb > 0.0 { 0.5 / nb } else { 0.5 };
        Some(richardson_derivative(|x| exp_trace_by_spectrum(a, b, x), lambda, r, h))
    } else {
        None
    };
    Ok(CheckedDerivative {
        value,
        scale,
        finite_difference,
    })
}
