//! Numerical checks of the identities linking the three positivity
//! statements: the inverse-power/polynomial derivative identity, the
//! shifted exponential series and the Gamma-integral representation.

use serde_json::{json, Value};

use super::derivatives::{inverse_power_derivative, EXP_NORM_LIMIT};
use super::quadrature::gauss_laguerre;
use crate::error::{BmvError, Result};
use crate::matcore::{check_same_dim, lemma1_transform, CMatrix, HermitianMatrix, MatrixFunction};
use crate::numeric::{gamma, json_f64, pairwise_sum};
use crate::trace_poly::derivative_at_zero;

/// Both sides of
/// `d^r/dλ^r Tr(a+λb)^{-p} |₀ = p/(p+r) (-1)^r d^r/dλ^r Tr(A+λB)^{p+r} |₀`
/// with `A = a^{-1}`, `B = a^{-1/2} b a^{-1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    pub p: usize,
    pub r: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    /// `abs_residual / scale`, the scale being the sum of absolute values of
    /// the composition terms behind the left side.
    pub rel_residual: f64,
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Lemma1Report {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "r": self.r,
            "lhs": json_f64(self.lhs),
            "rhs": json_f64(self.rhs),
            "abs_residual": json_f64(self.abs_residual),
            "rel_residual": json_f64(self.rel_residual),
            "scale": json_f64(self.scale),
            "tol": json_f64(self.tol),
            "pass": self.pass,
        })
    }
}

pub fn verify_lemma1(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize, tol: f64) -> Result<Lemma1Report> {
    check_same_dim(a, b)?;
    if p == 0 {
        return Err(BmvError::InvalidIndex("the identity needs p >= 1".into()));
    }
    let lhs = inverse_power_derivative(a, b, p, r)?;
    let (big_a, big_b) = lemma1_transform(a, b)?;
    let d = derivative_at_zero(&big_a, &big_b, p + r, r)?;
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = p as f64 / (p + r) as f64 * sign * d.value;
    let abs_residual = (lhs.value - rhs).abs();
    let rel_residual = if lhs.scale > 0.0 {
        abs_residual / lhs.scale
    } else if abs_residual == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(Lemma1Report {
        p,
        r,
        lhs: lhs.value,
        rhs,
        abs_residual,
        rel_residual,
        scale: lhs.scale,
        tol,
        pass: rel_residual <= tol,
    })
}

/// Target relative gap for the exponential series.
pub const SERIES_TARGET: f64 = 1e-10;

/// `Tr exp(A-λB)` against partial sums of
/// `e^{-‖A‖} Σ_k Tr(A + ‖A‖ I - λB)^k / k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesReport {
    pub lambda: f64,
    pub lhs: f64,
    pub rhs_partial: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
    /// First `K` with `rel_gap <= 1e-10`, or the cap when never reached.
    pub k_used: usize,
    pub converged: bool,
}

impl SeriesReport {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": json_f64(self.lambda),
            "lhs": json_f64(self.lhs),
            "rhs_partial": json_f64(self.rhs_partial),
            "abs_gap": json_f64(self.abs_gap),
            "rel_gap": json_f64(self.rel_gap),
            "k_used": self.k_used,
            "converged": self.converged,
        })
    }
}

pub fn series_identity_check(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64, k_cap: usize) -> Result<SeriesReport> {
    check_same_dim(a, b)?;
    if k_cap == 0 {
        return Err(BmvError::InvalidArgument("series cap K must be at least 1".into()));
    }
    let norm_a = a.operator_norm();
    let norm_b = b.operator_norm();
    let bound = norm_a + lambda.abs() * norm_b;
    if !(bound <= EXP_NORM_LIMIT) {
        return Err(BmvError::Overflow {
            bound,
            limit: EXP_NORM_LIMIT,
        });
    }
    let lhs = a.add_scaled(-lambda, b)?.matfn(MatrixFunction::Exp)?.trace();
    let n = a.dim();
    let mut shifted = a.add_scaled(-lambda, b)?.into_matrix();
    shifted += &CMatrix::identity(n).scale(norm_a);
    let damping = (-norm_a).exp();
    // term_k = M^k / k!, built incrementally
    let mut term = CMatrix::identity(n);
    let mut traces = vec![term.trace().re];
    let mut best: Option<(usize, f64)> = None;
    let mut last = 0.0;
    for k in 0..=k_cap {
        if k > 0 {
            term = term.matmul(&shifted).scale(1.0 / k as f64);
            traces.push(term.trace().re);
        }
        let partial = damping * pairwise_sum(&traces);
        last = partial;
        let rel = (partial - lhs).abs() / lhs.abs();
        if k >= 1 && rel <= SERIES_TARGET {
            best = Some((k, partial));
            break;
        }
    }
    let (k_used, rhs_partial, converged) = match best {
        Some((k, v)) => (k, v, true),
        None => (k_cap, last, false),
    };
    let abs_gap = (rhs_partial - lhs).abs();
    Ok(SeriesReport {
        lambda,
        lhs,
        rhs_partial,
        abs_gap,
        rel_gap: abs_gap / lhs.abs(),
        k_used,
        converged,
    })
}

/// `Tr(A+λB)^{-p}` directly and through
/// `(1/Γ(p)) ∫ Tr exp(-t(A+λB)) t^{p-1} dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceReport {
    pub lambda: f64,
    pub p: f64,
    pub nodes: usize,
    pub direct: f64,
    pub quadrature: f64,
    pub rel_error: f64,
}

impl LaplaceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": json_f64(self.lambda),
            "p": json_f64(self.p),
            "nodes": self.nodes,
            "direct": json_f64(self.direct),
            "quadrature": json_f64(self.quadrature),
            "rel_error": json_f64(self.rel_error),
        })
    }
}

/// The integral is rescaled by `t → t/σ` with `σ = √(μ_min μ_max)` over the
/// spectrum of `A+λB`, and the `t^{p-1}` factor is absorbed into the
/// generalized Laguerre weight, so the rule integrates
/// `Σ_i exp(-s(μ_i/σ - 1))`. Centering σ geometrically keeps every factor
/// `(μ_i/σ - 1)/(μ_i/σ + 1)` below `(√κ-1)/(√κ+1)` in modulus.
pub fn laplace_rep_check(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64, p: f64, nodes: usize) -> Result<LaplaceReport> {
    check_same_dim(a, b)?;
    if !(p > 0.0) {
        return Err(BmvError::InvalidArgument(format!("exponent {p} must be positive")));
    }
    if nodes == 0 {
        return Err(BmvError::InvalidArgument("quadrature needs at least one node".into()));
    }
    let m = a.add_scaled(lambda, b)?;
    let spectrum = m.require_positive_definite().map_err(|_| BmvError::Singular)?;
    let direct = crate::matcore::matfn_from_spectrum(&spectrum, MatrixFunction::Power(-p))?.trace();
    let sigma = (spectrum.min() * spectrum.max()).sqrt();
    let reduced: Vec<f64> = spectrum.eigenvalues.iter().map(|&v| v / sigma - 1.0).collect();
    let rule = gauss_laguerre(nodes, p - 1.0);
    let samples: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| w * reduced.iter().map(|&v| (-s * v).exp()).sum::<f64>())
        .collect();
    let quadrature = sigma.powf(-p) / gamma(p) * pairwise_sum(&samples);
    Ok(LaplaceReport {
        lambda,
        p,
        nodes,
        direct,
        quadrature,
        rel_error: (quadrature - direct).abs() / direct.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_hermitian, random_psd, SeededStream};
    use crate::numeric::binomial;

    #[test]
    fn scalar_lemma1() {
        let rep = verify_lemma1(&HermitianMatrix::scalar(2.0), &HermitianMatrix::scalar(1.0), 2, 1, 1e-12).unwrap();
        assert!((rep.lhs + 0.25).abs() < 1e-16);
        assert!((rep.rhs + 0.25).abs() < 1e-16);
        assert!(rep.pass);
    }

    #[test]
    fn scalar_closed_form() {
        let (a, b) = (1.7f64, 0.6f64);
        for p in 1..=6usize {
            for r in 0..=6usize {
                let rep = verify_lemma1(&HermitianMatrix::scalar(a), &HermitianMatrix::scalar(b), p, r, 1e-12).unwrap();
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                let unit = sign * crate::numeric::factorial(r as u64) * b.powi(r as i32) * a.powi(-((p + r) as i32));
                let ratio = rep.lhs / unit;
                let want = binomial((p + r - 1) as u64, r as u64) as f64;
                assert!((ratio - want).abs() <= 1e-12 * want, "p={p} r={r}");
            }
        }
    }

    #[test]
    fn zero_b() {
        let mut rng = SeededStream::new(1);
        let a = random_psd(3, 3, &mut rng, false).unwrap();
        let rep = verify_lemma1(&a, &HermitianMatrix::zeros(3).unwrap(), 3, 2, 1e-8).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.rhs, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn random_lemma1() {
        let mut rng = SeededStream::new(2);
        for _ in 0..5 {
            let a = random_psd(4, 4, &mut rng, false).unwrap();
            let b = random_hermitian(4, &mut rng).unwrap();
            let rep = verify_lemma1(&a, &b, 3, 3, 1e-8).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn series_trivial_cases() {
        let zero = HermitianMatrix::zeros(3).unwrap();
        let rep = series_identity_check(&zero, &zero, 0.0, 10).unwrap();
        assert_eq!(rep.lhs, 3.0);
        assert_eq!(rep.rhs_partial, 3.0);
        assert!(rep.converged);

        let rep = series_identity_check(&HermitianMatrix::scalar(1.0), &HermitianMatrix::scalar(0.5), 0.8, 80).unwrap();
        assert!(rep.converged);
        assert!((rep.lhs - (1.0f64 - 0.4).exp()).abs() < 1e-15);
    }

    #[test]
    fn laplace_trivial_cases() {
        let rep = laplace_rep_check(&HermitianMatrix::scalar(3.0), &HermitianMatrix::scalar(0.0), 0.0, 2.0, 8).unwrap();
        assert!((rep.direct - 1.0 / 9.0).abs() < 1e-16);
        assert!(rep.rel_error < 1e-14);

        let d = HermitianMatrix::diag(&[1.0, 2.0, 4.0]).unwrap();
        let rep = laplace_rep_check(&d, &HermitianMatrix::zeros(3).unwrap(), 0.0, 1.0, 64).unwrap();
        assert!((rep.direct - 1.75).abs() < 1e-15);
        assert!(rep.rel_error < 1e-6);
    }
}
