//! Coefficients of `λ ↦ Tr(A+λB)^p`.
//!
//! The coefficient matrices of `(A+λB)^k` are built by the first-order
//! recurrence `T_k[j] = A T_{k-1}[j] + B T_{k-1}[j-1]` with `T_0 = I`, so
//! `c_{p,r} = Tr T_p[r]`. Truncating at `r_max` costs `O(p r_max)` matrix
//! products.

use crate::error::{BmvError, Result};
use crate::matcore::{check_same_dim, CMatrix, HermitianMatrix};
use crate::numeric::{binomial, factorial};

/// Imaginary parts of traces above this fraction of the coefficient scale
/// are treated as implementation faults.
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-9;

/// Real coefficients `c_{p,0..=r_max}` of `Tr(A+λB)^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TracePolynomial {
    pub p: usize,
    pub coeffs: Vec<f64>,
}

impl TracePolynomial {
    pub fn coeff(&self, r: usize) -> Option<f64> {
        self.coeffs.get(r).copied()
    }

    /// Evaluates the (possibly truncated) polynomial at `lambda`.
    pub fn eval(&self, lambda: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * lambda + c)
    }
}

/// Matrix whose entries are polynomials in λ truncated at degree `deg`;
/// `data[j]` is the coefficient matrix of `λ^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPolyMatrix {
    pub n: usize,
    pub deg: usize,
    pub data: Vec<CMatrix>,
}

impl TruncatedPolyMatrix {
    pub fn identity(n: usize, deg: usize) -> Self {
        let mut data = vec![CMatrix::zeros(n); deg + 1];
        data[0] = CMatrix::identity(n);
        Self { n, deg, data }
    }

    /// Multiplies on the left by `A + λB`, dropping terms above `deg`.
    pub fn left_mul_linear(&self, a: &CMatrix, b: &CMatrix) -> Self {
        let data = (0..=self.deg)
            .map(|j| {
                let mut m = a.matmul(&self.data[j]);
                if j > 0 {
                    m += &b.matmul(&self.data[j - 1]);
                }
                m
            })
            .collect();
        Self {
            n: self.n,
            deg: self.deg,
            data,
        }
    }
}

/// `T_k` for `k = p`: the truncated coefficient matrices of `(A+λB)^p`.
pub fn power_coefficients(a: &CMatrix, b: &CMatrix, p: usize, deg: usize) -> TruncatedPolyMatrix {
    let mut t = TruncatedPolyMatrix::identity(a.dim(), deg);
    for k in 1..=p {
        // Entries above degree k are identically zero; skip their products.
        let live = k.min(deg);
        let mut data = Vec::with_capacity(deg + 1);
        for j in 0..=deg {
            if j > live {
                data.push(CMatrix::zeros(a.dim()));
                continue;
            }
            let mut m = if j < k { a.matmul(&t.data[j]) } else { CMatrix::zeros(a.dim()) };
            if j > 0 {
                m += &b.matmul(&t.data[j - 1]);
            }
            data.push(m);
        }
        t = TruncatedPolyMatrix { n: t.n, deg, data };
    }
    t
}

/// Magnitude bound `binomial(p,r) ‖A‖^{p-r} ‖B‖^r n` for `|c_{p,r}|`
/// (any norms dominating the operator norm may be passed).
pub fn coefficient_scale(norm_a: f64, norm_b: f64, n: usize, p: usize, r: usize) -> f64 {
    binomial(p as u64, r as u64) as f64 * norm_a.powi((p - r) as i32) * norm_b.powi(r as i32) * n as f64
}

fn real_trace(m: &CMatrix, scale: f64) -> Result<f64> {
    let t = m.trace();
    let limit = IMAGINARY_RESIDUE_LIMIT * scale;
    if t.im.abs() > limit && t.im.abs() > f64::MIN_POSITIVE {
        return Err(BmvError::ImaginaryResidue {
            residue: t.im.abs(),
            limit,
        });
    }
    Ok(t.re)
}

/// Coefficients of `Tr(A+λB)^p` up to `λ^{r_max}` (default `p`).
pub fn trace_poly(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r_max: Option<usize>) -> Result<TracePolynomial> {
    check_same_dim(a, b)?;
    let r_max = r_max.unwrap_or(p);
    if r_max > p {
        return Err(BmvError::InvalidIndex(format!("r_max {r_max} exceeds p {p}")));
    }
    let t = power_coefficients(a.matrix(), b.matrix(), p, r_max);
    let na = a.matrix().frobenius_norm();
    let nb = b.matrix().frobenius_norm();
    let coeffs = t
        .data
        .iter()
        .enumerate()
        .map(|(r, m)| real_trace(m, coefficient_scale(na, nb, a.dim(), p, r)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(TracePolynomial { p, coeffs })
}

/// The `r`-th λ-derivative of `Tr(A+λB)^p` at `λ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroDerivative {
    pub value: f64,
    /// Set when `r > p`: the polynomial has degree `p`, so the value is exactly 0.
    pub beyond_degree: bool,
}

pub fn derivative_at_zero(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> Result<ZeroDerivative> {
    check_same_dim(a, b)?;
    if r > p {
        return Ok(ZeroDerivative {
            value: 0.0,
            beyond_degree: true,
        });
    }
    let poly = trace_poly(a, b, p, Some(r))?;
    Ok(ZeroDerivative {
        value: factorial(r as u64) * poly.coeffs[r],
        beyond_degree: false,
    })
}

/// `c_{p,r}` together with its Hermitian gradients with respect to `A` and `B`.
#[derive(Debug, Clone)]
pub struct CoefficientGradient {
    pub value: f64,
    pub grad_a: HermitianMatrix,
    pub grad_b: HermitianMatrix,
}

/// Value and gradient of `c_{p,r}`.
///
/// By cyclicity `d/dt Tr(X+tY)^p = p Tr(Y X^{p-1})`, so the gradients are
/// `p T_{p-1}[r]` for `A` and `p T_{p-1}[r-1]` for `B`, where `T_{p-1}` are
/// the coefficient matrices of `(A+λB)^{p-1}`.
pub fn coeff_value_and_gradient(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> Result<CoefficientGradient> {
    check_same_dim(a, b)?;
    if p == 0 {
        return Err(BmvError::InvalidIndex("gradient requires p >= 1".into()));
    }
    if r > p {
        return Err(BmvError::InvalidIndex(format!("r {r} exceeds p {p}")));
    }
    let n = a.dim();
    let t = power_coefficients(a.matrix(), b.matrix(), p - 1, r);
    let zero = CMatrix::zeros(n);
    let ga = if r < p { &t.data[r] } else { &zero };
    let gb = if r >= 1 { &t.data[r - 1] } else { &zero };
    let na = a.matrix().frobenius_norm();
    let nb = b.matrix().frobenius_norm();
    let scale = coefficient_scale(na, nb, n, p, r);
    let value = real_trace(&(&a.matrix().matmul(ga) + &b.matrix().matmul(gb)), scale)?;
    let pf = p as f64;
    Ok(CoefficientGradient {
        value,
        grad_a: HermitianMatrix::new(ga.scale(pf))?,
        grad_b: HermitianMatrix::new(gb.scale(pf))?,
    })
}

/// Hermitian gradients `(gA, gB)` of `c_{p,r}`: for every Hermitian `H`,
/// `d/dt c_{p,r}(A+tH, B) = Tr(gA H)`, and likewise for `B`.
pub fn coeff_gradient(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let g = coeff_value_and_gradient(a, b, p, r)?;
    Ok((g.grad_a, g.grad_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_hermitian, random_psd, SeededStream};
    use crate::numeric::richardson_derivative;

    #[test]
    fn identity_pair() {
        let id = HermitianMatrix::identity(2).unwrap();
        let poly = trace_poly(&id, &id, 3, None).unwrap();
        assert_eq!(poly.coeffs, vec![2.0, 6.0, 6.0, 2.0]);
    }

    #[test]
    fn complementary_projectors() {
        let a = HermitianMatrix::diag(&[1.0, 0.0]).unwrap();
        let b = HermitianMatrix::diag(&[0.0, 1.0]).unwrap();
        let poly = trace_poly(&a, &b, 4, None).unwrap();
        assert_eq!(poly.coeffs, vec![1.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn truncation_and_p_zero() {
        let mut rng = SeededStream::new(1);
        let a = random_hermitian(3, &mut rng).unwrap();
        let b = random_hermitian(3, &mut rng).unwrap();
        let full = trace_poly(&a, &b, 6, None).unwrap();
        let cut = trace_poly(&a, &b, 6, Some(2)).unwrap();
        assert_eq!(cut.coeffs.len(), 3);
        for r in 0..3 {
            assert!((cut.coeffs[r] - full.coeffs[r]).abs() <= 1e-12 * full.coeffs[r].abs().max(1.0));
        }
        assert_eq!(trace_poly(&a, &b, 0, None).unwrap().coeffs, vec![3.0]);
        assert!(trace_poly(&a, &b, 2, Some(3)).is_err());
        let c = random_hermitian(2, &mut rng).unwrap();
        assert!(matches!(trace_poly(&a, &c, 2, None), Err(BmvError::DimensionMismatch { .. })));
    }

    #[test]
    fn end_coefficients_are_pure_powers() {
        let mut rng = SeededStream::new(2);
        let a = random_hermitian(4, &mut rng).unwrap();
        let b = random_hermitian(4, &mut rng).unwrap();
        let p = 7;
        let poly = trace_poly(&a, &b, p, None).unwrap();
        let pow = |m: &HermitianMatrix| {
            let mut acc = CMatrix::identity(4);
            for _ in 0..p {
                acc = acc.matmul(m.matrix());
            }
            acc.trace().re
        };
        let ap = pow(&a);
        let bp = pow(&b);
        assert!((poly.coeffs[0] - ap).abs() <= 1e-12 * ap.abs());
        assert!((poly.coeffs[p] - bp).abs() <= 1e-12 * bp.abs());
    }

    #[test]
    fn derivative_examples() {
        let id = HermitianMatrix::identity(2).unwrap();
        let d = derivative_at_zero(&id, &id, 3, 2).unwrap();
        assert_eq!(d.value, 12.0);
        assert!(!d.beyond_degree);
        let d = derivative_at_zero(&id, &id, 3, 4).unwrap();
        assert_eq!(d.value, 0.0);
        assert!(d.beyond_degree);

        let mut rng = SeededStream::new(3);
        let a = random_hermitian(3, &mut rng).unwrap();
        let b = random_hermitian(3, &mut rng).unwrap();
        let d0 = derivative_at_zero(&a, &b, 5, 0).unwrap().value;
        assert!((d0 - trace_poly(&a, &b, 5, None).unwrap().coeffs[0]).abs() < 1e-12 * d0.abs());

        // finite-difference oracle on λ ↦ Tr(A+λB)^5
        let f = |lambda: f64| {
            let m = a.add_scaled(lambda, &b).unwrap();
            let mut acc = CMatrix::identity(3);
            for _ in 0..5 {
                acc = acc.matmul(m.matrix());
            }
            acc.trace().re
        };
        let fd = richardson_derivative(f, 0.0, 3, 0.1);
        let d3 = derivative_at_zero(&a, &b, 5, 3).unwrap().value;
        let scale = 6.0 * coefficient_scale(a.operator_norm(), b.operator_norm(), 3, 5, 3);
        assert!((fd.value - d3).abs() <= 1e-7 * scale, "fd {} vs {}", fd.value, d3);
    }

    #[test]
    fn gradient_closed_forms() {
        let mut rng = SeededStream::new(4);
        let a = random_hermitian(3, &mut rng).unwrap();
        let b = random_hermitian(3, &mut rng).unwrap();
        let zero = HermitianMatrix::zeros(3).unwrap();
        let p = 5;
        let pow = |m: &HermitianMatrix, k: usize| {
            let mut acc = CMatrix::identity(3);
            for _ in 0..k {
                acc = acc.matmul(m.matrix());
            }
            acc.scale(p as f64)
        };
        let (ga, gb) = coeff_gradient(&a, &zero, p, 0).unwrap();
        assert!((ga.matrix() - &pow(&a, p - 1)).max_abs() < 1e-12 * ga.matrix().max_abs());
        assert_eq!(gb.matrix().max_abs(), 0.0);

        let (ga, gb) = coeff_gradient(&a, &b, p, p).unwrap();
        assert_eq!(ga.matrix().max_abs(), 0.0);
        assert!((gb.matrix() - &pow(&b, p - 1)).max_abs() < 1e-12 * gb.matrix().max_abs());
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = SeededStream::new(5);
        let a = random_psd(3, 3, &mut rng, false).unwrap();
        let b = random_psd(3, 3, &mut rng, false).unwrap();
        let (p, r) = (6, 3);
        let (ga, gb) = coeff_gradient(&a, &b, p, r).unwrap();
        let c = |x: &HermitianMatrix, y: &HermitianMatrix| trace_poly(x, y, p, Some(r)).unwrap().coeffs[r];
        for _ in 0..20 {
            let h = random_hermitian(3, &mut rng).unwrap();
            let eps = 1e-4;
            let fd_a = (c(&a.add_scaled(eps, &h).unwrap(), &b) - c(&a.add_scaled(-eps, &h).unwrap(), &b)) / (2.0 * eps);
            let fd_b = (c(&a, &b.add_scaled(eps, &h).unwrap()) - c(&a, &b.add_scaled(-eps, &h).unwrap())) / (2.0 * eps);
            let an_a = ga.matrix().trace_of_product(h.matrix()).re;
            let an_b = gb.matrix().trace_of_product(h.matrix()).re;
            assert!((fd_a - an_a).abs() <= 1e-5 * an_a.abs().max(1.0));
            assert!((fd_b - an_b).abs() <= 1e-5 * an_b.abs().max(1.0));
        }
    }
}
