use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cmatrix::CMatrix;
use super::eigen::{jacobi_eigh, Spectrum};
use super::rng::SeededStream;
use crate::error::{BmvError, Result};

/// Relative eigenvalue slack accepted when classifying a matrix as positive.
pub const EPS_PSD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Hermitian,
    Positive,
    PositiveDefinite,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Hermitian => "hermitian",
            Classification::Positive => "positive",
            Classification::PositiveDefinite => "positive-definite",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "hermitian" => Some(Classification::Hermitian),
            "positive" => Some(Classification::Positive),
            "positive-definite" => Some(Classification::PositiveDefinite),
            _ => None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Dense Hermitian matrix. Conjugate symmetry is exact: construction
/// always goes through [`CMatrix::hermitian_part`].
///
/// The classification is metadata. It is set by the generators and by
/// [`HermitianMatrix::classify`], and re-checked wherever positivity matters.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
    classification: Classification,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixFunction {
    Exp,
    Power(f64),
    InvSqrt,
}

impl HermitianMatrix {
    /// Symmetrizes `m` into `(m + m^*) / 2`.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.dim() == 0 {
            return Err(BmvError::EmptyDimension);
        }
        Ok(Self {
            m: m.hermitian_part(),
            classification: Classification::Hermitian,
        })
    }

    pub(crate) fn from_hermitian_unchecked(m: CMatrix, classification: Classification) -> Self {
        debug_assert!(m.is_exactly_hermitian());
        Self { m, classification }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(CMatrix::from_real_rows(rows))
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::new(CMatrix::diag_real(values))
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(BmvError::EmptyDimension);
        }
        Ok(Self {
            m: CMatrix::identity(n),
            classification: Classification::PositiveDefinite,
        })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(BmvError::EmptyDimension);
        }
        Ok(Self {
            m: CMatrix::zeros(n),
            classification: Classification::Positive,
        })
    }

    pub fn scalar(v: f64) -> Self {
        let mut m = CMatrix::zeros(1);
        m[(0, 0)] = Complex64::new(v, 0.0);
        Self::from_hermitian_unchecked(m, Classification::Hermitian)
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn classification(&self) -> Classification {
        self.classification
    }

    pub fn with_classification(mut self, c: Classification) -> Self {
        self.classification = c;
        self
    }

    /// Recomputes the classification from the spectrum.
    pub fn classify(mut self) -> Self {
        let s = self.eigh();
        let scale = s.operator_norm();
        self.classification = if s.min() > 0.0 {
            Classification::PositiveDefinite
        } else if s.min() >= -EPS_PSD * scale {
            Classification::Positive
        } else {
            Classification::Hermitian
        };
        self
    }

    pub fn eigh(&self) -> Spectrum {
        jacobi_eigh(&self.m)
    }

    pub fn operator_norm(&self) -> f64 {
        self.eigh().operator_norm()
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        let classification = match self.classification {
            c if s > 0.0 => c,
            Classification::Hermitian => Classification::Hermitian,
            _ if s == 0.0 => Classification::Positive,
            _ => Classification::Hermitian,
        };
        Self::from_hermitian_unchecked(self.m.scale(s), classification)
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        check_same_dim(self, other)?;
        let mut m = self.m.clone();
        m.axpy(s, &other.m);
        HermitianMatrix::new(m)
    }

    /// `U^* self U` for a unitary (or any square) `u`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<HermitianMatrix> {
        if u.dim() != self.dim() {
            return Err(BmvError::DimensionMismatch {
                left: self.dim(),
                right: u.dim(),
            });
        }
        let m = u.adjoint().matmul(&self.m).matmul(u);
        Ok(HermitianMatrix::new(m)?.with_classification(self.classification))
    }

    /// Requires a positive-definite spectrum and returns it.
    pub fn require_positive_definite(&self) -> Result<Spectrum> {
        let s = self.eigh();
        if s.min() > 0.0 {
            Ok(s)
        } else {
            Err(BmvError::NotPositiveDefinite { eigenvalue: s.min() })
        }
    }

    /// Requires all eigenvalues `>= -EPS_PSD * norm`.
    pub fn require_positive(&self) -> Result<Spectrum> {
        let s = self.eigh();
        if s.min() >= -EPS_PSD * s.operator_norm() {
            Ok(s)
        } else {
            Err(BmvError::NotPositive { eigenvalue: s.min() })
        }
    }

    /// `V diag(f(eigenvalues)) V^*`.
    pub fn matfn(&self, f: MatrixFunction) -> Result<HermitianMatrix> {
        let s = self.eigh();
        matfn_from_spectrum(&s, f)
    }
}

pub(crate) fn check_same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(BmvError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

pub fn matfn_from_spectrum(s: &Spectrum, f: MatrixFunction) -> Result<HermitianMatrix> {
    let singular = match f {
        MatrixFunction::Exp => false,
        MatrixFunction::InvSqrt => true,
        MatrixFunction::Power(q) => q < 0.0,
    };
    let fractional = matches!(f, MatrixFunction::Power(q) if q.fract() != 0.0);
    for &v in &s.eigenvalues {
        if (singular && v <= 0.0) || (fractional && v < 0.0) {
            return Err(BmvError::Domain { eigenvalue: v });
        }
    }
    let out = match f {
        MatrixFunction::Exp => s.apply(f64::exp),
        MatrixFunction::InvSqrt => s.apply(|v| 1.0 / v.sqrt()),
        MatrixFunction::Power(q) if q.fract() == 0.0 && q.abs() < i32::MAX as f64 => {
            s.apply(|v| v.powi(q as i32))
        }
        MatrixFunction::Power(q) => s.apply(|v| v.powf(q)),
    };
    let classification = match f {
        MatrixFunction::Exp | MatrixFunction::InvSqrt => Classification::PositiveDefinite,
        MatrixFunction::Power(q) if singular || fractional => {
            if q < 0.0 || s.min() > 0.0 {
                Classification::PositiveDefinite
            } else {
                Classification::Positive
            }
        }
        MatrixFunction::Power(_) => Classification::Hermitian,
    };
    Ok(HermitianMatrix::from_hermitian_unchecked(out, classification))
}

/// Random Hermitian matrix: i.i.d. standard complex Gaussian entries,
/// then symmetrized.
pub fn random_hermitian(n: usize, rng: &mut SeededStream) -> Result<HermitianMatrix> {
    if n == 0 {
        return Err(BmvError::EmptyDimension);
    }
    let raw = CMatrix::from_fn(n, |_, _| rng.complex_normal());
    HermitianMatrix::new(raw)
}

/// Random `n x rank` factor: standard complex Gaussian, or Gaussian integers
/// with parts in `[-3, 3]` when `exact` is set.
pub fn random_factor(n: usize, rank: usize, rng: &mut SeededStream, exact: bool) -> Result<CMatrix> {
    if n == 0 {
        return Err(BmvError::EmptyDimension);
    }
    if rank == 0 || rank > n {
        return Err(BmvError::InvalidRank { rank, n });
    }
    // Columns beyond `rank` stay zero so that G G^* has rank at most `rank`.
    let mut g = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..rank {
            g[(i, j)] = if exact {
                Complex64::new(rng.int_range(-3, 3) as f64, rng.int_range(-3, 3) as f64)
            } else {
                rng.complex_normal()
            };
        }
    }
    Ok(g)
}

/// `G G^*` for a square factor `g`, with classification `positive`.
pub fn gram(g: &CMatrix) -> HermitianMatrix {
    let m = g.matmul(&g.adjoint()).hermitian_part();
    HermitianMatrix::from_hermitian_unchecked(m, Classification::Positive)
}

/// Random positive matrix `G G^*` with an `n x rank` factor.
pub fn random_psd(n: usize, rank: usize, rng: &mut SeededStream, exact: bool) -> Result<HermitianMatrix> {
    let g = random_factor(n, rank, rng, exact)?;
    Ok(gram(&g))
}

/// `(a^{-1}, a^{-1/2} b a^{-1/2})`.
pub fn lemma1_transform(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    check_same_dim(a, b)?;
    let s = a.require_positive_definite()?;
    let inv = matfn_from_spectrum(&s, MatrixFunction::Power(-1.0))?;
    let inv_sqrt = matfn_from_spectrum(&s, MatrixFunction::InvSqrt)?;
    let bt = inv_sqrt.matrix().matmul(b.matrix()).matmul(inv_sqrt.matrix());
    let class = match b.classification() {
        Classification::Hermitian => Classification::Hermitian,
        other => other,
    };
    Ok((inv, HermitianMatrix::new(bt)?.with_classification(class)))
}
