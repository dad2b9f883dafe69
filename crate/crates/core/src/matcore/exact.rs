//! Exact Gaussian-rational matrices for certification.
//!
//! A matrix is stored as Gaussian-integer numerators over one positive
//! common denominator, so products never need a gcd until a trace is
//! finally reduced to lowest terms.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cmatrix::CMatrix;
use super::hermitian::HermitianMatrix;
use crate::error::{BmvError, Result};

pub type GaussianInt = Complex<BigInt>;

/// Largest denominator accepted when rationalizing floating-point input.
pub const DENOMINATOR_BUDGET_BITS: u64 = 64;

/// Exact complex number with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn re_f64(&self) -> f64 {
        rational_to_f64(&self.re)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    // Shift both sides so that the quotient is computed from 64-bit-ish
    // integers without overflowing f64 for large numerators/denominators.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (q.numer() >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
    n / d * 2f64.powi((shift_n - shift_d) as i32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    num: Vec<GaussianInt>,
    den: BigInt,
}

impl ExactMatrix {
    pub fn new(n: usize, num: Vec<GaussianInt>, den: BigInt) -> Result<Self> {
        if num.len() != n * n {
            return Err(BmvError::Format(format!("expected {} numerators, found {}", n * n, num.len())));
        }
        if !den.is_positive() {
            return Err(BmvError::Format("denominator must be positive".into()));
        }
        Ok(Self { n, num, den })
    }

    pub fn identity(n: usize) -> Self {
        let mut num = vec![GaussianInt::zero(); n * n];
        for i in 0..n {
            num[i * n + i] = GaussianInt::one();
        }
        Self { n, num, den: BigInt::one() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn numerators(&self) -> &[GaussianInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Converts every entry exactly (each finite double is a dyadic rational).
    /// Fails when the common denominator would exceed `2^64`.
    pub fn from_cmatrix(m: &CMatrix) -> Result<Self> {
        let n = m.dim();
        let mut parts = Vec::with_capacity(2 * n * n);
        for z in m.as_slice() {
            for x in [z.re, z.im] {
                let q = BigRational::from_float(x).ok_or(BmvError::NotRational)?;
                parts.push(q);
            }
        }
        let den = parts
            .iter()
            .fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
        if den > (BigInt::one() << DENOMINATOR_BUDGET_BITS as usize) {
            return Err(BmvError::PrecisionBudget { bits: den.bits() });
        }
        let num = parts
            .chunks(2)
            .map(|c| {
                let re = (&c[0] * BigRational::from_integer(den.clone())).to_integer();
                let im = (&c[1] * BigRational::from_integer(den.clone())).to_integer();
                GaussianInt::new(re, im)
            })
            .collect();
        Ok(Self { n, num, den })
    }

    pub fn from_hermitian(h: &HermitianMatrix) -> Result<Self> {
        Self::from_cmatrix(h.matrix())
    }

    /// Rounds every entry to the nearest multiple of `2^-bits`.
    pub fn round_dyadic(m: &CMatrix, bits: u32) -> Result<Self> {
        if bits as u64 > DENOMINATOR_BUDGET_BITS {
            return Err(BmvError::PrecisionBudget { bits: bits as u64 + 1 });
        }
        let scale = 2f64.powi(bits as i32);
        let to_int = |x: f64| -> Result<BigInt> {
            let y = (x * scale).round();
            BigRational::from_float(y)
                .map(|q| q.to_integer())
                .ok_or(BmvError::NotRational)
        };
        let mut num = Vec::with_capacity(m.dim() * m.dim());
        for z in m.as_slice() {
            num.push(GaussianInt::new(to_int(z.re)?, to_int(z.im)?));
        }
        Ok(Self {
            n: m.dim(),
            num,
            den: BigInt::one() << bits as usize,
        })
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut num = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                num.push(self.num[j * n + i].conj());
            }
        }
        Self { n, num, den: self.den.clone() }
    }

    pub fn matmul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.n, other.n, "exact matmul dimension mismatch");
        let n = self.n;
        let mut num = vec![GaussianInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.num[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.num[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    num[i * n + j] += prod;
                }
            }
        }
        ExactMatrix {
            n,
            num,
            den: &self.den * &other.den,
        }
    }

    /// Unreduced numerator of the trace; the trace is this over `denominator()`.
    pub fn trace_numerator(&self) -> GaussianInt {
        let mut acc = GaussianInt::zero();
        for i in 0..self.n {
            acc += &self.num[i * self.n + i];
        }
        acc
    }

    pub fn trace(&self) -> GaussianRational {
        let t = self.trace_numerator();
        GaussianRational {
            re: BigRational::new(t.re, self.den.clone()),
            im: BigRational::new(t.im, self.den.clone()),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| self.num[i * n + j] == self.num[j * n + i].conj()))
    }

    pub fn entry(&self, i: usize, j: usize) -> GaussianRational {
        let z = &self.num[i * self.n + j];
        GaussianRational {
            re: BigRational::new(z.re.clone(), self.den.clone()),
            im: BigRational::new(z.im.clone(), self.den.clone()),
        }
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| {
            let e = self.entry(i, j);
            num_complex::Complex64::new(rational_to_f64(&e.re), rational_to_f64(&e.im))
        })
    }
}
