//! Random instance families shared by the suites and `bmv gen`.

use bmv_core::matcore::{random_hermitian, random_psd, HermitianMatrix, SeededStream};
use bmv_core::Result;

/// `G G*` with an `n x n` complex Gaussian factor.
pub fn psd(n: usize, rng: &mut SeededStream) -> Result<HermitianMatrix> {
    random_psd(n, n, rng, false)
}

/// `G G*/n + shift·I`: positive definite with condition number of order
/// `(4 + shift)/shift`.
pub fn pd(n: usize, shift: f64, rng: &mut SeededStream) -> Result<HermitianMatrix> {
    random_psd(n, n, rng, false)?
        .scale(1.0 / n as f64)
        .add_scaled(shift, &HermitianMatrix::identity(n)?)
}

pub fn hermitian(n: usize, rng: &mut SeededStream) -> Result<HermitianMatrix> {
    random_hermitian(n, rng)
}

/// Scales to operator norm one (zero stays zero).
pub fn unit_norm(m: HermitianMatrix) -> HermitianMatrix {
    let s = m.operator_norm();
    if s > 0.0 {
        m.scale(1.0 / s)
    } else {
        m
    }
}

/// `G G*` with small Gaussian-integer entries in `G`.
pub fn integer_gram(n: usize, rng: &mut SeededStream) -> Result<HermitianMatrix> {
    random_psd(n, n, rng, true)
}
