//! Simultaneous change of basis for a pair of 2×2 positive matrices making
//! every entry of both real and non-negative.

use num_complex::Complex64;

use crate::error::{BmvError, Result};
use crate::matcore::{check_same_dim, CMatrix, HermitianMatrix};

/// Unitary `U` with `U* A U` diagonal and `U* B U` entrywise non-negative.
#[derive(Debug, Clone)]
pub struct NonnegBasis {
    pub unitary: CMatrix,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
}

/// Diagonalizes `A`, then rotates the phase of the second basis vector so
/// the off-diagonal entry of `B` becomes `|B_01| ≥ 0`. Diagonal entries of a
/// positive matrix are already non-negative.
pub fn nonneg_basis_2x2(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<NonnegBasis> {
    check_same_dim(a, b)?;
    if a.dim() != 2 {
        return Err(BmvError::InvalidArgument(format!(
            "the non-negative basis is only available for 2x2 pairs, got n = {}",
            a.dim()
        )));
    }
    a.require_positive()?;
    b.require_positive()?;
    let am = a.matrix();
    let v = if am[(0, 1)] == Complex64::new(0.0, 0.0) {
        CMatrix::identity(2)
    } else {
        a.eigh().basis
    };
    let bv = b.conjugate_by(&v)?;
    let z = bv.matrix()[(0, 1)];
    let phase = if z.norm() > 0.0 { z.conj() / z.norm() } else { Complex64::new(1.0, 0.0) };
    let mut d = CMatrix::identity(2);
    d[(1, 1)] = phase;
    let u = v.matmul(&d);
    let a2 = a.conjugate_by(&u)?;
    let b2 = b.conjugate_by(&u)?;
    // Clean the rounding residue: A' is diagonal and B' real by construction.
    let a2 = HermitianMatrix::diag(&[a2.matrix()[(0, 0)].re.max(0.0), a2.matrix()[(1, 1)].re.max(0.0)])?
        .with_classification(a.classification());
    let bm = b2.matrix();
    let off = bm[(0, 1)].norm();
    let b2 = HermitianMatrix::from_real_rows(&[&[bm[(0, 0)].re.max(0.0), off], &[off, bm[(1, 1)].re.max(0.0)]])?
    .with_classification(b.classification());
    Ok(NonnegBasis { unitary: u, a: a2, b: b2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_psd, SeededStream};

    #[test]
    fn random_pairs_become_nonnegative() {
        let mut rng = SeededStream::new(9);
        for _ in 0..50 {
            let a = random_psd(2, 2, &mut rng, false).unwrap();
            let b = random_psd(2, 2, &mut rng, false).unwrap();
            let out = nonneg_basis_2x2(&a, &b).unwrap();
            let u = &out.unitary;
            let unitary_gap = (&u.adjoint().matmul(u) - &CMatrix::identity(2)).max_abs();
            assert!(unitary_gap < 1e-13);
            let raw_a = a.conjugate_by(u).unwrap();
            let raw_b = b.conjugate_by(u).unwrap();
            assert!((raw_a.matrix() - out.a.matrix()).max_abs() < 1e-12 * a.operator_norm());
            assert!((raw_b.matrix() - out.b.matrix()).max_abs() < 1e-12 * b.operator_norm());
            assert!(out.b.matrix().as_slice().iter().all(|z| z.re >= 0.0 && z.im == 0.0));
            assert_eq!(out.a.matrix()[(0, 1)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn rejects_wrong_shapes() {
        let i3 = HermitianMatrix::identity(3).unwrap();
        assert!(nonneg_basis_2x2(&i3, &i3).is_err());
        let neg = HermitianMatrix::diag(&[1.0, -1.0]).unwrap();
        assert!(nonneg_basis_2x2(&neg, &HermitianMatrix::identity(2).unwrap()).is_err());
    }
}
