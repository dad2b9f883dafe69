//! Cyclic complex Jacobi eigensolver for small Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot with a diagonal
//! unitary and then applies a real Givens rotation, so the iteration is the
//! classical real-symmetric Jacobi method carried over to complex entries.

use num_complex::Complex64;

use super::cmatrix::{CMatrix, ZERO};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `M = V diag(eigenvalues) V^*` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors.
    pub basis: CMatrix,
}

impl Spectrum {
    /// `max |eigenvalue|`, the operator norm of the decomposed matrix.
    pub fn operator_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V diag(f(eigenvalues)) V^*`, with exact conjugate symmetry.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.basis.dim();
        let fv: Vec<f64> = self.eigenvalues.iter().map(|&v| f(v)).collect();
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for (k, &w) in fv.iter().enumerate() {
                    acc += self.basis[(i, k)] * self.basis[(j, k)].conj() * w;
                }
                out[(i, j)] = acc;
            }
        }
        out.hermitian_part_upper()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|v| v)
    }
}

impl CMatrix {
    /// Mirrors the upper triangle into the lower one and makes the diagonal real.
    pub(crate) fn hermitian_part_upper(mut self) -> CMatrix {
        let n = self.dim();
        for i in 0..n {
            self[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = self[(i, j)];
                self[(j, i)] = v.conj();
            }
        }
        self
    }
}

/// Eigendecomposition of a Hermitian matrix. Only the upper triangle and the
/// real part of the diagonal are read.
pub fn jacobi_eigh(m: &CMatrix) -> Spectrum {
    let n = m.dim();
    let mut a = m.clone().hermitian_part_upper();
    let mut v = CMatrix::identity(n);
    let total = a.frobenius_norm();
    if n > 1 && total > 0.0 {
        let threshold = (f64::EPSILON * total) * (f64::EPSILON * total) * 1e-4;
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].norm_sqr())
                .sum();
            if off <= threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let basis = CMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Spectrum { eigenvalues, basis }
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    // Phase step: scale column q by e^{-i phi} and row q by e^{i phi}.
    let phase = apq / mag;
    let col_factor = phase.conj();
    if phase != Complex64::new(1.0, 0.0) {
        for k in 0..n {
            a[(k, q)] *= col_factor;
            v[(k, q)] *= col_factor;
        }
        for k in 0..n {
            a[(q, k)] *= phase;
        }
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::rng::SeededStream;

    fn random_herm(n: usize, rng: &mut SeededStream) -> CMatrix {
        CMatrix::from_fn(n, |_, _| rng.complex_normal()).hermitian_part()
    }

    #[test]
    fn diagonal_input() {
        let s = jacobi_eigh(&CMatrix::diag_real(&[2.0, 1.0]));
        assert_eq!(s.eigenvalues, vec![1.0, 2.0]);
        assert_eq!(s.basis[(1, 0)].norm(), 1.0);
        assert_eq!(s.basis[(0, 1)].norm(), 1.0);
    }

    #[test]
    fn pauli_x() {
        let s = jacobi_eigh(&CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reconstruction_and_unitarity_random() {
        let mut rng = SeededStream::new(11);
        for n in 1..=16 {
            for _ in 0..20 {
                let m = random_herm(n, &mut rng);
                let s = jacobi_eigh(&m);
                let norm = s.operator_norm();
                let resid = (&s.reconstruct() - &m).max_abs();
                assert!(resid <= 1e-12 * n as f64 * norm, "n={n} resid={resid:e}");
                let gram = s.basis.adjoint().matmul(&s.basis);
                assert!((&gram - &CMatrix::identity(n)).max_abs() < 1e-12);
                assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }
}
