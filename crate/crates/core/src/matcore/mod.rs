//! Dense Hermitian linear algebra: construction, random generation,
//! eigendecomposition and matrix functions.

mod cmatrix;
mod eigen;
mod exact;
mod expm;
mod hermitian;
mod io;
mod rng;

pub use cmatrix::CMatrix;
pub use eigen::{jacobi_eigh, Spectrum};
pub use exact::{rational_to_f64, ExactMatrix, GaussianInt, GaussianRational, DENOMINATOR_BUDGET_BITS};
pub use expm::expm;
pub use hermitian::{
    gram, lemma1_transform, matfn_from_spectrum, random_factor, random_hermitian, random_psd, Classification,
    HermitianMatrix, MatrixFunction, EPS_PSD,
};
pub(crate) use hermitian::check_same_dim;
pub use io::MatrixFile;
pub use rng::{SeededStream, StreamId};

/// `eigh` as a free function, mirroring [`HermitianMatrix::eigh`].
pub fn eigh(m: &HermitianMatrix) -> Spectrum {
    m.eigh()
}

/// `matfn` as a free function, mirroring [`HermitianMatrix::matfn`].
pub fn matfn(m: &HermitianMatrix, f: MatrixFunction) -> crate::Result<HermitianMatrix> {
    m.matfn(f)
}
