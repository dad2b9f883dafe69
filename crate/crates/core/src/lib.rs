//! Engines for the trace-polynomial formulation of the BMV conjecture.
//!
//! * [`matcore`]: Hermitian matrices, spectra, matrix functions, exact
//!   Gaussian-rational matrices and seeded random streams.
//! * [`trace_poly`]: coefficients of `λ ↦ Tr(A+λB)^p` and their gradients.
//! * [`words`]: `{A,B}` words, necklaces and the brute-force oracles.
//! * [`equivalence`]: complete-monotonicity probes and identity checks.
//! * [`search`]: minimization of coefficients and trace monomials over
//!   positive pairs, with exact certification.

pub mod equivalence;
pub mod error;
pub mod matcore;
pub mod numeric;
pub mod search;
pub mod trace_poly;
pub mod words;

pub use error::{BmvError, Result};
pub use matcore::{CMatrix, HermitianMatrix, SeededStream};
