//! Numerical evidence for the equivalent forms of the conjecture: signs of
//! derivatives of `Tr exp(A-λB)` and `Tr(A+λB)^{-p}`, and the identities
//! connecting them to the trace-polynomial coefficients.

mod basis2x2;
mod cm;
mod compositions;
mod derivatives;
mod identities;
mod quadrature;

pub use basis2x2::{nonneg_basis_2x2, NonnegBasis};
pub use cm::{
    cm_probe_exp, cm_probe_exp_checked, cm_probe_general_f, cm_probe_invpow, cm_probe_invpow_checked,
    inverse_power_mixture, inverse_power_trace, mixture_trace, CMReport, MixtureTerm, Violation,
};
pub use compositions::{compositions, Composition};
pub use derivatives::{
    exp_derivative_scale, exp_trace_by_spectrum, exp_trace_derivative, exp_trace_derivative_checked,
    exp_trace_derivatives, inverse_power_derivative, CheckedDerivative, ScaledValue, EXP_NORM_LIMIT,
};
pub use identities::{
    laplace_rep_check, series_identity_check, verify_lemma1, LaplaceReport, Lemma1Report, SeriesReport,
    SERIES_TARGET,
};
pub use quadrature::{gauss_laguerre, LaguerreRule};
