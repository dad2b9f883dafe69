//! Randomized oracle suites. Each case owns a random stream derived from
//! the suite seed and its index, and cases are collected in index order, so
//! results do not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use bmv_core::equivalence::{
    cm_probe_exp, cm_probe_invpow, exp_trace_derivative_checked, inverse_power_derivative, laplace_rep_check,
    nonneg_basis_2x2, series_identity_check, verify_lemma1,
};
use bmv_core::matcore::{lemma1_transform, CMatrix, HermitianMatrix, SeededStream};
use bmv_core::numeric::{binomial, contour_derivative, factorial, fmt17, json_f64, richardson_derivative};
use bmv_core::search::{search_negative_term, SearchConfig};
use bmv_core::trace_poly::{coeff_value_and_gradient, coefficient_scale, trace_poly};
use bmv_core::words::{
    coeff_bruteforce, coeff_bruteforce_exact, coeff_by_necklaces, coeff_by_necklaces_exact, exact_pair, rational_value,
    word_trace, word_trace_gradient, BinaryWord, Letter,
};
use bmv_core::Result;

use crate::instances::{hermitian, integer_gram, pd, psd, unit_norm};

pub const CROSS_ENGINE_TOL: f64 = 1e-9;
pub const LEMMA1_TOL: f64 = 1e-8;
pub const LEMMA1_SCALAR_TOL: f64 = 1e-12;
pub const SERIES_TOL: f64 = 1e-10;
pub const SERIES_CAP: usize = 80;
pub const LAPLACE_TOL: f64 = 1e-6;
/// Errors below this are rounding noise when comparing node counts.
pub const LAPLACE_NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;
pub const EXP_FD_TOL: f64 = 1e-5;
pub const INVPOW_FD_TOL: f64 = 1e-7;
/// Samples on the circle for the inverse-power difference check.
pub const CONTOUR_NODES: usize = 64;
pub const GRADIENT_TOL: f64 = 1e-5;
pub const POSITIVITY_FLOOR: f64 = 1e-12;
pub const SPECTRUM_TOL: f64 = 1e-10;
pub const CM_TOL: f64 = 1e-10;

/// Summary of one suite: `worst` is the largest observed metric, compared
/// against `tol` case by case.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub worst: f64,
    pub tol: f64,
    pub notes: Vec<String>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "worst": json_f64(self.worst),
            "tol": json_f64(self.tol),
            "pass": self.pass(),
            "notes": self.notes,
        })
    }

    pub const CSV_HEADER: &'static str = "suite,cases,failures,worst,tol,pass";

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.name,
            self.cases,
            self.failures,
            fmt17(self.worst),
            fmt17(self.tol),
            self.pass()
        )
    }

    fn from_metrics(name: &str, tol: f64, metrics: &[(f64, bool)]) -> Self {
        Self {
            name: name.to_string(),
            cases: metrics.len(),
            failures: metrics.iter().filter(|m| !m.1).count(),
            worst: metrics.iter().map(|m| m.0).fold(0.0, f64::max),
            tol,
            notes: Vec::new(),
        }
    }
}

fn stream(seed: u64, suite: u64, case: usize) -> SeededStream {
    SeededStream::new(seed).split(suite).split(case as u64)
}

fn frob_scale(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> f64 {
    coefficient_scale(a.matrix().frobenius_norm(), b.matrix().frobenius_norm(), a.dim(), p, r)
}

/// Recurrence, brute force and necklace engines on positive pairs with
/// `n = 1..4`, `p = 1..10`; the metric is the largest pairwise gap over
/// `binomial(p,r) ‖A‖^{p-r} ‖B‖^r n`.
pub fn cross_engine(instances: usize, seed: u64) -> Result<SuiteResult> {
    let metrics: Vec<(f64, bool)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 1, i);
            let n = 1 + i % 4;
            let p = 1 + (i / 4) % 10;
            let a = psd(n, &mut rng)?;
            let b = psd(n, &mut rng)?;
            let poly = trace_poly(&a, &b, p, None)?;
            let mut worst = 0.0f64;
            for r in 0..=p {
                let brute = coeff_bruteforce(&a, &b, p, r)?;
                let neck = coeff_by_necklaces(&a, &b, p, r)?;
                let dp = poly.coeffs[r];
                let dev = (dp - brute).abs().max((dp - neck).abs()).max((brute - neck).abs());
                worst = worst.max(dev / frob_scale(&a, &b, p, r));
            }
            Ok((worst, worst <= CROSS_ENGINE_TOL))
        })
        .collect::<Result<_>>()?;
    Ok(SuiteResult::from_metrics("cross-engine", CROSS_ENGINE_TOL, &metrics))
}

/// Exact brute force against exact necklaces on integer Gram pairs with
/// `p <= 10`; any difference fails. The metric is the gap between the
/// exact value and the floating recurrence, relative to the scale.
pub fn exact_engines(instances: usize, seed: u64) -> Result<SuiteResult> {
    let metrics: Vec<(f64, bool)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 2, i);
            let n = 1 + i % 3;
            let p = 10 - i % 4;
            let a = integer_gram(n, &mut rng)?;
            let b = integer_gram(n, &mut rng)?;
            let (ea, eb) = exact_pair(&a, &b)?;
            let poly = trace_poly(&a, &b, p, None)?;
            let mut equal = true;
            let mut worst = 0.0f64;
            for r in 0..=p {
                let brute = coeff_bruteforce_exact(&ea, &eb, p, r)?;
                let neck = coeff_by_necklaces_exact(&ea, &eb, p, r)?;
                equal &= brute == neck;
                worst = worst.max((rational_value(&brute) - poly.coeffs[r]).abs() / frob_scale(&a, &b, p, r));
            }
            Ok((worst, equal && worst <= CROSS_ENGINE_TOL))
        })
        .collect::<Result<_>>()?;
    Ok(SuiteResult::from_metrics("exact-engines", CROSS_ENGINE_TOL, &metrics))
}

/// The inverse-power identity for every `(p, r)` with `p >= 1`,
/// `p + r <= max_total`, on `per_pair` random `(a pd, b Hermitian)`
/// instances each, `n` cycling through `1..=max_n`.
pub fn lemma1(per_pair: usize, max_total: usize, max_n: usize, seed: u64) -> Result<SuiteResult> {
    let pairs: Vec<(usize, usize)> = (1..=max_total)
        .flat_map(|p| (0..=max_total - p).map(move |r| (p, r)))
        .collect();
    let cases: Vec<(usize, usize, usize)> = pairs
        .iter()
        .enumerate()
        .flat_map(|(k, &(p, r))| (0..per_pair).map(move |j| (k * per_pair + j, p, r)))
        .collect();
    let metrics: Vec<(f64, bool)> = cases
        .into_par_iter()
        .map(|(idx, p, r)| {
            let mut rng = stream(seed, 3, idx);
            let n = 1 + idx % max_n;
            let a = pd(n, 0.25, &mut rng)?;
            let b = hermitian(n, &mut rng)?;
            let rep = verify_lemma1(&a, &b, p, r, LEMMA1_TOL)?;
            Ok((rep.rel_residual, rep.pass))
        })
        .collect::<Result<_>>()?;
    let mut res = SuiteResult::from_metrics("lemma1", LEMMA1_TOL, &metrics);
    res.notes.push(format!("{} (p, r) pairs x {per_pair} instances", pairs.len()));
    Ok(res)
}

/// Scalar closed form: the left side over `(-1)^r r! b^r a^{-p-r}` is
/// `binomial(p+r-1, r)`.
pub fn lemma1_scalar(max_total: usize) -> Result<SuiteResult> {
    let mut metrics = Vec::new();
    for &a in &[0.5, 1.7, 3.0] {
        for &b in &[0.2, 1.0, 2.5] {
            for p in 1..=max_total {
                for r in 0..=(max_total - p) {
                    let rep = verify_lemma1(&HermitianMatrix::scalar(a), &HermitianMatrix::scalar(b), p, r, LEMMA1_SCALAR_TOL)?;
                    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                    let unit = sign * factorial(r as u64) * b.powi(r as i32) * a.powi(-((p + r) as i32));
                    let want = binomial((p + r - 1) as u64, r as u64) as f64;
                    let rel = (rep.lhs / unit - want).abs() / want;
                    metrics.push((rel.max(rep.rel_residual), rel <= LEMMA1_SCALAR_TOL && rep.pass));
                }
            }
        }
    }
    Ok(SuiteResult::from_metrics("lemma1-scalar", LEMMA1_SCALAR_TOL, &metrics))
}

/// Shifted exponential series on unit-norm `A` (Hermitian) and `B`
/// (positive), `n <= 3`, `λ ∈ {0, 0.5, 2}`: the gap must reach `1e-10` at
/// some `K <= 80`.
pub fn series(instances: usize, seed: u64) -> Result<SuiteResult> {
    let rows: Vec<Vec<(f64, bool, usize)>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 4, i);
            let n = 1 + i % 3;
            let a = unit_norm(hermitian(n, &mut rng)?);
            let b = unit_norm(psd(n, &mut rng)?);
            [0.0, 0.5, 2.0]
                .iter()
                .map(|&lambda| {
                    let rep = series_identity_check(&a, &b, lambda, SERIES_CAP)?;
                    Ok((rep.rel_gap, rep.converged && rep.rel_gap <= SERIES_TOL, rep.k_used))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let flat: Vec<(f64, bool, usize)> = rows.into_iter().flatten().collect();
    let metrics: Vec<(f64, bool)> = flat.iter().map(|m| (m.0, m.1)).collect();
    let mut res = SuiteResult::from_metrics("series", SERIES_TOL, &metrics);
    res.notes.push(format!("largest K used: {}", flat.iter().map(|m| m.2).max().unwrap_or(0)));
    Ok(res)
}

/// Gamma-integral quadrature on `A = GG*/n + I/2`, `B = HH*/n`, random
/// `λ ∈ [0, 1]`, `p ∈ {1, 2, 2.5, 4}`: error at 64 nodes within `1e-6`, and
/// the 128-node error no larger than the 32-node error (up to rounding).
pub fn laplace(instances: usize, seed: u64) -> Result<SuiteResult> {
    let rows: Vec<Vec<(f64, bool, bool)>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 5, i);
            let n = 1 + i % 3;
            let a = pd(n, 0.5, &mut rng)?;
            let b = psd(n, &mut rng)?.scale(1.0 / n as f64);
            let lambda = rng.uniform();
            [1.0, 2.0, 2.5, 4.0]
                .iter()
                .map(|&p| {
                    let e32 = laplace_rep_check(&a, &b, lambda, p, 32)?.rel_error;
                    let e64 = laplace_rep_check(&a, &b, lambda, p, 64)?.rel_error;
                    let e128 = laplace_rep_check(&a, &b, lambda, p, 128)?.rel_error;
                    let ok = e64 <= LAPLACE_TOL && e128 <= e32.max(LAPLACE_NOISE_FLOOR);
                    Ok((e64, ok, e128 > e32))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let flat: Vec<(f64, bool, bool)> = rows.into_iter().flatten().collect();
    let metrics: Vec<(f64, bool)> = flat.iter().map(|m| (m.0, m.1)).collect();
    let mut res = SuiteResult::from_metrics("laplace", LAPLACE_TOL, &metrics);
    res.notes.push(format!(
        "128-node error above 32-node error (both below {:.1e}) in {} cases",
        LAPLACE_NOISE_FLOOR,
        flat.iter().filter(|m| m.2).count()
    ));
    Ok(res)
}

/// Block-augmentation derivatives of `Tr exp(A-λB)` against Richardson
/// differences, `r <= 4`, `n <= 4`.
pub fn exp_derivatives(instances: usize, seed: u64) -> Result<SuiteResult> {
    let metrics: Vec<(f64, bool)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 6, i);
            let n = 1 + i % 4;
            let a = unit_norm(hermitian(n, &mut rng)?);
            let b = unit_norm(psd(n, &mut rng)?);
            let lambda = 2.0 * rng.uniform();
            let mut worst = 0.0f64;
            for r in 0..=4 {
                let c = exp_trace_derivative_checked(&a, &b, r, lambda)?;
                worst = worst.max(c.discrepancy().unwrap_or(f64::INFINITY));
            }
            Ok((worst, worst <= EXP_FD_TOL))
        })
        .collect::<Result<_>>()?;
    Ok(SuiteResult::from_metrics("exp-derivatives", EXP_FD_TOL, &metrics))
}

/// Composition-sum derivatives of `Tr(a+λb)^{-p}` at `0` against a
/// complex-stencil difference on the circle of radius `1/(2‖B̃‖)`, where
/// `Tr(a+zb)^{-p}` comes from LU solves; `p, r <= 4`, errors relative to
/// the sum of absolute term values.
pub fn invpow_derivatives(instances: usize, seed: u64) -> Result<SuiteResult> {
    let metrics: Vec<(f64, bool)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 7, i);
            let n = 1 + i % 4;
            let p = 1 + (i / 4) % 4;
            let a = pd(n, 0.5, &mut rng)?;
            let b = hermitian(n, &mut rng)?;
            let (_, bt) = lemma1_transform(&a, &b)?;
            let radius = 0.5 / bt.operator_norm().max(f64::MIN_POSITIVE);
            let eye = CMatrix::identity(n);
            let f = |z: Complex64| match (a.matrix() + &b.matrix().scale_complex(z)).solve(&eye) {
                Some(inv) => (1..p).fold(inv.clone(), |acc, _| acc.matmul(&inv)).trace(),
                None => Complex64::new(f64::NAN, 0.0),
            };
            let mut worst = 0.0f64;
            for r in 1..=4 {
                let d = inverse_power_derivative(&a, &b, p, r)?;
                let fd = contour_derivative(f, 0.0, r, radius, CONTOUR_NODES);
                worst = worst.max((fd - d.value).abs() / d.scale.max(f64::MIN_POSITIVE));
            }
            Ok((worst, worst <= INVPOW_FD_TOL))
        })
        .collect::<Result<_>>()?;
    Ok(SuiteResult::from_metrics("invpow-derivatives", INVPOW_FD_TOL, &metrics))
}

fn random_word(p: usize, r: usize, rng: &mut SeededStream) -> BinaryWord {
    let mut letters = vec![Letter::A; p];
    let mut placed = 0;
    while placed < r {
        let k = rng.index(p);
        if letters[k] == Letter::A {
            letters[k] = Letter::B;
            placed += 1;
        }
    }
    BinaryWord::new(letters)
}

/// Directional derivatives `Tr(gA H)`, `Tr(gB H)` of `c_{p,r}` and of a
/// random monomial against Richardson central differences along random
/// Hermitian `H`. Errors are relative to `max(|derivative|, ‖g‖_F ‖H‖_F)`.
pub fn gradients(instances: usize, directions: usize, seed: u64) -> Result<SuiteResult> {
    let metrics: Vec<(f64, bool)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 8, i);
            let n = 1 + i % 4;
            let p = 1 + i % 8;
            let r = rng.index(p + 1);
            let a = unit_norm(psd(n, &mut rng)?);
            let b = unit_norm(psd(n, &mut rng)?);
            let w = random_word(p, r, &mut rng);
            let cg = coeff_value_and_gradient(&a, &b, p, r)?;
            let wg = word_trace_gradient(&a, &b, &w)?;
            let mut worst = 0.0f64;
            for _ in 0..directions {
                let hd = unit_norm(hermitian(n, &mut rng)?);
                let hn = hd.matrix().frobenius_norm();
                let check = |g: &HermitianMatrix, f: &dyn Fn(f64) -> f64| -> f64 {
                    let analytic = g.matrix().trace_of_product(hd.matrix()).re;
                    let fd = richardson_derivative(f, 0.0, 1, 0.1).value;
                    (fd - analytic).abs() / analytic.abs().max(g.matrix().frobenius_norm() * hn).max(f64::MIN_POSITIVE)
                };
                let shift = |m: &HermitianMatrix, t: f64| m.add_scaled(t, &hd).expect("same dimension");
                let coeff_at = |x: &HermitianMatrix, y: &HermitianMatrix| {
                    trace_poly(x, y, p, Some(r)).map(|t| t.coeffs[r]).unwrap_or(f64::NAN)
                };
                let word_at =
                    |x: &HermitianMatrix, y: &HermitianMatrix| word_trace(x, y, &w).map(|z| z.re).unwrap_or(f64::NAN);
                worst = worst
                    .max(check(&cg.grad_a, &|t| coeff_at(&shift(&a, t), &b)))
                    .max(check(&cg.grad_b, &|t| coeff_at(&a, &shift(&b, t))))
                    .max(check(&wg.grad_a, &|t| word_at(&shift(&a, t), &b)))
                    .max(check(&wg.grad_b, &|t| word_at(&a, &shift(&b, t))));
            }
            Ok((worst, worst <= GRADIENT_TOL))
        })
        .collect::<Result<_>>()?;
    Ok(SuiteResult::from_metrics("gradients", GRADIENT_TOL, &metrics))
}

/// 2×2 positive pairs: every `c_{p,r}` (`p = 1..10`) is at least
/// `-1e-12·scale`; the non-negative basis exists, its conjugated entries
/// clear `-1e-12·‖·‖` and spectra agree to `1e-10·‖·‖`.
pub fn two_by_two_positivity(instances: usize, seed: u64) -> Result<SuiteResult> {
    let metrics: Vec<(f64, bool)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 9, i);
            let a = psd(2, &mut rng)?;
            let b = psd(2, &mut rng)?;
            let p = 1 + i % 10;
            let poly = trace_poly(&a, &b, p, None)?;
            // metric: most negative coefficient relative to its scale (0 when none)
            let mut worst = 0.0f64;
            for r in 0..=p {
                worst = worst.max(-poly.coeffs[r] / frob_scale(&a, &b, p, r));
            }
            let mut ok = worst <= POSITIVITY_FLOOR;
            match nonneg_basis_2x2(&a, &b) {
                Ok(out) => {
                    for (orig, cleaned) in [(&a, &out.a), (&b, &out.b)] {
                        let raw = orig.conjugate_by(&out.unitary)?;
                        let norm = orig.operator_norm().max(f64::MIN_POSITIVE);
                        for z in raw.matrix().as_slice() {
                            let neg = (-z.re / norm).max(z.im.abs() / norm);
                            worst = worst.max(neg);
                            ok &= neg <= POSITIVITY_FLOOR;
                        }
                        let e0 = orig.eigh().eigenvalues;
                        let e1 = cleaned.eigh().eigenvalues;
                        let gap = e0.iter().zip(&e1).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / norm;
                        ok &= gap <= SPECTRUM_TOL;
                    }
                }
                Err(_) => ok = false,
            }
            Ok((worst, ok))
        })
        .collect::<Result<_>>()?;
    Ok(SuiteResult::from_metrics("2x2-positivity", POSITIVITY_FLOOR, &metrics))
}

/// Exponential and inverse-power complete-monotonicity probes on 2×2
/// positive pairs, `r <= 5`, grid `0:5:0.25`; any violation fails.
pub fn two_by_two_cm(instances: usize, seed: u64) -> Result<SuiteResult> {
    let grid: Vec<f64> = (0..=20).map(|k| 0.25 * k as f64).collect();
    let metrics: Vec<(f64, bool)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 10, i);
            let a = psd(2, &mut rng)?;
            let b = psd(2, &mut rng)?;
            let p = 1 + i % 4;
            let e = cm_probe_exp(&a, &b, 5, &grid, CM_TOL)?;
            let v = cm_probe_invpow(&a, &b, p, 5, &grid, CM_TOL)?;
            let violations = e.violations.len() + v.violations.len();
            // metric: most negative signed value relative to its scale
            let mut worst = 0.0f64;
            for rep in [&e, &v] {
                for (row, srow) in rep.values.iter().zip(&rep.scales) {
                    for (x, s) in row.iter().zip(srow) {
                        if *s > 0.0 {
                            worst = worst.max(-x / s);
                        }
                    }
                }
            }
            Ok((worst, violations == 0))
        })
        .collect::<Result<_>>()?;
    Ok(SuiteResult::from_metrics("2x2-complete-monotonicity", CM_TOL, &metrics))
}

/// Outcome of the `Tr A²B²AB` search.
#[derive(Debug, Clone)]
pub struct NegativeTermOutcome {
    pub result: SuiteResult,
    pub record: bmv_core::search::SearchRecord,
    /// Exact `c_{6,3}` on the certified pair.
    pub c63: Option<num_rational::BigRational>,
}

pub fn negative_term(restarts: usize, seed: u64) -> Result<NegativeTermOutcome> {
    let w: BinaryWord = "AABBAB".parse()?;
    let config = SearchConfig::single_term(3, w, restarts, seed);
    let record = search_negative_term(&config)?;
    let c63 = match (&record.exact_a, &record.exact_b) {
        (Some(ea), Some(eb)) => Some(coeff_by_necklaces_exact(ea, eb, 6, 3)?),
        _ => None,
    };
    let certified = record.is_certified();
    let mut result = SuiteResult {
        name: "negative-term".into(),
        cases: 1,
        failures: usize::from(!certified),
        worst: record.best_value,
        tol: 0.0,
        notes: vec![format!("restarts run: {}", record.summary.restarts_run)],
    };
    if let Some(v) = &record.exact_value {
        result.notes.push(format!("exact Tr A^2B^2AB = {} ({})", v, fmt17(rational_value(v))));
    }
    if let Some(c) = &c63 {
        result.notes.push(format!("exact c_(6,3) = {}", fmt17(rational_value(c))));
    }
    Ok(NegativeTermOutcome { result, record, c63 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    Quick,
    Full,
}

/// The regression suites behind `bmv oracle-diff`.
pub fn oracle_suites(kind: SuiteKind, seed: u64) -> Result<Vec<SuiteResult>> {
    let (cross, exact, per_pair, total, quad, ser) = match kind {
        SuiteKind::Quick => (40, 4, 2, 8, 10, 10),
        SuiteKind::Full => (200, 20, 50, 12, 50, 50),
    };
    Ok(vec![
        cross_engine(cross, seed)?,
        exact_engines(exact, seed)?,
        lemma1(per_pair, total, 4, seed)?,
        lemma1_scalar(total)?,
        laplace(quad, seed)?,
        series(ser, seed)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(cross_engine(8, 1).unwrap().pass());
        assert!(exact_engines(2, 1).unwrap().pass());
        assert!(lemma1(1, 6, 3, 1).unwrap().pass());
        assert!(lemma1_scalar(6).unwrap().pass());
        assert!(series(3, 1).unwrap().pass());
        assert!(laplace(3, 1).unwrap().pass());
        assert!(exp_derivatives(4, 1).unwrap().pass());
        assert!(invpow_derivatives(4, 1).unwrap().pass());
        assert!(gradients(4, 3, 1).unwrap().pass());
        assert!(two_by_two_positivity(10, 1).unwrap().pass());
        assert!(two_by_two_cm(4, 1).unwrap().pass());
    }

    #[test]
    fn suites_are_deterministic() {
        assert_eq!(cross_engine(6, 9).unwrap(), cross_engine(6, 9).unwrap());
        assert_eq!(laplace(2, 9).unwrap(), laplace(2, 9).unwrap());
    }

    #[test]
    fn random_words_have_requested_weight() {
        let mut rng = SeededStream::new(3);
        for p in 1..8 {
            for r in 0..=p {
                let w = random_word(p, r, &mut rng);
                assert_eq!((w.len(), w.weight()), (p, r));
            }
        }
    }
}
