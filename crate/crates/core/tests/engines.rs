use bmv_core::matcore::{expm, random_hermitian, random_psd, CMatrix, HermitianMatrix, SeededStream};
use bmv_core::numeric::binomial;
use bmv_core::trace_poly::{coefficient_scale, trace_poly};
use bmv_core::words::{coeff_bruteforce, coeff_bruteforce_exact, coeff_by_necklaces, coeff_by_necklaces_exact, exact_pair};
use num_complex::Complex64;
use proptest::prelude::*;

fn random_pair(n: usize, rng: &mut SeededStream) -> (HermitianMatrix, HermitianMatrix) {
    (random_psd(n, n, rng, false).unwrap(), random_psd(n, n, rng, false).unwrap())
}

fn scale(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> f64 {
    coefficient_scale(a.matrix().frobenius_norm(), b.matrix().frobenius_norm(), a.dim(), p, r)
}

fn random_unitary(n: usize, rng: &mut SeededStream) -> CMatrix {
    let h = random_hermitian(n, rng).unwrap();
    expm(&h.matrix().scale_complex(Complex64::new(0.0, 1.0)))
}

#[test]
fn three_engines_agree() {
    let mut rng = SeededStream::new(100);
    for case in 0..40 {
        let n = 1 + case % 4;
        let p = 1 + case % 10;
        let (a, b) = random_pair(n, &mut rng);
        let poly = trace_poly(&a, &b, p, None).unwrap();
        for r in 0..=p {
            let s = scale(&a, &b, p, r);
            let brute = coeff_bruteforce(&a, &b, p, r).unwrap();
            let neck = coeff_by_necklaces(&a, &b, p, r).unwrap();
            assert!((poly.coeffs[r] - brute).abs() <= 1e-9 * s, "n={n} p={p} r={r}");
            assert!((neck - brute).abs() <= 1e-9 * s, "n={n} p={p} r={r}");
        }
    }
}

#[test]
fn exact_engines_agree_bitwise() {
    let mut rng = SeededStream::new(101);
    for case in 0..6 {
        let n = 2 + case % 2;
        let a = random_psd(n, n, &mut rng, true).unwrap();
        let b = random_psd(n, n, &mut rng, true).unwrap();
        let (ea, eb) = exact_pair(&a, &b).unwrap();
        for r in 0..=7 {
            assert_eq!(
                coeff_bruteforce_exact(&ea, &eb, 7, r).unwrap(),
                coeff_by_necklaces_exact(&ea, &eb, 7, r).unwrap()
            );
        }
    }
}

#[test]
fn commuting_pairs_reduce_to_binomials() {
    let a = HermitianMatrix::diag(&[0.5, 1.5, 2.0]).unwrap();
    let b = HermitianMatrix::diag(&[1.0, 0.25, 3.0]).unwrap();
    let p = 7;
    let poly = trace_poly(&a, &b, p, None).unwrap();
    for r in 0..=p {
        let want: f64 = [(0.5, 1.0), (1.5, 0.25), (2.0, 3.0)]
            .iter()
            .map(|&(x, y): &(f64, f64)| binomial(p as u64, r as u64) as f64 * x.powi((p - r) as i32) * y.powi(r as i32))
            .sum();
        assert!((poly.coeffs[r] - want).abs() <= 1e-12 * want.max(1.0));
    }
}

#[test]
fn swap_symmetry_and_homogeneity() {
    let mut rng = SeededStream::new(102);
    let (a, b) = random_pair(3, &mut rng);
    let p = 6;
    let ab = trace_poly(&a, &b, p, None).unwrap();
    let ba = trace_poly(&b, &a, p, None).unwrap();
    let (s, t) = (1.7, 0.4);
    let scaled = trace_poly(&a.scale(s), &b.scale(t), p, None).unwrap();
    for r in 0..=p {
        let sc = scale(&a, &b, p, r);
        assert!((ab.coeffs[r] - ba.coeffs[p - r]).abs() <= 1e-12 * sc);
        let want = s.powi((p - r) as i32) * t.powi(r as i32) * ab.coeffs[r];
        assert!((scaled.coeffs[r] - want).abs() <= 1e-11 * sc * s.powi((p - r) as i32) * t.powi(r as i32));
    }
}

#[test]
fn unitary_invariance() {
    let mut rng = SeededStream::new(103);
    for _ in 0..5 {
        let (a, b) = random_pair(3, &mut rng);
        let u = random_unitary(3, &mut rng);
        let before = trace_poly(&a, &b, 8, None).unwrap();
        let after = trace_poly(&a.conjugate_by(&u).unwrap(), &b.conjugate_by(&u).unwrap(), 8, None).unwrap();
        for r in 0..=8 {
            assert!((before.coeffs[r] - after.coeffs[r]).abs() <= 1e-10 * scale(&a, &b, 8, r));
        }
    }
}

#[test]
fn coefficients_sum_to_trace_of_sum() {
    let mut rng = SeededStream::new(104);
    let (a, b) = random_pair(4, &mut rng);
    let poly = trace_poly(&a, &b, 5, None).unwrap();
    let sum = a.add_scaled(1.0, &b).unwrap();
    let direct: f64 = sum.eigh().eigenvalues.iter().map(|v| v.powi(5)).sum();
    let total: f64 = poly.coeffs.iter().sum();
    assert!((total - direct).abs() <= 1e-11 * direct);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn engines_agree_on_any_seed(seed in any::<u64>(), n in 1usize..=3, p in 1usize..=8) {
        let mut rng = SeededStream::new(seed);
        let a = random_hermitian(n, &mut rng).unwrap();
        let b = random_hermitian(n, &mut rng).unwrap();
        let poly = trace_poly(&a, &b, p, None).unwrap();
        for r in 0..=p {
            let brute = coeff_bruteforce(&a, &b, p, r).unwrap();
            prop_assert!((poly.coeffs[r] - brute).abs() <= 1e-9 * scale(&a, &b, p, r));
        }
    }

    #[test]
    fn positive_pairs_have_nonnegative_end_coefficients(seed in any::<u64>(), n in 1usize..=4, p in 1usize..=9) {
        let mut rng = SeededStream::new(seed);
        let (a, b) = random_pair(n, &mut rng);
        let poly = trace_poly(&a, &b, p, None).unwrap();
        prop_assert!(poly.coeffs[0] >= 0.0);
        prop_assert!(poly.coeffs[p] >= 0.0);
        if p >= 2 {
            // c_{p,1} = p Tr(A^{p-1} B) >= 0
            prop_assert!(poly.coeffs[1] >= -1e-12 * scale(&a, &b, p, 1));
        }
    }
}
