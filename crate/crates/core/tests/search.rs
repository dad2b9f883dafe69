use bmv_core::search::{certify_instance, record_for_pair, search_min_coeff, search_negative_term, SearchConfig};
use bmv_core::words::{coeff_bruteforce, word_trace, BinaryWord};
use num_traits::Signed;

fn aabbab() -> BinaryWord {
    "AABBAB".parse().unwrap()
}

#[test]
fn two_by_two_coefficient_minimum_is_nonnegative() {
    let rec = search_min_coeff(&SearchConfig::coefficient(2, 6, 3, 40, 5)).unwrap();
    assert!(rec.best_value >= -1e-10 * rec.scale, "{}", rec.best_value);
    assert!(rec.a.eigh().min() >= -1e-12 * rec.a.operator_norm());
    assert!(rec.b.eigh().min() >= -1e-12 * rec.b.operator_norm());
}

#[test]
fn certified_sign_survives_rescaling() {
    let rec = search_negative_term(&SearchConfig::single_term(3, aabbab(), 128, 2)).unwrap();
    assert!(rec.is_certified());
    let w = aabbab();
    let direct = word_trace(&rec.a, &rec.b, &w).unwrap();
    assert!((direct.re - rec.best_value).abs() <= 1e-9 * rec.scale);
    let c63 = coeff_bruteforce(&rec.a, &rec.b, 6, 3).unwrap();
    assert!(c63.is_finite());

    let exact_a = rec.exact_a.as_ref().unwrap().to_cmatrix();
    let exact_b = rec.exact_b.as_ref().unwrap().to_cmatrix();
    let a = bmv_core::HermitianMatrix::new(exact_a).unwrap().scale(4.0);
    let b = bmv_core::HermitianMatrix::new(exact_b).unwrap().scale(0.5);
    let scaled = certify_instance(record_for_pair(&rec.config, a, b).unwrap());
    let v = scaled.exact_value.expect("dyadic entries stay within budget");
    assert!(v.is_negative());
    // 4^3 * 0.5^3 = 8
    let original = rec.exact_value.unwrap();
    assert_eq!(v, original * num_rational::BigRational::from_integer(8.into()));
}
