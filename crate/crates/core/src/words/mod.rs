//! Words over `{A, B}`, necklaces, trace monomials and the two
//! combinatorial coefficient oracles (sum over all words, and sum over
//! necklaces weighted by orbit size).
//!
//! Floating-point sums are formed in a fixed order with pairwise
//! reduction, so parallel evaluation gives bit-identical results.

mod necklace;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{BmvError, Result};
use crate::matcore::{check_same_dim, CMatrix, ExactMatrix, GaussianInt, GaussianRational, HermitianMatrix};
use crate::numeric::{fmt17, pairwise_sum};

pub use necklace::{least_rotation, necklaces_by_canonicalization, necklaces_fkm, smallest_period, NecklaceClass};

/// Largest word length accepted by the brute-force oracle.
pub const BRUTEFORCE_CAP: usize = 22;
/// Largest word length accepted by the necklace oracle.
pub const NECKLACE_CAP: usize = 26;
/// Up to this length necklaces come from canonicalizing the full enumeration.
const CANONICALIZATION_LIMIT: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryWord {
    pub letters: Vec<Letter>,
}

impl BinaryWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of `B`s.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&l| l == Letter::B).count()
    }

    /// Left rotation by `k` places.
    pub fn rotate(&self, k: usize) -> BinaryWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        BinaryWord { letters }
    }

    pub fn reversed(&self) -> BinaryWord {
        BinaryWord {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::A => "A",
                Letter::B => "B",
            })?;
        }
        Ok(())
    }
}

impl FromStr for BinaryWord {
    type Err = BmvError;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'A' => Ok(Letter::A),
                'B' => Ok(Letter::B),
                other => Err(BmvError::InvalidArgument(format!("word letter {other:?} is not A or B"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BinaryWord::new)
    }
}

/// Lexicographic stream of all words of length `p` with `r` `B`s.
#[derive(Debug, Clone)]
pub struct WordStream {
    next: Option<Vec<Letter>>,
}

impl WordStream {
    fn new(p: usize, r: usize) -> Self {
        let mut first = vec![Letter::A; p - r];
        first.extend(std::iter::repeat_n(Letter::B, r));
        Self { next: Some(first) }
    }
}

impl Iterator for WordStream {
    type Item = BinaryWord;

    fn next(&mut self) -> Option<BinaryWord> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // next permutation of the multiset
        if let Some(i) = (1..succ.len()).rev().find(|&i| succ[i - 1] < succ[i]) {
            let j = (i..succ.len()).rev().find(|&j| succ[j] > succ[i - 1]).expect("pivot exists");
            succ.swap(i - 1, j);
            succ[i..].reverse();
            self.next = Some(succ);
        }
        Some(BinaryWord::new(current))
    }
}

fn check_indices(p: usize, r: usize) -> Result<()> {
    if r > p {
        return Err(BmvError::InvalidIndex(format!("weight {r} exceeds length {p}")));
    }
    Ok(())
}

pub fn enumerate_words(p: usize, r: usize) -> Result<WordStream> {
    check_indices(p, r)?;
    Ok(WordStream::new(p, r))
}

/// One class per rotation orbit of the words of length `p` and weight `r`,
/// in lexicographic order of representatives.
pub fn necklaces(p: usize, r: usize) -> Result<Vec<NecklaceClass>> {
    check_indices(p, r)?;
    if p == 0 {
        return Err(BmvError::InvalidIndex("necklaces need length >= 1".into()));
    }
    if p <= CANONICALIZATION_LIMIT {
        Ok(necklaces_by_canonicalization(p, r))
    } else {
        Ok(necklaces_fkm(p, r))
    }
}

fn letter_matrix<'m, M>(w: Letter, a: &'m M, b: &'m M) -> &'m M {
    match w {
        Letter::A => a,
        Letter::B => b,
    }
}

fn product(a: &CMatrix, b: &CMatrix, w: &BinaryWord) -> CMatrix {
    let mut it = w.letters.iter();
    let Some(&first) = it.next() else {
        return CMatrix::identity(a.dim());
    };
    let mut acc = letter_matrix(first, a, b).clone();
    for &l in it {
        acc = acc.matmul(letter_matrix(l, a, b));
    }
    acc
}

/// `Tr` of the ordered product spelled by `w`.
///
/// A single monomial need not be real for complex Hermitian inputs (its
/// conjugate is the trace of the reversed word), so the full complex
/// value is returned.
pub fn word_trace(a: &HermitianMatrix, b: &HermitianMatrix, w: &BinaryWord) -> Result<Complex64> {
    check_same_dim(a, b)?;
    Ok(product(a.matrix(), b.matrix(), w).trace())
}

fn exact_product(a: &ExactMatrix, b: &ExactMatrix, w: &BinaryWord) -> ExactMatrix {
    let mut it = w.letters.iter();
    let Some(&first) = it.next() else {
        return ExactMatrix::identity(a.dim());
    };
    let mut acc = letter_matrix(first, a, b).clone();
    for &l in it {
        acc = acc.matmul(letter_matrix(l, a, b));
    }
    acc
}

fn check_exact_dims(a: &ExactMatrix, b: &ExactMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(BmvError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

pub fn word_trace_exact(a: &ExactMatrix, b: &ExactMatrix, w: &BinaryWord) -> Result<GaussianRational> {
    check_exact_dims(a, b)?;
    Ok(exact_product(a, b, w).trace())
}

/// Exact forms of a floating-point pair. Every double is a dyadic
/// rational, so this only fails on the denominator budget.
pub fn exact_pair(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<(ExactMatrix, ExactMatrix)> {
    check_same_dim(a, b)?;
    Ok((ExactMatrix::from_hermitian(a)?, ExactMatrix::from_hermitian(b)?))
}

fn check_cap(p: usize, r: usize, cap: usize) -> Result<()> {
    check_indices(p, r)?;
    if p > cap {
        return Err(BmvError::OverCap { p, cap });
    }
    Ok(())
}

/// `c_{p,r}` as the sum of `Re Tr w` over all words of length `p`, weight `r`.
pub fn coeff_bruteforce(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> Result<f64> {
    check_same_dim(a, b)?;
    check_cap(p, r, BRUTEFORCE_CAP)?;
    let words: Vec<BinaryWord> = WordStream::new(p, r).collect();
    let values: Vec<f64> = words
        .par_iter()
        .map(|w| product(a.matrix(), b.matrix(), w).trace().re)
        .collect();
    Ok(pairwise_sum(&values))
}

/// `c_{p,r}` as `Σ orbit_size · Re Tr(representative)` over necklaces.
pub fn coeff_by_necklaces(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> Result<f64> {
    check_same_dim(a, b)?;
    check_cap(p, r, NECKLACE_CAP)?;
    if p == 0 {
        return Ok(a.dim() as f64);
    }
    let classes = necklaces(p, r)?;
    let values: Vec<f64> = classes
        .par_iter()
        .map(|c| c.orbit_size as f64 * product(a.matrix(), b.matrix(), &c.representative).trace().re)
        .collect();
    Ok(pairwise_sum(&values))
}

fn real_coefficient(sum: GaussianInt, den: BigInt) -> Result<BigRational> {
    if !sum.im.is_zero() {
        return Err(BmvError::InvalidArgument(
            "exact coefficient has a nonzero imaginary part; inputs are not Hermitian".into(),
        ));
    }
    Ok(BigRational::new(sum.re, den))
}

fn pow_den(a: &ExactMatrix, b: &ExactMatrix, p: usize, r: usize) -> BigInt {
    num_traits::pow(a.denominator().clone(), p - r) * num_traits::pow(b.denominator().clone(), r)
}

pub fn coeff_bruteforce_exact(a: &ExactMatrix, b: &ExactMatrix, p: usize, r: usize) -> Result<BigRational> {
    check_exact_dims(a, b)?;
    check_cap(p, r, BRUTEFORCE_CAP)?;
    let words: Vec<BinaryWord> = WordStream::new(p, r).collect();
    let sum = words
        .par_iter()
        .map(|w| exact_product(a, b, w).trace_numerator())
        .collect::<Vec<_>>()
        .into_iter()
        .fold(GaussianInt::zero(), |acc, t| acc + t);
    real_coefficient(sum, pow_den(a, b, p, r))
}

pub fn coeff_by_necklaces_exact(a: &ExactMatrix, b: &ExactMatrix, p: usize, r: usize) -> Result<BigRational> {
    check_exact_dims(a, b)?;
    check_cap(p, r, NECKLACE_CAP)?;
    if p == 0 {
        return Ok(BigRational::from_integer(a.dim().into()));
    }
    let classes = necklaces(p, r)?;
    let sum = classes
        .par_iter()
        .map(|c| {
            let t = exact_product(a, b, &c.representative).trace_numerator();
            let k = BigInt::from(c.orbit_size);
            GaussianInt::new(t.re * &k, t.im * &k)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(GaussianInt::zero(), |acc, t| acc + t);
    real_coefficient(sum, pow_den(a, b, p, r))
}

/// The necklace class whose monomial has the smallest real part. Ties go
/// to the lexicographically smaller representative.
pub fn min_term(a: &HermitianMatrix, b: &HermitianMatrix, p: usize, r: usize) -> Result<(NecklaceClass, f64)> {
    check_same_dim(a, b)?;
    check_cap(p, r, NECKLACE_CAP)?;
    let classes = necklaces(p, r)?;
    let values: Vec<f64> = classes
        .par_iter()
        .map(|c| product(a.matrix(), b.matrix(), &c.representative).trace().re)
        .collect();
    let (idx, value) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
    Ok((classes[idx].clone(), value))
}

/// Value and Hermitian gradients of `Re Tr w`.
#[derive(Debug, Clone)]
pub struct WordGradient {
    pub value: Complex64,
    pub grad_a: HermitianMatrix,
    pub grad_b: HermitianMatrix,
}

/// For each letter position `i`, the derivative of `Tr w` in direction `H`
/// at that position is `Tr(H · M_{i+1}⋯M_p M_1⋯M_{i-1})`; the gradients sum
/// these rotated products per letter and take Hermitian parts.
pub fn word_trace_gradient(a: &HermitianMatrix, b: &HermitianMatrix, w: &BinaryWord) -> Result<WordGradient> {
    check_same_dim(a, b)?;
    let n = a.dim();
    let p = w.len();
    if p == 0 {
        return Ok(WordGradient {
            value: Complex64::new(n as f64, 0.0),
            grad_a: HermitianMatrix::zeros(n)?,
            grad_b: HermitianMatrix::zeros(n)?,
        });
    }
    let mats: Vec<&CMatrix> = w.letters.iter().map(|&l| letter_matrix(l, a.matrix(), b.matrix())).collect();
    // prefix[i] = M_1 ⋯ M_i, suffix[i] = M_{i+1} ⋯ M_p (1-indexed letters)
    let mut prefix = Vec::with_capacity(p + 1);
    prefix.push(CMatrix::identity(n));
    for m in &mats {
        let next = prefix.last().expect("nonempty").matmul(m);
        prefix.push(next);
    }
    let mut suffix = vec![CMatrix::identity(n); p + 1];
    for i in (0..p).rev() {
        suffix[i] = mats[i].matmul(&suffix[i + 1]);
    }
    let mut ga = CMatrix::zeros(n);
    let mut gb = CMatrix::zeros(n);
    for (i, &l) in w.letters.iter().enumerate() {
        let rotated = suffix[i + 1].matmul(&prefix[i]);
        match l {
            Letter::A => ga += &rotated,
            Letter::B => gb += &rotated,
        }
    }
    Ok(WordGradient {
        value: prefix[p].trace(),
        grad_a: HermitianMatrix::new(ga)?,
        grad_b: HermitianMatrix::new(gb)?,
    })
}

/// One row of the term-level report.
#[derive(Debug, Clone, PartialEq)]
pub struct TermRow {
    pub p: usize,
    pub r: usize,
    pub representative: BinaryWord,
    pub orbit_size: usize,
    pub value: f64,
    pub exact: Option<BigRational>,
}

impl TermRow {
    pub const CSV_HEADER: &'static str = "p,r,representative,orbit_size,value,exact_num,exact_den";

    pub fn to_csv_line(&self) -> String {
        let (num, den) = match &self.exact {
            Some(q) => (q.numer().to_string(), q.denom().to_string()),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{}",
            self.p,
            self.r,
            self.representative,
            self.orbit_size,
            fmt17(self.value),
            num,
            den
        )
    }
}

/// Per-necklace monomials `Re Tr(representative)` for `(p, r)`, with exact
/// real parts when an exact pair is supplied.
pub fn term_rows(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    p: usize,
    r: usize,
    exact: Option<(&ExactMatrix, &ExactMatrix)>,
) -> Result<Vec<TermRow>> {
    check_same_dim(a, b)?;
    check_cap(p, r, NECKLACE_CAP)?;
    let classes = necklaces(p, r)?;
    classes
        .into_par_iter()
        .map(|c| {
            let value = product(a.matrix(), b.matrix(), &c.representative).trace().re;
            let exact = match exact {
                Some((ea, eb)) => Some(word_trace_exact(ea, eb, &c.representative)?.re),
                None => None,
            };
            Ok(TermRow {
                p,
                r,
                representative: c.representative,
                orbit_size: c.orbit_size,
                value,
                exact,
            })
        })
        .collect()
}

/// Nearest double to an exact rational.
pub fn rational_value(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| crate::matcore::rational_to_f64(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_hermitian, random_psd, SeededStream};
    use crate::numeric::binomial;

    fn strings(p: usize, r: usize) -> Vec<String> {
        enumerate_words(p, r).unwrap().map(|w| w.to_string()).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(strings(2, 1), vec!["AB", "BA"]);
        assert_eq!(strings(6, 3).len(), 20);
        assert_eq!(strings(5, 0), vec!["AAAAA"]);
        assert_eq!(strings(3, 3), vec!["BBB"]);
        assert!(enumerate_words(2, 3).is_err());
        let all = strings(7, 3);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(all, sorted);
    }

    #[test]
    fn necklace_examples() {
        let six = necklaces(6, 3).unwrap();
        let reps: Vec<String> = six.iter().map(|c| c.representative.to_string()).collect();
        assert_eq!(reps, vec!["AAABBB", "AABABB", "AABBAB", "ABABAB"]);
        let orbits: Vec<usize> = six.iter().map(|c| c.orbit_size).collect();
        assert_eq!(orbits, vec![6, 6, 6, 2]);

        let four = necklaces(4, 2).unwrap();
        let orbits: Vec<usize> = four.iter().map(|c| c.orbit_size).collect();
        assert_eq!(orbits, vec![4, 2]);

        let zero = necklaces(5, 0).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].orbit_size, 1);
    }

    #[test]
    fn fkm_matches_canonicalization() {
        for p in 1..=14 {
            for r in 0..=p {
                assert_eq!(necklaces_fkm(p, r), necklaces_by_canonicalization(p, r), "p={p} r={r}");
            }
        }
    }

    #[test]
    fn fkm_orbits_complete_beyond_canonicalization() {
        for p in 15..=20 {
            for r in [0, 1, p / 3, p / 2, p] {
                let classes = necklaces(p, r).unwrap();
                let total: usize = classes.iter().map(|c| c.orbit_size).sum();
                assert_eq!(total as u128, binomial(p as u64, r as u64));
            }
        }
    }

    #[test]
    fn word_trace_examples() {
        let a = HermitianMatrix::diag(&[2.0, 1.0]).unwrap();
        let b = HermitianMatrix::identity(2).unwrap();
        let w: BinaryWord = "AB".parse().unwrap();
        assert_eq!(word_trace(&a, &b, &w).unwrap().re, 3.0);

        let mut rng = SeededStream::new(3);
        let a = random_hermitian(3, &mut rng).unwrap();
        let b = random_hermitian(3, &mut rng).unwrap();
        let v: Vec<Complex64> = ["AAB", "ABA", "BAA"]
            .iter()
            .map(|s| word_trace(&a, &b, &s.parse().unwrap()).unwrap())
            .collect();
        for x in &v[1..] {
            assert!((x - v[0]).norm() < 1e-12 * v[0].norm().max(1.0));
        }
        assert!("AXB".parse::<BinaryWord>().is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let a = HermitianMatrix::diag(&[2.0, 1.0]).unwrap();
        let b = HermitianMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert_eq!(coeff_bruteforce(&a, &b, 3, 1).unwrap(), 15.0);

        let mut rng = SeededStream::new(4);
        let a = random_hermitian(3, &mut rng).unwrap();
        let b = random_hermitian(3, &mut rng).unwrap();
        let two_tr_ab = 2.0 * a.matrix().trace_of_product(b.matrix()).re;
        assert!((coeff_bruteforce(&a, &b, 2, 1).unwrap() - two_tr_ab).abs() < 1e-12 * two_tr_ab.abs().max(1.0));
        assert!(matches!(coeff_bruteforce(&a, &b, 23, 1), Err(BmvError::OverCap { .. })));
        assert!(matches!(coeff_by_necklaces(&a, &b, 27, 1), Err(BmvError::OverCap { .. })));
    }

    #[test]
    fn necklace_coefficient_examples() {
        let id = HermitianMatrix::identity(2).unwrap();
        assert_eq!(coeff_by_necklaces(&id, &id, 6, 3).unwrap(), 40.0);
        let mut rng = SeededStream::new(5);
        let a = random_psd(3, 3, &mut rng, false).unwrap();
        let b = random_psd(3, 3, &mut rng, false).unwrap();
        let tr_a5: f64 = word_trace(&a, &b, &"AAAAA".parse().unwrap()).unwrap().re;
        assert!((coeff_by_necklaces(&a, &b, 5, 0).unwrap() - tr_a5).abs() < 1e-12 * tr_a5);
    }

    #[test]
    fn exact_oracles_agree() {
        let mut rng = SeededStream::new(6);
        let a = random_psd(3, 3, &mut rng, true).unwrap();
        let b = random_psd(3, 3, &mut rng, true).unwrap();
        let (ea, eb) = exact_pair(&a, &b).unwrap();
        let brute = coeff_bruteforce_exact(&ea, &eb, 8, 3).unwrap();
        let neck = coeff_by_necklaces_exact(&ea, &eb, 8, 3).unwrap();
        assert_eq!(brute, neck);
        let float = coeff_bruteforce(&a, &b, 8, 3).unwrap();
        assert!((rational_value(&brute) - float).abs() <= 1e-9 * float.abs());
    }

    #[test]
    fn min_term_commuting_case() {
        let a = HermitianMatrix::diag(&[1.0, 2.0, 0.5]).unwrap();
        let b = HermitianMatrix::diag(&[3.0, 0.25, 1.0]).unwrap();
        let (class, value) = min_term(&a, &b, 6, 3).unwrap();
        let expect: f64 = [(1.0f64, 3.0f64), (2.0, 0.25), (0.5, 1.0)]
            .iter()
            .map(|(x, y)| x.powi(3) * y.powi(3))
            .sum();
        assert!((value - expect).abs() < 1e-12 * expect);
        // all classes tie, so the lexicographically first wins
        assert_eq!(class.representative.to_string(), "AAABBB");
    }

    #[test]
    fn min_term_candidates_include_remark_word() {
        let classes = necklaces(6, 3).unwrap();
        assert!(classes.iter().any(|c| c.representative.to_string() == "AABBAB"));
    }

    #[test]
    fn word_gradient_matches_finite_differences() {
        let mut rng = SeededStream::new(7);
        let a = random_psd(3, 3, &mut rng, false).unwrap();
        let b = random_psd(3, 3, &mut rng, false).unwrap();
        let w: BinaryWord = "AABBAB".parse().unwrap();
        let g = word_trace_gradient(&a, &b, &w).unwrap();
        let f = |x: &HermitianMatrix, y: &HermitianMatrix| word_trace(x, y, &w).unwrap().re;
        for _ in 0..10 {
            let h = random_hermitian(3, &mut rng).unwrap();
            let eps = 1e-5;
            let fd = (f(&a.add_scaled(eps, &h).unwrap(), &b) - f(&a.add_scaled(-eps, &h).unwrap(), &b)) / (2.0 * eps);
            let an = g.grad_a.matrix().trace_of_product(h.matrix()).re;
            assert!((fd - an).abs() <= 1e-5 * an.abs().max(1.0));
            let fd = (f(&a, &b.add_scaled(eps, &h).unwrap()) - f(&a, &b.add_scaled(-eps, &h).unwrap())) / (2.0 * eps);
            let an = g.grad_b.matrix().trace_of_product(h.matrix()).re;
            assert!((fd - an).abs() <= 1e-5 * an.abs().max(1.0));
        }
    }

    #[test]
    fn csv_row_format() {
        let row = TermRow {
            p: 6,
            r: 3,
            representative: "AABBAB".parse().unwrap(),
            orbit_size: 6,
            value: -0.5,
            exact: Some(BigRational::new((-1).into(), 2.into())),
        };
        assert_eq!(row.to_csv_line(), "6,3,AABBAB,6,-5.0000000000000000e-1,-1,2");
    }
}
