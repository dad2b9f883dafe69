//! Scalar numerics shared by the engines: reproducible summation,
//! binomials, the Gamma function, finite-difference derivatives and the
//! fixed-width decimal rendering used by every serialized report.

use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{Number, Value};

/// Pairwise (tree) summation in a fixed order. The result depends only on
/// the order of `values`, never on how they were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        len => {
            let mid = len / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Exact binomial coefficient; panics on overflow of `u128`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn factorial(k: u64) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(x)` for `x > 0` by the Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the series in its accurate range.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).abs().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn gamma(x: f64) -> f64 {
    if x.fract() == 0.0 && x > 0.0 && x <= 171.0 {
        return factorial(x as u64 - 1);
    }
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return pi / ((pi * x).sin() * gamma(1.0 - x));
    }
    ln_gamma(x).exp()
}

/// Result of a Richardson-extrapolated finite-difference derivative.
#[derive(Debug, Clone, Copy)]
pub struct FiniteDifference {
    pub value: f64,
    /// Estimated absolute error of `value`.
    pub error: f64,
}

/// `order`-th derivative of `f` at `x` from central differences with steps
/// `h, h/2, h/4, ...`, extrapolated in `h^2` (Ridders' tableau). The
/// entry with the smallest estimated error is returned.
pub fn richardson_derivative(f: impl Fn(f64) -> f64, x: f64, order: usize, h: f64) -> FiniteDifference {
    const LEVELS: usize = 10;
    const SHRINK: f64 = 1.6;
    let weights: Vec<f64> = (0..=order)
        .map(|k| {
            let b = binomial(order as u64, k as u64) as f64;
            if k % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .collect();
    let central = |step: f64| -> f64 {
        let half = order as f64 / 2.0;
        let mut acc = 0.0;
        for (k, w) in weights.iter().enumerate() {
            acc += w * f(x + (half - k as f64) * step);
        }
        acc / step.powi(order as i32)
    };
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(LEVELS);
    let mut best = FiniteDifference {
        value: f64::NAN,
        error: f64::INFINITY,
    };
    let mut step = h;
    for level in 0..LEVELS {
        let mut row = vec![central(step)];
        let mut fac = SHRINK * SHRINK;
        for j in 1..=level {
            let prev_row = &table[level - 1];
            let v = (row[j - 1] * fac - prev_row[j - 1]) / (fac - 1.0);
            fac *= SHRINK * SHRINK;
            let err = (v - row[j - 1]).abs().max((v - prev_row[j - 1]).abs());
            if err <= best.error {
                best = FiniteDifference { value: v, error: err };
            }
            row.push(v);
        }
        if level > 0 {
            let prev = &table[level - 1];
            if (row[level] - prev[level - 1]).abs() >= 2.0 * best.error {
                table.push(row);
                break;
            }
        }
        table.push(row);
        step /= SHRINK;
    }
    if !best.value.is_finite() {
        best = FiniteDifference {
            value: table[0][0],
            error: f64::INFINITY,
        };
    }
    best
}

/// [`richardson_derivative`] from each starting step, keeping the result
/// with the smallest estimated error. The tableau can stop early on a poor
/// starting step; a second start rarely does.
pub fn richardson_best(f: impl Fn(f64) -> f64, x: f64, order: usize, steps: &[f64]) -> FiniteDifference {
    steps
        .iter()
        .map(|&h| richardson_derivative(&f, x, order, h))
        .min_by(|p, q| p.error.total_cmp(&q.error))
        .unwrap_or(FiniteDifference {
            value: f64::NAN,
            error: f64::INFINITY,
        })
}

/// `order`-th derivative at real `x` of a function analytic on the disk
/// `|z - x| <= radius`, from `nodes` samples on its boundary circle:
/// `f^(r)(x) ≈ r!/(N ρ^r) Σ_k f(x + ρ ω^k) ω^{-kr}` with `ω = e^{2πi/N}`
/// (Lyness–Moler). The error decays like `(ρ/R)^N` for analyticity radius
/// `R`, and there is no `h^{-r}` cancellation as in real stencils.
pub fn contour_derivative(f: impl Fn(Complex64) -> Complex64, x: f64, order: usize, radius: f64, nodes: usize) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let w = Complex64::from_polar(1.0, theta);
        acc += f(x + w * radius) * Complex64::from_polar(1.0, -theta * order as f64);
    }
    factorial(order as u64) * acc.re / (nodes as f64 * radius.powi(order as i32))
}

/// Decimal rendering with 17 significant digits, the form used for every
/// floating-point value written to a report or matrix file.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        // keep the sign of negative zero out of reports
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

/// JSON number with 17 significant digits; non-finite values become `null`.
pub fn json_f64(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&fmt17(x)).expect("formatted float is a JSON number"))
}

/// JSON number from an arbitrary-size decimal integer string.
pub fn json_int_str(digits: &str) -> Value {
    Value::Number(Number::from_str(digits).expect("decimal integer is a JSON number"))
}
