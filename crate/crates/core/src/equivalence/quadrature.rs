//! Generalized Gauss–Laguerre rules by the Golub–Welsch method.

use crate::numeric::gamma;

/// Nodes `x_k` and weights `w_k` with `∫_0^∞ x^α e^{-x} g(x) dx ≈ Σ w_k g(x_k)`.
#[derive(Debug, Clone)]
pub struct LaguerreRule {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Builds the `count`-point rule for weight `x^alpha e^{-x}`, `alpha > -1`.
pub fn gauss_laguerre(count: usize, alpha: f64) -> LaguerreRule {
    assert!(count >= 1, "a quadrature rule needs at least one node");
    assert!(alpha > -1.0, "Laguerre weight requires alpha > -1");
    // Jacobi matrix of the monic generalized Laguerre recurrence.
    let mut diag: Vec<f64> = (0..count).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let mut off: Vec<f64> = (0..count)
        .map(|k| if k == 0 { 0.0 } else { (k as f64 * (k as f64 + alpha)).sqrt() })
        .collect();
    // first components of the eigenvectors
    let mut first = vec![0.0; count];
    first[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first);
    let mu0 = gamma(alpha + 1.0);
    let mut pairs: Vec<(f64, f64)> = diag.into_iter().zip(first).map(|(x, v)| (x, mu0 * v * v)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    LaguerreRule {
        alpha,
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Implicit QL for a symmetric tridiagonal matrix (`d` diagonal, `e[1..]`
/// subdiagonal). On return `d` holds eigenvalues and `z` the first row of
/// the eigenvector matrix, given `z = e_1` on entry.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    let n = d.len();
    if n == 1 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 60, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}
