//! Matrix exponential of general complex matrices by scaling and squaring
//! with the degree-13 Padé approximant (Higham 2005, Algorithm 2.3).

use super::cmatrix::CMatrix;

const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    if n == 0 {
        return CMatrix::zeros(0);
    }
    let norm = a.norm1();
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(squarings));
    let b = &PADE_13;
    let id = CMatrix::identity(n);
    let a2 = scaled.matmul(&scaled);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let mut inner_u = a6.scale(b[13]);
    inner_u.axpy(b[11], &a4);
    inner_u.axpy(b[9], &a2);
    let mut u = a6.matmul(&inner_u);
    u.axpy(b[7], &a6);
    u.axpy(b[5], &a4);
    u.axpy(b[3], &a2);
    u.axpy(b[1], &id);
    let u = scaled.matmul(&u);

    let mut inner_v = a6.scale(b[12]);
    inner_v.axpy(b[10], &a4);
    inner_v.axpy(b[8], &a2);
    let mut v = a6.matmul(&inner_v);
    v.axpy(b[6], &a6);
    v.axpy(b[4], &a4);
    v.axpy(b[2], &a2);
    v.axpy(b[0], &id);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .solve(&p)
        .expect("Padé denominator is nonsingular after scaling");
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    r
}
