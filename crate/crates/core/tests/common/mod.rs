//! Independent reference computations for the integration tests. None of
//! these go through the library's evaluation paths.

#![allow(dead_code)]

use divsec::Divisor;
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `Log E_m(w)` without cancellation: the tail series `-sum_{j>m} w^j/j`
/// inside `|w| <= 0.9`, the defining sum outside.
pub fn log_factor_reference(m: u32, w: Complex64) -> Complex64 {
    if w.norm() <= 0.9 {
        let mut p = w.powu(m + 1);
        let mut s = Complex64::new(0.0, 0.0);
        let mut j = m as f64 + 1.0;
        loop {
            let term = p / j;
            s -= term;
            if term.norm() <= 1e-18 * s.norm().max(1e-300) {
                break;
            }
            p *= w;
            j += 1.0;
        }
        s
    } else {
        let mut s = (1.0 - w).ln();
        let mut p = Complex64::new(1.0, 0.0);
        for j in 1..=m {
            p *= w;
            s += p / j as f64;
        }
        s
    }
}

/// Central difference of `z -> n Log E_m(z/k)` with step `h` along `dir`.
pub fn central_difference(m: u32, n: i64, k: u64, z: Complex64, h: f64) -> Complex64 {
    let f = |z: Complex64| log_factor_reference(m, z / k as f64) * n as f64;
    let hp = f(z + h);
    let hm = f(z - h);
    (hp - hm) / (2.0 * h)
}

/// `1.5 * sum_{k = k0}^{last} e^{-(k+1)}` summed from the smallest term up.
pub fn tail_sum_brute(k0: u64, last: u64) -> f64 {
    1.5 * (k0..=last).rev().map(|k| (-((k + 1) as f64)).exp()).sum::<f64>()
}

/// `ceil(ln |n|)` by comparing against powers of e.
pub fn log_ceiling_reference(n: i64) -> u64 {
    let a = n.unsigned_abs() as f64;
    let mut j = 0u64;
    while (j as f64).exp() < a {
        j += 1;
    }
    j
}

/// Random divisor with support in `[1, max_k]` and `1 <= |nu(k)| <= max_abs`.
pub fn random_divisor<R: Rng>(rng: &mut R, max_k: u64, max_abs: i64, max_len: usize) -> Divisor {
    let len = rng.gen_range(0..=max_len);
    let mut d = Divisor::new();
    for _ in 0..len {
        let k = rng.gen_range(1..=max_k);
        let mut n = rng.gen_range(1..=max_abs);
        if rng.gen_bool(0.5) {
            n = -n;
        }
        d.set(k, n);
    }
    d
}

/// Deterministic pseudo-random integer sequence for procedural divisors.
pub fn splitmix(seed: u64, k: u64) -> u64 {
    let mut x = seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}
