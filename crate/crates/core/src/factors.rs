//! Weierstrass elementary factors `E_m(z) = (1 - z) exp(z + z^2/2 + ... + z^m/m)`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Powers above this are applied as `exp(n log E)` instead of repeated products.
pub const DIRECT_POWER_LIMIT: u64 = 8;

/// `z + z^2/2 + ... + z^m/m`, accumulated in ascending order.
pub fn partial_log_sum<T: Real>(m: u32, z: Complex<T>) -> Complex<T> {
    let mut sum = Complex::zero();
    let mut power = Complex::one();
    for j in 1..=m {
        power = power * z;
        sum = sum + power / T::from_u32(j).unwrap();
    }
    sum
}

pub fn weierstrass_factor<T: Real>(m: u32, z: Complex<T>) -> Complex<T> {
    let one = Complex::<T>::one();
    if m == 0 {
        return one - z;
    }
    (one - z) * partial_log_sum(m, z).exp()
}

/// `Log(1 - z) + z + ... + z^m/m` with the principal `Log`. This is a
/// logarithm of `E_m(z)` for every `z != 1`, and the principal one whenever
/// `|E_m(z) - 1| <= e^-2` with `|z| <= 1`, which is the regime of the tail
/// estimates.
pub fn log_weierstrass_factor<T: Real>(m: u32, z: Complex<T>) -> Result<Complex<T>> {
    if z == Complex::one() {
        return Err(Error::DegenerateInput("E_m has a zero at z = 1".into()));
    }
    Ok((Complex::<T>::one() - z).ln() + partial_log_sum(m, z))
}

/// Smallest nonnegative integer `j` with `j >= ln n`, i.e. `e^j >= n`, for `n >= 1`.
fn log_ceiling(n: u64) -> u64 {
    if n <= 1 {
        return 0;
    }
    let x = n as f64;
    let mut j = x.ln().ceil().max(0.0) as u64;
    // ln is not exact near the boundaries e^j; settle j against exp directly.
    while j > 0 && ((j - 1) as f64).exp() >= x {
        j -= 1;
    }
    while (j as f64).exp() < x {
        j += 1;
    }
    j
}

/// Exponent `k + ceil(ln |n|)` used for the factor at puncture `k` with
/// multiplicity `n`; it guarantees `|n| e^{-m} <= e^{-k}`. Multiplicity 0
/// gives `k` (that factor is never formed).
pub fn m_exponent(k: u64, nu_k: i64) -> u32 {
    assert!(k >= 1, "puncture index must be >= 1");
    u32::try_from(k + log_ceiling(nu_k.unsigned_abs())).expect("factor exponent fits in u32")
}

/// Logarithmic derivative of `z -> E_m(z/k)^n`, namely `(z/k)^m n / (z - k)`.
pub fn log_derivative_term<T: Real>(m: u32, n: i64, k: u64, z: Complex<T>) -> Result<Complex<T>> {
    if n == 0 {
        return Ok(Complex::zero());
    }
    let kk = T::from_index(k);
    let shifted = z - Complex::new(kk, T::zero());
    if shifted.is_zero() {
        return Err(Error::PoleAtEvaluationPoint { k });
    }
    Ok(powu(z / kk, m) * T::from_int(n) / shifted)
}

/// `E_m(w)^n` for the factor at puncture `k` (so `w = z/k`).
/// Negative powers are reciprocals; `w = 1` is a zero for `n > 0` and a pole
/// otherwise.
pub fn factor_power<T: Real>(m: u32, n: i64, k: u64, w: Complex<T>) -> Result<Complex<T>> {
    if n == 0 {
        return Ok(Complex::one());
    }
    if w == Complex::one() {
        return if n > 0 { Ok(Complex::zero()) } else { Err(Error::PoleAtEvaluationPoint { k }) };
    }
    if n.unsigned_abs() > DIRECT_POWER_LIMIT {
        let log = log_weierstrass_factor(m, w)?;
        return Ok((log * T::from_int(n)).exp());
    }
    let e = weierstrass_factor(m, w);
    let p = powu(e, n.unsigned_abs() as u32);
    Ok(if n > 0 { p } else { p.inv() })
}

/// `z^n` by repeated multiplication in ascending order.
pub(crate) fn powu<T: Real>(z: Complex<T>, n: u32) -> Complex<T> {
    let mut p = Complex::one();
    for _ in 0..n {
        p = p * z;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn factor_examples() {
        assert_eq!(weierstrass_factor(0, c(0.5, 0.0)), c(0.5, 0.0));
        for m in 0..12 {
            assert_eq!(weierstrass_factor(m, c(1.0, 0.0)), c(0.0, 0.0));
        }
        // 0.5 * e^0.5, evaluated at 40 digits.
        let e1 = weierstrass_factor(1, c(0.5, 0.0));
        assert_relative_eq!(e1.re, 0.824_360_635_350_064_1, max_relative = 1e-15);
        assert_eq!(e1.im, 0.0);
    }

    #[test]
    fn factor_single_precision() {
        let e1 = weierstrass_factor(1, Complex::new(0.5f32, 0.0));
        assert!((e1.re - 0.824_360_6).abs() < 1e-6);
    }

    #[test]
    fn log_factor_examples() {
        assert_eq!(log_weierstrass_factor(0, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let l = log_weierstrass_factor(3, c(0.2, 0.0)).unwrap();
        let e = weierstrass_factor(3, c(0.2, 0.0));
        assert!((l.exp() - e).norm() < 1e-15);
        assert!(matches!(log_weierstrass_factor(4, c(1.0, 0.0)), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn log_factor_small_argument_bound() {
        // |Log(1+w)| <= 1.5|w| for |w| <= 1/2, and |E_5(z) - 1| <= |z|^6.
        let r = (-1.0f64).exp();
        for i in 0..400 {
            let z = Complex::from_polar(r * (i % 20) as f64 / 19.0, i as f64 * 0.731);
            let l = log_weierstrass_factor(5, z).unwrap();
            assert!(l.norm() <= 1.5 * z.norm().powi(6) + 1e-17, "{z}");
        }
    }

    #[test]
    fn m_exponent_examples() {
        assert_eq!(m_exponent(3, 1), 3);
        assert_eq!(m_exponent(2, 10), 5);
        assert_eq!(m_exponent(4, -5), 6);
        assert_eq!(m_exponent(7, 0), 7u32);
        // e^1 < 3 < e^2 and 20 < e^3 < 21
        assert_eq!(m_exponent(1, 2), 2);
        assert_eq!(m_exponent(1, 3), 3);
        assert_eq!(m_exponent(1, 20), 4);
        assert_eq!(m_exponent(1, 21), 5);
    }

    #[test]
    fn key_inequality_exhaustive() {
        // |n| e^{-m} <= e^{-k}  <=>  |n| <= e^{m - k}
        let mut n = 1u64;
        let mut prev = 0;
        while n <= 1_000_000 {
            let j = log_ceiling(n);
            assert!(j >= prev);
            prev = j;
            assert!((n as f64) <= (j as f64).exp() * (1.0 + 1e-15));
            assert!(j == 0 || (n as f64) > ((j - 1) as f64).exp());
            n += 1;
        }
        for k in 1..=30u64 {
            for n in [-1_000_000i64, -999_999, -20, -3, -1, 0, 1, 2, 7, 403, 1_000_000] {
                let m = m_exponent(k, n);
                assert!((n.unsigned_abs() as f64) * (-(m as f64)).exp() <= (-(k as f64)).exp() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn log_derivative_term_examples() {
        assert_eq!(log_derivative_term(0, 1, 1, c(0.0, 0.0)).unwrap(), c(-1.0, 0.0));
        assert_eq!(log_derivative_term(4, 0, 3, c(0.3, 2.0)).unwrap(), c(0.0, 0.0));
        assert_relative_eq!(log_derivative_term(2, 3, 2, c(1.0, 0.0)).unwrap().re, -0.75);
        assert_eq!(log_derivative_term(2, 3, 2, c(2.0, 0.0)), Err(Error::PoleAtEvaluationPoint { k: 2 }));
    }

    #[test]
    fn log_derivative_term_matches_complex_step() {
        // For real z and real-valued E, Im(log E(x + ih))/h ~ d/dx log E.
        let (m, n, k) = (2u32, 3i64, 2u64);
        let x = 1.0;
        let h = 1e-20;
        let w = c(x, h) / k as f64;
        let lg = log_weierstrass_factor(m, w).unwrap() * n as f64;
        assert_relative_eq!(lg.im / h, -0.75, max_relative = 1e-12);
    }

    #[test]
    fn factor_power_branches_agree() {
        for &(m, k, w) in &[(3u32, 2u64, c(0.3, 0.2)), (6, 5, c(-0.4, 0.1)), (1, 1, c(0.9, -0.3))] {
            let e = weierstrass_factor(m, w);
            for n in [-12i64, -9, -3, -1, 1, 4, 9, 15] {
                let direct = if n > 0 { powu(e, n as u32) } else { powu(e, (-n) as u32).inv() };
                let got = factor_power(m, n, k, w).unwrap();
                assert!((got - direct).norm() <= 1e-12 * direct.norm(), "m={m} n={n}");
            }
        }
        assert_eq!(factor_power(3, 2, 4, c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(factor_power(3, -20, 4, c(1.0, 0.0)), Err(Error::PoleAtEvaluationPoint { k: 4 }));
    }

    proptest! {
        #[test]
        fn basic_estimate(m in 0u32..=20, r in 0.0f64..=1.0, t in 0.0f64..std::f64::consts::TAU) {
            let z = Complex::from_polar(r, t);
            let lhs = (weierstrass_factor(m, z) - 1.0).norm();
            prop_assert!(lhs <= r.powi(m as i32 + 1) + 1e-12);
        }

        #[test]
        fn exp_log_round_trip(m in 0u32..=20, r in 0.0f64..=0.9, t in 0.0f64..std::f64::consts::TAU) {
            let z = Complex::from_polar(r, t);
            let e = weierstrass_factor(m, z);
            let l = log_weierstrass_factor(m, z).unwrap();
            prop_assert!((l.exp() - e).norm() <= 1e-10 * (1.0 + e.norm()));
        }

        #[test]
        fn m_exponent_monotone(k in 1u64..100, a in -100_000i64..100_000, b in -100_000i64..100_000) {
            let (lo, hi) = if a.unsigned_abs() <= b.unsigned_abs() { (a, b) } else { (b, a) };
            prop_assert!(m_exponent(k, lo) <= m_exponent(k, hi));
            if a.unsigned_abs() <= 1 {
                prop_assert_eq!(m_exponent(k, a) as u64, k);
            }
        }
    }
}
