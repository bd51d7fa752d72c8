//! The section `nu -> f_nu`, where `f_nu(z) = prod_k E_{m_k}(z/k)^{nu(k)}` and
//! `m_k = k + ceil(ln |nu(k)|)`.
//!
//! For `k >= e|z|` each factor satisfies `|Log E_{m_k}(z/k)| <= 1.5 e^{-(m_k+1)}`,
//! and `|nu(k)| e^{-m_k} <= e^{-k}`, so the tail of the product from `k0` on has
//! a logarithm bounded by [`tail_bound`]`(k0)` whatever the multiplicities are.
//! Truncation certificates and the continuity modulus are both built on that.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certified::CertifiedValue;
use crate::divisor::{Divisor, DivisorSource};
use crate::error::{Error, Result};
use crate::factors::{factor_power, log_derivative_term, m_exponent, partial_log_sum};
use crate::map::LogParts;
use crate::region::CompactRegion;
use crate::scalar::Real;

/// Closed form of `1.5 * sum_{k >= k0} e^{-(k+1)}`.
pub fn tail_bound<T: Real>(k0: u64) -> T {
    let e_inv = (-T::one()).exp();
    T::lit(1.5) * (-T::from_index(k0 + 1)).exp() / (T::one() - e_inv)
}

/// Smallest `k` with `k >= e|z|`; the tail estimate applies from there on.
pub fn tail_start<T: Real>(z: Complex<T>) -> u64 {
    (T::E() * z.norm()).ceil().to_u64().unwrap_or(u64::MAX).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectionEvaluation<T> {
    pub value: CertifiedValue<T>,
    /// Last puncture whose factor was multiplied in.
    pub head_cutoff: u64,
    /// Bound on `|Log|` of the omitted tail product; zero when nothing was omitted.
    pub tail_log_bound: T,
}

impl<T: Real> SectionEvaluation<T> {
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "value": [self.value.value.re.to_f64_lossy(), self.value.value.im.to_f64_lossy()],
            "abs_error": self.value.abs_error.to_f64_lossy(),
            "head": self.head_cutoff,
        })
        .to_string()
    }
}

/// `sum_{j<=m} |w|^j / j`, the size of the exponent inside `E_m(w)`.
fn exponent_size<T: Real>(m: u32, w: T) -> T {
    let mut s = T::zero();
    let mut p = T::one();
    for j in 1..=m {
        p = p * w;
        s = s + p / T::from_u32(j).unwrap();
    }
    s
}

/// Product of the factors at punctures `1..=head`, with a certificate for the
/// omitted tail.
///
/// If `nu` is finitely supported and `head` covers the support, nothing is
/// omitted. Otherwise `head >= e|z|` is required so the tail estimate holds.
/// The reported error also carries a floating-point rounding allowance for the
/// factors that were multiplied in.
pub fn evaluate<T: Real, D: DivisorSource + ?Sized>(nu: &D, z: Complex<T>, head: u64) -> Result<SectionEvaluation<T>> {
    if head == 0 {
        return Err(Error::InvalidArgument("head must be >= 1".into()));
    }
    let complete = nu.support_bound().is_some_and(|b| head >= b);
    if !complete && T::from_index(head) < T::E() * z.norm() {
        return Err(Error::InvalidHead { head, required: tail_start(z) });
    }

    let mut value = Complex::<T>::one();
    let mut log_modulus = T::zero();
    let mut exact_zero = false;
    let mut rounding = T::zero();
    for k in 1..=head {
        let n = nu.multiplicity(k);
        if n == 0 {
            continue;
        }
        let m = m_exponent(k, n);
        let w = z / T::from_index(k);
        let factor = factor_power(m, n, k, w)?;
        if w == Complex::one() {
            exact_zero = true;
        } else {
            let e_mod = (Complex::<T>::one() - w).norm().ln() + partial_log_sum(m, w).re;
            log_modulus = log_modulus + T::from_int(n) * e_mod;
        }
        value = value * factor;
        let n_abs = T::from_u64(n.unsigned_abs()).unwrap();
        rounding = rounding + n_abs * (exponent_size(m, w.norm()) + T::lit(4.0)) + T::lit(4.0);
    }

    let tail_log_bound = if complete { T::zero() } else { tail_bound(head + 1) };
    let modulus = value.norm();
    let mut abs_error = modulus * tail_log_bound.exp_m1() + modulus * rounding * T::epsilon();
    if !exact_zero {
        let floor = T::min_positive_value().ln();
        let unrepresentable = !modulus.is_finite()
            || log_modulus > T::max_value().ln()
            || (modulus.is_zero() && log_modulus > floor + T::lit(8.0));
        if unrepresentable {
            return Err(Error::Unrepresentable { log_modulus: log_modulus.to_f64_lossy() });
        }
        if modulus.is_zero() {
            // Underflow: the true value is below the smallest normal number.
            abs_error = T::min_positive_value();
        }
    }
    Ok(SectionEvaluation {
        value: CertifiedValue { value, abs_error },
        head_cutoff: head,
        tail_log_bound,
    })
}

/// `f_nu(z)` for a finitely supported divisor.
pub fn section_value<T: Real>(nu: &Divisor, z: Complex<T>) -> Result<Complex<T>> {
    Ok(evaluate(nu, z, nu.max_index().unwrap_or(1))?.value.value)
}

/// Logarithm of `f_nu(z)` split as `holomorphic + multivalued`, where
/// `holomorphic = sum n (w + ... + w^m/m)` is a polynomial in `z` and
/// `multivalued = sum n Log(1 - w)` (principal `Log`), `w = z/k`.
///
/// The split keeps the winding computation cheap: the polynomial part has
/// zero increment around every closed loop however fast it turns, so only
/// the multivalued part needs unwrapping. At a zero the multivalued real
/// part is `-inf`.
pub fn section_log_parts<T: Real>(nu: &Divisor, z: Complex<T>) -> Result<LogParts<T>> {
    let mut holomorphic = Complex::<T>::zero();
    let mut multivalued = Complex::<T>::zero();
    for (k, n) in nu.iter() {
        let w = z / T::from_index(k);
        let nn = T::from_int(n);
        if w == Complex::one() {
            if n < 0 {
                return Err(Error::PoleAtEvaluationPoint { k });
            }
            multivalued = Complex::new(T::neg_infinity(), T::zero());
            continue;
        }
        holomorphic = holomorphic + partial_log_sum(m_exponent(k, n), w) * nn;
        multivalued = multivalued + (Complex::<T>::one() - w).ln() * nn;
    }
    Ok(LogParts { holomorphic, multivalued })
}

/// `holomorphic + multivalued` from [`section_log_parts`]: real part
/// `ln |f_nu(z)|`, finite where `f_nu` itself overflows.
pub fn section_log_value<T: Real>(nu: &Divisor, z: Complex<T>) -> Result<Complex<T>> {
    Ok(section_log_parts(nu, z)?.total())
}

/// `f_nu'(z) / f_nu(z)`, summed termwise over the support.
pub fn log_derivative<T: Real>(nu: &Divisor, z: Complex<T>) -> Result<Complex<T>> {
    let mut sum = Complex::zero();
    for (k, n) in nu.iter() {
        sum = sum + log_derivative_term(m_exponent(k, n), n, k, z)?;
    }
    Ok(sum)
}

/// A `k0` such that every divisor agreeing with `nu` below `k0` has a section
/// within `epsilon` of `f_nu` on `region`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityModulus<T> {
    pub k0: u64,
    /// Bound for every partial product of `f_nu` on the region.
    pub c: T,
    pub epsilon: T,
    pub region: CompactRegion<T>,
}

impl<T: Real> ContinuityModulus<T> {
    /// `2c (exp(tail_bound(k0)) - 1)`, the certified deviation bound.
    pub fn certified_deviation(&self) -> T {
        Self::deviation_for(self.c, self.k0)
    }

    fn deviation_for(c: T, k0: u64) -> T {
        T::lit(2.0) * c * tail_bound::<T>(k0).exp_m1()
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "k0": self.k0,
            "c": self.c.to_f64_lossy(),
            "eps": self.epsilon.to_f64_lossy(),
        })
        .to_string()
    }
}

/// Running maximum of `|P_n(z)|` over the partial products `P_n` of `f_nu`.
fn max_partial_product<T: Real>(nu: &Divisor, z: Complex<T>) -> Result<T> {
    let mut p = Complex::<T>::one();
    let mut best = T::one();
    for (k, n) in nu.iter() {
        p = p * factor_power(m_exponent(k, n), n, k, z / T::from_index(k))?;
        best = best.max(p.norm());
    }
    Ok(best)
}

fn max_over<T: Real>(nu: &Divisor, points: &[Complex<T>]) -> Result<T> {
    points
        .par_iter()
        .map(|&z| max_partial_product(nu, z))
        .try_reduce(|| T::one(), |a, b| Ok(a.max(b)))
}

/// Upper bound for `sup_K |P_n|` over all partial products.
///
/// Samples the `h`-neighborhood of the region on a grid of spacing `h`, so
/// each point of the region is within `h` of a sample, and adds `h M'`, where
/// `M'` bounds `|P_n'|` by Cauchy's estimate on disks of radius `r`. The sup
/// over the `(h + r)`-neighborhood that the Cauchy estimate needs is itself
/// sampled on a grid of spacing `h/2` and doubled.
pub fn partial_product_bound<T: Real>(nu: &Divisor, region: &CompactRegion<T>) -> Result<T> {
    if nu.is_empty() {
        return Ok(T::one());
    }
    let half = T::lit(0.5);
    let mut r = half;
    let mut poles = Vec::new();
    for (k, _) in nu.iter().filter(|&(_, n)| n < 0) {
        let d = region.clearance_to(k);
        if d <= T::zero() {
            return Err(Error::RegionMeetsPole { k });
        }
        poles.push((Complex::new(T::from_index(k), T::zero()), d));
        r = r.min(d * half);
    }
    let (lo, hi) = region.bounding_box();
    let extent = (hi.re - lo.re).max(hi.im - lo.im);
    let mut h = r / T::lit(4.0);
    if extent > T::zero() {
        h = h.min(extent / T::lit(32.0));
    }

    let avoid = |delta: T| -> Vec<(Complex<T>, T)> { poles.iter().map(|&(c, d)| (c, d - delta)).collect() };
    let near = region.neighborhood_grid(h, h, &avoid(h));
    let sampled = max_over(nu, &near)?;
    let wide = region.neighborhood_grid(h * half, h + r, &avoid(h + r));
    let cauchy = T::lit(2.0) * max_over(nu, &wide)? / r;
    Ok(sampled + h * cauchy)
}

/// Smallest admissible `k0` for the given tolerance.
///
/// `k0` exceeds the support of `nu` and satisfies `k0 >= e sup_K |z|`; then
/// for `mu` agreeing with `nu` below `k0`,
/// `|f_mu - f_nu| <= |P| (|f_mu~ - 1| + |f_nu~ - 1|) <= 2c (exp(tail_bound(k0)) - 1)`
/// on the region, where `mu~`, `nu~` are the parts from `k0` on.
pub fn continuity_modulus<T: Real>(nu: &Divisor, region: &CompactRegion<T>, epsilon: T) -> Result<ContinuityModulus<T>> {
    if epsilon.is_nan() || epsilon <= T::zero() || !epsilon.is_finite() {
        return Err(Error::InvalidArgument("epsilon must be positive and finite".into()));
    }
    let c = partial_product_bound(nu, region)?;
    if !c.is_finite() {
        return Err(Error::DegenerateRegion("partial products are unbounded on the region".into()));
    }
    let reach = (T::E() * region.max_modulus()).ceil().to_u64().unwrap_or(u64::MAX);
    let mut k0 = reach.max(nu.max_index().unwrap_or(0) + 1).max(1);
    while ContinuityModulus::deviation_for(c, k0) > epsilon {
        k0 += 1;
    }
    Ok(ContinuityModulus { k0, c, epsilon, region: region.clone() })
}

/// Values of a section on a uniform grid over a region.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueGrid<T> {
    pub step: T,
    pub points: Vec<Complex<T>>,
    /// `None` marks a pole.
    pub values: Vec<Option<Complex<T>>>,
}

/// `f_nu` on `region.grid(step)`. Points are evaluated independently, so the
/// parallel result is identical to the sequential one.
pub fn section_value_map<T: Real>(nu: &Divisor, region: &CompactRegion<T>, step: T) -> ValueGrid<T> {
    let points = region.grid(step);
    let values = points.par_iter().map(|&z| section_value(nu, z).ok()).collect();
    ValueGrid { step, points, values }
}

/// Outcome of the randomized continuity check.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityReport<T> {
    pub modulus: ContinuityModulus<T>,
    pub trials: usize,
    pub seed: u64,
    pub grid_points: usize,
    pub max_deviation: T,
}

impl<T: Real> ContinuityReport<T> {
    pub fn passed(&self) -> bool {
        self.max_deviation < self.modulus.epsilon
    }

    pub fn render(&self) -> String {
        format!(
            "k0 = {}\nc = {:.17e}\neps = {:.17e}\ncertified_bound = {:.17e}\ntrials = {}\nseed = {}\ngrid_points = {}\nmax_deviation = {:.17e}\n{}\n",
            self.modulus.k0,
            self.modulus.c.to_f64_lossy(),
            self.modulus.epsilon.to_f64_lossy(),
            self.modulus.certified_deviation().to_f64_lossy(),
            self.trials,
            self.seed,
            self.grid_points,
            self.max_deviation.to_f64_lossy(),
            if self.passed() { "PASS" } else { "FAIL" },
        )
    }
}

/// Grid spacing used by [`verify_continuity`].
pub const VERIFY_GRID_STEP: f64 = 0.05;

/// Number of random tail entries `mu(k0), ..., mu(k0 + TAIL_LEN - 1)`.
const TAIL_LEN: u64 = 12;

/// Random divisor agreeing with `nu` below `k0`, with large tail multiplicities.
pub fn random_tail_variant<R: Rng>(nu: &Divisor, k0: u64, rng: &mut R) -> Divisor {
    let mut mu = nu.window(k0 - 1);
    for k in k0..k0 + TAIL_LEN {
        let n = match rng.gen_range(0..4) {
            0 => 0,
            1 => rng.gen_range(-3..=3),
            2 => rng.gen_range(-1_000..=1_000),
            _ => rng.gen_range(-1_000_000..=1_000_000),
        };
        mu.set(k, n);
    }
    mu
}

/// Draws `trials` divisors agreeing with `nu` below the computed `k0` and
/// measures the largest `|f_mu - f_nu|` over a grid on the region.
pub fn verify_continuity<T: Real>(
    nu: &Divisor,
    region: &CompactRegion<T>,
    epsilon: T,
    trials: usize,
    seed: u64,
) -> Result<ContinuityReport<T>> {
    let modulus = continuity_modulus(nu, region, epsilon)?;
    let points = region.grid(T::lit(VERIFY_GRID_STEP));
    let base = points.iter().map(|&z| section_value(nu, z)).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation = T::zero();
    for _ in 0..trials {
        let mu = random_tail_variant(nu, modulus.k0, &mut rng);
        let dev = points
            .par_iter()
            .zip(base.par_iter())
            .map(|(&z, &fz)| section_value(&mu, z).map(|g| (g - fz).norm()))
            .try_reduce(|| T::zero(), |a, b| Ok(a.max(b)))?;
        max_deviation = max_deviation.max(dev);
    }
    Ok(ContinuityReport { modulus, trials, seed, grid_points: points.len(), max_deviation })
}
