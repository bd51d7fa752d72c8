//! Winding numbers about the punctures, the divisor map, and the
//! factorization of a map into a section and a nullhomotopic remainder.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certified::{Contour, WindingCertificate};
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::map::{ComplexMap, LogParts, Quotient, Section};
use crate::scalar::Real;

pub const DEFAULT_RADIUS: f64 = 0.3;
pub const DEFAULT_SAMPLES: usize = 256;
pub const MAX_SAMPLES: usize = 1 << 16;

/// A sample is treated as a zero when its modulus is below this fraction of
/// the larger of its two neighbors.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// Largest accepted argument change between consecutive samples. Principal
/// increments never exceed pi, so a smaller threshold is what makes
/// undersampling detectable.
pub const ALIAS_THRESHOLD: f64 = std::f64::consts::FRAC_PI_2;

/// Total argument increment (radians) around a closed loop, given the
/// multivalued part of a logarithm of the map at each sample (see
/// [`LogParts`]).
///
/// Working with logarithms keeps maps whose modulus under- or overflows
/// along the loop tractable.
pub fn argument_increment_from_logs<T: Real>(logs: &[Complex<T>]) -> Result<T> {
    let n = logs.len();
    if n < 3 {
        return Err(Error::InvalidArgument("a loop needs at least 3 samples".into()));
    }
    let dip = T::lit(ZERO_TOLERANCE.ln());
    for (j, l) in logs.iter().enumerate() {
        if l.re == T::neg_infinity() {
            return Err(Error::ContourThroughZero { modulus: 0.0 });
        }
        if !l.re.is_finite() || !l.im.is_finite() {
            return Err(Error::DegenerateInput("non-finite value on loop".into()));
        }
        let neighbors = logs[(j + n - 1) % n].re.max(logs[(j + 1) % n].re);
        if l.re < neighbors + dip {
            return Err(Error::ContourThroughZero { modulus: l.re.exp().to_f64_lossy() });
        }
    }

    let tau = T::TAU();
    let threshold = T::lit(ALIAS_THRESHOLD);
    let mut total = T::zero();
    for j in 0..n {
        let d = logs[(j + 1) % n].im - logs[j].im;
        let step = d - tau * (d / tau).round();
        if step.abs() >= threshold {
            return Err(Error::AliasedContour { jump: step.abs().to_f64_lossy(), samples: n });
        }
        total = total + step;
    }
    Ok(total)
}

/// Total argument increment (radians) around the closed loop of `values`.
pub fn argument_increment<T: Real>(values: &[Complex<T>]) -> Result<T> {
    let logs: Vec<Complex<T>> = values
        .iter()
        .map(|v| if v.is_zero() { Complex::new(T::neg_infinity(), T::zero()) } else { v.ln() })
        .collect();
    argument_increment_from_logs(&logs)
}

fn certificate<T: Real>(turns: T, contour: Contour<T>) -> WindingCertificate<T> {
    let winding = turns.round();
    WindingCertificate {
        winding: winding.to_i64().unwrap_or(0),
        residual: (turns - winding).abs(),
        contour,
    }
}

fn check_contour<T: Real>(contour: &Contour<T>) -> Result<()> {
    if !(contour.radius > T::zero() && contour.radius < T::lit(0.5)) {
        return Err(Error::InvalidArgument("contour radius must lie in (0, 1/2)".into()));
    }
    if contour.samples < 3 {
        return Err(Error::InvalidArgument("contour needs at least 3 samples".into()));
    }
    Ok(())
}

/// Winding number of `f` along `contour` by argument tracking.
pub fn winding_on<T: Real, M: ComplexMap<T> + ?Sized>(f: &M, contour: Contour<T>) -> Result<WindingCertificate<T>> {
    check_contour(&contour)?;
    let logs = (0..contour.samples).map(|j| f.log_parts(contour.point(j)).map(|l| l.multivalued)).collect::<Result<Vec<_>>>()?;
    let turns = argument_increment_from_logs(&logs)? / T::TAU();
    Ok(certificate(turns, contour))
}

/// Winding number of `f` about puncture `k` with a fixed sample count.
pub fn winding_number<T: Real, M: ComplexMap<T> + ?Sized>(
    f: &M,
    k: u64,
    radius: T,
    samples: usize,
) -> Result<WindingCertificate<T>> {
    winding_on(f, Contour::around_puncture(k, radius, samples))
}

/// As [`winding_number`], doubling the sample count on aliasing up to
/// [`MAX_SAMPLES`].
pub fn winding_number_auto<T: Real, M: ComplexMap<T> + ?Sized>(
    f: &M,
    k: u64,
    radius: T,
    samples: usize,
) -> Result<WindingCertificate<T>> {
    let mut n = samples;
    loop {
        match winding_number(f, k, radius, n) {
            Err(Error::AliasedContour { .. }) if n < MAX_SAMPLES => n = (2 * n).min(MAX_SAMPLES),
            other => return other,
        }
    }
}

/// Winding number from trapezoidal quadrature of `(1/2 pi i) \oint L(z) dz`,
/// where `L` is a logarithmic derivative.
pub fn winding_by_quadrature<T: Real, L>(log_derivative: L, contour: Contour<T>) -> Result<WindingCertificate<T>>
where
    L: Fn(Complex<T>) -> Result<Complex<T>>,
{
    check_contour(&contour)?;
    let mut sum = Complex::<T>::zero();
    for j in 0..contour.samples {
        let t = contour.angle(j);
        let z = contour.point(j);
        sum = sum + log_derivative(z)? * Complex::new(t.cos(), t.sin());
    }
    let integral = sum * contour.radius / T::from_usize(contour.samples).unwrap();
    let mut cert = certificate(integral.re, contour);
    cert.residual = cert.residual.hypot(integral.im);
    Ok(cert)
}

/// Quadrature winding of `f_nu` about `k` using its exact logarithmic derivative.
pub fn section_winding_by_quadrature<T: Real>(
    section: &Section,
    k: u64,
    radius: T,
    samples: usize,
) -> Result<WindingCertificate<T>> {
    winding_by_quadrature(|z| section.log_derivative(z), Contour::around_puncture(k, radius, samples))
}

fn checked<T: Real>(k: u64, r: Result<WindingCertificate<T>>) -> Result<WindingCertificate<T>> {
    let cert = r.map_err(|e| Error::AtPuncture { k, source: Box::new(e) })?;
    if !cert.is_valid() {
        return Err(Error::AtPuncture {
            k,
            source: Box::new(Error::DegenerateInput(format!("winding residual {:e} too large", cert.residual))),
        });
    }
    Ok(cert)
}

/// Winding certificates about punctures `1..=up_to`, ascending.
pub fn windings<T: Real, M: ComplexMap<T> + ?Sized>(f: &M, up_to: u64) -> Result<Vec<WindingCertificate<T>>> {
    let radius = T::lit(DEFAULT_RADIUS);
    (1..=up_to)
        .into_par_iter()
        .map(|k| checked(k, winding_number_auto(f, k, radius, DEFAULT_SAMPLES)))
        .collect()
}

/// The divisor map restricted to the window `1..=up_to`.
pub fn divisor_of<T: Real, M: ComplexMap<T> + ?Sized>(f: &M, up_to: u64) -> Result<Divisor> {
    let certs = windings(f, up_to)?;
    Divisor::from_pairs((1..=up_to).zip(certs.iter().map(|c| c.winding)))
}

/// `f = f_nu * remainder`, with `nu` the divisor of `f` on the window.
#[derive(Clone, Debug)]
pub struct Factorization<M> {
    pub divisor: Divisor,
    pub remainder: Quotient<M, Section>,
}

pub fn factor_map<T: Real, M: ComplexMap<T> + Clone>(f: &M, up_to: u64) -> Result<Factorization<M>> {
    let divisor = divisor_of(f, up_to)?;
    let remainder = Quotient(f.clone(), Section::new(divisor.clone()));
    Ok(Factorization { divisor, remainder })
}

/// Sampled closed circle.
pub fn circle_loop<T: Real>(center: Complex<T>, radius: T, samples: usize) -> Vec<Complex<T>> {
    Contour { center, radius, samples }.points()
}

/// Circles of radius `radius` about each puncture `1..=up_to`.
pub fn puncture_loops<T: Real>(up_to: u64, radius: T, samples: usize) -> Vec<Vec<Complex<T>>> {
    (1..=up_to).map(|k| Contour::around_puncture(k, radius, samples).points()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullhomotopyWitness {
    pub nullhomotopic: bool,
    /// Winding of the map along each loop.
    pub increments: Vec<i64>,
}

impl NullhomotopyWitness {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.increments).expect("integers serialize")
    }
}

/// Checks that a continuous logarithm of `g` exists along each sampled loop,
/// i.e. every loop has zero argument increment.
pub fn nullhomotopy_witness<T: Real, M: ComplexMap<T> + ?Sized>(g: &M, loops: &[Vec<Complex<T>>]) -> Result<NullhomotopyWitness> {
    let increments = loops
        .iter()
        .map(|l| {
            let logs = l.iter().map(|&z| g.log_parts(z).map(|l| l.multivalued)).collect::<Result<Vec<_>>>()?;
            let turns = argument_increment_from_logs(&logs)? / T::TAU();
            Ok(turns.round().to_i64().unwrap_or(0))
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(NullhomotopyWitness { nullhomotopic: increments.iter().all(|&i| i == 0), increments })
}

/// Trigonometric polynomial degree used for random perturbations.
pub const PERTURBATION_DEGREE: i32 = 8;

/// Random trigonometric polynomial in the contour angle.
#[derive(Clone, Debug)]
struct Perturbation<T> {
    coeffs: Vec<Complex<T>>,
    center: Complex<T>,
}

impl<T: Real> Perturbation<T> {
    fn random<R: Rng>(rng: &mut R, center: Complex<T>) -> Self {
        let coeffs = (-PERTURBATION_DEGREE..=PERTURBATION_DEGREE)
            .map(|_| Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
            .collect();
        Self { coeffs, center }
    }

    fn at_angle(&self, t: T) -> Complex<T> {
        let mut s = Complex::zero();
        for (c, j) in self.coeffs.iter().zip(-PERTURBATION_DEGREE..=PERTURBATION_DEGREE) {
            s = s + *c * Complex::from_polar(T::one(), t * T::from_i32(j).unwrap());
        }
        s
    }

    fn scale(&mut self, factor: T) {
        for c in &mut self.coeffs {
            *c = *c * factor;
        }
    }

    /// Upper bound on `sup |p|`: the sum of coefficient moduli.
    fn sup_bound(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |a, c| a + c.norm())
    }
}

/// `f + exp(log_scale) p`, evaluated as `f (1 + exp(log_scale) p / f)` so
/// that huge or tiny `|f|` stays representable.
struct Perturbed<'a, T, M: ?Sized> {
    f: &'a M,
    p: Perturbation<T>,
    log_scale: T,
}

impl<T: Real, M: ComplexMap<T> + ?Sized> ComplexMap<T> for Perturbed<'_, T, M> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.log_eval(z)?.exp())
    }

    fn log_parts(&self, z: Complex<T>) -> Result<LogParts<T>> {
        let lf = self.f.log_parts(z)?;
        let ratio = self.p.at_angle((z - self.p.center).arg()) * (Complex::from(self.log_scale) - lf.total()).exp();
        Ok(LogParts { holomorphic: lf.holomorphic, multivalued: lf.multivalued + (ratio + T::one()).ln() })
    }
}

/// Samples `trials` random perturbations `p` of `f` on the circle about `k`
/// with `sup |p| <= scale * min |f|` and reports whether the winding number
/// was unchanged for all of them.
pub fn rouche_stability<T: Real, M: ComplexMap<T> + ?Sized>(
    f: &M,
    k: u64,
    radius: T,
    scale: T,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    if !(scale > T::zero() && scale < T::one()) {
        return Err(Error::InvalidArgument("perturbation scale must lie in (0, 1)".into()));
    }
    let base = checked(k, winding_number_auto(f, k, radius, DEFAULT_SAMPLES))?;
    // Minimum over a contour sampled 4x finer than the certificate's.
    let fine = Contour::around_puncture(k, radius, 4 * base.contour.samples);
    let log_min = (0..fine.samples)
        .map(|j| f.log_eval(fine.point(j)).map(|v| v.re))
        .try_fold(T::infinity(), |a, r| r.map(|r| a.min(r)))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = Contour::<T>::around_puncture(k, radius, 1).center;
    for _ in 0..trials {
        let mut p = Perturbation::random(&mut rng, center);
        let bound = p.sup_bound();
        p.scale(scale / bound);
        let g = Perturbed { f, p, log_scale: log_min };
        let cert = checked(k, winding_number_auto(&g, k, radius, base.contour.samples))?;
        if cert.winding != base.winding {
            return Ok(false);
        }
    }
    Ok(true)
}
