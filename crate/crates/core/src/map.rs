//! Complex-valued maps that winding analysis can sample.

use num_complex::Complex;
use num_traits::Zero;

use crate::divisor::Divisor;
use crate::error::Result;
use crate::scalar::Real;
use crate::section::{log_derivative, section_log_parts, section_value};

/// A logarithm of `f(z)` written as `holomorphic + multivalued`.
///
/// `holomorphic` must be the value at `z` of a single-valued holomorphic
/// function on the domain of `f`; it contributes nothing to the winding of
/// `f` along any closed loop. `multivalued` carries the rest, on any sheet.
/// A zero of `f` shows up as `multivalued.re == -inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogParts<T> {
    pub holomorphic: Complex<T>,
    pub multivalued: Complex<T>,
}

impl<T: Real> LogParts<T> {
    pub fn total(&self) -> Complex<T> {
        self.holomorphic + self.multivalued
    }
}

pub trait ComplexMap<T: Real>: Sync {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>>;

    /// Defaults to `Log f(z)` with nothing split off. Maps whose values
    /// overflow, or whose argument turns fast through a holomorphic factor,
    /// should compute the parts directly.
    fn log_parts(&self, z: Complex<T>) -> Result<LogParts<T>> {
        let v = self.eval(z)?;
        let multivalued = if v.is_zero() { Complex::new(T::neg_infinity(), T::zero()) } else { v.ln() };
        Ok(LogParts { holomorphic: Complex::zero(), multivalued })
    }

    /// A logarithm of `f(z)`; real part `ln |f(z)|`.
    fn log_eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.log_parts(z)?.total())
    }
}

impl<T: Real, F> ComplexMap<T> for F
where
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self(z))
    }
}

/// `f_nu` for a finitely supported divisor.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub divisor: Divisor,
}

impl Section {
    pub fn new(divisor: Divisor) -> Self {
        Self { divisor }
    }

    pub fn log_derivative<T: Real>(&self, z: Complex<T>) -> Result<Complex<T>> {
        log_derivative(&self.divisor, z)
    }
}

impl<T: Real> ComplexMap<T> for Section {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        section_value(&self.divisor, z)
    }

    fn log_parts(&self, z: Complex<T>) -> Result<LogParts<T>> {
        section_log_parts(&self.divisor, z)
    }
}

/// Pointwise product.
#[derive(Clone, Debug)]
pub struct Product<A, B>(pub A, pub B);

impl<T: Real, A: ComplexMap<T>, B: ComplexMap<T>> ComplexMap<T> for Product<A, B> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.0.eval(z)? * self.1.eval(z)?)
    }

    fn log_parts(&self, z: Complex<T>) -> Result<LogParts<T>> {
        let (a, b) = (self.0.log_parts(z)?, self.1.log_parts(z)?);
        Ok(LogParts { holomorphic: a.holomorphic + b.holomorphic, multivalued: a.multivalued + b.multivalued })
    }
}

/// Pointwise quotient `A / B`.
#[derive(Clone, Debug)]
pub struct Quotient<A, B>(pub A, pub B);

impl<T: Real, A: ComplexMap<T>, B: ComplexMap<T>> ComplexMap<T> for Quotient<A, B> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.0.eval(z)? / self.1.eval(z)?)
    }

    fn log_parts(&self, z: Complex<T>) -> Result<LogParts<T>> {
        let (a, b) = (self.0.log_parts(z)?, self.1.log_parts(z)?);
        Ok(LogParts { holomorphic: a.holomorphic - b.holomorphic, multivalued: a.multivalued - b.multivalued })
    }
}

/// Stored samples `z_j -> f(z_j)` of a map into the punctured plane.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledMap<T> {
    pub points: Vec<Complex<T>>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> SampledMap<T> {
    pub fn sample<M: ComplexMap<T> + ?Sized>(f: &M, points: Vec<Complex<T>>) -> Result<Self> {
        let values = points.iter().map(|&z| f.eval(z)).collect::<Result<Vec<_>>>()?;
        Ok(Self { points, values })
    }

    /// Whether every stored value is finite and nonzero.
    pub fn is_nonvanishing(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite() && v.norm() > T::zero())
    }
}
