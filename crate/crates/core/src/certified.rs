use num_complex::Complex;

use crate::scalar::Real;

/// A complex value with an absolute error bound on the quantity it stands for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedValue<T> {
    pub value: Complex<T>,
    pub abs_error: T,
}

impl<T: Real> CertifiedValue<T> {
    pub fn exact(value: Complex<T>) -> Self {
        Self { value, abs_error: T::zero() }
    }

    /// Whether `z` is consistent with this value.
    pub fn encloses(&self, z: Complex<T>) -> bool {
        (z - self.value).norm() <= self.abs_error
    }
}

/// Circle `|z - center| = radius` sampled at `samples` equally spaced points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contour<T> {
    pub center: Complex<T>,
    pub radius: T,
    pub samples: usize,
}

impl<T: Real> Contour<T> {
    pub fn around_puncture(k: u64, radius: T, samples: usize) -> Self {
        Self { center: Complex::new(T::from_index(k), T::zero()), radius, samples }
    }

    pub fn angle(&self, j: usize) -> T {
        T::TAU() * T::from_usize(j % self.samples).unwrap() / T::from_usize(self.samples).unwrap()
    }

    /// The `j`-th sample; index `samples` wraps back to the first point.
    pub fn point(&self, j: usize) -> Complex<T> {
        self.center + Complex::from_polar(self.radius, self.angle(j))
    }

    pub fn points(&self) -> Vec<Complex<T>> {
        (0..self.samples).map(|j| self.point(j)).collect()
    }
}

/// Integer winding number with the distance of the raw measurement from it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindingCertificate<T> {
    pub winding: i64,
    pub residual: T,
    pub contour: Contour<T>,
}

impl<T: Real> WindingCertificate<T> {
    pub const MAX_RESIDUAL: f64 = 0.25;

    pub fn is_valid(&self) -> bool {
        self.residual < T::lit(Self::MAX_RESIDUAL)
    }
}
