//! Explicit Weierstrass-product sections of the divisor map on `C \ {1, 2, 3, ...}`.
//!
//! A divisor `nu` assigns an integer to each puncture `k >= 1`. The section
//! sends it to
//!
//! ```text
//! f_nu(z) = prod_{k >= 1} E_{m_k}(z/k)^{nu(k)},   m_k = k + ceil(ln |nu(k)|),
//! ```
//!
//! a meromorphic function whose winding number about each puncture `k` is
//! `nu(k)`. The crate evaluates `f_nu` with truncation certificates, computes
//! a modulus `k0(K, eps)` for the continuity of `nu -> f_nu` on a compact
//! region `K`, and recovers divisors from maps by argument tracking.
//!
//! Numerical routines are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64` or `f32`.

pub mod certified;
pub mod divisor;
pub mod error;
pub mod factors;
pub mod map;
pub mod phase;
pub mod region;
pub mod scalar;
pub mod section;
pub mod winding;

pub use certified::{CertifiedValue, Contour, WindingCertificate};
pub use divisor::{Divisor, DivisorSource, ProceduralDivisor};
pub use error::{Error, Result};
pub use factors::{log_derivative_term, log_weierstrass_factor, m_exponent, weierstrass_factor};
pub use map::{ComplexMap, LogParts, Product, Quotient, SampledMap, Section};
pub use region::{CompactRegion, Piece};
pub use scalar::Real;
pub use section::{
    continuity_modulus, evaluate, log_derivative, section_log_value, section_value, section_value_map, tail_bound, verify_continuity,
    ContinuityModulus, ContinuityReport, SectionEvaluation, ValueGrid,
};
pub use winding::{
    divisor_of, factor_map, nullhomotopy_witness, rouche_stability, winding_number, winding_number_auto,
    Factorization, NullhomotopyWitness,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;

pub type Region = CompactRegion<f64>;
pub type CertifiedValue64 = CertifiedValue<f64>;
pub type SectionEvaluation64 = SectionEvaluation<f64>;
pub type ContinuityModulus64 = ContinuityModulus<f64>;
pub type WindingCertificate64 = WindingCertificate<f64>;

pub type Region32 = CompactRegion<f32>;
pub type CertifiedValue32 = CertifiedValue<f32>;
pub type SectionEvaluation32 = SectionEvaluation<f32>;
pub type ContinuityModulus32 = ContinuityModulus<f32>;
pub type WindingCertificate32 = WindingCertificate<f32>;
