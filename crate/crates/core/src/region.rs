//! Compact regions built from closed disks and rectangles.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece<T> {
    Disk { center: Complex<T>, radius: T },
    /// Axis-aligned rectangle with corners `lo` (min re, min im) and `hi`.
    Rect { lo: Complex<T>, hi: Complex<T> },
}

impl<T: Real> Piece<T> {
    pub fn disk(center: Complex<T>, radius: T) -> Self {
        Piece::Disk { center, radius }
    }

    pub fn rect(lo: Complex<T>, hi: Complex<T>) -> Self {
        Piece::Rect { lo, hi }
    }

    fn validate(&self) -> Result<()> {
        let finite = |z: Complex<T>| z.re.is_finite() && z.im.is_finite();
        match *self {
            Piece::Disk { center, radius } => {
                if !finite(center) || !radius.is_finite() || radius <= T::zero() {
                    return Err(Error::DegenerateRegion("disk needs a finite center and positive radius".into()));
                }
            }
            Piece::Rect { lo, hi } => {
                if !finite(lo) || !finite(hi) || lo.re > hi.re || lo.im > hi.im {
                    return Err(Error::DegenerateRegion("rectangle needs finite corners with lo <= hi".into()));
                }
            }
        }
        Ok(())
    }

    pub fn max_modulus(&self) -> T {
        match *self {
            Piece::Disk { center, radius } => center.norm() + radius,
            Piece::Rect { lo, hi } => {
                let x = lo.re.abs().max(hi.re.abs());
                let y = lo.im.abs().max(hi.im.abs());
                x.hypot(y)
            }
        }
    }

    /// Euclidean distance from `z` to the piece (zero inside).
    pub fn distance(&self, z: Complex<T>) -> T {
        match *self {
            Piece::Disk { center, radius } => ((z - center).norm() - radius).max(T::zero()),
            Piece::Rect { lo, hi } => {
                let dx = (lo.re - z.re).max(z.re - hi.re).max(T::zero());
                let dy = (lo.im - z.im).max(z.im - hi.im).max(T::zero());
                dx.hypot(dy)
            }
        }
    }

    fn bounding_box(&self) -> (Complex<T>, Complex<T>) {
        match *self {
            Piece::Disk { center, radius } => {
                let r = Complex::new(radius, radius);
                (center - r, center + r)
            }
            Piece::Rect { lo, hi } => (lo, hi),
        }
    }
}

/// A finite union of closed disks and rectangles, optionally with the open
/// disks of radius `puncture_margin` about every positive integer removed.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactRegion<T> {
    pieces: Vec<Piece<T>>,
    puncture_margin: Option<T>,
}

impl<T: Real> CompactRegion<T> {
    pub fn new(pieces: Vec<Piece<T>>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::DegenerateRegion("region has no pieces".into()));
        }
        for p in &pieces {
            p.validate()?;
        }
        Ok(Self { pieces, puncture_margin: None })
    }

    pub fn disk(center: Complex<T>, radius: T) -> Result<Self> {
        Self::new(vec![Piece::disk(center, radius)])
    }

    pub fn rect(lo: Complex<T>, hi: Complex<T>) -> Result<Self> {
        Self::new(vec![Piece::rect(lo, hi)])
    }

    /// Removes the open disks `|z - k| < margin`, `k = 1, 2, ...`.
    /// Requires `0 < margin < 1/2` so the removed disks are disjoint.
    pub fn with_puncture_margin(mut self, margin: T) -> Result<Self> {
        if !(margin > T::zero() && margin < T::lit(0.5)) {
            return Err(Error::DegenerateRegion("puncture margin must lie in (0, 1/2)".into()));
        }
        self.puncture_margin = Some(margin);
        Ok(self)
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn puncture_margin(&self) -> Option<T> {
        self.puncture_margin
    }

    /// `sup |z|` over the pieces; exact unless the margin happens to cut the
    /// farthest point, in which case it is still an upper bound.
    pub fn max_modulus(&self) -> T {
        self.pieces.iter().map(Piece::max_modulus).fold(T::zero(), T::max)
    }

    fn distance_to_pieces(&self, z: Complex<T>) -> T {
        self.pieces.iter().map(|p| p.distance(z)).fold(T::infinity(), T::min)
    }

    /// Distance from `z` to the nearest positive integer.
    pub fn nearest_puncture_distance(z: Complex<T>) -> T {
        let k = z.re.round().max(T::one());
        (z - Complex::new(k, T::zero())).norm()
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        if self.distance_to_pieces(z) > T::zero() {
            return false;
        }
        match self.puncture_margin {
            Some(m) => Self::nearest_puncture_distance(z) >= m,
            None => true,
        }
    }

    /// Lower bound for the distance from the region to puncture `k`; exact
    /// when no margin is set.
    pub fn clearance_to(&self, k: u64) -> T {
        let d = self.distance_to_pieces(Complex::new(T::from_index(k), T::zero()));
        match self.puncture_margin {
            Some(m) => d.max(m),
            None => d,
        }
    }

    /// `inf_k dist(K, k)` over all punctures (see [`clearance_to`](Self::clearance_to)).
    pub fn puncture_clearance(&self) -> T {
        let last = self.max_modulus().ceil().to_u64().unwrap_or(0) + 1;
        (1..=last).map(|k| self.clearance_to(k)).fold(T::infinity(), T::min)
    }

    /// Smallest axis-aligned box containing every piece.
    pub fn bounding_box(&self) -> (Complex<T>, Complex<T>) {
        let mut lo = Complex::new(T::infinity(), T::infinity());
        let mut hi = Complex::new(T::neg_infinity(), T::neg_infinity());
        for p in &self.pieces {
            let (a, b) = p.bounding_box();
            lo = Complex::new(lo.re.min(a.re), lo.im.min(a.im));
            hi = Complex::new(hi.re.max(b.re), hi.im.max(b.im));
        }
        (lo, hi)
    }

    /// Lattice points of spacing `step` anchored at the lower-left corner of
    /// the bounding box (grown by `grow`) for which `keep` holds. Row-major,
    /// ascending imaginary part, then ascending real part.
    fn lattice<F: Fn(Complex<T>) -> bool>(&self, step: T, grow: T, keep: F) -> Vec<Complex<T>> {
        assert!(step > T::zero(), "grid step must be positive");
        let (lo, hi) = self.bounding_box();
        let g = Complex::new(grow, grow);
        let (lo, hi) = (lo - g, hi + g);
        let nx = ((hi.re - lo.re) / step).ceil().to_usize().unwrap_or(0);
        let ny = ((hi.im - lo.im) / step).ceil().to_usize().unwrap_or(0);
        let mut out = Vec::new();
        for j in 0..=ny {
            let y = (lo.im + T::from_usize(j).unwrap() * step).min(hi.im);
            for i in 0..=nx {
                let x = (lo.re + T::from_usize(i).unwrap() * step).min(hi.re);
                let z = Complex::new(x, y);
                if keep(z) {
                    out.push(z);
                }
            }
        }
        out
    }

    /// Uniform grid points lying in the region. The last row and column are
    /// clamped to the bounding box so its far edges are sampled.
    pub fn grid(&self, step: T) -> Vec<Complex<T>> {
        self.lattice(step, T::zero(), |z| self.contains(z))
    }

    /// Grid over the `delta`-neighborhood of the pieces with every
    /// `(center, radius)` disk in `avoid` removed.
    pub fn neighborhood_grid(&self, step: T, delta: T, avoid: &[(Complex<T>, T)]) -> Vec<Complex<T>> {
        self.lattice(step, delta, |z| {
            self.distance_to_pieces(z) <= delta && avoid.iter().all(|&(c, r)| (z - c).norm() >= r)
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RegionJson = serde_json::from_str(s)?;
        let c = |p: [f64; 2]| Complex::new(T::lit(p[0]), T::lit(p[1]));
        let pieces = raw
            .pieces
            .into_iter()
            .map(|p| match p {
                PieceJson::Disk { center, radius } => Piece::disk(c(center), T::lit(radius)),
                PieceJson::Rect { lo, hi } => Piece::rect(c(lo), c(hi)),
            })
            .collect();
        let region = Self::new(pieces)?;
        match raw.puncture_margin {
            Some(m) => region.with_puncture_margin(T::lit(m)),
            None => Ok(region),
        }
    }

    pub fn to_json(&self) -> String {
        let c = |z: Complex<T>| [z.re.to_f64_lossy(), z.im.to_f64_lossy()];
        let raw = RegionJson {
            pieces: self
                .pieces
                .iter()
                .map(|p| match *p {
                    Piece::Disk { center, radius } => PieceJson::Disk { center: c(center), radius: radius.to_f64_lossy() },
                    Piece::Rect { lo, hi } => PieceJson::Rect { lo: c(lo), hi: c(hi) },
                })
                .collect(),
            puncture_margin: self.puncture_margin.map(Real::to_f64_lossy),
        };
        serde_json::to_string(&raw).expect("region serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionJson {
    pieces: Vec<PieceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    puncture_margin: Option<f64>,
}

#[derive(Serialize, Deserialize)]
enum PieceJson {
    #[serde(rename = "disk")]
    Disk { center: [f64; 2], radius: f64 },
    #[serde(rename = "rect")]
    Rect { lo: [f64; 2], hi: [f64; 2] },
}
