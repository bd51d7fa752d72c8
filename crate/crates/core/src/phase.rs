//! Phase portraits: hue encodes `arg f`, lightness a clamped `ln |f|`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::region::CompactRegion;
use crate::scalar::Real;
use crate::section::section_value;

/// Lightness gained per unit of `ln |f|`, before clamping to [0.1, 0.9].
const LIGHTNESS_PER_LOG: f64 = 0.08;

pub fn hsl_to_rgb(h: f64, s: f64, l: f64) -> [u8; 3] {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h.rem_euclid(1.0) * 6.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let q = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    [q(r), q(g), q(b)]
}

/// Color of a single value; zeros are black and poles or non-finite values white.
pub fn color<T: Real>(v: Option<Complex<T>>) -> [u8; 3] {
    let Some(v) = v else { return [255; 3] };
    let (re, im) = (v.re.to_f64_lossy(), v.im.to_f64_lossy());
    if !re.is_finite() || !im.is_finite() {
        return [255; 3];
    }
    let r = re.hypot(im);
    if r == 0.0 {
        return [0; 3];
    }
    let hue = im.atan2(re) / std::f64::consts::TAU;
    let lightness = (0.5 + LIGHTNESS_PER_LOG * r.ln()).clamp(0.1, 0.9);
    hsl_to_rgb(hue, 1.0, lightness)
}

/// Binary PPM (P6) of `f_nu` over the bounding box of `region`, `resolution`
/// pixels wide, sampled at pixel centers.
pub fn phase_portrait<T: Real>(nu: &Divisor, region: &CompactRegion<T>, resolution: usize) -> Result<Vec<u8>> {
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let (lo, hi) = region.bounding_box();
    let (w, h) = ((hi.re - lo.re).to_f64_lossy(), (hi.im - lo.im).to_f64_lossy());
    let width = resolution;
    let height = if w > 0.0 { ((resolution as f64) * h / w).round().max(1.0) as usize } else { resolution };
    let px = T::lit(w / width as f64);
    let py = T::lit(h / height as f64);
    let half = T::lit(0.5);

    let pixels: Vec<[u8; 3]> = (0..width * height)
        .into_par_iter()
        .map(|idx| {
            let (row, col) = (idx / width, idx % width);
            // Row 0 is the top of the image.
            let x = lo.re + (T::from_usize(col).unwrap() + half) * px;
            let y = hi.im - (T::from_usize(row).unwrap() + half) * py;
            color(section_value(nu, Complex::new(x, y)).ok())
        })
        .collect();

    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(pixels.len() * 3);
    for p in pixels {
        out.extend_from_slice(&p);
    }
    Ok(out)
}
