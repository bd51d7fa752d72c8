//! Exit criteria. Run with `cargo test -p divsec-core --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::*;
use divsec::section::tail_bound;
use divsec::winding::{puncture_loops, section_winding_by_quadrature, DEFAULT_RADIUS, DEFAULT_SAMPLES};
use divsec::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, ok: bool, detail: String) {
    println!("criterion {id}: {} {detail}", if ok { "PASS" } else { "FAIL" });
}

#[test]
fn criterion_1_basic_estimate() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0;
    for _ in 0..100_000 {
        let m = rng.gen_range(0..=20u32);
        let z = Complex64::from_polar(rng.gen_range(0.0..=1.0f64).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
        let excess = (weierstrass_factor(m, z) - 1.0).norm() - z.norm().powi(m as i32 + 1);
        worst = worst.max(excess);
        if excess > 1e-12 {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = failures == 0 && elapsed < Duration::from_secs(5);
    report(1, ok, format!("|E_m(z)-1| - |z|^(m+1) max {worst:.3e} over 1e5 samples, {elapsed:.2?}"));
    assert!(ok);
}

#[test]
fn criterion_2_log_derivative_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = rng.gen_range(0..=10u32);
        let n = loop {
            let n = rng.gen_range(-20..=20i64);
            if n != 0 {
                break n;
            }
        };
        let k = rng.gen_range(1..=10u64);
        // z/k in the annulus 1/2 <= |z/k| <= 2, at least 0.1 from the puncture.
        let z = loop {
            let w = Complex64::from_polar(rng.gen_range(0.5..=2.0), rng.gen_range(0.0..std::f64::consts::TAU));
            let z = w * k as f64;
            if (z - k as f64).norm() >= 0.1 {
                break z;
            }
        };
        let exact = log_derivative_term(m, n, k, z).unwrap();
        let numeric = central_difference(m, n, k, z, 1e-6);
        worst = worst.max((exact - numeric).norm() / exact.norm());
    }
    let ok = worst < 1e-6;
    report(2, ok, format!("max relative error {worst:.3e} over 1e3 samples"));
    assert!(ok);
}

/// The corpus shared by criteria 3 and 8.
fn section_corpus() -> Vec<Divisor> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    (0..200).map(|_| random_divisor(&mut rng, 20, 50, 10)).collect()
}

#[test]
fn criterion_3_section_property() {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut worst = 0.0f64;
    for nu in section_corpus() {
        let f = Section::new(nu.clone());
        for k in 1..=25u64 {
            let cert = winding_number_auto(&f, k, DEFAULT_RADIUS, DEFAULT_SAMPLES).unwrap();
            worst = worst.max(cert.residual);
            if cert.winding != nu.get(k) || cert.residual >= 1e-6 {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = mismatches == 0 && elapsed < Duration::from_secs(60);
    report(3, ok, format!("200 divisors x 25 punctures, {mismatches} mismatches, max residual {worst:.3e}, {elapsed:.2?}"));
    assert!(ok);
}

#[test]
fn criterion_4_tail_bound() {
    let mut worst = 0.0f64;
    for k0 in 1..=30u64 {
        let brute = tail_sum_brute(k0, 500);
        worst = worst.max((tail_bound::<f64>(k0) - brute).abs() / brute);
    }
    let exact_ok = worst < 1e-12;

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut held = 0;
    for trial in 0..100u64 {
        let seed: u64 = rng.gen();
        let uniform = move |k: u64, range: u64| (splitmix(seed, k) % (2 * range + 1)) as i64 - range as i64;
        // Multiplicities up to 10^6 only from k = 4 on, so f stays within f64 range.
        let nu = match trial % 3 {
            0 => ProceduralDivisor::new(|k| if k % 2 == 0 { k as i64 } else { -(k as i64) }),
            1 => ProceduralDivisor::new(move |k| uniform(k, 50)),
            _ => ProceduralDivisor::new(move |k| if k < 4 { uniform(k, 3) } else { uniform(k, 1_000_000) }),
        };
        let z = Complex64::from_polar(rng.gen_range(0.0..1.5), rng.gen_range(0.0..std::f64::consts::TAU));
        let head = rng.gen_range(evaluation_start(z)..=evaluation_start(z) + 30);
        let short = evaluate(&nu, z, head).unwrap();
        let long = evaluate(&nu, z, head + 40).unwrap();
        if (short.value.value - long.value.value).norm() <= short.value.abs_error {
            held += 1;
        }
    }
    let ok = exact_ok && held == 100;
    report(4, ok, format!("closed form vs brute max rel err {worst:.3e}; truncation certificate held {held}/100"));
    assert!(ok);
}

fn evaluation_start(z: Complex64) -> u64 {
    divsec::section::tail_start(z)
}

fn continuity_case(region: &Region, eps: f64, seed: u64, max_support: u64) -> (f64, u64, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut max_k0 = 0;
    let mut all = true;
    // 10 divisors x 10 tail variants = 100 pairs.
    for _ in 0..10 {
        let nu = random_divisor(&mut rng, max_support, 3, 4);
        let r = verify_continuity(&nu, region, eps, 10, rng.gen()).unwrap();
        worst = worst.max(r.max_deviation);
        max_k0 = max_k0.max(r.modulus.k0);
        all &= r.passed();
    }
    (worst, max_k0, all)
}

#[test]
fn criterion_5_continuity_certificate() {
    let start = Instant::now();
    let disk = Region::disk(c(0.0, 0.0), 2.0).unwrap().with_puncture_margin(0.2).unwrap();
    let rect = Region::rect(c(-2.0, -1.0), c(3.5, 1.0)).unwrap().with_puncture_margin(0.2).unwrap();
    let mut ok = true;
    let mut details = Vec::new();
    for (name, region, support) in [("disk(0,2)", &disk, 6u64), ("rect(-2-i,3.5+i)", &rect, 8)] {
        for (i, eps) in [1e-2, 1e-4].into_iter().enumerate() {
            let (worst, k0, all) = continuity_case(region, eps, 50 + i as u64 + support, support);
            ok &= all && worst < eps;
            details.push(format!("{name} eps={eps:e}: max dev {worst:.2e}, k0<={k0}"));
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(120);
    report(5, ok, format!("{}; {elapsed:.2?}", details.join("; ")));
    assert!(ok);
}

/// `f_nu(z) * exp(p(z))` for a polynomial `p`, with an exact logarithm.
struct TwistedSection {
    section: Section,
    poly: Vec<Complex64>,
}

impl TwistedSection {
    fn exponent(&self, z: Complex64) -> Complex64 {
        self.poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }
}

impl ComplexMap<f64> for TwistedSection {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.section.eval(z)? * self.exponent(z).exp())
    }

    fn log_parts(&self, z: Complex64) -> Result<LogParts<f64>> {
        let mut parts = self.section.log_parts(z)?;
        parts.holomorphic += self.exponent(z);
        Ok(parts)
    }
}

impl Clone for TwistedSection {
    fn clone(&self) -> Self {
        Self { section: self.section.clone(), poly: self.poly.clone() }
    }
}

#[test]
fn criterion_6_factorization_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let loops = puncture_loops(20, DEFAULT_RADIUS, DEFAULT_SAMPLES);
    let mut good = 0;
    for _ in 0..50 {
        let nu = random_divisor(&mut rng, 20, 50, 10);
        let poly = (0..4).map(|_| c(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3))).collect();
        let f = TwistedSection { section: Section::new(nu.clone()), poly };
        let fac = factor_map(&f, 20).unwrap();
        let witness = nullhomotopy_witness(&fac.remainder, &loops).unwrap();
        if fac.divisor == nu && witness.nullhomotopic && witness.increments.len() == 20 {
            good += 1;
        }
    }
    let ok = good == 50;
    report(6, ok, format!("{good}/50 divisors recovered exactly with nullhomotopic remainder"));
    assert!(ok);
}

#[test]
fn criterion_7_rouche_local_constancy() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut good = 0;
    for _ in 0..100 {
        let nu = random_divisor(&mut rng, 20, 50, 10);
        let f = Section::new(nu);
        let seed: u64 = rng.gen();
        let stable = (1..=20u64).all(|k| rouche_stability(&f, k, DEFAULT_RADIUS, 0.5, 1, seed ^ k).unwrap());
        if stable {
            good += 1;
        }
    }
    let ok = good == 100;
    report(7, ok, format!("{good}/100 perturbation trials preserved all windings at punctures 1..=20"));
    assert!(ok);
}

#[test]
fn criterion_8_determinism() {
    let region = Region::rect(c(-2.0, -1.0), c(3.5, 1.0)).unwrap().with_puncture_margin(0.2).unwrap();
    let nu = Divisor::from_pairs([(1, 2), (3, -1), (6, 4)]).unwrap();
    let runs: Vec<String> = (0..3).map(|_| verify_continuity(&nu, &region, 1e-4, 10, 2024).unwrap().render()).collect();
    let identical = runs.windows(2).all(|w| w[0] == w[1]);

    let mut disagreements = 0;
    let mut checked = 0;
    for nu in section_corpus() {
        let f = Section::new(nu);
        for k in 1..=25u64 {
            let tracked = winding_number_auto(&f, k, DEFAULT_RADIUS, DEFAULT_SAMPLES).unwrap();
            let quad = section_winding_by_quadrature(&f, k, DEFAULT_RADIUS, tracked.contour.samples).unwrap();
            checked += 1;
            if quad.winding != tracked.winding || !quad.is_valid() {
                disagreements += 1;
            }
        }
    }
    let ok = identical && disagreements == 0;
    report(8, ok, format!("3 seeded reports identical: {identical}; oracle disagreements {disagreements}/{checked}"));
    assert!(ok);
}

