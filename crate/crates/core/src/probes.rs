//! Deterministic test-field constructors, including seeded band-limited
//! fields. All randomness flows through `ChaCha8`, so fields are stable
//! across platforms and thread counts.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::ScalarField;
use crate::space::WeightedSpace;

/// The coordinate function `x`.
pub fn coordinate(space: &Arc<WeightedSpace>) -> ScalarField {
    ScalarField::from_fn(space, |x| x)
}

/// Finite trigonometric sum with seeded amplitudes and phases. Periodic
/// domains use exact circle harmonics; line domains use frequencies scaled
/// to the span. Mean amplitude is normalised to `amplitude`.
pub fn band_limited(space: &Arc<WeightedSpace>, seed: u64, modes: usize, amplitude: f64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = modes.max(1);
    let (lo, hi) = space.kind().range();
    let span = hi - lo;
    let base_freq = if space.is_periodic() {
        std::f64::consts::TAU / span
    } else {
        std::f64::consts::PI / span
    };
    let mut coeffs = Vec::with_capacity(modes);
    let mut total = 0.0;
    for j in 1..=modes {
        let a: f64 = rng.gen_range(-1.0..1.0);
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        total += a.abs();
        coeffs.push((j as f64 * base_freq, a, phase));
    }
    let norm = if total > 0.0 { amplitude / total } else { 0.0 };
    ScalarField::from_fn(space, move |x| {
        coeffs
            .iter()
            .map(|&(w, a, phase)| norm * a * (w * (x - lo) + phase).sin())
            .sum()
    })
}

/// `1 + band_limited`, bounded below by `1 - amplitude` (use `amplitude < 1`).
pub fn positive_band_limited(
    space: &Arc<WeightedSpace>,
    seed: u64,
    modes: usize,
    amplitude: f64,
) -> ScalarField {
    band_limited(space, seed, modes, amplitude).map(|v| 1.0 + v)
}

/// Gaussian bump `base + exp(-(x - center)^2 / (2 width^2))`.
pub fn gaussian_bump(space: &Arc<WeightedSpace>, center: f64, width: f64, base: f64) -> ScalarField {
    ScalarField::from_fn(space, move |x| {
        let z = (x - center) / width;
        base + (-0.5 * z * z).exp()
    })
}

/// Standard probe set for curvature-dimension certification: low polynomial
/// and trigonometric modes plus one seeded band-limited field. Periodic
/// domains replace the non-periodic polynomials with harmonics.
pub fn standard_cd_probes(space: &Arc<WeightedSpace>, seed: u64) -> Vec<ScalarField> {
    let mut probes = Vec::new();
    if space.is_periodic() {
        probes.push(ScalarField::from_fn(space, |x| x.sin()));
        probes.push(ScalarField::from_fn(space, |x| x.cos()));
        probes.push(ScalarField::from_fn(space, |x| (2.0 * x).sin()));
    } else {
        probes.push(coordinate(space));
        probes.push(ScalarField::from_fn(space, |x| x * x));
        probes.push(ScalarField::from_fn(space, |x| x.sin()));
    }
    probes.push(band_limited(space, seed, 4, 1.0));
    probes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{DomainKind, WeightSpec};

    fn line() -> Arc<WeightedSpace> {
        WeightedSpace::build(
            DomainKind::TruncatedLine { half_width: 8.0 },
            WeightSpec::gaussian(),
            128,
            true,
        )
        .unwrap()
    }

    #[test]
    fn band_limited_is_deterministic() {
        let s = line();
        let a = band_limited(&s, 42, 5, 0.5);
        let b = band_limited(&s, 42, 5, 0.5);
        for (x, y) in a.values().iter().zip(b.values().iter()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        let c = band_limited(&s, 43, 5, 0.5);
        assert!(a.linf_distance(&c).unwrap() > 0.0);
    }

    #[test]
    fn positive_band_limited_stays_positive() {
        let s = line();
        for seed in 0..20 {
            let f = positive_band_limited(&s, seed, 5, 0.5);
            assert!(f.min_value() >= 0.5 - 1e-12, "seed {seed}: {}", f.min_value());
        }
    }

    #[test]
    fn periodic_band_limited_wraps_smoothly() {
        let s = WeightedSpace::build(
            DomainKind::Circle {
                period: std::f64::consts::TAU,
            },
            WeightSpec::Zero,
            256,
            true,
        )
        .unwrap();
        let f = band_limited(&s, 7, 3, 1.0);
        // Circle harmonics: the jump across the wrap edge is one grid cell
        // of a smooth function, not an O(1) discontinuity.
        let n = s.node_count();
        let jump = (f.values()[0] - f.values()[n - 1]).abs();
        let typical = f.linf_norm();
        assert!(jump < 0.5 * typical, "jump {jump} vs amplitude {typical}");
    }
}
