//! Latent-talent sampling.
//!
//! All shapes are location-scale standardized to mean 0 and variance 1 so
//! that they are interchangeable inside the assignment policies: a biased
//! organization composes a normal team-level mean with standardized
//! within-team draws of any shape without changing the pooled variance.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::SimError;

/// Shape of the latent-talent distribution, before standardization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TalentShape {
    /// Standard normal (the baseline bell curve).
    Normal,
    /// exp(Z) with Z standard normal; right-skewed, rare high talent.
    Lognormal,
    /// Flat on a symmetric interval; no extremes.
    Uniform,
}

impl TalentShape {
    pub const ALL: [TalentShape; 3] = [
        TalentShape::Normal,
        TalentShape::Lognormal,
        TalentShape::Uniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TalentShape::Normal => "normal",
            TalentShape::Lognormal => "lognormal",
            TalentShape::Uniform => "uniform",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "normal" => Ok(TalentShape::Normal),
            "lognormal" => Ok(TalentShape::Lognormal),
            "uniform" => Ok(TalentShape::Uniform),
            other => Err(SimError::invalid_scenario(
                "shape",
                format!("shape must be one of normal|lognormal|uniform, got `{other}`"),
            )),
        }
    }
}

/// A single latent productivity score. Always finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Talent(f64);

impl Talent {
    pub fn new(value: f64) -> Self {
        debug_assert!(value.is_finite(), "talent must be finite");
        Talent(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Pre-standardization mean and standard deviation for each shape.
///
/// These are the constants `sample_standardized` divides out: Normal draws
/// are already standard, Lognormal exp(Z) has mean e^(1/2) and variance
/// (e-1)e, and the raw Uniform lives on (0,1) with mean 1/2 and sd 1/sqrt(12).
pub fn shape_raw_moments(shape: TalentShape) -> (f64, f64) {
    use std::f64::consts::E;
    match shape {
        TalentShape::Normal => (0.0, 1.0),
        TalentShape::Lognormal => (E.sqrt(), ((E - 1.0) * E).sqrt()),
        TalentShape::Uniform => (0.5, 1.0 / 12f64.sqrt()),
    }
}

fn raw_draw<R: Rng + ?Sized>(shape: TalentShape, rng: &mut R) -> f64 {
    match shape {
        TalentShape::Normal => rng.sample(StandardNormal),
        TalentShape::Lognormal => f64::exp(rng.sample(StandardNormal)),
        TalentShape::Uniform => rng.random::<f64>(),
    }
}

/// One standardized draw: (raw - mean) / sd for the shape's raw moments.
pub fn standardized_draw<R: Rng + ?Sized>(shape: TalentShape, rng: &mut R) -> Talent {
    let (mean, sd) = shape_raw_moments(shape);
    Talent::new((raw_draw(shape, rng) - mean) / sd)
}

/// Maps a standard-normal value onto the standardized target shape through
/// the shape's quantile function. The map is strictly increasing, so it
/// changes values but never ranks, and a standard-normal input yields
/// exactly the standardized shape distribution.
pub fn reshape_standard_normal(shape: TalentShape, x: f64) -> f64 {
    let (mean, sd) = shape_raw_moments(shape);
    match shape {
        TalentShape::Normal => x,
        // The lognormal quantile of Phi(x) is exp(x).
        TalentShape::Lognormal => (f64::exp(x) - mean) / sd,
        // The uniform quantile of Phi(x) is Phi(x) itself.
        TalentShape::Uniform => (standard_normal_cdf(x) - mean) / sd,
    }
}

fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Draws exactly `count` standardized talents from the given stream.
pub fn sample_standardized<R: Rng + ?Sized>(
    shape: TalentShape,
    count: usize,
    rng: &mut R,
) -> Vec<Talent> {
    debug_assert!(count >= 1, "count must be positive");
    (0..count).map(|_| standardized_draw(shape, rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn raw_moments_normal() {
        assert_eq!(shape_raw_moments(TalentShape::Normal), (0.0, 1.0));
    }

    #[test]
    fn raw_moments_lognormal_match_closed_form() {
        let (m, s) = shape_raw_moments(TalentShape::Lognormal);
        assert!((m - 1.6487).abs() < 1e-4, "mean {m}");
        assert!((s - 2.1612).abs() < 1e-4, "sd {s}");
        // Cross-check the closed form numerically against brute-force draws.
        let mut r = rng(11);
        let draws: Vec<f64> = (0..1_000_000)
            .map(|_| raw_draw(TalentShape::Lognormal, &mut r))
            .collect();
        let (bm, bv) = mean_var(&draws);
        assert!((bm - m).abs() < 0.01, "brute mean {bm} vs {m}");
        assert!(
            (bv.sqrt() - s).abs() < 0.05,
            "brute sd {} vs {s}",
            bv.sqrt()
        );
    }

    #[test]
    fn raw_moments_uniform() {
        let (m, s) = shape_raw_moments(TalentShape::Uniform);
        assert_eq!(m, 0.5);
        assert!((s - 0.2887).abs() < 1e-4);
    }

    #[test]
    fn standardized_mean_and_variance_all_shapes() {
        // |mean| < 4/sqrt(n) and |var - 1| < 0.02 at n = 10^6.
        let n = 1_000_000;
        for (i, shape) in TalentShape::ALL.into_iter().enumerate() {
            let mut r = rng(100 + i as u64);
            let xs: Vec<f64> = sample_standardized(shape, n, &mut r)
                .into_iter()
                .map(Talent::value)
                .collect();
            assert_eq!(xs.len(), n);
            let (mean, var) = mean_var(&xs);
            assert!(
                mean.abs() < 4.0 / (n as f64).sqrt(),
                "{shape:?} mean {mean}"
            );
            assert!((var - 1.0).abs() < 0.02, "{shape:?} var {var}");
        }
    }

    #[test]
    fn uniform_support_is_bounded() {
        let mut r = rng(7);
        for t in sample_standardized(TalentShape::Uniform, 100_000, &mut r) {
            assert!(t.value() > -1.7321 && t.value() < 1.7321, "{}", t.value());
        }
    }

    #[test]
    fn lognormal_standardization_keeps_right_skew() {
        // Standardization is location-scale, so the skewness of the raw
        // lognormal, (e+2)sqrt(e-1) ~ 6.18, survives it.
        let mut r = rng(13);
        let xs: Vec<f64> = sample_standardized(TalentShape::Lognormal, 1_000_000, &mut r)
            .into_iter()
            .map(Talent::value)
            .collect();
        let (mean, var) = mean_var(&xs);
        let skew =
            xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / (xs.len() as f64) / var.powf(1.5);
        assert!(skew > 1.0, "skewness {skew}");
    }

    #[test]
    fn identical_seed_gives_identical_sequence() {
        for shape in TalentShape::ALL {
            let a = sample_standardized(shape, 1000, &mut rng(42));
            let b = sample_standardized(shape, 1000, &mut rng(42));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn reshape_is_identity_for_normal() {
        for x in [-3.0, -0.5, 0.0, 0.5, 3.0] {
            assert_eq!(reshape_standard_normal(TalentShape::Normal, x), x);
        }
    }

    #[test]
    fn reshape_is_strictly_increasing() {
        let mut r = rng(17);
        for shape in TalentShape::ALL {
            let mut xs: Vec<f64> = (0..10_000)
                .map(|_| standardized_draw(TalentShape::Normal, &mut r).value())
                .collect();
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let ys: Vec<f64> = xs
                .iter()
                .map(|&x| reshape_standard_normal(shape, x))
                .collect();
            assert!(
                ys.windows(2).all(|w| w[0] < w[1]),
                "{shape:?} reshape not strictly increasing"
            );
        }
    }

    #[test]
    fn reshaped_normal_matches_standardized_moments() {
        // Pushing N(0,1) draws through the quantile map must reproduce the
        // same standardized law as sampling the shape directly.
        for (i, shape) in TalentShape::ALL.into_iter().enumerate() {
            let mut r = rng(400 + i as u64);
            let xs: Vec<f64> = (0..1_000_000)
                .map(|_| {
                    let z = standardized_draw(TalentShape::Normal, &mut r).value();
                    reshape_standard_normal(shape, z)
                })
                .collect();
            let (mean, var) = mean_var(&xs);
            assert!(mean.abs() < 0.004, "{shape:?} mean {mean}");
            assert!((var - 1.0).abs() < 0.02, "{shape:?} var {var}");
        }
    }

    #[test]
    fn reshape_to_lognormal_is_standardized_exp() {
        let (m, s) = shape_raw_moments(TalentShape::Lognormal);
        for x in [-2.0, 0.0, 1.5] {
            let expected = (f64::exp(x) - m) / s;
            assert_eq!(reshape_standard_normal(TalentShape::Lognormal, x), expected);
        }
    }

    #[test]
    fn shape_parse_round_trips() {
        for shape in TalentShape::ALL {
            assert_eq!(TalentShape::parse(shape.name()).unwrap(), shape);
        }
        assert!(TalentShape::parse("cauchy").is_err());
    }
}
