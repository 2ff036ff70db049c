//! Relative entropy, relative extropy, and a Bregman engine that reproduces
//! both from their generators.
//!
//! Kullback-Leibler divergence `D(p‖s)` and its complementary dual
//! `Dᶜ(p‖s) = Σ (1 - p_i) ln((1 - p_i) / (1 - s_i))` are both Bregman
//! divergences on the simplex: the first for `φ = -H`, the second for
//! `φ = -J`. For small masses `Dᶜ` is close to half the squared Euclidean
//! distance, which is itself the Bregman divergence of `½ Σ x²`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplex::{complement, ProbabilityVector};

/// Values within this distance of zero are reported as exactly zero.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

/// A divergence value in `[0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtendedNonNegative {
    value: f64,
    clamped: bool,
}

impl ExtendedNonNegative {
    pub const INFINITY: Self = Self {
        value: f64::INFINITY,
        clamped: false,
    };

    pub const ZERO: Self = Self {
        value: 0.0,
        clamped: false,
    };

    /// Wraps a finite accumulated sum, snapping rounding noise near zero.
    pub fn from_finite(raw: f64) -> Self {
        if raw.abs() <= CLAMP_TOLERANCE {
            Self {
                value: 0.0,
                clamped: raw != 0.0,
            }
        } else {
            Self {
                value: raw,
                clamped: false,
            }
        }
    }

    /// Like [`from_finite`](Self::from_finite), but also clamps negative
    /// values, which only arise from quadrature error.
    pub fn from_quadrature(raw: f64) -> Self {
        if raw < 0.0 {
            Self {
                value: 0.0,
                clamped: true,
            }
        } else {
            Self::from_finite(raw)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    /// The value, with `f64::INFINITY` standing for `∞`.
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn finite(&self) -> Option<f64> {
        self.is_finite().then_some(self.value)
    }

    /// Whether rounding noise was snapped to zero.
    pub fn was_clamped(&self) -> bool {
        self.clamped
    }
}

impl fmt::Display for ExtendedNonNegative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.value)
        } else {
            f.write_str("inf")
        }
    }
}

fn same_dim(p: &ProbabilityVector, s: &ProbabilityVector) -> Result<()> {
    if p.len() == s.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: p.len(),
            right: s.len(),
        })
    }
}

/// Kullback-Leibler divergence `Σ p_i ln(p_i / s_i)`.
///
/// Terms with `p_i = 0` contribute nothing; `p_i > 0` with `s_i = 0` makes the
/// divergence infinite.
pub fn kl_divergence(p: &ProbabilityVector, s: &ProbabilityVector) -> Result<ExtendedNonNegative> {
    same_dim(p, s)?;
    let mut sum = 0.0;
    for (pi, si) in p.iter().zip(s.iter()) {
        if pi == 0.0 {
            continue;
        }
        if si == 0.0 {
            return Ok(ExtendedNonNegative::INFINITY);
        }
        sum += pi * (pi / si).ln();
    }
    Ok(ExtendedNonNegative::from_finite(sum))
}

/// Relative extropy `Σ (1 - p_i) ln((1 - p_i) / (1 - s_i))`.
///
/// Terms with `p_i = 1` contribute nothing; `p_i < 1` with `s_i = 1` makes the
/// divergence infinite.
pub fn complementary_divergence(
    p: &ProbabilityVector,
    s: &ProbabilityVector,
) -> Result<ExtendedNonNegative> {
    same_dim(p, s)?;
    let mut sum = 0.0;
    for (pi, si) in p.iter().zip(s.iter()) {
        if pi >= 1.0 {
            continue;
        }
        if si >= 1.0 {
            return Ok(ExtendedNonNegative::INFINITY);
        }
        sum += (1.0 - pi) * ((-pi).ln_1p() - (-si).ln_1p());
    }
    Ok(ExtendedNonNegative::from_finite(sum))
}

/// Half the squared Euclidean distance, `½ Σ (p_i - s_i)²`.
pub fn half_euclidean(p: &ProbabilityVector, s: &ProbabilityVector) -> Result<f64> {
    same_dim(p, s)?;
    Ok(0.5
        * p.iter()
            .zip(s.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>())
}

/// A strictly convex function on the simplex together with its gradient.
///
/// The gradient is taken in the `n - 1` free coordinates, treating the last
/// mass as `1 - Σ_{i<n} p_i`.
pub trait BregmanGenerator: Send + Sync {
    fn name(&self) -> &'static str;

    fn phi(&self, p: &ProbabilityVector) -> f64;

    /// Gradient at an interior point, of length `n - 1`.
    fn gradient(&self, s: &ProbabilityVector) -> Vec<f64>;
}

/// `φ(p) = Σ p_i ln p_i = -H(p)`; its divergence is Kullback-Leibler.
#[derive(Debug, Clone, Copy, Default)]
pub struct NegEntropy;

/// `φ(p) = Σ (1 - p_i) ln(1 - p_i) = -J(p)`; its divergence is relative extropy.
#[derive(Debug, Clone, Copy, Default)]
pub struct NegExtropy;

/// `φ(p) = ½ Σ p_i²`; its divergence is half the squared Euclidean distance.
#[derive(Debug, Clone, Copy, Default)]
pub struct HalfSquaredNorm;

impl BregmanGenerator for NegEntropy {
    fn name(&self) -> &'static str {
        "neg-entropy"
    }

    fn phi(&self, p: &ProbabilityVector) -> f64 {
        -crate::simplex::entropy(p)
    }

    fn gradient(&self, s: &ProbabilityVector) -> Vec<f64> {
        let m = s.masses();
        let last = m[m.len() - 1].ln();
        m[..m.len() - 1].iter().map(|x| x.ln() - last).collect()
    }
}

impl BregmanGenerator for NegExtropy {
    fn name(&self) -> &'static str {
        "neg-extropy"
    }

    fn phi(&self, p: &ProbabilityVector) -> f64 {
        -crate::simplex::extropy(p)
    }

    fn gradient(&self, s: &ProbabilityVector) -> Vec<f64> {
        let m = s.masses();
        let last = (-m[m.len() - 1]).ln_1p();
        m[..m.len() - 1]
            .iter()
            .map(|x| last - (-x).ln_1p())
            .collect()
    }
}

impl BregmanGenerator for HalfSquaredNorm {
    fn name(&self) -> &'static str {
        "half-squared-norm"
    }

    fn phi(&self, p: &ProbabilityVector) -> f64 {
        0.5 * p.iter().map(|x| x * x).sum::<f64>()
    }

    fn gradient(&self, s: &ProbabilityVector) -> Vec<f64> {
        let m = s.masses();
        let last = m[m.len() - 1];
        m[..m.len() - 1].iter().map(|x| x - last).collect()
    }
}

/// `d_φ(p, s) = φ(p) - φ(s) - ⟨∇φ(s), p - s⟩` over the free coordinates.
///
/// `s` must lie in the relative interior of the simplex.
pub fn bregman<G: BregmanGenerator + ?Sized>(
    gen: &G,
    p: &ProbabilityVector,
    s: &ProbabilityVector,
) -> Result<f64> {
    same_dim(p, s)?;
    if let Some((index, value)) = s.iter().enumerate().find(|&(_, x)| x <= 0.0 || x >= 1.0) {
        // n = 1 is the lone point of the 0-simplex and has no free coordinates
        if s.len() > 1 {
            return Err(Error::BoundaryPoint { index, value });
        }
    }
    let grad = gen.gradient(s);
    let inner: f64 = grad
        .iter()
        .zip(p.iter().zip(s.iter()))
        .map(|(g, (pi, si))| g * (pi - si))
        .sum();
    Ok(gen.phi(p) - gen.phi(s) - inner)
}

/// Relative entropy and relative extropy of a pmf against its complement
/// `q = (1 - p) / (n - 1)`, via the expected-odds closed forms
///
/// `D(p‖q) = Σ p_i ln(p_i / (1 - p_i)) + ln(n - 1)` and
/// `Dᶜ(p‖q) = (n - 1) [Σ q_i ln(q_i / (1 - q_i)) + ln(n - 1)]`.
pub fn odds_divergences(
    p: &ProbabilityVector,
) -> Result<(ExtendedNonNegative, ExtendedNonNegative)> {
    let n = p.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let q = complement(p)?;
    let ln_m = ((n - 1) as f64).ln();
    let kl = expected_log_odds(p).map(|e| ExtendedNonNegative::from_finite(e + ln_m));
    let ckl = expected_log_odds(&q)
        .map(|e| ExtendedNonNegative::from_finite((n - 1) as f64 * (e + ln_m)));
    Ok((
        kl.unwrap_or(ExtendedNonNegative::INFINITY),
        ckl.unwrap_or(ExtendedNonNegative::INFINITY),
    ))
}

/// `Σ p_i ln(p_i / (1 - p_i))`, or `None` when some mass is 1.
fn expected_log_odds(p: &ProbabilityVector) -> Option<f64> {
    let mut sum = 0.0;
    for x in p.iter() {
        if x >= 1.0 {
            return None;
        }
        if x > 0.0 {
            sum += x * (x.ln() - (-x).ln_1p());
        }
    }
    Some(sum)
}

/// Largest relative extropy between a pmf and its complement,
/// `(n - 1) ln((n - 1) / (n - 2))`, attained at the certainty pmfs.
pub fn dc_upper_bound(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::DimensionTooSmall { n, min: 3 });
    }
    let m = (n - 1) as f64;
    Ok(m * (1.0 / (m - 1.0)).ln_1p())
}
