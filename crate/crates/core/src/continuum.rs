//! Differential entropy and extropy for densities tabulated on a closed
//! interval, plus probes showing the discrete measures converging to them.
//!
//! Integrals use the composite trapezoid rule on the grid's uniform nodes, so
//! the discrete pmf `p_i ∝ f(x_i) Δx` and the density quadrature share a node
//! set.
//!
//! ```
//! use extropy::continuum::{differential_entropy, differential_extropy, DensityGrid};
//!
//! let f = DensityGrid::sample(0.0, 1.0, 1001, |x| 2.0 * x).unwrap();
//! assert!((differential_entropy(&f) - (0.5 - 2f64.ln())).abs() < 2e-3);
//! assert!((differential_extropy(&f) + 2.0 / 3.0).abs() < 2e-3);
//! ```

use rayon::prelude::*;
use serde::Serialize;

use crate::divergence::{complementary_divergence, ExtendedNonNegative};
use crate::error::{Error, Result};
use crate::simplex::{entropy, extropy, neg_xlogx, ProbabilityVector};

/// Default tolerance on `|∫ f - 1|` accepted by [`DensityGrid::new`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// A density sampled at `N >= 2` uniformly spaced nodes spanning
/// `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityGrid {
    lower: f64,
    upper: f64,
    values: Vec<f64>,
}

impl DensityGrid {
    pub fn new(lower: f64, upper: f64, values: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(lower, upper, values, NORMALIZATION_TOLERANCE)
    }

    pub fn with_tolerance(
        lower: f64,
        upper: f64,
        values: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && upper > lower) {
            return Err(Error::InvalidGrid(format!(
                "interval [{lower}, {upper}] is empty or not finite"
            )));
        }
        if values.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes, got {}",
                values.len()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidGrid(format!(
                "value {v} at node {i} is negative"
            )));
        }
        let grid = Self {
            lower,
            upper,
            values,
        };
        let mass = grid.integrate(|i| grid.values[i]);
        if (mass - 1.0).abs() > tolerance {
            return Err(Error::InvalidGrid(format!(
                "density integrates to {mass}, not 1 (tolerance {tolerance:e})"
            )));
        }
        Ok(grid)
    }

    /// Tabulates `density` at `n` nodes over `[lower, upper]`.
    pub fn sample(lower: f64, upper: f64, n: usize, density: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes, got {n}"
            )));
        }
        let step = (upper - lower) / (n - 1) as f64;
        let values = (0..n).map(|i| density(lower + step * i as f64)).collect();
        Self::new(lower, upper, values)
    }

    /// The uniform density `1 / (upper - lower)` on `n` nodes.
    pub fn uniform(lower: f64, upper: f64, n: usize) -> Result<Self> {
        let height = 1.0 / (upper - lower);
        Self::sample(lower, upper, n, |_| height)
    }

    /// The uniform density on this grid's interval and node set.
    pub fn uniform_reference(&self) -> Self {
        Self {
            lower: self.lower,
            upper: self.upper,
            values: vec![1.0 / self.width(); self.len()],
        }
    }

    /// Piecewise-linear interpolation of this grid onto `n` nodes.
    pub fn resample(&self, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes, got {n}"
            )));
        }
        let last = self.len() - 1;
        let values = (0..n)
            .map(|i| {
                let pos = i as f64 * last as f64 / (n - 1) as f64;
                let k = (pos.floor() as usize).min(last - 1);
                let frac = pos - k as f64;
                self.values[k] * (1.0 - frac) + self.values[k + 1] * frac
            })
            .collect();
        // interpolation shifts trapezoid mass for curved densities; consumers renormalize
        Self::with_tolerance(self.lower, self.upper, values, f64::INFINITY)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Node spacing `Δx = (upper - lower) / (N - 1)`.
    pub fn step(&self) -> f64 {
        self.width() / (self.len() - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.len() {
            self.upper
        } else {
            self.lower + self.step() * i as f64
        }
    }

    /// Trapezoid quadrature of the trapezoid mass `∫ f`.
    pub fn mass(&self) -> f64 {
        self.integrate(|i| self.values[i])
    }

    fn integrate(&self, integrand: impl Fn(usize) -> f64) -> f64 {
        let n = self.values.len();
        let interior: f64 = (1..n - 1).map(&integrand).sum();
        self.step() * (interior + 0.5 * (integrand(0) + integrand(n - 1)))
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.len() == other.len() && self.lower == other.lower && self.upper == other.upper {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Node masses `f(x_i) Δx`, renormalized to sum to one, together with the
/// raw pre-normalization total.
pub fn discretize_with_total(grid: &DensityGrid) -> Result<(ProbabilityVector, f64)> {
    let step = grid.step();
    let raw: Vec<f64> = grid.values.iter().map(|v| v * step).collect();
    let total: f64 = raw.iter().sum();
    Ok((ProbabilityVector::normalized(&raw)?, total))
}

pub fn discretize(grid: &DensityGrid) -> Result<ProbabilityVector> {
    discretize_with_total(grid).map(|(p, _)| p)
}

/// Differential entropy `h(f) = -∫ f ln f`. May be negative.
pub fn differential_entropy(grid: &DensityGrid) -> f64 {
    grid.integrate(|i| neg_xlogx(grid.values[i]))
}

/// Differential extropy `j(f) = -½ ∫ f²`. Never positive.
pub fn differential_extropy(grid: &DensityGrid) -> f64 {
    -0.5 * grid.integrate(|i| grid.values[i] * grid.values[i])
}

/// Relative entropy `d(f‖g) = ∫ f ln(f / g)` over nodes where `f > 0`.
///
/// Infinite when `f > 0` at a node where `g = 0`. Negative quadrature noise is
/// clamped to zero and flagged.
pub fn relative_entropy_density(f: &DensityGrid, g: &DensityGrid) -> Result<ExtendedNonNegative> {
    f.compatible(g)?;
    if f.values
        .iter()
        .zip(&g.values)
        .any(|(&a, &b)| a > 0.0 && b == 0.0)
    {
        return Ok(ExtendedNonNegative::INFINITY);
    }
    let raw = f.integrate(|i| {
        let (a, b) = (f.values[i], g.values[i]);
        if a > 0.0 {
            a * (a / b).ln()
        } else {
            0.0
        }
    });
    Ok(ExtendedNonNegative::from_quadrature(raw))
}

/// Relative extropy `dᶜ(f‖g) = ½ ∫ (f - g)²`.
pub fn relative_extropy_density(f: &DensityGrid, g: &DensityGrid) -> Result<f64> {
    f.compatible(g)?;
    Ok(0.5 * f.integrate(|i| (f.values[i] - g.values[i]).powi(2)))
}

/// A differentiable, strictly convex scalar function used as a Bregman kernel
/// for densities. Non-finite values mark points outside its domain.
pub trait ScalarKernel: Sync {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

/// `s(x) = x ln x`, reproducing relative entropy.
#[derive(Debug, Clone, Copy, Default)]
pub struct XLogX;

/// `s(x) = ½ x²`, reproducing relative extropy.
#[derive(Debug, Clone, Copy, Default)]
pub struct HalfSquare;

impl ScalarKernel for XLogX {
    fn value(&self, x: f64) -> f64 {
        -neg_xlogx(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        x.ln() + 1.0
    }
}

impl ScalarKernel for HalfSquare {
    fn value(&self, x: f64) -> f64 {
        0.5 * x * x
    }

    fn derivative(&self, x: f64) -> f64 {
        x
    }
}

/// `B_s(f, g) = ∫ [s(f) - s(g) - s'(g)(f - g)]`.
pub fn bregman_density<K: ScalarKernel + ?Sized>(
    kernel: &K,
    f: &DensityGrid,
    g: &DensityGrid,
) -> Result<f64> {
    f.compatible(g)?;
    let mut pointwise = Vec::with_capacity(f.len());
    for (index, (&a, &b)) in f.values.iter().zip(&g.values).enumerate() {
        if a == b {
            pointwise.push(0.0);
            continue;
        }
        let v = kernel.value(a) - kernel.value(b) - kernel.derivative(b) * (a - b);
        if !v.is_finite() {
            return Err(Error::KernelUndefined { index, f: a, g: b });
        }
        pointwise.push(v);
    }
    Ok(f.integrate(|i| pointwise[i]))
}

/// Limits that the discrete probes should approach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeTargets {
    pub entropy: f64,
    pub extropy: f64,
    pub relative_extropy: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeValue {
    pub discrete: f64,
    pub target: f64,
    pub error: f64,
}

impl ProbeValue {
    fn new(discrete: f64, target: f64) -> Self {
        Self {
            discrete,
            target,
            error: (discrete - target).abs(),
        }
    }
}

/// One grid size of a [`convergence_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    pub nodes: usize,
    pub step: f64,
    /// `H(p_N) + ln Δx` against `h(f)`.
    pub entropy: ProbeValue,
    /// `(J(p_N) - 1) / Δx` against `j(f)`.
    pub extropy: ProbeValue,
    /// `Dᶜ(p_N‖s_N) / Δx` against `dᶜ(f‖g)`.
    pub relative_extropy: Option<ProbeValue>,
}

/// Evaluates the discretization limits at each grid size in `sizes`.
///
/// `family(n)` yields the density (and optionally a reference density on the
/// same nodes) tabulated at `n` nodes. Rows come back in input order even
/// though sizes are evaluated in parallel.
pub fn convergence_probe<F>(
    sizes: &[usize],
    targets: &ProbeTargets,
    family: F,
) -> Result<Vec<ProbeRow>>
where
    F: Fn(usize) -> Result<(DensityGrid, Option<DensityGrid>)> + Sync,
{
    if sizes.len() < 2 {
        return Err(Error::ProbeTooShort(sizes.len()));
    }
    if let Some(w) = sizes.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "probe sizes must increase, got {} then {}",
            w[0], w[1]
        )));
    }
    sizes
        .par_iter()
        .map(|&n| {
            let (f, g) = family(n)?;
            let step = f.step();
            let p = discretize(&f)?;
            let entropy_probe = entropy(&p) + step.ln();
            let extropy_probe = (extropy(&p) - 1.0) / step;
            let relative_extropy = match (&g, targets.relative_extropy) {
                (Some(g), Some(target)) => {
                    f.compatible(g)?;
                    let s = discretize(g)?;
                    let dc = complementary_divergence(&p, &s)?.value();
                    Some(ProbeValue::new(dc / step, target))
                }
                _ => None,
            };
            Ok(ProbeRow {
                nodes: n,
                step,
                entropy: ProbeValue::new(entropy_probe, targets.entropy),
                extropy: ProbeValue::new(extropy_probe, targets.extropy),
                relative_extropy,
            })
        })
        .collect()
}
