//! Discrete entropy and extropy on the unit simplex.
//!
//! Everything here is measured in nats. The conventions `0 log 0 = 0` and
//! `(1 - p) log(1 - p) = 0` at `p = 1` are applied by explicit branches so that
//! boundary pmfs never produce `NaN`.
//!
//! ```
//! use extropy::simplex::{entropy, extropy, complement, ProbabilityVector};
//!
//! let p = ProbabilityVector::new(vec![0.25, 0.5, 0.25]).unwrap();
//! assert!((entropy(&p) - 1.0397).abs() < 5e-4);
//! assert!((extropy(&p) - 0.7781).abs() < 5e-4);
//!
//! let q = complement(&p).unwrap();
//! assert_eq!(q.masses(), &[0.375, 0.25, 0.375]);
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on the mass sum accepted by [`ProbabilityVector::new`].
pub const SUM_TOLERANCE: f64 = 1e-9;

/// `-x ln x` with the `0 ln 0 = 0` convention.
#[inline]
pub(crate) fn neg_xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// `-(1 - p) ln(1 - p)`, zero at `p = 1`.
#[inline]
pub(crate) fn neg_complement_xlogx(p: f64) -> f64 {
    if p >= 1.0 {
        0.0
    } else {
        -(1.0 - p) * (-p).ln_1p()
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}

/// A validated point on the unit simplex.
///
/// Every mass lies in `[0, 1]` and the masses sum to one within
/// [`SUM_TOLERANCE`]. Inputs are never silently renormalized; use
/// [`ProbabilityVector::normalized`] to ask for that explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbabilityVector {
    masses: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &value) in masses.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::MassOutOfRange { index, value });
            }
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotNormalized {
                sum,
                tolerance: SUM_TOLERANCE,
            });
        }
        Ok(Self { masses })
    }

    /// Scales non-negative weights so they sum to one.
    pub fn normalized(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::MassOutOfRange { index, value });
            }
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::ZeroWeight(total));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    /// The uniform pmf `(1/n, ..., 1/n)`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Ok(Self {
            masses: vec![1.0 / n as f64; n],
        })
    }

    /// The certainty pmf placing all mass on `index`.
    pub fn vertex(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let mut masses = vec![0.0; n];
        masses[index] = 1.0;
        Ok(Self { masses })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.masses.iter().copied()
    }

    pub fn positive_count(&self) -> usize {
        self.masses.iter().filter(|&&p| p > 0.0).count()
    }

    pub fn max_mass(&self) -> f64 {
        self.masses.iter().copied().fold(0.0, f64::max)
    }

    /// Whether every mass is strictly positive.
    pub fn is_interior(&self) -> bool {
        self.masses.iter().all(|&p| p > 0.0)
    }

    /// Sup-norm distance to another vector of the same dimension.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self
            .iter()
            .zip(other.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Sup-norm distance to the uniform pmf of the same dimension.
    pub fn distance_to_uniform(&self) -> f64 {
        let u = 1.0 / self.len() as f64;
        self.iter().map(|p| (p - u).abs()).fold(0.0, f64::max)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.masses
    }
}

impl TryFrom<Vec<f64>> for ProbabilityVector {
    type Error = Error;

    fn try_from(masses: Vec<f64>) -> Result<Self> {
        Self::new(masses)
    }
}

impl From<ProbabilityVector> for Vec<f64> {
    fn from(pv: ProbabilityVector) -> Self {
        pv.masses
    }
}

impl fmt::Display for ProbabilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.masses.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Pointwise kernels on `[0, 1]`: `s(p) = -p ln p`, `t(p) = -(1-p) ln(1-p)`
/// and their difference `u = s - t`.
///
/// Entropy is `Σ s(p_i)`, extropy is `Σ t(p_i)`, and the entropy-extropy gap
/// is `Σ u(p_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValues {
    pub s: f64,
    pub t: f64,
    pub u: f64,
}

pub fn pointwise_kernels(p: f64) -> Result<KernelValues> {
    check_unit("p", p)?;
    let s = neg_xlogx(p);
    let t = neg_complement_xlogx(p);
    Ok(KernelValues { s, t, u: s - t })
}

/// Shannon entropy `-Σ p_i ln p_i`.
pub fn entropy(pv: &ProbabilityVector) -> f64 {
    pv.iter().map(neg_xlogx).sum()
}

/// Extropy `-Σ (1 - p_i) ln(1 - p_i)`.
pub fn extropy(pv: &ProbabilityVector) -> f64 {
    pv.iter().map(neg_complement_xlogx).sum()
}

/// Entropy of the event pmf `(p, 1 - p)`, which is also its extropy.
pub fn binary_measure(p: f64) -> Result<f64> {
    check_unit("p", p)?;
    Ok(neg_xlogx(p) + neg_complement_xlogx(p))
}

/// Entropy minus extropy, accumulated as `Σ u(p_i)`.
///
/// Zero for pmfs with at most two positive masses and strictly positive
/// otherwise.
pub fn gap(pv: &ProbabilityVector) -> f64 {
    pv.iter()
        .map(|p| neg_xlogx(p) - neg_complement_xlogx(p))
        .sum()
}

/// Sum of the binary entropies of the component events, `Σ H(p_i, 1 - p_i)`.
///
/// Equals entropy plus extropy (the Fermi-Dirac entropy).
pub fn partition_sum(pv: &ProbabilityVector) -> f64 {
    pv.iter()
        .map(|p| neg_xlogx(p) + neg_complement_xlogx(p))
        .sum()
}

/// The complementary pmf `(1 - p) / (n - 1)`.
///
/// The uniform pmf is its unique fixed point.
pub fn complement(pv: &ProbabilityVector) -> Result<ProbabilityVector> {
    let n = pv.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let scale = (n - 1) as f64;
    ProbabilityVector::new(pv.iter().map(|p| (1.0 - p) / scale).collect())
}

/// Repeated application of [`complement`], starting at the input.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementTrajectory {
    pub points: Vec<ProbabilityVector>,
    /// False for `n = 2`, where the map only swaps the two masses.
    pub contracting: bool,
}

impl ComplementTrajectory {
    /// Sup-norm distance to uniform at every step.
    pub fn distances(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(ProbabilityVector::distance_to_uniform)
            .collect()
    }

    pub fn last(&self) -> &ProbabilityVector {
        self.points
            .last()
            .expect("trajectory holds the start point")
    }
}

/// Returns `pv, T(pv), ..., T^k(pv)` for the complement map `T`.
///
/// For `n >= 3` the distance to uniform shrinks by exactly `1 / (n - 1)` per
/// step, since `T(p) - u = -(p - u) / (n - 1)`.
pub fn iterate_complement(pv: &ProbabilityVector, k: usize) -> Result<ComplementTrajectory> {
    let n = pv.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let mut points = Vec::with_capacity(k + 1);
    points.push(pv.clone());
    for _ in 0..k {
        let next = complement(points.last().unwrap())?;
        points.push(next);
    }
    Ok(ComplementTrajectory {
        points,
        contracting: n >= 3,
    })
}

/// Splits mass `index` into `t * p` and `(1 - t) * p`, in that order, giving a
/// pmf of dimension `n + 1`.
pub fn refine(pv: &ProbabilityVector, index: usize, t: f64) -> Result<ProbabilityVector> {
    check_unit("t", t)?;
    let n = pv.len();
    if index >= n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    let mut masses = Vec::with_capacity(n + 1);
    for (i, p) in pv.iter().enumerate() {
        if i == index {
            let head = t * p;
            masses.push(head);
            masses.push(p - head);
        } else {
            masses.push(p);
        }
    }
    ProbabilityVector::new(masses)
}

/// Entropy gained by refining a mass `p1` with split fraction `t`:
/// `p1 * H(t, 1 - t)`.
pub fn entropy_refinement_delta(p1: f64, t: f64) -> Result<f64> {
    check_unit("p1", p1)?;
    Ok(p1 * binary_measure(t)?)
}

/// Extropy gained by refining a mass `p1` with split fraction `t`.
///
/// Equal to `ψ(t p1) + ψ((1 - t) p1) - ψ(p1)` with `ψ(p) = -(1 - p) ln(1 - p)`,
/// and symmetric under `t -> 1 - t`.
pub fn extropy_refinement_delta(p1: f64, t: f64) -> Result<f64> {
    check_unit("p1", p1)?;
    check_unit("t", t)?;
    let head = t * p1;
    let tail = p1 - head;
    Ok(neg_complement_xlogx(head) + neg_complement_xlogx(tail) - neg_complement_xlogx(p1))
}

/// Entropy of `uniform(n)`: `ln n`.
pub fn max_entropy_value(n: usize) -> f64 {
    (n as f64).ln()
}

/// Extropy of `uniform(n)`: `(n - 1) ln(n / (n - 1))`, or 0 for `n = 1`.
///
/// Strictly increasing in `n` and bounded above by 1.
pub fn max_extropy_value(n: usize) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let m = (n - 1) as f64;
    m * (1.0 / m).ln_1p()
}

/// Quadratic approximation `1 - ½ Σ p_i²` of extropy (a rescaled Gini
/// index), accurate when the largest mass is small.
pub fn extropy_quadratic_approx(pv: &ProbabilityVector) -> f64 {
    1.0 - 0.5 * pv.iter().map(|p| p * p).sum::<f64>()
}

/// Repeat rate `Σ p_i²`.
pub fn repeat_rate(pv: &ProbabilityVector) -> f64 {
    pv.iter().map(|p| p * p).sum()
}

/// Entropy `-ΣΣ m_ij ln m_ij` of a joint pmf given as a rectangular matrix.
pub fn joint_entropy(joint: &[Vec<f64>]) -> Result<f64> {
    let cols = joint
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidJoint("no rows".into()))?;
    if cols == 0 {
        return Err(Error::InvalidJoint("no columns".into()));
    }
    let mut total = 0.0;
    for (r, row) in joint.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::InvalidJoint(format!(
                "row {r} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for &m in row {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidJoint(format!(
                    "entry {m} in row {r} is negative"
                )));
            }
            total += m;
        }
    }
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidJoint(format!("entries sum to {total}")));
    }
    Ok(joint.iter().flatten().copied().map(neg_xlogx).sum())
}

/// All pmfs of dimension `n` whose masses are multiples of `1 / m`, in
/// lexicographic order of the integer numerators.
///
/// There are `C(m + n - 1, n - 1)` such points.
pub fn simplex_lattice(n: usize, m: usize) -> Result<Vec<ProbabilityVector>> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if m == 0 {
        return Err(Error::Resolution { got: m, min: 1 });
    }
    let mut out = Vec::new();
    let mut counts = vec![0usize; n];
    fill_lattice(&mut counts, 0, m, m, &mut out);
    Ok(out)
}

fn fill_lattice(
    counts: &mut [usize],
    pos: usize,
    remaining: usize,
    m: usize,
    out: &mut Vec<ProbabilityVector>,
) {
    if pos == counts.len() - 1 {
        counts[pos] = remaining;
        let masses = counts.iter().map(|&c| c as f64 / m as f64).collect();
        out.push(ProbabilityVector { masses });
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        fill_lattice(counts, pos + 1, remaining - c, m, out);
    }
}
