#![allow(dead_code)]

use extropy::ProbabilityVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Flat-Dirichlet draw: normalized unit exponentials.
pub fn random_pmf(rng: &mut impl Rng, n: usize) -> ProbabilityVector {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    ProbabilityVector::normalized(&w).unwrap()
}

/// A pmf with a random number of exact zeros, for boundary coverage.
pub fn random_sparse_pmf(rng: &mut impl Rng, n: usize) -> ProbabilityVector {
    let keep: usize = rng.gen_range(1..=n);
    let mut w: Vec<f64> = (0..n)
        .map(|i| {
            if i < keep {
                -(1.0 - rng.gen::<f64>()).ln()
            } else {
                0.0
            }
        })
        .collect();
    for i in (1..n).rev() {
        w.swap(i, rng.gen_range(0..=i));
    }
    ProbabilityVector::normalized(&w).unwrap()
}

/// Masses `(1 + δ_i) / n` with `|δ_i| ≤ spread < 1`, so the largest mass is
/// below `(1 + spread) / n`.
pub fn near_uniform_pmf(rng: &mut impl Rng, n: usize, spread: f64) -> ProbabilityVector {
    let half = n / 2;
    let mut d: Vec<f64> = (0..half).map(|_| spread * rng.gen::<f64>()).collect();
    // pair each bump with its negative so the masses already sum to 1
    let neg: Vec<f64> = d.iter().map(|x| -x).collect();
    d.extend(neg);
    d.resize(n, 0.0);
    for i in (1..n).rev() {
        d.swap(i, rng.gen_range(0..=i));
    }
    let w: Vec<f64> = d.iter().map(|x| (1.0 + x) / n as f64).collect();
    ProbabilityVector::normalized(&w).unwrap()
}

pub fn pv(m: &[f64]) -> ProbabilityVector {
    ProbabilityVector::new(m.to_vec()).unwrap()
}

/// Direct sums straight from the definitions, independent of the library.
pub mod oracle {
    pub fn entropy(p: &[f64]) -> f64 {
        p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
    }

    pub fn extropy(p: &[f64]) -> f64 {
        p.iter()
            .filter(|&&x| x < 1.0)
            .map(|&x| -(1.0 - x) * (1.0 - x).ln())
            .sum()
    }

    pub fn kl(p: &[f64], s: &[f64]) -> f64 {
        p.iter()
            .zip(s)
            .filter(|(a, _)| **a > 0.0)
            .map(|(a, b)| a * (a / b).ln())
            .sum()
    }

    pub fn ckl(p: &[f64], s: &[f64]) -> f64 {
        p.iter()
            .zip(s)
            .filter(|(a, _)| **a < 1.0)
            .map(|(a, b)| (1.0 - a) * ((1.0 - a) / (1.0 - b)).ln())
            .sum()
    }

    pub fn complement(p: &[f64]) -> Vec<f64> {
        let m = (p.len() - 1) as f64;
        p.iter().map(|x| (1.0 - x) / m).collect()
    }
}
