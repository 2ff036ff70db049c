//! Entropy and its dual, extropy, for finite distributions and tabulated
//! densities.
//!
//! For a pmf `p` on `n` outcomes,
//!
//! * entropy `H(p) = -Σ p_i ln p_i`
//! * extropy `J(p) = -Σ (1 - p_i) ln(1 - p_i)`
//!
//! Extropy is entropy seen through the complement map
//! `q_i = (1 - p_i) / (n - 1)`. The [`divergence`] and [`continuum`] modules
//! carry that duality over to relative measures and densities; [`scoring`]
//! uses it to evaluate forecasts.
//!
//! ```
//! use extropy::{entropy, extropy, ProbabilityVector};
//!
//! let p = ProbabilityVector::new(vec![0.25, 0.5, 0.25]).unwrap();
//! assert!((entropy(&p) - 1.0397).abs() < 1e-4);
//! assert!((extropy(&p) - 0.7781).abs() < 1e-4);
//! ```

pub mod continuum;
pub mod divergence;
pub mod error;
pub mod io;
pub mod scoring;
pub mod simplex;

pub use divergence::{
    bregman, complementary_divergence, half_euclidean, kl_divergence, BregmanGenerator,
    ExtendedNonNegative, HalfSquaredNorm, NegEntropy, NegExtropy,
};
pub use error::{Error, Result};
pub use scoring::{score_sequence, ForecastRecord, ScoringRule};
pub use simplex::{complement, entropy, extropy, gap, partition_sum, ProbabilityVector};

/// Compiles and runs the guide's code snippets as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/complement.md")]
    mod complement {}
    #[doc = include_str!("../../../book/src/divergences.md")]
    mod divergences {}
    #[doc = include_str!("../../../book/src/continuum.md")]
    mod continuum {}
    #[doc = include_str!("../../../book/src/scoring.md")]
    mod scoring {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
