//! Phase-space simulation of a light-to-matter quantum interface built from
//! quantum-non-demolition (QND) couplings.
//!
//! * [`phase_space`]: symplectic gates on the quadratures
//!   `(x_L, p_L, x_M, p_M, x_A, p_A)` and feed-forward output maps.
//! * [`wigner`]: closed-form calculus on polynomial × Gaussian Wigner
//!   functions, plus a brute-force integration oracle.
//! * [`protocols`]: the deterministic sequential and joint transfer schemes
//!   and the probabilistic post-selected scheme.
//! * [`metrics`]: fidelity, negativity and inversion of the success
//!   probability.
//!
//! Gate algebra is generic over [`Scalar`] (floats and exact rationals);
//! anything transcendental is generic over [`Real`] (`f32`/`f64`). The
//! aliases below fix the common choices.

pub mod error;
pub mod linalg;
pub mod metrics;
pub mod phase_space;
pub mod protocols;
pub mod scalar;
pub mod wigner;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

use num_rational::Ratio;

/// Exact rational scalar for gate algebra.
pub type Exact = Ratio<i64>;

pub type Matrix64 = linalg::Matrix<f64>;
pub type Symplectic64 = phase_space::SymplecticMatrix<f64>;
pub type Symplectic32 = phase_space::SymplecticMatrix<f32>;
pub type SymplecticExact = phase_space::SymplecticMatrix<Exact>;
pub type AffineMap64 = phase_space::ConditionalAffineMap<f64>;
pub type AffineMapExact = phase_space::ConditionalAffineMap<Exact>;

pub type Wigner64 = wigner::GaussPolyWigner<f64>;
pub type Wigner32 = wigner::GaussPolyWigner<f32>;
pub type Slices64 = wigner::WindowSlices<f64>;

pub type SequentialConfig64 = protocols::SequentialConfig<f64>;
pub type SequentialConfigExact = protocols::SequentialConfig<Exact>;
pub type JointConfig64 = protocols::JointConfig<f64>;
pub type ProbabilisticConfig64 = protocols::ProbabilisticConfig<f64>;
pub type ProbabilisticResult64 = protocols::ProbabilisticResult<f64>;

/// Version string recorded in sweep metadata.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
