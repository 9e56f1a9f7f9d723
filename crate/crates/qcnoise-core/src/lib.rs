//! Distribution analysis for quasi-cyclic Bernoulli noise products.
//!
//! Everything lives in the quotient ring `Pₙ = F₂[X]/(Xⁿ − 1)`. Fixed sparse
//! polynomials t₁, …, t_s are multiplied with random polynomials R₁, …, R_s
//! whose coefficients are independent `Ber(ω)` bits (`Pr[1] = (1 − 2^{−ω})/2`),
//! and this crate answers, exactly at desk scale and in closed form at any
//! scale, how far the law of t₁R₁ + … + t_sR_s is from the
//! independent-coordinate model with the same marginals.
//!
//! The crate is split along that line:
//!
//! - [`ring`]: exact arithmetic in Pₙ (bit-packed cyclic convolution,
//!   gcd/inversion, ideal structure).
//! - [`bernoulli`]: the ω-parametrized Bernoulli family, its entropy, the
//!   quadratic entropy approximation with explicit remainder bounds, and
//!   seeded sampling.
//! - [`exact`]: explicit probability tables over all 2ⁿ ring elements,
//!   entropy/KL/TV, the λ shift-overlap profile, and pairwise joint laws.
//! - [`bounds`]: closed-form divergences and the Pinsker / reverse-Pinsker
//!   envelope, valid at any n.
//! - [`experiments`]: a seeded, reproducible Monte-Carlo harness for weight
//!   statistics at large n.
//!
//! All entropies and divergences are in bits (log base 2).
//!
//! The crate is `no_std`-compatible: disable default features and enable
//! `libm` to build without the standard library (an allocator is required).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("qcnoise-core needs either the `std` feature or the `libm` feature");

pub mod bernoulli;
pub mod bounds;
pub mod dd;
pub mod exact;
pub mod experiments;
mod math;
pub mod poly;
pub mod ring;

pub use bernoulli::{BiasExponent, EntropyApprox};
pub use bounds::{DivergenceReport, Preconditions};
pub use exact::{DistTable, EnumerationCaps, LambdaProfile, NoiseSpec, PairTable};
pub use experiments::WeightStats;
pub use poly::Poly;
pub use ring::{IdealDescriptor, RingElement};
