//! The ω-parametrized Bernoulli family.
//!
//! A `Ber(ω)` bit is 1 with probability p(ω) = (1 − 2^{−ω})/2, so ω is the
//! (negative) log of the bias: ω = 0 is the constant-zero bit and ω = ∞ is a
//! fair coin. The point of the parametrization is the piling-up lemma — the
//! XOR of independent `Ber(ω₁)` and `Ber(ω₂)` bits is `Ber(ω₁ + ω₂)` — which
//! turns the bias bookkeeping for sums of products into plain addition.
//!
//! Entropies are in bits throughout.

use alloc::string::String;
use core::f64::consts::LN_2;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::math;
use crate::ring::RingElement;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum BernoulliError {
    #[error("bias exponent must be a nonnegative number, got {value}")]
    InvalidBias { value: f64 },
    #[error("cannot parse `{input}` as a bias exponent (a nonnegative number or `inf`)")]
    InvalidBiasString { input: String },
}

/// The bias exponent ω of a `Ber(ω)` bit: `Pr[1] = (1 − 2^{−ω})/2`.
///
/// Nonnegative; `+∞` is the uniform bit. Exponents add under XOR of
/// independent bits (piling-up), so [`BiasExponent::pile_up`] is a plain sum.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BiasExponent(f64);

impl BiasExponent {
    /// The constant-zero bit.
    pub const ZERO: Self = Self(0.0);

    /// The uniform bit (ω = ∞), p = 1/2 exactly.
    pub const UNIFORM: Self = Self(f64::INFINITY);

    pub fn new(omega: f64) -> Result<Self, BernoulliError> {
        if omega.is_nan() || omega < 0.0 {
            return Err(BernoulliError::InvalidBias { value: omega });
        }
        Ok(Self(omega))
    }

    pub fn bits(self) -> f64 {
        self.0
    }

    pub fn is_uniform(self) -> bool {
        self.0.is_infinite()
    }

    /// k·ω, the exponent of an XOR of k independent `Ber(ω)` bits.
    /// 0·∞ = 0: an empty XOR is the constant-zero bit.
    pub fn scale(self, k: usize) -> Self {
        if k == 0 {
            return Self::ZERO;
        }
        Self(self.0 * k as f64)
    }

    /// Piling-up lemma: the XOR of independent bits sums the exponents.
    /// An empty list yields ω = 0, the XOR identity.
    pub fn pile_up<I: IntoIterator<Item = BiasExponent>>(omegas: I) -> Self {
        Self(omegas.into_iter().map(|w| w.0).sum())
    }

    /// p(ω) = (1 − 2^{−ω})/2, the probability of sampling 1.
    pub fn p(self) -> f64 {
        0.5 * (1.0 - math::exp2(-self.0))
    }

    /// h̃(ω) in bits: the entropy of a `Ber(ω)` bit, with h̃(0) = 0 by
    /// continuity and h̃(∞) = 1.
    pub fn entropy(self) -> f64 {
        binary_entropy(self.p())
    }
}

/// h(p) = −p·log₂ p − (1 − p)·log₂(1 − p), with the 0·log 0 terms read as 0.
pub fn binary_entropy(p: f64) -> f64 {
    let q = 1.0 - p;
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * math::log2(p);
    }
    if q > 0.0 {
        h -= q * math::log2(q);
    }
    h
}

impl fmt::Display for BiasExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Accepts a decimal number or the literal `inf`.
impl core::str::FromStr for BiasExponent {
    type Err = BernoulliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") {
            return Ok(Self::UNIFORM);
        }
        let value: f64 = t.parse().map_err(|_| BernoulliError::InvalidBiasString {
            input: String::from(s),
        })?;
        Self::new(value)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for BiasExponent {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for BiasExponent {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = BiasExponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a nonnegative number or the string \"inf\"")
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<BiasExponent, E> {
                BiasExponent::new(v).map_err(E::custom)
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<BiasExponent, E> {
                BiasExponent::new(v as f64).map_err(E::custom)
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<BiasExponent, E> {
                BiasExponent::new(v as f64).map_err(E::custom)
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<BiasExponent, E> {
                v.parse().map_err(E::custom)
            }
        }
        deserializer.deserialize_any(Visitor)
    }
}

/// The quadratic approximation of h̃(ω) with an explicit remainder bound:
/// h̃(ω) = 1 − 2^{−2ω}/(2 ln 2) + O(2^{−4ω}), and
/// |h̃(ω) − first_order| ≤ remainder_bound pointwise.
///
/// The inequality is about the mathematical h̃(ω); `value` is its nearest
/// f64. For ω ≳ 12 the remainder drops below the resolution of a difference
/// of two f64s near 1.0, so subtracting the fields directly measures
/// quantization, not the remainder — the verification suites re-evaluate
/// both sides in double-double precision (see [`crate::dd`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyApprox {
    /// h̃(ω) itself.
    pub value: f64,
    /// 1 − 2^{−2ω}/(2 ln 2).
    pub first_order: f64,
    /// (|ε₊|max + |ε₋|max)/2 from the Lagrange forms of the cubic Taylor
    /// remainders of (1 ± x)log(1 ± x) at x = 2^{−ω}:
    /// |ε±| ≤ x⁴ / (12 ln 2 · (1 ∓ x)³). O(2^{−4ω}) for ω bounded away from 0.
    pub remainder_bound: f64,
}

/// Quadratic entropy approximation with a certified enclosure.
///
/// The quadratic coefficient is 1/(2 ln 2): writing x = 2^{−ω},
/// h̃(ω) = 1 − (1/2)·((1+x)log(1+x) + (1−x)log(1−x)) and the x² terms of the
/// two Taylor series add to x²/ln 2 before the outer 1/2. The test suite
/// sweeps ω ∈ {1, 1.5, …, 30} and confirms the enclosure holds with this
/// coefficient and fails for every ω with the coefficient 1/ln 2.
///
/// For ω = 0 the bound degenerates to +∞ (x = 1 sits on the boundary of the
/// log(1 − x) expansion), which is still a valid enclosure.
pub fn entropy_approx(omega: BiasExponent) -> EntropyApprox {
    let x = math::exp2(-omega.bits());
    let x2 = x * x;
    let x4 = x2 * x2;
    let first_order = 1.0 - x2 / (2.0 * LN_2);
    let eps_plus = x4 / (12.0 * LN_2 * math::powi(1.0 + x, 3));
    let eps_minus = x4 / (12.0 * LN_2 * math::powi(1.0 - x, 3));
    // Inflated by a few ulps so the f64 evaluation stays an upper bound; the
    // true remainder approaches the bound to within O(2^{−2ω}) relative.
    let remainder_bound = 0.5 * (eps_plus + eps_minus) * (1.0 + 4e-15);
    EntropyApprox {
        value: omega.entropy(),
        first_order,
        remainder_bound,
    }
}

/// The deterministic generator used everywhere randomness is needed: ChaCha
/// with 8 rounds, a counter-mode stream cipher keyed by the 64-bit seed.
/// Distinct stream ids give independent, reproducible streams for parallel
/// workers. Not used for anything secret.
pub type NoiseRng = ChaCha8Rng;

/// The generator for (seed, stream id). Same pair, same bits, always.
pub fn stream_rng(seed: u64, stream: u64) -> NoiseRng {
    let mut rng = NoiseRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One uniform 64-bit word per coefficient, compared against
/// ⌊p(ω)·2⁶⁴⌋. Coefficients are drawn in index order 0, 1, …, n−1.
pub fn sample_poly(omega: BiasExponent, n: usize, rng: &mut impl RngCore) -> RingElement {
    let threshold = bit_threshold(omega);
    let mut support = alloc::vec::Vec::new();
    for i in 0..n {
        if rng.next_u64() < threshold {
            support.push(i);
        }
    }
    RingElement::from_support(n, &support).expect("indices are in range and distinct")
}

/// ⌊p(ω)·2⁶⁴⌋ as the acceptance threshold for one u64 draw. p ≤ 1/2, so the
/// product stays below 2⁶³ and the cast is exact for the uniform case.
pub(crate) fn bit_threshold(omega: BiasExponent) -> u64 {
    (omega.p() * 18_446_744_073_709_551_616.0) as u64
}
