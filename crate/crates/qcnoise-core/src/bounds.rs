//! Closed-form divergences and the Pinsker / reverse-Pinsker envelope.
//!
//! Nothing here enumerates: every quantity is a formula in (n, τ, s, ω) and
//! scales to cryptographic n. The exact tables of [`crate::exact`] serve as
//! oracles for these formulas at desk scale.
//!
//! All divergences are in bits. Pinsker's inequality is classically stated
//! in nats, so the upper bound carries the ln 2 conversion:
//! Δ_tv ≤ sqrt(ln 2 / 2 · D_bits). The reverse direction Δ_tv ≥ D/(3s) comes
//! from bounding the pointwise ratio P/Q inside [8^{−s}, 8^s] (valid for
//! spanning specs once n ≥ 3 and ω ≥ log₂ n) and is already a base-2
//! statement.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use crate::bernoulli::BiasExponent;
use crate::exact::{self, DistTable, EnumerationCaps, ExactError, NoiseSpec};
use crate::math;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error(
        "independent-coordinate model has a zero cell (index {index}); the marginal bias must be positive and finite"
    )]
    ZeroModelCell { index: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// D(tR ‖ I) = n · (h̃(τω) − h̃(ω)) for invertible t of weight τ:
/// multiplication by a unit preserves entropy, and KL against the
/// matched-marginal product law is the entropy gap. Clamped at 0 against
/// last-ulp rounding; it is 0 exactly when τ = 1 or the bias degenerates.
pub fn kl_closed_form(n: usize, tau: usize, omega: BiasExponent) -> f64 {
    (n as f64 * (omega.scale(tau).entropy() - omega.entropy())).max(0.0)
}

/// The equal-terms special case t₁ = … = t_s = t: the sum collapses to
/// t(R₁ + … + R_s) with R₁ + … + R_s ← Ber(sω)^⊗n, so
/// D = n · (h̃(|t|sω) − h̃(sω)).
pub fn kl_equal_terms(n: usize, t_weight: usize, s: usize, omega: BiasExponent) -> f64 {
    kl_closed_form(n, t_weight, omega.scale(s))
}

/// E[|tR|] = n · p(τω) — each coefficient is Ber(τω) by piling-up and
/// expectation is linear, dependence notwithstanding.
pub fn expected_weight(n: usize, tau: usize, omega: BiasExponent) -> f64 {
    n as f64 * omega.scale(tau).p()
}

/// Pinsker's inequality as an upper bound on Δ_tv from a KL divergence in
/// bits: Δ_tv ≤ sqrt(ln 2 / 2 · D).
pub fn pinsker_upper(kl_bits: f64) -> f64 {
    math::sqrt(0.5 * LN_2 * kl_bits.max(0.0))
}

/// The reverse-Pinsker lower bound Δ_tv ≥ D/(3s), with D in bits.
///
/// Valid when n ≥ 3, ω ≥ log₂ n and the t₁ … t_s span Pₙ: the pointwise
/// ratio of the two laws then sits in [8^{−s}, 8^s], and the x·log x
/// envelope of the reverse Pinsker inequality evaluates to exactly 3s at
/// those endpoints. The caller asserts the preconditions (see
/// [`Preconditions`]).
pub fn reverse_pinsker_lower(kl_bits: f64, s: usize) -> f64 {
    kl_bits / (3.0 * s as f64)
}

/// Extremes of the pointwise ratio P(x)/Q(x) between the exact law and the
/// independent-coordinate model, and whether they stay inside the
/// [8^{−s}, 8^s] window the reverse-Pinsker constant is derived from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioBounds {
    pub min: f64,
    pub max: f64,
    pub ok: bool,
}

/// Scans the exact tables for min and max of P/Q. A zero Q cell means the
/// model itself is degenerate (τω = 0); a zero P cell is reported through
/// `min = 0`, which fails the window check, as non-spanning specs must.
pub fn ratio_bounds_check(
    spec: &NoiseSpec,
    caps: EnumerationCaps,
) -> Result<RatioBounds, BoundsError> {
    let p = exact::dist_sum(spec, caps)?;
    let q = exact::ideal_table(spec.n(), spec.tau(), spec.omega(), caps)?;
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for (index, (&pv, &qv)) in p.probs().iter().zip(q.probs()).enumerate() {
        if qv == 0.0 {
            return Err(BoundsError::ZeroModelCell { index });
        }
        let ratio = pv / qv;
        min = min.min(ratio);
        max = max.max(ratio);
    }
    let window = math::powi(8.0, spec.s());
    Ok(RatioBounds {
        min,
        max,
        ok: min >= 1.0 / window && max <= window,
    })
}

/// The arithmetic-progression divergence lower bound, possibly vacuous.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApLowerBound {
    pub value: f64,
    /// τ ≤ 2s: the bound is ≤ 0, which KL satisfies for free (and for
    /// τ < 2s it goes negative). Reported rather than suppressed.
    pub vacuous: bool,
}

/// D(t₁R₁ + … + t_sR_s ‖ Ber(τω)^⊗n) ≥ (n−1)/2 · (h̃(τω) − h̃(2sω)) when
/// every supp(t_k) is an arithmetic progression with a common difference
/// coprime to odd n. The caller vouches for those support preconditions
/// (checked by [`crate::exact::total_entropy_bound_ap`]).
pub fn ap_divergence_lower(n: usize, tau: usize, s: usize, omega: BiasExponent) -> ApLowerBound {
    let value = (n - 1) as f64 / 2.0 * (omega.scale(tau).entropy() - omega.scale(2 * s).entropy());
    ApLowerBound {
        value,
        vacuous: tau <= 2 * s,
    }
}

/// Constants 0 < c < C with c · n · 2^{−2ω} ≤ kl_closed_form ≤ C · n · 2^{−2ω}
/// for all τ ≥ 2 and ω ≥ 2, derived once from the entropy approximation:
///
/// h̃(τω) − h̃(ω) = (2^{−2ω} − 2^{−2τω})/(2 ln 2) ± (r(ω) + r(τω)) with r the
/// certified Taylor remainder bound. At x = 2^{−ω} ≤ 1/4 and τ ≥ 2 the
/// subtracted term is ≤ x²·2^{−2ω} and the remainders are ≤ the x² terms
/// below, giving an explicit bracket around 1/(2 ln 2) ≈ 0.72.
pub fn envelope_constants() -> (f64, f64) {
    let x = 0.25; // the largest 2^{−ω} on the domain ω ≥ 2
    let x2 = x * x;
    let center = 1.0 / (2.0 * LN_2);
    // r(ω)/2^{−2ω} ≤ x²·((1+x)^{−3} + (1−x)^{−3})/(24 ln 2)
    let rem_near =
        x2 * (1.0 / math::powi(1.0 + x, 3) + 1.0 / math::powi(1.0 - x, 3)) / (24.0 * LN_2);
    // r(τω)/2^{−2ω} ≤ x⁶·(1 + (1−x²)^{−3})/(24 ln 2), using 2^{−τω} ≤ x²
    let rem_far = x2 * x2 * x2 * (1.0 + 1.0 / math::powi(1.0 - x2, 3)) / (24.0 * LN_2);
    let slack = rem_near + rem_far;
    (center * (1.0 - x2) - slack, center + slack)
}

/// Which hypotheses of the statistical-distance bounds hold for a
/// configuration. `spanning` is `None` when the polynomials themselves are
/// not available (closed-form-only runs).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Preconditions {
    pub n_ge_3: bool,
    pub omega_ge_log2n: bool,
    pub spanning: Option<bool>,
}

impl Preconditions {
    /// "ω ≥ log n" with the logarithm read base 2, matching the bit
    /// convention used everywhere else.
    pub fn evaluate(n: usize, omega: BiasExponent, spanning: Option<bool>) -> Self {
        Self {
            n_ge_3: n >= 3,
            omega_ge_log2n: omega.bits() >= math::log2(n as f64),
            spanning,
        }
    }

    /// All hypotheses verified true (an unknown spanning status counts as
    /// unverified).
    pub fn all_met(&self) -> bool {
        self.n_ge_3 && self.omega_ge_log2n && self.spanning == Some(true)
    }
}

/// One configuration's divergence picture: the closed forms always, the
/// exact quantities when a desk-scale table was computable, and the
/// Pinsker / reverse-Pinsker envelope around Δ_tv.
///
/// The envelope is computed from `kl_exact` when present, else from
/// `kl_closed_form`. When all exact quantities are present and the
/// preconditions hold, reverse_pinsker_lower ≤ tv_exact ≤ pinsker_upper.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DivergenceReport {
    pub n: usize,
    pub s: usize,
    pub tau: usize,
    pub omega: BiasExponent,
    pub kl_closed_form: f64,
    #[cfg_attr(feature = "serde", serde(with = "optional_extended_f64"))]
    pub kl_exact: Option<f64>,
    pub tv_exact: Option<f64>,
    pub entropy_exact: Option<f64>,
    pub entropy_ideal: Option<f64>,
    pub pinsker_upper: f64,
    pub reverse_pinsker_lower: f64,
    pub preconditions: Preconditions,
    pub vacuous_flags: Vec<String>,
    #[cfg_attr(
        feature = "serde",
        serde(skip_serializing_if = "Option::is_none", default)
    )]
    pub ap: Option<ApReport>,
}

/// The arithmetic-progression section of a report, when requested.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ApReport {
    /// Common difference of the progressions.
    pub a: usize,
    pub lower_bound: f64,
    pub vacuous: bool,
    /// The pairing argument needs odd n; primality is what the analysis
    /// assumes, so composite odd n is accepted but flagged here.
    pub n_prime: bool,
}

impl DivergenceReport {
    /// Closed-form-only report (any n).
    pub fn closed_form(n: usize, s: usize, tau: usize, omega: BiasExponent) -> Self {
        let kl = kl_closed_form(n, tau, omega);
        Self {
            n,
            s,
            tau,
            omega,
            kl_closed_form: kl,
            kl_exact: None,
            tv_exact: None,
            entropy_exact: None,
            entropy_ideal: None,
            pinsker_upper: pinsker_upper(kl),
            reverse_pinsker_lower: reverse_pinsker_lower(kl, s),
            preconditions: Preconditions::evaluate(n, omega, None),
            vacuous_flags: Vec::new(),
            ap: None,
        }
    }

    /// Report with the exact table quantities filled in.
    pub fn from_tables(
        spec: &NoiseSpec,
        table: &DistTable,
        model: &DistTable,
    ) -> Result<Self, ExactError> {
        let n = spec.n();
        let kl_exact = table.kl(model)?;
        let tv_exact = table.tv(model)?;
        let envelope_kl = if kl_exact.is_finite() {
            kl_exact
        } else {
            kl_closed_form(n, spec.tau(), spec.omega())
        };
        Ok(Self {
            n,
            s: spec.s(),
            tau: spec.tau(),
            omega: spec.omega(),
            kl_closed_form: kl_closed_form(n, spec.tau(), spec.omega()),
            kl_exact: Some(kl_exact),
            tv_exact: Some(tv_exact),
            entropy_exact: Some(table.entropy()),
            entropy_ideal: Some(model.entropy()),
            pinsker_upper: pinsker_upper(envelope_kl),
            reverse_pinsker_lower: reverse_pinsker_lower(envelope_kl, spec.s()),
            preconditions: Preconditions::evaluate(n, spec.omega(), Some(spec.spanning())),
            vacuous_flags: Vec::new(),
            ap: None,
        })
    }
}

/// Serializes `Option<f64>` with ∞ ↦ "inf" (JSON has no infinities and the
/// distinguished value must survive the round trip).
#[cfg(feature = "serde")]
mod optional_extended_f64 {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
        match v {
            None => serializer.serialize_none(),
            Some(x) if x.is_infinite() => serializer.serialize_str("inf"),
            Some(x) => serializer.serialize_f64(*x),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(alloc::string::String),
            Null,
        }
        match Repr::deserialize(deserializer)? {
            Repr::Number(x) => Ok(Some(x)),
            Repr::Text(s) if s == "inf" => Ok(Some(f64::INFINITY)),
            Repr::Text(s) => Err(D::Error::custom(alloc::format!(
                "expected a number or \"inf\", got \"{s}\""
            ))),
            Repr::Null => Ok(None),
        }
    }
}
