//! Seeded Monte-Carlo harness for regimes beyond the enumeration caps.
//!
//! Trials are split into fixed-size chunks; chunk c draws from the ChaCha
//! stream with id c under the master seed, and every accumulator is integer
//! valued, so merging chunks commutes exactly. Results are therefore
//! bit-identical for any worker count and any merge order — a parallel
//! driver only has to hand out chunk indices.
//!
//! Within a trial the draws are term-major: all n coefficients of R₁, then
//! R₂, and so on, one u64 per coefficient.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::bernoulli::{bit_threshold, stream_rng};
use crate::exact::{self, EnumerationCaps, ExactError, NoiseSpec};
use crate::math::{self, NeumaierSum};
use crate::ring::RingElement;

/// Trials per RNG stream. Fixed, so the trial → stream assignment never
/// depends on the worker count.
pub const TRIALS_PER_CHUNK: u64 = 4096;

/// Number of chunks needed for a trial budget.
pub fn chunk_count(trials: u64) -> u64 {
    trials.div_ceil(TRIALS_PER_CHUNK)
}

/// Trials assigned to one chunk (the last chunk takes the remainder).
pub fn chunk_trials(trials: u64, chunk: u64) -> u64 {
    let start = chunk * TRIALS_PER_CHUNK;
    TRIALS_PER_CHUNK.min(trials.saturating_sub(start))
}

/// One draw of t₁R₁ + … + t_sR_s with independent Rᵢ ← Ber(ω)^⊗n.
pub fn sample_noise(spec: &NoiseSpec, rng: &mut impl RngCore) -> RingElement {
    let n = spec.n();
    let threshold = bit_threshold(spec.omega());
    let mut acc = RingElement::zero(n);
    for t in spec.terms() {
        let mut support = Vec::new();
        for i in 0..n {
            if rng.next_u64() < threshold {
                support.push(i);
            }
        }
        let r = RingElement::from_support(n, &support).expect("in-range distinct indices");
        acc = acc
            .add(&t.mul(&r).expect("matching ring lengths"))
            .expect("matching ring lengths");
    }
    acc
}

/// Integer accumulator for weight statistics; merging is exact and
/// commutative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAccumulator {
    trials: u64,
    weight_sum: u64,
    weight_sq_sum: u128,
    histogram: Vec<u64>,
}

impl WeightAccumulator {
    pub fn new(n: usize) -> Self {
        Self {
            trials: 0,
            weight_sum: 0,
            weight_sq_sum: 0,
            histogram: vec![0; n + 1],
        }
    }

    pub fn record(&mut self, weight: usize) {
        self.trials += 1;
        self.weight_sum += weight as u64;
        self.weight_sq_sum += (weight as u128) * (weight as u128);
        self.histogram[weight] += 1;
    }

    pub fn merge(&mut self, other: &WeightAccumulator) {
        assert_eq!(self.histogram.len(), other.histogram.len());
        self.trials += other.trials;
        self.weight_sum += other.weight_sum;
        self.weight_sq_sum += other.weight_sq_sum;
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }
}

/// Summary of a weight experiment.
///
/// `variance` is the plug-in (population) variance of the observed weights;
/// `z_score` is (mean − expected_mean) over the standard error
/// sqrt(variance/trials). The expectation n·p(τω) is exact; the spread of
/// |noise| has no closed form here, so concentration is reported, not
/// asserted.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightStats {
    pub trials: u64,
    pub mean: f64,
    pub variance: f64,
    /// `histogram[w]` = number of trials with |noise| = w, for w = 0 … n.
    pub histogram: Vec<u64>,
    pub expected_mean: f64,
    pub z_score: f64,
}

impl WeightStats {
    fn from_accumulator(acc: &WeightAccumulator, expected_mean: f64) -> Self {
        let trials = acc.trials;
        let tf = trials as f64;
        let mean = acc.weight_sum as f64 / tf;
        let variance = (acc.weight_sq_sum as f64 - (acc.weight_sum as f64) * mean) / tf;
        let variance = variance.max(0.0);
        let se = math::sqrt(variance / tf);
        let z_score = if se == 0.0 {
            if mean == expected_mean {
                0.0
            } else if mean > expected_mean {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else {
            (mean - expected_mean) / se
        };
        Self {
            trials,
            mean,
            variance,
            histogram: acc.histogram.clone(),
            expected_mean,
            z_score,
        }
    }

    /// The populated histogram rows, in weight order.
    pub fn nonzero_bins(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.histogram
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(w, &c)| (w, c))
    }
}

/// Runs one chunk of the weight experiment on stream `chunk`.
pub fn weight_chunk(spec: &NoiseSpec, seed: u64, chunk: u64, trials: u64) -> WeightAccumulator {
    let mut acc = WeightAccumulator::new(spec.n());
    let mut rng = stream_rng(seed, chunk);
    for _ in 0..trials {
        acc.record(sample_noise(spec, &mut rng).weight());
    }
    acc
}

/// Statistics over i.i.d. draws of |t₁R₁ + … + t_sR_s|, chunked and seeded:
/// identical (spec, trials, seed) give identical results, whatever the
/// execution order of the chunks.
pub fn weight_experiment(spec: &NoiseSpec, trials: u64, seed: u64) -> WeightStats {
    let mut acc = WeightAccumulator::new(spec.n());
    for chunk in 0..chunk_count(trials) {
        acc.merge(&weight_chunk(
            spec,
            seed,
            chunk,
            chunk_trials(trials, chunk),
        ));
    }
    WeightStats::from_accumulator(&acc, expected_mean(spec))
}

/// Assembles final statistics from merged chunk accumulators (the parallel
/// driver's entry point).
pub fn weight_stats_from(spec: &NoiseSpec, acc: &WeightAccumulator) -> WeightStats {
    WeightStats::from_accumulator(acc, expected_mean(spec))
}

fn expected_mean(spec: &NoiseSpec) -> f64 {
    spec.n() as f64 * spec.marginal_bias().p()
}

/// Total variation between the empirical distribution of `trials` sampled
/// noise values and the exact law from [`exact::dist_sum`]. Only meaningful
/// at desk scale, so the same cap applies; this is the sampler's validation
/// hook, not a large-n estimator.
pub fn empirical_tv(
    spec: &NoiseSpec,
    trials: u64,
    seed: u64,
    caps: EnumerationCaps,
) -> Result<f64, ExactError> {
    let table = exact::dist_sum(spec, caps)?;
    let mut counts = vec![0u64; 1usize << spec.n()];
    for chunk in 0..chunk_count(trials) {
        let mut rng = stream_rng(seed, chunk);
        for _ in 0..chunk_trials(trials, chunk) {
            counts[sample_noise(spec, &mut rng).to_index()] += 1;
        }
    }
    let tf = trials as f64;
    let mut acc = NeumaierSum::new();
    for (&count, &p) in counts.iter().zip(table.probs()) {
        acc.add(math::abs(count as f64 / tf - p));
    }
    Ok(0.5 * acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernoulli::BiasExponent;

    fn bias(omega: f64) -> BiasExponent {
        BiasExponent::new(omega).unwrap()
    }

    fn caps() -> EnumerationCaps {
        EnumerationCaps::default()
    }

    fn spec_n7() -> NoiseSpec {
        NoiseSpec::new(
            vec![RingElement::from_support(7, &[0, 1, 2]).unwrap()],
            bias(3.0),
        )
        .unwrap()
    }

    #[test]
    fn zero_bias_noise_is_zero() {
        let spec = NoiseSpec::new(
            vec![RingElement::from_support(9, &[0, 4]).unwrap()],
            BiasExponent::ZERO,
        )
        .unwrap();
        let mut rng = stream_rng(5, 0);
        for _ in 0..20 {
            assert!(sample_noise(&spec, &mut rng).is_zero());
        }
        let stats = weight_experiment(&spec, 1000, 7);
        assert_eq!(stats.mean, 0.0);
        assert_eq!(stats.variance, 0.0);
        assert_eq!(stats.z_score, 0.0);
        assert_eq!(stats.histogram[0], 1000);
    }

    #[test]
    fn monomial_uniform_noise_is_uniform() {
        // s=1, t=X^k, ω=∞: bijection of a uniform draw. Empirical TV to the
        // exact (uniform) table below 0.02 at 2ⁿ·10³ trials.
        let spec =
            NoiseSpec::new(vec![RingElement::monomial(7, 4)], BiasExponent::UNIFORM).unwrap();
        let trials = 128 * 1000;
        let tv = empirical_tv(&spec, trials, 99, caps()).unwrap();
        assert!(tv < 0.02, "tv={tv}");
    }

    #[test]
    fn empirical_tv_shrinks_with_trials() {
        let spec = spec_n7();
        let coarse = empirical_tv(&spec, 2_000, 31, caps()).unwrap();
        let fine = empirical_tv(&spec, 128_000, 31, caps()).unwrap();
        assert!(fine < coarse, "coarse={coarse} fine={fine}");
        assert!(fine < 0.02, "fine={fine}");
    }

    #[test]
    fn empirical_tv_seed_stability() {
        // Disjoint seeds at 10⁶ trials, n=10: same order of magnitude
        // (within 2× of each other).
        let spec = NoiseSpec::new(
            vec![RingElement::from_support(10, &[0, 1, 3]).unwrap()],
            bias(2.0),
        )
        .unwrap();
        let a = empirical_tv(&spec, 1_000_000, 1000, caps()).unwrap();
        let b = empirical_tv(&spec, 1_000_000, 2000, caps()).unwrap();
        let ratio = a.max(b) / a.min(b);
        assert!(ratio <= 2.0, "a={a} b={b}");
    }

    #[test]
    fn empirical_tv_respects_cap() {
        let spec = NoiseSpec::new(vec![RingElement::one(25)], bias(2.0)).unwrap();
        assert!(matches!(
            empirical_tv(&spec, 10, 1, caps()),
            Err(ExactError::TableTooLarge { .. })
        ));
    }

    #[test]
    fn per_coordinate_frequency_matches_marginal() {
        // Every coordinate of the sampled noise is Ber(τω): aggregate
        // per-coordinate frequencies within 4 standard errors.
        let spec = NoiseSpec::new(
            vec![
                RingElement::from_support(51, &[0, 3, 17]).unwrap(),
                RingElement::from_support(51, &[5, 28]).unwrap(),
            ],
            bias(2.0),
        )
        .unwrap();
        let trials = 40_000u64;
        let n = spec.n();
        let mut per_coord = vec![0u64; n];
        for chunk in 0..chunk_count(trials) {
            let mut rng = stream_rng(77, chunk);
            for _ in 0..chunk_trials(trials, chunk) {
                let sample = sample_noise(&spec, &mut rng);
                for i in sample.support() {
                    per_coord[i] += 1;
                }
            }
        }
        let p = spec.marginal_bias().p();
        let se = math::sqrt(p * (1.0 - p) / trials as f64);
        for (i, &count) in per_coord.iter().enumerate() {
            let freq = count as f64 / trials as f64;
            assert!(
                math::abs(freq - p) <= 4.0 * se,
                "coordinate {i}: freq={freq} expected {p} ± {}",
                4.0 * se
            );
        }
    }

    #[test]
    fn mean_weight_against_closed_form_n101() {
        // n=101, τ=5, ω=2, 10⁵ trials: the Monte-Carlo mean sits within
        // four standard errors of n·p(τω).
        let spec = NoiseSpec::new(
            vec![RingElement::from_support(101, &[0, 13, 34, 57, 88]).unwrap()],
            bias(2.0),
        )
        .unwrap();
        let stats = weight_experiment(&spec, 100_000, 271828);
        assert_eq!(stats.expected_mean, 101.0 * spec.marginal_bias().p());
        assert!(
            math::abs(stats.z_score) <= 4.0,
            "z={} mean={} expected={}",
            stats.z_score,
            stats.mean,
            stats.expected_mean
        );
    }

    #[test]
    fn weight_experiment_matches_expectation() {
        // n=101, s=2, τ=10, ω=2 at 10⁵ seeded trials: |z| ≤ 4.
        let spec = NoiseSpec::new(
            vec![
                RingElement::from_support(101, &[0, 7, 20, 41, 77]).unwrap(),
                RingElement::from_support(101, &[3, 11, 40, 60, 90]).unwrap(),
            ],
            bias(2.0),
        )
        .unwrap();
        assert_eq!(spec.tau(), 10);
        let stats = weight_experiment(&spec, 100_000, 42);
        assert_eq!(stats.trials, 100_000);
        assert!(
            math::abs(stats.z_score) <= 4.0,
            "z={} mean={} expected={}",
            stats.z_score,
            stats.mean,
            stats.expected_mean
        );
        let total: u64 = stats.histogram.iter().sum();
        assert_eq!(total, stats.trials);
    }

    #[test]
    fn determinism_and_chunk_order_independence() {
        let spec = spec_n7();
        let a = weight_experiment(&spec, 10_000, 42);
        let b = weight_experiment(&spec, 10_000, 42);
        assert_eq!(a, b);
        let c = weight_experiment(&spec, 10_000, 43);
        assert_ne!(a, c);

        // merging chunk accumulators in reverse order changes nothing
        let trials = 10_000u64;
        let mut reversed = WeightAccumulator::new(spec.n());
        for chunk in (0..chunk_count(trials)).rev() {
            reversed.merge(&weight_chunk(&spec, 42, chunk, chunk_trials(trials, chunk)));
        }
        assert_eq!(weight_stats_from(&spec, &reversed), a);
    }

    #[test]
    fn chunk_layout_covers_exactly() {
        for trials in [1u64, 4095, 4096, 4097, 100_000] {
            let total: u64 = (0..chunk_count(trials))
                .map(|c| chunk_trials(trials, c))
                .sum();
            assert_eq!(total, trials);
        }
    }

    #[test]
    fn sampled_weights_respect_bounds() {
        let spec = spec_n7();
        let stats = weight_experiment(&spec, 2_000, 3);
        for (w, _) in stats.nonzero_bins() {
            assert!(w <= 7);
        }
    }
}
