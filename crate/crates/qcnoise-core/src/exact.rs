//! Exact desk-scale distributions.
//!
//! Everything here is an explicit probability table over the 2ⁿ elements of
//! Pₙ, indexed by the coefficient vector read as an integer (bit k of the
//! index is the coefficient of X^k). Tables exist for the single product tR,
//! the sum t₁R₁ + … + t_sR_s, and the independent-coordinate model
//! Ber(τω)^⊗n with the matching marginals; entropy, KL divergence, and total
//! variation are computed from them with compensated summation.
//!
//! Two independent routes exist wherever the law allows it: the pushforward
//! of the product measure under multiplication by an invertible t versus
//! full enumeration of R, and the XOR-group (Walsh) convolution of per-term
//! tables versus direct enumeration of all 2^{sn} noise tuples. The test
//! suites hold these pairs together.
//!
//! Beyond the tables, this module carries the λ shift-overlap profile, the
//! closed-form pairwise law of two coefficients, and the pairing-based
//! entropy upper bounds it implies.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bernoulli::BiasExponent;
use crate::math::{self, NeumaierSum};
use crate::poly::Poly;
use crate::ring::{RingElement, RingError};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("a 2^{n}-entry table exceeds the enumeration cap 2^{cap}")]
    TableTooLarge { n: usize, cap: usize },
    #[error("joint enumeration over 2^{bits} outcomes exceeds the cap 2^{cap}")]
    JointTooLarge { bits: usize, cap: usize },
    #[error("ring lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("a noise spec needs at least one fixed polynomial")]
    EmptySpec,
    #[error("coefficient indices must differ")]
    EqualIndices,
    #[error("coefficient index {index} is out of range for ring length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("ring length {n} is even; this bound needs odd n")]
    EvenLength { n: usize },
    #[error("shift {shift} shares the factor {gcd} with the ring length {n}")]
    SharedFactor { shift: usize, n: usize, gcd: usize },
    #[error(
        "support of polynomial {index} ({support}) is not an arithmetic progression with common difference {difference}"
    )]
    NotArithmeticProgression {
        index: usize,
        support: String,
        difference: usize,
    },
    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Size limits for the exact paths. A 2ⁿ table of doubles is 8·2ⁿ bytes
/// (8 MiB at the default n-cap of 20); the joint cap bounds the 2^{s·n}
/// enumeration oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCaps {
    pub max_table_n: usize,
    pub max_joint_bits: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        Self {
            max_table_n: 20,
            max_joint_bits: 26,
        }
    }
}

impl EnumerationCaps {
    /// Hard ceiling on any table exponent: beyond this the `1 << n` sizes
    /// stop fitting sane address space no matter what the cap is set to.
    pub const TABLE_N_CEILING: usize = 57;

    pub fn with_table_n(max_table_n: usize) -> Self {
        Self {
            max_table_n,
            ..Self::default()
        }
    }

    fn check_table(self, n: usize) -> Result<(), ExactError> {
        let cap = self.max_table_n.min(Self::TABLE_N_CEILING);
        if n > cap {
            return Err(ExactError::TableTooLarge { n, cap });
        }
        Ok(())
    }

    fn check_joint(self, bits: usize) -> Result<(), ExactError> {
        if bits > self.max_joint_bits {
            return Err(ExactError::JointTooLarge {
                bits,
                cap: self.max_joint_bits,
            });
        }
        Ok(())
    }
}

/// A fixed noise shape: the ordered polynomials t₁ … t_s and the per-bit
/// exponent ω of the random factors. τ = Σ|tᵢ| drives every marginal.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseSpec {
    n: usize,
    terms: Vec<RingElement>,
    omega: BiasExponent,
}

impl NoiseSpec {
    pub fn new(terms: Vec<RingElement>, omega: BiasExponent) -> Result<Self, ExactError> {
        let first = terms.first().ok_or(ExactError::EmptySpec)?;
        let n = first.n();
        for t in &terms {
            if t.n() != n {
                return Err(ExactError::LengthMismatch {
                    left: n,
                    right: t.n(),
                });
            }
        }
        Ok(Self { n, terms, omega })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[RingElement] {
        &self.terms
    }

    pub fn s(&self) -> usize {
        self.terms.len()
    }

    /// τ = |t₁| + … + |t_s|.
    pub fn tau(&self) -> usize {
        self.terms.iter().map(RingElement::weight).sum()
    }

    pub fn omega(&self) -> BiasExponent {
        self.omega
    }

    /// Every coefficient of the noise is Ber(τω) by piling-up.
    pub fn marginal_bias(&self) -> BiasExponent {
        self.omega.scale(self.tau())
    }

    /// gcd(t₁, …, t_s, Xⁿ − 1); the noise is supported on its ideal.
    pub fn joint_gcd(&self) -> Poly {
        let mut g = Poly::modulus(self.n);
        for t in &self.terms {
            g = Poly::gcd(&g, &t.to_poly());
        }
        g
    }

    /// True iff ⟨t₁, …, t_s⟩ = Pₙ, i.e. the joint gcd with the modulus is 1.
    pub fn spanning(&self) -> bool {
        self.joint_gcd().is_one()
    }
}

/// An explicit pmf over the 2ⁿ elements of Pₙ.
#[derive(Clone, Debug, PartialEq)]
pub struct DistTable {
    n: usize,
    probs: Vec<f64>,
}

impl DistTable {
    /// Wraps a probability vector; the length must be 2ⁿ and the entries a
    /// valid pmf (checked with [`DistTable::validate`]).
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self, ExactError> {
        if probs.len() != 1usize << n {
            return Err(ExactError::LengthMismatch {
                left: probs.len(),
                right: 1usize << n,
            });
        }
        let table = Self { n, probs };
        table.validate()?;
        Ok(table)
    }

    fn from_probs(n: usize, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), 1usize << n);
        Self { n, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    /// Entries nonnegative and summing to 1 within 1e−9.
    pub fn validate(&self) -> Result<(), ExactError> {
        let mut acc = NeumaierSum::new();
        for (index, &p) in self.probs.iter().enumerate() {
            if p < 0.0 || p.is_nan() {
                return Err(ExactError::NegativeProbability { index, value: p });
            }
            acc.add(p);
        }
        let sum = acc.total();
        if math::abs(sum - 1.0) > 1e-9 {
            return Err(ExactError::NotNormalized { sum });
        }
        Ok(())
    }

    fn check_same_n(&self, other: &Self) -> Result<(), ExactError> {
        if self.n != other.n {
            return Err(ExactError::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// H(P) = Σ P(x) log₂(1/P(x)), zero entries contributing zero.
    pub fn entropy(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for &p in &self.probs {
            if p > 0.0 {
                acc.add(-p * math::log2(p));
            }
        }
        acc.total()
    }

    /// D(P‖Q) = Σ P(x) log₂(P(x)/Q(x)) in bits. A cell with Q = 0 < P makes
    /// the divergence the distinguished +∞ rather than an error; this is the
    /// mathematically correct value and shows up whenever Q is confined to a
    /// proper ideal that P escapes.
    pub fn kl(&self, q: &DistTable) -> Result<f64, ExactError> {
        self.check_same_n(q)?;
        let mut acc = NeumaierSum::new();
        for (&p, &qv) in self.probs.iter().zip(&q.probs) {
            if p == 0.0 {
                continue;
            }
            if qv == 0.0 {
                return Ok(f64::INFINITY);
            }
            acc.add(p * math::log2(p / qv));
        }
        Ok(acc.total())
    }

    /// Δ_tv(P, Q) = ½ Σ |P(x) − Q(x)|.
    pub fn tv(&self, q: &DistTable) -> Result<f64, ExactError> {
        self.check_same_n(q)?;
        let mut acc = NeumaierSum::new();
        for (&p, &qv) in self.probs.iter().zip(&q.probs) {
            acc.add(math::abs(p - qv));
        }
        Ok(0.5 * acc.total())
    }

    /// Pr[coefficient k = 1] under this table.
    pub fn marginal(&self, k: usize) -> f64 {
        let bit = 1usize << k;
        let mut acc = NeumaierSum::new();
        for (x, &p) in self.probs.iter().enumerate() {
            if x & bit != 0 {
                acc.add(p);
            }
        }
        acc.total()
    }

    /// The joint law of (coefficient i, coefficient j): `[a][b]` =
    /// Pr[Cᵢ = a, Cⱼ = b].
    pub fn pair_marginal(&self, i: usize, j: usize) -> [[f64; 2]; 2] {
        let (bi, bj) = (1usize << i, 1usize << j);
        let mut acc = [[NeumaierSum::new(); 2]; 2];
        for (x, &p) in self.probs.iter().enumerate() {
            let a = usize::from(x & bi != 0);
            let b = usize::from(x & bj != 0);
            acc[a][b].add(p);
        }
        [
            [acc[0][0].total(), acc[0][1].total()],
            [acc[1][0].total(), acc[1][1].total()],
        ]
    }

    /// E[|X|] = Σ P(x) · weight(x).
    pub fn mean_weight(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for (x, &p) in self.probs.iter().enumerate() {
            acc.add(p * x.count_ones() as f64);
        }
        acc.total()
    }
}

/// pw[k] = p^k (1−p)^{n−k} for p = p(bias): the probability of any fixed
/// outcome of weight k under Ber(bias)^⊗n. Built once per table so that laws
/// sharing a bias produce bitwise-identical entries.
fn weight_prob_table(n: usize, bias: BiasExponent) -> Vec<f64> {
    let p = bias.p();
    let q = 1.0 - p;
    let mut pow_p = vec![1.0; n + 1];
    let mut pow_q = vec![1.0; n + 1];
    for k in 1..=n {
        pow_p[k] = pow_p[k - 1] * p;
        pow_q[k] = pow_q[k - 1] * q;
    }
    (0..=n).map(|k| pow_p[k] * pow_q[n - k]).collect()
}

/// Ber(τω)^⊗n as a table: the independent-coordinate model with the same
/// marginals as the true noise.
pub fn ideal_table(
    n: usize,
    tau: usize,
    omega: BiasExponent,
    caps: EnumerationCaps,
) -> Result<DistTable, ExactError> {
    caps.check_table(n)?;
    let pw = weight_prob_table(n, omega.scale(tau));
    let probs = (0..1usize << n)
        .map(|x| pw[x.count_ones() as usize])
        .collect();
    Ok(DistTable::from_probs(n, probs))
}

/// X^i·t as a table index, for i = 0 … n−1.
fn rotation_indices(t: &RingElement) -> Vec<usize> {
    (0..t.n()).map(|i| t.shift(i).to_index()).collect()
}

/// The law of tR for invertible t, by pushing Ber(ω)^⊗n forward through the
/// bijection R ↦ tR: P(x) = Π_k Ber(ω)[(t⁻¹x)_k], evaluated for every x with
/// t⁻¹x maintained incrementally along a Gray-code walk.
pub fn dist_tr_pushforward(
    t: &RingElement,
    omega: BiasExponent,
    caps: EnumerationCaps,
) -> Result<DistTable, ExactError> {
    let n = t.n();
    caps.check_table(n)?;
    let inverse = t.inverse()?;
    let rot = rotation_indices(&inverse);
    let pw = weight_prob_table(n, omega);
    let mut probs = vec![0.0; 1usize << n];
    let mut x = 0usize;
    let mut y = 0usize; // y = t⁻¹ · x throughout the walk
    probs[0] = pw[0];
    for k in 1..1usize << n {
        let bit = k.trailing_zeros() as usize;
        x ^= 1 << bit;
        y ^= rot[bit];
        probs[x] = pw[y.count_ones() as usize];
    }
    Ok(DistTable::from_probs(n, probs))
}

/// The law of tR for arbitrary t, by enumerating all 2ⁿ values of R:
/// `P(x) = Σ_{r : t·r = x} Π_k Ber(ω)[r_k]`. Exact zeros off the ideal ⟨t⟩.
pub fn dist_tr_enumeration(
    t: &RingElement,
    omega: BiasExponent,
    caps: EnumerationCaps,
) -> Result<DistTable, ExactError> {
    let n = t.n();
    caps.check_table(n)?;
    let rot = rotation_indices(t);
    let pw = weight_prob_table(n, omega);
    let mut probs = vec![0.0; 1usize << n];
    let mut r = 0usize;
    let mut y = 0usize; // y = t · r throughout the walk
    probs[0] += pw[0];
    for k in 1..1usize << n {
        let bit = k.trailing_zeros() as usize;
        r ^= 1 << bit;
        y ^= rot[bit];
        probs[y] += pw[r.count_ones() as usize];
    }
    Ok(DistTable::from_probs(n, probs))
}

/// The law of tR: the closed-form pushforward when t is invertible, full
/// enumeration otherwise. The two paths agree entrywise where both apply.
pub fn dist_tr(
    t: &RingElement,
    omega: BiasExponent,
    caps: EnumerationCaps,
) -> Result<DistTable, ExactError> {
    if t.is_invertible() {
        dist_tr_pushforward(t, omega, caps)
    } else {
        dist_tr_enumeration(t, omega, caps)
    }
}

/// In-place Walsh–Hadamard transform over (F₂ⁿ, ⊕); self-inverse up to the
/// factor 2ⁿ.
pub(crate) fn walsh_hadamard(data: &mut [f64]) {
    debug_assert!(data.len().is_power_of_two());
    let mut h = 1;
    while h < data.len() {
        for chunk in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h <<= 1;
    }
}

/// The law of t₁R₁ + … + t_sR_s with independent Rᵢ ← Ber(ω)^⊗n, as the
/// XOR-group convolution of the per-term tables, Walsh-accelerated:
/// s·n·2ⁿ arithmetic instead of 2^{s·n} enumeration.
///
/// Addition in Pₙ is coordinatewise XOR and the terms are independent, so
/// the convolution is exact up to f64 rounding. Rounding can leave ±1e−16
/// residue on outcomes of true probability zero; for non-spanning specs the
/// support is forced back to the ideal of the joint gcd, keeping the
/// distinguished +∞ behaviour of [`DistTable::kl`] intact.
pub fn dist_sum(spec: &NoiseSpec, caps: EnumerationCaps) -> Result<DistTable, ExactError> {
    let n = spec.n();
    caps.check_table(n)?;
    if spec.s() == 1 {
        return dist_tr(&spec.terms()[0], spec.omega(), caps);
    }
    let mut acc = dist_tr(&spec.terms()[0], spec.omega(), caps)?.probs;
    walsh_hadamard(&mut acc);
    for t in &spec.terms()[1..] {
        let mut table = dist_tr(t, spec.omega(), caps)?.probs;
        walsh_hadamard(&mut table);
        for (a, b) in acc.iter_mut().zip(&table) {
            *a *= b;
        }
    }
    walsh_hadamard(&mut acc);
    let scale = 1.0 / (1usize << n) as f64;
    for v in acc.iter_mut() {
        *v = (*v * scale).max(0.0);
    }
    let gcd = spec.joint_gcd();
    if !gcd.is_one() {
        for (x, member) in ideal_membership(n, &gcd).into_iter().enumerate() {
            if !member {
                acc[x] = 0.0;
            }
        }
    }
    Ok(DistTable::from_probs(n, acc))
}

/// Marks the ideal ⟨g⟩ ⊆ Pₙ: the F₂-span of g, gX, …, gX^{dim−1}, walked in
/// Gray order.
fn ideal_membership(n: usize, gcd: &Poly) -> Vec<bool> {
    let dim = n - gcd.degree().expect("gcd with the modulus is nonzero");
    let generators: Vec<usize> = (0..dim)
        .map(|j| RingElement::from_poly(n, &gcd.mul(&Poly::monomial(j))).to_index())
        .collect();
    let mut member = vec![false; 1usize << n];
    let mut acc = 0usize;
    member[0] = true;
    for k in 1..1usize << dim {
        acc ^= generators[k.trailing_zeros() as usize];
        member[acc] = true;
    }
    member
}

/// The law of t₁R₁ + … + t_sR_s by direct enumeration of all 2^{s·n} noise
/// tuples. The independent oracle for [`dist_sum`]; cost is exponential in
/// s·n, so it is gated by the joint cap.
pub fn dist_sum_enumeration(
    spec: &NoiseSpec,
    caps: EnumerationCaps,
) -> Result<DistTable, ExactError> {
    let n = spec.n();
    let s = spec.s();
    let bits = n.checked_mul(s).expect("joint width overflow");
    caps.check_joint(bits)?;
    caps.check_table(n)?;
    let rot: Vec<Vec<usize>> = spec.terms().iter().map(rotation_indices).collect();
    let pw = weight_prob_table(bits, spec.omega());
    let mut probs = vec![0.0; 1usize << n];
    let mut joint = 0usize;
    let mut y = 0usize; // y = Σ tᵢ·rᵢ for the current Gray-coded (r₁ … r_s)
    probs[0] += pw[0];
    for k in 1..1usize << bits {
        let bit = k.trailing_zeros() as usize;
        joint ^= 1 << bit;
        y ^= rot[bit / n][bit % n];
        probs[y] += pw[joint.count_ones() as usize];
    }
    Ok(DistTable::from_probs(n, probs))
}

/// λ(d) = Σ_ℓ |supp(t_ℓ) ∩ supp(X^d·t_ℓ)| for d = 0 … n−1: how many random
/// coordinates two noise coefficients at distance d share. λ(0) = τ and
/// λ(d) = λ(n−d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaProfile {
    n: usize,
    lambda: Vec<usize>,
}

impl LambdaProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[usize] {
        &self.lambda
    }

    /// λ at shift d, reduced mod n.
    pub fn at(&self, d: usize) -> usize {
        self.lambda[d % self.n]
    }
}

pub fn lambda_profile(spec: &NoiseSpec) -> LambdaProfile {
    let n = spec.n();
    let lambda = (0..n)
        .map(|d| spec.terms().iter().map(|t| t.shift_overlap(d)).sum())
        .collect();
    LambdaProfile { n, lambda }
}

/// The closed-form joint law of two noise coefficients (Cᵢ, Cⱼ).
///
/// With λ = λ(i−j) shared coordinates, the off-diagonal mass is
/// ½·p(2(τ−λ)ω) on each side (via p(x)(1−p(x)) = ½p(2x)), and the diagonal
/// completes the Ber(τω) marginals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairTable {
    probs: [[f64; 2]; 2],
    lambda: usize,
}

impl PairTable {
    /// `[a][b]` = Pr\[Cᵢ = a, Cⱼ = b\].
    pub fn probs(&self) -> [[f64; 2]; 2] {
        self.probs
    }

    pub fn prob(&self, a: bool, b: bool) -> f64 {
        self.probs[usize::from(a)][usize::from(b)]
    }

    /// λ(i−j), the shared-coordinate count behind this table.
    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Pr[Cᵢ = 1] (equals Pr[Cⱼ = 1] by construction).
    pub fn marginal(&self) -> f64 {
        self.probs[1][0] + self.probs[1][1]
    }

    /// Joint entropy H(Cᵢ, Cⱼ) in bits.
    pub fn entropy(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for row in self.probs {
            for p in row {
                if p > 0.0 {
                    acc.add(-p * math::log2(p));
                }
            }
        }
        acc.total()
    }
}

pub fn pair_table(spec: &NoiseSpec, i: usize, j: usize) -> Result<PairTable, ExactError> {
    let n = spec.n();
    for index in [i, j] {
        if index >= n {
            return Err(ExactError::IndexOutOfRange { index, n });
        }
    }
    if i == j {
        return Err(ExactError::EqualIndices);
    }
    let d = (i + n - j) % n;
    let lambda: usize = spec.terms().iter().map(|t| t.shift_overlap(d)).sum();
    let tau = spec.tau();
    let p_marginal = spec.marginal_bias().p();
    let off = 0.5 * spec.omega().scale(2 * (tau - lambda)).p();
    Ok(PairTable {
        probs: [[1.0 - p_marginal - off, off], [off, p_marginal - off]],
        lambda,
    })
}

/// h̃(τω) + h̃(2(τ−λ(d))ω): an upper bound on the joint entropy
/// H(Cᵢ, C_{i+d}) of two coefficients at distance d, from conditioning on
/// the first and applying concavity of the binary entropy.
pub fn pair_entropy_bound(spec: &NoiseSpec, d: usize) -> f64 {
    let lambda: usize = spec.terms().iter().map(|t| t.shift_overlap(d)).sum();
    let tau = spec.tau();
    spec.marginal_bias().entropy() + spec.omega().scale(2 * (tau - lambda)).entropy()
}

/// Upper bound on the total entropy H(C₀, …, C_{n−1}) by splitting the
/// coefficients into disjoint pairs at stride d: (C₀, C_d), (C_{2d}, C_{3d}),
/// … For odd n the walk leaves one singleton worth h̃(τω); for even n it
/// closes with no leftover. Needs gcd(d, n) = 1 so the pairs are disjoint.
pub fn total_entropy_bound_pairing(spec: &NoiseSpec, d: usize) -> Result<f64, ExactError> {
    let n = spec.n();
    let g = math::gcd_u64(d as u64 % n as u64, n as u64) as usize;
    if g != 1 {
        return Err(ExactError::SharedFactor {
            shift: d,
            n,
            gcd: g,
        });
    }
    let per_pair = pair_entropy_bound(spec, d % n);
    if n % 2 == 1 {
        Ok((n - 1) as f64 / 2.0 * per_pair + spec.marginal_bias().entropy())
    } else {
        Ok(n as f64 / 2.0 * per_pair)
    }
}

/// Checks that every supp(t_k) is an arithmetic progression
/// {a·x + b_k mod n : x = 0 … |t_k|−1} with the given common difference.
pub fn check_ap_supports(spec: &NoiseSpec, a: usize) -> Result<(), ExactError> {
    let n = spec.n() as u64;
    let inv = math::mod_inverse(a as u64 % n, n).ok_or(ExactError::SharedFactor {
        shift: a,
        n: spec.n(),
        gcd: math::gcd_u64(a as u64 % n, n) as usize,
    })?;
    for (index, t) in spec.terms().iter().enumerate() {
        // Dividing by a maps the progression to consecutive residues, so the
        // support must become a cyclic interval.
        let mut mapped: Vec<u64> = t.support().iter().map(|&s| s as u64 * inv % n).collect();
        mapped.sort_unstable();
        let len = mapped.len();
        let interval = len <= 1 || {
            let wraps = (0..len)
                .filter(|&i| (mapped[(i + 1) % len] + n - mapped[i]) % n != 1)
                .count();
            wraps <= 1
        };
        if !interval {
            return Err(ExactError::NotArithmeticProgression {
                index,
                support: alloc::format!("{t}"),
                difference: a,
            });
        }
    }
    Ok(())
}

/// The arithmetic-progression entropy bound, flagged vacuous when it cannot
/// beat the trivial n·h̃(τω) bound (exactly the case τ < 2s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApEntropyBound {
    pub bound: f64,
    pub vacuous: bool,
}

/// Upper bound on H(C₀, …, C_{n−1}) when every supp(t_k) is an arithmetic
/// progression with common difference a: pairing at stride a gives
/// λ ≥ τ − s per pair, hence (n−1)/2 · (h̃(τω) + h̃(2sω)) + h̃(τω).
///
/// Preconditions: n odd, gcd(a, n) = 1, AP supports. Violations are errors
/// naming the failed condition.
pub fn total_entropy_bound_ap(spec: &NoiseSpec, a: usize) -> Result<ApEntropyBound, ExactError> {
    let n = spec.n();
    if n.is_multiple_of(2) {
        return Err(ExactError::EvenLength { n });
    }
    let g = math::gcd_u64(a as u64 % n as u64, n as u64) as usize;
    if g != 1 {
        return Err(ExactError::SharedFactor {
            shift: a,
            n,
            gcd: g,
        });
    }
    check_ap_supports(spec, a)?;
    let tau = spec.tau();
    let s = spec.s();
    let per_pair = spec.marginal_bias().entropy() + spec.omega().scale(2 * s).entropy();
    let bound = (n - 1) as f64 / 2.0 * per_pair + spec.marginal_bias().entropy();
    Ok(ApEntropyBound {
        bound,
        vacuous: tau < 2 * s,
    })
}

/// Deterministic trial-division primality test; n is desk-scale here.
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2usize;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
