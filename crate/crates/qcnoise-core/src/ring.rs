//! Exact arithmetic in `Pₙ = F₂[X]/(Xⁿ − 1)`.
//!
//! Elements are length-n coefficient vectors, bit-packed into 64-bit words
//! (bit i of word j is the coefficient of X^(64j + i)). Multiplication is a
//! cyclic convolution implemented as shift-XOR over the support of the
//! lighter operand, so products with a sparse fixed factor cost
//! O(n · |t| / 64) word operations.
//!
//! Any n ≥ 1 is accepted. Nothing here assumes n odd or prime; callers that
//! need such restrictions (the pairing bounds in [`crate::exact`]) enforce
//! them.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::poly::Poly;

/// Errors from ring construction and arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("ring lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("support index {index} is out of range for ring length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("support index {index} appears more than once")]
    DuplicateIndex { index: usize },
    #[error("cannot parse `{input}` as a support list")]
    InvalidSupport { input: String },
    #[error("cannot parse `{input}` as dense hex coefficients")]
    InvalidHex { input: String },
    #[error("dense hex value has coefficients at or above X^{n}")]
    DenseOutOfRange { n: usize },
    #[error("element is not a unit: gcd with the modulus has support {{{gcd}}}")]
    NotAUnit { gcd: Poly },
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

fn top_mask(n: usize) -> u64 {
    match n % 64 {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

/// Cyclic shift by d: returns src · X^d reduced mod Xⁿ − 1, as fresh words.
fn shifted_words(words: &[u64], n: usize, d: usize) -> Vec<u64> {
    debug_assert!(d < n);
    if d == 0 {
        return words.to_vec();
    }
    if n <= 64 {
        let wide = (words[0] as u128) << d;
        let folded = ((wide & ((1u128 << n) - 1)) ^ (wide >> n)) as u64;
        return vec![folded];
    }
    let w = words.len();
    let mut wide = vec![0u64; 2 * w];
    let off = d / 64;
    let sh = d % 64;
    for (i, &x) in words.iter().enumerate() {
        if x == 0 {
            continue;
        }
        wide[i + off] ^= x << sh;
        if sh > 0 {
            wide[i + off + 1] ^= x >> (64 - sh);
        }
    }
    // Fold X^n = 1: output bit k is wide bit k XOR wide bit k + n.
    let q = n / 64;
    let rem = n % 64;
    let mut out = vec![0u64; w];
    for (i, slot) in out.iter_mut().enumerate() {
        let lo = wide[i];
        let hi_lo = wide.get(q + i).copied().unwrap_or(0);
        let hi = if rem == 0 {
            hi_lo
        } else {
            let hi_hi = wide.get(q + i + 1).copied().unwrap_or(0);
            (hi_lo >> rem) | (hi_hi << (64 - rem))
        };
        *slot = lo ^ hi;
    }
    out[w - 1] &= top_mask(n);
    out
}

/// An element of `Pₙ = F₂[X]/(Xⁿ − 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    n: usize,
    words: Vec<u64>,
}

impl RingElement {
    /// The zero polynomial of ring length n. Panics if n = 0.
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "ring length must be at least 1");
        Self {
            n,
            words: vec![0; words_for(n)],
        }
    }

    /// The multiplicative identity.
    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0)
    }

    /// The monomial X^k (k is reduced mod n).
    pub fn monomial(n: usize, k: usize) -> Self {
        let mut e = Self::zero(n);
        e.set_coeff(k % n);
        e
    }

    /// Builds an element from its support. Indices must lie in [0, n) and be
    /// pairwise distinct.
    pub fn from_support(n: usize, support: &[usize]) -> Result<Self, RingError> {
        let mut e = Self::zero(n);
        for &i in support {
            if i >= n {
                return Err(RingError::IndexOutOfRange { index: i, n });
            }
            if e.coeff(i) {
                return Err(RingError::DuplicateIndex { index: i });
            }
            e.set_coeff(i);
        }
        Ok(e)
    }

    /// Parses the comma-separated support format shared with the CLI, e.g.
    /// `"0,1,2"` for 1 + X + X². The empty string is the zero polynomial.
    pub fn parse_support(n: usize, input: &str) -> Result<Self, RingError> {
        let trimmed = input.trim();
        if trimmed.is_empty() {
            return Ok(Self::zero(n));
        }
        let mut support = Vec::new();
        for part in trimmed.split(',') {
            let index: usize = part.trim().parse().map_err(|_| RingError::InvalidSupport {
                input: String::from(input),
            })?;
            support.push(index);
        }
        Self::from_support(n, &support)
    }

    /// Parses dense hex coefficients: the coefficient vector read as an
    /// integer (bit i = coefficient of X^i) and written in hex, optionally
    /// prefixed with `0x`. For example n = 7, `"07"` is 1 + X + X².
    pub fn parse_dense_hex(n: usize, input: &str) -> Result<Self, RingError> {
        let digits = input
            .trim()
            .trim_start_matches("0x")
            .trim_start_matches("0X");
        if digits.is_empty() {
            return Err(RingError::InvalidHex {
                input: String::from(input),
            });
        }
        let mut e = Self::zero(n);
        let mut bit = 0usize;
        for c in digits.chars().rev() {
            let v = c.to_digit(16).ok_or_else(|| RingError::InvalidHex {
                input: String::from(input),
            })? as u64;
            for k in 0..4 {
                if (v >> k) & 1 == 1 {
                    if bit + k >= n {
                        return Err(RingError::DenseOutOfRange { n });
                    }
                    e.set_coeff(bit + k);
                }
            }
            bit += 4;
        }
        Ok(e)
    }

    /// Recovers the element whose coefficient vector, read as an integer, is
    /// `index`. Needs n ≤ 64; used for the 2ⁿ-entry tables in `exact`.
    pub fn from_index(n: usize, index: usize) -> Self {
        assert!(n <= 64, "index encoding needs n <= 64");
        assert!(n == 64 || index >> n == 0, "index {index} out of range");
        let mut e = Self::zero(n);
        e.words[0] = index as u64;
        e
    }

    /// The coefficient vector read as an integer. Needs n ≤ 64.
    pub fn to_index(&self) -> usize {
        assert!(self.n <= 64, "index encoding needs n <= 64");
        self.words[0] as usize
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient of X^i; the index is reduced mod n.
    pub fn coeff(&self, i: usize) -> bool {
        let i = i % self.n;
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    fn set_coeff(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.words[0] == 1 && self.words[1..].iter().all(|&w| w == 0)
    }

    /// Hamming weight |t| = number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// supp(t) = {i : tᵢ = 1}, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (j, &word) in self.words.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                out.push(64 * j + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    /// Multiplication by X^d, i.e. a cyclic shift of the coefficients.
    pub fn shift(&self, d: usize) -> Self {
        Self {
            n: self.n,
            words: shifted_words(&self.words, self.n, d % self.n),
        }
    }

    /// |supp(self) ∩ supp(X^d · self)|, the overlap driving the λ profile.
    pub fn shift_overlap(&self, d: usize) -> usize {
        let shifted = self.shift(d);
        self.words
            .iter()
            .zip(&shifted.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn check_same_n(&self, other: &Self) -> Result<(), RingError> {
        if self.n != other.n {
            return Err(RingError::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Addition (coefficientwise XOR).
    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same_n(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Self { n: self.n, words })
    }

    /// Cyclic convolution: coefficient k of the product is
    /// ⊕_{j : a_{k−j} = 1} b_j with indices mod n.
    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same_n(other)?;
        let (sparse, dense) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = vec![0u64; self.words.len()];
        for d in sparse.support() {
            let rotated = shifted_words(&dense.words, self.n, d);
            for (acc, w) in words.iter_mut().zip(&rotated) {
                *acc ^= w;
            }
        }
        Ok(Self { n: self.n, words })
    }

    /// The element as a plain polynomial of degree < n.
    pub fn to_poly(&self) -> Poly {
        Poly::from_words(self.words.clone())
    }

    /// Reduces a plain polynomial into Pₙ.
    pub fn from_poly(n: usize, p: &Poly) -> Self {
        let reduced = p.rem(&Poly::modulus(n));
        let mut e = Self::zero(n);
        for i in reduced.support() {
            e.set_coeff(i);
        }
        e
    }

    /// True iff `gcd(t, Xⁿ − 1) = 1` in `F₂[X]`, i.e. t is a unit of Pₙ.
    pub fn is_invertible(&self) -> bool {
        Poly::gcd(&self.to_poly(), &Poly::modulus(self.n)).is_one()
    }

    /// The multiplicative inverse, via extended Euclid on (t, Xⁿ − 1).
    pub fn inverse(&self) -> Result<Self, RingError> {
        let modulus = Poly::modulus(self.n);
        let (u, g) = Poly::half_xgcd(&self.to_poly(), &modulus);
        if !g.is_one() {
            return Err(RingError::NotAUnit { gcd: g });
        }
        Ok(Self::from_poly(self.n, &u))
    }

    /// Structure of the ideal ⟨t⟩ = {t·a : a ∈ Pₙ}.
    pub fn ideal(&self) -> IdealDescriptor {
        let gcd = Poly::gcd(&self.to_poly(), &Poly::modulus(self.n));
        let dimension = self.n - gcd.degree().expect("modulus is nonzero");
        IdealDescriptor {
            generator: self.clone(),
            gcd_with_modulus: gcd,
            dimension,
        }
    }
}

/// Formats as the comma-separated support (the CLI polynomial text format);
/// the zero polynomial formats as an empty string.
impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.support() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

/// The ideal generated by a fixed t: its gcd with the modulus and the
/// F₂-dimension n − deg gcd. t is a unit iff the dimension is n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDescriptor {
    generator: RingElement,
    gcd_with_modulus: Poly,
    dimension: usize,
}

impl IdealDescriptor {
    pub fn generator(&self) -> &RingElement {
        &self.generator
    }

    /// gcd(t, Xⁿ − 1) as a plain polynomial (degree can reach n when t = 0).
    pub fn gcd_with_modulus(&self) -> &Poly {
        &self.gcd_with_modulus
    }

    /// log₂ of the ideal size: |⟨t⟩| = 2^dimension.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Membership test: x ∈ ⟨t⟩ iff gcd(t, Xⁿ − 1) divides x.
    pub fn contains(&self, x: &RingElement) -> bool {
        assert_eq!(x.n(), self.generator.n(), "ring lengths differ");
        x.to_poly().rem(&self.gcd_with_modulus).is_zero()
    }
}
