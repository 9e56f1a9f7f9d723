//! Plain polynomials over `F₂[X]`, with no modulus.
//!
//! [`crate::ring::RingElement`] handles everything inside Pₙ; this type
//! carries the gcd and extended-Euclid work that has to happen outside the
//! quotient, where degrees can reach n (the modulus Xⁿ − 1 itself).
//!
//! Coefficients are bit-packed: bit i of word j is the coefficient of
//! X^(64j + i). Trailing zero words are allowed and ignored.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A polynomial in `F₂[X]` of arbitrary degree.
#[derive(Clone, Debug, Default, Eq)]
pub struct Poly {
    words: Vec<u64>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        let common = self.words.len().min(other.words.len());
        self.words[..common] == other.words[..common]
            && self.words[common..].iter().all(|&w| w == 0)
            && other.words[common..].iter().all(|&w| w == 0)
    }
}

impl Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    /// The monomial X^k.
    pub fn monomial(k: usize) -> Self {
        let mut p = Self::zero();
        p.set_coeff(k);
        p
    }

    /// The modulus Xⁿ − 1 of Pₙ (equal to Xⁿ + 1 over F₂).
    pub fn modulus(n: usize) -> Self {
        let mut p = Self::monomial(n);
        p.set_coeff(0);
        p
    }

    pub(crate) fn from_words(words: Vec<u64>) -> Self {
        Self { words }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.degree() == Some(0)
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        for (j, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(64 * j + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub(crate) fn set_coeff(&mut self, i: usize) {
        let word = i / 64;
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        self.words[word] |= 1u64 << (i % 64);
    }

    /// Indices of the nonzero coefficients, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, &word) in self.words.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                out.push(64 * j + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    /// self ^= other · X^shift
    pub(crate) fn xor_assign_shifted(&mut self, other: &Poly, shift: usize) {
        let off = shift / 64;
        let sh = shift % 64;
        let needed = other.words.len() + off + 1;
        if self.words.len() < needed {
            self.words.resize(needed, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            self.words[i + off] ^= w << sh;
            if sh > 0 {
                self.words[i + off + 1] ^= w >> (64 - sh);
            }
        }
    }

    /// Long division: returns (quotient, remainder). Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot.set_coeff(shift);
            rem.xor_assign_shifted(divisor, shift);
        }
        (quot, rem)
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for k in other.support() {
            out.xor_assign_shifted(self, k);
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.xor_assign_shifted(other, 0);
        out
    }

    /// Greatest common divisor (monic by construction over F₂).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            (a, b) = (b, r);
        }
        a
    }

    /// Extended Euclid, tracking only the coefficient on `a`: returns (u, g)
    /// with u·a ≡ g (mod b) and g = gcd(a, b).
    pub fn half_xgcd(a: &Poly, b: &Poly) -> (Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.add(&q.mul(&s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
        }
        (s0, r0)
    }
}

/// Formats as the comma-separated support, matching the CLI polynomial text
/// format; the zero polynomial formats as an empty string.
impl fmt::Display for Poly {
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

/// Parses the same support format that `Display` writes.
impl core::str::FromStr for Poly {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Poly::zero();
        if s.trim().is_empty() {
            return Ok(p);
        }
        for part in s.split(',') {
            let i: usize = part
                .trim()
                .parse()
                .map_err(|_| alloc::format!("bad support index `{part}`"))?;
            p.set_coeff(i);
        }
        Ok(p)
    }
}
