//! Binary finite fields F_{2^d}, 1 ≤ d ≤ 127.
//!
//! Every degree has exactly one context, built from the numerically smallest
//! irreducible polynomial of that degree, so a field element only needs to
//! carry a `&'static` reference to its context. Elements of different degrees
//! never mix implicitly; use [`FieldElement::embed`] to move between fields.

mod bitpoly;
mod embed;
mod poly;
mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use bitpoly::{is_irreducible, smallest_irreducible};
pub use embed::Embedding;
pub use poly::Poly;
pub use roots::{
    distinct_degree_factorization, distinct_roots, factor_degrees, poly_roots, squarefree_factorization,
};

pub const MAX_DEGREE: u32 = 127;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field degree {0} is outside the supported range 1..=127")]
    UnsupportedDegree(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements from F_2^{left} and F_2^{right} cannot be combined without an embedding")]
    ContextMismatch { left: u32, right: u32 },
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("F_2^{from} does not embed into F_2^{to}")]
    NotDivisible { from: u32, to: u32 },
    #[error("invalid hex field element {0:?}")]
    InvalidHex(String),
}

/// Data attached to one binary field F_{2^d}.
pub struct FieldContext {
    degree: u32,
    modulus: u128,
    /// modulus with the leading x^d term removed
    tail: u128,
    mask: u128,
    trace_mask: u128,
    /// pivoted (image, preimage) pairs for y ↦ y² + y, descending pivot bit
    artin_schreier: Vec<(u128, u128)>,
    hw: bool,
}

static CONTEXTS: [OnceLock<FieldContext>; 128] = [const { OnceLock::new() }; 128];

impl FieldContext {
    /// The context of F_{2^d}.
    pub fn get(degree: u32) -> Result<&'static FieldContext, FieldError> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(FieldError::UnsupportedDegree(degree));
        }
        Ok(CONTEXTS[degree as usize].get_or_init(|| FieldContext::build(degree)))
    }

    /// Like [`FieldContext::get`] but panics on an unsupported degree.
    pub fn of(degree: u32) -> &'static FieldContext {
        Self::get(degree).expect("unsupported field degree")
    }

    fn build(degree: u32) -> FieldContext {
        let modulus = smallest_irreducible(degree);
        debug_assert!(is_irreducible(modulus));
        let mask = if degree == 128 { u128::MAX } else { (1u128 << degree) - 1 };
        let mut ctx = FieldContext {
            degree,
            modulus,
            tail: modulus & mask,
            mask,
            trace_mask: 0,
            artin_schreier: Vec::new(),
            hw: bitpoly::hardware_clmul_available(),
        };
        for i in 0..degree {
            let basis = ctx.reduce_small(1u128 << i);
            if ctx.trace_slow(basis) == 1 {
                ctx.trace_mask |= 1 << i;
            }
        }
        let mut table: Vec<(u128, u128)> = Vec::new();
        for i in 0..degree {
            let pre = ctx.reduce_small(1u128 << i);
            let mut img = ctx.mul_bits(pre, pre) ^ pre;
            let mut pre = pre;
            for &(ti, tp) in &table {
                if img >> (127 - ti.leading_zeros()) & 1 == 1 {
                    img ^= ti;
                    pre ^= tp;
                }
            }
            if img != 0 {
                let pos = table
                    .iter()
                    .position(|&(ti, _)| ti.leading_zeros() > img.leading_zeros())
                    .unwrap_or(table.len());
                table.insert(pos, (img, pre));
            }
        }
        ctx.artin_schreier = table;
        ctx
    }

    fn reduce_small(&self, a: u128) -> u128 {
        bitpoly::rem(a, self.modulus)
    }

    fn trace_slow(&self, a: u128) -> u8 {
        let mut acc = 0u128;
        let mut s = a;
        for _ in 0..self.degree {
            acc ^= s;
            s = self.mul_bits(s, s);
        }
        debug_assert!(acc <= 1);
        acc as u8
    }

    #[inline]
    pub(crate) fn mul_bits(&self, a: u128, b: u128) -> u128 {
        let d = self.degree;
        if d <= 64 {
            let mut p = bitpoly::clmul64(a as u64, b as u64, self.hw);
            loop {
                let top = p >> d;
                if top == 0 {
                    return p;
                }
                p = (p & self.mask) ^ bitpoly::clmul64(top as u64, self.tail as u64, self.hw);
            }
        }
        let (hi, lo) = bitpoly::clmul128(a, b, self.hw);
        bitpoly::rem256(hi, lo, self.modulus, d)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The modulus as a bit-polynomial including the x^d term.
    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Number of elements, when it fits in a `u128`.
    pub fn order(&'static self) -> u128 {
        1u128 << self.degree
    }

    pub fn zero(&'static self) -> FieldElement {
        FieldElement { ctx: self, bits: 0 }
    }

    pub fn one(&'static self) -> FieldElement {
        FieldElement { ctx: self, bits: 1 }
    }

    /// The class of x modulo the defining polynomial.
    pub fn generator(&'static self) -> FieldElement {
        self.element(2)
    }

    /// Element with the given coefficient bits, reduced modulo the modulus.
    pub fn element(&'static self, bits: u128) -> FieldElement {
        FieldElement { ctx: self, bits: self.reduce_small(bits) }
    }

    pub fn from_bool(&'static self, b: bool) -> FieldElement {
        FieldElement { ctx: self, bits: b as u128 }
    }

    pub fn random<R: Rng + ?Sized>(&'static self, rng: &mut R) -> FieldElement {
        FieldElement { ctx: self, bits: rng.gen::<u128>() & self.mask }
    }

    /// All elements in increasing bit order. Only sensible for small degrees.
    pub fn elements(&'static self) -> impl Iterator<Item = FieldElement> {
        assert!(self.degree <= 32, "refusing to enumerate F_2^{}", self.degree);
        (0..1u128 << self.degree).map(move |bits| FieldElement { ctx: self, bits })
    }

    pub fn parse_hex(&'static self, hex: &str) -> Result<FieldElement, FieldError> {
        let bits =
            u128::from_str_radix(hex, 16).map_err(|_| FieldError::InvalidHex(hex.to_string()))?;
        if bits > self.mask {
            return Err(FieldError::InvalidHex(hex.to_string()));
        }
        Ok(FieldElement { ctx: self, bits })
    }
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_2^{}[mod {:#x}]", self.degree, self.modulus)
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.modulus == other.modulus
    }
}

impl Eq for FieldContext {}

impl Hash for FieldContext {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.degree.hash(state);
        self.modulus.hash(state);
    }
}

/// An element of F_{2^d}: a bit-polynomial of degree < d reduced modulo the context modulus.
#[derive(Clone, Copy)]
pub struct FieldElement {
    ctx: &'static FieldContext,
    bits: u128,
}

impl FieldElement {
    #[inline]
    pub fn context(&self) -> &'static FieldContext {
        self.ctx
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.ctx.degree
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    pub fn zero_like(&self) -> Self {
        self.ctx.zero()
    }

    pub fn one_like(&self) -> Self {
        self.ctx.one()
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if std::ptr::eq(self.ctx, other.ctx) {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch { left: self.degree(), right: other.degree() })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(FieldElement { ctx: self.ctx, bits: self.bits ^ other.bits })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(FieldElement { ctx: self.ctx, bits: self.ctx.mul_bits(self.bits, other.bits) })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let inv = other.inv().ok_or(FieldError::DivisionByZero)?;
        Ok(*self * inv)
    }

    pub fn inv(&self) -> Option<Self> {
        bitpoly::inv_mod(self.bits, self.ctx.modulus).map(|bits| FieldElement { ctx: self.ctx, bits })
    }

    #[inline]
    pub fn square(&self) -> Self {
        FieldElement { ctx: self.ctx, bits: self.ctx.mul_bits(self.bits, self.bits) }
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut base = *self;
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// a^(2^k)
    pub fn frobenius(&self, k: u32) -> Self {
        let mut a = *self;
        for _ in 0..k % self.degree() {
            a = a.square();
        }
        a
    }

    /// The unique square root (squaring is bijective in characteristic 2).
    pub fn sqrt(&self) -> Self {
        self.frobenius(self.degree() - 1)
    }

    /// Absolute trace Tr_{F_{2^d}/F_2}(a) as 0 or 1.
    #[inline]
    pub fn trace(&self) -> u8 {
        ((self.bits & self.ctx.trace_mask).count_ones() & 1) as u8
    }

    /// c + c^4 + c^16 + … + c^(4^((d−1)/2)); solves y² + y = c for odd d when Tr(c) = 0.
    pub fn half_trace(&self) -> Self {
        let mut acc = *self;
        let mut s = *self;
        for _ in 0..(self.degree() - 1) / 2 {
            s = s.square().square();
            acc += s;
        }
        acc
    }

    /// All y with y² + y = c, sorted; empty exactly when Tr(c) = 1.
    pub fn solve_artin_schreier(&self) -> Vec<Self> {
        if self.trace() == 1 {
            return Vec::new();
        }
        let y = if self.degree() % 2 == 1 {
            self.half_trace()
        } else {
            let mut c = self.bits;
            let mut y = 0u128;
            for &(img, pre) in &self.ctx.artin_schreier {
                if c >> (127 - img.leading_zeros()) & 1 == 1 {
                    c ^= img;
                    y ^= pre;
                }
            }
            debug_assert_eq!(c, 0);
            FieldElement { ctx: self.ctx, bits: y }
        };
        let mut out = vec![y, y + self.one_like()];
        out.sort();
        out
    }

    /// Least e ≥ 1 with a^(2^e) = a, i.e. the degree of the smallest subfield containing a.
    pub fn element_degree(&self) -> u32 {
        let mut s = self.square();
        let mut e = 1;
        while s != *self {
            s = s.square();
            e += 1;
        }
        e
    }

    /// Image under the fixed embedding F_{2^e} → F_{2^d}, e | d.
    pub fn embed(&self, target: &'static FieldContext) -> Result<Self, FieldError> {
        Ok(Embedding::get(self.degree(), target.degree())?.apply(self))
    }

    pub fn to_hex(&self) -> String {
        format!("{:x}", self.bits)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.degree == other.ctx.degree && self.bits == other.bits
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.degree.hash(state);
        self.bits.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ctx.degree, self.bits).cmp(&(other.ctx.degree, other.bits))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}@{}", self.bits, self.ctx.degree)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.bits)
    }
}

impl Add for FieldElement {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("field context mismatch")
    }
}

impl Sub for FieldElement {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + rhs
    }
}

impl Neg for FieldElement {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        self
    }
}

impl Mul for FieldElement {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("field context mismatch")
    }
}

impl Div for FieldElement {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        match self.checked_div(&rhs) {
            Ok(q) => q,
            Err(e) => panic!("{e}"),
        }
    }
}

impl AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElement {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self += rhs;
    }
}

impl MulAssign for FieldElement {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

#[derive(Serialize, Deserialize)]
struct FieldElementRecord {
    d: u32,
    hex: String,
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldElementRecord { d: self.degree(), hex: self.to_hex() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let rec = FieldElementRecord::deserialize(de)?;
        let ctx = FieldContext::get(rec.d).map_err(D::Error::custom)?;
        ctx.parse_hex(&rec.hex).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f4() -> &'static FieldContext {
        FieldContext::of(2)
    }

    #[test]
    fn f2_one_plus_one() {
        let f2 = FieldContext::of(1);
        assert_eq!(f2.one() + f2.one(), f2.zero());
        assert_eq!(f2.one().trace(), 1);
        assert!(f2.one().solve_artin_schreier().is_empty());
    }

    #[test]
    fn f4_products_and_inverse() {
        let g = f4().generator();
        let g1 = g + f4().one();
        assert_eq!(g * g1, f4().one());
        assert_eq!(f4().one() / g, g1);
        assert_eq!(g + f4().zero(), g);
        assert_eq!(g.trace(), 1);
        assert_eq!(f4().zero().trace(), 0);
    }

    #[test]
    fn artin_schreier_in_f4() {
        let g = f4().generator();
        assert_eq!(f4().one().solve_artin_schreier(), vec![g, g + f4().one()]);
        assert_eq!(f4().zero().solve_artin_schreier(), vec![f4().zero(), f4().one()]);
    }

    #[test]
    fn division_by_zero_and_mismatch_are_errors() {
        let a = f4().one();
        assert_eq!(a.checked_div(&f4().zero()), Err(FieldError::DivisionByZero));
        let b = FieldContext::of(3).one();
        assert_eq!(a.checked_add(&b), Err(FieldError::ContextMismatch { left: 2, right: 3 }));
        assert!(FieldContext::get(0).is_err());
        assert!(FieldContext::get(128).is_err());
    }

    #[test]
    fn element_degrees() {
        assert_eq!(f4().zero().element_degree(), 1);
        assert_eq!(f4().generator().element_degree(), 2);
        let f64 = FieldContext::of(6);
        let w = f4().generator().embed(f64).unwrap();
        assert_eq!(w.element_degree(), 2);
        let f16 = FieldContext::of(4);
        let w16 = f4().generator().embed(f16).unwrap();
        assert_eq!(w16.pow(3), f16.one());
        assert_ne!(w16, f16.one());
    }

    #[test]
    fn artin_schreier_exhaustive_small_fields() {
        for d in 1..=8 {
            let ctx = FieldContext::of(d);
            for c in ctx.elements() {
                let sols = c.solve_artin_schreier();
                let brute: Vec<_> = ctx.elements().filter(|y| y.square() + *y == c).collect();
                assert_eq!(sols, brute, "d={d} c={c}");
                assert_eq!(sols.is_empty(), c.trace() == 1);
            }
        }
    }

    #[test]
    fn even_degree_linear_solver_matches_half_trace_on_odd() {
        // odd degrees use the half trace; cross-check it against the pivot table path
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [3, 5, 7, 13, 31, 61, 67, 127] {
            let ctx = FieldContext::of(d);
            for _ in 0..50 {
                let c = ctx.random(&mut rng);
                for y in c.solve_artin_schreier() {
                    assert_eq!(y.square() + y, c);
                }
            }
        }
    }

    #[test]
    fn large_degree_arithmetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [63, 64, 65, 96, 127] {
            let ctx = FieldContext::of(d);
            for _ in 0..20 {
                let a = ctx.random(&mut rng);
                if a.is_zero() {
                    continue;
                }
                assert_eq!(a * a.inv().unwrap(), ctx.one());
                assert_eq!(a.frobenius(d), a);
                assert_eq!(a.sqrt().square(), a);
            }
        }
    }

    #[test]
    fn serde_record() {
        let ctx = FieldContext::of(4);
        let a = ctx.element(0xb);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"d":4,"hex":"b"}"#);
        let back: FieldElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
