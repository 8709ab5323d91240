//! Dense univariate polynomials over a binary field.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub};

use super::{FieldContext, FieldElement, FieldError};

/// Coefficients in increasing degree, trimmed so the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ctx: &'static FieldContext,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero(ctx: &'static FieldContext) -> Self {
        Poly { ctx, coeffs: Vec::new() }
    }

    pub fn one(ctx: &'static FieldContext) -> Self {
        Self::constant(ctx.one())
    }

    pub fn x(ctx: &'static FieldContext) -> Self {
        Poly { ctx, coeffs: vec![ctx.zero(), ctx.one()] }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_coeffs(c.context(), vec![c])
    }

    /// X − a
    pub fn linear(a: FieldElement) -> Self {
        Poly { ctx: a.context(), coeffs: vec![a, a.one_like()] }
    }

    /// c·X^k
    pub fn monomial(c: FieldElement, k: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(c.context(), coeffs)
    }

    pub fn from_coeffs(ctx: &'static FieldContext, coeffs: Vec<FieldElement>) -> Self {
        debug_assert!(coeffs.iter().all(|c| std::ptr::eq(c.context(), ctx)));
        let mut p = Poly { ctx, coeffs };
        p.trim();
        p
    }

    /// Polynomial whose coefficients are given as raw element bits.
    pub fn from_bits(ctx: &'static FieldContext, bits: &[u128]) -> Self {
        Self::from_coeffs(ctx, bits.iter().map(|&b| ctx.element(b)).collect())
    }

    /// The GF(2) polynomial packed in `bits`, viewed over `ctx`.
    pub fn from_gf2(ctx: &'static FieldContext, bits: u128) -> Self {
        let n = 128 - bits.leading_zeros() as usize;
        Self::from_coeffs(ctx, (0..n).map(|i| ctx.from_bool(bits >> i & 1 == 1)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn context(&self) -> &'static FieldContext {
        self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to −1.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(self.ctx.zero())
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(self.ctx.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        Self::from_coeffs(self.ctx, self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// self · X^k
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ctx.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { ctx: self.ctx, coeffs }
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let mut acc = self.ctx.zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn square(&self) -> Self {
        let mut coeffs = vec![self.ctx.zero(); (2 * self.coeffs.len()).saturating_sub(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c.square();
        }
        Poly { ctx: self.ctx, coeffs }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { self.ctx.zero() })
            .collect();
        Self::from_coeffs(self.ctx, coeffs)
    }

    /// Square root of a polynomial with zero derivative (every such polynomial is a square).
    pub fn sqrt(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        let coeffs = self.coeffs.iter().step_by(2).map(|c| c.sqrt()).collect();
        Some(Self::from_coeffs(self.ctx, coeffs))
    }

    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly), FieldError> {
        let dd = divisor.degree().ok_or(FieldError::DivisionByZero)?;
        let Some(ds) = self.degree() else {
            return Ok((self.clone(), self.clone()));
        };
        if ds < dd {
            return Ok((Self::zero(self.ctx), self.clone()));
        }
        let inv = divisor.leading().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![self.ctx.zero(); ds - dd + 1];
        for i in (0..=ds - dd).rev() {
            let c = rem[i + dd];
            if c.is_zero() {
                continue;
            }
            let q = c * inv;
            quo[i] = q;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] += q * b;
            }
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(self.ctx, quo), Self::from_coeffs(self.ctx, rem)))
    }

    /// Remainder; panics on a zero divisor.
    pub fn rem(&self, m: &Poly) -> Poly {
        self.divrem(m).expect("division by the zero polynomial").1
    }

    /// Exact quotient; panics on a zero divisor.
    pub fn div_exact(&self, m: &Poly) -> Poly {
        let (q, r) = self.divrem(m).expect("division by the zero polynomial");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with g = s·self + t·other monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let ctx = self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(ctx), Self::zero(ctx));
        let (mut t0, mut t1) = (Self::zero(ctx), Self::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().inv() {
            Some(inv) => (r0.scale(inv), s0.scale(inv), t0.scale(inv)),
            None => (r0, s0, t0),
        }
    }

    /// Inverse of self modulo m, if coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.xgcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m)
    }

    /// self^(2^k) mod m.
    pub fn frobenius_mod(&self, k: u32, m: &Poly) -> Poly {
        let mut r = self.rem(m);
        for _ in 0..k {
            r = r.square().rem(m);
        }
        r
    }

    /// Substitute `inner` for X.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Self::zero(self.ctx);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c);
        }
        acc
    }

    /// Coefficientwise image in a larger field.
    pub fn embed(&self, target: &'static FieldContext) -> Result<Poly, FieldError> {
        let coeffs = self.coeffs.iter().map(|c| c.embed(target)).collect::<Result<_, _>>()?;
        Ok(Self::from_coeffs(target, coeffs))
    }

    pub fn to_hex(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_hex()).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "X^{i}")?,
                _ => write!(f, "({c})X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) =
            if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::from_coeffs(self.ctx, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.ctx);
        }
        let mut coeffs = vec![self.ctx.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(self.ctx, coeffs)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let ctx = FieldContext::of(4);
        let a = Poly::from_bits(ctx, &[3, 0, 7, 1, 9, 2]);
        let b = Poly::from_bits(ctx, &[5, 1, 4]);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.deg() < b.deg());
        assert_eq!(&(&q * &b) + &r, a);
        assert_eq!(a.divrem(&Poly::zero(ctx)), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn xgcd_bezout() {
        let ctx = FieldContext::of(3);
        let a = Poly::from_bits(ctx, &[1, 2, 3, 4, 1]);
        let b = Poly::from_bits(ctx, &[6, 5, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
        assert_eq!(g, a.gcd(&b));
    }

    #[test]
    fn squares_and_derivatives() {
        let ctx = FieldContext::of(5);
        let a = Poly::from_bits(ctx, &[7, 3, 0, 11]);
        let sq = a.square();
        assert_eq!(sq, &a * &a);
        assert!(sq.derivative().is_zero());
        assert_eq!(sq.sqrt().unwrap(), a);
        assert!(a.sqrt().is_none());
    }

    #[test]
    fn compose_and_eval_agree() {
        let ctx = FieldContext::of(4);
        let f = Poly::from_bits(ctx, &[1, 0, 3, 1]);
        let g = Poly::from_bits(ctx, &[2, 5]);
        let h = f.compose(&g);
        for x in ctx.elements() {
            assert_eq!(h.eval(x), f.eval(g.eval(x)));
        }
    }
}
