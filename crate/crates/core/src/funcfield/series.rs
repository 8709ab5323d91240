//! Truncated Laurent series Σ c_i t^i known modulo t^prec.

use std::fmt;

use crate::gf2::{FieldContext, FieldElement, Poly};

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    ctx: &'static FieldContext,
    /// exponent of coeffs[0]; coeffs[0] is nonzero unless the series is O(t^prec)
    start: i64,
    coeffs: Vec<FieldElement>,
    /// the series is known modulo t^prec
    prec: i64,
}

impl Series {
    pub fn zero(ctx: &'static FieldContext, prec: i64) -> Self {
        Series { ctx, start: prec, coeffs: Vec::new(), prec }
    }

    pub fn constant(c: FieldElement, prec: i64) -> Self {
        Self::from_coeffs(c.context(), 0, vec![c], prec)
    }

    /// t itself, known to the given precision.
    pub fn uniformizer(ctx: &'static FieldContext, prec: i64) -> Self {
        Self::from_coeffs(ctx, 1, vec![ctx.one()], prec)
    }

    /// Σ coeffs[i] t^(start+i) + O(t^prec); coefficients beyond prec are dropped.
    pub fn from_coeffs(
        ctx: &'static FieldContext,
        start: i64,
        mut coeffs: Vec<FieldElement>,
        prec: i64,
    ) -> Self {
        let keep = (prec - start).max(0) as usize;
        coeffs.truncate(keep);
        coeffs.resize(keep, ctx.zero());
        let mut s = Series { ctx, start, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                self.coeffs.drain(..k);
                self.start += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.start = self.prec;
            }
        }
    }

    pub fn context(&self) -> &'static FieldContext {
        self.ctx
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Number of known coefficients from the leading term on.
    pub fn relative_precision(&self) -> i64 {
        self.prec - self.start
    }

    /// The valuation, or `None` when every known coefficient vanishes.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.first().copied()
    }

    /// Coefficient of t^i (zero below the valuation; panics beyond the precision).
    pub fn coeff(&self, i: i64) -> FieldElement {
        assert!(i < self.prec, "coefficient t^{i} is beyond precision {}", self.prec);
        if i < self.start {
            return self.ctx.zero();
        }
        self.coeffs[(i - self.start) as usize]
    }

    /// Coefficients of t^from, …, t^(to−1).
    pub fn coeffs_range(&self, from: i64, to: i64) -> Vec<FieldElement> {
        (from..to).map(|i| self.coeff(i)).collect()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        Self::from_coeffs(self.ctx, self.start, self.coeffs.clone(), prec)
    }

    pub fn add(&self, other: &Series) -> Series {
        let prec = self.prec.min(other.prec);
        let start = self.start.min(other.start).min(prec);
        let len = (prec - start).max(0) as usize;
        let mut coeffs = vec![self.ctx.zero(); len];
        for (s, off) in [(self, self.start - start), (other, other.start - start)] {
            for (i, &c) in s.coeffs.iter().enumerate() {
                if let Some(slot) = coeffs.get_mut(off as usize + i) {
                    *slot += c;
                }
            }
        }
        Self::from_coeffs(self.ctx, start, coeffs, prec)
    }

    pub fn mul(&self, other: &Series) -> Series {
        let prec = match (self.valuation(), other.valuation()) {
            (Some(v1), Some(v2)) => (self.prec + v2).min(other.prec + v1),
            (Some(v1), None) => other.prec + v1,
            (None, Some(v2)) => self.prec + v2,
            (None, None) => self.prec + other.prec,
        };
        if self.is_known_zero() || other.is_known_zero() {
            return Series::zero(self.ctx, prec);
        }
        let start = self.start + other.start;
        let len = (prec - start).max(0) as usize;
        let mut coeffs = vec![self.ctx.zero(); len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(self.ctx, start, coeffs, prec)
    }

    pub fn scale(&self, c: FieldElement) -> Series {
        if c.is_zero() {
            return Series::zero(self.ctx, self.prec);
        }
        Self::from_coeffs(self.ctx, self.start, self.coeffs.iter().map(|&a| a * c).collect(), self.prec)
    }

    /// Multiplicative inverse; `None` if no coefficient is known to be nonzero.
    pub fn inv(&self) -> Option<Series> {
        let lead_inv = self.leading()?.inv().expect("leading coefficient is nonzero");
        let n = self.coeffs.len();
        let mut out = vec![self.ctx.zero(); n];
        out[0] = lead_inv;
        for k in 1..n {
            let mut acc = self.ctx.zero();
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = acc * lead_inv;
        }
        Some(Self::from_coeffs(self.ctx, -self.start, out, -self.start + n as i64))
    }

    pub fn div(&self, other: &Series) -> Option<Series> {
        Some(self.mul(&other.inv()?))
    }

    /// Formal derivative d/dt.
    pub fn derivative(&self) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if (self.start + i as i64).rem_euclid(2) == 1 { c } else { self.ctx.zero() })
            .collect();
        Self::from_coeffs(self.ctx, self.start - 1, coeffs, self.prec - 1)
    }

    /// p(self) by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Series {
        let deg = p.deg().max(0);
        // exact constants only need to outlast every intermediate precision
        let cap = self.prec.max(0) + deg * self.valuation().unwrap_or(0).abs() + 1;
        let mut acc = Series::zero(self.ctx, cap);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Series::constant(c, cap));
        }
        acc
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, "({c})t^{} + ", self.start + i as i64)?;
            }
        }
        write!(f, "O(t^{})", self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_one_minus_t() {
        let ctx = FieldContext::of(3);
        let s = Series::from_coeffs(ctx, 0, vec![ctx.one(), ctx.one()], 8);
        let inv = s.inv().unwrap();
        for i in 0..8 {
            assert_eq!(inv.coeff(i), ctx.one());
        }
        let prod = s.mul(&inv);
        assert_eq!(prod, Series::constant(ctx.one(), 8));
    }

    #[test]
    fn precision_tracks_valuations() {
        let ctx = FieldContext::of(2);
        let t = Series::uniformizer(ctx, 10);
        let t3 = t.mul(&t).mul(&t);
        assert_eq!(t3.valuation(), Some(3));
        let inv = t3.inv().unwrap();
        assert_eq!(inv.valuation(), Some(-3));
        assert_eq!(inv.relative_precision(), t3.relative_precision());
        assert_eq!(t3.derivative().valuation(), Some(2));
        assert_eq!(t.mul(&t).derivative().valuation(), None);
    }

    #[test]
    fn polynomial_evaluation() {
        let ctx = FieldContext::of(4);
        let p = Poly::from_bits(ctx, &[3, 1, 1]);
        let x = Series::from_coeffs(ctx, 0, vec![ctx.element(5), ctx.one()], 12);
        let v = x.eval_poly(&p);
        assert_eq!(v.coeff(0), p.eval(ctx.element(5)));
        assert_eq!(v.precision(), 12);
    }
}
