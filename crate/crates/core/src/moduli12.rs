//! Weighted projective coordinates [a, b, c] ∈ P(1, 2, 3) for pairs (E, P), via the Tate
//! normal form Y² + aXY + cY = X³ + bX² with P = (0, 0), together with explicit
//! discriminant and j-invariant polynomials and the standard Weierstrass formulary used to
//! cross-check them. Everything is generic over exact rationals and F_{2^d}.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf2::FieldElement;
use crate::weierstrass::{CurvePoint, WeierstrassCurve};

/// Field operations needed by the formulas, with integer constants mapped into the field.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn is_square(&self) -> bool;
    fn is_cube(&self) -> bool;
    /// "Q" or "F2^d"
    fn field_tag(&self) -> String;
    fn record(&self) -> String;

    fn one_like(&self) -> Self {
        self.int_like(1)
    }
    fn neg(&self) -> Self {
        self.zero_like().sub(self)
    }
    fn pow(&self, e: u32) -> Self {
        (0..e).fold(self.one_like(), |acc, _| acc.mul(self))
    }
    fn scale(&self, n: i64) -> Self {
        self.int_like(n).mul(self)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn int_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_square(&self) -> bool {
        let perfect = |n: &BigInt| !n.is_negative() && n.sqrt().pow(2) == *n;
        perfect(self.numer()) && perfect(self.denom())
    }
    fn is_cube(&self) -> bool {
        let perfect = |n: &BigInt| n.cbrt().pow(3) == *n;
        perfect(self.numer()) && perfect(self.denom())
    }
    fn field_tag(&self) -> String {
        "Q".into()
    }
    fn record(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        FieldElement::zero_like(self)
    }
    fn int_like(&self, n: i64) -> Self {
        if n.rem_euclid(2) == 1 {
            FieldElement::one_like(self)
        } else {
            FieldElement::zero_like(self)
        }
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self + *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn inv(&self) -> Option<Self> {
        FieldElement::inv(self)
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn is_square(&self) -> bool {
        true
    }
    fn is_cube(&self) -> bool {
        let q1 = self.context().order() - 1;
        FieldElement::is_zero(self) || !q1.is_multiple_of(3) || FieldElement::pow(self, q1 / 3).is_one()
    }
    fn field_tag(&self) -> String {
        format!("F2^{}", self.degree())
    }
    fn record(&self) -> String {
        self.to_hex()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("weighted point [0, 0, 0] is not allowed")]
    AllZero,
    #[error("marked point is the identity or has order 2")]
    SmallOrder,
    #[error("point is not on the curve")]
    NotOnCurve,
}

/// A value that may be ∞.
#[derive(Clone, Debug, PartialEq)]
pub enum Projective<S> {
    Finite(S),
    Infinity,
}

/// [a, b, c] with weights 1, 2, 3.
#[derive(Clone, Debug)]
pub struct WeightedPoint<S: Scalar> {
    pub a: S,
    pub b: S,
    pub c: S,
}

impl<S: Scalar> WeightedPoint<S> {
    pub fn new(a: S, b: S, c: S) -> Result<Self, ModuliError> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(ModuliError::AllZero);
        }
        Ok(WeightedPoint { a, b, c })
    }

    /// [λa, λ²b, λ³c]
    pub fn scaled(&self, l: &S) -> Self {
        WeightedPoint { a: l.mul(&self.a), b: l.pow(2).mul(&self.b), c: l.pow(3).mul(&self.c) }
    }

    /// a = 1 when a ≠ 0; otherwise b = c when both are nonzero (the unique scaling
    /// available over the field); otherwise unchanged.
    pub fn canonical(&self) -> Self {
        if let Some(l) = self.a.inv() {
            return self.scaled(&l);
        }
        match self.b.div(&self.c) {
            Some(l) if !self.b.is_zero() => self.scaled(&l),
            _ => self.clone(),
        }
    }

    pub fn discriminant(&self) -> S {
        discriminant_formula(self)
    }

    pub fn j(&self) -> Projective<S> {
        j_formula(self)
    }

    /// The curve Y² + aXY + cY = X³ + bX² as (a1, a2, a3, a4, a6).
    pub fn curve_coefficients(&self) -> [S; 5] {
        let z = self.a.zero_like();
        [self.a.clone(), self.b.clone(), self.c.clone(), z.clone(), z]
    }
}

impl<S: Scalar> Serialize for WeightedPoint<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        let can = self.canonical();
        let mut st = s.serialize_struct("WeightedPoint", 2)?;
        st.serialize_field("field", &self.a.field_tag())?;
        st.serialize_field("abc", &[can.a.record(), can.b.record(), can.c.record()])?;
        st.end()
    }
}

/// Whether q = [λa, λ²b, λ³c] for some nonzero λ in the field.
pub fn wp_equal<S: Scalar>(p: &WeightedPoint<S>, q: &WeightedPoint<S>) -> bool {
    let pattern = |w: &WeightedPoint<S>| (w.a.is_zero(), w.b.is_zero(), w.c.is_zero());
    if pattern(p) != pattern(q) {
        return false;
    }
    let lambda = if !p.a.is_zero() {
        q.a.div(&p.a)
    } else if !p.b.is_zero() && !p.c.is_zero() {
        // λ³c / λ²b = λ
        q.c.mul(&p.b).div(&p.c.mul(&q.b))
    } else if !p.b.is_zero() {
        return q.b.div(&p.b).is_some_and(|r| r.is_square());
    } else {
        return q.c.div(&p.c).is_some_and(|r| r.is_cube());
    };
    match lambda {
        Some(l) => {
            let s = p.scaled(&l);
            s.a == q.a && s.b == q.b && s.c == q.c
        }
        None => false,
    }
}

/// −c²(ba⁴ + 8a²b² + 16b³ − a³c + 27c² − 36abc)
pub fn discriminant_formula<S: Scalar>(p: &WeightedPoint<S>) -> S {
    let (a, b, c) = (&p.a, &p.b, &p.c);
    c.pow(2).neg().mul(&divisor_factor(a, b, c))
}

fn divisor_factor<S: Scalar>(a: &S, b: &S, c: &S) -> S {
    b.mul(&a.pow(4))
        .add(&a.pow(2).mul(&b.pow(2)).scale(8))
        .add(&b.pow(3).scale(16))
        .sub(&a.pow(3).mul(c))
        .add(&c.pow(2).scale(27))
        .sub(&a.mul(b).mul(c).scale(36))
}

/// −(16b² + 8ba² + a⁴ − 24ac)³ / (c²(ba⁴ + 8a²b² + 16b³ − a³c + 27c² − 36abc))
pub fn j_formula<S: Scalar>(p: &WeightedPoint<S>) -> Projective<S> {
    let (a, b, c) = (&p.a, &p.b, &p.c);
    let num = b.pow(2).scale(16).add(&b.mul(&a.pow(2)).scale(8)).add(&a.pow(4)).sub(&a.mul(c).scale(24)).pow(3);
    let den = c.pow(2).mul(&divisor_factor(a, b, c));
    match num.neg().div(&den) {
        Some(j) => Projective::Finite(j),
        None => Projective::Infinity,
    }
}

/// The j-invariant of the pair's curve.
pub fn forgetful<S: Scalar>(p: &WeightedPoint<S>) -> Projective<S> {
    j_formula(p)
}

/// b2, b4, b6, b8 of a long Weierstrass equation.
pub fn b_invariants<S: Scalar>(k: &[S; 5]) -> [S; 4] {
    let [a1, a2, a3, a4, a6] = k;
    let b2 = a1.pow(2).add(&a2.scale(4));
    let b4 = a1.mul(a3).add(&a4.scale(2));
    let b6 = a3.pow(2).add(&a6.scale(4));
    let b8 = a1
        .pow(2)
        .mul(a6)
        .add(&a2.mul(a6).scale(4))
        .sub(&a1.mul(a3).mul(a4))
        .add(&a2.mul(&a3.pow(2)))
        .sub(&a4.pow(2));
    [b2, b4, b6, b8]
}

/// Δ = −b2²b8 − 8b4³ − 27b6² + 9b2b4b6
pub fn standard_discriminant<S: Scalar>(k: &[S; 5]) -> S {
    let [b2, b4, b6, b8] = b_invariants(k);
    b2.pow(2)
        .mul(&b8)
        .neg()
        .sub(&b4.pow(3).scale(8))
        .sub(&b6.pow(2).scale(27))
        .add(&b2.mul(&b4).mul(&b6).scale(9))
}

/// j = c4³/Δ with c4 = b2² − 24b4.
pub fn standard_j<S: Scalar>(k: &[S; 5]) -> Projective<S> {
    let [b2, b4, _, _] = b_invariants(k);
    let c4 = b2.pow(2).sub(&b4.scale(24));
    match c4.pow(3).div(&standard_discriminant(k)) {
        Some(j) => Projective::Finite(j),
        None => Projective::Infinity,
    }
}

/// Coefficients after x = x' + r, y = y' + s·x' + t.
pub fn change_of_variables<S: Scalar>(k: &[S; 5], r: &S, s: &S, t: &S) -> [S; 5] {
    let [a1, a2, a3, a4, a6] = k;
    let n1 = a1.add(&s.scale(2));
    let n2 = a2.sub(&s.mul(a1)).add(&r.scale(3)).sub(&s.pow(2));
    let n3 = a3.add(&r.mul(a1)).add(&t.scale(2));
    let n4 = a4
        .sub(&s.mul(a3))
        .add(&r.mul(a2).scale(2))
        .sub(&t.add(&r.mul(s)).mul(a1))
        .add(&r.pow(2).scale(3))
        .sub(&s.mul(t).scale(2));
    let n6 = a6
        .add(&r.mul(a4))
        .add(&r.pow(2).mul(a2))
        .add(&r.pow(3))
        .sub(&t.mul(a3))
        .sub(&t.pow(2))
        .sub(&r.mul(t).mul(a1));
    [n1, n2, n3, n4, n6]
}

/// Y² + a1XY + a3Y − (X³ + a2X² + a4X + a6) at (x, y).
pub fn curve_equation<S: Scalar>(k: &[S; 5], x: &S, y: &S) -> S {
    let [a1, a2, a3, a4, a6] = k;
    y.pow(2)
        .add(&a1.mul(x).mul(y))
        .add(&a3.mul(y))
        .sub(&x.pow(3))
        .sub(&a2.mul(&x.pow(2)))
        .sub(&a4.mul(x))
        .sub(a6)
}

/// Moves (x0, y0) to the origin and clears a4 by a shear, leaving
/// Y² + aXY + cY = X³ + bX². Requires the point not to be 2-torsion.
pub fn tate_normal_form_coeffs<S: Scalar>(k: &[S; 5], x0: &S, y0: &S) -> Result<WeightedPoint<S>, ModuliError> {
    if !curve_equation(k, x0, y0).is_zero() {
        return Err(ModuliError::NotOnCurve);
    }
    let z = x0.zero_like();
    let moved = change_of_variables(k, x0, &z, y0);
    debug_assert!(moved[4].is_zero());
    let s = moved[3].div(&moved[2]).ok_or(ModuliError::SmallOrder)?;
    let sheared = change_of_variables(&moved, &z, &s, &z);
    debug_assert!(sheared[3].is_zero() && sheared[4].is_zero());
    let [a, b, c, _, _] = sheared;
    WeightedPoint::new(a, b, c)
}

/// Weighted moduli point of (E, P).
pub fn tate_normal_form(e: &WeierstrassCurve, p: &CurvePoint) -> Result<WeightedPoint<FieldElement>, ModuliError> {
    let (x, y) = p.coords().ok_or(ModuliError::SmallOrder)?;
    tate_normal_form_coeffs(&e.coefficients(), &x, &y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::FieldContext;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn random_q(rng: &mut ChaCha8Rng) -> BigRational {
        q(rng.gen_range(-50..=50), rng.gen_range(1..=9))
    }

    #[test]
    fn weighted_equality() {
        let p = WeightedPoint::new(q(1, 1), q(3, 2), q(-2, 5)).unwrap();
        assert!(wp_equal(&p, &p.scaled(&q(-7, 3))));
        let z = WeightedPoint::new(q(0, 1), q(0, 1), q(1, 1)).unwrap();
        assert!(wp_equal(&z, &z.scaled(&q(5, 1))));
        assert!(!wp_equal(&z, &WeightedPoint::new(q(0, 1), q(0, 1), q(2, 1)).unwrap()));
        let e1 = WeightedPoint::new(q(1, 1), q(0, 1), q(0, 1)).unwrap();
        let e2 = WeightedPoint::new(q(0, 1), q(1, 1), q(0, 1)).unwrap();
        assert!(!wp_equal(&e1, &e2));
        assert!(WeightedPoint::new(q(0, 1), q(0, 1), q(0, 1)).is_err());
    }

    #[test]
    fn special_values() {
        let z = WeightedPoint::new(q(0, 1), q(0, 1), q(1, 1)).unwrap();
        assert_eq!(discriminant_formula(&z), q(-27, 1));
        assert_eq!(j_formula(&z), Projective::Finite(q(0, 1)));
        let deg = WeightedPoint::new(q(2, 1), q(1, 1), q(0, 1)).unwrap();
        assert_eq!(discriminant_formula(&deg), q(0, 1));
    }

    #[test]
    fn formulas_match_standard_formulary() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        while checked < 100 {
            let p = WeightedPoint::new(random_q(&mut rng), random_q(&mut rng), random_q(&mut rng)).unwrap();
            let std_delta = standard_discriminant(&p.curve_coefficients());
            if Zero::is_zero(&std_delta) {
                continue;
            }
            assert_eq!(discriminant_formula(&p), std_delta);
            assert_eq!(j_formula(&p), standard_j(&p.curve_coefficients()));
            let l = random_q(&mut rng);
            if Zero::is_zero(&l) {
                continue;
            }
            let s = p.scaled(&l);
            assert_eq!(discriminant_formula(&s), discriminant_formula(&p) * l.pow(12));
            assert_eq!(j_formula(&s), j_formula(&p));
            checked += 1;
        }
    }

    #[test]
    fn tate_form_preserves_j_over_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut checked = 0;
        while checked < 100 {
            let mut k: [BigRational; 5] = std::array::from_fn(|_| random_q(&mut rng));
            let (x, y) = (random_q(&mut rng), random_q(&mut rng));
            k[4] = q(0, 1);
            k[4] = curve_equation(&k, &x, &y);
            if Zero::is_zero(&standard_discriminant(&k)) {
                continue;
            }
            let Ok(w) = tate_normal_form_coeffs(&k, &x, &y) else { continue };
            assert_eq!(j_formula(&w), standard_j(&k));
            let minus_y = -(&y) - &k[0] * &x - &k[2];
            let w2 = tate_normal_form_coeffs(&k, &x, &minus_y).unwrap();
            assert!(wp_equal(&w, &w2));
            checked += 1;
        }
    }

    #[test]
    fn supersingular_pairs() {
        let ctx = FieldContext::of(8);
        let e = WeierstrassCurve::supersingular(ctx);
        let o = ctx.zero();
        let w = tate_normal_form(&e, &CurvePoint::affine(o, o)).unwrap();
        assert_eq!((w.a, w.b, w.c), (o, o, ctx.one()));
        let w2 = tate_normal_form(&e, &CurvePoint::affine(o, ctx.one())).unwrap();
        assert!(wp_equal(&w, &w2));
        for p in e.exact_order_points(5).unwrap() {
            let w = tate_normal_form(&e, &p).unwrap();
            assert_eq!(j_formula(&w), Projective::Finite(o));
            let tate = WeierstrassCurve::new(w.curve_coefficients()).unwrap();
            assert_eq!(tate.point_order(&CurvePoint::affine(o, o)).unwrap(), 5);
        }
    }
}
