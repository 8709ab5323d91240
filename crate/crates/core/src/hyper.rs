//! The curves Y² + Y = X^(2g+1) over F_{2^d}: points, the involution (x, y) ↦ (x, y + 1),
//! L-polynomials from point counts, a Newton-polygon supersingularity certificate and
//! Cantor arithmetic on Mumford divisors (u, v) specialised to h = 1.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::gf2::{FieldContext, FieldError, Poly};
use crate::weierstrass::CurvePoint;

/// Largest field degree for exhaustive point counts.
pub const COUNT_LIMIT: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("({u:?}, {v:?}) is not a valid Mumford divisor")]
    InvalidDivisor { u: Vec<String>, v: Vec<String> },
    #[error("the point at infinity has no Mumford representative of degree 1")]
    PointAtInfinity,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("counting over F_2^{0} exceeds the limit F_2^{COUNT_LIMIT}")]
    CountTooLarge(u32),
    #[error("need at least {needed} point counts, got {got}")]
    TooFewCounts { needed: usize, got: usize },
    #[error("Newton identities give a non-integral coefficient at T^{0}")]
    NonIntegral(usize),
    #[error("count over F_2^{k} is {given}, but the L-polynomial predicts {predicted}")]
    InconsistentCounts { k: usize, given: i128, predicted: i128 },
    #[error("malformed L-polynomial: {0}")]
    MalformedL(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    genus: usize,
    ctx: &'static FieldContext,
}

/// Reduced divisor class (u, v): u monic, deg v < deg u ≤ g, u | v² + v − f.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MumfordDivisor {
    pub u: Poly,
    pub v: Poly,
}

impl Serialize for MumfordDivisor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MumfordDivisor", 2)?;
        st.serialize_field("u", &self.u.to_hex())?;
        st.serialize_field("v", &self.v.to_hex())?;
        st.end()
    }
}

impl HyperellipticCurve {
    pub fn new(genus: usize, ctx: &'static FieldContext) -> Result<Self, HyperError> {
        if genus == 0 {
            return Err(HyperError::ZeroGenus);
        }
        Ok(HyperellipticCurve { genus, ctx })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn context(&self) -> &'static FieldContext {
        self.ctx
    }

    /// X^(2g+1)
    pub fn f(&self) -> Poly {
        Poly::monomial(self.ctx.one(), 2 * self.genus + 1)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p.coords() {
            None => true,
            Some((x, y)) => y.square() + y == x.pow(2 * self.genus as u128 + 1),
        }
    }

    /// (x, y) ↦ (x, y + 1), fixing ∞.
    pub fn involution(&self, p: &CurvePoint) -> CurvePoint {
        match p.coords() {
            None => CurvePoint::Infinity,
            Some((x, y)) => CurvePoint::affine(x, y + self.ctx.one()),
        }
    }

    /// All rational points, ∞ first.
    pub fn points(&self) -> Result<Vec<CurvePoint>, HyperError> {
        if self.ctx.degree() > COUNT_LIMIT {
            return Err(HyperError::CountTooLarge(self.ctx.degree()));
        }
        let mut out = vec![CurvePoint::Infinity];
        for x in self.ctx.elements() {
            for y in x.pow(2 * self.genus as u128 + 1).solve_artin_schreier() {
                out.push(CurvePoint::affine(x, y));
            }
        }
        Ok(out)
    }

    /// #C(F_{2^k}): each x with Tr(x^(2g+1)) = 0 gives two points, plus ∞.
    pub fn count_points(genus: usize, k: u32) -> Result<u128, HyperError> {
        if k > COUNT_LIMIT {
            return Err(HyperError::CountTooLarge(k));
        }
        let ctx = FieldContext::get(k)?;
        let e = 2 * genus as u128 + 1;
        Ok(1 + 2 * ctx.elements().filter(|x| x.pow(e).trace() == 0).count() as u128)
    }

    pub fn identity(&self) -> MumfordDivisor {
        MumfordDivisor { u: Poly::one(self.ctx), v: Poly::zero(self.ctx) }
    }

    pub fn is_valid(&self, d: &MumfordDivisor) -> bool {
        d.u.is_monic()
            && d.u.deg() <= self.genus as i64
            && d.v.deg() < d.u.deg()
            && (&(&d.v.square() + &d.v) + &self.f()).rem(&d.u).is_zero()
    }

    fn check(&self, d: &MumfordDivisor) -> Result<(), HyperError> {
        if self.is_valid(d) {
            Ok(())
        } else {
            Err(HyperError::InvalidDivisor { u: d.u.to_hex(), v: d.v.to_hex() })
        }
    }

    /// (P) − ∞ as (X − x, y).
    pub fn point_divisor(&self, p: &CurvePoint) -> Result<MumfordDivisor, HyperError> {
        let (x, y) = p.coords().ok_or(HyperError::PointAtInfinity)?;
        if !self.contains(p) {
            return Err(HyperError::NotOnCurve);
        }
        Ok(MumfordDivisor { u: Poly::linear(x), v: Poly::constant(y) })
    }

    /// −D = (u, v + 1 mod u).
    pub fn neg(&self, d: &MumfordDivisor) -> MumfordDivisor {
        let v = (&d.v + &Poly::one(self.ctx)).rem(&d.u);
        MumfordDivisor { u: d.u.clone(), v }
    }

    /// Cantor composition and reduction with h = 1 (no division by 2 occurs).
    pub fn add(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> Result<MumfordDivisor, HyperError> {
        self.check(d1)?;
        self.check(d2)?;
        Ok(self.add_unchecked(d1, d2))
    }

    fn add_unchecked(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> MumfordDivisor {
        let one = Poly::one(self.ctx);
        let f = self.f();
        let (e0, e1, e2) = d1.u.xgcd(&d2.u);
        let w = &(&d1.v + &d2.v) + &one;
        let (d, c1, c2) = e0.xgcd(&w);
        let (s1, s2, s3) = (&c1 * &e1, &c1 * &e2, c2);
        let u = (&d1.u * &d2.u).div_exact(&d.square());
        let num = &(&(&(&s1 * &d1.u) * &d2.v) + &(&(&s2 * &d2.u) * &d1.v)) + &(&s3 * &(&(&d1.v * &d2.v) + &f));
        let mut v = num.div_exact(&d).rem(&u);
        let mut u = u;
        while u.deg() > self.genus as i64 {
            let u2 = (&(&f + &v) + &v.square()).div_exact(&u).monic();
            v = (&v + &one).rem(&u2);
            u = u2;
        }
        MumfordDivisor { u, v }
    }

    pub fn mul(&self, k: u128, d: &MumfordDivisor) -> Result<MumfordDivisor, HyperError> {
        self.check(d)?;
        let mut acc = self.identity();
        let mut base = d.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// The class of (P) − (σP).
    pub fn class_of_point_pair(&self, p: &CurvePoint) -> Result<MumfordDivisor, HyperError> {
        let dp = self.point_divisor(p)?;
        let dsp = self.point_divisor(&self.involution(p))?;
        self.add(&dp, &self.neg(&dsp))
    }

    /// #J(F_{2^d}) from the L-polynomial of the curve over F₂.
    pub fn jacobian_order(&self) -> Result<u128, HyperError> {
        let l = curve_lpoly(self.genus)?;
        jacobian_order_over(&l, self.ctx.degree())
    }

    /// Exact order of a class, by stripping primes from #J.
    pub fn divisor_class_order(&self, d: &MumfordDivisor) -> Result<u128, HyperError> {
        self.check(d)?;
        let n = self.jacobian_order()?;
        let factors = arith::factor(n);
        Ok(arith::order_by_stripping(n, &factors, |k| {
            self.mul(k, d).expect("valid divisor") == self.identity()
        }))
    }
}

/// Integer polynomial Σ c_i T^i, lowest degree first.
pub type LPoly = Vec<i128>;

/// L(T) = Π(1 − α_i T) over F₂ from #C(F_{2^k}), k = 1..: Newton's identities for the first
/// g coefficients, then c_{2g−i} = 2^(g−i)·c_i. Extra counts beyond g are checked.
pub fn zeta_lpoly(genus: usize, counts: &[u128]) -> Result<LPoly, HyperError> {
    if genus == 0 {
        return Err(HyperError::ZeroGenus);
    }
    if counts.len() < genus {
        return Err(HyperError::TooFewCounts { needed: genus, got: counts.len() });
    }
    let s: Vec<i128> = counts.iter().enumerate().map(|(i, &n)| (1i128 << (i + 1)) + 1 - n as i128).collect();
    let mut c = vec![0i128; 2 * genus + 1];
    c[0] = 1;
    for k in 1..=genus {
        let acc: i128 = (1..=k).map(|i| s[i - 1] * c[k - i]).sum();
        if acc % k as i128 != 0 {
            return Err(HyperError::NonIntegral(k));
        }
        c[k] = -acc / k as i128;
    }
    for i in 0..genus {
        c[2 * genus - i] = (1i128 << (genus - i)) * c[i];
    }
    let predicted = power_sums(&c, counts.len());
    for (k, (&given, &p)) in counts.iter().zip(&predicted).enumerate() {
        let pred_count = (1i128 << (k + 1)) + 1 - p;
        if given as i128 != pred_count {
            return Err(HyperError::InconsistentCounts { k: k + 1, given: given as i128, predicted: pred_count });
        }
    }
    Ok(c)
}

/// s_k = Σ α_i^k for k = 1..=m from L = Σ c_i T^i.
pub fn power_sums(l: &[i128], m: usize) -> Vec<i128> {
    let deg = l.len() - 1;
    let mut s = Vec::with_capacity(m);
    for k in 1..=m {
        // k·c_k + Σ_{i=1}^{k−1} s_i c_{k−i} + … = 0, with c_j = 0 beyond deg
        let ck = if k <= deg { l[k] } else { 0 };
        let mut acc = k as i128 * ck;
        for i in 1..k {
            let j = k - i;
            if j <= deg {
                acc += s[i - 1] * l[j];
            }
        }
        s.push(-acc);
    }
    s
}

/// L-polynomial of Y² + Y = X^(2g+1) over F₂ from exhaustive counts over F_2 … F_{2^(2g)}.
pub fn curve_lpoly(genus: usize) -> Result<LPoly, HyperError> {
    let counts: Vec<u128> =
        (1..=2 * genus as u32).map(|k| HyperellipticCurve::count_points(genus, k)).collect::<Result<_, _>>()?;
    zeta_lpoly(genus, &counts)
}

/// #J(F_{2^d}) = Π(1 − α_i^d), from the power sums of the α_i^d.
pub fn jacobian_order_over(l: &[i128], d: u32) -> Result<u128, HyperError> {
    let deg = l.len() - 1;
    let s = power_sums(l, deg * d as usize);
    let sd: Vec<i128> = (1..=deg).map(|k| s[k * d as usize - 1]).collect();
    // e_k of the α_i^d, then Π(1 − β_i) = Σ (−1)^k e_k
    let mut e = vec![1i128];
    for k in 1..=deg {
        let acc: i128 = (1..=k).map(|i| if i % 2 == 1 { sd[i - 1] * e[k - i] } else { -sd[i - 1] * e[k - i] }).sum();
        if acc % k as i128 != 0 {
            return Err(HyperError::NonIntegral(k));
        }
        e.push(acc / k as i128);
    }
    let n: i128 = e.iter().enumerate().map(|(k, &ek)| if k % 2 == 0 { ek } else { -ek }).sum();
    u128::try_from(n).map_err(|_| HyperError::MalformedL(format!("negative Jacobian order {n}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct NewtonCertificate {
    pub genus: usize,
    /// (i, v₂(c_i)); None where c_i = 0
    pub points: Vec<(usize, Option<u32>)>,
    /// lower convex hull vertices
    pub polygon: Vec<(usize, u32)>,
    pub supersingular: bool,
}

/// Supersingular iff the 2-adic Newton polygon of L is the single segment of slope 1/2:
/// v₂(c_i) ≥ i/2 for every i and v₂(c_{2g}) = g.
pub fn is_supersingular(l: &[i128]) -> Result<NewtonCertificate, HyperError> {
    if l.len() < 3 || l.len().is_multiple_of(2) {
        return Err(HyperError::MalformedL("degree must be 2g with g ≥ 1".into()));
    }
    if l[0] != 1 {
        return Err(HyperError::MalformedL("constant term must be 1".into()));
    }
    let g = (l.len() - 1) / 2;
    for i in 0..g {
        if l[2 * g - i] != (1i128 << (g - i)) * l[i] {
            return Err(HyperError::MalformedL(format!("functional equation fails at T^{}", 2 * g - i)));
        }
    }
    let points: Vec<(usize, Option<u32>)> = l.iter().enumerate().map(|(i, &c)| (i, arith::v2(c))).collect();
    let mut polygon: Vec<(usize, u32)> = Vec::new();
    for &(i, v) in &points {
        let Some(v) = v else { continue };
        while polygon.len() >= 2 {
            let (x1, y1) = polygon[polygon.len() - 2];
            let (x2, y2) = polygon[polygon.len() - 1];
            // drop the middle vertex if it lies on or above the chord
            let cross = (x2 - x1) as i64 * (v as i64 - y1 as i64) - (y2 as i64 - y1 as i64) * (i - x1) as i64;
            if cross <= 0 {
                polygon.pop();
            } else {
                break;
            }
        }
        polygon.push((i, v));
    }
    let supersingular = points.iter().all(|&(i, v)| v.is_none_or(|v| 2 * v as usize >= i))
        && points[2 * g].1 == Some(g as u32);
    Ok(NewtonCertificate { genus: g, points, polygon, supersingular })
}

/// Orders of the classes (P) − (σP) for all affine P over the curve's field, keyed by order.
pub fn point_pair_orders(c: &HyperellipticCurve) -> Result<BTreeMap<u128, usize>, HyperError> {
    let mut out = BTreeMap::new();
    for p in c.points()?.iter().filter(|p| !p.is_infinity()) {
        let d = c.class_of_point_pair(p)?;
        *out.entry(c.divisor_class_order(&d)?).or_insert(0) += 1;
    }
    Ok(out)
}

/// Inverse of the g = 1 dictionary (P) ↦ (X − x, y).
pub fn divisor_to_point(d: &MumfordDivisor) -> Option<CurvePoint> {
    match d.u.deg() {
        0 => Some(CurvePoint::Infinity),
        1 => Some(CurvePoint::affine(d.u.coeff(0), d.v.coeff(0))),
        _ => None,
    }
}

impl HyperellipticCurve {
    /// The g = 1 image of a point: (X − x, y), or the identity for ∞.
    pub fn elliptic_divisor(&self, p: &CurvePoint) -> Result<MumfordDivisor, HyperError> {
        if p.is_infinity() {
            Ok(self.identity())
        } else {
            self.point_divisor(p)
        }
    }
}
