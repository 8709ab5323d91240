//! Rational functions on a Weierstrass curve, local expansions and ramification data.
//!
//! A function is stored as (A + B·Y)/D with A, B, D ∈ k[X], D monic and
//! gcd(A, B, D) = 1, which makes the representation unique.

mod series;

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf2::{self, FieldContext, FieldElement, FieldError, Poly};
use crate::weierstrass::{CurveError, CurvePoint, WeierstrassCurve};

pub use series::Series;

/// Precisions tried in turn when a valuation is not yet determined.
pub const PRECISION_STEPS: [i64; 4] = [8, 16, 32, 64];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuncError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("functions live on different curves")]
    CurveMismatch,
    #[error("expansion at {point} undetermined at precision {precision}")]
    InsufficientPrecision { point: String, precision: i64 },
    #[error("the function is constant")]
    ConstantFunction,
    #[error("{n}·P is not the identity")]
    NotTorsion { n: i128 },
    #[error("Miller functions need an odd order n ≥ 1 and P ≠ O")]
    BadMillerInput,
    #[error("the Y-coefficient a1X + a3 vanishes identically")]
    DegenerateDerivative,
    #[error("fiber not rational: irreducible factors of degrees {factor_degrees:?} remain, {obstructed} abscissae lack rational ordinates")]
    ExtensionTooSmall { factor_degrees: Vec<usize>, obstructed: usize },
    #[error("different accounting mismatch: found {found}, Riemann-Hurwitz requires {expected}")]
    AccountingMismatch { expected: i64, found: i64 },
}

#[derive(Clone, PartialEq, Eq)]
pub struct CurveRationalFunction {
    curve: WeierstrassCurve,
    a: Poly,
    b: Poly,
    d: Poly,
}

/// A value of a function: an element of the field or ∞.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum BranchValue {
    Finite(FieldElement),
    Infinity,
}

impl Serialize for BranchValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BranchValue::Finite(c) => c.serialize(s),
            BranchValue::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Uniformizer {
    XMinusX0,
    YBased,
    XOverYAtInfinity,
}

#[derive(Clone, Debug)]
pub struct LocalExpansion {
    pub center: CurvePoint,
    pub uniformizer: Uniformizer,
    pub series: Series,
}

impl LocalExpansion {
    pub fn valuation(&self) -> Option<i64> {
        self.series.valuation()
    }

    pub fn precision(&self) -> i64 {
        self.series.precision()
    }
}

/// Local data of a nonconstant function at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointData {
    pub value: BranchValue,
    pub ramification: i64,
    pub different: i64,
}

impl PointData {
    /// Tame iff the characteristic 2 does not divide the index.
    pub fn is_tame(&self) -> bool {
        self.ramification % 2 == 1
    }
}

impl fmt::Debug for CurveRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + ({:?})Y) / ({:?})", self.a, self.b, self.d)
    }
}

impl Serialize for CurveRationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CurveRationalFunction", 4)?;
        st.serialize_field("A", &self.a.to_hex())?;
        st.serialize_field("B", &self.b.to_hex())?;
        st.serialize_field("D", &self.d.to_hex())?;
        st.serialize_field("d", &self.curve.degree())?;
        st.end()
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.coords() {
            None => {
                let mut st = s.serialize_struct("CurvePoint", 1)?;
                st.serialize_field("infinity", &true)?;
                st.end()
            }
            Some((x, y)) => {
                let mut st = s.serialize_struct("CurvePoint", 2)?;
                st.serialize_field("x", &x)?;
                st.serialize_field("y", &y)?;
                st.end()
            }
        }
    }
}

fn h_poly(e: &WeierstrassCurve) -> Poly {
    Poly::from_coeffs(e.context(), vec![e.a3, e.a1])
}

fn rhs_poly(e: &WeierstrassCurve) -> Poly {
    let ctx = e.context();
    Poly::from_coeffs(ctx, vec![e.a6, e.a4, e.a2, ctx.one()])
}

impl CurveRationalFunction {
    /// (A + B·Y)/D in canonical form.
    pub fn new(curve: WeierstrassCurve, a: Poly, b: Poly, d: Poly) -> Result<Self, FuncError> {
        if d.is_zero() {
            return Err(FuncError::DivisionByZero);
        }
        let ctx = curve.context();
        for p in [&a, &b, &d] {
            if !std::ptr::eq(p.context(), ctx) {
                return Err(FieldError::ContextMismatch { left: ctx.degree(), right: p.context().degree() }.into());
            }
        }
        Ok(Self::normalized(curve, a, b, d))
    }

    fn normalized(curve: WeierstrassCurve, a: Poly, b: Poly, d: Poly) -> Self {
        let g = a.gcd(&b).gcd(&d);
        let (mut a, mut b, mut d) = if g.is_one() || g.is_zero() {
            (a, b, d)
        } else {
            (a.div_exact(&g), b.div_exact(&g), d.div_exact(&g))
        };
        let lead = d.leading();
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero denominator");
            a = a.scale(inv);
            b = b.scale(inv);
            d = d.scale(inv);
        }
        CurveRationalFunction { curve, a, b, d }
    }

    pub fn constant(curve: WeierstrassCurve, c: FieldElement) -> Self {
        let ctx = curve.context();
        Self::normalized(curve, Poly::constant(c), Poly::zero(ctx), Poly::one(ctx))
    }

    pub fn one(curve: WeierstrassCurve) -> Self {
        Self::constant(curve, curve.context().one())
    }

    pub fn from_x_poly(curve: WeierstrassCurve, p: Poly) -> Self {
        let ctx = curve.context();
        Self::normalized(curve, p, Poly::zero(ctx), Poly::one(ctx))
    }

    pub fn x(curve: WeierstrassCurve) -> Self {
        Self::from_x_poly(curve, Poly::x(curve.context()))
    }

    pub fn y(curve: WeierstrassCurve) -> Self {
        let ctx = curve.context();
        Self::normalized(curve, Poly::zero(ctx), Poly::one(ctx), Poly::one(ctx))
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    /// (A, B, D)
    pub fn parts(&self) -> (&Poly, &Poly, &Poly) {
        (&self.a, &self.b, &self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.b.is_zero() && self.a.is_constant() && self.d.is_constant()
    }

    fn same_curve(&self, other: &Self) -> Result<(), FuncError> {
        if self.curve == other.curve {
            Ok(())
        } else {
            Err(FuncError::CurveMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FuncError> {
        self.same_curve(other)?;
        let a = &(&self.a * &other.d) + &(&other.a * &self.d);
        let b = &(&self.b * &other.d) + &(&other.b * &self.d);
        Ok(Self::normalized(self.curve, a, b, &self.d * &other.d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FuncError> {
        self.same_curve(other)?;
        let bb = &self.b * &other.b;
        let a = &(&self.a * &other.a) + &(&bb * &rhs_poly(&self.curve));
        let b = &(&(&self.a * &other.b) + &(&other.a * &self.b)) + &(&bb * &h_poly(&self.curve));
        Ok(Self::normalized(self.curve, a, b, &self.d * &other.d))
    }

    /// The image under Y ↦ Y + a1X + a3 (the other point with the same abscissa).
    pub fn conjugate(&self) -> Self {
        let a = &self.a + &(&self.b * &h_poly(&self.curve));
        Self::normalized(self.curve, a, self.b.clone(), self.d.clone())
    }

    /// norm(A + B·Y) = A² + AB(a1X + a3) + B²(X³ + a2X² + a4X + a6)
    fn numerator_norm(&self) -> Poly {
        let ab = &self.a * &self.b;
        &(&self.a.square() + &(&ab * &h_poly(&self.curve))) + &(&self.b.square() * &rhs_poly(&self.curve))
    }

    /// N_{k(E)/k(X)}(f) as a reduced fraction (numerator, monic denominator).
    pub fn norm(&self) -> (Poly, Poly) {
        let num = self.numerator_norm();
        let den = self.d.square();
        let g = num.gcd(&den);
        let (num, den) = if g.is_zero() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        let inv = den.leading().inv().expect("nonzero");
        (num.scale(inv), den.scale(inv))
    }

    /// Degree of f as a map to the projective line (zero for constants).
    ///
    /// f is a root of T² + sT + n with s = f + f̄ and n = f·f̄ in k(X). Over each place of
    /// k(X) the poles of f have total order max(pole of s, pole of n) times the degree of
    /// the place, so zeros and poles sharing an abscissa do not cancel as they do in n.
    pub fn degree(&self) -> usize {
        if self.is_constant() {
            return 0;
        }
        let reduce = |num: Poly, den: Poly| {
            let g = num.gcd(&den);
            if g.is_zero() || g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g), den.div_exact(&g))
            }
        };
        let (sn, sd) = reduce(&self.b * &h_poly(&self.curve), self.d.clone());
        let (nn, nd) = reduce(self.numerator_norm(), self.d.square());
        let lcm = sd.div_exact(&sd.gcd(&nd)) * nd.clone();
        let at_infinity = |num: &Poly, den: &Poly| (num.deg() - den.deg()).max(0);
        let inf = if sn.is_zero() { 0 } else { at_infinity(&sn, &sd) }.max(at_infinity(&nn, &nd));
        lcm.deg() as usize + inf as usize
    }

    pub fn inv(&self) -> Result<Self, FuncError> {
        if self.is_zero() {
            return Err(FuncError::DivisionByZero);
        }
        let conj_a = &self.a + &(&self.b * &h_poly(&self.curve));
        let n = self.numerator_norm();
        Ok(Self::normalized(self.curve, &conj_a * &self.d, &self.b * &self.d, n))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FuncError> {
        self.same_curve(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        Self::normalized(self.curve, self.a.scale(c), self.b.scale(c), self.d.clone())
    }

    pub fn add_constant(&self, c: FieldElement) -> Self {
        let a = &self.a + &self.d.scale(c);
        Self::normalized(self.curve, a, self.b.clone(), self.d.clone())
    }

    /// df/dX, using dY/dX = (a1Y + X² + a4)/(a1X + a3).
    pub fn differentiate(&self) -> Result<Self, FuncError> {
        let h = h_poly(&self.curve);
        if h.is_zero() {
            return Err(FuncError::DegenerateDerivative);
        }
        let ctx = self.curve.context();
        let x2a4 = Poly::from_coeffs(ctx, vec![self.curve.a4, ctx.zero(), ctx.one()]);
        let a1 = Poly::constant(self.curve.a1);
        let dd = self.d.derivative();
        let a = &(&self.d * &(&(&h * &self.a.derivative()) + &(&self.b * &x2a4))) + &(&(&h * &dd) * &self.a);
        let b = &(&self.d * &(&(&h * &self.b.derivative()) + &(&a1 * &self.b))) + &(&(&h * &dd) * &self.b);
        Ok(Self::normalized(self.curve, a, b, &h * &self.d.square()))
    }

    /// Value at an affine point where D does not vanish.
    fn quick_value(&self, p: &CurvePoint) -> Option<FieldElement> {
        let (x, y) = p.coords()?;
        let den = self.d.eval(x);
        if den.is_zero() {
            return None;
        }
        Some((self.a.eval(x) + self.b.eval(x) * y) / den)
    }

    pub fn base_change(&self, target: &'static FieldContext) -> Result<Self, FuncError> {
        let curve = self.curve.base_change(target)?;
        Ok(Self::normalized(curve, self.a.embed(target)?, self.b.embed(target)?, self.d.embed(target)?))
    }

    /// Local expansion at q in the canonical uniformizer, with the coordinate series
    /// computed to precision m.
    pub fn local_expand(&self, q: &CurvePoint, m: i64) -> Result<LocalExpansion, FuncError> {
        let (uniformizer, xs, ys) = local_coordinates(&self.curve, q, m)?;
        let num = xs.eval_poly(&self.a).add(&xs.eval_poly(&self.b).mul(&ys));
        let den = xs.eval_poly(&self.d);
        let series = if self.is_zero() {
            Series::zero(self.curve.context(), m)
        } else {
            num.div(&den).ok_or_else(|| insufficient(q, m))?
        };
        if series.is_known_zero() && !self.is_zero() {
            return Err(insufficient(q, m));
        }
        Ok(LocalExpansion { center: *q, uniformizer, series })
    }

    /// Expansion with the precision raised until `ok` accepts the series.
    fn expand_until(
        &self,
        q: &CurvePoint,
        mut ok: impl FnMut(&Series) -> bool,
    ) -> Result<LocalExpansion, FuncError> {
        let mut last = 0;
        for m in PRECISION_STEPS {
            last = m;
            match self.local_expand(q, m) {
                Ok(exp) if ok(&exp.series) => return Ok(exp),
                Ok(_) | Err(FuncError::InsufficientPrecision { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(insufficient(q, last))
    }

    pub fn valuation(&self, q: &CurvePoint) -> Result<i64, FuncError> {
        if self.is_zero() {
            return Err(FuncError::DivisionByZero);
        }
        if let Some(v) = self.quick_value(q) {
            if !v.is_zero() {
                return Ok(0);
            }
        }
        let exp = self.expand_until(q, |s| s.valuation().is_some())?;
        Ok(exp.valuation().expect("accepted series has a valuation"))
    }

    pub fn value_at(&self, q: &CurvePoint) -> Result<BranchValue, FuncError> {
        if let Some(v) = self.quick_value(q) {
            return Ok(BranchValue::Finite(v));
        }
        if self.is_zero() {
            return Ok(BranchValue::Finite(self.curve.context().zero()));
        }
        let exp = self.expand_until(q, |s| s.valuation().is_some())?;
        let v = exp.valuation().expect("accepted series has a valuation");
        Ok(match v {
            v if v < 0 => BranchValue::Infinity,
            0 => BranchValue::Finite(exp.series.leading().expect("nonzero")),
            _ => BranchValue::Finite(self.curve.context().zero()),
        })
    }

    /// Value, ramification index e = v_Q(f − f(Q)) (or −v_Q(f) at a pole) and different
    /// exponent v_Q(ds/dt) for the local parameter s = f − f(Q) (or 1/f) at q.
    pub fn point_data(&self, q: &CurvePoint) -> Result<PointData, FuncError> {
        if self.is_constant() {
            return Err(FuncError::ConstantFunction);
        }
        let value = self.value_at(q)?;
        let s = match value {
            BranchValue::Infinity => self.inv()?,
            BranchValue::Finite(c) => self.add_constant(c),
        };
        let exp = s.expand_until(q, |ser| {
            ser.valuation().is_some() && ser.derivative().valuation().is_some()
        })?;
        let e = exp.valuation().expect("checked");
        let d = exp.series.derivative().valuation().expect("checked");
        Ok(PointData { value, ramification: e, different: d })
    }

    pub fn ramification_index(&self, q: &CurvePoint) -> Result<i64, FuncError> {
        Ok(self.point_data(q)?.ramification)
    }

    /// All points with f = v, with multiplicities summing to deg f.
    pub fn fiber(&self, v: BranchValue) -> Result<Vec<(CurvePoint, usize)>, FuncError> {
        let fib = self.partial_fiber(v)?;
        if !fib.complete {
            return Err(FuncError::ExtensionTooSmall {
                factor_degrees: fib.unresolved_factor_degrees,
                obstructed: fib.obstructed,
            });
        }
        Ok(fib.points)
    }

    /// The rational part of the fiber over v, with what is left unresolved.
    pub fn partial_fiber(&self, v: BranchValue) -> Result<PartialFiber, FuncError> {
        if self.is_constant() {
            return Err(FuncError::ConstantFunction);
        }
        let (target, locus) = match v {
            BranchValue::Infinity => (self.inv()?, self.d.clone()),
            BranchValue::Finite(c) => {
                let g = self.add_constant(c);
                let locus = g.numerator_norm();
                (g, locus)
            }
        };
        let (candidates, mut unresolved, obstructed) = self.points_over(&[locus])?;
        let mut points = Vec::new();
        for p in candidates {
            let val = target.valuation(&p)?;
            if val > 0 {
                points.push((p, val as usize));
            }
        }
        let total: usize = points.iter().map(|(_, m)| m).sum();
        let complete = total == self.degree();
        if complete {
            unresolved.clear();
        }
        Ok(PartialFiber { points, complete, unresolved_factor_degrees: unresolved, obstructed: if complete { 0 } else { obstructed } })
    }

    /// O together with every rational point whose abscissa is a root of one of the loci;
    /// also returns the degrees of irreducible factors without rational roots and the
    /// number of rational abscissae with no rational ordinate.
    fn points_over(&self, loci: &[Poly]) -> Result<(Vec<CurvePoint>, Vec<usize>, usize), FuncError> {
        let mut points = BTreeSet::from([CurvePoint::Infinity]);
        let mut unresolved = Vec::new();
        let mut obstructed = 0;
        let mut xs = BTreeSet::new();
        for locus in loci {
            if locus.is_constant() {
                continue;
            }
            for (g, _) in gf2::squarefree_factorization(locus)? {
                for (h, k) in gf2::distinct_degree_factorization(&g) {
                    if k > 1 {
                        unresolved.extend(std::iter::repeat_n(k, h.deg() as usize / k));
                    }
                }
                xs.extend(gf2::distinct_roots(&g)?);
            }
        }
        for x in xs {
            let lifted = self.curve.lift_x(x);
            if lifted.is_empty() {
                obstructed += 1;
            }
            points.extend(lifted);
        }
        unresolved.sort();
        Ok((points.into_iter().collect(), unresolved, obstructed))
    }

    /// Points where f may ramify outside any given fiber: zeros of df/dX, points where X
    /// is not a local parameter, and poles.
    fn critical_candidates(&self) -> Result<(Vec<CurvePoint>, Vec<usize>, usize), FuncError> {
        let df = self.differentiate()?;
        let mut loci = vec![h_poly(&self.curve), self.d.clone()];
        if !df.is_zero() {
            loci.push(df.numerator_norm());
        }
        self.points_over(&loci)
    }

    /// Fibers over the claimed branch values plus a Riemann–Hurwitz certificate
    /// Σ d_Q = 2·deg f; ramification outside the claimed fibers is searched for and
    /// reported when the claimed fibers fall short.
    pub fn ramification_profile(&self, claimed: &[BranchValue]) -> Result<ProfileReport, FuncError> {
        let degree = self.degree();
        if degree == 0 {
            return Err(FuncError::ConstantFunction);
        }
        let mut seen = BTreeSet::new();
        let mut fibers = Vec::new();
        let mut total = 0i64;
        let mut pending = Vec::new();
        for &v in claimed {
            let fib = self.partial_fiber(v)?;
            let mut entries = Vec::new();
            for &(p, _) in &fib.points {
                let data = self.point_data(&p)?;
                total += data.different;
                seen.insert(p);
                entries.push(ProfileEntry::new(p, data));
            }
            if !fib.complete {
                pending.extend(fib.unresolved_factor_degrees.iter().copied());
            }
            fibers.push(FiberReport {
                value: v,
                points: entries,
                complete: fib.complete,
                unresolved_factor_degrees: fib.unresolved_factor_degrees,
            });
        }
        let expected = 2 * degree as i64;
        let mut unclaimed = Vec::new();
        if total < expected {
            let (cands, unresolved, obstructed) = self.critical_candidates()?;
            for p in cands {
                if seen.contains(&p) {
                    continue;
                }
                let data = self.point_data(&p)?;
                if data.different > 0 {
                    total += data.different;
                    unclaimed.push(ProfileEntry::new(p, data));
                }
            }
            if total < expected && (!unresolved.is_empty() || obstructed > 0 || !pending.is_empty()) {
                return Err(FuncError::ExtensionTooSmall { factor_degrees: unresolved, obstructed });
            }
        }
        if total != expected {
            return Err(FuncError::AccountingMismatch { expected, found: total });
        }
        Ok(ProfileReport { degree, fibers, unclaimed, total_different: total })
    }
}

fn insufficient(q: &CurvePoint, precision: i64) -> FuncError {
    FuncError::InsufficientPrecision { point: format!("{q:?}"), precision }
}

/// Series for X and Y in the canonical uniformizer at q, each known to precision ≥ m.
pub fn local_coordinates(
    e: &WeierstrassCurve,
    q: &CurvePoint,
    m: i64,
) -> Result<(Uniformizer, Series, Series), FuncError> {
    let ctx = e.context();
    if !e.contains(q) {
        let (x, y) = q.coords().expect("infinity lies on every curve");
        return Err(CurveError::NotOnCurve { x: x.to_hex(), y: y.to_hex() }.into());
    }
    let steps = 2 + (64 - (m.max(2) as u64).leading_zeros());
    let h = h_poly(e);
    let r = rhs_poly(e);
    match q.coords() {
        Some((x0, y0)) if !e.y_coefficient(x0).is_zero() => {
            // t = X − x0; Newton on G(Y) = Y² + h(X)Y + r(X), G'(Y) = h(X) a unit
            let xs = Series::from_coeffs(ctx, 0, vec![x0, ctx.one()], m);
            let hx = xs.eval_poly(&h);
            let rx = xs.eval_poly(&r);
            let hinv = hx.inv().expect("h(x0) ≠ 0");
            let mut ys = Series::constant(y0, m);
            for _ in 0..steps {
                let g = ys.mul(&ys).add(&hx.mul(&ys)).add(&rx);
                ys = ys.add(&g.mul(&hinv));
            }
            Ok((Uniformizer::XMinusX0, xs, ys))
        }
        Some((x0, y0)) => {
            // t = Y − y0; Newton on H(X) = r(X) + Y² + h(X)Y, H'(X) = X² + a4 + a1Y
            let ys = Series::from_coeffs(ctx, 0, vec![y0, ctx.one()], m);
            let y2 = ys.mul(&ys);
            let mut xs = Series::constant(x0, m);
            for _ in 0..steps {
                let hval = xs.eval_poly(&r).add(&y2).add(&xs.eval_poly(&h).mul(&ys));
                let dh = xs
                    .mul(&xs)
                    .add(&Series::constant(e.a4, m))
                    .add(&ys.scale(e.a1));
                let step = hval.div(&dh).expect("nonsingular point has H'(x0) ≠ 0");
                xs = xs.add(&step);
            }
            Ok((Uniformizer::YBased, xs, ys))
        }
        None => {
            // z = X/Y, w = 1/Y; F(w) = w + a1zw + a3w² + z³ + a2z²w + a4zw² + a6w³
            let big = m + 6;
            let z = Series::uniformizer(ctx, big);
            let c = |a: FieldElement| Series::constant(a, big);
            let z2 = z.mul(&z);
            let z3 = z2.mul(&z);
            let lin = c(ctx.one()).add(&z.scale(e.a1)).add(&z2.scale(e.a2));
            let mut w = Series::zero(ctx, big);
            for _ in 0..steps + 1 {
                let w2 = w.mul(&w);
                let f = w
                    .mul(&lin)
                    .add(&w2.scale(e.a3))
                    .add(&z3)
                    .add(&z.mul(&w2).scale(e.a4))
                    .add(&w2.mul(&w).scale(e.a6));
                let df = lin.add(&w2.scale(e.a6));
                w = w.add(&f.div(&df).expect("F'(w) is a unit"));
            }
            let winv = w.inv().expect("w has valuation 3");
            let xs = z.mul(&winv);
            Ok((Uniformizer::XOverYAtInfinity, xs, winv))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileEntry {
    pub point: CurvePoint,
    pub multiplicity: i64,
    pub different_exponent: i64,
    pub tame: bool,
    #[serde(skip)]
    pub value: BranchValue,
}

impl ProfileEntry {
    fn new(point: CurvePoint, data: PointData) -> Self {
        ProfileEntry {
            point,
            multiplicity: data.ramification,
            different_exponent: data.different,
            tame: data.is_tame(),
            value: data.value,
        }
    }
}

/// Points of a fiber found over the working field. When `complete` is false the
/// multiplicities fall short of deg f and the remaining points lie in extensions.
#[derive(Clone, Debug)]
pub struct PartialFiber {
    pub points: Vec<(CurvePoint, usize)>,
    pub complete: bool,
    pub unresolved_factor_degrees: Vec<usize>,
    pub obstructed: usize,
}

/// One claimed fiber of a profile. Points of an incomplete fiber that are missing lie
/// over extensions; a balanced different total shows they are unramified.
#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub value: BranchValue,
    pub points: Vec<ProfileEntry>,
    pub complete: bool,
    pub unresolved_factor_degrees: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport {
    pub degree: usize,
    pub fibers: Vec<FiberReport>,
    /// ramified points outside the claimed fibers
    pub unclaimed: Vec<ProfileEntry>,
    pub total_different: i64,
}

impl ProfileReport {
    /// All ramified points (index > 1), claimed or not.
    pub fn ramified_points(&self) -> Vec<&ProfileEntry> {
        self.fibers
            .iter()
            .flat_map(|f| f.points.iter())
            .chain(self.unclaimed.iter())
            .filter(|e| e.multiplicity > 1)
            .collect()
    }
}

/// Line through t and s (tangent if equal) and the vertical at their sum, with t + s.
fn line_and_vertical(
    e: &WeierstrassCurve,
    t: &CurvePoint,
    s: &CurvePoint,
) -> (CurveRationalFunction, CurveRationalFunction, CurvePoint) {
    let ctx = e.context();
    let one = CurveRationalFunction::one(*e);
    let sum = e.add(t, s);
    let vertical = |p: &CurvePoint| match p.x() {
        None => one.clone(),
        Some(x) => CurveRationalFunction::from_x_poly(*e, Poly::linear(x)),
    };
    let (xt, yt) = t.coords().expect("line through the identity is never needed");
    let line = if sum.is_infinity() {
        CurveRationalFunction::from_x_poly(*e, Poly::linear(xt))
    } else {
        let (xs, ys) = s.coords().expect("finite");
        let lambda =
            if xt != xs { (yt + ys) / (xt + xs) } else { (xt.square() + e.a4 + e.a1 * yt) / e.y_coefficient(xt) };
        // Y + yt + λ(X + xt)
        let a = Poly::from_coeffs(ctx, vec![yt + lambda * xt, lambda]);
        CurveRationalFunction::normalized(*e, a, Poly::one(ctx), Poly::one(ctx))
    };
    (line, vertical(&sum), sum)
}

/// A function with divisor n(P) − n(O), by Miller's double-and-add accumulation.
pub fn miller_function(
    e: &WeierstrassCurve,
    p: &CurvePoint,
    n: u64,
) -> Result<CurveRationalFunction, FuncError> {
    if p.is_infinity() || n == 0 || n.is_multiple_of(2) {
        return Err(FuncError::BadMillerInput);
    }
    if !e.contains(p) {
        let (x, y) = p.coords().expect("finite");
        return Err(CurveError::NotOnCurve { x: x.to_hex(), y: y.to_hex() }.into());
    }
    if !e.mul_u128(n as u128, p).is_infinity() {
        return Err(FuncError::NotTorsion { n: n as i128 });
    }
    let mut f = CurveRationalFunction::one(*e);
    let mut t = *p;
    for bit in (0..63 - n.leading_zeros()).rev() {
        let (l, v, dbl) = line_and_vertical(e, &t, &t);
        f = f.checked_mul(&f)?.checked_mul(&l)?.checked_div(&v)?;
        t = dbl;
        if n >> bit & 1 == 1 {
            let (l, v, sum) = line_and_vertical(e, &t, p);
            f = f.checked_mul(&l)?.checked_div(&v)?;
            t = sum;
        }
    }
    debug_assert!(t.is_infinity());
    Ok(f)
}

impl std::ops::Add for &CurveRationalFunction {
    type Output = CurveRationalFunction;
    fn add(self, rhs: Self) -> CurveRationalFunction {
        self.checked_add(rhs).expect("functions on different curves")
    }
}

impl std::ops::Mul for &CurveRationalFunction {
    type Output = CurveRationalFunction;
    fn mul(self, rhs: Self) -> CurveRationalFunction {
        self.checked_mul(rhs).expect("functions on different curves")
    }
}

impl std::ops::Div for &CurveRationalFunction {
    type Output = CurveRationalFunction;
    fn div(self, rhs: Self) -> CurveRationalFunction {
        self.checked_div(rhs).expect("division by zero or curve mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ss(d: u32) -> WeierstrassCurve {
        WeierstrassCurve::supersingular(FieldContext::of(d))
    }

    fn origin(e: &WeierstrassCurve) -> CurvePoint {
        CurvePoint::affine(e.context().zero(), e.context().zero())
    }

    #[test]
    fn y_squared_reduces_by_curve_equation() {
        let e = ss(2);
        let y = CurveRationalFunction::y(e);
        let yy = &y * &y;
        // Y² = Y + X³
        let x = CurveRationalFunction::x(e);
        assert_eq!(yy, &y + &(&(&x * &x) * &x));
    }

    #[test]
    fn miller_for_order_three_is_y() {
        let e = ss(1);
        let f = miller_function(&e, &origin(&e), 3).unwrap();
        assert!(f.a.is_zero() && f.d.is_one() && f.b.is_constant());
        assert_eq!(f.degree(), 3);
        assert_eq!(f.differentiate().unwrap(), CurveRationalFunction::x(e).checked_mul(&CurveRationalFunction::x(e)).unwrap().scale(f.b.coeff(0)));
    }

    #[test]
    fn derivatives() {
        let e = ss(3);
        let x = CurveRationalFunction::x(e);
        assert_eq!(x.differentiate().unwrap(), CurveRationalFunction::one(e));
        let y = CurveRationalFunction::y(e);
        let f = &(&x + &y) / &(&y + &CurveRationalFunction::constant(e, e.context().element(3)));
        assert!((&f * &f).differentiate().unwrap().is_zero());
    }

    #[test]
    fn expansions_at_the_origin_and_infinity() {
        let e = ss(1);
        let o = origin(&e);
        let x = CurveRationalFunction::x(e);
        let y = CurveRationalFunction::y(e);
        let ex = x.local_expand(&o, 3).unwrap();
        assert_eq!(ex.uniformizer, Uniformizer::XMinusX0);
        assert_eq!(ex.series.coeffs_range(0, 3), vec![e.context().zero(), e.context().one(), e.context().zero()]);
        assert_eq!(y.local_expand(&o, 4).unwrap().valuation(), Some(3));
        let z = &x / &y;
        let ez = z.local_expand(&CurvePoint::Infinity, 3).unwrap();
        assert_eq!(ez.uniformizer, Uniformizer::XOverYAtInfinity);
        assert_eq!(ez.valuation(), Some(1));
    }

    #[test]
    fn fibers_of_y() {
        let e = ss(1);
        let f1 = e.context();
        let y = CurveRationalFunction::y(e);
        assert_eq!(y.fiber(BranchValue::Finite(f1.zero())).unwrap(), vec![(origin(&e), 3)]);
        let p01 = CurvePoint::affine(f1.zero(), f1.one());
        assert_eq!(y.fiber(BranchValue::Finite(f1.one())).unwrap(), vec![(p01, 3)]);
        assert_eq!(y.fiber(BranchValue::Infinity).unwrap(), vec![(CurvePoint::Infinity, 3)]);
    }

    #[test]
    fn degree_counts_zeros_and_poles_over_one_abscissa() {
        // Y/(Y + 1) has norm 1: a triple zero at (0,0) and a triple pole at (0,1)
        let e = ss(1);
        let f1 = e.context();
        let y = CurveRationalFunction::y(e);
        let f = y.checked_div(&y.add_constant(f1.one())).unwrap();
        assert!(f.norm().0.is_one() && f.norm().1.is_one());
        assert_eq!(f.degree(), 3);
        assert_eq!(f.fiber(BranchValue::Finite(f1.zero())).unwrap(), vec![(origin(&e), 3)]);
        let p01 = CurvePoint::affine(f1.zero(), f1.one());
        assert_eq!(f.fiber(BranchValue::Infinity).unwrap(), vec![(p01, 3)]);
        for n in [3u64, 5, 7] {
            let e = ss(crate::weierstrass::torsion_field_degree(n).unwrap());
            let p = e.exact_order_points(n).unwrap()[0];
            assert_eq!(miller_function(&e, &p, n).unwrap().degree(), n as usize);
        }
    }

    #[test]
    fn profile_of_order_three_cover() {
        let e = ss(1);
        let y = CurveRationalFunction::y(e);
        let f1 = e.context();
        let rep = y
            .ramification_profile(&[BranchValue::Infinity, BranchValue::Finite(f1.zero()), BranchValue::Finite(f1.one())])
            .unwrap();
        assert_eq!(rep.total_different, 6);
        assert!(rep.unclaimed.is_empty());
        for f in &rep.fibers {
            assert_eq!(f.points.len(), 1);
            assert_eq!(f.points[0].multiplicity, 3);
            assert_eq!(f.points[0].different_exponent, 2);
        }
    }

    #[test]
    fn uncertified_claims_are_found() {
        // claim nothing: all ramification has to be found by the search
        let e = ss(2);
        let y = CurveRationalFunction::y(e);
        let rep = y.ramification_profile(&[]).unwrap();
        assert_eq!(rep.total_different, 6);
        assert_eq!(rep.unclaimed.len(), 3);
    }

    #[test]
    fn division_round_trip_and_multiplicative_expansion() {
        let e = ss(4);
        let ctx = e.context();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rand_fn = |rng: &mut ChaCha8Rng| {
            let p = |rng: &mut ChaCha8Rng| Poly::from_coeffs(ctx, (0..3).map(|_| ctx.random(rng)).collect());
            let mut d = p(rng);
            if d.is_zero() {
                d = Poly::one(ctx);
            }
            CurveRationalFunction::new(e, p(rng), p(rng), d).unwrap()
        };
        for _ in 0..20 {
            let f = rand_fn(&mut rng);
            let g = rand_fn(&mut rng);
            if g.is_zero() {
                continue;
            }
            assert_eq!(&(&f / &g) * &g, f);
            let q = e.random_point(&mut rng);
            let (ef, eg) = (f.local_expand(&q, 16), g.local_expand(&q, 16));
            if let (Ok(ef), Ok(eg)) = (ef, eg) {
                let prod = (&f * &g).local_expand(&q, 16).unwrap();
                let direct = ef.series.mul(&eg.series);
                let prec = prod.precision().min(direct.precision());
                assert_eq!(prod.series.truncate(prec), direct.truncate(prec));
            }
        }
    }
}
