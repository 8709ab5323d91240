//! Long Weierstrass curves Y² + a1XY + a3Y = X³ + a2X² + a4X + a6 over F_{2^d}.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::gf2::{FieldContext, FieldElement, FieldError, Poly};

/// Largest field degree for which `count_points(Enumerate)` is accepted.
pub const ENUMERATION_LIMIT: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("singular curve: discriminant vanishes")]
    Singular,
    #[error("point ({x}, {y}) is not on the curve")]
    NotOnCurve { x: String, y: String },
    #[error("enumeration over F_2^{0} exceeds the limit of F_2^24")]
    EnumerationTooLarge(u32),
    #[error("the supersingular formula only applies to Y^2 + Y = X^3")]
    NotSupersingularModel,
    #[error("ordinary parameter t must be nonzero")]
    ZeroParameter,
    #[error("torsion order {0} must be odd and greater than 1")]
    BadTorsionOrder(u64),
    #[error("no basis of E[{n}] found after {trials} samples (seed {seed})")]
    SamplingExhausted { n: u64, trials: u64, seed: u64 },
    #[error("E[{n}] is not rational over F_2^{d}")]
    TorsionNotRational { n: u64, d: u32 },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl CurvePoint {
    pub fn affine(x: FieldElement, y: FieldElement) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<FieldElement> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(*x),
        }
    }

    pub fn y(&self) -> Option<FieldElement> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(*y),
        }
    }

    pub fn coords(&self) -> Option<(FieldElement, FieldElement)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((*x, *y)),
        }
    }

    /// Coordinates raised to the 2^k-th power.
    pub fn frobenius(&self, k: u32) -> Self {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(x.frobenius(k), y.frobenius(k)),
        }
    }

    pub fn embed(&self, target: &'static FieldContext) -> Result<Self, FieldError> {
        Ok(match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(x.embed(target)?, y.embed(target)?),
        })
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    pub a1: FieldElement,
    pub a2: FieldElement,
    pub a3: FieldElement,
    pub a4: FieldElement,
    pub a6: FieldElement,
}

impl fmt::Debug for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E[{}, {}, {}, {}, {}] over F_2^{}",
            self.a1,
            self.a2,
            self.a3,
            self.a4,
            self.a6,
            self.degree()
        )
    }
}

impl WeierstrassCurve {
    pub fn new(coeffs: [FieldElement; 5]) -> Result<Self, CurveError> {
        let [a1, a2, a3, a4, a6] = coeffs;
        for c in &coeffs[1..] {
            a1.checked_add(c)?;
        }
        let e = WeierstrassCurve { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(e)
    }

    /// Y² + Y = X³
    pub fn supersingular(ctx: &'static FieldContext) -> Self {
        let (o, i) = (ctx.zero(), ctx.one());
        WeierstrassCurve { a1: o, a2: o, a3: i, a4: o, a6: o }
    }

    /// Y² + XY = X³ + tX
    pub fn ordinary(t: FieldElement) -> Result<Self, CurveError> {
        if t.is_zero() {
            return Err(CurveError::ZeroParameter);
        }
        let (o, i) = (t.zero_like(), t.one_like());
        Ok(WeierstrassCurve { a1: i, a2: o, a3: o, a4: t, a6: o })
    }

    pub fn coefficients(&self) -> [FieldElement; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6]
    }

    pub fn context(&self) -> &'static FieldContext {
        self.a1.context()
    }

    pub fn degree(&self) -> u32 {
        self.context().degree()
    }

    pub fn is_supersingular_model(&self) -> bool {
        self.a1.is_zero()
            && self.a2.is_zero()
            && self.a3.is_one()
            && self.a4.is_zero()
            && self.a6.is_zero()
    }

    /// Same curve over a larger field.
    pub fn base_change(&self, target: &'static FieldContext) -> Result<Self, FieldError> {
        let [a1, a2, a3, a4, a6] = self.coefficients();
        Ok(WeierstrassCurve {
            a1: a1.embed(target)?,
            a2: a2.embed(target)?,
            a3: a3.embed(target)?,
            a4: a4.embed(target)?,
            a6: a6.embed(target)?,
        })
    }

    pub fn b2(&self) -> FieldElement {
        self.a1.square()
    }

    pub fn b4(&self) -> FieldElement {
        self.a1 * self.a3
    }

    pub fn b6(&self) -> FieldElement {
        self.a3.square()
    }

    pub fn b8(&self) -> FieldElement {
        self.a1.square() * self.a6 + self.a1 * self.a3 * self.a4 + self.a2 * self.a3.square()
            + self.a4.square()
    }

    pub fn c4(&self) -> FieldElement {
        self.b2().square()
    }

    /// Δ = −b2²b8 − 8b4³ − 27b6² + 9b2b4b6, reduced mod 2.
    pub fn discriminant(&self) -> FieldElement {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        b2.square() * b8 + b6.square() + b2 * b4 * b6
    }

    pub fn j_invariant(&self) -> FieldElement {
        self.c4().square() * self.c4() / self.discriminant()
    }

    /// X³ + a2X² + a4X + a6
    fn rhs(&self, x: FieldElement) -> FieldElement {
        ((x + self.a2) * x + self.a4) * x + self.a6
    }

    /// The Y-coefficient a1X + a3 of the curve equation.
    pub fn y_coefficient(&self, x: FieldElement) -> FieldElement {
        self.a1 * x + self.a3
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                std::ptr::eq(x.context(), self.context())
                    && std::ptr::eq(y.context(), self.context())
                    && y.square() + self.y_coefficient(*x) * *y == self.rhs(*x)
            }
        }
    }

    fn ensure(&self, p: &CurvePoint) -> Result<(), CurveError> {
        if self.contains(p) {
            return Ok(());
        }
        let (x, y) = p.coords().expect("infinity is always on the curve");
        if !std::ptr::eq(x.context(), self.context()) {
            return Err(FieldError::ContextMismatch { left: self.degree(), right: x.degree() }.into());
        }
        Err(CurveError::NotOnCurve { x: x.to_hex(), y: y.to_hex() })
    }

    /// All points with the given x-coordinate, sorted by y.
    pub fn lift_x(&self, x: FieldElement) -> Vec<CurvePoint> {
        let h = self.y_coefficient(x);
        let r = self.rhs(x);
        if h.is_zero() {
            return vec![CurvePoint::affine(x, r.sqrt())];
        }
        let hinv = h.inv().expect("nonzero");
        (r * hinv.square())
            .solve_artin_schreier()
            .into_iter()
            .map(|z| CurvePoint::affine(x, z * h))
            .collect()
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match *p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(x, y + self.y_coefficient(x)),
        }
    }

    pub fn try_add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint, CurveError> {
        self.ensure(p)?;
        self.ensure(q)?;
        Ok(self.add(p, q))
    }

    /// Chord-and-tangent addition; inputs are assumed to lie on the curve.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        debug_assert!(self.contains(p) && self.contains(q));
        let (x1, y1, x2, y2) = match (*p, *q) {
            (CurvePoint::Infinity, _) => return *q,
            (_, CurvePoint::Infinity) => return *p,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let lambda = if x1 != x2 {
            (y1 + y2) / (x1 + x2)
        } else {
            // same x: either q = −p or q = p
            let h = self.y_coefficient(x1);
            if y1 != y2 || h.is_zero() {
                return CurvePoint::Infinity;
            }
            (x1.square() + self.a4 + self.a1 * y1) / h
        };
        let x3 = lambda.square() + self.a1 * lambda + self.a2 + x1 + x2;
        let y3 = lambda * (x1 + x3) + y1 + self.y_coefficient(x3);
        CurvePoint::affine(x3, y3)
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add(p, p)
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        self.add(p, &self.neg(q))
    }

    pub fn scalar_mul(&self, k: i128, p: &CurvePoint) -> CurvePoint {
        let base = if k < 0 { self.neg(p) } else { *p };
        let mut m = k.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut run = base;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(&acc, &run);
            }
            run = self.double(&run);
            m >>= 1;
        }
        acc
    }

    /// k·p for an unsigned 128-bit multiplier.
    pub fn mul_u128(&self, mut m: u128, p: &CurvePoint) -> CurvePoint {
        let mut acc = CurvePoint::Infinity;
        let mut run = *p;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(&acc, &run);
            }
            run = self.double(&run);
            m >>= 1;
        }
        acc
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> CurvePoint {
        loop {
            let x = self.context().random(rng);
            let pts = self.lift_x(x);
            if !pts.is_empty() {
                return pts[rng.gen_range(0..pts.len())];
            }
        }
    }

    /// Every rational point, infinity first, then affine points by (x, y). Small fields only.
    pub fn points(&self) -> Result<Vec<CurvePoint>, CurveError> {
        if self.degree() > 16 {
            return Err(CurveError::EnumerationTooLarge(self.degree()));
        }
        let mut out = vec![CurvePoint::Infinity];
        for x in self.context().elements() {
            out.extend(self.lift_x(x));
        }
        Ok(out)
    }

    pub fn count_points(&self, method: CountMethod) -> Result<u128, CurveError> {
        match method {
            CountMethod::Enumerate => self.count_by_enumeration(),
            CountMethod::SupersingularFormula => {
                if !self.is_supersingular_model() {
                    return Err(CurveError::NotSupersingularModel);
                }
                Ok(supersingular_count(self.degree()))
            }
        }
    }

    fn count_by_enumeration(&self) -> Result<u128, CurveError> {
        let d = self.degree();
        if d > ENUMERATION_LIMIT {
            return Err(CurveError::EnumerationTooLarge(d));
        }
        let ctx = self.context();
        let mut total: u128 = 1;
        if self.a1.is_zero() {
            // a3 ≠ 0 for a nonsingular curve; the Y-coefficient is constant
            let hinv2 = self.a3.inv().ok_or(CurveError::Singular)?.square();
            for x in ctx.elements() {
                total += 2 * (1 - (self.rhs(x) * hinv2).trace() as u128);
            }
            return Ok(total);
        }
        for x in ctx.elements() {
            let h = self.y_coefficient(x);
            total += match h.inv() {
                None => 1,
                Some(hinv) => 2 * (1 - (self.rhs(x) * hinv.square()).trace() as u128),
            };
        }
        Ok(total)
    }

    /// Least e such that every coefficient lies in F_{2^e}.
    pub fn coefficient_field_degree(&self) -> u32 {
        self.coefficients()
            .iter()
            .map(|c| c.element_degree() as u128)
            .fold(1, arith::lcm) as u32
    }

    /// #E(F_{2^d}) for the curve's own field, via the formula for Y² + Y = X³ or by
    /// counting over the coefficient field and lifting the Frobenius trace.
    pub fn group_order(&self) -> Result<u128, CurveError> {
        Ok(self.order_data()?.0)
    }

    /// Group order together with its factorization (cached per curve).
    pub fn order_data(&self) -> Result<(u128, BTreeMap<u128, u32>), CurveError> {
        static CACHE: OnceLock<Mutex<HashMap<WeierstrassCurve, (u128, BTreeMap<u128, u32>)>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(v) = cache.lock().expect("order cache poisoned").get(self) {
            return Ok(v.clone());
        }
        let n = if self.is_supersingular_model() {
            supersingular_count(self.degree())
        } else {
            let e = self.coefficient_field_degree();
            let small = FieldContext::of(e);
            let mut restricted = [small.zero(); 5];
            for (r, c) in restricted.iter_mut().zip(self.coefficients()) {
                *r = c.restrict(small)?.expect("coefficient lies in its subfield");
            }
            let sub = WeierstrassCurve::new(restricted)?;
            let ne = sub.count_by_enumeration()?;
            let trace = (1i128 << e) + 1 - ne as i128;
            let sk = frobenius_power_trace(trace, 1i128 << e, self.degree() / e);
            ((1i128 << self.degree()) + 1 - sk) as u128
        };
        let entry = (n, arith::factor(n));
        cache.lock().expect("order cache poisoned").insert(*self, entry.clone());
        Ok(entry)
    }

    /// Exact order of a rational point.
    pub fn point_order(&self, p: &CurvePoint) -> Result<u128, CurveError> {
        self.ensure(p)?;
        let (n, factors) = self.order_data()?;
        Ok(arith::order_by_stripping(n, &factors, |k| self.mul_u128(k, p).is_infinity()))
    }

    /// Exact order of p, given a known multiple `m` of it.
    pub fn order_dividing(&self, p: &CurvePoint, m: u128) -> u128 {
        debug_assert!(self.mul_u128(m, p).is_infinity());
        arith::order_by_stripping(m, &arith::factor(m), |k| self.mul_u128(k, p).is_infinity())
    }

    /// n-th division polynomial ψ_n as a polynomial in X (in characteristic 2, ψ₂ = a1X + a3
    /// has no Y-term, so every ψ_n is a polynomial in X).
    pub fn division_polynomial(&self, n: usize) -> Poly {
        division_polynomials(self, n).swap_remove(n)
    }

    /// All points of exact order n rational over the curve's field, sorted.
    pub fn exact_order_points(&self, n: u64) -> Result<Vec<CurvePoint>, CurveError> {
        if n.is_multiple_of(2) || n < 3 {
            return Err(CurveError::BadTorsionOrder(n));
        }
        let psi = self.division_polynomial(n as usize);
        let mut out = Vec::new();
        for (x, _) in crate::gf2::poly_roots(&psi)? {
            for p in self.lift_x(x) {
                if self.mul_u128(n as u128, &p).is_infinity() && self.order_dividing(&p, n as u128) == n as u128 {
                    out.push(p);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// A basis (P1, P2) of E[n], assuming E[n] is rational over the curve's field.
    pub fn torsion_basis(&self, n: u64, seed: u64) -> Result<(CurvePoint, CurvePoint), CurveError> {
        if n.is_multiple_of(2) || n < 3 {
            return Err(CurveError::BadTorsionOrder(n));
        }
        let (order, factors) = self.order_data()?;
        let n128 = n as u128;
        if order % (n128 * n128) != 0 {
            return Err(CurveError::TorsionNotRational { n, d: self.degree() });
        }
        let n_primes: Vec<u128> = arith::factor(n128).keys().copied().collect();
        let mut cofactor = order;
        for p in &n_primes {
            while cofactor % p == 0 {
                cofactor /= p;
            }
        }
        let primary = order / cofactor;
        let primary_factors: BTreeMap<u128, u32> =
            factors.iter().filter(|(p, _)| n_primes.contains(p)).map(|(&p, &e)| (p, e)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let budget = 64 * n;
        let mut first: Option<CurvePoint> = None;
        for _ in 0..budget {
            let q = self.mul_u128(cofactor, &self.random_point(&mut rng));
            let ord = arith::order_by_stripping(primary, &primary_factors, |k| {
                self.mul_u128(k, &q).is_infinity()
            });
            if ord % n128 != 0 {
                continue;
            }
            let cand = self.mul_u128(ord / n128, &q);
            match first {
                None => first = Some(cand),
                Some(p1) => {
                    if self.independent_mod_primes(&p1, &cand, n, &n_primes) {
                        return Ok((p1, cand));
                    }
                }
            }
        }
        Err(CurveError::SamplingExhausted { n, trials: budget, seed })
    }

    /// For points of exact order n, (n/ℓ)P1 and (n/ℓ)P2 span E[ℓ] for every prime ℓ | n,
    /// which is equivalent to ⟨P1, P2⟩ = E[n].
    fn independent_mod_primes(&self, p1: &CurvePoint, p2: &CurvePoint, n: u64, primes: &[u128]) -> bool {
        primes.iter().all(|&l| {
            let a = self.mul_u128(n as u128 / l, p1);
            let b = self.mul_u128(n as u128 / l, p2);
            let mut ka = CurvePoint::Infinity;
            for _ in 0..l {
                if ka == b {
                    return false;
                }
                ka = self.add(&ka, &a);
            }
            true
        })
    }

    /// All a·P1 + b·P2 for 0 ≤ a, b < n, indexed by (a, b).
    pub fn torsion_span(&self, p1: &CurvePoint, p2: &CurvePoint, n: u64) -> Vec<((u64, u64), CurvePoint)> {
        let mut out = Vec::with_capacity((n * n) as usize);
        let mut row = CurvePoint::Infinity;
        for a in 0..n {
            let mut pt = row;
            for b in 0..n {
                out.push(((a, b), pt));
                pt = self.add(&pt, p2);
            }
            row = self.add(&row, p1);
        }
        out
    }

    /// Sorted list of E[n], built from a certified basis.
    pub fn enumerate_torsion(&self, n: u64, seed: u64) -> Result<Vec<CurvePoint>, CurveError> {
        let (p1, p2) = self.torsion_basis(n, seed)?;
        let mut pts: Vec<CurvePoint> = self.torsion_span(&p1, &p2, n).into_iter().map(|(_, p)| p).collect();
        pts.sort();
        Ok(pts)
    }

    pub fn point_record(&self, p: &CurvePoint) -> PointRecord {
        match p.coords() {
            None => PointRecord::Infinity { infinity: true },
            Some((x, y)) => PointRecord::Affine { curve: self.coefficients(), x, y },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum PointRecord {
    Infinity { infinity: bool },
    Affine { curve: [FieldElement; 5], x: FieldElement, y: FieldElement },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Enumerate,
    SupersingularFormula,
}

/// Trace t_k of the k-th Frobenius power from t₁ = t and q, using t_k = t·t_{k−1} − q·t_{k−2}.
pub fn frobenius_power_trace(t: i128, q: i128, k: u32) -> i128 {
    let (mut prev, mut cur) = (2i128, t);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = t * cur - q * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// #E(F_{2^d}) for Y² + Y = X³: 2^d + 1 − t_d with t₀ = 2, t₁ = 0, t_k = −2t_{k−2}.
pub fn supersingular_count(d: u32) -> u128 {
    assert!(d <= 126, "group order would overflow");
    let t = frobenius_power_trace(0, 2, d);
    ((1i128 << d) + 1 - t) as u128
}

/// Least d with E[n] ⊆ E(F_{2^d}) for Y² + Y = X³: the order of the companion matrix of
/// x² + 2 in GL₂(Z/n).
pub fn torsion_field_degree(n: u64) -> Result<u32, CurveError> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(CurveError::BadTorsionOrder(n));
    }
    let n = n as i128;
    let m = [[0i128, n - 2], [1, 0]];
    let mul = |a: [[i128; 2]; 2], b: [[i128; 2]; 2]| {
        let mut c = [[0i128; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]).rem_euclid(n);
            }
        }
        c
    };
    let id = [[1, 0], [0, 1]];
    let mut acc = m;
    let mut k = 1;
    while acc != id {
        acc = mul(acc, m);
        k += 1;
    }
    Ok(k)
}

fn division_polynomials(e: &WeierstrassCurve, n: usize) -> Vec<Poly> {
    let ctx = e.context();
    let c = |a: FieldElement| Poly::constant(a);
    let x = Poly::x(ctx);
    let (b2, b4, b6, b8) = (e.b2(), e.b4(), e.b6(), e.b8());
    let mut psi = vec![Poly::zero(ctx), Poly::one(ctx), &x.scale(e.a1) + &c(e.a3)];
    // ψ3 = 3x⁴ + b2x³ + 3b4x² + 3b6x + b8
    psi.push(Poly::from_coeffs(ctx, vec![b8, b6, b4, b2, ctx.one()]));
    // ψ4 = ψ2·(2x⁶ + b2x⁵ + 5b4x⁴ + 10b6x³ + 10b8x² + (b2b8 − b4b6)x + b4b8 − b6²)
    let inner = Poly::from_coeffs(
        ctx,
        vec![b4 * b8 + b6.square(), b2 * b8 + b4 * b6, ctx.zero(), ctx.zero(), b4, b2],
    );
    psi.push(&psi[2] * &inner);
    for k in 5..=n {
        let m = k / 2;
        let next = if k % 2 == 1 {
            // ψ_{2m+1} = ψ_{m+2}ψ_m³ − ψ_{m−1}ψ_{m+1}³
            &(&psi[m + 2] * &psi[m].pow(3)) - &(&psi[m - 1] * &psi[m + 1].pow(3))
        } else {
            // ψ_{2m}ψ₂ = ψ_m(ψ_{m+2}ψ_{m−1}² − ψ_{m−2}ψ_{m+1}²)
            let t = &(&psi[m + 2] * &psi[m - 1].square()) - &(&psi[m - 2] * &psi[m + 1].square());
            (&psi[m] * &t).div_exact(&psi[2])
        };
        psi.push(next);
    }
    psi.truncate(n + 1);
    psi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ss(d: u32) -> WeierstrassCurve {
        WeierstrassCurve::supersingular(FieldContext::of(d))
    }

    #[test]
    fn negation_and_doubling_of_origin() {
        let e = ss(1);
        let f = e.context();
        let p = CurvePoint::affine(f.zero(), f.zero());
        let minus = CurvePoint::affine(f.zero(), f.one());
        assert_eq!(e.neg(&p), minus);
        assert_eq!(e.add(&p, &p), minus);
        assert!(e.scalar_mul(3, &p).is_infinity());
        assert_eq!(e.add(&p, &CurvePoint::Infinity), p);
        assert_eq!(e.point_order(&p).unwrap(), 3);
        assert_eq!(e.point_order(&CurvePoint::Infinity).unwrap(), 1);
    }

    #[test]
    fn small_counts() {
        assert_eq!(ss(1).count_points(CountMethod::Enumerate).unwrap(), 3);
        assert_eq!(ss(2).count_points(CountMethod::Enumerate).unwrap(), 9);
        assert_eq!(ss(3).count_points(CountMethod::Enumerate).unwrap(), 9);
        let f2 = FieldContext::of(1);
        let ord = WeierstrassCurve::ordinary(f2.one()).unwrap();
        assert_eq!(ord.count_points(CountMethod::Enumerate).unwrap(), 4);
        assert_eq!(ord.points().unwrap().len(), 4);
        assert_eq!(
            ord.count_points(CountMethod::SupersingularFormula),
            Err(CurveError::NotSupersingularModel)
        );
    }

    #[test]
    fn formula_matches_enumeration() {
        for d in 1..=16 {
            let e = ss(d);
            assert_eq!(
                e.count_points(CountMethod::Enumerate).unwrap(),
                e.count_points(CountMethod::SupersingularFormula).unwrap(),
                "d = {d}"
            );
        }
    }

    #[test]
    fn ordinary_order_via_trace_lift() {
        let f16 = FieldContext::of(4);
        for t in [1u128, 2, 7, 11] {
            let e8 = WeierstrassCurve::ordinary(f16.element(t).embed(FieldContext::of(8)).unwrap()).unwrap();
            assert_eq!(e8.group_order().unwrap(), e8.count_by_enumeration().unwrap());
            let e12 =
                WeierstrassCurve::ordinary(f16.element(t).embed(FieldContext::of(12)).unwrap()).unwrap();
            assert_eq!(e12.group_order().unwrap(), e12.count_by_enumeration().unwrap());
        }
    }

    #[test]
    fn torsion_field_degrees() {
        let expect = [(3, 2), (5, 8), (7, 12), (9, 6), (11, 10), (13, 24)];
        for (n, d) in expect {
            assert_eq!(torsion_field_degree(n).unwrap(), d);
            let count = supersingular_count(d);
            assert_eq!(count % (n as u128 * n as u128), 0);
        }
        assert!(torsion_field_degree(4).is_err());
    }

    #[test]
    fn torsion_bases_span_full_group() {
        for (n, psi) in [(3u64, 8u64), (5, 24), (9, 72)] {
            let d = torsion_field_degree(n).unwrap();
            let e = ss(d);
            let pts = e.enumerate_torsion(n, 1).unwrap();
            let mut uniq = pts.clone();
            uniq.dedup();
            assert_eq!(uniq.len() as u64, n * n);
            let exact = pts.iter().filter(|p| e.point_order(p).unwrap() == n as u128).count();
            assert_eq!(exact as u64, psi);
        }
    }

    #[test]
    fn division_polynomial_roots_are_torsion_abscissae() {
        let e = ss(6);
        let psi9 = e.division_polynomial(9);
        assert_eq!(psi9.degree(), Some(40));
        let pts = e.exact_order_points(9).unwrap();
        assert_eq!(pts.len(), 72);
        let psi3 = e.division_polynomial(3);
        for x in [e.context().zero(), e.context().one()] {
            assert!(psi3.eval(x).is_zero());
        }
    }

    #[test]
    fn odd_degree_supersingular_has_no_two_torsion() {
        for d in [1, 3, 5, 7] {
            let e = ss(d);
            assert_eq!(e.group_order().unwrap() % 2, 1);
            for p in e.points().unwrap().iter().skip(1) {
                assert_ne!(e.neg(p), *p);
            }
        }
    }

    #[test]
    fn off_curve_points_are_rejected() {
        let e = ss(2);
        let f = e.context();
        let bad = CurvePoint::affine(f.one(), f.one());
        assert!(matches!(e.try_add(&bad, &CurvePoint::Infinity), Err(CurveError::NotOnCurve { .. })));
    }

    #[test]
    fn point_record_shapes() {
        let e = ss(1);
        let f = e.context();
        let v = serde_json::to_value(e.point_record(&CurvePoint::Infinity)).unwrap();
        assert_eq!(v, serde_json::json!({"infinity": true}));
        let v = serde_json::to_value(e.point_record(&CurvePoint::affine(f.zero(), f.one()))).unwrap();
        assert_eq!(v["y"], serde_json::json!({"d": 1, "hex": "1"}));
    }
}
