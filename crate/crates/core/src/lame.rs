//! The automorphism group of Y² + Y = X³, the quotient map ρ(x, y) = (x⁴ + x)³,
//! classification of Lamé classes by ρ-value, class counts and the field-of-moduli census.
//! Also builds the canonical cover f_P of a torsion point and certifies its branch data.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::funcfield::{miller_function, BranchValue, CurveRationalFunction, FuncError, ProfileReport};
use crate::gf2::{self, FieldContext, FieldElement, FieldError, Poly};
use crate::weierstrass::{torsion_field_degree, CurveError, CurvePoint, WeierstrassCurve};

/// Largest d accepted by the census.
pub const CENSUS_LIMIT: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LameError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error("F_2^{0} does not contain F_4")]
    NoCubeRootsOfUnity(u32),
    #[error("order {0} must be odd and greater than 1")]
    BadOrder(u64),
    #[error("ρ is undefined at the identity")]
    Identity,
    #[error("the curve is not Y^2 + Y = X^3")]
    NotSupersingularModel,
    #[error("automorphism self-check failed: {0}")]
    AutomorphismCheck(String),
    #[error("ρ-fiber of {rho} has {fiber} points but the orbit of its representative has {orbit}")]
    FiberOrbitMismatch { rho: String, fiber: usize, orbit: usize },
    #[error("census degree {0} exceeds the limit {CENSUS_LIMIT}")]
    CensusTooLarge(u32),
    #[error("no point with ρ = {0} found in fields up to F_2^127")]
    CensusOverflow(String),
    #[error("point is not a torsion point of odd order")]
    NotOddTorsion,
}

/// (u, a, c) acting by (x, y) ↦ (u²x + a, y + u²a²x + c), with u³ = 1, a ∈ F₄, c² + c = a³.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutomorphismElement {
    pub u: FieldElement,
    pub a: FieldElement,
    pub c: FieldElement,
}

impl AutomorphismElement {
    pub fn identity(ctx: &'static FieldContext) -> Self {
        AutomorphismElement { u: ctx.one(), a: ctx.zero(), c: ctx.zero() }
    }

    pub fn apply(&self, p: &CurvePoint) -> CurvePoint {
        match p.coords() {
            None => CurvePoint::Infinity,
            Some((x, y)) => {
                let u2 = self.u.square();
                CurvePoint::affine(u2 * x + self.a, y + u2 * self.a.square() * x + self.c)
            }
        }
    }

    /// self ∘ other, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let u2 = self.u.square();
        AutomorphismElement {
            u: self.u * other.u,
            a: u2 * other.a + self.a,
            c: self.c + other.c + u2 * self.a.square() * other.a,
        }
    }
}

/// The 24 automorphisms of Y² + Y = X³ over a field containing F₄, verified on construction.
#[derive(Debug)]
pub struct AutGroup {
    curve: WeierstrassCurve,
    elements: Vec<AutomorphismElement>,
}

impl AutGroup {
    /// The group over the curve's field, built once per field and self-checked.
    pub fn get(curve: &WeierstrassCurve) -> Result<Arc<AutGroup>, LameError> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<AutGroup>>>> = OnceLock::new();
        if !curve.is_supersingular_model() {
            return Err(LameError::NotSupersingularModel);
        }
        let d = curve.degree();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = cache.lock().expect("group cache poisoned").get(&d) {
            return Ok(g.clone());
        }
        let g = Arc::new(Self::build(*curve)?);
        g.verify()?;
        Ok(cache.lock().expect("group cache poisoned").entry(d).or_insert(g).clone())
    }

    fn build(curve: WeierstrassCurve) -> Result<AutGroup, LameError> {
        let ctx = curve.context();
        if !ctx.degree().is_multiple_of(2) {
            return Err(LameError::NoCubeRootsOfUnity(ctx.degree()));
        }
        let f4: Vec<FieldElement> =
            FieldContext::of(2).elements().map(|a| a.embed(ctx)).collect::<Result<_, _>>()?;
        let mut elements = Vec::with_capacity(24);
        for &u in f4.iter().filter(|u| !u.is_zero()) {
            for &a in &f4 {
                for c in a.pow(3).solve_artin_schreier() {
                    elements.push(AutomorphismElement { u, a, c });
                }
            }
        }
        elements.sort();
        Ok(AutGroup { curve, elements })
    }

    fn verify(&self) -> Result<(), LameError> {
        let fail = |m: &str| Err(LameError::AutomorphismCheck(m.to_string()));
        let set: BTreeSet<_> = self.elements.iter().copied().collect();
        if set.len() != 24 {
            return fail("group does not have 24 elements");
        }
        let ctx = self.curve.context();
        if !set.contains(&AutomorphismElement::identity(ctx)) {
            return fail("identity missing");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x24);
        let samples: Vec<CurvePoint> = (0..8).map(|_| self.curve.random_point(&mut rng)).collect();
        let mut abelian = true;
        for alpha in &self.elements {
            for beta in &self.elements {
                let ab = alpha.compose(beta);
                if !set.contains(&ab) {
                    return fail("composition leaves the group");
                }
                if ab != beta.compose(alpha) {
                    abelian = false;
                }
                for p in &samples[..2] {
                    if ab.apply(p) != alpha.apply(&beta.apply(p)) {
                        return fail("composition law disagrees with the action");
                    }
                }
            }
            for pair in samples.windows(2) {
                let (p, q) = (&pair[0], &pair[1]);
                let (ap, aq) = (alpha.apply(p), alpha.apply(q));
                if !self.curve.contains(&ap) {
                    return fail("image point is off the curve");
                }
                if alpha.apply(&self.curve.add(p, q)) != self.curve.add(&ap, &aq) {
                    return fail("action is not additive");
                }
            }
        }
        if abelian {
            return fail("group is abelian");
        }
        let neg = AutomorphismElement { u: ctx.one(), a: ctx.zero(), c: ctx.one() };
        if samples.iter().any(|p| neg.apply(p) != self.curve.neg(p)) {
            return fail("(1, 0, 1) is not negation");
        }
        Ok(())
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    pub fn elements(&self) -> &[AutomorphismElement] {
        &self.elements
    }

    pub fn orbit(&self, p: &CurvePoint) -> BTreeSet<CurvePoint> {
        self.elements.iter().map(|a| a.apply(p)).collect()
    }

    pub fn stabilizer_size(&self, p: &CurvePoint) -> usize {
        self.elements.iter().filter(|a| a.apply(p) == *p).count()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements.iter().all(|a| self.elements.iter().all(|b| a.compose(b) == b.compose(a)))
    }
}

/// ρ(x, y) = (x⁴ + x)³.
pub fn rho(p: &CurvePoint) -> Result<FieldElement, LameError> {
    let x = p.x().ok_or(LameError::Identity)?;
    Ok((x.pow(4) + x).pow(3))
}

/// The 24 automorphisms over `ctx` (which must contain F₄).
pub fn aut_group(ctx: &'static FieldContext) -> Result<Arc<AutGroup>, LameError> {
    AutGroup::get(&WeierstrassCurve::supersingular(ctx))
}

pub fn aut_orbit(p: &CurvePoint, ctx: &'static FieldContext) -> Result<BTreeSet<CurvePoint>, LameError> {
    Ok(aut_group(ctx)?.orbit(p))
}

/// ρ-value restricted to the smallest field containing it.
fn minimal(c: FieldElement) -> Result<FieldElement, LameError> {
    let e = c.element_degree();
    Ok(c.restrict(FieldContext::of(e))?.expect("an element lies in its own field"))
}

#[derive(Clone, Debug, Serialize)]
pub struct LameClass {
    #[serde(rename = "n")]
    pub order: u64,
    /// ρ-value in F_{2^moduli_degree}
    #[serde(rename = "rho")]
    pub rho_value: FieldElement,
    pub moduli_degree: u32,
    #[serde(rename = "rep")]
    pub representative: CurvePoint,
    #[serde(skip)]
    pub orbit_size: usize,
}

fn torsion_context(n: u64) -> Result<&'static FieldContext, LameError> {
    let d = torsion_field_degree(n)?;
    Ok(FieldContext::get(if d % 2 == 0 { d } else { 2 * d })?)
}

/// Groups of points sharing a ρ-value, each certified to be a single automorphism orbit.
fn classes_of(
    group: &AutGroup,
    points: impl IntoIterator<Item = CurvePoint>,
) -> Result<Vec<(FieldElement, BTreeSet<CurvePoint>)>, LameError> {
    let mut fibers: BTreeMap<FieldElement, BTreeSet<CurvePoint>> = BTreeMap::new();
    for p in points {
        fibers.entry(rho(&p)?).or_default().insert(p);
    }
    let mut out = Vec::new();
    for (r, fiber) in fibers {
        let first = fiber.iter().next().expect("fibers are nonempty");
        let orbit = group.orbit(first);
        if orbit != fiber {
            return Err(LameError::FiberOrbitMismatch { rho: r.to_hex(), fiber: fiber.len(), orbit: orbit.len() });
        }
        out.push((r, fiber));
    }
    Ok(out)
}

/// One class per ρ-value among the points of exact order n; every fiber is checked to be
/// exactly one automorphism orbit.
pub fn classify_torsion(n: u64, seed: u64) -> Result<Vec<LameClass>, LameError> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(LameError::BadOrder(n));
    }
    let ctx = torsion_context(n)?;
    let e = WeierstrassCurve::supersingular(ctx);
    let group = AutGroup::get(&e)?;
    let exact = e
        .enumerate_torsion(n, seed)?
        .into_iter()
        .filter(|p| !p.is_infinity() && e.order_dividing(p, n as u128) == n as u128);
    let mut classes = Vec::new();
    for (r, orbit) in classes_of(&group, exact)? {
        let rho_value = minimal(r)?;
        classes.push(LameClass {
            order: n,
            rho_value,
            moduli_degree: rho_value.degree(),
            representative: *orbit.iter().next().expect("nonempty"),
            orbit_size: orbit.len(),
        });
    }
    classes.sort_by_key(|c| (c.moduli_degree, c.rho_value));
    Ok(classes)
}

/// Number of classes of order dividing n: (n² − 1)/24 if 3 ∤ n, else (3m² + 5)/8 for n = 3m.
pub fn lame_count_dividing(n: u64) -> u64 {
    assert!(n % 2 == 1 && n > 1, "n must be odd and greater than 1");
    if n.is_multiple_of(3) {
        let m = n / 3;
        (3 * m * m + 5) / 8
    } else {
        (n * n - 1) / 24
    }
}

/// Distinct ρ-values on E[n] − {O}, i.e. the brute-force class count of order dividing n.
pub fn brute_count_dividing(n: u64, seed: u64) -> Result<u64, LameError> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(LameError::BadOrder(n));
    }
    let ctx = torsion_context(n)?;
    let e = WeierstrassCurve::supersingular(ctx);
    let group = AutGroup::get(&e)?;
    let pts = e.enumerate_torsion(n, seed)?.into_iter().filter(|p| !p.is_infinity());
    Ok(classes_of(&group, pts)?.len() as u64)
}

/// ψ(n) = Π p^(2r−2)(p² − 1) over prime powers p^r ∥ n.
pub fn psi(n: u64) -> u128 {
    arith::factor(n as u128).into_iter().map(|(p, r)| p.pow(2 * r - 2) * (p * p - 1)).product()
}

/// Π (2^(p^r) − 2^(p^(r−1))) over prime powers p^r ∥ d; η(1) = 1.
pub fn eta_product(d: u32) -> u128 {
    arith::factor(d as u128)
        .into_iter()
        .map(|(p, r)| {
            let hi = p.pow(r);
            let lo = p.pow(r - 1);
            assert!(hi < 128, "2^{hi} does not fit");
            (1u128 << hi) - (1u128 << lo)
        })
        .product()
}

/// #{c ∈ F_{2^d} : c generates F_{2^d}} = Σ_{e|d} μ(d/e)·2^e.
pub fn degree_count_true(d: u32) -> i128 {
    assert!(d < 127, "2^{d} does not fit");
    arith::divisors(d as u64).into_iter().map(|e| arith::mobius(d as u64 / e) as i128 * (1i128 << e)).sum()
}

/// The same count by scanning all of F_{2^d}.
pub fn degree_count_scan(d: u32) -> u64 {
    assert!(d <= 20, "scan limited to F_2^20");
    FieldContext::of(d).elements().filter(|c| c.element_degree() == d).count() as u64
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    #[serde(rename = "n")]
    pub order: u128,
    pub rho: FieldElement,
    pub moduli_degree: u32,
    pub rep: CurvePoint,
    /// degree of the field over which the representative is defined
    pub point_field: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeTally {
    pub found: u64,
    pub mobius: i128,
    pub eta_product: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub d: u32,
    pub classes: Vec<CensusEntry>,
    pub by_degree: BTreeMap<u32, DegreeTally>,
    /// distinct ρ-values of points defined over F_{2^d} itself
    pub rational_point_classes: u64,
}

impl CensusReport {
    pub fn counts_match(&self) -> bool {
        self.classes.len() as u128 == 1u128 << self.d
            && self.by_degree.values().all(|t| t.found as i128 == t.mobius)
    }
}

/// A point with ρ = c, found by solving (x⁴ + x)³ = c and then y² + y = x³.
fn census_point(c: FieldElement) -> Result<(CurvePoint, &'static FieldContext), LameError> {
    let base = c.context();
    let mut coeffs = vec![base.zero(); 13];
    for i in [3, 6, 9, 12] {
        coeffs[i] = base.one();
    }
    coeffs[0] = c;
    let poly = Poly::from_coeffs(base, coeffs);
    let k = *gf2::factor_degrees(&poly)?.iter().min().expect("degree 12 has factors") as u32;
    let mut big = base.degree() * k;
    loop {
        let ctx = FieldContext::get(big).map_err(|_| LameError::CensusOverflow(c.to_hex()))?;
        let roots = gf2::distinct_roots(&poly.embed(ctx)?)?;
        let e = WeierstrassCurve::supersingular(ctx);
        if let Some(p) = roots.iter().flat_map(|&x| e.lift_x(x)).min() {
            return Ok((p, ctx));
        }
        big *= 2;
    }
}

/// Every c ∈ F_{2^d} as a ρ-value, with a representative point, its exact order and the
/// per-degree counts compared against the Möbius count and the multiplicative η.
pub fn moduli_census(d: u32) -> Result<CensusReport, LameError> {
    if d > CENSUS_LIMIT {
        return Err(LameError::CensusTooLarge(d));
    }
    let base = FieldContext::get(d)?;
    let mut classes = Vec::new();
    for c in base.elements() {
        let (p, ctx) = census_point(c)?;
        let e = WeierstrassCurve::supersingular(ctx);
        debug_assert_eq!(rho(&p)?, c.embed(ctx)?);
        classes.push(CensusEntry {
            order: e.point_order(&p)?,
            rho: c,
            moduli_degree: c.element_degree(),
            rep: p,
            point_field: ctx.degree(),
        });
    }
    let mut by_degree = BTreeMap::new();
    for e in arith::divisors(d as u64) {
        let e = e as u32;
        let found = classes.iter().filter(|c| c.moduli_degree == e).count() as u64;
        let is_prime_power = arith::factor(e as u128).len() <= 1;
        by_degree.insert(
            e,
            DegreeTally { found, mobius: degree_count_true(e), eta_product: is_prime_power.then(|| eta_product(e)) },
        );
    }
    let own = WeierstrassCurve::supersingular(base);
    let rational: BTreeSet<FieldElement> =
        own.points()?.iter().filter(|p| !p.is_infinity()).map(rho).collect::<Result<_, _>>()?;
    Ok(CensusReport { d, classes, by_degree, rational_point_classes: rational.len() as u64 })
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisReport {
    pub field_degree: u32,
    pub frobenius_power: u32,
    pub samples: usize,
    pub failures: usize,
}

impl GaloisReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// ρ(Frob(P)) = Frob(ρ(P)) for random P over F_{2^field_degree}, Frob = 2^power-th power.
pub fn galois_equivariance_check(
    field_degree: u32,
    power: u32,
    samples: usize,
    seed: u64,
) -> Result<GaloisReport, LameError> {
    let ctx = FieldContext::get(field_degree)?;
    let e = WeierstrassCurve::supersingular(ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut done = 0;
    while done < samples {
        let p = e.random_point(&mut rng);
        if p.is_infinity() {
            continue;
        }
        done += 1;
        if rho(&p.frobenius(power))? != rho(&p)?.frobenius(power) {
            failures += 1;
        }
    }
    Ok(GaloisReport { field_degree, frobenius_power: power, samples, failures })
}

/// f_P with divisor n(P) − n(O), normalized to f(Q) = 1 at its third ramified point Q.
#[derive(Clone, Debug, Serialize)]
pub struct LameCover {
    #[serde(skip)]
    pub curve: WeierstrassCurve,
    pub n: u64,
    pub p: CurvePoint,
    /// ((n+1)/2)P, plus the 2-torsion point (0, √a6) on an ordinary curve
    pub q: CurvePoint,
    pub f: CurveRationalFunction,
}

/// The nonzero rational 2-torsion point of an ordinary curve (a1 ≠ 0).
pub fn two_torsion_point(e: &WeierstrassCurve) -> Option<CurvePoint> {
    if e.a1.is_zero() {
        return None;
    }
    let x = e.a3 / e.a1;
    e.lift_x(x).into_iter().find(|p| e.double(p).is_infinity())
}

impl LameCover {
    pub fn new(e: &WeierstrassCurve, p: &CurvePoint) -> Result<Self, LameError> {
        let n = e.point_order(p)?;
        if n % 2 == 0 || n < 3 {
            return Err(LameError::NotOddTorsion);
        }
        let n = n as u64;
        let mut q = e.mul_u128((n as u128).div_ceil(2), p);
        if let Some(r) = two_torsion_point(e) {
            q = e.add(&q, &r);
        }
        let f = miller_function(e, p, n)?;
        let fq = match f.value_at(&q)? {
            BranchValue::Finite(v) if !v.is_zero() => v,
            _ => return Err(FuncError::DivisionByZero.into()),
        };
        let f = f.scale(fq.inv().expect("nonzero"));
        Ok(LameCover { curve: *e, n, p: *p, q, f })
    }

    /// Profile over ∞, 0 and 1 = f(Q).
    pub fn profile(&self) -> Result<ProfileReport, LameError> {
        let ctx = self.curve.context();
        Ok(self.f.ramification_profile(&[
            BranchValue::Infinity,
            BranchValue::Finite(ctx.zero()),
            BranchValue::Finite(ctx.one()),
        ])?)
    }

    /// Profile over ∞ and 0 only, so any further ramified point is found by search.
    pub fn blind_profile(&self) -> Result<ProfileReport, LameError> {
        let ctx = self.curve.context();
        Ok(self.f.ramification_profile(&[BranchValue::Infinity, BranchValue::Finite(ctx.zero())])?)
    }

    /// Checks of the branch datum (n : n : k, 1, …, 1) with k = 3 (tame) on the
    /// supersingular model and k = 2 (wild, different 2) otherwise.
    pub fn certify(&self) -> Result<CoverCertificate, LameError> {
        let prof = self.profile()?;
        let n = self.n as i64;
        let fiber_ok = |i: usize, pt: CurvePoint| {
            let f = &prof.fibers[i];
            f.complete && f.points.len() == 1 && f.points[0].point == pt && f.points[0].multiplicity == n
        };
        let over_inf = fiber_ok(0, CurvePoint::Infinity);
        let over_zero = fiber_ok(1, self.p);
        let ramified: Vec<_> =
            prof.fibers[2].points.iter().chain(prof.unclaimed.iter()).filter(|e| e.multiplicity > 1).collect();
        let third = match ramified.as_slice() {
            [only] if only.point == self.q => Some((only.multiplicity, only.different_exponent, only.tame)),
            _ => None,
        };
        let half = self.curve.mul_u128((self.n as u128).div_ceil(2), &self.p);
        let signature_one = self.curve.point_order(&half)? == self.n as u128
            && self.curve.double(&half) == self.p;
        Ok(CoverCertificate {
            n: self.n,
            over_infinity: over_inf,
            over_zero,
            third,
            total_different: prof.total_different,
            signature_one,
            profile: prof,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverCertificate {
    pub n: u64,
    pub over_infinity: bool,
    pub over_zero: bool,
    /// (index, different exponent, tame) of the unique ramified point over 1
    pub third: Option<(i64, i64, bool)>,
    pub total_different: i64,
    /// the half-point ((n+1)/2)P has order n and doubles to P
    pub signature_one: bool,
    pub profile: ProfileReport,
}

impl CoverCertificate {
    pub fn is_lame(&self) -> bool {
        self.over_infinity && self.over_zero && self.third == Some((3, 2, true)) && self.total_different == 2 * self.n as i64
    }

    pub fn is_wild_index_two(&self) -> bool {
        self.over_infinity
            && self.over_zero
            && self.third == Some((2, 2, false))
            && self.total_different == 2 * self.n as i64
    }
}

/// Smallest multiple D of the coefficient-field degree of E with n | #E(F_{2^D}).
pub fn working_degree(e: &WeierstrassCurve, n: u64) -> Result<u32, LameError> {
    Ok(working_curve(e, n)?.degree())
}

/// E over F_{2^D} for the D of [`working_degree`].
pub fn working_curve(e: &WeierstrassCurve, n: u64) -> Result<WeierstrassCurve, LameError> {
    let step = e.coefficient_field_degree();
    let small = FieldContext::of(step);
    let mut coeffs = [small.zero(); 5];
    for (s, c) in coeffs.iter_mut().zip(e.coefficients()) {
        *s = c.restrict(small)?.expect("coefficient lies in its field");
    }
    let base = WeierstrassCurve::new(coeffs)?;
    let mut d = step;
    while d <= 127 {
        let ext = base.base_change(FieldContext::of(d))?;
        if ext.group_order()? % n as u128 == 0 {
            return Ok(ext);
        }
        d += step;
    }
    Err(CurveError::TorsionNotRational { n, d: 127 }.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4ctx() -> &'static FieldContext {
        FieldContext::of(2)
    }

    #[test]
    fn group_has_24_elements_and_is_nonabelian() {
        let g = aut_group(f4ctx()).unwrap();
        assert_eq!(g.elements().len(), 24);
        assert!(!g.is_abelian());
        assert!(aut_group(FieldContext::of(3)).is_err());
    }

    #[test]
    fn rho_trivial_values_and_invariance() {
        let ctx = FieldContext::of(12);
        let o = ctx.zero();
        assert!(rho(&CurvePoint::affine(o, o)).unwrap().is_zero());
        assert!(rho(&CurvePoint::affine(o, ctx.one())).unwrap().is_zero());
        assert_eq!(rho(&CurvePoint::Infinity), Err(LameError::Identity));
        let e = WeierstrassCurve::supersingular(ctx);
        let g = AutGroup::get(&e).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = e.random_point(&mut rng);
            if p.is_infinity() {
                continue;
            }
            for a in g.elements() {
                assert_eq!(rho(&a.apply(&p)).unwrap(), rho(&p).unwrap());
            }
        }
    }

    #[test]
    fn orbit_of_origin_is_order_three_locus() {
        let ctx = f4ctx();
        let e = WeierstrassCurve::supersingular(ctx);
        let orbit = aut_orbit(&CurvePoint::affine(ctx.zero(), ctx.zero()), ctx).unwrap();
        let order3 = e.exact_order_points(3).unwrap();
        assert_eq!(orbit.into_iter().collect::<Vec<_>>(), order3);
        assert_eq!(order3.len(), 8);
    }

    #[test]
    fn small_classifications() {
        let c3 = classify_torsion(3, 0).unwrap();
        assert_eq!(c3.len(), 1);
        assert!(c3[0].rho_value.is_zero());
        assert_eq!(c3[0].moduli_degree, 1);
        let c5 = classify_torsion(5, 0).unwrap();
        assert_eq!(c5.len(), 1);
        assert!(c5[0].rho_value.is_one());
        assert_eq!(c5[0].orbit_size, 24);
        assert_eq!(classify_torsion(7, 0).unwrap().len(), 2);
    }

    #[test]
    fn counting_functions() {
        assert_eq!(psi(3), 8);
        assert_eq!(psi(9), 72);
        assert_eq!(psi(35), 1152);
        assert_eq!(lame_count_dividing(5), 1);
        assert_eq!(lame_count_dividing(9), 4);
        assert_eq!(lame_count_dividing(35), 51);
        assert_eq!(eta_product(2), 2);
        assert_eq!(eta_product(6), 12);
        assert_eq!(degree_count_true(6), 54);
        for d in 1..=12 {
            assert_eq!(degree_count_true(d), degree_count_scan(d) as i128);
        }
    }

    #[test]
    fn census_small() {
        let r1 = moduli_census(1).unwrap();
        assert!(r1.counts_match());
        let orders: Vec<u128> = r1.classes.iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![3, 5]);
        let r2 = moduli_census(2).unwrap();
        assert!(r2.counts_match());
        assert_eq!(r2.classes.iter().filter(|c| c.moduli_degree == 2).count(), 2);
    }

    #[test]
    fn supersingular_cover_of_order_five() {
        let ctx = FieldContext::of(8);
        let e = WeierstrassCurve::supersingular(ctx);
        let p = e.exact_order_points(5).unwrap()[0];
        let cert = LameCover::new(&e, &p).unwrap().certify().unwrap();
        assert!(cert.is_lame(), "{cert:?}");
        assert!(cert.signature_one);
    }

    #[test]
    fn ordinary_cover_of_order_three() {
        let t = FieldContext::of(4).element(8);
        let e0 = WeierstrassCurve::ordinary(t).unwrap();
        let e = working_curve(&e0, 3).unwrap();
        let p = e.exact_order_points(3).unwrap()[0];
        let cert = LameCover::new(&e, &p).unwrap().certify().unwrap();
        assert!(cert.is_wild_index_two(), "{cert:?}");
    }
}
