//! Property suites shared by the acceptance target. Each draws 64-bit seeds from a
//! deterministic proptest runner and expands them with ChaCha into structured inputs.

#![allow(dead_code)]

use lame_core::funcfield::{BranchValue, CurveRationalFunction};
use lame_core::gf2::{FieldContext, Poly};
use lame_core::hyper::{HyperellipticCurve, MumfordDivisor};
use lame_core::weierstrass::{CurvePoint, WeierstrassCurve};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, max_global_rejects: cases, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run(cases: u32, test: impl Fn(u64) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner(cases).run(&any::<u64>(), test).map_err(|e| e.to_string())
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what()))
    }
}

const FIELD_DEGREES: [u32; 12] = [1, 2, 3, 4, 7, 8, 12, 24, 31, 64, 100, 127];

pub fn field_axioms(cases: u32) -> Result<(), String> {
    run(cases, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = FieldContext::of(FIELD_DEGREES[rng.gen_range(0..FIELD_DEGREES.len())]);
        let [a, b, c] = [ctx.random(&mut rng), ctx.random(&mut rng), ctx.random(&mut rng)];
        let (zero, one) = (ctx.zero(), ctx.one());
        check(a + b == b + a && a * b == b * a, || format!("commutativity in F_2^{}", ctx.degree()))?;
        check((a + b) + c == a + (b + c) && (a * b) * c == a * (b * c), || "associativity".into())?;
        check(a * (b + c) == a * b + a * c, || "distributivity".into())?;
        check(a + zero == a && a * one == a && a + a == zero, || "identities".into())?;
        match a.inv() {
            Some(i) => check(a * i == one, || format!("inverse of {}", a.to_hex()))?,
            None => check(a.is_zero(), || "nonzero element without inverse".into())?,
        }
        check((a + b).square() == a.square() + b.square(), || "Frobenius additivity".into())?;
        check((a * b).square() == a.square() * b.square(), || "Frobenius multiplicativity".into())?;
        check(a.frobenius(ctx.degree()) == a, || "Frobenius order".into())?;
        check(a.pow(ctx.order()) == a, || "a^q = a".into())
    })
}

fn random_curve(rng: &mut ChaCha8Rng) -> WeierstrassCurve {
    let d = [1u32, 2, 3, 4, 5, 6, 8, 12, 24, 40][rng.gen_range(0..10)];
    let ctx = FieldContext::of(d);
    if rng.gen_bool(0.5) {
        WeierstrassCurve::supersingular(ctx)
    } else {
        let t = loop {
            let t = ctx.random(rng);
            if !t.is_zero() {
                break t;
            }
        };
        WeierstrassCurve::ordinary(t).expect("t is nonzero")
    }
}

fn random_divisor(c: &HyperellipticCurve, points: &[CurvePoint], rng: &mut ChaCha8Rng) -> MumfordDivisor {
    let mut d = c.identity();
    for _ in 0..c.genus() {
        let p = points[rng.gen_range(0..points.len())];
        if !p.is_infinity() {
            d = c.add(&d, &c.point_divisor(&p).expect("point lies on the curve")).expect("valid divisors");
        }
    }
    d
}

/// Elliptic group law on both models and Cantor addition on genus-2 Jacobians.
pub fn group_axioms(cases: u32) -> Result<(), String> {
    let jacobians: Vec<(HyperellipticCurve, Vec<CurvePoint>)> = [1u32, 2, 3, 5]
        .iter()
        .map(|&d| {
            let c = HyperellipticCurve::new(2, FieldContext::of(d)).expect("genus 2");
            let pts = c.points().expect("small field");
            (c, pts)
        })
        .collect();
    run(cases, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_curve(&mut rng);
        let [p, q, r] = [e.random_point(&mut rng), e.random_point(&mut rng), e.random_point(&mut rng)];
        let o = CurvePoint::Infinity;
        check(e.add(&e.add(&p, &q), &r) == e.add(&p, &e.add(&q, &r)), || format!("associativity on {e:?}"))?;
        check(e.add(&p, &q) == e.add(&q, &p), || "commutativity".into())?;
        check(e.add(&p, &o) == p && e.add(&p, &e.neg(&p)).is_infinity(), || "identity and inverse".into())?;
        check(e.contains(&e.add(&p, &q)), || "sum leaves the curve".into())?;

        let (c, pts) = &jacobians[rng.gen_range(0..jacobians.len())];
        let [a, b, d] = [random_divisor(c, pts, &mut rng), random_divisor(c, pts, &mut rng), random_divisor(c, pts, &mut rng)];
        let add = |x: &MumfordDivisor, y: &MumfordDivisor| c.add(x, y).map_err(|e| TestCaseError::fail(e.to_string()));
        check(add(&add(&a, &b)?, &d)? == add(&a, &add(&b, &d)?)?, || "Cantor associativity".into())?;
        check(add(&a, &b)? == add(&b, &a)?, || "Cantor commutativity".into())?;
        check(add(&a, &c.identity())? == a && add(&a, &c.neg(&a))? == c.identity(), || "Cantor identity and inverse".into())?;
        check(c.is_valid(&add(&a, &b)?), || "Cantor sum is not reduced".into())
    })
}

fn random_rational_point(e: &WeierstrassCurve, rng: &mut ChaCha8Rng) -> CurvePoint {
    loop {
        let p = e.random_point(rng);
        if !p.is_infinity() {
            return p;
        }
    }
}

/// Product of lines through random rational points over verticals at random rational
/// points: every zero and pole is rational.
fn random_function(e: &WeierstrassCurve, rng: &mut ChaCha8Rng) -> CurveRationalFunction {
    let ctx = e.context();
    let mut f = CurveRationalFunction::one(*e);
    for _ in 0..rng.gen_range(1..=2) {
        let (p, q) = (random_rational_point(e, rng), random_rational_point(e, rng));
        let (xp, yp) = p.coords().expect("affine");
        let (xq, yq) = q.coords().expect("affine");
        let line = if xp != xq {
            let lambda = (yp + yq) / (xp + xq);
            let a = Poly::from_coeffs(ctx, vec![yp + lambda * xp, lambda]);
            CurveRationalFunction::new(*e, a, Poly::one(ctx), Poly::one(ctx)).expect("nonzero denominator")
        } else {
            CurveRationalFunction::from_x_poly(*e, Poly::linear(xp))
        };
        f = f.checked_mul(&line).expect("same curve");
    }
    for _ in 0..rng.gen_range(0..=2) {
        let x = random_rational_point(e, rng).x().expect("affine");
        let v = CurveRationalFunction::from_x_poly(*e, Poly::linear(x));
        f = f.checked_div(&v).expect("nonzero");
    }
    let c = loop {
        let c = ctx.random(rng);
        if !c.is_zero() {
            break c;
        }
    };
    f.scale(c)
}

fn small_curve(rng: &mut ChaCha8Rng) -> WeierstrassCurve {
    let ctx = FieldContext::of([4u32, 5, 6, 8, 10][rng.gen_range(0..5)]);
    if rng.gen_bool(0.5) {
        WeierstrassCurve::supersingular(ctx)
    } else {
        WeierstrassCurve::ordinary(ctx.generator()).expect("generator is nonzero")
    }
}

/// local_expand(f·g) equals the product of the expansions of f and g.
pub fn series_multiplicativity(cases: u32) -> Result<(), String> {
    run(cases, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = small_curve(&mut rng);
        let f = random_function(&e, &mut rng);
        let g = random_function(&e, &mut rng);
        let fg = f.checked_mul(&g).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let q = if rng.gen_bool(0.2) { CurvePoint::Infinity } else { e.random_point(&mut rng) };
        let m = rng.gen_range(6..=14);
        let (Ok(sf), Ok(sg), Ok(sfg)) = (f.local_expand(&q, m), g.local_expand(&q, m), fg.local_expand(&q, m)) else {
            return Err(TestCaseError::reject("zero of high order at the sample point"));
        };
        let product = sf.series.mul(&sg.series);
        let top = product.precision().min(sfg.series.precision());
        let low = product.valuation().into_iter().chain(sfg.valuation()).min().unwrap_or(top);
        check(product.coeffs_range(low, top) == sfg.series.coeffs_range(low, top), || {
            format!("expansions of f·g at {q:?} disagree: {product:?} vs {:?}", sfg.series)
        })
    })
}

fn fiber_degree(f: &CurveRationalFunction, v: BranchValue) -> Result<(usize, bool), TestCaseError> {
    let fib = f.partial_fiber(v).map_err(|e| TestCaseError::fail(e.to_string()))?;
    Ok((fib.points.iter().map(|(_, m)| m).sum(), fib.complete))
}

/// The zero and pole fibers of a function with rational support each have degree deg f,
/// and each multiplicity is the valuation there.
pub fn divisor_degree_balance(cases: u32) -> Result<(), String> {
    run(cases, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = small_curve(&mut rng);
        let f = random_function(&e, &mut rng);
        if f.is_constant() {
            return Err(TestCaseError::reject("lines cancelled against verticals"));
        }
        let n = f.degree();
        let zero = BranchValue::Finite(e.context().zero());
        let (zeros, zc) = fiber_degree(&f, zero)?;
        let (poles, pc) = fiber_degree(&f, BranchValue::Infinity)?;
        check(zc && pc, || "support is rational but a fiber is incomplete".into())?;
        check(zeros == n && poles == n, || format!("deg f = {n}, zeros {zeros}, poles {poles}"))?;
        let support = f.partial_fiber(zero).map_err(|e| TestCaseError::fail(e.to_string()))?;
        for (p, m) in support.points {
            let v = f.valuation(&p).map_err(|e| TestCaseError::fail(e.to_string()))?;
            check(v == m as i64, || format!("valuation {v} at {p:?} but fiber multiplicity {m}"))?;
        }
        Ok(())
    })
}
