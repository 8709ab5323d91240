//! One report builder per subcommand. Each returns a JSON body, a CSV projection and
//! whether every embedded assertion held.

use lame_core::arith;
use lame_core::funcfield::{BranchValue, ProfileEntry};
use lame_core::gf2::FieldContext;
use lame_core::hyper::{self, HyperellipticCurve};
use lame_core::lame::{self, LameCover};
use lame_core::moduli12::{self, Projective, WeightedPoint};
use lame_core::triples;
use lame_core::weierstrass::{CurvePoint, WeierstrassCurve};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Largest order handled by the characteristic-2 enumerations.
pub const MAX_ORDER: u64 = 13;

pub struct Report {
    pub body: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub passed: bool,
}

pub type Outcome = Result<Report, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn point_hex(p: &CurvePoint) -> String {
    match p.coords() {
        None => "inf".into(),
        Some((x, y)) => format!("({},{})", x.to_hex(), y.to_hex()),
    }
}

pub fn classify(n: u64, seed: u64) -> Outcome {
    let classes = lame::classify_torsion(n, seed).map_err(err)?;
    let psi = lame::psi(n);
    let expected_exact = if n == 3 { 1 } else { (psi / 24) as usize };
    let formula = lame::lame_count_dividing(n);
    let brute = lame::brute_count_dividing(n, seed).map_err(err)?;
    let orbit_total: usize = classes.iter().map(|c| c.orbit_size).sum();
    let checks = json!({
        "exact_classes": {"found": classes.len(), "expected": expected_exact, "ok": classes.len() == expected_exact},
        "dividing_classes": {"found": brute, "expected": formula, "ok": brute == formula},
        "orbit_total": {"found": orbit_total, "expected": psi as u64, "ok": orbit_total as u128 == psi},
    });
    let passed = classes.len() == expected_exact && brute == formula && orbit_total as u128 == psi;
    let rows = classes
        .iter()
        .map(|c| {
            vec![
                n.to_string(),
                c.rho_value.to_hex(),
                c.moduli_degree.to_string(),
                c.orbit_size.to_string(),
                point_hex(&c.representative),
            ]
        })
        .collect();
    Ok(Report {
        body: json!({"n": n, "classes": classes, "checks": checks}),
        header: vec!["n", "rho", "moduli_degree", "orbit_size", "rep"],
        rows,
        passed,
    })
}

fn entry_json(e: &ProfileEntry) -> Value {
    json!({
        "point": e.point,
        "index": e.multiplicity,
        "different": e.different_exponent,
        "tame": e.tame,
    })
}

pub fn ramify(n: u64, ordinary: Option<(String, u32)>) -> Outcome {
    let base = match &ordinary {
        None => WeierstrassCurve::supersingular(FieldContext::of(1)),
        Some((hex, d)) => {
            let ctx = FieldContext::get(*d).map_err(err)?;
            let t = ctx.parse_hex(hex).map_err(err)?;
            WeierstrassCurve::ordinary(t).map_err(err)?
        }
    };
    let e = lame::working_curve(&base, n).map_err(err)?;
    let d = e.degree();
    let p = *e.exact_order_points(n).map_err(err)?.first().ok_or("no point of the requested order")?;
    let cover = LameCover::new(&e, &p).map_err(err)?;
    let cert = cover.certify().map_err(err)?;
    let third_fiber = &cert.profile.fibers[2];
    let mut over_one: Vec<i64> = third_fiber.points.iter().map(|e| e.multiplicity).collect();
    over_one.sort_by(|a, b| b.cmp(a));
    let found: i64 = over_one.iter().sum();
    over_one.extend(std::iter::repeat_n(1, (n as i64 - found).max(0) as usize));
    let datum = format!(
        "({n}:{n}:{})",
        over_one.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
    );
    let ramified: Vec<Value> = cert.profile.ramified_points().into_iter().map(entry_json).collect();
    let supersingular = ordinary.is_none();
    let passed = if supersingular { cert.is_lame() } else { cert.is_wild_index_two() };
    let fibers: Vec<Value> = cert
        .profile
        .fibers
        .iter()
        .map(|f| {
            json!({
                "value": match f.value { BranchValue::Infinity => json!("inf"), BranchValue::Finite(c) => json!(c) },
                "points": f.points.iter().map(entry_json).collect::<Vec<_>>(),
                "complete": f.complete,
                "unresolved_factor_degrees": f.unresolved_factor_degrees,
            })
        })
        .collect();
    let rows = cert
        .profile
        .ramified_points()
        .into_iter()
        .map(|e| {
            vec![
                n.to_string(),
                point_hex(&e.point),
                e.multiplicity.to_string(),
                e.different_exponent.to_string(),
                e.tame.to_string(),
            ]
        })
        .collect();
    Ok(Report {
        body: json!({
            "n": n,
            "model": if supersingular { "supersingular" } else { "ordinary" },
            "field_degree": d,
            "p": p,
            "q": cover.q,
            "function": cover.f,
            "branch_datum": datum,
            "ramified": ramified,
            "fibers": fibers,
            "unclaimed": cert.profile.unclaimed.iter().map(entry_json).collect::<Vec<_>>(),
            "total_different": cert.total_different,
            "expected_total": 2 * n,
            "signature_one": cert.signature_one,
            "unresolved_points_unramified": cert.total_different == 2 * n as i64,
        }),
        header: vec!["n", "point", "index", "different", "tame"],
        rows,
        passed: passed && (!supersingular || cert.signature_one),
    })
}

pub fn counts(max_n: u64, seed: u64) -> Outcome {
    let mut table = Vec::new();
    let mut rows = Vec::new();
    let mut passed = true;
    for n in (3..=max_n).step_by(2) {
        let formula = lame::lame_count_dividing(n);
        let psi = lame::psi(n);
        let (brute, exact) = if n <= MAX_ORDER {
            let b = lame::brute_count_dividing(n, seed).map_err(err)?;
            let e = lame::classify_torsion(n, seed).map_err(err)?.len() as u64;
            (Some(b), Some(e))
        } else {
            (None, None)
        };
        let ok = brute.is_none_or(|b| b == formula)
            && exact.is_none_or(|e| if n == 3 { e == 1 } else { e as u128 * 24 == psi });
        passed &= ok;
        table.push(json!({
            "n": n, "formula": formula, "brute": brute, "exact_classes": exact,
            "psi": psi as u64, "ok": ok,
        }));
        let show = |v: Option<u64>| v.map_or(String::new(), |v| v.to_string());
        rows.push(vec![n.to_string(), formula.to_string(), show(brute), show(exact), psi.to_string()]);
    }
    Ok(Report {
        body: json!({"max_n": max_n, "rows": table}),
        header: vec!["n", "formula", "brute", "exact_classes", "psi"],
        rows,
        passed,
    })
}

pub fn triples(n: u64) -> Outcome {
    let all = triples::enumerate_triples(n, None, true).map_err(err)?;
    let lifting = triples::lifting_count_check(n, MAX_ORDER).map_err(err)?;
    let rows = all
        .iter()
        .map(|t| {
            vec![
                n.to_string(),
                t.a.to_string(),
                t.b.to_string(),
                t.c.to_string(),
                t.signature().to_string(),
                t.is_primitive().to_string(),
            ]
        })
        .collect();
    let list: Vec<Value> = all.iter().map(|t| json!([t.a, t.b, t.c])).collect();
    let sig1 = all.iter().filter(|t| t.signature() == 1).count();
    Ok(Report {
        body: json!({"degree": n, "triples": list, "signature_one": sig1, "lifting": lifting}),
        header: vec!["n", "a", "b", "c", "signature", "primitive"],
        rows,
        passed: lifting.passed,
    })
}

pub fn moduli(d: u32) -> Outcome {
    let report = lame::moduli_census(d).map_err(err)?;
    let mut flagged = Vec::new();
    for (e, t) in &report.by_degree {
        if let Some(eta) = t.eta_product {
            if eta as i128 != t.mobius {
                flagged.push(json!({"degree": e, "eta_product": eta as u64, "mobius": t.mobius as i64}));
            }
        }
    }
    let composite_flags: Vec<Value> = report
        .by_degree
        .iter()
        .filter(|(_, t)| t.eta_product.is_none())
        .map(|(e, t)| {
            let product = lame::eta_product(*e);
            json!({"degree": e, "eta_product": product as u64, "mobius": t.mobius as i64})
        })
        .collect();
    flagged.extend(composite_flags);
    let rows = report
        .classes
        .iter()
        .map(|c| {
            vec![
                c.rho.to_hex(),
                c.moduli_degree.to_string(),
                c.order.to_string(),
                c.point_field.to_string(),
                point_hex(&c.rep),
            ]
        })
        .collect();
    let passed = report.counts_match();
    Ok(Report {
        body: json!({"census": report, "eta_discrepancies": flagged, "classes_expected": 1u64 << d}),
        header: vec!["rho", "moduli_degree", "order", "point_field", "rep"],
        rows,
        passed,
    })
}

pub fn hyper(g: usize, d: u32) -> Outcome {
    let l = hyper::curve_lpoly(g).map_err(err)?;
    let cert = hyper::is_supersingular(&l).map_err(err)?;
    let ctx = FieldContext::get(d).map_err(err)?;
    let c = HyperellipticCurve::new(g, ctx).map_err(err)?;
    let jac = c.jacobian_order().map_err(err)?;
    let origin = CurvePoint::affine(ctx.zero(), ctx.zero());
    let class = c.class_of_point_pair(&origin).map_err(err)?;
    let origin_order = c.divisor_class_order(&class).map_err(err)?;
    let orders = hyper::point_pair_orders(&c).map_err(err)?;
    let all_odd = orders.keys().all(|o| o % 2 == 1);
    let below: Vec<u64> = orders.keys().filter(|&&o| o < 2 * g as u128 + 1).map(|&o| o as u64).collect();
    let order_table: Vec<Value> = orders.iter().map(|(o, k)| json!({"order": *o as u64, "points": k})).collect();
    let rows = orders.iter().map(|(o, k)| vec![g.to_string(), d.to_string(), o.to_string(), k.to_string()]).collect();
    Ok(Report {
        body: json!({
            "genus": g,
            "field_degree": d,
            "lpoly": l.iter().map(|&c| c as i64).collect::<Vec<_>>(),
            "jacobian_order": jac as u64,
            "jacobian_factors": arith::factor(jac).into_iter().map(|(p, e)| json!([p as u64, e])).collect::<Vec<_>>(),
            "supersingular": cert.supersingular,
            "certificate": cert,
            "origin_class": class,
            "origin_class_order": origin_order as u64,
            "point_pair_orders": order_table,
            "all_orders_odd": all_odd,
            "orders_below_2g_plus_1": below,
        }),
        header: vec!["genus", "field_degree", "order", "points"],
        rows,
        passed: cert.supersingular && all_odd,
    })
}

fn random_q(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-50i64..=50)), BigInt::from(rng.gen_range(1i64..=9)))
}

pub fn jcheck(samples: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut delta_ok, mut j_ok, mut tate_ok, mut done) = (0usize, 0usize, 0usize, 0usize);
    let mut scale: Option<BigRational> = None;
    while done < samples {
        let p = WeightedPoint::new(random_q(&mut rng), random_q(&mut rng), random_q(&mut rng)).map_err(err)?;
        let k = p.curve_coefficients();
        let std_delta = moduli12::standard_discriminant(&k);
        if num_traits::Zero::is_zero(&std_delta) {
            continue;
        }
        done += 1;
        let ratio = moduli12::discriminant_formula(&p) / &std_delta;
        let fixed = scale.get_or_insert_with(|| ratio.clone());
        if *fixed == ratio {
            delta_ok += 1;
        }
        if moduli12::j_formula(&p) == moduli12::standard_j(&k) {
            j_ok += 1;
        }
        // a random curve through a random point, moved to Tate form, keeps its j
        let mut general: [BigRational; 5] = std::array::from_fn(|_| random_q(&mut rng));
        let (x, y) = (random_q(&mut rng), random_q(&mut rng));
        general[4] = BigRational::from_integer(0.into());
        general[4] = moduli12::curve_equation(&general, &x, &y);
        match moduli12::tate_normal_form_coeffs(&general, &x, &y) {
            Ok(w) if moduli12::j_formula(&w) == moduli12::standard_j(&general) => tate_ok += 1,
            Err(moduli12::ModuliError::SmallOrder) => tate_ok += 1,
            _ => {}
        }
    }
    let mut lame_reps = 0usize;
    let mut lame_j_zero = 0usize;
    for n in (3..=MAX_ORDER).step_by(2) {
        let d = lame_core::weierstrass::torsion_field_degree(n).map_err(err)?;
        let e = WeierstrassCurve::supersingular(FieldContext::of(d));
        for class in lame::classify_torsion(n, seed).map_err(err)? {
            lame_reps += 1;
            let w = moduli12::tate_normal_form(&e, &class.representative).map_err(err)?;
            if matches!(moduli12::j_formula(&w), Projective::Finite(j) if j.is_zero()) {
                lame_j_zero += 1;
            }
        }
    }
    let scale_str = scale.map(|s| format!("{}/{}", s.numer(), s.denom()));
    let passed = delta_ok == samples && j_ok == samples && tate_ok == samples && lame_j_zero == lame_reps;
    Ok(Report {
        body: json!({
            "samples": samples,
            "discriminant_scale": scale_str,
            "discriminant_agree": delta_ok,
            "j_agree": j_ok,
            "tate_round_trip": tate_ok,
            "lame_representatives": lame_reps,
            "lame_j_zero": lame_j_zero,
        }),
        header: vec!["samples", "discriminant_agree", "j_agree", "tate_round_trip", "lame_representatives", "lame_j_zero"],
        rows: vec![vec![
            samples.to_string(),
            delta_ok.to_string(),
            j_ok.to_string(),
            tate_ok.to_string(),
            lame_reps.to_string(),
            lame_j_zero.to_string(),
        ]],
        passed,
    })
}
