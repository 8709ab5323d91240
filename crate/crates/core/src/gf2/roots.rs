//! Factorization pieces and root finding over F_{2^d}.

use super::{FieldElement, FieldError, Poly};

/// Square-free decomposition: pairs (gᵢ, i) with f = ∏ gᵢ^i up to a unit, each gᵢ
/// monic, square-free and pairwise coprime.
pub fn squarefree_factorization(f: &Poly) -> Result<Vec<(Poly, usize)>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    sff(&f.monic(), 1, &mut out);
    out.sort_by_key(|(_, m)| *m);
    Ok(out)
}

fn sff(f: &Poly, scale: usize, out: &mut Vec<(Poly, usize)>) {
    if f.is_constant() {
        return;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_constant() {
            out.push((fac, i * scale));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        let root = c.sqrt().expect("leftover factor has zero derivative");
        sff(&root, 2 * scale, out);
    }
}

/// Distinct-degree factorization of a monic square-free polynomial: pairs (h, k)
/// where h is the product of all irreducible factors of degree k.
pub fn distinct_degree_factorization(f: &Poly) -> Vec<(Poly, usize)> {
    let ctx = f.context();
    let d = ctx.degree();
    let x = Poly::x(ctx);
    let mut rest = f.monic();
    let mut out = Vec::new();
    if rest.deg() <= 0 {
        return out;
    }
    let mut h = x.rem(&rest);
    let mut k = 1;
    while rest.deg() >= 2 * k as i64 {
        h = h.frobenius_mod(d, &rest);
        let g = rest.gcd(&(&h - &x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, k));
        }
        k += 1;
    }
    if rest.deg() > 0 {
        let deg = rest.deg() as usize;
        out.push((rest, deg));
    }
    out
}

/// Product of the distinct linear factors of a monic f: gcd(f, X^(2^d) − X).
fn rational_part(f: &Poly) -> Poly {
    if f.deg() <= 0 {
        return Poly::one(f.context());
    }
    let x = Poly::x(f.context());
    let frob = x.frobenius_mod(f.context().degree(), f);
    f.gcd(&(&frob - &x))
}

/// Splits a product of distinct linear factors using the trace maps X ↦ Tr(β·X) for β
/// running through the power basis; distinct roots are always separated by some β
/// because the trace form is nondegenerate.
fn split_linear(g: &Poly, basis_index: u32, out: &mut Vec<FieldElement>) {
    let ctx = g.context();
    match g.deg() {
        i64::MIN..=0 => return,
        1 => {
            out.push(g.coeff(0) / g.coeff(1));
            return;
        }
        _ => {}
    }
    assert!(basis_index < ctx.degree(), "trace splitting exhausted the basis");
    let beta = ctx.generator().pow(basis_index as u128);
    let mut term = Poly::x(ctx).scale(beta).rem(g);
    let mut tr = term.clone();
    for _ in 1..ctx.degree() {
        term = term.square().rem(g);
        tr += &term;
    }
    let h = g.gcd(&tr);
    if h.deg() > 0 && h.deg() < g.deg() {
        let other = g.div_exact(&h);
        split_linear(&h, basis_index + 1, out);
        split_linear(&other, basis_index + 1, out);
    } else {
        split_linear(g, basis_index + 1, out);
    }
}

/// Distinct roots of f in its coefficient field, sorted.
pub fn distinct_roots(f: &Poly) -> Result<Vec<FieldElement>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    split_linear(&rational_part(&f.monic()), 0, &mut out);
    out.sort();
    Ok(out)
}

/// All roots of f in its coefficient field with multiplicities, sorted by root.
pub fn poly_roots(f: &Poly) -> Result<Vec<(FieldElement, usize)>, FieldError> {
    let mut out = Vec::new();
    for (g, m) in squarefree_factorization(f)? {
        let mut roots = Vec::new();
        split_linear(&rational_part(&g), 0, &mut roots);
        out.extend(roots.into_iter().map(|r| (r, m)));
    }
    out.sort();
    Ok(out)
}

/// Degrees of the irreducible factors of f, with multiplicity, ascending.
pub fn factor_degrees(f: &Poly) -> Result<Vec<usize>, FieldError> {
    let mut out = Vec::new();
    for (g, m) in squarefree_factorization(f)? {
        for (h, k) in distinct_degree_factorization(&g) {
            let count = h.deg() as usize / k;
            out.extend(std::iter::repeat_n(k, count * m));
        }
    }
    out.sort();
    Ok(out)
}
