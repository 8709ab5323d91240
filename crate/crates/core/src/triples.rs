//! Cyclic triples (a, b, c) of positive integers up to rotation, with signature abc mod 2,
//! and the count comparison between signature-1 primitive triples and classes of Lamé
//! curves in characteristic 2.

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::lame::{self, LameError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TripleError {
    #[error("degree {0} is even; only odd degrees are classified")]
    EvenDegree(u64),
    #[error("degree {0} is below 3")]
    TooSmall(u64),
    #[error(transparent)]
    Lame(#[from] LameError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl Triple {
    /// The lexicographically least rotation of (a, b, c).
    pub fn new(a: u64, b: u64, c: u64) -> Self {
        let rots = [Triple { a, b, c }, Triple { a: b, b: c, c: a }, Triple { a: c, b: a, c: b }];
        *rots.iter().min().expect("three rotations")
    }

    pub fn rotate(&self) -> Self {
        Triple { a: self.b, b: self.c, c: self.a }
    }

    pub fn is_canonical(&self) -> bool {
        *self == Triple::new(self.a, self.b, self.c)
    }

    pub fn degree(&self) -> u64 {
        self.a + self.b + self.c
    }

    /// abc mod 2
    pub fn signature(&self) -> u8 {
        (self.a * self.b * self.c % 2) as u8
    }

    pub fn is_primitive(&self) -> bool {
        arith::gcd(arith::gcd(self.a as u128, self.b as u128), self.c as u128) == 1
    }
}

fn check_degree(n: u64) -> Result<(), TripleError> {
    if n < 3 {
        Err(TripleError::TooSmall(n))
    } else if n.is_multiple_of(2) {
        Err(TripleError::EvenDegree(n))
    } else {
        Ok(())
    }
}

/// Canonical triples of degree n (any n ≥ 3), filtered, sorted.
pub fn all_triples(n: u64, signature: Option<u8>, primitive_only: bool) -> Vec<Triple> {
    let mut out = Vec::new();
    for a in 1..n {
        for b in 1..n - a {
            let t = Triple { a, b, c: n - a - b };
            if !t.is_canonical() {
                continue;
            }
            if primitive_only && !t.is_primitive() {
                continue;
            }
            if signature.is_some_and(|s| s != t.signature()) {
                continue;
            }
            out.push(t);
        }
    }
    out.sort();
    out
}

/// Canonical triples of odd degree n passing the filters.
pub fn enumerate_triples(n: u64, signature: Option<u8>, primitive_only: bool) -> Result<Vec<Triple>, TripleError> {
    check_degree(n)?;
    Ok(all_triples(n, signature, primitive_only))
}

/// Number of rotation classes of compositions of n into three parts, by Burnside.
pub fn burnside_class_count(n: u64) -> u64 {
    if n < 3 {
        return 0;
    }
    let compositions = (n - 1) * (n - 2) / 2;
    let fixed_by_rotation = if n.is_multiple_of(3) { 1 } else { 0 };
    (compositions + 2 * fixed_by_rotation) / 3
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftingReport {
    pub n: u64,
    pub signature_one: u64,
    /// ψ(n)/24 when it is an integer
    pub psi_over_24: Option<u128>,
    /// classes of exact order n in characteristic 2, when computed
    pub char2_exact: Option<u64>,
    pub cumulative_signature_one: u64,
    pub cumulative_formula: u64,
    pub passed: bool,
}

/// Compares signature-1 primitive triples of degree n with ψ(n)/24 and, for n ≤ `brute_limit`,
/// with the characteristic-2 classification; also the cumulative count over divisors.
pub fn lifting_count_check(n: u64, brute_limit: u64) -> Result<LiftingReport, TripleError> {
    check_degree(n)?;
    let sig1 = |m: u64| all_triples(m, Some(1), true).len() as u64;
    let signature_one = sig1(n);
    let psi = lame::psi(n);
    let psi_over_24 = psi.is_multiple_of(24).then_some(psi / 24);
    let char2_exact = if n <= brute_limit { Some(lame::classify_torsion(n, 0)?.len() as u64) } else { None };
    let cumulative_signature_one = arith::divisors(n).into_iter().filter(|&m| m > 1).map(sig1).sum();
    let cumulative_formula = lame::lame_count_dividing(n);
    let passed = psi_over_24.is_none_or(|p| p == signature_one as u128)
        && char2_exact.is_none_or(|c| c == signature_one)
        && cumulative_signature_one == cumulative_formula;
    Ok(LiftingReport {
        n,
        signature_one,
        psi_over_24,
        char2_exact,
        cumulative_signature_one,
        cumulative_formula,
        passed,
    })
}
