//! Polynomials over GF(2) packed into machine words (bit i = coefficient of x^i).

/// Carry-less 64×64 → 128 product, portable version.
#[inline]
pub(crate) fn clmul64_soft(a: u64, b: u64) -> u128 {
    let (a, mut b) = if a.count_ones() < b.count_ones() { (b, a) } else { (a, b) };
    let a = a as u128;
    let mut r = 0u128;
    while b != 0 {
        r ^= a << b.trailing_zeros();
        b &= b - 1;
    }
    r
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
unsafe fn clmul64_hw(a: u64, b: u64) -> u128 {
    use core::arch::x86_64::{_mm_clmulepi64_si128, _mm_cvtsi64_si128};
    let r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(a as i64), _mm_cvtsi64_si128(b as i64), 0);
    core::mem::transmute::<_, u128>(r)
}

pub(crate) fn hardware_clmul_available() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("pclmulqdq")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

#[inline]
pub(crate) fn clmul64(a: u64, b: u64, hw: bool) -> u128 {
    #[cfg(target_arch = "x86_64")]
    if hw {
        // SAFETY: `hw` is only set after runtime detection of pclmulqdq.
        return unsafe { clmul64_hw(a, b) };
    }
    let _ = hw;
    clmul64_soft(a, b)
}

/// 128×128 → 256 carry-less product as (high, low).
#[inline]
pub(crate) fn clmul128(a: u128, b: u128, hw: bool) -> (u128, u128) {
    let (a0, a1) = (a as u64, (a >> 64) as u64);
    let (b0, b1) = (b as u64, (b >> 64) as u64);
    let lo = clmul64(a0, b0, hw);
    let hi = clmul64(a1, b1, hw);
    let mid = clmul64(a0, b1, hw) ^ clmul64(a1, b0, hw);
    (hi ^ (mid >> 64), lo ^ (mid << 64))
}

#[inline]
pub(crate) fn degree(a: u128) -> Option<u32> {
    if a == 0 {
        None
    } else {
        Some(127 - a.leading_zeros())
    }
}

/// Remainder of a 256-bit polynomial modulo `m` (degree `d` ≥ 1).
pub(crate) fn rem256(mut hi: u128, mut lo: u128, m: u128, d: u32) -> u128 {
    while hi != 0 {
        let top = 255 - hi.leading_zeros();
        let shift = top - d;
        let (sh, sl) = shl256(m, shift);
        hi ^= sh;
        lo ^= sl;
    }
    rem(lo, m)
}

fn shl256(a: u128, s: u32) -> (u128, u128) {
    match s {
        0 => (0, a),
        1..=127 => (a >> (128 - s), a << s),
        _ => (a << (s - 128), 0),
    }
}

pub(crate) fn rem(mut a: u128, m: u128) -> u128 {
    let dm = degree(m).expect("modulus must be nonzero");
    while let Some(da) = degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

pub(crate) fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

pub(crate) fn mulmod(a: u128, b: u128, m: u128, d: u32) -> u128 {
    let (hi, lo) = clmul128(a, b, false);
    rem256(hi, lo, m, d)
}

/// Rabin's test: x^(2^d) ≡ x (mod m) and gcd(x^(2^(d/p)) − x, m) = 1 for each prime p | d.
pub fn is_irreducible(m: u128) -> bool {
    let Some(d) = degree(m) else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = 2u128;
    let frob = |k: u32| {
        let mut r = x;
        for _ in 0..k {
            r = mulmod(r, r, m, d);
        }
        r
    };
    if frob(d) != x {
        return false;
    }
    let mut n = d;
    let mut p = 2;
    let mut primes = Vec::new();
    while p * p <= n {
        if n % p == 0 {
            primes.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
        .into_iter()
        .all(|p| degree(gcd(m, frob(d / p) ^ x)) == Some(0))
}

/// The numerically smallest irreducible polynomial of degree `d` (1 ≤ d ≤ 127).
pub fn smallest_irreducible(d: u32) -> u128 {
    assert!((1..=127).contains(&d));
    let start = 1u128 << d;
    (start..)
        .take_while(|&m| m < start << 1 || d == 127)
        .find(|&m| is_irreducible(m))
        .expect("an irreducible polynomial exists in every degree")
}

/// Inverse of `a` modulo an irreducible `m` by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u128, m: u128) -> Option<u128> {
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (m, a);
    let (mut s0, mut s1) = (0u128, 1u128);
    // Invariant: s_i · a ≡ r_i (mod m).
    while r0 != 0 && r1 != 0 {
        let (d0, d1) = (degree(r0).unwrap(), degree(r1).unwrap());
        if d0 < d1 {
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
            continue;
        }
        let shift = d0 - d1;
        r0 ^= r1 << shift;
        s0 ^= s1 << shift;
    }
    let (g, s) = if r0 == 0 { (r1, s1) } else { (r0, s0) };
    if g != 1 {
        return None;
    }
    Some(rem(s, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_irreducibles_small_degrees() {
        assert_eq!(smallest_irreducible(1), 0b10);
        assert_eq!(smallest_irreducible(2), 0b111);
        assert_eq!(smallest_irreducible(3), 0b1011);
        assert_eq!(smallest_irreducible(4), 0b10011);
        assert_eq!(smallest_irreducible(8), 0b1_0001_1011);
    }

    #[test]
    fn hardware_and_software_clmul_agree() {
        let hw = hardware_clmul_available();
        let mut x = 0x9e37_79b9_7f4a_7c15u64;
        for _ in 0..2000 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let y = x.rotate_left(17) ^ 0xdead_beef;
            assert_eq!(clmul64(x, y, hw), clmul64_soft(x, y));
        }
    }

    #[test]
    fn inverse_mod_small() {
        let m = 0b111;
        assert_eq!(inv_mod(0b10, m), Some(0b11));
        assert_eq!(inv_mod(0, m), None);
    }
}
