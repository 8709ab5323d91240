//! Exact integer helpers: gcd, divisors, Möbius, 2-adic valuation and
//! factorization of `u128` values (trial division, Miller–Rabin, Pollard–Brent).

use std::collections::BTreeMap;

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mobius(n: u64) -> i64 {
    assert!(n > 0, "mobius(0) is undefined");
    let mut result = 1;
    for (_, e) in factor(n as u128) {
        if e > 1 {
            return 0;
        }
        result = -result;
    }
    result
}

/// 2-adic valuation; `None` for zero.
pub fn v2(n: i128) -> Option<u32> {
    if n == 0 {
        None
    } else {
        Some(n.trailing_zeros())
    }
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    // Double-and-add keeps every intermediate below 2m < 2^129 - guard with checked ops.
    let mut a = a % m;
    let mut b = b % m;
    let mut r = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            r = add_mod(r, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    r
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            r = mul_mod(r, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    r
}

const SMALL_PRIMES: [u128; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Miller–Rabin with the first 25 primes as bases. Deterministic below 3.3·10^24 and
/// overwhelmingly reliable above.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u128) -> u128 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, m) = (2u128, 128u64);
        let (mut g, mut r, mut q) = (1u128, 1u64, 1u128);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization as an ordered map prime → exponent. `factor(1)` is empty.
pub fn factor(n: u128) -> BTreeMap<u128, u32> {
    let mut out = BTreeMap::new();
    assert!(n > 0, "cannot factor zero");
    let mut n = n;
    let mut p = 2u128;
    while p < 1 << 12 && p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_brent(m);
        stack.push(d);
        stack.push(m / d);
    }
    out
}

/// Exact order of an element of a group of order `group_order`, given a predicate
/// `is_identity_after(k)` that tests whether the k-th power/multiple is the identity.
pub fn order_by_stripping(
    group_order: u128,
    factors: &BTreeMap<u128, u32>,
    mut is_identity_after: impl FnMut(u128) -> bool,
) -> u128 {
    let mut order = group_order;
    for (&p, &e) in factors {
        for _ in 0..e {
            if order.is_multiple_of(p) && is_identity_after(order / p) {
                order /= p;
            } else {
                break;
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_and_mobius() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn factors_mersenne_and_fermat_like() {
        let f = factor((1u128 << 64) - 1);
        let expect: BTreeMap<u128, u32> =
            [(3, 1), (5, 1), (17, 1), (257, 1), (641, 1), (65537, 1), (6700417, 1)]
                .into_iter()
                .collect();
        assert_eq!(f, expect);
        let n = (1u128 << 84) + 1;
        let f = factor(n);
        let back: u128 = f.iter().map(|(p, e)| p.pow(*e)).product();
        assert_eq!(back, n);
        assert!(f.keys().all(|&p| is_prime(p)));
    }

    #[test]
    fn wagstaff_127_is_prime() {
        let n = ((1u128 << 127) + 1) / 3;
        assert!(is_prime(n));
        assert_eq!(factor((1u128 << 127) + 1).len(), 2);
    }

    #[test]
    fn two_adic_valuation() {
        assert_eq!(v2(0), None);
        assert_eq!(v2(4), Some(2));
        assert_eq!(v2(-12), Some(2));
    }
}
