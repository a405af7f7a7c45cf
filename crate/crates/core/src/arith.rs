//! Small integer helpers: gcd, modular powers, primality, primitive roots,
//! factorization and binomials modulo a prime.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Non-negative residue of `a` modulo `m`.
pub fn modulo(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let e = (a as i64).extended_gcd(&(m as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(modulo(e.x, m))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).into_iter().fold(n, |acc, q| acc / q * (q - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    debug_assert_eq!(gcd(a, m), 1);
    let phi = euler_phi(m);
    divisors(phi).into_iter().find(|&k| mod_pow(a, k, m) == 1 % m).unwrap_or(phi)
}

/// Smallest positive integer generating the multiplicative group of F_p.
pub fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p).find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1)).expect("a prime has a primitive root")
}

/// A prime p such that (p - 1) / 2 is also prime.
pub fn is_safe_prime(p: u64) -> bool {
    p >= 5 && is_prime(p) && is_prime((p - 1) / 2)
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod_prime(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        acc = acc * small_binomial_mod(ni, ki, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn small_binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * mod_inv(den, p).expect("k < p") % p
}

/// Exact binomial coefficient (panics on u64 overflow in debug builds).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Units of Z/dZ in increasing order.
pub fn units(d: u64) -> Vec<u64> {
    (1..d.max(2)).filter(|&x| gcd(x, d) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots_are_smallest() {
        assert_eq!(smallest_primitive_root(7), 3);
        assert_eq!(smallest_primitive_root(11), 2);
        assert_eq!(smallest_primitive_root(13), 2);
        assert_eq!(smallest_primitive_root(37), 2);
        assert_eq!(smallest_primitive_root(73), 5);
        assert_eq!(smallest_primitive_root(109), 6);
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let g = smallest_primitive_root(p);
            assert_eq!(multiplicative_order(g, p), p - 1);
        }
    }

    #[test]
    fn lucas_matches_exact_binomial() {
        for p in [3u64, 5, 7, 11] {
            for n in 0..40 {
                for k in 0..=n {
                    assert_eq!(binomial_mod_prime(n, k, p), binomial(n, k) % p, "C({n},{k}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn safe_primes() {
        let safe: Vec<u64> = (3..60).filter(|&p| is_safe_prime(p)).collect();
        assert_eq!(safe, vec![5, 7, 11, 23, 47, 59]);
    }

    #[test]
    fn phi_and_inverse() {
        assert_eq!(euler_phi(930), 240);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
    }
}
