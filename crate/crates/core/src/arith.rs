//! Integer helpers: primes, factorization, square classes, residues mod p.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_prime::nt_funcs;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn is_prime(n: u64) -> bool {
    nt_funcs::is_prime64(n)
}

/// All primes `p <= bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    nt_funcs::primes(bound + 1)
        .into_iter()
        .filter(|&p| p <= bound)
        .collect()
}

/// Distinct prime factors of `|n|`, ascending. Empty for 0 and ±1.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let m = n.magnitude();
    if m.is_zero() || m.is_one() {
        return Vec::new();
    }
    nt_funcs::factorize(m.clone())
        .into_keys()
        .map(|p| BigInt::from_biguint(Sign::Plus, p))
        .collect()
}

/// Small primes (fitting in u64) dividing numerator or denominator of `q`.
pub fn rational_primes(q: &BigRational) -> Vec<u64> {
    let mut out: Vec<u64> = prime_factors(q.numer())
        .into_iter()
        .chain(prime_factors(q.denom()))
        .filter_map(|p| p.to_u64())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Writes `n = k^2 * d` with `d` square-free (sign carried by `d`), `k > 0`.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "square-free part of zero");
    let m = n.magnitude();
    let mut k = BigUint::one();
    let mut d = BigUint::one();
    if !m.is_one() {
        for (p, e) in nt_funcs::factorize(m.clone()) {
            k *= p.pow((e / 2) as u32);
            if e % 2 == 1 {
                d *= p;
            }
        }
    }
    let d = BigInt::from_biguint(if n.is_negative() { Sign::Minus } else { Sign::Plus }, d);
    (BigInt::from(k), d)
}

/// Square-free integer representative of the square class of a nonzero rational.
pub fn square_class(q: &BigRational) -> BigInt {
    let prod = q.numer() * q.denom();
    squarefree_decompose(&prod).1
}

/// Positive divisors of `|n|` (n nonzero), ascending.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    let m = n.magnitude();
    if m.is_one() {
        return divs;
    }
    for (p, e) in nt_funcs::factorize(m.clone()) {
        let p = BigInt::from(p);
        let mut next = Vec::with_capacity(divs.len() * (e + 1));
        for d in &divs {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk *= &p;
                next.push(pk.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

pub fn mod_u64(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits u64")
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Inverse of `a` mod prime `p`; `None` when `p | a`.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Reduction of a rational mod p, `None` when p divides the denominator.
pub fn rat_mod(q: &BigRational, p: u64) -> Option<u64> {
    let den = mod_u64(q.denom(), p);
    let inv = inv_mod(den, p)?;
    Some(mul_mod(mod_u64(q.numer(), p), inv, p))
}

/// Legendre symbol (a/p) for an odd prime p: 0, 1 or -1.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    debug_assert!(p > 2);
    let r = mod_u64(a, p);
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of a residue mod an odd prime (Tonelli-Shanks); `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(a, q, p), pow_mod(a, (q + 1) / 2, p));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}
