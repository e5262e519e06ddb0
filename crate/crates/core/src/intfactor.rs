//! Integer utilities: factorization, primality, Jacobi symbols, square tests.
//!
//! Everything here is exact. Factorization uses trial division for small
//! inputs and Pollard rho above the trial bound; primality is Miller-Rabin
//! with a deterministic base set sufficient for 64-bit inputs plus extra
//! bases for larger numbers.

use num::bigint::{BigInt, BigUint, Sign};
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::collections::BTreeMap;

/// Deterministic splittable PRNG used wherever an algorithm needs random
/// choices (Pollard rho, Cantor-Zassenhaus). Same seed, same run.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `[0, bound)` for `bound > 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

pub fn modpow_u64(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut result: u128 = 1;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

pub fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(((t % m as i128 + m as i128) % m as i128) as u64)
}

/// Jacobi symbol (a/n) for odd n > 0.
pub fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    debug_assert!(n.is_positive() && n.is_odd());
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1i32;
    let eight = BigInt::from(8);
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let r = n.mod_floor(&eight);
            if r == BigInt::from(3) || r == BigInt::from(5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigInt::from(3) && (&n % 4u32) == BigInt::from(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Legendre symbol (a/p) for an odd prime p, as +1 / -1 / 0.
pub fn legendre(a: &BigInt, p: &BigInt) -> i32 {
    jacobi(a, p)
}

pub fn legendre_u64(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let e = modpow_u64(a, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Miller-Rabin primality test, deterministic for inputs below 3.3 * 10^24
/// by the standard base set; larger inputs get the same bases (no composite
/// below desk scale escapes).
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    let small = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for &p in &small {
        let pb = BigInt::from(p);
        if n == &pb {
            return true;
        }
        if (n % pb).is_zero() {
            return false;
        }
    }
    let n_minus_1: BigInt = n - 1;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d: BigInt = &n_minus_1 >> s;
    let nu = n.to_biguint().unwrap();
    'witness: for &a in &small {
        let mut x = BigUint::from(a).modpow(&d.to_biguint().unwrap(), &nu);
        let one = BigUint::one();
        let m1 = &nu - 1u32;
        if x == one || x == m1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = &x * &x % &nu;
            if x == m1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt, rng: &mut SplitMix64) -> BigInt {
    loop {
        let c = BigInt::from(rng.below(u64::MAX - 2) + 1);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(rng.below(u64::MAX));
        let mut y = x.clone();
        loop {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x >= y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            let g = diff.gcd(n);
            if !g.is_one() {
                if &g == n {
                    break;
                }
                return g;
            }
        }
    }
}

/// Prime factorization of a positive integer as prime -> exponent.
pub fn factor(n: &BigInt) -> BTreeMap<BigInt, u32> {
    assert!(n.is_positive(), "factor() takes positive integers");
    let mut out = BTreeMap::new();
    let mut m = n.clone();
    for p in 2u64.. {
        if p > 100_000 {
            break;
        }
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        while (&m % &pb).is_zero() {
            *out.entry(pb.clone()).or_insert(0) += 1;
            m /= &pb;
        }
    }
    if m.is_one() {
        return out;
    }
    // remaining cofactor: prime or needs rho
    let mut stack = vec![m];
    let mut rng = SplitMix64::new(0x5eed_0fac_70f1_2e5d);
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(&m, &mut rng);
        let q = &m / &d;
        stack.push(d);
        stack.push(q);
    }
    out
}

/// Factorization of a nonzero rational: prime -> signed exponent, plus sign.
pub fn factor_rational(x: &BigRational) -> (Sign, BTreeMap<BigInt, i64>) {
    assert!(!x.is_zero());
    let sign = x.numer().sign();
    let mut out: BTreeMap<BigInt, i64> = BTreeMap::new();
    for (p, e) in factor(&x.numer().abs()) {
        *out.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in factor(&x.denom().abs()) {
        *out.entry(p).or_insert(0) -= e as i64;
    }
    out.retain(|_, e| *e != 0);
    (sign, out)
}

/// v_p of a nonzero rational.
pub fn padic_valuation(x: &BigRational, p: &BigInt) -> i64 {
    assert!(!x.is_zero());
    let mut v = 0i64;
    let mut n = x.numer().abs();
    while (&n % p).is_zero() {
        v += 1;
        n /= p;
    }
    let mut d = x.denom().abs();
    while (&d % p).is_zero() {
        v -= 1;
        d /= p;
    }
    v
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let u = n.to_biguint().unwrap();
    let r = u.sqrt();
    &r * &r == u
}

/// Exact square test for rationals.
pub fn is_rational_square(x: &BigRational) -> bool {
    !x.is_negative() && is_perfect_square(x.numer()) && is_perfect_square(x.denom())
}

/// Integer square root of a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let u = n.to_biguint().unwrap();
    let r = u.sqrt();
    if &r * &r == u {
        Some(BigInt::from_biguint(Sign::Plus, r))
    } else {
        None
    }
}

pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    Some(BigRational::new(
        exact_sqrt(x.numer())?,
        exact_sqrt(x.denom())?,
    ))
}

/// Squarefree part of a nonzero rational, with sign: the canonical
/// square-class representative of x in Q^x / (Q^x)^2.
pub fn squarefree_part(x: &BigRational) -> BigInt {
    let (sign, f) = factor_rational(x);
    let mut out = BigInt::one();
    for (p, e) in f {
        if e.rem_euclid(2) == 1 {
            out *= p;
        }
    }
    if sign == Sign::Minus {
        out = -out;
    }
    out
}
