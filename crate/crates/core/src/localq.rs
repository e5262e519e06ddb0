//! Local analysis over Q: square classes in Q_p and R, Hilbert symbols, and
//! the classical isotropy criteria for small-rank forms over Q_p.
//!
//! Completions are never materialized; everything is computed from exact
//! rational data (valuations, unit parts mod p, mod 8, signs).

use crate::intfactor::{legendre_u64, mod_inverse_u64, padic_valuation};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, Signed, Zero};
use std::collections::BTreeSet;

/// A place of Q used for local computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QPlace {
    Finite(u64),
    Real,
}

impl std::fmt::Display for QPlace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QPlace::Finite(p) => write!(f, "{p}"),
            QPlace::Real => write!(f, "oo"),
        }
    }
}

/// Strip all powers of p from x.
fn unit_part(x: &BigRational, p: u64) -> BigRational {
    let pb = BigInt::from(p);
    let v = padic_valuation(x, &pb);
    let pow = BigRational::from(pb.pow(v.unsigned_abs() as u32));
    if v >= 0 {
        x / pow
    } else {
        x * pow
    }
}

fn rat_unit_mod(x: &BigRational, p: u64) -> u64 {
    let unit = unit_part(x, p);
    let pb = BigInt::from(p);
    let n = unit
        .numer()
        .mod_floor(&pb)
        .to_u64_digits()
        .1
        .first()
        .copied()
        .unwrap_or(0);
    let d = unit
        .denom()
        .mod_floor(&pb)
        .to_u64_digits()
        .1
        .first()
        .copied()
        .unwrap_or(0);
    (n as u128 * mod_inverse_u64(d, p).expect("unit denominator") as u128 % p as u128) as u64
}

/// Odd unit part of x at 2, reduced mod `modulus` (4 or 8).
fn odd_unit_mod(x: &BigRational, modulus: u64) -> u64 {
    let unit = unit_part(x, 2);
    let mb = BigInt::from(modulus);
    let n = unit
        .numer()
        .mod_floor(&mb)
        .to_u64_digits()
        .1
        .first()
        .copied()
        .unwrap_or(0);
    let d = unit
        .denom()
        .mod_floor(&mb)
        .to_u64_digits()
        .1
        .first()
        .copied()
        .unwrap_or(0);
    (n as u128 * mod_inverse_u64(d, modulus).expect("odd denominator") as u128 % modulus as u128)
        as u64
}

/// epsilon(u) = (u-1)/2 mod 2 for the odd unit part.
fn eps2(x: &BigRational) -> u32 {
    match odd_unit_mod(x, 4) {
        1 => 0,
        3 => 1,
        _ => unreachable!("odd unit mod 4"),
    }
}

/// omega(u) = (u^2-1)/8 mod 2 for the odd unit part.
fn omega2(x: &BigRational) -> u32 {
    match odd_unit_mod(x, 8) {
        1 | 7 => 0,
        3 | 5 => 1,
        _ => unreachable!("odd unit mod 8"),
    }
}

/// Whether a nonzero rational is a square in the completion at `place`.
pub fn is_square_local(x: &BigRational, place: QPlace) -> bool {
    assert!(!x.is_zero());
    match place {
        QPlace::Real => x.is_positive(),
        QPlace::Finite(2) => {
            let v = padic_valuation(x, &BigInt::from(2));
            v % 2 == 0 && odd_unit_mod(x, 8) == 1
        }
        QPlace::Finite(p) => {
            let v = padic_valuation(x, &BigInt::from(p));
            v % 2 == 0 && legendre_u64(rat_unit_mod(x, p), p) == 1
        }
    }
}

/// The Hilbert symbol (a, b)_v over Q_v, +1 or -1.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: QPlace) -> i32 {
    assert!(!a.is_zero() && !b.is_zero());
    match place {
        QPlace::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        QPlace::Finite(2) => {
            let two = BigInt::from(2);
            let alpha = padic_valuation(a, &two).rem_euclid(2) as u32;
            let beta = padic_valuation(b, &two).rem_euclid(2) as u32;
            let e = eps2(a) * eps2(b) + alpha * omega2(b) + beta * omega2(a);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        QPlace::Finite(p) => {
            let pb = BigInt::from(p);
            let alpha = padic_valuation(a, &pb).rem_euclid(2) as u32;
            let beta = padic_valuation(b, &pb).rem_euclid(2) as u32;
            let mut s = 1i32;
            if alpha * beta == 1 && (p - 1) / 2 % 2 == 1 {
                s = -s;
            }
            if beta == 1 {
                s *= legendre_u64(rat_unit_mod(a, p), p);
            }
            if alpha == 1 {
                s *= legendre_u64(rat_unit_mod(b, p), p);
            }
            s
        }
    }
}

/// The finite set of places where any local invariant of data built from
/// `xs` can be nontrivial: 2, the real place, and odd primes dividing a
/// numerator or denominator.
pub fn relevant_places(xs: &[BigRational]) -> Vec<QPlace> {
    let mut primes: BTreeSet<u64> = BTreeSet::new();
    primes.insert(2);
    for x in xs {
        if x.is_zero() {
            continue;
        }
        for (p, _) in crate::intfactor::factor(&x.numer().abs()) {
            primes.insert(p.to_u64_digits().1.first().copied().unwrap_or(0));
        }
        for (p, _) in crate::intfactor::factor(&x.denom().abs()) {
            primes.insert(p.to_u64_digits().1.first().copied().unwrap_or(0));
        }
    }
    let mut out: Vec<QPlace> = primes.into_iter().map(QPlace::Finite).collect();
    out.push(QPlace::Real);
    out
}

/// Isotropy of a form over Q_p (p finite) from its local invariants:
/// dimension, determinant (product of entries), and the Hasse symbol
/// prod_{i<j} (a_i, a_j)_p. The real place goes through the signature.
pub fn isotropic_qp(dim: usize, det: &BigRational, hasse: i32, place: QPlace) -> bool {
    assert!(
        matches!(place, QPlace::Finite(_)),
        "use the signature for the real place"
    );
    match dim {
        0 | 1 => false,
        2 => is_square_local(&-det.clone(), place),
        3 => {
            let md = -det.clone();
            hilbert_symbol(&BigRational::from(BigInt::from(-1)), &md, place) == hasse
        }
        4 => {
            let m1 = BigRational::from(BigInt::from(-1));
            !(is_square_local(det, place) && hasse == -hilbert_symbol(&m1, &m1, place))
        }
        _ => true,
    }
}
