//! Quaternion-class and Witt-class deciders over quadratic number fields
//! Q(sqrt m).
//!
//! Local symbols at odd primes use the tame formula in the residue field
//! (F_p or F_{p^2} according to the splitting of p, read off from Legendre
//! symbols). When 2 is split in the field, the two dyadic completions are
//! isomorphic to Q_2 and the symbols are computed there through a 2-adic
//! approximation of sqrt(m); when there is a single dyadic place its symbol
//! is forced by reciprocity, so checking every other place suffices.

use crate::fields::Element;
use crate::intfactor::{factor, legendre_u64, mod_inverse_u64, modpow_u64, padic_valuation};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::collections::BTreeSet;

/// The field Q(sqrt m), m squarefree and not 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticField {
    pub m: BigInt,
}

/// A quadratic-field element as coordinates x + y sqrt(m).
pub type Coords = (BigRational, BigRational);

pub fn coords_of(e: &Element) -> Result<Coords> {
    match e {
        Element::Quad { a, b, .. } => Ok((a.clone(), b.clone())),
        Element::Rat(x) => Ok((x.clone(), BigRational::zero())),
        _ => Err(Error::FieldMismatch(
            "expected a quadratic-field element".into(),
        )),
    }
}

impl QuadraticField {
    pub fn new(m: BigInt) -> Result<Self> {
        if m.is_zero() || m.is_one() {
            return Err(Error::Degenerate("m must not be 0 or 1".into()));
        }
        for (_, e) in factor(&m.abs()) {
            if e >= 2 {
                return Err(Error::Degenerate("m must be squarefree".into()));
            }
        }
        Ok(QuadraticField { m })
    }

    pub fn from_element_field(e: &Element) -> Result<Self> {
        match e {
            Element::Quad { m, .. } => QuadraticField::new(m.clone()),
            _ => Err(Error::FieldMismatch("not a quadratic-field element".into())),
        }
    }

    fn is_real(&self) -> bool {
        self.m.is_positive()
    }

    /// Sign of x + y sqrt(m) under the real embedding sending sqrt(m) to the
    /// positive (plus_root) or negative root. Exact.
    pub fn sign_at(&self, (x, y): &Coords, plus_root: bool) -> i32 {
        assert!(self.is_real());
        let y = if plus_root { y.clone() } else { -y.clone() };
        if y.is_zero() {
            return if x.is_positive() { 1 } else { -1 };
        }
        if x.is_zero() {
            return if y.is_positive() { 1 } else { -1 };
        }
        let mq = BigRational::from(self.m.clone());
        let cmp = x * x - &mq * &y * &y; // sign(x^2 - m y^2) = sign(|x| - |y sqrt m|) * ...
        if y.is_positive() {
            if x.is_positive() {
                1
            } else {
                // x < 0 < y: positive iff y sqrt m > -x iff m y^2 > x^2
                if cmp.is_negative() {
                    1
                } else {
                    -1
                }
            }
        } else if x.is_negative() {
            -1
        } else {
            // y < 0 < x: positive iff x > |y| sqrt m iff x^2 > m y^2
            if cmp.is_positive() {
                1
            } else {
                -1
            }
        }
    }

    /// Local quaternion symbols of a sum of symbols, checked for global
    /// triviality: returns true iff sum_i (alpha_i, beta_i) = 0 in the
    /// 2-torsion of Br(Q(sqrt m)).
    pub fn symbol_sum_trivial(&self, pairs: &[(Element, Element)]) -> Result<bool> {
        let mut coords = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            if a.is_zero() || b.is_zero() {
                return Err(Error::ZeroSlot);
            }
            coords.push((coords_of(a)?, coords_of(b)?));
        }
        // real embeddings
        if self.is_real() {
            for plus in [true, false] {
                let mut loc = 1i32;
                for (a, b) in &coords {
                    if self.sign_at(a, plus) < 0 && self.sign_at(b, plus) < 0 {
                        loc = -loc;
                    }
                }
                if loc != 1 {
                    return Ok(false);
                }
            }
        }
        // odd finite places
        for p in self.relevant_odd_primes(&coords) {
            for loc in self.local_products_above_odd(p, &coords)? {
                if loc != 1 {
                    return Ok(false);
                }
            }
        }
        // dyadic places: two of them only when m = 1 mod 8; otherwise the
        // single dyadic symbol is the product of all the others (reciprocity),
        // which we have just checked to be 1.
        if self.m.mod_floor(&BigInt::from(8)) == BigInt::one() {
            for plus in [true, false] {
                let mut loc = 1i32;
                for (a, b) in &coords {
                    loc *= self.dyadic_symbol_split(a, b, plus)?;
                }
                if loc != 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Rational primes where some local symbol might be nontrivial.
    fn relevant_odd_primes(&self, coords: &[(Coords, Coords)]) -> BTreeSet<u64> {
        let mut primes = BTreeSet::new();
        let mut eat = |r: &BigRational| {
            if r.is_zero() {
                return;
            }
            for (p, _) in factor(&r.numer().abs()) {
                let p = p.to_u64_digits().1.first().copied().unwrap_or(0);
                if p > 2 {
                    primes.insert(p);
                }
            }
            for (p, _) in factor(&r.denom().abs()) {
                let p = p.to_u64_digits().1.first().copied().unwrap_or(0);
                if p > 2 {
                    primes.insert(p);
                }
            }
        };
        for ((xa, ya), (xb, yb)) in coords {
            for r in [xa, ya, xb, yb] {
                eat(r);
            }
            // norms too: a split prime can show up only through the norm
            let na = self.norm(&(xa.clone(), ya.clone()));
            let nb = self.norm(&(xb.clone(), yb.clone()));
            eat(&na);
            eat(&nb);
        }
        for (p, _) in factor(&self.m.abs()) {
            let p = p.to_u64_digits().1.first().copied().unwrap_or(0);
            if p > 2 {
                primes.insert(p);
            }
        }
        primes
    }

    fn norm(&self, (x, y): &Coords) -> BigRational {
        let mq = BigRational::from(self.m.clone());
        x * x - &mq * y * y
    }

    /// Product over the given symbol list of the local symbols at each place
    /// above the odd prime p.
    fn local_products_above_odd(&self, p: u64, coords: &[(Coords, Coords)]) -> Result<Vec<i32>> {
        let m_mod = self.m.mod_floor(&BigInt::from(p));
        let m_mod = m_mod.to_u64_digits().1.first().copied().unwrap_or(0);
        if m_mod == 0 {
            // ramified: residue field F_p, uniformizer sqrt(m)
            let mut loc = 1i32;
            for (a, b) in coords {
                loc *= self.tame_symbol_ramified(p, a, b)?;
            }
            Ok(vec![loc])
        } else if legendre_u64(m_mod, p) == 1 {
            // split: two places, one per square root of m mod p
            let r = sqrt_mod_p(m_mod, p).expect("quadratic residue");
            let mut out = vec![];
            for root in [r, p - r] {
                let mut loc = 1i32;
                for (a, b) in coords {
                    let (va, ua) = self.split_val_unit_odd(p, root, a)?;
                    let (vb, ub) = self.split_val_unit_odd(p, root, b)?;
                    loc *= tame_from_data(p, va, ua, vb, ub);
                }
                out.push(loc);
            }
            Ok(out)
        } else {
            // inert: residue field F_{p^2} = F_p[s]/(s^2 - m)
            let mut loc = 1i32;
            for (a, b) in coords {
                loc *= self.tame_symbol_inert(p, m_mod, a, b)?;
            }
            Ok(vec![loc])
        }
    }

    /// v and unit residue mod p of x + y sqrt(m) under the embedding sending
    /// sqrt(m) to the given root mod p (Hensel-lifted as needed).
    fn split_val_unit_odd(&self, p: u64, root: u64, (x, y): &Coords) -> Result<(i64, u64)> {
        let d = x.denom().lcm(y.denom());
        let xn = x.numer() * (&d / x.denom());
        let yn = y.numer() * (&d / y.denom());
        let pb = BigInt::from(p);
        let vd = if d.is_one() {
            0
        } else {
            padic_valuation(&BigRational::from(d.clone()), &pb)
        };
        let ud = big_mod_u64(&(&d / pb.pow(vd as u32)), p);
        let mut prec: u32 = 24;
        loop {
            if prec > 1 << 14 {
                return Err(Error::Internal("p-adic precision runaway".into()));
            }
            let pk = pb.pow(prec);
            let r = lift_sqrt_odd(&self.m, p, root, prec);
            let z = (&xn + &yn * &r).mod_floor(&pk);
            if z.is_zero() {
                prec *= 2;
                continue;
            }
            let mut vz: u32 = 0;
            let mut zz = z.clone();
            while (&zz % &pb).is_zero() {
                vz += 1;
                zz /= &pb;
            }
            if vz + 2 > prec {
                prec *= 2;
                continue;
            }
            let uz = big_mod_u64(&zz, p);
            let unit = (uz as u128 * mod_inverse_u64(ud, p).unwrap() as u128 % p as u128) as u64;
            return Ok((vz as i64 - vd, unit));
        }
    }

    fn tame_symbol_ramified(&self, p: u64, a: &Coords, b: &Coords) -> Result<i32> {
        let (va, ua) = self.ramified_val_unit(p, a)?;
        let (vb, ub) = self.ramified_val_unit(p, b)?;
        Ok(tame_from_data(p, va, ua, vb, ub))
    }

    /// v_P and unit residue in F_p at the ramified prime above p | m.
    fn ramified_val_unit(&self, p: u64, c: &Coords) -> Result<(i64, u64)> {
        let pb = BigInt::from(p);
        let (x, y) = c;
        // v_P(x + y sqrt m) = min(2 v_p(x), 2 v_p(y) + 1); parities differ so
        // the min is strict
        let vx = if x.is_zero() {
            i64::MAX
        } else {
            2 * padic_valuation(x, &pb)
        };
        let vy = if y.is_zero() {
            i64::MAX
        } else {
            2 * padic_valuation(y, &pb) + 1
        };
        let v = vx.min(vy);
        // unit part: divide by sqrt(m)^v; sqrt(m)^2 = m
        let (mut ux, mut uy) = (x.clone(), y.clone());
        let mq = BigRational::from(self.m.clone());
        let mut k = v;
        while k >= 2 {
            ux /= &mq;
            uy /= &mq;
            k -= 2;
        }
        while k <= -2 {
            ux *= &mq;
            uy *= &mq;
            k += 2;
        }
        if k == 1 {
            // divide by sqrt m: (x + y sqrt m)/sqrt m = y + (x/m) sqrt m;
            // only the rational part survives reduction mod sqrt(m)
            ux = uy.clone();
        } else if k == -1 {
            // multiply by sqrt m: (x + y sqrt m) sqrt m = m y + x sqrt m
            ux = &mq * &uy;
        }
        // residue: sqrt m = 0 in F_p, so image is ux mod p (a p-unit)
        debug_assert_eq!(padic_valuation(&ux, &pb), 0);
        let n = big_mod_u64(&ux.numer().mod_floor(&pb), p);
        let d = big_mod_u64(&ux.denom().mod_floor(&pb), p);
        let u = (n as u128 * mod_inverse_u64(d, p).unwrap() as u128 % p as u128) as u64;
        Ok((v, u))
    }

    fn tame_symbol_inert(&self, p: u64, m_mod: u64, a: &Coords, b: &Coords) -> Result<i32> {
        let (va, ua) = self.inert_val_unit(p, a)?;
        let (vb, ub) = self.inert_val_unit(p, b)?;
        // quadratic character of F_{p^2}: chi(u) = u^((p^2-1)/2); -1 is
        // always a square there
        let q_minus_1_half = ((p as u128 * p as u128) - 1) / 2;
        let chi = |u: &(u64, u64)| -> i32 {
            // u = u.0 + u.1 s with s^2 = m
            let f = crate::fppoly::FpPoly::new(p, vec![u.0, u.1]);
            let modulus = crate::fppoly::FpPoly::new(p, vec![(p - m_mod % p) % p, 0, 1]);
            let r = f.powmod_u128(q_minus_1_half, &modulus);
            if r.is_constant() && r.leading() == 1 {
                1
            } else {
                -1
            }
        };
        let mut s = 1i32;
        // chi(-1) = 1 in F_{p^2}, so the (-1)^{ab} factor never contributes
        if vb.rem_euclid(2) == 1 {
            s *= chi(&ua);
        }
        if va.rem_euclid(2) == 1 {
            s *= chi(&ub);
        }
        Ok(s)
    }

    /// v_P and unit residue in F_{p^2} at the inert prime p.
    fn inert_val_unit(&self, p: u64, (x, y): &Coords) -> Result<(i64, (u64, u64))> {
        let pb = BigInt::from(p);
        let vx = if x.is_zero() {
            i64::MAX
        } else {
            padic_valuation(x, &pb)
        };
        let vy = if y.is_zero() {
            i64::MAX
        } else {
            padic_valuation(y, &pb)
        };
        let v = vx.min(vy);
        let scale = BigRational::from(pb.clone()).pow(v as i32);
        let ux = x / &scale;
        let uy = y / &scale;
        let red = |r: &BigRational| -> u64 {
            let n = big_mod_u64(&r.numer().mod_floor(&pb), p);
            let d = big_mod_u64(&r.denom().mod_floor(&pb), p);
            (n as u128 * mod_inverse_u64(d, p).unwrap() as u128 % p as u128) as u64
        };
        Ok((v, (red(&ux), red(&uy))))
    }

    /// Dyadic symbol when 2 splits (m = 1 mod 8): embed into Q_2 via a 2-adic
    /// square root of m and use the standard Q_2 formula.
    fn dyadic_symbol_split(&self, a: &Coords, b: &Coords, plus: bool) -> Result<i32> {
        let (va, ua8) = self.split_val_unit_two(a, plus)?;
        let (vb, ub8) = self.split_val_unit_two(b, plus)?;
        let eps = |u: u64| -> u32 {
            match u % 4 {
                1 => 0,
                3 => 1,
                _ => unreachable!(),
            }
        };
        let omega = |u: u64| -> u32 {
            match u % 8 {
                1 | 7 => 0,
                3 | 5 => 1,
                _ => unreachable!(),
            }
        };
        let alpha = va.rem_euclid(2) as u32;
        let beta = vb.rem_euclid(2) as u32;
        let e = eps(ua8) * eps(ub8) + alpha * omega(ub8) + beta * omega(ua8);
        Ok(if e % 2 == 0 { 1 } else { -1 })
    }

    /// v_2 and odd unit mod 8 of x + y sqrt(m) in Q_2 (m = 1 mod 8).
    fn split_val_unit_two(&self, (x, y): &Coords, plus: bool) -> Result<(i64, u64)> {
        let two = BigInt::from(2);
        let d = x.denom().lcm(y.denom());
        let xn = x.numer() * (&d / x.denom());
        let yn = y.numer() * (&d / y.denom());
        let vd = if d.is_one() {
            0
        } else {
            padic_valuation(&BigRational::from(d.clone()), &two)
        };
        let ud = big_mod_u64(&(&d / two.pow(vd as u32)).mod_floor(&BigInt::from(8)), 8);
        let mut prec: u32 = 24;
        loop {
            if prec > 1 << 14 {
                return Err(Error::Internal("2-adic precision runaway".into()));
            }
            let pk = BigInt::one() << prec;
            let mut r = lift_sqrt_two(&self.m, prec);
            if !plus {
                r = (&pk - &r).mod_floor(&pk);
            }
            let z = (&xn + &yn * &r).mod_floor(&pk);
            if z.is_zero() {
                prec *= 2;
                continue;
            }
            let vz = z.trailing_zeros().unwrap_or(0) as u32;
            if vz + 4 > prec {
                prec *= 2;
                continue;
            }
            let zz: BigInt = &z >> vz;
            let uz = big_mod_u64(&zz.mod_floor(&BigInt::from(8)), 8);
            let unit = uz * mod_inverse_u64(ud, 8).unwrap() % 8;
            return Ok((vz as i64 - vd, unit));
        }
    }

    /// Witt-class triviality of a diagonal form over Q(sqrt m): even
    /// dimension, trivial signed discriminant, hyperbolic Witt/Clifford
    /// class, zero signatures at the real embeddings.
    pub fn witt_trivial(&self, entries: &[Element]) -> Result<bool> {
        if entries.iter().any(|e| e.is_zero()) {
            return Err(Error::ZeroElement);
        }
        let n = entries.len();
        if n == 0 {
            return Ok(true);
        }
        if n % 2 != 0 {
            return Ok(false);
        }
        let field = crate::fields::FieldDesc::Quadratic { m: self.m.clone() };
        // signed discriminant (-1)^{n(n-1)/2} * prod entries must be a square
        let mut disc = field.one();
        for e in entries {
            disc = disc.mul(e);
        }
        if (n * (n - 1) / 2) % 2 == 1 {
            disc = disc.neg();
        }
        if !crate::fields::is_square(&field, &disc)? {
            return Ok(false);
        }
        // real signatures must vanish
        if self.is_real() {
            for plus in [true, false] {
                let mut sgn = 0i64;
                for e in entries {
                    sgn += self.sign_at(&coords_of(e)?, plus) as i64;
                }
                if sgn != 0 {
                    return Ok(false);
                }
            }
        }
        // Hasse difference against the hyperbolic form of the same dimension:
        // s(q) * s(H^{n/2}) with s(H^k) = (-1,-1)^{k(k-1)/2}
        let mut pairs: Vec<(Element, Element)> = vec![];
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((entries[i].clone(), entries[j].clone()));
            }
        }
        let k = n / 2;
        if (k * (k - 1) / 2) % 2 == 1 {
            let minus_one = field.integer(-1);
            pairs.push((minus_one.clone(), minus_one));
        }
        self.symbol_sum_trivial(&pairs)
    }
}

fn big_mod_u64(n: &BigInt, modulus: u64) -> u64 {
    n.mod_floor(&BigInt::from(modulus))
        .to_u64_digits()
        .1
        .first()
        .copied()
        .unwrap_or(0)
}

/// Tame symbol value from (valuation, unit-residue) data in F_p.
fn tame_from_data(p: u64, va: i64, ua: u64, vb: i64, ub: u64) -> i32 {
    let a = va.rem_euclid(2);
    let b = vb.rem_euclid(2);
    let mut s = 1i32;
    if a == 1 && b == 1 && (p - 1) / 2 % 2 == 1 {
        s = -s;
    }
    if b == 1 {
        s *= legendre_u64(ua, p);
    }
    if a == 1 {
        s *= legendre_u64(ub, p);
    }
    s
}

/// Square root mod an odd prime (Tonelli-Shanks), None for nonresidues.
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre_u64(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(modpow_u64(a, (p + 1) / 4, p));
    }
    // Tonelli-Shanks
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre_u64(z, p) == -1).unwrap();
    let mut m = s;
    let mut c = modpow_u64(z, q, p);
    let mut t = modpow_u64(a, q, p);
    let mut r = modpow_u64(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = (t2 as u128 * t2 as u128 % p as u128) as u64;
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = (b as u128 * b as u128 % p as u128) as u64;
        }
        m = i;
        c = (b as u128 * b as u128 % p as u128) as u64;
        t = (t as u128 * c as u128 % p as u128) as u64;
        r = (r as u128 * b as u128 % p as u128) as u64;
    }
    Some(r)
}

/// Hensel lift of a square root of m mod p to mod p^prec (p odd).
fn lift_sqrt_odd(m: &BigInt, p: u64, root_mod_p: u64, prec: u32) -> BigInt {
    let pb = BigInt::from(p);
    let target = pb.pow(prec);
    let mut r = BigInt::from(root_mod_p);
    let mut k = 1u32;
    while k < prec {
        k = (2 * k).min(prec);
        let modulus = pb.pow(k);
        // Newton: r <- r - (r^2 - m) / (2r)
        let f = (&r * &r - m).mod_floor(&modulus);
        let two_r_inv =
            mod_inverse_big(&(BigInt::from(2) * &r), &modulus).expect("2r invertible mod odd p^k");
        r = (&r - f * two_r_inv).mod_floor(&modulus);
    }
    r.mod_floor(&target)
}

/// Lift of the square root of m = 1 mod 8 to mod 2^prec, bit by bit, with
/// r = 1 mod 4 normalization.
fn lift_sqrt_two(m: &BigInt, prec: u32) -> BigInt {
    let mut r = BigInt::one();
    for k in 3..prec {
        let modulus = BigInt::one() << (k + 1);
        let sq = (&r * &r).mod_floor(&modulus);
        let mm = m.mod_floor(&modulus);
        if sq != mm {
            r += BigInt::one() << (k - 1);
        }
    }
    r.mod_floor(&(BigInt::one() << prec))
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDesc;

    fn quad(m: i64, a: i64, b: i64) -> Element {
        Element::Quad {
            m: BigInt::from(m),
            a: BigRational::from(BigInt::from(a)),
            b: BigRational::from(BigInt::from(b)),
        }
    }

    #[test]
    fn sqrt_mod_p_works() {
        for p in [3u64, 5, 7, 13, 17, 41, 97] {
            for a in 1..p {
                if legendre_u64(a, p) == 1 {
                    let r = sqrt_mod_p(a, p).unwrap();
                    assert_eq!(r * r % p, a, "p={p} a={a}");
                } else {
                    assert!(sqrt_mod_p(a, p).is_none());
                }
            }
        }
    }

    #[test]
    fn two_adic_sqrt_lift() {
        for m in [17i64, 33, 41, 73, -7, -15] {
            let mb = BigInt::from(m);
            let r = lift_sqrt_two(&mb, 20);
            let modulus = BigInt::one() << 20u32;
            assert_eq!(
                (&r * &r).mod_floor(&modulus),
                mb.mod_floor(&modulus),
                "m={m}"
            );
        }
    }

    #[test]
    fn hamilton_quaternions_stay_division_over_gaussian_rationals() {
        // (-1,-1) over Q(i): -1 is a square there, so the algebra splits.
        let k = QuadraticField::new(BigInt::from(-1)).unwrap();
        let pairs = vec![(quad(-1, -1, 0), quad(-1, -1, 0))];
        assert!(k.symbol_sum_trivial(&pairs).unwrap());
        // (-1,-1) over Q(sqrt 2) stays nonsplit: the real embeddings see it.
        let k2 = QuadraticField::new(BigInt::from(2)).unwrap();
        let pairs = vec![(quad(2, -1, 0), quad(2, -1, 0))];
        assert!(!k2.symbol_sum_trivial(&pairs).unwrap());
        // (-1,-1) over Q(sqrt -2): totally imaginary, and -2 = i^2 * 2 ...
        // decide by the machinery, cross-check: norm form <1,1,1,1> over
        // Q(sqrt -2) is isotropic iff -1 is a sum of two squares there:
        // (sqrt-2)^2 + 1^2 = -1, so it splits.
        let k3 = QuadraticField::new(BigInt::from(-2)).unwrap();
        let pairs = vec![(quad(-2, -1, 0), quad(-2, -1, 0))];
        assert!(k3.symbol_sum_trivial(&pairs).unwrap());
    }

    #[test]
    fn split_prime_symbols_match_q2_and_q() {
        // In Q(sqrt 17), 2 splits; (-1,-1) over Q(sqrt 17): real embeddings
        // both see (-1,-1) = -1... so nontrivial.
        let k = QuadraticField::new(BigInt::from(17)).unwrap();
        let pairs = vec![(quad(17, -1, 0), quad(17, -1, 0))];
        assert!(!k.symbol_sum_trivial(&pairs).unwrap());
        // (17, 2) over Q: split at both dyadic places of Q(sqrt 17)?
        // (sqrt17, 2): at the dyadic places v(sqrt 17) = 0... just check the
        // machinery accepts elements with sqrt parts
        let pairs = vec![(quad(17, 0, 1), quad(17, 2, 0))];
        let _ = k.symbol_sum_trivial(&pairs).unwrap();
    }

    #[test]
    fn rational_symbols_embed_correctly() {
        // For rational entries a, b: (a,b) splits over Q(sqrt m) iff the
        // Q-quaternion (a,b) is split by Q(sqrt m), iff (a,b) = 1 at every
        // place of Q that does not split... oracle: (a,b)_{Q(sqrt m)} is
        // trivial iff for every Q-place v where (a,b)_v = -1, m is NOT a
        // square in Q_v (classical: quadratic splitting fields of quaternion
        // algebras). Cross-check on a grid.
        use crate::localq::{hilbert_symbol, is_square_local, relevant_places, QPlace};
        let q = |n: i64| BigRational::from(BigInt::from(n));
        for m in [-1i64, 2, -2, 3, 17, -7] {
            let k = QuadraticField::new(BigInt::from(m)).unwrap();
            for (a, b) in [(-1, -1), (2, 3), (-1, 3), (5, -2), (3, 7), (-1, -7)] {
                let pairs = vec![(quad(m, a, 0), quad(m, b, 0))];
                let got = k.symbol_sum_trivial(&pairs).unwrap();
                let mut expected = true;
                let mut xs = vec![q(a), q(b), q(m)];
                xs.push(q(2));
                for v in relevant_places(&xs) {
                    if hilbert_symbol(&q(a), &q(b), v) == -1 {
                        // ramified Q-place: the extension kills it iff m is a
                        // nonsquare locally (then K_w is the quadratic ext)
                        if is_square_local(&q(m), v) {
                            expected = false;
                        }
                    }
                }
                assert_eq!(got, expected, "m={m} a={a} b={b}");
            }
        }
    }

    #[test]
    fn witt_trivial_over_gaussian_rationals() {
        // <1, 1> over Q(i): disc -1 is a square, no real places, Hasse
        // trivial: hyperbolic (indeed x^2 + y^2 = (x+iy)(x-iy) is isotropic).
        let k = QuadraticField::new(BigInt::from(-1)).unwrap();
        assert!(k.witt_trivial(&[quad(-1, 1, 0), quad(-1, 1, 0)]).unwrap());
        // <1, 1> over Q(sqrt 2): signature 2 at both real places: not trivial
        let k2 = QuadraticField::new(BigInt::from(2)).unwrap();
        assert!(!k2.witt_trivial(&[quad(2, 1, 0), quad(2, 1, 0)]).unwrap());
        // <1, -1> trivial everywhere
        assert!(k2.witt_trivial(&[quad(2, 1, 0), quad(2, -1, 0)]).unwrap());
        // <1, -sqrt2> over Q(sqrt 2): disc = -sqrt2 not a square: nontrivial
        assert!(!k2.witt_trivial(&[quad(2, 1, 0), quad(2, 0, -1)]).unwrap());
        // <sqrt2, -sqrt2> is hyperbolic
        assert!(k2.witt_trivial(&[quad(2, 0, 1), quad(2, 0, -1)]).unwrap());
        // odd dimension never trivial
        assert!(!k.witt_trivial(&[quad(-1, 1, 0)]).unwrap());
    }

    #[test]
    fn field_validation() {
        assert!(QuadraticField::new(BigInt::from(12)).is_err());
        assert!(QuadraticField::new(BigInt::from(1)).is_err());
        assert!(QuadraticField::new(BigInt::from(-1)).is_ok());
        let k = FieldDesc::Quadratic { m: BigInt::from(5) };
        let _ = k;
    }
}
