//! Dense univariate polynomials over F_p (p an odd prime, or 2 as an inert
//! data tag), with Euclidean arithmetic and full factorization into monic
//! irreducibles (squarefree + distinct-degree + Cantor-Zassenhaus).

use crate::intfactor::{mod_inverse_u64, SplitMix64};

/// Polynomial over F_p, coefficients `coeffs[i]` for t^i, no trailing zeros.
/// The zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    /// The monomial t.
    pub fn var(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn addmul(p: u64, a: u64, b: u64, c: u64) -> u64 {
        // a + b*c mod p, avoiding overflow
        ((a as u128 + b as u128 * c as u128) % p as u128) as u64
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + b) % self.p;
        }
        Self::new(self.p, out)
    }

    pub fn neg(&self) -> Self {
        let out = self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect();
        Self::new(self.p, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = Self::addmul(self.p, out[i + j], a, b);
            }
        }
        Self::new(self.p, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        let out = self
            .coeffs
            .iter()
            .map(|&a| (a as u128 * c as u128 % self.p as u128) as u64)
            .collect();
        Self::new(self.p, out)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = mod_inverse_u64(self.leading(), self.p).expect("prime modulus");
        self.scale(inv)
    }

    /// Euclidean division: (quotient, remainder).
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        debug_assert_eq!(self.p, divisor.p);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Self::zero(p), self.clone());
        }
        let lead_inv = mod_inverse_u64(divisor.leading(), p).expect("prime modulus");
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = (c as u128 * lead_inv as u128 % p as u128) as u64;
            quot[i - dd] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let sub = (q as u128 * dc as u128 % p as u128) as u64;
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + p - sub) % p;
            }
        }
        (Self::new(p, quot), Self::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.p);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (c as u128 * (i as u64 % self.p) as u128 % self.p as u128) as u64)
            .collect();
        Self::new(self.p, out)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = ((acc as u128 * x as u128 + c as u128) % p as u128) as u64;
        }
        acc
    }

    /// self^e mod m.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// t^(p^k) mod m, by repeated Frobenius.
    fn frobenius_power(&self, k: u32, m: &Self) -> Self {
        let mut acc = self.rem(m);
        for _ in 0..k {
            acc = acc.powmod(self.p, m);
        }
        acc
    }

    /// Take the p-th root of a polynomial whose derivative vanishes (so it is
    /// g(t^p) and over the prime field the root is obtained by compressing
    /// exponents, since a^(1/p) = a in F_p).
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| i % p == 0)
            .map(|(_, &c)| c)
            .collect();
        Self::new(self.p, out)
    }

    /// Squarefree decomposition of a monic polynomial: list of (factor,
    /// multiplicity) with factors monic, squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        assert!(!self.is_zero());
        let f = self.monic();
        if f.is_constant() {
            return vec![];
        }
        let d = f.derivative();
        if d.is_zero() {
            // f = g^p
            let root = f.pth_root();
            return root
                .squarefree_decomposition()
                .into_iter()
                .map(|(g, m)| (g, m * self.p as u32))
                .collect();
        }
        let mut out: Vec<(Self, u32)> = vec![];
        let mut c = f.gcd(&d);
        let mut w = f.divrem(&c).0;
        let mut i = 1u32;
        while !w.is_constant() {
            let y = w.gcd(&c);
            let fac = w.divrem(&y).0;
            if !fac.is_constant() {
                out.push((fac, i));
            }
            w = y.clone();
            c = c.divrem(&y).0;
            i += 1;
        }
        if !c.is_constant() {
            // remaining part is a p-th power
            for (g, m) in c.pth_root().squarefree_decomposition() {
                out.push((g, m * self.p as u32));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// (product of degree-d irreducibles, d).
    fn distinct_degree(&self) -> Vec<(Self, usize)> {
        let mut f = self.monic();
        let mut out = vec![];
        let x = Self::var(self.p);
        let mut h = x.clone();
        let mut d = 0usize;
        while f.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.frobenius_power(1, &f);
            let g = f.gcd(&h.sub(&x));
            if !g.is_constant() {
                out.push((g.clone(), d));
                f = f.divrem(&g).0;
                h = h.rem(&f);
            }
        }
        if !f.is_constant() {
            let deg = f.degree().unwrap();
            out.push((f, deg));
        }
        out
    }

    /// Cantor-Zassenhaus equal-degree splitting: factor a monic squarefree
    /// product of irreducibles all of degree d.
    fn equal_degree(&self, d: usize, rng: &mut SplitMix64) -> Vec<Self> {
        let n = self.degree().unwrap();
        if n == d {
            return vec![self.clone()];
        }
        let p = self.p;
        // exponent (p^d - 1)/2 as big number of u64 steps: p^d fits easily at
        // desk scale (d small); use u128 to be safe.
        let mut pd: u128 = 1;
        for _ in 0..d {
            pd *= p as u128;
        }
        let e = (pd - 1) / 2;
        loop {
            let deg_a = 1 + rng.below((n as u64).max(2) - 1) as usize;
            let mut coeffs = vec![0u64; deg_a + 1];
            for c in coeffs.iter_mut() {
                *c = rng.below(p);
            }
            let a = Self::new(p, coeffs);
            if a.is_constant() {
                continue;
            }
            let g = self.gcd(&a);
            if !g.is_constant() && g.degree() < self.degree() {
                let mut out = g.equal_degree(d, rng);
                out.extend(self.divrem(&g).0.equal_degree(d, rng));
                return out;
            }
            let b = a.powmod_u128(e, self);
            let b1 = b.sub(&Self::one(p));
            let g = self.gcd(&b1);
            if !g.is_constant() && g.degree() < self.degree() {
                let mut out = g.equal_degree(d, rng);
                out.extend(self.divrem(&g).0.equal_degree(d, rng));
                return out;
            }
        }
    }

    pub fn powmod_u128(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Full factorization: leading unit and monic irreducible factors with
    /// multiplicities, sorted by (degree, coefficients).
    pub fn factor(&self) -> (u64, Vec<(Self, u32)>) {
        assert!(!self.is_zero());
        let unit = self.leading();
        let monic = self.monic();
        let mut rng = SplitMix64::new(cz_seed(self));
        let mut out: Vec<(Self, u32)> = vec![];
        for (sqfree, mult) in monic.squarefree_decomposition() {
            for (prod, d) in sqfree.distinct_degree() {
                for irred in prod.equal_degree(d, &mut rng) {
                    out.push((irred.monic(), mult));
                }
            }
        }
        out.sort();
        (unit, out)
    }

    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            Some(n) => {
                // Rabin: t^(p^n) = t mod f, and t^(p^(n/q)) - t coprime to f
                // for every prime q | n.
                let x = Self::var(self.p);
                let f = self.monic();
                if x.frobenius_power(n as u32, &f) != x.rem(&f) {
                    return false;
                }
                let mut primes = vec![];
                let mut m = n;
                let mut q = 2;
                while q * q <= m {
                    if m % q == 0 {
                        primes.push(q);
                        while m % q == 0 {
                            m /= q;
                        }
                    }
                    q += 1;
                }
                if m > 1 {
                    primes.push(m);
                }
                for q in primes {
                    let h = x.frobenius_power((n / q) as u32, &f).sub(&x.rem(&f));
                    if !f.gcd(&h).is_constant() {
                        return false;
                    }
                }
                true
            }
        }
    }
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g (g not normalized).
pub fn fp_xgcd(a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
    let p = a.p;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
    let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        r0 = r1;
        r1 = r;
        let s2 = s0.sub(&q.mul(&s1));
        s0 = s1;
        s1 = s2;
        let t2 = t0.sub(&q.mul(&t1));
        t0 = t1;
        t1 = t2;
    }
    (r0, s0, t0)
}

// Seed the CZ randomness from the polynomial itself so factorization is a
// pure function of its input.
fn cz_seed(f: &FpPoly) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    h ^= f.p;
    for &c in &f.coeffs {
        h = h.wrapping_mul(0x100000001b3).wrapping_add(c);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, cs: &[u64]) -> FpPoly {
        FpPoly::new(p, cs.to_vec())
    }

    #[test]
    fn divrem_roundtrip() {
        let f = poly(7, &[1, 0, 3, 5]); // 5t^3 + 3t^2 + 1
        let g = poly(7, &[2, 1]); // t + 2
        let (q, r) = f.divrem(&g);
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree() < g.degree());
    }

    #[test]
    fn factor_simple() {
        // t^2 + 1 over F_3 is irreducible (no square root of -1 mod 3)
        let f = poly(3, &[1, 0, 1]);
        assert!(f.is_irreducible());
        // t^2 + 1 over F_5 = (t+2)(t+3)
        let f = poly(5, &[1, 0, 1]);
        assert!(!f.is_irreducible());
        let (unit, factors) = f.factor();
        assert_eq!(unit, 1);
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].0, poly(5, &[2, 1]));
        assert_eq!(factors[1].0, poly(5, &[3, 1]));
    }

    #[test]
    fn factor_with_multiplicity() {
        // 2 * (t+1)^2 * (t^2+t+2) over F_3; t^2+t+2 has no root mod 3
        let f = poly(3, &[1, 1])
            .mul(&poly(3, &[1, 1]))
            .mul(&poly(3, &[2, 1, 1]))
            .scale(2);
        let (unit, factors) = f.factor();
        assert_eq!(unit, 2);
        assert_eq!(
            factors,
            vec![(poly(3, &[1, 1]), 2), (poly(3, &[2, 1, 1]), 1)]
        );
    }

    #[test]
    fn frobenius_squarefree() {
        // t^3 + 2 = (t + 2)^3 over F_3
        let f = poly(3, &[2, 0, 0, 1]);
        let (_, factors) = f.factor();
        assert_eq!(factors, vec![(poly(3, &[2, 1]), 3)]);
    }

    #[test]
    fn factor_product_of_many() {
        let p = 13;
        let f = poly(p, &[1, 1])
            .mul(&poly(p, &[5, 1]))
            .mul(&poly(p, &[1, 1, 1]))
            .mul(&poly(p, &[11, 0, 1]));
        let (_, factors) = f.factor();
        let total: usize = factors
            .iter()
            .map(|(g, m)| g.degree().unwrap() * *m as usize)
            .sum();
        assert_eq!(total, 6);
        let mut prod = FpPoly::one(p);
        for (g, m) in &factors {
            for _ in 0..*m {
                prod = prod.mul(g);
            }
        }
        assert_eq!(prod, f.monic());
    }
}
