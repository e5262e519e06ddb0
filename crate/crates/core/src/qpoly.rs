//! Dense univariate polynomials over Q, with Euclidean arithmetic and full
//! factorization into monic irreducibles.
//!
//! Factorization clears denominators, takes the squarefree decomposition
//! (Yun), then factors each squarefree primitive integer polynomial by the
//! Zassenhaus method: factor mod a good prime, lift the modular factors by
//! linear multifactor Hensel lifting past the Mignotte bound, and recombine
//! subsets.

use crate::fppoly::FpPoly;
use crate::intfactor::is_prime;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoly {
    /// Coefficient of t^i at index i; no trailing zeros.
    pub coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn var() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_int_coeffs(cs: &[i64]) -> Self {
        Self::new(
            cs.iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
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

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        if self.degree().map(|d| d < dd).unwrap_or(true) {
            return (Self::zero(), self.clone());
        }
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] * &lead_inv;
            quot[i - dd] = q.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let delta = &q * dc;
                rem[i - dd + j] -= delta;
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
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
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitute another polynomial for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Squarefree part (the radical), monic.
    pub fn squarefree_part(&self) -> Self {
        assert!(!self.is_zero());
        if self.is_constant() {
            return Self::one();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Yun's squarefree decomposition of a nonconstant polynomial: monic
    /// pairwise-coprime squarefree factors with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        assert!(!self.is_zero());
        let f = self.monic();
        if f.is_constant() {
            return vec![];
        }
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.divrem(&a).0;
        let mut c = fp.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut out = vec![];
        let mut i = 1u32;
        loop {
            a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.monic(), i));
            }
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
            if b.is_constant() {
                break;
            }
        }
        out
    }

    /// Full factorization into a unit and monic irreducible factors with
    /// multiplicities, sorted.
    pub fn factor(&self) -> (BigRational, Vec<(Self, u32)>) {
        assert!(!self.is_zero());
        if self.is_constant() {
            return (self.leading(), vec![]);
        }
        // monic-factor convention: the unit is exactly the leading coefficient
        let unit = self.leading();
        let mut out: Vec<(Self, u32)> = vec![];
        for (sqfree, mult) in self.squarefree_decomposition() {
            let (zp, _) = to_primitive_int(&sqfree);
            for zfac in factor_squarefree_primitive(&zp) {
                out.push((from_int(&zfac).monic(), mult));
            }
        }
        out.sort();
        (unit, out)
    }

    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            _ => {
                let (_, f) = self.factor();
                f.len() == 1 && f[0].1 == 1
            }
        }
    }
}

/// Clear denominators and content: returns (primitive integer polynomial
/// with positive leading coefficient, rational unit u) with self = u * prim.
pub fn to_primitive_int(f: &QPoly) -> (Vec<BigInt>, BigRational) {
    assert!(!f.is_zero());
    let mut den_lcm = BigInt::one();
    for c in &f.coeffs {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den_lcm / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if content.is_zero() {
        content = BigInt::one();
    }
    let mut prim: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
    let mut unit = BigRational::new(content, den_lcm);
    if prim.last().map(|c| c.is_negative()).unwrap_or(false) {
        for c in prim.iter_mut() {
            *c = -c.clone();
        }
        unit = -unit;
    }
    (prim, unit)
}

pub fn from_int(z: &[BigInt]) -> QPoly {
    QPoly::new(z.iter().map(|c| BigRational::from(c.clone())).collect())
}

fn zdeg(z: &[BigInt]) -> usize {
    z.len() - 1
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zmod_sym(z: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    let mut out: Vec<BigInt> = z
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    while out.last().map(|c| c.is_zero()).unwrap_or(false) {
        out.pop();
    }
    out
}

fn z_to_fp(z: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    FpPoly::new(
        p,
        z.iter()
            .map(|c| {
                let r = c.mod_floor(&pb);
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect(),
    )
}

fn fp_to_z(f: &FpPoly) -> Vec<BigInt> {
    f.coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

/// Mignotte-style coefficient bound for factors of f (times the leading
/// coefficient, to cover non-monic recombination candidates).
fn factor_bound(f: &[BigInt]) -> BigInt {
    let n = zdeg(f);
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + 1;
    let lc = f.last().unwrap().abs();
    (BigInt::one() << (n as u32 + 1)) * norm * lc
}

/// Factor a squarefree primitive integer polynomial (positive leading
/// coefficient) into primitive irreducible integer polynomials.
fn factor_squarefree_primitive(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = zdeg(f);
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    // pick a prime: odd, not dividing lc, f squarefree mod p
    let mut p = 3u64;
    let fp = loop {
        let pb = BigInt::from(p);
        if !(&lc % &pb).is_zero() && is_prime(&pb) {
            let fp = z_to_fp(f, p);
            if fp.degree() == Some(n) {
                let d = fp.derivative();
                if !d.is_zero() && fp.gcd(&d).is_constant() {
                    break fp;
                }
            }
        }
        p += 2;
    };
    let (_, modular) = fp.monic().factor();
    let modular: Vec<FpPoly> = modular.into_iter().map(|(g, _)| g).collect();
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    // lift precision past 2 * bound
    let bound = factor_bound(f);
    let mut pk = BigInt::from(p);
    let mut k = 1u32;
    while pk <= &bound * 2 {
        pk *= p;
        k += 1;
    }
    let lifted = hensel_lift_all(f, &modular, p, k);
    recombine(f.to_vec(), lifted, &pk)
}

/// Linear multifactor Hensel lifting: returns monic integer polynomials
/// congruent to the given modular factors with f = lc(f) * prod(g_i) mod p^k.
fn hensel_lift_all(f: &[BigInt], modular: &[FpPoly], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let pb = BigInt::from(p);
    // u_i = (lc * prod_{j != i} g_j)^{-1} mod (g_i, p), fixed for all steps
    let mut inverses: Vec<FpPoly> = Vec::with_capacity(modular.len());
    for (i, gi) in modular.iter().enumerate() {
        let mut prod = FpPoly::constant(p, z_to_fp(f, p).leading());
        for (j, gj) in modular.iter().enumerate() {
            if j != i {
                prod = prod.mul(gj).rem(gi);
            }
        }
        let (g, s, _) = fp_xgcd(&prod, gi);
        assert!(g.is_constant() && !g.is_zero(), "factors coprime mod p");
        let ginv = crate::intfactor::mod_inverse_u64(g.leading(), p).unwrap();
        inverses.push(s.scale(ginv).rem(gi));
    }
    let mut lifted: Vec<Vec<BigInt>> = modular.iter().map(fp_to_z).collect();
    let lc = f.last().unwrap().clone();
    let mut modulus = pb.clone();
    for _ in 1..k {
        // error E = (f - lc * prod g_i) / modulus mod p
        let mut prod = vec![lc.clone()];
        for g in &lifted {
            prod = zmul(&prod, g);
        }
        let mut err: Vec<BigInt> = Vec::with_capacity(f.len());
        for i in 0..f.len().max(prod.len()) {
            let a = f.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = prod.get(i).cloned().unwrap_or_else(BigInt::zero);
            err.push(a - b);
        }
        let e_over: Vec<BigInt> = err.iter().map(|c| c / &modulus).collect();
        let e_fp = z_to_fp(&e_over, p);
        for (i, g) in lifted.iter_mut().enumerate() {
            let gi_fp = z_to_fp(g, p);
            let delta = e_fp.mul(&inverses[i]).rem(&gi_fp);
            // g += modulus * delta (symmetric lift of delta)
            for (d_idx, &dc) in delta.coeffs.iter().enumerate() {
                let mut dv = BigInt::from(dc);
                if &dv * 2 > pb {
                    dv -= &pb;
                }
                while g.len() <= d_idx {
                    g.push(BigInt::zero());
                }
                g[d_idx] += &modulus * dv;
            }
        }
        modulus *= p;
    }
    lifted
}

use crate::fppoly::fp_xgcd;

/// Zassenhaus recombination: find true factors as subsets of lifted modular
/// factors.
fn recombine(mut f: Vec<BigInt>, mut lifted: Vec<Vec<BigInt>>, pk: &BigInt) -> Vec<Vec<BigInt>> {
    let mut out = vec![];
    let mut subset_size = 1usize;
    'outer: while 2 * subset_size <= lifted.len() {
        let indices: Vec<usize> = (0..lifted.len()).collect();
        for subset in subsets_of_size(&indices, subset_size) {
            let lc = f.last().unwrap().clone();
            let mut cand = vec![lc.clone()];
            for &i in &subset {
                cand = zmul(&cand, &lifted[i]);
                cand = zmod_sym(&cand, pk);
            }
            if cand.is_empty() {
                continue;
            }
            let candq = from_int(&cand);
            let (prim, _) = to_primitive_int(&candq);
            let fq = from_int(&f);
            let primq = from_int(&prim);
            if primq.divides(&fq) {
                let quot = fq.divrem(&primq).0;
                let (fz, _) = to_primitive_int(&quot);
                out.push(prim);
                f = fz;
                let keep: Vec<Vec<BigInt>> = lifted
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g.clone())
                    .collect();
                lifted = keep;
                continue 'outer;
            }
        }
        subset_size += 1;
    }
    if zdeg(&f) > 0 {
        out.push(f);
    }
    out
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
