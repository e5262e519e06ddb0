//! Base fields, their elements, and their discrete valuations.
//!
//! The supported lattice is Q, F_p (p odd; p = 2 exists only as an inert
//! data tag), and one-variable rational function fields Q(t), F_p(t).
//! Quadratic number fields Q(sqrt m) and finite extensions F_{p^d} appear
//! only as residue fields of places and accept the subset of operations the
//! deciders need.

use crate::fppoly::FpPoly;
use crate::intfactor::{
    self, is_prime, is_rational_square, legendre_u64, mod_inverse_u64, padic_valuation,
    squarefree_part,
};
use crate::qpoly::QPoly;
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::fmt;

/// Description of a supported field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldDesc {
    Rationals,
    /// F_p. Odd p supports the full calculus; p = 2 is representable but
    /// refused by every form-theoretic operation.
    PrimeField(u64),
    RationalFunction {
        base: Box<FieldDesc>,
        var: String,
    },
    /// Q(sqrt m), m squarefree, m != 0, 1. Residue fields of degree-2 places
    /// on Q(t); not a base field for valuation sets.
    Quadratic {
        m: BigInt,
    },
    /// F_p[x]/(modulus), deg(modulus) >= 2. Residue fields of higher-degree
    /// places on F_p(t).
    FiniteExt {
        p: u64,
        modulus: FpPoly,
    },
}

impl FieldDesc {
    pub fn rational_function(base: FieldDesc, var: &str) -> Result<FieldDesc> {
        match base {
            FieldDesc::Rationals | FieldDesc::PrimeField(_) => Ok(FieldDesc::RationalFunction {
                base: Box::new(base),
                var: var.to_string(),
            }),
            other => Err(Error::UnsupportedField(format!(
                "towers deeper than k(t) are not supported: {other}"
            ))),
        }
    }

    /// Residue-field constructor from a monic irreducible polynomial over Q
    /// of degree <= 2 (the spec's number-field descriptor).
    pub fn number_field(min_poly: &QPoly) -> Result<FieldDesc> {
        match min_poly.degree() {
            Some(1) => Ok(FieldDesc::Rationals),
            Some(2) => {
                if !min_poly.is_monic() || !min_poly.is_irreducible() {
                    return Err(Error::Degenerate(
                        "defining polynomial must be monic irreducible".into(),
                    ));
                }
                let b = min_poly.coeff(1);
                let c = min_poly.coeff(0);
                let disc = &b * &b - BigRational::from(BigInt::from(4)) * &c;
                let m = squarefree_part(&disc);
                Ok(FieldDesc::Quadratic { m })
            }
            _ => Err(Error::UnsupportedField(
                "number fields of degree >= 3 are not supported".into(),
            )),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDesc::Rationals | FieldDesc::Quadratic { .. } => 0,
            FieldDesc::PrimeField(p) | FieldDesc::FiniteExt { p, .. } => *p,
            FieldDesc::RationalFunction { base, .. } => base.characteristic(),
        }
    }

    pub fn is_char_two(&self) -> bool {
        self.characteristic() == 2
    }

    /// Fields on which Witt/symbol operations may run at all.
    pub fn check_form_theoretic(&self) -> Result<()> {
        if self.is_char_two() {
            return Err(Error::ResidueCharTwo);
        }
        Ok(())
    }

    pub fn var_name(&self) -> Option<&str> {
        match self {
            FieldDesc::RationalFunction { var, .. } => Some(var),
            _ => None,
        }
    }

    pub fn zero(&self) -> Element {
        self.integer(0)
    }

    pub fn one(&self) -> Element {
        self.integer(1)
    }

    pub fn integer(&self, n: i64) -> Element {
        match self {
            FieldDesc::Rationals => Element::Rat(BigRational::from(BigInt::from(n))),
            FieldDesc::PrimeField(p) => Element::Fp {
                p: *p,
                val: n.rem_euclid(*p as i64) as u64,
            },
            FieldDesc::RationalFunction { base, .. } => match &**base {
                FieldDesc::Rationals => Element::QFunc {
                    num: QPoly::constant(BigRational::from(BigInt::from(n))),
                    den: QPoly::one(),
                },
                FieldDesc::PrimeField(p) => Element::FpFunc {
                    p: *p,
                    num: FpPoly::constant(*p, n.rem_euclid(*p as i64) as u64),
                    den: FpPoly::one(*p),
                },
                _ => unreachable!("validated on construction"),
            },
            FieldDesc::Quadratic { m } => Element::Quad {
                m: m.clone(),
                a: BigRational::from(BigInt::from(n)),
                b: BigRational::zero(),
            },
            FieldDesc::FiniteExt { p, modulus } => Element::Fq {
                p: *p,
                modulus: modulus.clone(),
                val: FpPoly::constant(*p, n.rem_euclid(*p as i64) as u64),
            },
        }
    }

    /// The variable t as an element, for function fields.
    pub fn variable(&self) -> Result<Element> {
        match self {
            FieldDesc::RationalFunction { base, .. } => match &**base {
                FieldDesc::Rationals => Ok(Element::QFunc {
                    num: QPoly::var(),
                    den: QPoly::one(),
                }),
                FieldDesc::PrimeField(p) => Ok(Element::FpFunc {
                    p: *p,
                    num: FpPoly::var(*p),
                    den: FpPoly::one(*p),
                }),
                _ => unreachable!(),
            },
            _ => Err(Error::UnsupportedField("not a function field".into())),
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Rationals => write!(f, "Q"),
            FieldDesc::PrimeField(p) => write!(f, "F{p}"),
            FieldDesc::RationalFunction { base, var } => write!(f, "{base}({var})"),
            FieldDesc::Quadratic { m } => write!(f, "Q(sqrt({m}))"),
            FieldDesc::FiniteExt { p, modulus } => {
                write!(f, "F{}^{}", p, modulus.degree().unwrap_or(0))
            }
        }
    }
}

/// An exact field element in canonical form. Equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Rat(BigRational),
    Fp {
        p: u64,
        val: u64,
    },
    /// num/den with den monic and gcd(num, den) = 1.
    QFunc {
        num: QPoly,
        den: QPoly,
    },
    FpFunc {
        p: u64,
        num: FpPoly,
        den: FpPoly,
    },
    /// a + b*sqrt(m) in Q(sqrt m).
    Quad {
        m: BigInt,
        a: BigRational,
        b: BigRational,
    },
    Fq {
        p: u64,
        modulus: FpPoly,
        val: FpPoly,
    },
}

impl Element {
    pub fn rational(n: i64, d: i64) -> Element {
        Element::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn qfunc(num: QPoly, den: QPoly) -> Element {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lc = den.leading();
        if lc.is_one() {
            Element::QFunc { num, den }
        } else {
            Element::QFunc {
                num: num.scale(&lc.recip()),
                den: den.monic(),
            }
        }
    }

    pub fn fpfunc(p: u64, num: FpPoly, den: FpPoly) -> Element {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lc = den.leading();
        if lc == 1 {
            Element::FpFunc { p, num, den }
        } else {
            let inv = mod_inverse_u64(lc, p).expect("prime modulus");
            Element::FpFunc {
                p,
                num: num.scale(inv),
                den: den.monic(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Rat(x) => x.is_zero(),
            Element::Fp { val, .. } => *val == 0,
            Element::QFunc { num, .. } => num.is_zero(),
            Element::FpFunc { num, .. } => num.is_zero(),
            Element::Quad { a, b, .. } => a.is_zero() && b.is_zero(),
            Element::Fq { val, .. } => val.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Element::Rat(x) => x.is_one(),
            Element::Fp { val, .. } => *val == 1,
            Element::QFunc { num, den } => num.is_constant() && den.is_constant() && num == den,
            Element::FpFunc { num, den, .. } => {
                num.is_constant() && den.is_constant() && num == den
            }
            Element::Quad { a, b, .. } => a.is_one() && b.is_zero(),
            Element::Fq { val, .. } => val.is_constant() && val.leading() == 1,
        }
    }

    pub fn lies_in(&self, field: &FieldDesc) -> bool {
        match (self, field) {
            (Element::Rat(_), FieldDesc::Rationals) => true,
            (Element::Fp { p, .. }, FieldDesc::PrimeField(q)) => p == q,
            (Element::QFunc { .. }, FieldDesc::RationalFunction { base, .. }) => {
                **base == FieldDesc::Rationals
            }
            (Element::FpFunc { p, .. }, FieldDesc::RationalFunction { base, .. }) => {
                **base == FieldDesc::PrimeField(*p)
            }
            (Element::Quad { m, .. }, FieldDesc::Quadratic { m: m2 }) => m == m2,
            (Element::Fq { p, modulus, .. }, FieldDesc::FiniteExt { p: q, modulus: m2 }) => {
                p == q && modulus == m2
            }
            _ => false,
        }
    }

    /// The field this element belongs to (variable name defaults to "t").
    pub fn field(&self) -> FieldDesc {
        match self {
            Element::Rat(_) => FieldDesc::Rationals,
            Element::Fp { p, .. } => FieldDesc::PrimeField(*p),
            Element::QFunc { .. } => FieldDesc::RationalFunction {
                base: Box::new(FieldDesc::Rationals),
                var: "t".to_string(),
            },
            Element::FpFunc { p, .. } => FieldDesc::RationalFunction {
                base: Box::new(FieldDesc::PrimeField(*p)),
                var: "t".to_string(),
            },
            Element::Quad { m, .. } => FieldDesc::Quadratic { m: m.clone() },
            Element::Fq { p, modulus, .. } => FieldDesc::FiniteExt {
                p: *p,
                modulus: modulus.clone(),
            },
        }
    }

    fn mismatch(a: &Element, b: &Element) -> ! {
        panic!("element field mismatch: {a:?} vs {b:?}");
    }

    pub fn add(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Rat(x), Element::Rat(y)) => Element::Rat(x + y),
            (Element::Fp { p, val: x }, Element::Fp { p: q, val: y }) if p == q => Element::Fp {
                p: *p,
                val: (x + y) % p,
            },
            (Element::QFunc { num: n1, den: d1 }, Element::QFunc { num: n2, den: d2 }) => {
                Element::qfunc(n1.mul(d2).add(&n2.mul(d1)), d1.mul(d2))
            }
            (
                Element::FpFunc {
                    p,
                    num: n1,
                    den: d1,
                },
                Element::FpFunc {
                    p: q,
                    num: n2,
                    den: d2,
                },
            ) if p == q => Element::fpfunc(*p, n1.mul(d2).add(&n2.mul(d1)), d1.mul(d2)),
            (
                Element::Quad { m, a, b },
                Element::Quad {
                    m: m2,
                    a: a2,
                    b: b2,
                },
            ) if m == m2 => Element::Quad {
                m: m.clone(),
                a: a + a2,
                b: b + b2,
            },
            (
                Element::Fq { p, modulus, val },
                Element::Fq {
                    p: q,
                    modulus: m2,
                    val: v2,
                },
            ) if p == q && modulus == m2 => Element::Fq {
                p: *p,
                modulus: modulus.clone(),
                val: val.add(v2),
            },
            _ => Element::mismatch(self, other),
        }
    }

    pub fn neg(&self) -> Element {
        match self {
            Element::Rat(x) => Element::Rat(-x.clone()),
            Element::Fp { p, val } => Element::Fp {
                p: *p,
                val: (p - val) % p,
            },
            Element::QFunc { num, den } => Element::QFunc {
                num: num.neg(),
                den: den.clone(),
            },
            Element::FpFunc { p, num, den } => Element::FpFunc {
                p: *p,
                num: num.neg(),
                den: den.clone(),
            },
            Element::Quad { m, a, b } => Element::Quad {
                m: m.clone(),
                a: -a.clone(),
                b: -b.clone(),
            },
            Element::Fq { p, modulus, val } => Element::Fq {
                p: *p,
                modulus: modulus.clone(),
                val: val.neg(),
            },
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Rat(x), Element::Rat(y)) => Element::Rat(x * y),
            (Element::Fp { p, val: x }, Element::Fp { p: q, val: y }) if p == q => Element::Fp {
                p: *p,
                val: (*x as u128 * *y as u128 % *p as u128) as u64,
            },
            (Element::QFunc { num: n1, den: d1 }, Element::QFunc { num: n2, den: d2 }) => {
                Element::qfunc(n1.mul(n2), d1.mul(d2))
            }
            (
                Element::FpFunc {
                    p,
                    num: n1,
                    den: d1,
                },
                Element::FpFunc {
                    p: q,
                    num: n2,
                    den: d2,
                },
            ) if p == q => Element::fpfunc(*p, n1.mul(n2), d1.mul(d2)),
            (
                Element::Quad { m, a, b },
                Element::Quad {
                    m: m2,
                    a: a2,
                    b: b2,
                },
            ) if m == m2 => {
                let mq = BigRational::from(m.clone());
                Element::Quad {
                    m: m.clone(),
                    a: a * a2 + &mq * b * b2,
                    b: a * b2 + b * a2,
                }
            }
            (
                Element::Fq { p, modulus, val },
                Element::Fq {
                    p: q,
                    modulus: m2,
                    val: v2,
                },
            ) if p == q && modulus == m2 => Element::Fq {
                p: *p,
                modulus: modulus.clone(),
                val: val.mul(v2).rem(modulus),
            },
            _ => Element::mismatch(self, other),
        }
    }

    pub fn inverse(&self) -> Result<Element> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(match self {
            Element::Rat(x) => Element::Rat(x.recip()),
            Element::Fp { p, val } => Element::Fp {
                p: *p,
                val: mod_inverse_u64(*val, *p).ok_or(Error::ZeroElement)?,
            },
            Element::QFunc { num, den } => Element::qfunc(den.clone(), num.clone()),
            Element::FpFunc { p, num, den } => Element::fpfunc(*p, den.clone(), num.clone()),
            Element::Quad { m, a, b } => {
                // (a + b sqrt m)^-1 = (a - b sqrt m) / (a^2 - m b^2)
                let mq = BigRational::from(m.clone());
                let norm = a * a - &mq * b * b;
                Element::Quad {
                    m: m.clone(),
                    a: a / &norm,
                    b: -(b / &norm),
                }
            }
            Element::Fq { p, modulus, val } => {
                let (g, s, _) = crate::fppoly::fp_xgcd(val, modulus);
                let ginv = mod_inverse_u64(g.leading(), *p).ok_or(Error::ZeroElement)?;
                Element::Fq {
                    p: *p,
                    modulus: modulus.clone(),
                    val: s.scale(ginv).rem(modulus),
                }
            }
        })
    }

    pub fn div(&self, other: &Element) -> Result<Element> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn square(&self) -> Element {
        self.mul(self)
    }

    pub fn pow(&self, e: i64) -> Result<Element> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = self.field().one();
        let mut k = e.unsigned_abs();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.square();
            k >>= 1;
        }
        Ok(acc)
    }

    /// Conjugate in Q(sqrt m); identity elsewhere.
    pub fn conjugate(&self) -> Element {
        match self {
            Element::Quad { m, a, b } => Element::Quad {
                m: m.clone(),
                a: a.clone(),
                b: -b.clone(),
            },
            other => other.clone(),
        }
    }

    /// Norm to Q for Q(sqrt m) elements: a^2 - m b^2.
    pub fn quad_norm(&self) -> Option<BigRational> {
        match self {
            Element::Quad { m, a, b } => {
                let mq = BigRational::from(m.clone());
                Some(a * a - &mq * b * b)
            }
            _ => None,
        }
    }
}

/// A place of a supported field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    /// p-adic place of Q.
    FinitePrime(u64),
    /// The archimedean place of Q (sign data only).
    RealPlace,
    /// Place of Q(t) given by a monic irreducible polynomial over Q.
    IrreducibleQ(QPoly),
    /// Place of F_p(t) given by a monic irreducible polynomial over F_p.
    IrreducibleFp(FpPoly),
    /// The degree place (valuation at infinity) of k(t).
    DegreePlace,
    /// The valuation of Q(t) induced by the prime p on coefficients; residue
    /// field F_p(t).
    GaussPrime(u64),
}

impl Place {
    pub fn finite_prime(p: u64) -> Result<Place> {
        if !is_prime(&BigInt::from(p)) {
            return Err(Error::Degenerate(format!("{p} is not prime")));
        }
        Ok(Place::FinitePrime(p))
    }

    pub fn gauss_prime(p: u64) -> Result<Place> {
        if !is_prime(&BigInt::from(p)) {
            return Err(Error::Degenerate(format!("{p} is not prime")));
        }
        Ok(Place::GaussPrime(p))
    }

    /// Verified constructor for a geometric place of K = k(t).
    pub fn irreducible(field: &FieldDesc, poly_src: &Element) -> Result<Place> {
        match poly_src {
            Element::QFunc { num, den } => {
                if !den.is_constant() {
                    return Err(Error::Degenerate(
                        "place polynomial must be integral".into(),
                    ));
                }
                let f = num.monic();
                if !f.is_irreducible() {
                    return Err(Error::Degenerate(format!(
                        "polynomial is not irreducible over Q: {poly_src}"
                    )));
                }
                match field {
                    FieldDesc::RationalFunction { base, .. } if **base == FieldDesc::Rationals => {
                        Ok(Place::IrreducibleQ(f))
                    }
                    _ => Err(Error::FieldMismatch("place/field mismatch".into())),
                }
            }
            Element::FpFunc { p, num, den } => {
                if !den.is_constant() {
                    return Err(Error::Degenerate(
                        "place polynomial must be integral".into(),
                    ));
                }
                let f = num.monic();
                if !f.is_irreducible() {
                    return Err(Error::Degenerate(format!(
                        "polynomial is not irreducible over F{p}: {poly_src}"
                    )));
                }
                match field {
                    FieldDesc::RationalFunction { base, .. }
                        if **base == FieldDesc::PrimeField(*p) =>
                    {
                        Ok(Place::IrreducibleFp(f))
                    }
                    _ => Err(Error::FieldMismatch("place/field mismatch".into())),
                }
            }
            _ => Err(Error::Degenerate("not a polynomial element".into())),
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::RealPlace)
    }

    /// Residue characteristic at a non-archimedean place of K.
    pub fn residue_characteristic(&self, field: &FieldDesc) -> Result<u64> {
        match (field, self) {
            (FieldDesc::Rationals, Place::FinitePrime(p)) => Ok(*p),
            (FieldDesc::Rationals, Place::RealPlace) => Err(Error::ArchimedeanPlace),
            (FieldDesc::RationalFunction { base, .. }, Place::IrreducibleQ(_))
            | (FieldDesc::RationalFunction { base, .. }, Place::IrreducibleFp(_))
            | (FieldDesc::RationalFunction { base, .. }, Place::DegreePlace) => {
                Ok(base.characteristic())
            }
            (FieldDesc::RationalFunction { base, .. }, Place::GaussPrime(p))
                if **base == FieldDesc::Rationals =>
            {
                Ok(*p)
            }
            _ => Err(Error::FieldMismatch(format!(
                "place {self} does not live on {field}"
            ))),
        }
    }

    /// The residue field of a non-archimedean place.
    pub fn residue_field(&self, field: &FieldDesc) -> Result<FieldDesc> {
        match (field, self) {
            (FieldDesc::Rationals, Place::FinitePrime(p)) => Ok(FieldDesc::PrimeField(*p)),
            (FieldDesc::Rationals, Place::RealPlace) => Err(Error::ArchimedeanPlace),
            (FieldDesc::RationalFunction { base, .. }, Place::IrreducibleQ(f))
                if **base == FieldDesc::Rationals =>
            {
                match f.degree() {
                    Some(1) => Ok(FieldDesc::Rationals),
                    Some(2) => FieldDesc::number_field(f),
                    _ => Err(Error::UnsupportedField(
                        "residue fields of degree >= 3 over Q are not supported".into(),
                    )),
                }
            }
            (FieldDesc::RationalFunction { base, .. }, Place::IrreducibleFp(f)) => {
                if let FieldDesc::PrimeField(p) = **base {
                    match f.degree() {
                        Some(1) => Ok(FieldDesc::PrimeField(p)),
                        Some(_) => Ok(FieldDesc::FiniteExt {
                            p,
                            modulus: f.clone(),
                        }),
                        None => Err(Error::Degenerate("zero polynomial".into())),
                    }
                } else {
                    Err(Error::FieldMismatch("place/field mismatch".into()))
                }
            }
            (FieldDesc::RationalFunction { base, .. }, Place::DegreePlace) => Ok((**base).clone()),
            (FieldDesc::RationalFunction { base, var }, Place::GaussPrime(p))
                if **base == FieldDesc::Rationals =>
            {
                FieldDesc::rational_function(FieldDesc::PrimeField(*p), var)
            }
            _ => Err(Error::FieldMismatch(format!(
                "place {self} does not live on {field}"
            ))),
        }
    }

    fn rank(&self) -> u8 {
        // finite primes, then irreducible polynomials graded-lex, then Gauss
        // primes, then the degree place, then the real place
        match self {
            Place::FinitePrime(_) => 0,
            Place::IrreducibleQ(_) | Place::IrreducibleFp(_) => 1,
            Place::GaussPrime(_) => 2,
            Place::DegreePlace => 3,
            Place::RealPlace => 4,
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.rank().cmp(&other.rank()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self, other) {
            (Place::FinitePrime(p), Place::FinitePrime(q))
            | (Place::GaussPrime(p), Place::GaussPrime(q)) => p.cmp(q),
            (Place::IrreducibleQ(f), Place::IrreducibleQ(g)) => {
                // graded-lex: degree first, then coefficients from leading down
                match f.degree().cmp(&g.degree()) {
                    Ordering::Equal => {
                        let fr: Vec<_> = f.coeffs.iter().rev().collect();
                        let gr: Vec<_> = g.coeffs.iter().rev().collect();
                        fr.cmp(&gr)
                    }
                    o => o,
                }
            }
            (Place::IrreducibleFp(f), Place::IrreducibleFp(g)) => {
                match f.degree().cmp(&g.degree()) {
                    Ordering::Equal => {
                        let fr: Vec<_> = f.coeffs.iter().rev().collect();
                        let gr: Vec<_> = g.coeffs.iter().rev().collect();
                        fr.cmp(&gr)
                    }
                    o => o,
                }
            }
            (Place::IrreducibleQ(_), Place::IrreducibleFp(_)) => Ordering::Less,
            (Place::IrreducibleFp(_), Place::IrreducibleQ(_)) => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::FinitePrime(p) => write!(f, "p={p}"),
            Place::RealPlace => write!(f, "real"),
            Place::IrreducibleQ(g) => write!(f, "({})", display_qpoly(g)),
            Place::IrreducibleFp(g) => write!(f, "({})", display_fppoly(g)),
            Place::DegreePlace => write!(f, "deg"),
            Place::GaussPrime(p) => write!(f, "gauss p={p}"),
        }
    }
}

/// Normalized discrete valuation v(a) of a nonzero element.
pub fn valuation(field: &FieldDesc, place: &Place, a: &Element) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !a.lies_in(field) {
        return Err(Error::FieldMismatch(format!("{a} not in {field}")));
    }
    match (place, a) {
        (Place::RealPlace, _) => Err(Error::ArchimedeanPlace),
        (Place::FinitePrime(p), Element::Rat(x)) => Ok(padic_valuation(x, &BigInt::from(*p))),
        (Place::IrreducibleQ(f), Element::QFunc { num, den }) => {
            Ok(poly_multiplicity_q(num, f) - poly_multiplicity_q(den, f))
        }
        (Place::IrreducibleFp(f), Element::FpFunc { num, den, .. }) => {
            Ok(poly_multiplicity_fp(num, f) - poly_multiplicity_fp(den, f))
        }
        (Place::DegreePlace, Element::QFunc { num, den }) => {
            Ok(den.degree().unwrap() as i64 - num.degree().unwrap() as i64)
        }
        (Place::DegreePlace, Element::FpFunc { num, den, .. }) => {
            Ok(den.degree().unwrap() as i64 - num.degree().unwrap() as i64)
        }
        (Place::GaussPrime(p), Element::QFunc { num, den }) => {
            Ok(gauss_valuation(num, *p) - gauss_valuation(den, *p))
        }
        _ => Err(Error::FieldMismatch(format!(
            "place {place} does not apply to {a}"
        ))),
    }
}

fn poly_multiplicity_q(g: &QPoly, f: &QPoly) -> i64 {
    assert!(!g.is_zero());
    let mut m = 0i64;
    let mut g = g.clone();
    loop {
        let (q, r) = g.divrem(f);
        if r.is_zero() {
            m += 1;
            g = q;
        } else {
            return m;
        }
    }
}

fn poly_multiplicity_fp(g: &FpPoly, f: &FpPoly) -> i64 {
    assert!(!g.is_zero());
    let mut m = 0i64;
    let mut g = g.clone();
    loop {
        let (q, r) = g.divrem(f);
        if r.is_zero() {
            m += 1;
            g = q;
        } else {
            return m;
        }
    }
}

/// Gauss valuation of a nonzero polynomial over Q: min over coefficients of
/// the p-adic valuation.
fn gauss_valuation(g: &QPoly, p: u64) -> i64 {
    let pb = BigInt::from(p);
    g.coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| padic_valuation(c, &pb))
        .min()
        .expect("nonzero polynomial")
}

/// Canonical uniformizer at a non-archimedean place.
pub fn uniformizer(field: &FieldDesc, place: &Place) -> Result<Element> {
    match place {
        Place::RealPlace => Err(Error::ArchimedeanPlace),
        Place::FinitePrime(p) => Ok(Element::Rat(BigRational::from(BigInt::from(*p)))),
        Place::IrreducibleQ(f) => Ok(Element::QFunc {
            num: f.clone(),
            den: QPoly::one(),
        }),
        Place::IrreducibleFp(f) => match field {
            FieldDesc::RationalFunction { base, .. } => {
                if let FieldDesc::PrimeField(p) = **base {
                    Ok(Element::FpFunc {
                        p,
                        num: f.clone(),
                        den: FpPoly::one(p),
                    })
                } else {
                    Err(Error::FieldMismatch("place/field mismatch".into()))
                }
            }
            _ => Err(Error::FieldMismatch("place/field mismatch".into())),
        },
        Place::DegreePlace => match field {
            FieldDesc::RationalFunction { base, .. } => match &**base {
                FieldDesc::Rationals => Ok(Element::qfunc(QPoly::one(), QPoly::var())),
                FieldDesc::PrimeField(p) => {
                    Ok(Element::fpfunc(*p, FpPoly::one(*p), FpPoly::var(*p)))
                }
                _ => Err(Error::FieldMismatch("place/field mismatch".into())),
            },
            _ => Err(Error::FieldMismatch("place/field mismatch".into())),
        },
        Place::GaussPrime(p) => match field {
            FieldDesc::RationalFunction { base, .. } if **base == FieldDesc::Rationals => {
                Ok(Element::QFunc {
                    num: QPoly::constant(BigRational::from(BigInt::from(*p))),
                    den: QPoly::one(),
                })
            }
            _ => Err(Error::FieldMismatch("place/field mismatch".into())),
        },
    }
}

/// Image of a v-unit in the residue field of v; multiplicative on units.
pub fn residue_image(field: &FieldDesc, place: &Place, a: &Element) -> Result<Element> {
    let v = valuation(field, place, a)?;
    if v != 0 {
        return Err(Error::NotAUnit(v));
    }
    match (place, a) {
        (Place::FinitePrime(p), Element::Rat(x)) => {
            let num = rat_mod_p(x.numer(), *p);
            let den = rat_mod_p(x.denom(), *p);
            let dinv = mod_inverse_u64(den, *p).ok_or_else(|| {
                Error::Internal("denominator not invertible despite unit valuation".into())
            })?;
            Ok(Element::Fp {
                p: *p,
                val: (num as u128 * dinv as u128 % *p as u128) as u64,
            })
        }
        (Place::IrreducibleQ(f), Element::QFunc { num, den }) => match f.degree() {
            Some(1) => {
                let c = -f.coeff(0);
                Ok(Element::Rat(num.eval(&c) / den.eval(&c)))
            }
            Some(2) => {
                let kappa = FieldDesc::number_field(f)?;
                let (m, half_w, minus_half_b) = quad_embedding_data(f, &kappa)?;
                let num_r = num.rem(f);
                let den_r = den.rem(f);
                let to_quad = |g: &QPoly| -> Element {
                    // g = g0 + g1 t with t = -b/2 + (w/2) sqrt(m)
                    let g0 = g.coeff(0);
                    let g1 = g.coeff(1);
                    Element::Quad {
                        m: m.clone(),
                        a: &g0 + &g1 * &minus_half_b,
                        b: &g1 * &half_w,
                    }
                };
                to_quad(&num_r).div(&to_quad(&den_r))
            }
            _ => Err(Error::UnsupportedField(
                "residue fields of degree >= 3 over Q are not supported".into(),
            )),
        },
        (Place::IrreducibleFp(f), Element::FpFunc { p, num, den }) => {
            if f.degree() == Some(1) {
                let c = (*p - f.coeffs[0] % *p) % *p;
                let nv = num.eval(c);
                let dv = den.eval(c);
                let dinv = mod_inverse_u64(dv, *p).ok_or_else(|| {
                    Error::Internal("denominator vanishes despite unit valuation".into())
                })?;
                Ok(Element::Fp {
                    p: *p,
                    val: (nv as u128 * dinv as u128 % *p as u128) as u64,
                })
            } else {
                let n = Element::Fq {
                    p: *p,
                    modulus: f.clone(),
                    val: num.rem(f),
                };
                let d = Element::Fq {
                    p: *p,
                    modulus: f.clone(),
                    val: den.rem(f),
                };
                n.div(&d)
            }
        }
        (Place::DegreePlace, Element::QFunc { num, den }) => {
            Ok(Element::Rat(num.leading() / den.leading()))
        }
        (Place::DegreePlace, Element::FpFunc { p, num, den }) => {
            let dinv = mod_inverse_u64(den.leading(), *p).unwrap();
            Ok(Element::Fp {
                p: *p,
                val: (num.leading() as u128 * dinv as u128 % *p as u128) as u64,
            })
        }
        (Place::GaussPrime(p), Element::QFunc { num, den }) => {
            let num_red = reduce_qpoly_mod_p(num, *p)?;
            let den_red = reduce_qpoly_mod_p(den, *p)?;
            Ok(Element::fpfunc(*p, num_red, den_red))
        }
        _ => Err(Error::FieldMismatch(format!(
            "place {place} does not apply to {a}"
        ))),
    }
}

fn rat_mod_p(n: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let r = n.mod_floor(&pb);
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

/// Data for embedding Q[t]/(f) into Q(sqrt m) for monic irreducible
/// quadratic f = t^2 + bt + c: t maps to -b/2 + (w/2) sqrt(m) where
/// disc = b^2 - 4c = w^2 m. Returns (m, w/2, -b/2).
fn quad_embedding_data(f: &QPoly, kappa: &FieldDesc) -> Result<(BigInt, BigRational, BigRational)> {
    let m = match kappa {
        FieldDesc::Quadratic { m } => m.clone(),
        _ => return Err(Error::Internal("expected quadratic residue field".into())),
    };
    let b = f.coeff(1);
    let c = f.coeff(0);
    let disc = &b * &b - BigRational::from(BigInt::from(4)) * &c;
    let ratio = disc / BigRational::from(m.clone());
    let w = intfactor::rational_sqrt(&ratio)
        .ok_or_else(|| Error::Internal("disc / m must be a square".into()))?;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    Ok((m, &w * &half, -(&b * &half)))
}

fn reduce_qpoly_mod_p(g: &QPoly, p: u64) -> Result<FpPoly> {
    let pb = BigInt::from(p);
    let mut coeffs = Vec::with_capacity(g.coeffs.len());
    for c in &g.coeffs {
        if !c.is_zero() && padic_valuation(c, &pb) < 0 {
            return Err(Error::Internal("negative coefficient valuation".into()));
        }
        let num = rat_mod_p(c.numer(), p);
        let den = rat_mod_p(c.denom(), p);
        let dinv = mod_inverse_u64(den, p)
            .ok_or_else(|| Error::Internal("denominator divisible by p".into()))?;
        coeffs.push((num as u128 * dinv as u128 % p as u128) as u64);
    }
    Ok(FpPoly::new(p, coeffs))
}

/// Decides whether a/b is a square in K.
pub fn square_class_equal(field: &FieldDesc, a: &Element, b: &Element) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !a.lies_in(field) || !b.lies_in(field) {
        return Err(Error::FieldMismatch("square_class_equal".into()));
    }
    let ratio = a.div(b)?;
    is_square(field, &ratio)
}

/// Exact square test in K.
pub fn is_square(field: &FieldDesc, x: &Element) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    match (field, x) {
        (FieldDesc::Rationals, Element::Rat(r)) => Ok(is_rational_square(r)),
        (FieldDesc::PrimeField(p), Element::Fp { val, .. }) => {
            if *p == 2 {
                return Err(Error::ResidueCharTwo);
            }
            Ok(legendre_u64(*val, *p) == 1)
        }
        (FieldDesc::RationalFunction { base, .. }, Element::QFunc { num, den }) => {
            // num, den are coprime, so a square needs every irreducible
            // factor of each to occur to an even power, plus a square unit
            if !even_multiplicities_q(num) || !even_multiplicities_q(den) {
                return Ok(false);
            }
            let unit = num.leading() / den.leading();
            is_square(base, &Element::Rat(unit))
        }
        (FieldDesc::RationalFunction { base, .. }, Element::FpFunc { p, num, den }) => {
            if *p == 2 {
                return Err(Error::ResidueCharTwo);
            }
            let (unit_n, fac_n) = num.factor();
            let (unit_d, fac_d) = den.factor();
            for (_, e) in fac_n.iter().chain(fac_d.iter()) {
                if e % 2 == 1 {
                    return Ok(false);
                }
            }
            let unit =
                (unit_n as u128 * mod_inverse_u64(unit_d, *p).unwrap() as u128 % *p as u128) as u64;
            is_square(base, &Element::Fp { p: *p, val: unit })
        }
        (FieldDesc::Quadratic { m }, Element::Quad { a, b, .. }) => Ok(quad_is_square(m, a, b)),
        (FieldDesc::FiniteExt { p, modulus }, Element::Fq { val, .. }) => {
            if *p == 2 {
                return Err(Error::ResidueCharTwo);
            }
            let d = modulus.degree().unwrap() as u32;
            let mut q: u128 = 1;
            for _ in 0..d {
                q *= *p as u128;
            }
            let e = (q - 1) / 2;
            let r = val.powmod_u128(e, modulus);
            Ok(r.is_constant() && r.leading() == 1)
        }
        _ => Err(Error::UnsupportedField(format!("is_square over {field}"))),
    }
}

/// Whether every irreducible factor of g occurs to an even power (uses the
/// squarefree chain, no full factorization).
fn even_multiplicities_q(g: &QPoly) -> bool {
    g.squarefree_decomposition().iter().all(|(_, m)| m % 2 == 0)
}

/// Square test in Q(sqrt m): x + y sqrt(m) is a square iff its norm
/// x^2 - m y^2 is a rational square n^2 and (x + n)/2 or (x - n)/2 is a
/// nonzero rational square (y != 0); for y = 0 it reduces to x or x/m being
/// a rational square.
fn quad_is_square(m: &BigInt, x: &BigRational, y: &BigRational) -> bool {
    let mq = BigRational::from(m.clone());
    if y.is_zero() {
        return is_rational_square(x) || is_rational_square(&(x / &mq));
    }
    let norm = x * x - &mq * y * y;
    let n = match intfactor::rational_sqrt(&norm) {
        Some(n) => n,
        None => return false,
    };
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let s_plus = (x + &n) * &half;
    let s_minus = (x - &n) * &half;
    (!s_plus.is_zero() && is_rational_square(&s_plus))
        || (!s_minus.is_zero() && is_rational_square(&s_minus))
}

/// Canonical square-class representative (for hashing / canonical forms).
/// Over Q: the signed squarefree integer. Over F_p: 1 or the least
/// nonsquare. Over k(t): reduced leading unit times the product of odd-power
/// monic irreducible factors. Quadratic and F_q elements are returned
/// unreduced except for the trivial class (equality there goes through
/// `square_class_equal`).
pub fn square_class_rep(field: &FieldDesc, x: &Element) -> Result<Element> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    match (field, x) {
        (FieldDesc::Rationals, Element::Rat(r)) => {
            Ok(Element::Rat(BigRational::from(squarefree_part(r))))
        }
        (FieldDesc::PrimeField(p), Element::Fp { val, .. }) => {
            if *p == 2 {
                return Err(Error::ResidueCharTwo);
            }
            if legendre_u64(*val, *p) == 1 {
                Ok(Element::Fp { p: *p, val: 1 })
            } else {
                let ns = (2..*p).find(|&c| legendre_u64(c, *p) == -1).unwrap();
                Ok(Element::Fp { p: *p, val: ns })
            }
        }
        (FieldDesc::RationalFunction { base, .. }, Element::QFunc { num, den }) => {
            let (unit_n, fac_n) = num.factor();
            let (unit_d, fac_d) = den.factor();
            let mut poly = QPoly::one();
            for (f, e) in fac_n.iter().chain(fac_d.iter()) {
                if e % 2 == 1 {
                    poly = poly.mul(f);
                }
            }
            let unit_rep = square_class_rep(base, &Element::Rat(unit_n / unit_d))?;
            let unit_rat = match unit_rep {
                Element::Rat(r) => r,
                _ => unreachable!(),
            };
            Ok(Element::QFunc {
                num: poly.scale(&unit_rat),
                den: QPoly::one(),
            })
        }
        (FieldDesc::RationalFunction { base, .. }, Element::FpFunc { p, num, den }) => {
            if *p == 2 {
                return Err(Error::ResidueCharTwo);
            }
            let (unit_n, fac_n) = num.factor();
            let (unit_d, fac_d) = den.factor();
            let mut poly = FpPoly::one(*p);
            for (f, e) in fac_n.iter().chain(fac_d.iter()) {
                if e % 2 == 1 {
                    poly = poly.mul(f);
                }
            }
            let unit =
                (unit_n as u128 * mod_inverse_u64(unit_d, *p).unwrap() as u128 % *p as u128) as u64;
            let unit_rep = square_class_rep(base, &Element::Fp { p: *p, val: unit })?;
            let u = match unit_rep {
                Element::Fp { val, .. } => val,
                _ => unreachable!(),
            };
            Ok(Element::FpFunc {
                p: *p,
                num: poly.scale(u),
                den: FpPoly::one(*p),
            })
        }
        (FieldDesc::Quadratic { .. }, q @ Element::Quad { .. }) => {
            if is_square(field, q)? {
                Ok(field.one())
            } else {
                Ok(q.clone())
            }
        }
        (FieldDesc::FiniteExt { .. }, q @ Element::Fq { .. }) => {
            if is_square(field, q)? {
                Ok(field.one())
            } else {
                Ok(q.clone())
            }
        }
        _ => Err(Error::FieldMismatch("square_class_rep".into())),
    }
}

pub(crate) fn display_qpoly(g: &QPoly) -> String {
    if g.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in g.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        if !out.is_empty() {
            out.push(if c.is_negative() { '-' } else { '+' });
        } else if c.is_negative() {
            out.push('-');
        }
        let abs = c.abs();
        if !(abs.is_one() && i > 0) {
            if abs.denom().is_one() {
                out.push_str(&abs.numer().to_string());
            } else {
                out.push_str(&format!("({}/{})", abs.numer(), abs.denom()));
            }
        }
        if i >= 1 {
            out.push('t');
            if i >= 2 {
                out.push_str(&format!("^{i}"));
            }
        }
    }
    out
}

pub(crate) fn display_fppoly(g: &FpPoly) -> String {
    if g.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, &c) in g.coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        if c != 1 || i == 0 {
            out.push_str(&c.to_string());
        }
        if i >= 1 {
            out.push('t');
            if i >= 2 {
                out.push_str(&format!("^{i}"));
            }
        }
    }
    out
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Rat(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Element::Fp { val, .. } => write!(f, "{val}"),
            Element::QFunc { num, den } => {
                if den.is_constant() {
                    write!(f, "{}", display_qpoly(num))
                } else {
                    write!(f, "({})/({})", display_qpoly(num), display_qpoly(den))
                }
            }
            Element::FpFunc { num, den, .. } => {
                if den.is_constant() {
                    write!(f, "{}", display_fppoly(num))
                } else {
                    write!(f, "({})/({})", display_fppoly(num), display_fppoly(den))
                }
            }
            Element::Quad { m, a, b } => {
                let show = |r: &BigRational| {
                    if r.denom().is_one() {
                        format!("{}", r.numer())
                    } else {
                        format!("{}/{}", r.numer(), r.denom())
                    }
                };
                if b.is_zero() {
                    write!(f, "{}", show(a))
                } else if a.is_zero() {
                    write!(f, "{}*sqrt({})", show(b), m)
                } else {
                    write!(f, "{}+{}*sqrt({})", show(a), show(b), m)
                }
            }
            Element::Fq { val, .. } => write!(f, "[{}]", display_fppoly(val)),
        }
    }
}

// ---------------------------------------------------------------------------
// Expression parser for element strings: +, -, *, /, ^, parentheses, integer
// literals and the field variable. "6t+3" and "(t^2+1)/(t-1)" both parse.
// ---------------------------------------------------------------------------

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn peek_tok(&self, var: &str) -> Result<(Tok, usize)> {
        let mut pos = self.pos;
        while pos < self.src.len() && self.src[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= self.src.len() {
            return Ok((Tok::Eof, pos));
        }
        let c = self.src[pos];
        let tok = match c {
            b'+' => (Tok::Plus, pos + 1),
            b'-' => (Tok::Minus, pos + 1),
            b'*' => (Tok::Star, pos + 1),
            b'/' => (Tok::Slash, pos + 1),
            b'^' => (Tok::Caret, pos + 1),
            b'(' => (Tok::LParen, pos + 1),
            b')' => (Tok::RParen, pos + 1),
            b'0'..=b'9' => {
                let start = pos;
                let mut end = pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.src[start..end]).unwrap();
                let n: i64 = s
                    .parse()
                    .map_err(|_| Error::Parse("integer literal out of range".into()))?;
                (Tok::Num(n), end)
            }
            _ => {
                let vb = var.as_bytes();
                if self.src[pos..].starts_with(vb) {
                    (Tok::Var, pos + vb.len())
                } else {
                    return Err(Error::Parse(format!(
                        "unexpected character '{}' at {}",
                        c as char, pos
                    )));
                }
            }
        };
        Ok(tok)
    }

    fn next_tok(&mut self, var: &str) -> Result<Tok> {
        let (t, pos) = self.peek_tok(var)?;
        self.pos = pos;
        Ok(t)
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    field: &'a FieldDesc,
    var: String,
}

impl<'a> Parser<'a> {
    fn parse_expr(&mut self) -> Result<Element> {
        let mut acc = self.parse_term()?;
        loop {
            let (t, pos) = self.lexer.peek_tok(&self.var)?;
            match t {
                Tok::Plus => {
                    self.lexer.pos = pos;
                    let rhs = self.parse_term()?;
                    acc = acc.add(&rhs);
                }
                Tok::Minus => {
                    self.lexer.pos = pos;
                    let rhs = self.parse_term()?;
                    acc = acc.sub(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Element> {
        let mut acc = self.parse_juxt()?;
        loop {
            let (t, pos) = self.lexer.peek_tok(&self.var)?;
            match t {
                Tok::Star => {
                    self.lexer.pos = pos;
                    let rhs = self.parse_juxt()?;
                    acc = acc.mul(&rhs);
                }
                Tok::Slash => {
                    self.lexer.pos = pos;
                    let rhs = self.parse_juxt()?;
                    if rhs.is_zero() {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// A juxtaposed product: "6t", "2(t+1)".
    fn parse_juxt(&mut self) -> Result<Element> {
        let mut acc = self.parse_power()?;
        loop {
            let (t, _) = self.lexer.peek_tok(&self.var)?;
            match t {
                Tok::Num(_) | Tok::Var | Tok::LParen => {
                    let rhs = self.parse_power()?;
                    acc = acc.mul(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_power(&mut self) -> Result<Element> {
        let base = self.parse_atom()?;
        let (t, pos) = self.lexer.peek_tok(&self.var)?;
        if t == Tok::Caret {
            self.lexer.pos = pos;
            match self.lexer.next_tok(&self.var)? {
                Tok::Num(e) => {
                    if base.is_zero() {
                        if e == 0 {
                            return Err(Error::Parse("0^0".into()));
                        }
                        return Ok(base);
                    }
                    base.pow(e)
                }
                _ => Err(Error::Parse("expected integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<Element> {
        match self.lexer.next_tok(&self.var)? {
            Tok::Num(n) => Ok(self.field.integer(n)),
            Tok::Var => self.field.variable(),
            Tok::Minus => Ok(self.parse_power()?.neg()),
            Tok::Plus => self.parse_power(),
            Tok::LParen => {
                let inner = self.parse_expr()?;
                match self.lexer.next_tok(&self.var)? {
                    Tok::RParen => Ok(inner),
                    _ => Err(Error::Parse("expected ')'".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse an element of the given field from its string form.
pub fn parse_element(field: &FieldDesc, src: &str) -> Result<Element> {
    let var = field.var_name().unwrap_or("t").to_string();
    let mut parser = Parser {
        lexer: Lexer::new(src),
        field,
        var: var.clone(),
    };
    let out = parser.parse_expr()?;
    match parser.lexer.next_tok(&var)? {
        Tok::Eof => Ok(out),
        t => Err(Error::Parse(format!("trailing input: {t:?}"))),
    }
}

/// Parse a monic-irreducible place polynomial over the given function field
/// and build the place.
pub fn parse_place_poly(field: &FieldDesc, src: &str) -> Result<Place> {
    let e = parse_element(field, src)?;
    Place::irreducible(field, &e)
}
