//! Valuation sets, divisors, Picard groups, and ideles.
//!
//! A valuation set V is one of the certified descriptor shapes; condition
//! (A) (finite support of principal divisors) holds by construction for all
//! of them. Pic(V) is configuration-certified: the supported descriptors
//! admit elementary certificates (PID witness or the degree map) rather than
//! general scheme machinery.

use crate::fields::{uniformizer, valuation, Element, FieldDesc, Place};
use crate::intfactor;
use crate::qpoly::QPoly;
use crate::{Error, Result};
use num::bigint::BigInt;
use num::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Descriptor of a set of places.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum VSetKind {
    /// All finite primes of Q outside S.
    AllPrimesExcept(BTreeSet<u64>),
    /// All monic irreducible polynomials of k(t).
    GeometricAffine,
    /// Monic irreducibles plus the degree place.
    GeometricProjective,
    /// Monic irreducibles plus the Gauss primes p not in S (Q(t) only).
    DivisorialQt(BTreeSet<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ValuationSet {
    pub field: FieldDesc,
    pub kind: VSetKind,
}

impl ValuationSet {
    pub fn new(field: FieldDesc, kind: VSetKind) -> Result<Self> {
        match (&field, &kind) {
            (FieldDesc::Rationals, VSetKind::AllPrimesExcept(_)) => {}
            (FieldDesc::RationalFunction { .. }, VSetKind::GeometricAffine)
            | (FieldDesc::RationalFunction { .. }, VSetKind::GeometricProjective) => {}
            (FieldDesc::RationalFunction { base, .. }, VSetKind::DivisorialQt(s)) => {
                if **base != FieldDesc::Rationals {
                    return Err(Error::UnsupportedConfiguration(
                        "Gauss places exist over Q(t) only".into(),
                    ));
                }
                if !s.contains(&2) {
                    return Err(Error::UnsupportedConfiguration(
                        "condition (B): the divisorial Q(t) descriptor requires 2 in S".into(),
                    ));
                }
            }
            _ => {
                return Err(Error::UnsupportedConfiguration(format!(
                    "descriptor {kind:?} over {field}"
                )))
            }
        }
        Ok(ValuationSet { field, kind })
    }

    /// Condition (B): no place of V has residue characteristic 2.
    pub fn condition_b(&self) -> bool {
        match &self.kind {
            VSetKind::AllPrimesExcept(s) => s.contains(&2),
            VSetKind::GeometricAffine | VSetKind::GeometricProjective => {
                self.field.characteristic() != 2
            }
            VSetKind::DivisorialQt(s) => s.contains(&2),
        }
    }

    pub fn contains(&self, place: &Place) -> bool {
        match (&self.kind, place) {
            (VSetKind::AllPrimesExcept(s), Place::FinitePrime(p)) => !s.contains(p),
            (VSetKind::GeometricAffine, Place::IrreducibleQ(_))
            | (VSetKind::GeometricAffine, Place::IrreducibleFp(_))
            | (VSetKind::GeometricProjective, Place::IrreducibleQ(_))
            | (VSetKind::GeometricProjective, Place::IrreducibleFp(_)) => true,
            (VSetKind::GeometricProjective, Place::DegreePlace) => true,
            (VSetKind::DivisorialQt(_), Place::IrreducibleQ(_)) => true,
            (VSetKind::DivisorialQt(s), Place::GaussPrime(p)) => !s.contains(p),
            _ => false,
        }
    }

    /// Enumerate places of height <= h, in canonical order. Heights: the
    /// prime itself for primes; for polynomial places over F_p the degree,
    /// over Q the maximum of degree-<=2 integer coefficient magnitudes.
    pub fn enumerate_up_to(&self, h: u64) -> Result<Vec<Place>> {
        let mut out: Vec<Place> = vec![];
        match (&self.kind, &self.field) {
            (VSetKind::AllPrimesExcept(s), _) => {
                for p in 2..=h {
                    if intfactor::is_prime(&BigInt::from(p)) && !s.contains(&p) {
                        out.push(Place::FinitePrime(p));
                    }
                }
            }
            (kind, FieldDesc::RationalFunction { base, .. }) => {
                match &**base {
                    FieldDesc::Rationals => {
                        let hi = h as i64;
                        for c in -hi..=hi {
                            out.push(Place::IrreducibleQ(QPoly::from_int_coeffs(&[-c, 1])));
                        }
                        for b in -hi..=hi {
                            for c in -hi..=hi {
                                let f = QPoly::from_int_coeffs(&[c, b, 1]);
                                if f.is_irreducible() {
                                    out.push(Place::IrreducibleQ(f));
                                }
                            }
                        }
                    }
                    FieldDesc::PrimeField(p) => {
                        // all monic irreducibles of degree <= h
                        for deg in 1..=h.min(4) {
                            let mut coeffs = vec![0u64; deg as usize + 1];
                            coeffs[deg as usize] = 1;
                            enumerate_fp_polys(*p, &mut coeffs, 0, &mut |f| {
                                if f.is_irreducible() {
                                    out.push(Place::IrreducibleFp(f.clone()));
                                }
                            });
                        }
                    }
                    _ => unreachable!(),
                }
                match kind {
                    VSetKind::GeometricProjective => out.push(Place::DegreePlace),
                    VSetKind::DivisorialQt(s) => {
                        for p in 2..=h {
                            if intfactor::is_prime(&BigInt::from(p)) && !s.contains(&p) {
                                out.push(Place::GaussPrime(p));
                            }
                        }
                    }
                    _ => {}
                }
            }
            _ => return Err(Error::UnsupportedConfiguration("enumerate".into())),
        }
        out.sort();
        Ok(out)
    }
}

fn enumerate_fp_polys(
    p: u64,
    coeffs: &mut Vec<u64>,
    pos: usize,
    f: &mut impl FnMut(&crate::fppoly::FpPoly),
) {
    if pos + 1 == coeffs.len() {
        f(&crate::fppoly::FpPoly::new(p, coeffs.clone()));
        return;
    }
    for c in 0..p {
        coeffs[pos] = c;
        enumerate_fp_polys(p, coeffs, pos + 1, f);
    }
    coeffs[pos] = 0;
}

impl fmt::Display for ValuationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            VSetKind::AllPrimesExcept(s) => {
                let list: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                write!(f, "primes of {} except {{{}}}", self.field, list.join(","))
            }
            VSetKind::GeometricAffine => write!(f, "affine geometric places of {}", self.field),
            VSetKind::GeometricProjective => {
                write!(f, "projective geometric places of {}", self.field)
            }
            VSetKind::DivisorialQt(s) => {
                let list: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                write!(
                    f,
                    "geometric + Gauss places of {} (Gauss primes outside {{{}}})",
                    self.field,
                    list.join(",")
                )
            }
        }
    }
}

/// A divisor: finite Place -> multiplicity map inside V.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub vset: ValuationSet,
    pub support: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn new(vset: ValuationSet, support: BTreeMap<Place, i64>) -> Result<Self> {
        for (place, mult) in &support {
            if *mult == 0 {
                return Err(Error::Degenerate("zero multiplicity stored".into()));
            }
            if !vset.contains(place) {
                return Err(Error::Degenerate(format!("place {place} outside V")));
            }
        }
        Ok(Divisor { vset, support })
    }

    pub fn zero(vset: ValuationSet) -> Divisor {
        Divisor {
            vset,
            support: BTreeMap::new(),
        }
    }

    pub fn add(&self, other: &Divisor) -> Result<Divisor> {
        if self.vset != other.vset {
            return Err(Error::FieldMismatch("divisor ambient mismatch".into()));
        }
        let mut support = self.support.clone();
        for (place, mult) in &other.support {
            let e = support.entry(place.clone()).or_insert(0);
            *e += mult;
            if *e == 0 {
                support.remove(place);
            }
        }
        Ok(Divisor {
            vset: self.vset.clone(),
            support,
        })
    }

    pub fn neg(&self) -> Divisor {
        Divisor {
            vset: self.vset.clone(),
            support: self.support.iter().map(|(p, m)| (p.clone(), -m)).collect(),
        }
    }

    /// Total degree (for projective function-field descriptors).
    pub fn total_degree(&self) -> i64 {
        self.support
            .iter()
            .map(|(place, mult)| place_degree(place) * mult)
            .sum()
    }
}

fn place_degree(place: &Place) -> i64 {
    match place {
        Place::IrreducibleQ(f) => f.degree().unwrap_or(0) as i64,
        Place::IrreducibleFp(f) => f.degree().unwrap_or(0) as i64,
        _ => 1,
    }
}

/// The principal divisor (a) = sum_{v in V} v(a) v.
pub fn principal_divisor(vset: &ValuationSet, a: &Element) -> Result<Divisor> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let field = &vset.field;
    if !a.lies_in(field) {
        return Err(Error::FieldMismatch("principal_divisor".into()));
    }
    let mut support: BTreeMap<Place, i64> = BTreeMap::new();
    let mut push = |place: Place, v: i64| {
        if v != 0 {
            support.insert(place, v);
        }
    };
    match a {
        Element::Rat(x) => {
            let (_, factors) = intfactor::factor_rational(x);
            for (p, e) in factors {
                let p = p.to_u64_digits().1.first().copied().unwrap_or(0);
                let place = Place::FinitePrime(p);
                if vset.contains(&place) {
                    push(place, e);
                }
            }
        }
        Element::QFunc { num, den } => {
            let mut exps: BTreeMap<Place, i64> = BTreeMap::new();
            for (poly, sign) in [(num, 1i64), (den, -1i64)] {
                if poly.is_constant() {
                    continue;
                }
                let (_, factors) = poly.factor();
                for (f, e) in factors {
                    *exps.entry(Place::IrreducibleQ(f)).or_insert(0) += sign * e as i64;
                }
            }
            for (place, e) in exps {
                if vset.contains(&place) {
                    push(place, e);
                }
            }
            if vset.contains(&Place::DegreePlace) {
                push(
                    Place::DegreePlace,
                    valuation(field, &Place::DegreePlace, a)?,
                );
            }
            if let VSetKind::DivisorialQt(_) = &vset.kind {
                // Gauss places supported at content primes
                let mut primes: BTreeSet<u64> = BTreeSet::new();
                for poly in [num, den] {
                    for c in &poly.coeffs {
                        if c.is_zero() {
                            continue;
                        }
                        for (p, _) in intfactor::factor(&c.numer().abs()) {
                            primes.insert(p.to_u64_digits().1.first().copied().unwrap_or(0));
                        }
                        for (p, _) in intfactor::factor(&c.denom().abs()) {
                            primes.insert(p.to_u64_digits().1.first().copied().unwrap_or(0));
                        }
                    }
                }
                for p in primes {
                    let place = Place::GaussPrime(p);
                    if vset.contains(&place) {
                        push(place.clone(), valuation(field, &place, a)?);
                    }
                }
            }
        }
        Element::FpFunc { num, den, .. } => {
            let mut exps: BTreeMap<Place, i64> = BTreeMap::new();
            for (poly, sign) in [(num, 1i64), (den, -1i64)] {
                if poly.is_constant() {
                    continue;
                }
                let (_, factors) = poly.factor();
                for (f, e) in factors {
                    *exps.entry(Place::IrreducibleFp(f)).or_insert(0) += sign * e as i64;
                }
            }
            for (place, e) in exps {
                if vset.contains(&place) {
                    push(place, e);
                }
            }
            if vset.contains(&Place::DegreePlace) {
                push(
                    Place::DegreePlace,
                    valuation(field, &Place::DegreePlace, a)?,
                );
            }
        }
        _ => return Err(Error::UnsupportedField("principal_divisor".into())),
    }
    Divisor::new(vset.clone(), support)
}

/// An idele: finitely many explicit nonzero components, units elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Idele {
    pub vset: ValuationSet,
    pub components: BTreeMap<Place, Element>,
}

impl Idele {
    pub fn new(vset: ValuationSet, components: BTreeMap<Place, Element>) -> Result<Self> {
        for (place, x) in &components {
            if x.is_zero() {
                return Err(Error::ZeroElement);
            }
            if !vset.contains(place) {
                return Err(Error::Degenerate(format!("place {place} outside V")));
            }
            if !x.lies_in(&vset.field) {
                return Err(Error::FieldMismatch("idele component".into()));
            }
        }
        Ok(Idele { vset, components })
    }

    pub fn one(vset: ValuationSet) -> Idele {
        Idele {
            vset,
            components: BTreeMap::new(),
        }
    }

    /// The principal idele (a, a, a, ...): one explicit component at each
    /// place of V where a is not a unit.
    pub fn principal(vset: &ValuationSet, a: &Element) -> Result<Idele> {
        let divisor = principal_divisor(vset, a)?;
        let components = divisor
            .support
            .keys()
            .map(|place| (place.clone(), a.clone()))
            .collect();
        Idele::new(vset.clone(), components)
    }

    pub fn mul(&self, other: &Idele) -> Result<Idele> {
        if self.vset != other.vset {
            return Err(Error::FieldMismatch("idele ambient mismatch".into()));
        }
        let mut components = self.components.clone();
        for (place, x) in &other.components {
            match components.remove(place) {
                None => {
                    components.insert(place.clone(), x.clone());
                }
                Some(y) => {
                    let prod = y.mul(x);
                    if prod.is_zero() {
                        return Err(Error::ZeroElement);
                    }
                    components.insert(place.clone(), prod);
                }
            }
        }
        Idele::new(self.vset.clone(), components)
    }

    /// Whether every component is a unit at its place (the subgroup of
    /// integral ideles; equality of ideles is modulo unit components).
    pub fn is_integral(&self) -> Result<bool> {
        for (place, x) in &self.components {
            if valuation(&self.vset.field, place, x)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// nu(x) = sum v(x_v) v.
    pub fn divisor(&self) -> Result<Divisor> {
        let mut support = BTreeMap::new();
        for (place, x) in &self.components {
            let v = valuation(&self.vset.field, place, x)?;
            if v != 0 {
                support.insert(place.clone(), v);
            }
        }
        Divisor::new(self.vset.clone(), support)
    }
}

/// Reported structure of Pic(V).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PicStructure {
    Trivial,
    /// Infinite cyclic via the total-degree map.
    InfiniteCyclicDegree,
    /// Finite with invariant factors (no certified configuration produces
    /// this today).
    Finite(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicReport {
    pub structure: PicStructure,
    pub pic2_order: u64,
    pub certificate: String,
}

/// Certified Picard groups per descriptor.
pub fn pic(vset: &ValuationSet) -> Result<PicReport> {
    match (&vset.field, &vset.kind) {
        (FieldDesc::Rationals, VSetKind::AllPrimesExcept(s)) => Ok(PicReport {
            structure: PicStructure::Trivial,
            pic2_order: 1,
            certificate: format!(
                "Z localized away from {{{}}} is a PID; every divisor is realized by a product of uniformizers",
                s.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
            ),
        }),
        (FieldDesc::RationalFunction { .. }, VSetKind::GeometricAffine) => Ok(PicReport {
            structure: PicStructure::Trivial,
            pic2_order: 1,
            certificate: "k[t] is a PID; monic generators realize every divisor".into(),
        }),
        (FieldDesc::RationalFunction { .. }, VSetKind::GeometricProjective) => Ok(PicReport {
            structure: PicStructure::InfiniteCyclicDegree,
            pic2_order: 2,
            certificate:
                "degree map: a divisor is principal iff its total degree vanishes; (t) - (deg) generates"
                    .into(),
        }),
        _ => Err(Error::UnsupportedConfiguration(format!(
            "Pic is uncertified for {vset}"
        ))),
    }
}

/// The image of an idele class in Pic(V).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdeleClassHandle {
    /// Pic(V) trivial: a global witness with (witness) = nu(x).
    TrivialWithWitness(Element),
    /// Pic(V) = Z via degree: the class is the total degree.
    DegreeClass(i64),
}

/// Coset label in Pic(V)/2Pic(V).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pic2Coset {
    Trivial,
    NonTrivial,
}

/// The class of nu(x) in Pic(V), with a constructive certificate.
pub fn idele_class(x: &Idele) -> Result<IdeleClassHandle> {
    let report = pic(&x.vset)?;
    let d = x.divisor()?;
    match report.structure {
        PicStructure::Trivial => Ok(IdeleClassHandle::TrivialWithWitness(divisor_witness(&d)?)),
        PicStructure::InfiniteCyclicDegree => Ok(IdeleClassHandle::DegreeClass(d.total_degree())),
        PicStructure::Finite(_) => Err(Error::UnsupportedConfiguration("finite Pic".into())),
    }
}

/// The coset of the class of x in Pic(V)/2Pic(V).
pub fn pic2_coset(x: &Idele) -> Result<Pic2Coset> {
    match idele_class(x)? {
        IdeleClassHandle::TrivialWithWitness(_) => Ok(Pic2Coset::Trivial),
        IdeleClassHandle::DegreeClass(d) => {
            if d.rem_euclid(2) == 0 {
                Ok(Pic2Coset::Trivial)
            } else {
                Ok(Pic2Coset::NonTrivial)
            }
        }
    }
}

/// A global element realizing a divisor over a trivial-Pic configuration:
/// the product of uniformizer powers.
pub fn divisor_witness(d: &Divisor) -> Result<Element> {
    let field = &d.vset.field;
    let mut out = field.one();
    for (place, mult) in &d.support {
        let pi = uniformizer(field, place)?;
        out = out.mul(&pi.pow(*mult)?);
    }
    Ok(out)
}
