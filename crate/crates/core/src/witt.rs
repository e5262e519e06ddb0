//! Diagonal quadratic forms, Witt-ring operations, Pfister forms, the first
//! and second residue homomorphisms, and equivalence / isotropy deciders.
//!
//! Deciders per field:
//! * Q: dimension, signature, signed discriminant, and Hasse symbols at the
//!   finite set of relevant places;
//! * F_p / F_q: dimension parity and discriminant;
//! * Q(sqrt m): the quadfield machinery;
//! * k(t): all second residues at the irreducible factors of the entries,
//!   decided recursively over the residue fields, then the constant part at
//!   a specialization point.
//!
//! Local questions at a place of Q ("virtual K_v") are answered from
//! valuations and residue data only; completions are never materialized.

use crate::fields::{
    self, parse_element, residue_image, square_class_rep, uniformizer, valuation, Element,
    FieldDesc, Place,
};
use crate::localq::{self, hilbert_symbol, is_square_local, isotropic_qp, QPlace};
use crate::quadfield::QuadraticField;
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::Signed;
use std::collections::{BTreeMap, BTreeSet};

/// A nondegenerate diagonal quadratic form <a_1, ..., a_n>.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QForm {
    pub field: FieldDesc,
    pub entries: Vec<Element>,
}

impl QForm {
    pub fn new(field: FieldDesc, entries: Vec<Element>) -> Result<Self> {
        field.check_form_theoretic()?;
        if entries.is_empty() {
            return Err(Error::Degenerate("empty diagonal".into()));
        }
        for e in &entries {
            if e.is_zero() {
                return Err(Error::ZeroElement);
            }
            if !e.lies_in(&field) {
                return Err(Error::FieldMismatch(format!("{e} not in {field}")));
            }
        }
        Ok(QForm { field, entries })
    }

    pub fn from_strs(field: &FieldDesc, entries: &[&str]) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|s| parse_element(field, s))
            .collect::<Result<Vec<_>>>()?;
        QForm::new(field.clone(), parsed)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Sorted square-class-reduced entry list (canonicalization for hashing;
    /// entry order is semantically irrelevant).
    pub fn canonical(&self) -> Result<QForm> {
        let mut entries = self
            .entries
            .iter()
            .map(|e| square_class_rep(&self.field, e))
            .collect::<Result<Vec<_>>>()?;
        entries.sort();
        Ok(QForm {
            field: self.field.clone(),
            entries,
        })
    }

    /// Product of the entries.
    pub fn det(&self) -> Element {
        let mut d = self.field.one();
        for e in &self.entries {
            d = d.mul(e);
        }
        d
    }

    /// Signed discriminant (-1)^{n(n-1)/2} det.
    pub fn signed_disc(&self) -> Element {
        let n = self.dim();
        let d = self.det();
        if (n * (n - 1) / 2) % 2 == 1 {
            d.neg()
        } else {
            d
        }
    }
}

/// A Witt class, held by a representative form.
#[derive(Debug, Clone)]
pub struct WittClass {
    pub field: FieldDesc,
    pub representative: QForm,
}

impl WittClass {
    pub fn new(q: QForm) -> Self {
        WittClass {
            field: q.field.clone(),
            representative: q,
        }
    }

    /// Class equality: the difference must be hyperbolic.
    pub fn equivalent(&self, other: &WittClass) -> Result<bool> {
        witt_equivalent(&self.field, &self.representative, &other.representative)
    }

    pub fn is_zero(&self) -> Result<bool> {
        witt_trivial(&self.field, &self.representative)
    }

    /// Canonical representative: square-class-reduced sorted entries with
    /// hyperbolic pairs stripped greedily.
    pub fn reduced(&self) -> Result<QForm> {
        let canon = self.representative.canonical()?;
        let mut entries = canon.entries;
        'outer: loop {
            for i in 0..entries.len() {
                for j in (i + 1)..entries.len() {
                    let neg = entries[j].neg();
                    if fields::square_class_equal(&self.field, &entries[i], &neg)? {
                        entries.remove(j);
                        entries.remove(i);
                        continue 'outer;
                    }
                }
            }
            break;
        }
        Ok(QForm {
            field: self.field.clone(),
            entries,
        })
    }
}

/// Pfister slots <<a_1, ..., a_d>>.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfisterSpec {
    pub slots: Vec<Element>,
}

impl PfisterSpec {
    pub fn new(slots: Vec<Element>) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::Degenerate("d >= 1 required".into()));
        }
        if slots.iter().any(|s| s.is_zero()) {
            return Err(Error::ZeroSlot);
        }
        Ok(PfisterSpec { slots })
    }
}

/// Expansion of the d-fold Pfister form <1,-a_1> (x) ... (x) <1,-a_d>:
/// 2^d diagonal entries, built by q <- q + (-a_i) q.
pub fn pfister(field: &FieldDesc, spec: &PfisterSpec) -> Result<QForm> {
    field.check_form_theoretic()?;
    let mut entries = vec![field.one()];
    for a in &spec.slots {
        if a.is_zero() {
            return Err(Error::ZeroSlot);
        }
        if !a.lies_in(field) {
            return Err(Error::FieldMismatch(format!("{a} not in {field}")));
        }
        let neg_a = a.neg();
        let mut tail: Vec<Element> = entries.iter().map(|e| e.mul(&neg_a)).collect();
        entries.append(&mut tail);
    }
    QForm::new(field.clone(), entries)
}

/// q1 | q2 (orthogonal sum).
pub fn direct_sum(q1: &QForm, q2: &QForm) -> Result<QForm> {
    if q1.field != q2.field {
        return Err(Error::FieldMismatch("direct_sum".into()));
    }
    let mut entries = q1.entries.clone();
    entries.extend(q2.entries.iter().cloned());
    QForm::new(q1.field.clone(), entries)
}

/// lambda * q (entry-wise scaling).
pub fn scale(lambda: &Element, q: &QForm) -> Result<QForm> {
    if lambda.is_zero() {
        return Err(Error::ZeroScalar);
    }
    if !lambda.lies_in(&q.field) {
        return Err(Error::FieldMismatch("scale".into()));
    }
    QForm::new(
        q.field.clone(),
        q.entries.iter().map(|e| e.mul(lambda)).collect(),
    )
}

/// q1 (x) q2 (all pairwise products).
pub fn tensor(q1: &QForm, q2: &QForm) -> Result<QForm> {
    if q1.field != q2.field {
        return Err(Error::FieldMismatch("tensor".into()));
    }
    let mut entries = Vec::with_capacity(q1.dim() * q2.dim());
    for a in &q1.entries {
        for b in &q2.entries {
            entries.push(a.mul(b));
        }
    }
    QForm::new(q1.field.clone(), entries)
}

/// The negated form.
pub fn negate(q: &QForm) -> QForm {
    QForm {
        field: q.field.clone(),
        entries: q.entries.iter().map(|e| e.neg()).collect(),
    }
}

/// <1,-lambda> (x) q, the shift witnessing [q] - [lambda q] in I^{d+1}.
pub fn lemma_shift_delta(field: &FieldDesc, q: &QForm, lambda: &Element) -> Result<QForm> {
    if lambda.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let shift = QForm::new(field.clone(), vec![field.one(), lambda.neg()])?;
    tensor(&shift, q)
}

/// The Arason-Pfister dimension floor 2^{floor(log2 n) + 2} forcing
/// hyperbolicity of the 2n-dimensional difference forms in the sieve.
pub fn arason_pfister_floor(n: u64) -> u64 {
    assert!(n >= 1);
    let ell = n.ilog2() + 1;
    1u64 << (ell + 1)
}

/// The first and second residue parts of a form at a place: entries of even
/// valuation land in `first` (unit image), odd valuation in `second`.
#[derive(Debug, Clone)]
pub struct ResidueSplit {
    pub first: QForm,
    pub second: QForm,
    pub scaling_used: Element,
    pub residue_field: FieldDesc,
}

pub fn residue_split(field: &FieldDesc, place: &Place, q: &QForm) -> Result<ResidueSplit> {
    let rc = place.residue_characteristic(field)?;
    if rc == 2 {
        return Err(Error::ResidueCharTwo);
    }
    let kappa = place.residue_field(field)?;
    let pi = uniformizer(field, place)?;
    let mut first = vec![];
    let mut second = vec![];
    for a in &q.entries {
        let v = valuation(field, place, a)?;
        let unit = a.mul(&pi.pow(-v)?);
        let image = residue_image(field, place, &unit)?;
        if v.rem_euclid(2) == 0 {
            first.push(image);
        } else {
            second.push(image);
        }
    }
    let mk = |entries: Vec<Element>| -> QForm {
        QForm {
            field: kappa.clone(),
            entries,
        }
    };
    Ok(ResidueSplit {
        first: mk(first),
        second: mk(second),
        scaling_used: pi,
        residue_field: kappa,
    })
}

// ---------------------------------------------------------------------------
// Rational (K = Q) invariant bundle
// ---------------------------------------------------------------------------

pub(crate) fn rational_entries(q: &QForm) -> Result<Vec<BigRational>> {
    q.entries
        .iter()
        .map(|e| match e {
            Element::Rat(x) => Ok(x.clone()),
            _ => Err(Error::FieldMismatch("expected rational entries".into())),
        })
        .collect()
}

/// Signature over R: (#positive) - (#negative).
pub fn signature(q: &QForm) -> Result<i64> {
    let entries = rational_entries(q)?;
    Ok(entries
        .iter()
        .map(|a| if a.is_positive() { 1 } else { -1 })
        .sum())
}

/// Hasse symbol prod_{i<j} (a_i, a_j)_v of a rational diagonal form.
pub fn hasse_at(entries: &[BigRational], v: QPlace) -> i32 {
    let mut s = 1;
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            s *= hilbert_symbol(&entries[i], &entries[j], v);
        }
    }
    s
}

/// The Witt (Clifford) invariant of a rational form as its ramification set:
/// places where the class of the Clifford algebra is nontrivial. Uses the
/// standard translation from the Hasse symbol, by dimension mod 8.
pub fn clifford_ram_set(entries: &[BigRational]) -> BTreeSet<QPlace> {
    let n = entries.len();
    let det: BigRational = entries.iter().product();
    let m1 = BigRational::from(BigInt::from(-1));
    let mut out = BTreeSet::new();
    for v in localq::relevant_places(entries) {
        let mut c = hasse_at(entries, v);
        match n % 8 {
            1 | 2 => {}
            3 | 4 => c *= hilbert_symbol(&m1, &-det.clone(), v),
            5 | 6 => c *= hilbert_symbol(&m1, &m1, v),
            _ => c *= hilbert_symbol(&m1, &det, v),
        }
        if c == -1 {
            out.insert(v);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Witt-triviality / equivalence deciders
// ---------------------------------------------------------------------------

/// Whether [q] = 0 in W(K).
pub fn witt_trivial(field: &FieldDesc, q: &QForm) -> Result<bool> {
    field.check_form_theoretic()?;
    if q.dim() % 2 != 0 {
        return Ok(false);
    }
    match field {
        FieldDesc::Rationals => {
            let entries = rational_entries(q)?;
            if signature(q)? != 0 {
                return Ok(false);
            }
            let disc = match q.signed_disc() {
                Element::Rat(x) => x,
                _ => unreachable!(),
            };
            if !crate::intfactor::is_rational_square(&disc) {
                return Ok(false);
            }
            let k = q.dim() / 2;
            let hyp_exp = (k * (k - 1) / 2) % 2;
            let m1 = BigRational::from(BigInt::from(-1));
            for v in localq::relevant_places(&entries) {
                let hyp = if hyp_exp == 1 {
                    hilbert_symbol(&m1, &m1, v)
                } else {
                    1
                };
                if hasse_at(&entries, v) != hyp {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        FieldDesc::PrimeField(_) | FieldDesc::FiniteExt { .. } => {
            fields::is_square(field, &q.signed_disc())
        }
        FieldDesc::Quadratic { m } => {
            let k = QuadraticField::new(m.clone())?;
            k.witt_trivial(&q.entries)
        }
        FieldDesc::RationalFunction { base, .. } => witt_trivial_function_field(field, base, q),
    }
}

/// Geometric places where the entries of q have nonzero valuation.
pub fn entry_support_places(field: &FieldDesc, q: &QForm) -> Result<Vec<Place>> {
    let mut set: BTreeSet<Place> = BTreeSet::new();
    for e in &q.entries {
        match e {
            Element::QFunc { num, den } => {
                for poly in [num, den] {
                    if poly.is_constant() {
                        continue;
                    }
                    let (_, factors) = poly.factor();
                    for (f, _) in factors {
                        set.insert(Place::IrreducibleQ(f));
                    }
                }
            }
            Element::FpFunc { num, den, .. } => {
                for poly in [num, den] {
                    if poly.is_constant() {
                        continue;
                    }
                    let (_, factors) = poly.factor();
                    for (f, _) in factors {
                        set.insert(Place::IrreducibleFp(f));
                    }
                }
            }
            Element::Rat(x) => {
                if field == &FieldDesc::Rationals {
                    let (_, f) = crate::intfactor::factor_rational(x);
                    for (p, _) in f {
                        set.insert(Place::FinitePrime(
                            p.to_u64_digits().1.first().copied().unwrap_or(0),
                        ));
                    }
                }
            }
            _ => {}
        }
    }
    Ok(set.into_iter().collect())
}

fn witt_trivial_function_field(field: &FieldDesc, base: &FieldDesc, q: &QForm) -> Result<bool> {
    // all geometric second residues must vanish over their residue fields
    for place in entry_support_places(field, q)? {
        let split = residue_split(field, &place, q)?;
        if !split.second.entries.is_empty() && !witt_trivial(&split.residue_field, &split.second)? {
            return Ok(false);
        }
    }
    // constant part: specialize at the smallest non-negative integer point
    // where every entry is a unit; over F_p fall back to the first residue
    // at a linear place (the second residue there is already known trivial)
    let specialization = constant_part(field, base, q)?;
    witt_trivial(base, &specialization)
}

/// The W(k)-component of a class over k(t) whose geometric second residues
/// all vanish.
fn constant_part(field: &FieldDesc, base: &FieldDesc, q: &QForm) -> Result<QForm> {
    let limit: i64 = match base {
        FieldDesc::PrimeField(p) => *p as i64,
        _ => i64::MAX,
    };
    let mut c: i64 = 0;
    while c < limit {
        let point = linear_place(field, c)?;
        let all_units = q
            .entries
            .iter()
            .map(|e| valuation(field, &point, e))
            .collect::<Result<Vec<_>>>()?;
        if all_units.iter().all(|&v| v == 0) {
            let entries = q
                .entries
                .iter()
                .map(|e| residue_image(field, &point, e))
                .collect::<Result<Vec<_>>>()?;
            return QForm::new(base.clone(), entries);
        }
        c += 1;
    }
    // no unit point (possible over F_p only): take the first-residue part at
    // t, which computes the same W(k)-component on ker d2
    let point = linear_place(field, 0)?;
    let split = residue_split(field, &point, q)?;
    if split.first.entries.is_empty() {
        // vanishing first part: the constant component is the zero class
        return QForm::new(base.clone(), vec![base.one(), base.integer(-1)]);
    }
    Ok(split.first)
}

fn linear_place(field: &FieldDesc, c: i64) -> Result<Place> {
    // the place (t - c)
    let t = field.variable()?;
    let elem = t.sub(&field.integer(c));
    Place::irreducible(field, &elem)
}

/// Whether [q1] = [q2] in W(K).
pub fn witt_equivalent(field: &FieldDesc, q1: &QForm, q2: &QForm) -> Result<bool> {
    if q1.field != *field || q2.field != *field {
        return Err(Error::FieldMismatch("witt_equivalent".into()));
    }
    let diff = direct_sum(q1, &negate(q2))?;
    witt_trivial(field, &diff)
}

/// Whether q is hyperbolic as a form (even dimension and trivial class).
pub fn is_hyperbolic(field: &FieldDesc, q: &QForm) -> Result<bool> {
    Ok(q.dim() % 2 == 0 && witt_trivial(field, q)?)
}

/// Invariant state for the rational anisotropic-kernel computation, chopped
/// one hyperbolic plane at a time.
struct RatState {
    dim: usize,
    det: BigRational,
    hasse: BTreeMap<QPlace, i32>,
    sgn: i64,
    places: Vec<QPlace>,
}

impl RatState {
    fn of(entries: &[BigRational]) -> Self {
        let places = localq::relevant_places(entries);
        let hasse = places
            .iter()
            .filter(|p| !matches!(p, QPlace::Real))
            .map(|&v| (v, hasse_at(entries, v)))
            .collect();
        RatState {
            dim: entries.len(),
            det: entries.iter().product(),
            hasse,
            sgn: entries
                .iter()
                .map(|a| if a.is_positive() { 1 } else { -1 })
                .sum(),
            places,
        }
    }

    fn isotropic(&self) -> bool {
        match self.dim {
            0 | 1 => false,
            2 => crate::intfactor::is_rational_square(&-self.det.clone()),
            _ => {
                if self.sgn.unsigned_abs() as usize >= self.dim {
                    return false;
                }
                for v in &self.places {
                    if let QPlace::Finite(_) = v {
                        if !isotropic_qp(self.dim, &self.det, self.hasse[v], *v) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    fn chop(&mut self) {
        self.dim -= 2;
        self.det = -self.det.clone();
        let m1 = BigRational::from(BigInt::from(-1));
        for (v, s) in self.hasse.iter_mut() {
            *s *= hilbert_symbol(&self.det, &m1, *v);
        }
    }
}

/// The dimension of the anisotropic kernel.
pub fn anisotropic_dimension(field: &FieldDesc, q: &QForm) -> Result<usize> {
    field.check_form_theoretic()?;
    match field {
        FieldDesc::Rationals => {
            let entries = rational_entries(q)?;
            let mut state = RatState::of(&entries);
            while state.isotropic() {
                state.chop();
            }
            Ok(state.dim)
        }
        FieldDesc::PrimeField(_) | FieldDesc::FiniteExt { .. } => {
            if witt_trivial(field, q)? {
                Ok(0)
            } else if q.dim() % 2 == 1 {
                Ok(1)
            } else {
                Ok(2)
            }
        }
        FieldDesc::RationalFunction { base, .. } => {
            if witt_trivial(field, q)? {
                return Ok(0);
            }
            if let Some(constant) = constant_entries(base, q) {
                return anisotropic_dimension(base, &constant);
            }
            Err(Error::UnsupportedField(
                "anisotropic dimension over k(t) is only decided for trivial classes and constant forms"
                    .into(),
            ))
        }
        _ => Err(Error::UnsupportedField(format!(
            "anisotropic dimension over {field}"
        ))),
    }
}

/// If every entry is a constant of the base field, the descended form.
fn constant_entries(base: &FieldDesc, q: &QForm) -> Option<QForm> {
    let mut entries = vec![];
    for e in &q.entries {
        match e {
            Element::QFunc { num, den } if num.is_constant() && den.is_constant() => {
                entries.push(Element::Rat(num.leading() / den.leading()));
            }
            Element::FpFunc { p, num, den } if num.is_constant() && den.is_constant() => {
                let dinv = crate::intfactor::mod_inverse_u64(den.leading(), *p)?;
                entries.push(Element::Fp {
                    p: *p,
                    val: (num.leading() as u128 * dinv as u128 % *p as u128) as u64,
                });
            }
            _ => return None,
        }
    }
    QForm::new(base.clone(), entries).ok()
}

/// Whether q has a nontrivial zero over K.
pub fn is_isotropic(field: &FieldDesc, q: &QForm) -> Result<bool> {
    field.check_form_theoretic()?;
    match field {
        FieldDesc::Rationals => {
            let entries = rational_entries(q)?;
            Ok(RatState::of(&entries).isotropic())
        }
        FieldDesc::PrimeField(_) | FieldDesc::FiniteExt { .. } => match q.dim() {
            0 | 1 => Ok(false),
            2 => {
                let mdet = q.det().neg();
                fields::is_square(field, &mdet)
            }
            _ => Ok(true),
        },
        FieldDesc::RationalFunction { base, .. } => {
            if q.dim() <= 1 {
                return Ok(false);
            }
            if witt_trivial(field, q)? {
                return Ok(true);
            }
            if let Some(constant) = constant_entries(base, q) {
                return is_isotropic(base, &constant);
            }
            // anisotropic kernel dimension is not decided in general here
            match anisotropic_dimension(field, q) {
                Ok(d) => Ok(d < q.dim()),
                Err(e) => Err(e),
            }
        }
        _ => Err(Error::UnsupportedField(format!(
            "is_isotropic over {field}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Local equivalence at places of Q (virtual completions)
// ---------------------------------------------------------------------------

/// Whether q1 and q2 become equivalent over the completion of Q at v.
/// For odd p this is decided from the residue pair over F_p; at 2 from the
/// dyadic square class of the discriminant ratio and the Hasse symbol; at
/// the real place from signatures.
pub fn locally_equivalent(v: QPlace, q1: &QForm, q2: &QForm) -> Result<bool> {
    if q1.field != FieldDesc::Rationals || q2.field != FieldDesc::Rationals {
        return Err(Error::UnsupportedField(
            "local equivalence is implemented over Q".into(),
        ));
    }
    if q1.dim() != q2.dim() {
        return Ok(false);
    }
    let e1 = rational_entries(q1)?;
    let e2 = rational_entries(q2)?;
    match v {
        QPlace::Real => Ok(signature(q1)? == signature(q2)?),
        QPlace::Finite(p) => {
            let d1: BigRational = e1.iter().product();
            let d2: BigRational = e2.iter().product();
            let ratio = d1 / d2;
            Ok(is_square_local(&ratio, QPlace::Finite(p)) && hasse_at(&e1, v) == hasse_at(&e2, v))
        }
    }
}

// ---------------------------------------------------------------------------
// Fundamental-ideal membership
// ---------------------------------------------------------------------------

/// Whether [q] lies in I(K)^d, for d <= 3, over Q, F_p, or F_q.
///
/// d = 1: even dimension; d = 2: additionally trivial signed discriminant;
/// d = 3: additionally trivial Clifford invariant.
pub fn in_fundamental_power(field: &FieldDesc, q: &QForm, d: u32) -> Result<bool> {
    if d == 0 || d > 3 {
        return Err(Error::UnsupportedDegree(d));
    }
    field.check_form_theoretic()?;
    if q.dim() % 2 != 0 {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    let disc_trivial = fields::is_square(field, &q.signed_disc())?;
    if !disc_trivial {
        return Ok(false);
    }
    if d == 2 {
        return Ok(true);
    }
    match field {
        FieldDesc::Rationals => {
            let entries = rational_entries(q)?;
            Ok(clifford_ram_set(&entries).is_empty())
        }
        // Br(F_q)[2] = 0: I^2 = I^3 there
        FieldDesc::PrimeField(_) | FieldDesc::FiniteExt { .. } => Ok(true),
        _ => Err(Error::UnsupportedField(format!(
            "I^3 membership over {field}"
        ))),
    }
}

/// Local variant at a place of Q.
pub fn in_fundamental_power_local(v: QPlace, q: &QForm, d: u32) -> Result<bool> {
    if d == 0 || d > 3 {
        return Err(Error::UnsupportedDegree(d));
    }
    if q.dim() % 2 != 0 {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    let entries = rational_entries(q)?;
    let disc = match q.signed_disc() {
        Element::Rat(x) => x,
        _ => unreachable!(),
    };
    let disc_trivial = match v {
        QPlace::Real => disc.is_positive(),
        f => is_square_local(&disc, f),
    };
    if !disc_trivial {
        return Ok(false);
    }
    if d == 2 {
        return Ok(true);
    }
    // local Clifford symbol via the dimension mod 8 correction
    let n = entries.len();
    let det: BigRational = entries.iter().product();
    let m1 = BigRational::from(BigInt::from(-1));
    let mut c = hasse_at(&entries, v);
    match n % 8 {
        1 | 2 => {}
        3 | 4 => c *= hilbert_symbol(&m1, &-det.clone(), v),
        5 | 6 => c *= hilbert_symbol(&m1, &m1, v),
        _ => c *= hilbert_symbol(&m1, &det, v),
    }
    Ok(c == 1)
}

// ---------------------------------------------------------------------------
// Symmetric Gram ingestion
// ---------------------------------------------------------------------------

/// Diagonalize a symmetric Gram matrix over a supported field by congruence
/// (ingestion convenience). Returns the diagonal form; degenerate input is an
/// error.
pub fn diagonalize_symmetric(field: &FieldDesc, gram: &[Vec<Element>]) -> Result<QForm> {
    field.check_form_theoretic()?;
    let n = gram.len();
    for row in gram {
        if row.len() != n {
            return Err(Error::Degenerate("Gram matrix must be square".into()));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if gram[i][j] != gram[j][i] {
                return Err(Error::Degenerate("Gram matrix must be symmetric".into()));
            }
        }
    }
    let mut m: Vec<Vec<Element>> = gram.to_vec();
    let mut diag = vec![];
    for i in 0..n {
        if m[i][i].is_zero() {
            // try a diagonal swap, else mix in a row with m[i][j] != 0
            if let Some(j) = ((i + 1)..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(i, j);
                for row in m.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = ((i + 1)..n).find(|&j| !m[i][j].is_zero()) {
                // row_i += row_j; col_i += col_j: new diagonal 2 m[i][j]
                for k in 0..n {
                    let v = m[j][k].clone();
                    m[i][k] = m[i][k].add(&v);
                }
                for row in m.iter_mut() {
                    let v = row[j].clone();
                    row[i] = row[i].add(&v);
                }
            } else {
                return Err(Error::Degenerate("singular Gram matrix".into()));
            }
        }
        if m[i][i].is_zero() {
            return Err(Error::Degenerate("singular Gram matrix".into()));
        }
        let pivot = m[i][i].clone();
        for j in (i + 1)..n {
            if m[i][j].is_zero() {
                continue;
            }
            let factor = m[i][j].div(&pivot)?;
            for k in 0..n {
                let delta = m[i][k].mul(&factor);
                m[j][k] = m[j][k].sub(&delta);
            }
            for row in m.iter_mut() {
                let delta = row[i].mul(&factor);
                row[j] = row[j].sub(&delta);
            }
        }
        diag.push(m[i][i].clone());
    }
    QForm::new(field.clone(), diag)
}
