//! Mod-2 symbol calculus: cup products, the invariants e_1, e_2, e_3 on the
//! filtration of the Witt ring, tame residues of symbols, and triviality
//! deciders.
//!
//! A degree-d symbol is a formal cup product of d square classes. Sums are
//! kept as mod-2 multisets in slot-wise canonical form; no Steinberg
//! rewriting is attempted -- triviality is always settled by field-specific
//! deciders (Hilbert symbols over Q and Q(sqrt m), finiteness of the residue
//! Brauer groups, geometric residues plus specialization over k(t), and the
//! real place in degree >= 3).

use crate::fields::{
    self, parse_element, residue_image, square_class_rep, uniformizer, valuation, Element,
    FieldDesc, Place,
};
use crate::localq::{hilbert_symbol, relevant_places, QPlace};
use crate::quadfield::{coords_of, QuadraticField};
use crate::witt::{self, PfisterSpec, QForm};
use crate::{Decision, Error, Result};

pub use crate::table::{unramified_table, UnramifiedGroupTable};

use num::rational::BigRational;
use num::Signed;

use std::collections::BTreeSet;

/// A single degree-d symbol: the cup product of the square classes of its
/// slots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Symbol {
    pub slots: Vec<Element>,
}

impl Symbol {
    pub fn degree(&self) -> usize {
        self.slots.len()
    }
}

/// A formal mod-2 sum of symbols of a common degree over a common field,
/// canonicalized by square-class reduction, slot sorting, removal of symbols
/// with a trivial slot, and pairwise cancellation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSum {
    pub field: FieldDesc,
    pub degree: usize,
    pub symbols: Vec<Vec<Element>>,
}

/// Build the cup product of nonzero slots over their common field.
pub fn cup(field: &FieldDesc, slots: Vec<Element>) -> Result<SymbolSum> {
    if slots.is_empty() {
        return Err(Error::Degenerate("degree >= 1 required".into()));
    }
    let degree = slots.len();
    SymbolSum::from_symbols(field.clone(), degree, vec![slots])
}

pub fn cup_strs(field: &FieldDesc, slots: &[&str]) -> Result<SymbolSum> {
    let parsed = slots
        .iter()
        .map(|s| parse_element(field, s))
        .collect::<Result<Vec<_>>>()?;
    cup(field, parsed)
}

impl SymbolSum {
    pub fn zero(field: FieldDesc, degree: usize) -> SymbolSum {
        SymbolSum {
            field,
            degree,
            symbols: vec![],
        }
    }

    pub fn from_symbols(
        field: FieldDesc,
        degree: usize,
        symbols: Vec<Vec<Element>>,
    ) -> Result<SymbolSum> {
        field.check_form_theoretic()?;
        let mut canonical: Vec<Vec<Element>> = vec![];
        for slots in symbols {
            if slots.len() != degree {
                return Err(Error::DegreeMismatch);
            }
            let mut reduced = Vec::with_capacity(degree);
            let mut trivial = false;
            for s in slots {
                if s.is_zero() {
                    return Err(Error::ZeroSlot);
                }
                if !s.lies_in(&field) {
                    return Err(Error::FieldMismatch(format!("slot {s} not in {field}")));
                }
                let rep = square_class_rep(&field, &s)?;
                if rep.is_one() {
                    trivial = true;
                    break;
                }
                reduced.push(rep);
            }
            if trivial {
                continue;
            }
            reduced.sort();
            canonical.push(reduced);
        }
        canonical.sort();
        // mod-2 cancellation of structurally identical symbols
        let mut out: Vec<Vec<Element>> = vec![];
        for sym in canonical {
            if out.last() == Some(&sym) {
                out.pop();
            } else {
                out.push(sym);
            }
        }
        Ok(SymbolSum {
            field,
            degree,
            symbols: out,
        })
    }

    /// Mod-2 sum.
    pub fn add(&self, other: &SymbolSum) -> Result<SymbolSum> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("symbol sum".into()));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch);
        }
        let mut symbols = self.symbols.clone();
        symbols.extend(other.symbols.iter().cloned());
        SymbolSum::from_symbols(self.field.clone(), self.degree, symbols)
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl std::fmt::Display for SymbolSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.symbols.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|slots| {
                let inner: Vec<String> = slots.iter().map(|s| s.to_string()).collect();
                format!("({})", inner.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// The invariants gamma_{F,d} = e_d on I^d / I^{d+1}
// ---------------------------------------------------------------------------

/// e_d([q]) for d <= 3. Requires [q] in I^d.
///
/// d = 1 is the signed discriminant; d = 2 the Clifford invariant written as
/// a sum of quaternion symbols over the entry list; d = 3 over Q uses the
/// real-signature rule (nontrivial iff sgn = 8 mod 16), over finite fields
/// I^3 = 0, elsewhere a Pfister presentation is required
/// (`gamma_of_pfister_sum`).
pub fn gamma(field: &FieldDesc, q: &QForm, d: u32) -> Result<SymbolSum> {
    if d == 0 || d > 3 {
        return Err(Error::UnsupportedDegree(d));
    }
    if !witt::in_fundamental_power(field, q, d)? {
        return Err(Error::NotInIdealPower);
    }
    match d {
        1 => SymbolSum::from_symbols(field.clone(), 1, vec![vec![q.signed_disc()]]),
        2 => {
            let n = q.dim();
            let mut symbols: Vec<Vec<Element>> = vec![];
            for i in 0..n {
                for j in (i + 1)..n {
                    symbols.push(vec![q.entries[i].clone(), q.entries[j].clone()]);
                }
            }
            let det = q.det();
            let minus_one = field.integer(-1);
            match n % 8 {
                1 | 2 => {}
                3 | 4 => symbols.push(vec![minus_one, det.neg()]),
                5 | 6 => symbols.push(vec![minus_one.clone(), minus_one]),
                _ => symbols.push(vec![minus_one, det]),
            }
            SymbolSum::from_symbols(field.clone(), 2, symbols)
        }
        _ => match field {
            FieldDesc::Rationals => {
                let sgn = witt::signature(q)?;
                if sgn.rem_euclid(8) != 0 {
                    return Err(Error::Internal(
                        "a class in I^3 over Q must have signature divisible by 8".into(),
                    ));
                }
                if sgn.rem_euclid(16) == 8 {
                    let m1 = field.integer(-1);
                    SymbolSum::from_symbols(
                        field.clone(),
                        3,
                        vec![vec![m1.clone(), m1.clone(), m1]],
                    )
                } else {
                    Ok(SymbolSum::zero(field.clone(), 3))
                }
            }
            FieldDesc::PrimeField(_) | FieldDesc::FiniteExt { .. } => {
                // I^3 = 0 over a finite field
                Ok(SymbolSum::zero(field.clone(), 3))
            }
            _ => Err(Error::NoPfisterPresentation),
        },
    }
}

/// gamma of an explicit sum of d-fold Pfister forms: one symbol per summand.
pub fn gamma_of_pfister_sum(field: &FieldDesc, specs: &[PfisterSpec], d: u32) -> Result<SymbolSum> {
    let mut symbols = vec![];
    for spec in specs {
        if spec.slots.len() != d as usize {
            return Err(Error::DegreeMismatch);
        }
        symbols.push(spec.slots.clone());
    }
    SymbolSum::from_symbols(field.clone(), d as usize, symbols)
}

// ---------------------------------------------------------------------------
// Tame residues of symbols
// ---------------------------------------------------------------------------

/// The residue of a symbol sum at a place of odd residue characteristic.
///
/// Each slot is rewritten in its square class as u or pi*u; pi-carrying
/// slots are expanded bilinearly, extra pi's are merged by {pi, pi} =
/// {pi, -1}, and a term with exactly one pi contributes the cup product of
/// the residue images of its unit slots.
pub fn symbol_residue(field: &FieldDesc, place: &Place, s: &SymbolSum) -> Result<SymbolSum> {
    let rc = place.residue_characteristic(field)?;
    if rc == 2 {
        return Err(Error::ResidueCharTwo);
    }
    if s.degree == 0 {
        return Err(Error::Degenerate("degree >= 1 required".into()));
    }
    let kappa = place.residue_field(field)?;
    let pi = uniformizer(field, place)?;
    let mut residue_symbols: Vec<Vec<Element>> = vec![];
    for slots in &s.symbols {
        // normalize slots: slot = pi^e * u with e in {0,1}
        let mut normalized: Vec<(u8, Element)> = Vec::with_capacity(slots.len());
        for a in slots {
            let v = valuation(field, place, a)?;
            let unit = a.mul(&pi.pow(-v)?);
            normalized.push(((v.rem_euclid(2)) as u8, unit));
        }
        // bilinear expansion over the pi-carrying slots
        let odd_positions: Vec<usize> = normalized
            .iter()
            .enumerate()
            .filter(|(_, (e, _))| *e == 1)
            .map(|(i, _)| i)
            .collect();
        for mask in 0u32..(1u32 << odd_positions.len()) {
            // choose, for each pi-carrying slot, the pi branch or the unit
            // branch; terms with no pi branch are unramified and drop
            let pi_count = mask.count_ones();
            if pi_count == 0 {
                continue;
            }
            let mut units: Vec<Element> = vec![];
            for (i, (e, u)) in normalized.iter().enumerate() {
                if *e == 1 {
                    let bit = odd_positions.iter().position(|&p| p == i).unwrap();
                    if mask & (1 << bit) != 0 {
                        // pi branch: slot contributes pi itself
                        continue;
                    }
                }
                units.push(u.clone());
                let _ = e;
            }
            // k pi's collapse to one pi and (k-1) slots equal to -1
            for _ in 1..pi_count {
                units.push(field.integer(-1));
            }
            // residue contribution: images of the unit slots
            let mut residue_slots = Vec::with_capacity(units.len());
            for u in units {
                residue_slots.push(residue_image(field, place, &u)?);
            }
            debug_assert_eq!(residue_slots.len(), s.degree - 1);
            residue_symbols.push(residue_slots);
        }
    }
    SymbolSum::from_symbols(kappa, s.degree - 1, residue_symbols)
}

// ---------------------------------------------------------------------------
// Triviality deciders
// ---------------------------------------------------------------------------

/// Decide whether a symbol sum is the zero class of H^d(K, mu_2).
///
/// Degree 1 is a square test. Degree 2 uses Hilbert symbols over Q and
/// Q(sqrt m) (with reciprocity as a cross-check), the vanishing of the
/// Brauer group over finite fields, and geometric residues plus a constant
/// part over k(t). Degree >= 3 is detected by the real places over Q and
/// Q(sqrt m), vanishes over finite fields and F_p(t), and reduces to
/// residues plus constant part over Q(t). Everything else is Undecided.
pub fn is_trivial(s: &SymbolSum) -> Result<Decision> {
    if s.symbols.is_empty() {
        return Ok(Decision::True);
    }
    match s.degree {
        0 => Err(Error::Degenerate("degree >= 1 required".into())),
        1 => {
            // the sum of degree-1 classes is the class of the product
            let mut prod = s.field.one();
            for slots in &s.symbols {
                prod = prod.mul(&slots[0]);
            }
            Ok(Decision::from_bool(fields::is_square(&s.field, &prod)?))
        }
        2 => match &s.field {
            FieldDesc::Rationals => Ok(Decision::from_bool(
                rational_quaternion_ram_set(&s.symbols)?.is_empty(),
            )),
            FieldDesc::PrimeField(p) | FieldDesc::FiniteExt { p, .. } => {
                if *p == 2 {
                    return Err(Error::ResidueCharTwo);
                }
                Ok(Decision::True)
            }
            FieldDesc::Quadratic { m } => {
                let k = QuadraticField::new(m.clone())?;
                let pairs: Vec<(Element, Element)> = s
                    .symbols
                    .iter()
                    .map(|slots| (slots[0].clone(), slots[1].clone()))
                    .collect();
                Ok(Decision::from_bool(k.symbol_sum_trivial(&pairs)?))
            }
            FieldDesc::RationalFunction { .. } => function_field_trivial(s),
        },
        d => match &s.field {
            FieldDesc::Rationals => {
                // H^d(Q, mu_2) = Z/2 via the real place for d >= 3
                Ok(Decision::from_bool(real_parity_rational(&s.symbols) == 0))
            }
            FieldDesc::Quadratic { m } => {
                if m.is_negative() {
                    return Ok(Decision::True);
                }
                let k = QuadraticField::new(m.clone())?;
                for plus in [true, false] {
                    let mut parity = 0u32;
                    for slots in &s.symbols {
                        let mut all_neg = true;
                        for slot in slots {
                            if k.sign_at(&coords_of(slot)?, plus) > 0 {
                                all_neg = false;
                                break;
                            }
                        }
                        if all_neg {
                            parity ^= 1;
                        }
                    }
                    if parity != 0 {
                        return Ok(Decision::False);
                    }
                }
                Ok(Decision::True)
            }
            FieldDesc::PrimeField(_) | FieldDesc::FiniteExt { .. } => Ok(Decision::True),
            FieldDesc::RationalFunction { base, .. } => {
                if d == 3 {
                    match &**base {
                        // cohomological dimension 2
                        FieldDesc::PrimeField(_) => Ok(Decision::True),
                        FieldDesc::Rationals => function_field_trivial(s),
                        _ => Ok(Decision::Undecided),
                    }
                } else {
                    Ok(Decision::Undecided)
                }
            }
        },
    }
}

/// Places of Q where the quaternion class of a degree-2 symbol sum is
/// nontrivial, with Hilbert reciprocity asserted.
fn rational_quaternion_ram_set(symbols: &[Vec<Element>]) -> Result<BTreeSet<QPlace>> {
    let mut data: Vec<(BigRational, BigRational)> = vec![];
    let mut all: Vec<BigRational> = vec![];
    for slots in symbols {
        let (a, b) = match (&slots[0], &slots[1]) {
            (Element::Rat(a), Element::Rat(b)) => (a.clone(), b.clone()),
            _ => return Err(Error::FieldMismatch("rational slots expected".into())),
        };
        all.push(a.clone());
        all.push(b.clone());
        data.push((a, b));
    }
    let mut out = BTreeSet::new();
    let mut product = 1i32;
    for v in relevant_places(&all) {
        let mut loc = 1i32;
        for (a, b) in &data {
            loc *= hilbert_symbol(a, b, v);
        }
        if loc == -1 {
            out.insert(v);
        }
        product *= loc;
    }
    if product != 1 {
        return Err(Error::Internal(
            "Hilbert reciprocity violated: ramification set has odd size".into(),
        ));
    }
    Ok(out)
}

/// Parity of the real-place value of a degree >= 3 rational symbol sum:
/// each all-negative symbol contributes 1.
fn real_parity_rational(symbols: &[Vec<Element>]) -> u32 {
    let mut parity = 0;
    for slots in symbols {
        let all_neg = slots.iter().all(|s| match s {
            Element::Rat(x) => x.is_negative(),
            _ => false,
        });
        if all_neg {
            parity ^= 1;
        }
    }
    parity
}

/// Triviality over k(t): all geometric residues vanish and the constant part
/// (specialized at a unit point) vanishes over k.
fn function_field_trivial(s: &SymbolSum) -> Result<Decision> {
    let field = &s.field;
    let base = match field {
        FieldDesc::RationalFunction { base, .. } => (**base).clone(),
        _ => unreachable!(),
    };
    // candidate ramification places: irreducible factors of the slots
    let mut places: BTreeSet<Place> = BTreeSet::new();
    for slots in &s.symbols {
        for slot in slots {
            match slot {
                Element::QFunc { num, den } => {
                    for poly in [num, den] {
                        if poly.is_constant() {
                            continue;
                        }
                        let (_, factors) = poly.factor();
                        for (f, _) in factors {
                            places.insert(Place::IrreducibleQ(f));
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
                            places.insert(Place::IrreducibleFp(f));
                        }
                    }
                }
                _ => return Err(Error::FieldMismatch("function-field slots expected".into())),
            }
        }
    }
    for place in places {
        let residue = match symbol_residue(field, &place, s) {
            Ok(r) => r,
            Err(Error::UnsupportedField(_)) => return Ok(Decision::Undecided),
            Err(e) => return Err(e),
        };
        match is_trivial(&residue)? {
            Decision::True => {}
            Decision::False => return Ok(Decision::False),
            Decision::Undecided => return Ok(Decision::Undecided),
        }
    }
    // constant part: all residues vanish, so the class is inflated from k;
    // specialize at a unit point
    match constant_specialization(field, &base, s)? {
        Some(constant) => is_trivial(&constant),
        None => {
            // over F_p(t) in degree 2 the constant part lives in Br(F_p) = 0
            if matches!(base, FieldDesc::PrimeField(_)) {
                Ok(Decision::True)
            } else {
                Ok(Decision::Undecided)
            }
        }
    }
}

/// Specialize all slots at the smallest non-negative integer unit point.
fn constant_specialization(
    field: &FieldDesc,
    base: &FieldDesc,
    s: &SymbolSum,
) -> Result<Option<SymbolSum>> {
    let limit: i64 = match base {
        FieldDesc::PrimeField(p) => *p as i64,
        _ => i64::MAX,
    };
    let mut c: i64 = 0;
    while c < limit {
        let t = field.variable()?;
        let elem = t.sub(&field.integer(c));
        let place = Place::irreducible(field, &elem)?;
        let mut ok = true;
        'outer: for slots in &s.symbols {
            for slot in slots {
                if valuation(field, &place, slot)? != 0 {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            let mut symbols = vec![];
            for slots in &s.symbols {
                let mut out = vec![];
                for slot in slots {
                    out.push(residue_image(field, &place, slot)?);
                }
                symbols.push(out);
            }
            return Ok(Some(SymbolSum::from_symbols(
                base.clone(),
                s.degree,
                symbols,
            )?));
        }
        c += 1;
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Spinor-norm and reduced-norm membership
// ---------------------------------------------------------------------------

/// Whether a lies in the spinor norm group of the Pfister form q = <<spec>>:
/// true iff <<a_1, ..., a_d, a>> is hyperbolic, decided by symbol triviality
/// in degree d+1 when a decider exists, by the Witt machinery otherwise.
pub fn spinor_norm_member(field: &FieldDesc, spec: &PfisterSpec, a: &Element) -> Result<Decision> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut slots = spec.slots.clone();
    slots.push(a.clone());
    let symbol = cup(field, slots.clone())?;
    match is_trivial(&symbol)? {
        Decision::Undecided => {
            let spec = PfisterSpec::new(slots)?;
            let q = witt::pfister(field, &spec)?;
            match witt::is_hyperbolic(field, &q) {
                Ok(b) => Ok(Decision::from_bool(b)),
                Err(Error::UnsupportedField(_)) => Ok(Decision::Undecided),
                Err(e) => Err(e),
            }
        }
        d => Ok(d),
    }
}

/// Whether x is a reduced norm from the quaternion algebra (a, b) over Q:
/// x must be a nonzero value of the norm form <1,-a,-b,ab>, decided by the
/// isotropy of <1,-a,-b,ab,-x>.
pub fn reduced_norm_member(a: &Element, b: &Element, x: &Element) -> Result<bool> {
    let field = FieldDesc::Rationals;
    for e in [a, b, x] {
        if e.is_zero() {
            return Err(Error::ZeroElement);
        }
        if !e.lies_in(&field) {
            return Err(Error::UnsupportedField(
                "reduced norms are implemented over Q".into(),
            ));
        }
    }
    let entries = vec![field.one(), a.neg(), b.neg(), a.mul(b), x.neg()];
    let q = QForm::new(field.clone(), entries)?;
    witt::is_isotropic(&field, &q)
}
