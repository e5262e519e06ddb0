//! The classification sieve: partition a catalog of n-dimensional forms
//! with good reduction on V into similarity classes by the staged
//! cohomological invariants, and the local-global fiber variant.
//!
//! Procedure: (1) assemble per-place scaling witnesses into ideles, trivial
//! at almost all places; (2) group by the coset in Pic(V)/2Pic(V); (3)
//! normalize within a group by a global scalar produced from an explicit
//! principal-divisor witness; (4) refine by the invariants e_1, e_2, e_3 of
//! pairwise differences, which stage correctness keeps inside I^m; (5) stop
//! at stage ell = floor(log2 n) + 1, where the dimension floor 2^{ell+1} >
//! 2n forces hyperbolic differences inside a cell; (6) certify every cell
//! by the direct scaling-search decider. The class count must satisfy the
//! certified bound d_0 d_1 ... d_ell.

use crate::divisorial::{pic2_coset, Idele, Pic2Coset, ValuationSet};
use crate::fields::{square_class_rep, Element, FieldDesc};
use crate::intfactor;
use crate::localq::QPlace;
use crate::reduction::{self, VerdictStatus};
use crate::table::UnramifiedGroupTable;
use crate::witt::{self, QForm};
use crate::{Error, Result};

pub use crate::table::{ell, sieve_bound};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use std::collections::{BTreeMap, BTreeSet};

/// Classification output: the partition with its per-stage certificate
/// trail.
#[derive(Debug, Clone)]
pub struct Classification {
    pub ids: Vec<String>,
    /// Cells in canonical order (by first member); members keep input order.
    pub classes: Vec<Vec<String>>,
    /// id -> stage -> invariant label. Stage 0 is the Pic(V)/2Pic(V) coset.
    pub trail: BTreeMap<String, Vec<String>>,
    /// id -> the global normalization scalar applied before the stages.
    pub normalizations: BTreeMap<String, String>,
    pub bound: u64,
    pub bound_satisfied: bool,
}

impl Classification {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

fn rational_of(e: &Element) -> Result<BigRational> {
    match e {
        Element::Rat(x) => Ok(x.clone()),
        _ => Err(Error::UnsupportedField(
            "the sieve is certified over Q only".into(),
        )),
    }
}

/// Candidate scaling square classes for the direct similarity decider:
/// the subgroup generated by -1 and the primes dividing 2 and the entries.
fn scaling_candidates(q1: &QForm, q2: &QForm) -> Result<Vec<BigRational>> {
    let mut primes: BTreeSet<BigInt> = BTreeSet::new();
    primes.insert(BigInt::from(2));
    for q in [q1, q2] {
        for e in &q.entries {
            let x = rational_of(e)?;
            let (_, f) = intfactor::factor_rational(&x);
            for (p, _) in f {
                primes.insert(p);
            }
        }
    }
    let primes: Vec<BigInt> = primes.into_iter().collect();
    let mut out = vec![];
    for mask in 0u32..(1 << primes.len()) {
        let mut prod = BigInt::one();
        for (i, p) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod *= p;
            }
        }
        out.push(BigRational::from(prod.clone()));
        out.push(BigRational::from(-prod));
    }
    Ok(out)
}

/// Direct similarity decider: q1 ~ q2 iff some scaling lambda from the
/// entry-generated square classes makes them Witt-equivalent.
pub fn similar(field: &FieldDesc, q1: &QForm, q2: &QForm) -> Result<bool> {
    if q1.dim() != q2.dim() {
        return Ok(false);
    }
    for lambda in scaling_candidates(q1, q2)? {
        let scaled = witt::scale(&Element::Rat(lambda), q1)?;
        if witt::witt_equivalent(field, &scaled, q2)? {
            return Ok(true);
        }
    }
    Ok(false)
}

struct Prepared {
    id: String,
    normalized: QForm,
    delta: Element,
    coset: Pic2Coset,
}

/// Stage invariant label of a difference class known to lie in I^m, over Q.
fn stage_label(field: &FieldDesc, diff: &QForm, m: u32) -> Result<String> {
    if !witt::in_fundamental_power(field, diff, m)? {
        return Err(Error::Internal(format!(
            "stage correctness violated: difference not in I^{m}"
        )));
    }
    match m {
        1 => {
            let d = rational_of(&diff.signed_disc())?;
            Ok(format!("disc {}", intfactor::squarefree_part(&d)))
        }
        2 => {
            let entries = diff
                .entries
                .iter()
                .map(rational_of)
                .collect::<Result<Vec<_>>>()?;
            let ram = witt::clifford_ram_set(&entries);
            let parts: Vec<String> = ram.iter().map(|v| v.to_string()).collect();
            Ok(format!("clifford ram {{{}}}", parts.join(",")))
        }
        3 => {
            let sgn = witt::signature(diff)?;
            if sgn.rem_euclid(8) != 0 {
                return Err(Error::Internal(
                    "I^3 difference with signature not divisible by 8".into(),
                ));
            }
            Ok(format!(
                "e3 {}",
                if sgn.rem_euclid(16) == 8 { 1 } else { 0 }
            ))
        }
        _ => Err(Error::UnsupportedDegree(m)),
    }
}

fn validate_catalog(
    vset: &ValuationSet,
    catalog: &[(String, QForm)],
) -> Result<(usize, crate::table::ResolvedOrders)> {
    if catalog.is_empty() {
        return Err(Error::Catalog("empty catalog".into()));
    }
    let mut seen = BTreeSet::new();
    for (id, _) in catalog {
        if !seen.insert(id.clone()) {
            return Err(Error::Catalog(format!("duplicate id {id}")));
        }
    }
    let n = catalog[0].1.dim();
    if n < 5 {
        return Err(Error::Catalog("the sieve requires dimension n >= 5".into()));
    }
    for (id, q) in catalog {
        if q.dim() != n {
            return Err(Error::Catalog(format!(
                "mixed dimensions in catalog: {id} has dim {}",
                q.dim()
            )));
        }
        if q.field != vset.field {
            return Err(Error::FieldMismatch(format!("{id} over the wrong field")));
        }
    }
    if !vset.condition_b() {
        return Err(Error::UnsupportedConfiguration(
            "condition (B) fails: V contains a residue characteristic 2".into(),
        ));
    }
    let table = UnramifiedGroupTable::load()?;
    let orders = table.resolve(vset, n as u64)?;
    if orders.ell > 3 {
        return Err(Error::UnsupportedConfiguration(format!(
            "no invariant decider beyond I^3: ell = {} needs gamma_{} (n in 5..=7 is supported)",
            orders.ell, orders.ell
        )));
    }
    Ok((n, orders))
}

/// Classify a catalog of n-dimensional forms with good reduction on V into
/// similarity classes, with the certificate trail and the certified bound.
pub fn classify_similarity(
    vset: &ValuationSet,
    catalog: &[(String, QForm)],
) -> Result<Classification> {
    let field = &vset.field;
    let (n, orders) = validate_catalog(vset, catalog)?;
    // reduction precondition, and per-place scaling witnesses
    let mut prepared: Vec<Prepared> = vec![];
    for (id, q) in catalog {
        let profile = reduction::reduction_profile(vset, id, q)?;
        if !profile.bad_locus.is_empty() {
            return Err(Error::BadReductionInCatalog(id.clone()));
        }
        let mut components = BTreeMap::new();
        for verdict in &profile.verdicts {
            match &verdict.status {
                VerdictStatus::GoodAsIs => {}
                VerdictStatus::GoodAfterScaling(lambda) => {
                    components.insert(verdict.place.clone(), lambda.clone());
                }
                VerdictStatus::Bad => unreachable!("bad locus checked"),
                VerdictStatus::Refused(reason) => {
                    return Err(Error::UndecidableAtPlace(format!(
                        "{} at {}: {reason}",
                        id, verdict.place
                    )))
                }
            }
        }
        let lambda_idele = Idele::new(vset.clone(), components)?;
        let coset = pic2_coset(&lambda_idele)?;
        // the odd part of nu(lambda) is realized by a global scalar
        // (the delta of the idele factorization lambda = lambda_0 alpha^2
        // beta delta over a certified configuration)
        let divisor = lambda_idele.divisor()?;
        let mut odd_support = BTreeMap::new();
        for (place, mult) in &divisor.support {
            if mult.rem_euclid(2) == 1 {
                odd_support.insert(place.clone(), 1i64);
            }
        }
        let odd = crate::divisorial::Divisor::new(vset.clone(), odd_support)?;
        let delta = crate::divisorial::divisor_witness(&odd)?;
        let mut normalized = witt::scale(&delta, q)?;
        // for odd n the signed discriminant moves freely under similarity;
        // normalize it away so cells match similarity classes exactly
        let mut full_delta = delta.clone();
        if n % 2 == 1 {
            let disc_rep = square_class_rep(field, &normalized.signed_disc())?;
            normalized = witt::scale(&disc_rep, &normalized)?;
            full_delta = full_delta.mul(&disc_rep);
        }
        prepared.push(Prepared {
            id: id.clone(),
            normalized,
            delta: full_delta,
            coset,
        });
    }
    // stage 0: group by Pic/2 coset
    let mut cells: Vec<Vec<usize>> = vec![];
    for coset in [Pic2Coset::Trivial, Pic2Coset::NonTrivial] {
        let members: Vec<usize> = (0..prepared.len())
            .filter(|&i| prepared[i].coset == coset)
            .collect();
        if !members.is_empty() {
            cells.push(members);
        }
    }
    let mut trail: BTreeMap<String, Vec<String>> = prepared
        .iter()
        .map(|p| {
            (
                p.id.clone(),
                vec![format!(
                    "pic2 {}",
                    match p.coset {
                        Pic2Coset::Trivial => "trivial",
                        Pic2Coset::NonTrivial => "nontrivial",
                    }
                )],
            )
        })
        .collect();
    // stages m = 1..ell
    for m in 1..=orders.ell {
        let mut next: Vec<Vec<usize>> = vec![];
        for cell in &cells {
            let pivot = cell[0];
            let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
            let mut order: Vec<String> = vec![];
            for &j in cell {
                let diff = witt::direct_sum(
                    &prepared[j].normalized,
                    &witt::negate(&prepared[pivot].normalized),
                )?;
                let label = stage_label(field, &diff, m)?;
                trail.get_mut(&prepared[j].id).unwrap().push(label.clone());
                if !groups.contains_key(&label) {
                    order.push(label.clone());
                }
                groups.entry(label).or_default().push(j);
            }
            for label in order {
                next.push(groups.remove(&label).unwrap());
            }
        }
        cells = next;
    }
    // Arason-Pfister termination: differences inside a cell lie in
    // I^{ell+1} and have dimension 2n < 2^{ell+1}
    debug_assert!(2 * (n as u64) < witt::arason_pfister_floor(n as u64));
    // merge pass + certification with the direct similarity decider
    let mut merged: Vec<Vec<usize>> = vec![];
    'outer: for cell in cells {
        for existing in merged.iter_mut() {
            let a = &catalog[existing[0]].1;
            let b = &catalog[cell[0]].1;
            if similar(field, a, b)? {
                existing.extend(cell.iter().copied());
                continue 'outer;
            }
        }
        merged.push(cell);
    }
    for cell in &merged {
        let pivot = cell[0];
        for &j in cell {
            if !similar(field, &catalog[j].1, &catalog[pivot].1)? {
                return Err(Error::Internal(format!(
                    "certification failed: {} not similar to its cell pivot {}",
                    catalog[j].0, catalog[pivot].0
                )));
            }
        }
    }
    let bound = orders.sieve_bound();
    let classes: Vec<Vec<String>> = merged
        .iter()
        .map(|cell| cell.iter().map(|&j| catalog[j].0.clone()).collect())
        .collect();
    Ok(Classification {
        ids: catalog.iter().map(|(id, _)| id.clone()).collect(),
        bound,
        bound_satisfied: classes.len() as u64 <= bound,
        classes,
        trail,
        normalizations: prepared
            .iter()
            .map(|p| (p.id.clone(), p.delta.to_string()))
            .collect(),
    })
}

/// Whether q1 and q2 are equivalent over the completion at every place of V
/// (decided from valuations and residue data; for V missing only finitely
/// many primes the discriminant ratio must be a global square).
pub fn locally_equivalent_on(vset: &ValuationSet, q1: &QForm, q2: &QForm) -> Result<bool> {
    if q1.dim() != q2.dim() {
        return Ok(false);
    }
    match &vset.kind {
        crate::divisorial::VSetKind::AllPrimesExcept(s) => {
            let e1 = q1
                .entries
                .iter()
                .map(rational_of)
                .collect::<Result<Vec<_>>>()?;
            let e2 = q2
                .entries
                .iter()
                .map(rational_of)
                .collect::<Result<Vec<_>>>()?;
            let d1: BigRational = e1.iter().product();
            let d2: BigRational = e2.iter().product();
            // square in Q_p for all p outside the finite S forces a global
            // square (quadratic reciprocity / Chebotarev)
            if !intfactor::is_rational_square(&(d1 / d2)) {
                return Ok(false);
            }
            let mut all = e1.clone();
            all.extend(e2.iter().cloned());
            for v in crate::localq::relevant_places(&all) {
                if let QPlace::Finite(p) = v {
                    if s.contains(&p) {
                        continue;
                    }
                    if !witt::locally_equivalent(v, q1, q2)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        _ => Err(Error::UnsupportedConfiguration(
            "local equivalence on this descriptor".into(),
        )),
    }
}

/// Partition a catalog of forms pairwise locally equivalent to `base` at
/// every place of V: same staged refinement without the Pic stage; the
/// class count obeys the kernel bound omega_1 ... omega_ell.
pub fn fiber_classify(
    vset: &ValuationSet,
    base: &QForm,
    catalog: &[(String, QForm)],
) -> Result<Classification> {
    let field = &vset.field;
    let (_, orders) = validate_catalog(vset, catalog)?;
    for (id, q) in catalog {
        if !locally_equivalent_on(vset, q, base)? {
            return Err(Error::NotLocallyEquivalent(id.clone()));
        }
    }
    let mut trail: BTreeMap<String, Vec<String>> = catalog
        .iter()
        .map(|(id, _)| (id.clone(), vec!["local class of base".to_string()]))
        .collect();
    let mut cells: Vec<Vec<usize>> = vec![(0..catalog.len()).collect()];
    for m in 1..=orders.ell {
        let mut next: Vec<Vec<usize>> = vec![];
        for cell in &cells {
            let pivot = cell[0];
            let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
            let mut order: Vec<String> = vec![];
            for &j in cell {
                let diff = witt::direct_sum(&catalog[j].1, &witt::negate(&catalog[pivot].1))?;
                let label = stage_label(field, &diff, m)?;
                // kernel membership: stage-1 labels must be trivial (omega_1
                // = 1 over the certified configurations)
                if m == 1 && orders.omega[0] == 1 && label != "disc 1" {
                    return Err(Error::Internal(format!(
                        "difference outside Omega_1: {label}"
                    )));
                }
                trail.get_mut(&catalog[j].0).unwrap().push(label.clone());
                if !groups.contains_key(&label) {
                    order.push(label.clone());
                }
                groups.entry(label).or_default().push(j);
            }
            for label in order {
                next.push(groups.remove(&label).unwrap());
            }
        }
        cells = next;
    }
    // certification: cells are equivalence classes
    for cell in &cells {
        let pivot = cell[0];
        for &j in cell {
            if !witt::witt_equivalent(field, &catalog[j].1, &catalog[pivot].1)? {
                return Err(Error::Internal(format!(
                    "fiber certification failed: {} vs {}",
                    catalog[j].0, catalog[pivot].0
                )));
            }
        }
    }
    let bound = orders.fiber_bound();
    let classes: Vec<Vec<String>> = cells
        .iter()
        .map(|cell| cell.iter().map(|&j| catalog[j].0.clone()).collect())
        .collect();
    Ok(Classification {
        ids: catalog.iter().map(|(id, _)| id.clone()).collect(),
        bound,
        bound_satisfied: classes.len() as u64 <= bound,
        classes,
        trail,
        normalizations: BTreeMap::new(),
    })
}
