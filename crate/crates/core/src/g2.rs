//! Octonion algebras as symbol triples: the degree-3 invariant, residue
//! quaternion algebras at places of bad reduction, and the genus-obstruction
//! partition of a catalog.

use crate::fields::{residue_image, uniformizer, valuation, Element, FieldDesc, Place};
use crate::reduction::{self, VerdictStatus};
use crate::symbols::{cup, is_trivial, SymbolSum};
use crate::witt::{self, PfisterSpec, QForm};
use crate::{Decision, Error, Result};
use std::collections::BTreeSet;

/// An octonion algebra presented by a triple (a, b, c); its norm form is the
/// 3-fold Pfister form <<a, b, c>>.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OctonionDesc {
    pub field: FieldDesc,
    pub triple: [Element; 3],
}

impl OctonionDesc {
    pub fn new(field: FieldDesc, triple: [Element; 3]) -> Result<Self> {
        field.check_form_theoretic()?;
        for e in &triple {
            if e.is_zero() {
                return Err(Error::ZeroElement);
            }
            if !e.lies_in(&field) {
                return Err(Error::FieldMismatch("octonion slot".into()));
            }
        }
        Ok(OctonionDesc { field, triple })
    }

    /// The 8-dimensional norm form <<a, b, c>>.
    pub fn norm_form(&self) -> Result<QForm> {
        let spec = PfisterSpec::new(self.triple.to_vec())?;
        witt::pfister(&self.field, &spec)
    }
}

/// lambda_K of the octonion algebra: the degree-3 class chi_a u chi_b u
/// chi_c.
pub fn lambda_class(o: &OctonionDesc) -> Result<SymbolSum> {
    cup(&o.field, o.triple.to_vec())
}

/// The quaternion algebra carrying the residue of lambda at a place: the
/// matrix algebra when the residue vanishes on the normalized triple, the
/// (abar, bbar)-algebra otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuaternionDesc {
    Split {
        field: FieldDesc,
    },
    Algebra {
        field: FieldDesc,
        a: Element,
        b: Element,
    },
}

impl QuaternionDesc {
    pub fn field(&self) -> &FieldDesc {
        match self {
            QuaternionDesc::Split { field } => field,
            QuaternionDesc::Algebra { field, .. } => field,
        }
    }

    /// The symbol sum of this quaternion class (empty for the split tag).
    pub fn symbol(&self) -> Result<SymbolSum> {
        match self {
            QuaternionDesc::Split { field } => Ok(SymbolSum::zero(field.clone(), 2)),
            QuaternionDesc::Algebra { field, a, b } => cup(field, vec![a.clone(), b.clone()]),
        }
    }

    /// Whether two residue quaternions over the same field are isomorphic.
    pub fn isomorphic(&self, other: &QuaternionDesc) -> Result<Decision> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch("residue fields differ".into()));
        }
        let sum = self.symbol()?.add(&other.symbol()?)?;
        is_trivial(&sum)
    }
}

/// Whether two octonion algebras over the same field are isomorphic:
/// injectivity of lambda reduces this to triviality of the symbol sum, with
/// the norm-form route as a cross-check where the Witt decider applies.
pub fn octonion_isomorphic(o1: &OctonionDesc, o2: &OctonionDesc) -> Result<Decision> {
    if o1.field != o2.field {
        return Err(Error::FieldMismatch("octonion fields differ".into()));
    }
    let sum = lambda_class(o1)?.add(&lambda_class(o2)?)?;
    let by_symbol = is_trivial(&sum)?;
    if let Decision::True | Decision::False = by_symbol {
        // cross-check against the norm forms when the Witt route decides
        if let Ok(equal) = witt::witt_equivalent(&o1.field, &o1.norm_form()?, &o2.norm_form()?) {
            if equal != (by_symbol == Decision::True) {
                return Err(Error::Internal(
                    "lambda-class and norm-form deciders disagree".into(),
                ));
            }
        }
    }
    Ok(by_symbol)
}

/// Normal form of the triple at a place: (abar, bbar) after pushing all
/// uniformizer content into one slot, or the split tag when none remains.
///
/// Algorithm: reduce each slot to u or pi u by square classes; use
/// bilinearity to merge pi-slots pairwise via {pi x, pi y} = {pi x, -x y}
/// (valid mod squares since -pi/x = -pi x up to x^2); a single remaining
/// pi-slot is moved last and drops from the residue.
pub fn residue_quaternion(
    field: &FieldDesc,
    place: &Place,
    o: &OctonionDesc,
) -> Result<QuaternionDesc> {
    let rc = place.residue_characteristic(field)?;
    if rc == 2 {
        return Err(Error::ResidueCharTwo);
    }
    let kappa = place.residue_field(field)?;
    let pi = uniformizer(field, place)?;
    let mut units: Vec<Element> = vec![];
    let mut odd: Vec<Element> = vec![];
    for slot in &o.triple {
        let v = valuation(field, place, slot)?;
        let u = slot.mul(&pi.pow(-v)?);
        if v.rem_euclid(2) == 0 {
            units.push(u);
        } else {
            odd.push(u);
        }
    }
    // merge pi-carrying slots: (pi u, pi w) ~ (pi u, -u w)
    while odd.len() >= 2 {
        let u = odd[0].clone();
        let w = odd.pop().unwrap();
        units.push(u.mul(&w).neg());
    }
    if odd.is_empty() {
        return Ok(QuaternionDesc::Split { field: kappa });
    }
    debug_assert_eq!(units.len(), 2);
    let a = residue_image(field, place, &units[0])?;
    let b = residue_image(field, place, &units[1])?;
    Ok(QuaternionDesc::Algebra { field: kappa, a, b })
}

/// One fiber of the genus-obstruction map: catalog members whose residue
/// quaternion tuples agree at every place of bad reduction.
#[derive(Debug, Clone)]
pub struct GenusFiber {
    pub members: Vec<String>,
    pub residues: Vec<QuaternionDesc>,
}

#[derive(Debug, Clone)]
pub struct GenusObstruction {
    /// The union of bad-reduction places across the catalog, in canonical
    /// order.
    pub bad_places: Vec<Place>,
    pub fibers: Vec<GenusFiber>,
    /// Pairs whose comparison was undecided at some slot (conservatively
    /// merged).
    pub undecided_pairs: Vec<(String, String)>,
}

/// Partition a catalog of octonion algebras by their tuples of residue
/// quaternions at the union of bad-reduction places.
pub fn genus_obstruction(
    catalog: &[(String, OctonionDesc)],
    vset: &crate::divisorial::ValuationSet,
) -> Result<GenusObstruction> {
    let field = &vset.field;
    // bad locus: candidate places are the entry-support places inside V
    let mut bad: BTreeSet<Place> = BTreeSet::new();
    for (_, o) in catalog {
        let nf = o.norm_form()?;
        for place in witt::entry_support_places(field, &nf)? {
            if !vset.contains(&place) {
                continue;
            }
            let verdict = reduction::g2_good_reduction(field, &place, o)?;
            if verdict.status == VerdictStatus::Bad {
                bad.insert(place);
            }
        }
    }
    let bad_places: Vec<Place> = bad.into_iter().collect();
    // residue tuples
    let mut tuples: Vec<Vec<QuaternionDesc>> = vec![];
    for (_, o) in catalog {
        let mut tuple = vec![];
        for place in &bad_places {
            tuple.push(residue_quaternion(field, place, o)?);
        }
        tuples.push(tuple);
    }
    // pairwise comparison with union-find; undecided slots merge
    // conservatively
    let n = catalog.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    let mut undecided_pairs = vec![];
    for i in 0..n {
        for j in (i + 1)..n {
            let mut same = true;
            let mut undecided = false;
            for (qi, qj) in tuples[i].iter().zip(tuples[j].iter()) {
                match qi.isomorphic(qj)? {
                    Decision::True => {}
                    Decision::False => {
                        same = false;
                        break;
                    }
                    Decision::Undecided => undecided = true,
                }
            }
            if same {
                if undecided {
                    undecided_pairs.push((catalog[i].0.clone(), catalog[j].0.clone()));
                }
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut fibers: Vec<GenusFiber> = vec![];
    let mut root_order: Vec<usize> = vec![];
    for i in 0..n {
        let r = find(&mut parent, i);
        if !root_order.contains(&r) {
            root_order.push(r);
            fibers.push(GenusFiber {
                members: vec![],
                residues: tuples[r].clone(),
            });
        }
        let idx = root_order.iter().position(|&x| x == r).unwrap();
        fibers[idx].members.push(catalog[i].0.clone());
    }
    Ok(GenusObstruction {
        bad_places,
        fibers,
        undecided_pairs,
    })
}
