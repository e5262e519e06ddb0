//! JSON wire formats: catalogs, places, valuation sets, forms, symbols, and
//! report serialization.
//!
//! All field elements travel as strings (exact, no float contamination);
//! parsing is therefore field-directed: the ambient field comes either from
//! the enclosing document or from an explicit argument.

use crate::divisorial::{Divisor, PicReport, PicStructure, VSetKind, ValuationSet};
use crate::fields::{parse_element, Element, FieldDesc, Place};
use crate::g2::{GenusObstruction, OctonionDesc, QuaternionDesc};
use crate::hermitian::{HermitianForm, QuadExt};
use crate::reduction::{ReductionReport, VerdictStatus};
use crate::sieve::Classification;
use crate::symbols::SymbolSum;
use crate::witt::{PfisterSpec, QForm, ResidueSplit};
use crate::{Error, Result};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

/// Accepts "Q", "F3", "Q(t)", "F3(t)", or {"kind": "...", ...}.
pub fn field_from_json(v: &Value) -> Result<FieldDesc> {
    match v {
        Value::String(s) => field_from_str(s),
        Value::Object(map) => {
            let kind = map
                .get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| err("field object needs a string 'kind'"))?;
            match kind {
                "Q" | "rationals" => Ok(FieldDesc::Rationals),
                "Fp" | "prime_field" => {
                    let p = map
                        .get("p")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| err("prime field needs p"))?;
                    Ok(FieldDesc::PrimeField(p))
                }
                "Q(t)" | "rational_function" => {
                    let base = match map.get("base") {
                        Some(b) => field_from_json(b)?,
                        None => FieldDesc::Rationals,
                    };
                    let var = map.get("var").and_then(Value::as_str).unwrap_or("t");
                    FieldDesc::rational_function(base, var)
                }
                other => Err(err(format!("unknown field kind {other}"))),
            }
        }
        _ => Err(err("field must be a string or object")),
    }
}

pub fn field_from_str(s: &str) -> Result<FieldDesc> {
    let s = s.trim();
    if let Some(inner) = s.strip_suffix("(t)") {
        let base = field_from_str(inner)?;
        return FieldDesc::rational_function(base, "t");
    }
    if s == "Q" {
        return Ok(FieldDesc::Rationals);
    }
    if let Some(ps) = s.strip_prefix('F') {
        let p: u64 = ps.parse().map_err(|_| err(format!("bad field name {s}")))?;
        return Ok(FieldDesc::PrimeField(p));
    }
    Err(err(format!("unknown field {s}")))
}

pub fn field_to_json(f: &FieldDesc) -> Value {
    match f {
        FieldDesc::Rationals => json!("Q"),
        FieldDesc::PrimeField(p) => json!(format!("F{p}")),
        FieldDesc::RationalFunction { base, var } => match &**base {
            FieldDesc::Rationals => json!(format!("Q({var})")),
            FieldDesc::PrimeField(p) => json!(format!("F{p}({var})")),
            _ => json!("unsupported"),
        },
        FieldDesc::Quadratic { m } => json!(format!("Q(sqrt({m}))")),
        FieldDesc::FiniteExt { p, modulus } => {
            json!(format!("F{}^{}", p, modulus.degree().unwrap_or(0)))
        }
    }
}

// ---------------------------------------------------------------------------
// Places
// ---------------------------------------------------------------------------

/// {"prime": 7} | {"poly": "t^2+1"} | {"degree": true} | {"gauss_prime": 3}
/// | {"real": true}
pub fn place_from_json(field: &FieldDesc, v: &Value) -> Result<Place> {
    let map = v
        .as_object()
        .ok_or_else(|| err("place must be an object"))?;
    if let Some(p) = map.get("prime").and_then(Value::as_u64) {
        return Place::finite_prime(p);
    }
    if let Some(poly) = map.get("poly").and_then(Value::as_str) {
        let e = parse_element(field, poly)?;
        return Place::irreducible(field, &e);
    }
    if map.get("degree").and_then(Value::as_bool) == Some(true) {
        return Ok(Place::DegreePlace);
    }
    if let Some(p) = map.get("gauss_prime").and_then(Value::as_u64) {
        return Place::gauss_prime(p);
    }
    if map.get("real").and_then(Value::as_bool) == Some(true) {
        return Ok(Place::RealPlace);
    }
    Err(err("unrecognized place object"))
}

pub fn place_to_json(place: &Place) -> Value {
    match place {
        Place::FinitePrime(p) => json!({ "prime": p }),
        Place::RealPlace => json!({ "real": true }),
        Place::IrreducibleQ(f) => json!({ "poly": crate::fields::display_qpoly(f) }),
        Place::IrreducibleFp(f) => json!({ "poly": crate::fields::display_fppoly(f) }),
        Place::DegreePlace => json!({ "degree": true }),
        Place::GaussPrime(p) => json!({ "gauss_prime": p }),
    }
}

// ---------------------------------------------------------------------------
// Valuation sets
// ---------------------------------------------------------------------------

/// {"field": ..., "kind": "all_primes_except", "S": [2]} and the geometric
/// kinds; the field may instead come from the surrounding context.
pub fn vset_from_json(context_field: Option<&FieldDesc>, v: &Value) -> Result<ValuationSet> {
    let map = v.as_object().ok_or_else(|| err("vset must be an object"))?;
    let field = match map.get("field") {
        Some(f) => field_from_json(f)?,
        None => context_field
            .cloned()
            .ok_or_else(|| err("vset needs a field (none in context)"))?,
    };
    let kind = map
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| err("vset needs a string 'kind'"))?;
    let s_list = || -> Result<std::collections::BTreeSet<u64>> {
        match map.get("S") {
            None => Ok(Default::default()),
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| err("S must hold integers")))
                .collect(),
            _ => Err(err("S must be an array")),
        }
    };
    let kind = match kind {
        "all_primes_except" => VSetKind::AllPrimesExcept(s_list()?),
        "geometric_affine" => VSetKind::GeometricAffine,
        "geometric_projective" => VSetKind::GeometricProjective,
        "divisorial_qt" => VSetKind::DivisorialQt(s_list()?),
        other => return Err(err(format!("unknown vset kind {other}"))),
    };
    ValuationSet::new(field, kind)
}

pub fn vset_to_json(v: &ValuationSet) -> Value {
    let mut map = Map::new();
    map.insert("field".into(), field_to_json(&v.field));
    match &v.kind {
        VSetKind::AllPrimesExcept(s) => {
            map.insert("kind".into(), json!("all_primes_except"));
            map.insert("S".into(), json!(s.iter().collect::<Vec<_>>()));
        }
        VSetKind::GeometricAffine => {
            map.insert("kind".into(), json!("geometric_affine"));
        }
        VSetKind::GeometricProjective => {
            map.insert("kind".into(), json!("geometric_projective"));
        }
        VSetKind::DivisorialQt(s) => {
            map.insert("kind".into(), json!("divisorial_qt"));
            map.insert("S".into(), json!(s.iter().collect::<Vec<_>>()));
        }
    }
    Value::Object(map)
}

// ---------------------------------------------------------------------------
// Forms, symbols, hermitian data, octonions
// ---------------------------------------------------------------------------

fn elements_from_array(field: &FieldDesc, v: &Value) -> Result<Vec<Element>> {
    let arr = v.as_array().ok_or_else(|| err("expected an array"))?;
    arr.iter()
        .map(|x| {
            let s = x.as_str().ok_or_else(|| err("elements are strings"))?;
            parse_element(field, s)
        })
        .collect()
}

/// {"field": ..., "entries": ["1","-2"]} or a bare array of entry strings.
pub fn qform_from_json(context_field: Option<&FieldDesc>, v: &Value) -> Result<QForm> {
    match v {
        Value::Array(_) => {
            let field = context_field.ok_or_else(|| err("no field in context"))?;
            QForm::new(field.clone(), elements_from_array(field, v)?)
        }
        Value::Object(map) => {
            let field = match map.get("field") {
                Some(f) => field_from_json(f)?,
                None => context_field
                    .cloned()
                    .ok_or_else(|| err("form needs a field"))?,
            };
            let entries = map
                .get("entries")
                .ok_or_else(|| err("form needs entries"))?;
            QForm::new(field.clone(), elements_from_array(&field, entries)?)
        }
        _ => Err(err("form must be an array or object")),
    }
}

pub fn qform_to_json(q: &QForm) -> Value {
    json!({
        "field": field_to_json(&q.field),
        "entries": q.entries.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    })
}

/// {"pfister": ["2","3"]} or a bare array.
pub fn pfister_from_json(field: &FieldDesc, v: &Value) -> Result<PfisterSpec> {
    let slots = match v {
        Value::Object(map) => {
            let inner = map
                .get("pfister")
                .ok_or_else(|| err("expected 'pfister'"))?;
            elements_from_array(field, inner)?
        }
        Value::Array(_) => elements_from_array(field, v)?,
        _ => return Err(err("pfister spec must be an array or object")),
    };
    PfisterSpec::new(slots)
}

/// {"degree": 2, "symbols": [["-1","-1"],["2","3"]]}, a bare array of slot
/// arrays (a sum), or a single array of slot strings (one symbol).
pub fn symbolsum_from_json(field: &FieldDesc, v: &Value) -> Result<SymbolSum> {
    let build = |symbols: Vec<Vec<Element>>| -> Result<SymbolSum> {
        let degree = symbols
            .first()
            .map(|s| s.len())
            .ok_or_else(|| err("empty symbol list needs an explicit degree"))?;
        SymbolSum::from_symbols(field.clone(), degree, symbols)
    };
    match v {
        Value::Object(map) => {
            let degree = map
                .get("degree")
                .and_then(Value::as_u64)
                .ok_or_else(|| err("symbol sum needs a degree"))? as usize;
            let arr = map
                .get("symbols")
                .and_then(Value::as_array)
                .ok_or_else(|| err("symbol sum needs 'symbols'"))?;
            let symbols = arr
                .iter()
                .map(|s| elements_from_array(field, s))
                .collect::<Result<Vec<_>>>()?;
            SymbolSum::from_symbols(field.clone(), degree, symbols)
        }
        Value::Array(arr) => {
            if arr.iter().all(|x| x.is_string()) {
                let slots = elements_from_array(field, v)?;
                build(vec![slots])
            } else {
                let symbols = arr
                    .iter()
                    .map(|s| elements_from_array(field, s))
                    .collect::<Result<Vec<_>>>()?;
                build(symbols)
            }
        }
        _ => Err(err("symbol sum must be an array or object")),
    }
}

pub fn symbolsum_to_json(s: &SymbolSum) -> Value {
    json!({
        "degree": s.degree,
        "symbols": s
            .symbols
            .iter()
            .map(|slots| slots.iter().map(|e| e.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

/// {"delta": "-1", "entries": ["1","-2"]}
pub fn hermitian_from_json(field: &FieldDesc, v: &Value) -> Result<HermitianForm> {
    let map = v
        .as_object()
        .ok_or_else(|| err("hermitian form must be an object"))?;
    let delta_s = map
        .get("delta")
        .and_then(Value::as_str)
        .ok_or_else(|| err("hermitian form needs delta"))?;
    let delta = parse_element(field, delta_s)?;
    let ext = QuadExt::new(field.clone(), delta)?;
    let entries = map
        .get("entries")
        .ok_or_else(|| err("hermitian form needs entries"))?;
    HermitianForm::new(ext, elements_from_array(field, entries)?)
}

pub fn hermitian_to_json(h: &HermitianForm) -> Value {
    json!({
        "delta": h.ext.delta.to_string(),
        "entries": h.entries.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    })
}

/// {"triple": ["-1","-1","t"]} or a bare 3-array.
pub fn octonion_from_json(field: &FieldDesc, v: &Value) -> Result<OctonionDesc> {
    let arr = match v {
        Value::Object(map) => map
            .get("triple")
            .ok_or_else(|| err("octonion needs a triple"))?,
        other => other,
    };
    let slots = elements_from_array(field, arr)?;
    if slots.len() != 3 {
        return Err(err("octonion triple must have exactly 3 slots"));
    }
    let triple = [slots[0].clone(), slots[1].clone(), slots[2].clone()];
    OctonionDesc::new(field.clone(), triple)
}

pub fn octonion_to_json(o: &OctonionDesc) -> Value {
    json!({ "triple": o.triple.iter().map(|e| e.to_string()).collect::<Vec<_>>() })
}

// ---------------------------------------------------------------------------
// Catalogs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum CatalogPayload {
    Quadratic(QForm),
    Hermitian(HermitianForm),
    Octonion(OctonionDesc),
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub payload: CatalogPayload,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub schema: u64,
    pub field: FieldDesc,
    pub vset: Option<ValuationSet>,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn quadratic_entries(&self) -> Vec<(String, QForm)> {
        self.entries
            .iter()
            .filter_map(|e| match &e.payload {
                CatalogPayload::Quadratic(q) => Some((e.id.clone(), q.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn hermitian_entries(&self) -> Vec<(String, HermitianForm)> {
        self.entries
            .iter()
            .filter_map(|e| match &e.payload {
                CatalogPayload::Hermitian(h) => Some((e.id.clone(), h.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn octonion_entries(&self) -> Vec<(String, OctonionDesc)> {
        self.entries
            .iter()
            .filter_map(|e| match &e.payload {
                CatalogPayload::Octonion(o) => Some((e.id.clone(), o.clone())),
                _ => None,
            })
            .collect()
    }
}

/// Parse a catalog document:
/// {"schema": 1, "field": "Q", "vset": {...}?, "entries": [
///    {"id": "q1", "quadratic": ["1","1"]},
///    {"id": "h1", "hermitian": {"delta": "-1", "entries": ["1"]}},
///    {"id": "o1", "octonion": ["-1","-1","t"]} ]}
pub fn catalog_from_json(v: &Value) -> Result<Catalog> {
    let map = v
        .as_object()
        .ok_or_else(|| Error::Catalog("catalog must be an object".into()))?;
    let schema = map.get("schema").and_then(Value::as_u64).unwrap_or(1);
    if schema != 1 {
        return Err(Error::Catalog(format!(
            "unrecognized schema version {schema}"
        )));
    }
    let field = field_from_json(
        map.get("field")
            .ok_or_else(|| Error::Catalog("catalog needs a field".into()))?,
    )?;
    let vset = match map.get("vset") {
        Some(v) => Some(vset_from_json(Some(&field), v)?),
        None => None,
    };
    let entries_json = map
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Catalog("catalog needs an entries array".into()))?;
    let mut entries = vec![];
    let mut seen = std::collections::BTreeSet::new();
    for (i, e) in entries_json.iter().enumerate() {
        let emap = e
            .as_object()
            .ok_or_else(|| Error::Catalog("entry must be an object".into()))?;
        let id = emap
            .get("id")
            .and_then(Value::as_str)
            .map(str::to_string)
            .unwrap_or_else(|| format!("entry{i}"));
        if !seen.insert(id.clone()) {
            return Err(Error::Catalog(format!("duplicate id {id}")));
        }
        let payload = if let Some(q) = emap.get("quadratic") {
            CatalogPayload::Quadratic(qform_from_json(Some(&field), q)?)
        } else if let Some(h) = emap.get("hermitian") {
            CatalogPayload::Hermitian(hermitian_from_json(&field, h)?)
        } else if let Some(o) = emap.get("octonion") {
            CatalogPayload::Octonion(octonion_from_json(&field, o)?)
        } else {
            return Err(Error::Catalog(format!(
                "entry {id} needs one of quadratic / hermitian / octonion"
            )));
        };
        entries.push(CatalogEntry { id, payload });
    }
    Ok(Catalog {
        schema,
        field,
        vset,
        entries,
    })
}

pub fn catalog_from_str(src: &str) -> Result<Catalog> {
    let v: Value =
        serde_json::from_str(src).map_err(|e| Error::Catalog(format!("invalid JSON: {e}")))?;
    catalog_from_json(&v)
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

pub fn divisor_to_json(d: &Divisor) -> Value {
    json!({
        "support": d
            .support
            .iter()
            .map(|(place, mult)| json!({ "place": place_to_json(place), "mult": mult }))
            .collect::<Vec<_>>(),
    })
}

pub fn pic_report_to_json(r: &PicReport) -> Value {
    let structure = match &r.structure {
        PicStructure::Trivial => json!("trivial"),
        PicStructure::InfiniteCyclicDegree => json!("infinite_cyclic_degree"),
        PicStructure::Finite(fs) => json!({ "finite": fs }),
    };
    json!({
        "structure": structure,
        "pic2_order": r.pic2_order,
        "certificate": r.certificate,
    })
}

pub fn verdict_status_to_json(s: &VerdictStatus) -> Value {
    match s {
        VerdictStatus::GoodAsIs => json!({ "status": "good_as_is" }),
        VerdictStatus::GoodAfterScaling(lambda) => {
            json!({ "status": "good_after_scaling", "lambda": lambda.to_string() })
        }
        VerdictStatus::Bad => json!({ "status": "bad" }),
        VerdictStatus::Refused(reason) => json!({ "status": "refused", "reason": reason }),
    }
}

pub fn reduction_report_to_json(r: &ReductionReport) -> Value {
    json!({
        "form": r.form_id,
        "vset": vset_to_json(&r.vset),
        "criterion": "witt-class",
        "verdicts": r
            .verdicts
            .iter()
            .map(|v| {
                let mut obj = verdict_status_to_json(&v.status);
                let map = obj.as_object_mut().unwrap();
                map.insert("place".into(), place_to_json(&v.place));
                if let Some(detail) = &v.detail {
                    map.insert("detail".into(), json!(detail));
                }
                obj
            })
            .collect::<Vec<_>>(),
        "bad_locus": r.bad_locus.iter().map(place_to_json).collect::<Vec<_>>(),
        "blanket_good_elsewhere": r.blanket_good_elsewhere,
    })
}

pub fn residue_split_to_json(s: &ResidueSplit) -> Value {
    json!({
        "residue_field": field_to_json(&s.residue_field),
        "first": s.first.entries.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "second": s.second.entries.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "scaling_used": s.scaling_used.to_string(),
    })
}

pub fn classification_to_json(c: &Classification) -> Value {
    let trail: BTreeMap<String, Value> = c
        .trail
        .iter()
        .map(|(id, labels)| (id.clone(), json!(labels)))
        .collect();
    json!({
        "ids": c.ids,
        "classes": c.classes,
        "class_count": c.classes.len(),
        "bound": c.bound,
        "bound_satisfied": c.bound_satisfied,
        "trail": trail,
        "normalizations": c.normalizations,
    })
}

pub fn quaternion_to_json(q: &QuaternionDesc) -> Value {
    match q {
        QuaternionDesc::Split { field } => json!({
            "split": true,
            "field": field_to_json(field),
        }),
        QuaternionDesc::Algebra { field, a, b } => json!({
            "split": false,
            "field": field_to_json(field),
            "pair": [a.to_string(), b.to_string()],
        }),
    }
}

pub fn genus_to_json(g: &GenusObstruction) -> Value {
    json!({
        "bad_places": g.bad_places.iter().map(place_to_json).collect::<Vec<_>>(),
        "fibers": g
            .fibers
            .iter()
            .map(|f| {
                json!({
                    "members": f.members,
                    "residues": f.residues.iter().map(quaternion_to_json).collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
        "undecided_pairs": g
            .undecided_pairs
            .iter()
            .map(|(a, b)| json!([a, b]))
            .collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_catalog_document() {
        let src = r#"{
            "schema": 1,
            "field": "Q(t)",
            "vset": {"kind": "geometric_affine"},
            "entries": [
                {"id": "q1", "quadratic": ["t", "-t", "1", "1", "1"]},
                {"id": "o1", "octonion": ["-1", "-1", "t"]},
                {"id": "h1", "hermitian": {"delta": "t", "entries": ["1", "-1"]}}
            ]
        }"#;
        let cat = catalog_from_str(src).unwrap();
        assert_eq!(cat.entries.len(), 3);
        assert_eq!(cat.quadratic_entries().len(), 1);
        assert_eq!(cat.octonion_entries().len(), 1);
        assert_eq!(cat.hermitian_entries().len(), 1);
        assert!(cat.vset.is_some());
    }

    #[test]
    fn place_roundtrip() {
        let kt = FieldDesc::rational_function(FieldDesc::Rationals, "t").unwrap();
        for (field, v) in [
            (FieldDesc::Rationals, json!({"prime": 7})),
            (kt.clone(), json!({"poly": "t^2+1"})),
            (kt.clone(), json!({"degree": true})),
            (kt.clone(), json!({"gauss_prime": 3})),
            (FieldDesc::Rationals, json!({"real": true})),
        ] {
            let place = place_from_json(&field, &v).unwrap();
            let back = place_to_json(&place);
            let again = place_from_json(&field, &back).unwrap();
            assert_eq!(place, again);
        }
        // non-irreducible polynomial rejected
        assert!(place_from_json(&kt, &json!({"poly": "t^2-1"})).is_err());
    }

    #[test]
    fn vset_wire() {
        let v = vset_from_json(
            None,
            &json!({"field": "Q", "kind": "all_primes_except", "S": [2]}),
        )
        .unwrap();
        assert!(v.condition_b());
        let back = vset_to_json(&v);
        let again = vset_from_json(None, &back).unwrap();
        assert_eq!(v, again);
    }

    #[test]
    fn symbol_sum_shapes() {
        let q = FieldDesc::Rationals;
        let a = symbolsum_from_json(&q, &json!(["-1", "-1"])).unwrap();
        let b = symbolsum_from_json(&q, &json!([["-1", "-1"]])).unwrap();
        let c = symbolsum_from_json(&q, &json!({"degree": 2, "symbols": [["-1","-1"]]})).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        let round = symbolsum_from_json(&q, &symbolsum_to_json(&a)).unwrap();
        assert_eq!(a, round);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let src = r#"{"schema": 1, "field": "Q", "entries": [
            {"id": "x", "quadratic": ["1"]},
            {"id": "x", "quadratic": ["2"]}
        ]}"#;
        assert!(matches!(catalog_from_str(src), Err(Error::Catalog(_))));
    }
}
