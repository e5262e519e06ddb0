//! wittforge: catalog ingestion, batch computation and report emission for
//! the quadratic-form / symbol calculus library.
//!
//! Exit codes: 0 success, 2 usage, 3 data error, 4 a Refused/Undecided
//! verdict was produced (suppressed by --allow-undecided), 5 internal
//! invariant violation (a bound or certification failure, never a
//! mathematical outcome).

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::path::PathBuf;
use wittforge::catalog::{self, Catalog, CatalogPayload};
use wittforge::divisorial::ValuationSet;
use wittforge::fields::{parse_element, FieldDesc};
use wittforge::reduction::{self, VerdictStatus};
use wittforge::symbols;
use wittforge::table::UnramifiedGroupTable;
use wittforge::witt::{self, QForm};
use wittforge::{Decision, Error};

#[derive(Parser)]
#[command(
    name = "wittforge",
    about = "exact quadratic-form, symbol and good-reduction calculus",
    version
)]
struct Cli {
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Exit 0 even when a verdict is Refused or Undecided.
    #[arg(long, global = true)]
    allow_undecided: bool,
    /// Worker threads for per-entry computations.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// First/second residue of a form, or the tame residue of a symbol, at a
    /// place.
    Residue {
        #[arg(long)]
        field: String,
        /// Place JSON, e.g. '{"poly":"t"}' or '{"prime":3}'.
        #[arg(long)]
        place: String,
        /// Diagonal entries JSON, e.g. '["t","1+t"]'.
        #[arg(long)]
        form: Option<String>,
        /// Symbol sum JSON, e.g. '[["a","b","t"]]'.
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Reduction profile of every catalog entry over the declared V.
    Profile {
        #[arg(long)]
        catalog: PathBuf,
        /// Valuation-set JSON (overrides the catalog's).
        #[arg(long)]
        vset: Option<String>,
    },
    /// Similarity classification of the catalog's quadratic entries.
    Classify {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        vset: Option<String>,
    },
    /// Local-global fiber classification against a base form.
    Fiber {
        #[arg(long)]
        catalog: PathBuf,
        /// Id of the base form (default: first quadratic entry).
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        vset: Option<String>,
    },
    /// Picard group report of a certified valuation set.
    Pic {
        #[arg(long)]
        field: String,
        #[arg(long)]
        vset: String,
    },
    /// Certified sieve bound d_0 d_1 ... d_ell for dimension n.
    Bound {
        #[arg(long)]
        field: String,
        #[arg(long)]
        vset: String,
        #[arg(long)]
        n: u64,
    },
    /// Symbol triviality (default) or residue (with --place).
    Symbol {
        #[arg(long)]
        field: String,
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        place: Option<String>,
    },
    /// Genus-obstruction fibers of the catalog's octonion entries.
    G2Genus {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        vset: Option<String>,
    },
    /// Pairwise hermitian equivalence over the catalog's hermitian entries.
    HermitianEq {
        #[arg(long)]
        catalog: PathBuf,
    },
    /// Spinor-norm membership for a Pfister form.
    SpinorNorm {
        #[arg(long)]
        field: String,
        /// Pfister slots JSON, e.g. '["-1","-1"]'.
        #[arg(long)]
        pfister: String,
        #[arg(long)]
        element: String,
    },
    /// Reduced-norm membership for a rational quaternion algebra (a, b).
    Nrd {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        x: String,
    },
}

/// What the report contains, for exit-code purposes.
#[derive(Default)]
struct RunFlags {
    undecided: bool,
    violation: bool,
}

fn main() {
    let cli = Cli::parse();
    if cli.jobs > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .ok();
    }
    match run(&cli) {
        Ok((report, flags)) => {
            let text = if cli.pretty {
                render_pretty(&report)
            } else {
                serde_json::to_string(&report).expect("serializable")
            };
            // tolerate a closed pipe (e.g. | head)
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{text}");
            let _ = stdout.flush();
            if flags.violation {
                std::process::exit(5);
            }
            if flags.undecided && !cli.allow_undecided {
                std::process::exit(4);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Internal(_) => 5,
                _ => 3,
            };
            std::process::exit(code);
        }
    }
}

fn parse_json(src: &str) -> Result<Value, Error> {
    serde_json::from_str(src).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn load_catalog(path: &PathBuf) -> Result<Catalog, Error> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
    catalog::catalog_from_str(&src)
}

fn resolve_vset(cat: &Catalog, flag: &Option<String>) -> Result<ValuationSet, Error> {
    match flag {
        Some(src) => catalog::vset_from_json(Some(&cat.field), &parse_json(src)?),
        None => cat
            .vset
            .clone()
            .ok_or_else(|| Error::Catalog("no vset in catalog or flags".into())),
    }
}

fn run(cli: &Cli) -> Result<(Value, RunFlags), Error> {
    let mut flags = RunFlags::default();
    let report = match &cli.cmd {
        Cmd::Residue {
            field,
            place,
            form,
            symbol,
        } => {
            let field = catalog::field_from_str(field)?;
            let place = catalog::place_from_json(&field, &parse_json(place)?)?;
            match (form, symbol) {
                (Some(form), None) => {
                    let q = catalog::qform_from_json(Some(&field), &parse_json(form)?)?;
                    let split = witt::residue_split(&field, &place, &q)?;
                    json!({
                        "op": "residue",
                        "place": catalog::place_to_json(&place),
                        "form": catalog::qform_to_json(&q),
                        "split": catalog::residue_split_to_json(&split),
                    })
                }
                (None, Some(symbol)) => {
                    let s = catalog::symbolsum_from_json(&field, &parse_json(symbol)?)?;
                    let residue = symbols::symbol_residue(&field, &place, &s)?;
                    json!({
                        "op": "residue",
                        "place": catalog::place_to_json(&place),
                        "symbol": catalog::symbolsum_to_json(&s),
                        "residue": catalog::symbolsum_to_json(&residue),
                        "residue_field": catalog::field_to_json(&residue.field),
                    })
                }
                _ => {
                    return Err(Error::Parse(
                        "residue needs exactly one of --form / --symbol".into(),
                    ))
                }
            }
        }
        Cmd::Profile {
            catalog: path,
            vset,
        } => {
            let cat = load_catalog(path)?;
            let v = resolve_vset(&cat, vset)?;
            let indexed: Vec<(usize, &catalog::CatalogEntry)> =
                cat.entries.iter().enumerate().collect();
            let mut results: Vec<(usize, Result<Value, Error>)> = indexed
                .par_iter()
                .map(|(i, entry)| {
                    let out = profile_entry(&v, entry);
                    (*i, out)
                })
                .collect();
            results.sort_by_key(|(i, _)| *i);
            let mut reports = vec![];
            for (_, r) in results {
                let r = r?;
                if r.get("has_refused").and_then(Value::as_bool) == Some(true) {
                    flags.undecided = true;
                }
                reports.push(r);
            }
            json!({ "op": "profile", "vset": catalog::vset_to_json(&v), "reports": reports })
        }
        Cmd::Classify {
            catalog: path,
            vset,
        } => {
            let cat = load_catalog(path)?;
            let v = resolve_vset(&cat, vset)?;
            let quad = cat.quadratic_entries();
            let classification = wittforge::sieve::classify_similarity(&v, &quad)?;
            if !classification.bound_satisfied {
                flags.violation = true;
            }
            json!({
                "op": "classify",
                "vset": catalog::vset_to_json(&v),
                "classification": catalog::classification_to_json(&classification),
            })
        }
        Cmd::Fiber {
            catalog: path,
            base,
            vset,
        } => {
            let cat = load_catalog(path)?;
            let v = resolve_vset(&cat, vset)?;
            let quad = cat.quadratic_entries();
            let base_form: QForm = match base {
                Some(id) => quad
                    .iter()
                    .find(|(qid, _)| qid == id)
                    .map(|(_, q)| q.clone())
                    .ok_or_else(|| Error::Catalog(format!("no entry with id {id}")))?,
                None => quad
                    .first()
                    .map(|(_, q)| q.clone())
                    .ok_or_else(|| Error::Catalog("no quadratic entries".into()))?,
            };
            let classification = wittforge::sieve::fiber_classify(&v, &base_form, &quad)?;
            if !classification.bound_satisfied {
                flags.violation = true;
            }
            json!({
                "op": "fiber",
                "vset": catalog::vset_to_json(&v),
                "base": catalog::qform_to_json(&base_form),
                "classification": catalog::classification_to_json(&classification),
            })
        }
        Cmd::Pic { field, vset } => {
            let f = catalog::field_from_str(field)?;
            let v = catalog::vset_from_json(Some(&f), &parse_json(vset)?)?;
            let report = wittforge::divisorial::pic(&v)?;
            json!({
                "op": "pic",
                "vset": catalog::vset_to_json(&v),
                "report": catalog::pic_report_to_json(&report),
            })
        }
        Cmd::Bound { field, vset, n } => {
            let f = catalog::field_from_str(field)?;
            let v = catalog::vset_from_json(Some(&f), &parse_json(vset)?)?;
            let table = UnramifiedGroupTable::load()?;
            let orders = table.resolve(&v, *n)?;
            json!({
                "op": "bound",
                "vset": catalog::vset_to_json(&v),
                "n": n,
                "ell": orders.ell,
                "d0": orders.d0,
                "d": orders.d,
                "omega": orders.omega,
                "bound": orders.sieve_bound(),
                "fiber_bound": orders.fiber_bound(),
                "provenance": orders.provenance,
            })
        }
        Cmd::Symbol {
            field,
            symbol,
            place,
        } => {
            let f = catalog::field_from_str(field)?;
            let s = catalog::symbolsum_from_json(&f, &parse_json(symbol)?)?;
            match place {
                Some(p) => {
                    let place = catalog::place_from_json(&f, &parse_json(p)?)?;
                    let residue = symbols::symbol_residue(&f, &place, &s)?;
                    json!({
                        "op": "symbol_residue",
                        "symbol": catalog::symbolsum_to_json(&s),
                        "place": catalog::place_to_json(&place),
                        "residue": catalog::symbolsum_to_json(&residue),
                        "residue_field": catalog::field_to_json(&residue.field),
                    })
                }
                None => {
                    let d = symbols::is_trivial(&s)?;
                    if d == Decision::Undecided {
                        flags.undecided = true;
                    }
                    json!({
                        "op": "symbol_trivial",
                        "symbol": catalog::symbolsum_to_json(&s),
                        "trivial": d,
                    })
                }
            }
        }
        Cmd::G2Genus {
            catalog: path,
            vset,
        } => {
            let cat = load_catalog(path)?;
            let v = resolve_vset(&cat, vset)?;
            let octs = cat.octonion_entries();
            if octs.is_empty() {
                return Err(Error::Catalog("no octonion entries".into()));
            }
            let g = wittforge::g2::genus_obstruction(&octs, &v)?;
            if !g.undecided_pairs.is_empty() {
                flags.undecided = true;
            }
            json!({
                "op": "g2-genus",
                "vset": catalog::vset_to_json(&v),
                "obstruction": catalog::genus_to_json(&g),
            })
        }
        Cmd::HermitianEq { catalog: path } => {
            let cat = load_catalog(path)?;
            let herms = cat.hermitian_entries();
            if herms.len() < 2 {
                return Err(Error::Catalog("need at least two hermitian entries".into()));
            }
            let mut pairs = vec![];
            for i in 0..herms.len() {
                for j in (i + 1)..herms.len() {
                    let (id1, h1) = &herms[i];
                    let (id2, h2) = &herms[j];
                    let eq = match wittforge::hermitian::hermitian_equivalent(h1, h2) {
                        Ok(b) => json!(b),
                        Err(Error::DimensionMismatch) => json!("dimension_mismatch"),
                        Err(Error::ExtensionMismatch) => json!("extension_mismatch"),
                        Err(e) => return Err(e),
                    };
                    pairs.push(json!({ "left": id1, "right": id2, "equivalent": eq }));
                }
            }
            json!({ "op": "hermitian-eq", "pairs": pairs })
        }
        Cmd::SpinorNorm {
            field,
            pfister,
            element,
        } => {
            let f = catalog::field_from_str(field)?;
            let spec = catalog::pfister_from_json(&f, &parse_json(pfister)?)?;
            let a = parse_element(&f, element)?;
            let d = symbols::spinor_norm_member(&f, &spec, &a)?;
            if d == Decision::Undecided {
                flags.undecided = true;
            }
            json!({
                "op": "spinor-norm",
                "pfister": spec.slots.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "element": a.to_string(),
                "member": d,
            })
        }
        Cmd::Nrd { a, b, x } => {
            let f = FieldDesc::Rationals;
            let a = parse_element(&f, a)?;
            let b = parse_element(&f, b)?;
            let x = parse_element(&f, x)?;
            let member = symbols::reduced_norm_member(&a, &b, &x)?;
            json!({
                "op": "nrd",
                "algebra": [a.to_string(), b.to_string()],
                "x": x.to_string(),
                "member": member,
            })
        }
    };
    Ok((report, flags))
}

fn profile_entry(v: &ValuationSet, entry: &catalog::CatalogEntry) -> Result<Value, Error> {
    match &entry.payload {
        CatalogPayload::Quadratic(q) => {
            let report = reduction::reduction_profile(v, &entry.id, q)?;
            let has_refused = report
                .verdicts
                .iter()
                .any(|x| matches!(x.status, VerdictStatus::Refused(_)));
            let mut out = catalog::reduction_report_to_json(&report);
            out.as_object_mut()
                .unwrap()
                .insert("has_refused".into(), json!(has_refused));
            Ok(out)
        }
        CatalogPayload::Hermitian(h) => {
            // per-place SU verdicts at the candidate places of the transfer
            let q = wittforge::hermitian::transfer(h)?;
            let places = reduction::candidate_places(&v.field, v, &q)?;
            let mut verdicts = vec![];
            let mut bad = vec![];
            let mut has_refused = false;
            for place in places {
                let verdict = reduction::su_good_reduction(&v.field, &place, &h.ext, h)?;
                if verdict.status == VerdictStatus::Bad {
                    bad.push(catalog::place_to_json(&verdict.place));
                }
                if matches!(verdict.status, VerdictStatus::Refused(_)) {
                    has_refused = true;
                }
                let mut obj = catalog::verdict_status_to_json(&verdict.status);
                let map = obj.as_object_mut().unwrap();
                map.insert("place".into(), catalog::place_to_json(&verdict.place));
                if let Some(detail) = &verdict.detail {
                    map.insert("detail".into(), json!(detail));
                }
                verdicts.push(obj);
            }
            Ok(json!({
                "form": entry.id,
                "kind": "hermitian",
                "criterion": "witt-class",
                "verdicts": verdicts,
                "bad_locus": bad,
                "has_refused": has_refused,
            }))
        }
        CatalogPayload::Octonion(o) => {
            let nf = o.norm_form()?;
            let places = reduction::candidate_places(&v.field, v, &nf)?;
            let mut verdicts = vec![];
            let mut bad = vec![];
            let mut has_refused = false;
            for place in places {
                let verdict = reduction::g2_good_reduction(&v.field, &place, o)?;
                if verdict.status == VerdictStatus::Bad {
                    bad.push(catalog::place_to_json(&verdict.place));
                }
                if matches!(verdict.status, VerdictStatus::Refused(_)) {
                    has_refused = true;
                }
                let mut obj = catalog::verdict_status_to_json(&verdict.status);
                obj.as_object_mut()
                    .unwrap()
                    .insert("place".into(), catalog::place_to_json(&verdict.place));
                verdicts.push(obj);
            }
            Ok(json!({
                "form": entry.id,
                "kind": "octonion",
                "criterion": "witt-class",
                "verdicts": verdicts,
                "bad_locus": bad,
                "has_refused": has_refused,
            }))
        }
    }
}

fn render_pretty(v: &Value) -> String {
    let mut out = String::new();
    let op = v.get("op").and_then(Value::as_str).unwrap_or("report");
    out.push_str(&format!("== {op} ==\n"));
    render_value(v, 0, &mut out);
    out
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                if k == "op" {
                    continue;
                }
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(val, indent + 1, out);
                    }
                    other => out.push_str(&format!("{pad}{k}: {other}\n")),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_value(item, indent + 1, out);
                    }
                    other => out.push_str(&format!("{pad}- {other}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}
