//! Certified orders of unramified cohomology groups and local-global
//! kernels, loaded from a versioned data file with a provenance string per
//! entry.
//!
//! The table refuses (field, valuation-set) pairs without a certified entry.
//! The default file ships with the crate; WITTFORGE_TABLE_PATH overrides it.

use crate::divisorial::{VSetKind, ValuationSet};
use crate::fields::FieldDesc;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

const DEFAULT_TABLE: &str = include_str!("../data/unramified_table.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderEntry {
    pub i: u32,
    pub order: u64,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VSetWire {
    pub kind: String,
    #[serde(rename = "S", default)]
    pub s: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableEntry {
    pub field: String,
    pub vset: VSetWire,
    pub pic2_order: u64,
    pub pic2_provenance: String,
    pub unramified: Vec<OrderEntry>,
    pub tail_order: u64,
    pub tail_provenance: String,
    pub kernel: Vec<OrderEntry>,
    pub kernel_tail_order: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnramifiedGroupTable {
    pub version: u32,
    pub entries: Vec<TableEntry>,
}

/// Resolved per-configuration orders for a given dimension n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedOrders {
    /// ell = floor(log2 n) + 1.
    pub ell: u32,
    /// d_0 = |Pic(V)/2 Pic(V)|.
    pub d0: u64,
    /// d_1, ..., d_ell.
    pub d: Vec<u64>,
    /// omega_1, ..., omega_ell (local-global kernel orders).
    pub omega: Vec<u64>,
    /// provenance strings, parallel to d (index 0 = Pic entry).
    pub provenance: Vec<String>,
}

impl ResolvedOrders {
    pub fn sieve_bound(&self) -> u64 {
        self.d0 * self.d.iter().product::<u64>()
    }

    pub fn fiber_bound(&self) -> u64 {
        self.omega.iter().product()
    }
}

impl UnramifiedGroupTable {
    pub fn parse(src: &str) -> Result<Self> {
        let table: UnramifiedGroupTable =
            serde_json::from_str(src).map_err(|e| Error::Parse(format!("table file: {e}")))?;
        for entry in &table.entries {
            for oe in entry.unramified.iter().chain(entry.kernel.iter()) {
                if !oe.order.is_power_of_two() {
                    return Err(Error::Parse(format!(
                        "order {} for H^{} is not a power of 2",
                        oe.order, oe.i
                    )));
                }
            }
            if !entry.pic2_order.is_power_of_two()
                || !entry.tail_order.is_power_of_two()
                || !entry.kernel_tail_order.is_power_of_two()
            {
                return Err(Error::Parse("orders must be powers of 2".into()));
            }
        }
        Ok(table)
    }

    /// Load from WITTFORGE_TABLE_PATH if set, else the embedded default.
    pub fn load() -> Result<Self> {
        match std::env::var("WITTFORGE_TABLE_PATH") {
            Ok(path) => {
                let src = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Parse(format!("table file {path}: {e}")))?;
                Self::parse(&src)
            }
            Err(_) => Self::parse(DEFAULT_TABLE),
        }
    }

    fn find(&self, vset: &ValuationSet) -> Option<&TableEntry> {
        self.entries.iter().find(|e| {
            let field_match = match (&vset.field, e.field.as_str()) {
                (FieldDesc::Rationals, "Q") => true,
                _ => false,
            };
            if !field_match {
                return false;
            }
            match (&vset.kind, e.vset.kind.as_str()) {
                (VSetKind::AllPrimesExcept(s), "all_primes_except") => {
                    let es: BTreeSet<u64> = e.vset.s.iter().copied().collect();
                    *s == es
                }
                _ => false,
            }
        })
    }

    /// Resolve the orders d_0, d_1, ..., d_ell and omega_1, ..., omega_ell
    /// for forms of dimension n over the configuration.
    pub fn resolve(&self, vset: &ValuationSet, n: u64) -> Result<ResolvedOrders> {
        if n < 1 {
            return Err(Error::Degenerate("n >= 1 required".into()));
        }
        let entry = self.find(vset).ok_or_else(|| {
            Error::UnsupportedConfiguration(format!(
                "no certified unramified-order entry for {vset}"
            ))
        })?;
        let ell = n.ilog2() + 1;
        let mut d = vec![];
        let mut omega = vec![];
        let mut provenance = vec![entry.pic2_provenance.clone()];
        for i in 1..=ell {
            match entry.unramified.iter().find(|oe| oe.i == i) {
                Some(oe) => {
                    d.push(oe.order);
                    provenance.push(oe.provenance.clone());
                }
                None => {
                    d.push(entry.tail_order);
                    provenance.push(entry.tail_provenance.clone());
                }
            }
            match entry.kernel.iter().find(|oe| oe.i == i) {
                Some(oe) => omega.push(oe.order),
                None => omega.push(entry.kernel_tail_order),
            }
        }
        Ok(ResolvedOrders {
            ell,
            d0: entry.pic2_order,
            d,
            omega,
            provenance,
        })
    }
}

/// ell(n) = floor(log2 n) + 1.
pub fn ell(n: u64) -> u32 {
    assert!(n >= 1);
    n.ilog2() + 1
}

/// The certified orders for a configuration, through the default table.
pub fn unramified_table(vset: &ValuationSet, n: u64) -> Result<ResolvedOrders> {
    UnramifiedGroupTable::load()?.resolve(vset, n)
}

/// The certified bound d_0 d_1 ... d_ell for the number of similarity
/// classes of n-dimensional forms with good reduction on V.
pub fn sieve_bound(vset: &ValuationSet, n: u64) -> Result<u64> {
    let table = UnramifiedGroupTable::load()?;
    Ok(table.resolve(vset, n)?.sieve_bound())
}
