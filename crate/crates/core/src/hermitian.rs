//! Hermitian forms over a quadratic extension L = K(sqrt delta) and the
//! Jacobson transfer to quadratic forms over K.
//!
//! Diagonal hermitian entries are fixed by the involution, hence lie in K;
//! a full hermitian Gram matrix is accepted as an ingestion convenience and
//! diagonalized by exact arithmetic in K[x]/(x^2 - delta).

use crate::fields::{self, Element, FieldDesc};
use crate::witt::{self, QForm};
use crate::{Error, Result};

/// A quadratic field extension L = K(sqrt delta), delta a non-square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    pub base: FieldDesc,
    pub delta: Element,
}

impl QuadExt {
    pub fn new(base: FieldDesc, delta: Element) -> Result<Self> {
        base.check_form_theoretic()?;
        if delta.is_zero() {
            return Err(Error::ZeroElement);
        }
        if !delta.lies_in(&base) {
            return Err(Error::FieldMismatch("delta not in base field".into()));
        }
        if fields::is_square(&base, &delta)? {
            return Err(Error::Degenerate(
                "delta is a square: not a field extension".into(),
            ));
        }
        Ok(QuadExt { base, delta })
    }
}

/// A diagonal hermitian form <c_1, ..., c_n> over L/K, entries in K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianForm {
    pub ext: QuadExt,
    pub entries: Vec<Element>,
}

impl HermitianForm {
    pub fn new(ext: QuadExt, entries: Vec<Element>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Degenerate("n >= 1 required".into()));
        }
        for c in &entries {
            if c.is_zero() {
                return Err(Error::ZeroElement);
            }
            if !c.lies_in(&ext.base) {
                return Err(Error::FieldMismatch("hermitian entry not in K".into()));
            }
        }
        Ok(HermitianForm { ext, entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}

/// The Jacobson transfer: h = <c_1, ..., c_n> goes to the 2n-dimensional
/// quadratic form <c_1, -delta c_1, ..., c_n, -delta c_n> (each hermitian
/// slot contributes c_i times the norm form <1, -delta> of L/K).
pub fn transfer(h: &HermitianForm) -> Result<QForm> {
    let mut entries = Vec::with_capacity(2 * h.entries.len());
    for c in &h.entries {
        entries.push(c.clone());
        entries.push(c.mul(&h.ext.delta).neg());
    }
    QForm::new(h.ext.base.clone(), entries)
}

/// Jacobson's criterion: h_1 and h_2 are equivalent iff the transferred
/// quadratic forms are equivalent (same dimension plus Witt equivalence).
pub fn hermitian_equivalent(h1: &HermitianForm, h2: &HermitianForm) -> Result<bool> {
    if h1.ext != h2.ext {
        return Err(Error::ExtensionMismatch);
    }
    if h1.dim() != h2.dim() {
        return Err(Error::DimensionMismatch);
    }
    let q1 = transfer(h1)?;
    let q2 = transfer(h2)?;
    witt::witt_equivalent(&h1.ext.base, &q1, &q2)
}

/// Arithmetic in L = K[x]/(x^2 - delta), used only for Gram ingestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElem {
    pub a: Element,
    pub b: Element,
}

impl ExtElem {
    pub fn from_base(a: Element) -> Self {
        let zero = a.field().zero();
        ExtElem { a, b: zero }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(&self, o: &ExtElem) -> ExtElem {
        ExtElem {
            a: self.a.add(&o.a),
            b: self.b.add(&o.b),
        }
    }

    fn sub(&self, o: &ExtElem) -> ExtElem {
        ExtElem {
            a: self.a.sub(&o.a),
            b: self.b.sub(&o.b),
        }
    }

    fn mul(&self, o: &ExtElem, delta: &Element) -> ExtElem {
        ExtElem {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.b).mul(delta)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.a)),
        }
    }

    fn conj(&self) -> ExtElem {
        ExtElem {
            a: self.a.clone(),
            b: self.b.neg(),
        }
    }

    fn inverse(&self, delta: &Element) -> Result<ExtElem> {
        // (a + b w)^-1 = (a - b w) / (a^2 - delta b^2)
        let norm = self.a.square().sub(&self.b.square().mul(delta));
        if norm.is_zero() {
            return Err(Error::ZeroElement);
        }
        let ninv = norm.inverse()?;
        Ok(ExtElem {
            a: self.a.mul(&ninv),
            b: self.b.neg().mul(&ninv),
        })
    }
}

/// Diagonalize a hermitian Gram matrix over L (conjugate-symmetric, entries
/// a + b sqrt(delta)) into a diagonal hermitian form with K-entries.
pub fn diagonalize_hermitian(ext: &QuadExt, gram: &[Vec<ExtElem>]) -> Result<HermitianForm> {
    let n = gram.len();
    for row in gram {
        if row.len() != n {
            return Err(Error::Degenerate("Gram matrix must be square".into()));
        }
    }
    for i in 0..n {
        if !gram[i][i].b.is_zero() {
            return Err(Error::Degenerate(
                "hermitian diagonal must be fixed by the involution".into(),
            ));
        }
        for j in 0..n {
            if gram[i][j] != gram[j][i].conj() {
                return Err(Error::Degenerate(
                    "matrix is not conjugate-symmetric".into(),
                ));
            }
        }
    }
    let delta = &ext.delta;
    let mut m: Vec<Vec<ExtElem>> = gram.to_vec();
    let mut diag: Vec<Element> = vec![];
    for i in 0..n {
        if m[i][i].is_zero() {
            if let Some(j) = ((i + 1)..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(i, j);
                for row in m.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = ((i + 1)..n).find(|&j| !m[i][j].is_zero()) {
                // row_i += row_j, col_i += conj on the column side:
                // new diagonal = m_ij + conj(m_ij) = 2 Re(m_ij); if that
                // vanishes, mix with the sqrt(delta) twist instead
                let mij = m[i][j].clone();
                let twice_re = mij.add(&mij.conj());
                let scale = if twice_re.is_zero() {
                    // use w * m_ij + conj(w * m_ij) = 2 delta b != 0
                    ExtElem {
                        a: ext.base.zero(),
                        b: ext.base.one(),
                    }
                } else {
                    ExtElem::from_base(ext.base.one())
                };
                for k in 0..n {
                    let v = scale.mul(&m[j][k], delta);
                    m[i][k] = m[i][k].add(&v);
                }
                let cscale = scale.conj();
                for row in m.iter_mut() {
                    let v = cscale.mul(&row[j], delta);
                    row[i] = row[i].add(&v);
                }
            } else {
                return Err(Error::Degenerate("singular hermitian matrix".into()));
            }
        }
        if m[i][i].is_zero() {
            return Err(Error::Degenerate("singular hermitian matrix".into()));
        }
        let pivot = m[i][i].clone();
        let pinv = pivot.inverse(delta)?;
        for j in (i + 1)..n {
            if m[i][j].is_zero() {
                continue;
            }
            // factor = m_ij / m_ii; row_j -= conj(factor) row_i,
            // col_j -= factor col_i
            let factor = m[i][j].mul(&pinv, delta);
            let cfactor = factor.conj();
            for k in 0..n {
                let d = cfactor.mul(&m[i][k], delta);
                m[j][k] = m[j][k].sub(&d);
            }
            for row in m.iter_mut() {
                let d = factor.mul(&row[i], delta);
                row[j] = row[j].sub(&d);
            }
        }
        debug_assert!(m[i][i].b.is_zero());
        diag.push(m[i][i].a.clone());
    }
    HermitianForm::new(ext.clone(), diag)
}
