//! Truncated jet spaces of vector fields along a germ, and exact sparse
//! linear algebra over them.
//!
//! A jet space here is the K-vector space of p-tuples of polynomials of
//! total degree <= d in n variables. Its canonical basis is indexed by
//! (monomial, component) pairs ordered by degree, then the global monomial
//! order, then component — so pivot selection, quotient representatives and
//! printed bases are all deterministic.
//!
//! [`JetSubspace`] maintains a reduced echelon basis (leading coefficient 1,
//! pivot columns cleared from every other row). Reduced echelon form is
//! canonical for a row space, so the stored basis — and everything derived
//! from it — is independent of generator order and scaling.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::germ::GermVector;
use crate::poly::{monomials_of_degree, monomials_up_to, jet_monomial_count, Monomial, Poly, Rat};

/// Basis indexing for the space of `ncomponents`-tuples of `d`-jets in
/// `nvars` variables.
#[derive(Debug)]
pub struct JetBasisIndex {
    nvars: usize,
    ncomponents: usize,
    degree: u32,
    cols: Vec<(u16, Monomial)>,
    lookup: HashMap<(u16, Monomial), u32>,
}

impl JetBasisIndex {
    /// Enumerates the canonical basis; `size() = ncomponents * C(nvars + d, nvars)`.
    pub fn new(nvars: usize, ncomponents: usize, degree: u32) -> Arc<Self> {
        let mut cols = Vec::new();
        for d in 0..=degree {
            for m in monomials_of_degree(nvars, d) {
                for comp in 0..ncomponents as u16 {
                    cols.push((comp, m.clone()));
                }
            }
        }
        let lookup = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();
        let idx = JetBasisIndex { nvars, ncomponents, degree, cols, lookup };
        debug_assert_eq!(idx.size(), ncomponents * jet_monomial_count(nvars, degree));
        Arc::new(idx)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ncomponents(&self) -> usize {
        self.ncomponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, i: u32) -> &(u16, Monomial) {
        &self.cols[i as usize]
    }

    pub fn column_degree(&self, i: u32) -> u32 {
        self.cols[i as usize].1.degree()
    }

    /// Sparse row of a vector of polynomials; terms above the truncation
    /// degree are discarded (callers are expected to pass truncated jets).
    pub fn row_of(&self, v: &GermVector) -> Result<SparseRow, Error> {
        if v.len() != self.ncomponents {
            return Err(Error::ArityMismatch { expected: self.ncomponents, got: v.len() });
        }
        let mut entries = Vec::new();
        for (comp, p) in v.comps().iter().enumerate() {
            if p.nvars() != self.nvars {
                return Err(Error::VarMismatch { expected: self.nvars, got: p.nvars() });
            }
            for (m, c) in p.terms() {
                if m.degree() <= self.degree {
                    let col = self.lookup[&(comp as u16, m.clone())];
                    entries.push((col, c.clone()));
                }
            }
        }
        entries.sort_by_key(|e| e.0);
        Ok(entries)
    }

    pub fn vector_of(&self, row: &SparseRow) -> GermVector {
        let mut comps = vec![Poly::zero(self.nvars); self.ncomponents];
        let mut terms: Vec<Vec<(Monomial, Rat)>> = vec![Vec::new(); self.ncomponents];
        for (col, c) in row {
            let (comp, m) = self.column(*col);
            terms[*comp as usize].push((m.clone(), c.clone()));
        }
        for (i, t) in terms.into_iter().enumerate() {
            comps[i] = Poly::from_terms(self.nvars, t);
        }
        GermVector::new(comps)
    }

    pub fn unit_vector(&self, col: u32) -> GermVector {
        self.vector_of(&vec![(col, Rat::one())])
    }
}

/// Sorted sparse row: (column, nonzero coefficient) pairs.
pub type SparseRow = Vec<(u32, Rat)>;

/// `target -= c * src`, merging sorted sparse rows.
fn row_axpy(target: &SparseRow, c: &Rat, src: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < src.len() {
        if j == src.len() || (i < target.len() && target[i].0 < src[j].0) {
            out.push(target[i].clone());
            i += 1;
        } else if i == target.len() || src[j].0 < target[i].0 {
            out.push((src[j].0, -(c * &src[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - &(c * &src[j].1);
            if !v.is_zero() {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Result of a membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Inside,
    /// The canonical normal form (supported on complement columns only).
    Outside(GermVector),
}

/// Quotient summary of a subspace inside its ambient jet space.
#[derive(Debug, Clone)]
pub struct SubspaceReport {
    pub dimension: usize,
    pub codimension: usize,
    pub complement: Vec<GermVector>,
}

/// A subspace of a truncated jet space held in reduced echelon form.
#[derive(Debug, Clone)]
pub struct JetSubspace {
    index: Arc<JetBasisIndex>,
    rows: Vec<SparseRow>,
    pivot_of_col: HashMap<u32, usize>,
    module_span: bool,
}

impl JetSubspace {
    pub fn empty(index: Arc<JetBasisIndex>) -> Self {
        JetSubspace { index, rows: Vec::new(), pivot_of_col: HashMap::new(), module_span: false }
    }

    /// K-linear span of the given jets.
    pub fn span(vectors: &[GermVector], index: Arc<JetBasisIndex>) -> Result<Self, Error> {
        let mut s = JetSubspace::empty(index);
        s.insert_vectors(vectors)?;
        Ok(s)
    }

    /// Span of the module generated by `generators` over the local ring,
    /// truncated at the index degree: the generators are saturated with all
    /// monomial multiples first. Only spans built this way may answer the
    /// Nakayama certificate query.
    pub fn span_module(generators: &[GermVector], index: Arc<JetBasisIndex>) -> Result<Self, Error> {
        let saturated = module_saturate(generators, index.degree());
        let mut s = JetSubspace::empty(index);
        s.insert_vectors(&saturated)?;
        s.module_span = true;
        Ok(s)
    }

    fn insert_vectors(&mut self, vectors: &[GermVector]) -> Result<(), Error> {
        let mut rows = vectors
            .iter()
            .map(|v| self.index.row_of(v))
            .collect::<Result<Vec<_>, _>>()?;
        // Cheap rows first: single-monomial generators become pivots with no
        // fraction arithmetic and dramatically shorten later reductions.
        rows.sort_by(|a, b| (a.len(), a.first().map(|e| e.0)).cmp(&(b.len(), b.first().map(|e| e.0))));
        rows.dedup();
        for row in rows {
            self.insert_row(row);
        }
        Ok(())
    }

    /// Adds extra K-vectors to the span. The result is no longer a pure
    /// module span, so the certificate flag is cleared.
    pub fn extend_with(&mut self, vectors: &[GermVector]) -> Result<(), Error> {
        self.module_span = false;
        for v in vectors {
            let row = self.index.row_of(v)?;
            self.insert_row(row);
        }
        Ok(())
    }

    /// Fully reduces `row` against the echelon basis; the result has no
    /// entries in pivot columns.
    fn reduce_row(&self, mut row: SparseRow) -> SparseRow {
        let mut i = 0;
        while i < row.len() {
            match self.pivot_of_col.get(&row[i].0) {
                Some(&ri) => {
                    let c = row[i].1.clone();
                    row = row_axpy(&row, &c, &self.rows[ri]);
                }
                None => i += 1,
            }
        }
        row
    }

    /// Inserts one row, keeping reduced echelon form; returns whether the
    /// rank grew.
    pub(crate) fn insert_row(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce_row(row);
        if row.is_empty() {
            return false;
        }
        let lead = row[0].1.clone();
        if !lead.is_one() {
            let inv = lead.recip();
            for (_, v) in row.iter_mut() {
                *v = &*v * &inv;
            }
        }
        let col = row[0].0;
        for r in self.rows.iter_mut() {
            if let Ok(pos) = r.binary_search_by_key(&col, |e| e.0) {
                let c = r[pos].1.clone();
                *r = row_axpy(r, &c, &row);
            }
        }
        self.pivot_of_col.insert(col, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn index(&self) -> &Arc<JetBasisIndex> {
        &self.index
    }

    pub fn degree(&self) -> u32 {
        self.index.degree()
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn codimension(&self) -> usize {
        self.index.size() - self.rows.len()
    }

    pub fn is_module_span(&self) -> bool {
        self.module_span
    }

    /// Canonical normal form of a vector modulo the subspace.
    pub fn normal_form(&self, v: &GermVector) -> Result<GermVector, Error> {
        let row = self.index.row_of(v)?;
        Ok(self.index.vector_of(&self.reduce_row(row)))
    }

    pub fn membership(&self, v: &GermVector) -> Result<Membership, Error> {
        let row = self.index.row_of(v)?;
        let red = self.reduce_row(row);
        Ok(if red.is_empty() {
            Membership::Inside
        } else {
            Membership::Outside(self.index.vector_of(&red))
        })
    }

    pub(crate) fn reduce_to_row(&self, v: &GermVector) -> Result<SparseRow, Error> {
        Ok(self.reduce_row(self.index.row_of(v)?))
    }

    /// Fully reduces a raw sparse row (columns need not belong to the
    /// index; extra columns pass through untouched unless they are pivots).
    pub(crate) fn reduce_sparse(&self, row: SparseRow) -> SparseRow {
        self.reduce_row(row)
    }

    /// Non-pivot columns in the canonical order; their classes form a basis
    /// of the quotient.
    pub fn complement_columns(&self) -> Vec<u32> {
        (0..self.index.size() as u32)
            .filter(|c| !self.pivot_of_col.contains_key(c))
            .collect()
    }

    pub fn complement_vectors(&self) -> Vec<GermVector> {
        self.complement_columns()
            .into_iter()
            .map(|c| self.index.unit_vector(c))
            .collect()
    }

    pub fn report(&self) -> SubspaceReport {
        SubspaceReport {
            dimension: self.dimension(),
            codimension: self.codimension(),
            complement: self.complement_vectors(),
        }
    }

    /// Certifies that the underlying module contains every jet of the
    /// truncation degree `d`, hence (by Nakayama over the local ring) the
    /// whole d-th power of the maximal ideal times the free module — so the
    /// codimension read off this truncation is exact.
    ///
    /// Valid only for module spans; adding loose K-vectors first is an error.
    pub fn nakayama_certificate(&self) -> Result<bool, Error> {
        if !self.module_span {
            return Err(Error::NotModuleSpan);
        }
        let d = self.index.degree();
        for col in 0..self.index.size() as u32 {
            if self.index.column_degree(col) != d {
                continue;
            }
            // The unit vector e_col lies in the span iff col is a pivot whose
            // row is exactly e_col (rows are fully reduced).
            match self.pivot_of_col.get(&col) {
                Some(&ri) if self.rows[ri].len() == 1 => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }
}

/// All nonzero truncated multiples `x^α · g` of the generators with
/// |α| <= d, deduplicated: a spanning set of the degree-d truncation of the
/// generated module.
pub fn module_saturate(generators: &[GermVector], d: u32) -> Vec<GermVector> {
    let Some(first) = generators.first() else {
        return Vec::new();
    };
    let nvars = first.nvars();
    let mut out = std::collections::BTreeSet::new();
    for m in monomials_up_to(nvars, d) {
        for g in generators {
            let shifted = g.mul_monomial_trunc(&m, d);
            if !shifted.is_zero() {
                out.insert(shifted);
            }
        }
    }
    out.into_iter().collect()
}
