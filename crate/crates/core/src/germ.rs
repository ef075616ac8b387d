//! Polynomial map-germs (K^n, 0) -> (K^p, 0), vectors of polynomials along
//! them, and structural operations: Jacobian/pullback generator families,
//! differential rank and corank, reduction to a rank-zero core, and
//! unfoldings built by adding parameter-linear terms.

use num_traits::Zero;

use crate::coord::{ChangeDirection, CoordinateChange};
use crate::error::Error;
use crate::linalg::{self, Matrix};
use crate::poly::{monomials_up_to, Monomial, Poly, Rat};

/// An element of the free module of p-tuples of polynomials in n variables
/// (a "vector field along" whatever germ supplied the shape).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GermVector {
    comps: Vec<Poly>,
}

impl GermVector {
    /// Panics if the components are empty or disagree on variable count;
    /// vectors are built by this crate, not parsed from input.
    pub fn new(comps: Vec<Poly>) -> Self {
        assert!(!comps.is_empty(), "vector needs at least one component");
        let nvars = comps[0].nvars();
        assert!(
            comps.iter().all(|p| p.nvars() == nvars),
            "vector components must share a variable count"
        );
        GermVector { comps }
    }

    pub fn zero(nvars: usize, len: usize) -> Self {
        GermVector::new(vec![Poly::zero(nvars); len])
    }

    /// The j-th standard basis vector e_j.
    pub fn unit(nvars: usize, len: usize, j: usize) -> Self {
        let mut comps = vec![Poly::zero(nvars); len];
        comps[j] = Poly::constant(nvars, Rat::from_integer(1.into()));
        GermVector::new(comps)
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn into_comps(self) -> Vec<Poly> {
        self.comps
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nvars(&self) -> usize {
        self.comps[0].nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// Largest total degree over the components (0 for the zero vector).
    pub fn degree(&self) -> u32 {
        self.comps.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &GermVector) -> GermVector {
        assert_eq!(self.len(), other.len());
        GermVector::new(
            self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        )
    }

    pub fn sub(&self, other: &GermVector) -> GermVector {
        assert_eq!(self.len(), other.len());
        GermVector::new(
            self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> GermVector {
        GermVector::new(self.comps.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul_poly_trunc(&self, p: &Poly, d: u32) -> GermVector {
        GermVector::new(self.comps.iter().map(|q| q.mul_trunc(p, d)).collect())
    }

    pub fn mul_monomial_trunc(&self, m: &Monomial, d: u32) -> GermVector {
        GermVector::new(self.comps.iter().map(|q| q.mul_monomial_trunc(m, d)).collect())
    }

    pub fn truncate_jet(&self, d: u32) -> GermVector {
        GermVector::new(self.comps.iter().map(|q| q.truncate_jet(d)).collect())
    }

    pub fn pad_vars(&self, extra: usize) -> GermVector {
        GermVector::new(self.comps.iter().map(|q| q.pad_vars(extra)).collect())
    }
}

/// Keeps only terms free of the first `head` variables and re-expresses them
/// in the remaining variables.
fn restrict_to_tail_vars(p: &Poly, head: usize) -> Poly {
    let tail = p.nvars() - head;
    let terms = p
        .terms()
        .filter(|(m, _)| m.0[..head].iter().all(|&e| e == 0))
        .map(|(m, c)| (Monomial(m.0[head..].to_vec()), c.clone()))
        .collect::<Vec<_>>();
    Poly::from_terms(tail, terms)
}

/// Keeps only terms free of the last `drop` variables and shortens the
/// exponent vectors accordingly.
fn drop_tail_vars(p: &Poly, drop: usize) -> Poly {
    let keep = p.nvars() - drop;
    let terms = p
        .terms()
        .filter(|(m, _)| m.0[keep..].iter().all(|&e| e == 0))
        .map(|(m, c)| (Monomial(m.0[..keep].to_vec()), c.clone()))
        .collect::<Vec<_>>();
    Poly::from_terms(keep, terms)
}

/// Re-indexes the variables of `p` into an n-variable ring: old variable j
/// becomes variable `positions[j]`.
fn lift_vars(p: &Poly, nvars: usize, positions: &[usize]) -> Poly {
    assert_eq!(p.nvars(), positions.len());
    let terms = p
        .terms()
        .map(|(m, c)| {
            let mut e = vec![0u16; nvars];
            for (j, &pos) in positions.iter().enumerate() {
                e[pos] = m.0[j];
            }
            (Monomial(e), c.clone())
        })
        .collect::<Vec<_>>();
    Poly::from_terms(nvars, terms)
}

/// A polynomial map-germ fixing the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapGerm {
    nvars: usize,
    components: Vec<Poly>,
}

impl MapGerm {
    pub fn new(components: Vec<Poly>) -> Result<Self, Error> {
        if components.is_empty() {
            return Err(Error::BadConfig("a map-germ needs at least one component".into()));
        }
        let nvars = components[0].nvars();
        if nvars == 0 {
            return Err(Error::BadConfig("a map-germ needs at least one source variable".into()));
        }
        for p in &components {
            if p.nvars() != nvars {
                return Err(Error::VarMismatch { expected: nvars, got: p.nvars() });
            }
        }
        for (i, p) in components.iter().enumerate() {
            if !p.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { component: i });
            }
        }
        Ok(MapGerm { nvars, components })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    /// Equality as maps: same source dimension and identical components.
    pub fn same_map(&self, other: &MapGerm) -> bool {
        self == other
    }

    /// Largest component degree.
    pub fn degree(&self) -> u32 {
        self.components.iter().map(Poly::degree).max().unwrap_or(0)
    }

    /// Columns of the Jacobian matrix as vectors along the germ: the i-th
    /// entry is df/dx_i. These generate the "tangent to left composition"
    /// part of every tangent space used here.
    pub fn jacobian_columns(&self) -> Vec<GermVector> {
        (0..self.nvars)
            .map(|i| {
                GermVector::new(
                    self.components
                        .iter()
                        .map(|p| p.partial_derivative(i).expect("valid variable index"))
                        .collect(),
                )
            })
            .collect()
    }

    /// Generators f_j . e_i of the pullback of the target maximal ideal
    /// times the free module, as a module over source functions.
    pub fn contact_generators(&self) -> Vec<GermVector> {
        let p = self.target_dim();
        let mut out = Vec::with_capacity(p * p);
        for fj in &self.components {
            for i in 0..p {
                let mut comps = vec![Poly::zero(self.nvars); p];
                comps[i] = fj.clone();
                out.push(GermVector::new(comps));
            }
        }
        out
    }

    /// The d-jet of f^beta = f_1^beta_1 ... f_p^beta_p, the pullback of a
    /// target monomial.
    pub fn pullback_monomial(&self, beta: &Monomial, d: u32) -> Poly {
        assert_eq!(beta.nvars(), self.target_dim());
        let mut pullback = Poly::constant(self.nvars, Rat::from_integer(1.into()));
        for (j, &e) in beta.0.iter().enumerate() {
            if e > 0 {
                pullback = pullback.mul_trunc(&self.components[j].pow_trunc(e as u32, d), d);
            }
        }
        pullback
    }

    /// K-spanning set of the degree-d truncation of the pullbacks of target
    /// vector fields: f^beta . e_j over all target-monomial exponents
    /// 1 <= |beta| <= d. Since every component vanishes at the origin,
    /// higher beta only contribute above degree d.
    pub fn omega_generators(&self, d: u32) -> Vec<GermVector> {
        let p = self.target_dim();
        let mut out = Vec::new();
        for beta in monomials_up_to(p, d) {
            if beta.is_one() {
                continue;
            }
            let pullback = self.pullback_monomial(&beta, d);
            if pullback.is_zero() {
                continue;
            }
            for j in 0..p {
                let mut comps = vec![Poly::zero(self.nvars); p];
                comps[j] = pullback.clone();
                out.push(GermVector::new(comps));
            }
        }
        out
    }

    /// The differential at the origin as a p x n matrix.
    pub fn linear_part(&self) -> Matrix {
        self.components
            .iter()
            .map(|p| (0..self.nvars).map(|i| p.linear_coeff(i)).collect())
            .collect()
    }

    pub fn differential_rank(&self) -> usize {
        linalg::rank(&self.linear_part())
    }

    /// min(n, p) minus the rank of the differential at the origin.
    pub fn corank(&self) -> usize {
        self.nvars.min(self.target_dim()) - self.differential_rank()
    }

    /// Right-composition with a source coordinate change, truncated at
    /// degree d.
    pub fn precompose_trunc(&self, change: &CoordinateChange, d: u32) -> Result<MapGerm, Error> {
        if change.nvars() != self.nvars {
            return Err(Error::VarMismatch { expected: self.nvars, got: change.nvars() });
        }
        let comps = self
            .components
            .iter()
            .map(|p| p.substitute_trunc(change.components(), d))
            .collect::<Result<Vec<_>, _>>()?;
        MapGerm::new(comps)
    }

    /// Left-composition with an invertible linear map of the target (exact).
    pub fn postcompose_linear(&self, m: &Matrix) -> Result<MapGerm, Error> {
        let p = self.target_dim();
        if m.len() != p || m.iter().any(|row| row.len() != p) {
            return Err(Error::ArityMismatch { expected: p, got: m.len() });
        }
        let comps = (0..p)
            .map(|i| {
                let mut acc = Poly::zero(self.nvars);
                for (j, c) in m[i].iter().enumerate() {
                    if !c.is_zero() {
                        acc = acc.add(&self.components[j].scale(c));
                    }
                }
                acc
            })
            .collect();
        MapGerm::new(comps)
    }

    /// Normalizes the germ to the form (u, g(u, y)) with dg(0) = 0 and
    /// extracts the rank-zero core g(0, y). Compositions are truncated at
    /// degree `d`, so the core is reliable as a d-jet.
    pub fn rank0_core(&self, d: u32) -> Result<Rank0Core, Error> {
        let n = self.nvars;
        let p = self.target_dim();
        let l = self.linear_part();
        let (_, t, pivots) = linalg::rref_with_transform(&l);
        let r = pivots.len();
        let nonpivot_vars: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let t_inv = linalg::invert(&t).expect("row-reduction transform is invertible");

        if r == 0 {
            return Ok(Rank0Core {
                rank: 0,
                source_dim: n,
                target_dim: p,
                pivot_vars: pivots,
                nonpivot_vars,
                target_inverse: t_inv,
                normalized: Some(self.clone()),
                core: Some(self.clone()),
            });
        }

        // Target: straighten the differential rows.
        let fp = self.postcompose_linear(&t)?;
        // Source: use the first r straightened components as coordinates,
        // keep the non-pivot variables as-is.
        let mut phi_comps: Vec<Poly> = fp.components[..r].to_vec();
        for &k in &nonpivot_vars {
            phi_comps.push(Poly::var(n, k));
        }
        let phi = CoordinateChange::new(phi_comps, ChangeDirection::Source)?;
        let psi = phi.formal_inverse(d)?;
        let g = fp.precompose_trunc(&psi, d)?;
        debug_assert!(
            (0..r).all(|i| g.components[i] == Poly::var(n, i)),
            "normalization must straighten the first {r} components"
        );

        let normalized = if r < p {
            let mut comps: Vec<Poly> = (0..r).map(|i| Poly::var(n, i)).collect();
            comps.extend_from_slice(&g.components[r..]);
            Some(MapGerm::new(comps)?)
        } else {
            None
        };
        let core = if r < p && r < n {
            let comps = g.components[r..]
                .iter()
                .map(|q| restrict_to_tail_vars(q, r))
                .collect::<Vec<_>>();
            Some(MapGerm::new(comps)?)
        } else {
            None
        };
        Ok(Rank0Core {
            rank: r,
            source_dim: n,
            target_dim: p,
            pivot_vars: pivots,
            nonpivot_vars,
            target_inverse: t_inv,
            normalized,
            core,
        })
    }
}

/// Result of straightening the differential: the germ is equivalent to
/// (u, g(u, y)) and `core` is g(0, y) as a germ in the n - rank remaining
/// variables. `core` is `None` when the differential already has full rank
/// in the source or the target (immersion/submersion directions take no
/// core).
#[derive(Debug, Clone)]
pub struct Rank0Core {
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    /// Source variables consumed by the rank part (pivot columns of df(0)).
    pub pivot_vars: Vec<usize>,
    /// Source variables the core lives in, in order.
    pub nonpivot_vars: Vec<usize>,
    target_inverse: Matrix,
    /// The straightened germ (u, g(u, y)) in the original variable count.
    pub normalized: Option<MapGerm>,
    pub core: Option<MapGerm>,
}

impl Rank0Core {
    /// Transports a vector along the core back to a vector along the
    /// original germ: pad with zeros on the straightened components, rename
    /// core variables to their original positions, and undo the target
    /// straightening. Adding the result times a parameter to the original
    /// germ matches adding `v` times that parameter to the core.
    pub fn embed_core_vector(&self, v: &GermVector) -> GermVector {
        assert_eq!(v.len(), self.target_dim - self.rank);
        assert_eq!(v.nvars(), self.source_dim - self.rank);
        let lifted: Vec<Poly> = v
            .comps()
            .iter()
            .map(|q| lift_vars(q, self.source_dim, &self.nonpivot_vars))
            .collect();
        let mut comps = Vec::with_capacity(self.target_dim);
        for row in &self.target_inverse {
            let mut acc = Poly::zero(self.source_dim);
            for (j, c) in row.iter().enumerate().skip(self.rank) {
                if !c.is_zero() {
                    acc = acc.add(&lifted[j - self.rank].scale(c));
                }
            }
            comps.push(acc);
        }
        GermVector::new(comps)
    }
}

/// An unfolding F(x, u) = (f_u(x), u) of a germ, with the added trailing
/// source variables equal to the trailing target components.
#[derive(Debug, Clone)]
pub struct Unfolding {
    total: MapGerm,
    source_dim: usize,
    target_dim: usize,
    base_dim: usize,
}

impl Unfolding {
    /// The k-parameter unfolding (f + sum_i u_i . additions_i, u).
    pub fn from_additions(f: &MapGerm, additions: &[GermVector]) -> Result<Self, Error> {
        let n = f.nvars();
        let p = f.target_dim();
        let k = additions.len();
        for a in additions {
            if a.len() != p {
                return Err(Error::ArityMismatch { expected: p, got: a.len() });
            }
            if a.nvars() != n {
                return Err(Error::VarMismatch { expected: n, got: a.nvars() });
            }
        }
        let mut comps = Vec::with_capacity(p + k);
        for i in 0..p {
            let mut acc = f.component(i).pad_vars(k);
            for (j, a) in additions.iter().enumerate() {
                let u = Poly::var(n + k, n + j);
                acc = acc.add(&a.comps()[i].pad_vars(k).mul(&u));
            }
            comps.push(acc);
        }
        for j in 0..k {
            comps.push(Poly::var(n + k, n + j));
        }
        Ok(Unfolding {
            total: MapGerm::new(comps)?,
            source_dim: n,
            target_dim: p,
            base_dim: k,
        })
    }

    pub fn trivial(f: &MapGerm) -> Self {
        Unfolding {
            total: f.clone(),
            source_dim: f.nvars(),
            target_dim: f.target_dim(),
            base_dim: 0,
        }
    }

    pub fn total(&self) -> &MapGerm {
        &self.total
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn core_source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn core_target_dim(&self) -> usize {
        self.target_dim
    }

    /// Sets the parameters to zero and drops the parameter components,
    /// recovering the unfolded germ.
    pub fn restrict_to_origin(&self) -> MapGerm {
        let comps = self.total.components()[..self.target_dim]
            .iter()
            .map(|q| drop_tail_vars(q, self.base_dim))
            .collect();
        MapGerm::new(comps).expect("restriction of a valid unfolding is a valid germ")
    }
}
