//! Exact computation of local invariants of polynomial map-germs
//! f: (K^n, 0) -> (K^p, 0) over the rationals.
//!
//! The crate provides sparse polynomial arithmetic over arbitrary-precision
//! rationals, truncated jet spaces with certified (Nakayama) codimension
//! computations, the contact and right-left tangent spaces of a germ, the
//! derived invariants (K_e- and A_e-codimension, the quotient N(f), the
//! constant-field invariant c(f), multiplicity, corank), constructions of
//! minimal stable unfoldings, Mather-style unfoldings and one-parameter
//! stable unfoldings with their versal normal forms, the six-generator
//! codimension recipe for corank-1 multiplicity-4 preforms, and a seeded
//! random-family experiment.
//!
//! All linear algebra is exact; no floating point is used anywhere.

pub mod config;
pub mod coord;
pub mod error;
pub mod family;
pub mod germ;
pub mod invariants;
pub mod jet;
pub mod linalg;
pub mod marar_tari;
pub mod parse;
pub mod poly;
pub mod unfold;

pub use config::{Config, GeneratorMode};
pub use coord::{ChangeDirection, CoordinateChange};
pub use error::Error;
pub use family::{
    build_fp, random_homogeneous, sample_seed, scan, FamilySample, ScanReport, ScanSummary,
};
pub use germ::{GermVector, MapGerm, Rank0Core, Unfolding};
pub use invariants::{
    ae_codim, ae_normal_basis, ke_codim, multiplicity, nf_space, CodimReport, NfReport, Status,
};
pub use jet::{module_saturate, JetBasisIndex, JetSubspace, Membership, SparseRow, SubspaceReport};
pub use marar_tari::{
    extract_pq, ge_codim, generator_set, GeReport, PQPair, CALIBRATED_MODE,
};
pub use parse::{parse_germ, render_germ, GermExpression};
pub use poly::{Monomial, Poly, Rat};
pub use unfold::{
    mather_unfolding, minimal_stable_unfolding, opsu, opsu_normal_form, verify_stable,
    MatherReport, MinimalUnfoldingReport, OpsuAdmits, OpsuVerdict, StabilityReport,
    VersalNormalForm,
};
