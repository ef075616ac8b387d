//! Stable unfoldings: certified stability checks, minimal stable
//! unfoldings, the classical rank-reduction construction, one-parameter
//! stable unfolding (OPSU) verdicts, and the single-direction versal normal
//! form with its multiplier functions.

use num_traits::One;

use crate::config::Config;
use crate::error::Error;
use crate::germ::{GermVector, MapGerm, Unfolding};
use crate::invariants::{ae_pipeline, certified_contact_span, nf_space, CodimReport, NfReport, Status};
use crate::jet::{JetSubspace, SparseRow};
use crate::poly::{monomials_up_to, Poly, Rat};

/// Certified stability verdict: a germ is stable exactly when the contact
/// tangent space plus the constant vectors fills the whole module, i.e. the
/// parameter-counting quotient vanishes.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub stable: bool,
    pub evidence: NfReport,
}

pub fn verify_stable(f: &MapGerm, cfg: &Config) -> Result<StabilityReport, Error> {
    let evidence = nf_space(f, cfg)?;
    Ok(StabilityReport { stable: evidence.dimension == 0, evidence })
}

/// A stable unfolding together with the quotient evidence that sized it.
#[derive(Debug, Clone)]
pub struct MinimalUnfoldingReport {
    pub unfolding: Unfolding,
    pub nf: NfReport,
}

/// The stable unfolding with the fewest parameters: one per basis class of
/// the quotient by the contact tangent space plus constants.
pub fn minimal_stable_unfolding(f: &MapGerm, cfg: &Config) -> Result<MinimalUnfoldingReport, Error> {
    let nf = nf_space(f, cfg)?;
    let unfolding = Unfolding::from_additions(f, &nf.basis)?;
    Ok(MinimalUnfoldingReport { unfolding, nf })
}

/// The classical construction through the rank-zero core.
#[derive(Debug, Clone)]
pub struct MatherReport {
    pub unfolding: Unfolding,
    /// Rank of the differential at the origin.
    pub rank: usize,
    /// The rank-zero core the parameters were read from, if any.
    pub core: Option<MapGerm>,
    /// Parameter directions along the core (positive-degree quotient basis).
    pub core_directions: Vec<GermVector>,
    /// The same directions transported to vectors along the input germ.
    pub lifted_directions: Vec<GermVector>,
}

/// Builds a stable unfolding by straightening the germ to (u, g(u, y)),
/// taking the positive-degree quotient basis of the core g(0, y) modulo its
/// contact tangent space, and adding one parameter per basis class. Not
/// minimal in general: the count reflects the core, not the germ.
pub fn mather_unfolding(f: &MapGerm, cfg: &Config) -> Result<MatherReport, Error> {
    let reduction = f.rank0_core(cfg.max_degree)?;
    let Some(core) = reduction.core.clone() else {
        // Immersion or submersion directions: already stable, no parameters.
        return Ok(MatherReport {
            unfolding: Unfolding::trivial(f),
            rank: reduction.rank,
            core: None,
            core_directions: Vec::new(),
            lifted_directions: Vec::new(),
        });
    };
    let (span, _) = certified_contact_span(&core, cfg)?;
    let core_directions: Vec<GermVector> = span
        .complement_vectors()
        .into_iter()
        .filter(|v| v.degree() >= 1)
        .collect();
    let lifted: Vec<GermVector> = core_directions
        .iter()
        .map(|v| reduction.embed_core_vector(v))
        .collect();
    Ok(MatherReport {
        unfolding: Unfolding::from_additions(f, &lifted)?,
        rank: reduction.rank,
        core: Some(core),
        core_directions,
        lifted_directions: lifted,
    })
}

/// Whether a germ admits a one-parameter stable unfolding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpsuAdmits {
    /// The quotient is one-dimensional: the witness below is stable.
    Yes,
    /// The germ is already stable; the trivial one-parameter extension is a
    /// (degenerate) witness.
    YesTriviallyStable,
    /// The quotient needs two or more parameters; no one-parameter stable
    /// unfolding exists.
    No,
}

impl std::fmt::Display for OpsuAdmits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OpsuAdmits::Yes => "yes",
            OpsuAdmits::YesTriviallyStable => "yes_trivially_stable",
            OpsuAdmits::No => "no",
        })
    }
}

#[derive(Debug, Clone)]
pub struct OpsuVerdict {
    pub admits: OpsuAdmits,
    pub nf: NfReport,
    /// A one-parameter stable unfolding when one exists.
    pub witness: Option<Unfolding>,
}

pub fn opsu(f: &MapGerm, cfg: &Config) -> Result<OpsuVerdict, Error> {
    let nf = nf_space(f, cfg)?;
    let (admits, witness) = match nf.dimension {
        0 => {
            let zero = GermVector::zero(f.nvars(), f.target_dim());
            (OpsuAdmits::YesTriviallyStable, Some(Unfolding::from_additions(f, &[zero])?))
        }
        1 => (
            OpsuAdmits::Yes,
            Some(Unfolding::from_additions(f, std::slice::from_ref(&nf.basis[0]))?),
        ),
        _ => (OpsuAdmits::No, None),
    };
    Ok(OpsuVerdict { admits, nf, witness })
}

/// Miniversal unfolding rewritten along a single direction: all parameters
/// multiply the same vector, scaled by multiplier functions of the target.
#[derive(Debug, Clone)]
pub struct VersalNormalForm {
    /// The distinguished direction (the one-dimensional quotient basis).
    pub direction: GermVector,
    /// Multipliers p_2, ..., p_k in the *target* variables: parameter i
    /// enters as lambda_i * p_i(f) * direction. (Parameter 1 enters bare.)
    pub multipliers: Vec<Poly>,
    /// The right-left quotient the parameters came from (k = ae.value).
    pub ae: CodimReport,
    /// The unfolding (f + (lambda_1 + sum lambda_i p_i(f)) * direction, lambda).
    pub unfolding: Unfolding,
}

/// For a germ admitting a one-parameter stable unfolding, rewrites a
/// miniversal unfolding in the single-direction shape: each right-left
/// quotient representative gamma_i is matched as p_i(f) * gamma_1 modulo
/// the right-left tangent space.
pub fn opsu_normal_form(f: &MapGerm, cfg: &Config) -> Result<VersalNormalForm, Error> {
    let nf = nf_space(f, cfg)?;
    if nf.dimension != 1 {
        return Err(Error::NoOpsu { nf_dimension: nf.dimension });
    }
    let gamma1 = nf.basis[0].clone();
    let (span, ae) = ae_pipeline(f, cfg)?;
    if ae.status == Status::Inconclusive {
        return Err(Error::Inconclusive {
            what: "right-left tangent space plateau".into(),
            degree_cap: cfg.max_degree,
        });
    }
    // The distinguished direction is always among the canonical
    // representatives: the quotient with constants refines this one.
    let mut others: Vec<GermVector> = Vec::new();
    let mut seen_gamma1 = false;
    for v in &ae.complement {
        if *v == gamma1 {
            seen_gamma1 = true;
        } else {
            others.push(v.clone());
        }
    }
    debug_assert!(seen_gamma1, "the distinguished direction must represent a quotient class");

    let d = ae.degree;
    let mut multipliers = Vec::with_capacity(others.len());
    let mut additions = vec![gamma1.clone()];
    for (i, gi) in others.iter().enumerate() {
        let p = solve_multiplier(f, &span, &gamma1, gi, d)
            .ok_or(Error::NoMultiplierSolution { index: i + 2, degree: d })?;
        let p_of_f = p.substitute(f.components())?;
        let scaled = gamma1.mul_poly_trunc(&p_of_f, p_of_f.degree() + gamma1.degree());
        debug_assert!(
            matches!(span.membership(&scaled.sub(gi).truncate_jet(d)), Ok(crate::jet::Membership::Inside)),
            "multiplier must reproduce its representative modulo the tangent space"
        );
        additions.push(scaled);
        multipliers.push(p);
    }
    let unfolding = Unfolding::from_additions(f, &additions)?;
    Ok(VersalNormalForm { direction: gamma1, multipliers, ae, unfolding })
}

/// Finds p in the target maximal ideal with p(f) * gamma1 = target modulo
/// the span, as a d-jet. Single target monomials are tried first in the
/// global monomial order (normal-form proportionality makes the scalar
/// unique); failing that, a tagged elimination solves for a general
/// polynomial multiplier.
fn solve_multiplier(
    f: &MapGerm,
    span: &JetSubspace,
    gamma1: &GermVector,
    target: &GermVector,
    d: u32,
) -> Option<Poly> {
    let p = f.target_dim();
    let r_target = span.reduce_to_row(target).ok()?;
    if r_target.is_empty() {
        // Already inside: the zero multiplier works (should not occur for
        // quotient representatives, but is the honest answer).
        return Some(Poly::zero(p));
    }
    let mut candidates: Vec<(crate::poly::Monomial, SparseRow)> = Vec::new();
    for beta in monomials_up_to(p, d) {
        if beta.is_one() {
            continue;
        }
        let pullback = f.pullback_monomial(&beta, d);
        if pullback.is_zero() {
            continue;
        }
        let w = gamma1.mul_poly_trunc(&pullback, d);
        let r = span.reduce_to_row(&w).ok()?;
        if let Some(c) = proportionality(&r, &r_target) {
            return Some(Poly::from_terms(p, vec![(beta, c)]));
        }
        if !r.is_empty() {
            candidates.push((beta, r));
        }
    }
    // General solve: augment each candidate row with a tag column and
    // eliminate; the target's residual tag entries spell the combination.
    let offset = span.index().size() as u32;
    let mut tagged = JetSubspace::empty(span.index().clone());
    for (k, (_, r)) in candidates.iter().enumerate() {
        let mut row = r.clone();
        row.push((offset + k as u32, Rat::one()));
        tagged.insert_row(row);
    }
    let residual = tagged.reduce_sparse(r_target.clone());
    if residual.iter().any(|(c, _)| *c < offset) {
        return None;
    }
    let mut terms = Vec::new();
    for (c, v) in residual {
        let (beta, _) = &candidates[(c - offset) as usize];
        terms.push((beta.clone(), -v));
    }
    Some(Poly::from_terms(p, terms))
}

/// Scalar c with c * row = target, when the supports match exactly.
fn proportionality(row: &SparseRow, target: &SparseRow) -> Option<Rat> {
    if row.is_empty() || row.len() != target.len() {
        return None;
    }
    if row.iter().zip(target).any(|(a, b)| a.0 != b.0) {
        return None;
    }
    let c = &target[0].1 / &row[0].1;
    for (a, b) in row.iter().zip(target) {
        if (&a.1 * &c) != b.1 {
            return None;
        }
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn x() -> Poly {
        Poly::var(2, 0)
    }

    fn y() -> Poly {
        Poly::var(2, 1)
    }

    fn gv(comps: Vec<Poly>) -> GermVector {
        GermVector::new(comps)
    }

    /// (x, y^4 + x*y)
    fn tail_fold() -> MapGerm {
        MapGerm::new(vec![x(), y().pow(4).add(&x().mul(&y()))]).unwrap()
    }

    fn cusp() -> MapGerm {
        MapGerm::new(vec![x(), y().pow(3).add(&x().mul(&y()))]).unwrap()
    }

    #[test]
    fn stability_verdicts() {
        let cfg = Config::default();
        assert!(verify_stable(&cusp(), &cfg).unwrap().stable);
        let r = verify_stable(&tail_fold(), &cfg).unwrap();
        assert!(!r.stable);
        assert_eq!(r.evidence.dimension, 1);
    }

    #[test]
    fn minimal_unfolding_of_tail_fold() {
        let cfg = Config::default();
        let r = minimal_stable_unfolding(&tail_fold(), &cfg).unwrap();
        assert_eq!(r.unfolding.base_dim(), 1);
        // (x, y^4 + x*y + u*y^2, u)
        let u = Poly::var(3, 2);
        let expected = MapGerm::new(vec![
            Poly::var(3, 0),
            Poly::var(3, 1)
                .pow(4)
                .add(&Poly::var(3, 0).mul(&Poly::var(3, 1)))
                .add(&u.mul(&Poly::var(3, 1).pow(2))),
            u,
        ])
        .unwrap();
        assert!(r.unfolding.total().same_map(&expected));
        // The construction is certified stable.
        assert!(verify_stable(r.unfolding.total(), &cfg).unwrap().stable);
    }

    #[test]
    fn rank_reduction_unfolding_of_tail_fold() {
        let cfg = Config::default();
        let r = mather_unfolding(&tail_fold(), &cfg).unwrap();
        assert_eq!(r.rank, 1);
        let t = Poly::var(1, 0);
        assert!(r.core.as_ref().unwrap().same_map(&MapGerm::new(vec![t.pow(4)]).unwrap()));
        assert_eq!(
            r.core_directions,
            vec![gv(vec![Poly::var(1, 0)]), gv(vec![Poly::var(1, 0).pow(2)])]
        );
        assert_eq!(
            r.lifted_directions,
            vec![gv(vec![Poly::zero(2), y()]), gv(vec![Poly::zero(2), y().pow(2)])]
        );
        // (x, y^4 + x*y + u1*y + u2*y^2, u1, u2): stable with one spare
        // parameter compared to the minimal construction.
        assert_eq!(r.unfolding.base_dim(), 2);
        assert!(verify_stable(r.unfolding.total(), &cfg).unwrap().stable);
    }

    #[test]
    fn opsu_verdicts() {
        let cfg = Config::default();
        let yes = opsu(&tail_fold(), &cfg).unwrap();
        assert_eq!(yes.admits, OpsuAdmits::Yes);
        assert!(verify_stable(yes.witness.as_ref().unwrap().total(), &cfg).unwrap().stable);

        let stable = opsu(&cusp(), &cfg).unwrap();
        assert_eq!(stable.admits, OpsuAdmits::YesTriviallyStable);
        assert!(verify_stable(stable.witness.as_ref().unwrap().total(), &cfg).unwrap().stable);

        // (x, y^4 + x^2*y) needs two parameters.
        let f = MapGerm::new(vec![x(), y().pow(4).add(&x().pow(2).mul(&y()))]).unwrap();
        let no = opsu(&f, &cfg).unwrap();
        assert_eq!(no.admits, OpsuAdmits::No);
        assert_eq!(no.nf.dimension, 2);
        assert!(no.witness.is_none());
    }

    #[test]
    fn normal_form_with_no_extra_multipliers() {
        let cfg = Config::default();
        let nf = opsu_normal_form(&tail_fold(), &cfg).unwrap();
        assert_eq!(nf.ae.value, 1);
        assert!(nf.multipliers.is_empty());
        assert_eq!(nf.direction, gv(vec![Poly::zero(2), y().pow(2)]));
        let minimal = minimal_stable_unfolding(&tail_fold(), &cfg).unwrap();
        assert!(nf.unfolding.total().same_map(minimal.unfolding.total()));
    }

    #[test]
    fn normal_form_solves_a_multiplier() {
        // (x, y^3 + x^3*y): quotient basis (0, y), right-left classes
        // {(0, y), (0, x*y)}; the second is X * gamma_1 on the nose.
        let f = MapGerm::new(vec![x(), y().pow(3).add(&x().pow(3).mul(&y()))]).unwrap();
        let cfg = Config::default();
        let nf = opsu_normal_form(&f, &cfg).unwrap();
        assert_eq!(nf.ae.value, 2);
        assert_eq!(nf.direction, gv(vec![Poly::zero(2), y()]));
        assert_eq!(nf.multipliers, vec![Poly::var(2, 0)]);
        // F = (x, y^3 + x^3*y + (l1 + l2*x)*y, l1, l2) is stable.
        assert!(verify_stable(nf.unfolding.total(), &cfg).unwrap().stable);
        assert_eq!(nf.unfolding.base_dim(), 2);
    }

    #[test]
    fn normal_form_requires_one_dimensional_quotient() {
        let f = MapGerm::new(vec![x(), y().pow(4).add(&x().pow(2).mul(&y()))]).unwrap();
        assert!(matches!(
            opsu_normal_form(&f, &Config::default()),
            Err(Error::NoOpsu { nf_dimension: 2 })
        ));
        assert!(matches!(
            opsu_normal_form(&cusp(), &Config::default()),
            Err(Error::NoOpsu { nf_dimension: 0 })
        ));
    }

    #[test]
    fn proportionality_is_exact() {
        let r1 = vec![(3u32, rat(2)), (5, rat(-4))];
        let r2 = vec![(3u32, rat(1)), (5, rat(-2))];
        assert_eq!(proportionality(&r1, &r2), Some(crate::poly::rat_frac(1, 2)));
        let r3 = vec![(3u32, rat(1)), (5, rat(2))];
        assert_eq!(proportionality(&r1, &r3), None);
        let r4 = vec![(3u32, rat(1))];
        assert_eq!(proportionality(&r1, &r4), None);
    }
}
