//! Codimension pipelines: contact tangent space, constant classes, the
//! quotient that counts stable-unfolding parameters, local multiplicity,
//! and the right-left tangent space.
//!
//! Every pipeline escalates a truncation degree and reports how the value
//! settled. Quotients of finitely generated modules certify exactness via
//! the top-degree criterion of [`JetSubspace::nakayama_certificate`]; the
//! right-left codimension has no such certificate and instead reports a
//! guarded plateau.

use crate::config::Config;
use crate::error::Error;
use crate::germ::{GermVector, MapGerm};
use crate::jet::{module_saturate, JetBasisIndex, JetSubspace};

/// How a reported value settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Exact: a truncation-degree certificate proves the value.
    Certified,
    /// The value repeated over a guarded window of degrees but carries no
    /// exactness proof.
    Heuristic,
    /// The escalation hit the degree cap without settling; the value is the
    /// last one seen and is only a lower bound.
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Certified => "certified",
            Status::Heuristic => "heuristic",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// First degree of every escalation schedule: `max(2, deg f)`.
fn schedule_start(germ_degree: u32) -> u32 {
    germ_degree.max(2)
}

/// A codimension value with its settling evidence.
#[derive(Debug, Clone)]
pub struct CodimReport {
    pub value: usize,
    pub status: Status,
    /// Degree at which the value settled (or the cap, when inconclusive).
    pub degree: u32,
    /// Monomial-vector representatives of a basis of the quotient.
    pub complement: Vec<GermVector>,
    /// (degree, value) trace of the escalation.
    pub history: Vec<(u32, usize)>,
}

/// The quotient by the contact tangent space plus constants, whose dimension
/// counts the parameters of a minimal stable unfolding.
#[derive(Debug, Clone)]
pub struct NfReport {
    pub dimension: usize,
    /// Monomial-vector representatives of a quotient basis.
    pub basis: Vec<GermVector>,
    /// Codimension of the contact tangent space alone.
    pub contact_codim: usize,
    /// Dimension of the span of the constant-vector classes.
    pub constant_span: usize,
    /// How many of the p constant vectors have nonzero class.
    pub nonzero_constants: usize,
    /// Certificate degree all of this was computed at.
    pub degree: u32,
}

fn contact_tangent_generators(f: &MapGerm) -> Vec<GermVector> {
    let mut gens = f.jacobian_columns();
    gens.extend(f.contact_generators());
    gens
}

/// Degree-d truncation of the contact tangent space as a module span.
pub(crate) fn contact_span(f: &MapGerm, d: u32) -> Result<JetSubspace, Error> {
    let idx = JetBasisIndex::new(f.nvars(), f.target_dim(), d);
    JetSubspace::span_module(&contact_tangent_generators(f), idx)
}

/// Escalates until the contact tangent space certifies; the certificate
/// makes every codimension read off the returned span exact.
pub(crate) fn certified_contact_span(
    f: &MapGerm,
    cfg: &Config,
) -> Result<(JetSubspace, u32), Error> {
    cfg.validate(f.degree())?;
    for d in schedule_start(f.degree())..=cfg.max_degree {
        let s = contact_span(f, d)?;
        if s.nakayama_certificate()? {
            return Ok((s, d));
        }
    }
    Err(Error::Inconclusive {
        what: "contact tangent space certificate".into(),
        degree_cap: cfg.max_degree,
    })
}

/// Codimension of the contact tangent space in the module of vectors along
/// the germ.
pub fn ke_codim(f: &MapGerm, cfg: &Config) -> Result<CodimReport, Error> {
    cfg.validate(f.degree())?;
    let mut history = Vec::new();
    let mut last: Option<JetSubspace> = None;
    for d in schedule_start(f.degree())..=cfg.max_degree {
        let s = contact_span(f, d)?;
        history.push((d, s.codimension()));
        if s.nakayama_certificate()? {
            return Ok(CodimReport {
                value: s.codimension(),
                status: Status::Certified,
                degree: d,
                complement: s.complement_vectors(),
                history,
            });
        }
        last = Some(s);
    }
    let s = last.ok_or_else(|| Error::Internal("escalation schedule ran no degrees".into()))?;
    Ok(CodimReport {
        value: s.codimension(),
        status: Status::Inconclusive,
        degree: cfg.max_degree,
        complement: s.complement_vectors(),
        history,
    })
}

/// Dimension of the local algebra (source functions modulo the ideal pulled
/// back from the target coordinates).
pub fn multiplicity(f: &MapGerm, cfg: &Config) -> Result<CodimReport, Error> {
    cfg.validate(f.degree())?;
    let gens: Vec<GermVector> = f
        .components()
        .iter()
        .map(|q| GermVector::new(vec![q.clone()]))
        .collect();
    let mut history = Vec::new();
    let mut last: Option<JetSubspace> = None;
    for d in schedule_start(f.degree())..=cfg.max_degree {
        let idx = JetBasisIndex::new(f.nvars(), 1, d);
        let s = JetSubspace::span_module(&gens, idx)?;
        history.push((d, s.codimension()));
        if s.nakayama_certificate()? {
            return Ok(CodimReport {
                value: s.codimension(),
                status: Status::Certified,
                degree: d,
                complement: s.complement_vectors(),
                history,
            });
        }
        last = Some(s);
    }
    let s = last.ok_or_else(|| Error::Internal("escalation schedule ran no degrees".into()))?;
    Ok(CodimReport {
        value: s.codimension(),
        status: Status::Inconclusive,
        degree: cfg.max_degree,
        complement: s.complement_vectors(),
        history,
    })
}

/// The quotient of vectors along the germ by the contact tangent space plus
/// the constant vectors. Its dimension is the minimal number of parameters
/// of a stable unfolding; it is zero exactly for stable germs.
pub fn nf_space(f: &MapGerm, cfg: &Config) -> Result<NfReport, Error> {
    let (s, d) = certified_contact_span(f, cfg)?;
    let n = f.nvars();
    let p = f.target_dim();
    let contact_codim = s.codimension();

    // Span of the constant classes, computed on its own: reduce each constant
    // vector against the contact tangent space and take the rank of the
    // residues. This is independent of the quotient dimension below.
    let mut nonzero = 0usize;
    let mut residues = JetSubspace::empty(s.index().clone());
    let mut with_constants = s.clone();
    for j in 0..p {
        let e = GermVector::unit(n, p, j);
        let residue = s.reduce_to_row(&e)?;
        if !residue.is_empty() {
            nonzero += 1;
        }
        residues.insert_row(residue);
        with_constants.extend_with(std::slice::from_ref(&e))?;
    }
    let constant_span = residues.dimension();
    let dimension = with_constants.codimension();
    if dimension + constant_span != contact_codim {
        return Err(Error::Internal(format!(
            "quotient dimension {} plus constant span {} misses contact codimension {}",
            dimension, constant_span, contact_codim
        )));
    }
    Ok(NfReport {
        dimension,
        basis: with_constants.complement_vectors(),
        contact_codim,
        constant_span,
        nonzero_constants: nonzero,
        degree: d,
    })
}

/// Degree-d truncation of the right-left tangent space: the saturated
/// Jacobian-column module plus the pullbacks of target monomial fields
/// (constants included).
pub(crate) fn ae_span(f: &MapGerm, d: u32) -> Result<JetSubspace, Error> {
    let n = f.nvars();
    let p = f.target_dim();
    let idx = JetBasisIndex::new(n, p, d);
    let tf_sat = module_saturate(&f.jacobian_columns(), d);
    let mut s = JetSubspace::span(&tf_sat, idx)?;
    let mut pulls = f.omega_generators(d);
    for j in 0..p {
        pulls.push(GermVector::unit(n, p, j));
    }
    s.extend_with(&pulls)?;
    Ok(s)
}

/// Shared escalation for the right-left codimension. Returns the settled
/// span together with the report; when the cap is hit the report is
/// inconclusive and the span is the one at the cap.
pub(crate) fn ae_pipeline(f: &MapGerm, cfg: &Config) -> Result<(JetSubspace, CodimReport), Error> {
    cfg.validate(f.degree())?;
    // Gate on contact finiteness: it is implied by right-left finiteness and
    // its certificate degree anchors the plateau guard.
    let (_, cert_d) = certified_contact_span(f, cfg)?;

    let mut history: Vec<(u32, usize)> = Vec::new();
    let mut run = 0usize;
    let mut last: Option<JetSubspace> = None;
    for d in schedule_start(f.degree())..=cfg.max_degree {
        let s = ae_span(f, d)?;
        let v = s.codimension();
        run = match history.last() {
            Some(&(_, prev)) if prev == v => run + 1,
            _ => 1,
        };
        history.push((d, v));
        // Accept the plateau only if the whole trusted window sits at or
        // past the contact certificate degree and no quotient representative
        // crowds the truncation boundary.
        let window = cfg.ae_plateau as u32;
        if run >= cfg.ae_plateau
            && d + 1 >= window + cert_d
            && s
                .complement_columns()
                .iter()
                .all(|&c| s.index().column_degree(c) + 2 <= d)
        {
            let report = CodimReport {
                value: v,
                status: Status::Heuristic,
                degree: d,
                complement: s.complement_vectors(),
                history,
            };
            return Ok((s, report));
        }
        last = Some(s);
    }
    let s = last.ok_or_else(|| Error::Internal("escalation schedule ran no degrees".into()))?;
    let report = CodimReport {
        value: s.codimension(),
        status: Status::Inconclusive,
        degree: cfg.max_degree,
        complement: s.complement_vectors(),
        history,
    };
    Ok((s, report))
}

/// Codimension of the right-left tangent space (the number of parameters of
/// a miniversal unfolding). Settles by guarded plateau, not certificate.
pub fn ae_codim(f: &MapGerm, cfg: &Config) -> Result<CodimReport, Error> {
    ae_pipeline(f, cfg).map(|(_, r)| r)
}

/// Deterministic basis of the right-left quotient, reordered so that the
/// vectors spanning the stable-unfolding quotient come first. Errors if
/// either escalation fails to settle.
pub fn ae_normal_basis(f: &MapGerm, cfg: &Config) -> Result<Vec<GermVector>, Error> {
    let nf = nf_space(f, cfg)?;
    let (_, ae) = ae_pipeline(f, cfg)?;
    if ae.status == Status::Inconclusive {
        return Err(Error::Inconclusive {
            what: "right-left codimension plateau".into(),
            degree_cap: cfg.max_degree,
        });
    }
    // The reduced-echelon pivots of the smaller span are pivots of the larger
    // one as well, so every quotient representative of the stable-unfolding
    // quotient literally appears among the right-left representatives.
    let mut front = Vec::new();
    let mut rest = Vec::new();
    for v in ae.complement {
        if nf.basis.contains(&v) {
            front.push(v);
        } else {
            rest.push(v);
        }
    }
    if front.len() != nf.basis.len() {
        return Err(Error::Internal(
            "stable-unfolding quotient basis is not a subset of the right-left basis".into(),
        ));
    }
    front.extend(rest);
    Ok(front)
}
