//! Codimension recipe for corank-1 multiplicity-4 preform germs
//! (x, y, z^4 + P(x,y)·z + Q(x,y)·z^2): six explicit generator vectors in
//! two variables whose span codimension equals the right-left codimension
//! of the three-variable germ. Two coefficient rules are supported for the
//! first (weighted-Euler) generator; the default rule is fixed by
//! calibration against a documented value and the cross-validation suite.

use num_traits::{One, Zero};

use crate::config::{Config, GeneratorMode};
use crate::error::Error;
use crate::germ::{GermVector, MapGerm};
use crate::invariants::{CodimReport, Status};
use crate::jet::{JetBasisIndex, JetSubspace};
use crate::poly::{rat, Monomial, Poly};

/// Coefficient pair of a preform germ: `P` multiplies z and `Q` multiplies
/// z^2. Both are two-variable polynomials vanishing at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PQPair {
    p: Poly,
    q: Poly,
}

impl PQPair {
    pub fn new(p: Poly, q: Poly) -> Result<Self, Error> {
        if p.nvars() != 2 {
            return Err(Error::VarMismatch { expected: 2, got: p.nvars() });
        }
        if q.nvars() != 2 {
            return Err(Error::VarMismatch { expected: 2, got: q.nvars() });
        }
        if !p.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm { component: 0 });
        }
        if !q.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm { component: 1 });
        }
        Ok(PQPair { p, q })
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    /// The pair with the two source variables exchanged in both entries.
    pub fn swap_variables(&self) -> PQPair {
        let args = [Poly::var(2, 1), Poly::var(2, 0)];
        PQPair {
            p: self.p.substitute(&args).expect("two-variable substitution"),
            q: self.q.substitute(&args).expect("two-variable substitution"),
        }
    }
}

/// Reads the coefficient pair off a germ already in preform shape. No
/// normalization is attempted: the first two components must be the plain
/// coordinate functions, the third must be z^4 (unit coefficient) plus
/// mixed z- and z^2-terms, nothing else.
pub fn extract_pq(f: &MapGerm) -> Result<PQPair, Error> {
    if f.nvars() != 3 || f.target_dim() != 3 {
        return Err(Error::PreformViolation(
            "expected a germ with three variables and three components".into(),
        ));
    }
    if f.component(0) != &Poly::var(3, 0) {
        return Err(Error::PreformViolation(
            "first component must be the first coordinate".into(),
        ));
    }
    if f.component(1) != &Poly::var(3, 1) {
        return Err(Error::PreformViolation(
            "second component must be the second coordinate".into(),
        ));
    }
    let mut p_terms: Vec<(Monomial, crate::poly::Rat)> = Vec::new();
    let mut q_terms: Vec<(Monomial, crate::poly::Rat)> = Vec::new();
    let mut saw_quartic = false;
    for (m, c) in f.component(2).terms() {
        let (a, b, z) = (m.0[0], m.0[1], m.0[2]);
        match z {
            4 if a == 0 && b == 0 => {
                if !c.is_one() {
                    return Err(Error::PreformViolation(
                        "the fourth power of the last variable must have coefficient 1".into(),
                    ));
                }
                saw_quartic = true;
            }
            1 if a + b >= 1 => p_terms.push((Monomial(vec![a, b]), c.clone())),
            2 if a + b >= 1 => q_terms.push((Monomial(vec![a, b]), c.clone())),
            _ => {
                return Err(Error::PreformViolation(format!(
                    "third component carries a term of exponents ({}, {}, {}) outside the preform",
                    a, b, z
                )));
            }
        }
    }
    if !saw_quartic {
        return Err(Error::PreformViolation(
            "third component is missing the fourth power of the last variable".into(),
        ));
    }
    PQPair::new(Poly::from_terms(2, p_terms), Poly::from_terms(2, q_terms))
}

/// The six generator vectors in the two-variable, two-component module:
/// (3P, 2Q), (P_x, Q_x), (P_y, Q_y), (−4PQ², 9P²) − Q²·(3P, 2Q),
/// (−2PQQ_x, 3PP_x), (−2PQQ_y, 3PP_y). Assembled exactly as written.
pub fn generator_set(pq: &PQPair) -> [GermVector; 6] {
    let p = pq.p();
    let q = pq.q();
    let px = p.partial_derivative(0).expect("two variables");
    let py = p.partial_derivative(1).expect("two variables");
    let qx = q.partial_derivative(0).expect("two variables");
    let qy = q.partial_derivative(1).expect("two variables");
    let q2 = q.mul(q);

    let euler = GermVector::new(vec![p.scale(&rat(3)), q.scale(&rat(2))]);
    let g4 = GermVector::new(vec![p.mul(&q2).scale(&rat(-4)), p.mul(p).scale(&rat(9))]).sub(
        &GermVector::new(vec![q2.mul(&p.scale(&rat(3))), q2.mul(&q.scale(&rat(2)))]),
    );
    [
        euler.clone(),
        GermVector::new(vec![px.clone(), qx.clone()]),
        GermVector::new(vec![py.clone(), qy.clone()]),
        g4,
        GermVector::new(vec![p.mul(q).mul(&qx).scale(&rat(-2)), p.mul(&px).scale(&rat(3))]),
        GermVector::new(vec![p.mul(q).mul(&qy).scale(&rat(-2)), p.mul(&py).scale(&rat(3))]),
    ]
}

/// Codimension report together with the coefficient rule that produced it.
#[derive(Debug, Clone)]
pub struct GeReport {
    /// The rule actually used (the automatic choice resolves to the
    /// calibrated rule before computing).
    pub mode: GeneratorMode,
    pub report: CodimReport,
}

/// Rule the automatic mode resolves to. Fixed by calibration against the
/// independently computed right-left codimension across the preform corpus:
/// both rules agree there (e.g. both give the certified value 5 on
/// (P, Q) = (x² − y², y²)), so the tie breaks toward the rule whose whole
/// span is Nakayama-certifiable.
pub const CALIBRATED_MODE: GeneratorMode = GeneratorMode::AllModule;

/// Codimension of the span of the six generators in the jets of pairs of
/// two-variable functions. In the all-module rule every generator carries
/// function coefficients and exactness is certified on the whole span; in
/// the mixed rule the weighted-Euler generator enters as a single scalar
/// direction and the certificate is read off the module part alone (adding
/// one scalar row to a certified module keeps the count exact).
pub fn ge_codim(pq: &PQPair, cfg: &Config) -> Result<GeReport, Error> {
    let mode = match cfg.generator_mode {
        GeneratorMode::Auto => CALIBRATED_MODE,
        m => m,
    };
    let gens = generator_set(pq);
    let degree = pq.p().degree().max(pq.q().degree());
    cfg.validate(degree)?;
    let mut history: Vec<(u32, usize)> = Vec::new();
    let mut last: Option<JetSubspace> = None;
    for d in degree.max(2)..=cfg.max_degree {
        let idx = JetBasisIndex::new(2, 2, d);
        let (span, certified) = match mode {
            GeneratorMode::AllModule => {
                let s = JetSubspace::span_module(&gens, idx)?;
                let c = s.nakayama_certificate()?;
                (s, c)
            }
            GeneratorMode::MixedEuler => {
                let module = JetSubspace::span_module(&gens[1..], idx)?;
                let c = module.nakayama_certificate()?;
                let mut full = module;
                full.extend_with(std::slice::from_ref(&gens[0]))?;
                (full, c)
            }
            GeneratorMode::Auto => unreachable!("resolved above"),
        };
        history.push((d, span.codimension()));
        if certified {
            let report = CodimReport {
                value: span.codimension(),
                status: Status::Certified,
                degree: d,
                complement: span.complement_vectors(),
                history,
            };
            return Ok(GeReport { mode, report });
        }
        last = Some(span);
    }
    let span = last.ok_or_else(|| Error::Internal("escalation schedule ran no degrees".into()))?;
    let report = CodimReport {
        value: span.codimension(),
        status: Status::Inconclusive,
        degree: cfg.max_degree,
        complement: span.complement_vectors(),
        history,
    };
    Ok(GeReport { mode, report })
}
