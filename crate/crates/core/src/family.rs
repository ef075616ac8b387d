//! Seeded desk-scale experiment: germs (x, y, z^4 + phi) with phi a random
//! homogeneous polynomial of degree p >= 5, screened for multiplicity 4,
//! certified contact-finiteness, a settled right-left codimension, and the
//! absence of a one-parameter stable unfolding. Samples are fully
//! reproducible from the master seed and the (degree, index) coordinates.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::Error;
use crate::germ::MapGerm;
use crate::invariants::{ae_codim, ke_codim, multiplicity, CodimReport, Status};
use crate::poly::{monomials_of_degree, rat, Poly};
use crate::unfold::{opsu, OpsuAdmits, OpsuVerdict};

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Per-sample seed derived from the master seed and the (degree, index)
/// coordinates, so any sample can be rebuilt in isolation.
pub fn sample_seed(master: u64, p: u32, index: u32) -> u64 {
    splitmix64(splitmix64(master) ^ (((p as u64) << 32) | index as u64))
}

/// Homogeneous polynomial with every coefficient drawn independently and
/// uniformly from the nonzero integers in [-9, 9], deterministically from
/// the seed.
pub fn random_homogeneous(degree: u32, nvars: usize, seed: u64) -> Poly {
    assert!(degree >= 1 && nvars >= 1, "sampling needs a positive degree and variables");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for m in monomials_of_degree(nvars, degree) {
        let c = loop {
            let c: i64 = rng.gen_range(-9..=9);
            if c != 0 {
                break c;
            }
        };
        terms.push((m, rat(c)));
    }
    Poly::from_terms(nvars, terms)
}

/// One screened sample of the family.
#[derive(Debug, Clone)]
pub struct FamilySample {
    /// Degree of the random homogeneous part.
    pub p: u32,
    /// Sample index within its degree.
    pub index: u32,
    /// The derived per-sample seed.
    pub seed: u64,
    /// The random homogeneous part (three variables, degree p).
    pub phi: Poly,
    /// (x, y, z^4 + phi).
    pub germ: MapGerm,
    pub multiplicity: CodimReport,
    pub ke: CodimReport,
    /// Dimension of the stable-unfolding quotient, when it certified.
    pub nf_dimension: Option<usize>,
    /// One-parameter stable unfolding verdict; absent when the quotient
    /// escalation hit the degree cap.
    pub opsu: Option<OpsuVerdict>,
    /// Right-left codimension report; absent when its contact gate hit the
    /// degree cap.
    pub ae: Option<CodimReport>,
    /// All screens passed: multiplicity exactly 4 (certified), certified
    /// contact codimension, settled right-left codimension, and no
    /// one-parameter stable unfolding.
    pub passes: bool,
}

impl FamilySample {
    /// The distinguishing row datum: the degree of the added homogeneous
    /// part together with the computed invariants.
    pub fn invariant_tuple(&self) -> (u32, usize, usize, Option<usize>, Option<usize>) {
        (
            self.p,
            self.multiplicity.value,
            self.ke.value,
            self.nf_dimension,
            self.ae.as_ref().map(|r| r.value),
        )
    }
}

fn carry<T>(r: Result<T, Error>) -> Result<Option<T>, Error> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Inconclusive { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Builds and screens one sample. The degree cap is raised to at least
/// p + 4 so the escalations have room past the degree of phi; inconclusive
/// sub-reports are carried in the sample, not raised as errors.
pub fn build_fp(p: u32, index: u32, cfg: &Config) -> Result<FamilySample, Error> {
    if p < 5 {
        return Err(Error::BadConfig(format!(
            "the family needs degree at least 5, got {}",
            p
        )));
    }
    let seed = sample_seed(cfg.seed, p, index);
    let phi = random_homogeneous(p, 3, seed);
    let z = Poly::var(3, 2);
    let germ = MapGerm::new(vec![Poly::var(3, 0), Poly::var(3, 1), z.pow(4).add(&phi)])?;

    let mut local = cfg.clone();
    local.max_degree = cfg.max_degree.max(p + 4);

    let mult = multiplicity(&germ, &local)?;
    let ke = ke_codim(&germ, &local)?;
    let opsu_verdict = carry(opsu(&germ, &local))?;
    let ae = carry(ae_codim(&germ, &local))?;

    let nf_dimension = opsu_verdict.as_ref().map(|v| v.nf.dimension);
    let passes = mult.value == 4
        && mult.status == Status::Certified
        && ke.status == Status::Certified
        && ae.as_ref().map(|r| r.status != Status::Inconclusive).unwrap_or(false)
        && opsu_verdict.as_ref().map(|v| v.admits == OpsuAdmits::No).unwrap_or(false);

    Ok(FamilySample {
        p,
        index,
        seed,
        phi,
        germ,
        multiplicity: mult,
        ke,
        nf_dimension,
        opsu: opsu_verdict,
        ae,
        passes,
    })
}

/// Per-degree tally of a scan.
#[derive(Debug, Clone)]
pub struct ScanSummary {
    pub p: u32,
    pub samples: usize,
    pub passing: usize,
}

/// All samples of a scan in deterministic (degree, index) order, plus the
/// per-degree tallies.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub samples: Vec<FamilySample>,
    pub summaries: Vec<ScanSummary>,
}

/// Builds samples_per_p samples for each requested degree. Samples are
/// independent; the report order is (degree, index) regardless of how the
/// work is scheduled.
pub fn scan(p_values: &[u32], samples_per_p: u32, cfg: &Config) -> Result<ScanReport, Error> {
    let mut samples = Vec::new();
    let mut summaries = Vec::new();
    for &p in p_values {
        let mut passing = 0usize;
        for index in 0..samples_per_p {
            let s = build_fp(p, index, cfg)?;
            if s.passes {
                passing += 1;
            }
            samples.push(s);
        }
        summaries.push(ScanSummary { p, samples: samples_per_p as usize, passing });
    }
    Ok(ScanReport { samples, summaries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let a = random_homogeneous(5, 3, 42);
        let b = random_homogeneous(5, 3, 42);
        assert_eq!(a, b);
        let c = random_homogeneous(5, 3, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_fills_every_coefficient() {
        let phi = random_homogeneous(5, 3, 7);
        assert_eq!(phi.term_count(), 21);
        assert!(phi.terms().all(|(m, c)| {
            use num_traits::Zero;
            m.degree() == 5 && !c.is_zero()
        }));
        let line = random_homogeneous(1, 1, 3);
        assert_eq!(line.term_count(), 1);
        assert_eq!(line.degree(), 1);
    }

    #[test]
    fn low_degree_is_rejected() {
        assert!(matches!(build_fp(4, 0, &Config::default()), Err(Error::BadConfig(_))));
    }

    #[test]
    fn first_sample_passes_every_screen() {
        let s = build_fp(5, 0, &Config::default()).unwrap();
        assert_eq!(s.multiplicity.value, 4);
        assert_eq!(s.multiplicity.status, Status::Certified);
        assert_eq!(s.ke.status, Status::Certified);
        assert_eq!(s.nf_dimension, Some(2));
        assert_eq!(s.opsu.as_ref().unwrap().admits, OpsuAdmits::No);
        assert!(s.passes, "expected the fixed-seed sample to pass all screens");
    }
}
