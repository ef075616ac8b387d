//! Acceptance gate: one test per numbered criterion, each printing a
//! single pass line (visible with `--nocapture`; the libtest result line
//! carries the same verdict either way).

use germcalc::poly::rat;
use germcalc::{
    ae_codim, ge_codim, ke_codim, mather_unfolding, minimal_stable_unfolding, nf_space, opsu,
    opsu_normal_form, parse_germ, scan, verify_stable, Config, GermVector, JetBasisIndex,
    JetSubspace, MapGerm, Membership, OpsuAdmits, PQPair, Poly, Status,
};

fn g(text: &str) -> MapGerm {
    parse_germ(text, None).expect("corpus germ must parse").germ().clone()
}

fn cfg() -> Config {
    Config::default()
}

fn pass(n: u32, label: &str) {
    println!("criterion {n:02} ({label}): PASS");
}

/// Builds (x, y, z^4 + P z + Q z^2) from a plane pair.
fn quartic_preform(pq: &PQPair) -> MapGerm {
    let z = Poly::var(3, 2);
    let p3 = pq.p().pad_vars(1);
    let q3 = pq.q().pad_vars(1);
    let third = z.pow(4).add(&p3.mul(&z)).add(&q3.mul(&z.pow(2)));
    MapGerm::new(vec![Poly::var(3, 0), Poly::var(3, 1), third]).unwrap()
}

/// (name, germ) rows used by the identity suite; every germ named in the
/// other criteria appears here.
fn corpus() -> Vec<(String, MapGerm)> {
    let mut out: Vec<(String, MapGerm)> = vec![
        ("quartic-function".into(), g("(y^4)")),
        ("tail-fold".into(), g("(x, y^4 + x*y)")),
        ("no-opsu-plane".into(), g("(x, y^4 + x^2*y)")),
        ("no-opsu-plane-perturbed".into(), g("(x, y^4 + x^2*y + y^5)")),
        ("P2".into(), g("(x, y, z^5 + x*z, z^3 + y*z)")),
    ];
    for k in 1..=4u32 {
        out.push((format!("f_{k}"), g(&format!("(x, y^3 + x^{}*y)", k + 1))));
    }
    for k in 2..=3u32 {
        out.push((format!("H_{k}"), g(&format!("(x, y^3, y^{} + x*y)", 3 * k - 1))));
    }
    for k in 1..=3u32 {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let pq = PQPair::new(x.clone(), y.pow(k)).unwrap();
        out.push((format!("4_1^{k}"), quartic_preform(&pq)));
    }
    for k in 1..=3u32 {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let pq = PQPair::new(y.pow(2).add(&x.pow(k)), x.clone()).unwrap();
        out.push((format!("4_2^{k}"), quartic_preform(&pq)));
    }
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let pq = PQPair::new(x.pow(2).sub(&y.pow(2)), y.pow(2)).unwrap();
    out.push(("calibrator".into(), quartic_preform(&pq)));
    out
}

#[test]
fn criterion_01_contact_codimension_of_the_quartic_function() {
    let f = g("(y^4)");
    let r = ke_codim(&f, &cfg()).unwrap();
    assert_eq!(r.value, 3);
    assert_eq!(r.status, Status::Certified);
    let y = Poly::var(1, 0);
    let positive: Vec<GermVector> =
        r.complement.into_iter().filter(|v| v.comps()[0].degree() >= 1).collect();
    assert_eq!(
        positive,
        vec![GermVector::new(vec![y.clone()]), GermVector::new(vec![y.pow(2)])]
    );
    pass(1, "ke_codim(y^4) = 3 with complement {y, y^2} above the constants");
}

#[test]
fn criterion_02_tail_fold_admits_and_its_witness_is_stable() {
    let f = g("(x, y^4 + x*y)");
    let c = cfg();
    let nf = nf_space(&f, &c).unwrap();
    assert_eq!(nf.constant_span, 2);
    assert_eq!(nf.dimension, 1);
    let v = opsu(&f, &c).unwrap();
    assert_eq!(v.admits, OpsuAdmits::Yes);
    let witness = v.witness.expect("an admitting germ carries a witness");
    let x = Poly::var(3, 0);
    let y = Poly::var(3, 1);
    let u = Poly::var(3, 2);
    let expected = MapGerm::new(vec![
        x.clone(),
        y.pow(4).add(&x.mul(&y)).add(&u.mul(&y.pow(2))),
        u,
    ])
    .unwrap();
    assert!(witness.total().same_map(&expected));
    assert!(verify_stable(witness.total(), &c).unwrap().stable);
    pass(2, "c = 2, quotient dimension 1, witness (x, y^4+x*y+u*y^2, u) stable");
}

#[test]
fn criterion_03_constant_class_collapse() {
    let f = g("(x, y^4 + x^2*y)");
    let c = cfg();
    // Rebuild the certified contact span at its certificate degree and ask
    // for the first constant vector directly.
    let ke = ke_codim(&f, &c).unwrap();
    assert_eq!(ke.status, Status::Certified);
    let idx = JetBasisIndex::new(2, 2, ke.degree);
    let mut gens = f.jacobian_columns();
    gens.extend(f.contact_generators());
    let span = JetSubspace::span_module(&gens, idx).unwrap();
    assert!(span.nakayama_certificate().unwrap());
    let e1 = GermVector::new(vec![Poly::constant(2, rat(1)), Poly::zero(2)]);
    assert_eq!(span.membership(&e1).unwrap(), Membership::Inside);

    let nf = nf_space(&f, &c).unwrap();
    assert_eq!(nf.constant_span, 1);
    assert_eq!(opsu(&f, &c).unwrap().admits, OpsuAdmits::No);
    pass(3, "(1,0) lies inside the contact tangent space, c = 1, no one-parameter unfolding");
}

#[test]
fn criterion_04_perturbed_plane_germ_still_refuses() {
    let f = g("(x, y^4 + x^2*y + y^5)");
    assert_eq!(opsu(&f, &cfg()).unwrap().admits, OpsuAdmits::No);
    pass(4, "(x, y^4+x^2*y+y^5) admits no one-parameter stable unfolding");
}

#[test]
fn criterion_05_tail_series_values_and_stable_witnesses() {
    let c = cfg();
    for k in 1..=4u32 {
        let f = g(&format!("(x, y^3 + x^{}*y)", k + 1));
        let ae = ae_codim(&f, &c).unwrap();
        assert_eq!(ae.value, k as usize, "series member k={k}");
        assert_eq!(ae.status, Status::Heuristic);
        let v = opsu(&f, &c).unwrap();
        assert_eq!(v.admits, OpsuAdmits::Yes);
        let witness = v.witness.unwrap();
        assert!(verify_stable(witness.total(), &c).unwrap().stable, "witness k={k}");
    }
    pass(5, "(x, y^3+x^(k+1)*y) has right-left codimension k and a stable witness, k=1..4");
}

#[test]
fn criterion_06_cuspidal_series_refuses() {
    let c = cfg();
    let h2 = g("(x, y^3, y^5 + x*y)");
    let h3 = g("(x, y^3, y^8 + x*y)");
    assert_eq!(opsu(&h2, &c).unwrap().admits, OpsuAdmits::No);
    assert_eq!(opsu(&h3, &c).unwrap().admits, OpsuAdmits::No);
    let ae = ae_codim(&h2, &c).unwrap();
    assert_eq!(ae.value, 2);
    pass(6, "(x, y^3, y^(3k-1)+x*y) refuses for k=2,3; right-left value 2 at k=2");
}

#[test]
fn criterion_07_versal_normal_form_of_the_double_fold() {
    let f = g("(x, y, z^5 + x*z, z^3 + y*z)");
    let c = cfg();
    let nf = nf_space(&f, &c).unwrap();
    assert_eq!(nf.dimension, 1);

    let v = opsu(&f, &c).unwrap();
    assert_eq!(v.admits, OpsuAdmits::Yes);
    let base = v.witness.unwrap();
    let x = Poly::var(4, 0);
    let y = Poly::var(4, 1);
    let z = Poly::var(4, 2);
    let l = Poly::var(4, 3);
    let expected = MapGerm::new(vec![
        x.clone(),
        y.clone(),
        z.pow(5).add(&x.mul(&z)).add(&l.mul(&z.pow(2))),
        z.pow(3).add(&y.mul(&z)),
        l,
    ])
    .unwrap();
    assert!(base.total().same_map(&expected));

    let vnf = opsu_normal_form(&f, &c).unwrap();
    assert_eq!(vnf.multipliers.len(), 1);
    assert_eq!(vnf.multipliers[0].constant_term(), rat(0));
    assert!(verify_stable(vnf.unfolding.total(), &c).unwrap().stable);
    pass(7, "one-parameter base (x, y, z^5+x*z+l*z^2, z^3+y*z, l); assembled versal form stable");
}

#[test]
fn criterion_08_pair_recipe_cross_validates() {
    let c = cfg();
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let mut pairs: Vec<(String, PQPair)> = Vec::new();
    for k in 1..=3u32 {
        pairs.push((format!("4_1^{k}"), PQPair::new(x.clone(), y.pow(k)).unwrap()));
    }
    for k in 1..=3u32 {
        pairs.push((
            format!("4_2^{k}"),
            PQPair::new(y.pow(2).add(&x.pow(k)), x.clone()).unwrap(),
        ));
    }
    pairs.push(("calibrator".into(), PQPair::new(x.pow(2).sub(&y.pow(2)), y.pow(2)).unwrap()));

    for (name, pq) in &pairs {
        let ge = ge_codim(pq, &c).unwrap();
        assert_eq!(ge.report.status, Status::Certified, "{name}");
        let ae = ae_codim(&quartic_preform(pq), &c).unwrap();
        assert_ne!(ae.status, Status::Inconclusive, "{name}");
        assert_eq!(ge.report.value, ae.value, "{name}: recipe vs right-left");
    }

    // The calibration pair (x^2 - y^2, y^2): the exact certified value is 5,
    // with hand-checkable complement {e1, e2, y*e2, x*e2, x^2*e2} — see the
    // unit test in the recipe module for the degree-by-degree derivation.
    let cal = ge_codim(&pairs.last().unwrap().1, &c).unwrap();
    assert_eq!(cal.report.value, 5);
    pass(8, "six-generator recipe equals the right-left value on all seven pairs");
}

#[test]
fn criterion_09_parameter_count_identity_across_the_corpus() {
    let c = cfg();
    let rows = corpus();
    assert!(rows.len() >= 15);
    for (name, f) in &rows {
        let ke = ke_codim(f, &c).unwrap();
        assert_eq!(ke.status, Status::Certified, "{name}");
        let nf = nf_space(f, &c).unwrap();
        assert_eq!(
            nf.dimension,
            ke.value - nf.constant_span,
            "{name}: quotient dimension vs contact codimension minus constants"
        );
        assert_eq!(nf.contact_codim, ke.value, "{name}: independent contact counts");
    }
    pass(9, "dim N(f) = ke_codim(f) - c(f) on all 18 corpus germs");
}

#[test]
fn criterion_10_classical_construction_is_redundant_here() {
    let f = g("(x, y^4 + x*y)");
    let c = cfg();
    let m = mather_unfolding(&f, &c).unwrap();
    assert_eq!(m.unfolding.base_dim(), 2);
    assert!(verify_stable(m.unfolding.total(), &c).unwrap().stable);
    let minimal = minimal_stable_unfolding(&f, &c).unwrap();
    assert_eq!(minimal.unfolding.base_dim(), 1);
    pass(10, "rank-based construction: 2 parameters, stable; minimal: 1 parameter");
}

#[test]
fn criterion_11_family_screen_at_desk_scale() {
    let started = std::time::Instant::now();
    let report = scan(&[5, 6, 7], 5, &cfg()).unwrap();
    let elapsed = started.elapsed();
    let passing: Vec<usize> = report.summaries.iter().map(|s| s.passing).collect();
    for (s, got) in report.summaries.iter().zip(&passing) {
        assert!(*got >= 1, "degree {} found no passing sample", s.p);
        assert_eq!(s.samples, 5);
    }
    // Pinned-seed regression contract for the default master seed 0.
    assert_eq!(passing, vec![5, 5, 4]);
    for s in &report.samples {
        if s.passes {
            assert_eq!(s.multiplicity.value, 4);
            assert_eq!(s.multiplicity.status, Status::Certified);
            assert_eq!(s.ke.status, Status::Certified);
            assert!(s.nf_dimension.unwrap() >= 2);
            assert_eq!(s.opsu.as_ref().unwrap().admits, OpsuAdmits::No);
        }
    }
    assert!(
        elapsed.as_secs() <= 120,
        "family screen took {:?}, budget is two minutes",
        elapsed
    );
    pass(11, "5 samples at each p in {5,6,7}: passers at every degree within budget");
}

// --- criterion 12: independent dense oracle ---------------------------------

/// Plain dense Gaussian elimination over exact rationals, written against
/// its own column order (component-major, then the plain generation order
/// of monomials by total degree) so it shares nothing with the sparse
/// pipeline.
mod dense {
    use germcalc::poly::{monomials_up_to, Monomial, Poly, Rat};
    use germcalc::GermVector;

    pub struct DenseSpace {
        pub monomials: Vec<Monomial>,
        pub ncomps: usize,
    }

    impl DenseSpace {
        pub fn new(nvars: usize, ncomps: usize, d: u32) -> Self {
            DenseSpace { monomials: monomials_up_to(nvars, d), ncomps }
        }

        pub fn ncols(&self) -> usize {
            self.monomials.len() * self.ncomps
        }

        fn column(&self, comp: usize, m: &Monomial) -> usize {
            let pos = self
                .monomials
                .iter()
                .position(|x| x == m)
                .expect("monomial within degree bound");
            comp * self.monomials.len() + pos
        }

        pub fn row(&self, v: &GermVector, d: u32) -> Vec<Rat> {
            let mut out = vec![Rat::from_integer(0.into()); self.ncols()];
            for (comp, poly) in v.comps().iter().enumerate() {
                for (m, c) in poly.truncate_jet(d).terms() {
                    out[self.column(comp, m)] = c.clone();
                }
            }
            out
        }
    }

    /// Row-reduces in place and returns the rank.
    pub fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
        let zero = Rat::from_integer(0.into());
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != zero) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = rows[rank][col].clone();
            for c in col..ncols {
                let v = rows[rank][c].clone() / inv.clone();
                rows[rank][c] = v;
            }
            for r in 0..rows.len() {
                if r != rank && rows[r][col] != zero {
                    let factor = rows[r][col].clone();
                    for c in col..ncols {
                        let v = rows[r][c].clone() - factor.clone() * rows[rank][c].clone();
                        rows[r][c] = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Module span the slow way: every monomial multiple of every generator,
    /// truncated, then eliminated densely.
    pub fn module_codim(gens: &[GermVector], nvars: usize, ncomps: usize, d: u32) -> usize {
        let space = DenseSpace::new(nvars, ncomps, d);
        let mut rows = Vec::new();
        for g in gens {
            for m in monomials_up_to(nvars, d) {
                let scaled: Vec<Poly> = g
                    .comps()
                    .iter()
                    .map(|p| p.mul_monomial_trunc(&m, d))
                    .collect();
                let v = GermVector::new(scaled);
                rows.push(space.row(&v, d));
            }
        }
        space.ncols() - rank(rows)
    }
}

#[test]
fn criterion_12_sparse_pipeline_matches_a_dense_oracle() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);

    // 100 random module spans compared against dense elimination.
    for case in 0..100 {
        let nvars = rng.gen_range(1..=2usize);
        let ncomps = rng.gen_range(1..=2usize);
        let d = rng.gen_range(2..=4u32);
        let ngens = rng.gen_range(1..=3usize);
        let mut gens = Vec::new();
        for _ in 0..ngens {
            let comps: Vec<Poly> = (0..ncomps)
                .map(|_| {
                    let nterms = rng.gen_range(0..=3usize);
                    let mut p = Poly::zero(nvars);
                    for _ in 0..nterms {
                        let exps: Vec<u16> =
                            (0..nvars).map(|_| rng.gen_range(0..=d as u16)).collect();
                        let coeff = germcalc::poly::rat(rng.gen_range(-4..=4));
                        let m = Poly::from_terms(
                            nvars,
                            [(germcalc::Monomial(exps), coeff)],
                        );
                        p = p.add(&m);
                    }
                    p.truncate_jet(d)
                })
                .collect();
            gens.push(GermVector::new(comps));
        }
        let idx = JetBasisIndex::new(nvars, ncomps, d);
        let sparse = JetSubspace::span_module(&gens, idx).unwrap().codimension();
        let slow = dense::module_codim(&gens, nvars, ncomps, d);
        assert_eq!(sparse, slow, "case {case}: nvars={nvars} ncomps={ncomps} d={d}");
    }

    // 50 jet-inverse round-trips.
    use germcalc::{ChangeDirection, CoordinateChange};
    let d = 5u32;
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(1..=3usize);
        let comps: Vec<Poly> = (0..n)
            .map(|i| {
                let mut p = Poly::var(n, i);
                // Random linear mixing plus a couple of higher terms.
                for j in 0..n {
                    if rng.gen_bool(0.5) {
                        let c = germcalc::poly::rat(rng.gen_range(-2..=2));
                        p = p.add(&Poly::var(n, j).scale(&c));
                    }
                }
                for _ in 0..2 {
                    let exps: Vec<u16> = (0..n).map(|_| rng.gen_range(0..=2u16)).collect();
                    let total: u16 = exps.iter().sum();
                    if (2..=3).contains(&total) {
                        let c = germcalc::poly::rat(rng.gen_range(-3..=3));
                        p = p.add(&Poly::from_terms(n, [(germcalc::Monomial(exps), c)]));
                    }
                }
                p
            })
            .collect();
        let Ok(change) = CoordinateChange::new(comps, ChangeDirection::Source) else {
            continue; // degenerate linear part: resample
        };
        done += 1;
        let inv = change.formal_inverse(d).unwrap();
        for composed in [
            change.compose_trunc(&inv, d).unwrap(),
            inv.compose_trunc(&change, d).unwrap(),
        ] {
            for (i, c) in composed.components().iter().enumerate() {
                assert_eq!(c, &Poly::var(n, i), "round-trip {done} component {i}");
            }
        }
    }
    pass(12, "100 dense-oracle span agreements and 50 exact jet-inverse round-trips");
}
