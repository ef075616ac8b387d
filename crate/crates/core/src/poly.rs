//! Sparse multivariate polynomials over exact rationals.
//!
//! A [`Poly`] is a map from exponent vectors to nonzero rational
//! coefficients. The monomial order used everywhere (term iteration,
//! jet-basis enumeration, pivot selection) is graded lexicographic with the
//! *lowest* degree first — the local-ring convention — with ties broken by
//! ascending lexicographic comparison of the exponent vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Exponent vector; the length is the ambient variable count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Extends the exponent vector with `extra` trailing zero exponents.
    pub fn pad(&self, extra: usize) -> Monomial {
        let mut e = self.0.clone();
        e.extend(std::iter::repeat(0).take(extra));
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree exactly `deg`, in ascending order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; nvars];
    fill(&mut out, &mut cur, 0, deg);
    fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u16>, pos: usize, left: u32) {
        if pos + 1 == cur.len() {
            cur[pos] = left as u16;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[pos] = e as u16;
            fill(out, cur, pos + 1, left - e);
        }
        cur[pos] = 0;
    }
    if nvars == 0 {
        return if deg == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    out
}

/// All monomials of total degree at most `deg`, in the global monomial order.
pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    (0..=deg)
        .flat_map(|d| monomials_of_degree(nvars, d))
        .collect()
}

/// Number of monomials of degree <= d in n variables: C(n + d, n).
pub fn jet_monomial_count(nvars: usize, deg: u32) -> usize {
    let mut acc: u128 = 1;
    for i in 1..=nvars as u128 {
        acc = acc * (deg as u128 + i) / i;
    }
    acc as usize
}

/// Sparse polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is semantic
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut p = Poly::zero(nvars);
        p.terms.insert(Monomial::var(nvars, index), Rat::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(nvars: usize, terms: I) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of the degree-1 term in variable `i`.
    pub fn linear_coeff(&self, i: usize) -> Rat {
        self.coeff(&Monomial::var(self.nvars, i))
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable-count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable-count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Product truncated to total degree `d` (cross terms above `d` are never
    /// formed).
    pub fn mul_trunc(&self, other: &Poly, d: u32) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable-count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > d {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > d {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Multiply by a single monomial, discarding terms above degree `d`.
    pub fn mul_monomial_trunc(&self, m: &Monomial, d: u32) -> Poly {
        let dm = m.degree();
        let mut out = Poly::zero(self.nvars);
        for (mt, c) in &self.terms {
            if mt.degree() + dm <= d {
                out.terms.insert(mt.mul(m), c.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, Rat::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn pow_trunc(&self, e: u32, d: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, Rat::one());
        for _ in 0..e {
            out = out.mul_trunc(self, d);
        }
        out
    }

    /// Discard every term of total degree greater than `d`.
    pub fn truncate_jet(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Poly, Error> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange { index: i, nvars: self.nvars });
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut em = m.clone();
            em.0[i] = e - 1;
            out.add_term(em, c * rat(e as i64));
        }
        Ok(out)
    }

    /// Substitute `args[i]` for variable `i`. All arguments must share one
    /// ambient variable count, which becomes the result's.
    pub fn substitute(&self, args: &[Poly]) -> Result<Poly, Error> {
        self.substitute_impl(args, None)
    }

    /// Substitution with all intermediates truncated to degree `d`; agrees
    /// with `substitute(...).truncate_jet(d)`.
    pub fn substitute_trunc(&self, args: &[Poly], d: u32) -> Result<Poly, Error> {
        self.substitute_impl(args, Some(d))
    }

    fn substitute_impl(&self, args: &[Poly], trunc: Option<u32>) -> Result<Poly, Error> {
        if args.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: args.len() });
        }
        let out_vars = if args.is_empty() { 0 } else { args[0].nvars() };
        for a in args {
            if a.nvars() != out_vars {
                return Err(Error::VarMismatch { expected: out_vars, got: a.nvars() });
            }
        }
        // Memoize powers of each argument up to the largest exponent used.
        let mut max_exp = vec![0u16; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let one = Poly::constant(out_vars, Rat::one());
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(self.nvars);
        for (i, arg) in args.iter().enumerate() {
            let mut ps = vec![one.clone()];
            for k in 1..=max_exp[i] {
                let next = match trunc {
                    Some(d) => ps[(k - 1) as usize].mul_trunc(arg, d),
                    None => ps[(k - 1) as usize].mul(arg),
                };
                ps.push(next);
            }
            powers.push(ps);
        }
        let mut out = Poly::zero(out_vars);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    acc = match trunc {
                        Some(d) => acc.mul_trunc(&powers[i][e as usize], d),
                        None => acc.mul(&powers[i][e as usize]),
                    };
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Reinterpret in `nvars + extra` variables (trailing new variables).
    pub fn pad_vars(&self, extra: usize) -> Poly {
        Poly {
            nvars: self.nvars + extra,
            terms: self.terms.iter().map(|(m, c)| (m.pad(extra), c.clone())).collect(),
        }
    }

    /// Renders with the given variable names; terms in the monomial order.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        assert_eq!(names.len(), self.nvars, "name count mismatch");
        PolyDisplay { poly: self, names }
    }
}

/// Checked binary arithmetic on polynomials; verifies the ambient variable
/// counts agree instead of panicking.
pub fn poly_arith(a: &Poly, b: &Poly, op: ArithOp) -> Result<Poly, Error> {
    if a.nvars() != b.nvars() {
        return Err(Error::VarMismatch { expected: a.nvars(), got: b.nvars() });
    }
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &[String]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{}", names[i])?;
        } else {
            write!(f, "{}^{}", names[i], e)?;
        }
    }
    Ok(())
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", abs)?;
                }
                write_monomial(f, m, self.names)?;
            }
        }
        Ok(())
    }
}
