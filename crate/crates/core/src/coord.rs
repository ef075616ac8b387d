//! Polynomial coordinate changes and their formal inverses.

use num_traits::Zero;

use crate::error::Error;
use crate::linalg;
use crate::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangeDirection {
    Source,
    Target,
}

/// An origin-preserving polynomial change of coordinates with invertible
/// linear part, tagged with the side of the germ it acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateChange {
    components: Vec<Poly>,
    direction: ChangeDirection,
}

impl CoordinateChange {
    pub fn new(components: Vec<Poly>, direction: ChangeDirection) -> Result<Self, Error> {
        let n = components.len();
        for (i, c) in components.iter().enumerate() {
            if c.nvars() != n {
                return Err(Error::VarMismatch { expected: n, got: c.nvars() });
            }
            if !c.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { component: i });
            }
        }
        let change = CoordinateChange { components, direction };
        if linalg::invert(&change.linear_part()).is_none() {
            return Err(Error::NonInvertibleLinearPart);
        }
        Ok(change)
    }

    pub fn identity(nvars: usize, direction: ChangeDirection) -> Self {
        CoordinateChange {
            components: (0..nvars).map(|i| Poly::var(nvars, i)).collect(),
            direction,
        }
    }

    /// Linear change x -> M x (rows of `m` give the new components).
    pub fn linear(m: &linalg::Matrix, direction: ChangeDirection) -> Result<Self, Error> {
        let n = m.len();
        let comps = m
            .iter()
            .map(|row| {
                let mut p = Poly::zero(n);
                for (j, c) in row.iter().enumerate() {
                    p = p.add(&Poly::var(n, j).scale(c));
                }
                p
            })
            .collect();
        CoordinateChange::new(comps, direction)
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn direction(&self) -> ChangeDirection {
        self.direction
    }

    pub fn linear_part(&self) -> linalg::Matrix {
        let n = self.nvars();
        self.components
            .iter()
            .map(|c| (0..n).map(|j| c.linear_coeff(j)).collect())
            .collect()
    }

    /// Composition `(self ∘ other)(x) = self(other(x))`, truncated to `d`.
    pub fn compose_trunc(&self, other: &CoordinateChange, d: u32) -> Result<Self, Error> {
        if other.nvars() != self.nvars() {
            return Err(Error::VarMismatch { expected: self.nvars(), got: other.nvars() });
        }
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute_trunc(&other.components, d))
            .collect::<Result<Vec<_>, _>>()?;
        CoordinateChange::new(comps, self.direction)
    }

    /// Inverse in the group of `d`-jets of origin-preserving changes:
    /// `self ∘ inv ≡ inv ∘ self ≡ id` modulo degree > d.
    ///
    /// Writes `self = L + h` with `L` linear and iterates the contraction
    /// `ψ ← L⁻¹ ∘ (id - h ∘ ψ)`, which gains one correct degree per pass.
    pub fn formal_inverse(&self, d: u32) -> Result<Self, Error> {
        let n = self.nvars();
        let linv = linalg::invert(&self.linear_part()).ok_or(Error::NonInvertibleLinearPart)?;
        let id: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        let h: Vec<Poly> = self
            .components
            .iter()
            .map(|c| {
                let mut lin = Poly::zero(n);
                for j in 0..n {
                    lin = lin.add(&Poly::var(n, j).scale(&c.linear_coeff(j)));
                }
                c.sub(&lin).truncate_jet(d)
            })
            .collect();
        let apply_linv = |v: &[Poly]| -> Vec<Poly> {
            (0..n)
                .map(|i| {
                    let mut acc = Poly::zero(n);
                    for (j, vj) in v.iter().enumerate() {
                        acc = acc.add(&vj.scale(&linv[i][j]));
                    }
                    acc
                })
                .collect()
        };
        let mut psi = apply_linv(&id);
        for _ in 1..d.max(1) {
            let h_of_psi = h
                .iter()
                .map(|hi| hi.substitute_trunc(&psi, d))
                .collect::<Result<Vec<_>, _>>()?;
            let corrected: Vec<Poly> = id
                .iter()
                .zip(&h_of_psi)
                .map(|(x, hp)| x.sub(hp))
                .collect();
            let next = apply_linv(&corrected);
            if next == psi {
                break;
            }
            psi = next;
        }
        CoordinateChange::new(psi, self.direction)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.nvars();
        self.components.iter().enumerate().all(|(i, c)| *c == Poly::var(n, i))
    }
}

/// Whether `a ∘ b` is the identity modulo degree > d.
pub fn composes_to_identity(a: &CoordinateChange, b: &CoordinateChange, d: u32) -> bool {
    match a.compose_trunc(b, d) {
        Ok(c) => c
            .components()
            .iter()
            .enumerate()
            .all(|(i, p)| *p == Poly::var(a.nvars(), i)),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn inverse_of_shear_matches_series() {
        // (x + x^2, y) at degree 3 inverts to (x - x^2 + 2x^3, y).
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let phi = CoordinateChange::new(
            vec![x.add(&x.mul(&x)), y.clone()],
            ChangeDirection::Source,
        )
        .unwrap();
        let psi = phi.formal_inverse(3).unwrap();
        let expected = x.sub(&x.pow(2)).add(&x.pow(3).scale(&rat(2)));
        assert_eq!(psi.components()[0], expected);
        assert_eq!(psi.components()[1], y);
        assert!(composes_to_identity(&phi, &psi, 3));
        assert!(composes_to_identity(&psi, &phi, 3));
    }

    #[test]
    fn inverse_requires_invertible_linear_part() {
        let x2 = Poly::var(1, 0).pow(2);
        assert!(matches!(
            CoordinateChange::new(vec![x2], ChangeDirection::Source),
            Err(Error::NonInvertibleLinearPart)
        ));
    }

    #[test]
    fn origin_must_be_preserved() {
        let p = Poly::var(1, 0).add(&Poly::constant(1, rat(1)));
        assert!(matches!(
            CoordinateChange::new(vec![p], ChangeDirection::Source),
            Err(Error::NonzeroConstantTerm { component: 0 })
        ));
    }

    #[test]
    fn two_sided_inverse_with_mixing() {
        // A change mixing both variables at quadratic and cubic order.
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let phi = CoordinateChange::new(
            vec![
                x.add(&y).add(&x.mul(&y)),
                y.add(&x.pow(2)).add(&y.pow(3).scale(&rat(-2))),
            ],
            ChangeDirection::Source,
        )
        .unwrap();
        let d = 6;
        let psi = phi.formal_inverse(d).unwrap();
        assert!(composes_to_identity(&phi, &psi, d));
        assert!(composes_to_identity(&psi, &phi, d));
    }
}
