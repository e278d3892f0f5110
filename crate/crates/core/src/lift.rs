//! Cotangent lift of a planar field: `f(x, y, p1, p2) = p1 P + p2 Q` and
//! its Hamiltonian field `(f_p1, f_p2, -f_x, -f_y)`.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Poly2, Poly4};
use crate::variational::PlanarField;

const X: usize = 0;
const Y: usize = 1;
const P1: usize = 2;
const P2: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("not homogeneous of degree one in the momenta: term {term}")]
    NotMomentumLinear { term: String },
}

/// `f` linear homogeneous in `(p1, p2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedHamiltonian {
    f: Poly4,
}

impl LiftedHamiltonian {
    pub fn new(f: Poly4) -> Result<Self, LiftError> {
        if let Some((e, c)) = f.terms().find(|(e, _)| e[P1] + e[P2] != 1) {
            return Err(LiftError::NotMomentumLinear {
                term: Poly4::term(c.clone(), *e).to_string(),
            });
        }
        Ok(LiftedHamiltonian { f })
    }

    pub fn f(&self) -> &Poly4 {
        &self.f
    }
}

impl fmt::Display for LiftedHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.f)
    }
}

/// `(xdot, ydot, p1dot, p2dot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedField {
    pub components: [Poly4; 4],
}

impl fmt::Display for LiftedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `Poly2` in `x, y` seen as a `Poly4`.
pub fn embed(p: &Poly2) -> Poly4 {
    p.compose(&[Poly4::var(X), Poly4::var(Y)])
}

pub fn cotangent_lift(field: &PlanarField) -> LiftedHamiltonian {
    let f = &(&Poly4::var(P1) * &embed(&field.p)) + &(&Poly4::var(P2) * &embed(&field.q));
    LiftedHamiltonian { f }
}

pub fn hamiltonian_field(f: &Poly4) -> Result<LiftedField, LiftError> {
    let h = LiftedHamiltonian::new(f.clone())?;
    Ok(lifted_field(&h))
}

pub fn lifted_field(h: &LiftedHamiltonian) -> LiftedField {
    let f = &h.f;
    LiftedField {
        components: [f.partial(P1), f.partial(P2), -f.partial(X), -f.partial(Y)],
    }
}

/// First two components equal `(P, Q)`.
pub fn verify_projection(lifted: &LiftedField, base: &PlanarField) -> bool {
    lifted.components[0] == embed(&base.p) && lifted.components[1] == embed(&base.q)
}

/// Derivative of `f` along `X_f`; zero for every Hamiltonian.
pub fn conservation_residual(h: &LiftedHamiltonian, field: &LiftedField) -> Poly4 {
    (0..4).fold(Poly4::zero(), |acc, i| {
        &acc + &(&h.f.partial(i) * &field.components[i])
    })
}
