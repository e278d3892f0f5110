//! Planar polynomial fields, their invariant straight lines, and the
//! second-order variational system along an invariant line moved to
//! `{y = 0}`.
//!
//! Variational equations are written in the foliation form
//! `dy/dx = Q/P`, so primes are `d/dx`. With `h = Q/P`,
//!
//! ```text
//! beta1 = d/dy h |_{y=0}        = Q_y(x,0) / P(x,0)
//! beta2 = d^2/dy^2 h |_{y=0}    = (Q_yy(x,0) P(x,0) - 2 Q_y(x,0) P_y(x,0)) / P(x,0)^2
//! ```
//!
//! `beta2` is the full second derivative with no factor 1/2, and the
//! linearized second variational system is
//! `chi1' = 2 beta1 chi1`, `chi2' = beta1 chi2 + beta2 chi1`.

mod lines;

pub use lines::{invariant_lines, LineFamily, LineSearch};

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Poly, Poly2, RatFun, Rational, Var};
use crate::expr::format_rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VariationalError {
    #[error("the potential is constant; its gradient field vanishes")]
    ConstantPotential,
    #[error("both components of the field vanish identically")]
    ZeroField,
    #[error("the line is not invariant for the field")]
    NotInvariant,
    #[error("the field vanishes identically along the line (line of critical points)")]
    LineOfCriticalPoints,
}

/// `x' = P(x, y)`, `y' = Q(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarField {
    pub p: Poly2,
    pub q: Poly2,
}

impl PlanarField {
    pub fn new(p: Poly2, q: Poly2) -> Result<Self, VariationalError> {
        if p.is_zero() && q.is_zero() {
            return Err(VariationalError::ZeroField);
        }
        Ok(PlanarField { p, q })
    }
}

impl fmt::Display for PlanarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.p, self.q)
    }
}

/// `(P, Q) = (F_x, F_y)`.
pub fn gradient_field(potential: &Poly2) -> Result<PlanarField, VariationalError> {
    if potential.is_constant() {
        return Err(VariationalError::ConstantPotential);
    }
    PlanarField::new(potential.derivative(Var::X), potential.derivative(Var::Y))
}

/// The line `a x + b y + c = 0`, scaled so the first nonzero of `(a, b)`
/// is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantLine {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl InvariantLine {
    /// Normalizing constructor; `None` when `(a, b) = (0, 0)`.
    pub fn new(a: Rational, b: Rational, c: Rational) -> Option<Self> {
        let lead = if !a.is_zero() {
            a.clone()
        } else if !b.is_zero() {
            b.clone()
        } else {
            return None;
        };
        Some(InvariantLine {
            a: a / &lead,
            b: b / &lead,
            c: c / &lead,
        })
    }

    /// `y = 0`.
    pub fn x_axis() -> Self {
        InvariantLine {
            a: Rational::zero(),
            b: Rational::one(),
            c: Rational::zero(),
        }
    }

    pub fn polynomial(&self) -> Poly2 {
        Poly2::from_terms([
            ([1, 0], self.a.clone()),
            ([0, 1], self.b.clone()),
            ([0, 0], self.c.clone()),
        ])
    }

    /// `a P + b Q` restricted to the line, as a polynomial in the line's
    /// parameter. Zero exactly when `ax + by + c` divides `aP + bQ`.
    pub fn restricted_flux(&self, field: &PlanarField) -> Poly {
        let flux = &field.p.scale(&self.a) + &field.q.scale(&self.b);
        if self.a.is_zero() {
            // y = -c
            flux.substitute_y(&-self.c.clone())
        } else {
            // x = -b y - c, parametrized by y
            let x_img = Poly2::from_terms([([0, 1], -self.b.clone()), ([0, 0], -self.c.clone())]);
            flux.compose(&[x_img, Poly2::y()])
                .substitute_x(&Rational::zero())
        }
    }

    pub fn is_invariant_for(&self, field: &PlanarField) -> bool {
        self.restricted_flux(field).is_zero()
    }
}

impl fmt::Display for InvariantLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.polynomial())
    }
}

impl Serialize for InvariantLine {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("InvariantLine", 4)?;
        st.serialize_field("a", &format_rational(&self.a))?;
        st.serialize_field("b", &format_rational(&self.b))?;
        st.serialize_field("c", &format_rational(&self.c))?;
        st.serialize_field("equation", &self.to_string())?;
        st.end()
    }
}

/// Old coordinates written in the new ones after moving a line to
/// `{y = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineChart {
    pub old_x: Poly2,
    pub old_y: Poly2,
}

/// Affine change of coordinates sending `line` to `{y = 0}`; returns the
/// pushed-forward field and the chart used.
///
/// * horizontal `y + c = 0`: `x = X`, `y = Y - c`
/// * vertical `x + c = 0`: `x = Y - c`, `y = X` (components swap)
/// * otherwise `x + b y + c = 0`: `x = Y - b X - c`, `y = X`
pub fn normalize_to_y0(
    field: &PlanarField,
    line: &InvariantLine,
) -> Result<(PlanarField, AffineChart), VariationalError> {
    if !line.is_invariant_for(field) {
        return Err(VariationalError::NotInvariant);
    }
    let big_x = Poly2::x();
    let big_y = Poly2::y();
    let minus_c = Poly2::constant(-line.c.clone());
    let (old_x, old_y, new_p, new_q) = if line.a.is_zero() {
        let old_x = big_x.clone();
        let old_y = &big_y + &minus_c;
        let imgs = [old_x.clone(), old_y.clone()];
        let p = field.p.compose(&imgs);
        let q = field.q.compose(&imgs);
        (old_x, old_y, p, q)
    } else {
        // new X = y, new Y = x + b y + c
        let old_x = &(&big_y - &big_x.scale(&line.b)) + &minus_c;
        let old_y = big_x.clone();
        let imgs = [old_x.clone(), old_y.clone()];
        let p = field.p.compose(&imgs);
        let q = field.q.compose(&imgs);
        let new_p = q.clone();
        let new_q = &p + &q.scale(&line.b);
        (old_x, old_y, new_p, new_q)
    };
    let out = PlanarField::new(new_p, new_q)?;
    debug_assert!(out.q.substitute_y(&Rational::zero()).is_zero());
    Ok((out, AffineChart { old_x, old_y }))
}

/// Coefficients of the variational system along `{y = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariationalSystem {
    pub line: InvariantLine,
    pub beta1: RatFun,
    pub beta2: RatFun,
}

pub fn variational_coefficients(
    field: &PlanarField,
) -> Result<VariationalSystem, VariationalError> {
    let zero = Rational::zero();
    if !field.q.substitute_y(&zero).is_zero() {
        return Err(VariationalError::NotInvariant);
    }
    let p0 = field.p.substitute_y(&zero);
    if p0.is_zero() {
        return Err(VariationalError::LineOfCriticalPoints);
    }
    let qy_poly = field.q.derivative(Var::Y);
    let qy = qy_poly.substitute_y(&zero);
    let qyy = qy_poly.derivative(Var::Y).substitute_y(&zero);
    let py = field.p.derivative(Var::Y).substitute_y(&zero);
    let beta1 = RatFun::new(qy.clone(), p0.clone()).expect("nonzero restriction");
    let two = Rational::from_integer(2.into());
    let beta2_num = &(&qyy * &p0) - &(&qy * &py).scale(&two);
    let beta2 = RatFun::new(beta2_num, &p0 * &p0).expect("nonzero restriction");
    Ok(VariationalSystem {
        line: InvariantLine::x_axis(),
        beta1,
        beta2,
    })
}

/// `chi1' = a11 chi1`, `chi2' = a22 chi2 + a21 chi1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lve2System {
    pub a11: RatFun,
    pub a22: RatFun,
    pub a21: RatFun,
}

impl Lve2System {
    pub fn equations(&self) -> [String; 2] {
        [
            format!("chi1' = ({})*chi1", self.a11),
            format!("chi2' = ({})*chi2 + ({})*chi1", self.a22, self.a21),
        ]
    }
}

pub fn lve2_system(vs: &VariationalSystem) -> Lve2System {
    Lve2System {
        a11: vs.beta1.scale(&Rational::from_integer(2.into())),
        a22: vs.beta1.clone(),
        a21: vs.beta2.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::expr::{parse_polynomial, parse_ratfun};

    const EXAMPLE_F: &str = "1/3*x^3+1/2*x^2+(x+y)^2*y^2+1/4*y^4";

    fn field(p: &str, q: &str) -> PlanarField {
        PlanarField::new(parse_polynomial(p).unwrap(), parse_polynomial(q).unwrap()).unwrap()
    }

    #[test]
    fn gradient_examples() {
        let f = gradient_field(&parse_polynomial(EXAMPLE_F).unwrap()).unwrap();
        assert_eq!(f.p, parse_polynomial("x^2+x+2(x+y)y^2").unwrap());
        assert_eq!(f.q, parse_polynomial("2(x+y)y^2+2(x+y)^2y+y^3").unwrap());
        let f = gradient_field(&parse_polynomial("(x^2+y^2)/2").unwrap()).unwrap();
        assert_eq!(f, field("x", "y"));
        assert_eq!(
            gradient_field(&parse_polynomial("7").unwrap()),
            Err(VariationalError::ConstantPotential)
        );
    }

    #[test]
    fn example_coefficients() {
        let f = gradient_field(&parse_polynomial(EXAMPLE_F).unwrap()).unwrap();
        let vs = variational_coefficients(&f).unwrap();
        assert_eq!(vs.beta1, parse_ratfun("2x/(x+1)").unwrap());
        assert_eq!(vs.beta2, parse_ratfun("12/(x+1)").unwrap());
        assert_eq!(vs.beta1.to_string(), "2*x/(x+1)");
        assert_eq!(vs.beta2.to_string(), "12/(x+1)");
    }

    #[test]
    fn hand_computed_coefficients() {
        let vs = variational_coefficients(&field("x", "-y")).unwrap();
        assert_eq!(vs.beta1, parse_ratfun("-1/x").unwrap());
        assert!(vs.beta2.is_zero());

        let f = gradient_field(&parse_polynomial("x^2/2 + x*y^2 + y^3/3").unwrap()).unwrap();
        assert_eq!(f, field("x+y^2", "2x*y+y^2"));
        let vs = variational_coefficients(&f).unwrap();
        assert_eq!(vs.beta1, RatFun::constant(rat(2, 1)));
        assert_eq!(vs.beta2, parse_ratfun("2/x").unwrap());
    }

    #[test]
    fn coefficient_errors() {
        assert_eq!(
            variational_coefficients(&field("1", "1")),
            Err(VariationalError::NotInvariant)
        );
        assert_eq!(
            variational_coefficients(&field("y", "y")),
            Err(VariationalError::LineOfCriticalPoints)
        );
    }

    #[test]
    fn beta1_identity() {
        let f = field("x^2+3x*y-1", "y*(x^3+2)+y^2");
        let vs = variational_coefficients(&f).unwrap();
        let p0 = f.p.substitute_y(&Rational::zero());
        let qy = f.q.derivative(Var::Y).substitute_y(&Rational::zero());
        assert_eq!(&vs.beta1 * &RatFun::from_poly(p0), RatFun::from_poly(qy));
    }

    #[test]
    fn lve2_shapes() {
        let f = gradient_field(&parse_polynomial(EXAMPLE_F).unwrap()).unwrap();
        let sys = lve2_system(&variational_coefficients(&f).unwrap());
        assert_eq!(sys.a11, parse_ratfun("2*(2x/(x+1))").unwrap());
        assert_eq!(sys.a22, parse_ratfun("2x/(x+1)").unwrap());
        assert_eq!(sys.a21, parse_ratfun("12/(x+1)").unwrap());

        let zero = VariationalSystem {
            line: InvariantLine::x_axis(),
            beta1: RatFun::zero(),
            beta2: RatFun::zero(),
        };
        let sys = lve2_system(&zero);
        assert!(sys.a11.is_zero() && sys.a22.is_zero() && sys.a21.is_zero());

        let vs = VariationalSystem {
            line: InvariantLine::x_axis(),
            beta1: RatFun::one(),
            beta2: RatFun::x(),
        };
        let sys = lve2_system(&vs);
        assert_eq!(sys.a11, RatFun::constant(rat(2, 1)));
        assert_eq!(
            sys.equations(),
            [
                "chi1' = (2)*chi1".to_string(),
                "chi2' = (1)*chi2 + (x)*chi1".to_string()
            ]
        );
    }

    #[test]
    fn normalization_cases() {
        let f = field("x^2+y", "y*(x-1)");
        let (g, _) = normalize_to_y0(&f, &InvariantLine::x_axis()).unwrap();
        assert_eq!(g, f);

        // y = 1 invariant for (x + y, y - 1)
        let f = field("x+y", "y-1");
        let line = InvariantLine::new(rat(0, 1), rat(1, 1), rat(-1, 1)).unwrap();
        let (g, _) = normalize_to_y0(&f, &line).unwrap();
        assert_eq!(g, field("x+y+1", "y"));

        // x = 0 invariant for (x y, x + y^2): components swap
        let f = field("x*y", "x+y^2");
        let line = InvariantLine::new(rat(1, 1), rat(0, 1), rat(0, 1)).unwrap();
        let (g, chart) = normalize_to_y0(&f, &line).unwrap();
        assert_eq!(g, field("y+x^2", "x*y"));
        assert_eq!(chart.old_x, Poly2::y());
        assert_eq!(chart.old_y, Poly2::x());

        let f = field("1", "0");
        assert_eq!(
            normalize_to_y0(
                &f,
                &InvariantLine::new(rat(1, 1), rat(0, 1), rat(0, 1)).unwrap()
            ),
            Err(VariationalError::NotInvariant)
        );
    }

    #[test]
    fn slanted_line_normalizes() {
        // x - y = 0 is invariant for the radial-plus-rotation-free field (x + x y, y + x y)
        let f = field("x+x*y", "y+x*y");
        let line = InvariantLine::new(rat(1, 1), rat(-1, 1), rat(0, 1)).unwrap();
        assert!(line.is_invariant_for(&f));
        let (g, _) = normalize_to_y0(&f, &line).unwrap();
        assert!(g.q.substitute_y(&Rational::zero()).is_zero());
    }
}
