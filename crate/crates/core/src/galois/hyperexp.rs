//! Hyperexponential elements `A(x) e^{g(x)}` and closed forms mixing them
//! with the exponential integral.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{logderiv_split, Poly, RatFun, Rational, Unsupported};
use crate::expr::format_rational;

/// `a(x) * e^{g(x)}` with `a` rational and `g` polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperExp {
    pub a: RatFun,
    pub g: Poly,
}

impl HyperExp {
    pub fn new(a: RatFun, g: Poly) -> Self {
        HyperExp { a, g }
    }

    /// `a'/a + g'`; `None` for the zero element.
    pub fn log_derivative(&self) -> Option<RatFun> {
        if self.a.is_zero() {
            return None;
        }
        Some(&(&self.a.derivative() / &self.a) + &RatFun::from_poly(self.g.derivative()))
    }

    /// `(a' + g' a) e^g`.
    pub fn derivative(&self) -> HyperExp {
        let a = &self.a.derivative() + &(&RatFun::from_poly(self.g.derivative()) * &self.a);
        HyperExp {
            a,
            g: self.g.clone(),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.a.eval_f64(x) * self.g.eval_f64(x).exp()
    }

    pub fn to_json(&self) -> HyperExpJson {
        HyperExpJson {
            a: self.a.to_string(),
            g: self.g.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperExpJson {
    #[serde(rename = "A")]
    pub a: String,
    pub g: String,
}

impl std::fmt::Display for HyperExp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.g.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "({})*exp({})", self.a, self.g)
        }
    }
}

/// `omega = exp(int beta1)` as `A e^g`.
pub fn exponential_solution(beta1: &RatFun) -> Result<HyperExp, Unsupported> {
    let split = logderiv_split(beta1)?;
    let omega = HyperExp {
        a: split.product(),
        g: split.g,
    };
    debug_assert_eq!(omega.log_derivative().as_ref(), Some(beta1));
    Ok(omega)
}

/// `k e^{s} Ei_1(u(x))`, with `Ei_1(z) = int_z^inf e^{-t}/t dt` so that
/// `d/dx Ei_1(u) = -e^{-u} u'/u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EiTerm {
    pub coeff: Rational,
    pub exp_shift: Rational,
    pub arg: Poly,
}

/// `sum of hyperexponential terms + sum of Ei_1 terms`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialClosedForm {
    pub elementary: Vec<HyperExp>,
    pub ei_terms: Vec<EiTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClosedFormError {
    #[error("malformed closed form: {0}")]
    MalformedClosedForm(String),
}

impl SpecialClosedForm {
    /// Derivative as a list of hyperexponential terms.
    pub fn derivative(&self) -> Result<Vec<HyperExp>, ClosedFormError> {
        let mut out: Vec<HyperExp> = self.elementary.iter().map(HyperExp::derivative).collect();
        for t in &self.ei_terms {
            if t.arg.degree() != Some(1) {
                return Err(ClosedFormError::MalformedClosedForm(format!(
                    "Ei argument {} is not affine with nonzero slope",
                    t.arg
                )));
            }
            // k e^s * (-e^{-u} u'/u) = (-k u'/u) e^{s - u}
            let du = t.arg.derivative();
            let a =
                RatFun::new(du.scale(&-t.coeff.clone()), t.arg.clone()).expect("nonzero argument");
            let g = &Poly::constant(t.exp_shift.clone()) - &t.arg;
            out.push(HyperExp { a, g });
        }
        Ok(out)
    }
}

/// Sums terms with identical exponent. Two such sums are equal as
/// functions iff these maps agree, since `e^{g}` for distinct polynomial
/// `g` (constant offsets included) are linearly independent over the
/// rational functions.
fn collect(terms: &[HyperExp]) -> BTreeMap<Vec<Rational>, RatFun> {
    let mut map: BTreeMap<Vec<Rational>, RatFun> = BTreeMap::new();
    for t in terms {
        let key = t.g.coeffs().to_vec();
        let entry = map.entry(key).or_insert_with(RatFun::zero);
        *entry = &*entry + &t.a;
    }
    map.retain(|_, v| !v.is_zero());
    map
}

/// `true` iff `d/dx cf == integrand` exactly.
pub fn verify_closed_form(
    cf: &SpecialClosedForm,
    integrand: &HyperExp,
) -> Result<bool, ClosedFormError> {
    let lhs = collect(&cf.derivative()?);
    let rhs = collect(std::slice::from_ref(integrand));
    Ok(lhs == rhs)
}

impl std::fmt::Display for SpecialClosedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.elementary.iter().map(|h| h.to_string()).collect();
        for t in &self.ei_terms {
            parts.push(format!(
                "{}*exp({})*Ei1({})",
                format_rational(&t.coeff),
                format_rational(&t.exp_shift),
                t.arg
            ));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
