//! Rational solutions of the Risch differential equation
//! `y' + g'(x) y = r(x)` with `g'` a nonzero polynomial.
//!
//! Decision procedure:
//!
//! 1. Poles of `y' + g'y` have order one more than the poles of `y`, so a
//!    simple pole of `r` rules out every rational `y`.
//! 2. At each rational pole `alpha` of order `m >= 2` the principal part of
//!    `y` (order `m - 1`) is forced by the top `m - 1` Laurent coefficients
//!    of `r`; the order-one coefficient then either matches or refutes.
//! 3. Globally `y = N / D` with `D = prod f_i^{m_i - 1}` over the
//!    squarefree factorization `den(r) = prod f_i^{m_i}`. Clearing
//!    denominators gives the linear equation
//!    `N' D - N D' + g' N D = num(r) prod f_i^{m_i - 2}`, whose left side
//!    has degree exactly `deg N + deg D + deg g'`; that bounds `deg N`, and
//!    the coefficients of `N` solve a linear system over the rationals.
//!
//! Every refutation is recorded with enough data to recheck it by hand.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    rational_roots, solve_linear, squarefree_factorization, LinearSolution, Poly, RatFun, Rational,
};
use crate::expr::format_rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RischError {
    #[error("the exponent derivative g' must be a polynomial")]
    UnsupportedExponent,
    #[error("the exponent derivative g' is zero")]
    ZeroExponent,
}

/// Seeks rational `y` with `y' + gprime * y = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RischProblem {
    gprime: Poly,
    rhs: RatFun,
}

impl RischProblem {
    pub fn new(gprime: Poly, rhs: RatFun) -> Result<Self, RischError> {
        if gprime.is_zero() {
            return Err(RischError::ZeroExponent);
        }
        Ok(RischProblem { gprime, rhs })
    }

    /// Accepts `g'` as a rational function; it must reduce to a polynomial.
    pub fn from_ratfun(gprime: &RatFun, rhs: RatFun) -> Result<Self, RischError> {
        if !gprime.is_polynomial() {
            return Err(RischError::UnsupportedExponent);
        }
        RischProblem::new(gprime.num().clone(), rhs)
    }

    pub fn gprime(&self) -> &Poly {
        &self.gprime
    }

    pub fn rhs(&self) -> &RatFun {
        &self.rhs
    }

    /// `y' + g' y`.
    pub fn apply(&self, y: &RatFun) -> RatFun {
        &y.derivative() + &(&RatFun::from_poly(self.gprime.clone()) * y)
    }
}

/// Machine-checkable reason why no rational solution exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    /// `rhs` has simple poles at the roots of `factor`.
    SimplePole { factor: String },
    /// At `x = root`, where `rhs` has a pole of `order`, the Laurent
    /// coefficients of `y` are forced to `forced` (from order `order - 1`
    /// down to 1), after which the order-one coefficient of `y' + g'y` is
    /// `obtained` but `rhs` needs `required`.
    PoleOrderContradiction {
        root: String,
        order: usize,
        forced: Vec<String>,
        required: String,
        obtained: String,
    },
    /// The numerator degree bound `deg H - deg g' - deg D` is negative while
    /// `H` is nonzero.
    DegreeBound {
        denominator: String,
        reduced_rhs: String,
        bound: i64,
    },
    /// The linear system for the numerator coefficients (lowest degree
    /// first) has no solution.
    InconsistentSystem {
        denominator: String,
        unknowns: usize,
        equations: usize,
        rank: usize,
        matrix: Vec<Vec<String>>,
        rhs: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RischOutcome {
    Solution(RatFun),
    NoSolution(Refutation),
}

impl RischOutcome {
    pub fn is_solution(&self) -> bool {
        matches!(self, RischOutcome::Solution(_))
    }
}

pub fn risch_de_solve(problem: &RischProblem) -> RischOutcome {
    let rhs = &problem.rhs;
    let gp = &problem.gprime;
    if rhs.is_zero() {
        return RischOutcome::Solution(RatFun::zero());
    }
    let sqf = squarefree_factorization(rhs.den()).expect("nonzero denominator");
    if let Some((f, _)) = sqf.factors.iter().find(|(_, m)| *m == 1) {
        return RischOutcome::NoSolution(Refutation::SimplePole {
            factor: f.to_string(),
        });
    }
    for (f, m) in &sqf.factors {
        for alpha in rational_roots(f) {
            if let Some(r) = local_pole_check(rhs, gp, &alpha, *m) {
                return RischOutcome::NoSolution(r);
            }
        }
    }

    let mut den = Poly::one();
    let mut reduce = Poly::one();
    for (f, m) in &sqf.factors {
        den = &den * &f.pow(*m as u32 - 1);
        reduce = &reduce * &f.pow(*m as u32 - 2);
    }
    let h = rhs.num() * &reduce;
    let bound = h.degree_i64() - gp.degree_i64() - den.degree_i64();
    if bound < 0 {
        return RischOutcome::NoSolution(Refutation::DegreeBound {
            denominator: den.to_string(),
            reduced_rhs: h.to_string(),
            bound,
        });
    }
    let unknowns = bound as usize + 1;
    let dden = den.derivative();
    let columns: Vec<Poly> = (0..unknowns)
        .map(|j| {
            let xj = Poly::monomial(Rational::from_integer(1.into()), j);
            &(&(&xj.derivative() * &den) - &(&xj * &dden)) + &(&(gp * &xj) * &den)
        })
        .collect();
    let rows = columns
        .iter()
        .map(|c| c.coeffs().len())
        .chain(std::iter::once(h.coeffs().len()))
        .max()
        .unwrap_or(0);
    let matrix: Vec<Vec<Rational>> = (0..rows)
        .map(|i| columns.iter().map(|c| c.coeff(i)).collect())
        .collect();
    let b: Vec<Rational> = (0..rows).map(|i| h.coeff(i)).collect();
    match solve_linear(&matrix, &b, unknowns) {
        LinearSolution::Solved { values, .. } => {
            let y = RatFun::new(Poly::from_coeffs(values), den).expect("nonzero denominator");
            debug_assert_eq!(&problem.apply(&y), rhs);
            RischOutcome::Solution(y)
        }
        LinearSolution::Inconsistent { rank, .. } => {
            RischOutcome::NoSolution(Refutation::InconsistentSystem {
                denominator: den.to_string(),
                unknowns,
                equations: rows,
                rank,
                matrix: matrix
                    .iter()
                    .map(|r| r.iter().map(format_rational).collect())
                    .collect(),
                rhs: b.iter().map(format_rational).collect(),
            })
        }
    }
}

/// Matches principal parts at a rational pole of order `m >= 2`.
fn local_pole_check(rhs: &RatFun, gp: &Poly, alpha: &Rational, m: usize) -> Option<Refutation> {
    // rhs = A / ((x - alpha)^m B), B(alpha) != 0; expand in t = x - alpha
    let lin = Poly::linear_root(alpha);
    let b = rhs
        .den()
        .exact_div(&lin.pow(m as u32))
        .expect("pole of order m");
    let a_t = rhs.num().shift(alpha);
    let b_t = b.shift(alpha);
    let series = series_div(&a_t, &b_t, m);
    // rho[j] = coefficient of t^{-j}, j = 1..=m
    let rho = |j: usize| series[m - j].clone();
    let g_t = gp.shift(alpha);
    let f = |i: usize| g_t.coeff(i);

    // c[k] = coefficient of t^{-k} in y, k = 1..m-1
    let mut c = vec![Rational::zero(); m + 1];
    c[m - 1] = -rho(m) / Rational::from_integer((m as i64 - 1).into());
    for j in (2..m).rev() {
        let mut s = Rational::zero();
        for i in 0..=(m - 1 - j) {
            s += &c[j + i] * f(i);
        }
        c[j - 1] = (s - rho(j)) / Rational::from_integer((j as i64 - 1).into());
    }
    let mut obtained = Rational::zero();
    for i in 0..(m - 1) {
        obtained += &c[1 + i] * f(i);
    }
    let required = rho(1);
    if obtained == required {
        return None;
    }
    Some(Refutation::PoleOrderContradiction {
        root: format_rational(alpha),
        order: m,
        forced: (1..m).rev().map(|k| format_rational(&c[k])).collect(),
        required: format_rational(&required),
        obtained: format_rational(&obtained),
    })
}

/// First `n` power-series coefficients of `a / b`, `b(0) != 0`.
fn series_div(a: &Poly, b: &Poly, n: usize) -> Vec<Rational> {
    let b0_inv = b.coeff(0).recip();
    let mut out: Vec<Rational> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = a.coeff(k);
        for i in 1..=k {
            s -= b.coeff(i) * &out[k - i];
        }
        out.push(s * &b0_inv);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::expr::parse_ratfun;

    fn problem(gp: &[i64], rhs: &str) -> RischProblem {
        RischProblem::new(Poly::from_ints(gp), parse_ratfun(rhs).unwrap()).unwrap()
    }

    #[test]
    fn example_integrand_is_refuted_by_pole_analysis() {
        let out = risch_de_solve(&problem(&[2], "12/(x+1)^3"));
        assert_eq!(
            out,
            RischOutcome::NoSolution(Refutation::PoleOrderContradiction {
                root: "-1".into(),
                order: 3,
                forced: vec!["-6".into(), "-12".into()],
                required: "0".into(),
                obtained: "-24".into(),
            })
        );
    }

    #[test]
    fn elementary_cases_are_solved() {
        let out = risch_de_solve(&problem(&[2], "(2x+1)/(x+1)^2"));
        assert_eq!(
            out,
            RischOutcome::Solution(parse_ratfun("1/(x+1)").unwrap())
        );
        let out = risch_de_solve(&problem(&[1], "1"));
        assert_eq!(out, RischOutcome::Solution(RatFun::one()));
        let out = risch_de_solve(&problem(&[1], "0"));
        assert_eq!(out, RischOutcome::Solution(RatFun::zero()));
    }

    #[test]
    fn simple_pole_refutes() {
        let out = risch_de_solve(&problem(&[0, 1], "1/x"));
        assert_eq!(
            out,
            RischOutcome::NoSolution(Refutation::SimplePole { factor: "x".into() })
        );
    }

    #[test]
    fn polynomial_rhs_degree_bound() {
        // y' + x^2 y = 1: deg N would be -2
        let out = risch_de_solve(&problem(&[0, 0, 1], "1"));
        assert!(matches!(
            out,
            RischOutcome::NoSolution(Refutation::DegreeBound { bound: -2, .. })
        ));
        // int e^{x^2} x^2 dx is not elementary: y' + 2x y = x^2
        let out = risch_de_solve(&problem(&[0, 2], "x^2"));
        assert!(matches!(
            out,
            RischOutcome::NoSolution(Refutation::InconsistentSystem { .. })
        ));
        // int x e^{x^2} dx = e^{x^2}/2
        let out = risch_de_solve(&problem(&[0, 2], "x"));
        assert_eq!(out, RischOutcome::Solution(RatFun::constant(rat(1, 2))));
    }

    #[test]
    fn irrational_double_pole_goes_to_linear_system() {
        // y = 1/(x^2 - 2) is a solution for g' = 1
        let y = parse_ratfun("1/(x^2-2)").unwrap();
        let p = RischProblem::new(Poly::from_ints(&[1]), RatFun::zero()).unwrap();
        let rhs = p.apply(&y);
        let out = risch_de_solve(&RischProblem::new(Poly::from_ints(&[1]), rhs).unwrap());
        assert_eq!(out, RischOutcome::Solution(y));
    }

    #[test]
    fn problem_validation() {
        assert_eq!(
            RischProblem::new(Poly::zero(), RatFun::one()),
            Err(RischError::ZeroExponent)
        );
        assert_eq!(
            RischProblem::from_ratfun(&parse_ratfun("1/x").unwrap(), RatFun::one()),
            Err(RischError::UnsupportedExponent)
        );
    }
}
