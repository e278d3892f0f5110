//! Textual front end: parsing polynomial and rational expressions in `x`
//! and `y`, and printing canonical text that parses back to the same value.

mod format;
mod parser;

pub use format::{
    format_canonical, format_poly, format_poly2, format_ratfun, format_rational, format_terms,
    Canonical,
};
pub use parser::parse_expression;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{Poly, Poly2, RatFun, Rational, Var};

/// Parsed expression tree. Unary minus is represented as `0 - t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Const(Rational),
    Var(Var),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol '{name}' at offset {offset}; only x and y are allowed")]
    UnknownSymbol { name: String, offset: usize },
    #[error("not a polynomial: a variable occurs in a denominator")]
    NotPolynomial,
    #[error("division by an expression that evaluates to zero")]
    DivisionByZero,
    #[error("expected an expression in x only")]
    NotUnivariate,
}

impl ExprAst {
    /// Number of summands in the outermost `+`/`-` chain.
    pub fn top_level_summands(&self) -> usize {
        match self {
            ExprAst::Add(a, b) => a.top_level_summands() + b.top_level_summands(),
            ExprAst::Sub(a, b) => {
                if matches!(a.as_ref(), ExprAst::Const(c) if c.is_zero()) {
                    b.top_level_summands()
                } else {
                    a.top_level_summands() + b.top_level_summands()
                }
            }
            _ => 1,
        }
    }

    fn mentions_variable(&self) -> bool {
        match self {
            ExprAst::Const(_) => false,
            ExprAst::Var(_) => true,
            ExprAst::Add(a, b) | ExprAst::Sub(a, b) | ExprAst::Mul(a, b) | ExprAst::Div(a, b) => {
                a.mentions_variable() || b.mentions_variable()
            }
            ExprAst::Pow(a, _) => a.mentions_variable(),
        }
    }

    fn mentions_y(&self) -> bool {
        match self {
            ExprAst::Const(_) => false,
            ExprAst::Var(v) => *v == Var::Y,
            ExprAst::Add(a, b) | ExprAst::Sub(a, b) | ExprAst::Mul(a, b) | ExprAst::Div(a, b) => {
                a.mentions_y() || b.mentions_y()
            }
            ExprAst::Pow(a, _) => a.mentions_y(),
        }
    }
}

/// Expands to a collected bivariate polynomial.
pub fn to_polynomial(ast: &ExprAst) -> Result<Poly2, ExprError> {
    Ok(match ast {
        ExprAst::Const(c) => Poly2::constant(c.clone()),
        ExprAst::Var(Var::X) => Poly2::x(),
        ExprAst::Var(Var::Y) => Poly2::y(),
        ExprAst::Add(a, b) => &to_polynomial(a)? + &to_polynomial(b)?,
        ExprAst::Sub(a, b) => &to_polynomial(a)? - &to_polynomial(b)?,
        ExprAst::Mul(a, b) => &to_polynomial(a)? * &to_polynomial(b)?,
        ExprAst::Div(a, b) => {
            if b.mentions_variable() {
                return Err(ExprError::NotPolynomial);
            }
            let d = to_polynomial(b)?.coeff(&[0, 0]);
            if d.is_zero() {
                return Err(ExprError::DivisionByZero);
            }
            to_polynomial(a)?.scale(&d.recip())
        }
        ExprAst::Pow(a, e) => to_polynomial(a)?.pow(*e),
    })
}

/// Evaluates an expression in `x` alone to a normalized rational function.
pub fn to_ratfun(ast: &ExprAst) -> Result<RatFun, ExprError> {
    if ast.mentions_y() {
        return Err(ExprError::NotUnivariate);
    }
    fn go(ast: &ExprAst) -> Result<RatFun, ExprError> {
        Ok(match ast {
            ExprAst::Const(c) => RatFun::constant(c.clone()),
            ExprAst::Var(_) => RatFun::x(),
            ExprAst::Add(a, b) => &go(a)? + &go(b)?,
            ExprAst::Sub(a, b) => &go(a)? - &go(b)?,
            ExprAst::Mul(a, b) => &go(a)? * &go(b)?,
            ExprAst::Div(a, b) => {
                let d = go(b)?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                &go(a)? / &d
            }
            ExprAst::Pow(a, e) => {
                let base = go(a)?;
                RatFun::new(base.num().pow(*e), base.den().pow(*e)).expect("nonzero denominator")
            }
        })
    }
    go(ast)
}

/// Parses and expands in one step.
pub fn parse_polynomial(text: &str) -> Result<Poly2, ExprError> {
    to_polynomial(&parse_expression(text)?)
}

/// Parses a univariate rational expression in `x`.
pub fn parse_ratfun(text: &str) -> Result<RatFun, ExprError> {
    to_ratfun(&parse_expression(text)?)
}

/// Parses a univariate polynomial in `x`.
pub fn parse_poly(text: &str) -> Result<Poly, ExprError> {
    let p = parse_polynomial(text)?;
    if p.degree_in(1).unwrap_or(0) > 0 {
        return Err(ExprError::NotUnivariate);
    }
    Ok(p.substitute_y(&Rational::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn example_potential_expands() {
        // x^3/3 + x^2/2 + x^2 y^2 + 2 x y^3 + 5/4 y^4 (sympy)
        let p = parse_polynomial("1/3*x^3+1/2*x^2+(x+y)^2*y^2+1/4*y^4").unwrap();
        let expect = Poly2::from_terms([
            ([3, 0], rat(1, 3)),
            ([2, 0], rat(1, 2)),
            ([2, 2], rat(1, 1)),
            ([1, 3], rat(2, 1)),
            ([0, 4], rat(5, 4)),
        ]);
        assert_eq!(p, expect);
    }

    #[test]
    fn identity_collapses_to_zero() {
        assert!(parse_polynomial("(x+y)^2 - x^2 - 2*x*y - y^2")
            .unwrap()
            .is_zero());
    }

    #[test]
    fn variable_denominator_rejected() {
        assert_eq!(parse_polynomial("1/x"), Err(ExprError::NotPolynomial));
        assert_eq!(parse_polynomial("x/(2-2)"), Err(ExprError::DivisionByZero));
        assert_eq!(
            parse_polynomial("x/(4/2)").unwrap(),
            Poly2::x().scale(&rat(1, 2))
        );
    }

    #[test]
    fn ratfun_parsing() {
        let r = parse_ratfun("2*x/(x+1)").unwrap();
        assert_eq!(r.num(), &Poly::from_ints(&[0, 2]));
        assert_eq!(r.den(), &Poly::from_ints(&[1, 1]));
        assert_eq!(parse_ratfun("y"), Err(ExprError::NotUnivariate));
        assert_eq!(parse_ratfun("1/(x-x)"), Err(ExprError::DivisionByZero));
    }
}
