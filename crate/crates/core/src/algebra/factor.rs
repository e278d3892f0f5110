//! GCD, squarefree decomposition, partial fractions and the
//! logarithmic-derivative split `beta = g' + sum n_i f_i'/f_i`.

use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{rational_roots, resultant_with_parameter, AlgebraError, Poly, RatFun, Rational};

/// Monic gcd. Returns zero only when both inputs are zero.
pub fn gcd_monic(a: &Poly, b: &Poly) -> Poly {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    while !r1.is_zero() {
        let r = r0.rem(&r1);
        r0 = r1;
        // keep remainders monic to slow coefficient growth
        r1 = r.monic();
    }
    r0.monic()
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly, AlgebraError> {
    if a.is_zero() && b.is_zero() {
        return Err(AlgebraError::BothZero);
    }
    Ok(gcd_monic(a, b))
}

/// `(g, s, t)` with `s*a + t*b = g` and `g` the monic gcd.
pub fn extended_gcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly), AlgebraError> {
    if a.is_zero() && b.is_zero() {
        return Err(AlgebraError::BothZero);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = r0.leading_coeff().recip();
    Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
}

/// `p = unit * prod factor_i^{mult_i}` with monic, squarefree, pairwise
/// coprime factors and strictly increasing multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeFactorization {
    pub unit: Rational,
    pub factors: Vec<(Poly, usize)>,
}

impl SquarefreeFactorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m as u32)
            })
    }
}

/// Yun's algorithm.
pub fn squarefree_factorization(p: &Poly) -> Result<SquarefreeFactorization, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let unit = p.leading_coeff();
    let mut factors = Vec::new();
    if p.is_constant() {
        return Ok(SquarefreeFactorization { unit, factors });
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = gcd_monic(&f, &df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let mut c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd_monic(&b, &d);
        b = b.exact_div(&a).expect("gcd divides");
        c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.derivative();
        if !a.is_constant() {
            factors.push((a, i));
        }
        i += 1;
    }
    Ok(SquarefreeFactorization { unit, factors })
}

/// `numerator / factor^order`, with `deg numerator < deg factor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractionTerm {
    pub factor: Poly,
    pub order: usize,
    pub numerator: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub polynomial: Poly,
    pub terms: Vec<PartialFractionTerm>,
}

impl PartialFractions {
    pub fn recombine(&self) -> RatFun {
        self.terms
            .iter()
            .fold(RatFun::from_poly(self.polynomial.clone()), |acc, t| {
                let term = RatFun::new(t.numerator.clone(), t.factor.pow(t.order as u32))
                    .expect("nonzero factor");
                &acc + &term
            })
    }

    /// Highest pole order over all terms, 0 for a polynomial.
    pub fn max_order(&self) -> usize {
        self.terms.iter().map(|t| t.order).max().unwrap_or(0)
    }
}

/// Decomposition over the squarefree factors of the denominator.
pub fn partial_fractions(f: &RatFun) -> PartialFractions {
    let (polynomial, rem) = f.num().div_rem(f.den());
    let mut terms = Vec::new();
    if rem.is_zero() {
        return PartialFractions { polynomial, terms };
    }
    let den = f.den();
    let sqf = squarefree_factorization(den).expect("nonzero denominator");
    for (factor, mult) in &sqf.factors {
        let block = factor.pow(*mult as u32);
        let rest = den.exact_div(&block).expect("factor divides denominator");
        // rem/den restricted to this block: N/block with N = rem * rest^{-1} mod block
        let (_, s, _) = extended_gcd(&rest, &block).expect("nonzero");
        let mut n = (&rem * &s).rem(&block);
        // factor-adic expansion: n = sum_j a_j factor^j
        let mut j = 0;
        while !n.is_zero() {
            let (q, a) = n.div_rem(factor);
            if !a.is_zero() {
                terms.push(PartialFractionTerm {
                    factor: factor.clone(),
                    order: mult - j,
                    numerator: a,
                });
            }
            n = q;
            j += 1;
        }
    }
    terms.sort_by(|a, b| {
        a.factor
            .degree()
            .cmp(&b.factor.degree())
            .then_with(|| a.factor.coeffs().cmp(b.factor.coeffs()))
            .then(a.order.cmp(&b.order))
    });
    PartialFractions { polynomial, terms }
}

/// `beta = g' + sum n_i f_i'/f_i`, so `exp(int beta) = e^g prod f_i^{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogDerivSplit {
    /// Antiderivative of the polynomial part, zero constant term.
    pub g: Poly,
    /// Monic squarefree pairwise coprime factors with nonzero integer
    /// exponents (the residues).
    pub factors: Vec<(Poly, i64)>,
}

impl LogDerivSplit {
    /// `g' + sum n_i f_i'/f_i`.
    pub fn reconstruct(&self) -> RatFun {
        self.factors
            .iter()
            .fold(RatFun::from_poly(self.g.derivative()), |acc, (f, n)| {
                let term = RatFun::new(
                    f.derivative().scale(&Rational::from_integer((*n).into())),
                    f.clone(),
                )
                .expect("nonzero factor");
                &acc + &term
            })
    }

    /// `prod f_i^{n_i}`.
    pub fn product(&self) -> RatFun {
        let mut num = Poly::one();
        let mut den = Poly::one();
        for (f, n) in &self.factors {
            let p = f.pow(n.unsigned_abs() as u32);
            if *n > 0 {
                num = &num * &p;
            } else {
                den = &den * &p;
            }
        }
        RatFun::new(num, den).expect("nonzero denominator")
    }
}

/// Reasons `exp(int beta)` falls outside `A(x) e^{g(x)}` with rational `A`
/// and polynomial `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Unsupported {
    /// A residue is not an integer. `residue` is `None` when it is not even
    /// rational; `factor` collects the poles carrying the residue.
    NonIntegerResidue {
        residue: Option<String>,
        factor: String,
    },
    HigherOrderPole {
        factor: String,
        order: usize,
    },
}

impl fmt::Display for Unsupported {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unsupported::NonIntegerResidue {
                residue: Some(r),
                factor,
            } => write!(f, "non-integer residue {r} at the roots of {factor}"),
            Unsupported::NonIntegerResidue {
                residue: None,
                factor,
            } => write!(f, "irrational residue at the roots of {factor}"),
            Unsupported::HigherOrderPole { factor, order } => {
                write!(f, "pole of order {order} at the roots of {factor}")
            }
        }
    }
}

pub fn logderiv_split(beta: &RatFun) -> Result<LogDerivSplit, Unsupported> {
    let pf = partial_fractions(beta);
    if let Some(t) = pf.terms.iter().find(|t| t.order >= 2) {
        return Err(Unsupported::HigherOrderPole {
            factor: t.factor.to_string(),
            order: pf
                .terms
                .iter()
                .filter(|u| u.factor == t.factor)
                .map(|u| u.order)
                .max()
                .unwrap_or(t.order),
        });
    }
    let g = pf.polynomial.integral();
    let den = beta.den();
    if den.is_one() {
        return Ok(LogDerivSplit {
            g,
            factors: Vec::new(),
        });
    }
    // every pole is simple; residues are the roots of Res_x(den, r - z den')
    let r = beta.num().rem(den);
    let dden = den.derivative();
    let a: Vec<Poly> = den
        .coeffs()
        .iter()
        .map(|c| Poly::constant(c.clone()))
        .collect();
    let b: Vec<Poly> = (0..=r.degree().unwrap_or(0).max(dden.degree().unwrap_or(0)))
        .map(|k| Poly::from_coeffs(vec![r.coeff(k), -dden.coeff(k)]))
        .collect();
    let rt = resultant_with_parameter(&a, &b);
    let mut factors = Vec::new();
    let mut covered = 0usize;
    for z in rational_roots(&rt) {
        let f = gcd_monic(den, &(&r - &dden.scale(&z)));
        if f.is_constant() {
            continue;
        }
        covered += f.degree().unwrap_or(0);
        if !z.is_integer() {
            return Err(Unsupported::NonIntegerResidue {
                residue: Some(crate::expr::format_rational(&z)),
                factor: f.to_string(),
            });
        }
        let n = z
            .to_integer()
            .to_i64()
            .ok_or_else(|| Unsupported::NonIntegerResidue {
                residue: Some(crate::expr::format_rational(&z)),
                factor: f.to_string(),
            })?;
        factors.push((f, n));
    }
    if covered < den.degree().unwrap_or(0) {
        let rest = factors.iter().fold(den.clone(), |acc, (f, _)| {
            acc.exact_div(f).expect("factor divides")
        });
        return Err(Unsupported::NonIntegerResidue {
            residue: None,
            factor: rest.to_string(),
        });
    }
    factors.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    Ok(LogDerivSplit { g, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn rf(n: &[i64], d: &[i64]) -> RatFun {
        RatFun::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn gcd_examples() {
        // gcd(x^2 + x, 2x^2) = x
        assert_eq!(
            gcd(&Poly::from_ints(&[0, 1, 1]), &Poly::from_ints(&[0, 0, 2])).unwrap(),
            Poly::x()
        );
        let p = Poly::from_ints(&[2, 4]);
        assert_eq!(gcd(&p, &Poly::zero()).unwrap(), p.monic());
        assert!(gcd(&Poly::from_ints(&[1, 1]), &Poly::from_ints(&[2, 1]))
            .unwrap()
            .is_one());
        assert_eq!(
            gcd(&Poly::zero(), &Poly::zero()),
            Err(AlgebraError::BothZero)
        );
    }

    #[test]
    fn extended_gcd_bezout() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[1, 2, 1]);
        let (g, s, t) = extended_gcd(&a, &b).unwrap();
        assert_eq!(g, Poly::from_ints(&[1, 1]));
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn squarefree_examples() {
        // (x+1)^3 x -> [(x,1), (x+1,3)]
        let p = &Poly::from_ints(&[1, 1]).pow(3) * &Poly::x();
        let s = squarefree_factorization(&p).unwrap();
        assert_eq!(
            s.factors,
            vec![(Poly::x(), 1), (Poly::from_ints(&[1, 1]), 3)]
        );
        assert_eq!(s.unit, rat(1, 1));
        let s = squarefree_factorization(&Poly::from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(s.factors, vec![(Poly::from_ints(&[1, 0, 1]), 1)]);
        let s = squarefree_factorization(&Poly::from_ints(&[5])).unwrap();
        assert!(s.factors.is_empty());
        assert_eq!(s.unit, rat(5, 1));
        assert_eq!(
            squarefree_factorization(&Poly::zero()),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn squarefree_reassembles() {
        let p = &(&Poly::from_ints(&[-2, 0, 3]).pow(2) * &Poly::from_ints(&[1, 1]).pow(4))
            .scale(&rat(-3, 7))
            * &Poly::from_ints(&[1, 0, 1]);
        let s = squarefree_factorization(&p).unwrap();
        assert_eq!(s.expand(), p);
        let mults: Vec<usize> = s.factors.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 2, 4]);
    }

    #[test]
    fn partial_fraction_examples() {
        let pf = partial_fractions(&rf(&[0, 2], &[1, 1]));
        assert_eq!(pf.polynomial, Poly::from_ints(&[2]));
        assert_eq!(
            pf.terms,
            vec![PartialFractionTerm {
                factor: Poly::from_ints(&[1, 1]),
                order: 1,
                numerator: Poly::from_ints(&[-2]),
            }]
        );

        let pf = partial_fractions(
            &RatFun::new(Poly::from_ints(&[12]), Poly::from_ints(&[1, 1]).pow(3)).unwrap(),
        );
        assert!(pf.polynomial.is_zero());
        assert_eq!(
            pf.terms,
            vec![PartialFractionTerm {
                factor: Poly::from_ints(&[1, 1]),
                order: 3,
                numerator: Poly::from_ints(&[12]),
            }]
        );

        let p = RatFun::from_poly(Poly::from_ints(&[1, 2, 3]));
        let pf = partial_fractions(&p);
        assert_eq!(pf.polynomial, Poly::from_ints(&[1, 2, 3]));
        assert!(pf.terms.is_empty());
    }

    #[test]
    fn partial_fractions_mixed() {
        // (x^4 + 1) / ((x+1)^2 (x^2+1) x)
        let den = &(&Poly::from_ints(&[1, 1]).pow(2) * &Poly::from_ints(&[1, 0, 1])) * &Poly::x();
        let f = RatFun::new(Poly::from_ints(&[1, 0, 0, 0, 1]), den).unwrap();
        let pf = partial_fractions(&f);
        assert_eq!(pf.recombine(), f);
        assert_eq!(pf.max_order(), 2);
    }

    #[test]
    fn logderiv_examples() {
        let s = logderiv_split(&rf(&[0, 2], &[1, 1])).unwrap();
        assert_eq!(s.g, Poly::from_ints(&[0, 2]));
        assert_eq!(s.factors, vec![(Poly::from_ints(&[1, 1]), -2)]);
        assert_eq!(s.reconstruct(), rf(&[0, 2], &[1, 1]));

        let s = logderiv_split(&RatFun::constant(rat(3, 1))).unwrap();
        assert_eq!(s.g, Poly::from_ints(&[0, 3]));
        assert!(s.factors.is_empty());

        let e = logderiv_split(&rf(&[1], &[0, 2])).unwrap_err();
        assert_eq!(
            e,
            Unsupported::NonIntegerResidue {
                residue: Some("1/2".into()),
                factor: "x".into()
            }
        );
    }

    #[test]
    fn logderiv_rejects_double_pole_and_irrational_residue() {
        let e = logderiv_split(&rf(&[1], &[1, 2, 1])).unwrap_err();
        assert!(matches!(e, Unsupported::HigherOrderPole { order: 2, .. }));
        // 1/(x^2 - 2): residues ±1/(2 sqrt 2)
        let e = logderiv_split(&rf(&[1], &[-2, 0, 1])).unwrap_err();
        assert!(matches!(
            e,
            Unsupported::NonIntegerResidue { residue: None, .. }
        ));
    }

    #[test]
    fn logderiv_irreducible_quadratic_with_integer_residue() {
        // 3 * (2x)/(x^2+1) - 1/(x-1) + 1
        let beta = &(&rf(&[0, 6], &[1, 0, 1]) - &rf(&[1], &[-1, 1])) + &RatFun::one();
        let s = logderiv_split(&beta).unwrap();
        assert_eq!(s.reconstruct(), beta);
        assert!(s.factors.contains(&(Poly::from_ints(&[1, 0, 1]), 3)));
        assert!(s.factors.contains(&(Poly::from_ints(&[-1, 1]), -1)));
    }
}
