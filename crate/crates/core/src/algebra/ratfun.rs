//! Normalized univariate rational functions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{gcd_monic, AlgebraError, Poly, Rational};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
///
/// Every constructor normalizes, so structural equality is equality of
/// rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        let g = gcd_monic(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        RatFun::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        RatFun::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.is_polynomial() && self.num.is_constant()
    }

    /// `true` when the invariants hold; every value built through this API
    /// satisfies them.
    pub fn is_normalized(&self) -> bool {
        !self.den.is_zero()
            && self.den.is_monic()
            && (self.num.is_zero() && self.den.is_one() || gcd_monic(&self.num, &self.den).is_one())
    }

    pub fn recip(&self) -> Result<RatFun, AlgebraError> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn derivative(&self) -> RatFun {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn pow(&self, e: i32) -> Result<RatFun, AlgebraError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFun {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn scale(&self, c: &Rational) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format_ratfun(self))
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFun::new(n, &self.den * &rhs.den).unwrap()
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    /// Panics on division by the zero function.
    fn div(self, rhs: &RatFun) -> RatFun {
        assert!(!rhs.is_zero(), "rational function division by zero");
        RatFun::new(&self.num * &rhs.den, &self.den * &rhs.num).unwrap()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn normalizes_on_construction() {
        // (2x^2 + 2x) / (4x) = (x + 1) / 2 ... as polynomial (1/2)x + 1/2
        let r = RatFun::new(Poly::from_ints(&[0, 2, 2]), Poly::from_ints(&[0, 4])).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &Poly::from_coeffs(vec![rat(1, 2), rat(1, 2)]));
        let s = RatFun::new(Poly::from_ints(&[3]), Poly::from_ints(&[2, 2])).unwrap();
        assert_eq!(s.den(), &Poly::from_ints(&[1, 1]));
        assert_eq!(s.num(), &Poly::constant(rat(3, 2)));
        assert!(RatFun::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn quotient_rule() {
        // d/dx 1/(x+1) = -1/(x+1)^2
        let r = RatFun::new(Poly::one(), Poly::from_ints(&[1, 1])).unwrap();
        let expect = RatFun::new(Poly::from_ints(&[-1]), Poly::from_ints(&[1, 2, 1])).unwrap();
        assert_eq!(r.derivative(), expect);
    }

    #[test]
    fn field_ops() {
        let a = RatFun::new(Poly::from_ints(&[0, 2]), Poly::from_ints(&[1, 1])).unwrap();
        let b = RatFun::new(Poly::from_ints(&[2]), Poly::from_ints(&[1, 1])).unwrap();
        assert_eq!(&a + &b, RatFun::constant(rat(2, 1)));
        assert_eq!(&(&a / &b) * &b, a);
        assert!((&a - &a).is_zero());
    }
}
