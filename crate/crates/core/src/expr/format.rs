//! Canonical text.
//!
//! Terms are printed in descending graded-lexicographic order with `x`
//! before `y`; unit coefficients are elided and multiplication is always
//! explicit. Denominators of rational functions are printed in squarefree
//! factored form, e.g. `1/(x+1)^2`.

use num_traits::{One, Signed, Zero};

use crate::algebra::{squarefree_factorization, MPoly, Poly, Poly2, RatFun, Rational};

/// Values with a canonical textual form.
pub trait Canonical {
    fn canonical(&self) -> String;
}

pub fn format_canonical<T: Canonical + ?Sized>(value: &T) -> String {
    value.canonical()
}

impl Canonical for Poly {
    fn canonical(&self) -> String {
        format_poly(self)
    }
}

impl<const N: usize> Canonical for MPoly<N> {
    fn canonical(&self) -> String {
        self.to_string()
    }
}

impl Canonical for RatFun {
    fn canonical(&self) -> String {
        format_ratfun(self)
    }
}

impl Canonical for Rational {
    fn canonical(&self) -> String {
        format_rational(self)
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Joins `(exponents, coefficient)` terms in the given order.
pub fn format_terms<const N: usize>(terms: &[([u32; N], Rational)], names: &[&str]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if neg {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        let mag = c.abs();
        let mono: Vec<String> = e
            .iter()
            .zip(names)
            .filter(|(k, _)| **k > 0)
            .map(|(k, n)| {
                if *k == 1 {
                    n.to_string()
                } else {
                    format!("{n}^{k}")
                }
            })
            .collect();
        if mono.is_empty() {
            out.push_str(&format_rational(&mag));
        } else {
            if !mag.is_one() {
                out.push_str(&format_rational(&mag));
                out.push('*');
            }
            out.push_str(&mono.join("*"));
        }
    }
    out
}

pub fn format_poly(p: &Poly) -> String {
    let terms: Vec<([u32; 1], Rational)> = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| ([k as u32], c.clone()))
        .collect();
    format_terms(&terms, &["x"])
}

pub fn format_poly2(p: &Poly2) -> String {
    format_terms(&p.terms_grlex_desc(), &["x", "y"])
}

pub fn format_ratfun(r: &RatFun) -> String {
    if r.is_polynomial() {
        return format_poly(r.num());
    }
    let num = r.num();
    let num_txt = format_poly(num);
    let num_txt = if num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
        format!("({num_txt})")
    } else {
        num_txt
    };
    let sqf = squarefree_factorization(r.den()).expect("nonzero denominator");
    let parts: Vec<String> = sqf
        .factors
        .iter()
        .map(|(f, m)| {
            let single_term = f.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
            let base = if single_term {
                format_poly(f)
            } else {
                format!("({})", format_poly(f))
            };
            if *m == 1 {
                base
            } else {
                format!("{base}^{m}")
            }
        })
        .collect();
    let den_txt = if parts.len() == 1 {
        parts.into_iter().next().unwrap()
    } else {
        format!("({})", parts.join("*"))
    };
    format!("{num_txt}/{den_txt}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::expr::{parse_polynomial, parse_ratfun};

    #[test]
    fn zero_prints_as_zero() {
        assert_eq!(format_canonical(&Poly2::zero()), "0");
        assert_eq!(format_canonical(&Poly::zero()), "0");
    }

    #[test]
    fn ordering_convention() {
        let p = parse_polynomial("2*x*y^3 + x^2*y^2").unwrap();
        assert_eq!(format_canonical(&p), "x^2*y^2+2*x*y^3");
        let f = parse_polynomial("1/3*x^3+1/2*x^2+(x+y)^2*y^2+1/4*y^4").unwrap();
        assert_eq!(
            format_canonical(&f),
            "x^2*y^2+2*x*y^3+5/4*y^4+1/3*x^3+1/2*x^2"
        );
    }

    #[test]
    fn ratfun_forms() {
        assert_eq!(
            format_canonical(&parse_ratfun("2x/(x+1)").unwrap()),
            "2*x/(x+1)"
        );
        assert_eq!(
            format_canonical(&parse_ratfun("12/(x+1)").unwrap()),
            "12/(x+1)"
        );
        assert_eq!(
            format_canonical(&parse_ratfun("1/(x^2+2x+1)").unwrap()),
            "1/(x+1)^2"
        );
        assert_eq!(
            format_canonical(&parse_ratfun("-1/(2x)").unwrap()),
            "-1/2/x"
        );
        let r = parse_ratfun("(x-3)/((x+1)^2*x*(x^2+1))").unwrap();
        let txt = format_canonical(&r);
        assert_eq!(txt, "(x-3)/((x^3+x)*(x+1)^2)");
        assert_eq!(parse_ratfun(&txt).unwrap(), r);
    }

    #[test]
    fn negative_leading_term_round_trips() {
        let p = Poly2::from_terms([([1, 0], rat(-1, 3)), ([0, 0], rat(2, 1))]);
        let txt = format_canonical(&p);
        assert_eq!(txt, "-1/3*x+2");
        assert_eq!(parse_polynomial(&txt).unwrap(), p);
    }
}
