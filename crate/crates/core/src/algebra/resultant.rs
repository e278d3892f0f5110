//! Sylvester resultants, including resultants of polynomials whose
//! coefficients depend polynomially on a parameter.

use num_traits::Zero;

use super::{determinant, rat, Poly, Rational};

/// Resultant of two univariate polynomials over the rationals.
pub fn resultant(a: &Poly, b: &Poly) -> Rational {
    sylvester_det(a.coeffs(), b.coeffs())
}

fn sylvester_det(a: &[Rational], b: &[Rational]) -> Rational {
    if a.is_empty() || b.is_empty() {
        return Rational::zero();
    }
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rational::zero(); size];
        for (k, c) in a.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rational::zero(); size];
        for (k, c) in b.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    determinant(&rows)
}

/// Resultant with respect to the main variable of `a = sum a[k] X^k` and
/// `b = sum b[k] X^k`, where each coefficient is a polynomial in a
/// parameter. Returns a polynomial in the parameter.
///
/// Computed by evaluation at enough integer points followed by Newton
/// interpolation. Degrees are the formal lengths of `a` and `b` after
/// dropping identically-zero top coefficients.
pub fn resultant_with_parameter(a: &[Poly], b: &[Poly]) -> Poly {
    let a = trim(a);
    let b = trim(b);
    if a.is_empty() || b.is_empty() {
        return Poly::zero();
    }
    let m = a.len() - 1;
    let n = b.len() - 1;
    let da = a.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let db = b.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let bound = m * db + n * da;
    let points: Vec<Rational> = (0..=bound as i64).map(|k| rat(k, 1)).collect();
    let values: Vec<Rational> = points
        .iter()
        .map(|t| {
            let av: Vec<Rational> = a.iter().map(|c| c.eval(t)).collect();
            let bv: Vec<Rational> = b.iter().map(|c| c.eval(t)).collect();
            sylvester_det_formal(&av, &bv)
        })
        .collect();
    newton_interpolate(&points, &values)
}

fn trim(p: &[Poly]) -> &[Poly] {
    let mut end = p.len();
    while end > 0 && p[end - 1].is_zero() {
        end -= 1;
    }
    &p[..end]
}

// Like `sylvester_det` but keeps the formal degree even when the top
// coefficient vanishes at the evaluation point.
fn sylvester_det_formal(a: &[Rational], b: &[Rational]) -> Rational {
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 && n == 0 {
        return Rational::from_integer(1.into());
    }
    sylvester_det(a, b)
}

fn newton_interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    let n = xs.len();
    let mut coef: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = Poly::zero();
    for i in (0..n).rev() {
        acc = &(&acc * &Poly::linear_root(&xs[i])) + &Poly::constant(coef[i].clone());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate_resultant_detects_common_root() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[1, 1]);
        assert!(resultant(&a, &b).is_zero());
        // Res(x^2 + 1, x - 2) = 5
        assert_eq!(
            resultant(&Poly::from_ints(&[1, 0, 1]), &Poly::from_ints(&[-2, 1])),
            rat(5, 1)
        );
    }

    #[test]
    fn parametric_resultant_matches_pointwise() {
        // a = X^2 - t, b = X - 1  ->  Res = 1 - t
        let a = vec![Poly::from_ints(&[0, -1]), Poly::zero(), Poly::one()];
        let b = vec![Poly::from_ints(&[-1]), Poly::one()];
        assert_eq!(resultant_with_parameter(&a, &b), Poly::from_ints(&[1, -1]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = Poly::from_ints(&[3, -1, 0, 2]);
        let xs: Vec<Rational> = (0..4).map(|k| rat(k, 1)).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(newton_interpolate(&xs, &ys), p);
    }
}
