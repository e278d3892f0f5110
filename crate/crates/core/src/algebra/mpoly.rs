//! Sparse multivariate polynomials with a fixed number of variables.
//!
//! `Poly2` (variables x, y) carries potentials and planar fields; `Poly4`
//! (x, y, p1, p2) carries cotangent lifts.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use super::{rat, Poly, Rational};

/// Sparse polynomial in `N` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly<const N: usize> {
    terms: BTreeMap<[u32; N], Rational>,
}

pub type Poly2 = MPoly<2>;
pub type Poly4 = MPoly<4>;

/// Variable selector for bivariate polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
        }
    }
}

impl<const N: usize> Default for MPoly<N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize> MPoly<N> {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, [0; N])
    }

    pub fn term(c: Rational, exps: [u32; N]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MPoly { terms }
    }

    /// The `i`-th coordinate function.
    pub fn var(i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::term(Rational::one(), e)
    }

    pub fn from_terms<I: IntoIterator<Item = ([u32; N], Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exps: [u32; N], c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32; N]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// Total degree, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[i] -= 1;
            out.add_term(e2, c * rat(e[i] as i64, 1));
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes polynomial images for every variable.
    pub fn compose<const M: usize>(&self, images: &[MPoly<M>; N]) -> MPoly<M> {
        let mut powers: Vec<Vec<MPoly<M>>> = vec![vec![MPoly::one()]; N];
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for i in 0..N {
                let k = e[i] as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k];
            }
            out = &out + &t;
        }
        out
    }

    pub fn eval(&self, point: &[Rational; N]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..N {
                for _ in 0..e[i] {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64; N]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for i in 0..N {
                    t *= point[i].powi(e[i] as i32);
                }
                t
            })
            .sum()
    }

    /// Terms in descending graded-lexicographic order (variable 0 first).
    pub fn terms_grlex_desc(&self) -> Vec<([u32; N], Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

impl MPoly<2> {
    pub fn x() -> Self {
        Self::var(0)
    }

    pub fn y() -> Self {
        Self::var(1)
    }

    pub fn derivative(&self, var: Var) -> Self {
        self.partial(var.index())
    }

    /// Embeds a univariate polynomial in `x`.
    pub fn from_poly_x(p: &Poly) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| ([k as u32, 0], c.clone())),
        )
    }

    /// Exact univariate restriction `p(x, value)`.
    pub fn substitute_y(&self, value: &Rational) -> Poly {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (e, c) in &self.terms {
            let k = e[0] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] += c * pow_rat(value, e[1]);
        }
        Poly::from_coeffs(coeffs)
    }

    /// Exact univariate restriction `p(value, y)` as a polynomial in `y`.
    pub fn substitute_x(&self, value: &Rational) -> Poly {
        self.swap_vars().substitute_y(value)
    }

    pub fn swap_vars(&self) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[1], e[0]], c.clone()))
                .collect(),
        }
    }

    /// Coefficients of `y^k` as polynomials in `x`, index `k`.
    pub fn coeffs_in_y(&self) -> Vec<Poly> {
        let dy = self.degree_in(1).map_or(0, |d| d as usize + 1);
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); dy];
        for (e, c) in &self.terms {
            let row = &mut rows[e[1] as usize];
            let k = e[0] as usize;
            if row.len() <= k {
                row.resize(k + 1, Rational::zero());
            }
            row[k] += c;
        }
        rows.into_iter().map(Poly::from_coeffs).collect()
    }
}

fn pow_rat(v: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= v;
    }
    acc
}

impl<const N: usize> fmt::Debug for MPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl<const N: usize> fmt::Display for MPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = match N {
            2 => vec!["x".into(), "y".into()],
            4 => vec!["x".into(), "y".into(), "p1".into(), "p2".into()],
            _ => (0..N).map(|i| format!("v{i}")).collect(),
        };
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&crate::expr::format_terms(&self.terms_grlex_desc(), &names))
    }
}

impl<const N: usize> Add for &MPoly<N> {
    type Output = MPoly<N>;
    fn add(self, rhs: &MPoly<N>) -> MPoly<N> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<const N: usize> Sub for &MPoly<N> {
    type Output = MPoly<N>;
    fn sub(self, rhs: &MPoly<N>) -> MPoly<N> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl<const N: usize> Neg for &MPoly<N> {
    type Output = MPoly<N>;
    fn neg(self) -> MPoly<N> {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl<const N: usize> Mul for &MPoly<N> {
    type Output = MPoly<N>;
    fn mul(self, rhs: &MPoly<N>) -> MPoly<N> {
        let mut out = MPoly::zero();
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                let mut e = [0; N];
                for i in 0..N {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(e, a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<const N: usize> $tr for MPoly<N> {
            type Output = MPoly<N>;
            fn $m(self, rhs: MPoly<N>) -> MPoly<N> {
                (&self).$m(&rhs)
            }
        }
        impl<const N: usize> $tr<&MPoly<N>> for MPoly<N> {
            type Output = MPoly<N>;
            fn $m(self, rhs: &MPoly<N>) -> MPoly<N> {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<const N: usize> Neg for MPoly<N> {
    type Output = MPoly<N>;
    fn neg(self) -> MPoly<N> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_potential() -> Poly2 {
        // x^3/3 + x^2/2 + (x+y)^2 y^2 + y^4/4
        let x = Poly2::x();
        let y = Poly2::y();
        let s = &x + &y;
        &(&(&x.pow(3).scale(&rat(1, 3)) + &x.pow(2).scale(&rat(1, 2))) + &(&s.pow(2) * &y.pow(2)))
            + &y.pow(4).scale(&rat(1, 4))
    }

    #[test]
    fn example_partials() {
        let f = example_potential();
        let x = Poly2::x();
        let y = Poly2::y();
        let s = &x + &y;
        let two = Poly2::constant(rat(2, 1));
        // x^2 + x + 2(x+y)y^2
        let p = &(&x.pow(2) + &x) + &(&(&two * &s) * &y.pow(2));
        // 2(x+y)y^2 + 2(x+y)^2 y + y^3
        let q = &(&(&(&two * &s) * &y.pow(2)) + &(&(&two * &s.pow(2)) * &y)) + &y.pow(3);
        assert_eq!(f.derivative(Var::X), p);
        assert_eq!(f.derivative(Var::Y), q);
        assert!(Poly2::constant(rat(3, 1)).derivative(Var::X).is_zero());
    }

    #[test]
    fn restriction_to_axis() {
        let f = example_potential();
        let p = f.derivative(Var::X);
        let q = f.derivative(Var::Y);
        assert!(q.substitute_y(&rat(0, 1)).is_zero());
        assert_eq!(p.substitute_y(&rat(0, 1)), Poly::from_ints(&[0, 1, 1]));
        assert!(Poly2::y().substitute_y(&rat(0, 1)).is_zero());
    }

    #[test]
    fn compose_translation() {
        let p = &Poly2::x() * &Poly2::y();
        let shifted = p.compose(&[Poly2::x(), &Poly2::y() + &Poly2::one()]);
        assert_eq!(shifted, &(&Poly2::x() * &Poly2::y()) + &Poly2::x());
    }

    #[test]
    fn coeffs_in_y_layout() {
        let p = &(&Poly2::x() * &Poly2::y().pow(2)) + &Poly2::constant(rat(3, 1));
        let rows = p.coeffs_in_y();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], Poly::from_ints(&[3]));
        assert!(rows[1].is_zero());
        assert_eq!(rows[2], Poly::x());
    }
}
