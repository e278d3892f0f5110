//! Invariant straight lines with rational coefficients.
//!
//! A field with infinitely many invariant lines has them either all
//! parallel (`u Q - v P = 0`) or all through one point
//! (`(x - x0) Q - (y - y0) P = 0`); both conditions are linear and are
//! checked first. Otherwise the lines are finite in number and are found
//! family by family:
//!
//! * `y = -c`: `c` is a common root of the `x`-coefficients of `Q(x, y)`;
//! * `x = -c`: `c` is a common root of the `y`-coefficients of `P(x, y)`;
//! * `x + b y + c = 0`, `b != 0`: every `y`-coefficient of
//!   `P(-by-c, y) + b Q(-by-c, y)` vanishes. Candidate `b` are the rational
//!   roots of a resultant eliminating `c`; each is then solved for `c`.
//!
//! Real roots of the elimination polynomials that are not rational are
//! counted in [`LineSearch::Finite::unresolved`].

use num_traits::{One, Zero};
use serde::Serialize;

use super::{InvariantLine, PlanarField};
use crate::algebra::{
    gcd_monic, rat, rational_roots, real_root_count, resultant_with_parameter, solve_linear,
    LinearSolution, MPoly, Poly, Poly2, Rational,
};
use crate::expr::format_rational;

/// A one-parameter family of invariant lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineFamily {
    /// Every line with direction `(u, v)`.
    Parallel { direction: [String; 2] },
    /// Every line through `(x0, y0)`.
    Pencil { center: [String; 2] },
}

impl std::fmt::Display for LineFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LineFamily::Parallel { direction } => {
                write!(
                    f,
                    "every line with direction ({}, {}) is invariant",
                    direction[0], direction[1]
                )
            }
            LineFamily::Pencil { center } => {
                write!(
                    f,
                    "every line through ({}, {}) is invariant",
                    center[0], center[1]
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineSearch {
    Finite {
        lines: Vec<InvariantLine>,
        /// Real irrational candidates that could not be represented.
        unresolved: usize,
    },
    InfiniteFamily(LineFamily),
}

pub fn invariant_lines(field: &PlanarField) -> LineSearch {
    if let Some(fam) = parallel_family(field).or_else(|| pencil_family(field)) {
        return LineSearch::InfiniteFamily(fam);
    }
    let mut lines = Vec::new();
    let mut unresolved = 0;

    // y + c = 0
    let rows = field.q.swap_vars().coeffs_in_y();
    let (roots, extra) = common_roots(&rows);
    unresolved += extra;
    lines.extend(
        roots
            .into_iter()
            .map(|y0| InvariantLine::new(rat(0, 1), rat(1, 1), -y0).unwrap()),
    );

    // x + c = 0
    let rows = field.p.coeffs_in_y();
    let (roots, extra) = common_roots(&rows);
    unresolved += extra;
    lines.extend(
        roots
            .into_iter()
            .map(|x0| InvariantLine::new(rat(1, 1), rat(0, 1), -x0).unwrap()),
    );

    let (slanted, extra) = slanted_lines(field);
    unresolved += extra;
    lines.extend(slanted);

    lines.retain(|l| l.is_invariant_for(field));
    lines.sort();
    lines.dedup();
    LineSearch::Finite { lines, unresolved }
}

fn parallel_family(field: &PlanarField) -> Option<LineFamily> {
    // u Q = v P
    let (u, v) = if field.p.is_zero() {
        (Rational::zero(), Rational::one())
    } else if field.q.is_zero() {
        (Rational::one(), Rational::zero())
    } else {
        let (e, pc) = field.p.terms().next().map(|(e, c)| (*e, c.clone()))?;
        let lambda = field.q.coeff(&e) / pc;
        if field.q != field.p.scale(&lambda) {
            return None;
        }
        (Rational::one(), lambda)
    };
    Some(LineFamily::Parallel {
        direction: [format_rational(&u), format_rational(&v)],
    })
}

fn pencil_family(field: &PlanarField) -> Option<LineFamily> {
    // x Q - y P = x0 Q - y0 P
    let lhs = &(&Poly2::x() * &field.q) - &(&Poly2::y() * &field.p);
    let mut monomials: Vec<[u32; 2]> = lhs
        .terms()
        .chain(field.p.terms())
        .chain(field.q.terms())
        .map(|(e, _)| *e)
        .collect();
    monomials.sort();
    monomials.dedup();
    let matrix: Vec<Vec<Rational>> = monomials
        .iter()
        .map(|e| vec![field.q.coeff(e), -field.p.coeff(e)])
        .collect();
    let rhs: Vec<Rational> = monomials.iter().map(|e| lhs.coeff(e)).collect();
    match solve_linear(&matrix, &rhs, 2) {
        LinearSolution::Solved { values, .. } => Some(LineFamily::Pencil {
            center: [format_rational(&values[0]), format_rational(&values[1])],
        }),
        LinearSolution::Inconsistent { .. } => None,
    }
}

/// Rational common roots of univariate polynomials, plus the number of
/// real irrational common roots.
fn common_roots(polys: &[Poly]) -> (Vec<Rational>, usize) {
    let g = polys.iter().fold(Poly::zero(), |acc, p| gcd_monic(&acc, p));
    if g.is_zero() || g.is_constant() {
        return (Vec::new(), 0);
    }
    let roots = rational_roots(&g);
    let extra = real_root_count(&g).saturating_sub(roots.len());
    (roots, extra)
}

/// Polynomial in `c` with coefficients in `Q[b]`, index = power of `c`.
type CPoly = Vec<Poly>;

fn slanted_lines(field: &PlanarField) -> (Vec<InvariantLine>, usize) {
    let conditions = slanted_conditions(field);
    if conditions.is_empty() {
        return (Vec::new(), 0);
    }
    let Some(elim) = elimination_polynomial(&conditions) else {
        return (Vec::new(), conditions.len());
    };
    let b_roots: Vec<Rational> = rational_roots(&elim)
        .into_iter()
        .filter(|b| !b.is_zero())
        .collect();
    // b = 0 is the vertical family, handled elsewhere
    let zero_is_root = elim.eval(&Rational::zero()).is_zero();
    let mut unresolved = real_root_count(&elim)
        .saturating_sub(b_roots.len())
        .saturating_sub(usize::from(zero_is_root));
    let mut lines = Vec::new();
    for b in b_roots {
        let in_c: Vec<Poly> = conditions
            .iter()
            .map(|cond| Poly::from_coeffs(cond.iter().map(|coef| coef.eval(&b)).collect()))
            .collect();
        let (c_roots, extra) = common_roots(&in_c);
        unresolved += extra;
        for c in c_roots {
            lines.push(InvariantLine::new(rat(1, 1), b.clone(), c).unwrap());
        }
    }
    (lines, unresolved)
}

/// `y`-coefficients of `P(-by-c, y) + b Q(-by-c, y)`, each as a
/// polynomial in `c` over `Q[b]`. Identically-zero ones are dropped.
fn slanted_conditions(field: &PlanarField) -> Vec<CPoly> {
    // variables of MPoly<3>: (y, b, c)
    let y = MPoly::<3>::var(0);
    let b = MPoly::<3>::var(1);
    let c = MPoly::<3>::var(2);
    let x_img = -&(&(&b * &y) + &c);
    let imgs = [x_img, y];
    let flux = &field.p.compose(&imgs) + &(&b * &field.q.compose(&imgs));
    let mut by_y: std::collections::BTreeMap<u32, Vec<Vec<Rational>>> = Default::default();
    for (e, coef) in flux.terms() {
        let cpoly = by_y.entry(e[0]).or_default();
        let (kb, kc) = (e[1] as usize, e[2] as usize);
        if cpoly.len() <= kc {
            cpoly.resize(kc + 1, Vec::new());
        }
        let bpoly = &mut cpoly[kc];
        if bpoly.len() <= kb {
            bpoly.resize(kb + 1, Rational::zero());
        }
        bpoly[kb] += coef;
    }
    by_y.into_values()
        .map(|rows| trim(rows.into_iter().map(Poly::from_coeffs).collect()))
        .filter(|p: &CPoly| !p.is_empty())
        .collect()
}

fn trim(mut p: CPoly) -> CPoly {
    while p.last().is_some_and(Poly::is_zero) {
        p.pop();
    }
    p
}

/// A nonzero polynomial in `b` vanishing at every common solution.
fn elimination_polynomial(conditions: &[CPoly]) -> Option<Poly> {
    if let Some(c_free) = conditions.iter().find(|p| p.len() == 1) {
        return Some(c_free[0].clone());
    }
    if conditions.len() < 2 {
        return None;
    }
    let combo = |weights: &dyn Fn(usize) -> i64| -> CPoly {
        let len = conditions.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![Poly::zero(); len];
        for (k, cond) in conditions.iter().enumerate() {
            let w = Rational::from_integer(weights(k).into());
            for (j, coef) in cond.iter().enumerate() {
                out[j] = &out[j] + &coef.scale(&w);
            }
        }
        trim(out)
    };
    let mut attempts: Vec<(CPoly, CPoly)> = Vec::new();
    for i in 0..conditions.len() {
        for j in i + 1..conditions.len() {
            attempts.push((conditions[i].clone(), conditions[j].clone()));
        }
    }
    for s in 1..=4i64 {
        attempts.push((
            combo(&|k| 1 + s * k as i64),
            combo(&|k| (k as i64 + s).pow(2) + 1),
        ));
    }
    for (a, b) in attempts {
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let r = resultant_with_parameter(&a, &b);
        if !r.is_zero() {
            return Some(r);
        }
    }
    None
}
