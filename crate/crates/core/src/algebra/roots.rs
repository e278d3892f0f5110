//! Exact rational root extraction.
//!
//! Real roots are isolated with a Sturm sequence and refined by exact
//! bisection. A rational root `p/q` of a primitive integer polynomial has
//! `q | lc`, so once an isolating interval is narrower than `1/(2 |lc|)` the
//! only candidate is `round(lc * mid) / lc`, which is then checked exactly.

use num_traits::{One, Signed, Zero};

use super::{gcd_monic, rat, Poly, Rational};

/// Distinct rational roots in ascending order.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sqf = squarefree_part(p).primitive_integer();
    let mut roots = Vec::new();
    let mut f = sqf;
    // peel x = 0 first so the Cauchy bound stays honest
    if f.coeff(0).is_zero() {
        roots.push(Rational::zero());
        f = f.exact_div(&Poly::x()).expect("x divides");
    }
    // cheap linear factors
    if f.degree() == Some(1) {
        roots.push(-f.coeff(0) / f.coeff(1));
        roots.sort();
        return roots;
    }
    if f.degree().unwrap_or(0) == 0 {
        roots.sort();
        return roots;
    }
    let lc = f.leading_coeff();
    let sturm = SturmChain::new(&f);
    let bound = cauchy_bound(&f);
    let target_width = (Rational::from_integer(2.into()) * lc.abs()).recip();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sturm.count(&lo) - sturm.count(&hi);
        if count == 0 {
            continue;
        }
        if count > 1 || &hi - &lo >= target_width {
            let mid = (&lo + &hi) / rat(2, 1);
            if count == 1 {
                // single root: keep only the half containing it
                if sturm.count(&lo) - sturm.count(&mid) == 1 {
                    stack.push((lo, mid));
                } else {
                    stack.push((mid, hi));
                }
            } else {
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
            continue;
        }
        let mid = (&lo + &hi) / rat(2, 1);
        let scaled = (&mid * &lc).round();
        let candidate = scaled / &lc;
        if candidate > lo && candidate <= hi && f.eval(&candidate).is_zero() {
            roots.push(candidate);
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Number of distinct real roots.
pub fn real_root_count(p: &Poly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let f = squarefree_part(p);
    let sturm = SturmChain::new(&f);
    let b = cauchy_bound(&f);
    (sturm.count(&-b.clone()) - sturm.count(&b)) as usize
}

fn squarefree_part(p: &Poly) -> Poly {
    let g = gcd_monic(p, &p.derivative());
    p.exact_div(&g).expect("gcd divides")
}

/// All real roots lie strictly inside `(-B, B)`.
fn cauchy_bound(p: &Poly) -> Rational {
    let lc = p.leading_coeff().abs();
    let n = p.degree().unwrap_or(0);
    let mut m = Rational::zero();
    for c in &p.coeffs()[..n] {
        let v = c.abs() / &lc;
        if v > m {
            m = v;
        }
    }
    m + Rational::one() + Rational::one()
}

struct SturmChain {
    seq: Vec<Poly>,
}

impl SturmChain {
    fn new(f: &Poly) -> Self {
        let mut seq = vec![f.clone(), f.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            // positive rescaling keeps the sign pattern
            let s = r.leading_coeff().abs().recip();
            seq.push(-&r.scale(&s));
        }
        SturmChain { seq }
    }

    /// Sign changes at `x`; zeros skipped.
    fn count(&self, x: &Rational) -> i64 {
        let mut changes = 0;
        let mut last: Option<bool> = None;
        for p in &self.seq {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let pos = v.is_positive();
            if let Some(l) = last {
                if l != pos {
                    changes += 1;
                }
            }
            last = Some(pos);
        }
        changes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(roots: &[Rational]) -> Poly {
        roots
            .iter()
            .fold(Poly::one(), |acc, r| &acc * &Poly::linear_root(r))
    }

    #[test]
    fn finds_rational_roots_only() {
        // (x - 1/3)(x + 2)^2 (x^2 - 2)
        let p = &from_roots(&[rat(1, 3), rat(-2, 1), rat(-2, 1)]) * &Poly::from_ints(&[-2, 0, 1]);
        assert_eq!(rational_roots(&p), vec![rat(-2, 1), rat(1, 3)]);
        assert_eq!(real_root_count(&p), 4);
    }

    #[test]
    fn zero_root_and_close_roots() {
        let roots = vec![rat(0, 1), rat(1000, 1001), rat(999, 1000), rat(-7, 3)];
        let p = from_roots(&roots);
        let mut expect = roots.clone();
        expect.sort();
        assert_eq!(rational_roots(&p), expect);
    }

    #[test]
    fn constants_have_no_roots() {
        assert!(rational_roots(&Poly::from_ints(&[5])).is_empty());
        assert!(rational_roots(&Poly::from_ints(&[1, 0, 1])).is_empty());
        assert_eq!(real_root_count(&Poly::from_ints(&[1, 0, 1])), 0);
    }
}
