//! Shared helpers for integration tests: random generators and a
//! brute-force ansatz oracle for the Risch equation that does not reuse the
//! library's solver.

#![allow(dead_code)]

use gradflow::algebra::{gcd, MPoly, Poly, Poly2, RatFun, Rational};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE_F: &str = "1/3*x^3+1/2*x^2+(x+y)^2*y^2+1/4*y^4";

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rank by plain Gauss-Jordan elimination over the rationals.
pub fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (v, p) in row[c..cols].iter_mut().zip(&pivot[c..cols]) {
                    *v -= &f * p;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Does `y = N / S^k` (S the squarefree part of the denominator of `rhs`)
/// solve `y' + g' y = rhs` for some `k <= max_k`, `deg N <= max_deg`?
pub fn oracle_has_solution(gprime: &Poly, rhs: &RatFun, max_k: u32, max_deg: usize) -> bool {
    let den = rhs.den();
    let s = if den.is_constant() {
        Poly::one()
    } else {
        den.exact_div(&gcd(den, &den.derivative()).unwrap())
            .unwrap()
    };
    for k in 0..=max_k {
        let d = s.pow(k);
        let dd = d.derivative();
        // (N' D - N D' + g' N D) den = num D^2
        let target = &(rhs.num() * &d) * &d;
        for deg in 0..=max_deg {
            let cols: Vec<Poly> = (0..=deg)
                .map(|j| {
                    let xj = Poly::monomial(rat(1), j);
                    let lhs = &(&(&xj.derivative() * &d) - &(&xj * &dd)) + &(&(gprime * &xj) * &d);
                    &lhs * den
                })
                .collect();
            let n_rows = cols
                .iter()
                .map(|c| c.coeffs().len())
                .chain([target.coeffs().len()])
                .max()
                .unwrap();
            let a: Vec<Vec<Rational>> = (0..n_rows)
                .map(|i| cols.iter().map(|c| c.coeff(i)).collect())
                .collect();
            let ab: Vec<Vec<Rational>> = a
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut r = row.clone();
                    r.push(target.coeff(i));
                    r
                })
                .collect();
            if rank(a) == rank(ab) {
                return true;
            }
        }
    }
    false
}

pub fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize, bound: i64) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    Poly::from_coeffs(
        (0..=deg)
            .map(|_| rat(rng.gen_range(-bound..=bound)))
            .collect(),
    )
}

/// Polynomial of exact degree `deg`.
pub fn random_poly_exact(rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> Poly {
    let mut c: Vec<Rational> = (0..deg)
        .map(|_| rat(rng.gen_range(-bound..=bound)))
        .collect();
    let mut lead = 0;
    while lead == 0 {
        lead = rng.gen_range(-bound..=bound);
    }
    c.push(rat(lead));
    Poly::from_coeffs(c)
}

pub fn random_ratfun(rng: &mut ChaCha8Rng, max_deg: usize, bound: i64) -> RatFun {
    let num = random_poly(rng, max_deg, bound);
    let den_deg = rng.gen_range(0..=max_deg);
    let den = random_poly_exact(rng, den_deg, bound);
    RatFun::new(num, den).unwrap()
}

pub fn random_poly2(rng: &mut ChaCha8Rng, max_deg: u32, bound: i64) -> Poly2 {
    let mut p = MPoly::zero();
    for i in 0..=max_deg {
        for j in 0..=(max_deg - i) {
            if rng.gen_bool(0.5) {
                let num = rng.gen_range(-bound..=bound);
                let den = rng.gen_range(1..=4);
                p.add_term([i, j], Rational::new(num.into(), den.into()));
            }
        }
    }
    p
}
