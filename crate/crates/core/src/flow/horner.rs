//! Floating-point evaluation of bivariate polynomials by nested Horner
//! schemes, compiled once from exact coefficients.

use num_traits::ToPrimitive;

use crate::algebra::{Poly2, Var};

/// `p(x, y) = sum_k y^k c_k(x)`, each `c_k` stored low to high.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    rows: Vec<Vec<f64>>,
}

impl CompiledPoly {
    pub fn new(p: &Poly2) -> Self {
        let rows = p
            .coeffs_in_y()
            .iter()
            .map(|c| {
                c.coeffs()
                    .iter()
                    .map(|a| a.to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect();
        CompiledPoly { rows }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.rows.iter().rev() {
            let mut c = 0.0;
            for a in row.iter().rev() {
                c = c * x + a;
            }
            acc = acc * y + c;
        }
        acc
    }
}

/// `F` together with `F_x` and `F_y`.
#[derive(Clone, Debug)]
pub struct CompiledGradient {
    pub f: CompiledPoly,
    pub fx: CompiledPoly,
    pub fy: CompiledPoly,
}

impl CompiledGradient {
    pub fn new(potential: &Poly2) -> Self {
        CompiledGradient {
            f: CompiledPoly::new(potential),
            fx: CompiledPoly::new(&potential.derivative(Var::X)),
            fy: CompiledPoly::new(&potential.derivative(Var::Y)),
        }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.f.eval(x, y)
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        [self.fx.eval(x, y), self.fy.eval(x, y)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;

    #[test]
    fn matches_term_by_term_evaluation() {
        let p = parse_polynomial("1/3*x^3+1/2*x^2+(x+y)^2*y^2+1/4*y^4-7").unwrap();
        let c = CompiledPoly::new(&p);
        for &(x, y) in &[(0.0, 0.0), (0.5, -1.25), (-3.0, 2.0), (1e3, 1e-3)] {
            let exact = p.eval_f64(&[x, y]);
            assert!((c.eval(x, y) - exact).abs() <= 1e-12 * exact.abs().max(1.0));
        }
        assert_eq!(CompiledPoly::new(&Poly2::zero()).eval(1.0, 2.0), 0.0);
    }
}
