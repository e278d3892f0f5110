//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::FlowError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub const DEFAULT_MAX_SUBDIVISIONS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Piece {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// `int_a^b f` with estimated absolute error below `tol`.
pub fn quadrature(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult, FlowError> {
    quadrature_with_limit(f, a, b, tol, DEFAULT_MAX_SUBDIVISIONS)
}

pub fn quadrature_with_limit(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_subdivisions: usize,
) -> Result<QuadratureResult, FlowError> {
    if !a.is_finite() || !b.is_finite() || a >= b || tol.is_nan() || tol <= 0.0 {
        return Err(FlowError::InvalidInterval { a, b });
    }
    let mut heap = BinaryHeap::new();
    heap.push(gk15(f, a, b));
    let mut subdivisions = 0;
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if !value.is_finite() {
            return Err(FlowError::NonFinite);
        }
        if error < tol {
            return Ok(QuadratureResult {
                value,
                error,
                subdivisions,
            });
        }
        if subdivisions >= max_subdivisions {
            return Err(FlowError::MaxSubdivisions { value, error });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(gk15(f, worst.a, mid));
        heap.push(gk15(f, mid, worst.b));
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_integrals() {
        assert_eq!(quadrature(&|_| 0.0, 0.0, 1.0, 1e-12).unwrap().value, 0.0);
        let r = quadrature(&|x| 2.0 * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = quadrature(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand_subdivides() {
        // int_{-1}^{1} 1/(1e-4 + x^2) = 2e2 atan(1e2)
        let r = quadrature(&|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-9).unwrap();
        assert!((r.value - 200.0 * 100f64.atan()).abs() < 1e-8);
        assert!(r.subdivisions > 0);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            quadrature(&|x| x, 1.0, 0.0, 1e-9),
            Err(FlowError::InvalidInterval { .. })
        ));
        assert!(matches!(
            quadrature_with_limit(&|x: f64| x.abs().sqrt().recip(), -1.0, 1.0, 1e-14, 5),
            Err(FlowError::MaxSubdivisions { .. }) | Err(FlowError::NonFinite)
        ));
    }
}
