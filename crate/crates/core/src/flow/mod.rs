//! Gradient-flow integration `(x, y)' = +/- grad F` with the Dormand-Prince
//! 5(4) pair and its continuous extension, plus the exponential integral
//! and adaptive quadrature used for numeric checks.

mod horner;
mod quadrature;
mod special;

pub use horner::{CompiledGradient, CompiledPoly};
pub use quadrature::{
    quadrature, quadrature_with_limit, QuadratureResult, DEFAULT_MAX_SUBDIVISIONS,
};
pub use special::exp_integral_ei;

use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::Poly2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("step size underflow at t = {t}, last good state ({x}, {y})")]
    StepSizeUnderflow { t: f64, x: f64, y: f64 },
    #[error("step limit reached at t = {t}, last good state ({x}, {y})")]
    StepLimit { t: f64, x: f64, y: f64 },
    #[error("invalid flow options: {0}")]
    InvalidOptions(String),
    #[error("start point is not finite")]
    NonFiniteStart,
    #[error("exponential integral requires z > 0, got {z}")]
    DomainError { z: f64 },
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("integrand is not finite")]
    NonFinite,
    #[error("subdivision limit reached; estimate {value} with error {error}")]
    MaxSubdivisions { value: f64, error: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ascent,
    Descent,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Ascent => 1.0,
            Direction::Descent => -1.0,
        }
    }
}

impl FromStr for Direction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ascent" => Ok(Direction::Ascent),
            "descent" => Ok(Direction::Descent),
            other => Err(format!(
                "direction must be ascent or descent, got {other:?}"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Stop once `|grad F|` falls below this.
    pub critical_threshold: f64,
    /// Stop once `max(|x|, |y|)` exceeds this.
    pub box_half_width: f64,
    pub t_max: f64,
    pub max_steps: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            rtol: 1e-9,
            atol: 1e-12,
            critical_threshold: 1e-10,
            box_half_width: 1e6,
            t_max: 10.0,
            max_steps: 1_000_000,
        }
    }
}

impl FlowOptions {
    pub fn validate(&self) -> Result<(), FlowError> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !(positive(self.rtol) && positive(self.atol) && positive(self.critical_threshold)) {
            return Err(FlowError::InvalidOptions(
                "tolerances must be positive".into(),
            ));
        }
        if !positive(self.box_half_width) || !positive(self.t_max) {
            return Err(FlowError::InvalidOptions(
                "box half-width and t_max must be positive".into(),
            ));
        }
        if self.max_steps == 0 {
            return Err(FlowError::InvalidOptions(
                "max_steps must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Both tolerances divided by two.
    pub fn halved(&self) -> Self {
        FlowOptions {
            rtol: self.rtol / 2.0,
            atol: self.atol / 2.0,
            ..*self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    CriticalPoint,
    BoxExit,
    TMax,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

/// Continuous extension of one accepted step on `[t0, t0 + h]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    rcont: [[f64; 2]; 5],
}

impl DenseStep {
    pub fn eval(&self, t: f64) -> [f64; 2] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let r = &self.rcont;
        std::array::from_fn(|i| {
            r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])))
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub direction: Direction,
    pub samples: Vec<Sample>,
    pub dense: Vec<DenseStep>,
    pub termination: Termination,
    pub accepted: usize,
    pub rejected: usize,
}

impl Trajectory {
    pub fn t_start(&self) -> f64 {
        self.samples[0].t
    }

    pub fn t_end(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    pub fn end(&self) -> Sample {
        self.samples[self.samples.len() - 1]
    }

    /// State at parameter `t` from the dense output.
    pub fn eval(&self, t: f64) -> Option<[f64; 2]> {
        if self.dense.is_empty() {
            let s = self.samples[0];
            return (t == s.t).then_some([s.x, s.y]);
        }
        if t < self.t_start() || t > self.t_end() {
            return None;
        }
        let i = self.dense.partition_point(|d| d.t0 + d.h < t);
        Some(self.dense[i.min(self.dense.len() - 1)].eval(t))
    }

    /// CSV with header `t,x,y`, one row per accepted step, 17 significant
    /// digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,x,y")?;
        for s in &self.samples {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", s.t, s.x, s.y)?;
        }
        Ok(())
    }
}

// Dormand-Prince 5(4) tableau; the system is autonomous, so the nodes c_i
// are not needed
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type V2 = [f64; 2];

fn comb(y: V2, h: f64, terms: &[(f64, V2)]) -> V2 {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

struct System<'a> {
    grad: &'a CompiledGradient,
    sign: f64,
}

impl System<'_> {
    fn f(&self, y: V2) -> V2 {
        let g = self.grad.gradient(y[0], y[1]);
        [self.sign * g[0], self.sign * g[1]]
    }
}

fn err_norm(e: V2, y0: V2, y1: V2, opts: &FlowOptions) -> f64 {
    let s: f64 = (0..2)
        .map(|i| {
            let sk = opts.atol + opts.rtol * y0[i].abs().max(y1[i].abs());
            (e[i] / sk).powi(2)
        })
        .sum();
    (s / 2.0).sqrt()
}

fn initial_step(sys: &System, y0: V2, f0: V2, opts: &FlowOptions) -> f64 {
    let scale = |v: V2| -> f64 {
        let s: f64 = (0..2)
            .map(|i| (v[i] / (opts.atol + opts.rtol * y0[i].abs())).powi(2))
            .sum();
        (s / 2.0).sqrt()
    };
    let d0 = scale(y0);
    let d1 = scale(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1 = comb(y0, h0, &[(1.0, f0)]);
    let f1 = sys.f(y1);
    let d2 = scale([f1[0] - f0[0], f1[1] - f0[1]]) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(opts.t_max)
}

pub fn integrate_flow(
    potential: &Poly2,
    start: (f64, f64),
    direction: Direction,
    opts: &FlowOptions,
) -> Result<Trajectory, FlowError> {
    integrate_compiled(&CompiledGradient::new(potential), start, direction, opts)
}

pub fn integrate_compiled(
    grad: &CompiledGradient,
    start: (f64, f64),
    direction: Direction,
    opts: &FlowOptions,
) -> Result<Trajectory, FlowError> {
    opts.validate()?;
    if !start.0.is_finite() || !start.1.is_finite() {
        return Err(FlowError::NonFiniteStart);
    }
    let sys = System {
        grad,
        sign: direction.sign(),
    };
    let mut y = [start.0, start.1];
    let mut t = 0.0;
    let mut traj = Trajectory {
        direction,
        samples: vec![Sample {
            t,
            x: y[0],
            y: y[1],
        }],
        dense: Vec::new(),
        termination: Termination::TMax,
        accepted: 0,
        rejected: 0,
    };
    let stop = |y: V2, k: V2| -> Option<Termination> {
        if y[0].abs().max(y[1].abs()) > opts.box_half_width
            || !y[0].is_finite()
            || !y[1].is_finite()
        {
            Some(Termination::BoxExit)
        } else if k[0].hypot(k[1]) < opts.critical_threshold {
            Some(Termination::CriticalPoint)
        } else {
            None
        }
    };
    let mut k1 = sys.f(y);
    if let Some(reason) = stop(y, k1) {
        traj.termination = reason;
        return Ok(traj);
    }
    let mut h = initial_step(&sys, y, k1, opts);
    let mut last_rejected = false;
    loop {
        if traj.accepted + traj.rejected >= opts.max_steps {
            return Err(FlowError::StepLimit {
                t,
                x: y[0],
                y: y[1],
            });
        }
        let remaining = opts.t_max - t;
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(FlowError::StepSizeUnderflow {
                t,
                x: y[0],
                y: y[1],
            });
        }
        let k2 = sys.f(comb(y, h, &[(A21, k1)]));
        let k3 = sys.f(comb(y, h, &[(A31, k1), (A32, k2)]));
        let k4 = sys.f(comb(y, h, &[(A41, k1), (A42, k2), (A43, k3)]));
        let k5 = sys.f(comb(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]));
        let k6 = sys.f(comb(
            y,
            h,
            &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
        ));
        let y1 = comb(
            y,
            h,
            &[(A71, k1), (A73, k3), (A74, k4), (A75, k5), (A76, k6)],
        );
        let k7 = sys.f(y1);
        let e = comb(
            [0.0, 0.0],
            h,
            &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
        );
        let err = err_norm(e, y, y1, opts);
        if !err.is_finite() {
            traj.rejected += 1;
            last_rejected = true;
            h *= 0.1;
            continue;
        }
        let fac = if err == 0.0 {
            10.0
        } else {
            0.9 * err.powf(-0.2)
        };
        if err > 1.0 {
            traj.rejected += 1;
            last_rejected = true;
            h *= fac.clamp(0.2, 1.0);
            continue;
        }
        let ydiff: V2 = [y1[0] - y[0], y1[1] - y[1]];
        let bspl: V2 = [h * k1[0] - ydiff[0], h * k1[1] - ydiff[1]];
        let r4: V2 = [
            ydiff[0] - h * k7[0] - bspl[0],
            ydiff[1] - h * k7[1] - bspl[1],
        ];
        let r5 = comb(
            [0.0, 0.0],
            h,
            &[(D1, k1), (D3, k3), (D4, k4), (D5, k5), (D6, k6), (D7, k7)],
        );
        traj.dense.push(DenseStep {
            t0: t,
            h,
            rcont: [y, ydiff, bspl, r4, r5],
        });
        t = if last { opts.t_max } else { t + h };
        y = y1;
        k1 = k7;
        traj.accepted += 1;
        traj.samples.push(Sample {
            t,
            x: y[0],
            y: y[1],
        });
        if let Some(reason) = stop(y, k1) {
            traj.termination = reason;
            return Ok(traj);
        }
        if last {
            traj.termination = Termination::TMax;
            return Ok(traj);
        }
        let grow = if last_rejected {
            fac.min(1.0)
        } else {
            fac.min(10.0)
        };
        h *= grow.max(0.2);
        last_rejected = false;
    }
}

/// Integrates many starts in parallel; results in input order.
pub fn integrate_many(
    potential: &Poly2,
    starts: &[(f64, f64)],
    direction: Direction,
    opts: &FlowOptions,
) -> Vec<Result<Trajectory, FlowError>> {
    let grad = CompiledGradient::new(potential);
    starts
        .par_iter()
        .map(|s| integrate_compiled(&grad, *s, direction, opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;

    fn example_f() -> Poly2 {
        parse_polynomial("1/3*x^3+1/2*x^2+(x+y)^2*y^2+1/4*y^4").unwrap()
    }

    fn opts(t_max: f64) -> FlowOptions {
        FlowOptions {
            t_max,
            ..FlowOptions::default()
        }
    }

    #[test]
    fn descent_on_the_invariant_line_matches_closed_form() {
        let tr = integrate_flow(&example_f(), (0.5, 0.0), Direction::Descent, &opts(1.0)).unwrap();
        assert_eq!(tr.termination, Termination::TMax);
        assert_eq!(tr.t_end(), 1.0);
        // x/(x+1) = (1/3) e^{-t}
        let q = (-1.0f64).exp() / 3.0;
        let want = q / (1.0 - q);
        assert!((tr.end().x - want).abs() < 1e-8, "{} vs {want}", tr.end().x);
        assert!(tr.samples.iter().all(|s| s.y.abs() < 1e-12));
        assert!(tr.samples.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn dense_output_interpolates() {
        let tr = integrate_flow(&example_f(), (0.5, 0.0), Direction::Descent, &opts(2.0)).unwrap();
        for t in [0.1f64, 0.77, 1.5, 2.0] {
            let q = (-t).exp() / 3.0;
            let want = q / (1.0 - q);
            assert!((tr.eval(t).unwrap()[0] - want).abs() < 1e-7);
        }
        assert!(tr.eval(2.5).is_none());
    }

    #[test]
    fn critical_start_stops_immediately() {
        let tr = integrate_flow(&example_f(), (0.0, 0.0), Direction::Descent, &opts(1.0)).unwrap();
        assert_eq!(tr.termination, Termination::CriticalPoint);
        assert_eq!(tr.samples.len(), 1);
        assert_eq!(tr.accepted, 0);
    }

    #[test]
    fn ascent_leaves_the_box() {
        let tr = integrate_flow(&example_f(), (0.5, 0.0), Direction::Ascent, &opts(100.0)).unwrap();
        assert_eq!(tr.termination, Termination::BoxExit);
        assert!(tr.samples.windows(2).all(|w| w[1].x > w[0].x));
    }

    #[test]
    fn energy_is_monotone_off_the_line() {
        let f = example_f();
        let g = CompiledGradient::new(&f);
        let tr = integrate_flow(&f, (0.4, 0.3), Direction::Descent, &opts(10.0)).unwrap();
        let vals: Vec<f64> = tr.samples.iter().map(|s| g.value(s.x, s.y)).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    }

    #[test]
    fn csv_format() {
        let tr = integrate_flow(&example_f(), (0.5, 0.0), Direction::Descent, &opts(0.5)).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x,y"));
        let first = lines.next().unwrap();
        assert_eq!(
            first,
            "0.0000000000000000e0,5.0000000000000000e-1,0.0000000000000000e0"
        );
        assert_eq!(text.lines().count(), tr.samples.len() + 1);
    }

    #[test]
    fn option_validation() {
        let bad = FlowOptions {
            rtol: 0.0,
            ..FlowOptions::default()
        };
        assert!(matches!(
            integrate_flow(&example_f(), (0.5, 0.0), Direction::Descent, &bad),
            Err(FlowError::InvalidOptions(_))
        ));
        assert!(matches!(
            integrate_flow(
                &example_f(),
                (f64::NAN, 0.0),
                Direction::Descent,
                &FlowOptions::default()
            ),
            Err(FlowError::NonFiniteStart)
        ));
        assert_eq!("descent".parse::<Direction>(), Ok(Direction::Descent));
        assert!("up".parse::<Direction>().is_err());
    }
}
