//! Tangency witnesses for paths joining two points of one trajectory.
//!
//! Trajectories of `grad F` are the leaves of `F_y dx - F_x dy = 0`. A path
//! `gamma` is tangent to the foliation where
//! `s(t) = F_y(gamma) gamma_1' - F_x(gamma) gamma_2'` vanishes.

use serde::Serialize;

use super::TameError;
use crate::algebra::Poly2;
use crate::flow::{integrate_compiled, CompiledGradient, Direction, FlowOptions, Trajectory};

/// Samples per path segment before bisection.
const SAMPLES_PER_SEGMENT: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RolleWitness {
    /// Path parameter in `[0, 1]`, segments uniformly spaced.
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RolleOutcome {
    Witnesses {
        witnesses: Vec<RolleWitness>,
    },
    /// `|s| <= tol` at every sample: the path runs inside a leaf.
    Degenerate,
    /// The end point is not on the leaf through the start point.
    NotApplicable {
        endpoint_distance: f64,
    },
}

/// How to decide that both ends of a path lie on one leaf: the leaf
/// through the start is integrated both ways with `opts`, and the end must
/// come within `leaf_tol` of it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeafCheck {
    pub opts: FlowOptions,
    pub leaf_tol: f64,
}

impl Default for LeafCheck {
    fn default() -> Self {
        LeafCheck {
            opts: FlowOptions {
                t_max: 50.0,
                ..FlowOptions::default()
            },
            leaf_tol: 1e-6,
        }
    }
}

fn dist2(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)
}

/// Distance from `p` to a trajectory, refined on the dense output.
pub fn distance_to_trajectory(traj: &Trajectory, p: [f64; 2]) -> f64 {
    if traj.dense.is_empty() {
        let s = traj.samples[0];
        return dist2([s.x, s.y], p).sqrt();
    }
    let n = 16;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for d in &traj.dense {
        for j in 0..=n {
            let t = d.t0 + d.h * j as f64 / n as f64;
            let v = dist2(d.eval(t), p);
            if v < best.0 {
                best = (v, t, d.h / n as f64);
            }
        }
    }
    // golden-section search around the best sample
    let (_, t_best, dt) = best;
    let (mut lo, mut hi) = (
        (t_best - dt).max(traj.t_start()),
        (t_best + dt).min(traj.t_end()),
    );
    let f = |t: f64| traj.eval(t).map_or(f64::INFINITY, |q| dist2(q, p));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if f(m1) < f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    f(0.5 * (lo + hi)).min(best.0).sqrt()
}

fn leaf_distance(grad: &CompiledGradient, a: [f64; 2], b: [f64; 2], check: &LeafCheck) -> f64 {
    [Direction::Descent, Direction::Ascent]
        .iter()
        .filter_map(|dir| integrate_compiled(grad, (a[0], a[1]), *dir, &check.opts).ok())
        .map(|tr| distance_to_trajectory(&tr, b))
        .fold(f64::INFINITY, f64::min)
}

/// Tangency points of a piecewise-linear path whose ends lie on one leaf.
pub fn rolle_witness(
    path: &[(f64, f64)],
    potential: &Poly2,
    tol: f64,
    check: &LeafCheck,
) -> Result<RolleOutcome, TameError> {
    if path.len() < 2 || path.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(TameError::InvalidPath);
    }
    let grad = CompiledGradient::new(potential);
    let a = [path[0].0, path[0].1];
    let b = [path[path.len() - 1].0, path[path.len() - 1].1];
    let dist = leaf_distance(&grad, a, b, check);
    if dist.is_nan() || dist > check.leaf_tol {
        return Ok(RolleOutcome::NotApplicable {
            endpoint_distance: dist,
        });
    }

    let nseg = path.len() - 1;
    // s on segment k at local u in [0, 1]
    let s = |k: usize, u: f64| -> ([f64; 2], f64) {
        let (p, q) = (path[k], path[k + 1]);
        let d = [(q.0 - p.0) * nseg as f64, (q.1 - p.1) * nseg as f64];
        let x = p.0 + u * (q.0 - p.0);
        let y = p.1 + u * (q.1 - p.1);
        let [fx, fy] = grad.gradient(x, y);
        ([x, y], fy * d[0] - fx * d[1])
    };
    let mut witnesses = Vec::new();
    let mut all_small = true;
    for k in 0..nseg {
        let us: Vec<f64> = (0..=SAMPLES_PER_SEGMENT)
            .map(|j| j as f64 / SAMPLES_PER_SEGMENT as f64)
            .collect();
        let vals: Vec<f64> = us.iter().map(|&u| s(k, u).1).collect();
        all_small &= vals.iter().all(|v| v.abs() <= tol);
        let mut push = |u: f64| {
            let ([x, y], r) = s(k, u);
            witnesses.push(RolleWitness {
                t: (k as f64 + u) / nseg as f64,
                x,
                y,
                residual: r.abs(),
            });
        };
        for j in 0..SAMPLES_PER_SEGMENT {
            let (va, vb) = (vals[j], vals[j + 1]);
            if va == 0.0 {
                push(us[j]);
            } else if va.signum() != vb.signum() && vb != 0.0 {
                let (mut lo, mut hi) = (us[j], us[j + 1]);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let v = s(k, mid).1;
                    if v == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if v.signum() == va.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                // keep the bracket end with the smaller residual
                let u = if s(k, lo).1.abs() <= s(k, hi).1.abs() {
                    lo
                } else {
                    hi
                };
                push(u);
            }
        }
        if k + 1 == nseg && vals[SAMPLES_PER_SEGMENT] == 0.0 {
            push(1.0);
        }
    }
    if all_small {
        return Ok(RolleOutcome::Degenerate);
    }
    witnesses.retain(|w| w.residual <= tol);
    witnesses.dedup_by(|a, b| a.t == b.t);
    Ok(RolleOutcome::Witnesses { witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;
    use crate::flow::integrate_flow;

    fn example_f() -> Poly2 {
        parse_polynomial("1/3*x^3+1/2*x^2+(x+y)^2*y^2+1/4*y^4").unwrap()
    }

    #[test]
    fn chord_on_one_trajectory_has_a_tangency() {
        let f = example_f();
        let opts = FlowOptions {
            t_max: 10.0,
            ..FlowOptions::default()
        };
        let tr = integrate_flow(&f, (0.4, 0.3), Direction::Descent, &opts).unwrap();
        let a = tr.eval(0.5).unwrap();
        let b = tr.eval(3.0).unwrap();
        let out = rolle_witness(
            &[(a[0], a[1]), (b[0], b[1])],
            &f,
            1e-8,
            &LeafCheck::default(),
        )
        .unwrap();
        match out {
            RolleOutcome::Witnesses { witnesses } => {
                assert!(!witnesses.is_empty());
                assert!(witnesses
                    .iter()
                    .all(|w| w.residual < 1e-8 && w.t > 0.0 && w.t < 1.0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn path_inside_the_leaf_is_degenerate() {
        // on y = 0 the field is horizontal, so the x-axis is a leaf
        let out = rolle_witness(
            &[(0.2, 0.0), (0.5, 0.0)],
            &example_f(),
            1e-8,
            &LeafCheck::default(),
        )
        .unwrap();
        assert_eq!(out, RolleOutcome::Degenerate);
    }

    #[test]
    fn ends_on_different_leaves() {
        let out = rolle_witness(
            &[(0.4, 0.3), (0.4, -0.3)],
            &example_f(),
            1e-8,
            &LeafCheck::default(),
        )
        .unwrap();
        assert!(matches!(out, RolleOutcome::NotApplicable { .. }));
        assert_eq!(
            rolle_witness(&[(0.0, 0.0)], &example_f(), 1e-8, &LeafCheck::default()),
            Err(TameError::InvalidPath)
        );
    }
}
