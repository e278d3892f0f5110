//! Numeric tame-topology checks on gradient trajectories: connected
//! components of a trajectory inside a semialgebraic cut, intersections
//! with lines, tangency witnesses for chords between points of one leaf,
//! and a seeded finiteness experiment. All results are floating-point
//! evidence, not certified bounds.

mod experiment;
mod rolle;

pub use experiment::{finiteness_experiment, Cut, Failure, TameOptions, TamenessReport};
pub use rolle::{rolle_witness, LeafCheck, RolleOutcome, RolleWitness};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Poly2, Rational};
use crate::flow::{CompiledPoly, Trajectory};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TameError {
    #[error("the predicate polynomial is zero")]
    ZeroPredicate,
    #[error("a line needs (a, b) != (0, 0)")]
    DegenerateLine,
    #[error("a path needs at least two finite vertices")]
    InvalidPath,
    #[error("experiment sizes must be positive")]
    EmptyExperiment,
}

/// Sub-steps evaluated per accepted integrator step.
const SUBGRID: usize = 8;
/// Bisection stops once the bracket is this wide in the step's local
/// parameter.
const THETA_TOL: f64 = 1e-15;
/// `|s|` below this counts as zero for `=` predicates and tangency tests.
const ZERO_TOL: f64 = 1e-12;
/// A same-sign local minimum of `|s|` below this is a tangential touch.
const TOUCH_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "=")]
    Eq,
}

/// `{ p(x, y) rel 0 }`.
#[derive(Clone, Debug)]
pub struct SemialgebraicPredicate {
    poly: Poly2,
    compiled: CompiledPoly,
    relation: Relation,
}

impl SemialgebraicPredicate {
    pub fn new(poly: Poly2, relation: Relation) -> Result<Self, TameError> {
        if poly.is_zero() {
            return Err(TameError::ZeroPredicate);
        }
        let compiled = CompiledPoly::new(&poly);
        Ok(SemialgebraicPredicate {
            poly,
            compiled,
            relation,
        })
    }

    /// `{ a x + b y + c > 0 }`.
    pub fn half_plane(a: f64, b: f64, c: f64) -> Result<Self, TameError> {
        if a == 0.0 && b == 0.0 {
            return Err(TameError::DegenerateLine);
        }
        let to_rat = |v: f64| Rational::from_float(v).ok_or(TameError::DegenerateLine);
        let p = Poly2::from_terms([
            ([1, 0], to_rat(a)?),
            ([0, 1], to_rat(b)?),
            ([0, 0], to_rat(c)?),
        ]);
        SemialgebraicPredicate::new(p, Relation::Gt)
    }

    pub fn poly(&self) -> &Poly2 {
        &self.poly
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.compiled.eval(x, y)
    }

    fn holds(&self, s: f64) -> bool {
        match self.relation {
            Relation::Gt => s > 0.0,
            Relation::Lt => s < 0.0,
            Relation::Eq => s.abs() <= ZERO_TOL,
        }
    }
}

/// Evaluation point on the dense output: step `step`, local `theta`.
#[derive(Clone, Copy, Debug)]
struct GridPt {
    step: usize,
    theta: f64,
    t: f64,
    s: f64,
}

/// `s(gamma(t))` on a sub-grid of every step overlapping `[t0, t1]`.
fn grid(traj: &Trajectory, t0: f64, t1: f64, s: &dyn Fn(f64, f64) -> f64) -> Vec<GridPt> {
    let mut out = Vec::new();
    if traj.dense.is_empty() {
        let p = traj.samples[0];
        if p.t >= t0 && p.t <= t1 {
            out.push(GridPt {
                step: 0,
                theta: 0.0,
                t: p.t,
                s: s(p.x, p.y),
            });
        }
        return out;
    }
    for (k, d) in traj.dense.iter().enumerate() {
        let lo = ((t0 - d.t0) / d.h).max(0.0);
        let hi = ((t1 - d.t0) / d.h).min(1.0);
        if lo > hi {
            continue;
        }
        let last_step = k + 1 == traj.dense.len() || t1 <= d.t0 + d.h;
        let n = SUBGRID;
        for j in 0..=n {
            if j == n && !last_step {
                break;
            }
            let theta = lo + (hi - lo) * j as f64 / n as f64;
            let t = d.t0 + theta * d.h;
            let [x, y] = d.eval(t);
            out.push(GridPt {
                step: k,
                theta,
                t,
                s: s(x, y),
            });
        }
        if last_step {
            break;
        }
    }
    out
}

/// Bisects on step `step` between local parameters where `pred` flips.
fn bisect(
    traj: &Trajectory,
    step: usize,
    mut lo: f64,
    mut hi: f64,
    s: &dyn Fn(f64, f64) -> f64,
    at_lo: bool,
    pred: &dyn Fn(f64) -> bool,
) -> (f64, [f64; 2]) {
    let d = &traj.dense[step];
    let eval = |theta: f64| d.eval(d.t0 + theta * d.h);
    while hi - lo > THETA_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let [x, y] = eval(mid);
        let v = s(x, y);
        if v == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if pred(v) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    (d.t0 + theta * d.h, eval(theta))
}

/// Second grid point lies in the same step; a step boundary belongs to the
/// later step with `theta = 0`, which equals the earlier step at `theta = 1`.
fn bracket(a: &GridPt, b: &GridPt) -> (usize, f64, f64) {
    if a.step == b.step {
        (a.step, a.theta, b.theta)
    } else {
        (a.step, a.theta, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentCount {
    pub count: usize,
    /// Parameter intervals `[t_start, t_end]` of each component.
    pub intervals: Vec<[f64; 2]>,
}

pub fn count_components(traj: &Trajectory, cut: &SemialgebraicPredicate) -> ComponentCount {
    count_components_in(traj, cut, traj.t_start(), traj.t_end())
}

/// Components of `{t in [t0, t1] : cut(gamma(t))}`.
pub fn count_components_in(
    traj: &Trajectory,
    cut: &SemialgebraicPredicate,
    t0: f64,
    t1: f64,
) -> ComponentCount {
    let s = |x: f64, y: f64| cut.value(x, y);
    let pts = grid(traj, t0, t1, &s);
    let mut intervals: Vec<[f64; 2]> = Vec::new();
    if pts.is_empty() {
        return ComponentCount {
            count: 0,
            intervals,
        };
    }
    let holds = |v: f64| cut.holds(v);
    let mut open: Option<f64> = holds(pts[0].s).then_some(pts[0].t);
    for w in pts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (ha, hb) = (holds(a.s), holds(b.s));
        if cut.relation == Relation::Eq && !ha && !hb && a.s.signum() != b.s.signum() {
            // transversal zero strictly inside the bracket: a point component
            let (step, lo, hi) = bracket(a, b);
            let (t, _) = bisect(traj, step, lo, hi, &s, a.s > 0.0, &|v| v > 0.0);
            intervals.push([t, t]);
            continue;
        }
        if ha == hb {
            continue;
        }
        let (step, lo, hi) = bracket(a, b);
        let (t, _) = bisect(traj, step, lo, hi, &s, ha, &holds);
        if ha {
            intervals.push([open.take().expect("open component"), t]);
        } else {
            open = Some(t);
        }
    }
    if let Some(start) = open {
        intervals.push([start, pts[pts.len() - 1].t]);
    }
    intervals.sort_by(|a, b| a[0].total_cmp(&b[0]));
    ComponentCount {
        count: intervals.len(),
        intervals,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Intersection {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineIntersections {
    /// Transversal crossings.
    pub count: usize,
    pub points: Vec<Intersection>,
    /// Even-order contacts, not included in `count`.
    pub tangential: usize,
    /// The whole trajectory lies on the line.
    pub degenerate_containment: bool,
}

/// Crossings of the trajectory with `a x + b y + c = 0`.
pub fn line_intersections(
    traj: &Trajectory,
    a: f64,
    b: f64,
    c: f64,
) -> Result<LineIntersections, TameError> {
    if a == 0.0 && b == 0.0 {
        return Err(TameError::DegenerateLine);
    }
    let norm = a.hypot(b);
    let (a, b, c) = (a / norm, b / norm, c / norm);
    let s = move |x: f64, y: f64| a * x + b * y + c;
    let pts = grid(traj, traj.t_start(), traj.t_end(), &s);
    let mut out = LineIntersections {
        count: 0,
        points: Vec::new(),
        tangential: 0,
        degenerate_containment: false,
    };
    if pts.iter().all(|p| p.s.abs() <= ZERO_TOL) {
        out.degenerate_containment = true;
        return Ok(out);
    }
    let sign = |v: f64| {
        if v.abs() <= ZERO_TOL {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };
    let signs: Vec<i32> = pts.iter().map(|p| sign(p.s)).collect();
    let push = |out: &mut LineIntersections, t: f64, xy: [f64; 2]| {
        out.count += 1;
        out.points.push(Intersection {
            t,
            x: xy[0],
            y: xy[1],
        });
    };
    let mut i = 0;
    while i + 1 < pts.len() {
        if signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1] {
            let (step, lo, hi) = bracket(&pts[i], &pts[i + 1]);
            let (t, xy) = bisect(traj, step, lo, hi, &s, signs[i] > 0, &|v| v > 0.0);
            push(&mut out, t, xy);
            i += 1;
            continue;
        }
        if signs[i + 1] == 0 {
            // run of grid zeros; compare the signs on either side
            let start = i + 1;
            let mut end = start;
            while end + 1 < pts.len() && signs[end + 1] == 0 {
                end += 1;
            }
            let before = signs[i];
            let after = if end + 1 < pts.len() {
                signs[end + 1]
            } else {
                0
            };
            let p = &pts[start];
            let d = &traj.dense[p.step.min(traj.dense.len() - 1)];
            let xy = d.eval(p.t);
            if before != 0 && after != 0 && before != after {
                push(&mut out, p.t, xy);
            } else if before != 0 && after != 0 {
                out.tangential += 1;
            } else {
                // run touches an end of the trajectory
                push(&mut out, p.t, xy);
            }
            i = end + 1;
            continue;
        }
        i += 1;
    }
    if signs[0] == 0 && signs.len() > 1 && signs[1] != 0 {
        let p = traj.samples[0];
        out.count += 1;
        out.points.insert(
            0,
            Intersection {
                t: p.t,
                x: p.x,
                y: p.y,
            },
        );
    }
    // same-sign local minima of |s| that nearly touch
    for w in pts.windows(3) {
        let (l, m, r) = (w[0].s, w[1].s, w[2].s);
        let same = sign(l) == sign(m) && sign(m) == sign(r) && sign(m) != 0;
        if same && m.abs() < TOUCH_TOL && m.abs() < l.abs() && m.abs() < r.abs() {
            out.tangential += 1;
        }
    }
    out.points.sort_by(|p, q| p.t.total_cmp(&q.t));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;
    use crate::flow::{integrate_flow, Direction, FlowOptions};

    fn example_f() -> Poly2 {
        parse_polynomial("1/3*x^3+1/2*x^2+(x+y)^2*y^2+1/4*y^4").unwrap()
    }

    fn on_gamma() -> Trajectory {
        let opts = FlowOptions {
            t_max: 10.0,
            ..FlowOptions::default()
        };
        integrate_flow(&example_f(), (0.5, 0.0), Direction::Descent, &opts).unwrap()
    }

    fn pred(text: &str, rel: Relation) -> SemialgebraicPredicate {
        SemialgebraicPredicate::new(parse_polynomial(text).unwrap(), rel).unwrap()
    }

    #[test]
    fn components_on_the_invariant_line() {
        let tr = on_gamma();
        let c = count_components(&tr, &pred("x-1/10", Relation::Gt));
        assert_eq!(c.count, 1);
        // x/(x+1) = e^{-t}/3 reaches x = 0.1 at t = ln(11/3)
        let want = (11.0f64 / 3.0).ln();
        assert!((c.intervals[0][1] - want).abs() < 1e-8, "{:?}", c.intervals);
        assert_eq!(c.intervals[0][0], 0.0);

        assert_eq!(count_components(&tr, &pred("x^2+1", Relation::Lt)).count, 0);
        let all = count_components(&tr, &pred("x", Relation::Gt));
        assert_eq!(all.count, 1);
        assert_eq!(all.intervals[0], [tr.t_start(), tr.t_end()]);
    }

    #[test]
    fn truncation_never_increases_counts() {
        let tr = on_gamma();
        let p = pred("x-1/10", Relation::Gt);
        let full = count_components(&tr, &p).count;
        for (a, b) in [(0.0, 1.0), (1.0, 3.0), (2.0, 10.0)] {
            assert!(count_components_in(&tr, &p, a, b).count <= full);
        }
    }

    #[test]
    fn line_cases() {
        let tr = on_gamma();
        let r = line_intersections(&tr, 1.0, 0.0, -0.25).unwrap();
        assert_eq!(r.count, 1);
        assert!((r.points[0].x - 0.25).abs() < 1e-9);
        assert_eq!(line_intersections(&tr, 0.0, 1.0, -1.0).unwrap().count, 0);
        let on = line_intersections(&tr, 0.0, 1.0, 0.0).unwrap();
        assert!(on.degenerate_containment);
        assert_eq!(on.count, 0);
        assert_eq!(
            line_intersections(&tr, 0.0, 0.0, 1.0),
            Err(TameError::DegenerateLine)
        );
    }

    #[test]
    fn predicate_validation() {
        assert!(matches!(
            SemialgebraicPredicate::new(Poly2::zero(), Relation::Gt),
            Err(TameError::ZeroPredicate)
        ));
        assert!(SemialgebraicPredicate::half_plane(0.0, 0.0, 1.0).is_err());
        let h = SemialgebraicPredicate::half_plane(1.0, 0.0, -0.5).unwrap();
        assert_eq!(h.value(1.0, 7.0), 0.5);
    }
}
