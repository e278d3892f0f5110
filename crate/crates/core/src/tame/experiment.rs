//! Seeded finiteness experiment: component counts of many trajectories
//! against random lines and half-planes, repeated at halved tolerances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{count_components, line_intersections, SemialgebraicPredicate, TameError};
use crate::algebra::Poly2;
use crate::flow::{integrate_compiled, CompiledGradient, Direction, FlowOptions, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TameOptions {
    /// Flow options; the default box is far smaller than the flow default
    /// because polynomial gradient flows blow up in finite time and turn
    /// stiff far out, while the cuts live near the origin.
    pub flow: FlowOptions,
    /// Starts are uniform in `[-start_box, start_box]^2`.
    pub start_box: f64,
    /// Cut offsets are uniform in `[-cut_box, cut_box]`.
    pub cut_box: f64,
    /// Required fraction of (trajectory, cut) pairs whose counts agree at
    /// the base and halved tolerances.
    pub stability_threshold: f64,
}

impl Default for TameOptions {
    fn default() -> Self {
        TameOptions {
            flow: FlowOptions {
                box_half_width: 1e3,
                ..FlowOptions::default()
            },
            start_box: 2.0,
            cut_box: 2.0,
            stability_threshold: 0.99,
        }
    }
}

/// `a x + b y + c = 0` (line) or `a x + b y + c > 0` (half-plane), with
/// `a^2 + b^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cut {
    Line { a: f64, b: f64, c: f64 },
    HalfPlane { a: f64, b: f64, c: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub trajectory: usize,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TamenessReport {
    pub schema_version: &'static str,
    pub evidence: &'static str,
    pub potential: String,
    pub seed: u64,
    pub n_traj: usize,
    pub n_cuts: usize,
    pub cuts: Vec<Cut>,
    pub starts: Vec<[f64; 2]>,
    pub directions: Vec<Direction>,
    /// `counts[i][j]` for trajectory `i` and cut `j`; `None` for failed
    /// trajectories.
    pub counts: Vec<Option<Vec<usize>>>,
    /// Largest recorded count; `None` when every trajectory failed.
    pub b0: Option<usize>,
    pub tangential_contacts: usize,
    /// Fraction of compared pairs whose counts agree at halved tolerance.
    pub agreement: f64,
    /// `[trajectory, cut]` pairs whose counts changed.
    pub disagreements: Vec<[usize; 2]>,
    pub stable: bool,
    pub failures: Vec<Failure>,
}

fn counts_for(traj: &Trajectory, cuts: &[Cut]) -> (Vec<usize>, usize) {
    let mut tangential = 0;
    let counts = cuts
        .iter()
        .map(|cut| match *cut {
            Cut::Line { a, b, c } => {
                let r = line_intersections(traj, a, b, c).expect("unit normal");
                tangential += r.tangential;
                r.count
            }
            Cut::HalfPlane { a, b, c } => {
                let p = SemialgebraicPredicate::half_plane(a, b, c).expect("unit normal");
                count_components(traj, &p).count
            }
        })
        .collect();
    (counts, tangential)
}

fn random_cut(rng: &mut ChaCha8Rng, j: usize, cut_box: f64) -> Cut {
    let phi = rng.gen_range(0.0..std::f64::consts::PI);
    let (a, b) = (phi.cos(), phi.sin());
    let c = rng.gen_range(-cut_box..=cut_box);
    if j.is_multiple_of(2) {
        Cut::Line { a, b, c }
    } else {
        Cut::HalfPlane { a, b, c }
    }
}

type Row = Result<(Vec<usize>, Vec<usize>, usize), String>;

pub fn finiteness_experiment(
    potential: &Poly2,
    n_traj: usize,
    n_cuts: usize,
    seed: u64,
    opts: &TameOptions,
) -> Result<TamenessReport, TameError> {
    if n_traj == 0 || n_cuts == 0 {
        return Err(TameError::EmptyExperiment);
    }
    let mut cut_rng = ChaCha8Rng::seed_from_u64(seed);
    let cuts: Vec<Cut> = (0..n_cuts)
        .map(|j| random_cut(&mut cut_rng, j, opts.cut_box))
        .collect();
    // stream 0 draws the cuts; trajectory i draws its start from stream i + 1
    let starts: Vec<[f64; 2]> = (0..n_traj)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let w = opts.start_box;
            [rng.gen_range(-w..=w), rng.gen_range(-w..=w)]
        })
        .collect();
    let directions: Vec<Direction> = (0..n_traj)
        .map(|i| {
            if i % 2 == 0 {
                Direction::Descent
            } else {
                Direction::Ascent
            }
        })
        .collect();

    let grad = CompiledGradient::new(potential);
    let fine = opts.flow.halved();
    let rows: Vec<Row> = (0..n_traj)
        .into_par_iter()
        .map(|i| {
            let start = (starts[i][0], starts[i][1]);
            let base = integrate_compiled(&grad, start, directions[i], &opts.flow)
                .map_err(|e| e.to_string())?;
            let refined = integrate_compiled(&grad, start, directions[i], &fine)
                .map_err(|e| e.to_string())?;
            let (c0, tang) = counts_for(&base, &cuts);
            let (c1, _) = counts_for(&refined, &cuts);
            Ok((c0, c1, tang))
        })
        .collect();

    let mut counts = Vec::with_capacity(n_traj);
    let mut failures = Vec::new();
    let mut disagreements = Vec::new();
    let mut tangential_contacts = 0;
    let mut compared = 0usize;
    for (i, row) in rows.into_iter().enumerate() {
        match row {
            Ok((c0, c1, tang)) => {
                tangential_contacts += tang;
                compared += c0.len();
                for (j, (u, v)) in c0.iter().zip(&c1).enumerate() {
                    if u != v {
                        disagreements.push([i, j]);
                    }
                }
                counts.push(Some(c0));
            }
            Err(error) => {
                failures.push(Failure {
                    trajectory: i,
                    error,
                });
                counts.push(None);
            }
        }
    }
    let b0 = counts.iter().flatten().flatten().copied().max();
    let agreement = if compared == 0 {
        0.0
    } else {
        1.0 - disagreements.len() as f64 / compared as f64
    };
    Ok(TamenessReport {
        schema_version: "1",
        evidence: "numeric, not certified",
        potential: potential.to_string(),
        seed,
        n_traj,
        n_cuts,
        cuts,
        starts,
        directions,
        counts,
        b0,
        tangential_contacts,
        agreement,
        stable: compared > 0 && agreement >= opts.stability_threshold,
        disagreements,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;

    #[test]
    fn small_run_is_deterministic_and_finite() {
        let f = parse_polynomial("1/3*x^3+1/2*x^2+(x+y)^2*y^2+1/4*y^4").unwrap();
        let opts = TameOptions::default();
        let a = finiteness_experiment(&f, 6, 4, 7, &opts).unwrap();
        let b = finiteness_experiment(&f, 6, 4, 7, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.len(), 6);
        assert!(a.b0.is_some());
        assert!(a.stable);
        let c = finiteness_experiment(&f, 6, 4, 8, &opts).unwrap();
        assert_ne!(a.starts, c.starts);
    }

    #[test]
    fn potential_independent_of_y_has_monotone_rows() {
        // horizontal trajectories cross each vertical line at most once
        let f = parse_polynomial("x^3/3+x").unwrap();
        let opts = TameOptions::default();
        let r = finiteness_experiment(&f, 4, 6, 3, &opts).unwrap();
        let grad = CompiledGradient::new(&f);
        for (i, s) in r.starts.iter().enumerate() {
            let tr = integrate_compiled(&grad, (s[0], s[1]), r.directions[i], &opts.flow).unwrap();
            for c in [-1.0, 0.0, 0.5] {
                assert!(line_intersections(&tr, 1.0, 0.0, c).unwrap().count <= 1);
            }
        }
    }

    #[test]
    fn empty_sizes_are_rejected() {
        let f = parse_polynomial("x^2+y^2").unwrap();
        assert_eq!(
            finiteness_experiment(&f, 0, 3, 1, &TameOptions::default()),
            Err(TameError::EmptyExperiment)
        );
    }
}
