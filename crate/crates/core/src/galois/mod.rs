//! Abelianity test for the second variational system along an invariant
//! line, and the certificates recording it.
//!
//! Along `{y = 0}` the LVE2 is triangular: `chi1 = omega = exp(int beta1)`
//! and `chi2 = omega * theta1` with `theta1 = int beta2 * omega`. Writing
//! `omega = A e^g`, the identity component of its Galois group is
//! non-abelian exactly when
//!
//! * (H1) `g` is nonconstant, so `omega` is transcendental over `C(x)`;
//! * (H2) `theta1` lies outside `C(x, omega)`. Since any such element would
//!   have the form `y e^g` with rational `y`, this is the unsolvability of
//!   the Risch equation `y' + g' y = beta2 * A`.

mod hyperexp;
mod risch;

pub use hyperexp::{
    exponential_solution, verify_closed_form, ClosedFormError, EiTerm, HyperExp, HyperExpJson,
    SpecialClosedForm,
};
pub use risch::{risch_de_solve, Refutation, RischError, RischOutcome, RischProblem};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Poly2, RatFun, Rational};
use crate::variational::{
    gradient_field, invariant_lines, lve2_system, normalize_to_y0, variational_coefficients,
    InvariantLine, LineFamily, LineSearch, PlanarField, VariationalError,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("beta2 is zero; the second variational system decouples")]
    ZeroBeta2,
    #[error("the potential is constant")]
    ConstantPotential,
    #[error("the field is identically zero")]
    ZeroField,
    #[error("no invariant line with rational coefficients was found")]
    NoInvariantLine { unresolved: usize },
    #[error("infinite family of invariant lines: {0}")]
    InfiniteFamily(LineFamily),
}

impl From<VariationalError> for GaloisError {
    fn from(e: VariationalError) -> Self {
        match e {
            VariationalError::ConstantPotential => GaloisError::ConstantPotential,
            _ => GaloisError::ZeroField,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NonIntegrable,
    Inconclusive,
    Unsupported,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NonIntegrable => "NON_INTEGRABLE",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Unsupported => "UNSUPPORTED",
        })
    }
}

/// `beta2 * A e^g`, the integrand of `theta1`.
pub fn theta_integrand(beta2: &RatFun, omega: &HyperExp) -> Result<HyperExp, GaloisError> {
    if beta2.is_zero() {
        return Err(GaloisError::ZeroBeta2);
    }
    Ok(HyperExp::new(beta2 * &omega.a, omega.g.clone()))
}

/// `omega = None` means its construction failed.
pub fn abelianity_verdict(
    omega: Option<&HyperExp>,
    beta2: &RatFun,
    risch: Option<&RischOutcome>,
) -> Verdict {
    let Some(omega) = omega else {
        return Verdict::Unsupported;
    };
    if omega.g.is_constant() || beta2.is_zero() {
        return Verdict::Inconclusive;
    }
    match risch {
        Some(RischOutcome::NoSolution(_)) => Verdict::NonIntegrable,
        _ => Verdict::Inconclusive,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputJson {
    /// `potential` or `field`.
    pub kind: &'static str,
    /// Canonical text of `F`, or `P;Q`.
    pub source: String,
    /// The field actually analysed, as `P;Q`.
    pub field: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartJson {
    pub old_x: String,
    pub old_y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldJson {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RischJson {
    /// `solution` or `no_solution`.
    pub kind: &'static str,
    pub gprime: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Refutation>,
}

impl RischJson {
    fn new(problem: &RischProblem, outcome: &RischOutcome) -> Self {
        let (kind, solution, witness) = match outcome {
            RischOutcome::Solution(y) => ("solution", Some(y.to_string()), None),
            RischOutcome::NoSolution(w) => ("no_solution", None, Some(w.clone())),
        };
        RischJson {
            kind,
            gprime: problem.gprime().to_string(),
            rhs: problem.rhs().to_string(),
            solution,
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub statement: &'static str,
    /// `None` when the pipeline stopped before it could be decided.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    #[serde(rename = "H1")]
    pub h1: Hypothesis,
    #[serde(rename = "H2")]
    pub h2: Hypothesis,
}

const H1_STATEMENT: &str = "g is nonconstant, so omega = A*exp(g) is transcendental over Q(x)";
const H2_STATEMENT: &str =
    "y' + g'*y = beta2*A has no rational solution, so theta1 does not lie in Q(x, omega)";

const CITATIONS: [&str; 3] = [
    "Morales-Ruiz and Ramis; Ayoul and Zung: if a vector field is meromorphically integrable in the broad (non-Hamiltonian) sense near a particular solution, then its cotangent lift is Liouville integrable and the identity component of the differential Galois group of every variational equation along that solution is abelian. A non-abelian identity component therefore rules out such integrability.",
    "Triangular LVE2: with chi1 = omega and chi2 = omega*theta1, the Galois group acts by omega -> lambda*omega and theta1 -> theta1 + mu. Both actions are nontrivial under (H1) and (H2), and then the identity component is non-abelian.",
    "Liouville, Risch: for rational r and polynomial g, the integral of r*exp(g) is elementary exactly when y' + g'*y = r has a rational solution y, and then it equals y*exp(g).",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub schema_version: &'static str,
    pub input: InputJson,
    pub line: InvariantLine,
    pub chart: Option<ChartJson>,
    pub normalized_field: Option<FieldJson>,
    pub beta1: Option<String>,
    pub beta2: Option<String>,
    pub lve2: Option<[String; 2]>,
    pub omega: Option<HyperExpJson>,
    pub theta_integrand: Option<HyperExpJson>,
    pub risch: Option<RischJson>,
    pub hypotheses: Hypotheses,
    pub verdict: Verdict,
    pub diagnostic: Option<String>,
    pub citations: Vec<&'static str>,
}

impl Certificate {
    fn skeleton(input: &InputJson, line: InvariantLine) -> Self {
        Certificate {
            schema_version: SCHEMA_VERSION,
            input: input.clone(),
            line,
            chart: None,
            normalized_field: None,
            beta1: None,
            beta2: None,
            lve2: None,
            omega: None,
            theta_integrand: None,
            risch: None,
            hypotheses: Hypotheses {
                h1: Hypothesis {
                    statement: H1_STATEMENT,
                    holds: None,
                },
                h2: Hypothesis {
                    statement: H2_STATEMENT,
                    holds: None,
                },
            },
            verdict: Verdict::Unsupported,
            diagnostic: None,
            citations: CITATIONS.to_vec(),
        }
    }
}

/// Every intermediate value of one line's analysis, in exact form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineAnalysis {
    pub line: InvariantLine,
    pub normalized: Option<PlanarField>,
    pub beta1: Option<RatFun>,
    pub beta2: Option<RatFun>,
    pub omega: Option<HyperExp>,
    pub theta_integrand: Option<HyperExp>,
    pub risch: Option<(RischProblem, RischOutcome)>,
    pub verdict: Verdict,
    pub certificate: Certificate,
}

/// Runs normalization through the verdict for one invariant line.
pub fn analyze_line(field: &PlanarField, line: &InvariantLine, input: &InputJson) -> LineAnalysis {
    let mut cert = Certificate::skeleton(input, line.clone());
    let mut out = LineAnalysis {
        line: line.clone(),
        normalized: None,
        beta1: None,
        beta2: None,
        omega: None,
        theta_integrand: None,
        risch: None,
        verdict: Verdict::Unsupported,
        certificate: cert.clone(),
    };
    let finish =
        |mut out: LineAnalysis, mut cert: Certificate, verdict: Verdict, diag: Option<String>| {
            cert.verdict = verdict;
            cert.diagnostic = diag;
            out.verdict = verdict;
            out.certificate = cert;
            out
        };

    let (normalized, chart) = match normalize_to_y0(field, line) {
        Ok(v) => v,
        Err(e) => return finish(out, cert, Verdict::Unsupported, Some(e.to_string())),
    };
    cert.chart = Some(ChartJson {
        old_x: chart.old_x.to_string(),
        old_y: chart.old_y.to_string(),
    });
    cert.normalized_field = Some(FieldJson {
        p: normalized.p.to_string(),
        q: normalized.q.to_string(),
    });
    out.normalized = Some(normalized.clone());

    let vs = match variational_coefficients(&normalized) {
        Ok(v) => v,
        Err(e) => return finish(out, cert, Verdict::Unsupported, Some(e.to_string())),
    };
    cert.beta1 = Some(vs.beta1.to_string());
    cert.beta2 = Some(vs.beta2.to_string());
    cert.lve2 = Some(lve2_system(&vs).equations());
    out.beta1 = Some(vs.beta1.clone());
    out.beta2 = Some(vs.beta2.clone());

    let omega = match exponential_solution(&vs.beta1) {
        Ok(w) => w,
        Err(e) => {
            let diag = format!("omega is not of the form A*exp(g): {e}");
            return finish(out, cert, Verdict::Unsupported, Some(diag));
        }
    };
    cert.omega = Some(omega.to_json());
    out.omega = Some(omega.clone());
    let h1 = !omega.g.is_constant();
    cert.hypotheses.h1.holds = Some(h1);

    let integrand = match theta_integrand(&vs.beta2, &omega) {
        Ok(t) => t,
        Err(e) => {
            let v = abelianity_verdict(Some(&omega), &vs.beta2, None);
            return finish(out, cert, v, Some(e.to_string()));
        }
    };
    cert.theta_integrand = Some(integrand.to_json());
    out.theta_integrand = Some(integrand.clone());
    if !h1 {
        let v = abelianity_verdict(Some(&omega), &vs.beta2, None);
        let diag = "omega is rational; only an abelian group can arise at this order".to_string();
        return finish(out, cert, v, Some(diag));
    }

    let problem =
        RischProblem::new(omega.g.derivative(), integrand.a.clone()).expect("g is nonconstant");
    let outcome = risch_de_solve(&problem);
    cert.risch = Some(RischJson::new(&problem, &outcome));
    cert.hypotheses.h2.holds = Some(!outcome.is_solution());
    let verdict = abelianity_verdict(Some(&omega), &vs.beta2, Some(&outcome));
    assert_eq!(
        verdict == Verdict::NonIntegrable,
        h1 && !outcome.is_solution(),
        "verdict gate"
    );
    let diag = match &outcome {
        RischOutcome::Solution(y) => Some(format!("theta1 = ({y})*exp({}) is elementary", omega.g)),
        RischOutcome::NoSolution(_) => None,
    };
    out.risch = Some((problem, outcome));
    finish(out, cert, verdict, diag)
}

/// Output of `analyze`: one certificate per invariant line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub schema_version: &'static str,
    pub input: InputJson,
    pub certificates: Vec<Certificate>,
    /// Real invariant-line candidates with irrational coefficients that
    /// were skipped.
    pub unresolved_lines: usize,
}

impl Analysis {
    /// `true` when no certificate carries a decided verdict.
    pub fn all_unsupported(&self) -> bool {
        self.certificates
            .iter()
            .all(|c| c.verdict == Verdict::Unsupported)
    }
}

fn sort_key(l: &InvariantLine) -> (Rational, Rational, Rational) {
    (l.a.clone(), l.b.clone(), l.c.clone())
}

pub fn analyze_field_with_input(
    field: &PlanarField,
    input: InputJson,
) -> Result<Analysis, GaloisError> {
    let (mut lines, unresolved) = match invariant_lines(field) {
        LineSearch::Finite { lines, unresolved } => (lines, unresolved),
        LineSearch::InfiniteFamily(fam @ LineFamily::Pencil { .. }) => {
            return Err(GaloisError::InfiniteFamily(fam))
        }
        LineSearch::InfiniteFamily(fam @ LineFamily::Parallel { .. }) => {
            return Ok(parallel_family_analysis(field, fam, input));
        }
    };
    if lines.is_empty() {
        return Err(GaloisError::NoInvariantLine { unresolved });
    }
    lines.sort_by_key(sort_key);
    let certificates = lines
        .par_iter()
        .map(|l| analyze_line(field, l, &input).certificate)
        .collect();
    Ok(Analysis {
        schema_version: SCHEMA_VERSION,
        input,
        certificates,
        unresolved_lines: unresolved,
    })
}

/// Every line of one direction is invariant; a single degenerate
/// certificate is emitted for the member through the origin.
fn parallel_family_analysis(field: &PlanarField, fam: LineFamily, input: InputJson) -> Analysis {
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    // direction (u, v) gives the normal (v, -u)
    let (u, v) = if field.p.is_zero() {
        (zero.clone(), one.clone())
    } else {
        let (e, pc) = field
            .p
            .terms()
            .next()
            .map(|(e, c)| (*e, c.clone()))
            .expect("nonzero P");
        (one.clone(), field.q.coeff(&e) / pc)
    };
    let line = InvariantLine::new(v, -u, zero).expect("nonzero direction");
    let mut cert = Certificate::skeleton(&input, line);
    cert.diagnostic = Some(format!(
        "degenerate field: {fam}; the field is parallel to every such line"
    ));
    Analysis {
        schema_version: SCHEMA_VERSION,
        input,
        certificates: vec![cert],
        unresolved_lines: 0,
    }
}

pub fn analyze_field(field: &PlanarField) -> Result<Analysis, GaloisError> {
    let input = InputJson {
        kind: "field",
        source: field.to_string(),
        field: field.to_string(),
    };
    analyze_field_with_input(field, input)
}

pub fn analyze_potential(potential: &Poly2) -> Result<Analysis, GaloisError> {
    let field = gradient_field(potential)?;
    let input = InputJson {
        kind: "potential",
        source: potential.to_string(),
        field: field.to_string(),
    };
    analyze_field_with_input(&field, input)
}
