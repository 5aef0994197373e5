//! Top-level verification procedures: every claim the engine certifies, as a
//! fixed catalogue of machine-checkable certificates with pass/fail status
//! and witness data.
//!
//! Each claim is a [`Check`] strategy behind a common trait, registered by
//! id in [`catalogue`] and selected at runtime (the CLI maps subcommands to
//! id lists). The catalogue order is fixed so reports stay diffable across
//! runs and versions.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::FieldError;
use crate::geom::{self, Line};
use crate::groupcore::{
    builtin_generators, closure, orbit, BuiltinGenerators, GeneratorSet, GroupClosure, GroupError,
    DEFAULT_CLOSURE_CAP, DEFAULT_ORBIT_CAP,
};
use crate::polyalg::{build_maschke_f, Poly};

mod checks;
pub mod graph;
pub mod molien;
pub mod smoothness;

pub use checks::{catalogue, catalogue_ids, check_by_id, Check, CheckOutcome};
pub use graph::{build_intersection_graph, independent_set_search, IntersectionGraph};
pub use molien::{molien_invariant_dimension, MAX_MOLIEN_DEGREE};
pub use smoothness::{
    smoothness_certificate, smoothness_scan, SmoothnessCertificate, SmoothnessScan,
    DEFAULT_SMOOTHNESS_PRIMES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("degree {degree} exceeds the practical cap {max}")]
    DegreeTooLarge { degree: u32, max: u32 },
    #[error("invariant dimension came out as {0}, which is not a nonnegative integer")]
    NonIntegerResult(String),
    #[error("singular point {point:?} found modulo {prime}")]
    SingularPointFound { prime: u64, point: [u64; 4] },
    #[error("surface polynomial must be nonzero and homogeneous of degree 1..=8")]
    InvalidSurface,
    #[error("bound formula needs degree >= {min}, got {got}")]
    DegreeBelowDomain { min: u32, got: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Miyaoka's bound: a smooth degree-`d` surface in `P³` contains at most
/// `2d(d−2)` pairwise disjoint lines. Defined for `d ≥ 3`.
pub fn miyaoka_bound(d: u32) -> Result<u64, CertifyError> {
    if d < 3 {
        return Err(CertifyError::DegreeBelowDomain { min: 3, got: d });
    }
    Ok(2 * d as u64 * (d as u64 - 2))
}

/// The previously known record `d(d−2)+2` of disjoint lines on a smooth
/// degree-`d` surface. Defined for `d ≥ 5`.
pub fn rams_bound(d: u32) -> Result<u64, CertifyError> {
    if d < 5 {
        return Err(CertifyError::DegreeBelowDomain { min: 5, got: d });
    }
    Ok(d as u64 * (d as u64 - 2) + 2)
}

/// True iff `p ∘ g = p` exactly for every generator; invariance under the
/// generators implies invariance under the whole group.
pub fn verify_invariance(p: &Poly, gens: &GeneratorSet) -> bool {
    gens.matrices.iter().all(|g| &p.compose_linear(g) == p)
}

/// Witness of a failed disjointness certificate: the first offending pair by
/// index order.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DisjointnessFailure {
    Duplicate { first: usize, second: usize },
    Intersecting { first: usize, second: usize },
}

/// Outcome of checking all unordered pairs of a line family.
#[derive(Clone, Debug, Serialize)]
pub struct DisjointnessCertificate {
    pub line_count: usize,
    pub pairs_checked: u64,
    pub failure: Option<DisjointnessFailure>,
}

impl DisjointnessCertificate {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that the lines are pairwise distinct and pairwise disjoint.
///
/// Distinctness is a precondition of the family claim, so a duplicate is a
/// failure outcome, not an error. The pair sweep is parallel; the witness is
/// the smallest offending pair, independent of scheduling.
pub fn verify_disjoint_family(lines: &[Line]) -> DisjointnessCertificate {
    let mut seen: std::collections::HashMap<&Line, usize> = std::collections::HashMap::new();
    for (j, line) in lines.iter().enumerate() {
        if let Some(&i) = seen.get(line) {
            return DisjointnessCertificate {
                line_count: lines.len(),
                pairs_checked: 0,
                failure: Some(DisjointnessFailure::Duplicate {
                    first: i,
                    second: j,
                }),
            };
        }
        seen.insert(line, j);
    }
    let n = lines.len();
    let intersecting = (0..n)
        .into_par_iter()
        .filter_map(|i| {
            ((i + 1)..n)
                .find(|&j| !geom::lines_disjoint(&lines[i], &lines[j]))
                .map(|j| (i, j))
        })
        .min();
    DisjointnessCertificate {
        line_count: n,
        pairs_checked: (n as u64) * (n as u64).saturating_sub(1) / 2,
        failure: intersecting.map(|(i, j)| DisjointnessFailure::Intersecting {
            first: i,
            second: j,
        }),
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    Pass,
    Fail,
}

/// One verified claim: stable id, status, witness data, wall time.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: String,
    pub status: ClaimStatus,
    pub witness: serde_json::Value,
    pub millis: u64,
}

impl Claim {
    pub fn passed(&self) -> bool {
        self.status == ClaimStatus::Pass
    }

    fn summary(&self) -> String {
        self.witness
            .get("summary")
            .and_then(|v| v.as_str())
            .unwrap_or_default()
            .to_string()
    }
}

/// Structured record of a verification run.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub claims: Vec<Claim>,
    /// Prime accepted by the smoothness certificate, when that claim ran.
    pub prime: Option<u64>,
    pub engine_version: String,
}

impl CertificateReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(Claim::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per claim, then a verdict line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for claim in &self.claims {
            let status = match claim.status {
                ClaimStatus::Pass => "PASS",
                ClaimStatus::Fail => "FAIL",
            };
            out.push_str(&format!(
                "[{status}] {} — {} ({} ms)\n",
                claim.id,
                claim.summary(),
                claim.millis
            ));
        }
        let total = self.claims.len();
        let failed = self.claims.iter().filter(|c| !c.passed()).count();
        let noun = if total == 1 { "claim" } else { "claims" };
        if failed == 0 {
            out.push_str(&format!("all {total} {noun} passed\n"));
        } else {
            out.push_str(&format!("{failed} of {total} {noun} FAILED\n"));
        }
        out
    }
}

/// Shared state for a verification run: the surface, the generator sets,
/// caps, and lazily computed artifacts (closures, orbits, the 96-family).
///
/// Heavy artifacts are computed once and reused by every check that needs
/// them; checks receive `&mut` access purely for this memoization.
pub struct VerifyContext {
    octic: Poly,
    g31: GeneratorSet,
    ab: GeneratorSet,
    closure_cap: usize,
    orbit_cap: usize,
    smoothness_primes: Vec<u64>,
    recorded_prime: Option<u64>,
    g31_closure: Option<Result<GroupClosure, GroupError>>,
    ab_closure: Option<Result<GroupClosure, GroupError>>,
    orbit_160: Option<Result<Vec<Line>, GroupError>>,
    orbit_192: Option<Result<Vec<Line>, GroupError>>,
    family_96: Option<Result<Vec<Line>, GroupError>>,
}

impl Default for VerifyContext {
    fn default() -> Self {
        Self::new()
    }
}

impl VerifyContext {
    pub fn new() -> Self {
        VerifyContext {
            octic: build_maschke_f(),
            g31: builtin_generators(BuiltinGenerators::G31),
            ab: builtin_generators(BuiltinGenerators::AB),
            closure_cap: DEFAULT_CLOSURE_CAP,
            orbit_cap: DEFAULT_ORBIT_CAP,
            smoothness_primes: DEFAULT_SMOOTHNESS_PRIMES.to_vec(),
            recorded_prime: None,
            g31_closure: None,
            ab_closure: None,
            orbit_160: None,
            orbit_192: None,
            family_96: None,
        }
    }

    /// Replaces the surface polynomial (used by perturbation tests).
    pub fn with_octic(mut self, octic: Poly) -> Self {
        self.octic = octic;
        self
    }

    /// Replaces the two-element subgroup generators (perturbation tests).
    pub fn with_ab_generators(mut self, gens: GeneratorSet) -> Self {
        self.ab = gens;
        self.ab_closure = None;
        self.family_96 = None;
        self
    }

    pub fn with_closure_cap(mut self, cap: usize) -> Self {
        self.closure_cap = cap;
        self
    }

    pub fn with_smoothness_primes(mut self, primes: Vec<u64>) -> Self {
        self.smoothness_primes = primes;
        self
    }

    pub fn octic(&self) -> &Poly {
        &self.octic
    }

    pub fn g31_generators(&self) -> &GeneratorSet {
        &self.g31
    }

    pub fn ab_generators(&self) -> &GeneratorSet {
        &self.ab
    }

    pub fn smoothness_primes(&self) -> &[u64] {
        &self.smoothness_primes
    }

    /// Prime recorded by the smoothness check during this run, if any.
    pub fn recorded_prime(&self) -> Option<u64> {
        self.recorded_prime
    }

    pub(crate) fn record_prime(&mut self, prime: Option<u64>) {
        self.recorded_prime = prime;
    }

    pub fn g31_closure(&mut self) -> Result<&GroupClosure, GroupError> {
        if self.g31_closure.is_none() {
            self.g31_closure = Some(closure(&self.g31, self.closure_cap));
        }
        self.g31_closure
            .as_ref()
            .unwrap()
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn ab_closure(&mut self) -> Result<&GroupClosure, GroupError> {
        if self.ab_closure.is_none() {
            self.ab_closure = Some(closure(&self.ab, self.closure_cap));
        }
        self.ab_closure
            .as_ref()
            .unwrap()
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn orbit_160(&mut self) -> Result<Vec<Line>, GroupError> {
        if self.orbit_160.is_none() {
            self.orbit_160 = Some(orbit(
                &self.g31,
                geom::line_160(),
                geom::act,
                self.orbit_cap,
            ));
        }
        self.orbit_160.as_ref().unwrap().clone()
    }

    pub fn orbit_192(&mut self) -> Result<Vec<Line>, GroupError> {
        if self.orbit_192.is_none() {
            self.orbit_192 = Some(orbit(
                &self.g31,
                geom::line_192(),
                geom::act,
                self.orbit_cap,
            ));
        }
        self.orbit_192.as_ref().unwrap().clone()
    }

    /// The orbit of the 192-seed under the order-1152 subgroup generators:
    /// the candidate family of 96 pairwise disjoint lines.
    pub fn family_96(&mut self) -> Result<Vec<Line>, GroupError> {
        if self.family_96.is_none() {
            self.family_96 = Some(orbit(&self.ab, geom::line_192(), geom::act, self.orbit_cap));
        }
        self.family_96.as_ref().unwrap().clone()
    }

    /// Both orbits concatenated: the full line configuration.
    pub fn all_lines(&mut self) -> Result<Vec<Line>, GroupError> {
        let mut lines = self.orbit_160()?;
        lines.extend(self.orbit_192()?);
        Ok(lines)
    }
}

impl fmt::Debug for VerifyContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VerifyContext")
            .field("closure_cap", &self.closure_cap)
            .field("smoothness_primes", &self.smoothness_primes)
            .finish_non_exhaustive()
    }
}

/// Runs the given checks in order against one context, timing each.
pub fn run_checks(cx: &mut VerifyContext, checks: Vec<Box<dyn Check>>) -> CertificateReport {
    let mut claims = Vec::with_capacity(checks.len());
    for check in checks {
        let started = std::time::Instant::now();
        let outcome = check.run(cx);
        claims.push(Claim {
            id: check.id(),
            status: if outcome.pass {
                ClaimStatus::Pass
            } else {
                ClaimStatus::Fail
            },
            witness: outcome.witness,
            millis: started.elapsed().as_millis() as u64,
        });
    }
    CertificateReport {
        claims,
        prime: cx.recorded_prime(),
        engine_version: crate::ENGINE_VERSION.to_string(),
    }
}

/// Runs the full fixed catalogue against a context.
pub fn run_catalogue(cx: &mut VerifyContext) -> CertificateReport {
    let report = run_checks(cx, catalogue());
    debug_assert_eq!(
        report
            .claims
            .iter()
            .map(|c| c.id.clone())
            .collect::<HashSet<_>>()
            .len(),
        report.claims.len(),
        "claim ids are unique"
    );
    report
}

/// The default engine run: the built-in surface and generators, every claim
/// in the catalogue.
pub fn full_report() -> CertificateReport {
    run_catalogue(&mut VerifyContext::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::FieldElement;
    use crate::geom::{act, line_160};
    use crate::polyalg::{sigma4, Monomial};

    #[test]
    fn bound_formulas() {
        assert_eq!(miyaoka_bound(8).unwrap(), 96);
        assert_eq!(miyaoka_bound(3).unwrap(), 6);
        assert_eq!(miyaoka_bound(4).unwrap(), 16);
        assert!(matches!(
            miyaoka_bound(2),
            Err(CertifyError::DegreeBelowDomain { min: 3, got: 2 })
        ));
        assert_eq!(rams_bound(8).unwrap(), 50);
        assert_eq!(rams_bound(5).unwrap(), 17);
        assert_eq!(rams_bound(7).unwrap(), 37);
        assert!(matches!(
            rams_bound(4),
            Err(CertifyError::DegreeBelowDomain { min: 5, got: 4 })
        ));
    }

    #[test]
    fn octic_is_invariant_under_both_generator_sets() {
        let f = build_maschke_f();
        assert!(verify_invariance(
            &f,
            &builtin_generators(BuiltinGenerators::G31)
        ));
        assert!(verify_invariance(
            &f,
            &builtin_generators(BuiltinGenerators::AB)
        ));
    }

    #[test]
    fn power_sum_is_not_invariant_under_averaging_reflection() {
        // composing with the dense reflection produces cross terms
        let p = sigma4(Monomial::new([8, 0, 0, 0]));
        let g31 = builtin_generators(BuiltinGenerators::G31);
        let only_s4 = GeneratorSet::new("s4", vec![g31.matrices[3].clone()]).unwrap();
        assert!(!verify_invariance(&p, &only_s4));
    }

    #[test]
    fn disjoint_family_trivial_cases() {
        let single = vec![line_160()];
        let cert = verify_disjoint_family(&single);
        assert!(cert.passed());
        assert_eq!(cert.pairs_checked, 0);

        let cert = verify_disjoint_family(&[]);
        assert!(cert.passed());
        assert_eq!(cert.pairs_checked, 0);
    }

    #[test]
    fn duplicate_line_fails_distinctness() {
        let l = line_160();
        let cert = verify_disjoint_family(&[l.clone(), l]);
        assert_eq!(
            cert.failure,
            Some(DisjointnessFailure::Duplicate {
                first: 0,
                second: 1
            })
        );
        assert_eq!(cert.pairs_checked, 0);
        assert!(!cert.passed());
    }

    #[test]
    fn intersecting_pair_is_witnessed() {
        let g31 = builtin_generators(BuiltinGenerators::G31);
        let l = line_160();
        let image = act(&g31.matrices[4], &l);
        let cert = verify_disjoint_family(&[l, image]);
        assert_eq!(
            cert.failure,
            Some(DisjointnessFailure::Intersecting {
                first: 0,
                second: 1
            })
        );
        assert_eq!(cert.pairs_checked, 1);
    }

    #[test]
    fn context_memoizes_orbits() {
        let mut cx = VerifyContext::new();
        let first = cx.orbit_160().unwrap();
        let second = cx.orbit_160().unwrap();
        assert_eq!(first.len(), 160);
        assert_eq!(first, second);
    }

    #[test]
    fn perturbed_octic_loses_invariance() {
        // nudging the mixed coefficient from 14 to 15 breaks invariance
        let perturbed =
            &build_maschke_f() + &Poly::monomial(Monomial::new([4, 4, 0, 0]), FieldElement::one());
        assert_eq!(
            perturbed.coefficient(&Monomial::new([4, 4, 0, 0])),
            FieldElement::from_int(15)
        );
        assert!(!verify_invariance(
            &perturbed,
            &builtin_generators(BuiltinGenerators::G31)
        ));
    }
}
