//! The claim catalogue: every certified claim as a strategy object behind
//! the [`Check`] trait, registered in a fixed order and addressable by id.
//!
//! A check never panics on a mathematical failure — it reports `pass: false`
//! with a witness, and upstream errors (a blown closure cap, a bad prime)
//! become failures too, so a report always completes.

use std::collections::HashSet;

use serde_json::{json, Value};

use crate::geom::{line_on_surface, Line};
use crate::groupcore::MatrixK;

use super::{
    miyaoka_bound, molien_invariant_dimension, rams_bound, smoothness_certificate,
    verify_disjoint_family, verify_invariance, VerifyContext,
};

/// A single certifiable claim, selected by id.
pub trait Check {
    /// Stable identifier; catalogue order and ids never change meaning.
    fn id(&self) -> String;
    /// Runs the claim against the shared context.
    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome;
}

/// Result of one check: pass/fail plus a witness object whose `summary`
/// field carries the human-readable one-liner.
pub struct CheckOutcome {
    pub pass: bool,
    pub witness: Value,
}

impl CheckOutcome {
    fn pass(summary: String, mut extra: Value) -> Self {
        merge_summary(&mut extra, summary);
        CheckOutcome {
            pass: true,
            witness: extra,
        }
    }

    fn fail(summary: String, mut extra: Value) -> Self {
        merge_summary(&mut extra, summary);
        CheckOutcome {
            pass: false,
            witness: extra,
        }
    }

    fn from_error(err: impl std::fmt::Display) -> Self {
        CheckOutcome {
            pass: false,
            witness: json!({ "summary": format!("could not evaluate claim: {err}") }),
        }
    }
}

fn merge_summary(witness: &mut Value, summary: String) {
    match witness {
        Value::Object(map) => {
            map.insert("summary".into(), Value::String(summary));
        }
        other => {
            *other = json!({ "summary": summary, "detail": other.clone() });
        }
    }
}

/// The fixed catalogue, in report order.
pub fn catalogue() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(GeneratorsInvolutive),
        Box::new(ClosureOrder {
            id: "closure-ab-order",
            which: WhichGroup::Ab,
            expected: 1152,
        }),
        Box::new(ClosureOrder {
            id: "closure-g31-order",
            which: WhichGroup::G31,
            expected: 46080,
        }),
        Box::new(MembershipAbInG31),
        Box::new(OcticInvariance),
        Box::new(MolienDimension {
            degree: 8,
            expected: Some(1),
        }),
        Box::new(MolienDimension {
            degree: 1,
            expected: Some(0),
        }),
        Box::new(OrbitSize {
            id: "orbit-160-size",
            which: WhichOrbit::L160,
            expected: 160,
        }),
        Box::new(OrbitSize {
            id: "orbit-192-size",
            which: WhichOrbit::L192,
            expected: 192,
        }),
        Box::new(OrbitPartition),
        Box::new(IncidenceAllLines),
        Box::new(FamilySize),
        Box::new(FamilyDisjoint),
        Box::new(Smoothness),
        Box::new(MiyaokaOptimality),
    ]
}

/// Ids of the fixed catalogue, in order.
pub fn catalogue_ids() -> Vec<String> {
    catalogue().iter().map(|c| c.id()).collect()
}

/// Looks a check up by catalogue id. `molien-degree-<d>` resolves for any
/// degree within the cap, with an asserted expectation only at 1 and 8.
pub fn check_by_id(id: &str) -> Option<Box<dyn Check>> {
    if let Some(rest) = id.strip_prefix("molien-degree-") {
        let degree: u32 = rest.parse().ok()?;
        if degree > super::MAX_MOLIEN_DEGREE {
            return None;
        }
        let expected = match degree {
            8 => Some(1),
            1 => Some(0),
            _ => None,
        };
        return Some(Box::new(MolienDimension { degree, expected }));
    }
    catalogue().into_iter().find(|c| c.id() == id)
}

struct GeneratorsInvolutive;

impl Check for GeneratorsInvolutive {
    fn id(&self) -> String {
        "generators-involutive".into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let identity = MatrixK::identity();
        let failing: Vec<usize> = cx
            .g31_generators()
            .matrices
            .iter()
            .enumerate()
            .filter(|(_, s)| *s * *s != identity)
            .map(|(k, _)| k)
            .collect();
        let count = cx.g31_generators().len();
        if failing.is_empty() {
            CheckOutcome::pass(
                format!("all {count} reflection generators square to the identity"),
                json!({ "generators": count }),
            )
        } else {
            CheckOutcome::fail(
                format!("generators at indices {failing:?} are not involutions"),
                json!({ "failing_indices": failing }),
            )
        }
    }
}

#[derive(Clone, Copy)]
enum WhichGroup {
    G31,
    Ab,
}

struct ClosureOrder {
    id: &'static str,
    which: WhichGroup,
    expected: usize,
}

impl Check for ClosureOrder {
    fn id(&self) -> String {
        self.id.into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let result = match self.which {
            WhichGroup::G31 => cx.g31_closure(),
            WhichGroup::Ab => cx.ab_closure(),
        };
        let order = match result {
            Ok(closure) => closure.order(),
            Err(err) => return CheckOutcome::from_error(err),
        };
        let witness = json!({ "order": order, "expected": self.expected });
        if order == self.expected {
            CheckOutcome::pass(
                format!("group closure has exactly {order} elements"),
                witness,
            )
        } else {
            CheckOutcome::fail(
                format!("closure has {order} elements, expected {}", self.expected),
                witness,
            )
        }
    }
}

struct MembershipAbInG31;

impl Check for MembershipAbInG31 {
    fn id(&self) -> String {
        "membership-ab-in-g31".into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let candidates: Vec<MatrixK> = cx.ab_generators().matrices.clone();
        let closure = match cx.g31_closure() {
            Ok(c) => c,
            Err(err) => return CheckOutcome::from_error(err),
        };
        let missing: Vec<usize> = candidates
            .iter()
            .enumerate()
            .filter(|(_, m)| !closure.contains(m))
            .map(|(k, _)| k)
            .collect();
        if missing.is_empty() {
            CheckOutcome::pass(
                "both subgroup generators are elements of the reflection group".into(),
                json!({ "checked": candidates.len() }),
            )
        } else {
            CheckOutcome::fail(
                format!("subgroup generators at indices {missing:?} are not elements"),
                json!({ "missing_indices": missing }),
            )
        }
    }
}

struct OcticInvariance;

impl Check for OcticInvariance {
    fn id(&self) -> String {
        "invariance-octic".into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let under_g31 = verify_invariance(cx.octic(), cx.g31_generators());
        let under_ab = verify_invariance(cx.octic(), cx.ab_generators());
        let checked = cx.g31_generators().len() + cx.ab_generators().len();
        if under_g31 && under_ab {
            CheckOutcome::pass(
                format!("the octic is fixed by composition with all {checked} generators"),
                json!({ "generators_checked": checked }),
            )
        } else {
            CheckOutcome::fail(
                "composition with a generator changed the polynomial".into(),
                json!({ "fixed_by_reflections": under_g31, "fixed_by_subgroup": under_ab }),
            )
        }
    }
}

struct MolienDimension {
    degree: u32,
    /// `None` means report-only: the value is recorded, nothing is asserted.
    expected: Option<u64>,
}

impl Check for MolienDimension {
    fn id(&self) -> String {
        format!("molien-degree-{}", self.degree)
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let closure = match cx.g31_closure() {
            Ok(c) => c,
            Err(err) => return CheckOutcome::from_error(err),
        };
        let dimension = match molien_invariant_dimension(closure, self.degree) {
            Ok(d) => d,
            Err(err) => return CheckOutcome::from_error(err),
        };
        let witness = json!({
            "degree": self.degree,
            "dimension": dimension,
            "expected": self.expected,
        });
        match self.expected {
            Some(expected) if dimension != expected => CheckOutcome::fail(
                format!(
                    "invariant dimension at degree {} is {dimension}, expected {expected}",
                    self.degree
                ),
                witness,
            ),
            Some(_) => CheckOutcome::pass(
                format!(
                    "invariant dimension at degree {} is exactly {dimension}",
                    self.degree
                ),
                witness,
            ),
            None => CheckOutcome::pass(
                format!(
                    "invariant dimension at degree {} is {dimension} (reported, not asserted)",
                    self.degree
                ),
                witness,
            ),
        }
    }
}

#[derive(Clone, Copy)]
enum WhichOrbit {
    L160,
    L192,
}

struct OrbitSize {
    id: &'static str,
    which: WhichOrbit,
    expected: usize,
}

impl Check for OrbitSize {
    fn id(&self) -> String {
        self.id.into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let orbit = match self.which {
            WhichOrbit::L160 => cx.orbit_160(),
            WhichOrbit::L192 => cx.orbit_192(),
        };
        let orbit = match orbit {
            Ok(o) => o,
            Err(err) => return CheckOutcome::from_error(err),
        };
        let witness = json!({ "size": orbit.len(), "expected": self.expected });
        if orbit.len() == self.expected {
            CheckOutcome::pass(
                format!(
                    "orbit of the seed line has exactly {} elements",
                    orbit.len()
                ),
                witness,
            )
        } else {
            CheckOutcome::fail(
                format!(
                    "orbit has {} elements, expected {}",
                    orbit.len(),
                    self.expected
                ),
                witness,
            )
        }
    }
}

struct OrbitPartition;

impl Check for OrbitPartition {
    fn id(&self) -> String {
        "orbit-partition-352".into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let (orbit_160, orbit_192) = match (cx.orbit_160(), cx.orbit_192()) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(err), _) | (_, Err(err)) => return CheckOutcome::from_error(err),
        };
        let set_160: HashSet<&Line> = orbit_160.iter().collect();
        let overlap = orbit_192.iter().filter(|l| set_160.contains(*l)).count();
        let total = orbit_160.len() + orbit_192.len();
        let witness = json!({
            "orbit_160": orbit_160.len(),
            "orbit_192": orbit_192.len(),
            "overlap": overlap,
            "union": total - overlap,
        });
        if overlap == 0 && total == 352 {
            CheckOutcome::pass(
                "the two orbits are disjoint and together hold 352 lines".into(),
                witness,
            )
        } else {
            CheckOutcome::fail(
                format!(
                    "orbits overlap in {overlap} lines, union {}",
                    total - overlap
                ),
                witness,
            )
        }
    }
}

struct IncidenceAllLines;

impl Check for IncidenceAllLines {
    fn id(&self) -> String {
        "incidence-352-on-surface".into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let lines = match cx.all_lines() {
            Ok(l) => l,
            Err(err) => return CheckOutcome::from_error(err),
        };
        let octic = cx.octic();
        let off_surface: Vec<usize> = lines
            .iter()
            .enumerate()
            .filter(|(_, l)| !line_on_surface(l, octic))
            .map(|(k, _)| k)
            .collect();
        let witness = json!({ "lines": lines.len(), "off_surface": off_surface.len() });
        if off_surface.is_empty() {
            CheckOutcome::pass(
                format!("all {} orbit lines lie on the surface", lines.len()),
                witness,
            )
        } else {
            CheckOutcome::fail(
                format!("{} orbit lines are NOT on the surface", off_surface.len()),
                json!({ "off_surface_indices": off_surface }),
            )
        }
    }
}

struct FamilySize;

impl Check for FamilySize {
    fn id(&self) -> String {
        "family-96-size".into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let family = match cx.family_96() {
            Ok(f) => f,
            Err(err) => return CheckOutcome::from_error(err),
        };
        let orbit_192 = match cx.orbit_192() {
            Ok(o) => o,
            Err(err) => return CheckOutcome::from_error(err),
        };
        let big: HashSet<&Line> = orbit_192.iter().collect();
        let outside = family.iter().filter(|l| !big.contains(*l)).count();
        let witness = json!({
            "family_size": family.len(),
            "outside_192_orbit": outside,
        });
        if family.len() == 96 && outside == 0 {
            CheckOutcome::pass(
                "the subgroup orbit has exactly 96 lines, all inside the 192-orbit".into(),
                witness,
            )
        } else {
            CheckOutcome::fail(
                format!(
                    "subgroup orbit has {} lines ({} outside the 192-orbit)",
                    family.len(),
                    outside
                ),
                witness,
            )
        }
    }
}

struct FamilyDisjoint;

impl Check for FamilyDisjoint {
    fn id(&self) -> String {
        "family-96-disjoint".into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let family = match cx.family_96() {
            Ok(f) => f,
            Err(err) => return CheckOutcome::from_error(err),
        };
        let cert = verify_disjoint_family(&family);
        let witness = serde_json::to_value(&cert).expect("certificate serializes");
        if cert.passed() {
            CheckOutcome::pass(
                format!("{} pairs checked, all disjoint", cert.pairs_checked),
                witness,
            )
        } else {
            CheckOutcome::fail(
                format!("family is not pairwise disjoint: {:?}", cert.failure),
                witness,
            )
        }
    }
}

struct Smoothness;

impl Check for Smoothness {
    fn id(&self) -> String {
        "smoothness".into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let certificate = smoothness_certificate(cx.octic(), cx.smoothness_primes());
        let certificate = match certificate {
            Ok(c) => c,
            Err(err) => return CheckOutcome::from_error(err),
        };
        cx.record_prime(certificate.passed.as_ref().map(|scan| scan.prime));
        let witness = serde_json::to_value(&certificate).expect("certificate serializes");
        match &certificate.passed {
            Some(scan) => CheckOutcome::pass(
                format!(
                    "no singular point among all {} points of the reduction modulo {}",
                    scan.points_scanned, scan.prime
                ),
                witness,
            ),
            None => CheckOutcome::fail(
                "every candidate prime produced a singular point; smoothness unresolved".into(),
                witness,
            ),
        }
    }
}

struct MiyaokaOptimality;

impl Check for MiyaokaOptimality {
    fn id(&self) -> String {
        "miyaoka-optimality".into()
    }

    fn run(&self, cx: &mut VerifyContext) -> CheckOutcome {
        let family_size = match cx.family_96() {
            Ok(f) => f.len() as u64,
            Err(err) => return CheckOutcome::from_error(err),
        };
        let bound = miyaoka_bound(8).expect("8 >= 3");
        let record = rams_bound(8).expect("8 >= 5");
        let witness = json!({
            "family_size": family_size,
            "miyaoka_bound": bound,
            "previous_record": record,
        });
        if family_size == bound && bound == 96 && record == 50 {
            CheckOutcome::pass(
                format!("family size {family_size} meets the bound 2·8·6 = {bound} (previous record {record})"),
                witness,
            )
        } else {
            CheckOutcome::fail(
                format!("family size {family_size} does not meet the bound {bound}"),
                witness,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_ids_are_unique_and_fixed() {
        let ids = catalogue_ids();
        let expected = [
            "generators-involutive",
            "closure-ab-order",
            "closure-g31-order",
            "membership-ab-in-g31",
            "invariance-octic",
            "molien-degree-8",
            "molien-degree-1",
            "orbit-160-size",
            "orbit-192-size",
            "orbit-partition-352",
            "incidence-352-on-surface",
            "family-96-size",
            "family-96-disjoint",
            "smoothness",
            "miyaoka-optimality",
        ];
        assert_eq!(ids, expected);
        let unique: HashSet<&String> = ids.iter().collect();
        assert_eq!(unique.len(), ids.len());
    }

    #[test]
    fn lookup_by_id() {
        assert!(check_by_id("family-96-disjoint").is_some());
        assert!(check_by_id("molien-degree-5").is_some());
        assert!(check_by_id("molien-degree-13").is_none());
        assert!(check_by_id("nonsense").is_none());
    }

    #[test]
    fn fast_checks_pass_on_defaults() {
        // only the claims that need no group closure
        let mut cx = VerifyContext::new();
        for id in [
            "generators-involutive",
            "invariance-octic",
            "orbit-160-size",
            "orbit-192-size",
            "orbit-partition-352",
            "family-96-size",
            "smoothness",
            "miyaoka-optimality",
        ] {
            let check = check_by_id(id).unwrap();
            let outcome = check.run(&mut cx);
            assert!(outcome.pass, "{id} failed: {}", outcome.witness);
        }
    }

    #[test]
    fn blown_cap_fails_gracefully() {
        let mut cx = VerifyContext::new().with_closure_cap(10);
        let outcome = check_by_id("closure-ab-order").unwrap().run(&mut cx);
        assert!(!outcome.pass);
        let summary = outcome.witness["summary"].as_str().unwrap();
        assert!(summary.contains("could not evaluate"), "{summary}");
    }
}
