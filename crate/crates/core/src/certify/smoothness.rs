//! Smoothness certificate by finite-field reduction.
//!
//! The scan enumerates all `p³ + p² + p + 1` points of `P³(F_p)` and checks
//! that no point simultaneously annihilates the reduced surface polynomial
//! and its four partial derivatives. A singular point modulo one prime says
//! nothing about characteristic 0 — the driver simply retries with the next
//! prime and records the rejection.

use rayon::prelude::*;
use serde::Serialize;

use crate::exactfield::{is_odd_prime, FieldError};
use crate::polyalg::Poly;

use super::CertifyError;

/// Why emptiness of one closed fiber certifies smoothness over C.
pub const SMOOTHNESS_JUSTIFICATION: &str = "The singular locus of the surface is a closed \
subscheme of projective 3-space over the integers, and is proper over Spec Z. If its fiber \
over F_p is empty for a single prime p, its image in Spec Z is a closed set avoiding (p), \
hence a finite set of closed points not containing the generic point. The fiber over Q is \
therefore empty, so the surface is smooth over Q and, by base change, over C.";

/// Primes tried, in order, by the certificate driver.
pub const DEFAULT_SMOOTHNESS_PRIMES: &[u64] = &[5, 7, 11, 13, 17, 19, 23];

/// A passed single-prime scan: no point of `P³(F_p)` lies on the reduced
/// singular locus.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SmoothnessScan {
    pub prime: u64,
    pub points_scanned: u64,
}

/// A prime rejected by the scan, with the singular witness point.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PrimeRejection {
    pub prime: u64,
    pub singular_point: [u64; 4],
}

/// Outcome of the retrying driver: the first passing prime (if any) plus
/// every rejection along the way and the validity argument.
#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessCertificate {
    pub passed: Option<SmoothnessScan>,
    pub rejections: Vec<PrimeRejection>,
    pub justification: &'static str,
}

/// Sparse polynomial with coefficients reduced into `F_p`, zero terms pruned.
struct FpPoly {
    terms: Vec<([u8; 4], u64)>,
    prime: u64,
}

impl FpPoly {
    fn reduce(poly: &Poly, prime: u64) -> Result<Self, FieldError> {
        let mut terms = Vec::with_capacity(poly.term_count());
        for (monomial, coeff) in poly.terms() {
            let reduced = coeff.reduce_mod_p(prime)?;
            if !reduced.is_zero() {
                terms.push((monomial.exponents(), reduced.value()));
            }
        }
        Ok(FpPoly { terms, prime })
    }

    /// Evaluation via a per-value power table (exponents are ≤ 8).
    fn eval(&self, powers: &[[u64; 9]], point: &[u64; 4]) -> u64 {
        let mut acc: u64 = 0;
        for (exps, coeff) in &self.terms {
            let mut term = *coeff;
            for (k, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term * powers[point[k] as usize][e as usize] % self.prime;
                }
            }
            acc = (acc + term) % self.prime;
        }
        acc
    }
}

fn power_table(prime: u64) -> Vec<[u64; 9]> {
    (0..prime)
        .map(|v| {
            let mut row = [1u64; 9];
            for e in 1..9 {
                row[e] = row[e - 1] * v % prime;
            }
            row
        })
        .collect()
}

/// Scans every point of `P³(F_p)`. Passes iff no point annihilates `f` and
/// all four partials simultaneously; a found point is returned as
/// [`CertifyError::SingularPointFound`] — a rejection of the prime, not a
/// refutation of smoothness.
pub fn smoothness_scan(f: &Poly, prime: u64) -> Result<SmoothnessScan, CertifyError> {
    if !is_odd_prime(prime) {
        return Err(CertifyError::Field(FieldError::NotOddPrime(prime)));
    }
    // exponents above 8 would overrun the power table; nothing in the engine
    // needs them
    f.homogeneous_degree()
        .filter(|&d| d > 0 && d <= 8)
        .ok_or(CertifyError::InvalidSurface)?;

    let reduced: Vec<FpPoly> = std::iter::once(FpPoly::reduce(f, prime))
        .chain((0..4).map(|var| FpPoly::reduce(&f.partial_derivative(var), prime)))
        .collect::<Result<_, _>>()
        .map_err(CertifyError::Field)?;
    let powers = power_table(prime);

    let singular = |point: [u64; 4]| reduced.iter().all(|p| p.eval(&powers, &point) == 0);

    // canonical representatives: leading coordinate 1, earlier coordinates 0
    let p = prime;
    let affine_chart = (0..p * p * p).into_par_iter().find_map_first(|idx| {
        let point = [1, idx / (p * p), idx / p % p, idx % p];
        singular(point).then_some(point)
    });
    let witness = affine_chart.or_else(|| {
        let mut tail: Vec<[u64; 4]> = Vec::new();
        for y in 0..p {
            for z in 0..p {
                tail.push([0, 1, y, z]);
            }
        }
        for z in 0..p {
            tail.push([0, 0, 1, z]);
        }
        tail.push([0, 0, 0, 1]);
        tail.into_iter().find(|&pt| singular(pt))
    });

    match witness {
        Some(point) => Err(CertifyError::SingularPointFound { prime, point }),
        None => Ok(SmoothnessScan {
            prime,
            points_scanned: p * p * p + p * p + p + 1,
        }),
    }
}

/// Tries the given primes in order, stopping at the first pass. Singular
/// points are collected as rejections; hard input errors abort.
pub fn smoothness_certificate(
    f: &Poly,
    primes: &[u64],
) -> Result<SmoothnessCertificate, CertifyError> {
    let mut rejections = Vec::new();
    for &prime in primes {
        match smoothness_scan(f, prime) {
            Ok(scan) => {
                return Ok(SmoothnessCertificate {
                    passed: Some(scan),
                    rejections,
                    justification: SMOOTHNESS_JUSTIFICATION,
                })
            }
            Err(CertifyError::SingularPointFound { prime, point }) => {
                rejections.push(PrimeRejection {
                    prime,
                    singular_point: point,
                });
            }
            Err(other) => return Err(other),
        }
    }
    Ok(SmoothnessCertificate {
        passed: None,
        rejections,
        justification: SMOOTHNESS_JUSTIFICATION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::FieldElement;
    use crate::polyalg::{build_maschke_f, Monomial};

    #[test]
    fn octic_scan_at_11_counts_all_points() {
        // 11³ + 11² + 11 + 1 = 1464 points either way the verdict goes
        match smoothness_scan(&build_maschke_f(), 11) {
            Ok(scan) => {
                assert_eq!(scan.prime, 11);
                assert_eq!(scan.points_scanned, 1464);
            }
            Err(CertifyError::SingularPointFound { prime: 11, .. }) => {}
            Err(other) => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn octic_reduction_at_7_is_scanned() {
        // mod 7 both 14 and 168 vanish, leaving x⁸+y⁸+z⁸+t⁸; since x⁷ = x
        // away from 0 in F₇, the partials only vanish jointly at the origin,
        // so the scan must pass.
        let scan = smoothness_scan(&build_maschke_f(), 7).unwrap();
        assert_eq!(scan.points_scanned, 400);
    }

    #[test]
    fn singular_surface_is_rejected_with_witness() {
        // x²y²z²t² is singular everywhere along the coordinate planes
        let squares = Poly::monomial(Monomial::new([2, 2, 2, 2]), FieldElement::from_int(1));
        match smoothness_scan(&squares, 5) {
            Err(CertifyError::SingularPointFound { prime: 5, point }) => {
                assert_eq!(point[0], 1, "witness is a canonical representative");
            }
            other => panic!("expected singular witness, got {other:?}"),
        }
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let x2 = Poly::monomial(Monomial::new([2, 0, 0, 0]), FieldElement::from_int(1));
        // x² is homogeneous but the doubled plane is singular; the zero and
        // non-homogeneous inputs are rejected before any scan
        assert!(matches!(
            smoothness_scan(&Poly::zero(), 5),
            Err(CertifyError::InvalidSurface)
        ));
        let inhomogeneous = &x2 + &Poly::variable(1);
        assert!(matches!(
            smoothness_scan(&inhomogeneous, 5),
            Err(CertifyError::InvalidSurface)
        ));
    }

    #[test]
    fn even_modulus_is_rejected() {
        assert!(matches!(
            smoothness_scan(&build_maschke_f(), 4),
            Err(CertifyError::Field(FieldError::NotOddPrime(4)))
        ));
    }

    #[test]
    fn driver_collects_rejections_until_a_pass() {
        let cert = smoothness_certificate(&build_maschke_f(), DEFAULT_SMOOTHNESS_PRIMES).unwrap();
        let passed = cert.passed.expect("some listed prime must pass");
        assert!(DEFAULT_SMOOTHNESS_PRIMES.contains(&passed.prime));
        // rejections, if any, are exactly the primes before the passing one
        let earlier: Vec<u64> = DEFAULT_SMOOTHNESS_PRIMES
            .iter()
            .copied()
            .take_while(|&p| p != passed.prime)
            .collect();
        assert_eq!(
            cert.rejections.iter().map(|r| r.prime).collect::<Vec<_>>(),
            earlier
        );
    }
}
