//! Dimension of the degree-`d` invariants of a finite matrix group via the
//! Molien series: `(1/|G|) · Σ_g [t^d] 1/det(I − t·g)`.
//!
//! Each element contributes the order-`d` coefficient of the inverse of its
//! reversed characteristic polynomial, computed exactly in `K` by power
//! series inversion. The sum runs over every group element — at 46080
//! elements and degree ≤ 12 this is cheap, and skipping conjugacy-class
//! machinery removes an untested subsystem.

use num::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::exactfield::{rat, FieldElement, Rational};
use crate::groupcore::{GroupClosure, MatrixK};

use super::CertifyError;

/// Practical degree cap; the engine only ever asserts degrees 1 and 8.
pub const MAX_MOLIEN_DEGREE: u32 = 12;

/// Coefficients of `det(I − t·g)` (degree ≤ 4, constant term 1), from the
/// power sums `tr(g^k)` via Newton's identities.
fn reversed_char_poly(g: &MatrixK) -> [FieldElement; 5] {
    let g2 = g * g;
    let pair_trace = |a: &MatrixK, b: &MatrixK| {
        // tr(a·b) without forming the product matrix
        let mut acc = FieldElement::zero();
        for r in 0..4 {
            for c in 0..4 {
                if !a.entry(r, c).is_zero() && !b.entry(c, r).is_zero() {
                    acc += &(a.entry(r, c) * b.entry(c, r));
                }
            }
        }
        acc
    };
    let p = [
        FieldElement::zero(), // unused p_0 slot
        g.trace(),
        g2.trace(),
        pair_trace(&g2, g),
        pair_trace(&g2, &g2),
    ];
    // e_k = (1/k) Σ_{i=1..k} (−1)^{i−1} e_{k−i} p_i
    let mut e = [
        FieldElement::one(),
        FieldElement::zero(),
        FieldElement::zero(),
        FieldElement::zero(),
        FieldElement::zero(),
    ];
    for k in 1..=4usize {
        let mut acc = FieldElement::zero();
        for i in 1..=k {
            let term = &e[k - i] * &p[i];
            if i % 2 == 1 {
                acc += &term;
            } else {
                acc += &(-term);
            }
        }
        e[k] = acc.scaled(&rat(k as i64).recip());
    }
    // det(I − t·g) = Σ_k (−1)^k e_k t^k
    std::array::from_fn(|k| if k % 2 == 0 { e[k].clone() } else { -&e[k] })
}

/// `[t^degree] 1/det(I − t·g)` by power series inversion (constant term 1).
fn inverse_series_coefficient(char_poly: &[FieldElement; 5], degree: u32) -> FieldElement {
    debug_assert!(char_poly[0].is_one());
    let mut series = vec![FieldElement::one()];
    for n in 1..=degree as usize {
        let mut acc = FieldElement::zero();
        for k in 1..=n.min(4) {
            if !char_poly[k].is_zero() {
                acc += &(&char_poly[k] * &series[n - k]);
            }
        }
        series.push(-acc);
    }
    series[degree as usize].clone()
}

/// Dimension of the space of degree-`degree` invariant polynomials.
///
/// The Molien average is provably a nonnegative integer; anything else is an
/// arithmetic bug and surfaces as [`CertifyError::NonIntegerResult`].
pub fn molien_invariant_dimension(group: &GroupClosure, degree: u32) -> Result<u64, CertifyError> {
    if degree > MAX_MOLIEN_DEGREE {
        return Err(CertifyError::DegreeTooLarge {
            degree,
            max: MAX_MOLIEN_DEGREE,
        });
    }
    let sum = group
        .elements()
        .par_iter()
        .fold(FieldElement::zero, |mut acc, g| {
            let cp = reversed_char_poly(g);
            acc += &inverse_series_coefficient(&cp, degree);
            acc
        })
        .reduce(FieldElement::zero, |mut a, b| {
            a += &b;
            a
        });
    let average = sum.scaled(&rat(group.order() as i64).recip());
    rational_nonneg_integer(&average)
        .ok_or_else(|| CertifyError::NonIntegerResult(average.to_string()))
}

fn rational_nonneg_integer(value: &FieldElement) -> Option<u64> {
    let r: &Rational = value.as_rational()?;
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    r.numer().to_u64()
}
