//! Lines in `P³` over `K`.
//!
//! A line is stored as the reduced row echelon form of a basis of its
//! underlying 2-plane in `C⁴`. RREF is a unique representative, so equality
//! and hashing are entrywise and orbit deduplication costs one hash lookup.
//! Storing the span (kernel side) rather than the cutting forms means the
//! group action is direct matrix application, with no inversions during
//! orbit walks.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactfield::FieldElement;
use crate::groupcore::MatrixK;
use crate::polyalg::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("the two linear forms are proportional")]
    DependentForms,
    #[error("the spanning rows are dependent (rank < 2)")]
    DependentSpan,
    #[error("projective points must be nonzero")]
    ZeroPoint,
}

/// Reduced row echelon form in place; returns the rank. Rows of zeros end up
/// at the bottom, pivots are 1 with zeros above and below.
#[allow(clippy::needless_range_loop)] // elimination reads one row while writing another
pub(crate) fn rref(rows: &mut [[FieldElement; 4]]) -> usize {
    let mut pivot_row = 0;
    for col in 0..4 {
        let Some(src) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let inv = rows[pivot_row][col].inv().expect("pivot is nonzero");
        for c in col..4 {
            rows[pivot_row][c] = &rows[pivot_row][c] * &inv;
        }
        for r in 0..rows.len() {
            if r == pivot_row || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in col..4 {
                let delta = &factor * &rows[pivot_row][c];
                rows[r][c] = &rows[r][c] - &delta;
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    pivot_row
}

/// A point of `P³`, kept with its first nonzero coordinate scaled to 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointP3 {
    coords: [FieldElement; 4],
}

impl PointP3 {
    pub fn new(coords: [FieldElement; 4]) -> Result<Self, GeomError> {
        let Some(first) = coords.iter().position(|c| !c.is_zero()) else {
            return Err(GeomError::ZeroPoint);
        };
        let inv = coords[first].inv().expect("leading coordinate is nonzero");
        Ok(PointP3 {
            coords: std::array::from_fn(|k| &coords[k] * &inv),
        })
    }

    pub fn coords(&self) -> &[FieldElement; 4] {
        &self.coords
    }

    pub fn transformed(&self, g: &MatrixK) -> Result<Self, GeomError> {
        PointP3::new(g.mul_vec(&self.coords))
    }
}

/// A line of `P³`: the unique RREF basis of its underlying 2-plane.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    span: [[FieldElement; 4]; 2],
}

impl Line {
    /// Canonicalizes two spanning rows. Errors if they span a rank-1 space.
    pub fn from_span_rows(rows: [[FieldElement; 4]; 2]) -> Result<Self, GeomError> {
        let mut work = rows;
        if rref(&mut work) != 2 {
            return Err(GeomError::DependentSpan);
        }
        Ok(Line { span: work })
    }

    /// The line cut out by two independent linear forms: the solution set of
    /// `form1 = form2 = 0`, i.e. the kernel of the 2×4 coefficient matrix.
    pub fn from_forms(
        form1: &[FieldElement; 4],
        form2: &[FieldElement; 4],
    ) -> Result<Self, GeomError> {
        let mut work = [form1.clone(), form2.clone()];
        if rref(&mut work) != 2 {
            return Err(GeomError::DependentForms);
        }
        let pivots: Vec<usize> = (0..2)
            .map(|r| {
                work[r]
                    .iter()
                    .position(|c| !c.is_zero())
                    .expect("RREF row has a pivot")
            })
            .collect();
        let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
        debug_assert_eq!(free.len(), 2);
        let kernel_vector = |fc: usize| -> [FieldElement; 4] {
            std::array::from_fn(|k| {
                if k == fc {
                    FieldElement::one()
                } else if let Some(r) = pivots.iter().position(|&p| p == k) {
                    -&work[r][fc]
                } else {
                    FieldElement::zero()
                }
            })
        };
        Line::from_span_rows([kernel_vector(free[0]), kernel_vector(free[1])])
            .map_err(|_| GeomError::DependentForms)
    }

    pub fn span(&self) -> &[[FieldElement; 4]; 2] {
        &self.span
    }

    /// True iff the point lies on this line (its vector is in the 2-plane).
    pub fn contains_point(&self, p: &PointP3) -> bool {
        let mut work = [
            self.span[0].clone(),
            self.span[1].clone(),
            p.coords().clone(),
        ];
        rref(&mut work) == 2
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Line[({}); ({})]",
            self.span[0]
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            self.span[1]
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

#[derive(Serialize, Deserialize)]
struct LineWire {
    span: [[FieldElement; 4]; 2],
}

impl Serialize for Line {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LineWire {
            span: self.span.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = LineWire::deserialize(deserializer)?;
        Line::from_span_rows(wire.span).map_err(D::Error::custom)
    }
}

/// Image of a line under an invertible matrix: apply `g` to each spanning
/// vector and re-canonicalize.
pub fn act(g: &MatrixK, line: &Line) -> Line {
    let rows = [g.mul_vec(&line.span[0]), g.mul_vec(&line.span[1])];
    Line::from_span_rows(rows).expect("invertible matrices preserve rank")
}

/// True iff the lines do not meet in `P³`: the stacked 4×4 span matrix has
/// nonzero determinant, so the two 2-planes intersect only in 0.
pub fn lines_disjoint(a: &Line, b: &Line) -> bool {
    let stack = MatrixK::from_rows([
        a.span[0].clone(),
        a.span[1].clone(),
        b.span[0].clone(),
        b.span[1].clone(),
    ]);
    !stack.det().is_zero()
}

/// True iff the line lies on the surface `p = 0`, i.e. the degree-8
/// restriction of `p` to the line vanishes identically.
///
/// Requires `p` homogeneous of degree 8 (the canonical span rows are always
/// independent, so restriction cannot degenerate).
pub fn line_on_surface(line: &Line, p: &Poly) -> bool {
    p.restrict_to_line(&line.span[0], &line.span[1])
        .expect("surface polynomial must be a homogeneous octic")
        .is_zero()
}

/// `(i+1)(√n+1)` for the two seed-line displays.
fn unit_times_radical_plus_one(radical: FieldElement) -> FieldElement {
    let one = FieldElement::one();
    &(&FieldElement::i() + &one) * &(&radical + &one)
}

/// Seed line of the 160-orbit: `2x + (i+1)(√3+1)y = 0`,
/// `2z + (i+1)(√3+1)t = 0`.
pub fn line_160() -> Line {
    let two = FieldElement::from_int(2);
    let zero = FieldElement::zero;
    let c = unit_times_radical_plus_one(FieldElement::sqrt3());
    let form1 = [two.clone(), c.clone(), zero(), zero()];
    let form2 = [zero(), zero(), two, c];
    Line::from_forms(&form1, &form2).expect("seed forms are independent")
}

/// Seed line of the 192-orbit: `(i+1)(√5+1)x − 2(y+z) = 0`,
/// `2(y−z) + (i−1)(√5+1)t = 0`.
pub fn line_192() -> Line {
    let two = FieldElement::from_int(2);
    let zero = FieldElement::zero;
    let c = unit_times_radical_plus_one(FieldElement::sqrt5());
    let one = FieldElement::one();
    let d = &(&FieldElement::i() - &one) * &(&FieldElement::sqrt5() + &one);
    let form1 = [c, -&two, -&two, zero()];
    let form2 = [zero(), two.clone(), -&two, d];
    Line::from_forms(&form1, &form2).expect("seed forms are independent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;
    use crate::groupcore::{builtin_generators, BuiltinGenerators};
    use crate::polyalg::build_maschke_f;

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    fn coordinate_line(i: usize, j: usize) -> Line {
        let unit = |k: usize| -> [FieldElement; 4] {
            std::array::from_fn(|c| if c == k { fe(1) } else { fe(0) })
        };
        Line::from_span_rows([unit(i), unit(j)]).unwrap()
    }

    #[test]
    fn kernel_of_coordinate_forms() {
        let x = [fe(1), fe(0), fe(0), fe(0)];
        let y = [fe(0), fe(1), fe(0), fe(0)];
        let line = Line::from_forms(&x, &y).unwrap();
        assert_eq!(line, coordinate_line(2, 3));
    }

    #[test]
    fn dependent_forms_are_rejected() {
        let x = [fe(1), fe(0), fe(0), fe(0)];
        let x2 = [fe(2), fe(0), fe(0), fe(0)];
        assert_eq!(
            Line::from_forms(&x, &x2).unwrap_err(),
            GeomError::DependentForms
        );
    }

    #[test]
    fn seed_line_160_contains_expected_point() {
        let c = unit_times_radical_plus_one(FieldElement::sqrt3());
        let p = PointP3::new([-&c, fe(2), fe(0), fe(0)]).unwrap();
        assert!(line_160().contains_point(&p));
    }

    #[test]
    fn seed_line_192_has_rank_two_span() {
        let line = line_192();
        let mut rows = line.span().clone();
        assert_eq!(rref(&mut rows), 2);
        assert_eq!(&rows, line.span(), "canonical form is RREF-stable");
    }

    #[test]
    fn act_by_identity_fixes_lines() {
        let l = line_160();
        assert_eq!(act(&MatrixK::identity(), &l), l);
    }

    #[test]
    fn act_by_minus_identity_fixes_lines() {
        let minus = MatrixK::identity().scaled(&fe(-1));
        for l in [line_160(), line_192(), coordinate_line(0, 2)] {
            assert_eq!(act(&minus, &l), l);
        }
    }

    #[test]
    fn act_is_compatible_with_products() {
        let g31 = builtin_generators(BuiltinGenerators::G31);
        let g = &g31.matrices[2];
        let h = &g31.matrices[3];
        let l = line_192();
        assert_eq!(act(&(g * h), &l), act(g, &act(h, &l)));
    }

    #[test]
    fn equal_lines_are_not_disjoint() {
        let l = line_160();
        assert!(!lines_disjoint(&l, &l));
    }

    #[test]
    fn coordinate_lines_disjoint() {
        assert!(lines_disjoint(
            &coordinate_line(0, 1),
            &coordinate_line(2, 3)
        ));
        assert!(!lines_disjoint(
            &coordinate_line(0, 1),
            &coordinate_line(1, 2)
        ));
    }

    #[test]
    fn disjointness_is_symmetric() {
        let pairs = [
            (line_160(), line_192()),
            (coordinate_line(0, 1), coordinate_line(2, 3)),
            (coordinate_line(0, 1), coordinate_line(1, 2)),
        ];
        for (a, b) in pairs {
            assert_eq!(lines_disjoint(&a, &b), lines_disjoint(&b, &a));
        }
    }

    #[test]
    fn action_preserves_incidence() {
        let f = build_maschke_f();
        let g31 = builtin_generators(BuiltinGenerators::G31);
        for g in &g31.matrices {
            for l in [line_160(), line_192(), coordinate_line(0, 3)] {
                assert_eq!(line_on_surface(&act(g, &l), &f), line_on_surface(&l, &f));
            }
        }
    }

    #[test]
    fn sign_flip_image_of_seed_line_meets_it() {
        let g31 = builtin_generators(BuiltinGenerators::G31);
        let l = line_160();
        let image = act(&g31.matrices[4], &l);
        assert_ne!(image, l);
        assert!(!lines_disjoint(&l, &image));
        // the common point (0 : 0 : (i+1)(√3+1) : −2)
        let c = unit_times_radical_plus_one(FieldElement::sqrt3());
        let common = PointP3::new([fe(0), fe(0), c, fe(-2)]).unwrap();
        assert!(l.contains_point(&common));
        assert!(image.contains_point(&common));
    }

    #[test]
    fn seed_lines_lie_on_the_octic() {
        let f = build_maschke_f();
        assert!(line_on_surface(&line_160(), &f));
        assert!(line_on_surface(&line_192(), &f));
    }

    #[test]
    fn coordinate_line_is_off_the_octic() {
        let f = build_maschke_f();
        assert!(!line_on_surface(&coordinate_line(0, 1), &f));
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let l = line_192();
        let again = Line::from_span_rows(l.span().clone()).unwrap();
        assert_eq!(l, again);
    }

    #[test]
    fn zero_point_rejected() {
        assert_eq!(
            PointP3::new([fe(0), fe(0), fe(0), fe(0)]).unwrap_err(),
            GeomError::ZeroPoint
        );
    }

    #[test]
    fn point_canonical_scaling() {
        let p = PointP3::new([fe(0), fe(3), fe(6), fe(0)]).unwrap();
        assert_eq!(p.coords(), &[fe(0), fe(1), fe(2), fe(0)]);
        let q = PointP3::new([fe(0), FieldElement::from_rational(rat(-1)), fe(-2), fe(0)]).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn line_json_round_trip() {
        let l = line_192();
        let json = serde_json::to_string(&l).unwrap();
        assert!(json.starts_with(r#"{"span":"#));
        let back: Line = serde_json::from_str(&json).unwrap();
        assert_eq!(l, back);
    }
}
