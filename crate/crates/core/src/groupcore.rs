//! Exact 4×4 matrix algebra over `K`, the built-in generator sets, group
//! closure by breadth-first multiplication, and generic orbit enumeration.
//!
//! Closure is deliberately brute force: at order 46080 with cheap canonical
//! hashing there is no need for permutation-group machinery, and a plain BFS
//! keeps the correctness surface minimal. Scalar matrices (such as −identity)
//! are kept as distinct elements; projective identification happens only in
//! [`crate::geom`] through line canonicalization.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::exactfield::{ratio, FieldElement};

/// Cap for matrix closures: roughly 2× headroom above the expected 46080.
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;
/// Cap for line orbits: roughly 2× headroom above the expected 352.
pub const DEFAULT_ORBIT_CAP: usize = 1_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("matrix is singular")]
    SingularMatrix,
}

/// 4×4 matrix over `K`. Equality, hashing and ordering are entrywise via the
/// canonical coordinates of [`FieldElement`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixK {
    entries: [[FieldElement; 4]; 4],
}

impl MatrixK {
    pub fn from_rows(entries: [[FieldElement; 4]; 4]) -> Self {
        MatrixK { entries }
    }

    pub fn from_int_rows(rows: [[i64; 4]; 4]) -> Self {
        MatrixK {
            entries: rows.map(|row| row.map(FieldElement::from_int)),
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::from_int_rows([[0; 4]; 4]);
        for k in 0..4 {
            m.entries[k][k] = FieldElement::one();
        }
        m
    }

    pub fn entry(&self, row: usize, col: usize) -> &FieldElement {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[[FieldElement; 4]; 4] {
        &self.entries
    }

    /// Left multiplication by a scalar of `K`.
    pub fn scaled(&self, scalar: &FieldElement) -> Self {
        MatrixK {
            entries: std::array::from_fn(|r| std::array::from_fn(|c| scalar * &self.entries[r][c])),
        }
    }

    pub fn mul_vec(&self, v: &[FieldElement; 4]) -> [FieldElement; 4] {
        std::array::from_fn(|r| {
            let mut acc = FieldElement::zero();
            for (c, coord) in v.iter().enumerate() {
                if !self.entries[r][c].is_zero() && !coord.is_zero() {
                    acc += &(&self.entries[r][c] * coord);
                }
            }
            acc
        })
    }

    pub fn trace(&self) -> FieldElement {
        let mut acc = FieldElement::zero();
        for k in 0..4 {
            acc += &self.entries[k][k];
        }
        acc
    }

    /// Exact determinant by Laplace expansion along the first two rows.
    pub fn det(&self) -> FieldElement {
        // (top column pair, complementary pair, sign)
        const SPLITS: [([usize; 2], [usize; 2], i64); 6] = [
            ([0, 1], [2, 3], 1),
            ([0, 2], [1, 3], -1),
            ([0, 3], [1, 2], 1),
            ([1, 2], [0, 3], 1),
            ([1, 3], [0, 2], -1),
            ([2, 3], [0, 1], 1),
        ];
        let minor = |r0: usize, r1: usize, cols: [usize; 2]| -> FieldElement {
            &(&self.entries[r0][cols[0]] * &self.entries[r1][cols[1]])
                - &(&self.entries[r0][cols[1]] * &self.entries[r1][cols[0]])
        };
        let mut acc = FieldElement::zero();
        for (top, bottom, sign) in SPLITS {
            let term = &minor(0, 1, top) * &minor(2, 3, bottom);
            if sign > 0 {
                acc += &term;
            } else {
                acc += &(-term);
            }
        }
        acc
    }

    /// Exact inverse by Gauss–Jordan elimination over `K`.
    #[allow(clippy::needless_range_loop)] // elimination reads one row while writing another
    pub fn inverse(&self) -> Result<MatrixK, GroupError> {
        let mut work: [[FieldElement; 8]; 4] = std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                if c < 4 {
                    self.entries[r][c].clone()
                } else if c - 4 == r {
                    FieldElement::one()
                } else {
                    FieldElement::zero()
                }
            })
        });
        for col in 0..4 {
            let pivot_row = (col..4)
                .find(|&r| !work[r][col].is_zero())
                .ok_or(GroupError::SingularMatrix)?;
            work.swap(col, pivot_row);
            let pivot_inv = work[col][col].inv().expect("pivot is nonzero");
            for c in col..8 {
                work[col][c] = &work[col][c] * &pivot_inv;
            }
            for r in 0..4 {
                if r == col || work[r][col].is_zero() {
                    continue;
                }
                let factor = work[r][col].clone();
                for c in col..8 {
                    let delta = &factor * &work[col][c];
                    work[r][c] = &work[r][c] - &delta;
                }
            }
        }
        Ok(MatrixK {
            entries: std::array::from_fn(|r| std::array::from_fn(|c| work[r][c + 4].clone())),
        })
    }
}

impl std::ops::Mul for &MatrixK {
    type Output = MatrixK;
    fn mul(self, rhs: &MatrixK) -> MatrixK {
        let entries = std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                let mut acc = FieldElement::zero();
                for k in 0..4 {
                    if !self.entries[r][k].is_zero() && !rhs.entries[k][c].is_zero() {
                        acc += &(&self.entries[r][k] * &rhs.entries[k][c]);
                    }
                }
                acc
            })
        });
        MatrixK { entries }
    }
}

impl fmt::Debug for MatrixK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.entries {
            writeln!(
                f,
                "  [{}]",
                row.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )?;
        }
        write!(f, "]")
    }
}

/// Which built-in generator set to construct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinGenerators {
    /// The five order-2 reflections generating the rank-4 complex reflection
    /// group G₃₁ (Shephard–Todd numbering), of order 46080.
    G31,
    /// The two-element generating set of the order-1152 subgroup whose orbit
    /// of the seed line yields the 96 pairwise disjoint lines.
    AB,
}

/// A named list of invertible matrices.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub name: String,
    pub matrices: Vec<MatrixK>,
}

impl GeneratorSet {
    /// Builds a generator set, rejecting singular matrices.
    pub fn new(name: impl Into<String>, matrices: Vec<MatrixK>) -> Result<Self, GroupError> {
        for m in &matrices {
            if m.det().is_zero() {
                return Err(GroupError::SingularMatrix);
            }
        }
        Ok(GeneratorSet {
            name: name.into(),
            matrices,
        })
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

/// Exact transcriptions of the built-in generator matrices.
pub fn builtin_generators(which: BuiltinGenerators) -> GeneratorSet {
    let fe = FieldElement::from_int;
    let i = FieldElement::i();
    match which {
        BuiltinGenerators::G31 => {
            let s1 =
                MatrixK::from_int_rows([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
            let s2 =
                MatrixK::from_int_rows([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]);
            let s3 = MatrixK::from_rows([
                [fe(0), -i.clone(), fe(0), fe(0)],
                [i.clone(), fe(0), fe(0), fe(0)],
                [fe(0), fe(0), fe(1), fe(0)],
                [fe(0), fe(0), fe(0), fe(1)],
            ]);
            let s4 = MatrixK::from_int_rows([
                [1, -1, -1, -1],
                [-1, 1, -1, -1],
                [-1, -1, 1, -1],
                [-1, -1, -1, 1],
            ])
            .scaled(&FieldElement::from_ratio(1, 2));
            let s5 =
                MatrixK::from_int_rows([[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
            GeneratorSet::new("g31", vec![s1, s2, s3, s4, s5])
                .expect("built-in generators are invertible")
        }
        BuiltinGenerators::AB => {
            // a = (1-i)/2 · M with integer M; b is a signed permutation.
            let half_one_minus_i = (&fe(1) - &i).scaled(&ratio(1, 2));
            let a =
                MatrixK::from_int_rows([[1, 0, 0, 1], [0, 1, 1, 0], [0, -1, 1, 0], [1, 0, 0, -1]])
                    .scaled(&half_one_minus_i);
            let b =
                MatrixK::from_int_rows([[0, 0, -1, 0], [-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]);
            GeneratorSet::new("ab", vec![a, b]).expect("built-in generators are invertible")
        }
    }
}

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut hasher = DefaultHasher::new();
    value.hash(&mut hasher);
    hasher.finish()
}

/// The full set of products of a generator set, with hash-indexed storage so
/// each matrix is kept exactly once.
#[derive(Clone)]
pub struct GroupClosure {
    elements: Vec<MatrixK>,
    buckets: HashMap<u64, Vec<u32>>,
}

impl GroupClosure {
    fn new() -> Self {
        GroupClosure {
            elements: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    /// Inserts if absent; returns true when the matrix was new.
    fn insert(&mut self, m: MatrixK) -> bool {
        let h = hash_of(&m);
        let bucket = self.buckets.entry(h).or_default();
        if bucket.iter().any(|&idx| self.elements[idx as usize] == m) {
            return false;
        }
        bucket.push(self.elements.len() as u32);
        self.elements.push(m);
        true
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &MatrixK) -> bool {
        match self.buckets.get(&hash_of(m)) {
            Some(bucket) => bucket.iter().any(|&idx| &self.elements[idx as usize] == m),
            None => false,
        }
    }

    pub fn elements(&self) -> &[MatrixK] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &MatrixK> {
        self.elements.iter()
    }
}

impl fmt::Debug for GroupClosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupClosure(order={})", self.order())
    }
}

/// Breadth-first closure of a generator set under multiplication.
///
/// Errors with [`GroupError::CapExceeded`] as soon as the element count grows
/// past `cap`, which guards against non-terminating input.
pub fn closure(gens: &GeneratorSet, cap: usize) -> Result<GroupClosure, GroupError> {
    let mut set = GroupClosure::new();
    set.insert(MatrixK::identity());
    let mut queue: VecDeque<u32> = VecDeque::new();
    queue.push_back(0);
    while let Some(idx) = queue.pop_front() {
        for g in &gens.matrices {
            let product = &set.elements[idx as usize] * g;
            if set.insert(product) {
                if set.order() > cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                queue.push_back((set.order() - 1) as u32);
            }
        }
    }
    Ok(set)
}

/// Breadth-first orbit of `seed` under the action `act` of the generators.
/// Returns the orbit in discovery order; elements are pairwise distinct.
pub fn orbit<T, F>(gens: &GeneratorSet, seed: T, act: F, cap: usize) -> Result<Vec<T>, GroupError>
where
    T: Clone + Eq + Hash,
    F: Fn(&MatrixK, &T) -> T,
{
    let mut seen: HashSet<T> = HashSet::new();
    let mut order: Vec<T> = Vec::new();
    let mut queue: VecDeque<T> = VecDeque::new();
    seen.insert(seed.clone());
    order.push(seed.clone());
    queue.push_back(seed);
    while let Some(current) = queue.pop_front() {
        for g in &gens.matrices {
            let image = act(g, &current);
            if seen.insert(image.clone()) {
                if seen.len() > cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                order.push(image.clone());
                queue.push_back(image);
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_entry_transcription() {
        let g31 = builtin_generators(BuiltinGenerators::G31);
        // s4 entry (1,1) is 1/2
        assert_eq!(g31.matrices[3].entry(0, 0), &FieldElement::from_ratio(1, 2));
        let ab = builtin_generators(BuiltinGenerators::AB);
        // a entry (1,1) is (1-i)/2
        let expected = (&FieldElement::from_int(1) - &FieldElement::i()).scaled(&ratio(1, 2));
        assert_eq!(ab.matrices[0].entry(0, 0), &expected);
        // b entry (1,3) is -1
        assert_eq!(ab.matrices[1].entry(0, 2), &FieldElement::from_int(-1));
    }

    #[test]
    fn reflections_are_involutions() {
        let g31 = builtin_generators(BuiltinGenerators::G31);
        for s in &g31.matrices {
            assert_eq!(s * s, MatrixK::identity());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let ab = builtin_generators(BuiltinGenerators::AB);
        for m in &ab.matrices {
            let inv = m.inverse().unwrap();
            assert_eq!(&(&inv * m), &MatrixK::identity());
            assert_eq!(&(m * &inv), &MatrixK::identity());
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = MatrixK::from_int_rows([[1, 2, 3, 4], [2, 4, 6, 8], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert!(m.det().is_zero());
        assert_eq!(m.inverse().unwrap_err(), GroupError::SingularMatrix);
        assert_eq!(
            GeneratorSet::new("bad", vec![m]).unwrap_err(),
            GroupError::SingularMatrix
        );
    }

    #[test]
    fn determinant_of_reflections() {
        let g31 = builtin_generators(BuiltinGenerators::G31);
        for s in &g31.matrices {
            assert_eq!(s.det(), FieldElement::from_int(-1));
        }
        assert_eq!(MatrixK::identity().det(), FieldElement::from_int(1));
    }

    #[test]
    fn closure_of_identity_is_trivial() {
        let gens = GeneratorSet::new("trivial", vec![MatrixK::identity()]).unwrap();
        let g = closure(&gens, 10).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.contains(&MatrixK::identity()));
    }

    #[test]
    fn closure_of_ab_has_order_1152() {
        let ab = builtin_generators(BuiltinGenerators::AB);
        let g = closure(&ab, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(g.order(), 1152);
        assert!(g.contains(&ab.matrices[0]));
        assert!(g.contains(&ab.matrices[1]));
        // 2·identity is not an element: membership is an exact hash lookup
        let double = MatrixK::identity().scaled(&FieldElement::from_int(2));
        assert!(!g.contains(&double));
    }

    #[test]
    fn closure_cap_guards_growth() {
        let ab = builtin_generators(BuiltinGenerators::AB);
        assert_eq!(closure(&ab, 100).unwrap_err(), GroupError::CapExceeded(100));
    }

    #[test]
    fn closure_elements_have_inverses_inside() {
        let ab = builtin_generators(BuiltinGenerators::AB);
        let g = closure(&ab, DEFAULT_CLOSURE_CAP).unwrap();
        // spot-check a slice of elements rather than all 1152
        for m in g.elements().iter().step_by(37) {
            assert!(g.contains(&m.inverse().unwrap()));
        }
    }

    #[test]
    fn orbit_contains_seed_under_identity_action() {
        let gens = GeneratorSet::new("trivial", vec![MatrixK::identity()]).unwrap();
        let orb = orbit(&gens, 7u32, |_, &x| x, 10).unwrap();
        assert_eq!(orb, vec![7]);
    }
}
