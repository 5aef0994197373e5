//! Sparse multivariate polynomials in `x, y, z, t` over `K`.
//!
//! The octic and everything derived from it stay tiny (at most a few dozen
//! terms), so the representation is a plain ordered map keyed by exponent
//! tuple and every product is expanded term by term with no modular
//! shortcuts: the outputs feed certificates, so exactness is the product.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::exactfield::{rat, FieldElement};
use crate::groupcore::MatrixK;

pub const VARIABLE_NAMES: [char; 4] = ['x', 'y', 'z', 't'];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("the two points span a degenerate (rank < 2) subspace")]
    DegenerateSpan,
    #[error("restriction needs a homogeneous polynomial of degree 8 (or zero)")]
    NotDegreeEight,
}

/// Power product `x^a y^b z^c t^d`, keyed by its exponent tuple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: [u8; 4],
}

impl Monomial {
    pub fn new(exponents: [u8; 4]) -> Self {
        Monomial { exponents }
    }

    pub fn exponents(&self) -> [u8; 4] {
        self.exponents
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().map(|&e| e as u32).sum()
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: std::array::from_fn(|k| {
                self.exponents[k]
                    .checked_add(other.exponents[k])
                    .expect("exponent overflow")
            }),
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total_degree() == 0 {
            return write!(f, "1");
        }
        for (k, &e) in self.exponents.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "{}", VARIABLE_NAMES[k])?,
                _ => write!(f, "{}^{}", VARIABLE_NAMES[k], e)?,
            }
        }
        Ok(())
    }
}

/// Sparse polynomial over `K`; stored coefficients are never zero and the
/// degree cache is `None` exactly for the zero polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, FieldElement>,
    degree: Option<u32>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
            degree: None,
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_terms([(Monomial::new([0; 4]), c)])
    }

    pub fn variable(var: usize) -> Self {
        assert!(var < 4);
        let mut exps = [0u8; 4];
        exps[var] = 1;
        Self::monomial(Monomial::new(exps), FieldElement::one())
    }

    pub fn monomial(m: Monomial, coeff: FieldElement) -> Self {
        Self::from_terms([(m, coeff)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, FieldElement)>) -> Self {
        let mut map: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.get_mut(&m) {
                Some(existing) => {
                    *existing += &c;
                    if existing.is_zero() {
                        map.remove(&m);
                    }
                }
                None => {
                    map.insert(m, c);
                }
            }
        }
        let degree = map.keys().map(Monomial::total_degree).max();
        Poly { terms: map, degree }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` is the zero polynomial's `−∞` marker.
    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(FieldElement::zero)
    }

    /// `Some(d)` iff nonzero and every monomial has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree?;
        if self.terms.keys().all(|m| m.total_degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn scaled(&self, c: &FieldElement) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Self::from_terms(self.terms.iter().map(|(m, v)| (*m, c * v)))
    }

    pub fn evaluate(&self, point: &[FieldElement; 4]) -> FieldElement {
        let mut acc = FieldElement::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (k, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = &term * &point[k];
                }
            }
            acc += &term;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial_derivative(&self, var: usize) -> Poly {
        assert!(var < 4);
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let mut exps = m.exponents();
            if exps[var] == 0 {
                return None;
            }
            let e = exps[var];
            exps[var] = e - 1;
            Some((Monomial::new(exps), c.scaled(&rat(e as i64))))
        }))
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::constant(FieldElement::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// The polynomial `q` with `q(v) = p(M v)`: substitutes each variable by
    /// the linear form given by the corresponding row of `M` and expands.
    pub fn compose_linear(&self, m: &MatrixK) -> Poly {
        let linear_forms: [Poly; 4] = std::array::from_fn(|row| {
            Poly::from_terms((0..4).map(|col| {
                let mut exps = [0u8; 4];
                exps[col] = 1;
                (Monomial::new(exps), m.entry(row, col).clone())
            }))
        });
        // power cache per variable, filled on demand
        let mut powers: [Vec<Poly>; 4] =
            std::array::from_fn(|_| vec![Poly::constant(FieldElement::one())]);
        let mut acc = Poly::zero();
        for (mono, coeff) in &self.terms {
            let mut term = Poly::constant(coeff.clone());
            for (var, &e) in mono.exponents().iter().enumerate() {
                while powers[var].len() <= e as usize {
                    let next = powers[var].last().unwrap() * &linear_forms[var];
                    powers[var].push(next);
                }
                if e > 0 {
                    term = &term * &powers[var][e as usize];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Coefficients of `p(s·a + t·b)` as a degree-8 binary form in `(s, t)`.
    ///
    /// Requires `p` zero or homogeneous of degree 8, and `a`, `b` linearly
    /// independent.
    pub fn restrict_to_line(
        &self,
        a: &[FieldElement; 4],
        b: &[FieldElement; 4],
    ) -> Result<BinaryForm, PolyError> {
        if points_proportional(a, b) {
            return Err(PolyError::DegenerateSpan);
        }
        if !self.is_zero() && self.homogeneous_degree() != Some(8) {
            return Err(PolyError::NotDegreeEight);
        }
        // per-variable powers of the linear binary form a_k·s + b_k·t
        let mut powers: [Vec<Vec<FieldElement>>; 4] =
            std::array::from_fn(|_| vec![vec![FieldElement::one()]]);
        let mut coeffs: [FieldElement; 9] = std::array::from_fn(|_| FieldElement::zero());
        for (mono, coeff) in &self.terms {
            let mut term = vec![coeff.clone()];
            for (var, &e) in mono.exponents().iter().enumerate() {
                while powers[var].len() <= e as usize {
                    let linear = [a[var].clone(), b[var].clone()];
                    let next = binary_mul(powers[var].last().unwrap(), &linear);
                    powers[var].push(next);
                }
                if e > 0 {
                    term = binary_mul(&term, &powers[var][e as usize]);
                }
            }
            debug_assert_eq!(term.len(), 9);
            for (k, c) in term.into_iter().enumerate() {
                coeffs[k] += &c;
            }
        }
        Ok(BinaryForm { coeffs })
    }
}

/// Convolution of binary forms given as coefficient lists in `s^k t^(n-k)`.
fn binary_mul(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::zero(); a.len() + b.len() - 1];
    for (j, aj) in a.iter().enumerate() {
        if aj.is_zero() {
            continue;
        }
        for (k, bk) in b.iter().enumerate() {
            if bk.is_zero() {
                continue;
            }
            out[j + k] += &(aj * bk);
        }
    }
    out
}

fn points_proportional(a: &[FieldElement; 4], b: &[FieldElement; 4]) -> bool {
    for j in 0..4 {
        for k in (j + 1)..4 {
            let minor = &(&a[j] * &b[k]) - &(&a[k] * &b[j]);
            if !minor.is_zero() {
                return false;
            }
        }
    }
    true
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(m, c)| (*m, c.clone())),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, -c)))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut terms: Vec<(Monomial, FieldElement)> =
            Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                terms.push((m1.product(m2), c1 * c2));
            }
        }
        Poly::from_terms(terms)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})·{m:?}"))
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Degree-8 binary form: coefficients of `s^k t^(8−k)` for `k = 0..=8`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryForm {
    coeffs: [FieldElement; 9],
}

impl BinaryForm {
    pub fn coeffs(&self) -> &[FieldElement; 9] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    pub fn reversed(&self) -> BinaryForm {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        BinaryForm { coeffs }
    }
}

/// Sum of the distinct monomials in the S₄-orbit of `m` (permutations of the
/// four variables), each with coefficient 1.
pub fn sigma4(m: Monomial) -> Poly {
    const PERMUTATIONS: [[usize; 4]; 24] = permutations_of_four();
    let exps = m.exponents();
    let mut seen = std::collections::BTreeSet::new();
    for perm in PERMUTATIONS {
        let image: [u8; 4] = std::array::from_fn(|k| exps[perm[k]]);
        seen.insert(image);
    }
    Poly::from_terms(
        seen.into_iter()
            .map(|e| (Monomial::new(e), FieldElement::one())),
    )
}

const fn permutations_of_four() -> [[usize; 4]; 24] {
    let mut out = [[0usize; 4]; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let mut d = 0;
                while d < 4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out[n] = [a, b, c, d];
                        n += 1;
                    }
                    d += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

/// The Maschke octic `f = Σ₄(x⁸) + 14·Σ₄(x⁴y⁴) + 168·x²y²z²t²`,
/// an 11-term polynomial with integer coefficients.
pub fn build_maschke_f() -> Poly {
    let pure = sigma4(Monomial::new([8, 0, 0, 0]));
    let mixed = sigma4(Monomial::new([4, 4, 0, 0])).scaled(&FieldElement::from_int(14));
    let center = Poly::monomial(Monomial::new([2, 2, 2, 2]), FieldElement::from_int(168));
    &(&pure + &mixed) + &center
}
