//! Sparse polynomial data model: homogeneous polynomials, homogeneous-part
//! decompositions, coefficient norms, the tetrahedral/remainder split, and
//! certified interval enclosures.
//!
//! Coefficients are double-precision complex. Term maps are `BTreeMap`s keyed
//! by exponent vectors, so iteration (and therefore every summation) runs in
//! lexicographic order and results are reproducible bit for bit. Zero
//! coefficients are dropped on construction; the zero polynomial has an empty
//! term map.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::combinat::MultiIndex;
use crate::sum::{Accumulator, ComplexAccumulator};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    /// A term's exponent vector does not have length n.
    DimensionMismatch { expected: usize, got: usize },
    /// A term's degree differs from the polynomial's homogeneous degree.
    DegreeMismatch { expected: u32, got: u32 },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::DimensionMismatch { expected, got } => {
                write!(f, "exponent vector has length {got}, expected {expected}")
            }
            PolyError::DegreeMismatch { expected, got } => {
                write!(f, "term degree {got} differs from homogeneous degree {expected}")
            }
        }
    }
}

impl core::error::Error for PolyError {}

/// Homogeneous polynomial of degree `m` in `n` complex variables, stored as a
/// sparse map α → c_α over multi-indices of degree m.
#[derive(Clone, Debug, PartialEq)]
pub struct HomPoly {
    n: usize,
    m: u32,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl HomPoly {
    /// Empty (zero) polynomial of the given shape.
    pub fn zero(n: usize, m: u32) -> Self {
        assert!(n >= 1, "variable count must be >= 1");
        HomPoly {
            n,
            m,
            terms: BTreeMap::new(),
        }
    }

    /// Build from (α, c) pairs, validating shape and dropping zero coefficients.
    pub fn from_terms(
        n: usize,
        m: u32,
        terms: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self, PolyError> {
        let mut p = HomPoly::zero(n, m);
        for (alpha, c) in terms {
            p.add_term(alpha, c)?;
        }
        Ok(p)
    }

    /// Add `c` to the coefficient at `alpha`, keeping the map canonical.
    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) -> Result<(), PolyError> {
        if alpha.len() != self.n {
            return Err(PolyError::DimensionMismatch {
                expected: self.n,
                got: alpha.len(),
            });
        }
        if alpha.degree() != self.m {
            return Err(PolyError::DegreeMismatch {
                expected: self.m,
                got: alpha.degree(),
            });
        }
        let entry = self.terms.entry(alpha).or_insert_with(Complex64::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
        Ok(())
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or_else(Complex64::zero)
    }

    /// Terms in lexicographic order of their multi-indices.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    /// ℓ¹ norm of the coefficients, Σ_α |c_α|, compensated summation.
    pub fn l1_coeff_norm(&self) -> f64 {
        let mut acc = Accumulator::new();
        for c in self.terms.values() {
            acc.add(c.norm());
        }
        acc.value()
    }

    /// Direct sparse evaluation Σ c_α z^α in lexicographic term order.
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n, "point dimension mismatch");
        let mut acc = ComplexAccumulator::new();
        for (alpha, c) in &self.terms {
            acc.add(*c * monomial_value(alpha, z));
        }
        acc.value()
    }

    /// Split into the tetrahedral part (every exponent ≤ 1) and the remainder;
    /// the two supports are disjoint and their union reproduces the input.
    pub fn tetra_split(&self) -> (HomPoly, HomPoly) {
        let mut t = HomPoly::zero(self.n, self.m);
        let mut r = HomPoly::zero(self.n, self.m);
        for (alpha, c) in &self.terms {
            if alpha.is_tetrahedral() {
                t.terms.insert(alpha.clone(), *c);
            } else {
                r.terms.insert(alpha.clone(), *c);
            }
        }
        (t, r)
    }

    /// Degree in variable `j` alone: max over stored terms of α_j.
    pub fn var_degree(&self, j: usize) -> u32 {
        self.terms.keys().map(|a| a.0[j]).max().unwrap_or(0)
    }

    /// Per-variable degrees (d_1,…,d_n).
    pub fn var_degrees(&self) -> Vec<u32> {
        (0..self.n).map(|j| self.var_degree(j)).collect()
    }

    /// Coefficient-wise scale by `c`.
    pub fn scaled(&self, c: Complex64) -> HomPoly {
        if c.is_zero() {
            return HomPoly::zero(self.n, self.m);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Formal partial derivative ∂P/∂z_j (degree drops by one).
    pub fn partial_derivative(&self, j: usize) -> HomPoly {
        assert!(j < self.n);
        let mut out = HomPoly::zero(self.n, self.m.saturating_sub(1));
        for (alpha, c) in &self.terms {
            let e = alpha.0[j];
            if e == 0 {
                continue;
            }
            let mut da = alpha.clone();
            da.0[j] = e - 1;
            out.terms.insert(da, *c * e as f64);
        }
        out
    }

    pub fn to_general(&self) -> GeneralPoly {
        let mut q = GeneralPoly::zero(self.n);
        if !self.is_zero() {
            q.parts.insert(self.m, self.clone());
        }
        q
    }
}

/// Finite sum of homogeneous parts of distinct degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralPoly {
    n: usize,
    parts: BTreeMap<u32, HomPoly>,
}

impl GeneralPoly {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "variable count must be >= 1");
        GeneralPoly {
            n,
            parts: BTreeMap::new(),
        }
    }

    /// Build from arbitrary (α, c) pairs of mixed degrees.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self, PolyError> {
        let mut q = GeneralPoly::zero(n);
        for (alpha, c) in terms {
            q.add_term(alpha, c)?;
        }
        Ok(q)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) -> Result<(), PolyError> {
        if alpha.len() != self.n {
            return Err(PolyError::DimensionMismatch {
                expected: self.n,
                got: alpha.len(),
            });
        }
        let m = alpha.degree();
        let part = self
            .parts
            .entry(m)
            .or_insert_with(|| HomPoly::zero(self.n, m));
        part.add_term(alpha, c)?;
        if part.is_zero() {
            self.parts.remove(&m);
        }
        Ok(())
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Homogeneous parts in increasing degree.
    pub fn homogeneous_parts(&self) -> impl Iterator<Item = (u32, &HomPoly)> {
        self.parts.iter().map(|(&m, p)| (m, p))
    }

    pub fn part(&self, m: u32) -> Option<&HomPoly> {
        self.parts.get(&m)
    }

    /// Constant term c_0 (zero if absent).
    pub fn constant_term(&self) -> Complex64 {
        self.parts
            .get(&0)
            .map(|p| p.coefficient(&MultiIndex(vec![0; self.n])))
            .unwrap_or_else(Complex64::zero)
    }

    /// Total degree (max over parts); zero polynomial has degree 0.
    pub fn total_degree(&self) -> u32 {
        self.parts.keys().max().copied().unwrap_or(0)
    }

    pub fn term_count(&self) -> usize {
        self.parts.values().map(|p| p.term_count()).sum()
    }

    /// All terms, by increasing degree then lexicographic index.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.parts.values().flat_map(|p| p.terms())
    }

    pub fn l1_coeff_norm(&self) -> f64 {
        let mut acc = Accumulator::new();
        for (_, p) in self.homogeneous_parts() {
            for c in p.terms.values() {
                acc.add(c.norm());
            }
        }
        acc.value()
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n, "point dimension mismatch");
        let mut acc = ComplexAccumulator::new();
        for (_, p) in self.homogeneous_parts() {
            acc.add(p.evaluate(z));
        }
        acc.value()
    }

    pub fn var_degree(&self, j: usize) -> u32 {
        self.parts.values().map(|p| p.var_degree(j)).max().unwrap_or(0)
    }

    pub fn var_degrees(&self) -> Vec<u32> {
        (0..self.n).map(|j| self.var_degree(j)).collect()
    }

    pub fn partial_derivative(&self, j: usize) -> GeneralPoly {
        let mut out = GeneralPoly::zero(self.n);
        for (_, p) in self.homogeneous_parts() {
            let d = p.partial_derivative(j);
            if !d.is_zero() {
                out.parts.insert(d.degree(), d);
            }
        }
        out
    }

    pub fn scaled(&self, c: Complex64) -> GeneralPoly {
        let mut out = GeneralPoly::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (&m, p) in &self.parts {
            out.parts.insert(m, p.scaled(c));
        }
        out
    }

    /// Substitute z_n = 1, producing a polynomial in the first n−1 variables.
    ///
    /// For a homogeneous polynomial this loses nothing: |P| on the torus is
    /// invariant under the diagonal rotation z ↦ e^{it}z, so its sup equals
    /// the sup of the substituted polynomial. Requires n ≥ 2.
    pub fn substitute_last_one(&self) -> GeneralPoly {
        assert!(self.n >= 2, "need at least two variables to eliminate one");
        let mut out = GeneralPoly::zero(self.n - 1);
        for (alpha, c) in self.terms() {
            let reduced = MultiIndex(alpha.0[..self.n - 1].to_vec());
            out.add_term(reduced, *c).expect("reduced term is well-formed");
        }
        out
    }
}

impl From<HomPoly> for GeneralPoly {
    fn from(p: HomPoly) -> Self {
        p.to_general()
    }
}

fn monomial_value(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &e) in alpha.0.iter().enumerate() {
        if e > 0 {
            acc *= pow_u32(z[j], e);
        }
    }
    acc
}

/// z^e by binary exponentiation.
pub fn pow_u32(z: Complex64, mut e: u32) -> Complex64 {
    let mut base = z;
    let mut acc = Complex64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Certified real interval with a note recording how it was certified.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
    pub method: String,
}

impl Enclosure {
    pub fn new(lo: f64, hi: f64, method: impl Into<String>) -> Self {
        assert!(lo.is_finite() && hi.is_finite() && lo <= hi, "invalid enclosure [{lo}, {hi}]");
        Enclosure {
            lo,
            hi,
            method: method.into(),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}] ({})", self.lo, self.hi, self.method)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    #[test]
    fn l1_norm_examples() {
        // z1·z2 − 2·z2²
        let p = HomPoly::from_terms(
            2,
            2,
            vec![(mi(&[1, 1]), c(1.0, 0.0)), (mi(&[0, 2]), c(-2.0, 0.0))],
        )
        .unwrap();
        assert_eq!(p.l1_coeff_norm(), 3.0);
        assert_eq!(HomPoly::zero(3, 2).l1_coeff_norm(), 0.0);
        let q = HomPoly::from_terms(
            4,
            1,
            (0..4).map(|j| {
                let mut a = vec![0u32; 4];
                a[j] = 1;
                (MultiIndex(a), c(1.0, 0.0))
            }),
        )
        .unwrap();
        assert_eq!(q.l1_coeff_norm(), 4.0);
    }

    #[test]
    fn evaluate_examples() {
        let p = HomPoly::from_terms(2, 2, vec![(mi(&[1, 1]), c(1.0, 0.0))]).unwrap();
        let v = p.evaluate(&[c(0.0, 1.0), c(0.0, 1.0)]);
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);

        let q = HomPoly::from_terms(1, 2, vec![(mi(&[2]), c(1.0, 0.0))]).unwrap();
        assert!((q.evaluate(&[c(0.5, 0.0)]) - c(0.25, 0.0)).norm() < 1e-15);

        let r = GeneralPoly::from_terms(
            1,
            vec![(mi(&[0]), c(1.0, 0.0)), (mi(&[1]), c(1.0, 0.0))],
        )
        .unwrap();
        assert!((r.evaluate(&[c(1.0, 0.0)]) - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tetra_split_examples() {
        let p = HomPoly::from_terms(
            2,
            2,
            vec![(mi(&[1, 1]), c(1.0, 0.0)), (mi(&[2, 0]), c(1.0, 0.0))],
        )
        .unwrap();
        let (t, r) = p.tetra_split();
        assert_eq!(t.term_count(), 1);
        assert!((t.coefficient(&mi(&[1, 1])) - c(1.0, 0.0)).norm() == 0.0);
        assert_eq!(r.term_count(), 1);
        assert!((r.coefficient(&mi(&[2, 0])) - c(1.0, 0.0)).norm() == 0.0);

        let q = HomPoly::from_terms(3, 3, vec![(mi(&[1, 1, 1]), c(2.0, 0.0))]).unwrap();
        let (t, r) = q.tetra_split();
        assert_eq!(t, q);
        assert!(r.is_zero());

        let s = HomPoly::from_terms(1, 3, vec![(mi(&[3]), c(1.0, 0.0))]).unwrap();
        let (t, r) = s.tetra_split();
        assert!(t.is_zero());
        assert_eq!(r, s);
    }

    #[test]
    fn homogeneous_parts_ordering() {
        let q = GeneralPoly::from_terms(
            2,
            vec![
                (mi(&[1, 1]), c(1.0, 0.0)),
                (mi(&[0, 0]), c(1.0, 0.0)),
                (mi(&[1, 0]), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let degrees: Vec<u32> = q.homogeneous_parts().map(|(m, _)| m).collect();
        assert_eq!(degrees, vec![0, 1, 2]);
        assert!(GeneralPoly::zero(2).homogeneous_parts().next().is_none());
    }

    #[test]
    fn zero_coefficients_dropped() {
        let mut p = HomPoly::zero(2, 1);
        p.add_term(mi(&[1, 0]), c(1.0, 0.0)).unwrap();
        p.add_term(mi(&[1, 0]), c(-1.0, 0.0)).unwrap();
        assert!(p.is_zero());
        let q = HomPoly::from_terms(2, 1, vec![(mi(&[0, 1]), c(0.0, 0.0))]).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn shape_errors() {
        let mut p = HomPoly::zero(2, 2);
        assert!(matches!(
            p.add_term(mi(&[1, 1, 0]), c(1.0, 0.0)),
            Err(PolyError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            p.add_term(mi(&[1, 0]), c(1.0, 0.0)),
            Err(PolyError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn split_preserves_l1_and_evaluation() {
        let mut rng = CounterRng::new(11);
        for _ in 0..20 {
            let alphas = crate::combinat::enum_multi_indices(3, 4, 1000).unwrap();
            let p = HomPoly::from_terms(
                3,
                4,
                alphas
                    .iter()
                    .map(|a| (a.clone(), rng.in_unit_disc()))
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let (t, r) = p.tetra_split();
            let lhs = p.l1_coeff_norm();
            let rhs = t.l1_coeff_norm() + r.l1_coeff_norm();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
            for _ in 0..5 {
                let z: Vec<Complex64> = (0..3).map(|_| rng.unit_phase()).collect();
                let d = (p.evaluate(&z) - t.evaluate(&z) - r.evaluate(&z)).norm();
                assert!(d <= 1e-12 * p.l1_coeff_norm().max(1.0));
                assert!(p.evaluate(&z).norm() <= p.l1_coeff_norm() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn substitution_drops_last_variable() {
        // z1²·z2 + z1·z2² → z1² + z1 (homogeneous input, mixed output degrees)
        let p = HomPoly::from_terms(
            2,
            3,
            vec![(mi(&[2, 1]), c(1.0, 0.0)), (mi(&[1, 2]), c(1.0, 0.0))],
        )
        .unwrap();
        let q = p.to_general().substitute_last_one();
        assert_eq!(q.var_count(), 1);
        assert_eq!(q.term_count(), 2);
        let z = c(0.3, 0.4);
        let direct = p.evaluate(&[z, c(1.0, 0.0)]);
        assert!((q.evaluate(&[z]) - direct).norm() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = HomPoly::from_terms(
            2,
            3,
            vec![(mi(&[2, 1]), c(1.5, -0.5)), (mi(&[0, 3]), c(0.0, 2.0))],
        )
        .unwrap();
        let dp = p.partial_derivative(0);
        let z = [c(0.4, 0.1), c(-0.2, 0.7)];
        let h = 1e-6;
        let zp = [z[0] + c(h, 0.0), z[1]];
        let fd = (p.evaluate(&zp) - p.evaluate(&z)) / c(h, 0.0);
        assert!((dp.evaluate(&z) - fd).norm() < 1e-5);
    }
}
