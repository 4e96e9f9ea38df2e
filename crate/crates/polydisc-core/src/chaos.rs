//! Homogeneous Rademacher chaos of order m and the hypercontractive
//! comparison (𝔼|X|²)^{1/2} ≤ e^m·𝔼|X|.
//!
//! X = Σ_{i_1<…<i_m} x_{i_1…i_m} ε_{i_1}⋯ε_{i_m} with fair independent signs
//! ε_i. The second moment is exact by orthonormality; 𝔼|X| is computed either
//! exactly over all 2ⁿ sign patterns (Gray-code enumeration with incremental
//! updates) or by Monte Carlo.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::rng::CounterRng;
use crate::sum::Accumulator;

/// Exact enumeration is capped at 2^24 sign patterns.
pub const MAX_EXACT_VARS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChaosError {
    /// Exact enumeration over 2ⁿ patterns refused for n beyond the cap.
    TooManyVariables { n: usize, cap: usize },
    /// Index tuple not strictly increasing within 1..=n, or wrong length.
    BadTuple,
    /// The zero chaos has no moment ratio.
    DegenerateZero,
}

impl fmt::Display for ChaosError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChaosError::TooManyVariables { n, cap } => {
                write!(f, "exact enumeration over 2^{n} patterns exceeds cap 2^{cap}")
            }
            ChaosError::BadTuple => write!(f, "index tuple must be strictly increasing in 1..=n"),
            ChaosError::DegenerateZero => write!(f, "moment ratio undefined for the zero chaos"),
        }
    }
}

impl core::error::Error for ChaosError {}

/// Order-m chaos: coefficients over strictly increasing index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosVector {
    n: usize,
    m: u32,
    coeffs: BTreeMap<Vec<u32>, Complex64>,
}

impl ChaosVector {
    pub fn new(n: usize, m: u32) -> Self {
        assert!(n >= 1);
        ChaosVector {
            n,
            m,
            coeffs: BTreeMap::new(),
        }
    }

    /// Build from (tuple, coefficient) pairs; tuples are 1-based, strictly
    /// increasing, of length m. Zero coefficients are dropped.
    pub fn from_terms(
        n: usize,
        m: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Complex64)>,
    ) -> Result<Self, ChaosError> {
        let mut x = ChaosVector::new(n, m);
        for (tuple, c) in terms {
            x.add_term(tuple, c)?;
        }
        Ok(x)
    }

    pub fn add_term(&mut self, tuple: Vec<u32>, c: Complex64) -> Result<(), ChaosError> {
        if tuple.len() != self.m as usize {
            return Err(ChaosError::BadTuple);
        }
        if tuple.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ChaosError::BadTuple);
        }
        if tuple.iter().any(|&i| i == 0 || i as usize > self.n) {
            return Err(ChaosError::BadTuple);
        }
        let entry = self.coeffs.entry(tuple).or_insert_with(Complex64::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self
                .coeffs
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.coeffs.remove(&k);
            }
        }
        Ok(())
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.coeffs.iter()
    }

    /// Value of X at a sign pattern (bit i set means ε_{i+1} = −1).
    pub fn value_at(&self, pattern: u64) -> Complex64 {
        let mut acc = Complex64::zero();
        for (tuple, c) in &self.coeffs {
            let mut sign = 1.0;
            for &i in tuple {
                if pattern >> (i - 1) & 1 == 1 {
                    sign = -sign;
                }
            }
            acc += *c * sign;
        }
        acc
    }
}

/// (𝔼|X|²)^{1/2} = sqrt(Σ|x|²), exact by orthonormality of the ε-monomials.
pub fn chaos_l2(x: &ChaosVector) -> f64 {
    let mut acc = Accumulator::new();
    for c in x.coeffs.values() {
        acc.add(c.norm_sqr());
    }
    acc.value().sqrt()
}

/// Exact 𝔼|X| over all 2ⁿ sign patterns.
///
/// Walks patterns in Gray-code order; flipping ε_i updates only the terms
/// containing i, and the running value is refreshed from scratch every 2^16
/// steps to stop rounding drift.
pub fn chaos_abs_mean_exact(x: &ChaosVector) -> Result<f64, ChaosError> {
    if x.n > MAX_EXACT_VARS {
        return Err(ChaosError::TooManyVariables {
            n: x.n,
            cap: MAX_EXACT_VARS,
        });
    }
    let terms: Vec<(&Vec<u32>, Complex64)> = x.coeffs.iter().map(|(t, &c)| (t, c)).collect();
    let mut by_var: Vec<Vec<usize>> = alloc::vec![Vec::new(); x.n];
    for (idx, (tuple, _)) in terms.iter().enumerate() {
        for &i in tuple.iter() {
            by_var[(i - 1) as usize].push(idx);
        }
    }
    let mut signs: Vec<f64> = alloc::vec![1.0; terms.len()];
    let mut current: Complex64 = terms.iter().map(|&(_, c)| c).sum();
    let mut acc = Accumulator::new();
    acc.add(current.norm());
    let total: u64 = 1u64 << x.n;
    for k in 1..total {
        let flip = k.trailing_zeros() as usize; // Gray code bit change
        for &t in &by_var[flip] {
            current -= 2.0 * signs[t] * terms[t].1;
            signs[t] = -signs[t];
        }
        if k & 0xFFFF == 0 {
            current = terms
                .iter()
                .zip(&signs)
                .map(|(&(_, c), &s)| c * s)
                .sum();
        }
        acc.add(current.norm());
    }
    Ok(acc.value() / total as f64)
}

/// Monte Carlo 𝔼|X| with standard error, over `samples` random sign patterns.
pub fn chaos_abs_mean_mc(x: &ChaosVector, samples: u64, seed: u64) -> (f64, f64) {
    assert!(samples >= 2);
    let mut sum = Accumulator::new();
    let mut sum_sq = Accumulator::new();
    for i in 0..samples {
        let mut rng = CounterRng::stream(seed, i);
        let pattern = if x.n == 64 {
            rng.next_u64()
        } else {
            rng.next_u64() & ((1u64 << x.n) - 1)
        };
        let v = x.value_at(pattern).norm();
        sum.add(v);
        sum_sq.add(v * v);
    }
    let s = samples as f64;
    let mean = sum.value() / s;
    let var = ((sum_sq.value() - s * mean * mean) / (s - 1.0)).max(0.0);
    (mean, (var / s).sqrt())
}

/// Result of the hypercontractive comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperCheck {
    /// (𝔼|X|²)^{1/2} / 𝔼|X|, exact mode.
    pub ratio: f64,
    /// e^m.
    pub bound: f64,
    pub holds: bool,
}

/// Check (𝔼|X|²)^{1/2} ≤ e^m·𝔼|X| in exact mode.
pub fn hyper_check(x: &ChaosVector) -> Result<HyperCheck, ChaosError> {
    if x.is_zero() {
        return Err(ChaosError::DegenerateZero);
    }
    let l2 = chaos_l2(x);
    let l1 = chaos_abs_mean_exact(x)?;
    let ratio = l2 / l1;
    let bound = (x.m as f64).exp();
    Ok(HyperCheck {
        ratio,
        bound,
        holds: ratio <= bound,
    })
}
