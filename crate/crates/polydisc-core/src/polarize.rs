//! The symmetric m-multilinear form attached to a homogeneous polynomial.
//!
//! For P of degree m the polarization formula
//! B(z⁽¹⁾,…,z⁽ᵐ⁾) = (1/(2^m m!)) Σ_{ε∈{±1}^m} ε_1⋯ε_m P(Σ_i ε_i z⁽ⁱ⁾)
//! defines the unique symmetric form with B(z,…,z) = P(z). Its coefficients
//! are never materialized as an n^m tensor; they come from b_β = c_α / h(β),
//! where α is the exponent profile of the word β and h the number of words
//! realizing α.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::combinat::{factorial, word_count_f64, IndexWord};
use crate::poly::HomPoly;
use crate::sum::{Accumulator, ComplexAccumulator};

/// Exact sign enumeration is capped at 2^24 evaluations.
pub const MAX_POLARIZE_DEGREE: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolarizeError {
    /// Number of points differs from the polynomial degree.
    ArityMismatch { expected: u32, got: usize },
    /// Degree beyond the exact 2^m enumeration budget.
    DegreeTooLarge { m: u32, cap: u32 },
    /// A point has the wrong dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// Partition entries do not sum to the degree.
    BadPartition { m: u32, sum: u32 },
}

impl fmt::Display for PolarizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolarizeError::ArityMismatch { expected, got } => {
                write!(f, "polarization needs exactly {expected} points, got {got}")
            }
            PolarizeError::DegreeTooLarge { m, cap } => {
                write!(f, "degree {m} exceeds the 2^m enumeration cap (m ≤ {cap})")
            }
            PolarizeError::DimensionMismatch { expected, got } => {
                write!(f, "point has dimension {got}, expected {expected}")
            }
            PolarizeError::BadPartition { m, sum } => {
                write!(f, "partition sums to {sum}, expected {m}")
            }
        }
    }
}

impl core::error::Error for PolarizeError {}

/// B(z⁽¹⁾,…,z⁽ᵐ⁾) by the exact 2^m-term polarization sum.
///
/// Signs are enumerated in binary-counter order, so the summation order is
/// deterministic.
pub fn polarize_eval(p: &HomPoly, points: &[Vec<Complex64>]) -> Result<Complex64, PolarizeError> {
    let m = p.degree();
    if points.len() != m as usize {
        return Err(PolarizeError::ArityMismatch {
            expected: m,
            got: points.len(),
        });
    }
    if m > MAX_POLARIZE_DEGREE {
        return Err(PolarizeError::DegreeTooLarge {
            m,
            cap: MAX_POLARIZE_DEGREE,
        });
    }
    let n = p.var_count();
    for pt in points {
        if pt.len() != n {
            return Err(PolarizeError::DimensionMismatch {
                expected: n,
                got: pt.len(),
            });
        }
    }
    if m == 0 {
        // degree-0 polarization is the constant itself
        return Ok(p.evaluate(&alloc::vec![Complex64::new(0.0, 0.0); n]));
    }

    let mut acc = ComplexAccumulator::new();
    let mut combo = alloc::vec![Complex64::new(0.0, 0.0); n];
    for mask in 0u64..(1u64 << m) {
        for slot in combo.iter_mut() {
            *slot = Complex64::new(0.0, 0.0);
        }
        let mut sign = 1.0f64;
        for (i, pt) in points.iter().enumerate() {
            let eps = if mask >> i & 1 == 0 { 1.0 } else { -1.0 };
            sign *= eps;
            for (slot, &zj) in combo.iter_mut().zip(pt) {
                *slot += zj * eps;
            }
        }
        acc.add(p.evaluate(&combo) * sign);
    }
    let m_fact = factorial(m as u64).to_f64().expect("m! fits f64 for m ≤ 24");
    let scale = 1.0 / (2f64.powi(m as i32) * m_fact);
    Ok(acc.value() * scale)
}

/// Coefficient b_β = c_α / h(β) of the symmetric form, α the profile of β.
///
/// Words whose profile is outside the support give 0.
pub fn form_coefficient(p: &HomPoly, beta: &IndexWord) -> Result<Complex64, PolarizeError> {
    let m = p.degree();
    if beta.len() != m as usize {
        return Err(PolarizeError::ArityMismatch {
            expected: m,
            got: beta.len(),
        });
    }
    let alpha = beta
        .profile(p.var_count())
        .map_err(|_| PolarizeError::DimensionMismatch {
            expected: p.var_count(),
            got: beta.len(),
        })?;
    let c = p.coefficient(&alpha);
    Ok(c / word_count_f64(&alpha))
}

/// ℓ¹ norm of the form coefficients: Σ over all n^m words of |b_β|.
///
/// Grouped by profile, each α contributes h(β) words of modulus |c_α|/h(β),
/// so the sum telescopes back to Σ|c_α|; it is accumulated that way, term by
/// term, and agrees with `HomPoly::l1_coeff_norm` to rounding.
pub fn form_l1_norm(p: &HomPoly) -> f64 {
    let mut acc = Accumulator::new();
    for (alpha, c) in p.terms() {
        let h = word_count_f64(alpha);
        acc.add(h * (c.norm() / h));
    }
    acc.value()
}

/// Harris polarization constant for repeated arguments with multiplicities
/// (m_1,…,m_k): (m_1!⋯m_k! / m_1^{m_1}⋯m_k^{m_k}) · m^m / m!.
///
/// Computed as an exact integer ratio, converted to f64 at the end.
pub fn harris_constant(m: u32, parts: &[u32]) -> Result<f64, PolarizeError> {
    let sum: u32 = parts.iter().sum();
    if sum != m || parts.iter().any(|&p| p == 0) {
        return Err(PolarizeError::BadPartition { m, sum });
    }
    let mut num = BigUint::from(m as u64).pow(m);
    let mut den = factorial(m as u64);
    for &part in parts {
        num *= factorial(part as u64);
        den *= BigUint::from(part as u64).pow(part);
    }
    Ok(big_ratio_f64(&num, &den))
}

fn big_ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    match (num.to_f64(), den.to_f64()) {
        (Some(a), Some(b)) if b.is_finite() && a.is_finite() => a / b,
        _ => {
            // scale both down by a common power of two
            let shift = num.bits().max(den.bits()).saturating_sub(900);
            let a = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
            let b = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
            a / b
        }
    }
}
