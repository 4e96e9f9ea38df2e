//! Multi-index enumeration, word counts, exact binomials and a prime sieve.
//!
//! Everything here is exact integer combinatorics; conversion to floating
//! point happens only at the callers' final bound evaluations.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Default cap on the number of multi-indices an enumeration may produce.
pub const ENUM_CAP: u64 = 10_000_000;

/// Exponent vector of a monomial; `degree()` is the total degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// A multi-index is tetrahedral when no variable appears to power 2 or higher.
    pub fn is_tetrahedral(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Word of variable indices `(β_1,…,β_m)`, each letter in `1..=n`.
///
/// The canonical form is nondecreasing; a canonical word corresponds to
/// exactly one [`MultiIndex`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndexWord(pub Vec<u32>);

impl IndexWord {
    pub fn new(letters: Vec<u32>) -> Self {
        IndexWord(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All letters pairwise distinct.
    pub fn is_tetrahedral(&self) -> bool {
        let mut seen = self.0.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Exponent profile: `α_j` counts how many letters equal `j`.
    pub fn profile(&self, n: usize) -> Result<MultiIndex, CombinatError> {
        let mut alpha = vec![0u32; n];
        for &b in &self.0 {
            if b == 0 || b as usize > n {
                return Err(CombinatError::LetterOutOfRange { letter: b, n });
            }
            alpha[(b - 1) as usize] += 1;
        }
        Ok(MultiIndex(alpha))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CombinatError {
    /// An enumeration would produce more than the configured cap of indices.
    CapacityExceeded { count: u64, cap: u64 },
    /// An exact integer result does not fit the platform integer range.
    Overflow,
    /// A word letter lies outside `1..=n`.
    LetterOutOfRange { letter: u32, n: usize },
}

impl fmt::Display for CombinatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombinatError::CapacityExceeded { count, cap } => {
                write!(f, "enumeration of {count} indices exceeds cap {cap}; use counting formulas")
            }
            CombinatError::Overflow => write!(f, "exact integer result exceeds platform range"),
            CombinatError::LetterOutOfRange { letter, n } => {
                write!(f, "word letter {letter} outside 1..={n}")
            }
        }
    }
}

impl core::error::Error for CombinatError {}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

/// Exact factorial m!.
pub fn factorial(m: u64) -> BigUint {
    let mut acc = BigUint::one();
    for j in 2..=m {
        acc *= BigUint::from(j);
    }
    acc
}

/// Number of monomials of degree `m` in `n` variables, C(n+m-1, m).
pub fn monomial_count(n: u64, m: u64) -> BigUint {
    binomial(n + m - 1, m)
}

/// All multi-indices of degree `m` in `n` variables, lexicographic from the
/// first variable down: `(m,0,…)` first, `(0,…,0,m)` last.
///
/// Errors with [`CombinatError::CapacityExceeded`] when the count exceeds
/// `cap` (callers beyond the cap must fall back to counting formulas).
pub fn enum_multi_indices(n: usize, m: u32, cap: u64) -> Result<Vec<MultiIndex>, CombinatError> {
    assert!(n >= 1, "variable count must be >= 1");
    let count = monomial_count(n as u64, m as u64);
    match count.to_u64() {
        Some(c) if c <= cap => {}
        _ => {
            return Err(CombinatError::CapacityExceeded {
                count: count.to_u64().unwrap_or(u64::MAX),
                cap,
            })
        }
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fill_indices(&mut current, 0, m, &mut out);
    Ok(out)
}

fn fill_indices(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.to_vec()));
        current[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill_indices(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

/// Tetrahedral multi-indices of degree `m` in `n` variables; there are C(n, m).
pub fn enum_tetrahedral(n: usize, m: u32, cap: u64) -> Result<Vec<MultiIndex>, CombinatError> {
    assert!(n >= 1, "variable count must be >= 1");
    if m as usize > n {
        return Ok(Vec::new());
    }
    let count = binomial(n as u64, m as u64);
    match count.to_u64() {
        Some(c) if c <= cap => {}
        _ => {
            return Err(CombinatError::CapacityExceeded {
                count: count.to_u64().unwrap_or(u64::MAX),
                cap,
            })
        }
    }
    let mut out = Vec::new();
    let mut positions: Vec<usize> = (0..m as usize).collect();
    loop {
        let mut alpha = vec![0u32; n];
        for &p in &positions {
            alpha[p] = 1;
        }
        out.push(MultiIndex(alpha));
        // next m-combination of {0..n-1} in lexicographic position order
        let mut i = m as usize;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if positions[i] + 1 <= n - (m as usize - i) {
                positions[i] += 1;
                for j in i + 1..m as usize {
                    positions[j] = positions[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Number of distinct words realizing the multi-index `alpha`:
/// h = m! / ∏_j α_j!, computed exactly.
pub fn word_count(alpha: &MultiIndex) -> Result<u128, CombinatError> {
    let mut h = factorial(alpha.degree() as u64);
    for &e in &alpha.0 {
        if e > 1 {
            h /= factorial(e as u64);
        }
    }
    h.to_u128().ok_or(CombinatError::Overflow)
}

/// Exact word count as a double; the division below is exact up to one
/// rounding of the quotient.
pub fn word_count_f64(alpha: &MultiIndex) -> f64 {
    let mut h = factorial(alpha.degree() as u64);
    for &e in &alpha.0 {
        if e > 1 {
            h /= factorial(e as u64);
        }
    }
    h.to_f64().unwrap_or(f64::INFINITY)
}

/// Primes up to and including `x`, by a plain sieve of Eratosthenes.
pub fn primes_upto(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let x = x as usize;
    let mut is_prime = vec![true; x + 1];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut p = 2usize;
    while p * p <= x {
        if is_prime[p] {
            let mut q = p * p;
            while q <= x {
                is_prime[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    is_prime
        .iter()
        .enumerate()
        .filter_map(|(i, &ok)| if ok { Some(i as u64) } else { None })
        .collect()
}

/// Prime counting function ϖ(x).
pub fn prime_count(x: u64) -> usize {
    primes_upto(x).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn enum_small_cases() {
        let idx = enum_multi_indices(2, 2, ENUM_CAP).unwrap();
        assert_eq!(
            idx,
            vec![
                MultiIndex(vec![2, 0]),
                MultiIndex(vec![1, 1]),
                MultiIndex(vec![0, 2])
            ]
        );
        assert_eq!(enum_multi_indices(3, 2, ENUM_CAP).unwrap().len(), 6);
        assert_eq!(
            enum_multi_indices(1, 5, ENUM_CAP).unwrap(),
            vec![MultiIndex(vec![5])]
        );
    }

    #[test]
    fn enum_respects_cap() {
        let err = enum_multi_indices(40, 20, 100).unwrap_err();
        assert!(matches!(err, CombinatError::CapacityExceeded { .. }));
    }

    #[test]
    fn enum_no_duplicates_all_degree_m() {
        for n in 1..=5usize {
            for m in 0..=5u32 {
                let idx = enum_multi_indices(n, m, ENUM_CAP).unwrap();
                assert_eq!(idx.len(), monomial_count(n as u64, m as u64).to_u64().unwrap() as usize);
                for a in &idx {
                    assert_eq!(a.degree(), m);
                    assert_eq!(a.len(), n);
                }
                let mut sorted = idx.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), idx.len());
            }
        }
    }

    #[test]
    fn word_counts() {
        assert_eq!(word_count(&MultiIndex(vec![1, 1])).unwrap(), 2);
        assert_eq!(word_count(&MultiIndex(vec![2, 0])).unwrap(), 1);
        assert_eq!(word_count(&MultiIndex(vec![1, 1, 1])).unwrap(), 6);
    }

    #[test]
    fn word_counts_sum_to_n_pow_m() {
        for n in 1..=6usize {
            for m in 0..=6u32 {
                let total: u128 = enum_multi_indices(n, m, ENUM_CAP)
                    .unwrap()
                    .iter()
                    .map(|a| word_count(a).unwrap())
                    .sum();
                assert_eq!(total, (n as u128).pow(m));
            }
        }
    }

    #[test]
    fn tetrahedral_count_is_n_choose_m() {
        for n in 1..=8usize {
            for m in 0..=8u32 {
                let filtered = if monomial_count(n as u64, m as u64).to_u64().unwrap() <= ENUM_CAP {
                    enum_multi_indices(n, m, ENUM_CAP)
                        .unwrap()
                        .into_iter()
                        .filter(|a| a.is_tetrahedral())
                        .count()
                } else {
                    continue;
                };
                let direct = enum_tetrahedral(n, m, ENUM_CAP).unwrap();
                assert_eq!(filtered, direct.len());
                assert_eq!(
                    direct.len() as u64,
                    binomial(n as u64, m as u64).to_u64().unwrap()
                );
            }
        }
    }

    #[test]
    fn primes_basic() {
        assert_eq!(prime_count(10), 4);
        assert_eq!(prime_count(2), 1);
        assert_eq!(prime_count(1), 0);
        assert_eq!(primes_upto(13), vec![2, 3, 5, 7, 11, 13]);
        assert!(primes_upto(1).is_empty());
    }

    #[test]
    fn binomials_exact() {
        assert_eq!(binomial(5, 3), BigUint::from(10u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(monomial_count(3, 2), BigUint::from(6u32));
        assert_eq!(factorial(10), BigUint::from(3628800u64));
    }

    #[test]
    fn word_profile_roundtrip() {
        let w = IndexWord(vec![2, 1, 2]);
        assert_eq!(w.profile(3).unwrap(), MultiIndex(vec![1, 2, 0]));
        assert!(!w.is_tetrahedral());
        assert!(IndexWord(vec![1, 2, 3]).is_tetrahedral());
        assert!(IndexWord(vec![4]).profile(3).is_err());
    }
}
