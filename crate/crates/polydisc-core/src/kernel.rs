//! Prime-indexed kernels projecting onto the tetrahedral part.
//!
//! For degree m, let p_1 < … < p_ϖ(m) be the primes up to m and
//! r_m(t) = c_m·exp(2πi(t_1/p_1 + … + t_ϖ/p_ϖ)) on Q = [0,1]^ϖ(m), with c_m
//! normalizing the first moment to 1. Then ∫ r_m = 1, ∫ r_m^k = 0 for
//! 2 ≤ k ≤ m, and |r_m| ≡ |c_m| ≤ κ = (∏_p sinc(π/p))^{-1} = 2.209…, which is
//! what makes the substitution z_j ↦ z_j·r(t^j) average out every
//! non-tetrahedral monomial while inflating the sup norm by at most κ^m.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;

use crate::combinat::primes_upto;
use crate::poly::{pow_u32, Enclosure, HomPoly};
use crate::rng::CounterRng;
use crate::sum::{Accumulator, ComplexAccumulator};

/// Primes may be sieved up to this bound when tightening κ.
pub const PRIME_CAP: u64 = 10_000_000;

/// Minimum sample count for the Monte Carlo projection.
pub const MIN_SAMPLES: u64 = 100;

#[derive(Clone, Debug, PartialEq)]
pub enum KernelError {
    /// Requested κ tolerance cannot be met with primes up to [`PRIME_CAP`].
    TolUnreachable { tol: f64, achievable: f64 },
    /// Kernel argument with wrong dimension or outside [0,1].
    BadKernelPoint { expected: usize, got: usize },
    /// Fewer than [`MIN_SAMPLES`] Monte Carlo samples.
    TooFewSamples { got: u64 },
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelError::TolUnreachable { tol, achievable } => write!(
                f,
                "kappa tolerance {tol:e} unreachable with prime cap {PRIME_CAP} (best width {achievable:e})"
            ),
            KernelError::BadKernelPoint { expected, got } => {
                write!(f, "kernel point has {got} coordinates, expected {expected}")
            }
            KernelError::TooFewSamples { got } => {
                write!(f, "{got} samples below the minimum of {MIN_SAMPLES}")
            }
        }
    }
}

impl core::error::Error for KernelError {}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Certified enclosure of κ = (∏_{p prime} sinc(π/p))^{-1} with width ≤ `tol`.
///
/// The finite product runs over primes ≤ P; the missing factors are bounded
/// termwise by 0 ≤ −log sinc(x) ≤ (x²/6)/(1 − x²/π²) at x = π/p together with
/// Σ_{p>P} p^{-2} ≤ Σ_{k>P} k^{-2} ≤ 1/P. P grows until the tail plus an
/// outward float slop fits the tolerance.
pub fn kappa(tol: f64) -> Result<Enclosure, KernelError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut limit = 4096u64;
    loop {
        let enc = kappa_with_prime_limit(limit);
        if enc.width() <= tol {
            return Ok(enc);
        }
        if limit >= PRIME_CAP {
            return Err(KernelError::TolUnreachable {
                tol,
                achievable: enc.width(),
            });
        }
        limit = (limit * 4).min(PRIME_CAP);
    }
}

/// κ enclosure from the primes up to `limit`, tail-bounded and outward-rounded.
pub fn kappa_with_prime_limit(limit: u64) -> Enclosure {
    let primes = primes_upto(limit);
    let mut log_sum = Accumulator::new();
    for &p in &primes {
        let x = PI / p as f64;
        log_sum.add(-sinc(x).ln());
    }
    let p_edge = limit as f64;
    let tail = (PI * PI / 6.0) / (1.0 - 1.0 / (p_edge * p_edge)) / p_edge;
    // one ulp-scale slop per factor, applied outward on the log scale
    let slop = 1e-15 * (primes.len() as f64 + 4.0);
    let lo = (log_sum.value() - slop).exp();
    let hi = (log_sum.value() + tail + slop).exp();
    Enclosure::new(
        lo,
        hi,
        format!(
            "sinc product over {} primes ≤ {limit}; termwise log tail ≤ {tail:.3e}",
            primes.len()
        ),
    )
}

/// The kernel data for one degree: primes ≤ m and the normalizing constant.
#[derive(Clone, Debug)]
pub struct KernelSpec {
    m: u32,
    primes: Vec<u64>,
    c_m: Complex64,
}

impl KernelSpec {
    pub fn new(m: u32) -> Self {
        let primes = primes_upto(m as u64);
        let c_m = primes
            .iter()
            .map(|&p| first_moment_factor(p, 1))
            .product::<Complex64>()
            .finv();
        KernelSpec { m, primes, c_m }
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of kernel coordinates, ϖ(m).
    pub fn dim(&self) -> usize {
        self.primes.len()
    }

    pub fn c_m(&self) -> Complex64 {
        self.c_m
    }

    /// r_m(t) = c_m·exp(2πi Σ_k t_k/p_k); |r_m(t)| ≡ |c_m|.
    pub fn r_eval(&self, t: &[f64]) -> Result<Complex64, KernelError> {
        if t.len() != self.primes.len() || t.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(KernelError::BadKernelPoint {
                expected: self.primes.len(),
                got: t.len(),
            });
        }
        Ok(self.c_m * self.phase_at(t))
    }

    fn phase_at(&self, t: &[f64]) -> Complex64 {
        let mut ang = 0.0f64;
        for (tk, &p) in t.iter().zip(&self.primes) {
            ang += tk / p as f64;
        }
        ang *= 2.0 * PI;
        Complex64::new(ang.cos(), ang.sin())
    }
}

/// (p/(2πik))·(e^{2πik/p} − 1), the k-th moment factor of one kernel coordinate.
fn first_moment_factor(p: u64, k: u32) -> Complex64 {
    let ang = 2.0 * PI * k as f64 / p as f64;
    let num = Complex64::new(ang.cos() - 1.0, ang.sin());
    num * Complex64::new(0.0, -(p as f64) / (2.0 * PI * k as f64))
}

/// Exact k-th moment ∫_Q r_m^k dμ in closed form.
///
/// Returns exactly 1 for k = 1 and exactly 0 whenever some kernel prime
/// divides k (which covers all 2 ≤ k ≤ m); the removable 0/0 case never
/// reaches floating point.
pub fn moment(m: u32, k: u32) -> Complex64 {
    assert!(m >= 2, "kernel moments need degree ≥ 2");
    assert!(k >= 1, "moment power must be ≥ 1");
    if k == 1 {
        return Complex64::new(1.0, 0.0);
    }
    let spec = KernelSpec::new(m);
    if spec.primes.iter().any(|&p| k as u64 % p == 0) {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = pow_u32(spec.c_m, k);
    for &p in &spec.primes {
        acc *= first_moment_factor(p, k);
    }
    acc
}

/// Sufficient statistics of one Monte Carlo sample block.
#[derive(Clone, Copy, Debug, Default)]
pub struct BlockStats {
    pub sum: Complex64,
    pub sum_sq: f64,
    pub count: u64,
}

impl BlockStats {
    pub fn merge(self, other: BlockStats) -> BlockStats {
        BlockStats {
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
            count: self.count + other.count,
        }
    }
}

/// Samples per block; parallel runs must combine whole blocks in index order
/// to reproduce the sequential result bit for bit.
pub const MC_BLOCK: u64 = 4096;

/// Statistics for samples `start..start+len` of the projection estimator.
///
/// Sample i draws one kernel point per variable from the counter stream
/// keyed by (seed, i) and evaluates P(z_1 r(t¹),…,z_n r(tⁿ)).
pub fn project_block(
    p: &HomPoly,
    z: &[Complex64],
    seed: u64,
    start: u64,
    len: u64,
) -> BlockStats {
    let spec = KernelSpec::new(p.degree());
    let n = p.var_count();
    let dim = spec.dim();
    let mut sum = ComplexAccumulator::new();
    let mut sum_sq = Accumulator::new();
    let mut w = alloc::vec![Complex64::new(0.0, 0.0); n];
    let mut t = alloc::vec![0.0f64; dim];
    for i in start..start + len {
        let mut rng = CounterRng::stream(seed, i);
        for (j, wj) in w.iter_mut().enumerate() {
            for tk in t.iter_mut() {
                *tk = rng.uniform();
            }
            *wj = z[j] * spec.c_m * spec.phase_at(&t);
        }
        let x = p.evaluate(&w);
        sum.add(x);
        sum_sq.add(x.norm_sqr());
    }
    BlockStats {
        sum: sum.value(),
        sum_sq: sum_sq.value(),
        count: len,
    }
}

/// Monte Carlo estimate of the tetrahedral part evaluated at z.
///
/// Unbiased for `tetra_split(P).0.evaluate(z)`; the returned standard error is
/// the sample estimate sqrt(Var/S). Accumulation is chunked in fixed blocks
/// so a parallel runner merging blocks in order reproduces it exactly.
pub fn project_tetra_mc(
    p: &HomPoly,
    z: &[Complex64],
    samples: u64,
    seed: u64,
) -> Result<(Complex64, f64), KernelError> {
    if samples < MIN_SAMPLES {
        return Err(KernelError::TooFewSamples { got: samples });
    }
    assert_eq!(z.len(), p.var_count(), "point dimension mismatch");
    let mut stats = BlockStats::default();
    let mut start = 0u64;
    while start < samples {
        let len = MC_BLOCK.min(samples - start);
        stats = stats.merge(project_block(p, z, seed, start, len));
        start += len;
    }
    Ok(finish_mc(stats))
}

/// Mean and standard error from merged block statistics.
pub fn finish_mc(stats: BlockStats) -> (Complex64, f64) {
    let s = stats.count as f64;
    let mean = stats.sum / s;
    let var = ((stats.sum_sq - s * mean.norm_sqr()) / (s - 1.0)).max(0.0);
    (mean, (var / s).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{enum_multi_indices, MultiIndex};
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kappa_contains_paper_value() {
        let enc = kappa(1e-3).unwrap();
        assert!(enc.width() <= 1e-3);
        assert!(enc.lo <= 2.209 && 2.209 <= enc.hi, "{enc}");
        assert!(enc.lo <= 2.2100 && 2.2085 <= enc.hi, "{enc}");
    }

    #[test]
    fn kappa_nested_tolerances() {
        let coarse = kappa(1e-3).unwrap();
        let fine = kappa(1e-6).unwrap();
        assert!(fine.width() <= 1e-6);
        assert!(fine.lo >= coarse.lo && fine.hi <= coarse.hi);
        assert!(coarse.contains(fine.midpoint()));
    }

    #[test]
    fn kappa_unreachable_tolerance() {
        assert!(matches!(
            kappa(1e-12),
            Err(KernelError::TolUnreachable { .. })
        ));
    }

    #[test]
    fn single_factor_is_half_pi() {
        // (sinc(π/2))^{-1} = π/2
        assert!(((1.0 / sinc(PI / 2.0)) - PI / 2.0).abs() < 1e-15);
        let spec = KernelSpec::new(2);
        assert_eq!(spec.primes(), &[2]);
        assert!((spec.c_m().norm() - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn r_eval_constant_modulus() {
        let spec = KernelSpec::new(2);
        for t in [0.0, 0.25, 0.7, 1.0] {
            let v = spec.r_eval(&[t]).unwrap();
            assert!((v.norm() - PI / 2.0).abs() < 1e-13);
        }
        assert!((spec.r_eval(&[0.0]).unwrap() - spec.c_m()).norm() < 1e-15);
        assert!(spec.r_eval(&[0.5, 0.5]).is_err());
        assert!(spec.r_eval(&[1.5]).is_err());
    }

    #[test]
    fn r_bounded_by_kappa_for_all_degrees() {
        let kap = kappa(1e-6).unwrap();
        let mut rng = CounterRng::new(2);
        for m in 2..=50u32 {
            let spec = KernelSpec::new(m);
            let t: Vec<f64> = (0..spec.dim()).map(|_| rng.uniform()).collect();
            let v = spec.r_eval(&t).unwrap();
            assert!(v.norm() <= kap.hi * (1.0 + 1e-12), "m={m}: |r|={}", v.norm());
        }
    }

    #[test]
    fn moments_exact() {
        for m in 2..=30u32 {
            assert_eq!(moment(m, 1), c(1.0, 0.0));
            for k in 2..=m {
                assert_eq!(moment(m, k), c(0.0, 0.0), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn moment_beyond_degree_nonzero_when_coprime() {
        // 5 is coprime to the kernel primes {2,3} of degree 4
        let v = moment(4, 5);
        assert!(v.norm() >= 1e-3, "|moment(4,5)| = {}", v.norm());
        // quadrature cross-check on the closed form
        let spec = KernelSpec::new(4);
        let grid = 512;
        let mut acc = ComplexAccumulator::new();
        for a in 0..grid {
            for b in 0..grid {
                let t = [
                    (a as f64 + 0.5) / grid as f64,
                    (b as f64 + 0.5) / grid as f64,
                ];
                acc.add(pow_u32(spec.r_eval(&t).unwrap(), 5));
            }
        }
        let quad = acc.value() / (grid * grid) as f64;
        assert!((quad - v).norm() < 1e-3, "quad {quad} vs closed form {v}");
    }

    #[test]
    fn kernel_modulus_nondecreasing_bounded_by_kappa() {
        let kap = kappa(1e-6).unwrap();
        let primes = primes_upto(10_000);
        let mut log_abs = 0.0f64;
        let mut idx = 0usize;
        let mut last = 1.0f64;
        for m in 2..=10_000u64 {
            while idx < primes.len() && primes[idx] <= m {
                log_abs -= sinc(PI / primes[idx] as f64).ln();
                idx += 1;
            }
            let abs = log_abs.exp();
            assert!(abs >= last - 1e-12, "modulus dropped at m={m}");
            assert!(abs <= kap.hi * (1.0 + 1e-12), "modulus exceeds κ at m={m}");
            last = abs;
        }
        // spot check against the direct constructor
        let spec = KernelSpec::new(10);
        let mut direct = 1.0f64;
        for &p in spec.primes() {
            direct /= sinc(PI / p as f64);
        }
        assert!((spec.c_m().norm() - direct).abs() < 1e-12);
    }

    #[test]
    fn projection_kills_square_terms() {
        // P = z1²: tetrahedral part is 0
        let p = HomPoly::from_terms(1, 2, vec![(MultiIndex(vec![2]), c(1.0, 0.0))]).unwrap();
        let (est, se) = project_tetra_mc(&p, &[c(1.0, 0.0)], 20_000, 7).unwrap();
        assert!(est.norm() <= 4.0 * se, "estimate {est} stderr {se}");

        // P = z1·z2 is its own tetrahedral part
        let q = HomPoly::from_terms(2, 2, vec![(MultiIndex(vec![1, 1]), c(1.0, 0.0))]).unwrap();
        let (est, se) = project_tetra_mc(&q, &[c(1.0, 0.0), c(1.0, 0.0)], 20_000, 7).unwrap();
        assert!((est - c(1.0, 0.0)).norm() <= 4.0 * se);
    }

    #[test]
    fn projection_matches_exact_split() {
        let mut rng = CounterRng::new(31);
        let mut hits = 0;
        let trials = 20;
        for trial in 0..trials {
            let support = enum_multi_indices(3, 3, 1000).unwrap();
            let p = HomPoly::from_terms(
                3,
                3,
                support.iter().map(|a| (a.clone(), rng.in_unit_disc())),
            )
            .unwrap();
            let z: Vec<Complex64> = (0..3).map(|_| rng.unit_phase()).collect();
            let exact = p.tetra_split().0.evaluate(&z);
            let (est, se) = project_tetra_mc(&p, &z, 40_000, 1000 + trial).unwrap();
            if (est - exact).norm() <= 4.0 * se {
                hits += 1;
            }
        }
        assert!(hits >= 19, "only {hits}/{trials} within 4 standard errors");
    }

    #[test]
    fn stderr_scales_inverse_sqrt() {
        let p = HomPoly::from_terms(
            2,
            2,
            vec![
                (MultiIndex(vec![2, 0]), c(1.0, 0.0)),
                (MultiIndex(vec![1, 1]), c(0.5, 0.5)),
            ],
        )
        .unwrap();
        let z = [c(1.0, 0.0), c(0.0, 1.0)];
        let mut ratio_sum = 0.0;
        let trials = 20;
        for t in 0..trials {
            let (_, se1) = project_tetra_mc(&p, &z, 10_000, 50 + t).unwrap();
            let (_, se2) = project_tetra_mc(&p, &z, 40_000, 5_000 + t).unwrap();
            ratio_sum += se2 / se1;
        }
        let avg = ratio_sum / trials as f64;
        assert!((0.4..=0.6).contains(&avg), "average ratio {avg}");
    }

    #[test]
    fn sample_floor_enforced() {
        let p = HomPoly::from_terms(1, 2, vec![(MultiIndex(vec![2]), c(1.0, 0.0))]).unwrap();
        assert!(matches!(
            project_tetra_mc(&p, &[c(1.0, 0.0)], 50, 0),
            Err(KernelError::TooFewSamples { .. })
        ));
    }
}
