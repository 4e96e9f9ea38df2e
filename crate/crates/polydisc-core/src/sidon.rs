//! Explicit upper bounds for the Sidon constant S(m,n) — the smallest C with
//! Σ|c_α| ≤ C·∥P∥_∞ over m-homogeneous P in n variables — together with a
//! certified lower-bound search.
//!
//! Three upper routes are provided: the Cauchy–Schwarz bound
//! √C(n+m−1, m); for n > m² > 1 the split through the tetrahedral
//! decomposition, √(2me·n^{m−1}/(m−1)!) + (eκ)^m·√C(n−1, m−1), with κ entering
//! only through its certified upper endpoint; and S(1,n) = 1 exactly. Lower
//! bounds come from explicit witnesses: any P certifies
//! S(m,n) ≥ Σ|c_α| / hi(∥P∥_∞), which stays sound because the denominator is
//! a certified upper bound.

use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use num_traits::{Float, ToPrimitive};

use crate::combinat::{
    binomial, enum_multi_indices, enum_tetrahedral, CombinatError, MultiIndex, ENUM_CAP,
};
use crate::kernel::kappa;
use crate::poly::HomPoly;
use crate::rng::CounterRng;
use crate::torus::{local_refine, sup_norm_with, SupNormConfig, TorusPoint};

const E: f64 = core::f64::consts::E;

/// Tolerance at which κ's certified upper endpoint is taken for the bound
/// formulas. (Tolerances much below ~1e-6 are unreachable under the pinned
/// tail bound and prime cap; only the upper endpoint matters here.)
pub const KAPPA_BOUND_TOL: f64 = 1e-6;

static KAPPA_HI_BITS: AtomicU64 = AtomicU64::new(0);

/// Certified upper endpoint for κ, computed once and cached.
pub fn kappa_hi() -> f64 {
    let bits = KAPPA_HI_BITS.load(Ordering::Relaxed);
    if bits != 0 {
        return f64::from_bits(bits);
    }
    let v = kappa(KAPPA_BOUND_TOL)
        .expect("1e-6 tolerance is reachable under the prime cap")
        .hi;
    KAPPA_HI_BITS.store(v.to_bits(), Ordering::Relaxed);
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SidonError {
    /// Monomial support too large to enumerate.
    Capacity(CombinatError),
    /// Every candidate had zero coefficient norm.
    Degenerate,
}

impl fmt::Display for SidonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SidonError::Capacity(e) => write!(f, "support enumeration failed: {e}"),
            SidonError::Degenerate => write!(f, "all candidate witnesses were zero"),
        }
    }
}

impl core::error::Error for SidonError {}

/// √C(n+m−1, m): exact binomial, outward-rounded square root.
pub fn upper_trivial(m: u32, n: u64) -> f64 {
    assert!(m >= 1 && n >= 1);
    let b = binomial(n + m as u64 - 1, m as u64)
        .to_f64()
        .unwrap_or(f64::INFINITY);
    b.next_up().sqrt().next_up()
}

/// Whether the tetrahedral-split bound applies: n > m² > 1.
pub fn main_bound_applicable(m: u32, n: u64) -> bool {
    m >= 2 && n > (m as u64).saturating_mul(m as u64)
}

/// √(2me·n^{m−1}/(m−1)!) + (e·κ_hi)^m·√C(n−1, m−1) when n > m² > 1.
///
/// All roundings are outward (upward); `None` when not applicable.
pub fn upper_main(m: u32, n: u64) -> Option<f64> {
    if !main_bound_applicable(m, n) {
        return None;
    }
    let mf = m as f64;
    let nf = n as f64;
    let fact = crate::combinat::factorial(m as u64 - 1)
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let remainder_term = (2.0 * mf * E * nf.powi(m as i32 - 1) / fact).sqrt();
    let binom = binomial(n - 1, m as u64 - 1)
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let tetra_term = (E * kappa_hi()).powi(m as i32) * binom.sqrt();
    // outward slop covering the handful of roundings above
    Some((remainder_term + tetra_term) * (1.0 + 1e-12))
}

/// Best available upper bound: exactly 1 for m = 1, else the min over the
/// applicable formulas.
pub fn upper_best(m: u32, n: u64) -> f64 {
    assert!(m >= 1 && n >= 1);
    if m == 1 {
        return 1.0;
    }
    let mut best = upper_trivial(m, n);
    if let Some(v) = upper_main(m, n) {
        best = best.min(v);
    }
    best
}

/// The explicit constant C = e·κ_hi + 2 for the C^m·√(n^{m−1}/(m−1)!) shape.
pub fn shape_constant() -> f64 {
    E * kappa_hi() + 2.0
}

/// C^m·√(n^{m−1}/(m−1)!) with C = [`shape_constant`].
pub fn theorem1_shape_bound(m: u32, n: u64) -> f64 {
    let fact = crate::combinat::factorial(m as u64 - 1)
        .to_f64()
        .unwrap_or(f64::INFINITY);
    shape_constant().powi(m as i32) * ((n as f64).powi(m as i32 - 1) / fact).sqrt()
}

/// Upper-bound summary for one (m, n) pair.
#[derive(Clone, Debug)]
pub struct SidonBoundReport {
    pub m: u32,
    pub n: u64,
    pub upper_trivial: f64,
    /// `None` when n ≤ m² (not applicable).
    pub upper_main: Option<f64>,
    pub upper_best: f64,
    /// Scale n^{(m−1)/2} of the older C^m·n^{(m−1)/2} estimate, shown for
    /// context only; its constant is implicit so it never enters the min.
    pub old_scale: f64,
    pub lower_certified: Option<f64>,
}

/// Compute the upper-bound side of the report.
pub fn bounds(m: u32, n: u64) -> SidonBoundReport {
    SidonBoundReport {
        m,
        n,
        upper_trivial: upper_trivial(m, n),
        upper_main: upper_main(m, n),
        upper_best: upper_best(m, n),
        old_scale: (n as f64).powf((m as f64 - 1.0) / 2.0),
        lower_certified: None,
    }
}

/// Witness and its certified ratio from [`lower_search`].
#[derive(Clone, Debug)]
pub struct LowerSearchResult {
    pub witness: HomPoly,
    /// Σ|c_α| / hi(∥P∥_∞): a sound lower bound for S(m,n).
    pub certified_ratio: f64,
    /// Candidates scored.
    pub scored: u64,
}

/// Search for a polynomial maximizing the certified ratio Σ|c_α|/hi(∥P∥_∞).
///
/// Candidates draw unimodular coefficients on full, tetrahedral, or random
/// sparse supports (≤ 64 terms), then run coordinate-wise phase relaxation
/// against a set of near-maximizer torus points. `budget` caps the number of
/// certified scorings. Deterministic in (seed); ties break toward the
/// lexicographically smallest witness.
pub fn lower_search(
    m: u32,
    n: u64,
    budget: u64,
    seed: u64,
) -> Result<LowerSearchResult, SidonError> {
    assert!(m >= 1 && n >= 1);
    let nv = n as usize;
    let full = enum_multi_indices(nv, m, ENUM_CAP).map_err(SidonError::Capacity)?;
    let tetra = enum_tetrahedral(nv, m, ENUM_CAP).map_err(SidonError::Capacity)?;
    let budget = budget.max(1);

    let sup_cfg = SupNormConfig {
        budget: 1 << 22,
        ..SupNormConfig::default()
    };

    let mut best: Option<(f64, Vec<u64>, HomPoly)> = None;
    let mut scored = 0u64;
    let mut candidate_idx = 0u64;
    while scored < budget {
        let r = candidate_idx;
        candidate_idx += 1;
        let mut rng = CounterRng::stream(seed, r);
        let support: &[MultiIndex] = match r {
            0 | 1 => {
                if r == 1 && !tetra.is_empty() {
                    &tetra
                } else {
                    &full
                }
            }
            _ => match r % 3 {
                0 => &full,
                1 if !tetra.is_empty() => &tetra,
                _ => &full,
            },
        };
        let sparse: Vec<MultiIndex>;
        let support = if r >= 2 && r % 3 == 2 && full.len() > 2 {
            let take = full.len().min(64);
            let mut picked: Vec<usize> = (0..full.len()).collect();
            for i in 0..take {
                let j = i + rng.below((full.len() - i) as u64) as usize;
                picked.swap(i, j);
            }
            let mut sel: Vec<usize> = picked[..take].to_vec();
            sel.sort_unstable();
            sparse = sel.into_iter().map(|i| full[i].clone()).collect();
            &sparse
        } else {
            support
        };
        if support.is_empty() {
            continue;
        }

        let mut p = HomPoly::from_terms(
            nv,
            m,
            support.iter().map(|a| {
                let c = if r <= 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    rng.unit_phase()
                };
                (a.clone(), c)
            }),
        )
        .expect("support indices are well-formed");

        if r >= 2 {
            phase_relax(&mut p, &mut rng);
        }
        if p.is_zero() {
            continue;
        }

        let ratio = certified_ratio(&p, 1e-4, &sup_cfg);
        scored += 1;
        let key = witness_key(&p);
        let better = match &best {
            None => true,
            Some((best_ratio, best_key, _)) => {
                ratio > *best_ratio || (ratio == *best_ratio && key < *best_key)
            }
        };
        if better {
            best = Some((ratio, key, p));
        }
    }

    let (ratio, _, witness) = best.ok_or(SidonError::Degenerate)?;
    // rescore the winner at a tighter certification; keep the better ratio
    let fine = certified_ratio(&witness, 1e-6, &sup_cfg);
    Ok(LowerSearchResult {
        witness,
        certified_ratio: ratio.max(fine),
        scored,
    })
}

fn certified_ratio(p: &HomPoly, rel_err: f64, cfg: &SupNormConfig) -> f64 {
    let l1 = p.l1_coeff_norm();
    if l1 == 0.0 {
        return 0.0;
    }
    let sup = sup_norm_with(&p.to_general(), rel_err, cfg);
    if sup.enclosure.hi > 0.0 {
        l1 / sup.enclosure.hi
    } else {
        0.0
    }
}

/// Coordinate-wise phase relaxation: rotate each coefficient to minimize the
/// maximum of |P| over a small set of near-maximizer torus points.
fn phase_relax(p: &mut HomPoly, rng: &mut CounterRng) {
    let q = p.to_general();
    let nv = p.var_count();
    // witness set: refined random starts
    let mut points: Vec<Vec<Complex64>> = Vec::new();
    for _ in 0..6 {
        let start = TorusPoint::new((0..nv).map(|_| rng.uniform_in(0.0, 2.0 * core::f64::consts::PI)).collect());
        let (pt, _) = local_refine(&q, &start, 60);
        points.push(pt.to_complex());
    }

    const PHASES: usize = 64;
    for _pass in 0..2 {
        let alphas: Vec<MultiIndex> = p.terms().map(|(a, _)| a.clone()).collect();
        for alpha in alphas {
            let c = p.coefficient(&alpha);
            let modulus = c.norm();
            if modulus == 0.0 {
                continue;
            }
            // rest of P and the monomial value at each witness point
            let rests: Vec<(Complex64, Complex64)> = points
                .iter()
                .map(|z| {
                    let mono = monomial_at(&alpha, z);
                    (p.evaluate(z) - c * mono, mono)
                })
                .collect();
            let mut best_phi = c.arg();
            let mut best_val = f64::INFINITY;
            for k in 0..PHASES {
                let phi = 2.0 * core::f64::consts::PI * k as f64 / PHASES as f64;
                let rot = Complex64::new(phi.cos(), phi.sin()) * modulus;
                let worst = rests
                    .iter()
                    .map(|(rest, mono)| (rest + rot * mono).norm())
                    .fold(0.0f64, f64::max);
                if worst < best_val {
                    best_val = worst;
                    best_phi = phi;
                }
            }
            let new_c = Complex64::new(best_phi.cos(), best_phi.sin()) * modulus;
            p.add_term(alpha, new_c - c).expect("same support");
        }
    }
}

fn monomial_at(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &e) in alpha.0.iter().enumerate() {
        if e > 0 {
            acc *= crate::poly::pow_u32(z[j], e);
        }
    }
    acc
}

/// Total order on witnesses for deterministic tie-breaking.
fn witness_key(p: &HomPoly) -> Vec<u64> {
    let mut key = Vec::with_capacity(p.term_count() * 4);
    for (alpha, c) in p.terms() {
        for &e in &alpha.0 {
            key.push(e as u64);
        }
        key.push(c.re.to_bits());
        key.push(c.im.to_bits());
    }
    key
}
