//! In-place radix-2 complex FFT for power-of-two sizes.
//!
//! Used by the torus grid evaluator: a polynomial evaluated at all N-th roots
//! of unity is the DFT of its coefficient tensor folded modulo N, which is
//! exact for any N because ω^N = 1. Only power-of-two N are produced by the
//! doubling schedule, so radix-2 suffices.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

/// Twiddle table for a size-`n` transform (n a power of two).
pub struct Fft {
    n: usize,
    twiddles: Vec<Complex64>,
}

impl Fft {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT size must be a power of two");
        let mut twiddles = Vec::with_capacity(n / 2);
        for k in 0..n / 2 {
            let angle = -2.0 * PI * k as f64 / n as f64;
            twiddles.push(Complex64::new(angle.cos(), angle.sin()));
        }
        Fft { n, twiddles }
    }

    /// Forward transform: X_k = Σ_j x_j e^{-2πi jk / n}.
    pub fn forward(&self, data: &mut [Complex64]) {
        let n = self.n;
        assert_eq!(data.len(), n);
        if n <= 1 {
            return;
        }
        // bit reversal permutation
        let mut j = 0usize;
        for i in 0..n - 1 {
            if i < j {
                data.swap(i, j);
            }
            let mut mask = n >> 1;
            while j & mask != 0 {
                j ^= mask;
                mask >>= 1;
            }
            j |= mask;
        }
        let mut len = 2usize;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * step];
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

/// Evaluate a coefficient tensor on the full N-point grid per axis.
///
/// `terms` supplies (exponents, coefficient) pairs; exponents are folded
/// mod N into a dense `N^dims` tensor (row-major, last axis fastest), then
/// transformed axis by axis. Entry at grid index (k_1,…,k_d) is
/// P(e^{iθ}) with θ_j = 2π k_j / N.
pub fn grid_values(
    dims: usize,
    n_grid: usize,
    terms: impl Iterator<Item = (Vec<u32>, Complex64)>,
) -> Vec<Complex64> {
    let size = n_grid.pow(dims as u32);
    let mut tensor = vec![Complex64::new(0.0, 0.0); size];
    for (alpha, c) in terms {
        debug_assert_eq!(alpha.len(), dims);
        let mut flat = 0usize;
        for &e in &alpha {
            flat = flat * n_grid + (e as usize % n_grid);
        }
        tensor[flat] += c;
    }
    let fft = Fft::new(n_grid);
    // The forward DFT uses e^{-2πi jk/n}; evaluation at e^{+2πi k/n} needs the
    // conjugate transform, realized by conjugating in and out.
    for v in tensor.iter_mut() {
        *v = v.conj();
    }
    let mut scratch = vec![Complex64::new(0.0, 0.0); n_grid];
    for axis in 0..dims {
        transform_axis(&mut tensor, dims, n_grid, axis, &fft, &mut scratch);
    }
    for v in tensor.iter_mut() {
        *v = v.conj();
    }
    tensor
}

fn transform_axis(
    tensor: &mut [Complex64],
    dims: usize,
    n_grid: usize,
    axis: usize,
    fft: &Fft,
    scratch: &mut [Complex64],
) {
    let stride = n_grid.pow((dims - 1 - axis) as u32);
    let block = stride * n_grid;
    let size = tensor.len();
    let mut base = 0usize;
    while base < size {
        for off in 0..stride {
            for k in 0..n_grid {
                scratch[k] = tensor[base + off + k * stride];
            }
            fft.forward(scratch);
            for k in 0..n_grid {
                tensor[base + off + k * stride] = scratch[k];
            }
        }
        base += block;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn naive_eval(terms: &[(Vec<u32>, Complex64)], theta: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, c) in terms {
            let mut t = *c;
            for (j, &e) in alpha.iter().enumerate() {
                let ang = theta[j] * e as f64;
                t *= Complex64::new(ang.cos(), ang.sin());
            }
            acc += t;
        }
        acc
    }

    #[test]
    fn matches_naive_evaluation_2d() {
        let terms = vec![
            (vec![0u32, 0], Complex64::new(1.0, 0.5)),
            (vec![1, 2], Complex64::new(-2.0, 1.0)),
            (vec![3, 1], Complex64::new(0.25, -0.75)),
        ];
        let n = 8usize;
        let vals = grid_values(2, n, terms.iter().cloned());
        for k1 in 0..n {
            for k2 in 0..n {
                let theta = [
                    2.0 * PI * k1 as f64 / n as f64,
                    2.0 * PI * k2 as f64 / n as f64,
                ];
                let want = naive_eval(&terms, &theta);
                let got = vals[k1 * n + k2];
                assert!((want - got).norm() < 1e-12, "mismatch at ({k1},{k2})");
            }
        }
    }

    #[test]
    fn exponent_folding_is_exact() {
        // degree 5 exponent on a 4-point grid folds to exponent 1
        let terms = vec![(vec![5u32], Complex64::new(1.0, 0.0))];
        let vals = grid_values(1, 4, terms.iter().cloned());
        for k in 0..4 {
            let theta = 2.0 * PI * k as f64 / 4.0;
            let want = Complex64::new((5.0 * theta).cos(), (5.0 * theta).sin());
            assert!((vals[k] - want).norm() < 1e-12);
        }
    }
}
