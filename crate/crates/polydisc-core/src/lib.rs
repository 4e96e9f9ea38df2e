//! Core machinery for bounding the Sidon constant of homogeneous polynomials
//! on the polydisc and the n-dimensional Bohr radius.
//!
//! The crate is `no_std` (with `alloc`); all transcendental functions route
//! through `libm`, so results are bit-reproducible across platforms. IO, file
//! formats and the command-line frontend live in the companion `polydisc-cli`
//! crate.
//!
//! Module map:
//! - [`combinat`]: multi-indices, word counts, exact binomials, prime sieve.
//! - [`poly`]: sparse homogeneous / general polynomials and certified
//!   [`poly::Enclosure`] intervals.
//! - [`torus`]: certified sup-norm enclosures over the unit torus.
//! - [`polarize`]: the symmetric multilinear form of a homogeneous polynomial.
//! - [`kernel`]: prime-indexed projection kernels onto the tetrahedral part.
//! - [`chaos`]: Rademacher chaos moments and the hypercontractive inequality.
//! - [`sidon`]: explicit Sidon-constant upper bounds and certified lower-bound
//!   search.
//! - [`bohr`]: Bohr-radius lower bounds via the majorant series.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bohr;
pub mod chaos;
pub mod combinat;
pub mod kernel;
pub mod polarize;
pub mod poly;
pub mod rng;
pub mod sidon;
pub mod torus;

mod fft;
mod sum;

pub use num_complex::Complex64;
