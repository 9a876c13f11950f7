//! Function-space norms of periodic trigonometric polynomials.
//!
//! The crate works with band-limited functions on the torus sampled on a
//! uniform `2^K`-per-axis grid. It provides:
//!
//! * spectral plumbing: forward/inverse transforms, dyadic blocks, partial
//!   and angle sums, Weyl fractional derivatives ([`spectral`]);
//! * the Lorentz `(p, tau)` norm by exact step-function quadrature ([`lorentz`]);
//! * fractional differences and mixed/full moduli of smoothness ([`smoothness`]);
//! * angle-approximation quantities ([`approximation`]);
//! * logarithmic Lipschitz and mixed-smoothness Besov norms in several
//!   equivalent forms ([`space_norms`]);
//! * an exact-arithmetic embedding decision engine ([`embedding`]);
//! * lacunary counterexample families and divergence scans ([`counterexamples`]).
//!
//! The crate is `no_std` compatible (with `alloc`). Disable the default `std`
//! feature and enable `libm` for targets without a system math library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("mixsmooth-core needs either the `std` or the `libm` feature for float math");

mod math;

pub mod approximation;
pub mod corpus;
pub mod counterexamples;
pub mod embedding;
pub mod error;
pub mod fft;
pub mod grid;
pub mod lorentz;
pub mod smoothness;
pub mod space_norms;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{DyadicIndex, GridFunction, GridSpec, IndexSubset};
pub use lorentz::{LorentzParams, Rearrangement};
pub use spectral::SpectralRep;

pub use num_complex::Complex64;
