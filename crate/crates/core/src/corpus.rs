//! Seeded random trigonometric polynomials for equivalence scans.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::grid::{for_each_multi, GridSpec};
use crate::spectral::SpectralRep;

pub const DEFAULT_BAND: i64 = 31;

/// Member `id` of the corpus for `seed`: coefficients `u + iv` with
/// `u, v ~ U[-1, 1]` on `1 <= |n_j| <= band`, Hermitian completed. Every
/// member draws from its own ChaCha stream so members are independent of
/// generation order.
pub fn random_member(spec: GridSpec, band: i64, seed: u64, id: u64) -> Result<SpectralRep> {
    if band < 1 || band >= spec.band() {
        return Err(invalid("band", "must satisfy 1 <= band < 2^(K-1)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    let m = spec.dim();
    let mut rep = SpectralRep::zeros(spec);
    // n_0 > 0 is a half-space; the mirror image comes from the completion
    let width = 2 * band as u32 - 1;
    let mut lo = alloc::vec![0u32; m];
    lo[0] = band as u32;
    let hi = alloc::vec![width; m];
    let mut n = alloc::vec![0i64; m];
    let mut failure = None;
    for_each_multi(&lo, &hi, |idx| {
        // idx in 0..2B maps to -B..=-1, 1..=B
        for j in 0..m {
            let i = idx[j] as i64;
            n[j] = if i < band { i - band } else { i - band + 1 };
        }
        let c = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        if let Err(e) = rep.set_hermitian(&n, c) {
            failure = Some(e);
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(rep.project_zero_mean()),
    }
}

/// `count` members `0..count` of the corpus for `seed`.
pub fn random_corpus(spec: GridSpec, count: usize, band: i64, seed: u64) -> Result<Vec<SpectralRep>> {
    (0..count as u64).map(|id| random_member(spec, band, seed, id)).collect()
}
