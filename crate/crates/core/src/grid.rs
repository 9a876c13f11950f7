//! Grid geometry, index conventions and small index types.
//!
//! A grid with dimension `m` and resolution exponent `K` has `2^K` points per
//! axis at `x = 2 pi i / 2^K`, `i = 0..2^K`. Buffers are row-major with axis 0
//! slowest. Storage position `i` on an axis carries frequency `i` when
//! `i < 2^(K-1)` and `i - 2^K` otherwise.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest dimension accepted by [`GridSpec::new`].
pub const MAX_DIM: usize = 3;
/// Largest total number of grid points accepted.
pub const MAX_POINTS: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    dim: usize,
    level: u32,
}

impl GridSpec {
    /// Grid with `dim` in `1..=3` axes of `2^level` points, `level >= 3`.
    pub fn new(dim: usize, level: u32) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::InvalidGrid { dim, level });
        }
        Self::new_unbounded(dim, level)
    }

    /// Like [`GridSpec::new`] without the dimension cap. Higher dimensions
    /// are supported by every routine but are not exercised by the test suite.
    pub fn new_unbounded(dim: usize, level: u32) -> Result<Self> {
        if dim == 0 || level < 3 || level > 26 {
            return Err(Error::InvalidGrid { dim, level });
        }
        let total = (level as usize)
            .checked_mul(dim)
            .filter(|&bits| bits <= 26)
            .map(|bits| 1usize << bits);
        if total.is_none_or(|t| t > MAX_POINTS) {
            return Err(Error::InvalidGrid { dim, level });
        }
        Ok(GridSpec { dim, level })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Resolution exponent `K`.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Points per axis, `2^K`.
    pub fn side(&self) -> usize {
        1 << self.level
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        1 << (self.level as usize * self.dim)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Band limit: admissible frequencies satisfy `|n_j| < 2^(K-1)`.
    pub fn band(&self) -> i64 {
        1 << (self.level - 1)
    }

    /// Largest dyadic block index that fits in the band.
    pub fn max_block(&self) -> u32 {
        self.level - 1
    }

    /// Frequency carried by storage position `i` on one axis.
    #[inline]
    pub fn freq(&self, i: usize) -> i64 {
        let n = self.side();
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Storage position of frequency `k` on one axis (taken modulo `2^K`).
    #[inline]
    pub fn position(&self, k: i64) -> usize {
        let n = self.side() as i64;
        k.rem_euclid(n) as usize
    }

    /// Flat buffer offset of a multi-frequency.
    pub fn offset(&self, freqs: &[i64]) -> Result<usize> {
        if freqs.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: freqs.len(),
            });
        }
        let mut off = 0;
        for &k in freqs {
            off = off * self.side() + self.position(k);
        }
        Ok(off)
    }

    /// Multi-frequency stored at a flat buffer offset.
    pub fn freqs_at(&self, mut offset: usize) -> Vec<i64> {
        let n = self.side();
        let mut out = alloc::vec![0i64; self.dim];
        for j in (0..self.dim).rev() {
            out[j] = self.freq(offset % n);
            offset /= n;
        }
        out
    }

    /// Frequencies of one axis in storage order.
    pub fn axis_freqs(&self) -> Vec<i64> {
        (0..self.side()).map(|i| self.freq(i)).collect()
    }

    /// Signed `2^(K-1)` Nyquist frequency is stored but lies outside the band.
    pub fn in_band(&self, k: i64) -> bool {
        k.abs() < self.band()
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            })
        }
    }
}

/// Real samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::LengthMismatch {
                expected: spec.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "grid samples" });
        }
        Ok(GridFunction { spec, values })
    }

    /// Samples `f(2 pi i / 2^K)` for a closure taking the point coordinates.
    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(&[f64]) -> f64) -> Result<Self> {
        let n = spec.side();
        let step = 2.0 * core::f64::consts::PI / n as f64;
        let mut x = alloc::vec![0.0; spec.dim()];
        let mut values = Vec::with_capacity(spec.len());
        for off in 0..spec.len() {
            let mut rem = off;
            for j in (0..spec.dim()).rev() {
                x[j] = (rem % n) as f64 * step;
                rem /= n;
            }
            values.push(f(&x));
        }
        Self::new(spec, values)
    }

    pub(crate) fn from_raw(spec: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), spec.len());
        GridFunction { spec, values }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// A subset `e` of the axes `{0, .., m-1}`, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSubset(u32);

impl IndexSubset {
    pub const EMPTY: IndexSubset = IndexSubset(0);

    pub fn full(dim: usize) -> Self {
        IndexSubset((1u32 << dim) - 1)
    }

    pub fn from_axes(axes: &[usize]) -> Self {
        IndexSubset(axes.iter().fold(0, |acc, &j| acc | (1 << j)))
    }

    pub fn from_bits(bits: u32) -> Self {
        IndexSubset(bits)
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.0 & (1 << axis) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn complement(&self, dim: usize) -> Self {
        IndexSubset(!self.0 & Self::full(dim).0)
    }

    /// Largest axis index plus one, or zero for the empty set.
    pub fn span(&self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn axes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |&j| self.contains(j))
    }

    /// All nonempty subsets of `{0, .., dim-1}` in increasing bit order.
    pub fn nonempty_subsets(dim: usize) -> impl Iterator<Item = IndexSubset> {
        (1..(1u32 << dim)).map(IndexSubset)
    }
}

/// Dyadic multi-index `s` with every `s_j >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicIndex(pub Vec<u32>);

impl DyadicIndex {
    pub fn new(s: Vec<u32>) -> Result<Self> {
        if s.contains(&0) {
            return Err(crate::error::invalid("dyadic index", "components must be >= 1"));
        }
        Ok(DyadicIndex(s))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Frequency range `[2^(s-1), 2^s)` of `|k|` on one axis.
    pub fn axis_range(s: u32) -> (i64, i64) {
        (1 << (s - 1), 1 << s)
    }
}

/// Calls `f` with every multi-index in `[lo_j, hi_j]` (inclusive), last axis fastest.
pub(crate) fn for_each_multi(lo: &[u32], hi: &[u32], mut f: impl FnMut(&[u32])) {
    let m = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        f(&cur);
        let mut j = m;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if cur[j] < hi[j] {
                cur[j] += 1;
                break;
            }
            cur[j] = lo[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_convention() {
        let g = GridSpec::new(1, 3).unwrap();
        let f: Vec<i64> = g.axis_freqs();
        assert_eq!(f, alloc::vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for k in -4..4 {
            assert_eq!(g.freq(g.position(k)), k);
        }
        assert!(!g.in_band(-4));
        assert!(g.in_band(3));
    }

    #[test]
    fn offsets_round_trip() {
        let g = GridSpec::new(3, 3).unwrap();
        for off in [0, 1, 77, 300, 511] {
            let k = g.freqs_at(off);
            assert_eq!(g.offset(&k).unwrap(), off);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(0, 5).is_err());
        assert!(GridSpec::new(4, 5).is_err());
        assert!(GridSpec::new(1, 2).is_err());
        assert!(GridSpec::new(3, 10).is_err());
        assert!(GridSpec::new_unbounded(4, 5).is_ok());
    }

    #[test]
    fn subsets() {
        let all: Vec<_> = IndexSubset::nonempty_subsets(3).collect();
        assert_eq!(all.len(), 7);
        let e = IndexSubset::from_axes(&[0, 2]);
        assert!(e.contains(0) && !e.contains(1) && e.contains(2));
        assert_eq!(e.complement(3), IndexSubset::from_axes(&[1]));
        assert_eq!(e.axes().collect::<Vec<_>>(), alloc::vec![0, 2]);
    }

    #[test]
    fn multi_index_iteration_order() {
        let mut seen = Vec::new();
        for_each_multi(&[0, 1], &[1, 2], |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            alloc::vec![
                alloc::vec![0, 1],
                alloc::vec![0, 2],
                alloc::vec![1, 1],
                alloc::vec![1, 2]
            ]
        );
    }

    #[test]
    fn grid_function_rejects_nan() {
        let g = GridSpec::new(1, 3).unwrap();
        let mut v = alloc::vec![0.0; 8];
        v[3] = f64::NAN;
        assert!(matches!(GridFunction::new(g, v), Err(Error::NonFinite { .. })));
    }
}
