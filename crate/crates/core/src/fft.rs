//! Iterative radix-2 FFT for power-of-two sizes, with row-column passes for
//! tensor grids. Transforms are unnormalized.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `exp(-2 pi i jk/n)`.
    Forward,
    /// Kernel `exp(+2 pi i jk/n)`.
    Inverse,
}

/// Precomputed twiddles and bit-reversal table for one size.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl FftPlan {
    /// Plan for length `n`, which must be a power of two.
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT length must be a power of two");
        let bits = n.trailing_zeros();
        let twiddles = (0..n / 2)
            .map(|k| {
                let (s, c) = math::sin_cos(-2.0 * core::f64::consts::PI * k as f64 / n as f64);
                Complex64::new(c, s)
            })
            .collect();
        let bitrev = (0..n as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        FftPlan { n, twiddles, bitrev }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In-place transform of a contiguous buffer of length `n`.
    pub fn process(&self, data: &mut [Complex64], dir: Direction) {
        let n = self.n;
        debug_assert_eq!(data.len(), n);
        for i in 0..n {
            let j = self.bitrev[i] as usize;
            if i < j {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                let (lo, hi) = data[start..start + 2 * half].split_at_mut(half);
                for (k, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let w = self.twiddles[k * stride];
                    let w = match dir {
                        Direction::Forward => w,
                        Direction::Inverse => w.conj(),
                    };
                    let t = *y * w;
                    *y = *x - t;
                    *x += t;
                }
            }
            half *= 2;
        }
    }
}

/// Transform of an `m`-dimensional `n^m` tensor, one axis at a time.
///
/// Axes other than the last are transformed with butterflies acting on whole
/// contiguous sub-rows, and sub-row ranges that are identically zero are
/// skipped, which makes sparse spectra cheap to synthesize.
#[derive(Debug, Clone)]
pub struct TensorFft {
    dim: usize,
    plan: FftPlan,
    stage_twiddles: Vec<Vec<Complex64>>,
    active: Vec<bool>,
    ranges: Vec<(usize, usize)>,
}

impl TensorFft {
    pub fn new(dim: usize, side: usize) -> Self {
        let plan = FftPlan::new(side);
        let mut stage_twiddles = Vec::new();
        let mut half = 1;
        while half < side {
            let stride = side / (2 * half);
            stage_twiddles.push((0..half).map(|k| plan.twiddles[k * stride]).collect());
            half *= 2;
        }
        TensorFft {
            dim,
            plan,
            stage_twiddles,
            active: Vec::new(),
            ranges: Vec::new(),
        }
    }

    pub fn process(&mut self, data: &mut [Complex64], dir: Direction) {
        let n = self.plan.len();
        debug_assert_eq!(data.len(), n.pow(self.dim as u32));
        for axis in 0..self.dim {
            let inner = n.pow((self.dim - 1 - axis) as u32);
            if inner == 1 {
                for row in data.chunks_exact_mut(n) {
                    if row.iter().any(|z| z.re != 0.0 || z.im != 0.0) {
                        self.plan.process(row, dir);
                    }
                }
            } else {
                for chunk in data.chunks_exact_mut(n * inner) {
                    self.strided(chunk, inner, dir);
                }
            }
        }
    }

    /// Radix-2 transform along the slow axis of an `n x inner` block.
    fn strided(&mut self, chunk: &mut [Complex64], inner: usize, dir: Direction) {
        let n = self.plan.len();
        self.active.clear();
        self.active.resize(inner, false);
        for row in chunk.chunks_exact(inner) {
            for (a, z) in self.active.iter_mut().zip(row) {
                *a |= z.re != 0.0 || z.im != 0.0;
            }
        }
        self.ranges.clear();
        let mut i = 0;
        while i < inner {
            if self.active[i] {
                let s = i;
                while i < inner && self.active[i] {
                    i += 1;
                }
                self.ranges.push((s, i));
            } else {
                i += 1;
            }
        }
        if self.ranges.is_empty() {
            return;
        }
        for a in 0..n {
            let b = self.plan.bitrev[a] as usize;
            if a < b {
                for &(lo, hi) in &self.ranges {
                    for i in lo..hi {
                        chunk.swap(a * inner + i, b * inner + i);
                    }
                }
            }
        }
        let mut half = 1;
        let mut stage = 0;
        while half < n {
            let tw = &self.stage_twiddles[stage];
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let w = match dir {
                        Direction::Forward => tw[k],
                        Direction::Inverse => tw[k].conj(),
                    };
                    let (top, bottom) = chunk.split_at_mut((start + k + half) * inner);
                    let ra = &mut top[(start + k) * inner..(start + k + 1) * inner];
                    let rb = &mut bottom[..inner];
                    for &(lo, hi) in &self.ranges {
                        for (x, y) in ra[lo..hi].iter_mut().zip(&mut rb[lo..hi]) {
                            let t = *y * w;
                            *y = *x - t;
                            *x += t;
                        }
                    }
                }
            }
            half *= 2;
            stage += 1;
        }
    }
}
