//! Fourier coefficient tensors and the spectral operators built on them.

use alloc::vec::Vec;
use core::ops::MulAssign;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fft::{Direction, TensorFft};
use crate::grid::{DyadicIndex, GridFunction, GridSpec, IndexSubset};
use crate::math;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Relative size below which a coefficient counts as round-off.
pub const NEGLIGIBLE: f64 = 1e-13;

/// Fourier coefficients `a_n` of a grid function, normalized so that
/// `f(x) = sum_n a_n exp(i n.x)` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRep {
    spec: GridSpec,
    coeffs: Vec<Complex64>,
}

/// Multiplies every entry whose coordinate on `axis` is `a` by `factors[a]`.
pub(crate) fn scale_axis<T: Copy>(data: &mut [Complex64], side: usize, dim: usize, axis: usize, factors: &[T])
where
    Complex64: MulAssign<T>,
{
    let inner = side.pow((dim - 1 - axis) as u32);
    for chunk in data.chunks_exact_mut(side * inner) {
        for (a, row) in chunk.chunks_exact_mut(inner).enumerate() {
            let f = factors[a];
            for z in row {
                *z *= f;
            }
        }
    }
}

impl SpectralRep {
    pub fn zeros(spec: GridSpec) -> Self {
        SpectralRep {
            spec,
            coeffs: alloc::vec![ZERO; spec.len()],
        }
    }

    /// Wraps a raw coefficient buffer in storage order.
    pub fn from_coeffs(spec: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != spec.len() {
            return Err(Error::LengthMismatch {
                expected: spec.len(),
                found: coeffs.len(),
            });
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { what: "coefficients" });
        }
        Ok(SpectralRep { spec, coeffs })
    }

    /// Builds a real trigonometric polynomial: each term sets `a_n = c` and
    /// `a_{-n} = conj(c)`. A term at `n = 0` keeps only the real part.
    pub fn from_terms_hermitian(spec: GridSpec, terms: &[(Vec<i64>, Complex64)]) -> Result<Self> {
        let mut out = Self::zeros(spec);
        for (n, c) in terms {
            out.set_hermitian(n, *c)?;
        }
        Ok(out)
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, n: &[i64]) -> Result<Complex64> {
        Ok(self.coeffs[self.checked_offset(n)?])
    }

    pub fn set_coeff(&mut self, n: &[i64], c: Complex64) -> Result<()> {
        let off = self.checked_offset(n)?;
        self.coeffs[off] = c;
        Ok(())
    }

    /// Sets `a_n = c` and `a_{-n} = conj(c)`.
    pub fn set_hermitian(&mut self, n: &[i64], c: Complex64) -> Result<()> {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::NonFinite { what: "coefficients" });
        }
        let off = self.checked_offset(n)?;
        let neg: Vec<i64> = n.iter().map(|k| -k).collect();
        let moff = self.spec.offset(&neg)?;
        if off == moff {
            self.coeffs[off] = Complex64::new(c.re, 0.0);
        } else {
            self.coeffs[off] = c;
            self.coeffs[moff] = c.conj();
        }
        Ok(())
    }

    fn checked_offset(&self, n: &[i64]) -> Result<usize> {
        self.spec.check_dim(n.len())?;
        let half = self.spec.band();
        if n.iter().any(|&k| k < -half || k >= half) {
            return Err(invalid("frequency", "outside the grid's representable range"));
        }
        self.spec.offset(n)
    }

    /// Forward transform `a_n = N^-1 sum_x f(x) exp(-i n.x)`.
    pub fn analyze(f: &GridFunction) -> Self {
        let spec = f.spec();
        let mut coeffs: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        TensorFft::new(spec.dim(), spec.side()).process(&mut coeffs, Direction::Forward);
        let scale = 1.0 / spec.len() as f64;
        for z in &mut coeffs {
            *z *= scale;
        }
        SpectralRep { spec, coeffs }
    }

    /// Complex samples of `sum_n a_n exp(i n.x)`.
    pub fn synthesize_complex(&self) -> Vec<Complex64> {
        let mut out = self.coeffs.clone();
        TensorFft::new(self.spec.dim(), self.spec.side()).process(&mut out, Direction::Inverse);
        out
    }

    /// Real samples; fails unless `a_{-n} = conj(a_n)` up to round-off.
    pub fn synthesize(&self) -> Result<GridFunction> {
        self.check_hermitian()?;
        let vals = self.synthesize_complex().into_iter().map(|z| z.re).collect();
        Ok(GridFunction::from_raw(self.spec, vals))
    }

    /// Real parts of the synthesis, for tensors already known to be Hermitian.
    pub(crate) fn synthesize_unchecked(&self) -> GridFunction {
        let vals = self.synthesize_complex().into_iter().map(|z| z.re).collect();
        GridFunction::from_raw(self.spec, vals)
    }

    fn mirror_offset(&self, off: usize) -> usize {
        let n = self.spec.side();
        let mut rem = off;
        let mut out = 0;
        let mut mul = 1;
        for _ in 0..self.spec.dim() {
            let i = rem % n;
            rem /= n;
            out += ((n - i) % n) * mul;
            mul *= n;
        }
        out
    }

    /// Checks Hermitian symmetry. Defects up to `1e-10` times the largest
    /// coefficient, or `1e-13` absolute, count as round-off.
    pub fn check_hermitian(&self) -> Result<()> {
        let tol = (1e-10 * self.max_abs()).max(1e-13);
        for off in 0..self.coeffs.len() {
            let m = self.mirror_offset(off);
            if m < off {
                continue;
            }
            let defect = (self.coeffs[m] - self.coeffs[off].conj()).norm();
            if defect > tol {
                return Err(Error::SymmetryViolation {
                    index: self.spec.freqs_at(off),
                    defect,
                });
            }
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `sum |a_n|^2`, the mean square of the function.
    pub fn energy(&self) -> f64 {
        let sq: Vec<f64> = self.coeffs.iter().map(|z| z.norm_sqr()).collect();
        math::pairwise_sum(&sq)
    }

    /// Largest `|n_j|` over nonzero coefficients, per axis.
    pub fn support_radius(&self) -> Vec<i64> {
        let mut r = alloc::vec![0i64; self.spec.dim()];
        let tol = NEGLIGIBLE * self.max_abs();
        for (off, z) in self.coeffs.iter().enumerate() {
            if z.norm() > tol && tol > 0.0 {
                for (rj, k) in r.iter_mut().zip(self.spec.freqs_at(off)) {
                    *rj = (*rj).max(k.abs());
                }
            }
        }
        r
    }

    /// Keeps entries with `keep(axis, n_axis)` true on every axis.
    pub fn retain_product(&self, keep: impl Fn(usize, i64) -> bool) -> Self {
        let mut out = self.clone();
        out.retain_product_in_place(keep);
        out
    }

    pub(crate) fn retain_product_in_place(&mut self, keep: impl Fn(usize, i64) -> bool) {
        let spec = self.spec;
        let freqs = spec.axis_freqs();
        for j in 0..spec.dim() {
            let mask: Vec<f64> = freqs.iter().map(|&k| if keep(j, k) { 1.0 } else { 0.0 }).collect();
            if mask.iter().all(|&v| v == 1.0) {
                continue;
            }
            scale_axis(&mut self.coeffs, spec.side(), spec.dim(), j, &mask);
        }
    }

    /// Drops every `n` with some `n_j = 0` or some `|n_j|` at the Nyquist
    /// frequency. The result has mean zero in each variable and its dyadic
    /// blocks sum back to it.
    pub fn project_zero_mean(&self) -> Self {
        let half = self.spec.band();
        self.retain_product(|_, k| k != 0 && k.abs() < half)
    }

    /// `delta_s`: entries with `2^(s_j-1) <= |n_j| < 2^(s_j)` for every axis.
    pub fn dyadic_block(&self, s: &DyadicIndex) -> Result<Self> {
        self.spec.check_dim(s.0.len())?;
        let avail = self.spec.max_block();
        if let Some(&bad) = s.0.iter().find(|&&sj| sj > avail) {
            return Err(Error::ResolutionExhausted {
                requested: bad,
                available: avail,
            });
        }
        Ok(self.retain_product(|j, k| {
            let (lo, hi) = DyadicIndex::axis_range(s.0[j]);
            let a = k.abs();
            lo <= a && a < hi
        }))
    }

    /// Rectangular partial sum restricting `|n_j| <= l_j` for `j` in `e`.
    pub fn partial_sum(&self, l: &[u64], e: IndexSubset) -> Result<Self> {
        self.spec.check_dim(l.len())?;
        Ok(self.retain_product(|j, k| !e.contains(j) || k.unsigned_abs() <= l[j]))
    }

    /// `f - U_l f`: entries with `|n_j| > l_j` on every axis.
    pub fn angle_residual(&self, l: &[u64]) -> Result<Self> {
        self.spec.check_dim(l.len())?;
        Ok(self.retain_product(|j, k| k.unsigned_abs() > l[j]))
    }

    /// Angle sum `U_l f`: entries with `|n_j| <= l_j` for at least one axis.
    pub fn angle_sum(&self, l: &[u64]) -> Result<Self> {
        let r = self.angle_residual(l)?;
        let coeffs = self.coeffs.iter().zip(&r.coeffs).map(|(a, b)| a - b).collect();
        Ok(SpectralRep { spec: self.spec, coeffs })
    }

    /// Entries with `|n_j| <= l_j` for `j` in `e` and `|n_j| > l_j` otherwise.
    pub fn mixed_piece(&self, l: &[u64], e: IndexSubset) -> Result<Self> {
        self.spec.check_dim(l.len())?;
        Ok(self.retain_product(|j, k| {
            let a = k.unsigned_abs();
            if e.contains(j) {
                a <= l[j]
            } else {
                a > l[j]
            }
        }))
    }

    /// Weyl fractional derivative `D^(alpha^e)`: multiplies by
    /// `prod_{j in e} (i n_j)^alpha_j` on the principal branch. Entries below
    /// [`NEGLIGIBLE`] times the largest coefficient count as zero.
    pub fn weyl_derivative(&self, alpha: &[f64], e: IndexSubset) -> Result<Self> {
        let spec = self.spec;
        spec.check_dim(alpha.len())?;
        if e.span() > spec.dim() {
            return Err(invalid("index subset", "refers to an axis beyond the grid dimension"));
        }
        for (j, &a) in alpha.iter().enumerate() {
            if e.contains(j) && !(a.is_finite() && a > 0.0) {
                return Err(invalid("alpha", "fractional orders must be positive and finite"));
            }
        }
        let tol = NEGLIGIBLE * self.max_abs();
        for (off, z) in self.coeffs.iter().enumerate() {
            if z.norm() <= tol {
                continue;
            }
            let n = spec.freqs_at(off);
            if let Some(j) = e.axes().find(|&j| n[j] == 0) {
                return Err(Error::UndefinedFractionalDerivative { axis: j });
            }
        }
        let mut out = self.clone();
        for z in &mut out.coeffs {
            if z.norm() <= tol {
                *z = ZERO;
            }
        }
        let freqs = spec.axis_freqs();
        for j in e.axes() {
            let factors: Vec<Complex64> = freqs.iter().map(|&k| weyl_multiplier(k, alpha[j])).collect();
            scale_axis(&mut out.coeffs, spec.side(), spec.dim(), j, &factors);
        }
        Ok(out)
    }

    pub fn scaled(&self, s: f64) -> Self {
        SpectralRep {
            spec: self.spec,
            coeffs: self.coeffs.iter().map(|z| z * s).collect(),
        }
    }

    /// Entrywise sum; both operands must share a grid.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(invalid("grid", "operands live on different grids"));
        }
        Ok(SpectralRep {
            spec: self.spec,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    /// Frequency-domain multiplication by `g(n)` for each stored `n`.
    pub fn map_multiplier(&self, mut g: impl FnMut(&[i64]) -> Complex64) -> Self {
        let mut out = self.clone();
        for (off, z) in out.coeffs.iter_mut().enumerate() {
            if *z != ZERO {
                *z *= g(&self.spec.freqs_at(off));
            }
        }
        out
    }
}

/// `(i k)^alpha = |k|^alpha exp(i alpha pi/2 sgn k)`; zero at `k = 0`.
pub fn weyl_multiplier(k: i64, alpha: f64) -> Complex64 {
    if k == 0 {
        return ZERO;
    }
    let mag = math::powf(k.unsigned_abs() as f64, alpha);
    let ph = alpha * core::f64::consts::FRAC_PI_2 * math::signum(k as f64);
    let (s, c) = math::sin_cos(ph);
    Complex64::new(mag * c, mag * s)
}
