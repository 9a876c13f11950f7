//! Fractional differences and moduli of smoothness.
//!
//! Differences act on coefficients through the closed-form multiplier
//! `exp(i k alpha h) (1 - exp(-i k h))^alpha` (principal branch), which is
//! the sum of the binomial series `sum_v (-1)^v C(alpha, v) exp(i k (alpha - v) h)`.
//!
//! Steps are angular: `h` is measured in the same variable as the grid
//! points `2 pi i / 2^K`. A step `t` in the normalized `[0, 1]` scale
//! corresponds to `2 pi t` here.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::fft::{Direction, TensorFft};
use crate::grid::{for_each_multi, GridSpec};
use crate::lorentz::{LorentzEvaluator, LorentzParams, SortScratch};
use crate::math;
use crate::spectral::{scale_axis, SpectralRep, NEGLIGIBLE};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Default per-axis resolution of the step search.
pub const DEFAULT_H_GRID: usize = 17;

/// Multiplier of `Delta_h^alpha` on the harmonic `exp(i k x)`.
///
/// With `phi = k h` reduced to `phi'` in `(-pi, pi]` the value is
/// `|2 sin(phi'/2)|^alpha exp(i alpha (phi - phi'/2 + sgn(phi') pi/2))`.
pub fn difference_multiplier(k: i64, alpha: f64, h: f64) -> Complex64 {
    let phi = k as f64 * h;
    phase_multiplier(phi, alpha)
}

#[inline]
fn phase_multiplier(phi: f64, alpha: f64) -> Complex64 {
    let w = math::wrap_angle(phi);
    if w == 0.0 {
        return ZERO;
    }
    let s = math::abs(2.0 * math::sin(0.5 * w));
    let mag = if alpha == 1.0 { s } else if alpha == 2.0 { s * s } else { math::powf(s, alpha) };
    let ph = alpha * (phi - 0.5 * w + math::signum(w) * 0.5 * PI);
    let (sn, cs) = math::sin_cos(ph);
    Complex64::new(mag * cs, mag * sn)
}

/// `Delta_h^alpha` along one axis.
pub fn fractional_difference(c: &SpectralRep, alpha: f64, h: f64, axis: usize) -> Result<SpectralRep> {
    let spec = c.spec();
    if axis >= spec.dim() {
        return Err(invalid("axis", "beyond the grid dimension"));
    }
    check_order(alpha)?;
    let factors: Vec<Complex64> = spec.axis_freqs().iter().map(|&k| difference_multiplier(k, alpha, h)).collect();
    let mut out = c.clone();
    scale_axis(out.coeffs_mut(), spec.side(), spec.dim(), axis, &factors);
    Ok(out)
}

/// Mixed difference: composition of single-axis differences over all axes.
pub fn mixed_difference(c: &SpectralRep, alpha: &[f64], h: &[f64]) -> Result<SpectralRep> {
    let spec = c.spec();
    spec.check_dim(alpha.len())?;
    spec.check_dim(h.len())?;
    let mut out = c.clone();
    for j in 0..spec.dim() {
        check_order(alpha[j])?;
        let factors: Vec<Complex64> =
            spec.axis_freqs().iter().map(|&k| difference_multiplier(k, alpha[j], h[j])).collect();
        scale_axis(out.coeffs_mut(), spec.side(), spec.dim(), j, &factors);
    }
    Ok(out)
}

/// Isotropic difference with step vector `h`: multiplier of `<n, h>`.
pub fn isotropic_difference(c: &SpectralRep, alpha: f64, h: &[f64]) -> Result<SpectralRep> {
    c.spec().check_dim(h.len())?;
    check_order(alpha)?;
    Ok(c.map_multiplier(|n| phase_multiplier(dot(n, h), alpha)))
}

fn dot(n: &[i64], h: &[f64]) -> f64 {
    n.iter().zip(h).map(|(&k, &x)| k as f64 * x).sum()
}

fn check_order(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(invalid("alpha", "difference order must be positive and finite"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusParams {
    pub alpha: Vec<f64>,
    /// Angular step bounds, `0 < t_j <= 2 pi`.
    pub t: Vec<f64>,
    /// Odd, at least 3.
    pub h_grid: usize,
}

impl ModulusParams {
    pub fn new(alpha: Vec<f64>, t: Vec<f64>, h_grid: usize) -> Result<Self> {
        if alpha.len() != t.len() {
            return Err(invalid("modulus params", "alpha and t differ in length"));
        }
        for &a in &alpha {
            check_order(a)?;
        }
        if t.iter().any(|&x| !(x.is_finite() && x > 0.0 && x <= 2.0 * PI)) {
            return Err(invalid("t", "steps must lie in (0, 2 pi]"));
        }
        check_h_grid(h_grid)?;
        Ok(ModulusParams { alpha, t, h_grid })
    }
}

fn check_h_grid(g: usize) -> Result<()> {
    if g >= 3 && g % 2 == 1 {
        Ok(())
    } else {
        Err(invalid("h grid", "must be odd and at least 3"))
    }
}

/// Modulus value with the outcome of one grid refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusEstimate {
    pub value: f64,
    /// Value on the refined grid with `2G - 1` points per axis.
    pub refined: f64,
    /// Set when refinement moved the value by more than 1%.
    pub unresolved: bool,
}

/// Batched evaluator of `||Delta_h^alpha f||_{p,tau}` for many steps `h`.
///
/// Two real differences are packed into one complex inverse transform, and
/// several Lorentz parameter sets share each transform.
pub struct DifferenceEngine {
    spec: GridSpec,
    alpha: Vec<f64>,
    support: Vec<(usize, Complex64)>,
    support_pos: Vec<u32>,
    support_freq: Vec<f64>,
    fft: TensorFft,
    evaluators: Vec<LorentzEvaluator>,
    buf: Vec<Complex64>,
    re: Vec<f64>,
    im: Vec<f64>,
    work: Vec<f64>,
    sorter: SortScratch,
    axis_a: Vec<Vec<Complex64>>,
    axis_b: Vec<Vec<Complex64>>,
    freqs: Vec<i64>,
}

enum Shape<'a> {
    Mixed(&'a [f64]),
    Isotropic(&'a [f64]),
}

impl DifferenceEngine {
    /// Engine for mixed differences of orders `alpha` (one per axis).
    pub fn new(c: &SpectralRep, alpha: &[f64], lps: &[LorentzParams]) -> Result<Self> {
        let spec = c.spec();
        spec.check_dim(alpha.len())?;
        for &a in alpha {
            check_order(a)?;
        }
        if lps.is_empty() {
            return Err(invalid("lorentz params", "need at least one parameter set"));
        }
        let tol = NEGLIGIBLE * c.max_abs();
        let mut support = Vec::new();
        let mut support_pos = Vec::new();
        let mut support_freq = Vec::new();
        let n = spec.side();
        for (off, &z) in c.coeffs().iter().enumerate() {
            if z.norm() > tol && tol > 0.0 {
                support.push((off, z));
                let mut rem = off;
                let mut pos = alloc::vec![0u32; spec.dim()];
                for j in (0..spec.dim()).rev() {
                    pos[j] = (rem % n) as u32;
                    rem /= n;
                }
                for &p in &pos {
                    support_pos.push(p);
                    support_freq.push(spec.freq(p as usize) as f64);
                }
            }
        }
        Ok(DifferenceEngine {
            spec,
            alpha: alpha.to_vec(),
            support,
            support_pos,
            support_freq,
            fft: TensorFft::new(spec.dim(), n),
            evaluators: lps.iter().map(|&lp| LorentzEvaluator::new(lp, spec.len())).collect(),
            buf: alloc::vec![ZERO; spec.len()],
            re: alloc::vec![0.0; spec.len()],
            im: alloc::vec![0.0; spec.len()],
            work: alloc::vec![0.0; spec.len()],
            sorter: SortScratch::default(),
            axis_a: alloc::vec![alloc::vec![ZERO; n]; spec.dim()],
            axis_b: alloc::vec![alloc::vec![ZERO; n]; spec.dim()],
            freqs: spec.axis_freqs(),
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn lorentz_count(&self) -> usize {
        self.evaluators.len()
    }

    /// Norms of mixed differences, `out[i][q]` for step `hs[i]` and Lorentz set `q`.
    pub fn mixed_norms(&mut self, hs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        self.run(hs, false)
    }

    /// Norms of isotropic differences of order `alpha[0]`.
    pub fn isotropic_norms(&mut self, hs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        self.run(hs, true)
    }

    fn run(&mut self, hs: &[Vec<f64>], iso: bool) -> Vec<Vec<f64>> {
        let q = self.evaluators.len();
        let mut out = alloc::vec![alloc::vec![0.0; q]; hs.len()];
        let mut i = 0;
        while i < hs.len() {
            let a = &hs[i];
            let b = hs.get(i + 1);
            let sa = if iso { Shape::Isotropic(a) } else { Shape::Mixed(a) };
            let sb = b.map(|h| if iso { Shape::Isotropic(h) } else { Shape::Mixed(h) });
            let (na, nb) = self.pair(sa, sb);
            out[i] = na;
            if let Some(nb) = nb {
                out[i + 1] = nb;
            }
            i += 2;
        }
        out
    }

    fn fill_axis(&mut self, h: &[f64], into_b: bool) {
        for j in 0..self.spec.dim() {
            let alpha = self.alpha[j];
            let dst = if into_b { &mut self.axis_b[j] } else { &mut self.axis_a[j] };
            for (d, &k) in dst.iter_mut().zip(&self.freqs) {
                *d = difference_multiplier(k, alpha, h[j]);
            }
        }
    }

    fn multiplier(&self, idx: usize, shape: &Shape<'_>, use_b: bool) -> Complex64 {
        let m = self.spec.dim();
        match shape {
            Shape::Mixed(_) => {
                let axes = if use_b { &self.axis_b } else { &self.axis_a };
                let mut w = Complex64::new(1.0, 0.0);
                for j in 0..m {
                    w *= axes[j][self.support_pos[idx * m + j] as usize];
                }
                w
            }
            Shape::Isotropic(h) => {
                let mut phi = 0.0;
                for j in 0..m {
                    phi += self.support_freq[idx * m + j] * h[j];
                }
                phase_multiplier(phi, self.alpha[0])
            }
        }
    }

    fn pair(&mut self, a: Shape<'_>, b: Option<Shape<'_>>) -> (Vec<f64>, Option<Vec<f64>>) {
        if let Shape::Mixed(h) = a {
            self.fill_axis(h, false);
        }
        if let Some(Shape::Mixed(h)) = b {
            self.fill_axis(h, true);
        }
        for z in self.buf.iter_mut() {
            *z = ZERO;
        }
        for idx in 0..self.support.len() {
            let (off, c) = self.support[idx];
            let ma = self.multiplier(idx, &a, false);
            let v = match &b {
                Some(sb) => {
                    let mb = self.multiplier(idx, sb, true);
                    c * ma + Complex64::i() * (c * mb)
                }
                None => c * ma,
            };
            self.buf[off] = v;
        }
        self.fft.process(&mut self.buf, Direction::Inverse);
        for ((r, i), z) in self.re.iter_mut().zip(self.im.iter_mut()).zip(&self.buf) {
            *r = z.re;
            *i = z.im;
        }
        self.sorter.sort_abs_descending(&mut self.re);
        let na = self.evaluators.iter().map(|ev| ev.norm_sorted(&self.re, &mut self.work)).collect();
        if b.is_none() {
            return (na, None);
        }
        self.sorter.sort_abs_descending(&mut self.im);
        let nb = self.evaluators.iter().map(|ev| ev.norm_sorted(&self.im, &mut self.work)).collect();
        (na, Some(nb))
    }
}

/// Grid `t k / H`, `k = -H..=H`, `H = (G - 1)/2`, without the origin.
fn axis_steps(t: f64, g: usize, shell_only: bool) -> Vec<f64> {
    let h = (g - 1) / 2;
    let mut out = Vec::new();
    for k in 1..=h {
        if shell_only && 2 * k <= h {
            continue;
        }
        let x = t * k as f64 / h as f64;
        out.push(-x);
        out.push(x);
    }
    out
}

fn tensor_points(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = axes.len();
    if axes.iter().any(|a| a.is_empty()) {
        return Vec::new();
    }
    let lo = alloc::vec![0u32; m];
    let hi: Vec<u32> = axes.iter().map(|a| a.len() as u32 - 1).collect();
    let mut pts = Vec::new();
    for_each_multi(&lo, &hi, |ix| {
        pts.push(ix.iter().enumerate().map(|(j, &i)| axes[j][i as usize]).collect());
    });
    pts
}

fn max_of(rows: &[Vec<f64>], q: usize) -> f64 {
    rows.iter().fold(0.0, |m, r| m.max(r[q]))
}

/// Mixed modulus `sup_{|h_j| <= t_j} ||Delta_h^alpha f||_{p,tau}`, searched on
/// the tensor grid of `G` equispaced steps per axis.
pub fn mixed_modulus(c: &SpectralRep, mp: &ModulusParams, lp: LorentzParams) -> Result<f64> {
    let mut engine = DifferenceEngine::new(c, &mp.alpha, &[lp])?;
    mixed_modulus_with(&mut engine, &mp.t, mp.h_grid).map(|v| v[0])
}

/// Mixed modulus for every Lorentz set of `engine`.
pub fn mixed_modulus_with(engine: &mut DifferenceEngine, t: &[f64], h_grid: usize) -> Result<Vec<f64>> {
    engine.spec().check_dim(t.len())?;
    check_h_grid(h_grid)?;
    let axes: Vec<Vec<f64>> = t.iter().map(|&x| axis_steps(x, h_grid, false)).collect();
    let rows = engine.mixed_norms(&tensor_points(&axes));
    Ok((0..engine.lorentz_count()).map(|q| max_of(&rows, q)).collect())
}

/// Mixed modulus together with a refinement check on `2G - 1` points per axis.
pub fn mixed_modulus_checked(c: &SpectralRep, mp: &ModulusParams, lp: LorentzParams) -> Result<ModulusEstimate> {
    let mut engine = DifferenceEngine::new(c, &mp.alpha, &[lp])?;
    let value = mixed_modulus_with(&mut engine, &mp.t, mp.h_grid)?[0];
    let refined = mixed_modulus_with(&mut engine, &mp.t, 2 * mp.h_grid - 1)?[0];
    let unresolved = (refined - value).abs() > 0.01 * refined.max(f64::MIN_POSITIVE);
    Ok(ModulusEstimate {
        value,
        refined,
        unresolved,
    })
}

/// Full (isotropic) modulus `sup_{|h| <= t} ||Delta_h^alpha f||_{p,tau}` over the
/// tensor grid restricted to the Euclidean ball plus points on its boundary.
pub fn full_modulus(c: &SpectralRep, alpha: f64, t: f64, lp: LorentzParams, h_grid: usize) -> Result<f64> {
    check_h_grid(h_grid)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(invalid("t", "step bound must be positive"));
    }
    let m = c.spec().dim();
    let mut engine = DifferenceEngine::new(c, &alloc::vec![alpha; m], &[lp])?;
    let pts = ball_points(m, t, h_grid);
    let rows = engine.isotropic_norms(&pts);
    Ok(max_of(&rows, 0))
}

fn ball_points(m: usize, t: f64, g: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = {
        let mut a = axis_steps(t, g, false);
        a.push(0.0);
        a
    };
    let axes = alloc::vec![axis; m];
    let mut pts: Vec<Vec<f64>> = tensor_points(&axes)
        .into_iter()
        .filter(|h| {
            let r2: f64 = h.iter().map(|x| x * x).sum();
            r2 > 0.0 && r2 <= t * t * (1.0 + 1e-12)
        })
        .collect();
    let h = (g - 1) / 2;
    match m {
        1 => {}
        2 => {
            let count = 8 * h;
            for i in 0..count {
                let (s, cs) = math::sin_cos(2.0 * PI * i as f64 / count as f64);
                pts.push(alloc::vec![t * cs, t * s]);
            }
        }
        _ => {
            // latitude/longitude net on the sphere in the first three axes
            let lat = 2 * h;
            let lon = 4 * h;
            for a in 0..=lat {
                let theta = PI * a as f64 / lat as f64;
                let (st, ct) = math::sin_cos(theta);
                for b in 0..lon {
                    let (sp, cp) = math::sin_cos(2.0 * PI * b as f64 / lon as f64);
                    let mut p = alloc::vec![0.0; m];
                    p[0] = t * st * cp;
                    p[1] = t * st * sp;
                    p[2] = t * ct;
                    pts.push(p);
                    if a == 0 || a == lat {
                        break;
                    }
                }
            }
        }
    }
    pts
}

/// Mixed moduli `omega_alpha(f, 2 pi 2^-nu)` for all `nu` in `[0, L]^m`.
///
/// Each entry is a maximum over a search set that contains the tensor grid
/// of `G` points per axis at that step and every search set of a finer
/// `nu`; the table is therefore exactly monotone. Only the outer shell
/// `|h_j| > t_j / 2` is evaluated for axes that have finer neighbours.
#[derive(Debug, Clone)]
pub struct DyadicModulusTable {
    dim: usize,
    max_level: u32,
    lorentz: Vec<LorentzParams>,
    values: Vec<Vec<f64>>,
}

impl DyadicModulusTable {
    pub fn compute(
        c: &SpectralRep,
        alpha: &[f64],
        lps: &[LorentzParams],
        max_level: u32,
        h_grid: usize,
    ) -> Result<Self> {
        check_h_grid(h_grid)?;
        let mut engine = DifferenceEngine::new(c, alpha, lps)?;
        let m = c.spec().dim();
        let side = max_level as usize + 1;
        let cells = side.pow(m as u32);
        let mut owners = Vec::new();
        let mut points = Vec::new();
        let lo = alloc::vec![0u32; m];
        let hi = alloc::vec![max_level; m];
        let mut flat = 0usize;
        for_each_multi(&lo, &hi, |nu| {
            let axes: Vec<Vec<f64>> = nu
                .iter()
                .map(|&v| axis_steps(2.0 * PI * math::exp2(-(v as f64)), h_grid, v < max_level))
                .collect();
            for p in tensor_points(&axes) {
                owners.push(flat);
                points.push(p);
            }
            flat += 1;
        });
        let rows = engine.mixed_norms(&points);
        let q = lps.len();
        let mut values = alloc::vec![alloc::vec![0.0f64; cells]; q];
        for (row, &cell) in rows.iter().zip(&owners) {
            for k in 0..q {
                values[k][cell] = values[k][cell].max(row[k]);
            }
        }
        // cumulative maximum over finer neighbours, finest cells first
        for cell in (0..cells).rev() {
            let mut stride = 1;
            for _ in 0..m {
                let coord = (cell / stride) % side;
                if coord + 1 < side {
                    for vals in values.iter_mut() {
                        vals[cell] = vals[cell].max(vals[cell + stride]);
                    }
                }
                stride *= side;
            }
        }
        Ok(DyadicModulusTable {
            dim: m,
            max_level,
            lorentz: lps.to_vec(),
            values,
        })
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lorentz(&self) -> &[LorentzParams] {
        &self.lorentz
    }

    /// Modulus at normalized step `2^-nu` for Lorentz set `q`.
    pub fn get(&self, nu: &[u32], q: usize) -> f64 {
        let side = self.max_level as usize + 1;
        let flat = nu.iter().fold(0usize, |acc, &v| acc * side + v as usize);
        self.values[q][flat]
    }
}
