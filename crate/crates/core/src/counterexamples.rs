//! Lacunary test series used as sharpness witnesses, their dyadic block-norm
//! profiles, and truncation scans of the norm series they are built to
//! make diverge.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::embedding::{ExtRational, RationalParams, Witness};
use crate::error::{invalid, Error, Result};
use crate::grid::GridSpec;
use crate::lorentz::{lorentz_norm, LorentzParams};
use crate::math;
use crate::space_norms::{besov_norm_blocks, j_norm_from_levels, SpaceParams, SquareFunctionLevels, Theta, Variant};
use crate::spectral::SpectralRep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    F1,
    F2,
    F3,
    F4,
    G1,
    G2,
    FXi0,
    GXi0,
    BlockProfile,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::F1,
        Family::F2,
        Family::F3,
        Family::F4,
        Family::G1,
        Family::G2,
        Family::FXi0,
        Family::GXi0,
        Family::BlockProfile,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::F1 => "f1",
            Family::F2 => "f2",
            Family::F3 => "f3",
            Family::F4 => "f4",
            Family::G1 => "g1",
            Family::G2 => "g2",
            Family::FXi0 => "f_xi0",
            Family::GXi0 => "g_xi0",
            Family::BlockProfile => "lemma61",
        }
    }

    /// Families that are lacunary on every axis rather than only on `j0`.
    pub fn is_shift_family(&self) -> bool {
        matches!(self, Family::FXi0 | Family::GXi0)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| invalid("family", alloc::format!("unknown family id {s:?}")))
    }
}

/// Parameters of one lacunary series. On axis `axis` the packet
/// `k in [2^(s-1), 2^s)` carries `2^(-s(alpha+1-1/p)) (s+1)^(-e)` with
/// `e = delta`, or `e = xi - b + delta` for the shift families, whose other
/// axes use the same profile with `t` in place of `delta`. The remaining
/// families carry `cos x_j` on the other axes.
#[derive(Debug, Clone, PartialEq)]
pub struct LacunaryFamilySpec {
    pub family: Family,
    pub axis: usize,
    pub delta: f64,
    pub t_aux: f64,
    pub alpha: Vec<f64>,
    pub b: Vec<f64>,
    pub xi: Vec<f64>,
    pub p: f64,
    /// Outer truncation; `None` means `K - 2`.
    pub s_max: Option<u32>,
}

impl LacunaryFamilySpec {
    /// Plain family with `cos x_j` padding: no log shift, `t` unused.
    pub fn simple(family: Family, axis: usize, delta: f64, alpha: Vec<f64>, p: f64) -> Self {
        let m = alpha.len();
        LacunaryFamilySpec {
            family,
            axis,
            delta,
            t_aux: 0.0,
            alpha,
            b: alloc::vec![0.0; m],
            xi: alloc::vec![0.0; m],
            p,
            s_max: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// Instantiates a witness with the smoothness, log exponent and `p` of
    /// the query.
    pub fn from_witness(w: &Witness, params: &RationalParams, s_max: Option<u32>) -> Result<Self> {
        let delta = w.delta.to_f64().unwrap_or(f64::NAN);
        let t = w.aux_t.as_ref().and_then(|t| t.to_f64()).unwrap_or(0.0);
        Self::from_params(w.family, w.axis, delta, t, w.xi.as_deref(), params, s_max)
    }

    /// Family `family` for the parameters of a query; `xi` overrides the
    /// query's shift vector.
    pub fn from_params(
        family: Family,
        axis: usize,
        delta: f64,
        t_aux: f64,
        xi: Option<&[BigRational]>,
        params: &RationalParams,
        s_max: Option<u32>,
    ) -> Result<Self> {
        let alpha = params.alpha.as_deref().map(to_f64_vec).ok_or_else(|| invalid("alpha", "missing"))?;
        let m = alpha.len();
        let b = params.b.as_deref().map(to_f64_vec).unwrap_or_else(|| alloc::vec![0.0; m]);
        let xi = xi.or(params.xi.as_deref()).map(to_f64_vec).unwrap_or_else(|| alloc::vec![0.0; m]);
        let p = params.p.as_ref().map(|p| p.to_f64()).ok_or_else(|| invalid("p", "missing"))?;
        let spec = LacunaryFamilySpec {
            family,
            axis,
            delta,
            t_aux,
            alpha,
            b,
            xi,
            p,
            s_max,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let m = self.dim();
        if m == 0 || self.axis >= m {
            return Err(invalid("axis", "must index an axis of alpha"));
        }
        if self.b.len() != m || self.xi.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: if self.b.len() != m { self.b.len() } else { self.xi.len() },
            });
        }
        let all = [self.delta, self.t_aux, self.p]
            .into_iter()
            .chain(self.alpha.iter().copied())
            .chain(self.b.iter().copied())
            .chain(self.xi.iter().copied());
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "family parameters" });
        }
        if self.p <= 1.0 {
            return Err(invalid("p", "must exceed 1"));
        }
        Ok(())
    }

    fn resolved_s_max(&self, grid: GridSpec) -> Result<u32> {
        let available = grid.level() - 2;
        let s = self.s_max.unwrap_or(available);
        if s == 0 || s > available {
            return Err(Error::ResolutionExhausted { requested: s, available });
        }
        Ok(s)
    }

    /// Cosine amplitudes `a_j[k]`, `k = 0..2^S`, of the factor on axis `j`.
    fn axis_profile(&self, j: usize, s_max: u32) -> Vec<f64> {
        let mut a = alloc::vec![0.0; 1usize << s_max];
        let lacunary = j == self.axis || self.family.is_shift_family();
        if !lacunary {
            a[1] = 1.0;
            return a;
        }
        let tail = if j == self.axis { self.delta } else { self.t_aux };
        let e = if self.family.is_shift_family() { self.xi[j] - self.b[j] + tail } else { tail };
        let rate = self.alpha[j] + 1.0 - 1.0 / self.p;
        for s in 1..=s_max {
            let amp = math::exp2(-(s as f64) * rate) * math::powf(s as f64 + 1.0, -e);
            for v in &mut a[1usize << (s - 1)..1usize << s] {
                *v = amp;
            }
        }
        a
    }
}

fn to_f64_vec(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Places the coefficients of the series on `grid`: each cosine factor
/// contributes half its amplitude at `+k` and `-k`.
pub fn build(spec: &LacunaryFamilySpec, grid: GridSpec) -> Result<SpectralRep> {
    spec.validate()?;
    grid.check_dim(spec.dim())?;
    let s_max = spec.resolved_s_max(grid)?;
    let m = spec.dim();
    let profiles: Vec<Vec<(i64, f64)>> = (0..m)
        .map(|j| {
            let a = spec.axis_profile(j, s_max);
            let mut out = Vec::new();
            for (k, &v) in a.iter().enumerate() {
                if v != 0.0 {
                    out.push((k as i64, 0.5 * v));
                    out.push((-(k as i64), 0.5 * v));
                }
            }
            out
        })
        .collect();
    let mut rep = SpectralRep::zeros(grid);
    let lens: Vec<u32> = profiles.iter().map(|p| p.len() as u32 - 1).collect();
    let lo = alloc::vec![0u32; m];
    let mut freqs = alloc::vec![0i64; m];
    let coeffs = rep.coeffs_mut();
    let mut failure = None;
    crate::grid::for_each_multi(&lo, &lens, |idx| {
        let mut v = 1.0;
        for j in 0..m {
            let (k, a) = profiles[j][idx[j] as usize];
            freqs[j] = k;
            v *= a;
        }
        match grid.offset(&freqs) {
            Ok(o) => coeffs[o] = Complex64::new(v, 0.0),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(rep),
    }
}

/// Block index of a frequency: `0` for `k = 0`, else `s` with `2^(s-1) <= |k| < 2^s`.
fn block_of(k: i64) -> u32 {
    if k == 0 {
        0
    } else {
        64 - k.unsigned_abs().leading_zeros()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockProfile {
    /// `(l, ||sum_{s_axis in [2^l, 2^(l+1))} prod 2^(s_j alpha_j) delta_s f||_{p,tau})`.
    pub levels: Vec<(u32, f64)>,
    /// Least-squares slope of `log2(value)` against `l`.
    pub slope: f64,
}

/// Norms of the `alpha`-weighted block sums grouped by the outer level of
/// `axis`; all blocks are summed on the other axes. Input is assumed
/// zero-mean.
pub fn block_norm_profile(c: &SpectralRep, alpha: &[f64], lp: LorentzParams, axis: usize) -> Result<BlockProfile> {
    let spec = c.spec();
    spec.check_dim(alpha.len())?;
    if axis >= spec.dim() {
        return Err(invalid("axis", "out of range"));
    }
    c.check_hermitian()?;
    let smax = spec.max_block();
    let nlevels = (32 - smax.leading_zeros()) as usize;
    if nlevels < 3 {
        return Err(Error::InsufficientResolution { levels: nlevels, needed: 3 });
    }
    let mut levels = Vec::with_capacity(nlevels);
    for l in 0..nlevels as u32 {
        let (lo, hi) = (1u32 << l, (1u32 << (l + 1)) - 1);
        let piece = c.map_multiplier(|k| {
            let sa = block_of(k[axis]);
            if sa < lo || sa > hi {
                return Complex64::new(0.0, 0.0);
            }
            let w: f64 = k.iter().zip(alpha).map(|(&kj, &a)| math::exp2(block_of(kj) as f64 * a)).product();
            Complex64::new(w, 0.0)
        });
        let v = if piece.max_abs() == 0.0 { 0.0 } else { lorentz_norm(&piece.synthesize_unchecked(), lp) };
        levels.push((l, v));
    }
    let fit: Vec<(f64, f64)> = levels.iter().filter(|(_, v)| *v > 0.0).map(|&(l, v)| (l as f64, math::log2(v))).collect();
    if fit.len() < 3 {
        return Err(Error::InsufficientResolution { levels: fit.len(), needed: 3 });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = fit.into_iter().unzip();
    Ok(BlockProfile {
        levels,
        slope: math::ls_slope(&xs, &ys),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// Outer levels of the square-function form of the Lipschitz norm.
    JLevels,
    /// Dyadic blocks of the Besov norm.
    BesovBlocks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Growth,
    Plateau,
    Inconclusive,
}

impl Trend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Trend::Growth => "growth",
            Trend::Plateau => "plateau",
            Trend::Inconclusive => "inconclusive",
        }
    }
}

pub const GROWTH_RATIO: f64 = 1.1;
pub const PLATEAU_RATIO: f64 = 1.02;

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub kind: SeriesKind,
    /// Truncation index of each partial sum: the outer level on `axis` for
    /// J levels, the block index for Besov blocks.
    pub truncations: Vec<u32>,
    /// Terms grouped by the truncation index on `axis`.
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Slope of `log2(term)` against the level (J) or against `log2(s+1)` (Besov).
    pub growth_exponent: f64,
    pub monotone_increasing: bool,
    pub last_ratio: f64,
    pub trend: Trend,
    pub s_max: u32,
}

/// Builds the series and scans the partial sums of the norm series of
/// `space` truncated in the outer index of the distinguished axis. Only J
/// levels whose dyadic box lies below the truncation are used; Besov
/// partial sums start at block 3.
pub fn divergence_scan(spec: &LacunaryFamilySpec, grid: GridSpec, space: &SpaceParams, lp: LorentzParams) -> Result<DivergenceReport> {
    let c = build(spec, grid)?;
    let s_max = spec.resolved_s_max(grid)?;
    let axis = spec.axis;
    let sup = matches!(space.theta, Theta::Infinite);
    let (kind, index_terms, first): (SeriesKind, Vec<(u32, f64)>, u32) = match space.variant {
        Variant::Lipschitz => {
            let sq = SquareFunctionLevels::compute(&c, &space.alpha, &[lp])?;
            let rep = j_norm_from_levels(&sq, 0, space)?;
            let complete = (0..32u32).take_while(|&l| (1u32 << (l + 1)) - 1 <= s_max).count() as u32;
            let terms = rep.terms.iter().filter(|t| t.index[axis] < complete).map(|t| (t.index[axis], t.value)).collect();
            (SeriesKind::JLevels, group(terms, 0, complete.saturating_sub(1), sup), 0)
        }
        Variant::Besov => {
            let rep = besov_norm_blocks(&c, space, lp)?;
            let terms = rep.terms.iter().filter(|t| t.index[axis] <= s_max).map(|t| (t.index[axis], t.value)).collect();
            (SeriesKind::BesovBlocks, group(terms, 1, s_max, sup), 3)
        }
    };
    let mut running = 0.0f64;
    let mut truncations = Vec::new();
    let mut terms = Vec::new();
    let mut partial_sums = Vec::new();
    for &(i, v) in &index_terms {
        running = if sup { running.max(v) } else { running + v };
        if i >= first {
            truncations.push(i);
            terms.push(v);
            partial_sums.push(running);
        }
    }
    if partial_sums.len() < 2 {
        return Err(Error::InsufficientResolution {
            levels: partial_sums.len(),
            needed: 2,
        });
    }
    let fit: Vec<(f64, f64)> = index_terms
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|&(i, v)| {
            let x = match kind {
                SeriesKind::JLevels => i as f64,
                SeriesKind::BesovBlocks => math::log2(i as f64 + 1.0),
            };
            (x, math::log2(v))
        })
        .collect();
    let growth_exponent = if fit.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = fit.into_iter().unzip();
        math::ls_slope(&xs, &ys)
    } else {
        f64::NAN
    };
    let n = partial_sums.len();
    let last_ratio = match (partial_sums[n - 2], partial_sums[n - 1]) {
        (a, b) if a == b => 1.0,
        (a, b) => b / a,
    };
    let trend = classify(last_ratio);
    Ok(DivergenceReport {
        kind,
        truncations,
        monotone_increasing: partial_sums.windows(2).all(|w| w[1] > w[0]),
        terms,
        partial_sums,
        growth_exponent,
        last_ratio,
        trend,
        s_max,
    })
}

/// Sums (or maximizes) the values sharing an index, for every index in `lo..=hi`.
fn group(terms: Vec<(u32, f64)>, lo: u32, hi: u32, sup: bool) -> Vec<(u32, f64)> {
    let mut out: Vec<(u32, f64)> = (lo..=hi).map(|i| (i, 0.0)).collect();
    for (i, v) in terms {
        if i >= lo && i <= hi {
            let acc = &mut out[(i - lo) as usize].1;
            *acc = if sup { acc.max(v) } else { *acc + v };
        }
    }
    out
}

/// Growth above [`GROWTH_RATIO`], plateau below [`PLATEAU_RATIO`].
pub fn classify(last_ratio: f64) -> Trend {
    if !last_ratio.is_finite() || last_ratio > GROWTH_RATIO {
        Trend::Growth
    } else if last_ratio < PLATEAU_RATIO {
        Trend::Plateau
    } else {
        Trend::Inconclusive
    }
}

/// Which of the two spaces a witness is built to leave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lipschitz,
    Besov,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Lipschitz => "lip",
            Side::Besov => "besov",
        }
    }
}

/// The Lipschitz space and the Besov space a witness separates, in floating
/// point, with the side on which its norm series diverges.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpaces {
    pub lip: SpaceParams,
    pub lip_lp: LorentzParams,
    pub besov: SpaceParams,
    pub besov_lp: LorentzParams,
    pub divergent: Side,
}

fn theta_of(x: &ExtRational) -> Result<Theta> {
    match x {
        ExtRational::Infinity => Ok(Theta::Infinite),
        ExtRational::Finite(q) => Theta::new(q.to_f64().unwrap_or(f64::NAN)),
    }
}

fn need_ext<'a>(v: &'a Option<ExtRational>, name: &'static str) -> Result<&'a ExtRational> {
    v.as_ref().ok_or_else(|| invalid(name, "missing"))
}

fn need_f64(v: &Option<ExtRational>, name: &'static str) -> Result<f64> {
    match need_ext(v, name)? {
        ExtRational::Finite(q) => Ok(q.to_f64().unwrap_or(f64::NAN)),
        ExtRational::Infinity => Err(invalid(name, "must be finite")),
    }
}

/// Spaces separated by `family` for the parameters of a query; `xi`
/// overrides the query's shift vector (as carried by shift witnesses).
/// `max_level` is only recorded in the returned parameters.
pub fn witness_spaces(family: Family, xi: Option<&[BigRational]>, params: &RationalParams, max_level: u32) -> Result<WitnessSpaces> {
    let vec_f64 = |v: &Option<Vec<BigRational>>, name: &'static str| -> Result<Vec<f64>> {
        v.as_deref().map(to_f64_vec).ok_or_else(|| invalid(name, "missing"))
    };
    let alpha = vec_f64(&params.alpha, "alpha")?;
    let b = vec_f64(&params.b, "b")?;
    let theta_x = need_ext(&params.theta, "theta")?;
    let theta = theta_of(theta_x)?;
    let p = need_f64(&params.p, "p")?;
    let tau = need_f64(&params.tau, "tau")?;
    let lip_lp = LorentzParams::new(p, tau)?;
    let lip = SpaceParams::lipschitz(alpha.clone(), b.clone(), theta, max_level)?;
    let inv_theta = theta.recip();
    let xi_w = || -> Result<Vec<f64>> {
        match xi {
            Some(v) => Ok(to_f64_vec(v)),
            None => vec_f64(&params.xi, "xi"),
        }
    };
    let shifted = |po: f64| -> Vec<f64> { alpha.iter().map(|a| a + 1.0 / po - 1.0 / p).collect() };
    let log_theta: Vec<f64> = b.iter().map(|bj| -bj + inv_theta).collect();
    let log_xi = |xi: &[f64]| -> Vec<f64> { b.iter().zip(xi).map(|(bj, x)| -bj + x).collect() };
    let (r, log, third, blp, divergent) = match family {
        Family::FXi0 | Family::GXi0 => {
            let side = if family == Family::FXi0 { Side::Lipschitz } else { Side::Besov };
            (alpha.clone(), log_xi(&xi_w()?), theta, lip_lp, side)
        }
        Family::G1 | Family::G2 => {
            let q = theta_of(need_ext(&params.q, "q")?)?;
            let side = if family == Family::G1 { Side::Lipschitz } else { Side::Besov };
            (alpha.clone(), log_theta, q, lip_lp, side)
        }
        Family::F1 | Family::F3 => {
            let p0 = need_f64(&params.p0, "p0")?;
            let lp0 = LorentzParams::new(p0, need_f64(&params.tau0, "tau0")?)?;
            if family == Family::F1 {
                (shifted(p0), log_xi(&xi_w()?), theta, lp0, Side::Lipschitz)
            } else {
                (shifted(p0), log_theta, theta_of(need_ext(&params.r, "r")?)?, lp0, Side::Lipschitz)
            }
        }
        Family::F2 | Family::F4 => {
            let p1 = need_f64(&params.p1, "p1")?;
            let lp1 = LorentzParams::new(p1, need_f64(&params.tau1, "tau1")?)?;
            if family == Family::F2 {
                (shifted(p1), log_xi(&xi_w()?), theta, lp1, Side::Besov)
            } else {
                (shifted(p1), log_theta, theta_of(need_ext(&params.r, "r")?)?, lp1, Side::Besov)
            }
        }
        Family::BlockProfile => return Err(invalid("family", "lemma61 is not a witness family")),
    };
    let besov = SpaceParams::besov(r.clone(), log, third, max_level, r)?;
    Ok(WitnessSpaces {
        lip,
        lip_lp,
        besov,
        besov_lp: blp,
        divergent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{decide_besov_to_lip, ExtRational};
    use core::f64::consts::PI;

    fn lp(p: f64, tau: f64) -> LorentzParams {
        LorentzParams::new(p, tau).unwrap()
    }

    fn nonzero(c: &SpectralRep) -> usize {
        c.coeffs().iter().filter(|z| z.norm() > 0.0).count()
    }

    #[test]
    fn single_packet_is_a_scaled_cosine() {
        let mut spec = LacunaryFamilySpec::simple(Family::F1, 0, 0.7, alloc::vec![1.5], 2.0);
        spec.s_max = Some(1);
        let c = build(&spec, GridSpec::new(1, 6).unwrap()).unwrap();
        let amp = 2f64.powf(-(1.5 + 0.5)) * 2f64.powf(-0.7);
        assert_eq!(nonzero(&c), 2);
        assert!((c.coeff(&[1]).unwrap().re - amp / 2.0).abs() < 1e-16);
        assert_eq!(c.coeff(&[1]).unwrap(), c.coeff(&[-1]).unwrap());
        let f = c.synthesize().unwrap();
        for (i, v) in f.values().iter().enumerate() {
            let x = 2.0 * PI * i as f64 / 64.0;
            assert!((v - amp * x.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficient_count_matches_packets() {
        for (m, s) in [(1usize, 4u32), (2, 5), (3, 3)] {
            let mut spec = LacunaryFamilySpec::simple(Family::G2, m - 1, 1.0, alloc::vec![1.0; m], 3.0);
            spec.s_max = Some(s);
            let c = build(&spec, GridSpec::new(m, s + 2).unwrap()).unwrap();
            // 2^S - 1 positive indices on the axis, mirrored, times the cos x_j padding
            assert_eq!(nonzero(&c), 2 * ((1 << s) - 1) * (1 << (m - 1)));
        }
        let mut spec = LacunaryFamilySpec::simple(Family::FXi0, 0, 1.0, alloc::vec![1.0, 1.0], 2.0);
        spec.s_max = Some(4);
        let c = build(&spec, GridSpec::new(2, 6).unwrap()).unwrap();
        assert_eq!(nonzero(&c), (2 * 15) * (2 * 15));
    }

    #[test]
    fn plain_families_share_one_shape() {
        let grid = GridSpec::new(2, 7).unwrap();
        let make = |f| build(&LacunaryFamilySpec::simple(f, 1, 0.9, alloc::vec![0.8, 1.2], 2.5), grid).unwrap();
        let f1 = make(Family::F1);
        for f in [Family::F2, Family::F3, Family::F4, Family::G1, Family::G2, Family::BlockProfile] {
            assert_eq!(make(f), f1);
        }
    }

    #[test]
    fn build_is_reproducible_and_packet_additive() {
        let grid = GridSpec::new(1, 9).unwrap();
        let spec = LacunaryFamilySpec::simple(Family::F1, 0, 1.3, alloc::vec![1.0], 2.0);
        let c = build(&spec, grid).unwrap();
        assert_eq!(c, build(&spec, grid).unwrap());
        let mut sum = SpectralRep::zeros(grid);
        for s in 1..=7 {
            sum = sum.add(&c.dyadic_block(&crate::grid::DyadicIndex(alloc::vec![s])).unwrap()).unwrap();
        }
        assert_eq!(sum, c);
    }

    #[test]
    fn truncation_must_fit_the_band() {
        let mut spec = LacunaryFamilySpec::simple(Family::F1, 0, 1.0, alloc::vec![1.0], 2.0);
        spec.s_max = Some(7);
        assert!(matches!(build(&spec, GridSpec::new(1, 8).unwrap()), Err(Error::ResolutionExhausted { .. })));
        spec.axis = 1;
        assert!(build(&spec, GridSpec::new(1, 10).unwrap()).is_err());
    }

    #[test]
    fn family_ids_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        assert!("f9".parse::<Family>().is_err());
    }

    /// Lorentz norm straight from the definition, for the oracle below.
    fn lorentz_oracle(v: &[f64], p: f64, tau: f64) -> f64 {
        let mut a: Vec<f64> = v.iter().map(|x| x.abs()).collect();
        a.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let n = a.len() as f64;
        let mut s = 0.0;
        for (i, x) in a.iter().enumerate() {
            let w = ((i as f64 + 1.0) / n).powf(tau / p) - (i as f64 / n).powf(tau / p);
            s += x.powf(tau) * w;
        }
        (p / tau * s).powf(1.0 / tau)
    }

    #[test]
    fn profile_matches_direct_level_sums() {
        let k = 10u32;
        let (p, tau, delta, alpha) = (2.0, 1.5, 1.0, 0.75);
        let grid = GridSpec::new(1, k).unwrap();
        let spec = LacunaryFamilySpec::simple(Family::BlockProfile, 0, delta, alloc::vec![alpha], p);
        let c = build(&spec, grid).unwrap();
        let prof = block_norm_profile(&c, &[alpha], lp(p, tau), 0).unwrap();
        assert_eq!(prof.levels.len(), 4);
        let n = 1usize << k;
        let mut direct = Vec::new();
        for l in 0..4u32 {
            let vals: Vec<f64> = (0..n)
                .map(|i| {
                    let x = 2.0 * PI * i as f64 / n as f64;
                    let mut f = 0.0;
                    for s in (1u32 << l)..(1u32 << (l + 1)) {
                        if s > k - 2 {
                            break;
                        }
                        let amp = 2f64.powf(s as f64 * alpha) * 2f64.powf(-(s as f64) * (alpha + 1.0 - 1.0 / p)) * (s as f64 + 1.0).powf(-delta);
                        for kk in (1u64 << (s - 1))..(1u64 << s) {
                            f += amp * (kk as f64 * x).cos();
                        }
                    }
                    f
                })
                .collect();
            direct.push(lorentz_oracle(&vals, p, tau));
        }
        for ((_, v), d) in prof.levels.iter().zip(&direct) {
            assert!((v - d).abs() < 1e-9 * d, "{v} vs {d}");
        }
        let logs: Vec<f64> = direct.iter().map(|d| d.log2()).collect();
        // two-point ratios bracket the fitted slope
        let ratios: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(prof.slope >= lo - 1e-12 && prof.slope <= hi + 1e-12);
    }

    #[test]
    fn profile_with_cosine_padding_matches_one_dimension() {
        // the cos x_2 factor multiplies the norm by a fixed constant
        let a = build(&LacunaryFamilySpec::simple(Family::BlockProfile, 0, 1.0, alloc::vec![1.0], 2.0), GridSpec::new(1, 9).unwrap()).unwrap();
        let mut s2 = LacunaryFamilySpec::simple(Family::BlockProfile, 0, 1.0, alloc::vec![1.0, 1.0], 2.0);
        s2.s_max = Some(7);
        let b = build(&s2, GridSpec::new(2, 9).unwrap()).unwrap();
        let pa = block_norm_profile(&a, &[1.0], lp(2.0, 2.0), 0).unwrap();
        let pb = block_norm_profile(&b, &[1.0, 1.0], lp(2.0, 2.0), 0).unwrap();
        assert!((pa.slope - pb.slope).abs() < 1e-9);
    }

    #[test]
    fn profile_needs_three_levels() {
        let mut s = LacunaryFamilySpec::simple(Family::BlockProfile, 0, 1.0, alloc::vec![1.0], 2.0);
        s.s_max = Some(1);
        let c = build(&s, GridSpec::new(1, 3).unwrap()).unwrap();
        assert!(matches!(block_norm_profile(&c, &[1.0], lp(2.0, 2.0), 0), Err(Error::InsufficientResolution { .. })));
    }

    #[test]
    fn j_levels_grow_inside_the_window() {
        // f1-type shape: J terms scale like 2^(-l (delta + b - 1/theta - 1/tau) theta)
        let (tau, theta, b) = (1.5, 2.0, 1.0);
        let delta = -b + 1.0 / tau + 1.0 / theta - 0.6;
        let spec = LacunaryFamilySpec::simple(Family::F1, 0, delta, alloc::vec![1.0], 2.0);
        let sp = SpaceParams::lipschitz(alloc::vec![1.0], alloc::vec![b], Theta::Finite(theta), 6).unwrap();
        let r = divergence_scan(&spec, GridSpec::new(1, 17).unwrap(), &sp, lp(2.0, tau)).unwrap();
        assert_eq!(r.kind, SeriesKind::JLevels);
        assert_eq!(r.truncations, alloc::vec![0, 1, 2, 3]);
        assert!(r.monotone_increasing);
        assert_eq!(r.trend, Trend::Growth);
        assert!(r.growth_exponent > 0.0);
    }

    #[test]
    fn besov_blocks_plateau_past_the_convergent_edge() {
        // block terms are (s+1)^(-delta theta): convergent edge delta = 1/theta
        let theta = 2.0;
        let spec = LacunaryFamilySpec::simple(Family::F2, 0, 1.0 / theta + 1.2, alloc::vec![1.0], 2.0);
        let sp = SpaceParams::besov(alloc::vec![1.0], alloc::vec![0.0], Theta::Finite(theta), 6, alloc::vec![1.0]).unwrap();
        let r = divergence_scan(&spec, GridSpec::new(1, 16).unwrap(), &sp, lp(2.0, 2.0)).unwrap();
        assert_eq!(r.kind, SeriesKind::BesovBlocks);
        assert_eq!(*r.truncations.first().unwrap(), 3);
        assert_eq!(*r.truncations.last().unwrap(), 14);
        assert_eq!(r.trend, Trend::Plateau);
        assert!(r.last_ratio < 1.02);
        // fitted power close to -(delta theta)
        assert!((r.growth_exponent + (1.0 / theta + 1.2) * theta).abs() < 0.3, "{}", r.growth_exponent);
    }

    #[test]
    fn classification_thresholds() {
        assert_eq!(classify(1.2), Trend::Growth);
        assert_eq!(classify(f64::INFINITY), Trend::Growth);
        assert_eq!(classify(1.01), Trend::Plateau);
        assert_eq!(classify(1.05), Trend::Inconclusive);
    }

    #[test]
    fn witness_instantiates() {
        let q = |s: &str| crate::embedding::parse_rational(s).unwrap();
        let params = RationalParams {
            p: Some(ExtRational::int(2)),
            tau: Some(ExtRational::ratio(3, 2)),
            theta: Some(ExtRational::int(2)),
            alpha: Some(alloc::vec![q("1")]),
            b: Some(alloc::vec![q("1")]),
            xi: Some(alloc::vec![q("1/2")]),
            ..Default::default()
        };
        let w = decide_besov_to_lip(&params).witness.unwrap();
        let s = LacunaryFamilySpec::from_witness(&w, &params, None).unwrap();
        assert_eq!(s.family, Family::FXi0);
        assert!((s.delta - 7.0 / 12.0).abs() < 1e-15);
        assert_eq!((s.p, s.xi[0], s.b[0]), (2.0, 0.5, 1.0));
        let c = build(&s, GridSpec::new(1, 8).unwrap()).unwrap();
        // exponent (xi - b) + delta on the distinguished axis
        let want = 2f64.powf(-1.5) * 2f64.powf(-(0.5 - 1.0 + 7.0 / 12.0)) / 2.0;
        assert!((c.coeff(&[1]).unwrap().re - want).abs() < 1e-15);
    }

    #[test]
    fn witness_spaces_follow_the_family() {
        let q = |s: &str| crate::embedding::parse_rational(s).unwrap();
        let mut params = RationalParams {
            p: Some(ExtRational::int(2)),
            tau: Some(ExtRational::ratio(3, 2)),
            theta: Some(ExtRational::int(2)),
            p0: Some(ExtRational::ratio(3, 2)),
            tau0: Some(ExtRational::int(2)),
            alpha: Some(alloc::vec![q("1")]),
            b: Some(alloc::vec![q("1")]),
            xi: Some(alloc::vec![q("1/2")]),
            ..Default::default()
        };
        let ws = witness_spaces(Family::F1, None, &params, 4).unwrap();
        assert_eq!(ws.divergent, Side::Lipschitz);
        assert_eq!((ws.besov_lp.p(), ws.besov_lp.tau()), (1.5, 2.0));
        assert!((ws.besov.r[0] - (1.0 + 2.0 / 3.0 - 0.5)).abs() < 1e-15);
        assert_eq!(ws.besov.b, alloc::vec![-0.5]);
        params.q = Some(ExtRational::Infinity);
        let ws = witness_spaces(Family::G2, None, &params, 4).unwrap();
        assert_eq!(ws.divergent, Side::Besov);
        assert_eq!(ws.besov.theta, Theta::Infinite);
        assert_eq!(ws.besov.b, alloc::vec![-0.5]);
        assert!(witness_spaces(Family::BlockProfile, None, &params, 4).is_err());
    }
}
