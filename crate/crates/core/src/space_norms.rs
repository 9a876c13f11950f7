//! Logarithmic Lipschitz norms (Ω and J forms) and mixed-smoothness Besov
//! norms (block and modulus forms).
//!
//! Integral definitions are always evaluated through dyadic sums. A modulus
//! at the normalized step `2^-nu` is read from a [`DyadicModulusTable`].

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::grid::{for_each_multi, DyadicIndex};
use crate::lorentz::{lorentz_norm, LorentzParams};
use crate::math;
use crate::smoothness::{DyadicModulusTable, DEFAULT_H_GRID};
use crate::spectral::SpectralRep;

/// Third index `theta` of a space, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    Finite(f64),
    Infinite,
}

impl Theta {
    pub fn new(theta: f64) -> Result<Self> {
        if theta == f64::INFINITY {
            Ok(Theta::Infinite)
        } else if theta.is_finite() && theta > 0.0 {
            Ok(Theta::Finite(theta))
        } else {
            Err(invalid("theta", "must be positive or infinite"))
        }
    }

    /// `1/theta`, zero when infinite.
    pub fn recip(&self) -> f64 {
        match *self {
            Theta::Finite(t) => 1.0 / t,
            Theta::Infinite => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Lipschitz,
    Besov,
}

/// Parameters of a Lipschitz space `Lip^(alpha, -b)_{p,tau,theta}` or a Besov
/// space `S^(r, b + xi)_{p,tau,theta} B`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceParams {
    /// Modulus order (both variants).
    pub alpha: Vec<f64>,
    /// Logarithmic exponent.
    pub b: Vec<f64>,
    pub theta: Theta,
    /// Outer truncation: `nu_j <= max_level` in modulus sums.
    pub max_level: u32,
    pub variant: Variant,
    /// Besov smoothness.
    pub r: Vec<f64>,
    /// Shift added to `b` in Besov norms.
    pub xi: Vec<f64>,
    /// Per-axis resolution of the step search.
    pub h_grid: usize,
}

impl SpaceParams {
    pub fn lipschitz(alpha: Vec<f64>, b: Vec<f64>, theta: Theta, max_level: u32) -> Result<Self> {
        let m = alpha.len();
        let sp = SpaceParams {
            alpha,
            b,
            theta,
            max_level,
            variant: Variant::Lipschitz,
            r: alloc::vec![0.0; m],
            xi: alloc::vec![0.0; m],
            h_grid: DEFAULT_H_GRID,
        };
        sp.validate()?;
        Ok(sp)
    }

    /// Besov space with smoothness `r`, log exponent `b`, and modulus order `alpha`.
    pub fn besov(r: Vec<f64>, b: Vec<f64>, theta: Theta, max_level: u32, alpha: Vec<f64>) -> Result<Self> {
        let m = r.len();
        let sp = SpaceParams {
            alpha,
            b,
            theta,
            max_level,
            variant: Variant::Besov,
            r,
            xi: alloc::vec![0.0; m],
            h_grid: DEFAULT_H_GRID,
        };
        sp.validate()?;
        Ok(sp)
    }

    pub fn with_xi(mut self, xi: Vec<f64>) -> Result<Self> {
        self.xi = xi;
        self.validate()?;
        Ok(self)
    }

    pub fn with_h_grid(mut self, g: usize) -> Self {
        self.h_grid = g;
        self
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.alpha.len();
        for (name, v) in [("b", &self.b), ("r", &self.r), ("xi", &self.xi)] {
            if v.len() != m {
                return Err(invalid(name, "length differs from alpha"));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { what: name });
            }
        }
        if m == 0 || self.alpha.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
            return Err(invalid("alpha", "must be a nonempty vector of positive reals"));
        }
        if self.max_level < 2 {
            return Err(invalid("max_level", "must be at least 2"));
        }
        if let Theta::Finite(t) = self.theta {
            if !(t.is_finite() && t > 0.0) {
                return Err(invalid("theta", "must be positive"));
            }
        }
        if self.variant == Variant::Besov && self.r.iter().any(|&r| r <= 0.0) {
            return Err(invalid("r", "Besov smoothness must be positive"));
        }
        Ok(())
    }

    /// `b_j > 1/theta` (or `b_j >= 0` for infinite theta); otherwise the
    /// Lipschitz space contains only zero.
    pub fn check_nontrivial(&self) -> Result<()> {
        for (j, &b) in self.b.iter().enumerate() {
            let ok = match self.theta {
                Theta::Finite(t) => b > 1.0 / t,
                Theta::Infinite => b >= 0.0,
            };
            if !ok {
                return Err(Error::TrivialSpace { axis: j });
            }
        }
        Ok(())
    }

    fn besov_log(&self) -> Vec<f64> {
        self.b.iter().zip(&self.xi).map(|(b, x)| b + x).collect()
    }
}

/// One outer term of a norm series.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTerm {
    pub index: Vec<u32>,
    /// Weighted term; the `theta`-th power for finite `theta`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    /// `||f||_{p,tau} + series^(1/theta)`, or the series alone for block forms.
    pub value: f64,
    pub base_norm: f64,
    /// Sum (or supremum) of the outer terms.
    pub series: f64,
    /// Estimated contribution of the truncated terms to `series`.
    pub truncation_tail_estimate: f64,
    pub terms: Vec<LevelTerm>,
}

/// Shell sums `A_k` over terms whose largest index component is `k`.
fn shell_sums(terms: &[LevelTerm], levels: usize, sup: bool) -> Vec<f64> {
    let mut out = alloc::vec![0.0f64; levels];
    for t in terms {
        let k = *t.index.iter().max().unwrap_or(&0) as usize;
        if k < levels {
            out[k] = if sup { out[k].max(t.value) } else { out[k] + t.value };
        }
    }
    out
}

/// Geometric extrapolation from the last two shells.
fn tail_estimate(shells: &[f64], sup: bool, series: f64) -> f64 {
    let n = shells.len();
    if n < 2 {
        return 0.0;
    }
    let (prev, last) = (shells[n - 2], shells[n - 1]);
    if last == 0.0 {
        return 0.0;
    }
    if prev == 0.0 {
        return f64::INFINITY;
    }
    let r = last / prev;
    if r >= 1.0 {
        return f64::INFINITY;
    }
    if sup {
        if last < series {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        last * r / (1.0 - r)
    }
}

fn assemble(base: f64, terms: Vec<LevelTerm>, theta: Theta, levels: Option<usize>, add_base: bool) -> NormReport {
    let sup = matches!(theta, Theta::Infinite);
    let vals: Vec<f64> = terms.iter().map(|t| t.value).collect();
    let series = if sup { vals.iter().fold(0.0f64, |m, &v| m.max(v)) } else { math::pairwise_sum(&vals) };
    let tail = match levels {
        Some(l) => tail_estimate(&shell_sums(&terms, l, sup), sup, series),
        None => 0.0,
    };
    let root = match theta {
        Theta::Finite(t) => math::powf(series, 1.0 / t),
        Theta::Infinite => series,
    };
    NormReport {
        value: if add_base { base + root } else { root },
        base_norm: base,
        series,
        truncation_tail_estimate: tail,
        terms,
    }
}

fn power(x: f64, theta: Theta) -> f64 {
    match theta {
        Theta::Finite(t) => math::powf(x, t),
        Theta::Infinite => x,
    }
}

/// Ω form of the Lipschitz norm from a precomputed modulus table:
/// `||f|| + (sum_nu prod 2^(nu_j alpha_j theta) (nu_j+1)^(-theta b_j) omega^theta(f, 2^-nu))^(1/theta)`.
pub fn omega_norm_from_table(base: f64, table: &DyadicModulusTable, q: usize, sp: &SpaceParams) -> Result<NormReport> {
    sp.validate()?;
    sp.check_nontrivial()?;
    let m = sp.dim();
    if table.dim() != m || table.max_level() < sp.max_level {
        return Err(invalid("modulus table", "does not cover the requested levels"));
    }
    let lo = alloc::vec![0u32; m];
    let hi = alloc::vec![sp.max_level; m];
    let mut terms = Vec::new();
    for_each_multi(&lo, &hi, |nu| {
        let mut w = 1.0;
        for j in 0..m {
            w *= math::exp2(nu[j] as f64 * sp.alpha[j]) * math::powf(nu[j] as f64 + 1.0, -sp.b[j]);
        }
        terms.push(LevelTerm {
            index: nu.to_vec(),
            value: power(w * table.get(nu, q), sp.theta),
        });
    });
    Ok(assemble(base, terms, sp.theta, Some(sp.max_level as usize + 1), true))
}

/// Ω form of the Lipschitz norm.
pub fn omega_norm(c: &SpectralRep, sp: &SpaceParams, lp: LorentzParams) -> Result<NormReport> {
    sp.validate()?;
    sp.check_nontrivial()?;
    c.spec().check_dim(sp.dim())?;
    let table = DyadicModulusTable::compute(c, &sp.alpha, &[lp], sp.max_level, sp.h_grid)?;
    let base = lorentz_norm(&c.synthesize()?, lp);
    omega_norm_from_table(base, &table, 0, sp)
}

/// Square-function norms `X_l = ||(sum_{s in box(l)} prod 2^(2 s_j alpha_j) |delta_s f|^2)^(1/2)||`
/// for every outer level `l` whose box meets the band, for several Lorentz sets.
#[derive(Debug, Clone)]
pub struct SquareFunctionLevels {
    pub alpha: Vec<f64>,
    pub base: Vec<f64>,
    /// `(l, X_l per Lorentz set)`.
    pub levels: Vec<(Vec<u32>, Vec<f64>)>,
}

impl SquareFunctionLevels {
    pub fn compute(c: &SpectralRep, alpha: &[f64], lps: &[LorentzParams]) -> Result<Self> {
        let spec = c.spec();
        spec.check_dim(alpha.len())?;
        if alpha.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
            return Err(invalid("alpha", "must be positive"));
        }
        c.check_hermitian()?;
        let m = spec.dim();
        let smax = spec.max_block();
        let lmax = 31 - smax.leading_zeros();
        let f = c.synthesize_unchecked();
        let base = lps.iter().map(|&lp| lorentz_norm(&f, lp)).collect();
        let lo = alloc::vec![0u32; m];
        let hi = alloc::vec![lmax; m];
        let mut levels = Vec::new();
        let mut failure = None;
        for_each_multi(&lo, &hi, |l| {
            if failure.is_some() {
                return;
            }
            let slo: Vec<u32> = l.iter().map(|&lj| 1u32 << lj).collect();
            let shi: Vec<u32> = l.iter().map(|&lj| ((1u32 << (lj + 1)) - 1).min(smax)).collect();
            let mut sq = alloc::vec![0.0f64; spec.len()];
            for_each_multi(&slo, &shi, |s| {
                let block = match c.dyadic_block(&DyadicIndex(s.to_vec())) {
                    Ok(b) => b,
                    Err(e) => {
                        failure = Some(e);
                        return;
                    }
                };
                if block.max_abs() == 0.0 {
                    return;
                }
                let w: f64 = (0..m).map(|j| math::exp2(2.0 * s[j] as f64 * alpha[j])).product();
                for (acc, v) in sq.iter_mut().zip(block.synthesize_unchecked().values()) {
                    *acc += w * v * v;
                }
            });
            for v in sq.iter_mut() {
                *v = math::sqrt(*v);
            }
            let g = crate::grid::GridFunction::from_raw(spec, sq);
            levels.push((l.to_vec(), lps.iter().map(|&lp| lorentz_norm(&g, lp)).collect()));
        });
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(SquareFunctionLevels {
            alpha: alpha.to_vec(),
            base,
            levels,
        })
    }
}

/// J form from precomputed square-function levels:
/// `||f|| + (sum_l prod 2^(l_j (1/theta - b_j) theta) X_l^theta)^(1/theta)`.
pub fn j_norm_from_levels(sq: &SquareFunctionLevels, q: usize, sp: &SpaceParams) -> Result<NormReport> {
    sp.validate()?;
    sp.check_nontrivial()?;
    if sq.alpha != sp.alpha {
        return Err(invalid("square function", "computed for a different alpha"));
    }
    let inv = sp.theta.recip();
    let terms: Vec<LevelTerm> = sq
        .levels
        .iter()
        .map(|(l, xs)| {
            let w: f64 = l.iter().zip(&sp.b).map(|(&lj, &b)| math::exp2(lj as f64 * (inv - b))).product();
            LevelTerm {
                index: l.clone(),
                value: power(w * xs[q], sp.theta),
            }
        })
        .collect();
    // the last level reaches the top of the band: nothing is truncated
    Ok(assemble(sq.base[q], terms, sp.theta, None, true))
}

/// J form of the Lipschitz norm.
pub fn j_norm(c: &SpectralRep, sp: &SpaceParams, lp: LorentzParams) -> Result<NormReport> {
    sp.validate()?;
    sp.check_nontrivial()?;
    c.spec().check_dim(sp.dim())?;
    let sq = SquareFunctionLevels::compute(c, &sp.alpha, &[lp])?;
    j_norm_from_levels(&sq, 0, sp)
}

/// Block form of the Besov norm:
/// `(sum_{s >= 1} prod 2^(s_j r_j theta) (s_j+1)^((b_j + xi_j) theta) ||delta_s f||^theta)^(1/theta)`.
pub fn besov_norm_blocks(c: &SpectralRep, sp: &SpaceParams, lp: LorentzParams) -> Result<NormReport> {
    sp.validate()?;
    let spec = c.spec();
    spec.check_dim(sp.dim())?;
    c.check_hermitian()?;
    let m = spec.dim();
    let bl = sp.besov_log();
    let lo = alloc::vec![1u32; m];
    let hi = alloc::vec![spec.max_block(); m];
    let mut terms = Vec::new();
    let mut failure = None;
    for_each_multi(&lo, &hi, |s| {
        let block = match c.dyadic_block(&DyadicIndex(s.to_vec())) {
            Ok(b) => b,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let norm = if block.max_abs() == 0.0 { 0.0 } else { lorentz_norm(&block.synthesize_unchecked(), lp) };
        let w: f64 = (0..m)
            .map(|j| math::exp2(s[j] as f64 * sp.r[j]) * math::powf(s[j] as f64 + 1.0, bl[j]))
            .product();
        terms.push(LevelTerm {
            index: s.to_vec(),
            value: power(w * norm, sp.theta),
        });
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let base = lorentz_norm(&c.synthesize_unchecked(), lp);
    Ok(assemble(base, terms, sp.theta, None, false))
}

/// Modulus form of the Besov norm from a precomputed table:
/// `||f|| + (sum_nu prod 2^(nu_j r_j theta) (nu_j+1)^((b_j + xi_j) theta) omega^theta(f, 2^-nu))^(1/theta)`.
pub fn besov_norm_modulus_from_table(
    base: f64,
    table: &DyadicModulusTable,
    q: usize,
    sp: &SpaceParams,
) -> Result<NormReport> {
    sp.validate()?;
    let m = sp.dim();
    if let Some(j) = (0..m).find(|&j| sp.alpha[j] <= sp.r[j]) {
        return Err(Error::HypothesisViolation {
            clause: alloc::format!("alpha_{j} > r_{j} is required for the modulus form"),
        });
    }
    if table.dim() != m || table.max_level() < sp.max_level {
        return Err(invalid("modulus table", "does not cover the requested levels"));
    }
    let bl = sp.besov_log();
    let lo = alloc::vec![0u32; m];
    let hi = alloc::vec![sp.max_level; m];
    let mut terms = Vec::new();
    for_each_multi(&lo, &hi, |nu| {
        let w: f64 = (0..m)
            .map(|j| math::exp2(nu[j] as f64 * sp.r[j]) * math::powf(nu[j] as f64 + 1.0, bl[j]))
            .product();
        terms.push(LevelTerm {
            index: nu.to_vec(),
            value: power(w * table.get(nu, q), sp.theta),
        });
    });
    Ok(assemble(base, terms, sp.theta, Some(sp.max_level as usize + 1), true))
}

/// Modulus form of the Besov norm; requires `alpha_j > r_j`.
pub fn besov_norm_modulus(c: &SpectralRep, sp: &SpaceParams, lp: LorentzParams) -> Result<NormReport> {
    sp.validate()?;
    c.spec().check_dim(sp.dim())?;
    if let Some(j) = (0..sp.dim()).find(|&j| sp.alpha[j] <= sp.r[j]) {
        return Err(Error::HypothesisViolation {
            clause: alloc::format!("alpha_{j} > r_{j} is required for the modulus form"),
        });
    }
    let table = DyadicModulusTable::compute(c, &sp.alpha, &[lp], sp.max_level, sp.h_grid)?;
    let base = lorentz_norm(&c.synthesize()?, lp);
    besov_norm_modulus_from_table(base, &table, 0, sp)
}
