//! Approximation by angles and the realization-type quantities built on it.
//!
//! The best approximation `Y_l(f)` by angle is replaced throughout by the
//! error of the explicit approximant `U_l f`, which bounds `Y_l` from above
//! and is itself bounded by a constant multiple of `Y_l`.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::grid::{for_each_multi, IndexSubset};
use crate::lorentz::{lorentz_norm, LorentzParams};
use crate::math;
use crate::spectral::SpectralRep;

fn norm_of(c: &SpectralRep, lp: LorentzParams) -> Result<f64> {
    Ok(lorentz_norm(&c.synthesize_unchecked(), lp))
}

/// `||f - U_l f||_{p,tau}`.
pub fn angle_error(c: &SpectralRep, l: &[u64], lp: LorentzParams) -> Result<f64> {
    c.check_hermitian()?;
    norm_of(&c.angle_residual(l)?, lp)
}

fn check_orders(c: &SpectralRep, n: &[u64], alpha: &[f64]) -> Result<()> {
    c.spec().check_dim(n.len())?;
    c.spec().check_dim(alpha.len())?;
    if n.contains(&0) {
        return Err(invalid("n", "orders must be at least 1"));
    }
    if alpha.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
        return Err(invalid("alpha", "must be positive and finite"));
    }
    c.check_hermitian()
}

/// One summand of [`realization_rhs`] per nonempty subset `e`, in subset order.
///
/// The summand for `e` is `prod_{j in e} n_j^-alpha_j ||D^(alpha^e) P_e f||`
/// where `P_e` keeps `|k_j| <= n_j` for `j` in `e` and `|k_j| > n_j` otherwise.
pub fn realization_terms(c: &SpectralRep, n: &[u64], alpha: &[f64], lp: LorentzParams) -> Result<Vec<(IndexSubset, f64)>> {
    check_orders(c, n, alpha)?;
    let m = c.spec().dim();
    let mut out = Vec::new();
    for e in IndexSubset::nonempty_subsets(m) {
        let piece = c.mixed_piece(n, e)?.weyl_derivative(alpha, e)?;
        let weight: f64 = e.axes().map(|j| math::powf(n[j] as f64, -alpha[j])).product();
        out.push((e, weight * norm_of(&piece, lp)?));
    }
    Ok(out)
}

/// `||f - U_n f|| + sum_{e != 0} prod_{j in e} n_j^-alpha_j ||D^(alpha^e) P_e f||`,
/// the two-sided equivalent of `omega_alpha(f, pi/n)`.
pub fn realization_rhs(c: &SpectralRep, n: &[u64], alpha: &[f64], lp: LorentzParams) -> Result<f64> {
    let terms = realization_terms(c, n, alpha, lp)?;
    let residual = norm_of(&c.angle_residual(n)?, lp)?;
    Ok(residual + terms.iter().map(|(_, v)| v).sum::<f64>())
}

/// Jackson-type bound
/// `prod n_j^-alpha_j (sum_{1 <= nu_j <= n_j + 1} prod nu_j^(beta alpha_j - 1) Y_nu^beta)^(1/beta)`
/// with `beta = min(2, tau)`.
///
/// Each axis range is split into dyadic groups `[2^k, 2^(k+1))`. A group
/// carries its exact weight sum and the angle error at its left endpoint,
/// which dominates the angle error at every member of the group.
pub fn jackson_rhs(c: &SpectralRep, n: &[u64], alpha: &[f64], lp: LorentzParams) -> Result<f64> {
    check_orders(c, n, alpha)?;
    let beta = lp.tau().min(2.0);
    let m = n.len();
    let groups: Vec<Vec<(u64, f64)>> = (0..m)
        .map(|j| {
            let top = n[j] + 1;
            let mut g = Vec::new();
            let mut lo = 1u64;
            while lo <= top {
                let hi = (2 * lo).min(top + 1);
                let w: f64 = (lo..hi).map(|v| math::powf(v as f64, beta * alpha[j] - 1.0)).sum();
                g.push((lo, w));
                lo *= 2;
            }
            g
        })
        .collect();
    let lo = alloc::vec![0u32; m];
    let hi: Vec<u32> = groups.iter().map(|g| g.len() as u32 - 1).collect();
    let mut sum = 0.0;
    let mut err = None;
    for_each_multi(&lo, &hi, |ix| {
        if err.is_some() {
            return;
        }
        let nu: Vec<u64> = ix.iter().enumerate().map(|(j, &i)| groups[j][i as usize].0).collect();
        let w: f64 = ix.iter().enumerate().map(|(j, &i)| groups[j][i as usize].1).product();
        match c.angle_residual(&nu).and_then(|r| norm_of(&r, lp)) {
            Ok(y) => sum += w * math::powf(y, beta),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let pre: f64 = (0..m).map(|j| math::powf(n[j] as f64, -alpha[j])).product();
    Ok(pre * math::powf(sum, 1.0 / beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridFunction, GridSpec};
    use crate::Complex64;
    use alloc::vec;

    fn lp() -> LorentzParams {
        LorentzParams::new(3.0, 1.5).unwrap()
    }

    #[test]
    fn angle_error_of_single_harmonic() {
        let spec = GridSpec::new(1, 6).unwrap();
        let f = GridFunction::from_fn(spec, |x| math::cos(2.0 * x[0])).unwrap();
        let c = SpectralRep::analyze(&f);
        assert!(angle_error(&c, &[3], lp()).unwrap() < 1e-14);
        let full = lorentz_norm(&f, lp());
        assert!((angle_error(&c, &[1], lp()).unwrap() - full).abs() < 1e-12);
    }

    #[test]
    fn angle_error_is_parseval_mass_at_p_equal_tau_two() {
        let spec = GridSpec::new(2, 5).unwrap();
        let mut c = SpectralRep::zeros(spec);
        for (k, v) in [([1i64, 5i64], 0.3), ([4, 4], -0.2), ([6, -7], 0.5), ([2, 9], 0.1)] {
            c.set_hermitian(&k, Complex64::new(v, 0.1)).unwrap();
        }
        let l = [3u64, 3];
        let got = angle_error(&c, &l, LorentzParams::new(2.0, 2.0).unwrap()).unwrap();
        let mass = 2.0 * ((0.2f64 * 0.2 + 0.01) + (0.25 + 0.01));
        assert!((got - math::sqrt(mass)).abs() < 1e-13);
    }

    #[test]
    fn realization_reduces_to_derivative_below_band() {
        let spec = GridSpec::new(1, 6).unwrap();
        let f = GridFunction::from_fn(spec, |x| math::sin(x[0]) + math::cos(3.0 * x[0])).unwrap();
        let c = SpectralRep::analyze(&f).project_zero_mean();
        let n = 4u64;
        let alpha = 1.5;
        let d = c.weyl_derivative(&[alpha], IndexSubset::full(1)).unwrap();
        let expect = math::powf(n as f64, -alpha) * lorentz_norm(&d.synthesize().unwrap(), lp());
        let got = realization_rhs(&c, &[n], &[alpha], lp()).unwrap();
        assert!((got - expect).abs() < 1e-12);
        assert_eq!(realization_rhs(&SpectralRep::zeros(spec), &[n], &[alpha], lp()).unwrap(), 0.0);
    }

    #[test]
    fn realization_terms_match_brute_force() {
        let spec = GridSpec::new(2, 5).unwrap();
        let f = GridFunction::from_fn(spec, |x| {
            math::sin(x[0] + 2.0 * x[1]) + math::cos(5.0 * x[0]) * math::sin(6.0 * x[1]) + math::sin(x[0]) * math::cos(9.0 * x[1])
        })
        .unwrap();
        let c = SpectralRep::analyze(&f).project_zero_mean();
        let n = [3u64, 4];
        let alpha = [0.7, 1.2];
        let got = realization_rhs(&c, &n, &alpha, lp()).unwrap();
        let mut expect = angle_error(&c, &n, lp()).unwrap();
        for (axes, keep) in [(vec![0usize], [true, false]), (vec![1], [false, true]), (vec![0, 1], [true, true])] {
            let e = IndexSubset::from_axes(&axes);
            let piece = c.retain_product(|j, k| (k.unsigned_abs() <= n[j]) == keep[j]);
            let d = piece.weyl_derivative(&alpha, e).unwrap();
            let w: f64 = axes.iter().map(|&j| math::powf(n[j] as f64, -alpha[j])).product();
            expect += w * lorentz_norm(&d.synthesize().unwrap(), lp());
        }
        assert!((got - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn jackson_single_dyadic_harmonic() {
        // cos(8x): Y_nu is the full norm for nu < 8 and zero from nu = 8 on
        let spec = GridSpec::new(1, 7).unwrap();
        let f = GridFunction::from_fn(spec, |x| math::cos(8.0 * x[0])).unwrap();
        let c = SpectralRep::analyze(&f);
        let lp = LorentzParams::new(2.5, 3.0).unwrap();
        let alpha = 1.0;
        let n = 20u64;
        let beta = 2.0;
        let y = lorentz_norm(&f, lp);
        let w: f64 = (1..8).map(|v| math::powf(v as f64, beta * alpha - 1.0)).sum();
        let expect = math::powf(n as f64, -alpha) * math::sqrt(w) * y;
        let got = jackson_rhs(&c, &[n], &[alpha], lp).unwrap();
        assert!((got - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn angle_error_monotone_in_each_index() {
        let spec = GridSpec::new(2, 5).unwrap();
        let f = GridFunction::from_fn(spec, |x| math::exp2(math::sin(x[0]) * math::cos(2.0 * x[1]))).unwrap();
        let c = SpectralRep::analyze(&f);
        for a in 0..6u64 {
            for b in 0..6u64 {
                let v = angle_error(&c, &[a, b], lp()).unwrap();
                assert!(angle_error(&c, &[a + 1, b], lp()).unwrap() <= v + 1e-14);
                assert!(angle_error(&c, &[a, b + 1], lp()).unwrap() <= v + 1e-14);
            }
        }
    }
}
