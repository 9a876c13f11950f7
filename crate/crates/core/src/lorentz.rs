//! Non-increasing rearrangement and the Lorentz `(p, tau)` norm.
//!
//! For a grid function every sample carries measure `1/N`, so the
//! rearrangement `f*` is a step function and the defining integral
//! `int_0^1 f*(t)^tau t^(tau/p - 1) dt` is evaluated in closed form:
//! `sum_i f*_i^tau (p/tau)(t_{i+1}^(tau/p) - t_i^(tau/p))`, `t_i = i/N`.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{invalid, Result};
use crate::grid::GridFunction;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzParams {
    p: f64,
    tau: f64,
}

impl LorentzParams {
    /// Requires `1 < p < inf` and `1 <= tau < inf`.
    pub fn new(p: f64, tau: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(invalid("p", "must satisfy 1 < p < inf"));
        }
        if !(tau.is_finite() && tau >= 1.0) {
            return Err(invalid("tau", "must satisfy 1 <= tau < inf"));
        }
        Ok(LorentzParams { p, tau })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// Sorted non-increasing absolute values, each carrying measure `1/len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rearrangement {
    values: Vec<f64>,
}

impl Rearrangement {
    pub fn of(f: &GridFunction) -> Self {
        Self::of_samples(f.values())
    }

    pub fn of_samples(samples: &[f64]) -> Self {
        let mut values: Vec<f64> = samples.iter().map(|&v| math::abs(v)).collect();
        sort_descending(&mut values);
        Rearrangement { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Measure of each step.
    pub fn cell_measure(&self) -> f64 {
        1.0 / self.values.len() as f64
    }

    /// `f*(t)` as a right-continuous step function on `[0, 1)`.
    pub fn at(&self, t: f64) -> f64 {
        let n = self.values.len();
        let i = ((t * n as f64) as usize).min(n - 1);
        self.values[i]
    }
}

fn sort_descending(v: &mut [f64]) {
    let mut scratch = SortScratch::default();
    scratch.sort_abs_descending(v);
}

/// Reusable key buffer for sorting absolute values.
///
/// Nonnegative IEEE doubles order like their bit patterns, so the sort runs
/// on integer keys, which is deterministic and cheaper than a float compare.
#[derive(Debug, Clone, Default)]
pub struct SortScratch {
    keys: Vec<u64>,
}

impl SortScratch {
    /// Replaces `v` by its absolute values in non-increasing order.
    pub fn sort_abs_descending(&mut self, v: &mut [f64]) {
        self.keys.clear();
        self.keys.extend(v.iter().map(|x| math::abs(*x).to_bits()));
        self.keys.sort_unstable();
        for (x, &k) in v.iter_mut().zip(self.keys.iter().rev()) {
            *x = f64::from_bits(k);
        }
    }
}

/// Quadrature weights `(p/tau)(t_{i+1}^a - t_i^a)`, `a = tau/p`, computed
/// without cancellation.
pub fn lorentz_weights(n: usize, lp: LorentzParams) -> Vec<f64> {
    let a = lp.tau / lp.p;
    let scale = lp.p / lp.tau;
    let nf = n as f64;
    (0..n)
        .map(|i| {
            if a == 1.0 {
                // exact for power-of-two n
                return ((i + 1) as f64 / nf - i as f64 / nf) * scale;
            }
            if i == 0 {
                return scale * math::powf(1.0 / nf, a);
            }
            let ti = i as f64 / nf;
            let ratio = Float::ln_1p(1.0 / i as f64);
            scale * math::powf(ti, a) * Float::exp_m1(a * ratio)
        })
        .collect()
}

/// Evaluates Lorentz norms of many sample buffers of one length.
#[derive(Debug, Clone)]
pub struct LorentzEvaluator {
    lp: LorentzParams,
    weights: Vec<f64>,
}

impl LorentzEvaluator {
    pub fn new(lp: LorentzParams, n: usize) -> Self {
        LorentzEvaluator {
            lp,
            weights: lorentz_weights(n, lp),
        }
    }

    pub fn params(&self) -> LorentzParams {
        self.lp
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Norm of the samples in `buf`; the buffer is overwritten.
    pub fn norm_in_place(&self, buf: &mut [f64]) -> f64 {
        assert_eq!(buf.len(), self.weights.len(), "sample count does not match evaluator");
        sort_descending(buf);
        self.weighted_in_place(buf)
    }

    /// Norm from values already sorted non-increasing; `sorted` is left intact.
    pub fn norm_sorted(&self, sorted: &[f64], work: &mut [f64]) -> f64 {
        assert_eq!(sorted.len(), self.weights.len(), "sample count does not match evaluator");
        work.copy_from_slice(sorted);
        self.weighted_in_place(work)
    }

    fn weighted_in_place(&self, buf: &mut [f64]) -> f64 {
        let tau = self.lp.tau;
        if tau == 2.0 {
            for (v, w) in buf.iter_mut().zip(&self.weights) {
                *v = *v * *v * w;
            }
        } else if tau == 1.0 {
            for (v, w) in buf.iter_mut().zip(&self.weights) {
                *v *= w;
            }
        } else {
            for (v, w) in buf.iter_mut().zip(&self.weights) {
                *v = if *v == 0.0 { 0.0 } else { math::powf(*v, tau) * w };
            }
        }
        let s = math::pairwise_sum(buf);
        root(s, tau)
    }

    pub fn norm(&self, samples: &[f64]) -> f64 {
        let mut buf = samples.to_vec();
        self.norm_in_place(&mut buf)
    }
}

#[inline]
fn root(s: f64, tau: f64) -> f64 {
    if tau == 2.0 {
        math::sqrt(s)
    } else if tau == 1.0 {
        s
    } else {
        math::powf(s, 1.0 / tau)
    }
}

/// `||f||_{p,tau}` of a grid function.
pub fn lorentz_norm(f: &GridFunction, lp: LorentzParams) -> f64 {
    lorentz_norm_of_samples(f.values(), lp)
}

/// `||f||_{p,tau}` of equal-measure samples.
pub fn lorentz_norm_of_samples(samples: &[f64], lp: LorentzParams) -> f64 {
    LorentzEvaluator::new(lp, samples.len()).norm(samples)
}

/// `||f||_{p,tau}` from an already computed rearrangement.
pub fn lorentz_norm_rearranged(r: &Rearrangement, lp: LorentzParams) -> f64 {
    let w = lorentz_weights(r.values.len(), lp);
    let terms: Vec<f64> = r
        .values
        .iter()
        .zip(&w)
        .map(|(&v, &wi)| if v == 0.0 { 0.0 } else { math::powf(v, lp.tau) * wi })
        .collect();
    root(math::pairwise_sum(&terms), lp.tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_params() {
        assert!(LorentzParams::new(1.0, 2.0).is_err());
        assert!(LorentzParams::new(f64::INFINITY, 2.0).is_err());
        assert!(LorentzParams::new(2.0, 0.5).is_err());
        assert!(LorentzParams::new(2.0, f64::INFINITY).is_err());
        assert!(LorentzParams::new(1.5, 1.0).is_ok());
    }

    #[test]
    fn constant_closed_form() {
        let lp = LorentzParams::new(3.0, 1.5).unwrap();
        let v = alloc::vec![2.5; 1024];
        let expect = 2.5 * math::powf(3.0 / 1.5, 1.0 / 1.5);
        assert!((lorentz_norm_of_samples(&v, lp) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn weights_sum_to_p_over_tau() {
        let lp = LorentzParams::new(1.7, 4.0).unwrap();
        let w = lorentz_weights(1 << 16, lp);
        let s = math::pairwise_sum(&w);
        assert!((s - 1.7 / 4.0).abs() < 1e-13);
    }

    #[test]
    fn tau_equal_p_is_lp_norm() {
        let spec = GridSpec::new(1, 8).unwrap();
        let f = GridFunction::from_fn(spec, |x| math::sin(x[0]) + 0.3 * math::cos(5.0 * x[0])).unwrap();
        let p = 3.0;
        let lp = LorentzParams::new(p, p).unwrap();
        let direct = math::powf(
            f.values().iter().map(|v| math::powf(v.abs(), p)).sum::<f64>() / 256.0,
            1.0 / p,
        );
        assert!((lorentz_norm(&f, lp) - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn radix_sort_matches_comparison_sort() {
        let mut v: Vec<f64> = (0..5000).map(|i| math::sin(i as f64 * 0.731) * 1e3_f64.powi(i % 7 - 3)).collect();
        v[17] = 0.0;
        v[18] = -0.0;
        let mut expect: Vec<f64> = v.iter().map(|x| x.abs()).collect();
        expect.sort_unstable_by(|a, b| b.total_cmp(a));
        let mut s = SortScratch::default();
        s.sort_abs_descending(&mut v);
        assert_eq!(v, expect);
    }

    #[test]
    fn rearrangement_is_sorted() {
        let r = Rearrangement::of_samples(&[0.5, -2.0, 1.0, 0.0]);
        assert_eq!(r.values(), &[2.0, 1.0, 0.5, 0.0]);
        assert_eq!(r.at(0.3), 1.0);
        let lp = LorentzParams::new(2.5, 1.5).unwrap();
        let direct = lorentz_norm_of_samples(&[0.5, -2.0, 1.0, 0.0], lp);
        assert!((lorentz_norm_rearranged(&r, lp) - direct).abs() < 1e-15);
    }

    fn params() -> impl Strategy<Value = LorentzParams> {
        (1.05f64..6.0, 1.0f64..6.0).prop_map(|(p, t)| LorentzParams::new(p, t).unwrap())
    }

    proptest! {
        #[test]
        fn permutation_invariance_is_bitwise(v in proptest::collection::vec(-10.0f64..10.0, 64), lp in params(), seed in 0u64..1000) {
            let mut w = v.clone();
            // deterministic shuffle
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            for i in (1..w.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                w.swap(i, j);
            }
            prop_assert_eq!(lorentz_norm_of_samples(&v, lp).to_bits(), lorentz_norm_of_samples(&w, lp).to_bits());
        }

        #[test]
        fn homogeneity(v in proptest::collection::vec(-10.0f64..10.0, 64), lp in params(), lam in -50.0f64..50.0) {
            let a = lorentz_norm_of_samples(&v, lp);
            let scaled: Vec<f64> = v.iter().map(|x| lam * x).collect();
            let b = lorentz_norm_of_samples(&scaled, lp);
            prop_assert!((b - lam.abs() * a).abs() <= 1e-12 * (lam.abs() * a).max(1e-300));
        }

        #[test]
        fn monotone(v in proptest::collection::vec(-10.0f64..10.0, 64), bump in proptest::collection::vec(0.0f64..3.0, 64), lp in params()) {
            let g: Vec<f64> = v.iter().zip(&bump).map(|(x, b)| x.abs() + b).collect();
            prop_assert!(lorentz_norm_of_samples(&v, lp) <= lorentz_norm_of_samples(&g, lp) * (1.0 + 1e-14));
        }
    }
}
