//! Decision rules. Each returns `Holds` when a sufficient condition is met,
//! `Fails` with a witness when the condition is violated in a case where it
//! is also known to be necessary, and `OutsideHypotheses` otherwise.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Signed;

use super::params::{Direction, RationalParams};
use super::rational::{format_rational, half, one, ExtRational};
use super::verdict::{EmbeddingVerdict, Rule, Witness};
use crate::counterexamples::Family;

type Q = BigRational;
type Check<T> = core::result::Result<T, String>;

fn two() -> ExtRational {
    ExtRational::int(2)
}

fn need<'a, T>(v: &'a Option<T>, name: &str) -> Check<&'a T> {
    v.as_ref().ok_or_else(|| format!("missing parameter {name}"))
}

/// `1 < x < inf`.
fn strictly_above_one(x: &ExtRational, name: &str) -> Check<Q> {
    match x.finite() {
        Some(q) if *q > one() => Ok(q.clone()),
        _ => Err(format!("{name} must satisfy 1 < {name} < inf")),
    }
}

fn positive_or_inf(x: &ExtRational, name: &str) -> Check<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(format!("{name} must satisfy 0 < {name} <= inf"))
    }
}

fn recip(x: &ExtRational) -> Q {
    x.recip().expect("positive by hypothesis")
}

fn min3(a: &ExtRational, b: &ExtRational, c: &ExtRational) -> ExtRational {
    a.clone().min(b.clone()).min(c.clone())
}

fn max3(a: &ExtRational, b: &ExtRational, c: &ExtRational) -> ExtRational {
    a.clone().max(b.clone()).max(c.clone())
}

fn midpoint(lo: &Q, hi: &Q) -> Q {
    (lo + hi) * half()
}

/// Validated core of a Lipschitz space `Lip^(alpha, -b)_{p,tau,theta}`.
struct Lip {
    tau: ExtRational,
    theta: ExtRational,
    alpha: Vec<Q>,
    b: Vec<Q>,
}

impl Lip {
    fn dim(&self) -> usize {
        self.alpha.len()
    }

    fn inv_tau(&self) -> Q {
        recip(&self.tau)
    }

    fn inv_theta(&self) -> Q {
        recip(&self.theta)
    }
}

fn lip_space(p: &Option<ExtRational>, tau: &Option<ExtRational>, theta: &Option<ExtRational>, alpha: &Option<Vec<Q>>, b: &Option<Vec<Q>>, suffix: &str) -> Check<Lip> {
    strictly_above_one(need(p, &format!("p{suffix}"))?, &format!("p{suffix}"))?;
    let tau = need(tau, "tau")?.clone();
    strictly_above_one(&tau, "tau")?;
    let theta = need(theta, &format!("theta{suffix}"))?.clone();
    positive_or_inf(&theta, &format!("theta{suffix}"))?;
    let alpha = need(alpha, &format!("alpha{suffix}"))?.clone();
    let b = need(b, &format!("b{suffix}"))?.clone();
    check_vectors(&alpha, &b, &theta, suffix)?;
    Ok(Lip { tau, theta, alpha, b })
}

fn check_vectors(alpha: &[Q], b: &[Q], theta: &ExtRational, suffix: &str) -> Check<()> {
    if alpha.is_empty() {
        return Err(format!("alpha{suffix} must be nonempty"));
    }
    if alpha.len() != b.len() {
        return Err(format!("alpha{suffix} and b{suffix} differ in length"));
    }
    if let Some(j) = alpha.iter().position(|a| !a.is_positive()) {
        return Err(format!("alpha{suffix}_{j} > 0 fails"));
    }
    let it = recip(theta);
    if let Some(j) = b.iter().position(|bj| *bj <= it) {
        return Err(format!("b{suffix}_{j} > 1/theta{suffix} fails"));
    }
    Ok(())
}

fn shift_vector(params: &RationalParams, m: usize) -> Check<Vec<Q>> {
    let xi = need(&params.xi, "xi")?.clone();
    if xi.len() != m {
        return Err(String::from("xi and alpha differ in length"));
    }
    Ok(xi)
}

/// Picks the violating axis: the requested `j0` when it violates, otherwise
/// the first violating coordinate.
fn pick_axis(params: &RationalParams, violates: impl Fn(usize) -> bool, m: usize) -> (usize, Option<String>) {
    let first = (0..m).find(|&j| violates(j)).expect("caller checked a violation");
    match params.j0 {
        Some(j) if j < m && violates(j) => (j, None),
        Some(j) => (first, Some(format!("requested j0 = {j} does not violate the condition; using axis {first}"))),
        None => (first, None),
    }
}

fn with_note(v: EmbeddingVerdict, note: Option<String>) -> EmbeddingVerdict {
    match note {
        Some(n) => v.note(n),
        None => v,
    }
}

/// `S^(alpha, -b + xi)_{p,tau,theta} B` into `Lip^(alpha, -b)_{p,tau,theta}`.
///
/// Sufficient: `min xi_j >= 1/min{2, tau, theta}`; necessary when the
/// minimum equals `tau`.
pub fn decide_besov_to_lip(params: &RationalParams) -> EmbeddingVerdict {
    let rule = Rule::ShiftIntoLip;
    let lip = match lip_space(&params.p, &params.tau, &params.theta, &params.alpha, &params.b, "") {
        Ok(l) => l,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let xi = match shift_vector(params, lip.dim()) {
        Ok(x) => x,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let mu = min3(&two(), &lip.tau, &lip.theta);
    let edge = recip(&mu);
    if xi.iter().all(|x| *x >= edge) {
        return EmbeddingVerdict::holds(rule);
    }
    if mu != lip.tau {
        return EmbeddingVerdict::outside(rule, "necessity is established only when min{2, tau, theta} = tau");
    }
    let (j0, note) = pick_axis(params, |j| xi[j] < edge, lip.dim());
    let mut adjusted = xi.clone();
    for (j, x) in adjusted.iter_mut().enumerate() {
        if j != j0 && *x < edge {
            *x = edge.clone();
        }
    }
    let it = lip.inv_theta();
    let lo = it.clone();
    let hi = &it + lip.inv_tau() - &xi[j0];
    let w = Witness {
        family: Family::FXi0,
        axis: j0,
        delta: midpoint(&lo, &hi),
        window: (lo, hi),
        aux_t: Some(&it + one()),
        xi: Some(adjusted),
        epsilon: None,
    };
    with_note(EmbeddingVerdict::fails(rule, w), note)
}

/// `Lip^(alpha, -b)_{p,tau,theta}` into `S^(alpha, -b + xi)_{p,tau,theta} B`.
///
/// Sufficient: `max xi_j <= 1/max{2, tau, theta}`; necessary when the
/// maximum equals `tau`.
pub fn decide_lip_to_besov(params: &RationalParams) -> EmbeddingVerdict {
    let rule = Rule::ShiftFromLip;
    let lip = match lip_space(&params.p, &params.tau, &params.theta, &params.alpha, &params.b, "") {
        Ok(l) => l,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let xi = match shift_vector(params, lip.dim()) {
        Ok(x) => x,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let big = max3(&two(), &lip.tau, &lip.theta);
    let edge = recip(&big);
    if xi.iter().all(|x| *x <= edge) {
        return EmbeddingVerdict::holds(rule);
    }
    if big != lip.tau {
        return EmbeddingVerdict::outside(rule, "necessity is established only when max{2, tau, theta} = tau");
    }
    let (j0, note) = pick_axis(params, |j| xi[j] > edge, lip.dim());
    let mut adjusted = xi.clone();
    for (j, x) in adjusted.iter_mut().enumerate() {
        if j != j0 && *x > edge {
            *x = edge.clone();
        }
    }
    let it = lip.inv_theta();
    let itau = lip.inv_tau();
    let lo = &it + &itau - &xi[j0];
    let hi = it.clone();
    let aux = (0..lip.dim())
        .filter(|&j| j != j0)
        .map(|j| &it + &itau - &adjusted[j])
        .max()
        .map(|t| t + one())
        .unwrap_or_else(one);
    let w = Witness {
        family: Family::GXi0,
        axis: j0,
        delta: midpoint(&lo, &hi),
        window: (lo, hi),
        aux_t: Some(aux),
        xi: Some(adjusted),
        epsilon: None,
    };
    with_note(EmbeddingVerdict::fails(rule, w), note)
}

fn pick_axis_any(params: &RationalParams, m: usize) -> usize {
    params.j0.filter(|&j| j < m).unwrap_or(0)
}

fn third_index_witness(family: Family, axis: usize, lo: Q, hi: Q) -> Witness {
    Witness {
        family,
        axis,
        delta: midpoint(&lo, &hi),
        window: (lo, hi),
        aux_t: None,
        xi: None,
        epsilon: None,
    }
}

/// Third-index conditions. Without `p0`/`p1` this compares the Besov third
/// index `q` of `S^(alpha, -b + 1/theta)_{p,tau,q} B` with `min/max{2, tau, theta}`.
/// With `p0` (into) or `p1` (from) it compares `r` with `min/max{tau, theta}`
/// for the spaces with shifted smoothness `alpha + (1/p0 - 1/p)` resp.
/// `alpha + (1/p1 - 1/p)` and log exponent `-b + 1/theta`.
pub fn decide_third_index(params: &RationalParams, dir: Direction) -> EmbeddingVerdict {
    let cross = match dir {
        Direction::IntoLip => params.p0.is_some(),
        Direction::FromLip => params.p1.is_some(),
    };
    if cross {
        return cross_third_index(params, dir);
    }
    let rule = match dir {
        Direction::IntoLip => Rule::ThirdIndexIntoLip,
        Direction::FromLip => Rule::ThirdIndexFromLip,
    };
    let lip = match lip_space(&params.p, &params.tau, &params.theta, &params.alpha, &params.b, "") {
        Ok(l) => l,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let q = match need(&params.q, "q").and_then(|q| positive_or_inf(q, "q").map(|_| q.clone())) {
        Ok(q) => q,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let j0 = pick_axis_any(params, lip.dim());
    let base = &lip.inv_theta() - &lip.b[j0];
    match dir {
        Direction::IntoLip => {
            let mu = min3(&two(), &lip.tau, &lip.theta);
            if q <= mu {
                return EmbeddingVerdict::holds(rule);
            }
            if mu != lip.tau {
                return EmbeddingVerdict::outside(rule, "necessity is established only when min{2, tau, theta} = tau");
            }
            let lo = &base + recip(&q);
            let hi = &base + lip.inv_tau();
            EmbeddingVerdict::fails(rule, third_index_witness(Family::G1, j0, lo, hi))
        }
        Direction::FromLip => {
            let big = max3(&two(), &lip.tau, &lip.theta);
            if q >= big {
                return EmbeddingVerdict::holds(rule);
            }
            if big != lip.tau {
                return EmbeddingVerdict::outside(rule, "necessity is established only when max{2, tau, theta} = tau");
            }
            let lo = &base + lip.inv_tau();
            let hi = &base + recip(&q);
            EmbeddingVerdict::fails(rule, third_index_witness(Family::G2, j0, lo, hi))
        }
    }
}

/// Checks `1 < p0 < p` (into) or `p < p1 < inf` (from) and the matching
/// `tau0`/`tau1`; returns `p0` or `p1`.
fn cross_exponents(params: &RationalParams, dir: Direction) -> Check<Q> {
    let p = strictly_above_one(need(&params.p, "p")?, "p")?;
    let (other, tname, pname) = match dir {
        Direction::IntoLip => (&params.p0, &params.tau0, "p0"),
        Direction::FromLip => (&params.p1, &params.tau1, "p1"),
    };
    let po = strictly_above_one(need(other, pname)?, pname)?;
    let tname_str = if pname == "p0" { "tau0" } else { "tau1" };
    strictly_above_one(need(tname, tname_str)?, tname_str)?;
    let order_ok = match dir {
        Direction::IntoLip => po < p,
        Direction::FromLip => p < po,
    };
    if !order_ok {
        return Err(String::from("integrability exponents must satisfy 1 < p0 < p < p1 < inf"));
    }
    // both sides present: check the full chain
    if let (Some(a), Some(c)) = (&params.p0, &params.p1) {
        if !(*a < ExtRational::Finite(p.clone()) && ExtRational::Finite(p.clone()) < *c) {
            return Err(String::from("integrability exponents must satisfy 1 < p0 < p < p1 < inf"));
        }
    }
    Ok(po)
}

fn smoothness_shift_note(p_other: &Q, p: &ExtRational, which: &str) -> String {
    let p = p.finite().expect("checked finite");
    let d = p_other.recip() - p.recip();
    format!(
        "{which} smoothness is alpha + ({})e, i.e. alpha shifted by 1/{} - 1/p",
        format_rational(&d),
        if which == "source" { "p0" } else { "p1" }
    )
}

fn cross_third_index(params: &RationalParams, dir: Direction) -> EmbeddingVerdict {
    let rule = match dir {
        Direction::IntoLip => Rule::CrossThirdIndexIntoLip,
        Direction::FromLip => Rule::CrossThirdIndexFromLip,
    };
    let po = match cross_exponents(params, dir) {
        Ok(po) => po,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let lip = match lip_space(&params.p, &params.tau, &params.theta, &params.alpha, &params.b, "") {
        Ok(l) => l,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let r = match need(&params.r, "r").and_then(|r| positive_or_inf(r, "r").map(|_| r.clone())) {
        Ok(r) => r,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let p = params.p.as_ref().expect("checked");
    let j0 = pick_axis_any(params, lip.dim());
    let base = &lip.inv_theta() - &lip.b[j0];
    match dir {
        Direction::IntoLip => {
            let mu = lip.tau.clone().min(lip.theta.clone());
            if r <= mu {
                EmbeddingVerdict::holds(rule)
            } else if mu != lip.tau {
                EmbeddingVerdict::outside(rule, "necessity is established only when min{tau, theta} = tau")
            } else {
                let lo = &base + recip(&r);
                let hi = &base + lip.inv_tau();
                EmbeddingVerdict::fails(rule, third_index_witness(Family::F3, j0, lo, hi))
            }
            .note(smoothness_shift_note(&po, p, "source"))
        }
        Direction::FromLip => {
            let big = lip.tau.clone().max(lip.theta.clone());
            if r >= big {
                EmbeddingVerdict::holds(rule)
            } else if big != lip.tau {
                EmbeddingVerdict::outside(rule, "necessity is established only when max{tau, theta} = tau")
            } else {
                let lo = &base + lip.inv_tau();
                let hi = &base + recip(&r);
                EmbeddingVerdict::fails(rule, third_index_witness(Family::F4, j0, lo, hi))
            }
            .note(smoothness_shift_note(&po, p, "target"))
        }
    }
}

/// Different integrability with shifted log exponent: source
/// `S^(alpha + (1/p0 - 1/p), -b + xi)_{p0,tau0,theta} B` (into) or target
/// `S^(alpha + (1/p1 - 1/p), -b + xi)_{p1,tau1,theta} B` (from). Sufficient:
/// `xi_j >= 1/min{tau, theta}` resp. `xi_j <= 1/max{tau, theta}`.
pub fn decide_cross_exponent(params: &RationalParams, dir: Direction) -> EmbeddingVerdict {
    let rule = match dir {
        Direction::IntoLip => Rule::CrossExponentIntoLip,
        Direction::FromLip => Rule::CrossExponentFromLip,
    };
    let po = match cross_exponents(params, dir) {
        Ok(po) => po,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let lip = match lip_space(&params.p, &params.tau, &params.theta, &params.alpha, &params.b, "") {
        Ok(l) => l,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let xi = match shift_vector(params, lip.dim()) {
        Ok(x) => x,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let p = params.p.as_ref().expect("checked");
    let itau = lip.inv_tau();
    let it = lip.inv_theta();
    match dir {
        Direction::IntoLip => {
            let mu = lip.tau.clone().min(lip.theta.clone());
            let edge = recip(&mu);
            let note = smoothness_shift_note(&po, p, "source");
            if xi.iter().all(|x| *x >= edge) {
                return EmbeddingVerdict::holds(rule).note(note);
            }
            if mu != lip.tau {
                return EmbeddingVerdict::outside(rule, "necessity is established only when min{tau, theta} = tau").note(note);
            }
            let (j0, pick) = pick_axis(params, |j| xi[j] < edge, lip.dim());
            let eps = &edge - &xi[j0];
            let top = &itau + &it - &lip.b[j0];
            let lo = &top - &eps;
            let w = Witness {
                family: Family::F1,
                axis: j0,
                delta: midpoint(&lo, &top),
                window: (lo, top),
                aux_t: None,
                xi: None,
                epsilon: Some(eps),
            };
            with_note(EmbeddingVerdict::fails(rule, w).note(note), pick)
        }
        Direction::FromLip => {
            let big = lip.tau.clone().max(lip.theta.clone());
            let edge = recip(&big);
            let note = smoothness_shift_note(&po, p, "target");
            if xi.iter().all(|x| *x <= edge) {
                return EmbeddingVerdict::holds(rule).note(note);
            }
            if big != lip.tau {
                return EmbeddingVerdict::outside(rule, "necessity is established only when max{tau, theta} = tau").note(note);
            }
            let (j0, pick) = pick_axis(params, |j| xi[j] > edge, lip.dim());
            let eps = &xi[j0] - &edge;
            let lo = &itau + &it - &lip.b[j0];
            let hi = (&lo + &eps).min(itau.clone());
            let w = Witness {
                family: Family::F2,
                axis: j0,
                delta: midpoint(&lo, &hi),
                window: (lo, hi),
                aux_t: None,
                xi: None,
                epsilon: Some(eps),
            };
            with_note(EmbeddingVerdict::fails(rule, w).note(note), pick)
        }
    }
}

/// Lipschitz to Lipschitz. With `p0 != p1` given this checks the diagonal
/// `alpha0_j - 1/p0 = alpha1_j - 1/p1` (shared `b`, `theta`); otherwise,
/// for shared `p` and `tau`, it checks a strict smoothness gap, or equal
/// smoothness with `b1 - 1/theta1 > b0 - 1/theta0` on every axis, or
/// equal smoothness with equality on every axis. No necessity is known.
pub fn decide_lip_to_lip(params: &RationalParams) -> EmbeddingVerdict {
    if let (Some(p0), Some(p1)) = (&params.p0, &params.p1) {
        if p0 != p1 {
            return lip_diagonal(params, p0, p1);
        }
    }
    let rule = Rule::LipSmoothnessGap;
    let src = match lip_space(&params.p, &params.tau, &params.theta0, &params.alpha0, &params.b0, "0") {
        Ok(l) => l,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    let dst = match lip_space(&params.p, &params.tau, &params.theta1, &params.alpha1, &params.b1, "1") {
        Ok(l) => l,
        Err(e) => return EmbeddingVerdict::outside(rule, e),
    };
    if src.dim() != dst.dim() {
        return EmbeddingVerdict::outside(rule, "source and target dimensions differ");
    }
    let m = src.dim();
    if (0..m).all(|j| src.alpha[j] > dst.alpha[j]) {
        return EmbeddingVerdict::holds(Rule::LipSmoothnessGap);
    }
    if (0..m).all(|j| src.alpha[j] == dst.alpha[j]) {
        let e0: Vec<Q> = src.b.iter().map(|b| b - src.inv_theta()).collect();
        let e1: Vec<Q> = dst.b.iter().map(|b| b - dst.inv_theta()).collect();
        let cmp: Vec<Ordering> = (0..m).map(|j| e1[j].cmp(&e0[j])).collect();
        if cmp.iter().all(|c| *c == Ordering::Greater) {
            return EmbeddingVerdict::holds(Rule::LipLogGap);
        }
        if cmp.iter().all(|c| *c == Ordering::Equal) {
            return EmbeddingVerdict::holds(Rule::LipLogEqual);
        }
        return EmbeddingVerdict::outside(
            Rule::LipLogGap,
            "equal smoothness but b1_j - 1/theta1 > b0_j - 1/theta0 (or equality) does not hold on every axis",
        );
    }
    EmbeddingVerdict::outside(rule, "smoothness vectors are neither strictly ordered nor equal on every axis")
}

fn lip_diagonal(params: &RationalParams, p0: &ExtRational, p1: &ExtRational) -> EmbeddingVerdict {
    let rule = Rule::LipDiagonal;
    let check = || -> Check<bool> {
        let q0 = p0.finite().filter(|q| q.is_positive()).ok_or("p0 must satisfy 0 < p0 < inf")?;
        let q1 = p1.finite().ok_or("p1 must be finite")?;
        if q0 >= q1 {
            return Err(String::from("p0 < p1 is required"));
        }
        for (t, name) in [(&params.tau0, "tau0"), (&params.tau1, "tau1")] {
            if let Some(t) = t {
                if !matches!(t.finite(), Some(q) if *q >= one()) {
                    return Err(format!("{name} must satisfy 1 <= {name} < inf"));
                }
            }
        }
        let theta = need(&params.theta, "theta")?;
        positive_or_inf(theta, "theta")?;
        let a0 = need(&params.alpha0, "alpha0")?;
        let a1 = need(&params.alpha1, "alpha1")?;
        let b = need(&params.b, "b")?;
        check_vectors(a0, b, theta, "0")?;
        check_vectors(a1, b, theta, "1")?;
        let d0 = q0.recip();
        let d1 = q1.recip();
        Ok((0..a0.len()).all(|j| &a0[j] - &d0 == &a1[j] - &d1))
    };
    match check() {
        Ok(true) => EmbeddingVerdict::holds(rule),
        Ok(false) => EmbeddingVerdict::outside(rule, "alpha0_j - 1/p0 = alpha1_j - 1/p1 fails on some axis"),
        Err(e) => EmbeddingVerdict::outside(rule, e),
    }
}
