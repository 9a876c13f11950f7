use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::counterexamples::Family;

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn x(s: &str) -> ExtRational {
    ExtRational::parse(s).unwrap()
}

fn qv(v: &[&str]) -> Vec<BigRational> {
    v.iter().map(|s| q(s)).collect()
}

fn base(p: &str, tau: &str, theta: &str, alpha: &[&str], b: &[&str]) -> RationalParams {
    RationalParams {
        p: Some(x(p)),
        tau: Some(x(tau)),
        theta: Some(x(theta)),
        alpha: Some(qv(alpha)),
        b: Some(qv(b)),
        ..Default::default()
    }
}

fn with_xi(mut p: RationalParams, xi: &[&str]) -> RationalParams {
    p.xi = Some(qv(xi));
    p
}

#[test]
fn besov_to_lip_threshold_is_inclusive() {
    // min{2, 3/2, 2} = 3/2
    let p = with_xi(base("2", "3/2", "2", &["1", "1"], &["1", "1"]), &["2/3", "2/3"]);
    let v = decide_besov_to_lip(&p);
    assert_eq!(v.status, Status::Holds);
    assert_eq!(v.rule, Rule::ShiftIntoLip);
}

#[test]
fn besov_to_lip_fails_when_min_is_tau() {
    let p = with_xi(base("2", "3/2", "2", &["1"], &["1"]), &["1/2"]);
    let v = decide_besov_to_lip(&p);
    assert_eq!(v.status, Status::Fails);
    let w = v.witness.unwrap();
    assert_eq!(w.family, Family::FXi0);
    assert_eq!(w.axis, 0);
    // window (1/2, 1/2 + 2/3 - 1/2)
    assert_eq!(w.window, (q("1/2"), q("2/3")));
    assert_eq!(w.delta, q("7/12"));
    assert_eq!(w.aux_t, Some(q("3/2")));
}

#[test]
fn besov_to_lip_outside_when_min_is_not_tau() {
    let p = with_xi(base("2", "4", "3", &["1"], &["1"]), &["1/3"]);
    let v = decide_besov_to_lip(&p);
    assert_eq!(v.status, Status::OutsideHypotheses);
    assert!(v.reason.is_some());
}

#[test]
fn witness_raises_the_other_coordinates() {
    let mut p = with_xi(base("2", "3/2", "2", &["1", "1/2"], &["1", "1"]), &["1/5", "1/3"]);
    p.j0 = Some(1);
    let w = decide_besov_to_lip(&p).witness.unwrap();
    assert_eq!(w.axis, 1);
    assert_eq!(w.xi, Some(qv(&["2/3", "1/3"])));
    // a non-violating j0 falls back to the first violating axis
    let mut p = with_xi(base("2", "3/2", "2", &["1", "1"], &["1", "1"]), &["1", "0"]);
    p.j0 = Some(0);
    let v = decide_besov_to_lip(&p);
    assert_eq!(v.witness.unwrap().axis, 1);
    assert_eq!(v.notes.len(), 1);
}

#[test]
fn lip_to_besov_mirror() {
    let holds = with_xi(base("2", "4", "3", &["1"], &["1"]), &["1/4"]);
    assert_eq!(decide_lip_to_besov(&holds).status, Status::Holds);
    let fails = with_xi(base("2", "4", "3", &["1", "1"], &["1", "1"]), &["1/10", "1/2"]);
    let v = decide_lip_to_besov(&fails);
    assert_eq!(v.status, Status::Fails);
    let w = v.witness.unwrap();
    assert_eq!(w.family, Family::GXi0);
    assert_eq!(w.axis, 1);
    // window (1/3 + 1/4 - 1/2, 1/3)
    assert_eq!(w.window, (q("1/12"), q("1/3")));
    assert_eq!(w.delta, q("5/24"));
    // t = 1/3 + 1/4 - 1/10 + 1
    assert_eq!(w.aux_t, Some(q("89/60")));
    let outside = with_xi(base("2", "3/2", "3", &["1"], &["1"]), &["1/2"]);
    assert_eq!(decide_lip_to_besov(&outside).status, Status::OutsideHypotheses);
}

#[test]
fn one_dimensional_shift_witness_uses_unit_aux() {
    let p = with_xi(base("2", "4", "3", &["1"], &["1"]), &["1/2"]);
    assert_eq!(decide_lip_to_besov(&p).witness.unwrap().aux_t, Some(q("1")));
}

#[test]
fn infinite_theta_is_exact() {
    // min{2, 3/2, inf} = 3/2; b >= 0 suffices for theta = inf
    let p = with_xi(base("2", "3/2", "inf", &["1"], &["1/10"]), &["2/3"]);
    assert_eq!(decide_besov_to_lip(&p).status, Status::Holds);
    let p = with_xi(base("2", "3/2", "inf", &["1"], &["1/10"]), &["1/2"]);
    let w = decide_besov_to_lip(&p).witness.unwrap();
    assert_eq!(w.window, (q("0"), q("1/6")));
}

#[test]
fn third_index_q() {
    let mut p = base("2", "3/2", "2", &["1"], &["1"]);
    p.q = Some(x("3/2"));
    assert_eq!(decide_third_index(&p, Direction::IntoLip).status, Status::Holds);
    p.q = Some(x("2"));
    let v = decide_third_index(&p, Direction::IntoLip);
    assert_eq!(v.status, Status::Fails);
    let w = v.witness.unwrap();
    assert_eq!(w.family, Family::G1);
    // (-1 + 1/2 + 1/2, -1 + 1/2 + 2/3)
    assert_eq!(w.window, (q("0"), q("1/6")));
    let mut p = base("2", "4", "3", &["1"], &["1"]);
    p.q = Some(x("4"));
    assert_eq!(decide_third_index(&p, Direction::FromLip).status, Status::Holds);
    p.q = Some(x("3"));
    let w = decide_third_index(&p, Direction::FromLip).witness.unwrap();
    assert_eq!(w.family, Family::G2);
    assert_eq!(w.window, (q("-5/12"), q("-1/3")));
    // max{2, 5/2, 3} = theta
    p.tau = Some(x("5/2"));
    p.q = Some(x("11/4"));
    assert_eq!(decide_third_index(&p, Direction::FromLip).status, Status::OutsideHypotheses);
}

#[test]
fn cross_third_index_r() {
    let mut p = base("2", "3/2", "2", &["1"], &["1"]);
    p.p0 = Some(x("3/2"));
    p.tau0 = Some(x("3/2"));
    p.r = Some(x("3/2"));
    let v = decide_third_index(&p, Direction::IntoLip);
    assert_eq!(v.status, Status::Holds);
    assert_eq!(v.rule, Rule::CrossThirdIndexIntoLip);
    assert!(!v.notes.is_empty());
    p.r = Some(x("2"));
    let w = decide_third_index(&p, Direction::IntoLip).witness.unwrap();
    assert_eq!(w.family, Family::F3);
    assert_eq!(w.window, (q("0"), q("1/6")));
    // min{tau, theta} = theta: no necessity
    p.tau = Some(x("3"));
    p.r = Some(x("5/2"));
    assert_eq!(decide_third_index(&p, Direction::IntoLip).status, Status::OutsideHypotheses);
    // p0 must be below p
    p.tau = Some(x("3/2"));
    p.p0 = Some(x("3"));
    let v = decide_third_index(&p, Direction::IntoLip);
    assert_eq!(v.status, Status::OutsideHypotheses);
    assert!(v.reason.unwrap().contains("p0 < p"));
}

#[test]
fn cross_exponent_epsilon_witness() {
    let mut p = with_xi(base("2", "3/2", "2", &["1"], &["1"]), &["2/3"]);
    p.p0 = Some(x("3/2"));
    p.tau0 = Some(x("2"));
    assert_eq!(decide_cross_exponent(&p, Direction::IntoLip).status, Status::Holds);
    p.xi = Some(qv(&["17/30"]));
    let v = decide_cross_exponent(&p, Direction::IntoLip);
    assert_eq!(v.status, Status::Fails);
    let w = v.witness.unwrap();
    assert_eq!(w.family, Family::F1);
    assert_eq!(w.epsilon, Some(q("1/10")));
    // (-1 + 2/3 + 1/2 - 1/10, -1 + 2/3 + 1/2)
    assert_eq!(w.window, (q("1/15"), q("1/6")));
    let mut p = with_xi(base("2", "3", "2", &["1"], &["1"]), &["1/3"]);
    p.p1 = Some(x("3"));
    p.tau1 = Some(x("2"));
    assert_eq!(decide_cross_exponent(&p, Direction::FromLip).status, Status::Holds);
    p.xi = Some(qv(&["13/30"]));
    let w = decide_cross_exponent(&p, Direction::FromLip).witness.unwrap();
    assert_eq!(w.family, Family::F2);
    // lo = 1/3 + 1/2 - 1 = -1/6; hi = min(1/3, -1/6 + 1/10)
    assert_eq!(w.window, (q("-1/6"), q("-1/15")));
    // max{tau, theta} = theta
    let mut p = with_xi(base("2", "2", "3", &["1"], &["1"]), &["1/2"]);
    p.p1 = Some(x("3"));
    p.tau1 = Some(x("2"));
    assert_eq!(decide_cross_exponent(&p, Direction::FromLip).status, Status::OutsideHypotheses);
}

fn lip_pair(a0: &[&str], b0: &[&str], t0: &str, a1: &[&str], b1: &[&str], t1: &str) -> RationalParams {
    RationalParams {
        p: Some(x("2")),
        tau: Some(x("2")),
        theta0: Some(x(t0)),
        theta1: Some(x(t1)),
        alpha0: Some(qv(a0)),
        alpha1: Some(qv(a1)),
        b0: Some(qv(b0)),
        b1: Some(qv(b1)),
        ..Default::default()
    }
}

#[test]
fn lip_to_lip_cases() {
    let v = decide_lip_to_lip(&lip_pair(&["2", "3"], &["2", "2"], "1", &["1", "2"], &["2", "2"], "1"));
    assert_eq!((v.status, v.rule), (Status::Holds, Rule::LipSmoothnessGap));
    let v = decide_lip_to_lip(&lip_pair(&["1"], &["2"], "1", &["1"], &["3/2"], "2"));
    assert_eq!((v.status, v.rule), (Status::Holds, Rule::LipLogEqual));
    let v = decide_lip_to_lip(&lip_pair(&["1"], &["2"], "1", &["1"], &["3"], "2"));
    assert_eq!((v.status, v.rule), (Status::Holds, Rule::LipLogGap));
    let v = decide_lip_to_lip(&lip_pair(&["1"], &["2"], "1", &["1"], &["1"], "2"));
    assert_eq!(v.status, Status::OutsideHypotheses);
    let v = decide_lip_to_lip(&lip_pair(&["2", "1"], &["2", "2"], "1", &["1", "2"], &["2", "2"], "1"));
    assert_eq!(v.status, Status::OutsideHypotheses);
    // trivial source space
    let v = decide_lip_to_lip(&lip_pair(&["2"], &["1"], "1", &["1"], &["2"], "1"));
    assert_eq!(v.status, Status::OutsideHypotheses);
    assert!(v.reason.unwrap().contains("b0_0"));
}

#[test]
fn lip_diagonal() {
    let mut p = RationalParams {
        p0: Some(x("2")),
        p1: Some(x("4")),
        theta: Some(x("1")),
        alpha0: Some(qv(&["1"])),
        alpha1: Some(qv(&["3/4"])),
        b: Some(qv(&["2"])),
        ..Default::default()
    };
    let v = decide_lip_to_lip(&p);
    assert_eq!((v.status, v.rule), (Status::Holds, Rule::LipDiagonal));
    p.alpha1 = Some(qv(&["1"]));
    assert_eq!(decide_lip_to_lip(&p).status, Status::OutsideHypotheses);
}

#[test]
fn missing_parameters_are_named() {
    let v = decide_besov_to_lip(&base("2", "3/2", "2", &["1"], &["1"]));
    assert_eq!(v.status, Status::OutsideHypotheses);
    assert!(v.reason.unwrap().contains("xi"));
    let v = decide_besov_to_lip(&with_xi(base("1", "3/2", "2", &["1"], &["1"]), &["1"]));
    assert!(v.reason.unwrap().contains("1 < p"));
    let v = decide_besov_to_lip(&with_xi(base("2", "3/2", "2", &["1"], &["1/2"]), &["1"]));
    assert!(v.reason.unwrap().contains("b_0 > 1/theta"));
}

#[test]
fn boundary_is_decided_exactly() {
    // 1/3 as a decimal is not exact; a large-denominator perturbation must flip the verdict
    let edge = q("2/3");
    let tiny = BigRational::new(BigInt::from(1), BigInt::from(10).pow(40));
    for (xi, expect) in [(edge.clone(), Status::Holds), (&edge - &tiny, Status::Fails), (&edge + &tiny, Status::Holds)] {
        let mut p = base("2", "3/2", "2", &["1"], &["1"]);
        p.xi = Some(vec![xi]);
        assert_eq!(decide_besov_to_lip(&p).status, expect);
    }
}

#[test]
fn decisions_are_deterministic() {
    let p = with_xi(base("3", "3/2", "5/2", &["1", "7/3"], &["1", "3/2"]), &["1/7", "3/2"]);
    let a = decide_besov_to_lip(&p);
    for _ in 0..10 {
        assert_eq!(decide_besov_to_lip(&p), a);
    }
}

fn rand_q(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(lo * den..=hi * den)), BigInt::from(den))
}

fn rand_exponent(rng: &mut ChaCha8Rng) -> ExtRational {
    if rng.gen_bool(0.1) {
        ExtRational::Infinity
    } else {
        ExtRational::Finite(BigRational::new(BigInt::from(rng.gen_range(7..=40)), BigInt::from(rng.gen_range(1..=6))))
    }
}

#[test]
fn chained_verdicts_never_contradict() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut covered = 0;
    for _ in 0..10_000 {
        let m = rng.gen_range(1..=3);
        let tau = ExtRational::Finite(BigRational::new(BigInt::from(rng.gen_range(7..=40)), BigInt::from(rng.gen_range(2..=6))));
        if tau.finite().map_or(true, |t| *t <= one_q()) {
            continue;
        }
        let theta = rand_exponent(&mut rng);
        let it = theta.recip().unwrap();
        let alpha: Vec<BigRational> = (0..m).map(|_| rand_q(&mut rng, 0, 3, 4) + q("1/4")).collect();
        let b: Vec<BigRational> = (0..m).map(|_| &it + rand_q(&mut rng, 0, 2, 6) + q("1/6")).collect();
        let lift: Vec<BigRational> = (0..m).map(|_| rand_q(&mut rng, 0, 1, 6)).collect();
        let xi: Vec<BigRational> = (0..m).map(|_| rand_q(&mut rng, 0, 1, 12)).collect();
        let mk = |b: &[BigRational], xi: &[BigRational]| RationalParams {
            p: Some(x("2")),
            tau: Some(tau.clone()),
            theta: Some(theta.clone()),
            alpha: Some(alpha.clone()),
            b: Some(b.to_vec()),
            xi: Some(xi.to_vec()),
            ..Default::default()
        };
        let lip = |b0: &[BigRational], b1: &[BigRational]| RationalParams {
            p: Some(x("2")),
            tau: Some(tau.clone()),
            theta0: Some(theta.clone()),
            theta1: Some(theta.clone()),
            alpha0: Some(alpha.clone()),
            alpha1: Some(alpha.clone()),
            b0: Some(b0.to_vec()),
            b1: Some(b1.to_vec()),
            ..Default::default()
        };
        let sum = |a: &[BigRational], c: &[BigRational]| -> Vec<BigRational> { a.iter().zip(c).map(|(u, v)| u + v).collect() };
        let diff = |a: &[BigRational], c: &[BigRational]| -> Vec<BigRational> { a.iter().zip(c).map(|(u, v)| u - v).collect() };

        // S^(alpha, -b + xi) -> Lip^(alpha, -b) -> Lip^(alpha, -b')
        let b_hi = sum(&b, &lift);
        let ab = decide_besov_to_lip(&mk(&b, &xi));
        let bc = decide_lip_to_lip(&lip(&b, &b_hi));
        let ac = decide_besov_to_lip(&mk(&b_hi, &sum(&xi, &lift)));
        if ab.status == Status::Holds && bc.status == Status::Holds {
            covered += 1;
            assert_ne!(ac.status, Status::Fails, "{ab:?} {bc:?} {ac:?}");
        }

        // Lip^(alpha, -b) -> Lip^(alpha, -b') -> S^(alpha, -b' + xi)
        let bc = decide_lip_to_besov(&mk(&b_hi, &xi));
        let ab = decide_lip_to_lip(&lip(&b, &b_hi));
        let ac = decide_lip_to_besov(&mk(&b, &diff(&xi, &lift)));
        if ab.status == Status::Holds && bc.status == Status::Holds {
            covered += 1;
            assert_ne!(ac.status, Status::Fails, "{ab:?} {bc:?} {ac:?}");
        }
    }
    assert!(covered > 1000, "only {covered} covered chains");
}

fn one_q() -> BigRational {
    q("1")
}
