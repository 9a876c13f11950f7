//! End-to-end use of the public API: corpus functions through every norm
//! form, and embedding verdicts through witness construction.

use mixsmooth_core::corpus::random_member;
use mixsmooth_core::counterexamples::{build, divergence_scan, witness_spaces, LacunaryFamilySpec};
use mixsmooth_core::embedding::{decide_besov_to_lip, parse_rational, ExtRational, RationalParams, Status};
use mixsmooth_core::space_norms::{besov_norm_blocks, besov_norm_modulus, j_norm, omega_norm, SpaceParams, Theta};
use mixsmooth_core::{GridSpec, LorentzParams, SpectralRep};

fn lp() -> LorentzParams {
    LorentzParams::new(2.0, 1.5).unwrap()
}

fn lip() -> SpaceParams {
    SpaceParams::lipschitz(vec![1.0], vec![2.0], Theta::new(1.0).unwrap(), 4).unwrap()
}

fn besov() -> SpaceParams {
    SpaceParams::besov(vec![0.5], vec![-1.0], Theta::new(1.0).unwrap(), 4, vec![1.0]).unwrap()
}

fn all_norms(c: &SpectralRep) -> [f64; 4] {
    [
        omega_norm(c, &lip(), lp()).unwrap().value,
        j_norm(c, &lip(), lp()).unwrap().value,
        besov_norm_blocks(c, &besov(), lp()).unwrap().value,
        besov_norm_modulus(c, &besov(), lp()).unwrap().value,
    ]
}

#[test]
fn every_norm_form_is_finite_and_homogeneous() {
    let grid = GridSpec::new(1, 7).unwrap();
    for id in 0..3 {
        let c = random_member(grid, 15, 11, id).unwrap();
        let base = all_norms(&c);
        let scaled = all_norms(&c.scaled(-2.5));
        for (a, b) in base.iter().zip(&scaled) {
            assert!(a.is_finite() && *a > 0.0);
            assert!((b - 2.5 * a).abs() <= 1e-10 * b, "{a} vs {b}");
        }
        // paired forms stay within a moderate constant of each other
        assert!(base[0] / base[1] < 50.0 && base[1] / base[0] < 50.0);
        assert!(base[2] / base[3] < 50.0 && base[3] / base[2] < 50.0);
    }
}

fn q(s: &str) -> ExtRational {
    ExtRational::parse(s).unwrap()
}

#[test]
fn failing_verdict_yields_a_buildable_divergent_witness() {
    let params = RationalParams {
        p: Some(q("2")),
        tau: Some(q("3/2")),
        theta: Some(q("2")),
        alpha: Some(vec![parse_rational("1").unwrap()]),
        b: Some(vec![parse_rational("1").unwrap()]),
        xi: Some(vec![parse_rational("1/2").unwrap()]),
        ..Default::default()
    };
    let v = decide_besov_to_lip(&params);
    assert_eq!(v.status, Status::Fails);
    let w = v.witness.expect("fails carries a witness");
    let spec = LacunaryFamilySpec::from_witness(&w, &params, None).unwrap();
    let grid = GridSpec::new(1, 12).unwrap();
    let c = build(&spec, grid).unwrap();
    assert!(c.energy() > 0.0);
    c.synthesize().expect("witness is real-valued");

    let spaces = witness_spaces(w.family, w.xi.as_deref(), &params, 8).unwrap();
    let lip = divergence_scan(&spec, grid, &spaces.lip, spaces.lip_lp).unwrap();
    assert!(lip.monotone_increasing, "partial sums must not decrease: {:?}", lip.partial_sums);
    assert!(lip.partial_sums.last().unwrap() > &lip.partial_sums[0]);
}
