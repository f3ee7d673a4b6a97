mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;

use polyslip::random::find_kl;
use polyslip::taylor::gamma_bounds;
use polyslip::{
    decompose, energy, estimate_trivial_probability, in_lambda, in_m, in_n, is_trivial,
    laminate_split, normalize, nu_compatible, taylor_m_member, taylor_member, trivial_probability,
    Mat2, McConfig, ShearFrame, Vec2, DEFAULT_TOL,
};

use common::{compatible_brute, taylor_brute};

const TOL: f64 = DEFAULT_TOL;

fn frame() -> impl Strategy<Value = ShearFrame> {
    (0.0..TAU, 0.1..3.0f64, -3.0..3.0f64, 0.0..TAU)
        .prop_map(|(rho, beta, gamma, s)| ShearFrame::new(rho, beta, gamma, Vec2::from_angle(s)))
}

fn sl2() -> impl Strategy<Value = Mat2> {
    (0.0..TAU, 0.05..1.5f64, -4.0..4.0f64)
        .prop_map(|(rho, beta, gamma)| ShearFrame::new(rho, beta, gamma, Vec2::E1).reconstruct())
}

fn unit() -> impl Strategy<Value = Vec2> {
    (0.0..TAU).prop_map(Vec2::from_angle)
}

fn angle_set() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-6..PI - 1e-6, 0..8).prop_map(|mut t| {
        t.push(0.0);
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn decompose_inverts_reconstruct(fr in frame()) {
        let f = fr.reconstruct();
        prop_assert!((f.det() - 1.0).abs() < 1e-12);
        let back = decompose(&f, fr.s, TOL).unwrap().reconstruct();
        prop_assert!(back.max_abs_diff(&f) < 1e-9);
    }

    #[test]
    fn perp_is_a_quarter_turn(x in -1e6..1e6f64, y in -1e6..1e6f64) {
        let v = Vec2::new(x, y);
        prop_assert_eq!(v.perp().perp(), -v);
        prop_assert_eq!(v.perp().dot(&v), 0.0);
    }

    #[test]
    fn m_is_inside_n(fr in frame(), s in unit()) {
        let f = fr.reconstruct();
        prop_assert!(!in_m(&f, s, TOL) || in_n(&f, s, TOL));
        let r = Mat2::rotation(fr.rho);
        prop_assert!(in_m(&r, s, TOL) && in_n(&r, s, TOL));
    }

    #[test]
    fn slip_sets_are_rotation_covariant(f in sl2(), s in unit(), theta in 0.0..TAU) {
        let r = Mat2::rotation(theta);
        let g = f * r.transpose();
        let rs = r.mul_vec(&s);
        // skip matrices sitting on the boundary |Fs| = 1
        prop_assume!((f.mul_vec(&s).norm() - 1.0).abs() > 1e-9);
        prop_assert_eq!(in_n(&f, s, TOL), in_n(&g, rs, TOL));
    }

    #[test]
    fn energy_is_shear_power(rho in 0.0..TAU, gamma in -3.0..3.0f64, s in unit(), p in 1.0..4.0f64) {
        let f = ShearFrame::new(rho, 1.0, gamma, s).reconstruct();
        let e = energy(&f, s, p, TOL);
        let g = decompose(&f, s, TOL).unwrap().gamma;
        prop_assert!((e - g.abs().powf(p)).abs() < 1e-9 * (1.0 + e));
    }

    #[test]
    fn taylor_reduction_matches_intersection(t in angle_set(), f in sl2()) {
        let set = normalize(&t).unwrap();
        prop_assert_eq!(taylor_member(&f, &set, TOL).unwrap(), taylor_brute(&f, &t, TOL));
    }

    #[test]
    fn lambda_regions_are_nested(a in 0.01..FRAC_PI_2, b in 0.01..FRAC_PI_2, u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-6);
        let beta = hi.sin() + u * (1.0 - hi.sin());
        let (g0, g1) = gamma_bounds(hi, beta).unwrap();
        let gamma = g0 + v * (g1 - g0);
        prop_assert!(in_lambda(lo, beta, gamma, TOL));
    }

    #[test]
    fn lambda_regions_are_mirror_symmetric(theta in 0.01..FRAC_PI_2 - 0.01, u in 0.0..1.0f64) {
        let beta = theta.cos() + u * (1.0 - theta.cos());
        let (m0, m1) = gamma_bounds(FRAC_PI_2 + theta, beta).unwrap();
        let (p0, p1) = gamma_bounds(FRAC_PI_2 - theta, beta).unwrap();
        prop_assert!((m1 + p0).abs() < 1e-10);
        prop_assert!((m0 + p1).abs() < 1e-10);
    }

    #[test]
    fn trivial_bounds_admit_only_rotations(t in angle_set(), f in sl2()) {
        let set = normalize(&t).unwrap();
        if is_trivial(&set) && taylor_member(&f, &set, TOL).unwrap() {
            prop_assert!(f.is_so2(1e-6));
        }
    }

    #[test]
    fn taylor_m_inside_taylor_n(t in angle_set(), f in sl2()) {
        let set = normalize(&t).unwrap();
        if taylor_m_member(&f, &set, TOL).unwrap() {
            prop_assert!(taylor_member(&f, &set, TOL).unwrap());
        }
    }

    #[test]
    fn taylor_members_are_bounded(t in angle_set(), f in sl2()) {
        let set = normalize(&t).unwrap();
        prop_assume!(set.len() >= 2);
        if taylor_member(&f, &set, TOL).unwrap() {
            let fr = decompose(&f, Vec2::E1, TOL).unwrap();
            let max_sin = set.thetas().iter().map(|t| t.sin()).fold(0.0, f64::max);
            prop_assert!(fr.beta <= 1.0 + 1e-9 && fr.beta >= max_sin - 1e-9);
            // |γ| ≤ |cot θ| + 1/sin θ for every angle in the set
            prop_assert!(fr.gamma.abs() <= 2.0 / max_sin + 1e-6);
        }
    }

    #[test]
    fn compatibility_matches_search(f in sl2(), s in unit(), nu in unit()) {
        prop_assume!(s.dot(&nu).abs() > 1e-3);
        let margin = (common::min_stretch_after_jump(&f, s, nu) - 1.0).abs();
        prop_assume!(margin > 1e-7);
        prop_assert_eq!(nu_compatible(&f, s, nu, TOL).unwrap(), compatible_brute(&f, s, nu, TOL));
    }

    #[test]
    fn compatibility_in_every_direction_is_membership(f in sl2(), s in unit()) {
        prop_assume!((f.mul_vec(&s).norm() - 1.0).abs() > 1e-6);
        let inside = in_n(&f, s, TOL);
        let every = (0..1000).all(|k| {
            let nu = Vec2::from_angle((k as f64 + 0.5) * TAU / 1000.0);
            s.dot(&nu).abs() <= 1e-12 || nu_compatible(&f, s, nu, TOL).unwrap()
        });
        prop_assert_eq!(inside, every);
    }

    #[test]
    fn laminates_realize_sl2(f in sl2(), s in unit(), ds in 0.05..PI - 0.05) {
        let s2 = Vec2::from_angle(s.angle() + ds);
        let split = laminate_split(&f, s, s2, TOL).unwrap();
        prop_assert!((0.0..=1.0).contains(&split.lambda));
        prop_assert!((split.f_plus - split.f_minus).det().abs() < 1e-9 * (1.0 + split.f_plus.frobenius_norm().powi(2)));
        for g in [split.f_plus, split.f_minus] {
            prop_assert!((g.det() - 1.0).abs() < 1e-9);
            prop_assert!(in_n(&g, s, 1e-9) || in_n(&g, s2, 1e-9));
        }
        prop_assert!(split.average().max_abs_diff(&f) < 1e-9 * (1.0 + f.frobenius_norm()));
    }

    #[test]
    fn find_kl_witness_is_valid(phi in 1e-3..PI - 1e-3) {
        prop_assume!((phi - FRAC_PI_2).abs() > 1e-12);
        let w = find_kl(phi).unwrap();
        prop_assert!(0.0 <= w.theta_k && w.theta_k < w.theta_l && w.theta_l < PI);
        prop_assert!(w.theta_k <= FRAC_PI_2 && FRAC_PI_2 <= w.theta_l);
        prop_assert!(w.theta_l - w.theta_k <= FRAC_PI_2);
        prop_assert!(is_trivial(&normalize(&[0.0, w.theta_k, w.theta_l]).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn monte_carlo_is_deterministic(k in 1u32..9, seed in any::<u64>()) {
        let cfg = McConfig { k, n_samples: 20_000, seed };
        prop_assert_eq!(estimate_trivial_probability(&cfg).unwrap(), estimate_trivial_probability(&cfg).unwrap());
    }
}

#[test]
fn trivial_probability_increases() {
    let p: Vec<f64> = (2..40).map(|k| trivial_probability(k).unwrap()).collect();
    assert!(p.windows(2).all(|w| w[0] < w[1]));
}
