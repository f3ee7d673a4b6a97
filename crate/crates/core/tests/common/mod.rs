//! Independent oracles and random generators shared by the integration tests.
//!
//! The oracles deliberately avoid the closed forms used by the library:
//! Taylor membership is checked against every grain, triviality by scanning
//! angle pairs, and compatibility by a one-dimensional numerical search.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use polyslip::mat2::ShearFrame;
use polyslip::polycrystal::examples::chord_disk;
use polyslip::{Mat2, Polycrystal, Vec2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `F = R_ρ (β e₁⊗e₁ + β⁻¹ e₂⊗e₂ + γ e₁⊗e₂)` with the given ranges and
/// uniform ρ.
pub fn random_sl2(rng: &mut impl Rng, beta: (f64, f64), gamma: (f64, f64)) -> Mat2 {
    let b = rng.random_range(beta.0..beta.1);
    let g = rng.random_range(gamma.0..gamma.1);
    let rho = rng.random_range(0.0..TAU);
    ShearFrame::new(rho, b, g, Vec2::E1).reconstruct()
}

pub fn random_unit(rng: &mut impl Rng) -> Vec2 {
    Vec2::from_angle(rng.random_range(0.0..TAU))
}

/// Normalized angle set: `0` followed by `n − 1` sorted uniform angles.
pub fn random_angle_set(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (1..n).map(|_| rng.random_range(1e-6..PI - 1e-6)).collect();
    t.push(0.0);
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// Brute-force Taylor membership: `det F = 1` and `|F R_θ e₁| ≤ 1` for every θ.
pub fn taylor_brute(f: &Mat2, thetas: &[f64], tol: f64) -> bool {
    (f.det() - 1.0).abs() <= tol
        && thetas
            .iter()
            .all(|&t| f.mul_vec(&Vec2::from_angle(t)).norm() <= 1.0 + tol)
}

/// Triviality by direct inspection: the bound is larger than `SO(2)` exactly
/// when every nonzero angle lies strictly on one side of `π/2`, or the two
/// angles around `π/2` are more than `π/2` apart.
pub fn trivial_scan(thetas: &[f64]) -> bool {
    if thetas.len() < 2 {
        return false;
    }
    let below = thetas.iter().filter(|&&t| t < FRAC_PI_2).count();
    if below == thetas.len() {
        return false;
    }
    let lo = thetas[below - 1];
    let hi = thetas[below];
    hi - lo <= FRAC_PI_2
}

/// Minimum of `|(F + τ w⊗ν) s|` over τ, where `w = (cof F ν)⊥` spans the
/// perturbations that keep `det = 1`. Golden-section search on a bracket
/// that is guaranteed to contain the minimizer.
pub fn min_stretch_after_jump(f: &Mat2, s: Vec2, nu: Vec2) -> f64 {
    let w = f.cofactor().mul_vec(&nu).perp();
    let fs = f.mul_vec(&s);
    let sn = nu.dot(&s);
    let g = |tau: f64| (fs + w.scale(tau * sn)).norm();
    let bracket = 2.0 * (fs.norm() + 1.0) / (sn.abs() * w.norm()) + 1.0;
    let (mut a, mut b) = (-bracket, bracket);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    g(0.5 * (a + b))
}

/// Oracle for ν-compatibility with `N_s` when `s·ν ≠ 0`.
pub fn compatible_brute(f: &Mat2, s: Vec2, nu: Vec2, tol: f64) -> bool {
    min_stretch_after_jump(f, s, nu) <= 1.0 + tol
}

/// Unit disk cut by 1–4 parallel chords in a random direction, with random
/// textures that differ between neighbours.
pub fn random_chord_disk(rng: &mut impl Rng) -> Polycrystal {
    loop {
        let chords = rng.random_range(1..=4usize);
        let alpha = rng.random_range(0.0..PI);
        let mut offsets: Vec<f64> = (0..chords).map(|_| rng.random_range(-0.9..0.9)).collect();
        offsets.sort_by(f64::total_cmp);
        if offsets.windows(2).any(|w| w[1] - w[0] < 0.05) {
            continue;
        }
        let mut thetas: Vec<f64> = Vec::with_capacity(chords + 1);
        while thetas.len() < chords + 1 {
            let t = rng.random_range(0.0..PI);
            if thetas.last().is_none_or(|&p: &f64| (t - p).abs() > 1e-3) {
                thetas.push(t);
            }
        }
        if let Ok(pc) = chord_disk(alpha, &offsets, &thetas) {
            return pc;
        }
    }
}
