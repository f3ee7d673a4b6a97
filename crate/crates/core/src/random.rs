//! Random textures: the probability that a Taylor bound collapses to `SO(2)`,
//! and explicit witnesses for textures generated by a single rotation.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::taylor::{is_trivial, AngleSet};

/// Samples per independent random stream. The stream index is the chunk
/// index, so results do not depend on the number of worker threads.
const CHUNK: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    /// Number of random angles added to the fixed angle `0`.
    pub k: u32,
    pub n_samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub estimate: f64,
    pub std_error: f64,
    pub analytic: f64,
    pub k: u32,
    pub n: u64,
    pub seed: u64,
}

/// Probability `1 − (k+1)/2^k` that the angles `0, θ₁, …, θ_k`, with the
/// `θ_i` uniform on `(0, π)`, give a trivial Taylor bound.
pub fn trivial_probability(k: u32) -> Result<f64> {
    if k < 1 {
        return domain("k must be at least 1");
    }
    Ok(1.0 - (k as f64 + 1.0) / 2f64.powi(k as i32))
}

fn sample_is_trivial(rng: &mut ChaCha8Rng, k: u32, buf: &mut Vec<f64>) -> bool {
    buf.clear();
    buf.push(0.0);
    for _ in 0..k {
        // (0, π): reject the single zero the generator can return
        let t = loop {
            let u: f64 = rng.random();
            if u > 0.0 {
                break u * PI;
            }
        };
        buf.push(t);
    }
    buf.sort_by(f64::total_cmp);
    buf.dedup();
    match AngleSet::from_normalized(buf.clone()) {
        Ok(set) => is_trivial(&set),
        Err(_) => false,
    }
}

/// Monte Carlo estimate of [`trivial_probability`] with ChaCha8 streams
/// `(seed, chunk index)`, evaluated in parallel.
pub fn estimate_trivial_probability(cfg: &McConfig) -> Result<McResult> {
    let analytic = trivial_probability(cfg.k)?;
    if cfg.n_samples == 0 {
        return domain("n_samples must be at least 1");
    }
    let chunks = cfg.n_samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(chunk);
            let len = CHUNK.min(cfg.n_samples - chunk * CHUNK);
            let mut buf = Vec::with_capacity(cfg.k as usize + 1);
            (0..len)
                .filter(|_| sample_is_trivial(&mut rng, cfg.k, &mut buf))
                .count() as u64
        })
        .sum();
    let n = cfg.n_samples as f64;
    let estimate = hits as f64 / n;
    Ok(McResult {
        estimate,
        std_error: (estimate * (1.0 - estimate) / n).sqrt(),
        analytic,
        k: cfg.k,
        n: cfg.n_samples,
        seed: cfg.seed,
    })
}

/// Indices `k, l` and angles `θ_j = jφ mod π` with `π/2 ∈ [θ_k, θ_l]` and
/// `θ_l − θ_k ≤ π/2`, showing that the powers of `R_φ` give a trivial bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KlWitness {
    pub k: u64,
    pub l: u64,
    pub theta_k: f64,
    pub theta_l: f64,
}

fn power_angle(j: u64, phi: f64) -> f64 {
    crate::mat2::wrap_pi(j as f64 * phi)
}

/// For `φ < π/2` the multiples `kφ ≤ π/2 < (k+1)φ` straddle `π/2`. For
/// `φ ∈ [(1 − 2^{1−m})π, (1 − 2^{−m})π)`, `m ≥ 2`, the powers `l = 2^{m−2}`
/// and `k = 2^{m−1}` work. `φ = π/2` is its own witness.
pub fn find_kl(phi: f64) -> Result<KlWitness> {
    if !(phi > 0.0 && phi < PI) {
        return domain(format!("phi must lie in (0, pi), got {phi}"));
    }
    if phi == FRAC_PI_2 {
        return Ok(KlWitness {
            k: 1,
            l: 1,
            theta_k: FRAC_PI_2,
            theta_l: FRAC_PI_2,
        });
    }
    let (k, l) = if phi < FRAC_PI_2 {
        let mut k = (FRAC_PI_2 / phi).floor() as u64;
        while k > 1 && k as f64 * phi > FRAC_PI_2 {
            k -= 1;
        }
        while ((k + 1) as f64) * phi <= FRAC_PI_2 {
            k += 1;
        }
        (k, k + 1)
    } else {
        // smallest m ≥ 2 with φ < (1 − 2^{−m})π
        let mut m = 2u32;
        while phi >= (1.0 - 0.5f64.powi(m as i32)) * PI {
            m += 1;
            if m > 62 {
                return domain("phi too close to pi");
            }
        }
        (1u64 << (m - 1), 1u64 << (m - 2))
    };
    Ok(KlWitness {
        k,
        l,
        theta_k: power_angle(k, phi),
        theta_l: power_angle(l, phi),
    })
}

/// `n` uniform angles in `(0, π)` drawn from a seeded ChaCha8 generator.
pub fn random_angles(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(0.0..PI)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn analytic_values() {
        assert_eq!(trivial_probability(1).unwrap(), 0.0);
        assert_eq!(trivial_probability(3).unwrap(), 0.5);
        assert_eq!(trivial_probability(5).unwrap(), 0.8125);
        assert!(trivial_probability(0).is_err());
    }

    #[test]
    fn estimate_is_deterministic() {
        let cfg = McConfig {
            k: 3,
            n_samples: 20_000,
            seed: 42,
        };
        let a = estimate_trivial_probability(&cfg).unwrap();
        let b = estimate_trivial_probability(&cfg).unwrap();
        assert_eq!(a, b);
        assert!((a.estimate - 0.5).abs() < 4.0 * a.std_error);
    }

    #[test]
    fn single_angle_is_never_trivial() {
        let cfg = McConfig {
            k: 1,
            n_samples: 10_000,
            seed: 7,
        };
        assert!(estimate_trivial_probability(&cfg).unwrap().estimate <= 1e-3);
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn kl_examples() {
        let w = find_kl(FRAC_PI_3).unwrap();
        assert_eq!((w.k, w.l), (1, 2));
        assert!(close(w.theta_k, FRAC_PI_3) && close(w.theta_l, 2.0 * FRAC_PI_3));

        let w = find_kl(0.8 * PI).unwrap();
        assert_eq!((w.k, w.l), (4, 2));
        assert!(close(w.theta_k, 0.2 * PI) && close(w.theta_l, 0.6 * PI));

        let w = find_kl(PI / 4.0).unwrap();
        assert_eq!((w.k, w.l), (2, 3));
        assert!(close(w.theta_k, FRAC_PI_2) && close(w.theta_l, 0.75 * PI));

        let w = find_kl(FRAC_PI_2).unwrap();
        assert_eq!((w.k, w.l), (1, 1));

        assert!(find_kl(0.0).is_err());
        assert!(find_kl(PI).is_err());
    }
}
