//! Single-slip strain sets `M_s = {det F = 1, |Fs| = 1}` and their relaxation
//! `N_s = {det F = 1, |Fs| ≤ 1}`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::mat2::{Mat2, Vec2};

/// A slip direction `s` with slip-plane normal `m = s⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlipSystem {
    pub s: Vec2,
}

impl SlipSystem {
    /// Slip system with direction `R_θ e₁`.
    pub fn from_angle(theta: f64) -> Self {
        Self {
            s: Vec2::from_angle(theta),
        }
    }

    /// Normalizes `s`; fails on a zero vector.
    pub fn new(s: Vec2) -> Result<Self> {
        let n = s.norm();
        if !n.is_finite() || n <= 0.0 {
            return domain("slip direction must be a nonzero finite vector");
        }
        Ok(Self {
            s: s.scale(1.0 / n),
        })
    }

    pub fn normal(&self) -> Vec2 {
        self.s.perp()
    }

    pub fn contains_m(&self, f: &Mat2, tol: f64) -> bool {
        in_m(f, self.s, tol)
    }

    pub fn contains_n(&self, f: &Mat2, tol: f64) -> bool {
        in_n(f, self.s, tol)
    }
}

pub fn in_m(f: &Mat2, s: Vec2, tol: f64) -> bool {
    (f.det() - 1.0).abs() <= tol && (f.mul_vec(&s).norm() - 1.0).abs() <= tol
}

pub fn in_n(f: &Mat2, s: Vec2, tol: f64) -> bool {
    (f.det() - 1.0).abs() <= tol && f.mul_vec(&s).norm() <= 1.0 + tol
}

/// Condensed energy density: `(|F s⊥|² − 1)^{p/2}` on `M_s`, `+∞` elsewhere.
///
/// On `M_s` this equals `|γ|^p` for the shear `γ` of [`crate::decompose`].
pub fn energy(f: &Mat2, s: Vec2, p: f64, tol: f64) -> f64 {
    if !in_m(f, s, tol) {
        return f64::INFINITY;
    }
    let excess = (f.mul_vec(&s.perp()).norm_sq() - 1.0).max(0.0);
    excess.powf(0.5 * p)
}

/// `ψ(β, γ) = (β e₁ | β⁻¹ e₂ + γ e₁)`, a bijection from `(0,1] × ℝ` onto
/// the upper-triangular part of `N_{e₁}`.
pub fn psi(beta: f64, gamma: f64) -> Result<Mat2> {
    if !(beta > 0.0 && beta <= 1.0) {
        return domain(format!("psi requires beta in (0, 1], got {beta}"));
    }
    Ok(Mat2::new(beta, gamma, 0.0, 1.0 / beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::DEFAULT_TOL;

    #[test]
    fn m_membership() {
        assert!(in_m(&Mat2::new(1.0, 2.0, 0.0, 1.0), Vec2::E1, DEFAULT_TOL));
        assert!(!in_m(&Mat2::new(2.0, 0.0, 0.0, 0.5), Vec2::E1, DEFAULT_TOL));
        let r = Mat2::rotation(1.1);
        for k in 0..12 {
            assert!(in_m(&r, Vec2::from_angle(k as f64 * 0.5), DEFAULT_TOL));
        }
    }

    #[test]
    fn n_membership() {
        assert!(in_n(&Mat2::new(0.5, 0.0, 0.0, 2.0), Vec2::E1, DEFAULT_TOL));
        assert!(!in_n(&Mat2::new(2.0, 0.0, 0.0, 0.5), Vec2::E1, DEFAULT_TOL));
        // only the determinant and |Fs| matter
        assert!(!in_n(&Mat2::new(0.5, 0.0, 0.0, 1.0), Vec2::E1, DEFAULT_TOL));
    }

    #[test]
    fn energy_values() {
        let shear = Mat2::new(1.0, 0.5, 0.0, 1.0);
        assert!((energy(&shear, Vec2::E1, 2.0, DEFAULT_TOL) - 0.25).abs() < 1e-15);
        assert_eq!(
            energy(
                &Mat2::rotation(0.4),
                Vec2::from_angle(2.0),
                1.0,
                DEFAULT_TOL
            ),
            0.0
        );
        assert_eq!(
            energy(&Mat2::new(2.0, 0.0, 0.0, 0.5), Vec2::E1, 2.0, DEFAULT_TOL),
            f64::INFINITY
        );
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(1.0, 0.0).unwrap(), Mat2::identity());
        assert_eq!(psi(0.5, 1.0).unwrap(), Mat2::new(0.5, 1.0, 0.0, 2.0));
        assert_eq!(
            psi(std::f64::consts::FRAC_PI_2.sin(), 0.0).unwrap(),
            Mat2::identity()
        );
        assert!(psi(0.0, 1.0).is_err());
        assert!(psi(1.5, 1.0).is_err());
        assert!(psi(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn slip_system_normalizes() {
        let sys = SlipSystem::new(Vec2::new(3.0, 4.0)).unwrap();
        assert!((sys.s.norm() - 1.0).abs() < 1e-15);
        assert_eq!(sys.normal(), sys.s.perp());
        assert!(SlipSystem::new(Vec2::zero()).is_err());
    }
}
