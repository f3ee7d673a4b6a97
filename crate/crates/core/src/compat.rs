//! Rank-one compatibility with the slip sets across an interface, and the
//! first-order laminates that realize `SL(2)` from two slip systems.
//!
//! `F` is ν-compatible with `N_s` when some `a` puts `F + a⊗ν` in `N_s`. With
//! `F = R(β s⊗s + β⁻¹ s⊥⊗s⊥ + γ s⊗s⊥)` and `t = (s·ν⊥)/(s·ν)` this happens
//! exactly when
//!
//! ```text
//! (tβ + γ)² + β⁻² ≥ 1,
//! ```
//!
//! and in that case `a` can be chosen with `F + a⊗ν ∈ M_s`. For `s·ν = 0` the
//! perturbation cannot change `Fs`, so compatibility reduces to `F ∈ N_s`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::{decompose, Mat2, Vec2};
use crate::slip::in_n;

/// A witness `target = F + a⊗ν`, equal up to rounding. `target` is the
/// authoritative value; see [`Mat2::snap_unit_det`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankOneConnection {
    pub a: Vec2,
    pub nu: Vec2,
    pub target: Mat2,
}

/// `F = λ F₊ + (1 − λ) F₋` with `F₊ − F₋ = a⊗ν` and `F± ∈ N_s ∪ N_{s′}`.
///
/// Both ends lie on the line `t ↦ F(Id + t q⊗p)` with `p, q = s ± s′`;
/// `normal` is `p/|p|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaminateSplit {
    pub f_plus: Mat2,
    pub f_minus: Mat2,
    pub lambda: f64,
    pub t_plus: f64,
    pub t_minus: f64,
    pub normal: Vec2,
}

impl LaminateSplit {
    fn trivial(f: &Mat2, normal: Vec2) -> Self {
        Self {
            f_plus: *f,
            f_minus: *f,
            lambda: 1.0,
            t_plus: 0.0,
            t_minus: 0.0,
            normal,
        }
    }

    /// `true` when no lamination was needed.
    pub fn is_trivial(&self) -> bool {
        self.t_plus == 0.0 && self.t_minus == 0.0
    }

    /// `λ F₊ + (1 − λ) F₋`.
    pub fn average(&self) -> Mat2 {
        self.f_plus.scale(self.lambda) + self.f_minus.scale(1.0 - self.lambda)
    }
}

fn check_sl2(f: &Mat2, tol: f64) -> Result<()> {
    let det = f.det();
    if (det - 1.0).abs() > tol {
        return Err(Error::NotSl2 { det });
    }
    Ok(())
}

/// `|N|²` for `N = (tβ + γ) s + β⁻¹ s⊥`, together with `N` itself.
fn connector_normal(f: &Mat2, s: Vec2, nu: Vec2, tol: f64) -> Result<(f64, Vec2, Mat2)> {
    let frame = decompose(f, s, tol)?;
    let t = s.dot(&nu.perp()) / s.dot(&nu);
    let n = s.scale(t * frame.beta + frame.gamma) + s.perp().scale(1.0 / frame.beta);
    Ok((n.norm_sq(), n, Mat2::rotation(frame.rho)))
}

pub fn nu_compatible(f: &Mat2, s: Vec2, nu: Vec2, tol: f64) -> Result<bool> {
    check_sl2(f, tol)?;
    if s.dot(&nu).abs() <= tol {
        return Ok(in_n(f, s, tol));
    }
    let (lhs, _, _) = connector_normal(f, s, nu, tol)?;
    Ok(lhs * (1.0 + tol).powi(2) >= 1.0)
}

/// Builds `a` with `F + a⊗ν ∈ M_s` (or `N_s` when `s·ν = 0`), or `None` when
/// `F` is not ν-compatible with `N_s`.
///
/// The target is `R Q (Id + γ̄ s⊗s⊥)` where the rotation `Q` sends `s⊥` to a
/// unit vector `ξ` with `ξ·N = 1` and `γ̄ = N·Qs − t`; then
/// `(target − F)ν⊥ = 0`, so the difference is `a⊗ν`. Of the two such `ξ`
/// the one giving the shorter `a` is used, so `a = 0` whenever `F ∈ M_s`.
pub fn find_connection(f: &Mat2, s: Vec2, nu: Vec2, tol: f64) -> Result<Option<RankOneConnection>> {
    check_sl2(f, tol)?;
    let sn = s.dot(&nu);
    if sn.abs() <= tol {
        return Ok(in_n(f, s, tol).then(|| RankOneConnection {
            a: Vec2::zero(),
            nu,
            target: *f,
        }));
    }
    let (lhs, n, r) = connector_normal(f, s, nu, tol)?;
    if lhs * (1.0 + tol).powi(2) < 1.0 {
        return Ok(None);
    }
    let a = if lhs >= 1.0 {
        let t = s.dot(&nu.perp()) / sn;
        let along = (1.0 - 1.0 / lhs).sqrt() / lhs.sqrt();
        // both unit solutions of ξ·N = 1; keep the smaller jump
        [along, -along]
            .iter()
            .map(|&k| {
                let xi = n.scale(1.0 / lhs) + n.perp().scale(k);
                let q = Mat2::rotation(xi.angle() - s.perp().angle());
                let gamma_bar = n.dot(&q.mul_vec(&s)) - t;
                let target = r * q * (Mat2::identity() + s.outer(&s.perp()).scale(gamma_bar));
                (target - *f).mul_vec(&nu)
            })
            .min_by(|x, y| x.norm().total_cmp(&y.norm()))
            .expect("two candidates")
    } else {
        // inside the tolerance band: take the perturbation closest to |·s| = 1
        let w = f.cofactor().mul_vec(&nu).perp();
        let fs = f.mul_vec(&s);
        w.scale(-fs.dot(&w) / (w.norm_sq() * sn))
    };
    let target = (*f + a.outer(&nu)).snap_unit_det(tol);
    Ok(Some(RankOneConnection {
        a: (target - *f).mul_vec(&nu),
        nu,
        target,
    }))
}

/// Bisection for a sign change of `phi` on `[lo, hi]`.
fn bisect(phi: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let neg_at_lo = phi(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (phi(mid) < 0.0) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Splits `F ∈ SL(2)` into two rank-one connected matrices in `N_s ∪ N_{s′}`.
///
/// Let `p` be whichever of `s ± s′` is stretched less by `F` and `q` the other.
/// Along `F_t = F(Id + t q⊗p)` the function `φ(t) = |F_t p|² − |F_t q|²` is a
/// convex quadratic with `φ(0) < 0`, so it has roots `t₋ < 0 < t₊`. At a root
/// `F_t s ⊥ F_t s′` and `|F_t s||F_t s′| = |det(s|s′)| ≤ 1`, hence one of the two
/// stretches is at most one.
///
/// Returns the trivial split (`λ = 1`, `F₊ = F₋ = F`) when `F` already lies in
/// `N_s ∪ N_{s′}` or `Fs·Fs′` vanishes within `tol`.
pub fn laminate_split(f: &Mat2, s: Vec2, s_prime: Vec2, tol: f64) -> Result<LaminateSplit> {
    if s.cross(&s_prime).abs() <= tol {
        return Err(Error::ParallelSlips);
    }
    check_sl2(f, tol)?;
    let fs = f.mul_vec(&s);
    let fs2 = f.mul_vec(&s_prime);
    let (p, q) = if fs.dot(&fs2) < 0.0 {
        (s + s_prime, s - s_prime)
    } else {
        (s - s_prime, s + s_prime)
    };
    let normal = p.normalized();
    if in_n(f, s, tol) || in_n(f, s_prime, tol) || fs.dot(&fs2).abs() <= tol {
        return Ok(LaminateSplit::trivial(f, normal));
    }

    let fp = f.mul_vec(&p);
    let fq = f.mul_vec(&q);
    let p2 = p.norm_sq();
    let a = p2 * p2 * fq.norm_sq();
    let b = 2.0 * p2 * fp.dot(&fq);
    let c = fp.norm_sq() - fq.norm_sq();
    let phi = |t: f64| (a * t + b) * t + c;
    let disc = b * b - 4.0 * a * c;

    let (t_minus, t_plus) = if disc > tol {
        let root = disc.sqrt();
        let big = -0.5 * (b + b.signum() * root);
        let (r1, r2) = if big == 0.0 {
            (-(-c / a).sqrt(), (-c / a).sqrt())
        } else {
            (big / a, c / big)
        };
        (r1.min(r2), r1.max(r2))
    } else {
        let mut span = 1.0;
        while phi(span) < 0.0 || phi(-span) < 0.0 {
            span *= 2.0;
        }
        (bisect(phi, -span, 0.0), bisect(phi, 0.0, span))
    };

    let line = |t: f64| (*f * (Mat2::identity() + q.outer(&p).scale(t))).snap_unit_det(tol);
    Ok(LaminateSplit {
        f_plus: line(t_plus),
        f_minus: line(t_minus),
        lambda: -t_minus / (t_plus - t_minus),
        t_plus,
        t_minus,
        normal,
    })
}
