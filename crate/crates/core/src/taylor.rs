//! Taylor inner bounds: the set of constant strains admissible in every grain
//! simultaneously.
//!
//! For textures `0 = θ₁ < … < θ_N < π` the bound is `⋂ N R_{θ_i}ᵀ`. Writing
//! `F = R ψ(β, γ)` relative to `e₁`, membership in `N R_θᵀ` (for `β ≤ 1`)
//! becomes `(β, γ) ∈ Λ_θ`, where
//!
//! ```text
//! Λ_θ = { β ∈ [sin θ, 1], γ ∈ [γ₋(θ,β), γ₊(θ,β)] },
//! γ±(θ,β) = −β cot θ ± √(sin⁻²θ − β⁻²).
//! ```
//!
//! The regions are nested on each side of `π/2`, so only the two angles
//! adjacent to `π/2` matter.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::mat2::{decompose, wrap_pi, Mat2, Vec2};

/// Smallest admissible distance of a region angle from `0` and `π`.
pub const THETA_MIN: f64 = 1e-8;

/// Angles closer than this are merged by [`normalize`].
pub const MERGE_TOL: f64 = 1e-9;

/// Slack used when comparing angles against `π/2`.
const ANGLE_EPS: f64 = 1e-12;

/// Sorted, deduplicated texture angles in `[0, π)` with `θ₁ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSet {
    thetas: Vec<f64>,
    shift: f64,
}

impl AngleSet {
    /// Validates an already normalized set (strictly increasing, in
    /// `[0, π)`, starting at `0`).
    pub fn from_normalized(thetas: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::EmptyInput);
        }
        if thetas[0] != 0.0 {
            return domain("normalized angle set must start at 0");
        }
        if thetas.iter().any(|t| !(0.0..PI).contains(t)) {
            return domain("normalized angles must lie in [0, pi)");
        }
        if thetas.windows(2).any(|w| w[1] <= w[0]) {
            return domain("normalized angles must be strictly increasing");
        }
        Ok(Self { thetas, shift: 0.0 })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// The angle `θ₁` subtracted during normalization.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// The normalized angles mapped back to the input frame, sorted in `[0, π)`.
    pub fn raw_angles(&self) -> Vec<f64> {
        to_input_frame(&self.thetas, self.shift)
    }
}

fn to_input_frame(thetas: &[f64], shift: f64) -> Vec<f64> {
    let mut out: Vec<f64> = thetas.iter().map(|t| wrap_pi(t + shift)).collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Reduces angles mod `π`, sorts, merges near-duplicates and rotates the set
/// so that its first element is `0`.
///
/// Since `T_N(θ + c) = T_N(θ) R_cᵀ`, a bound computed for the normalized set
/// answers queries for the raw set via `F ∈ T_N(raw) ⇔ F R_c ∈ T_N(normalized)`.
pub fn normalize(raw: &[f64]) -> Result<AngleSet> {
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    if raw.iter().any(|t| !t.is_finite()) {
        return domain("angles must be finite");
    }
    let mut reduced: Vec<f64> = raw.iter().map(|&t| wrap_pi(t)).collect();
    reduced.sort_by(f64::total_cmp);
    let mut uniq: Vec<f64> = Vec::with_capacity(reduced.len());
    for t in reduced {
        match uniq.last() {
            Some(&last) if t - last <= MERGE_TOL => {}
            _ => uniq.push(t),
        }
    }
    // θ and π − ε describe the same slip line
    while uniq.len() > 1 && uniq[0] + PI - uniq[uniq.len() - 1] <= MERGE_TOL {
        uniq.pop();
    }
    let shift = uniq[0];
    let thetas = uniq
        .iter()
        .map(|&t| {
            let d = t - shift;
            if d >= PI {
                0.0
            } else {
                d
            }
        })
        .collect();
    Ok(AngleSet { thetas, shift })
}

fn check_region_angle(theta: f64) -> Result<(f64, f64)> {
    if !(theta > THETA_MIN && theta < PI - THETA_MIN) {
        return domain(format!(
            "region angle must lie in ({THETA_MIN}, pi - {THETA_MIN}), got {theta}"
        ));
    }
    Ok(theta.sin_cos())
}

fn bounds_unchecked(sin: f64, cos: f64, beta: f64) -> (f64, f64) {
    let beta = beta.clamp(sin, 1.0);
    let center = -beta * cos / sin;
    let radius = (1.0 / (sin * sin) - 1.0 / (beta * beta)).max(0.0).sqrt();
    (center - radius, center + radius)
}

/// The shear interval `Γ(θ, β) = [γ₋, γ₊]`.
///
/// Requires `θ ∈ (THETA_MIN, π − THETA_MIN)` and `β ∈ [sin θ, 1]` up to
/// [`crate::DEFAULT_TOL`]; values within the tolerance are clamped.
pub fn gamma_bounds(theta: f64, beta: f64) -> Result<(f64, f64)> {
    let (sin, cos) = check_region_angle(theta)?;
    let tol = crate::mat2::DEFAULT_TOL;
    if !(beta >= sin - tol && beta <= 1.0 + tol) {
        return domain(format!("beta = {beta} outside [sin theta, 1] = [{sin}, 1]"));
    }
    Ok(bounds_unchecked(sin, cos, beta))
}

/// Closed form of `Γ(θ, 1)`: `[−2 cot θ, 0]` below `π/2`, `[0, −2 cot θ]` from `π/2` on.
pub fn gamma_bounds_at_one(theta: f64) -> Result<(f64, f64)> {
    let (sin, cos) = check_region_angle(theta)?;
    let w = -2.0 * cos / sin;
    Ok(if theta < FRAC_PI_2 {
        (w, 0.0)
    } else {
        (0.0, w)
    })
}

/// `(β, γ) ∈ Λ_θ` up to `tol`. Angles outside `(0, π)` and `β < sin θ` give `false`.
pub fn in_lambda(theta: f64, beta: f64, gamma: f64, tol: f64) -> bool {
    let Ok((sin, cos)) = check_region_angle(theta) else {
        return false;
    };
    if !(beta >= sin - tol && beta <= 1.0 + tol) {
        return false;
    }
    let (lo, hi) = bounds_unchecked(sin, cos, beta);
    gamma >= lo - tol && gamma <= hi + tol
}

/// The region `Λ_θ` for a single angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaRegion {
    pub theta: f64,
}

impl LambdaRegion {
    pub fn new(theta: f64) -> Result<Self> {
        check_region_angle(theta)?;
        Ok(Self { theta })
    }

    pub fn beta_range(&self) -> (f64, f64) {
        (self.theta.sin(), 1.0)
    }

    pub fn gamma_bounds(&self, beta: f64) -> Result<(f64, f64)> {
        gamma_bounds(self.theta, beta)
    }

    pub fn contains(&self, beta: f64, gamma: f64, tol: f64) -> bool {
        in_lambda(self.theta, beta, gamma, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    SingleCrystal,
    Pair,
    Triple,
}

/// The Taylor bound `N ∩ N R_{θ_n}ᵀ ∩ N R_{θ_{n+1}}ᵀ` of a normalized angle set,
/// with `θ_n < π/2 ≤ θ_{n+1}` and the convention `θ_{N+1} = π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorBound {
    pub kind: BoundKind,
    /// Reduced angles in the normalized frame, always starting with `0`.
    pub reduced: Vec<f64>,
    /// Normalization shift; see [`AngleSet::shift`].
    pub shift: f64,
}

impl TaylorBound {
    /// Reduced angles in the frame of the raw input.
    pub fn reduced_raw(&self) -> Vec<f64> {
        to_input_frame(&self.reduced, self.shift)
    }

    /// Membership of `F` in the bound of the normalized angle set.
    pub fn contains(&self, f: &Mat2, tol: f64) -> Result<bool> {
        member_reduced(f, &self.reduced, tol)
    }

    /// Membership of `F` in the bound of the raw (un-normalized) angle set.
    pub fn contains_raw(&self, f: &Mat2, tol: f64) -> Result<bool> {
        self.contains(&(*f * Mat2::rotation(self.shift)), tol)
    }
}

pub fn reduce(angles: &AngleSet) -> TaylorBound {
    let t = angles.thetas();
    if t.len() == 1 {
        return TaylorBound {
            kind: BoundKind::SingleCrystal,
            reduced: vec![0.0],
            shift: angles.shift(),
        };
    }
    let n = t.iter().rposition(|&x| x < FRAC_PI_2).unwrap_or(0);
    let mut reduced = vec![0.0];
    if t[n] != 0.0 {
        reduced.push(t[n]);
    }
    if let Some(&next) = t.get(n + 1) {
        reduced.push(next);
    }
    let kind = if reduced.len() == 3 {
        BoundKind::Triple
    } else {
        BoundKind::Pair
    };
    TaylorBound {
        kind,
        reduced,
        shift: angles.shift(),
    }
}

fn member_reduced(f: &Mat2, reduced: &[f64], tol: f64) -> Result<bool> {
    let frame = decompose(f, Vec2::E1, tol)?;
    if frame.beta > 1.0 + tol {
        return Ok(false);
    }
    for &theta in reduced.iter().filter(|&&t| t != 0.0) {
        if (theta - FRAC_PI_2).abs() <= ANGLE_EPS {
            return Ok(f.is_so2(tol));
        }
        if !in_lambda(theta, frame.beta, frame.gamma, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in `T_N` for a normalized angle set, through the reduction to
/// at most three angles.
pub fn taylor_member(f: &Mat2, angles: &AngleSet, tol: f64) -> Result<bool> {
    reduce(angles).contains(f, tol)
}

/// Membership in `T_N` for raw texture angles.
pub fn taylor_member_raw(f: &Mat2, raw: &[f64], tol: f64) -> Result<bool> {
    reduce(&normalize(raw)?).contains_raw(f, tol)
}

/// `true` when the Taylor bound is `SO(2)`: some consecutive pair satisfies
/// `π/2 ∈ [θ_n, θ_{n+1}]` and `θ_{n+1} − θ_n ≤ π/2`.
pub fn is_trivial(angles: &AngleSet) -> bool {
    angles.thetas().windows(2).any(|w| {
        w[0] <= FRAC_PI_2 + ANGLE_EPS
            && w[1] >= FRAC_PI_2 - ANGLE_EPS
            && w[1] - w[0] <= FRAC_PI_2 + ANGLE_EPS
    })
}

/// Membership in the Taylor bound for the unrelaxed sets, `⋂ M R_{θ_i}ᵀ`:
/// `β = 1` and `γ ∈ ⋂ Γ(θ_i, 1)` over the nonzero angles.
///
/// The shear constraint uses the full interval `Γ(θ, 1)`, i.e. the `β = 1`
/// slice of `Λ_θ`.
pub fn taylor_m_member(f: &Mat2, angles: &AngleSet, tol: f64) -> Result<bool> {
    let frame = decompose(f, Vec2::E1, tol)?;
    if (frame.beta - 1.0).abs() > tol {
        return Ok(false);
    }
    for &theta in angles.thetas().iter().filter(|&&t| t != 0.0) {
        let (lo, hi) = gamma_bounds_at_one(theta)?;
        if frame.gamma < lo - tol || frame.gamma > hi + tol {
            return Ok(false);
        }
    }
    Ok(true)
}
