//! 2×2 matrices, planar vectors and the shear-frame parametrization of SL(2).
//!
//! [`Mat2`] and [`Vec2`] are generic over a [`Scalar`] field with `f64` as the
//! default. Everything that needs trigonometry or square roots (rotations,
//! norms, [`decompose`]) lives on the `f64` specialization; the exact backends
//! only need ring operations.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default tolerance for predicates over doubles.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T = f64> {
    pub x: T,
    pub y: T,
}

/// Row-major 2×2 matrix `[[a11, a12], [a21, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2<T = f64> {
    pub a11: T,
    pub a12: T,
    pub a21: T,
    pub a22: T,
}

// Serialized as `[x, y]` and `[[a11, a12], [a21, a22]]`.
impl<T: Serialize> Serialize for Vec2<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        (&self.x, &self.y).serialize(ser)
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Vec2<T> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let (x, y) = <(T, T)>::deserialize(de)?;
        Ok(Self { x, y })
    }
}

impl<T: Serialize> Serialize for Mat2<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ((&self.a11, &self.a12), (&self.a21, &self.a22)).serialize(ser)
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Mat2<T> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let ((a11, a12), (a21, a22)) = <((T, T), (T, T))>::deserialize(de)?;
        Ok(Self { a11, a12, a21, a22 })
    }
}

impl<T: Scalar> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    /// Quarter turn counter-clockwise: `(x, y) ↦ (−y, x)`.
    pub fn perp(&self) -> Self {
        Self::new(-self.y.clone(), self.x.clone())
    }

    /// `det(self | other)`, the z-component of the cross product.
    pub fn cross(&self, other: &Self) -> T {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.x.clone() * k.clone(), self.y.clone() * k)
    }

    /// Tensor product `self ⊗ other`, i.e. the matrix with entries `self_i other_j`.
    pub fn outer(&self, other: &Self) -> Mat2<T> {
        Mat2::new(
            self.x.clone() * other.x.clone(),
            self.x.clone() * other.y.clone(),
            self.y.clone() * other.x.clone(),
            self.y.clone() * other.y.clone(),
        )
    }
}

impl Vec2<f64> {
    pub const E1: Vec2 = Vec2 { x: 1.0, y: 0.0 };
    pub const E2: Vec2 = Vec2 { x: 0.0, y: 1.0 };

    /// Unit vector `(cos θ, sin θ) = R_θ e₁`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl<T: Scalar> Add for Vec2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> Neg for Vec2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    /// Matrix with the given columns.
    pub fn from_cols(c1: Vec2<T>, c2: Vec2<T>) -> Self {
        Self::new(c1.x, c2.x, c1.y, c2.y)
    }

    pub fn col(&self, j: usize) -> Vec2<T> {
        match j {
            0 => Vec2::new(self.a11.clone(), self.a21.clone()),
            1 => Vec2::new(self.a12.clone(), self.a22.clone()),
            _ => panic!("column index {j} out of range"),
        }
    }

    pub fn det(&self) -> T {
        T::diff_of_products(&self.a11, &self.a22, &self.a12, &self.a21)
    }

    pub fn trace(&self) -> T {
        self.a11.clone() + self.a22.clone()
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            self.a11.clone(),
            self.a21.clone(),
            self.a12.clone(),
            self.a22.clone(),
        )
    }

    /// Cofactor matrix; satisfies `det(A + B) = det A + cof(A) : B + det B`.
    pub fn cofactor(&self) -> Self {
        Self::new(
            self.a22.clone(),
            -self.a21.clone(),
            -self.a12.clone(),
            self.a11.clone(),
        )
    }

    pub fn mul_vec(&self, v: &Vec2<T>) -> Vec2<T> {
        Vec2::new(
            self.a11.clone() * v.x.clone() + self.a12.clone() * v.y.clone(),
            self.a21.clone() * v.x.clone() + self.a22.clone() * v.y.clone(),
        )
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(
            self.a11.clone() * k.clone(),
            self.a12.clone() * k.clone(),
            self.a21.clone() * k.clone(),
            self.a22.clone() * k,
        )
    }

    /// Frobenius inner product `A : B`.
    pub fn frobenius_dot(&self, other: &Self) -> T {
        self.a11.clone() * other.a11.clone()
            + self.a12.clone() * other.a12.clone()
            + self.a21.clone() * other.a21.clone()
            + self.a22.clone() * other.a22.clone()
    }

    pub fn entries(&self) -> [T; 4] {
        [
            self.a11.clone(),
            self.a12.clone(),
            self.a21.clone(),
            self.a22.clone(),
        ]
    }

    /// Converts each entry with `f`.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        Mat2::new(f(&self.a11), f(&self.a12), f(&self.a21), f(&self.a22))
    }

    pub fn to_f64(&self) -> Mat2<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn to_rows(&self) -> [[T; 2]; 2] {
        [
            [self.a11.clone(), self.a12.clone()],
            [self.a21.clone(), self.a22.clone()],
        ]
    }
}

impl Mat2<f64> {
    /// Rotation `R_θ` by the angle θ.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, -s, s, c)
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_dot(self).sqrt()
    }

    /// Largest absolute entry of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = *self - *other;
        d.entries().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|x| x.is_finite())
    }

    /// Nudges entries by a few ulps so that the computed determinant is within
    /// `tol / 4` of one when that is possible; matrices already that close are
    /// returned unchanged.
    ///
    /// With entries of size `m`, one ulp in one entry moves the determinant by
    /// about `m²ε`, which exceeds `10⁻⁹` once `m` reaches a few thousand.
    /// Combining steps on the two entries with the largest cofactors recovers
    /// most of that resolution. The result never has a larger error than `self`.
    pub fn snap_unit_det(&self, tol: f64) -> Self {
        let goal = 0.25 * tol;
        let err = |m: &Self| (m.det() - 1.0).abs();
        if err(self) <= goal || !self.is_finite() {
            return *self;
        }
        // ∂det/∂a_ij is the (i, j) cofactor
        let cof = self.cofactor().entries();
        let mut order = [0, 1, 2, 3];
        order.sort_by(|&a, &b| cof[b].abs().total_cmp(&cof[a].abs()));
        let (i, j) = (order[0], order[1]);
        if cof[j] == 0.0 {
            return *self;
        }
        let mut base = self.entries();
        base[i] -= (self.det() - 1.0) / cof[i];
        let mut best = (*self, err(self));
        for k in -64..=64 {
            let mut e = base;
            e[i] = step_ulps(base[i], k);
            e[j] -= (Self::from_entries(e).det() - 1.0) / cof[j];
            for dj in -1..=1 {
                let mut trial = e;
                trial[j] = step_ulps(e[j], dj);
                let m = Self::from_entries(trial);
                let r = err(&m);
                if r < best.1 {
                    best = (m, r);
                }
            }
            if best.1 <= goal {
                break;
            }
        }
        best.0
    }

    fn from_entries(e: [f64; 4]) -> Self {
        Self::new(e[0], e[1], e[2], e[3])
    }

    /// `true` iff `AᵀA = Id` and `det A = 1`, entrywise within `tol`.
    pub fn is_so2(&self, tol: f64) -> bool {
        let gram = self.transpose() * *self;
        gram.max_abs_diff(&Mat2::identity()) <= tol && (self.det() - 1.0).abs() <= tol
    }
}

fn step_ulps(x: f64, k: i32) -> f64 {
    let mut y = x;
    for _ in 0..k.unsigned_abs() {
        y = if k > 0 { y.next_up() } else { y.next_down() };
    }
    y
}

impl<T: Scalar> Add for Mat2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.a11 + rhs.a11,
            self.a12 + rhs.a12,
            self.a21 + rhs.a21,
            self.a22 + rhs.a22,
        )
    }
}

impl<T: Scalar> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.a11 - rhs.a11,
            self.a12 - rhs.a12,
            self.a21 - rhs.a21,
            self.a22 - rhs.a22,
        )
    }
}

impl<T: Scalar> Neg for Mat2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a11, -self.a12, -self.a21, -self.a22)
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.a11.clone() * rhs.a11.clone() + self.a12.clone() * rhs.a21.clone(),
            self.a11 * rhs.a12.clone() + self.a12 * rhs.a22.clone(),
            self.a21.clone() * rhs.a11 + self.a22.clone() * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

impl<T: Scalar> Mul<Vec2<T>> for Mat2<T> {
    type Output = Vec2<T>;
    fn mul(self, rhs: Vec2<T>) -> Vec2<T> {
        self.mul_vec(&rhs)
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_two_pi(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduces an angle to `[0, π)`; slip directions `s` and `−s` are equivalent.
pub fn wrap_pi(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// The parametrization `F = R_ρ (β s⊗s + β⁻¹ s⊥⊗s⊥ + γ s⊗s⊥)` of a matrix
/// with unit determinant relative to a slip direction `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShearFrame {
    /// Rotation angle in `[0, 2π)`.
    pub rho: f64,
    /// Stretch `|Fs| > 0`.
    pub beta: f64,
    /// Shear amount.
    pub gamma: f64,
    /// Unit slip direction.
    pub s: Vec2,
}

impl ShearFrame {
    pub fn new(rho: f64, beta: f64, gamma: f64, s: Vec2) -> Self {
        Self {
            rho,
            beta,
            gamma,
            s,
        }
    }

    pub fn reconstruct(&self) -> Mat2 {
        let s = self.s;
        let m = s.perp();
        let core = s.outer(&s).scale(self.beta)
            + m.outer(&m).scale(1.0 / self.beta)
            + s.outer(&m).scale(self.gamma);
        Mat2::rotation(self.rho) * core
    }
}

/// Recovers `(ρ, β, γ)` of `F` relative to the unit slip direction `s`.
///
/// `β = |Fs|`, `Rs = Fs/β` and `γ = Fs⊥ · Rs`.
pub fn decompose(f: &Mat2, s: Vec2, tol: f64) -> Result<ShearFrame> {
    let det = f.det();
    if (det - 1.0).abs() > tol {
        return Err(Error::NotSl2 { det });
    }
    let fs = f.mul_vec(&s);
    let beta = fs.norm();
    if beta < tol {
        return Err(Error::DegenerateBeta { norm: beta });
    }
    let rs = fs.scale(1.0 / beta);
    let gamma = f.mul_vec(&s.perp()).dot(&rs);
    let rho = wrap_two_pi(rs.angle() - s.angle());
    Ok(ShearFrame::new(rho, beta, gamma, s))
}
