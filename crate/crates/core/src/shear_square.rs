//! The nine-cell piecewise-affine map on the tilted square.
//!
//! The square `Ω` with corners `(0,0), (3,−1), (4,2), (1,3)` is split into a
//! central square `S` and eight triangles. The map `v` has gradient
//! `Id + γ e₁⊗e₂` on `S` and, on the triangles, gradients in `N_{e₁}` or
//! `N_{e₂}` chosen so that `v` is continuous and equals `F_γ x` on `∂Ω`, with
//!
//! ```text
//! F_γ = (1/5) [[3γ + 4, 4γ − 3], [3, 4]].
//! ```
//!
//! The textures (`e₁` on `S, T₁, T₄, T₅, T₈`, `e₂` on the rest) make the
//! Taylor bound `SO(2)`, while `F_γ ∉ SO(2)` for `γ ≠ 0`. Everything is generic
//! over [`Scalar`], so the construction can be checked in exact arithmetic.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mat2::{Mat2, Vec2};
use crate::scalar::Scalar;
use crate::taylor::{is_trivial, normalize};

/// Slip direction carried by a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlipLabel {
    E1,
    E2,
}

impl SlipLabel {
    pub fn direction<T: Scalar>(self) -> Vec2<T> {
        match self {
            Self::E1 => Vec2::new(T::one(), T::zero()),
            Self::E2 => Vec2::new(T::zero(), T::one()),
        }
    }
}

/// A polygon carrying the affine map `x ↦ grad·x + shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell<T = f64> {
    pub name: &'static str,
    /// Counter-clockwise vertices.
    pub vertices: Vec<Vec2<T>>,
    pub grad: Mat2<T>,
    pub shift: Vec2<T>,
    pub label: SlipLabel,
}

impl<T: Scalar> Cell<T> {
    pub fn eval(&self, x: &Vec2<T>) -> Vec2<T> {
        self.grad.mul_vec(x) + self.shift.clone()
    }

    pub fn area(&self) -> T {
        let n = self.vertices.len();
        let twice = (0..n).fold(T::zero(), |acc, i| {
            acc + self.vertices[i].cross(&self.vertices[(i + 1) % n])
        });
        twice * T::from_ratio(1, 2)
    }

    fn edges(&self) -> impl Iterator<Item = (Vec2<T>, Vec2<T>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i].clone(), self.vertices[(i + 1) % n].clone()))
    }
}

/// An edge shared by two cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Interface<T = f64> {
    pub cells: (usize, usize),
    pub p: Vec2<T>,
    pub q: Vec2<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PwAffineMap<T = f64> {
    pub cells: Vec<Cell<T>>,
}

impl<T: Scalar> PwAffineMap<T> {
    /// Edges shared by two cells, matched by their endpoints.
    pub fn interfaces(&self) -> Vec<Interface<T>> {
        let mut out = Vec::new();
        for i in 0..self.cells.len() {
            for j in (i + 1)..self.cells.len() {
                for (p, q) in self.cells[i].edges() {
                    let shared = self.cells[j]
                        .edges()
                        .any(|(a, b)| (a == p && b == q) || (a == q && b == p));
                    if shared {
                        out.push(Interface {
                            cells: (i, j),
                            p: p.clone(),
                            q,
                        });
                    }
                }
            }
        }
        out
    }

    /// Cell edges not shared with another cell.
    pub fn boundary_edges(&self) -> Vec<(usize, Vec2<T>, Vec2<T>)> {
        let shared = self.interfaces();
        let mut out = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            for (p, q) in c.edges() {
                let inner = shared.iter().any(|e| {
                    (e.cells.0 == i || e.cells.1 == i)
                        && ((e.p == p && e.q == q) || (e.p == q && e.q == p))
                });
                if !inner {
                    out.push((i, p, q));
                }
            }
        }
        out
    }

    pub fn area(&self) -> T {
        self.cells.iter().fold(T::zero(), |acc, c| acc + c.area())
    }

    /// `Σ |cell| ∇v / |Ω|`.
    pub fn average_gradient(&self) -> Mat2<T> {
        let total = self.area();
        let weighted = self
            .cells
            .iter()
            .fold(Mat2::zero(), |acc, c| acc + c.grad.scale(c.area()));
        weighted.scale(T::one() / total)
    }

    /// Connected groups of cells with the same slip label, as lists of names.
    pub fn grains(&self) -> Vec<Vec<&'static str>> {
        let links = self.interfaces();
        let mut seen = vec![false; self.cells.len()];
        let mut out = Vec::new();
        for start in 0..self.cells.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut group = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for e in &links {
                    let other = if e.cells.0 == i {
                        e.cells.1
                    } else if e.cells.1 == i {
                        e.cells.0
                    } else {
                        continue;
                    };
                    if !seen[other] && self.cells[other].label == self.cells[i].label {
                        seen[other] = true;
                        group.push(other);
                        queue.push_back(other);
                    }
                }
            }
            group.sort_unstable();
            out.push(group.into_iter().map(|i| self.cells[i].name).collect());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShearSquareBuild<T = f64> {
    pub gamma: T,
    pub map: PwAffineMap<T>,
    pub f_gamma: Mat2<T>,
}

/// Result of [`verify`]; every check must hold for a valid construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Neighbouring affine maps agree at both ends of every shared edge.
    pub continuity: bool,
    /// Every gradient has unit determinant.
    pub det_one: bool,
    /// Every gradient lies in `N_s` for the slip direction of its cell.
    pub membership: bool,
    /// `v(x) = F_γ x` on the domain boundary.
    pub boundary_trace: bool,
    /// Gradient jumps annihilate the interface tangent.
    pub rank_one_jumps: bool,
    /// The area-weighted mean gradient equals `F_γ`.
    pub average_gradient: bool,
    /// Number of interior interfaces.
    pub interfaces: usize,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.continuity
            && self.det_one
            && self.membership
            && self.boundary_trace
            && self.rank_one_jumps
            && self.average_gradient
    }
}

/// `(1 + |γ|)² ≤ 3`, i.e. `|γ| ≤ √3 − 1`.
fn check_gamma<T: Scalar>(gamma: &T) -> Result<()> {
    let one_plus = T::one() + gamma.abs();
    if !(one_plus.clone() * one_plus).at_most(&T::from_int(3), 1e-12) {
        return Err(Error::GammaOutOfRange(format!("{:.6}", gamma.to_f64())));
    }
    Ok(())
}

fn v<T: Scalar>(x: i64, y: i64) -> Vec2<T> {
    Vec2::new(T::from_int(x), T::from_int(y))
}

fn half<T: Scalar>(a11: T, a12: T, a21: T, a22: T) -> Mat2<T> {
    Mat2::new(a11, a12, a21, a22).scale(T::from_ratio(1, 2))
}

/// `F_γ = (1/5) [[3γ + 4, 4γ − 3], [3, 4]]`.
pub fn boundary_matrix<T: Scalar>(gamma: &T) -> Mat2<T> {
    let g = gamma.clone();
    Mat2::new(
        T::from_int(3) * g.clone() + T::from_int(4),
        T::from_int(4) * g - T::from_int(3),
        T::from_int(3),
        T::from_int(4),
    )
    .scale(T::from_ratio(1, 5))
}

/// Cell name, vertices on the lattice, gradient and slip label.
type CellSpec<'a, T> = (&'static str, &'a [(i64, i64)], &'a Mat2<T>, SlipLabel);

/// Builds the construction for shear `γ`, `|γ| ≤ √3 − 1`.
pub fn build<T: Scalar>(gamma: T) -> Result<ShearSquareBuild<T>> {
    build_rotated(gamma, Mat2::identity())
}

/// Builds the construction with every gradient replaced by `R ∇v`, which
/// moves the boundary matrix to `R F_γ`.
pub fn build_rotated<T: Scalar>(gamma: T, r: Mat2<T>) -> Result<ShearSquareBuild<T>> {
    check_gamma(&gamma)?;
    let g = gamma.clone();
    let n = |k: i64| T::from_int(k);
    let grad_s = Mat2::new(n(1), g.clone(), n(0), n(1));
    let grad_t15 = half(n(1) + g.clone(), n(3) * g.clone() - n(1), n(1), n(3));
    let grad_t37 = half(n(3) + g.clone(), g.clone() - n(1), n(1), n(1));
    let grad_t26 = half(n(1) + n(3) * g.clone(), g.clone() - n(1), n(3), n(1));
    let grad_t48 = half(n(1) + g.clone(), g.clone() - n(3), n(1), n(1));

    use SlipLabel::{E1, E2};
    let spec: [CellSpec<T>; 9] = [
        ("S", &[(1, 1), (2, 0), (3, 1), (2, 2)], &grad_s, E1),
        ("T1", &[(0, 0), (2, 0), (1, 1)], &grad_t15, E1),
        ("T2", &[(0, 0), (1, 1), (1, 3)], &grad_t26, E2),
        ("T3", &[(1, 1), (2, 2), (1, 3)], &grad_t37, E2),
        ("T4", &[(1, 3), (2, 2), (4, 2)], &grad_t48, E1),
        ("T5", &[(2, 2), (3, 1), (4, 2)], &grad_t15, E1),
        ("T6", &[(4, 2), (3, 1), (3, -1)], &grad_t26, E2),
        ("T7", &[(2, 0), (3, -1), (3, 1)], &grad_t37, E2),
        ("T8", &[(0, 0), (3, -1), (2, 0)], &grad_t48, E1),
    ];
    let cells = spec
        .iter()
        .map(|(name, pts, grad, label)| Cell {
            name,
            vertices: pts.iter().map(|&(x, y)| v(x, y)).collect(),
            grad: r.clone() * (*grad).clone(),
            shift: Vec2::zero(),
            label: *label,
        })
        .collect();
    let mut map = PwAffineMap { cells };
    fix_translations(&mut map);
    Ok(ShearSquareBuild {
        f_gamma: r * boundary_matrix(&gamma),
        gamma,
        map,
    })
}

/// Propagates translations from the first cell through shared edges, then
/// shifts everything so that `v(0, 0) = 0`.
fn fix_translations<T: Scalar>(map: &mut PwAffineMap<T>) {
    let links = map.interfaces();
    let mut done = vec![false; map.cells.len()];
    done[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for e in &links {
            let (a, b) = e.cells;
            let j = if a == i {
                b
            } else if b == i {
                a
            } else {
                continue;
            };
            if done[j] {
                continue;
            }
            // A_j p + b_j = A_i p + b_i at a shared vertex p
            let here = map.cells[i].eval(&e.p);
            map.cells[j].shift = here - map.cells[j].grad.mul_vec(&e.p);
            done[j] = true;
            queue.push_back(j);
        }
    }
    let origin: Vec2<T> = Vec2::zero();
    let anchor = map
        .cells
        .iter()
        .find(|c| c.vertices.contains(&origin))
        .map(|c| c.eval(&origin))
        .unwrap_or_else(Vec2::zero);
    for c in &mut map.cells {
        c.shift = c.shift.clone() - anchor.clone();
    }
}

fn vec_eq<T: Scalar>(a: &Vec2<T>, b: &Vec2<T>, tol: f64) -> bool {
    (a.x.clone() - b.x.clone()).near_zero(tol) && (a.y.clone() - b.y.clone()).near_zero(tol)
}

fn mat_eq<T: Scalar>(a: &Mat2<T>, b: &Mat2<T>, tol: f64) -> bool {
    (a.clone() - b.clone())
        .entries()
        .iter()
        .all(|e| e.near_zero(tol))
}

/// Runs all checks. Exact scalars are compared exactly; doubles within `1e-12`.
pub fn verify<T: Scalar>(b: &ShearSquareBuild<T>) -> VerificationReport {
    let tol = 1e-12;
    let cells = &b.map.cells;
    let links = b.map.interfaces();

    let continuity = links.iter().all(|e| {
        let (c1, c2) = (&cells[e.cells.0], &cells[e.cells.1]);
        vec_eq(&c1.eval(&e.p), &c2.eval(&e.p), tol) && vec_eq(&c1.eval(&e.q), &c2.eval(&e.q), tol)
    });

    let det_one = cells
        .iter()
        .all(|c| (c.grad.det() - T::one()).near_zero(tol));

    let membership = cells.iter().all(|c| {
        let s = c.label.direction::<T>();
        c.grad.mul_vec(&s).norm_sq().at_most(&T::one(), tol)
    });

    let quarter = |p: &Vec2<T>, q: &Vec2<T>, num: i64| {
        p.clone() + (q.clone() - p.clone()).scale(T::from_ratio(num, 4))
    };
    let boundary_trace = b.map.boundary_edges().iter().all(|(i, p, q)| {
        [p.clone(), q.clone(), quarter(p, q, 1), quarter(p, q, 3)]
            .iter()
            .all(|x| vec_eq(&cells[*i].eval(x), &b.f_gamma.mul_vec(x), tol))
    });

    let rank_one_jumps = links.iter().all(|e| {
        let jump = cells[e.cells.0].grad.clone() - cells[e.cells.1].grad.clone();
        let tangent = e.q.clone() - e.p.clone();
        vec_eq(&jump.mul_vec(&tangent), &Vec2::zero(), tol)
    });

    let average_gradient = mat_eq(&b.map.average_gradient(), &b.f_gamma, tol);

    VerificationReport {
        continuity,
        det_one,
        membership,
        boundary_trace,
        rank_one_jumps,
        average_gradient,
        interfaces: links.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    /// The textures `{0, π/2}` give the Taylor bound `SO(2)`.
    pub taylor_trivial: bool,
    pub f_in_so2: bool,
    /// `F_γ` is attainable yet outside the Taylor bound.
    pub separates: bool,
}

pub fn conclusion<T: Scalar>(gamma: T) -> Result<Conclusion> {
    check_gamma(&gamma)?;
    let angles = normalize(&[0.0, std::f64::consts::FRAC_PI_2]).expect("two angles");
    let taylor_trivial = is_trivial(&angles);
    let f = boundary_matrix(&gamma);
    let f_in_so2 = mat_eq(&(f.transpose() * f.clone()), &Mat2::identity(), 1e-12)
        && (f.det() - T::one()).near_zero(1e-12);
    Ok(Conclusion {
        taylor_trivial,
        f_in_so2,
        separates: taylor_trivial && !f_in_so2,
    })
}

fn xy<T: Scalar>(p: &Vec2<T>) -> [f64; 2] {
    [p.x.to_f64(), p.y.to_f64()]
}

fn rows<T: Scalar>(m: &Mat2<T>) -> [[f64; 2]; 2] {
    let f = m.to_f64();
    [[f.a11, f.a12], [f.a21, f.a22]]
}

/// Reference and deformed cells as JSON.
pub fn mesh_json<T: Scalar>(b: &ShearSquareBuild<T>) -> Value {
    let cells: Vec<Value> = b
        .map
        .cells
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "slip": c.label,
                "reference": c.vertices.iter().map(xy).collect::<Vec<_>>(),
                "deformed": c.vertices.iter().map(|p| xy(&c.eval(p))).collect::<Vec<_>>(),
                "gradient": rows(&c.grad),
                "translation": xy(&c.shift),
            })
        })
        .collect();
    json!({
        "gamma": b.gamma.to_f64(),
        "F": rows(&b.f_gamma),
        "cells": cells,
    })
}

/// Side-by-side SVG of the reference (left) and deformed (right) cells,
/// coloured by slip direction, with the y axis pointing up.
pub fn render_svg<T: Scalar>(b: &ShearSquareBuild<T>) -> String {
    const PANEL: f64 = 400.0;
    const MARGIN: f64 = 20.0;
    let reference: Vec<Vec<[f64; 2]>> = b
        .map
        .cells
        .iter()
        .map(|c| c.vertices.iter().map(xy).collect())
        .collect();
    let deformed: Vec<Vec<[f64; 2]>> = b
        .map
        .cells
        .iter()
        .map(|c| c.vertices.iter().map(|p| xy(&c.eval(p))).collect())
        .collect();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}" width="{}" height="{}">"#,
        2.0 * PANEL,
        PANEL,
        2.0 * PANEL,
        PANEL
    );
    for (k, polys) in [reference, deformed].iter().enumerate() {
        let pts = polys.iter().flatten();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in pts {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        let scale = (PANEL - 2.0 * MARGIN) / (x1 - x0).max(y1 - y0);
        let ox = k as f64 * PANEL + MARGIN;
        let _ = writeln!(
            svg,
            r#"  <g id="{}">"#,
            if k == 0 { "reference" } else { "deformed" }
        );
        for (poly, cell) in polys.iter().zip(&b.map.cells) {
            let colour = match cell.label {
                SlipLabel::E1 => "#f28e2b",
                SlipLabel::E2 => "#4e79a7",
            };
            let points: Vec<String> = poly
                .iter()
                .map(|p| {
                    format!(
                        "{:.4},{:.4}",
                        ox + (p[0] - x0) * scale,
                        PANEL - MARGIN - (p[1] - y0) * scale
                    )
                })
                .collect();
            let _ = writeln!(
                svg,
                r#"    <polygon points="{}" fill="{}" stroke="black" stroke-width="1"><title>{}</title></polygon>"#,
                points.join(" "),
                colour,
                cell.name
            );
        }
        svg.push_str("  </g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}
