//! Reference polycrystals: the quadrant disk, disk bicrystals, the tilted
//! square with three grains, and disks cut by parallel chords.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use super::{BoundaryCurve, Grain, Polycrystal};
use crate::error::{domain, Result};
use crate::mat2::Vec2;

fn polygon(pts: &[(f64, f64)]) -> Vec<BoundaryCurve> {
    let v: Vec<Vec2> = pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
    (0..v.len())
        .map(|i| BoundaryCurve::segment(v[i], v[(i + 1) % v.len()]))
        .collect()
}

fn unit_circle() -> Vec<BoundaryCurve> {
    vec![BoundaryCurve::circle(Vec2::zero(), 1.0)]
}

/// Unit disk split into four quarter sectors centred on the axes: grain 1
/// on top, then 2 (left), 3 (bottom), 4 (right), with textures
/// `0, π/2, 0, π/2`.
pub fn quadrant_disk() -> Polycrystal {
    let thetas = [0.0, FRAC_PI_2, 0.0, FRAC_PI_2];
    let grains = (0..4)
        .map(|k| {
            let a = FRAC_PI_4 + k as f64 * FRAC_PI_2;
            let b = a + FRAC_PI_2;
            Grain {
                id: k + 1,
                boundary: vec![
                    BoundaryCurve::segment(Vec2::zero(), Vec2::from_angle(a)),
                    BoundaryCurve::arc(Vec2::zero(), 1.0, a, b, true),
                    BoundaryCurve::segment(Vec2::from_angle(b), Vec2::zero()),
                ],
                theta: thetas[k],
            }
        })
        .collect();
    Polycrystal::new(unit_circle(), grains).expect("quadrant disk is valid")
}

/// Unit disk cut along the horizontal diameter: grain 1 is the upper half
/// with texture `theta_upper`, grain 2 the lower half.
pub fn half_disk_bicrystal(theta_upper: f64, theta_lower: f64) -> Result<Polycrystal> {
    let left = Vec2::new(-1.0, 0.0);
    let right = Vec2::E1;
    Polycrystal::new(
        unit_circle(),
        vec![
            Grain {
                id: 1,
                boundary: vec![
                    BoundaryCurve::arc(Vec2::zero(), 1.0, 0.0, PI, true),
                    BoundaryCurve::segment(left, right),
                ],
                theta: theta_upper,
            },
            Grain {
                id: 2,
                boundary: vec![
                    BoundaryCurve::arc(Vec2::zero(), 1.0, PI, TAU, true),
                    BoundaryCurve::segment(right, left),
                ],
                theta: theta_lower,
            },
        ],
    )
}

/// The square with corners `(0,0), (3,−1), (4,2), (1,3)`: two triangular
/// grains `(0,0),(2,2),(1,3)` and `(2,0),(3,−1),(4,2)` with texture `π/2`,
/// and the remaining region with texture `0`.
pub fn tilted_square() -> Polycrystal {
    let domain = polygon(&[(0.0, 0.0), (3.0, -1.0), (4.0, 2.0), (1.0, 3.0)]);
    let grains = vec![
        Grain {
            id: 1,
            boundary: polygon(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (1.0, 3.0)]),
            theta: FRAC_PI_2,
        },
        Grain {
            id: 2,
            boundary: polygon(&[(2.0, 0.0), (3.0, -1.0), (4.0, 2.0), (3.0, 1.0)]),
            theta: FRAC_PI_2,
        },
        Grain {
            id: 3,
            boundary: polygon(&[
                (0.0, 0.0),
                (3.0, -1.0),
                (2.0, 0.0),
                (3.0, 1.0),
                (4.0, 2.0),
                (1.0, 3.0),
                (2.0, 2.0),
                (1.0, 1.0),
            ]),
            theta: 0.0,
        },
    ];
    Polycrystal::new(domain, grains).expect("tilted square is valid")
}

/// Unit disk cut by chords `{x · n = c}` with `n = (cos α, sin α)` at the
/// increasing offsets `c ∈ (−1, 1)`; strip `i` (counted along `n`) gets
/// texture `thetas[i]` and id `i + 1`.
pub fn chord_disk(alpha: f64, offsets: &[f64], thetas: &[f64]) -> Result<Polycrystal> {
    if thetas.len() != offsets.len() + 1 {
        return domain("need one texture per strip");
    }
    if offsets.iter().any(|c| !(*c > -1.0 && *c < 1.0)) || offsets.windows(2).any(|w| w[1] <= w[0])
    {
        return domain("chord offsets must be increasing and inside (-1, 1)");
    }
    // chord at offset c meets the circle at angles α ± acos(c)
    let half_angles: Vec<f64> = std::iter::once(PI)
        .chain(offsets.iter().map(|c| c.acos()))
        .chain(std::iter::once(0.0))
        .collect();
    let at = |phi: f64| Vec2::from_angle(phi);
    let grains = thetas
        .iter()
        .enumerate()
        .map(|(i, &theta)| {
            let (pa, pb) = (half_angles[i], half_angles[i + 1]);
            let lower_chord = i > 0;
            let upper_chord = i < offsets.len();
            let mut boundary = Vec::new();
            match (lower_chord, upper_chord) {
                (true, true) => {
                    boundary.push(BoundaryCurve::arc(
                        Vec2::zero(),
                        1.0,
                        alpha + pb,
                        alpha + pa,
                        true,
                    ));
                    boundary.push(BoundaryCurve::segment(at(alpha + pa), at(alpha - pa)));
                    boundary.push(BoundaryCurve::arc(
                        Vec2::zero(),
                        1.0,
                        alpha - pa,
                        alpha - pb,
                        true,
                    ));
                    boundary.push(BoundaryCurve::segment(at(alpha - pb), at(alpha + pb)));
                }
                (false, true) => {
                    boundary.push(BoundaryCurve::arc(
                        Vec2::zero(),
                        1.0,
                        alpha + pb,
                        alpha - pb,
                        true,
                    ));
                    boundary.push(BoundaryCurve::segment(at(alpha - pb), at(alpha + pb)));
                }
                (true, false) => {
                    boundary.push(BoundaryCurve::arc(
                        Vec2::zero(),
                        1.0,
                        alpha - pa,
                        alpha + pa,
                        true,
                    ));
                    boundary.push(BoundaryCurve::segment(at(alpha + pa), at(alpha - pa)));
                }
                (false, false) => boundary.push(BoundaryCurve::circle(Vec2::zero(), 1.0)),
            }
            Grain {
                id: i + 1,
                boundary,
                theta,
            }
        })
        .collect();
    Polycrystal::new(unit_circle(), grains)
}
