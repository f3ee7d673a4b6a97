//! Rasterized plots of the regions `Λ_θ` in the `(β, γ)` plane.

use std::fmt::Write as _;

use polyslip::taylor::LambdaRegion;
use polyslip::{gamma_bounds, in_lambda, Result};
use serde_json::{json, Value};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2",
];

/// One region sampled on a `grid × grid` raster.
pub struct RegionRaster {
    pub theta: f64,
    pub beta_min: f64,
    /// Per β column: the filled γ runs, as `(first, last)` row indices.
    pub runs: Vec<Vec<(usize, usize)>>,
    pub filled: usize,
    /// `(β, γ₋, γ₊)` along `[sin θ, 1]`.
    pub boundary: Vec<(f64, f64, f64)>,
}

pub struct LambdaPlot {
    pub grid: usize,
    pub beta_range: (f64, f64),
    pub gamma_range: (f64, f64),
    pub regions: Vec<RegionRaster>,
}

fn boundary_curve(theta: f64, grid: usize) -> Result<Vec<(f64, f64, f64)>> {
    let lo = theta.sin();
    if 1.0 - lo < 1e-12 {
        let (gm, gp) = gamma_bounds(theta, 1.0)?;
        return Ok(vec![(1.0, gm, gp)]);
    }
    (0..=grid)
        .map(|i| {
            let beta = lo + (1.0 - lo) * i as f64 / grid as f64;
            let (gm, gp) = gamma_bounds(theta, beta)?;
            Ok((beta, gm, gp))
        })
        .collect()
}

/// Samples every region on a shared `(β, γ)` window that contains all of them.
pub fn lambda_plot(thetas: &[f64], grid: usize, tol: f64) -> Result<LambdaPlot> {
    let regions: Vec<LambdaRegion> = thetas
        .iter()
        .map(|&t| LambdaRegion::new(t))
        .collect::<Result<_>>()?;
    let curves: Vec<_> = thetas
        .iter()
        .map(|&t| boundary_curve(t, grid))
        .collect::<Result<_>>()?;

    let beta_min = regions.iter().map(|r| r.beta_range().0).fold(1.0, f64::min);
    let (mut g_lo, mut g_hi) = (0.0f64, 0.0f64);
    for c in &curves {
        for &(_, gm, gp) in c {
            g_lo = g_lo.min(gm);
            g_hi = g_hi.max(gp);
        }
    }
    let pad_b = 0.05 * (1.0 - beta_min).max(0.1);
    let pad_g = 0.05 * (g_hi - g_lo).max(1.0);
    let beta_range = (beta_min - pad_b, 1.0 + pad_b);
    let gamma_range = (g_lo - pad_g, g_hi + pad_g);

    let cell = |i: usize, (lo, hi): (f64, f64)| lo + (hi - lo) * (i as f64 + 0.5) / grid as f64;
    let rasters = regions
        .iter()
        .zip(curves)
        .map(|(region, boundary)| {
            let mut filled = 0;
            let runs = (0..grid)
                .map(|i| {
                    let beta = cell(i, beta_range);
                    let mut col = Vec::new();
                    let mut start = None;
                    for j in 0..=grid {
                        let inside =
                            j < grid && in_lambda(region.theta, beta, cell(j, gamma_range), tol);
                        match (inside, start) {
                            (true, None) => start = Some(j),
                            (false, Some(s)) => {
                                col.push((s, j - 1));
                                filled += j - s;
                                start = None;
                            }
                            _ => {}
                        }
                    }
                    col
                })
                .collect();
            RegionRaster {
                theta: region.theta,
                beta_min: region.beta_range().0,
                runs,
                filled,
                boundary,
            }
        })
        .collect();
    Ok(LambdaPlot {
        grid,
        beta_range,
        gamma_range,
        regions: rasters,
    })
}

impl LambdaPlot {
    fn x(&self, beta: f64) -> f64 {
        let (lo, hi) = self.beta_range;
        MARGIN + (beta - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN)
    }

    /// y grows upwards in plot coordinates.
    fn y(&self, gamma: f64) -> f64 {
        let (lo, hi) = self.gamma_range;
        HEIGHT - MARGIN - (gamma - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN)
    }

    pub fn svg(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
        );
        let _ = writeln!(
            s,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let (b0, b1) = self.beta_range;
        let (g0, g1) = self.gamma_range;
        let db = (b1 - b0) / self.grid as f64;
        let dg = (g1 - g0) / self.grid as f64;
        for (k, r) in self.regions.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let _ = writeln!(s, r#"<g fill="{color}" fill-opacity="0.35" stroke="none">"#);
            for (i, col) in r.runs.iter().enumerate() {
                let beta = b0 + i as f64 * db;
                for &(first, last) in col {
                    let top = self.y(g0 + (last + 1) as f64 * dg);
                    let bottom = self.y(g0 + first as f64 * dg);
                    let _ = writeln!(
                        s,
                        r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
                        self.x(beta),
                        top,
                        self.x(beta + db) - self.x(beta),
                        bottom - top
                    );
                }
            }
            let _ = writeln!(s, "</g>");
            if r.boundary.len() == 1 {
                let (beta, gm, _) = r.boundary[0];
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="{color}"/>"#,
                    self.x(beta),
                    self.y(gm)
                );
            } else {
                // γ₋ forward then γ₊ backward closes the outline
                let pts: Vec<String> = r
                    .boundary
                    .iter()
                    .map(|&(b, gm, _)| (b, gm))
                    .chain(r.boundary.iter().rev().map(|&(b, _, gp)| (b, gp)))
                    .map(|(b, g)| format!("{:.3},{:.3}", self.x(b), self.y(g)))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polygon points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    pts.join(" ")
                );
            }
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" font-size="14" fill="{color}">θ = {:.4}</text>"#,
                WIDTH - MARGIN - 110.0,
                MARGIN + 20.0 * k as f64,
                r.theta
            );
        }
        // axes through γ = 0 and β = 1
        let _ = writeln!(
            s,
            r#"<g stroke="black" stroke-width="1"><line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/><line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/></g>"#,
            self.x(b0),
            self.y(0.0),
            self.x(b1),
            self.y(0.0),
            self.x(1.0),
            self.y(g0),
            self.x(1.0),
            self.y(g1)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="16">β</text><text x="{:.1}" y="{:.1}" font-size="16">γ</text>"#,
            WIDTH - MARGIN + 10.0,
            self.y(0.0) + 5.0,
            self.x(1.0) - 5.0,
            MARGIN - 10.0
        );
        s.push_str("</svg>\n");
        s
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.regions
            .iter()
            .flat_map(|r| {
                r.boundary.iter().map(move |&(b, gm, gp)| {
                    vec![
                        r.theta.to_string(),
                        b.to_string(),
                        gm.to_string(),
                        gp.to_string(),
                    ]
                })
            })
            .collect()
    }

    /// The angle of each row of [`Self::csv_rows`].
    pub fn row_thetas(&self) -> impl Iterator<Item = f64> + '_ {
        self.regions
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.theta, r.boundary.len()))
    }

    pub fn json(&self) -> Value {
        let regions: Vec<Value> = self
            .regions
            .iter()
            .map(|r| {
                let (gm, gp) = r
                    .boundary
                    .last()
                    .map(|&(_, a, b)| (a, b))
                    .unwrap_or((0.0, 0.0));
                json!({
                    "theta": r.theta,
                    "beta_min": r.beta_min,
                    "beta_max": 1.0,
                    "gamma_at_one": [gm, gp],
                    "filled_cells": r.filled,
                    "degenerate": r.boundary.len() == 1,
                })
            })
            .collect();
        json!({
            "grid": self.grid,
            "beta_range": [self.beta_range.0, self.beta_range.1],
            "gamma_range": [self.gamma_range.0, self.gamma_range.1],
            "regions": regions,
        })
    }
}
