//! SVG drawings of laminations.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::error::{Result, TautError};

use super::{Lamination, PinchResult};

pub const DEFAULT_RENDER_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderStyle {
    /// Draw leaves as hyperbolic geodesics instead of straight chords.
    pub geodesic: bool,
    /// Width and height of the document in pixels.
    pub size: u32,
    pub max_chords: usize,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            geodesic: true,
            size: 800,
            max_chords: DEFAULT_RENDER_CAP,
        }
    }
}

const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

struct Frame {
    c: f64,
    r: f64,
}

impl Frame {
    /// Screen coordinates of the point at `turns` of a full turn,
    /// counterclockwise from the positive x axis.
    fn at(&self, turns: f64, radius: f64) -> (f64, f64) {
        let t = 2.0 * PI * turns;
        (self.c + radius * t.cos(), self.c - radius * t.sin())
    }
}

/// Renders the leaves of `lam` and, when given, colors the boundary arcs of
/// each pinched component by its length class.
pub fn render_svg(
    lam: &Lamination,
    result: Option<&PinchResult>,
    style: &RenderStyle,
) -> Result<String> {
    let chords = lam.chord_count();
    if chords > style.max_chords {
        return Err(TautError::BudgetExceeded {
            what: "rendered chords",
            requested: chords as u128,
            cap: style.max_chords as u128,
        });
    }
    let size = style.size.max(16) as f64;
    let frame = Frame {
        c: size / 2.0,
        r: size / 2.0 - 12.0,
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = style.size.max(16)
    );
    let _ = writeln!(out, "<title>q={} depth={}</title>", lam.q(), lam.depth());
    let _ = writeln!(
        out,
        r#"<circle cx="{c:.3}" cy="{c:.3}" r="{r:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        c = frame.c,
        r = frame.r
    );

    if let Some(result) = result {
        let grid = (result.q as f64).powi(result.scale as i32);
        let _ = writeln!(out, r#"<g fill="none" stroke-width="4">"#);
        for (len, comp) in result.lengths.iter().zip(&result.components) {
            let class = 63 - len.max(&1).leading_zeros() as usize;
            let color = PALETTE[class.min(PALETTE.len() - 1)];
            for &(a, b) in &comp.arcs {
                if a == b {
                    continue;
                }
                let ring = frame.r + 5.0;
                let (x1, y1) = frame.at(a as f64 / grid, ring);
                let (x2, y2) = frame.at(b as f64 / grid, ring);
                let large = u8::from((b - a) as f64 / grid > 0.5);
                if b - a == grid as u64 {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{c:.3}" cy="{c:.3}" r="{ring:.3}" stroke="{color}"/>"#,
                        c = frame.c
                    );
                } else {
                    // increasing turns run counterclockwise on screen: sweep 0
                    let _ = writeln!(
                        out,
                        r#"<path d="M {x1:.3} {y1:.3} A {ring:.3} {ring:.3} 0 {large} 0 {x2:.3} {y2:.3}" stroke="{color}"/>"#
                    );
                }
            }
        }
        let _ = writeln!(out, "</g>");
    }

    let depth = lam.depth().max(1);
    let _ = writeln!(out, r#"<g fill="none" stroke-linecap="round">"#);
    for chord in lam.chords() {
        let (a, b) = chord.endpoints();
        let (t1, t2) = (a.turns(), b.turns());
        let shade = if depth == 1 {
            0
        } else {
            (chord.depth - 1) * 180 / (depth - 1)
        };
        let width = 1.6 / (1.0 + 0.35 * (chord.depth - 1) as f64);
        let (x1, y1) = frame.at(t1, frame.r);
        let (x2, y2) = frame.at(t2, frame.r);
        let d = if style.geodesic {
            geodesic_path(&frame, t1, t2)
        } else {
            format!("M {x1:.3} {y1:.3} L {x2:.3} {y2:.3}")
        };
        let _ = writeln!(
            out,
            r#"<path d="{d}" stroke="rgb({shade},{shade},{shade})" stroke-width="{width:.3}"/>"#
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

/// Arc of the circle orthogonal to the boundary through two boundary points.
fn geodesic_path(frame: &Frame, t1: f64, t2: f64) -> String {
    // walk from the endpoint where the shorter boundary arc starts
    let mut delta = (t2 - t1).rem_euclid(1.0);
    let (start, end) = if delta <= 0.5 {
        (t1, t2)
    } else {
        delta = 1.0 - delta;
        (t2, t1)
    };
    let (x1, y1) = frame.at(start, frame.r);
    let (x2, y2) = frame.at(end, frame.r);
    if (delta - 0.5).abs() < 1e-12 {
        return format!("M {x1:.3} {y1:.3} L {x2:.3} {y2:.3}");
    }
    let radius = frame.r * (PI * delta).tan();
    // the geodesic bows toward the center: clockwise on screen, sweep 1
    format!("M {x1:.3} {y1:.3} A {radius:.3} {radius:.3} 0 0 1 {x2:.3} {y2:.3}")
}
