//! SVG 1.1 output for `Γ_n` and `D_3`.
//!
//! Geometry here is cosmetic; the caption is always the exact crossing count.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::arc_diagram::{build_gamma, count_crossings, HalfPlane};
use crate::error::{check_range, Result};
use crate::folded_upper::{count_segment_crossings, d3_base_drawing};

/// Largest `n` accepted by [`gamma_svg`].
pub const MAX_RENDER_DIM: u32 = 8;

const SPACING: f64 = 48.0;
const MARGIN: f64 = 40.0;

const PALETTE: [&str; 9] = [
    "#444444", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
        w = width,
        h = height
    );
    let _ = writeln!(out, "  <title>{title}</title>");
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
}

fn vertex(out: &mut String, x: f64, y: f64, label: &str, dx: f64, dy: f64) {
    let _ = writeln!(out, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/>"#);
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="10" text-anchor="middle">{label}</text>"#,
        x + dx,
        y + dy
    );
}

fn caption(out: &mut String, x: f64, y: f64, text: &str) {
    let _ = writeln!(
        out,
        r#"  <text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="14">{text}</text>"#
    );
}

/// `Γ_n` as an arc diagram: vertices on a horizontal axis, each segment a
/// half-ellipse whose height grows with its span.
pub fn gamma_svg(n: u32) -> Result<String> {
    check_range("render dimension", n, 1, MAX_RENDER_DIM)?;
    let d = build_gamma(n)?;
    let crossings = count_crossings(&d).total;
    let count = 1u64 << n;
    let width = 2.0 * MARGIN + (count - 1) as f64 * SPACING;
    let max_rise = 0.35 * (count / 2) as f64 * SPACING + 10.0;
    let axis = MARGIN + max_rise;
    let height = axis + max_rise + MARGIN + 20.0;
    let px = |x: f64| MARGIN + x * SPACING;

    let mut out = String::new();
    header(&mut out, width, height, &format!("Gamma_{n}"));
    let _ = writeln!(
        out,
        r##"  <line x1="{:.2}" y1="{axis:.2}" x2="{:.2}" y2="{axis:.2}" stroke="#bbbbbb" stroke-dasharray="3,3"/>"##,
        MARGIN / 2.0,
        width - MARGIN / 2.0
    );
    for s in d.segments() {
        let x1 = px(s.left.to_f64().unwrap_or(0.0));
        let x2 = px(s.right.to_f64().unwrap_or(0.0));
        let rx = (x2 - x1) / 2.0;
        let ry = 0.35 * (x2 - x1) + 6.0;
        let sweep = match s.half {
            HalfPlane::Upper => 1,
            HalfPlane::Lower => 0,
        };
        let color = PALETTE[d.edges()[s.edge].dim() as usize % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"  <path d="M {x1:.2} {axis:.2} A {rx:.2} {ry:.2} 0 0 {sweep} {x2:.2} {axis:.2}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
        );
    }
    for v in d.vertices() {
        vertex(&mut out, px(d.position(&v) as f64), axis, &v.to_string(), 0.0, 16.0);
    }
    caption(&mut out, MARGIN, height - 12.0, &format!("crossings = {crossings}"));
    out.push_str("</svg>\n");
    Ok(out)
}

/// `D_3` in its two-axis straight-line layout.
pub fn d3_svg() -> Result<String> {
    let d = d3_base_drawing();
    let crossings = count_segment_crossings(&d)?.total;
    let unit = 70.0;
    let size = 2.0 * MARGIN + 4.0 * unit + 40.0;
    let c = size / 2.0;
    let at = |p: &(num_rational::BigRational, num_rational::BigRational)| {
        (
            c + p.0.to_f64().unwrap_or(0.0) * unit,
            c - p.1.to_f64().unwrap_or(0.0) * unit,
        )
    };
    let mut out = String::new();
    header(&mut out, size, size + 30.0, "D_3");
    for (u, v) in &d.edges {
        let (x1, y1) = at(&d.points[u]);
        let (x2, y2) = at(&d.points[v]);
        let color = if u.complement() == *v { "#d62728" } else { "#1f77b4" };
        let _ = writeln!(
            out,
            r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="1.5"/>"#
        );
    }
    for (v, p) in &d.points {
        let (x, y) = at(p);
        vertex(&mut out, x, y, &v.to_string(), 14.0, -8.0);
    }
    caption(&mut out, MARGIN, size + 10.0, &format!("crossings = {crossings}"));
    out.push_str("</svg>\n");
    Ok(out)
}
