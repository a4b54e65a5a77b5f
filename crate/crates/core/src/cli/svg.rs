//! SVG rendering of the image of the unit circle.
//!
//! The sample set always contains every cone boundary, so each polyline
//! segment joins two images from the same cone. Such a segment turns by
//! less than a half-turn around the origin, and the winding number read
//! back from the polyline equals the degree of the map.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::angles::{normalize_angle, Direction};
use crate::linalg::Vec2;
use crate::pwlmap::PwlMap2;

pub const MIN_SAMPLES: usize = 64;
pub const DEFAULT_SAMPLES: usize = 2048;

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("at least {MIN_SAMPLES} samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Sample angles on the circle: a uniform grid merged with the cone starts.
pub fn sample_angles(g: &PwlMap2, samples: usize) -> Vec<f64> {
    let mut angles: Vec<f64> = (0..samples)
        .map(|j| TAU * j as f64 / samples as f64)
        .chain(
            g.pieces()
                .iter()
                .map(|p| normalize_angle(p.sector.start().angle())),
        )
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    angles
}

fn radial(p: Vec2, r_min: f64, r_max: f64) -> Vec2 {
    let r = p.norm();
    if r == 0.0 {
        return p;
    }
    let scaled = 0.25 + (1.0 + r / r_min).ln() / (1.0 + r_max / r_min).ln();
    (scaled / r) * p
}

/// Closed image polyline, optionally with the log-radial compression that
/// keeps very anisotropic maps readable. The mapping preserves directions,
/// so it leaves the winding number unchanged.
pub fn image_polyline(g: &PwlMap2, log_radial: bool, samples: usize) -> Vec<Vec2> {
    let raw: Vec<Vec2> = sample_angles(g, samples)
        .into_iter()
        .map(|t| {
            let d = Direction::from_angle(t);
            g.evaluate(Vec2::new(d.x(), d.y()))
        })
        .collect();
    let mut pts = if log_radial {
        let r_min = raw.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
        let r_max = raw.iter().map(|p| p.norm()).fold(0.0, f64::max);
        raw.iter().map(|&p| radial(p, r_min, r_max)).collect()
    } else {
        raw
    };
    pts.push(pts[0]);
    pts
}

pub fn svg_string(g: &PwlMap2, log_radial: bool, samples: usize) -> Result<String, SvgError> {
    if samples < MIN_SAMPLES {
        return Err(SvgError::TooFewSamples(samples));
    }
    let pts = image_polyline(g, log_radial, samples);
    let markers: Vec<Vec2> = if log_radial {
        // Markers are the polyline vertices at the cone starts.
        let angles = sample_angles(g, samples);
        g.pieces()
            .iter()
            .map(|p| {
                let a = normalize_angle(p.sector.start().angle());
                let k = angles
                    .iter()
                    .position(|&t| (t - a).abs() < 1e-15)
                    .expect("cone starts are sampled");
                pts[k]
            })
            .collect()
    } else {
        g.pieces()
            .iter()
            .map(|p| {
                let d = p.sector.start();
                g.evaluate(Vec2::new(d.x(), d.y()))
            })
            .collect()
    };

    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in &pts {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let margin = 0.05 * span;
    let (vx, vy) = (x0 - margin, -y1 - margin);
    let (vw, vh) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let stroke = 0.003 * span;
    let dot = 0.01 * span;
    let font = 0.04 * span;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vx} {vy} {vw} {vh}" width="640" height="640">"#
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(
        s,
        r##"<line class="axis" x1="{}" y1="0" x2="{}" y2="0" stroke="#999" stroke-width="{stroke}"/>"##,
        x0 - margin,
        x1 + margin
    );
    let _ = writeln!(
        s,
        r##"<line class="axis" x1="0" y1="{}" x2="0" y2="{}" stroke="#999" stroke-width="{stroke}"/>"##,
        y0 - margin,
        y1 + margin
    );
    let points: Vec<String> = pts.iter().map(|p| format!("{},{}", p.x, p.y)).collect();
    let _ = writeln!(
        s,
        r#"<polyline id="image" fill="none" stroke="black" stroke-width="{stroke}" points="{}"/>"#,
        points.join(" ")
    );
    for p in &markers {
        let _ = writeln!(
            s,
            r#"<circle class="marker" cx="{}" cy="{}" r="{dot}" fill="red"/>"#,
            p.x, p.y
        );
    }
    let _ = writeln!(s, "</g>");
    for (i, p) in markers.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="{font}">G(P{})</text>"#,
            p.x + dot,
            -p.y - dot,
            i + 1
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

pub fn render_svg(
    g: &PwlMap2,
    path: &Path,
    log_radial: bool,
    samples: usize,
) -> Result<(), SvgError> {
    let s = svg_string(g, log_radial, samples)?;
    std::fs::write(path, s).map_err(|source| SvgError::Io {
        path: path.display().to_string(),
        source,
    })
}
