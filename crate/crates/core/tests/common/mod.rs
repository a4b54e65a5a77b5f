//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the library's sweep, degree or inverse code: the
//! oracles only evaluate the map pointwise and do their own arithmetic.

#![allow(dead_code)]

use std::f64::consts::TAU;

use pwlinv::{PwlMap2, Vec2};

pub const ORACLE_SAMPLES: usize = 100_000;

/// Total turning of the closed polyline through `pts` around the origin,
/// in radians. Consecutive points must subtend less than a half-turn.
pub fn polyline_turning(pts: &[(f64, f64)]) -> f64 {
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let cross = a.0 * b.1 - a.1 * b.0;
        let dot = a.0 * b.0 + a.1 * b.1;
        total += cross.atan2(dot);
    }
    total
}

/// Winding number of `G(unit circle)` from a uniform sample of `samples`
/// points, before rounding.
pub fn dense_winding(g: &PwlMap2, samples: usize) -> f64 {
    let mut pts: Vec<(f64, f64)> = (0..samples)
        .map(|j| {
            let t = TAU * j as f64 / samples as f64;
            let y = g.evaluate(Vec2::new(t.cos(), t.sin()));
            (y.x, y.y)
        })
        .collect();
    pts.push(pts[0]);
    polyline_turning(&pts) / TAU
}

/// Degree of `g` by dense sampling of the image of the unit circle.
pub fn oracle_degree(g: &PwlMap2) -> i64 {
    let w = dense_winding(g, ORACLE_SAMPLES);
    let r = w.round();
    assert!(
        (w - r).abs() < 1e-3,
        "sampled winding {w} is not near an integer"
    );
    r as i64
}

/// Points of the `<polyline id="image" ...>` element of an SVG document.
pub fn svg_polyline(svg: &str) -> Vec<(f64, f64)> {
    let at = svg
        .find(r#"<polyline id="image""#)
        .expect("image polyline present");
    let rest = &svg[at..];
    let start = rest.find(r#"points=""#).expect("points attribute") + r#"points=""#.len();
    let end = start + rest[start..].find('"').expect("closing quote");
    rest[start..end]
        .split_whitespace()
        .map(|pair| {
            let (x, y) = pair.split_once(',').expect("x,y pair");
            (x.parse().expect("x"), y.parse().expect("y"))
        })
        .collect()
}

/// Relative distance between two points.
pub fn rel_err(a: Vec2, b: Vec2) -> f64 {
    let d = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
    d / (b.x.hypot(b.y)).max(1e-300)
}

/// Point on the circle of radius `r` at angle `t`.
pub fn polar(r: f64, t: f64) -> Vec2 {
    Vec2::new(r * t.cos(), r * t.sin())
}
