//! Images of sectors under a single linear map, and the signed angle they sweep.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use super::MapError;
use crate::angles::{signed_angle, Direction, Sector};
use crate::linalg::{Mat2, Vec2};

/// Shape class of the image cone of a nonsingular linear map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ImageClass {
    StrictlyConvex,
    ContainsHalfPlane,
}

const MAX_DEPTH: u32 = 64;

/// Signed angle swept by the direction of `l * e^{i t}` as `t` runs from
/// `start_angle` to `start_angle + width`.
///
/// The arc is first cut into pieces no wider than a quarter turn (so each
/// true image sweep is below `pi`), then each piece is bisected until its two
/// image directions are less than a quarter turn apart. Each leaf contributes
/// the signed angle between its endpoint images, which is then unambiguous.
pub fn arc_sweep(l: &Mat2, start_angle: f64, width: f64) -> Result<f64, MapError> {
    if l.is_singular() {
        return Err(MapError::SingularMatrix);
    }
    if !(width >= 0.0) || width > TAU {
        return Err(MapError::InvalidArgument(format!("arc width {width}")));
    }
    let chunks = (width / FRAC_PI_2).ceil().max(1.0) as usize;
    let h = width / chunks as f64;
    let image = |t: f64| l.apply(Vec2::from(Direction::from_angle(t)));
    let mut total = 0.0;
    let mut a = start_angle;
    let mut pa = image(a);
    for k in 1..=chunks {
        let b = if k == chunks {
            start_angle + width
        } else {
            start_angle + k as f64 * h
        };
        let pb = image(b);
        total += bisect(l, a, b, pa, pb, 0);
        a = b;
        pa = pb;
    }
    Ok(total)
}

fn bisect(l: &Mat2, a: f64, b: f64, pa: Vec2, pb: Vec2, depth: u32) -> f64 {
    let d = signed_angle(pa.as_tuple(), pb.as_tuple());
    if d.abs() < FRAC_PI_2 || depth >= MAX_DEPTH {
        return d;
    }
    let m = 0.5 * (a + b);
    let pm = l.apply(Vec2::from(Direction::from_angle(m)));
    bisect(l, a, m, pa, pm, depth + 1) + bisect(l, m, b, pm, pb, depth + 1)
}

/// Signed sweep of `l` over the arc of `s`; the sign is that of `det l`.
pub fn sweep(l: &Mat2, s: &Sector) -> Result<f64, MapError> {
    if l.is_singular() {
        return Err(MapError::SingularMatrix);
    }
    let start = s.start().angle();
    let w = s.width();
    if s.is_full() {
        return arc_sweep(l, start, TAU);
    }
    // Pin the last leaf to the sector's own end ray (exact when available).
    let end = s.end();
    let lead = (w - FRAC_PI_2).max(0.0);
    let head = if lead > 0.0 {
        arc_sweep(l, start, lead)?
    } else {
        0.0
    };
    let from = l.apply(Vec2::from(Direction::from_angle(start + lead)));
    let to = l.apply(Vec2::from(end));
    let tail = bisect(l, start + lead, start + w, from, to, 0);
    Ok(head + tail)
}

/// Image cone `L(C)` of a proper sector, oriented counterclockwise.
///
/// For `det L > 0` the image starts at the image of the start ray; for
/// `det L < 0` orientation flips and it starts at the image of the end ray.
/// Its width is the magnitude of the sweep.
pub fn image_sector(l: &Mat2, s: &Sector) -> Result<(Sector, ImageClass), MapError> {
    if l.is_singular() {
        return Err(MapError::SingularMatrix);
    }
    if s.is_full() {
        return Err(MapError::InvalidArgument(
            "image_sector needs a proper sector".into(),
        ));
    }
    let sw = sweep(l, s)?;
    let from = if l.det() > 0.0 {
        l.apply(Vec2::from(s.start()))
    } else {
        l.apply(Vec2::from(s.end()))
    };
    let start = from.direction().ok_or(MapError::SingularMatrix)?;
    let class = if s.is_strictly_convex() {
        ImageClass::StrictlyConvex
    } else {
        ImageClass::ContainsHalfPlane
    };
    let sector = Sector::new(start.angle(), sw.abs())
        .map_err(|e| MapError::InvalidArgument(e.to_string()))?;
    Ok((sector, class))
}
