//! Seeded generator of continuous nondegenerate maps, for fuzzing.
//!
//! Cone boundaries are random rays `u_i`; each ray gets a random image
//! `r_i v_i`. On cone `i` the matrix is the unique linear map sending
//! `u_i -> r_i v_i` and `u_{i+1} -> r_{i+1} v_{i+1}`, so continuity holds by
//! construction. Two-piece maps are glued along a line instead, since two
//! antipodal rays do not determine a matrix.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MapError, Piece, PwlMap2};
use crate::angles::{normalize_angle, Direction, Sector};
use crate::linalg::{Mat2, Vec2};

/// Minimum angular separation between boundary rays, between image rays, and
/// between any cone width and a half turn.
pub const MIN_GAP: f64 = PI / 36.0;
pub const MAX_ATTEMPTS: usize = 10_000;
const SCALE_RANGE: (f64, f64) = (0.1, 10.0);

/// Restriction on the cone widths of generated maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeShape {
    Any,
    /// Every cone narrower than a half-plane.
    AllConvex,
    /// Exactly one cone wider than a half-plane.
    OneReflex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomMapConfig {
    pub n: usize,
    /// Image rays turn monotonically once around, forcing degree one.
    /// Otherwise image rays are independent and only the determinant signs
    /// are required to agree.
    pub force_invertible: bool,
    pub shape: ConeShape,
}

/// Random continuous nondegenerate map with `n` cones, deterministic in `seed`.
pub fn random_map(n: usize, seed: u64, force_invertible: bool) -> Result<PwlMap2, MapError> {
    random_map_with(
        &RandomMapConfig {
            n,
            force_invertible,
            shape: ConeShape::Any,
        },
        seed,
    )
}

pub fn random_map_with(cfg: &RandomMapConfig, seed: u64) -> Result<PwlMap2, MapError> {
    if cfg.n == 0 {
        return Err(MapError::InvalidArgument("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let candidate = match cfg.n {
            1 => single(&mut rng),
            2 => {
                if cfg.shape == ConeShape::OneReflex {
                    return Err(MapError::InvalidArgument(
                        "two half-planes have no reflex cone".into(),
                    ));
                }
                half_planes(&mut rng, cfg.force_invertible)
            }
            _ => fan(&mut rng, cfg),
        };
        if let Some(g) = candidate {
            return Ok(g);
        }
    }
    Err(MapError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}

fn scale(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(SCALE_RANGE.0..=SCALE_RANGE.1)
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.0..TAU)
}

fn ray(theta: f64) -> Vec2 {
    Vec2::from(Direction::from_angle(theta))
}

/// Distance of two ray angles from being parallel or antiparallel.
fn line_gap(a: f64, b: f64) -> f64 {
    let d = normalize_angle(b - a) % PI;
    d.min(PI - d)
}

/// Linear map sending `u1 -> w1`, `u2 -> w2`.
fn through(u1: Vec2, u2: Vec2, w1: Vec2, w2: Vec2) -> Option<Mat2> {
    let basis = Mat2::from_columns(u1, u2).inverse()?;
    Some(Mat2::from_columns(w1, w2) * basis)
}

fn same_nonzero_sign(ms: &[Mat2]) -> bool {
    let s = ms[0].det_sign();
    s != 0 && ms.iter().all(|m| m.det_sign() == s)
}

fn single(rng: &mut ChaCha8Rng) -> Option<PwlMap2> {
    let (b1, b2) = (angle(rng), angle(rng));
    if line_gap(b1, b2) < MIN_GAP {
        return None;
    }
    let m = Mat2::from_columns(scale(rng) * ray(b1), scale(rng) * ray(b2));
    if m.is_singular() {
        return None;
    }
    PwlMap2::validate(vec![Piece::new(Sector::full(angle(rng)), m)]).ok()
}

fn half_planes(rng: &mut ChaCha8Rng, force: bool) -> Option<PwlMap2> {
    let alpha = angle(rng);
    let u = ray(alpha);
    let normal = ray(alpha + FRAC_PI_2);
    let phi = angle(rng);
    let shared = scale(rng) * ray(phi);
    let (psi1, psi2) = if force {
        let span = PI - 2.0 * MIN_GAP;
        (
            phi + MIN_GAP + rng.gen_range(0.0..span),
            phi + PI + MIN_GAP + rng.gen_range(0.0..span),
        )
    } else {
        (angle(rng), angle(rng))
    };
    if line_gap(phi, psi1) < MIN_GAP || line_gap(phi, psi2) < MIN_GAP {
        return None;
    }
    let upper = through(u, normal, shared, scale(rng) * ray(psi1))?;
    let lower = through(u, -normal, shared, scale(rng) * ray(psi2))?;
    if !same_nonzero_sign(&[upper, lower]) {
        return None;
    }
    PwlMap2::validate(vec![
        Piece::new(Sector::new(alpha, PI).ok()?, upper),
        Piece::new(Sector::new(alpha + PI, PI).ok()?, lower),
    ])
    .ok()
}

/// Sorted random angles with the consecutive arc widths.
fn sorted_circle(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a: Vec<f64> = (0..n).map(|_| angle(rng)).collect();
    a.sort_by(f64::total_cmp);
    let widths = (0..n)
        .map(|i| {
            if i + 1 < n {
                a[i + 1] - a[i]
            } else {
                a[0] + TAU - a[i]
            }
        })
        .collect();
    (a, widths)
}

fn widths_ok(w: &[f64]) -> bool {
    w.iter().all(|&x| x >= MIN_GAP && (x - PI).abs() >= MIN_GAP)
}

fn fan(rng: &mut ChaCha8Rng, cfg: &RandomMapConfig) -> Option<PwlMap2> {
    let n = cfg.n;
    let (bounds, widths) = sorted_circle(rng, n);
    if !widths_ok(&widths) {
        return None;
    }
    let reflex = widths.iter().filter(|&&w| w > PI).count();
    match cfg.shape {
        ConeShape::Any => {}
        ConeShape::AllConvex if reflex != 0 => return None,
        ConeShape::OneReflex if reflex != 1 => return None,
        _ => {}
    }

    let images: Vec<f64> = if cfg.force_invertible {
        // image arcs must be reflex exactly where the cones are
        let (b, beta) = sorted_circle(rng, n);
        if !widths_ok(&beta)
            || beta
                .iter()
                .zip(&widths)
                .any(|(x, w)| (*x > PI) != (*w > PI))
        {
            return None;
        }
        b
    } else {
        let b: Vec<f64> = (0..n).map(|_| angle(rng)).collect();
        if (0..n).any(|i| line_gap(b[i], b[(i + 1) % n]) < MIN_GAP) {
            return None;
        }
        b
    };
    let radii: Vec<f64> = (0..n).map(|_| scale(rng)).collect();

    let mut mats = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        mats.push(through(
            ray(bounds[i]),
            ray(bounds[j]),
            radii[i] * ray(images[i]),
            radii[j] * ray(images[j]),
        )?);
    }
    if !same_nonzero_sign(&mats) {
        return None;
    }
    let pieces = (0..n)
        .map(|i| Some(Piece::new(Sector::new(bounds[i], widths[i]).ok()?, mats[i])))
        .collect::<Option<Vec<_>>>()?;
    PwlMap2::validate(pieces).ok()
}
