use std::f64::consts::{PI, TAU};

use num_rational::Ratio;

use super::{Degeneracy, MapError};
use crate::angles::{normalize_angle, Direction, Sector};
use crate::linalg::{Mat2, Vec2};
use crate::policy::NumericPolicy;

/// One sector of the fan and the matrix used on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub sector: Sector,
    pub matrix: Mat2,
}

impl Piece {
    pub fn new(sector: Sector, matrix: Mat2) -> Self {
        Piece { sector, matrix }
    }
}

/// Validated continuous strongly piecewise linear map of the plane.
///
/// Pieces are stored sorted counterclockwise by start angle, each ending
/// where the next begins.
#[derive(Clone, Debug, PartialEq)]
pub struct PwlMap2 {
    pieces: Vec<Piece>,
}

impl PwlMap2 {
    pub fn validate(pieces: Vec<Piece>) -> Result<Self, MapError> {
        Self::validate_with(pieces, &NumericPolicy::DEFAULT)
    }

    /// Sorts the pieces, then checks that the sectors tile the circle
    /// (exactly when every sector carries turn data) and that neighbouring
    /// matrices agree on every shared ray.
    pub fn validate_with(mut pieces: Vec<Piece>, policy: &NumericPolicy) -> Result<Self, MapError> {
        if pieces.is_empty() {
            return Err(MapError::Empty);
        }
        for (index, p) in pieces.iter().enumerate() {
            if p.sector.width() <= policy.partition_tol {
                return Err(MapError::EmptyInteriorCone {
                    index,
                    width: p.sector.width(),
                });
            }
            let m = p.matrix;
            if ![m.a11, m.a12, m.a21, m.a22].iter().all(|v| v.is_finite()) {
                return Err(MapError::InvalidArgument(format!(
                    "piece {index} has a non-finite matrix entry"
                )));
            }
        }

        let exact = pieces
            .iter()
            .all(|p| p.sector.exact_start().is_some() && p.sector.exact_width().is_some());
        if exact {
            pieces.sort_by_key(|p| p.sector.exact_start());
            check_exact_tiling(&pieces)?;
        } else {
            pieces.sort_by(|a, b| {
                a.sector
                    .start()
                    .angle()
                    .total_cmp(&b.sector.start().angle())
            });
            check_float_tiling(&pieces, policy)?;
        }

        let n = pieces.len();
        if n > 1 {
            for j in 0..n {
                let i = (j + n - 1) % n;
                let u = Vec2::from(pieces[j].sector.start());
                let a = pieces[i].matrix.apply(u);
                let b = pieces[j].matrix.apply(u);
                let mismatch = (a - b).norm();
                if !(mismatch <= policy.continuity_tol * a.norm().max(1.0)) {
                    return Err(MapError::DiscontinuousBoundary {
                        i,
                        j,
                        direction: u,
                        mismatch,
                    });
                }
            }
        }
        Ok(PwlMap2 { pieces })
    }

    /// A single linear map on the whole plane.
    pub fn linear(matrix: Mat2) -> Self {
        PwlMap2 {
            pieces: vec![Piece::new(Sector::full(0.0), matrix)],
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn n(&self) -> usize {
        self.pieces.len()
    }

    pub fn matrices(&self) -> Vec<Mat2> {
        self.pieces.iter().map(|p| p.matrix).collect()
    }

    pub fn determinants(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.matrix.det()).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.sector.width()).collect()
    }

    /// Index of the first piece whose sector contains `d`.
    pub fn piece_index(&self, d: &Direction) -> usize {
        if let Some(i) = self.pieces.iter().position(|p| p.sector.contains(d)) {
            return i;
        }
        // Only reachable through rounding at a seam: take the nearest sector.
        let dist = |p: &Piece| {
            let delta = normalize_angle(d.angle() - p.sector.start().angle());
            (delta - p.sector.width()).min(TAU - delta).max(0.0)
        };
        (0..self.pieces.len())
            .min_by(|&a, &b| dist(&self.pieces[a]).total_cmp(&dist(&self.pieces[b])))
            .unwrap_or(0)
    }

    pub fn evaluate(&self, x: Vec2) -> Vec2 {
        match x.direction() {
            None => Vec2::ZERO,
            Some(d) => self.pieces[self.piece_index(&d)].matrix.apply(x),
        }
    }

    /// Common sign of the determinants, or the reason there is none.
    pub fn nondegeneracy(&self) -> Result<i8, Degeneracy> {
        let mut sign = 0i8;
        for (index, p) in self.pieces.iter().enumerate() {
            let s = p.matrix.det_sign();
            if s == 0 {
                return Err(Degeneracy::SingularPiece { index });
            }
            if sign == 0 {
                sign = s;
            } else if s != sign {
                return Err(Degeneracy::MixedSigns);
            }
        }
        Ok(sign)
    }

    /// Directions of the boundary rays, one per piece (its start).
    pub fn boundary_directions(&self) -> Vec<Direction> {
        self.pieces.iter().map(|p| p.sector.start()).collect()
    }

    /// True when every sector is convex (width at most `pi`, up to `tol`).
    pub fn all_cones_convex(&self, tol: f64) -> bool {
        self.pieces.iter().all(|p| p.sector.is_convex(tol))
    }

    pub fn has_exact_angles(&self) -> bool {
        self.pieces.iter().all(|p| p.sector.exact_start().is_some())
    }
}

fn check_exact_tiling(pieces: &[Piece]) -> Result<(), MapError> {
    let n = pieces.len();
    let total: Ratio<i64> = pieces
        .iter()
        .map(|p| p.sector.exact_width().unwrap_or_default())
        .sum();
    for i in 0..n {
        let next = pieces[(i + 1) % n].sector.exact_start();
        if pieces[i].sector.exact_end() != next {
            let end = pieces[i].sector.end().angle();
            let start = pieces[(i + 1) % n].sector.start().angle();
            return Err(MapError::GapOrOverlap {
                index: i,
                mismatch: seam_gap(end, start),
            });
        }
    }
    if total != Ratio::from_integer(1) {
        return Err(MapError::GapOrOverlap {
            index: n - 1,
            mismatch: (crate::angles::turns_to_radians(total) - TAU).abs(),
        });
    }
    Ok(())
}

fn check_float_tiling(pieces: &[Piece], policy: &NumericPolicy) -> Result<(), MapError> {
    let n = pieces.len();
    let total: f64 = pieces.iter().map(|p| p.sector.width()).sum();
    for i in 0..n {
        let end = pieces[i].sector.start().angle() + pieces[i].sector.width();
        let start = pieces[(i + 1) % n].sector.start().angle();
        let mismatch = seam_gap(end, start);
        if mismatch > policy.partition_tol {
            return Err(MapError::GapOrOverlap { index: i, mismatch });
        }
    }
    if (total - TAU).abs() > policy.partition_tol {
        return Err(MapError::GapOrOverlap {
            index: n - 1,
            mismatch: (total - TAU).abs(),
        });
    }
    Ok(())
}

/// Unsigned angular distance between two angles, in `[0, pi]`.
fn seam_gap(a: f64, b: f64) -> f64 {
    let d = normalize_angle(b - a);
    d.min(TAU - d).min(PI)
}
