//! Planar strongly piecewise linear maps.
//!
//! A map is a fan of closed sectors with vertex at the origin that tiles the
//! plane, with one matrix per sector; neighbouring matrices agree on the
//! shared boundary ray, so the map is continuous and positively homogeneous.
//!
//! For a nondegenerate map (every determinant nonzero, all of one sign) the
//! Brouwer degree is the winding number of the image of the unit circle. It
//! is computed exactly here by adding the signed angle each piece sweeps.
//! The degree settles invertibility: `|deg| = 1` gives an explicit piecewise
//! linear inverse, and `|deg| >= 2` gives a concrete pair of colliding points.

mod decide;
mod degree;
mod map;
mod random;
mod sweep;
mod witness;

use thiserror::Error;

use crate::linalg::Vec2;

pub use decide::{Preimage, TheoremTag, Verdict, VerdictTag};
pub use map::{Piece, PwlMap2};
pub use random::{random_map, random_map_with, ConeShape, RandomMapConfig};
pub use sweep::{arc_sweep, image_sector, sweep, ImageClass};
pub use witness::CollisionWitness;

/// Why a map fails the nondegeneracy hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    SingularPiece { index: usize },
    MixedSigns,
}

impl std::fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degeneracy::SingularPiece { index } => write!(f, "piece {index} is singular"),
            Degeneracy::MixedSigns => write!(f, "determinant signs are mixed"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum MapError {
    #[error("a map needs at least one piece")]
    Empty,
    #[error("cone {index} has empty interior (width {width})")]
    EmptyInteriorCone { index: usize, width: f64 },
    #[error("sectors do not tile the circle near cone {index} (mismatch {mismatch:e})")]
    GapOrOverlap { index: usize, mismatch: f64 },
    #[error(
        "pieces {i} and {j} disagree on boundary ray ({:.6}, {:.6}) by {mismatch:e}",
        direction.x,
        direction.y
    )]
    DiscontinuousBoundary {
        i: usize,
        j: usize,
        direction: Vec2,
        mismatch: f64,
    },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("map is degenerate: {0}")]
    Degenerate(Degeneracy),
    #[error("winding sum {value} is not within tolerance of an integer")]
    NonIntegerWinding { value: f64 },
    #[error("map has degree {degree}, not +-1")]
    NotInvertible { degree: i64 },
    #[error("map has degree +-1, so no collision exists")]
    DegreeOne,
    #[error("collision witness failed verification: {0}")]
    WitnessCheck(String),
    #[error("image fan of the inverse failed validation: {0}")]
    InconsistentImageFan(Box<MapError>),
    #[error("random map generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
