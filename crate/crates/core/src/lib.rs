//! Invertibility of continuous piecewise linear maps of the plane.
//!
//! A planar strongly piecewise linear map is a fan of sectors around the
//! origin with one matrix per sector, glued continuously. This crate
//! validates such maps, computes their Brouwer degree exactly as the winding
//! number of the image of the unit circle, and uses it to decide global
//! invertibility. The result is either an explicit piecewise linear inverse
//! or a pair of distinct points with the same image.
//!
//! Around the planar engine sit the two-piece criterion in any dimension
//! ([`halfspace`]), the local-invertibility test for piecewise smooth
//! functions ([`nonsmooth`]) and the command-line surface ([`cli`]).

// Negated float comparisons such as `!(x > 0.0)` are used on purpose: they
// also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angles;
pub mod cli;
pub mod exec;
pub mod halfspace;
pub mod linalg;
pub mod nonsmooth;
pub mod policy;
pub mod pwlmap;

pub use angles::{wrap_sweep, Direction, Orientation, Sector, TurnAngle};
pub use exec::Execution;
pub use linalg::{Mat2, Vec2};
pub use policy::NumericPolicy;
pub use pwlmap::{
    image_sector, random_map, sweep, CollisionWitness, MapError, Piece, PwlMap2, TheoremTag,
    Verdict, VerdictTag,
};
