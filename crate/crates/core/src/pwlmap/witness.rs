//! Non-injectivity witnesses for maps of degree at least two.
//!
//! Along the unit circle the image direction turns monotonically (every
//! determinant has the same sign), and in total it turns `2*pi*|deg|`. If it
//! turns at least twice, some target angle `a` is reached once at cumulative
//! sweep `a` and again at `a + 2*pi`. The two circle points then have images
//! on the same ray, and rescaling one of them makes the images equal.

use std::f64::consts::{SQRT_2, TAU};

use serde::Serialize;

use super::sweep::arc_sweep;
use super::{MapError, PwlMap2};
use crate::angles::Direction;
use crate::linalg::Vec2;
use crate::policy::NumericPolicy;

/// Two distinct points with the same image.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CollisionWitness {
    pub x1: Vec2,
    pub x2: Vec2,
    pub cone_index_1: usize,
    pub cone_index_2: usize,
    pub image: Vec2,
}

impl CollisionWitness {
    /// Checks the witness against `g` with the given relative tolerance.
    pub fn verify(&self, g: &PwlMap2, tol: f64) -> Result<(), String> {
        let sep = (self.x1 - self.x2).norm();
        if !(sep > 1e-6 * self.x1.norm().max(self.x2.norm())) {
            return Err(format!("points are not distinct (separation {sep:e})"));
        }
        let scale = self.image.norm().max(1.0);
        for (k, x) in [self.x1, self.x2].into_iter().enumerate() {
            let err = (g.evaluate(x) - self.image).norm();
            if !(err <= tol * scale) {
                return Err(format!("image of x{} is off by {err:e}", k + 1));
            }
        }
        Ok(())
    }
}

const BISECTION_STEPS: usize = 200;

impl PwlMap2 {
    pub fn collision_witness(&self) -> Result<CollisionWitness, MapError> {
        let sign = self.nondegeneracy().map_err(MapError::Degenerate)? as f64;
        let degree = self.degree()?;
        if degree.abs() < 2 {
            return Err(MapError::DegreeOne);
        }
        // Oriented (positive) sweeps and their prefix sums.
        let turns: Vec<f64> = self.piece_sweeps()?.iter().map(|s| sign * s).collect();
        let mut prefix = Vec::with_capacity(turns.len() + 1);
        prefix.push(0.0);
        for t in &turns {
            prefix.push(prefix.last().unwrap() + t);
        }

        let mut target = 0.5 * turns[0];
        for _ in 0..4 {
            let collides = prefix.iter().any(|&p| (p - (target + TAU)).abs() <= 1e-9);
            if !collides {
                break;
            }
            target += 0.25 * (SQRT_2 - 1.0) * turns[0];
        }

        let (i1, t1) = self.locate(&prefix, target, sign)?;
        let (i2, t2) = self.locate(&prefix, target + TAU, sign)?;

        let x1 = Vec2::from(Direction::from_angle(t1));
        let e2 = Vec2::from(Direction::from_angle(t2));
        let y1 = self.pieces()[i1].matrix.apply(x1);
        let y2 = self.pieces()[i2].matrix.apply(e2);
        let x2 = (y1.norm() / y2.norm()) * e2;
        let w = CollisionWitness {
            x1,
            x2,
            cone_index_1: i1,
            cone_index_2: i2,
            image: 0.5 * (self.evaluate(x1) + self.evaluate(x2)),
        };
        w.verify(self, NumericPolicy::DEFAULT.witness_tol)
            .map_err(MapError::WitnessCheck)?;
        Ok(w)
    }

    /// Circle angle at which the oriented cumulative sweep equals `target`,
    /// and the piece containing it.
    fn locate(&self, prefix: &[f64], target: f64, sign: f64) -> Result<(usize, f64), MapError> {
        let n = self.n();
        let i = (0..n)
            .find(|&i| prefix[i] <= target && target <= prefix[i + 1])
            .ok_or_else(|| MapError::WitnessCheck(format!("target {target} out of range")))?;
        let p = &self.pieces()[i];
        let start = p.sector.start().angle();
        let (mut lo, mut hi) = (0.0, p.sector.width());
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let reached = prefix[i] + sign * arc_sweep(&p.matrix, start, mid)?;
            if reached < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((i, start + 0.5 * (lo + hi)))
    }
}
