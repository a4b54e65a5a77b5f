//! Small fixed-size planar linear algebra.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::angles::Direction;
use crate::policy::NumericPolicy;

/// Point or vector in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(&self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(&self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn direction(&self) -> Option<Direction> {
        Direction::from_vector(self.x, self.y)
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }

    pub fn as_tuple(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

impl From<Direction> for Vec2 {
    fn from(d: Direction) -> Self {
        Vec2::new(d.x(), d.y())
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}

/// Real 2x2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Mat2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub const fn diag(d1: f64, d2: f64) -> Self {
        Mat2::new(d1, 0.0, 0.0, d2)
    }

    pub fn rotation(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    /// Matrix whose columns are `c1` and `c2`.
    pub fn from_columns(c1: Vec2, c2: Vec2) -> Self {
        Mat2::new(c1.x, c2.x, c1.y, c2.y)
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22)
            .sqrt()
    }

    pub fn is_singular(&self) -> bool {
        self.is_singular_with(&NumericPolicy::DEFAULT)
    }

    pub fn is_singular_with(&self, policy: &NumericPolicy) -> bool {
        let f2 = self.frobenius_norm().powi(2);
        !(self.det().abs() > policy.singular_rel * f2.max(1.0))
    }

    /// +1, -1, or 0 for singular matrices.
    pub fn det_sign(&self) -> i8 {
        if self.is_singular() {
            0
        } else if self.det() > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(&self) -> Option<Mat2> {
        if self.is_singular() {
            return None;
        }
        let d = self.det();
        Some(Mat2::new(
            self.a22 / d,
            -self.a12 / d,
            -self.a21 / d,
            self.a11 / d,
        ))
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.a11 * v.x + self.a12 * v.y,
            self.a21 * v.x + self.a22 * v.y,
        )
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2::new(s * self.a11, s * self.a12, s * self.a21, s * self.a22)
    }

    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        (self.a11 - o.a11)
            .abs()
            .max((self.a12 - o.a12).abs())
            .max((self.a21 - o.a21).abs())
            .max((self.a22 - o.a22).abs())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 + o.a11,
            self.a12 + o.a12,
            self.a21 + o.a21,
            self.a22 + o.a22,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}
