//! Angular arithmetic on the unit circle.
//!
//! Angles are carried twice: as exact rational fractions of a full turn when
//! the input provides them, and always as `f64` radians. The exact form is
//! used to check that a list of sectors tiles the circle; everything that
//! follows (images under linear maps, sweeps, inverses) runs on floats, since
//! image rays of a rational cone are generally irrational.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::policy::NumericPolicy;

/// Low part of `2*pi` in double-double form: `TAU + TAU_LO` is `2*pi` to ~32 digits.
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AngleError {
    #[error("turn fraction has zero denominator")]
    ZeroDenominator,
    #[error("turn angle {0} is outside [0, 1)")]
    TurnOutOfRange(String),
    #[error("sector width {0} is outside (0, 2*pi]")]
    BadWidth(f64),
    #[error("cannot parse turn fraction {0:?}")]
    Parse(String),
    #[error("non-finite angle")]
    NonFinite,
}

/// Exact angle, as a reduced fraction of a full turn in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TurnAngle(Ratio<i64>);

impl TurnAngle {
    pub const ZERO: TurnAngle = TurnAngle(Ratio::new_raw(0, 1));

    /// Builds `numerator / denominator` turns. The fraction is reduced; it must
    /// lie in `[0, 1)`.
    pub fn new(numerator: i64, denominator: i64) -> Result<Self, AngleError> {
        if denominator == 0 {
            return Err(AngleError::ZeroDenominator);
        }
        Self::from_ratio(Ratio::new(numerator, denominator))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Result<Self, AngleError> {
        if r < Ratio::from_integer(0) || r >= Ratio::from_integer(1) {
            return Err(AngleError::TurnOutOfRange(r.to_string()));
        }
        Ok(TurnAngle(r))
    }

    /// Reduces any rational number of turns modulo one.
    pub fn wrapping(r: Ratio<i64>) -> Self {
        let frac = r - r.floor();
        TurnAngle(frac)
    }

    pub fn numerator(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i64 {
        *self.0.denom()
    }

    pub fn as_ratio(&self) -> Ratio<i64> {
        self.0
    }

    /// Radians, `2*pi*p/q`, evaluated in double-double so the result is within
    /// one ulp of the correctly rounded value.
    pub fn to_radians(&self) -> f64 {
        turns_to_radians(self.0)
    }
}

/// `2*pi*r` for an arbitrary rational number of turns.
pub(crate) fn turns_to_radians(r: Ratio<i64>) -> f64 {
    let p = *r.numer() as f64;
    let q = *r.denom() as f64;
    let hi = p * TAU;
    let err = p.mul_add(TAU, -hi);
    let lo = err + p * TAU_LO;
    let quo = hi / q;
    let rem = (-quo).mul_add(q, hi);
    quo + (rem + lo) / q
}

impl fmt::Display for TurnAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator() == 1 {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl std::str::FromStr for TurnAngle {
    type Err = AngleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || AngleError::Parse(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<i64>().map_err(|_| bad())?,
                q.trim().parse::<i64>().map_err(|_| bad())?,
            ),
            None => (s.parse::<i64>().map_err(|_| bad())?, 1),
        };
        TurnAngle::new(p, q)
    }
}

/// Normalizes radians to `[0, 2*pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid may round up to exactly TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Unit vector on the circle together with its angle in `[0, 2*pi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    x: f64,
    y: f64,
    angle: f64,
}

impl Direction {
    pub fn from_angle(theta: f64) -> Self {
        let angle = normalize_angle(theta);
        let (y, x) = angle.sin_cos();
        Direction { x, y, angle }
    }

    /// Direction of a nonzero vector; `None` for the origin or non-finite input.
    pub fn from_vector(x: f64, y: f64) -> Option<Self> {
        let r = x.hypot(y);
        if !(r > 0.0) || !r.is_finite() {
            return None;
        }
        Some(Direction {
            x: x / r,
            y: y / r,
            angle: normalize_angle(y.atan2(x)),
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn rotated(&self, by: f64) -> Self {
        Direction::from_angle(self.angle + by)
    }
}

/// Sense of rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Ccw,
    Cw,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
        }
    }

    /// Orientation of a nonzero signed quantity (e.g. a determinant).
    pub fn of(value: f64) -> Self {
        if value < 0.0 {
            Orientation::Cw
        } else {
            Orientation::Ccw
        }
    }
}

/// Oriented angular distance from `from` to `to`.
///
/// Counterclockwise the result lies in `(0, 2*pi]`, clockwise in `[-2*pi, 0)`;
/// coincident angles give a full turn.
pub fn wrap_sweep(from: f64, to: f64, orientation: Orientation) -> f64 {
    let d = normalize_angle(to - from);
    match orientation {
        Orientation::Ccw => {
            if d == 0.0 {
                TAU
            } else {
                d
            }
        }
        Orientation::Cw => d - TAU,
    }
}

/// Signed angle in `(-pi, pi]` turning vector `a` onto vector `b`.
pub fn signed_angle(a: (f64, f64), b: (f64, f64)) -> f64 {
    let cross = a.0 * b.1 - a.1 * b.0;
    let dot = a.0 * b.0 + a.1 * b.1;
    cross.atan2(dot)
}

/// Closed planar cone with vertex at the origin: the directions swept
/// counterclockwise from `start` through `width` radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sector {
    start: Direction,
    width: f64,
    exact_start: Option<TurnAngle>,
    exact_width: Option<Ratio<i64>>,
}

impl Sector {
    /// Float sector. Widths within the partition tolerance of a full turn are
    /// snapped to `2*pi`.
    pub fn new(start_angle: f64, width: f64) -> Result<Self, AngleError> {
        if !start_angle.is_finite() || !width.is_finite() {
            return Err(AngleError::NonFinite);
        }
        let width = if (width - TAU).abs() <= NumericPolicy::DEFAULT.partition_tol {
            TAU
        } else {
            width
        };
        if !(width > 0.0) || width > TAU {
            return Err(AngleError::BadWidth(width));
        }
        Ok(Sector {
            start: Direction::from_angle(start_angle),
            width,
            exact_start: None,
            exact_width: None,
        })
    }

    /// Exact sector; `width` is a number of turns in `(0, 1]`.
    pub fn from_turns(start: TurnAngle, width: Ratio<i64>) -> Result<Self, AngleError> {
        let w = turns_to_radians(width);
        if width <= Ratio::from_integer(0) || width > Ratio::from_integer(1) {
            return Err(AngleError::BadWidth(w));
        }
        Ok(Sector {
            start: Direction::from_angle(start.to_radians()),
            width: if width == Ratio::from_integer(1) {
                TAU
            } else {
                w
            },
            exact_start: Some(start),
            exact_width: Some(width),
        })
    }

    /// The whole plane, seamed at `start_angle`.
    pub fn full(start_angle: f64) -> Self {
        Sector {
            start: Direction::from_angle(start_angle),
            width: TAU,
            exact_start: None,
            exact_width: None,
        }
    }

    pub fn start(&self) -> Direction {
        self.start
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn exact_start(&self) -> Option<TurnAngle> {
        self.exact_start
    }

    pub fn exact_width(&self) -> Option<Ratio<i64>> {
        self.exact_width
    }

    /// Exact end angle in turns, when both exact fields are present.
    pub fn exact_end(&self) -> Option<TurnAngle> {
        Some(TurnAngle::wrapping(
            self.exact_start?.as_ratio() + self.exact_width?,
        ))
    }

    pub fn is_full(&self) -> bool {
        match self.exact_width {
            Some(w) => w == Ratio::from_integer(1),
            None => self.width >= TAU,
        }
    }

    /// End direction; computed from the exact data when present so that it is
    /// bit-identical to the start of the next exact sector.
    pub fn end(&self) -> Direction {
        match self.exact_end() {
            Some(t) => Direction::from_angle(t.to_radians()),
            None => self.start.rotated(self.width),
        }
    }

    /// Direction at `offset` radians counterclockwise from the start.
    pub fn direction_at(&self, offset: f64) -> Direction {
        self.start.rotated(offset)
    }

    pub fn contains(&self, d: &Direction) -> bool {
        self.contains_with(d, NumericPolicy::DEFAULT.angle_tol)
    }

    /// Membership with an explicit angular tolerance. Both boundary rays are
    /// included.
    pub fn contains_with(&self, d: &Direction, tol: f64) -> bool {
        if self.width >= TAU {
            return true;
        }
        let delta = normalize_angle(d.angle - self.start.angle);
        delta <= self.width + tol || delta >= TAU - tol
    }

    /// Exact membership test for a rational direction; falls back to the
    /// float test when this sector has no exact data.
    pub fn contains_turn(&self, t: &TurnAngle) -> bool {
        match (self.exact_start, self.exact_width) {
            (Some(s), Some(w)) => {
                let delta = TurnAngle::wrapping(t.as_ratio() - s.as_ratio()).as_ratio();
                delta <= w
            }
            _ => self.contains(&Direction::from_angle(t.to_radians())),
        }
    }

    /// Strictly convex means no half-plane inside: width below `pi`.
    pub fn is_strictly_convex(&self) -> bool {
        match self.exact_width {
            Some(w) => w < Ratio::new(1, 2),
            None => self.width < PI - NumericPolicy::DEFAULT.angle_tol,
        }
    }

    /// Convex (possibly a half-plane): width at most `pi + tol`.
    pub fn is_convex(&self, tol: f64) -> bool {
        match self.exact_width {
            Some(w) => w <= Ratio::new(1, 2),
            None => self.width <= PI + tol,
        }
    }
}
