//! Local invertibility of piecewise smooth planar functions at a point.
//!
//! Inputs are the limiting Jacobians at the point and the Bouligand
//! derivative there, given as a piecewise linear map. The function is
//! locally invertible when every limiting Jacobian has the same nonzero
//! determinant sign and the Bouligand derivative is invertible.
//!
//! [`clarke_hull_min_det`] scans the convex hull of the Jacobians for a
//! singular element. A negative minimum comes with its weights and is a
//! certificate that the classical convex-hull criterion does not apply.

use serde::Serialize;
use thiserror::Error;

use crate::angles::{Sector, TurnAngle};
use crate::exec::{self, Execution};
use crate::linalg::{Mat2, Vec2};
use crate::pwlmap::{MapError, Piece, PwlMap2, VerdictTag};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum NonsmoothError {
    #[error("generalized Jacobian needs at least one member")]
    EmptyJacobian,
    #[error("grid resolution must be at least 2, got {0}")]
    ResolutionTooSmall(usize),
    #[error("non-finite Jacobian entry in member {0}")]
    NonFinite(usize),
}

/// Limiting Jacobians of a function at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedJacobian {
    members: Vec<Mat2>,
}

impl GeneralizedJacobian {
    pub fn new(members: Vec<Mat2>) -> Result<Self, NonsmoothError> {
        if members.is_empty() {
            return Err(NonsmoothError::EmptyJacobian);
        }
        for (i, m) in members.iter().enumerate() {
            if ![m.a11, m.a12, m.a21, m.a22].iter().all(|x| x.is_finite()) {
                return Err(NonsmoothError::NonFinite(i));
            }
        }
        Ok(GeneralizedJacobian { members })
    }

    pub fn members(&self) -> &[Mat2] {
        &self.members
    }

    /// Common determinant sign, or `0` if signs differ or any member is singular.
    pub fn common_sign(&self) -> i8 {
        let s = self.members[0].det_sign();
        if s != 0 && self.members.iter().all(|m| m.det_sign() == s) {
            s
        } else {
            0
        }
    }
}

/// Smallest determinant found over the convex hull, with its weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullMinimum {
    pub min_det: f64,
    pub weights: Vec<f64>,
}

pub const DEFAULT_RESOLUTION: usize = 100;
const REFINE_SWEEPS: usize = 20;

fn combine(members: &[Mat2], weights: &[f64]) -> Mat2 {
    members
        .iter()
        .zip(weights)
        .fold(Mat2::new(0.0, 0.0, 0.0, 0.0), |acc, (m, &w)| {
            acc + m.scale(w)
        })
}

pub fn clarke_hull_min_det(
    members: &[Mat2],
    resolution: usize,
) -> Result<HullMinimum, NonsmoothError> {
    clarke_hull_min_det_with(members, resolution, Execution::default())
}

/// Minimizes `det(sum lambda_i M_i)` over the probability simplex.
///
/// Every grid point with `lambda_i = c_i / resolution` is evaluated (vertices
/// included), then the best one is polished by pairwise weight transfers.
/// Along a transfer the determinant is quadratic, so each step is exact.
pub fn clarke_hull_min_det_with(
    members: &[Mat2],
    resolution: usize,
    exec: Execution,
) -> Result<HullMinimum, NonsmoothError> {
    if members.is_empty() {
        return Err(NonsmoothError::EmptyJacobian);
    }
    if resolution < 2 {
        return Err(NonsmoothError::ResolutionTooSmall(resolution));
    }
    let m = members.len();
    let r = resolution as u64;
    let best_per_head = exec::map_range(0..r + 1, exec, |head| {
        let mut counts = vec![0u64; m];
        counts[0] = head;
        let mut best = (f64::INFINITY, Vec::new());
        scan(members, resolution, &mut counts, 1, r - head, &mut best);
        best
    });
    let (mut min_det, counts) = best_per_head
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("grid is nonempty");
    let mut weights: Vec<f64> = counts.iter().map(|&c| c as f64 / r as f64).collect();
    refine(members, &mut weights, &mut min_det);
    Ok(HullMinimum { min_det, weights })
}

fn scan(
    members: &[Mat2],
    resolution: usize,
    counts: &mut Vec<u64>,
    slot: usize,
    left: u64,
    best: &mut (f64, Vec<u64>),
) {
    let m = members.len();
    if slot + 1 >= m {
        if slot < m {
            counts[slot] = left;
        } else if left != 0 {
            return;
        }
        let w: Vec<f64> = counts
            .iter()
            .map(|&c| c as f64 / resolution as f64)
            .collect();
        let d = combine(members, &w).det();
        if d < best.0 {
            *best = (d, counts.clone());
        }
        return;
    }
    for c in 0..=left {
        counts[slot] = c;
        scan(members, resolution, counts, slot + 1, left - c, best);
    }
}

fn refine(members: &[Mat2], weights: &mut [f64], min_det: &mut f64) {
    let m = members.len();
    for _ in 0..REFINE_SWEEPS {
        let mut improved = false;
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                // move t from j to i, t in [-w_i, w_j]
                let base = combine(members, weights);
                let d = members[i] + members[j].scale(-1.0);
                let a = d.det();
                let b = base.a11 * d.a22 + d.a11 * base.a22 - base.a12 * d.a21 - d.a12 * base.a21;
                let (lo, hi) = (-weights[i], weights[j]);
                let mut candidates = vec![lo, hi];
                if a > 0.0 {
                    candidates.push((-b / (2.0 * a)).clamp(lo, hi));
                }
                for t in candidates {
                    let mut w = weights.to_vec();
                    w[i] += t;
                    w[j] -= t;
                    w[j] = w[j].max(0.0);
                    w[i] = w[i].max(0.0);
                    let val = combine(members, &w).det();
                    if val < *min_det - 1e-15 * min_det.abs().max(1.0) {
                        *min_det = val;
                        weights.copy_from_slice(&w);
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}

/// Which sufficient condition established (or failed to establish) the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pc1Rule {
    /// Hypotheses not met; no rule fires.
    NotApplicable,
    /// Two pieces glued along a line.
    TwoPieces,
    /// At most three cones.
    AtMostThreeCones,
    /// Four convex cones.
    FourConvexCones,
    /// A probe point has a single preimage lying in at most two cones.
    SingletonPreimage,
    /// Degree of the Bouligand derivative, no structural shortcut.
    Degree,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pc1Verdict {
    pub same_sign: bool,
    pub sign: i8,
    pub bderiv_invertible: bool,
    pub locally_invertible: bool,
    pub rule: Pc1Rule,
    pub detail: String,
}

pub fn check_local_invertibility(
    jac: &GeneralizedJacobian,
    bderiv: &PwlMap2,
) -> Result<Pc1Verdict, MapError> {
    let sign = jac.common_sign();
    let same_sign = sign != 0;
    let bderiv_invertible = bderiv.decide()?.tag == VerdictTag::Invertible;
    let detail = match (same_sign, bderiv_invertible) {
        (true, true) => "both hypotheses hold".to_string(),
        (false, true) => "generalized Jacobian has mixed or zero determinant signs".to_string(),
        (true, false) => "Bouligand derivative is not invertible".to_string(),
        (false, false) => {
            "mixed Jacobian signs and non-invertible Bouligand derivative".to_string()
        }
    };
    Ok(Pc1Verdict {
        same_sign,
        sign,
        bderiv_invertible,
        locally_invertible: same_sign && bderiv_invertible,
        rule: if same_sign && bderiv_invertible {
            Pc1Rule::Degree
        } else {
            Pc1Rule::NotApplicable
        },
        detail,
    })
}

/// Like [`check_local_invertibility`], but records which structural rule
/// certifies the Bouligand derivative: two pieces, at most three cones, four
/// convex cones, or a probe point with a simple preimage (tried in that order).
pub fn corollary_dispatch(
    jac: &GeneralizedJacobian,
    bderiv: &PwlMap2,
) -> Result<Pc1Verdict, MapError> {
    let mut v = check_local_invertibility(jac, bderiv)?;
    if !v.same_sign || bderiv.nondegeneracy().is_err() {
        v.rule = Pc1Rule::NotApplicable;
        return Ok(v);
    }
    let n = bderiv.n();
    let (rule, detail) = if n == 2 {
        (
            Pc1Rule::TwoPieces,
            "two cones glued along a line".to_string(),
        )
    } else if n <= 3 {
        (Pc1Rule::AtMostThreeCones, format!("{n} cone(s)"))
    } else if n == 4 && bderiv.all_cones_convex(1e-12) {
        (Pc1Rule::FourConvexCones, "four convex cones".to_string())
    } else if let Some(q) = simple_preimage_probe(bderiv)? {
        (
            Pc1Rule::SingletonPreimage,
            format!(
                "({:.6}, {:.6}) has a single preimage in at most two cones",
                q.x, q.y
            ),
        )
    } else {
        (Pc1Rule::Degree, v.detail.clone())
    };
    v.rule = rule;
    v.detail = detail;
    Ok(v)
}

/// Tries the images of each cone's bisector ray.
fn simple_preimage_probe(g: &PwlMap2) -> Result<Option<Vec2>, MapError> {
    for p in g.pieces() {
        let d = p.sector.direction_at(0.5 * p.sector.width());
        let q = p.matrix.apply(Vec2::from(d));
        if g.has_simple_preimage(q)? {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// Data of the parabolic-sector function
/// `f = (x, 2y - x^2)` on `y > x^2`, `(x, 2y + x^2)` on `y < -x^2`, identity between.
///
/// Limiting Jacobians at the origin are `diag(1, 2)` (from both outer
/// regions) and the identity. Along any ray with `y != 0` the point
/// eventually lies in an outer region, and `f(0, t) = (0, 2t)`, so the
/// Bouligand derivative is `diag(1, 2)` on both half-planes rather than the
/// identity.
pub fn parabolic_sector_example() -> (GeneralizedJacobian, PwlMap2) {
    let stretch = Mat2::diag(1.0, 2.0);
    let jac = GeneralizedJacobian::new(vec![stretch, stretch, Mat2::IDENTITY]).expect("nonempty");
    let half = |p: i64| {
        Sector::from_turns(
            TurnAngle::new(p, 2).expect("valid turn"),
            num_rational::Ratio::new(1, 2),
        )
        .expect("valid sector")
    };
    let bderiv = PwlMap2::validate(vec![
        Piece::new(half(0), stretch),
        Piece::new(half(1), stretch),
    ])
    .expect("continuous");
    (jac, bderiv)
}
