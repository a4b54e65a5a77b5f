use serde::Serialize;

use super::sweep::image_sector;
use super::witness::CollisionWitness;
use super::{Degeneracy, MapError, Piece, PwlMap2};
use crate::angles::Sector;
use crate::linalg::Vec2;
use crate::policy::NumericPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictTag {
    Invertible,
    NonInjective,
    Degenerate,
}

/// Which structural fact settles the verdict. For invertible maps this is
/// the strongest sufficient condition that applies; the degree alone already
/// decides, so the tag is descriptive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremTag {
    /// One piece: a nonsingular linear map.
    TrivialLinear,
    /// Two pieces glued along a line.
    HalfSpaceN2,
    /// Three cones, nondegenerate.
    ThreeCones,
    /// Four convex cones, nondegenerate.
    FourConvexCones,
    /// No structural condition applies; degree is +-1.
    DegreeOne,
    /// Degree of magnitude at least two.
    DegreeNotOne,
    MixedDeterminantSigns,
    SingularPiece,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub degree: Option<i64>,
    pub inverse: Option<PwlMap2>,
    pub witness: Option<CollisionWitness>,
    pub theorem_tag: TheoremTag,
}

/// A preimage point and every cone it lies in.
#[derive(Clone, Debug, PartialEq)]
pub struct Preimage {
    pub point: Vec2,
    pub cones: Vec<usize>,
}

impl PwlMap2 {
    /// Full invertibility decision.
    ///
    /// Degenerate maps are never invertible. Otherwise the degree decides:
    /// `+-1` yields the inverse, anything larger yields a collision witness.
    pub fn decide(&self) -> Result<Verdict, MapError> {
        if let Err(cause) = self.nondegeneracy() {
            return Ok(Verdict {
                tag: VerdictTag::Degenerate,
                degree: None,
                inverse: None,
                witness: None,
                theorem_tag: match cause {
                    Degeneracy::SingularPiece { .. } => TheoremTag::SingularPiece,
                    Degeneracy::MixedSigns => TheoremTag::MixedDeterminantSigns,
                },
            });
        }
        let degree = self.degree()?;
        match degree.abs() {
            1 => Ok(Verdict {
                tag: VerdictTag::Invertible,
                degree: Some(degree),
                inverse: Some(self.invert()?),
                witness: None,
                theorem_tag: self.structural_tag(),
            }),
            0 => Err(MapError::NonIntegerWinding { value: 0.0 }),
            _ => Ok(Verdict {
                tag: VerdictTag::NonInjective,
                degree: Some(degree),
                inverse: None,
                witness: Some(self.collision_witness()?),
                theorem_tag: TheoremTag::DegreeNotOne,
            }),
        }
    }

    fn structural_tag(&self) -> TheoremTag {
        match self.n() {
            1 => TheoremTag::TrivialLinear,
            2 => TheoremTag::HalfSpaceN2,
            3 => TheoremTag::ThreeCones,
            4 if self.all_cones_convex(NumericPolicy::DEFAULT.angle_tol) => {
                TheoremTag::FourConvexCones
            }
            _ => TheoremTag::DegreeOne,
        }
    }

    /// Piecewise linear inverse of a degree `+-1` map: the image cones
    /// `L_i(C_i)` with matrices `L_i^{-1}`.
    pub fn invert(&self) -> Result<PwlMap2, MapError> {
        let degree = self.degree()?;
        if degree.abs() != 1 {
            return Err(MapError::NotInvertible { degree });
        }
        if self.n() == 1 {
            let p = &self.pieces()[0];
            let inv = p.matrix.inverse().ok_or(MapError::SingularMatrix)?;
            let start = p
                .matrix
                .apply(Vec2::from(p.sector.start()))
                .direction()
                .ok_or(MapError::SingularMatrix)?;
            return Ok(
                PwlMap2::validate(vec![Piece::new(Sector::full(start.angle()), inv)])
                    .expect("a single full piece is always valid"),
            );
        }
        let mut pieces = Vec::with_capacity(self.n());
        for p in self.pieces() {
            let (img, _) = image_sector(&p.matrix, &p.sector)?;
            let inv = p.matrix.inverse().ok_or(MapError::SingularMatrix)?;
            pieces.push(Piece::new(img, inv));
        }
        PwlMap2::validate(pieces).map_err(|e| MapError::InconsistentImageFan(Box::new(e)))
    }

    /// All preimages of a nonzero point, each with the cones containing it.
    pub fn preimages(&self, q: Vec2) -> Result<Vec<Preimage>, MapError> {
        self.nondegeneracy().map_err(MapError::Degenerate)?;
        if q.is_zero() {
            return Err(MapError::InvalidArgument("preimages of the origin".into()));
        }
        let rel = NumericPolicy::DEFAULT.dedup_rel;
        let mut out: Vec<Preimage> = Vec::new();
        for (i, p) in self.pieces().iter().enumerate() {
            let inv = p.matrix.inverse().ok_or(MapError::SingularMatrix)?;
            let c = inv.apply(q);
            let Some(d) = c.direction() else { continue };
            if !p.sector.contains(&d) {
                continue;
            }
            let radius = rel * q.norm().max(c.norm());
            match out.iter_mut().find(|e| (e.point - c).norm() <= radius) {
                Some(e) => e.cones.push(i),
                None => out.push(Preimage {
                    point: c,
                    cones: vec![i],
                }),
            }
        }
        Ok(out)
    }

    /// True when `q` has exactly one preimage and it lies in at most two cones.
    pub fn has_simple_preimage(&self, q: Vec2) -> Result<bool, MapError> {
        let pre = self.preimages(q)?;
        Ok(pre.len() == 1 && pre[0].cones.len() <= 2)
    }

    /// Half-line form of the simple-preimage condition: the preimages of `q`
    /// and `2q` are single points on one ray through the origin.
    pub fn preimage_is_single_halfline(&self, q: Vec2) -> Result<bool, MapError> {
        let a = self.preimages(q)?;
        let b = self.preimages(2.0 * q)?;
        if a.len() != 1 || b.len() != 1 {
            return Ok(false);
        }
        let (pa, pb) = (a[0].point, b[0].point);
        let tol = 1e-9 * pb.norm().max(1.0);
        Ok((2.0 * pa - pb).norm() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::TurnAngle;
    use crate::linalg::Mat2;
    use num_rational::Ratio;

    fn half_planes(lower: Mat2) -> PwlMap2 {
        PwlMap2::validate(vec![
            Piece::new(
                Sector::from_turns(TurnAngle::ZERO, Ratio::new(1, 2)).unwrap(),
                Mat2::IDENTITY,
            ),
            Piece::new(
                Sector::from_turns(TurnAngle::new(1, 2).unwrap(), Ratio::new(1, 2)).unwrap(),
                lower,
            ),
        ])
        .unwrap()
    }

    #[test]
    fn identity_inverts_to_identity() {
        let g = PwlMap2::linear(Mat2::IDENTITY);
        let v = g.decide().unwrap();
        assert_eq!(v.tag, VerdictTag::Invertible);
        assert_eq!(v.theorem_tag, TheoremTag::TrivialLinear);
        assert_eq!(v.inverse.unwrap().pieces()[0].matrix, Mat2::IDENTITY);
        assert_eq!(
            g.preimages(Vec2::new(1.0, 0.0)).unwrap()[0].point,
            Vec2::new(1.0, 0.0)
        );
    }

    #[test]
    fn half_plane_inverse_in_closed_form() {
        let g = half_planes(Mat2::diag(1.0, 2.0));
        let h = g.invert().unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.evaluate(Vec2::new(0.5, 3.0)), Vec2::new(0.5, 3.0));
        let y = h.evaluate(Vec2::new(0.5, -3.0));
        assert!((y - Vec2::new(0.5, -1.5)).norm() < 1e-15);
        let lower = h
            .pieces()
            .iter()
            .find(|p| {
                p.sector
                    .contains(&crate::angles::Direction::from_angle(4.0))
            })
            .unwrap();
        assert!(lower.matrix.max_abs_diff(&Mat2::diag(1.0, 0.5)) < 1e-15);
        assert_eq!(g.decide().unwrap().theorem_tag, TheoremTag::HalfSpaceN2);
    }

    #[test]
    fn degenerate_verdicts() {
        let v = half_planes(Mat2::diag(1.0, -1.0)).decide().unwrap();
        assert_eq!(v.tag, VerdictTag::Degenerate);
        assert_eq!(v.theorem_tag, TheoremTag::MixedDeterminantSigns);
        let v = half_planes(Mat2::diag(1.0, 0.0)).decide().unwrap();
        assert_eq!(v.theorem_tag, TheoremTag::SingularPiece);
        assert!(v.degree.is_none() && v.inverse.is_none());
    }

    #[test]
    fn preimage_on_seam_is_deduplicated() {
        let g = half_planes(Mat2::diag(1.0, 2.0));
        let pre = g.preimages(Vec2::new(2.0, 0.0)).unwrap();
        assert_eq!(pre.len(), 1);
        assert_eq!(pre[0].cones, vec![0, 1]);
        assert!(g.has_simple_preimage(Vec2::new(2.0, 0.0)).unwrap());
        assert!(g.preimage_is_single_halfline(Vec2::new(1.0, -1.0)).unwrap());
        assert!(g.preimages(Vec2::ZERO).is_err());
    }
}
