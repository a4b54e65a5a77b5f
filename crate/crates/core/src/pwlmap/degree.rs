use std::f64::consts::TAU;

use super::sweep::sweep;
use super::{MapError, PwlMap2};
use crate::policy::NumericPolicy;

impl PwlMap2 {
    /// Signed sweep of every piece, in piece order.
    pub fn piece_sweeps(&self) -> Result<Vec<f64>, MapError> {
        self.nondegeneracy().map_err(MapError::Degenerate)?;
        self.pieces()
            .iter()
            .map(|p| sweep(&p.matrix, &p.sector))
            .collect()
    }

    /// Total sweep of `G(S^1)` divided by a full turn, before rounding.
    pub fn winding_sum(&self) -> Result<f64, MapError> {
        Ok(self.piece_sweeps()?.iter().sum::<f64>() / TAU)
    }

    /// Brouwer degree of a nondegenerate map.
    pub fn degree(&self) -> Result<i64, MapError> {
        self.degree_with(&NumericPolicy::DEFAULT)
    }

    pub fn degree_with(&self, policy: &NumericPolicy) -> Result<i64, MapError> {
        let raw = self.winding_sum()?;
        let rounded = raw.round();
        if (raw - rounded).abs() > policy.degree_tol {
            return Err(MapError::NonIntegerWinding { value: raw });
        }
        Ok(rounded as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{Sector, TurnAngle};
    use crate::linalg::Mat2;
    use crate::pwlmap::{Degeneracy, Piece};
    use num_rational::Ratio;

    #[test]
    fn linear_maps_have_unit_degree() {
        assert_eq!(PwlMap2::linear(Mat2::IDENTITY).degree(), Ok(1));
        assert_eq!(PwlMap2::linear(Mat2::diag(1.0, -3.0)).degree(), Ok(-1));
        assert_eq!(PwlMap2::linear(Mat2::rotation(2.0)).degree(), Ok(1));
    }

    #[test]
    fn degenerate_maps_have_no_degree() {
        let p = vec![
            Piece::new(
                Sector::from_turns(TurnAngle::ZERO, Ratio::new(1, 2)).unwrap(),
                Mat2::IDENTITY,
            ),
            Piece::new(
                Sector::from_turns(TurnAngle::new(1, 2).unwrap(), Ratio::new(1, 2)).unwrap(),
                Mat2::diag(1.0, -1.0),
            ),
        ];
        let g = PwlMap2::validate(p).unwrap();
        assert_eq!(
            g.degree(),
            Err(MapError::Degenerate(Degeneracy::MixedSigns))
        );
    }
}
