//! JSON map files.
//!
//! ```json
//! { "name": "...",
//!   "cones": [ { "start_turn": "3/16", "matrix": [[1, "-sqrt(2)"], [0, "sqrt(2)-1"]] }, ... ] }
//! ```
//!
//! Each cone runs from its start to the next cone's start, wrapping at the
//! end, so a file always tiles the circle once its starts are strictly
//! increasing. Exact starts (`start_turn`, a fraction of a full turn) are
//! the normal form; computed maps with irrational rays use `start_rad`.

use std::f64::consts::TAU;
use std::path::Path;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::expr::{parse_scalar, ExprError};
use crate::angles::{normalize_angle, AngleError, Sector, TurnAngle};
use crate::linalg::Mat2;
use crate::pwlmap::{MapError, Piece, PwlMap2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Expr(String),
}

impl Scalar {
    pub fn value(&self) -> Result<f64, ExprError> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Expr(s) => parse_scalar(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_turn: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_rad: Option<Scalar>,
    pub matrix: [[Scalar; 2]; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub name: String,
    pub cones: Vec<ConeEntry>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed map file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cone {cone}, entry ({row},{col}): {source}")]
    Expr {
        cone: usize,
        row: usize,
        col: usize,
        source: ExprError,
    },
    #[error("cone {cone}: {source}")]
    Angle { cone: usize, source: AngleError },
    #[error("cone {cone} needs exactly one of start_turn or start_rad")]
    Start { cone: usize },
    #[error("either every cone uses start_turn or every cone uses start_rad")]
    MixedStarts,
    #[error("invalid map: {0}")]
    Validation(#[from] MapError),
}

impl MapFile {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds and validates the map.
    pub fn to_map(&self) -> Result<PwlMap2, LoadError> {
        let n = self.cones.len();
        if n == 0 {
            return Err(MapError::Empty.into());
        }
        let mut mats = Vec::with_capacity(n);
        for (cone, c) in self.cones.iter().enumerate() {
            let mut e = [[0.0; 2]; 2];
            for (row, r) in c.matrix.iter().enumerate() {
                for (col, s) in r.iter().enumerate() {
                    e[row][col] = s.value().map_err(|source| LoadError::Expr {
                        cone,
                        row,
                        col,
                        source,
                    })?;
                }
            }
            mats.push(Mat2::from_rows(e));
            if c.start_turn.is_some() == c.start_rad.is_some() {
                return Err(LoadError::Start { cone });
            }
        }
        let exact = self.cones.iter().all(|c| c.start_turn.is_some());
        let float = self.cones.iter().all(|c| c.start_rad.is_some());
        let sectors = if exact {
            self.exact_sectors()?
        } else if float {
            self.float_sectors()?
        } else {
            return Err(LoadError::MixedStarts);
        };
        let pieces = sectors
            .into_iter()
            .zip(mats)
            .map(|(s, m)| Piece::new(s, m))
            .collect();
        Ok(PwlMap2::validate(pieces)?)
    }

    fn exact_sectors(&self) -> Result<Vec<Sector>, LoadError> {
        let starts = self
            .cones
            .iter()
            .enumerate()
            .map(|(cone, c)| {
                c.start_turn
                    .as_deref()
                    .unwrap_or_default()
                    .parse::<TurnAngle>()
                    .map_err(|source| LoadError::Angle { cone, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        check_increasing(starts.iter().map(|t| t.to_radians()))?;
        let n = starts.len();
        (0..n)
            .map(|i| {
                let next = if i + 1 < n {
                    starts[i + 1].as_ratio()
                } else {
                    starts[0].as_ratio() + Ratio::from_integer(1)
                };
                Sector::from_turns(starts[i], next - starts[i].as_ratio())
                    .map_err(|source| LoadError::Angle { cone: i, source })
            })
            .collect()
    }

    fn float_sectors(&self) -> Result<Vec<Sector>, LoadError> {
        let starts = self
            .cones
            .iter()
            .enumerate()
            .map(|(cone, c)| {
                let s = c.start_rad.as_ref().expect("checked");
                s.value().map_err(|source| LoadError::Expr {
                    cone,
                    row: 0,
                    col: 0,
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if starts.iter().any(|s| !(0.0..TAU).contains(s)) {
            return Err(MapError::InvalidArgument("start_rad must lie in [0, 2*pi)".into()).into());
        }
        check_increasing(starts.iter().copied())?;
        let n = starts.len();
        (0..n)
            .map(|i| {
                let width = if i + 1 < n {
                    starts[i + 1] - starts[i]
                } else {
                    starts[0] + TAU - starts[i]
                };
                Sector::new(starts[i], width).map_err(|source| LoadError::Angle { cone: i, source })
            })
            .collect()
    }

    /// Serializable form of a validated map. Matrices are written as plain
    /// numbers, so reading the file back reproduces them bit for bit.
    pub fn from_map(g: &PwlMap2, name: &str) -> Self {
        let exact = g.has_exact_angles();
        let cones = g
            .pieces()
            .iter()
            .map(|p| {
                let m = p.matrix.rows().map(|r| r.map(Scalar::Number));
                if exact {
                    ConeEntry {
                        start_turn: p.sector.exact_start().map(|t| t.to_string()),
                        start_rad: None,
                        matrix: m,
                    }
                } else {
                    ConeEntry {
                        start_turn: None,
                        start_rad: Some(Scalar::Number(normalize_angle(p.sector.start().angle()))),
                        matrix: m,
                    }
                }
            })
            .collect();
        MapFile {
            name: name.to_string(),
            cones,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map files always serialize")
    }
}

fn check_increasing(starts: impl Iterator<Item = f64>) -> Result<(), LoadError> {
    let v: Vec<f64> = starts.collect();
    for i in 1..v.len() {
        if !(v[i] > v[i - 1]) {
            return Err(MapError::GapOrOverlap {
                index: i - 1,
                mismatch: (v[i - 1] - v[i]).abs(),
            }
            .into());
        }
    }
    Ok(())
}

pub fn load_map_str(text: &str) -> Result<PwlMap2, LoadError> {
    MapFile::parse(text)?.to_map()
}

pub fn load_map(path: &Path) -> Result<PwlMap2, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_map_str(&text)
}

pub fn write_map_string(g: &PwlMap2, name: &str) -> String {
    MapFile::from_map(g, name).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = r#"{"name": "t", "cones": [
        {"start_turn": "0", "matrix": [[1, 0], [0, 1]]},
        {"start_turn": "1/2", "matrix": [[1, 0], [0, "4/2"]]}]}"#;

    #[test]
    fn loads_exact_file() {
        let g = load_map_str(TWO).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.pieces()[1].matrix, Mat2::diag(1.0, 2.0));
        assert_eq!(g.pieces()[1].sector.exact_width(), Some(Ratio::new(1, 2)));
    }

    #[test]
    fn single_cone_is_whole_plane() {
        let g =
            load_map_str(r#"{"name":"id","cones":[{"start_turn":"0","matrix":[[1,0],[0,1]]}]}"#)
                .unwrap();
        assert!(g.pieces()[0].sector.is_full());
    }

    #[test]
    fn non_increasing_starts_overlap() {
        let text = TWO.replace("\"0\"", "\"3/4\"");
        assert!(matches!(
            load_map_str(&text),
            Err(LoadError::Validation(MapError::GapOrOverlap { .. }))
        ));
    }

    #[test]
    fn bad_inputs_are_reported() {
        let text = TWO.replace("\"4/2\"", "\"sqrt(-1)\"");
        assert!(matches!(
            load_map_str(&text),
            Err(LoadError::Expr {
                cone: 1,
                row: 1,
                col: 1,
                ..
            })
        ));
        let text = TWO.replace("\"1/2\"", "\"1/0\"");
        assert!(matches!(
            load_map_str(&text),
            Err(LoadError::Angle { cone: 1, .. })
        ));
        assert!(matches!(load_map_str("{"), Err(LoadError::Json(_))));
        assert!(matches!(
            load_map_str(r#"{"name":"e","cones":[]}"#),
            Err(LoadError::Validation(MapError::Empty))
        ));
        let mixed = r#"{"name":"m","cones":[
            {"start_turn":"0","matrix":[[1,0],[0,1]]},
            {"start_rad":3.14159,"matrix":[[1,0],[0,1]]}]}"#;
        assert!(matches!(load_map_str(mixed), Err(LoadError::MixedStarts)));
    }

    #[test]
    fn float_round_trip() {
        let g = crate::pwlmap::random_map(5, 3, true).unwrap();
        let text = write_map_string(&g, "r");
        assert!(text.contains("start_rad"));
        let h = load_map_str(&text).unwrap();
        for (a, b) in g.pieces().iter().zip(h.pieces()) {
            assert_eq!(a.matrix, b.matrix);
            assert!((a.sector.start().angle() - b.sector.start().angle()).abs() < 1e-15);
            assert!((a.sector.width() - b.sector.width()).abs() < 1e-12);
        }
    }
}
