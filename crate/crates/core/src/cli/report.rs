//! Analysis reports in human-readable and JSON form.

use serde::Serialize;

use crate::linalg::Mat2;
use crate::nonsmooth::{clarke_hull_min_det, HullMinimum, DEFAULT_RESOLUTION};
use crate::pwlmap::{CollisionWitness, MapError, PwlMap2, TheoremTag, VerdictTag};

/// Budget on the number of simplex grid points evaluated for the report.
const CLARKE_GRID_BUDGET: f64 = 500_000.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InversePiece {
    pub start_rad: f64,
    pub width: f64,
    pub matrix: [[f64; 2]; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub n: usize,
    pub widths: Vec<f64>,
    pub determinants: Vec<f64>,
    pub degree: Option<i64>,
    pub verdict: VerdictTag,
    pub theorem_tag: TheoremTag,
    pub witness: Option<CollisionWitness>,
    pub inverse: Option<Vec<InversePiece>>,
    pub clarke_min_det: Option<f64>,
    pub clarke_weights: Option<Vec<f64>>,
    pub clarke_resolution: Option<usize>,
}

/// Number of points `c / r` on the simplex with `n` vertices.
fn grid_size(n: usize, r: usize) -> f64 {
    (1..n).fold(1.0, |acc, i| acc * (r + i) as f64 / i as f64)
}

/// Largest grid resolution up to the default that stays within budget.
pub fn clarke_resolution(n: usize) -> usize {
    let mut r = DEFAULT_RESOLUTION;
    while r > 2 && grid_size(n, r) > CLARKE_GRID_BUDGET {
        r -= 1;
    }
    r
}

pub fn inverse_pieces(inv: &PwlMap2) -> Vec<InversePiece> {
    inv.pieces()
        .iter()
        .map(|p| InversePiece {
            start_rad: p.sector.start().angle(),
            width: p.sector.width(),
            matrix: p.matrix.rows(),
        })
        .collect()
}

pub fn analyze(g: &PwlMap2, name: &str) -> Result<Report, MapError> {
    let v = g.decide()?;
    let members: Vec<Mat2> = g.matrices();
    let resolution = clarke_resolution(members.len());
    let hull: Option<HullMinimum> = clarke_hull_min_det(&members, resolution).ok();
    Ok(Report {
        name: name.to_string(),
        n: g.n(),
        widths: g.widths(),
        determinants: g.determinants(),
        degree: v.degree,
        verdict: v.tag,
        theorem_tag: v.theorem_tag,
        witness: v.witness,
        inverse: v.inverse.as_ref().map(inverse_pieces),
        clarke_min_det: hull.as_ref().map(|h| h.min_det),
        clarke_weights: hull.map(|h| h.weights),
        clarke_resolution: Some(resolution),
    })
}

fn fmt_mat(m: &[[f64; 2]; 2]) -> String {
    format!(
        "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
        m[0][0], m[0][1], m[1][0], m[1][1]
    )
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s += &format!("map: {} ({} cones)\n", self.name, self.n);
        for (i, (w, d)) in self.widths.iter().zip(&self.determinants).enumerate() {
            s += &format!("  cone {i}: width {w:.6} rad, det {d:.6}\n");
        }
        match self.degree {
            Some(d) => s += &format!("degree: {d}\n"),
            None => s += "degree: undefined\n",
        }
        s += &format!("verdict: {:?} ({:?})\n", self.verdict, self.theorem_tag);
        if let Some(w) = &self.witness {
            s +=
                &format!(
                "witness: G({:.9}, {:.9}) = G({:.9}, {:.9}) = ({:.9}, {:.9}) [cones {} and {}]\n",
                w.x1.x, w.x1.y, w.x2.x, w.x2.y, w.image.x, w.image.y, w.cone_index_1, w.cone_index_2
            );
        }
        if let Some(inv) = &self.inverse {
            s += &format!("inverse: {} pieces\n", inv.len());
            for (i, p) in inv.iter().enumerate() {
                s += &format!(
                    "  piece {i}: start {:.6} rad, width {:.6} rad, matrix {}\n",
                    p.start_rad,
                    p.width,
                    fmt_mat(&p.matrix)
                );
            }
        }
        if let (Some(m), Some(w)) = (self.clarke_min_det, &self.clarke_weights) {
            let weights: Vec<String> = w.iter().map(|x| format!("{x:.4}")).collect();
            s += &format!(
                "clarke hull min det: {m:.6} at weights ({}){}\n",
                weights.join(", "),
                if m <= 0.0 {
                    " - the hull contains singular matrices"
                } else {
                    ""
                }
            );
        }
        s
    }
}
