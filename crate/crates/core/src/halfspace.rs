//! Two linear maps glued along a hyperplane, in any dimension.
//!
//! `x -> A x` on `<v, x> >= 0` and `x -> B x` on `<v, x> <= 0`, where `A` and
//! `B` agree on `v^perp`. Writing `A^{-1} B v = sum gamma_i w_i + gamma_k v`
//! in a basis `(w_1..w_{k-1}, v)` with `w_i` spanning `v^perp`, the map is a
//! homeomorphism exactly when `gamma_k > 0`, i.e. `det A * det B > 0`.
//! When `gamma_k < 0`, `v` and `sum(-gamma_i/gamma_k) w_i + v/gamma_k` collide.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::angles::Sector;
use crate::linalg::{Mat2, Vec2};
use crate::pwlmap::{MapError, Piece, PwlMap2, VerdictTag};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum HalfSpaceError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("normal vector is zero")]
    ZeroNormal,
    #[error("A and B differ on basis vector w_{index} by {mismatch:e}")]
    Disagree { index: usize, mismatch: f64 },
    #[error("A is singular")]
    SingularA,
    #[error("no collision: det(A)*det(B) >= 0")]
    NotApplicable,
    #[error("witness failed verification: {0}")]
    WitnessCheck(String),
    #[error("planar conversion needs k = 2")]
    NotPlanar,
}

/// Square `k x k` real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MatK {
    inner: DMatrix<f64>,
}

impl MatK {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, HalfSpaceError> {
        let k = rows.len();
        if k == 0 || rows.iter().any(|r| r.len() != k) {
            return Err(HalfSpaceError::DimensionMismatch(
                "matrix must be square and nonempty".into(),
            ));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Ok(MatK {
            inner: DMatrix::from_row_slice(k, k, &flat),
        })
    }

    pub fn identity(k: usize) -> Self {
        MatK {
            inner: DMatrix::identity(k, k),
        }
    }

    pub fn diag(d: &[f64]) -> Self {
        MatK {
            inner: DMatrix::from_diagonal(&DVector::from_column_slice(d)),
        }
    }

    pub fn k(&self) -> usize {
        self.inner.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    /// Determinant through LU with partial pivoting.
    pub fn det(&self) -> f64 {
        self.inner.clone().lu().determinant()
    }

    pub fn max_row_norm(&self) -> f64 {
        self.inner.row_iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    pub fn is_singular(&self) -> bool {
        let scale = self.max_row_norm().powi(self.k() as i32);
        !(self.det().abs() > 1e-10 * scale)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (&self.inner * DVector::from_column_slice(x))
            .iter()
            .copied()
            .collect()
    }

    pub fn solve(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        self.inner
            .clone()
            .lu()
            .solve(&DVector::from_column_slice(rhs))
            .map(|y| y.iter().copied().collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Orthonormal basis of `v^perp`: standard basis vectors other than the
/// largest coordinate of `v`, Gram-Schmidt'ed against `v` and each other.
fn complement_basis(v: &[f64]) -> Vec<Vec<f64>> {
    let k = v.len();
    let nv = norm(v);
    let e: Vec<f64> = v.iter().map(|x| x / nv).collect();
    let pivot = (0..k)
        .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
        .unwrap_or(0);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k.saturating_sub(1));
    for j in (0..k).filter(|&j| j != pivot) {
        let mut w = vec![0.0; k];
        w[j] = 1.0;
        // two passes keep orthogonality at the 1e-16 level
        for _ in 0..2 {
            for q in std::iter::once(&e).chain(basis.iter()) {
                let c = dot(&w, q);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
        let n = norm(&w);
        w.iter_mut().for_each(|x| *x /= n);
        basis.push(w);
    }
    basis
}

/// The coefficients of `A^{-1} B v` in the basis `(w_1..w_{k-1}, v)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Gammas {
    pub gammas: Vec<f64>,
    pub gamma_k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfSpaceWitness {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub image: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfSpaceVerdict {
    pub tag: VerdictTag,
    pub degree: Option<i64>,
    pub det_a: f64,
    pub det_b: f64,
    pub gamma_k: Option<f64>,
    pub witness: Option<HalfSpaceWitness>,
}

/// Two-piece map glued along the hyperplane `v^perp`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpaceMap {
    a: MatK,
    b: MatK,
    v: Vec<f64>,
    basis_w: Vec<Vec<f64>>,
}

impl HalfSpaceMap {
    pub fn new(a: MatK, b: MatK, v: Vec<f64>) -> Result<Self, HalfSpaceError> {
        let k = a.k();
        if b.k() != k || v.len() != k {
            return Err(HalfSpaceError::DimensionMismatch(format!(
                "A is {k}x{k}, B is {0}x{0}, v has {1} entries",
                b.k(),
                v.len()
            )));
        }
        if !(norm(&v) > 0.0) {
            return Err(HalfSpaceError::ZeroNormal);
        }
        let basis_w = complement_basis(&v);
        for (index, w) in basis_w.iter().enumerate() {
            let aw = a.apply(w);
            let mismatch = dist(&aw, &b.apply(w));
            if !(mismatch <= 1e-9 * norm(&aw).max(1.0)) {
                return Err(HalfSpaceError::Disagree { index, mismatch });
            }
        }
        Ok(HalfSpaceMap { a, b, v, basis_w })
    }

    pub fn k(&self) -> usize {
        self.v.len()
    }

    pub fn a(&self) -> &MatK {
        &self.a
    }

    pub fn b(&self) -> &MatK {
        &self.b
    }

    pub fn normal(&self) -> &[f64] {
        &self.v
    }

    pub fn basis_w(&self) -> &[Vec<f64>] {
        &self.basis_w
    }

    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        if dot(&self.v, x) >= 0.0 {
            self.a.apply(x)
        } else {
            self.b.apply(x)
        }
    }

    pub fn gamma_coefficients(&self) -> Result<Gammas, HalfSpaceError> {
        if self.a.is_singular() {
            return Err(HalfSpaceError::SingularA);
        }
        let bv = self.b.apply(&self.v);
        let y = self.a.solve(&bv).ok_or(HalfSpaceError::SingularA)?;
        Ok(Gammas {
            gammas: self.basis_w.iter().map(|w| dot(&y, w)).collect(),
            gamma_k: dot(&y, &self.v) / dot(&self.v, &self.v),
        })
    }

    pub fn decide(&self) -> HalfSpaceVerdict {
        let (det_a, det_b) = (self.a.det(), self.b.det());
        let mut verdict = HalfSpaceVerdict {
            tag: VerdictTag::Degenerate,
            degree: None,
            det_a,
            det_b,
            gamma_k: None,
            witness: None,
        };
        if self.a.is_singular() || self.b.is_singular() {
            return verdict;
        }
        verdict.gamma_k = self.gamma_coefficients().ok().map(|g| g.gamma_k);
        if det_a * det_b > 0.0 {
            verdict.tag = VerdictTag::Invertible;
            verdict.degree = Some(if det_a > 0.0 { 1 } else { -1 });
        } else {
            verdict.tag = VerdictTag::NonInjective;
            verdict.witness = self.witness().ok();
        }
        verdict
    }

    /// Explicit colliding pair for `det A * det B < 0`, verified before return.
    pub fn witness(&self) -> Result<HalfSpaceWitness, HalfSpaceError> {
        if !(self.a.det() * self.b.det() < 0.0) {
            return Err(HalfSpaceError::NotApplicable);
        }
        let g = self.gamma_coefficients()?;
        let k = self.k();
        let mut x2: Vec<f64> = self.v.iter().map(|vi| vi / g.gamma_k).collect();
        for (gi, w) in g.gammas.iter().zip(&self.basis_w) {
            let c = -gi / g.gamma_k;
            (0..k).for_each(|j| x2[j] += c * w[j]);
        }
        let x1 = self.v.clone();
        if !(dot(&self.v, &x2) < 0.0) {
            return Err(HalfSpaceError::WitnessCheck(
                "second point is not on the negative side".into(),
            ));
        }
        let y1 = self.evaluate(&x1);
        let y2 = self.evaluate(&x2);
        let gap = dist(&y1, &y2);
        if !(gap <= 1e-8 * norm(&y1)) {
            return Err(HalfSpaceError::WitnessCheck(format!(
                "images differ by {gap:e}"
            )));
        }
        Ok(HalfSpaceWitness { x1, x2, image: y1 })
    }

    /// For `k = 2`, the same map as a two-sector planar fan.
    pub fn to_planar(&self) -> Result<PwlMap2, MapError> {
        if self.k() != 2 {
            return Err(MapError::InvalidArgument(
                "planar conversion needs k = 2".into(),
            ));
        }
        let m = |x: &MatK| Mat2::new(x.entry(0, 0), x.entry(0, 1), x.entry(1, 0), x.entry(1, 1));
        let normal = Vec2::new(self.v[0], self.v[1])
            .direction()
            .ok_or(MapError::InvalidArgument("zero normal".into()))?;
        let seam = normal.angle() - std::f64::consts::FRAC_PI_2;
        let half = |start: f64| {
            Sector::new(start, std::f64::consts::PI)
                .map_err(|e| MapError::InvalidArgument(e.to_string()))
        };
        PwlMap2::validate(vec![
            Piece::new(half(seam)?, m(&self.a)),
            Piece::new(half(seam + std::f64::consts::PI)?, m(&self.b)),
        ])
    }
}

/// Random instance: `B = A + b v^T` agrees with `A` on `v^perp`. Both
/// determinant signs occur. Poorly conditioned draws are rejected.
pub fn random_halfspace_map(k: usize, seed: u64) -> Result<HalfSpaceMap, HalfSpaceError> {
    if k == 0 {
        return Err(HalfSpaceError::DimensionMismatch(
            "k must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |n: usize| -> Vec<f64> { (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect() };
    loop {
        let a_flat = draw(k * k);
        let v = draw(k);
        let bvec = draw(k);
        if norm(&v) < 0.1 {
            continue;
        }
        let rows: Vec<Vec<f64>> = a_flat.chunks(k).map(|r| r.to_vec()).collect();
        let a = MatK::from_rows(&rows)?;
        let b_rows: Vec<Vec<f64>> = (0..k)
            .map(|i| (0..k).map(|j| rows[i][j] + bvec[i] * v[j]).collect())
            .collect();
        let b = MatK::from_rows(&b_rows)?;
        let conditioned = |m: &MatK| m.det().abs() > 1e-3 * m.max_row_norm().powi(k as i32);
        if !conditioned(&a) || !conditioned(&b) {
            continue;
        }
        return HalfSpaceMap::new(a, b, v);
    }
}
