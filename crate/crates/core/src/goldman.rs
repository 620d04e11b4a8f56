//! Curvature of the planar section `∂F ∩ P(ξ, u^j)` viewed as an implicit
//! space curve, cut out by `f = 0` together with the `n − 2` hyperplanes
//!
//! ```text
//! p_k(η) = η_k − ξ_k + a_ki (η_i − ξ_i) + a_kj (η_j − ξ_j),   k ∉ {i, j}
//! a_kl   = −f_l f_k / (f_i² + f_j²),                          l ∈ {i, j}
//! ```
//!
//! Two routes are provided: the general implicit-curve formula
//! `k = ‖(T·∇T) ∧ T‖ / ‖T‖³` with `T` the bordered-determinant tangent, and
//! its closed form
//!
//! ```text
//! k = |f_ii f_j² − 2 f_i f_j f_ij + f_jj f_i²| / (‖∇f‖ (f_i² + f_j²))
//! ```
//!
//! Both equal `2κ̂(ξ, u^j)`.

use thiserror::Error;

use crate::body::{BodyError, BoundaryPoint, ImplicitBody};
use crate::expr::Expr;
use crate::linalg::{self, dot, exterior_magnitude, norm, Mat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GoldmanError {
    #[error("index {j} is the pivot or out of range (n = {n}, pivot = {pivot})")]
    InvalidIndex { j: usize, n: usize, pivot: usize },
    #[error("intersection tangent is degenerate (‖Tan‖ = {norm:e})")]
    DegenerateTangent { norm: f64 },
    #[error("system was built for a different point")]
    PointMismatch,
    #[error(transparent)]
    Body(#[from] BodyError),
}

/// One hyperplane `p_k` of the section system.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneRow {
    pub k: usize,
    pub a_ki: f64,
    pub a_kj: f64,
}

/// The hyperplanes whose intersection is `P(ξ, u^j)`. Empty for `n = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneSystem {
    pub xi: Vec<f64>,
    pub i: usize,
    pub j: usize,
    /// Ascending in `k`.
    pub rows: Vec<PlaneRow>,
}

impl PlaneSystem {
    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    /// `p_k(η)` for the row at position `row`.
    pub fn evaluate(&self, row: usize, eta: &[f64]) -> f64 {
        let r = &self.rows[row];
        let (i, j, k) = (self.i, self.j, r.k);
        (eta[k] - self.xi[k]) + r.a_ki * (eta[i] - self.xi[i]) + r.a_kj * (eta[j] - self.xi[j])
    }

    /// Constant gradient of `p_k`: 1 at `k`, `a_ki` at `i`, `a_kj` at `j`.
    pub fn row_gradient(&self, row: usize) -> Vec<f64> {
        let r = &self.rows[row];
        let mut g = vec![0.0; self.dim()];
        g[r.k] = 1.0;
        g[self.i] = r.a_ki;
        g[self.j] = r.a_kj;
        g
    }
}

fn check_index(p: &BoundaryPoint, j: usize) -> Result<(), GoldmanError> {
    if j == p.pivot() || j >= p.dim() {
        return Err(GoldmanError::InvalidIndex {
            j,
            n: p.dim(),
            pivot: p.pivot(),
        });
    }
    Ok(())
}

/// Section hyperplanes for the frame direction `u^j` (`j` 0-based).
pub fn plane_system(p: &BoundaryPoint, j: usize) -> Result<PlaneSystem, GoldmanError> {
    check_index(p, j)?;
    let g = p.grad();
    let i = p.pivot();
    let denom = g[i] * g[i] + g[j] * g[j];
    let rows = (0..p.dim())
        .filter(|&k| k != i && k != j)
        .map(|k| PlaneRow {
            k,
            a_ki: -g[i] * g[k] / denom,
            a_kj: -g[j] * g[k] / denom,
        })
        .collect();
    Ok(PlaneSystem {
        xi: p.point().to_vec(),
        i,
        j,
        rows,
    })
}

/// Constant cofactors `C[m][c]` with `Tan_m(η) = Σ_c C[m][c] f_c(η)`.
///
/// `Tan` is the determinant of the bordered matrix with rows
/// `e; ∇f(η); ∇p_k1; …`, expanded along the symbolic first row; only the
/// `∇f` row depends on `η`, so each entry is linear in the gradient.
fn tangent_cofactors(sys: &PlaneSystem) -> Vec<Vec<f64>> {
    let n = sys.dim();
    if n == 2 {
        // Tan = (−f_2, f_1)
        return vec![vec![0.0, -1.0], vec![1.0, 0.0]];
    }
    let plane_rows: Vec<Vec<f64>> = (0..sys.rows.len()).map(|r| sys.row_gradient(r)).collect();
    (0..n)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            (0..n)
                .map(|c| {
                    if c == m {
                        return 0.0;
                    }
                    let mut rows = Vec::with_capacity(n - 1);
                    rows.push(
                        (0..n)
                            .filter(|&l| l != m)
                            .map(|l| if l == c { 1.0 } else { 0.0 })
                            .collect(),
                    );
                    for pr in &plane_rows {
                        rows.push((0..n).filter(|&l| l != m).map(|l| pr[l]).collect());
                    }
                    let minor = Mat::from_rows(&rows).expect("square minor");
                    sign * linalg::determinant(&minor)
                })
                .collect()
        })
        .collect()
}

fn check_system(p: &BoundaryPoint, sys: &PlaneSystem) -> Result<(), GoldmanError> {
    if sys.xi != p.point() || sys.i != p.pivot() {
        return Err(GoldmanError::PointMismatch);
    }
    Ok(())
}

fn tangent_scale(p: &BoundaryPoint, sys: &PlaneSystem) -> f64 {
    let rows: f64 = (0..sys.rows.len())
        .map(|r| norm(&sys.row_gradient(r)).max(1.0))
        .product();
    p.grad_norm() * rows
}

/// Tangent of the intersection curve at `ξ`. For `n = 2` this is
/// `(−f_2, f_1)`; otherwise it is parallel to `u^j` with length
/// `‖∇f‖² |f_i| ‖u^j‖ / (f_i² + f_j²)`.
pub fn goldman_tangent(p: &BoundaryPoint, sys: &PlaneSystem) -> Result<Vec<f64>, GoldmanError> {
    check_system(p, sys)?;
    let cof = tangent_cofactors(sys);
    let tan: Vec<f64> = cof.iter().map(|row| dot(row, p.grad())).collect();
    let len = norm(&tan);
    if len <= 1e-12 * tangent_scale(p, sys) {
        return Err(GoldmanError::DegenerateTangent { norm: len });
    }
    Ok(tan)
}

/// Symbolic tangent components `Tan_m` as expressions in `x`.
pub fn tangent_exprs(body: &ImplicitBody, sys: &PlaneSystem) -> Vec<Expr> {
    let grads = body.gradient_exprs();
    tangent_cofactors(sys)
        .iter()
        .map(|row| {
            row.iter()
                .zip(grads)
                .filter(|(c, _)| **c != 0.0)
                .map(|(c, g)| Expr::Const(*c) * g.clone())
                .reduce(|acc, t| acc + t)
                .unwrap_or(Expr::Const(0.0))
        })
        .collect()
}

/// General implicit-curve curvature `‖(T·∇T) ∧ T‖ / ‖T‖³`, with `∇T`
/// obtained by differentiating the tangent expressions symbolically.
pub fn goldman_curvature_general(
    body: &ImplicitBody,
    p: &BoundaryPoint,
    sys: &PlaneSystem,
) -> Result<f64, GoldmanError> {
    check_system(p, sys)?;
    let n = p.dim();
    let x = p.point();
    let tan_exprs = tangent_exprs(body, sys);
    let tan: Vec<f64> = tan_exprs
        .iter()
        .map(|e| e.evaluate(x))
        .collect::<Result<_, _>>()
        .map_err(BodyError::from)?;
    let len = norm(&tan);
    if len <= 1e-12 * tangent_scale(p, sys) {
        return Err(GoldmanError::DegenerateTangent { norm: len });
    }
    // jac[l][m] = ∂Tan_m/∂x_l: column m is the gradient of component m
    let mut jac = Mat::zeros(n);
    for (m, e) in tan_exprs.iter().enumerate() {
        for l in 0..n {
            jac[(l, m)] = e.differentiate(l).evaluate(x).map_err(BodyError::from)?;
        }
    }
    // row vector Tan times the matrix
    let accel: Vec<f64> = (0..n)
        .map(|m| (0..n).map(|l| tan[l] * jac[(l, m)]).sum())
        .collect();
    let wedge = exterior_magnitude(&accel, &tan).expect("equal dimensions");
    Ok(wedge / (len * len * len))
}

/// Closed-form curvature of the section curve in direction `u^j`.
pub fn goldman_curvature_closed(p: &BoundaryPoint, j: usize) -> Result<f64, GoldmanError> {
    check_index(p, j)?;
    let i = p.pivot();
    let g = p.grad();
    let h = p.hess();
    let (fi, fj) = (g[i], g[j]);
    let num = h[(i, i)] * fj * fj - 2.0 * fi * fj * h[(i, j)] + h[(j, j)] * fi * fi;
    Ok(num.abs() / (p.grad_norm() * (fi * fi + fj * fj)))
}
