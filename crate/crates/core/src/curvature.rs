//! Directional (2-dimensional) curvature at a boundary point.
//!
//! For a tangent direction `u`,
//!
//! ```text
//! γ̂(ξ, u) = ⟨∇²f(ξ) u, u⟩ / (2 ⟨ξ, ∇f(ξ)⟩ ‖u‖²)
//! κ̂(ξ, u) = ⟨∇²f(ξ) u, u⟩ / (2 ‖∇f(ξ)‖ ‖u‖²)  = γ̂ / ‖ξ*‖
//! R̂(ξ, u) = 1 / (2 κ̂)
//! ```
//!
//! `γ̂` is the limit of the planar modulus of strict convexity divided by
//! `r²`; the `oracle` module checks this from the definition. The
//! direction-free curvature (the liminf over all dual pairs) is only bounded
//! above by `γ̂(ξ, u)` for every `u`, with equality in the plane when it is
//! positive; it is not computed here.

use thiserror::Error;

use crate::body::{BodyError, BoundaryPoint, ImplicitBody, TangentFrame};
use crate::linalg::{self, dot, norm, LinalgError, Mat};

/// `κ̂` below this is reported as a convexity violation.
pub const CONVEXITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error("direction is the zero vector")]
    ZeroDirection,
    #[error("direction is not in the tangent hyperplane")]
    NotTangent,
    #[error("negative curvature {0:e} has no curvature radius")]
    NegativeCurvature(f64),
    #[error("translation vector is not interior (f(y) = {value:e})")]
    NotInterior { value: f64 },
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Curvature data in a single tangent direction.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalCurvature {
    pub direction: Vec<f64>,
    pub gamma_hat: f64,
    pub kappa_hat: f64,
    /// `+∞` for zero curvature; negative (with `convexity_warning`) when the
    /// field is not convex in this direction.
    pub radius_hat: f64,
    pub convexity_warning: bool,
}

/// Extreme curvatures over the unit tangent sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureExtrema {
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub dir_min: Vec<f64>,
    pub dir_max: Vec<f64>,
}

fn check_direction(p: &BoundaryPoint, u: &[f64]) -> Result<f64, CurvatureError> {
    if u.len() != p.dim() {
        return Err(BodyError::DimensionMismatch {
            expected: p.dim(),
            got: u.len(),
        }
        .into());
    }
    let un2 = dot(u, u);
    if un2 == 0.0 {
        return Err(CurvatureError::ZeroDirection);
    }
    if !p.in_tangent_hyperplane(u) {
        return Err(CurvatureError::NotTangent);
    }
    Ok(un2)
}

/// `γ̂(ξ, u)`; any nonzero tangent `u`, not only the frame vectors.
pub fn gamma_directional(p: &BoundaryPoint, u: &[f64]) -> Result<f64, CurvatureError> {
    let un2 = check_direction(p, u)?;
    Ok(p.hess().bilinear(u, u) / (2.0 * p.pairing() * un2))
}

/// `κ̂(ξ, u)`, `γ̂(ξ, u)` and `R̂(ξ, u)` for a nonzero tangent `u`.
pub fn kappa_directional(
    p: &BoundaryPoint,
    u: &[f64],
) -> Result<DirectionalCurvature, CurvatureError> {
    let un2 = check_direction(p, u)?;
    let quad = p.hess().bilinear(u, u);
    let gamma_hat = quad / (2.0 * p.pairing() * un2);
    let kappa_hat = quad / (2.0 * p.grad_norm() * un2);
    let convexity_warning = kappa_hat < -CONVEXITY_TOLERANCE;
    let radius_hat = if convexity_warning {
        1.0 / (2.0 * kappa_hat)
    } else {
        curvature_radius(kappa_hat.max(0.0))?
    };
    Ok(DirectionalCurvature {
        direction: u.to_vec(),
        gamma_hat,
        kappa_hat,
        radius_hat,
        convexity_warning,
    })
}

/// `1/(2κ)`, `+∞` at zero.
pub fn curvature_radius(kappa: f64) -> Result<f64, CurvatureError> {
    if kappa < 0.0 {
        return Err(CurvatureError::NegativeCurvature(kappa));
    }
    if kappa == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (2.0 * kappa))
}

/// Curvature in every frame direction `u^j`, in frame order.
pub fn frame_curvatures(
    p: &BoundaryPoint,
    frame: &TangentFrame,
) -> Result<Vec<DirectionalCurvature>, CurvatureError> {
    frame
        .basis
        .iter()
        .map(|u| kappa_directional(p, u))
        .collect()
}

/// Minimum and maximum of `κ̂` over unit tangent vectors: eigenvalues of the
/// Hessian projected onto the orthonormal frame, divided by `2‖∇f‖`.
pub fn extrema(
    p: &BoundaryPoint,
    frame: &TangentFrame,
) -> Result<CurvatureExtrema, CurvatureError> {
    let q = &frame.ortho;
    let m = q.len();
    let h = p.hess();
    let hq: Vec<Vec<f64>> = q.iter().map(|v| h.mul_vec(v)).collect();
    let mut proj = Mat::zeros(m);
    for a in 0..m {
        for b in a..m {
            let v = dot(&hq[a], &q[b]);
            proj[(a, b)] = v;
            proj[(b, a)] = v;
        }
    }
    let eig = linalg::sym_eigen(&proj)?;
    let scale = 2.0 * p.grad_norm();
    let lift = |coeffs: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; p.dim()];
        for (c, v) in coeffs.iter().zip(q) {
            out = linalg::add_scaled(&out, *c, v);
        }
        let len = norm(&out);
        linalg::scale(&out, 1.0 / len)
    };
    Ok(CurvatureExtrema {
        kappa_min: eig.values[0] / scale,
        kappa_max: eig.values[m - 1] / scale,
        dir_min: lift(&eig.vectors[0]),
        dir_max: lift(&eig.vectors[m - 1]),
    })
}

/// `F − y` for an interior `y`: the field `x ↦ f(x + y)`.
pub fn translate_body(body: &ImplicitBody, y: &[f64]) -> Result<ImplicitBody, CurvatureError> {
    let value = body.value(y)?;
    if !(value < 0.0) {
        return Err(CurvatureError::NotInterior { value });
    }
    Ok(body.shifted(y)?)
}
