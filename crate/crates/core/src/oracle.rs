//! Brute-force checks built from the definitions rather than the closed
//! formulas:
//!
//! * the planar modulus of strict convexity
//!   `Ĉ(r, ξ, u) = inf{⟨ξ − η, ξ*⟩ : η ∈ ∂F ∩ P(ξ, u), ‖ξ − η‖ = r}`,
//!   found by locating where the circle of radius `r` around `ξ` in the plane
//!   `ξ + span{u, ∇f(ξ)}` crosses `{f = 0}`;
//! * `Ĉ(r)/r²` on a shrinking radius schedule, which tends to `γ̂(ξ, u)`;
//! * the smallest ball `ξ − rξ* + r‖ξ*‖B̄` containing the nearby section,
//!   whose parameter tends to `R̂/‖ξ*‖`.
//!
//! All estimators keep the base point fixed at `ξ` instead of also letting it
//! vary in the limit. Under the C² hypothesis the quotient is continuous in
//! the base point, so this narrowing does not change the limit value.

use std::f64::consts::PI;

use thiserror::Error;

use crate::body::{BodyError, BoundaryPoint, ImplicitBody};
use crate::linalg::{self, dot, norm};

/// Default number of circle samples.
pub const DEFAULT_SAMPLES: usize = 512;
/// Number of halvings in the `Ĉ(r)/r²` schedule after `r0`.
pub const SCHEDULE_LEVELS: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("direction is zero or not tangent")]
    NotTangent,
    #[error("radius {r} must lie in (0, {limit})")]
    InvalidRadius { r: f64, limit: f64 },
    #[error("at least 64 circle samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("circle of radius {r} around the point does not meet the boundary")]
    NoBoundaryIntersection { r: f64 },
    #[error(transparent)]
    Body(#[from] BodyError),
}

/// One evaluation of the planar modulus at chord radius `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusSample {
    pub r: f64,
    /// `Ĉ(r, ξ, u)`.
    pub value: f64,
    /// Boundary points on the circle; the first attains the minimum.
    pub witnesses: Vec<Vec<f64>>,
    /// More than two crossings were found (non-generic section); all are kept.
    pub extra_crossings: bool,
}

/// Orthonormal basis `(e_t, e_n)` of the section plane through `ξ`.
fn plane_basis(p: &BoundaryPoint, u: &[f64]) -> Result<(Vec<f64>, Vec<f64>), OracleError> {
    if u.len() != p.dim() || !p.in_tangent_hyperplane(u) {
        return Err(OracleError::NotTangent);
    }
    let q = linalg::orthonormalize(&[u.to_vec(), p.grad().to_vec()])
        .map_err(|_| OracleError::NotTangent)?;
    let mut it = q.into_iter();
    Ok((it.next().unwrap(), it.next().unwrap()))
}

/// Boundary crossings of the circle `ξ + r(cosθ e_t + sinθ e_n)`: sign
/// changes on a uniform `θ` grid, each refined by bisection to full
/// precision.
fn circle_crossings(
    body: &ImplicitBody,
    xi: &[f64],
    et: &[f64],
    en: &[f64],
    r: f64,
    samples: usize,
) -> Result<Vec<Vec<f64>>, OracleError> {
    let point = |theta: f64| -> Vec<f64> {
        let (s, c) = theta.sin_cos();
        xi.iter()
            .zip(et.iter().zip(en))
            .map(|(x, (t, n))| x + r * (c * t + s * n))
            .collect()
    };
    let f = |theta: f64| -> Result<f64, OracleError> { Ok(body.value(&point(theta))?) };

    let step = 2.0 * PI / samples as f64;
    let thetas: Vec<f64> = (0..samples).map(|k| k as f64 * step).collect();
    let values: Vec<f64> = thetas.iter().map(|&t| f(t)).collect::<Result<_, _>>()?;

    let mut roots = Vec::new();
    for k in 0..samples {
        let (v0, v1) = (values[k], values[(k + 1) % samples]);
        if v0 == 0.0 {
            roots.push(point(thetas[k]));
            continue;
        }
        if v1 == 0.0 || v0.signum() == v1.signum() {
            continue;
        }
        let (mut lo, mut hi) = (thetas[k], thetas[k] + step);
        let neg_at_lo = v0 < 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = f(mid)?;
            if v == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (v < 0.0) == neg_at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (pl, ph) = (point(lo), point(hi));
        let root = if body.value(&pl)?.abs() <= body.value(&ph)?.abs() {
            pl
        } else {
            ph
        };
        roots.push(root);
    }
    Ok(roots)
}

fn drop_along_dual(p: &BoundaryPoint, eta: &[f64]) -> f64 {
    dot(&linalg::sub(p.point(), eta), p.dual())
}

/// `Ĉ(r, ξ, u)` by sampling the section circle with `samples` points.
pub fn modulus_bruteforce(
    body: &ImplicitBody,
    p: &BoundaryPoint,
    u: &[f64],
    r: f64,
    samples: usize,
) -> Result<ModulusSample, OracleError> {
    if !(r > 0.0 && r < body.delta()) {
        return Err(OracleError::InvalidRadius {
            r,
            limit: body.delta(),
        });
    }
    if samples < 64 {
        return Err(OracleError::TooFewSamples(samples));
    }
    let (et, en) = plane_basis(p, u)?;
    let mut roots = circle_crossings(body, p.point(), &et, &en, r, samples)?;
    if roots.is_empty() {
        return Err(OracleError::NoBoundaryIntersection { r });
    }
    let drops: Vec<f64> = roots.iter().map(|eta| drop_along_dual(p, eta)).collect();
    let best = drops
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap();
    roots.swap(0, best);
    Ok(ModulusSample {
        r,
        value: drops[best],
        extra_crossings: roots.len() > 2,
        witnesses: roots,
    })
}

/// `Ĉ(r_k)/r_k²` along `r_k = r0·2^{-k}`, `r0 = min(δ/4, 0.1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaEstimate {
    /// Quotient at the smallest radius.
    pub value: f64,
    /// `(r_k, Ĉ(r_k)/r_k²)` for `k = 0..=6`.
    pub sequence: Vec<(f64, f64)>,
    pub extra_crossings: bool,
}

impl GammaEstimate {
    /// Relative change between the last two quotients.
    pub fn last_step_change(&self) -> f64 {
        let n = self.sequence.len();
        let (a, b) = (self.sequence[n - 2].1, self.sequence[n - 1].1);
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    }
}

pub fn gamma_estimate(
    body: &ImplicitBody,
    p: &BoundaryPoint,
    u: &[f64],
) -> Result<GammaEstimate, OracleError> {
    let r0 = (body.delta() / 4.0).min(0.1);
    let mut sequence = Vec::with_capacity(SCHEDULE_LEVELS + 1);
    let mut extra = false;
    for k in 0..=SCHEDULE_LEVELS {
        let r = r0 / f64::powi(2.0, k as i32);
        let s = modulus_bruteforce(body, p, u, r, DEFAULT_SAMPLES)?;
        extra |= s.extra_crossings;
        sequence.push((r, s.value / (r * r)));
    }
    Ok(GammaEstimate {
        value: sequence[SCHEDULE_LEVELS].1,
        sequence,
        extra_crossings: extra,
    })
}

/// Number of radii sampled inside `ξ + εB̄` by [`radius_containment`].
pub const CONTAINMENT_RADII: usize = 8;

/// Smallest `r` with the section near `ξ` inside `ξ − rξ* + r‖ξ*‖B̄`.
///
/// A section point `η` lies in that ball iff
/// `r ≥ ‖η − ξ‖² / (2⟨ξ − η, ξ*⟩)`; the maximum of this bound over the
/// sampled crossings at radii `ε·k/8`, `k = 1..=8`, is returned. A sample
/// that does not drop below the supporting line (flat or non-convex section)
/// makes the answer `+∞`.
pub fn radius_containment(
    body: &ImplicitBody,
    p: &BoundaryPoint,
    u: &[f64],
    eps: f64,
) -> Result<f64, OracleError> {
    let limit = body.delta() / 2.0;
    if !(eps > 0.0 && eps < limit) {
        return Err(OracleError::InvalidRadius { r: eps, limit });
    }
    let (et, en) = plane_basis(p, u)?;
    let dual_norm = norm(p.dual());
    let mut worst: f64 = 0.0;
    for k in 1..=CONTAINMENT_RADII {
        let r = eps * k as f64 / CONTAINMENT_RADII as f64;
        let roots = circle_crossings(body, p.point(), &et, &en, r, DEFAULT_SAMPLES)?;
        if roots.is_empty() {
            return Err(OracleError::NoBoundaryIntersection { r });
        }
        for eta in &roots {
            let d2 = dot(&linalg::sub(eta, p.point()), &linalg::sub(eta, p.point()));
            let drop = drop_along_dual(p, eta);
            // curvature-equivalent drop below 1e-9 counts as flat
            if drop <= 1e-9 * d2 * dual_norm {
                return Ok(f64::INFINITY);
            }
            worst = worst.max(d2 / (2.0 * drop));
        }
    }
    Ok(worst)
}
