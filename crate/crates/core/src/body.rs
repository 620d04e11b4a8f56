//! Implicit convex bodies `F ⊂ {f ≤ 0}` with the origin in the interior,
//! boundary-point validation, dual vectors and tangent frames.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{self, Expr, ExprError};
use crate::linalg::{self, dot, norm, norm_inf, Mat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BodyError {
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("locality radius must be positive, got {0}")]
    BadDelta(f64),
    #[error("field is not negative at the origin (f(0) = {value}); the origin must be interior")]
    OriginNotInterior { value: f64 },
    #[error("point has dimension {got}, body has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not on the boundary: |f| = {residual:e} exceeds {allowed:e}")]
    NotOnBoundary { residual: f64, allowed: f64 },
    #[error("gradient vanishes at the point (‖∇f‖ = {grad_norm:e})")]
    NonSmoothPoint { grad_norm: f64 },
    #[error("⟨ξ, ∇f(ξ)⟩ = {pairing:e} is not positive")]
    OrientationViolation { pairing: f64 },
    #[error("ray through the point does not cross the boundary in [1e-9, 1e9]")]
    RayEscapes,
    #[error("zero vector has no Minkowski functional ray")]
    ZeroPoint,
    #[error("invalid body description: {0}")]
    Json(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Numeric tolerances used when validating boundary points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "Tolerances::default_boundary")]
    pub boundary: f64,
    #[serde(default = "Tolerances::default_pivot")]
    pub pivot: f64,
}

impl Tolerances {
    fn default_boundary() -> f64 {
        1e-9
    }
    fn default_pivot() -> f64 {
        1e-9
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            boundary: Self::default_boundary(),
            pivot: Self::default_pivot(),
        }
    }
}

/// On-disk body description:
/// `{ "n": int, "f": string, "delta": number, "tolerances": {..} }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub n: usize,
    pub f: String,
    pub delta: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl BodySpec {
    pub fn from_json(text: &str) -> Result<Self, BodyError> {
        serde_json::from_str(text).map_err(|e| BodyError::Json(e.to_string()))
    }

    /// Canonical serialization: fixed field order, defaults filled in.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("body spec serializes")
    }

    pub fn build(&self) -> Result<ImplicitBody, BodyError> {
        let f = expr::parse(&self.f, self.n)?;
        ImplicitBody::with_tolerances(self.n, f, self.delta, self.tolerances)
    }
}

/// A convex body described near its boundary by a C² field `f`.
///
/// The gradient and Hessian of `f` are differentiated symbolically once at
/// construction. Convexity of `F` is trusted, not checked.
#[derive(Debug, Clone)]
pub struct ImplicitBody {
    n: usize,
    f: Expr,
    grad: Vec<Expr>,
    /// Upper triangle, `hess[r][s - r]` holds `∂²f/∂x_r∂x_s` for `s ≥ r`.
    hess: Vec<Vec<Expr>>,
    delta: f64,
    tol: Tolerances,
}

impl ImplicitBody {
    pub fn new(n: usize, f: Expr, delta: f64) -> Result<Self, BodyError> {
        Self::with_tolerances(n, f, delta, Tolerances::default())
    }

    pub fn with_tolerances(
        n: usize,
        f: Expr,
        delta: f64,
        tol: Tolerances,
    ) -> Result<Self, BodyError> {
        if n < 2 {
            return Err(BodyError::BadDimension(n));
        }
        if !(delta > 0.0) {
            return Err(BodyError::BadDelta(delta));
        }
        if let Some(k) = f.max_var() {
            if k >= n {
                return Err(ExprError::UnknownVariable {
                    index: k + 1,
                    n,
                    position: 0,
                }
                .into());
            }
        }
        let at_origin = f.evaluate(&vec![0.0; n])?;
        if !(at_origin < 0.0) {
            return Err(BodyError::OriginNotInterior { value: at_origin });
        }
        let grad = expr::gradient(&f, n);
        let hess = (0..n)
            .map(|r| (r..n).map(|s| grad[r].differentiate(s)).collect())
            .collect();
        Ok(ImplicitBody {
            n,
            f,
            grad,
            hess,
            delta,
            tol,
        })
    }

    /// Parses `text` in the expression language and builds the body.
    pub fn parse(n: usize, text: &str, delta: f64) -> Result<Self, BodyError> {
        Self::new(n, expr::parse(text, n)?, delta)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Expr {
        &self.f
    }

    pub fn gradient_exprs(&self) -> &[Expr] {
        &self.grad
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), BodyError> {
        if x.len() != self.n {
            return Err(BodyError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> Result<f64, BodyError> {
        self.check_dim(x)?;
        Ok(self.f.evaluate(x)?)
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>, BodyError> {
        self.check_dim(x)?;
        self.grad
            .iter()
            .map(|g| g.evaluate(x).map_err(BodyError::from))
            .collect()
    }

    pub fn hessian(&self, x: &[f64]) -> Result<Mat, BodyError> {
        self.check_dim(x)?;
        let mut h = Mat::zeros(self.n);
        for r in 0..self.n {
            for s in r..self.n {
                let v = self.hess[r][s - r].evaluate(x)?;
                h[(r, s)] = v;
                h[(s, r)] = v;
            }
        }
        Ok(h)
    }

    /// Body with field `c·f`, `c > 0`; describes the same set.
    pub fn with_scaled_field(&self, c: f64) -> Result<Self, BodyError> {
        Self::with_tolerances(
            self.n,
            Expr::Const(c) * self.f.clone(),
            self.delta,
            self.tol,
        )
    }

    /// Body with field `x ↦ f(x + y)`, i.e. `F − y`. The caller is responsible
    /// for `y` being interior.
    pub fn shifted(&self, y: &[f64]) -> Result<Self, BodyError> {
        self.check_dim(y)?;
        let y = y.to_vec();
        let f = self.f.substitute(&|k| Expr::var(k) + Expr::Const(y[k]));
        Self::with_tolerances(self.n, f, self.delta, self.tol)
    }

    /// Checks the standing hypotheses at `x` and caches the first- and
    /// second-order data there.
    pub fn validate_point(&self, x: &[f64]) -> Result<BoundaryPoint, BodyError> {
        self.check_dim(x)?;
        let value = self.f.evaluate(x)?;
        let grad = self.gradient(x)?;
        let grad_norm = norm(&grad);
        let allowed = self.tol.boundary * (1.0 + grad_norm);
        if !(value.abs() <= allowed) {
            return Err(BodyError::NotOnBoundary {
                residual: value.abs(),
                allowed,
            });
        }
        if grad_norm <= self.tol.pivot {
            return Err(BodyError::NonSmoothPoint { grad_norm });
        }
        let pairing = dot(x, &grad);
        if !(pairing > 0.0) {
            return Err(BodyError::OrientationViolation { pairing });
        }
        let threshold = self.tol.pivot * norm_inf(&grad);
        let pivot = grad
            .iter()
            .position(|g| g.abs() > threshold)
            .expect("a nonzero gradient has an entry above a fraction of its max");
        let hess = self.hessian(x)?;
        let dual = linalg::scale(&grad, 1.0 / pairing);
        Ok(BoundaryPoint {
            xi: x.to_vec(),
            value,
            grad,
            hess,
            pivot,
            dual,
            pairing,
        })
    }

    /// Minkowski functional `ρ_F(x) = inf{λ > 0 : x ∈ λF}`, found as
    /// `1/t` where `t` is the first sign change of `f(t·x)` walking outward
    /// from the origin.
    pub fn minkowski_gauge(&self, x: &[f64]) -> Result<f64, BodyError> {
        self.check_dim(x)?;
        if x.iter().all(|v| *v == 0.0) {
            return Err(BodyError::ZeroPoint);
        }
        let at = |t: f64| -> Result<f64, BodyError> {
            let p: Vec<f64> = x.iter().map(|v| v * t).collect();
            Ok(self.f.evaluate(&p)?)
        };
        const T_MIN: f64 = 1e-9;
        const T_MAX: f64 = 1e9;
        let mut lo = T_MIN;
        if at(lo)? >= 0.0 {
            return Err(BodyError::RayEscapes);
        }
        let mut hi = lo;
        loop {
            let next = (hi * 2.0).min(T_MAX);
            let v = at(next)?;
            if v == 0.0 {
                return Ok(1.0 / next);
            }
            if v > 0.0 {
                hi = next;
                break;
            }
            lo = next;
            if next >= T_MAX {
                return Err(BodyError::RayEscapes);
            }
            hi = next;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = at(mid)?;
            if v == 0.0 {
                return Ok(1.0 / mid);
            }
            if v < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // pick the endpoint with the smaller residual
        let (vl, vh) = (at(lo)?.abs(), at(hi)?.abs());
        Ok(1.0 / if vl <= vh { lo } else { hi })
    }

    /// Radial projection `x / ρ_F(x)` onto the boundary.
    pub fn project_to_boundary(&self, x: &[f64]) -> Result<Vec<f64>, BodyError> {
        let rho = self.minkowski_gauge(x)?;
        Ok(linalg::scale(x, 1.0 / rho))
    }
}

/// A validated boundary point `ξ` with `∇f(ξ)`, `∇²f(ξ)`, the pivot index
/// and the dual vector `ξ* = ∇f(ξ)/⟨ξ, ∇f(ξ)⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    xi: Vec<f64>,
    value: f64,
    grad: Vec<f64>,
    hess: Mat,
    pivot: usize,
    dual: Vec<f64>,
    pairing: f64,
}

impl BoundaryPoint {
    pub fn point(&self) -> &[f64] {
        &self.xi
    }

    /// `f(ξ)`; within the boundary tolerance of zero.
    pub fn residual(&self) -> f64 {
        self.value
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    pub fn grad_norm(&self) -> f64 {
        norm(&self.grad)
    }

    pub fn hess(&self) -> &Mat {
        &self.hess
    }

    /// 0-based index of the first coordinate with a non-negligible partial.
    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn dual(&self) -> &[f64] {
        &self.dual
    }

    /// `⟨ξ, ∇f(ξ)⟩`
    pub fn pairing(&self) -> f64 {
        self.pairing
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    /// `u^j(ξ)`: 1 at `j`, `−f_j/f_i` at the pivot `i`, 0 elsewhere.
    /// Returns `None` for `j == i` or `j` out of range.
    pub fn tangent_vector(&self, j: usize) -> Option<Vec<f64>> {
        if j == self.pivot || j >= self.dim() {
            return None;
        }
        let mut u = vec![0.0; self.dim()];
        u[j] = 1.0;
        u[self.pivot] = -self.grad[j] / self.grad[self.pivot];
        Some(u)
    }

    /// True iff `u ≠ 0` and `|⟨u, ∇f⟩| ≤ 1e-9·‖u‖·‖∇f‖`.
    pub fn in_tangent_hyperplane(&self, u: &[f64]) -> bool {
        if u.len() != self.dim() {
            return false;
        }
        let un = norm(u);
        un > 0.0 && dot(u, &self.grad).abs() <= 1e-9 * un * self.grad_norm()
    }
}

/// The `n − 1` vectors `u^j`, `j ≠ i`, spanning the tangent hyperplane, plus
/// an orthonormalized copy.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFrame {
    /// 0-based coordinate `j` of each basis vector.
    pub indices: Vec<usize>,
    pub basis: Vec<Vec<f64>>,
    pub ortho: Vec<Vec<f64>>,
}

pub fn tangent_frame(p: &BoundaryPoint) -> TangentFrame {
    let indices: Vec<usize> = (0..p.dim()).filter(|&j| j != p.pivot()).collect();
    let basis: Vec<Vec<f64>> = indices
        .iter()
        .map(|&j| p.tangent_vector(j).expect("j differs from the pivot"))
        .collect();
    // each u^j owns a distinct unit coordinate, so the set is independent
    let ortho = linalg::orthonormalize(&basis).expect("tangent basis is independent");
    TangentFrame {
        indices,
        basis,
        ortho,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk() -> ImplicitBody {
        ImplicitBody::parse(2, "x1^2 + x2^2 - 1", 0.5).unwrap()
    }

    fn quartic() -> ImplicitBody {
        ImplicitBody::parse(2, "x2 - 1 + x1^4", 0.5).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(
            ImplicitBody::parse(2, "x1^2 + x2^2 + 1", 0.5),
            Err(BodyError::OriginNotInterior { .. })
        ));
        assert!(matches!(
            ImplicitBody::parse(2, "x1^2 - 1", 0.0),
            Err(BodyError::BadDelta(_))
        ));
        assert!(matches!(
            ImplicitBody::parse(1, "x1^2 - 1", 0.5),
            Err(BodyError::BadDimension(1))
        ));
    }

    #[test]
    fn circle_point() {
        let p = disk().validate_point(&[1.0, 0.0]).unwrap();
        assert_eq!(p.pivot(), 0);
        assert_eq!(p.grad(), &[2.0, 0.0]);
        assert_eq!(p.pairing(), 2.0);
        assert_eq!(p.dual(), &[1.0, 0.0]);
    }

    #[test]
    fn quartic_point_dual() {
        let p = quartic().validate_point(&[0.5, 0.9375]).unwrap();
        assert_eq!(p.grad(), &[0.5, 1.0]);
        assert_eq!(p.pairing(), 1.1875);
        assert!((p.dual()[0] - 0.4210526315789474).abs() < 1e-15);
        assert!((p.dual()[1] - 0.8421052631578947).abs() < 1e-15);
        assert!((dot(p.point(), p.dual()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn interior_point_rejected() {
        assert!(matches!(
            quartic().validate_point(&[0.0, 0.0]),
            Err(BodyError::NotOnBoundary { .. })
        ));
    }

    #[test]
    fn orientation_violation() {
        // non-star-shaped sublevel set: at (1, -0.5) the gradient is (0, 1)
        let b = ImplicitBody::parse(2, "x2 - (x1^2 - 1)^2 + 0.5", 0.5).unwrap();
        assert!(matches!(
            b.validate_point(&[1.0, -0.5]),
            Err(BodyError::OrientationViolation { pairing }) if pairing == -0.5
        ));
    }

    #[test]
    fn non_smooth_point() {
        let b = ImplicitBody::parse(2, "(x1 - 1)^3 + 0 * x2", 0.5).unwrap();
        assert!(matches!(
            b.validate_point(&[1.0, 0.0]),
            Err(BodyError::NonSmoothPoint { .. })
        ));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            disk().validate_point(&[1.0, 0.0, 0.0]),
            Err(BodyError::DimensionMismatch {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn tangent_frame_examples() {
        let sphere = ImplicitBody::parse(3, "x1^2 + x2^2 + x3^2 - 4", 0.5).unwrap();
        let p = sphere.validate_point(&[0.0, 0.0, 2.0]).unwrap();
        assert_eq!(p.pivot(), 2);
        let fr = tangent_frame(&p);
        assert_eq!(fr.indices, vec![0, 1]);
        assert_eq!(fr.basis, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);

        let p = quartic().validate_point(&[0.5, 0.9375]).unwrap();
        assert_eq!(p.pivot(), 0);
        let fr = tangent_frame(&p);
        assert_eq!(fr.basis, vec![vec![-2.0, 1.0]]);

        let cyl = ImplicitBody::parse(3, "x1^2 + x3^2 - 1", 0.5).unwrap();
        let xi = [0.6, 0.3, 0.8];
        let p = cyl.validate_point(&xi).unwrap();
        let fr = tangent_frame(&p);
        assert_eq!(fr.basis[0], vec![0.0, 1.0, 0.0]);
        assert_eq!(fr.basis[1], vec![-0.8 / 0.6, 0.0, 1.0]);
        for u in fr.basis.iter().chain(&fr.ortho) {
            assert!(p.in_tangent_hyperplane(u));
        }
    }

    #[test]
    fn tangent_hyperplane_membership() {
        let p = disk().validate_point(&[1.0, 0.0]).unwrap();
        assert!(p.in_tangent_hyperplane(&[0.0, 1.0]));
        assert!(!p.in_tangent_hyperplane(&[1.0, 0.0]));
        assert!(!p.in_tangent_hyperplane(&[0.0, 0.0]));
    }

    #[test]
    fn gauge_examples() {
        let d = disk();
        assert!((d.minkowski_gauge(&[2.0, 0.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!((d.minkowski_gauge(&[0.5, 0.0]).unwrap() - 0.5).abs() < 1e-12);
        assert!((quartic().minkowski_gauge(&[0.0, 2.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(
            quartic().minkowski_gauge(&[0.0, -1.0]),
            Err(BodyError::RayEscapes)
        ));
        assert!(matches!(
            d.minkowski_gauge(&[0.0, 0.0]),
            Err(BodyError::ZeroPoint)
        ));
    }

    #[test]
    fn projected_points_lie_on_boundary() {
        let e = ImplicitBody::parse(3, "x1^2/4 + x2^2 + 4*x3^2 + 0.3*x1*x2 - 1", 0.5).unwrap();
        for x in [[1.0, 2.0, 3.0], [-0.2, 0.1, 0.05], [5.0, -7.0, 1.0]] {
            let xi = e.project_to_boundary(&x).unwrap();
            assert!(e.value(&xi).unwrap().abs() <= 1e-9);
            e.validate_point(&xi).unwrap();
        }
    }

    #[test]
    fn body_spec_json() {
        let spec =
            BodySpec::from_json(r#"{"n": 2, "f": "x1^2 + x2^2 - 1", "delta": 0.5}"#).unwrap();
        assert_eq!(spec.tolerances, Tolerances::default());
        assert_eq!(
            spec.canonical_json(),
            r#"{"n":2,"f":"x1^2 + x2^2 - 1","delta":0.5,"tolerances":{"boundary":1e-9,"pivot":1e-9}}"#
        );
        let body = spec.build().unwrap();
        assert_eq!(body.dim(), 2);
        assert!(BodySpec::from_json(r#"{"n": 2}"#).is_err());
        let spec = BodySpec::from_json(
            r#"{"n": 2, "f": "x1^2 + x2^2 - 1", "delta": 0.5, "tolerances": {"pivot": 1e-6}}"#,
        )
        .unwrap();
        assert_eq!(spec.tolerances.pivot, 1e-6);
        assert_eq!(spec.tolerances.boundary, 1e-9);
    }
}
