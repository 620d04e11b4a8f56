//! Directional curvature of implicitly defined convex bodies.
//!
//! A body is given by a field `f` with `F ⊂ {f ≤ 0}`, the origin interior,
//! and `∂F = {f = 0}` near the points of interest. At a boundary point `ξ`
//! with `⟨ξ, ∇f(ξ)⟩ > 0`, the curvature of the planar section through `ξ`
//! spanned by `∇f(ξ)` and a tangent `u` is
//!
//! ```text
//! κ̂(ξ, u) = ⟨∇²f(ξ) u, u⟩ / (2 ‖∇f(ξ)‖ ‖u‖²)
//! ```
//!
//! Modules:
//!
//! * [`expr`]: field expressions, parsing and symbolic differentiation
//! * [`linalg`]: small dense kernels
//! * [`body`]: bodies, boundary points, tangent frames, Minkowski functional
//! * [`curvature`]: `γ̂`, `κ̂`, radii, extrema, translation
//! * [`goldman`]: implicit space-curve curvature of the same sections
//! * [`oracle`]: definition-level brute-force estimators
//!
//! ```
//! use dircurv::{body::ImplicitBody, curvature::kappa_directional};
//!
//! let sphere = ImplicitBody::parse(3, "x1^2 + x2^2 + x3^2 - 4", 0.1).unwrap();
//! let p = sphere.validate_point(&[0.0, 0.0, 2.0]).unwrap();
//! let k = kappa_directional(&p, &[1.0, 1.0, 0.0]).unwrap();
//! assert_eq!(k.kappa_hat, 0.25);
//! assert_eq!(k.radius_hat, 2.0);
//! ```

// `!(x > 0.0)` is used on purpose so NaN takes the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body;
pub mod curvature;
pub mod expr;
pub mod goldman;
pub mod linalg;
pub mod oracle;

pub use body::{tangent_frame, BodySpec, BoundaryPoint, ImplicitBody, TangentFrame};
pub use expr::Expr;
