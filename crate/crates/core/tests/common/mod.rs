#![allow(dead_code)]

use dircurv::linalg::{add_scaled, dot, Mat};
use dircurv::{BoundaryPoint, ImplicitBody};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `|a − b| ≤ tol·max(|a|, |b|)`; two exact zeros agree.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn term(out: &mut String, c: f64, monomial: &str) {
    if c == 0.0 {
        return;
    }
    let sign = if c < 0.0 { " - " } else { " + " };
    out.push_str(sign);
    out.push_str(&format!("{:?}*{}", c.abs(), monomial));
}

/// Field text for `xᵀAx + bᵀx − 1`.
pub fn quadric_text(a: &Mat, b: &[f64]) -> String {
    let n = a.dim();
    let mut s = String::from("0");
    for r in 0..n {
        for c in r..n {
            let coeff = if r == c { a[(r, c)] } else { 2.0 * a[(r, c)] };
            term(&mut s, coeff, &format!("x{}*x{}", r + 1, c + 1));
        }
    }
    for (k, bk) in b.iter().enumerate() {
        term(&mut s, *bk, &format!("x{}", k + 1));
    }
    s.push_str(" - 1");
    s
}

/// Random positive-definite quadric `xᵀ(MMᵀ + ½I)x + bᵀx − 1 ≤ 0`; the
/// origin is interior since the field is −1 there.
pub fn random_quadric(rng: &mut ChaCha8Rng, n: usize) -> ImplicitBody {
    let m: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut a = Mat::zeros(n);
    for r in 0..n {
        for c in 0..n {
            let v: f64 = (0..n).map(|k| m[r * n + k] * m[c * n + k]).sum();
            a[(r, c)] = v + if r == c { 0.5 } else { 0.0 };
        }
    }
    let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    ImplicitBody::parse(n, &quadric_text(&a, &b), 0.2).expect("generated field parses")
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if dot(&v, &v) > 1e-2 {
            return v;
        }
    }
}

/// Radial projection of a random direction onto the boundary.
pub fn random_boundary_point(rng: &mut ChaCha8Rng, body: &ImplicitBody) -> BoundaryPoint {
    let d = random_vec(rng, body.dim());
    let xi = body.project_to_boundary(&d).expect("bounded body");
    body.validate_point(&xi)
        .expect("projected point is regular")
}

/// Random tangent vector at `p`: a random vector minus its normal part.
pub fn random_tangent(rng: &mut ChaCha8Rng, p: &BoundaryPoint) -> Vec<f64> {
    let g = p.grad();
    loop {
        let v = random_vec(rng, p.dim());
        let t = add_scaled(&v, -dot(&v, g) / dot(g, g), g);
        if dot(&t, &t) > 1e-2 {
            return t;
        }
    }
}
