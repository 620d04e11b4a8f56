mod common;

use common::*;
use dircurv::curvature::kappa_directional;
use dircurv::goldman::{
    goldman_curvature_closed, goldman_curvature_general, goldman_tangent, plane_system,
};
use dircurv::linalg::{dot, exterior_magnitude, norm};
use dircurv::tangent_frame;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_form_is_twice_kappa_and_matches_general() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..120 {
        let body = random_quadric(&mut rng, 2 + trial % 4);
        let p = random_boundary_point(&mut rng, &body);
        for &j in &tangent_frame(&p).indices {
            let u = p.tangent_vector(j).unwrap();
            let kappa = kappa_directional(&p, &u).unwrap().kappa_hat;
            let closed = goldman_curvature_closed(&p, j).unwrap();
            assert!(rel_close(closed, 2.0 * kappa, 1e-10));
            let sys = plane_system(&p, j).unwrap();
            let general = goldman_curvature_general(&body, &p, &sys).unwrap();
            assert!(rel_close(general, closed, 1e-8), "{general} vs {closed}");
        }
    }
}

#[test]
fn tangent_is_along_frame_vector() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for trial in 0..120 {
        let body = random_quadric(&mut rng, 3 + trial % 3);
        let p = random_boundary_point(&mut rng, &body);
        for &j in &tangent_frame(&p).indices {
            let u = p.tangent_vector(j).unwrap();
            let sys = plane_system(&p, j).unwrap();
            let tan = goldman_tangent(&p, &sys).unwrap();
            assert!(exterior_magnitude(&tan, &u).unwrap() <= 1e-10 * norm(&tan) * norm(&u));
            let (fi, fj) = (p.grad()[p.pivot()], p.grad()[j]);
            let g2 = dot(p.grad(), p.grad());
            let predicted = g2 * fi.abs() * norm(&u) / (fi * fi + fj * fj);
            assert!(rel_close(norm(&tan), predicted, 1e-10));
            for r in 0..sys.rows.len() {
                assert!(sys.evaluate(r, p.point()).abs() <= 1e-12);
                assert!(dot(&sys.row_gradient(r), &u).abs() <= 1e-12 * norm(&u));
            }
        }
    }
}
