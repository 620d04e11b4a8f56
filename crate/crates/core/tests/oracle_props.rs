mod common;

use common::*;
use dircurv::curvature::gamma_directional;
use dircurv::linalg::{norm, sub};
use dircurv::oracle::{gamma_estimate, modulus_bruteforce};
use dircurv::tangent_frame;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn estimates_track_closed_form_on_quadrics() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for trial in 0..12 {
        let body = random_quadric(&mut rng, 2 + trial % 3);
        let p = random_boundary_point(&mut rng, &body);
        for u in tangent_frame(&p).basis {
            let exact = gamma_directional(&p, &u).unwrap();
            let est = gamma_estimate(&body, &p, &u).unwrap();
            assert!((est.value - exact).abs() <= (0.02 * exact.abs()).max(1e-4));
            assert!(est.last_step_change() <= 0.05);
        }
    }
}

#[test]
fn modulus_nonnegative_with_valid_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for trial in 0..30 {
        let body = random_quadric(&mut rng, 2 + trial % 4);
        let p = random_boundary_point(&mut rng, &body);
        let u = random_tangent(&mut rng, &p);
        let r = rng.gen_range(0.001..0.05);
        let s = modulus_bruteforce(&body, &p, &u, r, 256).unwrap();
        assert!(s.value >= -1e-9);
        assert!(!s.witnesses.is_empty());
        for w in &s.witnesses {
            assert!((norm(&sub(w, p.point())) - r).abs() <= 1e-8);
            assert!(body.value(w).unwrap().abs() <= 1e-9);
        }
    }
}
