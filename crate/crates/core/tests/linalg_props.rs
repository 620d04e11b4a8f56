use dircurv::linalg::{determinant, dot, exterior_magnitude, norm, orthonormalize, sym_eigen, Mat};
use proptest::prelude::*;

fn pair(max_n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(-10.0..10.0f64, n),
        )
    })
}

fn symmetric(max_n: usize) -> impl Strategy<Value = Mat> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-5.0..5.0f64, n * n).prop_map(move |raw| {
            let mut m = Mat::zeros(n);
            for r in 0..n {
                for c in 0..n {
                    m[(r, c)] = 0.5 * (raw[r * n + c] + raw[c * n + r]);
                }
            }
            m
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exterior_magnitude_satisfies_lagrange_identity((u, v) in pair(8)) {
        let w = exterior_magnitude(&u, &v).unwrap();
        let lagrange = dot(&u, &u) * dot(&v, &v) - dot(&u, &v).powi(2);
        let scale = dot(&u, &u) * dot(&v, &v);
        prop_assert!((w * w - lagrange).abs() <= 1e-10 * scale.max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn eigenvalues_match_trace_and_determinant(a in symmetric(6)) {
        let e = sym_eigen(&a).unwrap();
        let sum: f64 = e.values.iter().sum();
        let prod: f64 = e.values.iter().product();
        let n = a.dim() as i32;
        let scale = a.max_abs().max(1e-300);
        prop_assert!((sum - a.trace()).abs() <= 1e-9 * scale * n as f64);
        prop_assert!((prod - determinant(&a)).abs() <= 1e-9 * scale.powi(n) * 10f64.powi(n));
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            let av = a.mul_vec(v);
            for (x, y) in av.iter().zip(v) {
                prop_assert!((x - lam * y).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn orthonormal_sets_have_unit_determinant(raw in (2..=6usize).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-1.0..1.0f64, n), n))) {
        let Ok(q) = orthonormalize(&raw) else { return Ok(()); };
        for i in 0..q.len() {
            prop_assert!((norm(&q[i]) - 1.0).abs() <= 1e-12);
            for j in 0..i {
                prop_assert!(dot(&q[i], &q[j]).abs() <= 1e-10);
            }
        }
        let d = determinant(&Mat::from_rows(&q).unwrap());
        prop_assert!((d.abs() - 1.0).abs() <= 1e-10);
    }
}
