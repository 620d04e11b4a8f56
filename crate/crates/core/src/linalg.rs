//! Small dense kernels (n ≤ 16): LU determinant, modified Gram–Schmidt,
//! cyclic Jacobi for symmetric matrices, and the magnitude of the exterior
//! product of two vectors.
//!
//! Vectors are plain `[f64]` slices; square matrices use [`Mat`].

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    /// `index` is the 0-based position of the input that collapsed.
    #[error("input vector {index} is linearly dependent on the previous ones")]
    RankDeficient { index: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
}

/// Square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Mat::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Builds a matrix from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(LinalgError::DimensionMismatch {
                    left: n,
                    right: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Mat { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), v)).collect()
    }

    /// `⟨A u, v⟩`.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        dot(&self.mul_vec(u), v)
    }

    /// Largest `|A_rs − A_sr|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..self.n {
            for s in r + 1..self.n {
                worst = worst.max((self[(r, s)] - self[(s, r)]).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() <= 1e-12 * self.max_abs()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.n + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.n + c]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|v| v * s).collect()
}

/// `a + s·b`
pub fn add_scaled(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Determinant by LU factorization with partial pivoting. The empty matrix
/// has determinant 1.
pub fn determinant(a: &Mat) -> f64 {
    let n = a.dim();
    let mut m = a.clone();
    let mut det = 1.0;
    for col in 0..n {
        let (piv, best) = (col..n)
            .map(|r| (r, m[(r, col)].abs()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..n {
                let tmp = m[(col, c)];
                m[(col, c)] = m[(piv, c)];
                m[(piv, c)] = tmp;
            }
            det = -det;
        }
        let p = m[(col, col)];
        det *= p;
        for r in col + 1..n {
            let factor = m[(r, col)] / p;
            if factor != 0.0 {
                for c in col + 1..n {
                    m[(r, c)] -= factor * m[(col, c)];
                }
            }
        }
    }
    det
}

/// Magnitude of the exterior product `u ∧ v`: the square root of the sum of
/// squared 2×2 minors `u_i v_j − u_j v_i` over `i < j`.
pub fn exterior_magnitude(u: &[f64], v: &[f64]) -> Result<f64, LinalgError> {
    if u.len() != v.len() {
        return Err(LinalgError::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let n = u.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let minor = u[i] * v[j] - u[j] * v[i];
            sum += minor * minor;
        }
    }
    Ok(sum.sqrt())
}

/// Modified Gram–Schmidt. Fails when an input's residual drops to
/// `1e-10 · max‖v‖`.
pub fn orthonormalize(vs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, LinalgError> {
    let Some(first) = vs.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    let scale = vs.iter().map(|v| norm(v)).fold(0.0_f64, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vs.len());
    for (index, v) in vs.iter().enumerate() {
        if v.len() != n {
            return Err(LinalgError::DimensionMismatch {
                left: n,
                right: v.len(),
            });
        }
        let mut w = v.clone();
        for q in &out {
            let c = dot(&w, q);
            w = add_scaled(&w, -c, q);
        }
        // second pass restores orthogonality lost to cancellation
        for q in &out {
            let c = dot(&w, q);
            w = add_scaled(&w, -c, q);
        }
        let len = norm(&w);
        if len <= 1e-10 * scale || len == 0.0 {
            return Err(LinalgError::RankDeficient { index });
        }
        out.push(scale_vec(w, 1.0 / len));
    }
    Ok(out)
}

fn scale_vec(mut v: Vec<f64>, s: f64) -> Vec<f64> {
    v.iter_mut().for_each(|x| *x *= s);
    v
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unit eigenvectors, `vectors[k]` pairs with `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass is at most
/// `1e-14 · scale`.
pub fn sym_eigen(a: &Mat) -> Result<SymEigen, LinalgError> {
    if !a.is_symmetric() {
        return Err(LinalgError::NotSymmetric {
            asymmetry: a.asymmetry(),
        });
    }
    let n = a.dim();
    let mut m = a.clone();
    // symmetrize exactly so rotations see a single off-diagonal value
    for r in 0..n {
        for s in r + 1..n {
            let avg = 0.5 * (m[(r, s)] + m[(s, r)]);
            m[(r, s)] = avg;
            m[(s, r)] = avg;
        }
    }
    let mut v = Mat::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let off = |m: &Mat| -> f64 {
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s += m[(r, c)] * m[(r, c)];
                }
            }
        }
        s.sqrt()
    };

    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        if off(&m) <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].total_cmp(&m[(y, y)]));
    let values = order.iter().map(|&k| m[(k, k)]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|r| v[(r, k)]).collect())
        .collect();
    Ok(SymEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Laplace expansion along the first row; test oracle only.
    fn cofactor_det(a: &Mat) -> f64 {
        let n = a.dim();
        if n == 0 {
            return 1.0;
        }
        if n == 1 {
            return a[(0, 0)];
        }
        let mut sum = 0.0;
        for c in 0..n {
            let rows: Vec<Vec<f64>> = (1..n)
                .map(|r| (0..n).filter(|&k| k != c).map(|k| a[(r, k)]).collect())
                .collect();
            let minor = Mat::from_rows(&rows).unwrap();
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * a[(0, c)] * cofactor_det(&minor);
        }
        sum
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&Mat::identity(3)), 1.0);
        let swap = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(determinant(&swap), -1.0);
        assert_eq!(determinant(&Mat::diag(&[2.0, 3.0, 4.0])), 24.0);
        assert_eq!(determinant(&Mat::zeros(0)), 1.0);
        let singular = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(determinant(&singular).abs() < 1e-15);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
        };
        for n in 1..=5 {
            for _ in 0..20 {
                let rows: Vec<Vec<f64>> =
                    (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                let a = Mat::from_rows(&rows).unwrap();
                let scale = a.max_abs().powi(n);
                assert!((determinant(&a) - cofactor_det(&a)).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn exterior_magnitude_examples() {
        assert_eq!(
            exterior_magnitude(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(),
            1.0
        );
        assert_eq!(
            exterior_magnitude(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(),
            0.0
        );
        // Lagrange identity: 2·10 − 3² = 11
        let m = exterior_magnitude(&[1.0, 0.0, 1.0, 0.0], &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!((m - 11f64.sqrt()).abs() < 1e-14);
        assert!(matches!(
            exterior_magnitude(&[1.0, 2.0], &[1.0]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn orthonormalize_examples() {
        let q = orthonormalize(&[vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(q, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let q = orthonormalize(&[vec![2.0, 0.0, 0.0]]).unwrap();
        assert_eq!(q, vec![vec![1.0, 0.0, 0.0]]);
        assert_eq!(
            orthonormalize(&[vec![1.0, 1.0], vec![1.0, 1.0]]),
            Err(LinalgError::RankDeficient { index: 1 })
        );
    }

    #[test]
    fn sym_eigen_examples() {
        let e = sym_eigen(&Mat::diag(&[8.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![2.0, 8.0]);
        let swap = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = sym_eigen(&swap).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        let bad = Mat::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert!(matches!(
            sym_eigen(&bad),
            Err(LinalgError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn sym_eigen_residuals() {
        let a = Mat::from_rows(&[
            vec![4.0, 1.0, -2.0, 0.5],
            vec![1.0, 3.0, 0.0, 1.0],
            vec![-2.0, 0.0, 5.0, -1.0],
            vec![0.5, 1.0, -1.0, 2.0],
        ])
        .unwrap();
        let e = sym_eigen(&a).unwrap();
        let scale = a.max_abs();
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            let av = a.mul_vec(v);
            for (x, y) in av.iter().zip(v) {
                assert!((x - lam * y).abs() <= 1e-9 * scale);
            }
            assert!((norm(v) - 1.0).abs() < 1e-12);
        }
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
