//! Small dense least-squares helpers.
//!
//! nalgebra 0.35 can return wrong singular values and vectors from
//! `svd(true, true)` on nearly rank-deficient matrices (a 2x2 rank-one
//! Euler-Lagrange block reproduces it), while `svd(false, false)` and
//! `SymmetricEigen` stay accurate. Solves therefore go through the
//! eigendecomposition of the Gram matrix.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Singular values in decreasing order.
pub(crate) fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Minimum-norm least-squares solution of `a x = b` and an orthonormal basis of
/// the numerical kernel of `a`; singular values below `rel * sigma_max` count as zero.
pub(crate) fn min_norm_solve(a: &DMatrix<f64>, b: &DVector<f64>, rel: f64) -> (DVector<f64>, Vec<DVector<f64>>) {
    let n = a.ncols();
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|s| **s > rel * smax && **s > 0.0).count();
    // the Gram eigenvalues square the conditioning, so they only order the directions
    let eig = SymmetricEigen::new(a.transpose() * a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let atb = a.transpose() * b;
    let mut x = DVector::zeros(n);
    let mut kernel = Vec::new();
    for (pos, &k) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(k).into_owned();
        if pos < rank {
            x += &v * (v.dot(&atb) / eig.eigenvalues[k]);
        } else {
            kernel.push(v);
        }
    }
    (x, kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_block() {
        let a = DMatrix::from_column_slice(
            2,
            2,
            &[0.0725281564860154, -0.3626407824300741, -0.36264078243007436, 1.8132039121503702],
        );
        let b = DVector::from_vec(vec![-0.016136441916415167, 0.08068220958207628]);
        let (x, kernel) = min_norm_solve(&a, &(-&b), 1e-8);
        assert!((&a * &x + &b).norm() < 1e-12);
        assert_eq!(kernel.len(), 1);
        assert!((&a * &kernel[0]).norm() < 1e-12);
        let s = singular_values(&a);
        assert!((s[0] - a.norm()).abs() < 1e-12);
    }

    #[test]
    fn full_rank_solve() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 1.0, 1.0]);
        let b = DVector::from_vec(vec![1.0, 2.0, 2.0]);
        let (x, kernel) = min_norm_solve(&a, &b, 1e-12);
        assert!(kernel.is_empty());
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }
}
