//! Least-squares solves against coboundary operators.
//!
//! A solver is built once per operator from its singular value decomposition
//! and reused; each solve is then a dense matrix-vector product. The
//! minimum-norm minimizer is returned, which makes results deterministic.

use nalgebra::{DMatrix, DVector};

use crate::matrix::Coboundary;

/// Cutoff for singular values, relative to the largest one.
const RANK_CUTOFF: f64 = 1e-10;
const SVD_EPS: f64 = 1e-15;
const RECOMPOSE_TOL: f64 = 1e-11;
const EIGEN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LeastSquares {
    op: DMatrix<f64>,
    pinv: DMatrix<f64>,
    rank: usize,
    sigma_max: f64,
    sigma_min: f64,
}

impl LeastSquares {
    pub fn new(d: &Coboundary) -> Self {
        Self::from_dense(d.to_dense_f64())
    }

    pub fn from_dense(op: DMatrix<f64>) -> Self {
        let (m, n) = op.shape();
        if m == 0 || n == 0 {
            return LeastSquares { pinv: DMatrix::zeros(n, m), op, rank: 0, sigma_max: 0.0, sigma_min: 0.0 };
        }
        let (pinv, rank, sigma_max, sigma_min) = match svd_pinv(&op) {
            Some(found) => found,
            None => eigen_pinv(&op),
        };
        LeastSquares { op, pinv, rank, sigma_max, sigma_min }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Ratio of extreme retained singular values.
    pub fn condition(&self) -> f64 {
        if self.rank == 0 {
            1.0
        } else {
            self.sigma_max / self.sigma_min
        }
    }

    /// Minimum-norm minimizer of `|D x - b|_2`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let rhs = DVector::from_column_slice(b);
        (&self.pinv * rhs).iter().copied().collect()
    }

    /// Component of `r` in the kernel of `D`: `(I - D^+ D) r`.
    pub fn kernel_component(&self, r: &[f64]) -> Vec<f64> {
        let r = DVector::from_column_slice(r);
        let dr = &self.op * &r;
        let back = &self.pinv * dr;
        (r - back).iter().copied().collect()
    }
}

/// `(pinv, rank, sigma_max, sigma_min)` from a thin SVD. The default
/// convergence threshold can stop early on matrices with large null spaces and
/// return inaccurate singular vectors, so a tighter one is used and the
/// factorization is checked by recomposition.
fn svd_pinv(op: &DMatrix<f64>) -> Option<(DMatrix<f64>, usize, f64, f64)> {
    let (m, n) = op.shape();
    let svd = op.clone().try_svd(true, true, SVD_EPS, 0)?;
    let sigma_max = svd.singular_values.max();
    let recomposed = svd.clone().recompose().ok()?;
    if (recomposed - op).amax() > RECOMPOSE_TOL * sigma_max.max(1.0) {
        return None;
    }
    let cutoff = RANK_CUTOFF * sigma_max.max(1.0);
    let u = svd.u.as_ref()?;
    let vt = svd.v_t.as_ref()?;
    let mut pinv = DMatrix::zeros(n, m);
    let mut rank = 0;
    let mut sigma_min = f64::INFINITY;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            continue;
        }
        rank += 1;
        sigma_min = sigma_min.min(s);
        // pinv += v_i u_i^T / s
        pinv.ger(1.0 / s, &vt.row(i).transpose(), &u.column(i), 1.0);
    }
    Some((pinv, rank, sigma_max, if rank == 0 { 0.0 } else { sigma_min }))
}

/// Fallback through the eigendecomposition of `D^T D`. Squares the condition
/// number, which is harmless for incidence matrices of small complexes.
fn eigen_pinv(op: &DMatrix<f64>) -> (DMatrix<f64>, usize, f64, f64) {
    let eig = (op.transpose() * op).symmetric_eigen();
    let lambda_max = eig.eigenvalues.max().max(0.0);
    let cutoff = (RANK_CUTOFF * lambda_max.sqrt().max(1.0)).powi(2).max(EIGEN_FLOOR * lambda_max);
    let n = op.ncols();
    let mut gram_pinv = DMatrix::zeros(n, n);
    let mut rank = 0;
    let mut lambda_min = f64::INFINITY;
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= cutoff {
            continue;
        }
        rank += 1;
        lambda_min = lambda_min.min(l);
        let v = eig.eigenvectors.column(i);
        gram_pinv.ger(1.0 / l, &v, &v, 1.0);
    }
    let sigma_min = if rank == 0 { 0.0 } else { lambda_min.sqrt() };
    (gram_pinv * op.transpose(), rank, lambda_max.sqrt(), sigma_min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_gradient() {
        // d_0 of the path 0-1-2
        let op = DMatrix::from_row_slice(2, 3, &[-1.0, 1.0, 0.0, 0.0, -1.0, 1.0]);
        let ls = LeastSquares::from_dense(op.clone());
        assert_eq!(ls.rank(), 2);
        let x = ls.solve(&[2.0, -1.0]);
        let dx = &op * DVector::from_vec(x.clone());
        assert!((dx[0] - 2.0).abs() < 1e-12 && (dx[1] + 1.0).abs() < 1e-12);
        // minimum norm: orthogonal to constants
        assert!(x.iter().sum::<f64>().abs() < 1e-12);
        let k = ls.kernel_component(&[1.0, 2.0, 3.0]);
        assert!((k[0] - 2.0).abs() < 1e-12 && (k[1] - 2.0).abs() < 1e-12 && (k[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_fallback_agrees() {
        let op = DMatrix::from_row_slice(3, 3, &[-1.0, 1.0, 0.0, 0.0, -1.0, 1.0, -1.0, 0.0, 1.0]);
        let (p, rank, _, _) = eigen_pinv(&op);
        let (q, rank2, _, _) = svd_pinv(&op).unwrap();
        assert_eq!((rank, rank2), (2, 2));
        assert!((p - q).amax() < 1e-12);
    }

    #[test]
    fn empty_operator() {
        let ls = LeastSquares::from_dense(DMatrix::zeros(0, 3));
        assert_eq!(ls.solve(&[]), vec![0.0; 3]);
        assert_eq!(ls.rank(), 0);
    }
}
