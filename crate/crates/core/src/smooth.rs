//! Concrete smooth parts: separable diagonal quadratics and dense least squares.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::linalg::compensated_sum;
use crate::problem::SmoothOracle;

/// `g(x) = ½ Σ wᵢ (xᵢ − cᵢ)²` with `wᵢ ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalQuadratic {
    weights: Vec<f64>,
    centers: Vec<f64>,
    lipschitz: f64,
    mu: f64,
}

impl DiagonalQuadratic {
    pub fn new(weights: Vec<f64>, centers: Vec<f64>) -> Result<Self> {
        check_dim(weights.len(), centers.len())?;
        if weights.is_empty() {
            return Err(Error::InvalidArgument("empty quadratic".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "weights must be finite and >= 0, got {w}"
            )));
        }
        if centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("centers must be finite".into()));
        }
        let lipschitz = weights.iter().cloned().fold(0.0, f64::max);
        if lipschitz == 0.0 {
            return Err(Error::InvalidArgument(
                "at least one weight must be positive".into(),
            ));
        }
        let mu = weights.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(Self {
            weights,
            centers,
            lipschitz,
            mu,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }
}

impl SmoothOracle for DiagonalQuadratic {
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * compensated_sum(
            x.iter()
                .zip(self.weights.iter().zip(&self.centers))
                .map(|(xi, (w, c))| w * (xi - c) * (xi - c)),
        )
    }

    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        for ((o, xi), (w, c)) in out
            .iter_mut()
            .zip(x)
            .zip(self.weights.iter().zip(&self.centers))
        {
            *o = w * (xi - c);
        }
    }

    fn value_difference(&self, x: &[f64], y: &[f64]) -> f64 {
        // w/2·[(x−c)² − (y−c)²] = w/2·(x − y)(x + y − 2c)
        0.5 * compensated_sum(
            x.iter()
                .zip(y)
                .zip(self.weights.iter().zip(&self.centers))
                .map(|((xi, yi), (w, c))| w * (xi - yi) * ((xi - c) + (yi - c))),
        )
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

/// `g(x) = ½‖Mx − b‖²`, with `L_g` and `μ_g` the extreme eigenvalues of `MᵀM`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    matrix: DMatrix<f64>,
    rhs: DVector<f64>,
    lipschitz: f64,
    mu: f64,
}

impl LeastSquares {
    pub fn new(matrix: DMatrix<f64>, rhs: DVector<f64>) -> Result<Self> {
        check_dim(matrix.nrows(), rhs.len())?;
        let gram = matrix.transpose() * &matrix;
        let eig = gram.symmetric_eigen();
        let lipschitz = eig.eigenvalues.max();
        let mu = eig.eigenvalues.min().max(0.0);
        if !(lipschitz > 0.0) {
            return Err(Error::InvalidArgument(
                "least-squares matrix is zero".into(),
            ));
        }
        Ok(Self {
            matrix,
            rhs,
            lipschitz,
            mu,
        })
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    fn residual(&self, x: &[f64]) -> DVector<f64> {
        &self.matrix * DVector::from_column_slice(x) - &self.rhs
    }
}

impl SmoothOracle for LeastSquares {
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * self.residual(x).norm_squared()
    }

    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        let g = self.matrix.tr_mul(&self.residual(x));
        out.copy_from_slice(g.as_slice());
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_constants() {
        let q = DiagonalQuadratic::new(vec![1.0, 5.0, 2.0], vec![0.0; 3]).unwrap();
        assert_eq!(q.lipschitz(), 5.0);
        assert_eq!(q.strong_convexity(), 1.0);
        assert!(DiagonalQuadratic::new(vec![-1.0], vec![0.0]).is_err());
        assert!(DiagonalQuadratic::new(vec![0.0], vec![0.0]).is_err());
        assert!(DiagonalQuadratic::new(vec![1.0], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn quadratic_difference_matches_direct() {
        let q = DiagonalQuadratic::new(vec![1.0, 3.0], vec![2.0, -1.0]).unwrap();
        let x = [0.5, 1.5];
        let y = [-1.0, 2.0];
        let direct = q.value(&x) - q.value(&y);
        assert!((q.value_difference(&x, &y) - direct).abs() < 1e-14);
        assert_eq!(q.gradient(&x), vec![-1.5, 7.5]);
    }

    #[test]
    fn least_squares_constants() {
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 0.0, 0.0]);
        let ls = LeastSquares::new(m, DVector::from_vec(vec![1.0, 1.0, 1.0])).unwrap();
        assert!((ls.lipschitz() - 4.0).abs() < 1e-12);
        assert!((ls.strong_convexity() - 1.0).abs() < 1e-12);
        assert!((ls.value(&[1.0, 0.5]) - 0.5).abs() < 1e-15);
        let g = ls.gradient(&[0.0, 0.0]);
        assert_eq!(g, vec![-1.0, -2.0]);
    }
}
