//! One-parameter groups `t ↦ exp(tX)` generated by truncated matrices.

use crate::error::{LabError, Result};
use crate::linalg::{self, CMatrix, CVector, HermitianExp};

pub trait OneParameterGroup: Send + Sync {
    fn dim(&self) -> usize;

    /// The generator `X`.
    fn generator(&self) -> &CMatrix;

    /// `exp(tX)` as a dense matrix.
    fn matrix(&self, t: f64) -> CMatrix;

    /// `exp(tX) v`.
    fn apply(&self, t: f64, v: &CVector) -> CVector {
        self.matrix(t) * v
    }

    /// Upper bound on the spectral radius of the generator.
    fn frequency_bound(&self) -> f64 {
        linalg::norm2(self.generator())
    }
}

/// Scaling-and-squaring exponential of an arbitrary generator.
pub struct MatrixExpFlow {
    x: CMatrix,
}

impl MatrixExpFlow {
    pub fn new(x: CMatrix) -> Self {
        MatrixExpFlow { x }
    }
}

impl OneParameterGroup for MatrixExpFlow {
    fn dim(&self) -> usize {
        self.x.nrows()
    }
    fn generator(&self) -> &CMatrix {
        &self.x
    }
    fn matrix(&self, t: f64) -> CMatrix {
        linalg::expm(&(&self.x * linalg::c(t, 0.0)))
    }
}

/// Exponential of a skew-Hermitian generator through the eigenbasis of
/// `−iX`; stays exact for arbitrarily large `|t|`.
pub struct SpectralFlow {
    x: CMatrix,
    eig: HermitianExp,
    radius: f64,
}

impl SpectralFlow {
    pub fn new(x: CMatrix) -> Result<Self> {
        let defect = linalg::max_abs(&(&x + x.adjoint()));
        if defect > 1e-12 * (1.0 + linalg::max_abs(&x)) {
            return Err(LabError::usage(format!(
                "spectral flow needs a skew-Hermitian generator (defect {defect:.3e})"
            )));
        }
        let h = &x * linalg::c(0.0, -1.0);
        let h = (&h + h.adjoint()) * linalg::c(0.5, 0.0);
        let eig = HermitianExp::new(&h);
        let radius = eig.eigenvalues().iter().fold(0.0_f64, |m, l| m.max(l.abs()));
        Ok(SpectralFlow { x, eig, radius })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.eig.eigenvalues()
    }
}

impl OneParameterGroup for SpectralFlow {
    fn dim(&self) -> usize {
        self.x.nrows()
    }
    fn generator(&self) -> &CMatrix {
        &self.x
    }
    fn matrix(&self, t: f64) -> CMatrix {
        self.eig.exp_i(t)
    }
    fn apply(&self, t: f64, v: &CVector) -> CVector {
        self.eig.apply_exp_i(t, v)
    }
    fn frequency_bound(&self) -> f64 {
        self.radius
    }
}

/// `exp(tX) = I + tX` for a generator with `X² = 0`.
pub struct AffineFlow {
    x: CMatrix,
}

impl AffineFlow {
    pub fn new(x: CMatrix) -> Result<Self> {
        let sq = linalg::max_abs(&(&x * &x));
        if sq != 0.0 {
            return Err(LabError::usage(format!(
                "affine flow needs a square-zero generator (|X²| = {sq:.3e})"
            )));
        }
        Ok(AffineFlow { x })
    }
}

impl OneParameterGroup for AffineFlow {
    fn dim(&self) -> usize {
        self.x.nrows()
    }
    fn generator(&self) -> &CMatrix {
        &self.x
    }
    fn matrix(&self, t: f64) -> CMatrix {
        linalg::identity(self.x.nrows()) + &self.x * linalg::c(t, 0.0)
    }
    fn apply(&self, t: f64, v: &CVector) -> CVector {
        v + (&self.x * v) * linalg::c(t, 0.0)
    }
}

/// Max-entry residual of `E(s)E(t) − E(s+t)`.
pub fn group_law_residual(flow: &dyn OneParameterGroup, s: f64, t: f64) -> f64 {
    linalg::max_abs(&(flow.matrix(s) * flow.matrix(t) - flow.matrix(s + t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ZERO};

    fn skew(n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |r, k| {
            if r + 1 == k {
                c(0.5 * k as f64, 0.2)
            } else if k + 1 == r {
                c(-0.5 * r as f64, 0.2)
            } else if r == k {
                c(0.0, 0.3 * r as f64)
            } else {
                ZERO
            }
        })
    }

    #[test]
    fn spectral_and_matrix_routes_agree() {
        let x = skew(6);
        let a = SpectralFlow::new(x.clone()).unwrap();
        let b = MatrixExpFlow::new(x);
        for &t in &[-1.3, 0.1, 2.0] {
            assert!(linalg::max_abs(&(a.matrix(t) - b.matrix(t))) < 1e-12);
        }
        let v = CVector::from_fn(6, |k, _| c(k as f64, 1.0));
        assert!(linalg::max_abs_vec(&(a.apply(0.8, &v) - b.apply(0.8, &v))) < 1e-12);
        assert!(group_law_residual(&a, 0.4, 1.7) < 1e-12);
    }

    #[test]
    fn spectral_flow_rejects_hermitian_generator() {
        let h = CMatrix::identity(3, 3);
        assert!(SpectralFlow::new(h).is_err());
    }

    #[test]
    fn affine_flow_is_exact_for_nilpotent() {
        let mut x = CMatrix::zeros(3, 3);
        x[(0, 2)] = c(2.0, -1.0);
        let f = AffineFlow::new(x.clone()).unwrap();
        assert_eq!(group_law_residual(&f, 0.25, -1.5), 0.0);
        let m = MatrixExpFlow::new(x);
        assert!(linalg::max_abs(&(f.matrix(1.5) - m.matrix(1.5))) < 1e-14);
        let mut y = CMatrix::zeros(2, 2);
        y[(0, 0)] = c(1.0, 0.0);
        assert!(AffineFlow::new(y).is_err());
    }
}
