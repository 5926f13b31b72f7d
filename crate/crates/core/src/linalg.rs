//! Dense complex linear algebra used throughout the lab.
//!
//! Everything is a materialized `DMatrix<Complex64>`; sizes stay in the low
//! hundreds, so exact dense factorizations are affordable and keep every
//! check reproducible.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{LabError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// Maximum absolute column sum.
pub fn norm1(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Spectral norm (largest singular value).
pub fn norm2(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn hermitian_min_eigenvalue(a: &CMatrix) -> f64 {
    let h = (a + a.adjoint()) * c(0.5, 0.0);
    h.symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

/// Inverse with a 1-norm condition estimate; fails when the matrix is
/// numerically singular.
pub fn inverse_checked(a: &CMatrix) -> Result<(CMatrix, f64)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(LabError::usage("inverse of a non-square matrix"));
    }
    let lu = a.clone().lu();
    let inv = lu.try_inverse().ok_or(LabError::Singular {
        condition: f64::INFINITY,
    })?;
    let cond = norm1(a) * norm1(&inv);
    if !cond.is_finite() || cond > 1e14 {
        return Err(LabError::Singular { condition: cond });
    }
    Ok((inv, cond))
}

fn solve(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.clone()
        .lu()
        .solve(b)
        .expect("Padé denominator is nonsingular for scaled arguments")
}

// Padé coefficients and 1-norm thresholds for degrees 3, 5, 7, 9, 13.
const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
    (13, 5.371_920_351_148_152),
];

fn pade_coefficients(m: usize) -> &'static [f64] {
    match m {
        3 => &[120.0, 60.0, 12.0, 1.0],
        5 => &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => &[
            17_297_280.0,
            8_648_640.0,
            1_995_840.0,
            277_200.0,
            25_200.0,
            1_512.0,
            56.0,
            1.0,
        ],
        9 => &[
            17_643_225_600.0,
            8_821_612_800.0,
            2_075_673_600.0,
            302_702_400.0,
            30_270_240.0,
            2_162_160.0,
            110_880.0,
            3_960.0,
            90.0,
            1.0,
        ],
        13 => &[
            64_764_752_532_480_000.0,
            32_382_376_266_240_000.0,
            7_771_770_303_897_600.0,
            1_187_353_796_428_800.0,
            129_060_195_264_000.0,
            10_559_470_521_600.0,
            670_442_572_800.0,
            33_522_128_640.0,
            1_323_241_920.0,
            40_840_800.0,
            960_960.0,
            16_380.0,
            182.0,
            1.0,
        ],
        _ => unreachable!("unsupported Padé degree"),
    }
}

fn pade_low(a: &CMatrix, m: usize) -> CMatrix {
    let n = a.nrows();
    let b = pade_coefficients(m);
    let a2 = a * a;
    let mut u = identity(n) * c(b[1], 0.0);
    let mut v = identity(n) * c(b[0], 0.0);
    let mut power = identity(n);
    for k in 1..=(m / 2) {
        power = &power * &a2;
        u += &power * c(b[2 * k + 1], 0.0);
        v += &power * c(b[2 * k], 0.0);
    }
    let u = a * u;
    solve(&(&v - &u), &(&v + &u))
}

fn pade13(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let b = pade_coefficients(13);
    let s = |k: usize| c(b[k], 0.0);
    let id = identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * s(13) + &a4 * s(11) + &a2 * s(9))
        + &a6 * s(7)
        + &a4 * s(5)
        + &a2 * s(3)
        + &id * s(1);
    let u = a * u_inner;
    let v = &a6 * (&a6 * s(12) + &a4 * s(10) + &a2 * s(8))
        + &a6 * s(6)
        + &a4 * s(4)
        + &a2 * s(2)
        + &id * s(0);
    solve(&(&v - &u), &(&v + &u))
}

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant whose degree (and squaring count) is picked from the 1-norm.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), a.ncols(), "expm requires a square matrix");
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let norm = norm1(a);
    if norm == 0.0 {
        return identity(n);
    }
    for &(m, theta) in &THETA[..4] {
        if norm <= theta {
            return pade_low(a, m);
        }
    }
    let theta13 = THETA[4].1;
    let squarings = if norm > theta13 {
        (norm / theta13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * c(0.5_f64.powi(squarings), 0.0);
    let mut r = pade13(&scaled);
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// Matrix exponential of `t * i * h` for Hermitian `h` using its
/// eigendecomposition; exact to rounding for any `t`.
pub struct HermitianExp {
    vectors: CMatrix,
    values: Vec<f64>,
}

impl HermitianExp {
    pub fn new(h: &CMatrix) -> Self {
        let eig = h.clone().symmetric_eigen();
        HermitianExp {
            vectors: eig.eigenvectors,
            values: eig.eigenvalues.iter().cloned().collect(),
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// exp(i * s * h) where h is the matrix this was built from.
    pub fn exp_i(&self, s: f64) -> CMatrix {
        let phases = DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&l| Complex64::from_polar(1.0, s * l)),
        );
        let scaled = CMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |r, k| {
            self.vectors[(r, k)] * phases[k]
        });
        scaled * self.vectors.adjoint()
    }

    /// exp(i * s * h) v without forming the matrix.
    pub fn apply_exp_i(&self, s: f64, v: &CVector) -> CVector {
        let mut coords = self.vectors.adjoint() * v;
        for (z, &l) in coords.iter_mut().zip(&self.values) {
            *z *= Complex64::from_polar(1.0, s * l);
        }
        &self.vectors * coords
    }
}

/// Hermitian form value `v* G v` (real part; `G` is assumed Hermitian).
pub fn quadratic_form(g: &CMatrix, v: &CVector) -> f64 {
    v.dotc(&(g * v)).re
}

/// Operator norm of `a` measured in the `G`-norm on both sides, with the
/// input restricted to the span of the first `interior` basis vectors.
///
/// Solved as a generalized Hermitian eigenproblem
/// `P A* G A P x = mu P G P x` through a Cholesky factor of the input form.
pub fn weighted_operator_norm(a: &CMatrix, g_out: &CMatrix, g_in: &CMatrix, interior: usize) -> Result<f64> {
    let n = a.ncols().min(g_in.nrows());
    if interior == 0 || interior > n {
        return Err(LabError::usage(format!(
            "interior dimension {interior} outside 1..={n}"
        )));
    }
    if g_out.nrows() != a.nrows() {
        return Err(LabError::usage("output Gram form does not match the operator"));
    }
    let b = g_in.view((0, 0), (interior, interior)).into_owned();
    let chol = b
        .cholesky()
        .ok_or_else(|| LabError::usage("input Gram form is not positive definite"))?;
    let a_k = a.columns(0, interior).into_owned();
    let c_mat = a_k.adjoint() * g_out * &a_k;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or(LabError::Singular { condition: f64::INFINITY })?;
    let reduced = &l_inv * c_mat * l_inv.adjoint();
    let top = reduced
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    Ok(if top < 0.0 { 0.0 } else { top.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation_generator(theta: f64) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, c(-theta, 0.0), c(theta, 0.0), ZERO])
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = CMatrix::zeros(4, 4);
        assert_eq!(expm(&z), identity(4));
    }

    #[test]
    fn expm_rotation_matches_closed_form() {
        for &theta in &[1e-6, 0.01, 0.3, 1.0, 7.5, 40.0] {
            let e = expm(&rotation_generator(theta));
            let expect = CMatrix::from_row_slice(
                2,
                2,
                &[
                    c(theta.cos(), 0.0),
                    c(-theta.sin(), 0.0),
                    c(theta.sin(), 0.0),
                    c(theta.cos(), 0.0),
                ],
            );
            assert!(max_abs(&(e - expect)) < 1e-12 * (1.0 + theta), "theta={theta}");
        }
    }

    #[test]
    fn expm_nilpotent_is_affine() {
        let mut n = CMatrix::zeros(3, 3);
        n[(0, 1)] = c(2.0, 0.0);
        n[(1, 2)] = c(3.0, 0.0);
        let e = expm(&n);
        let expect = identity(3) + &n + &n * &n * c(0.5, 0.0);
        assert!(max_abs(&(e - expect)) < 1e-13);
    }

    #[test]
    fn expm_diagonal_complex() {
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.5, 2.0), c(-3.0, 0.1), c(0.0, -9.0)]));
        let e = expm(&d);
        for k in 0..3 {
            assert!((e[(k, k)] - d[(k, k)].exp()).norm() < 1e-12);
        }
    }

    #[test]
    fn hermitian_exp_agrees_with_expm() {
        let h = CMatrix::from_fn(5, 5, |r, k| {
            let x = ((r + 1) * (k + 2)) as f64 * 0.1;
            if r == k {
                c(x, 0.0)
            } else if r < k {
                c(x, 0.3 * x)
            } else {
                c(((k + 1) * (r + 2)) as f64 * 0.1, -0.3 * ((k + 1) * (r + 2)) as f64 * 0.1)
            }
        });
        let he = HermitianExp::new(&h);
        let e1 = he.exp_i(0.7);
        let e2 = expm(&(&h * c(0.0, 0.7)));
        assert!(max_abs(&(e1 - e2)) < 1e-12);
    }

    #[test]
    fn inverse_flags_singular_matrix() {
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, ZERO, ONE]));
        assert!(matches!(inverse_checked(&d), Err(LabError::Singular { .. })));
    }

    #[test]
    fn weighted_norm_reduces_to_spectral_norm() {
        let a = CMatrix::from_fn(4, 4, |r, k| c((r as f64 - k as f64) * 0.5, (r * k) as f64 * 0.1));
        let id = identity(4);
        let w = weighted_operator_norm(&a, &id, &id, 4).unwrap();
        assert!((w - norm2(&a)).abs() < 1e-12);
    }
}
