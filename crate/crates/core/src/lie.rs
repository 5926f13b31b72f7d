//! Structure constants, the three-dimensional nilpotent group in its
//! global chart, and the automorphism matrices of its conjugation action.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{self, CMatrix};

/// `[x_i, x_j] = Σ_k c[i][j][k] x_k`, stored flat in row-major (i, j, k) order.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(dim: usize) -> Self {
        StructureConstants {
            dim,
            c: vec![0.0; dim * dim * dim],
        }
    }

    /// `[χ₁, χ₂] = χ₃`, all other brackets of basis elements zero.
    pub fn heisenberg() -> Self {
        let mut s = Self::zeros(3);
        s.set_antisymmetric(0, 1, 2, 1.0);
        s
    }

    /// Rotation algebra: `[x_i, x_j] = ε_ijk x_k`.
    pub fn so3() -> Self {
        let mut s = Self::zeros(3);
        s.set_antisymmetric(0, 1, 2, 1.0);
        s.set_antisymmetric(1, 2, 0, 1.0);
        s.set_antisymmetric(2, 0, 1, 1.0);
        s
    }

    pub fn set_antisymmetric(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let d = self.dim;
        self.c[(i * d + j) * d + k] = v;
        self.c[(j * d + i) * d + k] = -v;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let d = self.dim;
        let mut r: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    r = r.max((self.get(i, j, k) + self.get(j, i, k)).abs());
                }
            }
        }
        r
    }

    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim;
        let mut r: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let s: f64 = (0..d)
                            .map(|m| {
                                self.get(i, j, m) * self.get(m, k, l)
                                    + self.get(j, k, m) * self.get(m, i, l)
                                    + self.get(k, i, m) * self.get(m, j, l)
                            })
                            .sum();
                        r = r.max(s.abs());
                    }
                }
            }
        }
        r
    }

    /// Matrix of `ad(y)` acting on coordinate columns: `[y, x_j] = Σ_l M[l][j] x_l`.
    pub fn ad_matrix(&self, y: &AlgebraVector) -> Result<DMatrix<f64>> {
        self.check_dim(y)?;
        let d = self.dim;
        Ok(DMatrix::from_fn(d, d, |l, j| {
            (0..d).map(|k| y.coeffs[k] * self.get(k, j, l)).sum()
        }))
    }

    fn check_dim(&self, v: &AlgebraVector) -> Result<()> {
        if v.coeffs.len() != self.dim {
            return Err(LabError::usage(format!(
                "algebra vector of length {} against structure constants of dimension {}",
                v.coeffs.len(),
                self.dim
            )));
        }
        Ok(())
    }
}

/// Coordinates of an algebra element in the chosen basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraVector {
    pub coeffs: Vec<f64>,
}

impl AlgebraVector {
    pub fn new(coeffs: Vec<f64>) -> Self {
        AlgebraVector { coeffs }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coeffs = vec![0.0; dim];
        coeffs[i] = 1.0;
        AlgebraVector { coeffs }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn sub(&self, other: &AlgebraVector) -> AlgebraVector {
        AlgebraVector::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    fn from_column(v: &nalgebra::DVector<f64>) -> Self {
        AlgebraVector::new(v.iter().cloned().collect())
    }

    fn column(&self) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_column_slice(&self.coeffs)
    }
}

pub fn bracket(c: &StructureConstants, a: &AlgebraVector, b: &AlgebraVector) -> Result<AlgebraVector> {
    c.check_dim(a)?;
    c.check_dim(b)?;
    let d = c.dim();
    let mut out = vec![0.0; d];
    for i in 0..d {
        for j in 0..d {
            let w = a.coeffs[i] * b.coeffs[j];
            if w == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += w * c.get(i, j, k);
            }
        }
    }
    Ok(AlgebraVector::new(out))
}

/// Element of the nilpotent group `ℝ³` in its global chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        xi1: 0.0,
        xi2: 0.0,
        xi3: 0.0,
    };

    pub fn new(xi1: f64, xi2: f64, xi3: f64) -> Self {
        GroupElement { xi1, xi2, xi3 }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.xi1, self.xi2, self.xi3]
    }

    pub fn max_abs(&self) -> f64 {
        self.xi1.abs().max(self.xi2.abs()).max(self.xi3.abs())
    }

    pub fn distance(&self, other: &GroupElement) -> f64 {
        (self.xi1 - other.xi1)
            .abs()
            .max((self.xi2 - other.xi2).abs())
            .max((self.xi3 - other.xi3).abs())
    }

    pub fn mul(&self, h: &GroupElement) -> GroupElement {
        group_multiply(self, h)
    }

    pub fn inv(&self) -> GroupElement {
        group_inverse(self)
    }
}

pub fn group_multiply(g: &GroupElement, h: &GroupElement) -> GroupElement {
    GroupElement {
        xi1: g.xi1 + h.xi1,
        xi2: g.xi2 + h.xi2,
        xi3: g.xi3 + h.xi3 + g.xi1 * h.xi2,
    }
}

pub fn group_inverse(g: &GroupElement) -> GroupElement {
    GroupElement {
        xi1: -g.xi1,
        xi2: -g.xi2,
        xi3: -g.xi3 + g.xi1 * g.xi2,
    }
}

/// `(t₁, t₂, t₃)` with `g = e^{t₁χ₁} e^{t₂χ₂} e^{t₃χ₃}`.
pub fn second_kind_coords(g: &GroupElement) -> [f64; 3] {
    [g.xi1, g.xi2, g.xi3 - g.xi1 * g.xi2]
}

/// Recombines the three one-parameter factors with the group law.
pub fn from_second_kind(t: [f64; 3]) -> GroupElement {
    let a = GroupElement::new(t[0], 0.0, 0.0);
    let b = GroupElement::new(0.0, t[1], 0.0);
    let c = GroupElement::new(0.0, 0.0, t[2]);
    a.mul(&b).mul(&c)
}

/// `e^{t(aχ₁ + bχ₂ + cχ₃)}` in the chart.
pub fn exp_algebra(t: f64, x: &AlgebraVector) -> GroupElement {
    let (a, b, c) = (x.coeffs[0], x.coeffs[1], x.coeffs[2]);
    GroupElement::new(t * a, t * b, t * c + 0.5 * t * t * a * b)
}

/// Upper unitriangular 3×3 matrix realizing the group on ℝ³; the group law
/// becomes matrix multiplication.
pub fn matrix_realization(g: &GroupElement) -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[1.0, g.xi1, g.xi3, 0.0, 1.0, g.xi2, 0.0, 0.0, 1.0])
}

/// Basis operators on ℝ³: `χ v = (αy + γz, βz, 0)` for `χ = (α, β, γ)`.
pub fn algebra_realization(x: &AlgebraVector) -> DMatrix<f64> {
    let (a, b, c) = (x.coeffs[0], x.coeffs[1], x.coeffs[2]);
    DMatrix::from_row_slice(3, 3, &[0.0, a, c, 0.0, 0.0, b, 0.0, 0.0, 0.0])
}

/// Which sign the central generator carries in the Hermite realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum X3Sign {
    /// `X₃ = −iI`, the sign obtained by differentiating the group action.
    Consistent,
    /// `X₃ = +iI`, as printed alongside the generators.
    Paper,
}

impl X3Sign {
    pub fn name(self) -> &'static str {
        match self {
            X3Sign::Consistent => "consistent",
            X3Sign::Paper => "paper",
        }
    }

    /// Imaginary unit multiple carried by `X₃`.
    pub fn central_factor(self) -> f64 {
        match self {
            X3Sign::Consistent => -1.0,
            X3Sign::Paper => 1.0,
        }
    }
}

impl std::str::FromStr for X3Sign {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "consistent" => Ok(X3Sign::Consistent),
            "paper" => Ok(X3Sign::Paper),
            other => Err(LabError::usage(format!(
                "unknown x3 sign convention '{other}' (expected paper|consistent)"
            ))),
        }
    }
}

/// Matrix `f(g)` with `T(g) X_i T(g⁻¹) = Σ_j f_ij(g⁻¹) X_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphismMatrix {
    pub f: DMatrix<f64>,
    pub g: GroupElement,
}

impl AutomorphismMatrix {
    pub fn abs_sum(&self) -> f64 {
        self.f.iter().map(|v| v.abs()).sum()
    }
}

pub fn automorphism_matrix(g: &GroupElement, sign: X3Sign) -> AutomorphismMatrix {
    let mut f = DMatrix::identity(3, 3);
    f[(0, 2)] = g.xi2;
    f[(1, 2)] = match sign {
        X3Sign::Consistent => -g.xi1,
        X3Sign::Paper => g.xi1,
    };
    AutomorphismMatrix { f, g: *g }
}

/// Residual of `Σ_k c_ijk f_kl = Σ_{m,n} c_mnl f_im f_jn` for a given `f`
/// (pass `f(g⁻¹)`).
pub fn automorphism_identity_residual(c: &StructureConstants, f: &DMatrix<f64>) -> Result<f64> {
    let d = c.dim();
    if f.nrows() != d || f.ncols() != d {
        return Err(LabError::usage("automorphism matrix has the wrong dimension"));
    }
    let mut r: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            for l in 0..d {
                let lhs: f64 = (0..d).map(|k| c.get(i, j, k) * f[(k, l)]).sum();
                let mut rhs = 0.0;
                for m in 0..d {
                    for n in 0..d {
                        rhs += c.get(m, n, l) * f[(i, m)] * f[(j, n)];
                    }
                }
                r = r.max((lhs - rhs).abs());
            }
        }
    }
    Ok(r)
}

pub fn automorphism_identity_check(c: &StructureConstants, g: &GroupElement, sign: X3Sign) -> Result<f64> {
    let f = automorphism_matrix(&g.inv(), sign);
    automorphism_identity_residual(c, &f.f)
}

/// `exp(ad y)` as a matrix acting on coordinate columns.
pub fn int_automorphism(c: &StructureConstants, y: &AlgebraVector) -> Result<DMatrix<f64>> {
    let ad = c.ad_matrix(y)?;
    let complex = ad.map(|v| linalg::c(v, 0.0));
    Ok(linalg::expm(&complex).map(|z| z.re))
}

/// `(A_k)_ij = c[k][i][j]`, the row-action form of `ad(x_k)`:
/// `[x_k, x_i] = Σ_j (A_k)_ij x_j`.
pub fn adjoint_row_matrix(c: &StructureConstants, k: usize) -> DMatrix<f64> {
    let d = c.dim();
    DMatrix::from_fn(d, d, |i, j| c.get(k, i, j))
}

/// Row-form automorphism of `e^{-t x_k}`: `f_ij` with
/// `Int(e^{t x_k}) x_i = Σ_j f_ij x_j`.
pub fn row_automorphism(c: &StructureConstants, k: usize, t: f64) -> DMatrix<f64> {
    let a = adjoint_row_matrix(c, k) * t;
    linalg::expm(&a.map(|v| linalg::c(v, 0.0))).map(|z| z.re)
}

/// Max-entry residual of `f − (I + t·A)` for a first-order expansion.
pub fn expansion_residual(f: &DMatrix<f64>, a: &DMatrix<f64>, t: f64) -> f64 {
    let d = f.nrows();
    let lin = DMatrix::<f64>::identity(d, d) + a * t;
    (f - lin).iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Partial sum of `Σ tⁿ/n! adⁿ(X) Y`; returns the sum and the number of
/// terms added after the zeroth.
pub fn ad_series(x: &CMatrix, y: &CMatrix, t: f64, tol: f64, max_terms: usize) -> Result<(CMatrix, usize)> {
    let n = x.nrows();
    if x.ncols() != n || y.nrows() != n || y.ncols() != n {
        return Err(LabError::usage("ad_series needs square matrices of one dimension"));
    }
    if tol <= 0.0 {
        return Err(LabError::usage("ad_series tolerance must be positive"));
    }
    let mut sum = y.clone();
    if t == 0.0 {
        return Ok((sum, 0));
    }
    let mut term = y.clone();
    let mut trace = Vec::new();
    for k in 1..=max_terms {
        term = linalg::commutator(x, &term) * linalg::c(t / k as f64, 0.0);
        let size = linalg::max_abs(&term);
        trace.push(size);
        if size < tol {
            return Ok((sum, k - 1));
        }
        sum += &term;
    }
    Err(LabError::Convergence {
        what: "ad series".into(),
        last_norm: *trace.last().unwrap_or(&0.0),
        terms: max_terms,
        trace,
    })
}

/// Residuals of the two chain-rule identities for `e^{tx} = Π e^{t_i(t) x_i}`
/// expressed in second-kind coordinates, at parameter `t`:
/// `x = Σ t_i' Int(t₁x₁)…Int(t_{i−1}x_{i−1}) x_i` and
/// `x = Σ Int(−t_d x_d)…Int(−t_{i+1}x_{i+1}) x_i t_i'`.
///
/// With `g` supplied the coordinates are those of `e^{tx} g`, and the second
/// identity's left side becomes `g⁻¹ x g`.
pub fn chart_derivative_residuals(
    c: &StructureConstants,
    x: &AlgebraVector,
    t: f64,
    g: Option<&GroupElement>,
) -> Result<(f64, f64)> {
    c.check_dim(x)?;
    if c.dim() != 3 {
        return Err(LabError::usage("chart identities are implemented for the three-dimensional chart"));
    }
    let base = g.copied().unwrap_or(GroupElement::IDENTITY);
    let coords = |s: f64| second_kind_coords(&exp_algebra(s, x).mul(&base));
    let h = 1e-3;
    let (up, down) = (coords(t + h), coords(t - h));
    let alpha = coords(t);
    let dalpha: Vec<f64> = (0..3).map(|i| (up[i] - down[i]) / (2.0 * h)).collect();
    let int = |k: usize, s: f64| int_automorphism(c, &scaled_basis(k, s));

    let mut first = nalgebra::DVector::<f64>::zeros(3);
    for i in 0..3 {
        let mut v = AlgebraVector::basis(3, i).column();
        for k in (0..i).rev() {
            v = int(k, alpha[k])? * v;
        }
        first += v * dalpha[i];
    }
    let mut second = nalgebra::DVector::<f64>::zeros(3);
    for i in 0..3 {
        let mut v = AlgebraVector::basis(3, i).column();
        for k in (i + 1)..3 {
            v = int(k, -alpha[k])? * v;
        }
        second += v * dalpha[i];
    }
    // g⁻¹ x g = Int(g⁻¹) x with Int(g) = Int(t₁x₁)Int(t₂x₂)Int(t₃x₃).
    let tg = second_kind_coords(&base);
    let mut conj = x.column();
    for (k, &tk) in tg.iter().enumerate() {
        conj = int(k, -tk)? * conj;
    }
    let r1 = AlgebraVector::from_column(&first).sub(x).max_abs();
    let r2 = AlgebraVector::from_column(&second).sub(&AlgebraVector::from_column(&conj)).max_abs();
    Ok((r1, r2))
}

fn scaled_basis(k: usize, s: f64) -> AlgebraVector {
    let mut v = AlgebraVector::basis(3, k);
    v.coeffs[k] = s;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chi(i: usize) -> AlgebraVector {
        AlgebraVector::basis(3, i)
    }

    fn dyadic() -> impl Strategy<Value = f64> {
        (-2048i32..=2048).prop_map(|k| k as f64 / 1024.0)
    }

    fn element() -> impl Strategy<Value = GroupElement> {
        (dyadic(), dyadic(), dyadic()).prop_map(|(a, b, c)| GroupElement::new(a, b, c))
    }

    #[test]
    fn heisenberg_brackets() {
        let c = StructureConstants::heisenberg();
        assert_eq!(bracket(&c, &chi(0), &chi(1)).unwrap(), chi(2));
        assert_eq!(bracket(&c, &chi(1), &chi(2)).unwrap().max_abs(), 0.0);
        assert_eq!(bracket(&c, &chi(0), &chi(2)).unwrap().max_abs(), 0.0);
        let a = AlgebraVector::new(vec![0.3, -1.2, 4.0]);
        assert_eq!(bracket(&c, &a, &a).unwrap().max_abs(), 0.0);
        assert!(bracket(&c, &a, &AlgebraVector::new(vec![1.0])).is_err());
    }

    #[test]
    fn structure_constant_residuals() {
        for c in [StructureConstants::heisenberg(), StructureConstants::so3()] {
            assert_eq!(c.antisymmetry_residual(), 0.0);
            assert_eq!(c.jacobi_residual(), 0.0);
        }
    }

    #[test]
    fn group_law_examples() {
        let a = GroupElement::new(1.0, 0.0, 0.0);
        let b = GroupElement::new(0.0, 1.0, 0.0);
        assert_eq!(a.mul(&b), GroupElement::new(1.0, 1.0, 1.0));
        assert_eq!(b.mul(&a), GroupElement::new(1.0, 1.0, 0.0));
        let g = GroupElement::new(0.5, -2.0, 3.0);
        assert_eq!(g.mul(&GroupElement::IDENTITY), g);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(group_inverse(&GroupElement::IDENTITY), GroupElement::IDENTITY);
        assert_eq!(group_inverse(&GroupElement::new(1.0, 1.0, 1.0)), GroupElement::new(-1.0, -1.0, 0.0));
        assert_eq!(group_inverse(&GroupElement::new(2.5, 0.0, 0.0)), GroupElement::new(-2.5, 0.0, 0.0));
    }

    #[test]
    fn second_kind_examples() {
        assert_eq!(second_kind_coords(&GroupElement::IDENTITY), [0.0, 0.0, 0.0]);
        assert_eq!(second_kind_coords(&GroupElement::new(1.0, 1.0, 1.0)), [1.0, 1.0, 0.0]);
        assert_eq!(second_kind_coords(&GroupElement::new(2.0, 3.0, 0.0)), [2.0, 3.0, -6.0]);
    }

    #[test]
    fn automorphism_examples() {
        let e = automorphism_matrix(&GroupElement::IDENTITY, X3Sign::Consistent);
        assert_eq!(e.f, DMatrix::identity(3, 3));
        let g = GroupElement::new(0.7, -1.3, 2.0);
        let p = automorphism_matrix(&g, X3Sign::Paper);
        assert_eq!(p.f[(0, 2)], -1.3);
        assert_eq!(p.f[(1, 2)], 0.7);
        assert_eq!(p.f[(0, 0)], 1.0);
        for sign in [X3Sign::Consistent, X3Sign::Paper] {
            let prod = automorphism_matrix(&g, sign).f * automorphism_matrix(&g.inv(), sign).f;
            assert!((prod - DMatrix::identity(3, 3)).amax() < 1e-15);
        }
    }

    #[test]
    fn expansion_with_row_convention() {
        // f(e^{-t x_k}) against the explicit Heisenberg matrices.
        let c = StructureConstants::heisenberg();
        for k in 0..3 {
            for &t in &[0.5, 0.25, 0.125] {
                let mut xi = [0.0; 3];
                xi[k] = -t;
                let g = GroupElement::new(xi[0], xi[1], xi[2]);
                let f = automorphism_matrix(&g, X3Sign::Consistent).f;
                assert!(expansion_residual(&f, &adjoint_row_matrix(&c, k), t) < 1e-15);
            }
        }
        // so(3): residual shrinks by four when t halves.
        let c = StructureConstants::so3();
        let a = adjoint_row_matrix(&c, 2);
        let r1 = expansion_residual(&row_automorphism(&c, 2, 0.02), &a, 0.02);
        let r2 = expansion_residual(&row_automorphism(&c, 2, 0.01), &a, 0.01);
        assert!((r1 / r2 - 4.0).abs() < 0.01);
    }

    #[test]
    fn so3_inner_automorphisms_satisfy_identity() {
        let c = StructureConstants::so3();
        let f = int_automorphism(&c, &AlgebraVector::new(vec![0.3, -0.8, 1.1])).unwrap();
        // Row form is the transpose of the column-acting matrix.
        assert!(automorphism_identity_residual(&c, &f.transpose()).unwrap() < 1e-14);
    }

    #[test]
    fn matrix_realization_is_faithful() {
        let g = GroupElement::new(0.25, -1.5, 0.75);
        let h = GroupElement::new(-2.0, 0.5, 1.0);
        assert_eq!(matrix_realization(&g) * matrix_realization(&h), matrix_realization(&g.mul(&h)));
        let x = AlgebraVector::new(vec![0.5, 0.25, -1.0]);
        let n = algebra_realization(&x);
        let e = DMatrix::identity(3, 3) + &n + &n * &n * 0.5;
        assert!((e - matrix_realization(&exp_algebra(1.0, &x))).amax() < 1e-15);
        // χ_i χ_j = δ_1i δ_2j χ_3 as operators.
        for i in 0..3 {
            for j in 0..3 {
                let p = algebra_realization(&chi(i)) * algebra_realization(&chi(j));
                let expect = if i == 0 && j == 1 {
                    algebra_realization(&chi(2))
                } else {
                    DMatrix::zeros(3, 3)
                };
                assert_eq!(p, expect);
            }
        }
    }

    #[test]
    fn ad_series_commuting_and_zero_time() {
        let x = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![linalg::c(1.0, 0.0), linalg::c(2.0, 0.0)]));
        let y = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![linalg::c(3.0, 1.0), linalg::c(-1.0, 0.0)]));
        assert_eq!(ad_series(&x, &y, 0.0, 1e-14, 64).unwrap().0, y);
        let (s, terms) = ad_series(&x, &y, 0.7, 1e-14, 64).unwrap();
        assert_eq!(s, y);
        assert_eq!(terms, 0);
    }

    #[test]
    fn ad_series_reports_divergence() {
        let x = CMatrix::from_row_slice(2, 2, &[linalg::c(5.0, 0.0), linalg::ZERO, linalg::ZERO, linalg::c(-5.0, 0.0)]);
        let y = CMatrix::from_row_slice(2, 2, &[linalg::ZERO, linalg::ONE, linalg::ZERO, linalg::ZERO]);
        let err = ad_series(&x, &y, 10.0, 1e-14, 8).unwrap_err();
        assert!(matches!(err, LabError::Convergence { terms: 8, .. }));
        assert!(ad_series(&x, &CMatrix::zeros(3, 3), 1.0, 1e-14, 8).is_err());
    }

    #[test]
    fn chart_identities_hold() {
        let c = StructureConstants::heisenberg();
        let x = AlgebraVector::new(vec![0.7, -0.4, 1.3]);
        let (r1, r2) = chart_derivative_residuals(&c, &x, 0.6, None).unwrap();
        assert!(r1 < 1e-10 && r2 < 1e-10, "{r1} {r2}");
        let g = GroupElement::new(0.3, 1.1, -0.5);
        let (r1, r2) = chart_derivative_residuals(&c, &x, 0.4, Some(&g)).unwrap();
        assert!(r1 < 1e-10 && r2 < 1e-10, "{r1} {r2}");
    }

    proptest! {
        #[test]
        fn associativity_is_exact(a in element(), b in element(), c in element()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn inverse_is_two_sided(g in element()) {
            prop_assert_eq!(g.mul(&g.inv()), GroupElement::IDENTITY);
            prop_assert_eq!(g.inv().mul(&g), GroupElement::IDENTITY);
        }

        #[test]
        fn second_kind_roundtrip(g in element()) {
            prop_assert_eq!(from_second_kind(second_kind_coords(&g)), g);
        }

        #[test]
        fn automorphism_is_homomorphism(g in element(), h in element()) {
            for sign in [X3Sign::Consistent, X3Sign::Paper] {
                let lhs = automorphism_matrix(&g, sign).f * automorphism_matrix(&h, sign).f;
                let rhs = automorphism_matrix(&g.mul(&h), sign).f;
                prop_assert!((lhs - rhs).amax() < 1e-12);
            }
        }

        #[test]
        fn identity_star_star(g in element()) {
            let c = StructureConstants::heisenberg();
            for sign in [X3Sign::Consistent, X3Sign::Paper] {
                prop_assert!(automorphism_identity_check(&c, &g, sign).unwrap() < 1e-12);
            }
        }
    }
}
