//! The translation–modulation representation of the nilpotent group on
//! `L²(ℝ)`, truncated to the first `N` Hermite functions.
//!
//! `T(ξ)f(x) = e^{−iξ₃} e^{−ixξ₂} f(x + ξ₁)` is evaluated two ways: by
//! quadrature projection of the transformed function, and as a product of
//! the exponentials of the truncated generators.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::flow::{OneParameterGroup, SpectralFlow};
use crate::lie::{self, AlgebraVector, GroupElement, X3Sign};
use crate::linalg::{self, c, CMatrix, CVector, ZERO};
use crate::quadrature::{hermite_functions, GaussHermite};
use crate::scale::{support_of, BoundOutcome, GeneratorFamily, ScaleChain};

/// Coefficients in the Hermite-function basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwartzVector {
    pub coeffs: CVector,
    /// Index of the highest nonzero coefficient (0 for the zero vector).
    pub support_bound: usize,
}

impl SchwartzVector {
    pub fn new(coeffs: CVector) -> Self {
        let support_bound = support_of(&coeffs).saturating_sub(1);
        SchwartzVector { coeffs, support_bound }
    }

    /// The basis function `h_k` in an `n`-mode truncation.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = CVector::from_element(n, ZERO);
        v[k] = c(1.0, 0.0);
        SchwartzVector::new(v)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Value of the represented function at `x`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let h = hermite_functions(self.support_bound + 1, x);
        h.iter().zip(self.coeffs.iter()).map(|(&hk, &ck)| ck * hk).sum()
    }
}

/// Gauss–Hermite rule used for projections, with the loss threshold that
/// turns a truncated projection into an accuracy failure.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub node_count: usize,
    pub residual_tol: f64,
    rule: Arc<GaussHermite>,
}

impl QuadratureSpec {
    pub fn new(node_count: usize, residual_tol: f64) -> Self {
        QuadratureSpec {
            node_count,
            residual_tol,
            rule: Arc::new(GaussHermite::new(node_count)),
        }
    }

    /// Twice as many nodes as modes.
    pub fn for_modes(n: usize, residual_tol: f64) -> Self {
        Self::new(2 * n, residual_tol)
    }

    pub fn rule(&self) -> &GaussHermite {
        &self.rule
    }

    /// Coefficients `⟨h_m, f⟩` for `m < n_out` where `f` is evaluated at
    /// the nodes shifted by `shift`.
    pub fn project(&self, n_out: usize, shift: f64, f: impl Fn(f64) -> Complex64) -> CVector {
        let mut out = CVector::from_element(n_out, ZERO);
        for (&x, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            let y = x + shift;
            let v = f(y) * w;
            if v == ZERO {
                continue;
            }
            for (o, hm) in out.iter_mut().zip(hermite_functions(n_out, y)) {
                *o += v * hm;
            }
        }
        out
    }
}

/// Tridiagonal matrices of `d/dx` and `x` in the first `n` Hermite functions.
pub fn derivative_and_position(n: usize) -> (CMatrix, CMatrix) {
    let mut d = CMatrix::zeros(n, n);
    let mut x = CMatrix::zeros(n, n);
    for k in 1..n {
        let a = (k as f64 / 2.0).sqrt();
        d[(k - 1, k)] = c(a, 0.0);
        d[(k, k - 1)] = c(-a, 0.0);
        x[(k - 1, k)] = c(a, 0.0);
        x[(k, k - 1)] = c(a, 0.0);
    }
    (d, x)
}

/// `X₁ = d/dx`, `X₂ = −ix`, `X₃ = ∓iI` on `n` modes.
pub fn hermite_generators(n: usize, sign: X3Sign) -> Result<GeneratorFamily> {
    if n < 4 {
        return Err(LabError::usage(format!("Hermite truncation needs at least 4 modes, got {n}")));
    }
    let (d, x) = derivative_and_position(n);
    let x2 = x * c(0.0, -1.0);
    let x3 = linalg::identity(n) * c(0.0, sign.central_factor());
    GeneratorFamily::new(
        vec![d, x2, x3],
        vec!["X1".into(), "X2".into(), "X3".into()],
        n - 1,
        1,
    )
}

/// Everything needed to act with the group on an `n`-mode truncation.
pub struct HermiteModel {
    pub n: usize,
    pub sign: X3Sign,
    /// `X₁, X₂, X₃`.
    pub family: GeneratorFamily,
    /// `X₁, X₂`: the generators that build the scale.
    pub scale_family: GeneratorFamily,
    pub flows: Vec<SpectralFlow>,
    pub quad: QuadratureSpec,
}

impl HermiteModel {
    pub fn new(n: usize, sign: X3Sign, residual_tol: f64) -> Result<Self> {
        let family = hermite_generators(n, sign)?;
        let scale_family = family.subfamily(&[0, 1]);
        let flows = family
            .gens
            .iter()
            .map(|g| SpectralFlow::new(g.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(HermiteModel {
            n,
            sign,
            family,
            scale_family,
            flows,
            quad: QuadratureSpec::for_modes(n, residual_tol),
        })
    }

    /// `Σ x_i X_i`.
    pub fn generator(&self, x: &AlgebraVector) -> CMatrix {
        let mut acc = CMatrix::zeros(self.n, self.n);
        for (g, &a) in self.family.gens.iter().zip(&x.coeffs) {
            acc += g * c(a, 0.0);
        }
        acc
    }

    pub fn analytic(&self, g: &GroupElement, phi: &CVector) -> Result<CVector> {
        group_action_analytic(g, &SchwartzVector::new(phi.clone()), &self.quad).map(|s| s.coeffs)
    }

    pub fn factored(&self, g: &GroupElement, phi: &CVector) -> Result<CVector> {
        group_action_factored(self, g, &SchwartzVector::new(phi.clone())).map(|s| s.coeffs)
    }

    /// `exp(t₁X₁) exp(t₂X₂) exp(t₃X₃)` as a matrix.
    pub fn factored_matrix(&self, g: &GroupElement) -> CMatrix {
        let t = lie::second_kind_coords(g);
        self.flows[0].matrix(t[0]) * self.flows[1].matrix(t[1]) * self.flows[2].matrix(t[2])
    }
}

fn relative_loss(before: f64, after: f64) -> f64 {
    if before == 0.0 {
        after
    } else {
        (before - after).abs() / before
    }
}

/// `x ↦ e^{−iξ₃} e^{−ixξ₂} φ(x + ξ₁)` projected back onto the basis.
pub fn group_action_analytic(g: &GroupElement, phi: &SchwartzVector, q: &QuadratureSpec) -> Result<SchwartzVector> {
    let n = phi.dim();
    let phase = Complex64::from_polar(1.0, -g.xi3);
    // Centre the Gaussian envelope of h_m(y) φ(y + ξ₁) on the rule.
    let shift = -0.5 * g.xi1;
    let out = q.project(n, shift, |y| phi.eval(y + g.xi1) * phase * Complex64::from_polar(1.0, -y * g.xi2));
    let loss = relative_loss(phi.coeffs.norm(), out.norm());
    if loss > q.residual_tol {
        return Err(LabError::Accuracy {
            what: format!("analytic action at ({}, {}, {})", g.xi1, g.xi2, g.xi3),
            residual: loss,
            threshold: q.residual_tol,
        });
    }
    Ok(SchwartzVector::new(out))
}

/// Relative norm carried by the top eighth of the modes.
fn edge_fraction(v: &CVector) -> f64 {
    let n = v.len();
    let band = (n / 8).max(2);
    let total = v.norm();
    if total == 0.0 {
        return 0.0;
    }
    v.rows(n - band, band).norm() / total
}

/// Product of one-parameter factors in second-kind coordinates.
pub fn group_action_factored(model: &HermiteModel, g: &GroupElement, phi: &SchwartzVector) -> Result<SchwartzVector> {
    let t = lie::second_kind_coords(g);
    let mut v = phi.coeffs.clone();
    for k in (0..3).rev() {
        v = model.flows[k].apply(t[k], &v);
        let edge = edge_fraction(&v);
        if edge > model.quad.residual_tol {
            return Err(LabError::Accuracy {
                what: format!("factor exp(t{} X{}) reaches the truncation edge", k + 1, k + 1),
                residual: edge,
                threshold: model.quad.residual_tol,
            });
        }
    }
    Ok(SchwartzVector::new(v))
}

/// `‖T(g) X_i T(g⁻¹) φ − Σ_j f_ij(g⁻¹) X_j φ‖_n` with `f` taken in the
/// model's sign convention.
pub fn conjugation_check(
    model: &HermiteModel,
    chain: &ScaleChain,
    g: &GroupElement,
    i: usize,
    phi: &CVector,
    n: usize,
) -> Result<f64> {
    chain.family.check_margin(phi, n + 1)?;
    let conj = conjugated(model, g, i, phi)?;
    let f = lie::automorphism_matrix(&g.inv(), model.sign).f;
    let mut expect = CVector::from_element(model.n, ZERO);
    for j in 0..3 {
        if f[(i, j)] != 0.0 {
            expect += (&model.family.gens[j] * phi) * c(f[(i, j)], 0.0);
        }
    }
    chain.norm(&(conj - expect), n)
}

fn conjugated(model: &HermiteModel, g: &GroupElement, i: usize, phi: &CVector) -> Result<CVector> {
    let back = model.analytic(&g.inv(), phi)?;
    let mid = &model.family.gens[i] * back;
    model.analytic(g, &mid)
}

/// Scalar `κ` with `T(g) X_i T(g⁻¹) φ ≈ (X_i + κ) φ`, fitted by projection
/// onto `φ`.
pub fn measured_conjugation_offset(model: &HermiteModel, g: &GroupElement, i: usize, phi: &CVector) -> Result<Complex64> {
    let diff = conjugated(model, g, i, phi)? - &model.family.gens[i] * phi;
    let norm2 = phi.norm_squared();
    if norm2 == 0.0 {
        return Err(LabError::usage("offset fit needs a nonzero vector"));
    }
    Ok(phi.dotc(&diff) / c(norm2, 0.0))
}

/// `r_k = ‖(T(e^{t_k x}) − I)φ/t_k − Xφ‖_n` along a decreasing grid.
pub fn differentiability_probe(
    model: &HermiteModel,
    chain: &ScaleChain,
    x: &AlgebraVector,
    phi: &CVector,
    n: usize,
    t_grid: &[f64],
) -> Result<Vec<f64>> {
    chain.family.check_margin(phi, n + 1)?;
    let xphi = model.generator(x) * phi;
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let tphi = model.analytic(&lie::exp_algebra(t, x), phi)?;
        let quotient = (tphi - phi) * c(1.0 / t, 0.0);
        out.push(chain.norm(&(quotient - &xphi), n)?);
    }
    check_nonincreasing("difference quotient residuals", &out)?;
    Ok(out)
}

/// `‖(T(e^{t x}) − I)φ‖_n` along a decreasing grid.
pub fn continuity_probe(
    model: &HermiteModel,
    chain: &ScaleChain,
    x: &AlgebraVector,
    phi: &CVector,
    n: usize,
    t_grid: &[f64],
) -> Result<Vec<f64>> {
    chain.family.check_margin(phi, n)?;
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let tphi = model.analytic(&lie::exp_algebra(t, x), phi)?;
        out.push(chain.norm(&(tphi - phi), n)?);
    }
    check_nonincreasing("continuity residuals", &out)?;
    Ok(out)
}

fn check_nonincreasing(what: &str, seq: &[f64]) -> Result<()> {
    for w in seq.windows(2) {
        if w[1] > w[0] * (1.0 + 1e-3) + 1e-13 {
            return Err(LabError::Convergence {
                what: what.into(),
                last_norm: *seq.last().unwrap(),
                terms: seq.len(),
                trace: seq.to_vec(),
            });
        }
    }
    Ok(())
}

/// `‖T(g)φ‖_n ≤ (1 + ξ₁² + ξ₂²)^{n/2} ‖φ‖_n`.
pub fn norm_bound_sharp_check(
    model: &HermiteModel,
    chain: &ScaleChain,
    g: &GroupElement,
    phi: &CVector,
    n: usize,
) -> Result<BoundOutcome> {
    chain.family.check_margin(phi, n)?;
    let lhs = chain.norm(&model.analytic(g, phi)?, n)?;
    let factor = (1.0 + g.xi1 * g.xi1 + g.xi2 * g.xi2).powf(n as f64 / 2.0);
    let bound = factor * chain.norm(phi, n)?;
    Ok(BoundOutcome {
        lhs,
        bound,
        pass: lhs <= bound * (1.0 + 1e-6),
    })
}
