//! Integration of a generator family to a group representation through
//! products of one-parameter factors, with the identities the construction
//! must satisfy and the dual (contragredient) representation.

use crate::error::{LabError, Result};
use crate::flow::{AffineFlow, OneParameterGroup, SpectralFlow};
use crate::hermite::HermiteModel;
use crate::lie::{self, ad_series, AlgebraVector, GroupElement, X3Sign};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::nilpotent::BlockGeneratorFamily;
use crate::scale::{GeneratorFamily, ScaleChain};

/// Generators with their one-parameter groups and the chart box `|ξ_k| ≤ chart_box`.
pub struct IntegrableFamily {
    pub family: GeneratorFamily,
    pub flows: Vec<Box<dyn OneParameterGroup>>,
    pub chart_box: f64,
}

impl IntegrableFamily {
    pub fn new(family: GeneratorFamily, flows: Vec<Box<dyn OneParameterGroup>>, chart_box: f64) -> Result<Self> {
        if flows.len() != family.d() || family.d() != 3 {
            return Err(LabError::usage("integration needs one flow per generator of a three-generator family"));
        }
        Ok(IntegrableFamily {
            family,
            flows,
            chart_box,
        })
    }

    pub fn hermite(n: usize, sign: X3Sign, chart_box: f64) -> Result<Self> {
        let model = HermiteModel::new(n, sign, 1e-8)?;
        let flows = model
            .family
            .gens
            .iter()
            .map(|g| SpectralFlow::new(g.clone()).map(|f| Box::new(f) as Box<dyn OneParameterGroup>))
            .collect::<Result<Vec<_>>>()?;
        Self::new(model.family, flows, chart_box)
    }

    pub fn blocks(fam: &BlockGeneratorFamily, chart_box: f64) -> Result<Self> {
        let flows = fam
            .gens
            .iter()
            .map(|g| AffineFlow::new(g.clone()).map(|f| Box::new(f) as Box<dyn OneParameterGroup>))
            .collect::<Result<Vec<_>>>()?;
        Self::new(fam.to_family(), flows, chart_box)
    }

    pub fn dim(&self) -> usize {
        self.family.dim
    }

    /// `Σ x_i X_i`.
    pub fn generator(&self, x: &AlgebraVector) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim(), self.dim());
        for (g, &a) in self.family.gens.iter().zip(&x.coeffs) {
            acc += g * c(a, 0.0);
        }
        acc
    }

    fn check_chart(&self, g: &GroupElement) -> Result<()> {
        if g.max_abs() > self.chart_box {
            return Err(LabError::usage(format!(
                "({}, {}, {}) lies outside the chart box {}",
                g.xi1, g.xi2, g.xi3, self.chart_box
            )));
        }
        Ok(())
    }
}

/// `T(t₁, X₁) T(t₂, X₂) T(t₃, X₃)` at the second-kind coordinates of `g`.
pub fn integrate_chart(ifam: &IntegrableFamily, g: &GroupElement) -> Result<CMatrix> {
    ifam.check_chart(g)?;
    let t = lie::second_kind_coords(g);
    let mut out = ifam.flows[0].matrix(t[0]);
    for k in 1..3 {
        out *= ifam.flows[k].matrix(t[k]);
    }
    Ok(out)
}

/// `T(g)φ` without forming the matrix.
pub fn integrate_apply(ifam: &IntegrableFamily, g: &GroupElement, phi: &CVector) -> Result<CVector> {
    ifam.check_chart(g)?;
    let t = lie::second_kind_coords(g);
    let mut v = phi.clone();
    for k in (0..3).rev() {
        v = ifam.flows[k].apply(t[k], &v);
    }
    Ok(v)
}

/// `‖T(g)T(h)φ − T(gh)φ‖_n`.
pub fn homomorphism_residual(
    ifam: &IntegrableFamily,
    g: &GroupElement,
    h: &GroupElement,
    phi: &CVector,
    chain: &ScaleChain,
    n: usize,
) -> Result<f64> {
    let gh = g.mul(h);
    ifam.check_chart(&gh)?;
    let lhs = integrate_apply(ifam, g, &integrate_apply(ifam, h, phi)?)?;
    let rhs = integrate_apply(ifam, &gh, phi)?;
    chain.norm(&(lhs - rhs), n)
}

/// `‖T(t,X_i) X_j T(−t,X_i)φ − Σ_k tᵏ/k! ad(X_i)ᵏ X_j φ‖_n`.
#[allow(clippy::too_many_arguments)]
pub fn int_identity_check(
    ifam: &IntegrableFamily,
    i: usize,
    j: usize,
    t: f64,
    phi: &CVector,
    chain: &ScaleChain,
    n: usize,
    tol: f64,
) -> Result<f64> {
    chain.family.check_margin(phi, n + 2)?;
    let xi = &ifam.family.gens[i];
    let xj = &ifam.family.gens[j];
    let lhs = ifam.flows[i].apply(t, &(xj * ifam.flows[i].apply(-t, phi)));
    let (series, _) = ad_series(xi, xj, t, tol, 64)?;
    chain.norm(&(lhs - series * phi), n)
}

/// `‖T(t,X_i) X_j T(−t,X_i)φ − Σ_k f_jk(e^{−t x_i}) X_k φ‖_n`: the
/// conjugation seen through the automorphism matrices.
pub fn int_rows_check(
    ifam: &IntegrableFamily,
    sign: X3Sign,
    i: usize,
    j: usize,
    t: f64,
    phi: &CVector,
    chain: &ScaleChain,
    n: usize,
) -> Result<f64> {
    chain.family.check_margin(phi, n + 2)?;
    let xj = &ifam.family.gens[j];
    let lhs = ifam.flows[i].apply(t, &(xj * ifam.flows[i].apply(-t, phi)));
    let g = lie::exp_algebra(t, &AlgebraVector::basis(3, i));
    let f = lie::automorphism_matrix(&g.inv(), sign).f;
    let mut rhs = CVector::zeros(phi.len());
    for k in 0..3 {
        if f[(j, k)] != 0.0 {
            rhs += (&ifam.family.gens[k] * phi) * c(f[(j, k)], 0.0);
        }
    }
    chain.norm(&(lhs - rhs), n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTrace {
    pub h_grid: Vec<f64>,
    /// Central difference against `X T(e^{tx})φ`.
    pub left: Vec<f64>,
    /// Central difference against `T(e^{tx}) Xφ`.
    pub right: Vec<f64>,
    /// `‖X T(e^{tx})φ − T(e^{tx}) Xφ‖_n`.
    pub cross: f64,
}

/// Central differences of `t ↦ T(e^{tx})φ` against both generator forms.
#[allow(clippy::too_many_arguments)]
pub fn derivative_identity_check(
    ifam: &IntegrableFamily,
    x: &AlgebraVector,
    t: f64,
    phi: &CVector,
    chain: &ScaleChain,
    n: usize,
    h_grid: &[f64],
) -> Result<DerivativeTrace> {
    chain.family.check_margin(phi, n + 1)?;
    let gen = ifam.generator(x);
    let at = |s: f64| integrate_apply(ifam, &lie::exp_algebra(s, x), phi);
    let tphi = at(t)?;
    let left_form = &gen * &tphi;
    let right_form = integrate_apply(ifam, &lie::exp_algebra(t, x), &(&gen * phi))?;
    let cross = chain.norm(&(&left_form - &right_form), n)?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &h in h_grid {
        let d = (at(t + h)? - at(t - h)?) * c(0.5 / h, 0.0);
        left.push(chain.norm(&(&d - &left_form), n)?);
        right.push(chain.norm(&(&d - &right_form), n)?);
    }
    for seq in [&left, &right] {
        for w in seq.windows(2) {
            if w[1] > w[0] * (1.0 + 1e-3) + 1e-13 {
                return Err(LabError::Convergence {
                    what: "central differences".into(),
                    last_norm: *seq.last().unwrap(),
                    terms: seq.len(),
                    trace: seq.clone(),
                });
            }
        }
    }
    Ok(DerivativeTrace {
        h_grid: h_grid.to_vec(),
        left,
        right,
        cross,
    })
}

/// The standard sesquilinear pairing `⟨φ, F⟩ = φ*F` of the truncation, with
/// the scale level used for the `Φ`-side norm.
pub struct DualPairing<'a> {
    pub chain: &'a ScaleChain,
    pub n: usize,
}

impl DualPairing<'_> {
    pub fn pair(&self, phi: &CVector, f: &CVector) -> num_complex::Complex64 {
        phi.dotc(f)
    }

    /// `sup |⟨φ, F⟩| / ‖φ‖_n` over `φ`, i.e. `sqrt(F* G_n⁻¹ F)`.
    pub fn dual_norm(&self, f: &CVector) -> Result<f64> {
        let g = self.chain.gram(self.n)?;
        let (inv, _) = linalg::inverse_checked(g)?;
        let q = linalg::quadratic_form(&inv, f);
        Ok(if q < 0.0 { 0.0 } else { q.sqrt() })
    }
}

/// `A^×` with `⟨Aφ, F⟩ = ⟨φ, A^×F⟩`.
pub fn dual_operator(a: &CMatrix, _pairing: &DualPairing) -> CMatrix {
    a.adjoint()
}

/// `V(g) = (T(g⁻¹))^×`.
pub fn dual_group(ifam: &IntegrableFamily, pairing: &DualPairing, g: &GroupElement) -> Result<CMatrix> {
    Ok(dual_operator(&integrate_chart(ifam, &g.inv())?, pairing))
}

/// `|⟨T(g)φ, F⟩ − ⟨φ, V(g⁻¹)F⟩|`.
pub fn dual_pairing_residual(
    ifam: &IntegrableFamily,
    pairing: &DualPairing,
    g: &GroupElement,
    phi: &CVector,
    f: &CVector,
) -> Result<f64> {
    let lhs = pairing.pair(&integrate_apply(ifam, g, phi)?, f);
    let v = dual_group(ifam, pairing, &g.inv())?;
    let rhs = pairing.pair(phi, &(v * f));
    Ok((lhs - rhs).norm())
}

/// Max-entry residuals of `(V(e^{hx}) − V(e^{−hx}))/2h + X^×` along `h_grid`.
pub fn dual_generator_residuals(
    ifam: &IntegrableFamily,
    pairing: &DualPairing,
    x: &AlgebraVector,
    h_grid: &[f64],
) -> Result<Vec<f64>> {
    let target = dual_operator(&ifam.generator(x), pairing) * c(-1.0, 0.0);
    h_grid
        .iter()
        .map(|&h| {
            let up = dual_group(ifam, pairing, &lie::exp_algebra(h, x))?;
            let down = dual_group(ifam, pairing, &lie::exp_algebra(-h, x))?;
            Ok(linalg::max_abs(&((up - down) * c(0.5 / h, 0.0) - &target)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionVerdict {
    Extends,
    DoesNotExtend,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    pub generator: usize,
    pub ladder: Vec<(usize, f64)>,
    /// Log-log slope of the norm against the truncation size.
    pub growth_exponent: f64,
    pub verdict: ExtensionVerdict,
}

/// Ambient-norm growth of `exp(tX_i)` along a ladder of truncations.
pub fn extension_probe(ladder: &[IntegrableFamily], i: usize, t: f64) -> Result<ExtensionReport> {
    if ladder.len() < 3 {
        return Err(LabError::usage("extension probe needs at least three ladder points"));
    }
    let points: Vec<(usize, f64)> = ladder
        .iter()
        .map(|f| (f.dim(), linalg::norm2(&f.flows[i].matrix(t))))
        .collect();
    let (s0, n0) = points[0];
    let (s1, n1) = *points.last().unwrap();
    let growth_exponent = (n1 / n0).ln() / (s1 as f64 / s0 as f64).ln();
    let increasing = points.windows(2).all(|w| w[1].1 > w[0].1);
    let flat = points.iter().all(|p| (p.1 - n0).abs() <= 1e-8 * n0);
    let verdict = if flat || growth_exponent.abs() < 0.05 {
        ExtensionVerdict::Extends
    } else if increasing && growth_exponent > 0.5 {
        ExtensionVerdict::DoesNotExtend
    } else {
        ExtensionVerdict::Inconclusive
    };
    Ok(ExtensionReport {
        generator: i,
        ladder: points,
        growth_exponent,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::{block_generators, rep_operator};
    use crate::scale::build_scale_chain;

    #[test]
    fn chart_identity_and_blocks() {
        let fam = block_generators(6).unwrap();
        let ifam = IntegrableFamily::blocks(&fam, 2.0).unwrap();
        assert_eq!(integrate_chart(&ifam, &GroupElement::IDENTITY).unwrap(), linalg::identity(18));
        let g = GroupElement::new(0.5, -1.25, 0.75);
        let diff = integrate_chart(&ifam, &g).unwrap() - rep_operator(&g, &fam);
        assert!(linalg::max_abs(&diff) < 1e-12);
        assert!(integrate_chart(&ifam, &GroupElement::new(3.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn dual_is_involutive() {
        let fam = block_generators(2).unwrap();
        let chain = build_scale_chain(&fam.to_family(), 1).unwrap();
        let pairing = DualPairing { chain: &chain, n: 1 };
        let a = rep_operator(&GroupElement::new(0.3, 0.2, -0.1), &fam) * c(1.0, 0.5);
        assert_eq!(dual_operator(&dual_operator(&a, &pairing), &pairing), a);
        assert_eq!(dual_operator(&linalg::identity(6), &pairing), linalg::identity(6));
    }

    #[test]
    fn extension_verdicts() {
        let herm: Vec<_> = [16, 24, 32]
            .iter()
            .map(|&n| IntegrableFamily::hermite(n, X3Sign::Consistent, 2.0).unwrap())
            .collect();
        for i in 0..3 {
            assert_eq!(extension_probe(&herm, i, 1.0).unwrap().verdict, ExtensionVerdict::Extends);
        }
        let blocks: Vec<_> = [5, 10, 20]
            .iter()
            .map(|&m| IntegrableFamily::blocks(&block_generators(m).unwrap(), 2.0).unwrap())
            .collect();
        for i in 0..3 {
            assert_eq!(extension_probe(&blocks, i, 1.0).unwrap().verdict, ExtensionVerdict::DoesNotExtend);
        }
        assert!(extension_probe(&blocks[..2], 0, 1.0).is_err());
    }
}
