//! Block-diagonal nilpotent generators on a truncation of `ℓ₂`: block `n`
//! carries `n·χ₁`, `n·χ₂`, `n²·χ₃` acting on ℂ³.

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::lie::GroupElement;
use crate::linalg::{self, c, CMatrix, CVector, ZERO};
use crate::scale::{build_scale_chain, GeneratorFamily, ScaleChain};

#[derive(Debug, Clone)]
pub struct BlockGeneratorFamily {
    pub m: usize,
    pub gens: [CMatrix; 3],
}

pub fn block_generators(m: usize) -> Result<BlockGeneratorFamily> {
    if m == 0 {
        return Err(LabError::usage("block family needs at least one block"));
    }
    let dim = 3 * m;
    let mut x1 = CMatrix::zeros(dim, dim);
    let mut x2 = CMatrix::zeros(dim, dim);
    let mut x3 = CMatrix::zeros(dim, dim);
    for b in 0..m {
        let w = (b + 1) as f64;
        let o = 3 * b;
        // χ₁(x,y,z) = (y,0,0), χ₂(x,y,z) = (0,z,0), χ₃(x,y,z) = (z,0,0).
        x1[(o, o + 1)] = c(w, 0.0);
        x2[(o + 1, o + 2)] = c(w, 0.0);
        x3[(o, o + 2)] = c(w * w, 0.0);
    }
    Ok(BlockGeneratorFamily { m, gens: [x1, x2, x3] })
}

impl BlockGeneratorFamily {
    pub fn dim(&self) -> usize {
        3 * self.m
    }

    /// As a generic family; the operators are exact, so no guard band applies.
    pub fn to_family(&self) -> GeneratorFamily {
        GeneratorFamily::new(
            self.gens.to_vec(),
            vec!["X1".into(), "X2".into(), "X3".into()],
            self.dim(),
            0,
        )
        .expect("block generators share one size")
    }

    /// Max-entry residuals of `X_i X_j − δ_{1i}δ_{2j} X₃`.
    pub fn product_residuals(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, r) in row.iter_mut().enumerate() {
                let prod = &self.gens[i] * &self.gens[j];
                let diff = if i == 0 && j == 1 { prod - &self.gens[2] } else { prod };
                *r = linalg::max_abs(&diff);
            }
        }
        out
    }
}

/// `I + ξ₁X₁ + ξ₂X₂ + ξ₃X₃`.
pub fn rep_operator(g: &GroupElement, fam: &BlockGeneratorFamily) -> CMatrix {
    let mut t = linalg::identity(fam.dim());
    for (x, &xi) in fam.gens.iter().zip(&g.coords()) {
        if xi != 0.0 {
            t += x * c(xi, 0.0);
        }
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub pass: bool,
}

/// Scale of depth two plus the observed range of `‖φ‖₂ / ‖φ‖₁`.
pub fn two_norm_chain(fam: &BlockGeneratorFamily, samples: &[CVector]) -> Result<(ScaleChain, EquivalenceReport)> {
    let chain = build_scale_chain(&fam.to_family(), 2)?;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for v in samples {
        let n1 = chain.norm(v, 1)?;
        if n1 == 0.0 {
            continue;
        }
        let r = chain.norm(v, 2)? / n1;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let pass = lo >= 1.0 - 1e-12 && hi <= 3f64.sqrt() + 1e-12;
    Ok((
        chain,
        EquivalenceReport {
            min_ratio: lo,
            max_ratio: hi,
            pass,
        },
    ))
}

/// `(M, ‖X₁‖)` along a ladder of block counts.
pub fn unboundedness_growth(ms: &[usize]) -> Result<Vec<(usize, f64)>> {
    ms.iter()
        .map(|&m| Ok((m, linalg::norm2(&block_generators(m)?.gens[0]))))
        .collect()
}

#[derive(Debug, Clone)]
pub struct NilpotentResolvent {
    pub r: CMatrix,
    /// Max-entry residual of `(λ − X)R − I`.
    pub left_residual: f64,
    /// Max-entry residual of `R(λ − X) − I`.
    pub right_residual: f64,
    pub norm: f64,
}

/// `R = (λ + X_i)/λ²`, the inverse of `λ − X_i` for square-zero `X_i`.
pub fn nilpotent_resolvent(fam: &BlockGeneratorFamily, i: usize, lambda: Complex64) -> Result<NilpotentResolvent> {
    if lambda == ZERO {
        return Err(LabError::usage("λ = 0 is not admissible: the range of a square-zero generator is not dense"));
    }
    if i >= 3 {
        return Err(LabError::usage(format!("generator index {i} out of range")));
    }
    let id = linalg::identity(fam.dim());
    let x = &fam.gens[i];
    let r = (&id * lambda + x) / (lambda * lambda);
    let shifted = &id * lambda - x;
    Ok(NilpotentResolvent {
        left_residual: linalg::max_abs(&(&shifted * &r - &id)),
        right_residual: linalg::max_abs(&(&r * &shifted - &id)),
        norm: linalg::norm2(&r),
        r,
    })
}

/// `(M, ‖exp(tX₁)‖)` with `exp(tX₁) = I + tX₁`.
pub fn nonextendability_evidence(ms: &[usize], t: f64) -> Result<Vec<(usize, f64)>> {
    ms.iter()
        .map(|&m| {
            let fam = block_generators(m)?;
            let e = linalg::identity(fam.dim()) + &fam.gens[0] * c(t, 0.0);
            Ok((m, linalg::norm2(&e)))
        })
        .collect()
}

/// Largest singular value of `[[1, s], [0, 1]]`.
pub fn jordan_block_norm(s: f64) -> f64 {
    (s.abs() + (s * s + 4.0).sqrt()) / 2.0
}

/// `‖T(g)‖₁`, the operator norm in the first scale norm, along a ladder.
pub fn level_one_continuity(ms: &[usize], g: &GroupElement) -> Result<Vec<(usize, f64)>> {
    ms.iter()
        .map(|&m| {
            let fam = block_generators(m)?;
            let chain = build_scale_chain(&fam.to_family(), 1)?;
            let t = rep_operator(g, &fam);
            let g1 = chain.gram(1)?;
            Ok((m, linalg::weighted_operator_norm(&t, g1, g1, fam.dim())?))
        })
        .collect()
}

/// Vector with a single nonzero entry.
pub fn unit(dim: usize, k: usize) -> CVector {
    let mut v = CVector::from_element(dim, ZERO);
    v[k] = c(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_on_unit_vectors() {
        let fam = block_generators(3).unwrap();
        assert_eq!(&fam.gens[0] * unit(9, 1), unit(9, 0));
        assert_eq!(&fam.gens[0] * unit(9, 4), unit(9, 3) * c(2.0, 0.0));
        assert_eq!(&fam.gens[2] * unit(9, 8), unit(9, 6) * c(9.0, 0.0));
    }

    #[test]
    fn products_are_exact() {
        let fam = block_generators(7).unwrap();
        for row in fam.product_residuals() {
            for r in row {
                assert_eq!(r, 0.0);
            }
        }
        assert_eq!(linalg::max_abs(&(&fam.gens[1] * &fam.gens[0])), 0.0);
    }

    #[test]
    fn rep_homomorphism_example() {
        let fam = block_generators(5).unwrap();
        let a = rep_operator(&GroupElement::new(1.0, 0.0, 0.0), &fam);
        let b = rep_operator(&GroupElement::new(0.0, 1.0, 0.0), &fam);
        let ab = rep_operator(&GroupElement::new(1.0, 1.0, 1.0), &fam);
        assert_eq!(linalg::max_abs(&(a * b - ab)), 0.0);
        assert_eq!(rep_operator(&GroupElement::IDENTITY, &fam), linalg::identity(15));
    }

    #[test]
    fn growth_tables() {
        let g = unboundedness_growth(&[1, 10]).unwrap();
        assert!((g[0].1 - 1.0).abs() < 1e-12 && (g[1].1 - 10.0).abs() < 1e-12);
        let e = nonextendability_evidence(&[1, 5], 1.0).unwrap();
        assert!((e[0].1 - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((e[1].1 - jordan_block_norm(5.0)).abs() < 1e-12);
        let z = nonextendability_evidence(&[4], 0.0).unwrap();
        assert!((z[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resolvent_candidate() {
        let fam = block_generators(1).unwrap();
        let r = nilpotent_resolvent(&fam, 0, c(1.0, 0.0)).unwrap();
        assert_eq!(r.left_residual, 0.0);
        assert_eq!(r.r, linalg::identity(3) + &fam.gens[0]);
        assert!(nilpotent_resolvent(&fam, 0, ZERO).is_err());
    }

    #[test]
    fn kernel_vectors_have_equal_norms() {
        let fam = block_generators(4).unwrap();
        let v = unit(12, 3);
        let (chain, rep) = two_norm_chain(&fam, std::slice::from_ref(&v)).unwrap();
        assert!((chain.norm(&v, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!(rep.pass);
    }
}
