//! Gram-form recursion for the nested scale of norms built from a family of
//! truncated generators.

use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::lie::AutomorphismMatrix;
use crate::linalg::{self, CMatrix, CVector};

/// Truncated generator matrices together with the bookkeeping needed to
/// keep test vectors clear of the truncation edge.
#[derive(Debug, Clone)]
pub struct GeneratorFamily {
    pub dim: usize,
    pub gens: Vec<CMatrix>,
    pub labels: Vec<String>,
    /// Leading modes on which a single generator application is exact.
    pub interior_bound: usize,
    /// Modes of support gained per generator application (0 for exact families).
    pub spread: usize,
}

impl GeneratorFamily {
    pub fn new(gens: Vec<CMatrix>, labels: Vec<String>, interior_bound: usize, spread: usize) -> Result<Self> {
        let dim = gens.first().map(|g| g.nrows()).unwrap_or(0);
        if gens.iter().any(|g| g.nrows() != dim || g.ncols() != dim) {
            return Err(LabError::usage("generators must be square matrices of one size"));
        }
        if labels.len() != gens.len() {
            return Err(LabError::usage("one label per generator is required"));
        }
        if interior_bound > dim {
            return Err(LabError::usage(format!(
                "interior bound {interior_bound} exceeds dimension {dim}"
            )));
        }
        Ok(GeneratorFamily {
            dim,
            gens,
            labels,
            interior_bound,
            spread,
        })
    }

    pub fn d(&self) -> usize {
        self.gens.len()
    }

    /// The family restricted to the listed generators.
    pub fn subfamily(&self, indices: &[usize]) -> GeneratorFamily {
        GeneratorFamily {
            dim: self.dim,
            gens: indices.iter().map(|&i| self.gens[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            interior_bound: self.interior_bound,
            spread: self.spread,
        }
    }

    /// Same span, generators replaced by `Σ_j o[i][j] X_j`.
    pub fn recombined(&self, o: &nalgebra::DMatrix<f64>) -> GeneratorFamily {
        let gens = (0..o.nrows())
            .map(|i| {
                let mut acc = CMatrix::zeros(self.dim, self.dim);
                for (j, g) in self.gens.iter().enumerate() {
                    acc += g * linalg::c(o[(i, j)], 0.0);
                }
                acc
            })
            .collect();
        GeneratorFamily {
            dim: self.dim,
            gens,
            labels: (0..o.nrows()).map(|i| format!("Y{}", i + 1)).collect(),
            interior_bound: self.interior_bound,
            spread: self.spread,
        }
    }

    /// Number of leading modes a vector may occupy when checks reach scale
    /// depth `depth`.
    pub fn support_limit(&self, depth: usize) -> usize {
        self.interior_bound.saturating_sub(self.spread * self.d() * depth)
    }

    /// Largest depth whose support limit is still nonempty.
    pub fn max_safe_depth(&self) -> usize {
        if self.spread == 0 || self.d() == 0 {
            return usize::MAX;
        }
        self.interior_bound.saturating_sub(1) / (self.spread * self.d())
    }

    pub fn check_margin(&self, phi: &CVector, depth: usize) -> Result<()> {
        let limit = self.support_limit(depth);
        let support = support_of(phi);
        if support > limit {
            return Err(LabError::usage(format!(
                "vector occupies {support} modes but depth {depth} allows only {limit}"
            )));
        }
        Ok(())
    }
}

/// Number of leading modes up to and including the last nonzero entry.
pub fn support_of(v: &CVector) -> usize {
    v.iter().rposition(|z| z.norm() != 0.0).map(|p| p + 1).unwrap_or(0)
}

/// Gram matrices `G₀ = I`, `G_{n+1} = Σ X_i* G_n X_i + G_n`.
#[derive(Debug, Clone)]
pub struct ScaleChain {
    pub grams: Vec<CMatrix>,
    pub family: Arc<GeneratorFamily>,
}

pub fn build_scale_chain(family: &GeneratorFamily, n_max: usize) -> Result<ScaleChain> {
    if n_max > family.max_safe_depth() {
        return Err(LabError::usage(format!(
            "scale depth {n_max} violates the guard band of a {}-generator family with interior bound {}; maximal safe depth is {}",
            family.d(),
            family.interior_bound,
            family.max_safe_depth()
        )));
    }
    let mut grams = vec![linalg::identity(family.dim)];
    for n in 0..n_max {
        let g = &grams[n];
        let mut next = g.clone();
        for x in &family.gens {
            next += x.adjoint() * g * x;
        }
        // Symmetrize away rounding so later eigen-solvers see an exact Hermitian matrix.
        let next = (&next + next.adjoint()) * linalg::c(0.5, 0.0);
        grams.push(next);
    }
    Ok(ScaleChain {
        grams,
        family: Arc::new(family.clone()),
    })
}

impl ScaleChain {
    pub fn n_max(&self) -> usize {
        self.grams.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.family.dim
    }

    pub fn gram(&self, n: usize) -> Result<&CMatrix> {
        self.grams.get(n).ok_or_else(|| {
            LabError::usage(format!("scale level {n} exceeds chain depth {}", self.n_max()))
        })
    }

    pub fn norm(&self, phi: &CVector, n: usize) -> Result<f64> {
        let g = self.gram(n)?;
        if phi.len() != g.nrows() {
            return Err(LabError::usage(format!(
                "vector of length {} against a scale of dimension {}",
                phi.len(),
                g.nrows()
            )));
        }
        if n == 0 {
            return Ok(phi.norm());
        }
        // Clamp rounding below zero; NaN falls through.
        let q = linalg::quadratic_form(g, phi);
        Ok(if q < 0.0 { 0.0 } else { q.sqrt() })
    }

    /// Smallest eigenvalue of each increment `G_{n+1} − G_n`.
    pub fn increment_floors(&self) -> Vec<f64> {
        self.grams
            .windows(2)
            .map(|w| linalg::hermitian_min_eigenvalue(&(&w[1] - &w[0])))
            .collect()
    }

    /// Smallest eigenvalue of each Gram matrix.
    pub fn gram_floors(&self) -> Vec<f64> {
        self.grams.iter().map(linalg::hermitian_min_eigenvalue).collect()
    }

    pub fn hermiticity_defects(&self) -> Vec<f64> {
        self.grams.iter().map(linalg::hermiticity_defect).collect()
    }
}

pub fn scale_norm(chain: &ScaleChain, phi: &CVector, n: usize) -> Result<f64> {
    chain.norm(phi, n)
}

/// Outcome of an inequality check `lhs ≤ bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOutcome {
    pub lhs: f64,
    pub bound: f64,
    pub pass: bool,
}

impl BoundOutcome {
    pub fn ratio(&self) -> f64 {
        if self.bound == 0.0 {
            if self.lhs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.lhs / self.bound
        }
    }
}

/// `‖φ‖_n ≤ ‖φ‖_{n+1}` and `‖X_iφ‖_n ≤ ‖φ‖_{n+1}`; `lhs` is the largest
/// left-hand side.
pub fn monotonicity_check(chain: &ScaleChain, phi: &CVector, n: usize) -> Result<BoundOutcome> {
    let rhs = chain.norm(phi, n + 1)?;
    let mut lhs = chain.norm(phi, n)?;
    for x in &chain.family.gens {
        lhs = lhs.max(chain.norm(&(x * phi), n)?);
    }
    let pass = lhs <= rhs * (1.0 + 1e-12) + 1e-300;
    Ok(BoundOutcome { lhs, bound: rhs, pass })
}

/// `‖T(g)φ‖_n ≤ ω (1 + Σ|f_ij|)ⁿ ‖φ‖_n`.
pub fn group_bound_check(
    chain: &ScaleChain,
    tg_phi: &CVector,
    omega: f64,
    f: &AutomorphismMatrix,
    n: usize,
    phi: &CVector,
) -> Result<BoundOutcome> {
    chain.family.check_margin(phi, n)?;
    let lhs = chain.norm(tg_phi, n)?;
    let bound = omega * (1.0 + f.abs_sum()).powi(n as i32) * chain.norm(phi, n)?;
    Ok(BoundOutcome {
        lhs,
        bound,
        pass: lhs <= bound * (1.0 + 1e-6),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ZERO};

    fn shift_family(n: usize) -> GeneratorFamily {
        let mut up = CMatrix::zeros(n, n);
        for k in 0..n - 1 {
            up[(k + 1, k)] = c(1.0, 0.0);
        }
        GeneratorFamily::new(vec![up], vec!["S".into()], n - 1, 1).unwrap()
    }

    #[test]
    fn zero_family_gives_identity_grams() {
        let fam = GeneratorFamily::new(vec![CMatrix::zeros(5, 5); 2], vec!["a".into(), "b".into()], 4, 1).unwrap();
        let chain = build_scale_chain(&fam, 1).unwrap();
        for g in &chain.grams {
            assert_eq!(*g, linalg::identity(5));
        }
    }

    #[test]
    fn guard_band_error_names_safe_depth() {
        let fam = shift_family(6);
        let err = build_scale_chain(&fam, 5).unwrap_err();
        match err {
            LabError::Usage(msg) => assert!(msg.contains("maximal safe depth is 4"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(build_scale_chain(&fam, 4).is_ok());
    }

    #[test]
    fn norms_of_shift_scale() {
        let fam = shift_family(8);
        let chain = build_scale_chain(&fam, 2).unwrap();
        let mut e0 = CVector::from_element(8, ZERO);
        e0[0] = c(1.0, 0.0);
        assert!((chain.norm(&e0, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((chain.norm(&e0, 1).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((chain.norm(&e0, 2).unwrap() - 2.0).abs() < 1e-15);
        assert!(chain.norm(&e0, 3).is_err());
        let zero = CVector::from_element(8, ZERO);
        assert_eq!(chain.norm(&zero, 2).unwrap(), 0.0);
        let nan = CVector::from_element(8, c(f64::NAN, 0.0));
        assert!(chain.norm(&nan, 1).unwrap().is_nan());
        assert!(monotonicity_check(&chain, &e0, 1).unwrap().pass);
    }

    #[test]
    fn margin_check_rejects_edge_vectors() {
        let fam = shift_family(8);
        let mut v = CVector::from_element(8, ZERO);
        v[6] = c(1.0, 0.0);
        assert!(fam.check_margin(&v, 0).is_ok());
        assert!(fam.check_margin(&v, 1).is_err());
        assert_eq!(support_of(&v), 7);
    }
}
