//! Exact-algebra checks on the structure constants, the group law, the
//! second-kind chart and the automorphism matrices.

use nalgebra::DMatrix;
use serde_json::json;

use super::config::{SuiteConfig, Tolerances};
use super::rng::{dyadic_element, uniform};
use super::{Case, Outcome};
use crate::error::Result;
use crate::hermite::hermite_generators;
use crate::lie::{self, AlgebraVector, GroupElement, StructureConstants};
use crate::linalg::{self, c};

const SUITE: &str = "lie-core";
const SAMPLES: usize = 1000;

fn max_entry(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
}

fn rand_algebra(rng: &mut impl rand::Rng, r: f64) -> AlgebraVector {
    AlgebraVector::new((0..3).map(|_| uniform(rng, -r, r)).collect())
}

pub fn cases(cfg: &SuiteConfig, tol: &Tolerances) -> Result<Vec<Case>> {
    let sign = cfg.x3_sign;
    let exact = tol.algebra;
    let mut out = Vec::new();

    out.push(Case::new(SUITE, "structure.antisymmetry", json!({"algebras": ["heisenberg", "so3"]}), move |_| {
        let h = StructureConstants::heisenberg().antisymmetry_residual();
        let s = StructureConstants::so3().antisymmetry_residual();
        Ok(Outcome::at_most(h.max(s), exact).details(json!({"heisenberg": h, "so3": s})))
    }));

    out.push(Case::new(SUITE, "structure.jacobi", json!({"algebras": ["heisenberg", "so3"]}), move |_| {
        let h = StructureConstants::heisenberg().jacobi_residual();
        let s = StructureConstants::so3().jacobi_residual();
        Ok(Outcome::at_most(h.max(s), exact).details(json!({"heisenberg": h, "so3": s})))
    }));

    out.push(Case::new(SUITE, "bracket.relations", json!({}), move |_| {
        let c3 = StructureConstants::heisenberg();
        let b = |i, j| lie::bracket(&c3, &AlgebraVector::basis(3, i), &AlgebraVector::basis(3, j));
        let r = [
            b(0, 1)?.sub(&AlgebraVector::basis(3, 2)).max_abs(),
            b(0, 2)?.max_abs(),
            b(1, 2)?.max_abs(),
            b(1, 0)?.sub(&AlgebraVector::new(vec![0.0, 0.0, -1.0])).max_abs(),
        ];
        let worst = r.iter().cloned().fold(0.0, f64::max);
        Ok(Outcome::at_most(worst, exact))
    }));

    out.push(Case::new(SUITE, "realization.products", json!({}), move |_| {
        // χ_i χ_j = δ_{1i}δ_{2j} χ₃ and the operator action on ℝ³.
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let p = lie::algebra_realization(&AlgebraVector::basis(3, i))
                    * lie::algebra_realization(&AlgebraVector::basis(3, j));
                let expect = if i == 0 && j == 1 {
                    lie::algebra_realization(&AlgebraVector::basis(3, 2))
                } else {
                    DMatrix::zeros(3, 3)
                };
                worst = worst.max(max_entry(&(p - expect)));
            }
        }
        let (al, be, ga) = (0.75, -1.5, 2.25);
        let v = nalgebra::DVector::from_vec(vec![0.5, -0.25, 1.0]);
        let act = lie::algebra_realization(&AlgebraVector::new(vec![al, be, ga])) * &v;
        let expect = nalgebra::DVector::from_vec(vec![al * v[1] + ga * v[2], be * v[2], 0.0]);
        worst = worst.max((act - expect).amax());
        Ok(Outcome::at_most(worst, exact))
    }));

    out.push(Case::new(SUITE, "group.associativity", json!({"samples": SAMPLES, "grid": "2^-10"}), move |rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            let (a, b, g) = (dyadic_element(rng, 2.0), dyadic_element(rng, 2.0), dyadic_element(rng, 2.0));
            worst = worst.max(a.mul(&b).mul(&g).distance(&a.mul(&b.mul(&g))));
        }
        Ok(Outcome::at_most(worst, exact))
    }));

    out.push(Case::new(SUITE, "group.inverse", json!({"samples": SAMPLES, "grid": "2^-10"}), move |rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            let g = dyadic_element(rng, 2.0);
            worst = worst
                .max(g.mul(&g.inv()).distance(&GroupElement::IDENTITY))
                .max(g.inv().mul(&g).distance(&GroupElement::IDENTITY));
        }
        Ok(Outcome::at_most(worst, exact))
    }));

    out.push(Case::new(SUITE, "group.matrix-realization", json!({"samples": SAMPLES}), move |rng| {
        // g = e + Σ ξ_i χ_i, and the matrix law reproduces the group law.
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            let (g, h) = (dyadic_element(rng, 2.0), dyadic_element(rng, 2.0));
            let lhs = lie::matrix_realization(&g) * lie::matrix_realization(&h);
            worst = worst.max(max_entry(&(lhs - lie::matrix_realization(&g.mul(&h)))));
            let affine = DMatrix::identity(3, 3) + lie::algebra_realization(&AlgebraVector::new(g.coords().to_vec()));
            worst = worst.max(max_entry(&(affine - lie::matrix_realization(&g))));
        }
        Ok(Outcome::at_most(worst, exact))
    }));

    out.push(Case::new(SUITE, "chart.roundtrip", json!({"samples": SAMPLES}), move |rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            let g = dyadic_element(rng, 2.0);
            let t = lie::second_kind_coords(&g);
            worst = worst.max(lie::from_second_kind(t).distance(&g));
            // Product of the one-parameter factors.
            let prod = (0..3).fold(GroupElement::IDENTITY, |acc, k| {
                let mut x = AlgebraVector::basis(3, k);
                x.coeffs[k] = t[k];
                acc.mul(&lie::exp_algebra(1.0, &x))
            });
            worst = worst.max(prod.distance(&g));
            let s = [t[0], t[1], t[2]];
            let back = lie::second_kind_coords(&lie::from_second_kind(s));
            worst = worst.max((0..3).map(|k| (back[k] - s[k]).abs()).fold(0.0, f64::max));
        }
        Ok(Outcome::at_most(worst, exact))
    }));

    out.push(Case::new(SUITE, "exp.one-parameter", json!({"samples": 200}), move |rng| {
        // e^{sx}e^{tx} = e^{(s+t)x}, and the realization of e^{tx} is expm of tχ.
        let mut law: f64 = 0.0;
        let mut real: f64 = 0.0;
        for _ in 0..200 {
            let g = dyadic_element(rng, 1.0);
            let x = AlgebraVector::new(g.coords().to_vec());
            let (s, t) = (0.375, -0.625);
            law = law.max(lie::exp_algebra(s, &x).mul(&lie::exp_algebra(t, &x)).distance(&lie::exp_algebra(s + t, &x)));
            let m = lie::algebra_realization(&x).map(|v| c(v, 0.0)) * c(t, 0.0);
            let e = linalg::expm(&m).map(|z| z.re);
            real = real.max(max_entry(&(e - lie::matrix_realization(&lie::exp_algebra(t, &x)))));
        }
        Ok(Outcome::at_most(law.max(real), exact).details(json!({"group_law": law, "realization": real})))
    }));

    out.push(Case::new(SUITE, "automorphism.identity", json!({"samples": SAMPLES}), move |rng| {
        let c3 = StructureConstants::heisenberg();
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            worst = worst.max(lie::automorphism_identity_check(&c3, &dyadic_element(rng, 2.0), sign)?);
        }
        Ok(Outcome::at_most(worst, exact))
    }));

    out.push(Case::new(SUITE, "automorphism.homomorphism", json!({"samples": SAMPLES}), move |rng| {
        // f(gh) = f(g) f(h) in the row convention.
        let mut worst: f64 = 0.0;
        let mut inv: f64 = 0.0;
        for _ in 0..SAMPLES {
            let (g, h) = (dyadic_element(rng, 2.0), dyadic_element(rng, 2.0));
            let fg = lie::automorphism_matrix(&g, sign).f;
            let fh = lie::automorphism_matrix(&h, sign).f;
            let fgh = lie::automorphism_matrix(&g.mul(&h), sign).f;
            worst = worst.max(max_entry(&(&fg * &fh - fgh)));
            let fi = lie::automorphism_matrix(&g.inv(), sign).f;
            inv = inv.max(max_entry(&(fg * fi - DMatrix::identity(3, 3))));
        }
        Ok(Outcome::at_most(worst.max(inv), exact).details(json!({"product": worst, "inverse": inv})))
    }));

    out.push(Case::new(SUITE, "automorphism.expansion.heisenberg", json!({"t": [0.5, 0.25, 0.125]}), move |_| {
        // f(e^{−t x_k}) = I + t A_k exactly for the nilpotent algebra.
        let c3 = StructureConstants::heisenberg();
        let mut worst: f64 = 0.0;
        for k in 0..3 {
            let a = lie::adjoint_row_matrix(&c3, k);
            for &t in &[0.5, 0.25, 0.125] {
                let g = lie::exp_algebra(-t, &AlgebraVector::basis(3, k));
                let f = lie::automorphism_matrix(&g, sign).f;
                worst = worst.max(lie::expansion_residual(&f, &a, t));
            }
        }
        Ok(Outcome::at_most(worst, exact))
    }));

    out.push(Case::new(SUITE, "automorphism.expansion.so3", json!({"t": [0.1, 0.05]}), move |_| {
        // Second-order remainder: the residual ratio approaches 4 under halving.
        let c3 = StructureConstants::so3();
        let mut worst: f64 = 0.0;
        let mut ratios = Vec::new();
        for k in 0..3 {
            let a = lie::adjoint_row_matrix(&c3, k);
            let r1 = lie::expansion_residual(&lie::row_automorphism(&c3, k, 0.1), &a, 0.1);
            let r2 = lie::expansion_residual(&lie::row_automorphism(&c3, k, 0.05), &a, 0.05);
            let ratio = r1 / r2;
            ratios.push(ratio);
            worst = worst.max((ratio - 4.0).abs());
        }
        Ok(Outcome::within(4.0 + worst, 3.9, 4.1).details(json!({"ratios": ratios})))
    }));

    out.push(Case::new(SUITE, "automorphism.int-so3", json!({"samples": 200}), move |rng| {
        // Int(e^y) = exp(ad y) is an automorphism of so(3).
        let c3 = StructureConstants::so3();
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let f = lie::int_automorphism(&c3, &rand_algebra(rng, 1.0))?;
            // Column form; the identity is stated for rows.
            worst = worst.max(lie::automorphism_identity_residual(&c3, &f.transpose())?);
        }
        Ok(Outcome::at_most(worst, exact))
    }));

    out.push(Case::new(SUITE, "ad-series.algebra", json!({"t": 0.7}), move |_| {
        // On the 3×3 realization the series stops after one commutator.
        let x = lie::algebra_realization(&AlgebraVector::basis(3, 0)).map(|v| c(v, 0.0));
        let y = lie::algebra_realization(&AlgebraVector::basis(3, 1)).map(|v| c(v, 0.0));
        let t = 0.7;
        let (s, terms) = lie::ad_series(&x, &y, t, 1e-300, 64)?;
        let conj = linalg::expm(&(&x * c(t, 0.0))) * &y * linalg::expm(&(&x * c(-t, 0.0)));
        let expect = &y + linalg::commutator(&x, &y) * c(t, 0.0);
        let r = linalg::max_abs(&(&s - expect)).max(linalg::max_abs(&(&s - conj)));
        let zero = lie::ad_series(&x, &y, 0.0, 1e-12, 64)?;
        let commuting = lie::ad_series(&x, &x, t, 1e-300, 64)?;
        let r = r
            .max(linalg::max_abs(&(zero.0 - &y)))
            .max(linalg::max_abs(&(commuting.0 - &x)));
        Ok(Outcome::flag(r <= exact && terms == 1 && commuting.1 == 0, r, exact, exact)
            .details(json!({"terms": terms})))
    }));

    out.push(Case::new(SUITE, "ad-series.hermite", json!({"n": 48, "t": 0.3, "block": 24}), move |_| {
        // Full truncated matrices: edge entries keep the series alive, so it
        // is summed to convergence and compared on the leading block.
        let fam = hermite_generators(48, sign)?;
        let (x, y) = (&fam.gens[0], &fam.gens[1]);
        let t = 0.3;
        let (s, terms) = lie::ad_series(x, y, t, 1e-16, 64)?;
        let expect = y + linalg::commutator(x, y) * c(t, 0.0);
        let r = linalg::max_abs(&(s - expect).view((0, 0), (24, 24)).into_owned());
        Ok(Outcome::at_most(r, exact).details(json!({"terms": terms})))
    }));

    out.push(Case::new(SUITE, "chart.derivative-identities", json!({"samples": 100}), move |rng| {
        let c3 = StructureConstants::heisenberg();
        let mut worst: f64 = 0.0;
        let mut shifted: f64 = 0.0;
        for _ in 0..100 {
            let x = rand_algebra(rng, 1.0);
            let t = uniform(rng, 0.0, 1.0);
            let (a, b) = lie::chart_derivative_residuals(&c3, &x, t, None)?;
            worst = worst.max(a).max(b);
            let g = dyadic_element(rng, 1.0);
            let (a, b) = lie::chart_derivative_residuals(&c3, &x, t, Some(&g))?;
            shifted = shifted.max(a).max(b);
        }
        // Central differences of quadratic coordinates are exact up to rounding.
        let tol = 1e-9;
        Ok(Outcome::at_most(worst.max(shifted), tol).details(json!({"plain": worst, "translated": shifted})))
    }));

    Ok(out)
}
