//! The truncated translation–modulation model: generators, the scale of
//! norms, both action routes, conjugation, growth, continuity and
//! differentiability.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::json;

use super::config::{SuiteConfig, Tolerances};
use super::rng::{group_element, interior_vector, uniform};
use super::{Case, Outcome};
use crate::error::Result;
use crate::hermite::{self, HermiteModel, SchwartzVector};
use crate::lie::{self, AlgebraVector, GroupElement};
use crate::linalg::{self, c, CVector};
use crate::quadrature::GaussHermite;
use crate::scale::{self, build_scale_chain, ScaleChain};

const SUITE: &str = "heisenberg-hermite";
const SAMPLES: usize = 100;

struct Shared {
    model: HermiteModel,
    chain: ScaleChain,
    n: usize,
    nmax: usize,
    /// Random vectors live on the leading quarter of the modes.
    support: usize,
}

fn h0(n: usize) -> CVector {
    SchwartzVector::basis(n, 0).coeffs
}

/// `‖h₀‖₁²` and `‖h₀‖₂²` by quadrature of the closed-form derivatives
/// `X_i X_j h₀ = p_ij(x) h₀`.
fn h0_norm_oracle() -> (f64, f64) {
    let rule = GaussHermite::new(40);
    let h0sq = |x: f64| (-x * x).exp() / std::f64::consts::PI.sqrt();
    let int = |p: &dyn Fn(f64) -> f64| rule.integrate(|x| p(x) * h0sq(x));
    let first = int(&|x| x * x) * 2.0 + 1.0;
    // |h₀''|², |(xh₀)'|², |x h₀'|², |x² h₀|² over h₀².
    let second_order = int(&|x| (x * x - 1.0).powi(2)) * 2.0 + int(&|x| x.powi(4)) * 2.0;
    let second = second_order + 2.0 * int(&|x| x * x) * 2.0 + 1.0;
    (first, second)
}

fn ratio_band(residuals: &[f64]) -> (f64, f64, Vec<f64>) {
    let ratios: Vec<f64> = residuals.windows(2).map(|w| w[0] / w[1]).collect();
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi, ratios)
}

/// `1e−2 · 2^{−k}` down to about `1e−5`.
pub fn halving_grid() -> Vec<f64> {
    (0..=10).map(|k| 1e-2 / f64::powi(2.0, k)).collect()
}

pub fn cases(cfg: &SuiteConfig, tol: &Tolerances) -> Result<Vec<Case>> {
    let n = cfg.hermite_modes();
    let nmax = cfg.nmax;
    let model = HermiteModel::new(n, cfg.x3_sign, 1e-8)?;
    let chain = build_scale_chain(&model.scale_family, nmax + 1)?;
    let sh = Arc::new(Shared {
        model,
        chain,
        n,
        nmax,
        support: n / 4,
    });
    let tol = *tol;
    let mut out = Vec::new();
    let base = json!({"N": n});

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "generators.entries", base.clone(), move |_| {
            // ⟨h₁, X₂h₀⟩ = −i⟨h₁, x h₀⟩ and ⟨h₀, X₁h₁⟩ = ⟨h₀, h₁'⟩ by quadrature.
            let rule = GaussHermite::new(20);
            let pos = rule.integrate(|x| {
                let h = crate::quadrature::hermite_functions(2, x);
                h[1] * x * h[0]
            });
            let der = rule.integrate(|x| {
                let h = crate::quadrature::hermite_functions(2, x);
                // h₁' = √2 h₀ − x h₁
                h[0] * (std::f64::consts::SQRT_2 * h[0] - x * h[1])
            });
            let g = &sh.model.family.gens;
            let r = (g[1][(1, 0)] - c(0.0, -pos)).norm().max((g[0][(0, 1)] - c(der, 0.0)).norm());
            Ok(Outcome::at_most(r, tol.algebra).details(json!({"x_10": pos, "d_01": der})))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "generators.structure", base.clone(), move |_| {
            let g = &sh.model.family.gens;
            let skew = linalg::max_abs(&(&g[0] + g[0].transpose()));
            let real = g[0].iter().fold(0.0_f64, |m, z| m.max(z.im.abs()));
            let imag = g[1].iter().fold(0.0_f64, |m, z| m.max(z.re.abs()));
            let herm = linalg::max_abs(&(&g[1] + g[1].adjoint()));
            let r = skew.max(real).max(imag).max(herm);
            Ok(Outcome::at_most(r, tol.algebra))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "generators.commutator", json!({"N": n, "block": n - 2}), move |_| {
            // [X₁, X₂] = X₃ away from the last row and column.
            let g = &sh.model.family.gens;
            let comm = linalg::commutator(&g[0], &g[1]) - &g[2];
            let k = sh.n - 2;
            let r = linalg::max_abs(&comm.view((0, 0), (k, k)).into_owned());
            Ok(Outcome::at_most(r, tol.algebra).details(json!({"x3_diagonal": [g[2][(0, 0)].re, g[2][(0, 0)].im]})))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "scale.h0-norms", base.clone(), move |_| {
            let (o1, o2) = h0_norm_oracle();
            let phi = h0(sh.n);
            let n1 = sh.chain.norm(&phi, 1)?;
            let n2 = sh.chain.norm(&phi, 2)?;
            let r = (n1 - o1.sqrt()).abs().max((n2 - o2.sqrt()).abs());
            Ok(Outcome::at_most(r, tol.norm_oracle).details(json!({
                "norm1": n1, "norm2": n2, "oracle1": o1.sqrt(), "oracle2": o2.sqrt(),
                "sqrt2": 2f64.sqrt(), "sqrt6": 6f64.sqrt()
            })))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "scale.monotonicity.floor", json!({"N": n, "nmax": nmax}), move |_| {
            // Eigenvalue floors of G_{n+1} − G_n and hermiticity of the Grams.
            let floors = sh.chain.increment_floors();
            let min = floors.iter().cloned().fold(f64::INFINITY, f64::min);
            let herm = sh.chain.hermiticity_defects().iter().cloned().fold(0.0, f64::max);
            let pass = min >= -1e-12 && herm <= tol.algebra;
            Ok(Outcome::flag(pass, min, -1e-12, 1e-12).details(json!({"floors": floors, "hermiticity": herm})))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "scale.monotonicity.vectors", json!({"N": n, "samples": SAMPLES}), move |rng| {
            let mut worst: f64 = 0.0;
            for k in 0..sh.nmax {
                for _ in 0..SAMPLES {
                    let phi = interior_vector(rng, sh.n, sh.support);
                    worst = worst.max(scale::monotonicity_check(&sh.chain, &phi, k)?.ratio());
                }
            }
            Ok(Outcome::bounded(worst, 1.0, 1e-12))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "scale.x2-h0", base.clone(), move |_| {
            // ‖X₂h₀‖₀ = 1/√2 sits below ‖h₀‖₁ = √2.
            let phi = h0(sh.n);
            let x2 = (&sh.model.family.gens[1] * &phi).norm();
            let n1 = sh.chain.norm(&phi, 1)?;
            let r = (x2 - std::f64::consts::FRAC_1_SQRT_2).abs();
            Ok(Outcome::flag(r <= tol.norm_oracle && x2 <= n1, x2, n1, tol.norm_oracle))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "scale.basis-invariance", json!({"N": n, "angle": 0.7}), move |_| {
            let (s, co) = 0.7f64.sin_cos();
            let o = DMatrix::from_row_slice(2, 2, &[co, -s, s, co]);
            let rotated = build_scale_chain(&sh.model.scale_family.recombined(&o), sh.nmax)?;
            let mut worst: f64 = 0.0;
            for k in 0..=sh.nmax {
                let a = sh.chain.gram(k)?;
                let b = rotated.gram(k)?;
                worst = worst.max(linalg::max_abs(&(a - b)) / linalg::max_abs(a));
            }
            Ok(Outcome::at_most(worst, 1e-12))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "scale.norm-axioms", json!({"N": n, "samples": SAMPLES}), move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..SAMPLES {
                let a = interior_vector(rng, sh.n, sh.support);
                let b = interior_vector(rng, sh.n, sh.support);
                let z = Complex64::new(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
                for k in 0..=sh.nmax {
                    let na = sh.chain.norm(&a, k)?;
                    let nb = sh.chain.norm(&b, k)?;
                    let homog = (sh.chain.norm(&(&a * z), k)? - z.norm() * na).abs() / (z.norm() * na);
                    let tri = (sh.chain.norm(&(&a + &b), k)? - (na + nb)).max(0.0) / (na + nb);
                    worst = worst.max(homog).max(tri);
                }
            }
            Ok(Outcome::at_most(worst, 1e-12))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "action.identity-and-phase", base.clone(), move |rng| {
            let phi = interior_vector(rng, sh.n, sh.support);
            let id = sh.model.analytic(&GroupElement::IDENTITY, &phi)?;
            let xi3 = 0.9;
            let ph = sh.model.analytic(&GroupElement::new(0.0, 0.0, xi3), &phi)?;
            let r = linalg::max_abs_vec(&(id - &phi))
                .max(linalg::max_abs_vec(&(ph - &phi * Complex64::from_polar(1.0, -xi3))));
            Ok(Outcome::at_most(r, tol.algebra))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "action.unitarity", json!({"N": n, "samples": SAMPLES, "box": 2.0}), move |rng| {
            let mut analytic: f64 = 0.0;
            let mut factored: f64 = 0.0;
            for _ in 0..SAMPLES {
                let g = group_element(rng, 2.0);
                let phi = interior_vector(rng, sh.n, sh.support);
                analytic = analytic.max((sh.model.analytic(&g, &phi)?.norm() - 1.0).abs());
                factored = factored.max((sh.model.factored(&g, &phi)?.norm() - 1.0).abs());
            }
            Ok(Outcome::at_most(analytic.max(factored), tol.unitarity)
                .details(json!({"analytic": analytic, "factored": factored})))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "action.route-agreement", json!({"N": n, "samples": 50, "box": 1.0, "level": 1}), move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let g = group_element(rng, 1.0);
                let phi = interior_vector(rng, sh.n, sh.support);
                let a = sh.model.analytic(&g, &phi)?;
                let b = sh.model.factored(&g, &phi)?;
                worst = worst.max(sh.chain.norm(&(a - b), 1)?);
            }
            Ok(Outcome::at_most(worst, tol.route))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "action.homomorphism", json!({"N": n, "samples": 50, "box": 1.0}), move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let (g, h) = (group_element(rng, 1.0), group_element(rng, 1.0));
                let phi = interior_vector(rng, sh.n, sh.support);
                let lhs = sh.model.analytic(&g, &sh.model.analytic(&h, &phi)?)?;
                let rhs = sh.model.analytic(&g.mul(&h), &phi)?;
                worst = worst.max((lhs - rhs).norm());
            }
            Ok(Outcome::at_most(worst, tol.route))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "conjugation.random", json!({"N": n, "samples": 30, "box": 1.0, "levels": [0, 1]}), move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..30 {
                let g = group_element(rng, 1.0);
                let phi = interior_vector(rng, sh.n, sh.support);
                for i in 0..3 {
                    for k in 0..=1 {
                        worst = worst.max(hermite::conjugation_check(&sh.model, &sh.chain, &g, i, &phi, k)?);
                    }
                }
            }
            Ok(Outcome::at_most(worst, tol.conjugation))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "conjugation.x2-offset", json!({"N": n, "xi1": [0.5, -1.0, 1.5]}), move |_| {
            // T(g) X₂ T(g⁻¹) − X₂ for g = (ξ₁, 0, 0) is the scalar −iξ₁.
            let phi = h0(sh.n);
            let mut worst: f64 = 0.0;
            let mut fitted = Vec::new();
            for &xi1 in &[0.5, -1.0, 1.5] {
                let k = hermite::measured_conjugation_offset(&sh.model, &GroupElement::new(xi1, 0.0, 0.0), 1, &phi)?;
                fitted.push(json!({"xi1": xi1, "re": k.re, "im": k.im}));
                worst = worst.max((k - c(0.0, -xi1)).norm());
            }
            Ok(Outcome::at_most(worst, tol.conjugation).details(json!({"offsets": fitted})))
        }));
    }

    for k in 0..=nmax {
        let sh = sh.clone();
        out.push(Case::new(SUITE, format!("growth.group-bound.n{k}"), json!({"N": n, "n": k, "samples": SAMPLES, "omega": 1.0, "box": 2.0}), move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..SAMPLES {
                let g = group_element(rng, 2.0);
                let phi = interior_vector(rng, sh.n, sh.support);
                let tg = sh.model.analytic(&g, &phi)?;
                let f = lie::automorphism_matrix(&g, sh.model.sign);
                worst = worst.max(scale::group_bound_check(&sh.chain, &tg, 1.0, &f, k, &phi)?.ratio());
            }
            Ok(Outcome::bounded(worst, 1.0, tol.growth_slack))
        }));
    }

    for k in 0..=nmax {
        let sh = sh.clone();
        out.push(Case::new(SUITE, format!("growth.sharp.n{k}"), json!({"N": n, "n": k, "samples": SAMPLES, "box": 2.0}), move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..SAMPLES {
                let g = group_element(rng, 2.0);
                let phi = interior_vector(rng, sh.n, sh.support);
                worst = worst.max(hermite::norm_bound_sharp_check(&sh.model, &sh.chain, &g, &phi, k)?.ratio());
            }
            Ok(Outcome::bounded(worst, 1.0, tol.growth_slack))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "growth.phase-equality", json!({"N": n, "samples": 20}), move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..20 {
                let g = GroupElement::new(0.0, 0.0, uniform(rng, -2.0, 2.0));
                let phi = interior_vector(rng, sh.n, sh.support);
                for k in 0..=sh.nmax {
                    let b = hermite::norm_bound_sharp_check(&sh.model, &sh.chain, &g, &phi, k)?;
                    worst = worst.max((b.lhs - b.bound).abs() / b.bound);
                }
            }
            Ok(Outcome::at_most(worst, tol.phase_equality))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "growth.modulation", json!({"N": n, "xi2": [0.5, 1.0, 2.0]}), move |_| {
            // ‖T(0, ξ₂, 0)h₀‖_n against (1 + ξ₂²)^{n/2} ‖h₀‖_n.
            let phi = h0(sh.n);
            let mut worst: f64 = 0.0;
            for &xi2 in &[0.5, 1.0, 2.0] {
                for k in 0..=sh.nmax {
                    let b = hermite::norm_bound_sharp_check(&sh.model, &sh.chain, &GroupElement::new(0.0, xi2, 0.0), &phi, k)?;
                    worst = worst.max(b.ratio());
                }
            }
            Ok(Outcome::bounded(worst, 1.0, tol.growth_slack))
        }));
    }

    let grid: Vec<f64> = (1..=8).map(|k| 10f64.powi(-k)).collect();
    for axis in 0..3 {
        let sh = sh.clone();
        let grid = grid.clone();
        out.push(Case::new(SUITE, format!("continuity.chi{}", axis + 1), json!({"N": n, "levels": [0, 1, 2], "t": grid}), move |rng| {
            let phi = interior_vector(rng, sh.n, sh.support);
            let x = AlgebraVector::basis(3, axis);
            let mut last: f64 = 0.0;
            let mut traces = Vec::new();
            for k in 0..=2.min(sh.nmax) {
                let seq = hermite::continuity_probe(&sh.model, &sh.chain, &x, &phi, k, &grid)?;
                last = last.max(*seq.last().unwrap());
                traces.push(seq);
            }
            Ok(Outcome::at_most(last, tol.continuity).details(json!({"traces": traces})))
        }));
    }

    let tgrid = halving_grid();
    for axis in 0..3 {
        for k in 0..=2.min(nmax) {
            let sh = sh.clone();
            let tgrid = tgrid.clone();
            out.push(Case::new(SUITE, format!("differentiability.chi{}.n{k}", axis + 1), json!({"N": n, "n": k, "t": tgrid}), move |rng| {
                let x = AlgebraVector::basis(3, axis);
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                let mut all = Vec::new();
                for phi in [h0(sh.n), interior_vector(rng, sh.n, 8)] {
                    let res = hermite::differentiability_probe(&sh.model, &sh.chain, &x, &phi, k, &tgrid)?;
                    let (a, b, ratios) = ratio_band(&res);
                    lo = lo.min(a);
                    hi = hi.max(b);
                    all.push(json!({"residuals": res, "ratios": ratios}));
                }
                let worst = if 2.0 - lo > hi - 2.0 { lo } else { hi };
                Ok(Outcome::within(worst, 1.7, 2.3).details(json!({"min_ratio": lo, "max_ratio": hi, "vectors": all})))
            }));
        }
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_values() {
        let (a, b) = h0_norm_oracle();
        assert!((a - 2.0).abs() < 1e-13 && (b - 6.0).abs() < 1e-13);
    }
}
