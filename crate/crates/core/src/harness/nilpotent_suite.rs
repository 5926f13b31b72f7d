//! Block generators on a truncation of `ℓ₂`, the collapsed two-norm scale,
//! the polynomial representation and its growth along the block ladder.

use std::sync::Arc;

use serde_json::json;

use super::config::{SuiteConfig, Tolerances};
use super::rng::{dyadic_element, interior_vector, uniform};
use super::{Case, Outcome};
use crate::error::{LabError, Result};
use crate::lie::{group_multiply, GroupElement};
use crate::linalg::{self, c};
use crate::nilpotent::{self, block_generators, rep_operator};
use crate::scale::build_scale_chain;

const SUITE: &str = "nilpotent-l2";
const SAMPLES: usize = 1000;
const LADDER: [usize; 3] = [10, 50, 100];

fn ladder_with(m: usize) -> Vec<usize> {
    let mut ms: Vec<usize> = LADDER.iter().cloned().chain([m]).collect();
    ms.sort_unstable();
    ms.dedup();
    ms
}

fn table(rows: &[(usize, f64)]) -> serde_json::Value {
    json!(rows.iter().map(|(m, v)| json!({"M": m, "value": v})).collect::<Vec<_>>())
}

pub fn cases(cfg: &SuiteConfig, tol: &Tolerances) -> Result<Vec<Case>> {
    let m = cfg.blocks();
    let nmax = cfg.nmax;
    let fam = Arc::new(block_generators(m)?);
    let tol = *tol;
    let base = json!({"M": m});
    let mut out = Vec::new();

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "generators.action", base.clone(), move |_| {
            // Block b (1-based weight w) maps e_{3b+1} ↦ w e_{3b}, e_{3b+2} ↦ w e_{3b+1} and w² e_{3b}.
            let dim = fam.dim();
            let mut worst: f64 = 0.0;
            for b in 0..fam.m {
                let w = (b + 1) as f64;
                let o = 3 * b;
                let y = nilpotent::unit(dim, o + 1);
                let z = nilpotent::unit(dim, o + 2);
                let checks = [
                    &fam.gens[0] * &y - nilpotent::unit(dim, o) * c(w, 0.0),
                    &fam.gens[1] * &z - &y * c(w, 0.0),
                    &fam.gens[2] * &z - nilpotent::unit(dim, o) * c(w * w, 0.0),
                    &fam.gens[0] * nilpotent::unit(dim, o),
                    &fam.gens[0] * &z,
                ];
                for v in &checks {
                    worst = worst.max(linalg::max_abs_vec(v));
                }
            }
            Ok(Outcome::at_most(worst, tol.algebra))
        }));
    }

    out.push(Case::new(SUITE, "generators.products", json!({"ladder": ladder_with(m)}), move |_| {
        let mut worst: f64 = 0.0;
        let mut rows = Vec::new();
        for k in ladder_with(m) {
            let r = block_generators(k)?.product_residuals();
            let w = r.iter().flatten().cloned().fold(0.0, f64::max);
            rows.push((k, w));
            worst = worst.max(w);
        }
        Ok(Outcome::at_most(worst, tol.algebra).details(json!({"residuals": table(&rows)})))
    }));

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "generators.nilpotency", base.clone(), move |_| {
            let mut worst: f64 = 0.0;
            for x in &fam.gens {
                worst = worst.max(linalg::max_abs(&(x * x)));
                let e = linalg::expm(x);
                let affine = linalg::identity(fam.dim()) + x;
                worst = worst.max(linalg::max_abs(&(e - affine)));
            }
            Ok(Outcome::at_most(worst, tol.algebra))
        }));
    }

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "rep.example", base.clone(), move |_| {
            let a = rep_operator(&GroupElement::new(1.0, 0.0, 0.0), &fam);
            let b = rep_operator(&GroupElement::new(0.0, 1.0, 0.0), &fam);
            let ab = rep_operator(&GroupElement::new(1.0, 1.0, 1.0), &fam);
            let id = rep_operator(&GroupElement::new(0.0, 0.0, 0.0), &fam) - linalg::identity(fam.dim());
            let r = linalg::max_abs(&(a * b - ab)).max(linalg::max_abs(&id));
            Ok(Outcome::at_most(r, tol.l2))
        }));
    }

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "rep.homomorphism", json!({"M": m, "pairs": SAMPLES, "box": 2.0}), move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..SAMPLES {
                let g = dyadic_element(rng, 2.0);
                let h = dyadic_element(rng, 2.0);
                let lhs = rep_operator(&g, &fam) * rep_operator(&h, &fam);
                let rhs = rep_operator(&group_multiply(&g, &h), &fam);
                worst = worst.max(linalg::max_abs(&(lhs - rhs)));
            }
            Ok(Outcome::at_most(worst, tol.l2))
        }));
    }

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "rep.inverse", json!({"M": m, "samples": 100}), move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..100 {
                let g = dyadic_element(rng, 2.0);
                let p = rep_operator(&g, &fam) * rep_operator(&g.inv(), &fam);
                worst = worst.max(linalg::max_abs(&(p - linalg::identity(fam.dim()))));
            }
            Ok(Outcome::at_most(worst, tol.l2))
        }));
    }

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "scale.two-norm", json!({"M": m, "samples": SAMPLES}), move |rng| {
            let samples: Vec<_> = (0..SAMPLES).map(|_| interior_vector(rng, fam.dim(), fam.dim())).collect();
            let (_, rep) = nilpotent::two_norm_chain(&fam, &samples)?;
            let lo = 1.0 - 1e-12;
            let hi = 3f64.sqrt() + 1e-12;
            let pass = rep.min_ratio >= lo && rep.max_ratio <= hi;
            Ok(Outcome::flag(pass, rep.max_ratio, hi, 1e-12).details(json!({"min_ratio": rep.min_ratio, "max_ratio": rep.max_ratio})))
        }));
    }

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "scale.two-norm-sup", base.clone(), move |_| {
            // e_z in the last block, where X₃ carries the weight M².
            let v = nilpotent::unit(fam.dim(), fam.dim() - 1);
            let kernel = nilpotent::unit(fam.dim(), 0);
            let (_, rep) = nilpotent::two_norm_chain(&fam, &[v])?;
            let (_, flat) = nilpotent::two_norm_chain(&fam, &[kernel])?;
            let mf = m as f64;
            let exact = ((3.0 * mf.powi(4) + 2.0 * mf * mf + 1.0) / (mf.powi(4) + mf * mf + 1.0)).sqrt();
            let pass = (rep.max_ratio - exact).abs() <= tol.l2
                && rep.max_ratio <= 3f64.sqrt() + 1e-12
                && (flat.max_ratio - 1.0).abs() <= tol.l2;
            Ok(Outcome::flag(pass, rep.max_ratio, exact, tol.l2)
                .details(json!({"kernel_ratio": flat.max_ratio, "sqrt3_gap": 3f64.sqrt() - rep.max_ratio})))
        }));
    }

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "scale.formula", json!({"M": m, "samples": 100}), move |rng| {
            // ‖φ‖₂² = 2‖X₁φ‖² + 2‖X₂φ‖² + 3‖X₃φ‖² + ‖φ‖².
            let chain = build_scale_chain(&fam.to_family(), 2)?;
            let mut worst: f64 = 0.0;
            for _ in 0..100 {
                let phi = interior_vector(rng, fam.dim(), fam.dim());
                let sq = |k: usize| (&fam.gens[k] * &phi).norm_squared();
                let expected = 2.0 * sq(0) + 2.0 * sq(1) + 3.0 * sq(2) + phi.norm_squared();
                let got = chain.norm(&phi, 2)?.powi(2);
                worst = worst.max((got - expected).abs() / expected);
            }
            Ok(Outcome::at_most(worst, tol.algebra))
        }));
    }

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "scale.floors", json!({"M": m, "nmax": nmax}), move |_| {
            let chain = build_scale_chain(&fam.to_family(), nmax)?;
            let floors = chain.increment_floors();
            let min = floors.iter().cloned().fold(f64::INFINITY, f64::min);
            Ok(Outcome::flag(min >= -1e-12, min, -1e-12, 1e-12).details(json!({"floors": floors})))
        }));
    }

    out.push(Case::new(SUITE, "growth.x1-norm", json!({"ladder": ladder_with(m)}), move |_| {
        let rows = nilpotent::unboundedness_growth(&ladder_with(m))?;
        let worst = rows.iter().map(|&(k, v)| (v - k as f64).abs() / k as f64).fold(0.0, f64::max);
        Ok(Outcome::at_most(worst, tol.algebra).details(json!({"table": table(&rows)})))
    }));

    out.push(Case::new(SUITE, "growth.exp-norm", json!({"ladder": ladder_with(m), "t": 1.0}), move |_| {
        let ms = ladder_with(m);
        let rows = nilpotent::nonextendability_evidence(&ms, 1.0)?;
        let mut below: f64 = 0.0;
        let mut closed: f64 = 0.0;
        for &(k, v) in &rows {
            below = below.max(k as f64 - v);
            closed = closed.max((v - nilpotent::jordan_block_norm(k as f64)).abs() / v);
        }
        let zero = nilpotent::nonextendability_evidence(&ms, 0.0)?;
        let flat = zero.iter().map(|&(_, v)| (v - 1.0).abs()).fold(0.0, f64::max);
        let pass = below <= 0.0 && closed <= tol.algebra && flat <= tol.algebra;
        Ok(Outcome::flag(pass, closed, tol.algebra, tol.algebra)
            .details(json!({"table": table(&rows), "deficit": below, "t0_defect": flat})))
    }));

    out.push(Case::new(SUITE, "resolvent.growth", json!({"ladder": ladder_with(m), "lambda": 1.0}), move |_| {
        let mut rows = Vec::new();
        let mut deficit: f64 = f64::NEG_INFINITY;
        for k in ladder_with(m) {
            let r = nilpotent::nilpotent_resolvent(&block_generators(k)?, 0, c(1.0, 0.0))?;
            deficit = deficit.max(k as f64 * (1.0 - 1e-6) - r.norm);
            rows.push((k, r.norm));
        }
        let increasing = rows.windows(2).all(|w| w[1].1 > w[0].1);
        Ok(Outcome::flag(deficit <= 0.0 && increasing, deficit, 0.0, 1e-6).details(json!({"table": table(&rows)})))
    }));

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "resolvent.identity", json!({"M": m, "samples": 20}), move |rng| {
            // (λ + X)(λ − X) = λ²I in both orders, then R = (λ + X)/λ² against λ − X.
            let id = linalg::identity(fam.dim());
            let mut worst: f64 = 0.0;
            let mut inverse: f64 = 0.0;
            for _ in 0..20 {
                let lambda = c(uniform(rng, 0.5, 4.0), uniform(rng, -4.0, 4.0));
                let l2 = lambda * lambda;
                for i in 0..3 {
                    let x = &fam.gens[i];
                    let (plus, minus) = (&id * lambda + x, &id * lambda - x);
                    let scale = l2.norm();
                    worst = worst.max(linalg::max_abs(&(&plus * &minus - &id * l2)) / scale);
                    worst = worst.max(linalg::max_abs(&(&minus * &plus - &id * l2)) / scale);
                    let r = nilpotent::nilpotent_resolvent(&fam, i, lambda)?;
                    let size = linalg::max_abs(&minus) * linalg::max_abs(&r.r);
                    inverse = inverse.max(r.left_residual.max(r.right_residual) / size);
                }
            }
            let pass = worst <= 1e-13 && inverse <= 1e-13;
            Ok(Outcome::flag(pass, worst, 1e-13, 1e-13).details(json!({"resolvent_relative_residual": inverse})))
        }));
    }

    {
        let fam = fam.clone();
        out.push(Case::new(SUITE, "resolvent.zero-lambda", base.clone(), move |_| {
            let rejected = matches!(nilpotent::nilpotent_resolvent(&fam, 0, c(0.0, 0.0)), Err(LabError::Usage(_)));
            Ok(Outcome::flag(rejected, if rejected { 0.0 } else { 1.0 }, 0.0, 0.0))
        }));
    }

    for (label, g) in [("g1", GroupElement::new(1.0, 1.0, 1.0)), ("g2", GroupElement::new(0.5, -1.0, 2.0))] {
        let ms = LADDER.to_vec();
        out.push(Case::new(
            SUITE,
            format!("continuity.level-one.{label}"),
            json!({"ladder": ms, "g": g.coords()}),
            move |_| {
                let rows = nilpotent::level_one_continuity(&ms, &g)?;
                let lo = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
                let hi = rows.iter().map(|r| r.1).fold(0.0, f64::max);
                let variation = (hi - lo) / lo;
                let l2 = nilpotent::nonextendability_evidence(&ms, g.coords()[0])?;
                Ok(Outcome::at_most(variation, tol.level_one_variation)
                    .details(json!({"level_one": table(&rows), "l2_x1_flow": table(&l2)})))
            },
        ));
    }

    Ok(out)
}
