//! Types, resolvents, the exponential formula and the resolvent-power
//! ladder for the modulation group generated by `X₂`, on a padded working
//! space of `padding · N` Hermite modes.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde_json::json;

use super::config::{SuiteConfig, Tolerances};
use super::rng::interior_vector;
use super::{Case, Outcome};
use crate::error::Result;
use crate::flow::{AffineFlow, OneParameterGroup};
use crate::hermite::{HermiteModel, SchwartzVector};
use crate::lie::GroupElement;
use crate::linalg::{self, c, CMatrix, CVector, ZERO};
use crate::quadrature::GaussLegendre;
use crate::scale::{build_scale_chain, ScaleChain};
use crate::semigroup::{self, LaplaceSpec, MatrixResolvent, ResolventProvider, YosidaSeriesSpec};

const SUITE: &str = "hille-yosida";
/// `‖R(1, X₂)h₀‖₀² = √π e erfc(1)`.
pub const RESOLVENT_ORACLE: f64 = 0.757_872_156_141_312_2;
const BETA_LAMBDAS: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];
const P_MAX: usize = 5;

struct Shared {
    model: HermiteModel,
    chain: ScaleChain,
    /// Modes of the configured truncation; inputs live there.
    n: usize,
    nw: usize,
    nmax: usize,
    support: usize,
    type_grid: Vec<f64>,
    x2_betas: OnceLock<Result<Vec<f64>>>,
}

impl Shared {
    fn x2(&self) -> &dyn OneParameterGroup {
        &self.model.flows[1]
    }

    fn h0(&self) -> CVector {
        SchwartzVector::basis(self.nw, 0).coeffs
    }

    /// Keeps the first `n` modes, where every route is faithful.
    fn leading(&self, v: &CVector) -> CVector {
        let mut out = CVector::from_element(self.nw, ZERO);
        out.rows_mut(0, self.n).copy_from(&v.rows(0, self.n));
        out
    }

    /// The `X₂` ladder is shared by the ladder case and the global verdict.
    fn x2_betas(&self) -> Result<Vec<f64>> {
        self.x2_betas
            .get_or_init(|| betas_for(&MatrixResolvent { x: self.model.family.gens[1].clone() }, self))
            .clone()
    }

    fn type_samples(&self, rng: &mut impl rand::Rng) -> Vec<CVector> {
        let mut s: Vec<CVector> = (0..4).map(|k| SchwartzVector::basis(self.nw, k).coeffs).collect();
        s.extend((0..8).map(|_| interior_vector(rng, self.nw, self.support)));
        s
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

fn types_for(flow: &dyn OneParameterGroup, sh: &Shared, samples: &[CVector]) -> Result<Vec<semigroup::TypeEstimate>> {
    (0..=sh.nmax)
        .map(|k| semigroup::estimate_type(flow, &sh.chain, k, &sh.type_grid, samples))
        .collect()
}

fn betas_for(provider: &dyn ResolventProvider, sh: &Shared) -> Result<Vec<f64>> {
    (0..=sh.nmax)
        .map(|k| semigroup::beta_estimate(provider, &sh.chain, k, &BETA_LAMBDAS, P_MAX, sh.n))
        .collect()
}

pub fn cases(cfg: &SuiteConfig, tol: &Tolerances) -> Result<Vec<Case>> {
    let n = cfg.hermite_modes();
    let nw = cfg.padding * n;
    let nmax = cfg.nmax;
    let model = HermiteModel::new(nw, cfg.x3_sign, 1e-8)?;
    let chain = build_scale_chain(&model.scale_family, nmax)?;
    let sh = Arc::new(Shared {
        model,
        chain,
        n,
        nw,
        nmax,
        support: n / 4,
        type_grid: cfg.type_grid(),
        x2_betas: OnceLock::new(),
    });
    let tol = *tol;
    let lambdas = cfg.lambda.clone();
    let base = json!({"N": n, "working_modes": nw});
    let mut out = Vec::new();

    for k in 0..=nmax {
        let sh = sh.clone();
        out.push(Case::new(SUITE, format!("type.x2.n{k}"), json!({"N": n, "working_modes": nw, "n": k, "t": sh.type_grid}), move |rng| {
            let samples = sh.type_samples(rng);
            let t = semigroup::estimate_type(sh.x2(), &sh.chain, k, &sh.type_grid, &samples)?;
            Ok(Outcome::at_most(t.omega_n.abs(), tol.type_).details(json!({"omega": t.omega_n, "samples": t.sample_size})))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "type.phase-and-identity", base.clone(), move |rng| {
            let samples = sh.type_samples(rng);
            let zero = AffineFlow::new(CMatrix::zeros(sh.nw, sh.nw))?;
            let phase = types_for(&sh.model.flows[2], &sh, &samples)?;
            let id = types_for(&zero, &sh, &samples)?;
            let w: Vec<f64> = phase.iter().chain(&id).map(|t| t.omega_n.abs()).collect();
            Ok(Outcome::at_most(max_of(&w), tol.type_))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "resolvent.identity", base.clone(), move |_| {
            // R(λ) − R(μ) = (μ − λ) R(λ) R(μ).
            let x = sh.model.family.gens[1].clone();
            let pairs = [(c(1.0, 0.0), c(2.0, 0.0)), (c(2.0, 1.0), c(-3.0, 0.0)), (c(0.5, -2.0), c(4.0, 1.0))];
            let mut worst: f64 = 0.0;
            for (l, m) in pairs {
                let rl = semigroup::resolvent_matrix(&x, l)?;
                let rm = semigroup::resolvent_matrix(&x, m)?;
                worst = worst.max(linalg::max_abs(&(&rl - &rm - (&rl * &rm) * (m - l))));
            }
            Ok(Outcome::at_most(worst, tol.resolvent_identity))
        }));
    }

    for lambda in [1.0, 2.0, 4.0] {
        let sh = sh.clone();
        out.push(Case::new(SUITE, format!("resolvent.triple.l{lambda}"), json!({"N": n, "working_modes": nw, "lambda": lambda, "levels": [0, 1]}), move |rng| {
            let l = c(lambda, 0.0);
            let r = semigroup::resolvent_matrix(&sh.model.family.gens[1], l)?;
            let mut worst: f64 = 0.0;
            let mut parts = Vec::new();
            for phi in [sh.h0(), interior_vector(rng, sh.nw, sh.support)] {
                let m = &r * &phi;
                let cf = semigroup::resolvent_closed_form_x2(l, &SchwartzVector::new(phi.clone()), &sh.model.quad)?.coeffs;
                let lp = semigroup::resolvent_laplace(sh.x2(), l, &LaplaceSpec::default(), &phi)?.vector;
                for k in 0..=1 {
                    let d = [
                        sh.chain.norm(&sh.leading(&(&m - &cf)), k)?,
                        sh.chain.norm(&sh.leading(&(&m - &lp)), k)?,
                        sh.chain.norm(&sh.leading(&(&cf - &lp)), k)?,
                    ];
                    worst = worst.max(max_of(&d));
                    parts.push(json!({"n": k, "matrix_closed": d[0], "matrix_laplace": d[1], "closed_laplace": d[2]}));
                }
            }
            Ok(Outcome::at_most(worst, tol.resolvent).details(json!({"pairs": parts})))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "resolvent.oracle", base.clone(), move |_| {
            let cf = semigroup::resolvent_closed_form_x2(c(1.0, 0.0), &SchwartzVector::basis(sh.nw, 0), &sh.model.quad)?;
            let measured = cf.coeffs.norm_squared();
            let matrix = (semigroup::resolvent_matrix(&sh.model.family.gens[1], c(1.0, 0.0))? * sh.h0()).norm_squared();
            let err = (measured - RESOLVENT_ORACLE).abs();
            Ok(Outcome::at_most(err, tol.resolvent_oracle)
                .details(json!({"closed_form": measured, "matrix": matrix, "oracle": RESOLVENT_ORACLE})))
        }));
    }

    out.push(Case::new(SUITE, "resolvent.scalar-laplace", json!({"lambda": [1.0, 4.0], "x": [-3.0, 0.0, 2.5]}), move |_| {
        // ∫₀^∞ e^{−λs} e^{−ixs} ds = 1/(λ + ix).
        let rule = GaussLegendre::new(16);
        let mut worst: f64 = 0.0;
        for lambda in [1.0, 4.0] {
            for x in [-3.0, 0.0, 2.5] {
                let t_max = 40.0 / lambda;
                let mut acc = ZERO;
                for (s, w) in rule.composite(0.0, t_max, 64) {
                    acc += Complex64::new(-lambda * s, -x * s).exp() * w;
                }
                worst = worst.max((acc - Complex64::new(1.0, 0.0) / Complex64::new(lambda, x)).norm());
            }
        }
        Ok(Outcome::at_most(worst, tol.resolvent_identity))
    }));

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "resolvent.negative-branch", json!({"N": n, "lambda": -2.0}), move |rng| {
            let l = c(-2.0, 0.0);
            let r = semigroup::resolvent_matrix(&sh.model.family.gens[1], l)?;
            let phi = interior_vector(rng, sh.nw, sh.support);
            let lp = semigroup::resolvent_laplace(sh.x2(), l, &LaplaceSpec::default(), &phi)?.vector;
            let d = sh.chain.norm(&sh.leading(&(&r * &phi - lp)), 1)?;
            Ok(Outcome::at_most(d, tol.resolvent))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "resolvent.large-lambda", json!({"N": n, "lambda": [10.0, 100.0, 1000.0]}), move |rng| {
            // ‖λR(λ)φ − φ‖ = ‖R(λ)X₂φ‖ ≤ ‖X₂φ‖/λ.
            let phi = interior_vector(rng, sh.nw, sh.support);
            let x = &sh.model.family.gens[1];
            let cap = (x * &phi).norm();
            let mut worst: f64 = 0.0;
            let mut scaled = Vec::new();
            for lambda in [10.0, 100.0, 1000.0] {
                let r = semigroup::resolvent_matrix(x, c(lambda, 0.0))?;
                let d = ((&r * &phi) * c(lambda, 0.0) - &phi).norm() * lambda;
                scaled.push(d);
                worst = worst.max(d / cap);
            }
            Ok(Outcome::bounded(worst, 1.0, 1e-9).details(json!({"lambda_times_error": scaled, "x2_norm": cap})))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "laplace.tail", json!({"N": n, "t_max": 6.0, "lambda": [0.5, 4.0]}), move |_| {
            let phi = sh.h0();
            let mut errs = Vec::new();
            let mut within = true;
            for lambda in [0.5, 4.0] {
                let spec = LaplaceSpec { t_max: Some(6.0), ..LaplaceSpec::default() };
                let lp = semigroup::resolvent_laplace(sh.x2(), c(lambda, 0.0), &spec, &phi)?;
                let m = semigroup::resolvent_matrix(&sh.model.family.gens[1], c(lambda, 0.0))? * &phi;
                let e = (m - &lp.vector).norm();
                within &= e <= lp.tail_bound + 1e-9;
                errs.push(json!({"lambda": lambda, "error": e, "tail_bound": lp.tail_bound, "panels": lp.panels}));
            }
            let e0 = errs[0]["error"].as_f64().unwrap_or(f64::NAN);
            let e1 = errs[1]["error"].as_f64().unwrap_or(f64::NAN);
            Ok(Outcome::flag(within && e0 > e1, e1, e0, 1e-9).details(json!({"points": errs})))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "yosida.t0", base.clone(), move |rng| {
            let phi = interior_vector(rng, sh.nw, sh.support);
            let provider = MatrixResolvent { x: sh.model.family.gens[1].clone() };
            let spec = YosidaSeriesSpec { lambda_sequence: vec![10.0], j_max: 100, term_tol: 1e-14 };
            let o = semigroup::yosida_reconstruct(&provider, &spec, 0.0, &phi, &sh.chain, 1, &phi)?;
            Ok(Outcome::at_most(linalg::max_abs_vec(&(o.vector - &phi)), tol.algebra))
        }));
    }

    let yosida_spec = |seq: Vec<f64>| YosidaSeriesSpec { lambda_sequence: seq, j_max: 4000, term_tol: 1e-13 };
    for k in 0..=2.min(nmax) {
        let sh = sh.clone();
        let spec = yosida_spec(lambdas.clone());
        out.push(Case::new(SUITE, format!("yosida.monotone.n{k}"), json!({"N": n, "working_modes": nw, "n": k, "t": [0.5, -0.5], "lambda": lambdas}), move |_| {
            let phi = sh.h0();
            let provider = MatrixResolvent { x: sh.model.family.gens[1].clone() };
            let mut traces = Vec::new();
            let mut monotone = true;
            let mut last = Vec::new();
            for t in [0.5, -0.5] {
                let reference = sh.model.analytic(&GroupElement::new(0.0, t, 0.0), &phi)?;
                let o = semigroup::yosida_reconstruct(&provider, &spec, t, &phi, &sh.chain, k, &reference)?;
                monotone &= o.is_monotone_decreasing();
                last.push(o.trace.last().map(|p| p.distance).unwrap_or(f64::NAN));
                traces.push(json!({
                    "t": t,
                    "distances": o.trace.iter().map(|p| p.distance).collect::<Vec<_>>(),
                    "terms": o.trace.iter().map(|p| p.terms).collect::<Vec<_>>(),
                }));
            }
            Ok(Outcome::flag(monotone, max_of(&last), f64::NAN, 0.0)
                .details(json!({"monotone": monotone, "traces": traces})))
        }));
    }

    {
        let sh = sh.clone();
        let spec = yosida_spec(vec![50.0]);
        out.push(Case::new(SUITE, "yosida.distance-l50", json!({"N": n, "working_modes": nw, "n": 1, "t": 0.5, "lambda": 50.0}), move |_| {
            let phi = sh.h0();
            let provider = MatrixResolvent { x: sh.model.family.gens[1].clone() };
            let reference = sh.model.analytic(&GroupElement::new(0.0, 0.5, 0.0), &phi)?;
            let o = semigroup::yosida_reconstruct(&provider, &spec, 0.5, &phi, &sh.chain, 1, &reference)?;
            let d = o.distance_at(50.0).unwrap_or(f64::NAN);
            Ok(Outcome::at_most(d, tol.yosida).details(json!({"terms": o.trace[0].terms})))
        }));
    }

    for k in 0..=nmax {
        let sh = sh.clone();
        let lambda = k as f64 + 2.0;
        out.push(Case::new(SUITE, format!("equicontinuity.n{k}"), json!({"N": n, "working_modes": nw, "n": k, "lambda": [lambda, -lambda], "p_max": P_MAX, "samples": 100}), move |rng| {
            let mut samples = vec![sh.h0()];
            samples.extend((0..100).map(|_| interior_vector(rng, sh.nw, sh.support)));
            let x = &sh.model.family.gens[1];
            let mut worst: f64 = 0.0;
            let mut rows = Vec::new();
            for l in [lambda, -lambda] {
                let r = semigroup::resolvent_matrix(x, c(l, 0.0))?;
                for p in 1..=P_MAX {
                    let rep = semigroup::equicontinuity_bound_check(&r, &sh.chain, k, p, c(l, 0.0), &samples, sh.n)?;
                    worst = worst.max(rep.worst_ratio / rep.bound);
                    rows.push(json!({"lambda": l, "p": p, "worst_ratio": rep.worst_ratio, "bound": rep.bound, "operator_norm": rep.operator_norm}));
                }
            }
            Ok(Outcome::bounded(worst, 1.0, tol.equicontinuity_slack).details(json!({"rows": rows})))
        }));
    }

    for k in 0..=nmax {
        let sh = sh.clone();
        out.push(Case::new(SUITE, format!("e118.n{k}"), json!({"N": n, "n": k, "lambda": [k as f64 + 2.0, 10.0], "record_only": true}), move |rng| {
            let x = &sh.model.family.gens[1];
            let phis = [sh.h0(), interior_vector(rng, sh.nw, sh.support)];
            let mut rows = Vec::new();
            let mut worst: f64 = 0.0;
            for l in [k as f64 + 2.0, 10.0] {
                let r = semigroup::resolvent_matrix(x, c(l, 0.0))?;
                for phi in &phis {
                    let b = semigroup::e118_bound_check(c(l, 0.0), &(&r * phi), phi, &sh.chain, k)?;
                    worst = worst.max(b.ratio());
                    rows.push(json!({"lambda": l, "lhs": b.lhs, "bound": b.bound, "bound_holds": b.pass}));
                }
            }
            Ok(Outcome::flag(true, worst, 1.0, 1e-6).details(json!({"rows": rows})))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "beta.ladder", json!({"N": n, "working_modes": nw, "lambda": BETA_LAMBDAS, "p_max": P_MAX}), move |_| {
            let betas = sh.x2_betas()?;
            let steps: Vec<f64> = betas.windows(2).map(|w| w[1] - w[0]).collect();
            let min_step = steps.iter().cloned().fold(f64::INFINITY, f64::min);
            Ok(Outcome::flag(min_step > tol.beta, min_step, tol.beta, tol.beta).details(json!({"betas": betas})))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "global.x2", base.clone(), move |rng| {
            // Global type condition holds with ω = 0; the uniform resolvent
            // condition fails because the ladder keeps rising.
            let samples = sh.type_samples(rng);
            let types = types_for(sh.x2(), &sh, &samples)?;
            let betas = sh.x2_betas()?;
            let v = semigroup::global_conditions_report(&types, &betas, tol.beta)?;
            let pass = v.types_bounded && v.omega_sup.abs() <= tol.type_ && v.beta_strictly_increasing && !v.uniform_equicontinuity;
            Ok(Outcome::flag(pass, v.omega_sup, 0.0, tol.type_).details(json!({
                "omega_sup": v.omega_sup, "betas": v.betas, "type_condition": v.types_bounded,
                "uniform_condition": v.uniform_equicontinuity
            })))
        }));
    }

    {
        let sh = sh.clone();
        out.push(Case::new(SUITE, "global.phase-and-identity", base.clone(), move |rng| {
            let samples = sh.type_samples(rng);
            let zero = CMatrix::zeros(sh.nw, sh.nw);
            let mut rows = Vec::new();
            let mut pass = true;
            let mut omega: f64 = 0.0;
            let flows: [(&str, Box<dyn OneParameterGroup>, CMatrix); 2] = [
                ("phase", Box::new(crate::flow::SpectralFlow::new(sh.model.family.gens[2].clone())?), sh.model.family.gens[2].clone()),
                ("identity", Box::new(AffineFlow::new(zero.clone())?), zero),
            ];
            for (name, flow, x) in flows {
                let types = types_for(flow.as_ref(), &sh, &samples)?;
                let betas = betas_for(&MatrixResolvent { x }, &sh)?;
                let v = semigroup::global_conditions_report(&types, &betas, tol.beta)?;
                pass &= v.types_bounded && v.omega_sup.abs() <= tol.type_ && v.uniform_equicontinuity;
                omega = omega.max(v.omega_sup.abs());
                rows.push(json!({"group": name, "omega_sup": v.omega_sup, "betas": v.betas, "uniform_condition": v.uniform_equicontinuity}));
            }
            Ok(Outcome::flag(pass, omega, 0.0, tol.type_).details(json!({"groups": rows})))
        }));
    }

    Ok(out)
}
