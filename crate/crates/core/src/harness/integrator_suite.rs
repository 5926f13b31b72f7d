//! Integration through second-kind coordinates: chart products, the
//! homomorphism and derivative identities, the conjugation series, the dual
//! representation and the extension probe.

use std::sync::Arc;

use serde_json::json;

use super::config::{SuiteConfig, Tolerances};
use super::rng::{dyadic_element, group_element, interior_vector, uniform};
use super::{Case, Outcome};
use crate::error::Result;
use crate::flow::group_law_residual;
use crate::hermite::HermiteModel;
use crate::integrator::{self, DualPairing, ExtensionVerdict, IntegrableFamily};
use crate::lie::{self, AlgebraVector, GroupElement};
use crate::linalg::{self, c, CVector};
use crate::nilpotent::{block_generators, rep_operator, BlockGeneratorFamily};
use crate::scale::{build_scale_chain, ScaleChain};

const SUITE: &str = "integrator";
const SAMPLES: usize = 50;
const T_CONJ: f64 = 0.3;
const FD_GRID: [f64; 4] = [0.04, 0.02, 0.01, 0.005];
const HERMITE_LADDER: [usize; 3] = [32, 64, 128];
const BLOCK_LADDER: [usize; 3] = [10, 50, 100];

struct Shared {
    herm: IntegrableFamily,
    model: HermiteModel,
    hchain: ScaleChain,
    support: usize,
    n: usize,
    blocks: BlockGeneratorFamily,
    bfam: IntegrableFamily,
    bchain: ScaleChain,
}

impl Shared {
    fn phi(&self, rng: &mut impl rand::Rng) -> CVector {
        interior_vector(rng, self.n, self.support)
    }

    fn bphi(&self, rng: &mut impl rand::Rng) -> CVector {
        interior_vector(rng, self.blocks.dim(), self.blocks.dim())
    }
}

type Job = Box<dyn FnOnce(&mut rand_chacha::ChaCha20Rng, &Shared) -> Result<Outcome> + Send>;

fn chi12() -> AlgebraVector {
    AlgebraVector::new(vec![1.0, 1.0, 0.0])
}

fn ratios(seq: &[f64]) -> Vec<f64> {
    seq.windows(2).map(|w| w[0] / w[1]).collect()
}

fn band(r: &[f64]) -> (f64, f64) {
    (
        r.iter().cloned().fold(f64::INFINITY, f64::min),
        r.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    )
}

/// `Int(t₁X₁)⋯Int(t_{i−1}X_{i−1}) X_i φ`, conjugating through the flows.
fn conjugated_leading(ifam: &IntegrableFamily, t: &[f64; 3], i: usize, phi: &CVector) -> CVector {
    let mut v = phi.clone();
    for k in 0..i {
        v = ifam.flows[k].apply(-t[k], &v);
    }
    v = &ifam.family.gens[i] * v;
    for k in (0..i).rev() {
        v = ifam.flows[k].apply(t[k], &v);
    }
    v
}

/// `Int(−t_dX_d)⋯Int(−t_{i+1}X_{i+1}) X_i φ`.
fn conjugated_trailing(ifam: &IntegrableFamily, t: &[f64; 3], i: usize, phi: &CVector) -> CVector {
    let mut v = phi.clone();
    for k in (i + 1..3).rev() {
        v = ifam.flows[k].apply(t[k], &v);
    }
    v = &ifam.family.gens[i] * v;
    for k in i + 1..3 {
        v = ifam.flows[k].apply(-t[k], &v);
    }
    v
}

pub fn cases(cfg: &SuiteConfig, tol: &Tolerances) -> Result<Vec<Case>> {
    let n = cfg.hermite_modes();
    let m = cfg.blocks();
    let sign = cfg.x3_sign;
    let chart_box = cfg.chart_box;
    let model = HermiteModel::new(n, sign, 1e-8)?;
    let hchain = build_scale_chain(&model.scale_family, cfg.nmax)?;
    let blocks = block_generators(m)?;
    let bchain = build_scale_chain(&blocks.to_family(), 2)?;
    let sh = Arc::new(Shared {
        herm: IntegrableFamily::hermite(n, sign, chart_box)?,
        model,
        hchain,
        support: n / 4,
        n,
        bfam: IntegrableFamily::blocks(&blocks, chart_box)?,
        blocks,
        bchain,
    });
    let tol = *tol;
    let base = json!({"N": n, "M": m});
    let mut out = Vec::new();
    let mut add = |id: &str, inputs: serde_json::Value, f: Job| {
        let sh = sh.clone();
        out.push(Case::new(SUITE, id, inputs, move |rng| f(rng, &sh)));
    };

    add("flow.group-law", json!({"N": n, "M": m, "samples": SAMPLES}), Box::new(move |rng, sh| {
        let mut herm: f64 = 0.0;
        let mut blk: f64 = 0.0;
        for _ in 0..SAMPLES {
            let (s, t) = (uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
            for k in 0..3 {
                herm = herm.max(group_law_residual(sh.herm.flows[k].as_ref(), s, t));
                blk = blk.max(group_law_residual(sh.bfam.flows[k].as_ref(), s, t));
            }
        }
        Ok(Outcome::at_most(herm.max(blk), 1e-9).details(json!({"hermite": herm, "blocks": blk})))
    }));

    add("flow.generator", json!({"N": n, "t": [1e-2, 5e-3, 2.5e-3, 1.25e-3]}), Box::new(move |rng, sh| {
        // ‖(E(t) − I)φ/t − Xφ‖₀ is first order in t; for affine flows it vanishes.
        let phi = sh.phi(rng);
        let ts = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut traces = Vec::new();
        for k in 0..3 {
            let x_phi = &sh.herm.family.gens[k] * &phi;
            let res: Vec<f64> = ts
                .iter()
                .map(|&t| ((sh.herm.flows[k].apply(t, &phi) - &phi) * c(1.0 / t, 0.0) - &x_phi).norm())
                .collect();
            let r = ratios(&res);
            let (a, b) = band(&r);
            lo = lo.min(a);
            hi = hi.max(b);
            traces.push(res);
        }
        let bphi = sh.bphi(rng);
        let mut affine: f64 = 0.0;
        for k in 0..3 {
            let x_phi = &sh.blocks.gens[k] * &bphi;
            let d = (sh.bfam.flows[k].apply(0.5, &bphi) - &bphi) * c(2.0, 0.0) - x_phi;
            affine = affine.max(d.norm());
        }
        let pass = lo >= 1.7 && hi <= 2.3 && affine <= tol.l2 * (sh.blocks.m * sh.blocks.m) as f64;
        Ok(Outcome::flag(pass, hi, 2.3, 0.3).details(json!({"lower": lo, "traces": traces, "affine_residual": affine})))
    }));

    add("chart.identity", base.clone(), Box::new(move |_, sh| {
        let e = GroupElement::IDENTITY;
        let h = linalg::max_abs(&(integrator::integrate_chart(&sh.herm, &e)? - linalg::identity(sh.n)));
        let b = linalg::max_abs(&(integrator::integrate_chart(&sh.bfam, &e)? - linalg::identity(sh.blocks.dim())));
        Ok(Outcome::at_most(h.max(b), tol.algebra))
    }));

    add("chart.hermite-analytic", json!({"N": n, "samples": SAMPLES, "box": 1.0}), Box::new(move |rng, sh| {
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            let g = group_element(rng, 1.0);
            let phi = sh.phi(rng);
            let chart = integrator::integrate_apply(&sh.herm, &g, &phi)?;
            worst = worst.max((chart - sh.model.analytic(&g, &phi)?).norm());
        }
        Ok(Outcome::at_most(worst, tol.route))
    }));

    add("chart.l2-rep", json!({"M": m, "samples": SAMPLES, "box": chart_box}), Box::new(move |rng, sh| {
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            let g = dyadic_element(rng, sh.bfam.chart_box);
            let d = integrator::integrate_chart(&sh.bfam, &g)? - rep_operator(&g, &sh.blocks);
            worst = worst.max(linalg::max_abs(&d));
        }
        Ok(Outcome::at_most(worst, tol.l2))
    }));

    add("homomorphism.hermite", json!({"N": n, "samples": SAMPLES, "box": 0.6, "level": 1}), Box::new(move |rng, sh| {
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            let (g, h) = (group_element(rng, 0.6), group_element(rng, 0.6));
            let phi = sh.phi(rng);
            worst = worst.max(integrator::homomorphism_residual(&sh.herm, &g, &h, &phi, &sh.hchain, 1)?);
        }
        let e = integrator::homomorphism_residual(&sh.herm, &group_element(rng, 0.6), &GroupElement::IDENTITY, &sh.phi(rng), &sh.hchain, 1)?;
        Ok(Outcome::at_most(worst, tol.homomorphism).details(json!({"identity_factor": e})))
    }));

    add("homomorphism.l2", json!({"M": m, "samples": SAMPLES, "box": 0.6, "level": 1}), Box::new(move |rng, sh| {
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            let (g, h) = (dyadic_element(rng, 0.6), dyadic_element(rng, 0.6));
            let phi = sh.bphi(rng);
            worst = worst.max(integrator::homomorphism_residual(&sh.bfam, &g, &h, &phi, &sh.bchain, 1)?);
        }
        Ok(Outcome::at_most(worst, tol.l2 * (sh.blocks.m * sh.blocks.m) as f64))
    }));

    add("homomorphism.inverse-swap", json!({"N": n, "samples": SAMPLES, "box": 0.6}), Box::new(move |rng, sh| {
        let mut worst: f64 = 0.0;
        let mut gap: f64 = 0.0;
        for _ in 0..SAMPLES {
            let (g, h) = (group_element(rng, 0.6), group_element(rng, 0.6));
            let phi = sh.phi(rng);
            let a = integrator::homomorphism_residual(&sh.herm, &g, &h, &phi, &sh.hchain, 1)?;
            let b = integrator::homomorphism_residual(&sh.herm, &h.inv(), &g.inv(), &phi, &sh.hchain, 1)?;
            worst = worst.max(a).max(b);
            gap = gap.max((a - b).abs());
        }
        Ok(Outcome::flag(worst <= tol.homomorphism && gap <= tol.homomorphism, worst, tol.homomorphism, tol.homomorphism)
            .details(json!({"swap_gap": gap})))
    }));

    add("homomorphism.interpolation", json!({"N": n, "t": 1.0, "steps": 8}), Box::new(move |rng, sh| {
        // f(s) = T(e^{sx}) T(e^{(t−s)x} g) φ does not depend on s.
        let x = AlgebraVector::new(vec![uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3)]);
        let g = group_element(rng, 0.5);
        let phi = sh.phi(rng);
        let f = |s: f64| -> Result<CVector> {
            let inner = integrator::integrate_apply(&sh.herm, &lie::exp_algebra(1.0 - s, &x).mul(&g), &phi)?;
            integrator::integrate_apply(&sh.herm, &lie::exp_algebra(s, &x), &inner)
        };
        let f0 = f(0.0)?;
        let mut worst: f64 = 0.0;
        for k in 1..=8 {
            worst = worst.max(sh.hchain.norm(&(f(k as f64 / 8.0)? - &f0), 1)?);
        }
        Ok(Outcome::at_most(worst, tol.homomorphism))
    }));

    add("int-identity.hermite", json!({"N": n, "t": T_CONJ, "level": 1}), Box::new(move |rng, sh| {
        let pairs = [(0, 1), (1, 0), (0, 0), (1, 1), (0, 2), (2, 1)];
        let phi = sh.phi(rng);
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for (i, j) in pairs {
            let r = integrator::int_identity_check(&sh.herm, i, j, T_CONJ, &phi, &sh.hchain, 1, 1e-15)?;
            let zero = integrator::int_identity_check(&sh.herm, i, j, 0.0, &phi, &sh.hchain, 1, 1e-15)?;
            rows.push(json!({"i": i, "j": j, "residual": r, "t0": zero}));
            worst = worst.max(r).max(zero);
        }
        Ok(Outcome::at_most(worst, tol.int_identity).details(json!({"pairs": rows})))
    }));

    add("int-identity.l2", json!({"M": m, "t": T_CONJ, "level": 1}), Box::new(move |rng, sh| {
        let phi = sh.bphi(rng);
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max(integrator::int_identity_check(&sh.bfam, i, j, T_CONJ, &phi, &sh.bchain, 0, 1e-15)?);
            }
        }
        Ok(Outcome::at_most(worst, tol.l2 * (sh.blocks.m * sh.blocks.m) as f64))
    }));

    add("int-rows", json!({"N": n, "t": T_CONJ, "level": 1}), Box::new(move |rng, sh| {
        let phi = sh.phi(rng);
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max(integrator::int_rows_check(&sh.herm, sign, i, j, T_CONJ, &phi, &sh.hchain, 1)?);
            }
        }
        Ok(Outcome::at_most(worst, tol.int_rows))
    }));

    add("derivative.hermite", json!({"N": n, "t": T_CONJ, "h": FD_GRID, "level": 1}), Box::new(move |rng, sh| {
        let phi = sh.phi(rng);
        let tr = integrator::derivative_identity_check(&sh.herm, &chi12(), T_CONJ, &phi, &sh.hchain, 1, &FD_GRID)?;
        let r: Vec<f64> = ratios(&tr.left).into_iter().chain(ratios(&tr.right)).collect();
        let (lo, hi) = band(&r);
        let zero = integrator::derivative_identity_check(&sh.herm, &AlgebraVector::new(vec![0.0; 3]), T_CONJ, &phi, &sh.hchain, 1, &FD_GRID)?;
        let zero_max = zero.left.iter().chain(&zero.right).cloned().fold(zero.cross, f64::max);
        let pass = lo >= 3.4 && hi <= 4.6 && tr.cross <= 1e-7 && zero_max <= tol.algebra;
        Ok(Outcome::flag(pass, hi, 4.6, 0.6)
            .details(json!({"lower": lo, "left": tr.left, "right": tr.right, "cross": tr.cross, "zero_direction": zero_max})))
    }));

    add("derivative.translated", json!({"N": n, "t": T_CONJ, "h": FD_GRID, "level": 1}), Box::new(move |rng, sh| {
        // d/dt T(e^{tx}g)φ = X T(e^{tx}g)φ.
        let x = chi12();
        let g = group_element(rng, 0.4);
        let phi = sh.phi(rng);
        let gen = sh.herm.generator(&x);
        let at = |s: f64| integrator::integrate_apply(&sh.herm, &lie::exp_algebra(s, &x).mul(&g), &phi);
        let target = &gen * at(T_CONJ)?;
        let mut res = Vec::new();
        for &h in &FD_GRID {
            let d = (at(T_CONJ + h)? - at(T_CONJ - h)?) * c(0.5 / h, 0.0);
            res.push(sh.hchain.norm(&(d - &target), 1)?);
        }
        let (lo, hi) = band(&ratios(&res));
        let pass = lo >= 3.4 && hi <= 4.6;
        Ok(Outcome::flag(pass, hi, 4.6, 0.6).details(json!({"lower": lo, "residuals": res})))
    }));

    add("derivative.product-rule", json!({"N": n, "t": T_CONJ, "h": FD_GRID, "pairs": [[0, 1], [1, 0]]}), Box::new(move |rng, sh| {
        // d/dt T(t,X_i)T(t,X_j)φ = T(t,X_i)(X_i + X_j)T(t,X_j)φ.
        let phi = sh.phi(rng);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut traces = Vec::new();
        for (i, j) in [(0, 1), (1, 0)] {
            let f = |s: f64| sh.herm.flows[i].apply(s, &sh.herm.flows[j].apply(s, &phi));
            let sum = &sh.herm.family.gens[i] + &sh.herm.family.gens[j];
            let target = sh.herm.flows[i].apply(T_CONJ, &(sum * sh.herm.flows[j].apply(T_CONJ, &phi)));
            let mut res = Vec::new();
            for &h in &FD_GRID {
                let d = (f(T_CONJ + h) - f(T_CONJ - h)) * c(0.5 / h, 0.0);
                res.push(sh.hchain.norm(&(d - &target), 0)?);
            }
            let (a, b) = band(&ratios(&res));
            lo = lo.min(a);
            hi = hi.max(b);
            traces.push(res);
        }
        let pass = lo >= 3.4 && hi <= 4.6;
        Ok(Outcome::flag(pass, hi, 4.6, 0.6).details(json!({"lower": lo, "residuals": traces})))
    }));

    add("chart.operator-identities", json!({"N": n, "t": T_CONJ}), Box::new(move |rng, sh| {
        // X = Σ dt_i/dt · Int(t₁X₁)⋯X_i = Σ Int(−t_dX_d)⋯X_i · dt_i/dt, applied to φ.
        let x = AlgebraVector::new(vec![uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5)]);
        let g = group_element(rng, 0.4);
        let phi = sh.phi(rng);
        let lhs = sh.herm.generator(&x) * &phi;
        let h = 1e-4;
        let mut worst: f64 = 0.0;
        for base in [GroupElement::IDENTITY, g] {
            let coords = |s: f64| lie::second_kind_coords(&lie::exp_algebra(s, &x).mul(&base));
            let t = coords(T_CONJ);
            let (up, down) = (coords(T_CONJ + h), coords(T_CONJ - h));
            let dt: Vec<f64> = (0..3).map(|i| (up[i] - down[i]) / (2.0 * h)).collect();
            let mut first = CVector::zeros(sh.n);
            let mut second = CVector::zeros(sh.n);
            for i in 0..3 {
                first += conjugated_leading(&sh.herm, &t, i, &phi) * c(dt[i], 0.0);
                second += conjugated_trailing(&sh.herm, &t, i, &phi) * c(dt[i], 0.0);
            }
            worst = worst.max((&first - &lhs).norm());
            if base == GroupElement::IDENTITY {
                worst = worst.max((&second - &lhs).norm());
            }
        }
        let (a, b) = lie::chart_derivative_residuals(&lie::StructureConstants::heisenberg(), &x, T_CONJ, Some(&g))?;
        Ok(Outcome::at_most(worst, tol.int_identity).details(json!({"algebra_residuals": [a, b]})))
    }));

    add("dual.pairing", json!({"N": n, "M": m, "samples": SAMPLES, "box": 1.0}), Box::new(move |rng, sh| {
        let hp = DualPairing { chain: &sh.hchain, n: 1 };
        let bp = DualPairing { chain: &sh.bchain, n: 1 };
        let mut worst: f64 = 0.0;
        for _ in 0..SAMPLES {
            let g = group_element(rng, 1.0);
            let (phi, f) = (sh.phi(rng), sh.phi(rng));
            worst = worst.max(integrator::dual_pairing_residual(&sh.herm, &hp, &g, &phi, &f)?);
            let (bphi, bf) = (sh.bphi(rng), sh.bphi(rng));
            let b = integrator::dual_pairing_residual(&sh.bfam, &bp, &g, &bphi, &bf)?;
            worst = worst.max(b / (sh.blocks.m * sh.blocks.m) as f64);
        }
        Ok(Outcome::at_most(worst, tol.dual))
    }));

    add("dual.generator", json!({"N": n, "h": FD_GRID}), Box::new(move |_, sh| {
        let p = DualPairing { chain: &sh.hchain, n: 1 };
        let res = integrator::dual_generator_residuals(&sh.herm, &p, &chi12(), &FD_GRID)?;
        let (lo, hi) = band(&ratios(&res));
        let pass = lo >= 3.4 && hi <= 4.6;
        Ok(Outcome::flag(pass, hi, 4.6, 0.6).details(json!({"lower": lo, "residuals": res})))
    }));

    add("dual.involution", base.clone(), Box::new(move |rng, sh| {
        let p = DualPairing { chain: &sh.hchain, n: 1 };
        let g = group_element(rng, 1.0);
        let a = integrator::integrate_chart(&sh.herm, &g)? * c(0.7, -0.2);
        let twice = integrator::dual_operator(&integrator::dual_operator(&a, &p), &p);
        let id = integrator::dual_operator(&linalg::identity(sh.n), &p) - linalg::identity(sh.n);
        let r = linalg::max_abs(&(twice - a)).max(linalg::max_abs(&id));
        Ok(Outcome::at_most(r, 0.0))
    }));

    add("dual.homomorphism", json!({"N": n, "M": m, "samples": 20, "box": 0.6}), Box::new(move |rng, sh| {
        // V(g)V(h) = V(gh).
        let hp = DualPairing { chain: &sh.hchain, n: 1 };
        let bp = DualPairing { chain: &sh.bchain, n: 1 };
        let mut herm: f64 = 0.0;
        let mut blk: f64 = 0.0;
        for _ in 0..20 {
            let (g, h) = (group_element(rng, 0.6), group_element(rng, 0.6));
            let f = sh.phi(rng);
            let lhs = integrator::dual_group(&sh.herm, &hp, &g)? * (integrator::dual_group(&sh.herm, &hp, &h)? * &f);
            let rhs = integrator::dual_group(&sh.herm, &hp, &g.mul(&h))? * &f;
            herm = herm.max((lhs - rhs).norm());
            let (g, h) = (dyadic_element(rng, 0.6), dyadic_element(rng, 0.6));
            let d = integrator::dual_group(&sh.bfam, &bp, &g)? * integrator::dual_group(&sh.bfam, &bp, &h)?
                - integrator::dual_group(&sh.bfam, &bp, &g.mul(&h))?;
            blk = blk.max(linalg::max_abs(&d));
        }
        let pass = herm <= tol.homomorphism && blk <= tol.l2;
        Ok(Outcome::flag(pass, herm, tol.homomorphism, tol.homomorphism).details(json!({"blocks": blk})))
    }));

    add("dual.triplet-norms", json!({"N": n, "samples": SAMPLES, "level": 1}), Box::new(move |rng, sh| {
        // ‖F‖₋₁ ≤ ‖F‖₀ ≤ ‖F‖₁ and |⟨φ, F⟩| ≤ ‖φ‖₁‖F‖₋₁.
        let p = DualPairing { chain: &sh.hchain, n: 1 };
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..SAMPLES {
            let (phi, f) = (sh.phi(rng), sh.phi(rng));
            let dual = p.dual_norm(&f)?;
            let zero = f.norm();
            let one = sh.hchain.norm(&f, 1)?;
            let pairing = p.pair(&phi, &f).norm() / (sh.hchain.norm(&phi, 1)? * dual);
            worst = worst.max(dual / zero).max(zero / one).max(pairing);
        }
        Ok(Outcome::bounded(worst, 1.0, 1e-12))
    }));

    {
        let ladder_ok = move || -> Result<(Vec<serde_json::Value>, bool)> {
            let fams: Vec<_> = HERMITE_LADDER
                .iter()
                .map(|&k| IntegrableFamily::hermite(k, sign, chart_box))
                .collect::<Result<_>>()?;
            let mut rows = Vec::new();
            let mut all = true;
            for i in 0..3 {
                let r = integrator::extension_probe(&fams, i, 1.0)?;
                all &= r.verdict == ExtensionVerdict::Extends;
                rows.push(json!({"generator": i, "ladder": r.ladder, "growth_exponent": r.growth_exponent, "verdict": r.verdict}));
            }
            Ok((rows, all))
        };
        let blocks_none = move || -> Result<(Vec<serde_json::Value>, bool)> {
            let fams: Vec<_> = BLOCK_LADDER
                .iter()
                .map(|&k| IntegrableFamily::blocks(&block_generators(k)?, chart_box))
                .collect::<Result<_>>()?;
            let mut rows = Vec::new();
            let mut none = true;
            for i in 0..3 {
                let r = integrator::extension_probe(&fams, i, 1.0)?;
                none &= r.verdict == ExtensionVerdict::DoesNotExtend;
                rows.push(json!({"generator": i, "ladder": r.ladder, "growth_exponent": r.growth_exponent, "verdict": r.verdict}));
            }
            Ok((rows, none))
        };
        out.push(Case::new(SUITE, "extension.hermite", json!({"ladder": HERMITE_LADDER, "t": 1.0}), move |_| {
            let (rows, all) = ladder_ok()?;
            Ok(Outcome::flag(all, if all { 1.0 } else { 0.0 }, 1.0, 0.0).details(json!({"probes": rows})))
        }));
        out.push(Case::new(SUITE, "extension.l2", json!({"ladder": BLOCK_LADDER, "t": 1.0}), move |_| {
            let (rows, none) = blocks_none()?;
            Ok(Outcome::flag(none, if none { 1.0 } else { 0.0 }, 1.0, 0.0).details(json!({"probes": rows})))
        }));
        out.push(Case::new(SUITE, "extension.representation", json!({"hermite": HERMITE_LADDER, "blocks": BLOCK_LADDER}), move |_| {
            let (_, herm) = ladder_ok()?;
            let (_, blk) = blocks_none()?;
            let pass = herm && blk;
            Ok(Outcome::flag(pass, if pass { 1.0 } else { 0.0 }, 1.0, 0.0)
                .details(json!({"hermite_extends": herm, "blocks_extend": !blk})))
        }));
    }

    Ok(out)
}
