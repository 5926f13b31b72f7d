//! Type estimates, resolvents, exponential-formula reconstruction and the
//! resolvent-power bounds of one-parameter groups on a scale.

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::flow::OneParameterGroup;
use crate::hermite::{QuadratureSpec, SchwartzVector};
use crate::linalg::{self, c, CMatrix, CVector, ZERO};
use crate::quadrature::GaussLegendre;
use crate::scale::{BoundOutcome, ScaleChain};

#[derive(Debug, Clone, PartialEq)]
pub struct TypeEstimate {
    pub n: usize,
    pub omega_n: f64,
    pub sample_grid: Vec<f64>,
    pub sample_size: usize,
}

/// `min_t (1/|t|) ln sup_φ ‖T(t)φ‖_n / ‖φ‖_n` over the grid and samples.
pub fn estimate_type(
    flow: &dyn OneParameterGroup,
    chain: &ScaleChain,
    n: usize,
    t_grid: &[f64],
    samples: &[CVector],
) -> Result<TypeEstimate> {
    if t_grid.is_empty() || t_grid.contains(&0.0) {
        return Err(LabError::usage("type estimate needs a nonempty grid without t = 0"));
    }
    let norms: Vec<f64> = samples
        .iter()
        .map(|v| chain.norm(v, n))
        .collect::<Result<_>>()?;
    if norms.iter().all(|&s| s < 1e-300) {
        return Err(LabError::usage("type estimate needs at least one nonzero sample"));
    }
    let mut omega = f64::INFINITY;
    for &t in t_grid {
        let mut sup: f64 = 0.0;
        for (v, &nv) in samples.iter().zip(&norms) {
            if nv < 1e-300 {
                continue;
            }
            sup = sup.max(chain.norm(&flow.apply(t, v), n)? / nv);
        }
        omega = omega.min(sup.ln() / t.abs());
    }
    Ok(TypeEstimate {
        n,
        omega_n: omega,
        sample_grid: t_grid.to_vec(),
        sample_size: samples.len(),
    })
}

/// `(λI − X)⁻¹`, checked by its residual.
pub fn resolvent_matrix(x: &CMatrix, lambda: Complex64) -> Result<CMatrix> {
    let n = x.nrows();
    let shifted = linalg::identity(n) * lambda - x;
    let (r, _) = linalg::inverse_checked(&shifted)?;
    let residual = linalg::max_abs(&(&shifted * &r - linalg::identity(n)));
    if residual > 1e-10 {
        return Err(LabError::Accuracy {
            what: format!("resolvent at λ = {lambda}"),
            residual,
            threshold: 1e-10,
        });
    }
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct LaplaceSpec {
    /// Requested accuracy; also fixes `t_max` when none is given.
    pub tol: f64,
    pub t_max: Option<f64>,
    pub nodes_per_panel: usize,
    /// Upper bound on `|phase change|` across one panel.
    pub phase_per_panel: f64,
}

impl Default for LaplaceSpec {
    fn default() -> Self {
        LaplaceSpec {
            tol: 1e-9,
            t_max: None,
            nodes_per_panel: 16,
            phase_per_panel: 4.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LaplaceOutcome {
    pub vector: CVector,
    pub t_max: f64,
    pub panels: usize,
    /// `e^{−|Re λ| t_max} ‖φ‖ / |Re λ|`, which bounds the neglected tail for an isometric flow.
    pub tail_bound: f64,
}

/// `∫₀^∞ e^{−λt} T(t)φ dt` for `Re λ > 0`, and `−∫₀^∞ e^{λt} T(−t)φ dt`
/// for `Re λ < 0`, by composite Gauss–Legendre panels.
pub fn resolvent_laplace(
    flow: &dyn OneParameterGroup,
    lambda: Complex64,
    spec: &LaplaceSpec,
    phi: &CVector,
) -> Result<LaplaceOutcome> {
    let a = lambda.re.abs();
    if a == 0.0 {
        return Err(LabError::usage("Laplace resolvent needs Re λ ≠ 0"));
    }
    let sign = lambda.re.signum();
    let norm = phi.norm();
    let t_max = match spec.t_max {
        Some(t) => t,
        None => ((norm.max(1e-300) / (a * 0.1 * spec.tol)).ln() / a).max(1.0),
    };
    let tail_bound = (-a * t_max).exp() * norm / a;
    if spec.t_max.is_none() && tail_bound > spec.tol {
        return Err(LabError::Accuracy {
            what: "Laplace tail".into(),
            residual: tail_bound,
            threshold: spec.tol,
        });
    }
    let rate = flow.frequency_bound() + lambda.norm();
    let panels = ((t_max * rate / spec.phase_per_panel).ceil() as usize).max(1);
    let rule = GaussLegendre::new(spec.nodes_per_panel);
    let mut acc = CVector::from_element(phi.len(), ZERO);
    for (t, w) in rule.composite(0.0, t_max, panels) {
        let weight = (-lambda * sign * t).exp() * w;
        acc += flow.apply(sign * t, phi) * weight;
    }
    let vector = acc * c(sign, 0.0);
    Ok(LaplaceOutcome {
        vector,
        t_max,
        panels,
        tail_bound,
    })
}

/// Coefficients of `φ(x) / (λ + ix)`.
pub fn resolvent_closed_form_x2(lambda: Complex64, phi: &SchwartzVector, q: &QuadratureSpec) -> Result<SchwartzVector> {
    if lambda.re == 0.0 {
        return Err(LabError::usage("closed-form resolvent needs Re λ ≠ 0"));
    }
    let out = q.project(phi.dim(), 0.0, |x| phi.eval(x) / (lambda + c(0.0, x)));
    Ok(SchwartzVector::new(out))
}

/// Source of resolvent matrices `R(λ)`.
pub trait ResolventProvider: Sync {
    fn dim(&self) -> usize;
    fn resolvent(&self, lambda: Complex64) -> Result<CMatrix>;
}

/// Resolvents of a fixed matrix by dense inversion.
pub struct MatrixResolvent {
    pub x: CMatrix,
}

impl ResolventProvider for MatrixResolvent {
    fn dim(&self) -> usize {
        self.x.nrows()
    }
    fn resolvent(&self, lambda: Complex64) -> Result<CMatrix> {
        resolvent_matrix(&self.x, lambda)
    }
}

#[derive(Debug, Clone)]
pub struct YosidaSeriesSpec {
    pub lambda_sequence: Vec<f64>,
    pub j_max: usize,
    pub term_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YosidaPoint {
    pub lambda: f64,
    pub terms: usize,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct YosidaOutcome {
    pub vector: CVector,
    pub trace: Vec<YosidaPoint>,
}

impl YosidaOutcome {
    pub fn is_monotone_decreasing(&self) -> bool {
        self.trace.windows(2).all(|w| w[1].distance < w[0].distance)
    }

    pub fn distance_at(&self, lambda: f64) -> Option<f64> {
        self.trace.iter().find(|p| p.lambda == lambda).map(|p| p.distance)
    }
}

/// `e^{−λt} Σ_j (λt)^j/j! (λR(λ))^j φ` for each λ in the sequence (negated
/// for `t < 0`), compared with `reference` in `‖·‖_n`.
pub fn yosida_reconstruct(
    provider: &dyn ResolventProvider,
    spec: &YosidaSeriesSpec,
    t: f64,
    phi: &CVector,
    chain: &ScaleChain,
    n: usize,
    reference: &CVector,
) -> Result<YosidaOutcome> {
    if spec.lambda_sequence.is_empty() {
        return Err(LabError::usage("Yosida reconstruction needs at least one λ"));
    }
    let mut trace = Vec::with_capacity(spec.lambda_sequence.len());
    let mut last = phi.clone();
    for &mag in &spec.lambda_sequence {
        let lambda = if t < 0.0 { -mag.abs() } else { mag.abs() };
        let (sum, terms) = if t == 0.0 {
            (phi.clone(), 0)
        } else {
            let a = provider.resolvent(c(lambda, 0.0))? * c(lambda, 0.0);
            let lt = lambda * t;
            // Start at e^{−λt}φ so the running terms stay of order one.
            let mut term = phi * c((-lt).exp(), 0.0);
            let mut sum = term.clone();
            let mut j = 0;
            let mut norms = Vec::new();
            loop {
                j += 1;
                term = (&a * &term) * c(lt / j as f64, 0.0);
                sum += &term;
                let tn = chain.norm(&term, n)?;
                norms.push(tn);
                if j as f64 >= lt && tn < spec.term_tol * chain.norm(&sum, n)? {
                    break;
                }
                if j >= spec.j_max {
                    return Err(LabError::Convergence {
                        what: format!("Yosida series at λ = {lambda}"),
                        last_norm: tn,
                        terms: j,
                        trace: norms,
                    });
                }
            }
            (sum, j)
        };
        let distance = chain.norm(&(&sum - reference), n)?;
        trace.push(YosidaPoint {
            lambda,
            terms,
            distance,
        });
        last = sum;
    }
    Ok(YosidaOutcome { vector: last, trace })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquicontinuityReport {
    pub n: usize,
    pub p: usize,
    pub lambda: Complex64,
    /// Largest `‖Rᵖφ‖_n / ‖φ‖_n` over the samples.
    pub worst_ratio: f64,
    /// `(|λ| − n)^{−p}`.
    pub bound: f64,
    pub pass: bool,
    /// `‖Rᵖ‖_n` restricted to inputs in the leading interior modes.
    pub operator_norm: f64,
}

/// `‖Rᵖφ‖_n ≤ (|λ| − n)^{−p} ‖φ‖_n` on samples, plus the restricted
/// operator norm of `Rᵖ`.
pub fn equicontinuity_bound_check(
    r: &CMatrix,
    chain: &ScaleChain,
    n: usize,
    p: usize,
    lambda: Complex64,
    samples: &[CVector],
    interior: usize,
) -> Result<EquicontinuityReport> {
    if lambda.re.abs() <= n as f64 {
        return Err(LabError::usage(format!(
            "λ = {lambda} lies outside |Re λ| > {n}"
        )));
    }
    if p == 0 {
        return Err(LabError::usage("resolvent power must be at least 1"));
    }
    let mut rp = r.clone();
    for _ in 1..p {
        rp = &rp * r;
    }
    let bound = (lambda.norm() - n as f64).powi(-(p as i32));
    let mut worst: f64 = 0.0;
    for v in samples {
        let nv = chain.norm(v, n)?;
        if nv == 0.0 {
            continue;
        }
        worst = worst.max(chain.norm(&(&rp * v), n)? / nv);
    }
    let g = chain.gram(n)?;
    let operator_norm = linalg::weighted_operator_norm(&rp, g, g, interior)?;
    Ok(EquicontinuityReport {
        n,
        p,
        lambda,
        worst_ratio: worst,
        bound,
        pass: worst <= bound * (1.0 + 1e-8),
        operator_norm,
    })
}

/// `c₀ = 1/|λ|²`, `c_i = 1 + Π_{j<i} c_j` for `i = 1..=n`.
pub fn e118_constants(lambda_abs: f64, n: usize) -> Vec<f64> {
    let mut cs = vec![1.0 / (lambda_abs * lambda_abs)];
    let mut prod = cs[0];
    for _ in 1..=n {
        let ci = 1.0 + prod;
        prod *= ci;
        cs.push(ci);
    }
    cs
}

/// `‖R(λ)φ‖_n ≤ (Π_{i≤n} c_i)^{1/2} ‖φ‖_n` given `r_phi = R(λ)φ`.
pub fn e118_bound_check(lambda: Complex64, r_phi: &CVector, phi: &CVector, chain: &ScaleChain, n: usize) -> Result<BoundOutcome> {
    if lambda.re == 0.0 {
        return Err(LabError::usage("bound needs Re λ ≠ 0"));
    }
    let prod: f64 = e118_constants(lambda.norm(), n).iter().product();
    let lhs = chain.norm(r_phi, n)?;
    let bound = prod.sqrt() * chain.norm(phi, n)?;
    Ok(BoundOutcome {
        lhs,
        bound,
        pass: lhs <= bound * (1.0 + 1e-6),
    })
}

/// Smallest `β` with `‖R(λ)ᵖ‖_n ≤ (λ − β)^{−p}` across the sampled `λ`
/// and `p ≤ p_max`: `max (λ − ‖Rᵖ‖_n^{−1/p})`.
pub fn beta_estimate(
    provider: &dyn ResolventProvider,
    chain: &ScaleChain,
    n: usize,
    lambdas: &[f64],
    p_max: usize,
    interior: usize,
) -> Result<f64> {
    let g = chain.gram(n)?;
    let mut beta = f64::NEG_INFINITY;
    for &lambda in lambdas {
        let r = provider.resolvent(c(lambda, 0.0))?;
        let mut rp = r.clone();
        for p in 1..=p_max {
            if p > 1 {
                rp = &rp * &r;
            }
            let norm = linalg::weighted_operator_norm(&rp, g, g, interior)?;
            beta = beta.max(lambda - norm.powf(-1.0 / p as f64));
        }
    }
    Ok(beta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalVerdict {
    pub omega_sup: f64,
    pub betas: Vec<f64>,
    pub beta_strictly_increasing: bool,
    /// `sup_n ω_n < ∞`.
    pub types_bounded: bool,
    /// `M_n ≤ 1` and `sup_n β_n < ∞`, read off the measured ladder.
    pub uniform_equicontinuity: bool,
}

/// Verdict on the global type and resolvent conditions from a measured
/// ladder; a ladder whose spread exceeds `beta_tol` and keeps increasing is
/// read as unbounded.
pub fn global_conditions_report(types: &[TypeEstimate], betas: &[f64], beta_tol: f64) -> Result<GlobalVerdict> {
    if types.len() < 2 || betas.len() < 2 {
        return Err(LabError::usage("global verdict needs at least two scale levels"));
    }
    let omega_sup = types.iter().map(|t| t.omega_n).fold(f64::NEG_INFINITY, f64::max);
    let beta_strictly_increasing = betas.windows(2).all(|w| w[1] > w[0] + beta_tol);
    let spread = betas.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - betas.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(GlobalVerdict {
        omega_sup,
        betas: betas.to_vec(),
        beta_strictly_increasing,
        types_bounded: omega_sup.is_finite(),
        uniform_equicontinuity: !beta_strictly_increasing && spread <= beta_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{AffineFlow, SpectralFlow};
    use crate::hermite::{hermite_generators, HermiteModel};
    use crate::lie::X3Sign;
    use crate::scale::{build_scale_chain, GeneratorFamily};

    fn h0(n: usize) -> CVector {
        SchwartzVector::basis(n, 0).coeffs
    }

    #[test]
    fn zero_generator_resolvent() {
        let r = resolvent_matrix(&CMatrix::zeros(3, 3), c(2.0, 1.0)).unwrap();
        assert!(linalg::max_abs(&(r - linalg::identity(3) / c(2.0, 1.0))) < 1e-15);
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        assert!(matches!(resolvent_matrix(&d, c(2.0, 0.0)), Err(LabError::Singular { .. })));
    }

    #[test]
    fn laplace_of_identity_group() {
        let flow = AffineFlow::new(CMatrix::zeros(4, 4)).unwrap();
        let phi = CVector::from_fn(4, |k, _| c(k as f64 + 1.0, 0.0));
        for lambda in [c(2.0, 0.0), c(-1.5, 0.5)] {
            let out = resolvent_laplace(&flow, lambda, &LaplaceSpec::default(), &phi).unwrap();
            assert!(linalg::max_abs_vec(&(out.vector - &phi / lambda)) < 1e-8);
        }
    }

    #[test]
    fn resolvent_routes_on_padded_space() {
        let n = 128;
        let fam = hermite_generators(n, X3Sign::Consistent).unwrap();
        let x2 = fam.gens[1].clone();
        let q = QuadratureSpec::for_modes(n, 1e-8);
        let phi = h0(n);
        let lambda = c(2.0, 0.0);
        let m = resolvent_matrix(&x2, lambda).unwrap() * &phi;
        let cf = resolvent_closed_form_x2(lambda, &SchwartzVector::new(phi.clone()), &q).unwrap().coeffs;
        let flow = SpectralFlow::new(x2).unwrap();
        let lp = resolvent_laplace(&flow, lambda, &LaplaceSpec::default(), &phi).unwrap().vector;
        assert!((&m - &cf).rows(0, 32).norm() < 1e-8);
        assert!((&m - &lp).norm() < 1e-7);
    }

    #[test]
    fn closed_form_norm_oracle() {
        let n = 256;
        let q = QuadratureSpec::for_modes(n, 1e-8);
        let r = resolvent_closed_form_x2(c(1.0, 0.0), &SchwartzVector::basis(n, 0), &q).unwrap();
        // Independently: √π e erfc(1).
        assert!((r.coeffs.norm_squared() - 0.757_872_156_141_312_2).abs() < 1e-6);
    }

    #[test]
    fn yosida_at_zero_time_is_identity() {
        let fam = hermite_generators(16, X3Sign::Consistent).unwrap();
        let chain = build_scale_chain(&fam.subfamily(&[0, 1]), 1).unwrap();
        let provider = MatrixResolvent { x: fam.gens[1].clone() };
        let spec = YosidaSeriesSpec {
            lambda_sequence: vec![10.0],
            j_max: 100,
            term_tol: 1e-14,
        };
        let phi = h0(16);
        let out = yosida_reconstruct(&provider, &spec, 0.0, &phi, &chain, 1, &phi).unwrap();
        assert_eq!(out.vector, phi);
    }

    #[test]
    fn yosida_converges_at_level_zero() {
        let n = 64;
        let model = HermiteModel::new(n, X3Sign::Consistent, 1e-8).unwrap();
        let chain = build_scale_chain(&model.scale_family, 1).unwrap();
        let provider = MatrixResolvent { x: model.family.gens[1].clone() };
        let phi = h0(n);
        let reference = model.analytic(&crate::lie::GroupElement::new(0.0, 0.5, 0.0), &phi).unwrap();
        let spec = YosidaSeriesSpec {
            lambda_sequence: vec![10.0, 20.0, 50.0, 100.0],
            j_max: 2000,
            term_tol: 1e-13,
        };
        let out = yosida_reconstruct(&provider, &spec, 0.5, &phi, &chain, 0, &reference).unwrap();
        assert!(out.is_monotone_decreasing());
        let back = yosida_reconstruct(&provider, &spec, -0.5, &phi, &chain, 0, &model.analytic(&crate::lie::GroupElement::new(0.0, -0.5, 0.0), &phi).unwrap()).unwrap();
        assert!(back.is_monotone_decreasing());
    }

    #[test]
    fn e118_constants_follow_recursion() {
        let cs = e118_constants(2.0, 2);
        assert_eq!(cs, vec![0.25, 1.25, 1.0 + 0.25 * 1.25]);
    }

    #[test]
    fn zero_generator_power_bound() {
        let fam = GeneratorFamily::new(vec![CMatrix::zeros(6, 6)], vec!["Z".into()], 5, 1).unwrap();
        let chain = build_scale_chain(&fam, 2).unwrap();
        let r = resolvent_matrix(&fam.gens[0], c(3.0, 0.0)).unwrap();
        let samples = vec![h0(6)];
        let rep = equicontinuity_bound_check(&r, &chain, 2, 3, c(3.0, 0.0), &samples, 3).unwrap();
        assert!((rep.worst_ratio - 3f64.powi(-3)).abs() < 1e-15);
        assert!(rep.pass);
        assert!(equicontinuity_bound_check(&r, &chain, 2, 1, c(1.5, 0.0), &samples, 3).is_err());
    }

    #[test]
    fn identity_group_has_zero_type_and_flat_ladder() {
        let fam = GeneratorFamily::new(vec![CMatrix::zeros(6, 6)], vec!["Z".into()], 5, 1).unwrap();
        let chain = build_scale_chain(&fam, 2).unwrap();
        let flow = AffineFlow::new(CMatrix::zeros(6, 6)).unwrap();
        let grid = [1.0, 10.0, -3.0];
        let types: Vec<_> = (0..3)
            .map(|n| estimate_type(&flow, &chain, n, &grid, &[h0(6)]).unwrap())
            .collect();
        assert!(types.iter().all(|t| t.omega_n == 0.0));
        let provider = MatrixResolvent { x: CMatrix::zeros(6, 6) };
        let betas: Vec<f64> = (0..3)
            .map(|n| beta_estimate(&provider, &chain, n, &[2.0, 5.0], 3, 4).unwrap())
            .collect();
        let v = global_conditions_report(&types, &betas, 1e-9).unwrap();
        assert!(v.types_bounded && v.uniform_equicontinuity);
        assert!(estimate_type(&flow, &chain, 0, &[0.0], &[h0(6)]).is_err());
    }
}
