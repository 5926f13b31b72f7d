//! Gauss rules and the orthonormal Hermite functions.

use nalgebra::{DMatrix, SymmetricEigen};

/// Eigenvalues of the symmetric tridiagonal Jacobi matrix with zero
/// diagonal and the given off-diagonal, sorted ascending.
fn jacobi_nodes(off: impl Fn(usize) -> f64, n: usize) -> Vec<f64> {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = off(k);
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(j).eigenvalues.iter().cloned().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nodes
}

const RESCALE: f64 = 1e150;

/// Hermite recurrence started from `h_0 = 1`, with a running natural-log
/// scale so that no step under- or overflows. Calls `visit(k, value, log)`
/// where the true `h_k(x)` is `value · exp(log)`.
fn scaled_recurrence(n: usize, x: f64, mut visit: impl FnMut(usize, f64, f64)) {
    if n == 0 {
        return;
    }
    let mut log = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let mut prev = 0.0;
    let mut cur = 1.0;
    visit(0, cur, log);
    for k in 0..n - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log += RESCALE.ln();
        }
        visit(k + 1, cur, log);
    }
}

/// Values h_0(x), ..., h_{n-1}(x) of the L²-orthonormal Hermite functions.
/// Entries below the double range come out as zero.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut h = vec![0.0; n];
    scaled_recurrence(n, x, |k, v, log| h[k] = v * log.exp());
    h
}

/// `(h_{n-1}(x), h_n(x))` as mantissas sharing the returned log scale.
fn hermite_pair(n: usize, x: f64) -> (f64, f64, f64) {
    let (mut a, mut b, mut la, mut lb) = (0.0, 0.0, 0.0, 0.0);
    scaled_recurrence(n + 1, x, |k, v, log| {
        if k + 1 == n {
            (a, la) = (v, log);
        } else if k == n {
            (b, lb) = (v, log);
        }
    });
    (a * (la - lb).exp(), b, lb)
}

/// Gauss–Hermite rule stored with weights for the bare integral:
/// `∫ f(x) dx ≈ Σ w_i f(x_i)`, exact when `f = e^{-x²}·p` with `deg p < 2n`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Hermite rule needs at least one node");
        let mut nodes = jacobi_nodes(|k| (k as f64 / 2.0).sqrt(), n);
        let scale = (2.0 * n as f64).sqrt();
        for x in nodes.iter_mut() {
            // Newton on h_n; at a root h_n' = sqrt(2n) h_{n-1}.
            for _ in 0..3 {
                let (hm1, hn, _) = hermite_pair(n, *x);
                let deriv = scale * hm1 - *x * hn;
                if deriv == 0.0 {
                    break;
                }
                *x -= hn / deriv;
            }
        }
        // w = 1 / (n h_{n-1}²), formed in logs because h_{n-1} itself can
        // underflow at the outer nodes.
        let weights = nodes
            .iter()
            .map(|&x| {
                let (hm1, _, log) = hermite_pair(n, x);
                (-(n as f64).ln() - 2.0 * (hm1.abs().ln() + log)).exp()
            })
            .collect();
        GaussHermite { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ f(x) dx` for an integrand decaying like a Gaussian.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = x;
    if n == 0 {
        return (0.0, 1.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = jacobi_nodes(
            |k| {
                let kf = k as f64;
                kf / (4.0 * kf * kf - 1.0).sqrt()
            },
            n,
        );
        let nf = n as f64;
        let deriv = |x: f64| {
            let (pm1, pn) = legendre_pair(n, x);
            nf * (x * pn - pm1) / (x * x - 1.0)
        };
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (_, pn) = legendre_pair(n, *x);
                *x -= pn / deriv(*x);
            }
        }
        let weights = nodes
            .iter()
            .map(|&x| {
                let d = deriv(x);
                2.0 / ((1.0 - x * x) * d * d)
            })
            .collect();
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights of the composite rule over `panels` equal panels of [a, b].
    pub fn composite(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * self.nodes.len());
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (&x, &w) in self.nodes.iter().zip(&self.weights) {
                out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_functions_are_orthonormal() {
        let q = GaussHermite::new(80);
        let n = 30;
        let table: Vec<Vec<f64>> = q.nodes.iter().map(|&x| hermite_functions(n, x)).collect();
        for a in 0..n {
            for b in 0..n {
                let s: f64 = table.iter().zip(&q.weights).map(|(h, w)| w * h[a] * h[b]).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12, "({a},{b}) -> {s}");
            }
        }
    }

    #[test]
    fn gaussian_moments() {
        let q = GaussHermite::new(20);
        let pi = std::f64::consts::PI;
        let m0 = q.integrate(|x| (-x * x).exp());
        let m4 = q.integrate(|x| x.powi(4) * (-x * x).exp());
        assert!((m0 - pi.sqrt()).abs() < 1e-13);
        assert!((m4 - 0.75 * pi.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn large_rule_stays_finite() {
        let q = GaussHermite::new(512);
        assert!(q.weights.iter().all(|w| w.is_finite() && *w > 0.0));
        let m0 = q.integrate(|x| (-x * x).exp());
        assert!((m0 - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn very_large_rule_stays_finite() {
        let q = GaussHermite::new(1024);
        assert!(q.weights.iter().all(|w| w.is_finite() && *w > 0.0));
        let m0 = q.integrate(|x| (-x * x).exp());
        assert!((m0 - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let h = |x: f64| hermite_functions(600, x)[599];
        let s = q.integrate(|x| h(x) * h(x));
        assert!((s - 1.0).abs() < 1e-10, "{s}");
        assert!(hermite_functions(4, 50.0).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let q = GaussLegendre::new(16);
        let s: f64 = q.nodes.iter().zip(&q.weights).map(|(&x, &w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
        let total: f64 = q.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn composite_exponential_integral() {
        let q = GaussLegendre::new(12);
        let s: f64 = q
            .composite(0.0, 30.0, 30)
            .into_iter()
            .map(|(t, w)| w * (-t).exp())
            .sum();
        assert!((s - (1.0 - (-30.0f64).exp())).abs() < 1e-14);
    }
}
