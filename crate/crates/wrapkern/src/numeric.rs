//! Small numerical utilities shared across the crate: stable `sin(x)/x`,
//! deterministic summation, and Gauss–Legendre quadrature rules.

/// `sin(x)/x` with a Taylor branch near zero.
///
/// The series branch keeps relative error below 1e-16 for `|x| < 1e-4`,
/// where the direct quotient would lose digits.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() / x
    }
}

/// Pairwise (tree) summation. Deterministic for a fixed input order and
/// more accurate than naive left-to-right accumulation on long inputs.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (lo, hi) = xs.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// Sample mean and (unbiased) sample standard deviation via pairwise sums.
///
/// Returns `(mean, sd)`; `sd` is 0 for fewer than two samples.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (mean, var.sqrt())
}

/// A one-dimensional quadrature rule: nodes and matching weights.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Integrate `f` with this rule.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        pairwise_sum(&terms)
    }
}

/// Gauss–Legendre rule on `[-1, 1]` with `n` nodes.
///
/// Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
/// iteration from the Chebyshev-like initial guess; weights follow from the
/// derivative. Accurate to machine precision for the sizes used here.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess (Abramowitz & Stegun 22.16.6 style).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule { nodes, weights }
}

/// Composite Gauss–Legendre rule on `[a, b]`: `panels` equal panels with
/// `nodes_per_panel` Gauss nodes each.
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, nodes_per_panel: usize) -> QuadratureRule {
    let base = gauss_legendre(nodes_per_panel);
    let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
    let mut weights = Vec::with_capacity(panels * nodes_per_panel);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (&x, &w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(lo + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    QuadratureRule { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sinc_at_zero_is_one() {
        assert_eq!(sinc(0.0), 1.0);
    }

    #[test]
    fn sinc_matches_quotient_across_branch() {
        // The Taylor branch and the direct quotient must agree where they meet.
        for &x in &[9.9e-5, 1.01e-4, 1e-6, 5e-5, 2e-4] {
            let series = sinc(x);
            let direct = x.sin() / x;
            assert_relative_eq!(series, direct, max_relative = 1e-14);
        }
        assert_relative_eq!(sinc(std::f64::consts::PI / 2.0), 2.0 / std::f64::consts::PI, max_relative = 1e-15);
    }

    #[test]
    fn pairwise_sum_matches_exact_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // An n-point rule is exact through degree 2n-1.
        let rule = gauss_legendre(8);
        let int_x14 = rule.integrate(|x| x.powi(14));
        assert_relative_eq!(int_x14, 2.0 / 15.0, max_relative = 1e-13);
        let total: f64 = rule.weights.iter().sum();
        assert_relative_eq!(total, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn composite_rule_handles_oscillatory_integrand() {
        // \int_0^{4pi} sin^2(x/2) dx = 2pi.
        let rule = composite_gauss_legendre(0.0, 4.0 * std::f64::consts::PI, 16, 16);
        let got = rule.integrate(|x| (x / 2.0).sin().powi(2));
        assert_relative_eq!(got, 2.0 * std::f64::consts::PI, max_relative = 1e-12);
    }
}
