//! Characters, class densities, and geometry of the maximal torus.
//!
//! Conjugacy classes are parametrized by torus points `H` (see [`crate::roots`]
//! for the coordinate conventions). This module evaluates irreducible
//! characters at class points, the analytic factor `j` relating Lebesgue
//! measure on the algebra to its push-forward under `exp`, and the Weyl
//! density that turns torus integrals into Haar integrals over the group.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{composite_gauss_legendre, sinc};
use crate::roots::{RootSystem, Weight};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Distance from `2*pi*Z` below which a root value is treated as singular.
const SINGULAR_ROOT_TOL: f64 = 1e-9;

/// Square root of the analytic Jacobian of `exp`:
/// the product over positive roots of `sin(alpha(H)/2) / (alpha(H)/2)`.
///
/// Smooth and equal to `1` at `H = 0`; vanishes where some root value hits a
/// non-zero multiple of `2*pi`.
pub fn j_value(rs: &RootSystem, h: &[f64]) -> f64 {
    let mut prod = 1.0;
    for idx in 0..rs.num_positive_roots() {
        prod *= sinc(rs.root_value(idx, h) / 2.0);
    }
    prod
}

/// Squared modulus of the Weyl denominator,
/// `prod_{alpha > 0} 4 sin^2(alpha(H)/2)`.
pub fn weyl_density_unnormalized(rs: &RootSystem, h: &[f64]) -> f64 {
    let mut prod = 1.0;
    for idx in 0..rs.num_positive_roots() {
        let s = (rs.root_value(idx, h) / 2.0).sin();
        prod *= 4.0 * s * s;
    }
    prod
}

/// Weyl integration weight, normalized so that
/// `(1/|W|) * integral over one lattice cell = 1`.
///
/// For a central probability density `q` on the group, `q(H) *
/// weyl_density(H)` is the probability density of the class point over a
/// fundamental domain of the Weyl-group action (for `su(2)`:
/// `q(theta) sin^2(theta/2) / pi` on `[0, 2*pi]`).
pub fn weyl_density(rs: &RootSystem, h: &[f64]) -> f64 {
    weyl_density_unnormalized(rs, h) / weyl_quadrature_norm(rs)
}

/// Normalizer `Z` of the Weyl density: `(1/|W|)` times the integral of the
/// unnormalized density over one fundamental cell of the unit lattice.
///
/// Equals the cell covolume in exact arithmetic (`4*pi` for `su(2)`,
/// `(2*pi)^rank` otherwise); computed by quadrature and cached, so that the
/// density and the quadrature rules built from it are self-consistent.
pub fn weyl_quadrature_norm(rs: &RootSystem) -> f64 {
    *rs.weyl_quadrature_norm_cache().get_or_init(|| {
        let panels = panels_for_rank(rs.rank());
        let (points, gl_weights) = tensor_cell_rule(rs, panels);
        let mut acc = 0.0;
        for (p, w) in points.iter().zip(&gl_weights) {
            acc += w * weyl_density_unnormalized(rs, p);
        }
        acc / rs.weyl_order()
    })
}

fn panels_for_rank(rank: usize) -> usize {
    match rank {
        1 => 256,
        2 => 64,
        3 => 24,
        _ => 10,
    }
}

/// Tensor-product Gauss-Legendre rule over one fundamental cell of the unit
/// lattice, returned as plain Lebesgue quadrature (`points`, `weights`).
fn tensor_cell_rule(rs: &RootSystem, panels_per_dim: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let rank = rs.rank();
    let rules: Vec<_> = (0..rank)
        .map(|i| {
            let len = rs.unit_lattice()[i][i];
            composite_gauss_legendre(0.0, len, panels_per_dim, 4)
        })
        .collect();
    let mut points = vec![Vec::with_capacity(rank)];
    let mut weights = vec![1.0];
    for rule in &rules {
        let mut next_points = Vec::with_capacity(points.len() * rule.nodes.len());
        let mut next_weights = Vec::with_capacity(points.len() * rule.nodes.len());
        for (p, w) in points.iter().zip(&weights) {
            for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
                let mut q = p.clone();
                q.push(*x);
                next_points.push(q);
                next_weights.push(w * wx);
            }
        }
        points = next_points;
        weights = next_weights;
    }
    (points, weights)
}

/// Quadrature rule integrating class functions against unit-mass Haar
/// measure: `sum_i w_i f(p_i)` approximates the Haar average of `f`.
pub fn haar_class_rule(rs: &RootSystem) -> (Vec<Vec<f64>>, Vec<f64>) {
    haar_class_rule_with(rs, panels_for_rank(rs.rank()))
}

/// Same as [`haar_class_rule`] with an explicit panel count per dimension.
pub fn haar_class_rule_with(rs: &RootSystem, panels_per_dim: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let z = weyl_quadrature_norm(rs);
    let (points, gl_weights) = tensor_cell_rule(rs, panels_per_dim);
    let weights = points
        .iter()
        .zip(&gl_weights)
        .map(|(p, w)| w * weyl_density_unnormalized(rs, p) / (rs.weyl_order() * z))
        .collect();
    (points, weights)
}

/// How a class point sits relative to the singular set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PointKind {
    /// No root value on the singular set: the quotient formula applies.
    Regular,
    /// Every root value in `2*pi*Z`: the class is central.
    Central,
    /// Some but not all root values singular.
    Mixed,
}

pub(crate) fn classify(rs: &RootSystem, h: &[f64]) -> PointKind {
    let mut singular = 0;
    let k = rs.num_positive_roots();
    for idx in 0..k {
        let v = rs.root_value(idx, h) / TWO_PI;
        if (v - v.round()).abs() < SINGULAR_ROOT_TOL {
            singular += 1;
        }
    }
    match singular {
        0 => PointKind::Regular,
        s if s == k => PointKind::Central,
        _ => PointKind::Mixed,
    }
}

/// A torus point with the per-point data needed to evaluate many characters:
/// standard coordinates, the Weyl denominator, and the singularity class.
pub struct ClassPoint<'a> {
    rs: &'a RootSystem,
    h: Vec<f64>,
    x: Vec<f64>,
    denom: Complex64,
    kind: PointKind,
}

impl<'a> ClassPoint<'a> {
    pub fn new(rs: &'a RootSystem, h: &[f64]) -> Self {
        let kind = classify(rs, h);
        ClassPoint {
            rs,
            h: h.to_vec(),
            x: rs.torus_x_coords(h),
            denom: weyl_denominator(rs, h),
            kind,
        }
    }

    pub fn torus_coords(&self) -> &[f64] {
        &self.h
    }

    /// Character of the irreducible representation with highest weight
    /// `lambda`, evaluated at this class.
    pub fn character(&self, lambda: &Weight) -> Result<Complex64> {
        if !lambda.is_dominant() || lambda.coords().len() != self.rs.rank() {
            return Err(Error::NonDominantWeight(lambda.coords().to_vec()));
        }
        match self.kind {
            PointKind::Regular => {
                let shifted = self.rs.shifted(lambda);
                let mu_e = self.rs.weight_e_coords(&shifted);
                Ok(alternating_sum(self.rs, &mu_e, &self.x) / self.denom)
            }
            PointKind::Central => {
                // Central element: the character is the dimension times the
                // scalar by which the class acts, exp(i*lambda(H)).
                let d = self.rs.weyl_dimension(lambda)? as f64;
                let phase = self.rs.weight_pairing(lambda.coords(), &self.h);
                Ok(d * Complex64::new(0.0, phase).exp())
            }
            PointKind::Mixed => character_by_extrapolation(self.rs, lambda, &self.h),
        }
    }
}

/// Weyl denominator `prod_{alpha > 0} (e^{i alpha(H)/2} - e^{-i alpha(H)/2})`.
fn weyl_denominator(rs: &RootSystem, h: &[f64]) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    for idx in 0..rs.num_positive_roots() {
        let half = rs.root_value(idx, h) / 2.0;
        prod *= Complex64::new(0.0, 2.0 * half.sin());
    }
    prod
}

/// Sign-alternating Weyl-group sum `sum_w sgn(w) e^{i (w mu)(H)}` computed in
/// standard coordinates, where the group permutes the entries.
fn alternating_sum(rs: &RootSystem, mu_e: &[f64], x: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (perm, sign) in &rs.weyl().perms {
        let mut phase = 0.0;
        for (j, &pj) in perm.iter().enumerate() {
            phase += mu_e[pj as usize] * x[j];
        }
        acc += *sign * Complex64::new(0.0, phase).exp();
    }
    acc
}

/// Direction whose root values are all at least `1`, used to step off the
/// singular set.
pub(crate) fn generic_direction(rs: &RootSystem) -> Vec<f64> {
    // Build a point whose standard coordinates strictly decrease in steps of
    // one, then convert back to torus coordinates via prefix sums.
    let n = rs.rank() + 1;
    let mut p = Vec::with_capacity(rs.rank());
    let mut acc = 0.0;
    for j in 0..rs.rank() {
        acc += (n - 1 - j) as f64 - (n as f64 - 1.0) / 2.0;
        p.push(acc);
    }
    // torus coords h satisfy p = scale * h; recover h through the pairing
    // scale encoded in root_value (root values are linear, so rescale by
    // comparing the first simple-root value).
    let mut h = p.clone();
    let probe = rs.root_value(0, &h);
    let want: f64 = rs.positive_roots()[0]
        .iter()
        .zip(&p)
        .map(|(&c, &v)| c as f64 * v)
        .sum();
    let ratio = want / probe;
    for v in &mut h {
        *v *= ratio;
    }
    h
}

/// Character at a partially singular point by Richardson extrapolation along
/// a generic direction; the error is `O(eps^6)`.
fn character_by_extrapolation(rs: &RootSystem, lambda: &Weight, h: &[f64]) -> Result<Complex64> {
    let u = generic_direction(rs);
    let shifted = rs.shifted(lambda);
    let mu_e = rs.weight_e_coords(&shifted);
    let mut eps = 2e-3;
    'attempt: for _ in 0..6 {
        let eval = |t: f64| -> Option<Complex64> {
            let hp: Vec<f64> = h.iter().zip(&u).map(|(&a, &b)| a + t * b).collect();
            if classify(rs, &hp) != PointKind::Regular {
                return None;
            }
            let x = rs.torus_x_coords(&hp);
            Some(alternating_sum(rs, &mu_e, &x) / weyl_denominator(rs, &hp))
        };
        let mut g = [Complex64::new(0.0, 0.0); 3];
        for (i, scale) in [1.0, 0.5, 0.25].iter().enumerate() {
            let t = eps * scale;
            match (eval(t), eval(-t)) {
                (Some(a), Some(b)) => g[i] = (a + b) / 2.0,
                _ => {
                    eps *= 1.37;
                    continue 'attempt;
                }
            }
        }
        let r1a = (4.0 * g[1] - g[0]) / 3.0;
        let r1b = (4.0 * g[2] - g[1]) / 3.0;
        return Ok((16.0 * r1b - r1a) / 15.0);
    }
    Err(Error::NotConverged(
        "character extrapolation could not find regular sample points".into(),
    ))
}

/// Character of the irreducible representation with highest weight `lambda`
/// at the class of `exp(H)`.
///
/// Regular points use the quotient of the alternating sum by the Weyl
/// denominator; central classes are evaluated exactly; other singular points
/// fall back to extrapolation from nearby regular points.
pub fn character(rs: &RootSystem, lambda: &Weight, h: &[f64]) -> Result<Complex64> {
    ClassPoint::new(rs, h).character(lambda)
}
