//! The wrapping operator in both of its computable forms.
//!
//! An Ad-invariant law on the Lie algebra determines a central function on
//! the group two ways:
//!
//! * **Fourier side** — a radial symbol evaluated at the shifted weights
//!   `lambda + rho` gives the coefficients of a character series
//!   ([`wrap_fourier`] / [`evaluate_central`]).
//! * **Lattice side** — periodizing the algebra-side density over the unit
//!   lattice gives a pointwise sum on the torus ([`wrap_lattice`]).
//!
//! Convolution on the group becomes a coefficientwise product
//! ([`convolve_central`]), and the Euclidean Laplacian becomes the group
//! Laplacian shifted by `|rho|^2` ([`laplacian_multiplier_check`]).

use std::sync::Arc;

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, pairwise_sum};
use crate::roots::{GroupId, RootSystem, Weight};
use crate::torus::{haar_class_rule_with, ClassPoint};

/// A radial Fourier transform: a function of the norm `xi = |lambda + rho|`
/// producing the coefficient of the corresponding character.
///
/// Symmetric laws on the algebra have real-valued transforms, which is the
/// only case this crate needs; conjugate symmetry is then automatic.
#[derive(Clone)]
pub struct RadialSymbol {
    label: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl RadialSymbol {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RadialSymbol { label: label.into(), f: Arc::new(f) }
    }

    /// Transform of the centered Gaussian with covariance `t * I` (the
    /// Euclidean heat kernel at time `t`): `exp(-t |xi|^2 / 2)`.
    pub fn gaussian(t: f64) -> Self {
        RadialSymbol::new(format!("gaussian(t={t})"), move |xi| (-(0.5 * t) * (xi * xi)).exp())
    }

    /// Transform of the delta at the origin: identically `1`. Wrapping it
    /// yields the delta at the group identity (all coefficients one).
    pub fn delta() -> Self {
        RadialSymbol::new("delta", |_| 1.0)
    }

    pub fn eval(&self, xi: f64) -> f64 {
        (self.f)(xi)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl std::fmt::Debug for RadialSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialSymbol").field("label", &self.label).finish()
    }
}

/// One term of a character series.
#[derive(Debug, Clone)]
pub struct CentralEntry {
    pub lambda: Weight,
    pub dim: u64,
    pub shifted_norm_sq: f64,
    pub coeff: f64,
}

/// A finitely truncated central function `sum d_lambda a_lambda chi_lambda`,
/// stored as coefficients over the dominant weights with
/// `|lambda + rho|^2 <= truncation_bound`, in ascending-norm order.
#[derive(Debug, Clone)]
pub struct CentralFunction {
    rs: RootSystem,
    truncation_bound: f64,
    entries: Vec<CentralEntry>,
}

/// Value of a truncated character series together with a conservative bound
/// on the dropped tail (last enumerated shell, with `|chi| <= d`, times 10).
#[derive(Debug, Clone, Copy)]
pub struct CentralEvaluation {
    pub value: Complex64,
    pub tail_estimate: f64,
}

/// Result of a lattice periodization: the shell-ordered sum and the absolute
/// contribution of the outermost shell (convergence diagnostic).
#[derive(Debug, Clone, Copy)]
pub struct LatticeSum {
    pub value: f64,
    pub last_shell_abs: f64,
}

impl CentralFunction {
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn truncation_bound(&self) -> f64 {
        self.truncation_bound
    }

    pub fn entries(&self) -> &[CentralEntry] {
        &self.entries
    }

    /// Coefficient of the trivial representation (the total mass of the law
    /// this function represents, when it represents one).
    pub fn coeff_at_zero(&self) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.lambda.coords().iter().all(|&c| c == 0))
            .map(|e| e.coeff)
    }

    /// Rescale every coefficient by a constant, in place.
    pub fn scale_coeffs(&mut self, factor: f64) {
        for e in &mut self.entries {
            e.coeff *= factor;
        }
    }
}

impl Serialize for CentralFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct EntryView<'a> {
            lambda_coords: &'a [i64],
            d: u64,
            re_a: f64,
            im_a: f64,
        }
        let views: Vec<EntryView> = self
            .entries
            .iter()
            .map(|e| EntryView {
                lambda_coords: e.lambda.coords(),
                d: e.dim,
                re_a: e.coeff,
                im_a: 0.0,
            })
            .collect();
        let mut s = serializer.serialize_struct("CentralFunction", 3)?;
        s.serialize_field("group", &self.rs.group_id().label())?;
        s.serialize_field("truncation_bound", &self.truncation_bound)?;
        s.serialize_field("entries", &views)?;
        s.end()
    }
}

/// Build the character series of the wrapped law with the given radial
/// symbol: coefficient `a_lambda = symbol(|lambda + rho|)` for every dominant
/// weight with `|lambda + rho|^2 <= norm_bound`.
pub fn wrap_fourier(rs: &RootSystem, symbol: &RadialSymbol, norm_bound: f64) -> Result<CentralFunction> {
    if norm_bound <= rs.rho_norm_sq() {
        return Err(Error::InvalidParameter(format!(
            "norm_bound {norm_bound} must exceed |rho|^2 = {}",
            rs.rho_norm_sq()
        )));
    }
    let entries = rs
        .enumerate_dominant_weights(norm_bound)
        .into_iter()
        .map(|lambda| {
            let dim = rs.weyl_dimension(&lambda)?;
            let shifted_norm_sq = rs.shifted_norm_sq(&lambda);
            let coeff = symbol.eval(shifted_norm_sq.sqrt());
            Ok(CentralEntry { lambda, dim, shifted_norm_sq, coeff })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CentralFunction { rs: rs.clone(), truncation_bound: norm_bound, entries })
}

/// Shells are groups of consecutive entries with (numerically) equal
/// `|lambda + rho|^2`.
const SHELL_NORM_TOL: f64 = 1e-9;

/// Evaluate the character series at the class of `exp(H)`, summing in
/// ascending `|lambda + rho|^2` order.
pub fn evaluate_central(f: &CentralFunction, h: &[f64]) -> Result<CentralEvaluation> {
    let point = ClassPoint::new(&f.rs, h);
    let mut value = Complex64::new(0.0, 0.0);
    for e in &f.entries {
        value += e.dim as f64 * e.coeff * point.character(&e.lambda)?;
    }
    Ok(CentralEvaluation { value, tail_estimate: tail_diagnostic(f) })
}

/// Conservative tail diagnostic: ten times the `|chi| <= d` bound on the
/// outermost enumerated shell. Point-independent, so it can drive truncation
/// selection before any evaluation.
pub fn tail_diagnostic(f: &CentralFunction) -> f64 {
    let Some(last) = f.entries.last() else { return 0.0 };
    let mut acc = 0.0;
    for e in f.entries.iter().rev() {
        if (last.shifted_norm_sq - e.shifted_norm_sq).abs() > SHELL_NORM_TOL {
            break;
        }
        acc += (e.dim * e.dim) as f64 * e.coeff.abs();
    }
    10.0 * acc
}

/// Periodize `phi` over the unit lattice: `sum_gamma phi(H + gamma)` with
/// `gamma` running over lattice points whose generator coordinates have
/// sup-norm at most `lattice_radius`.
///
/// Shells are summed in ascending sup-norm order, lexicographically within a
/// shell, with pairwise reduction per shell — a fixed, deterministic order.
pub fn wrap_lattice(
    rs: &RootSystem,
    phi: impl Fn(&[f64]) -> f64,
    h: &[f64],
    lattice_radius: u32,
) -> LatticeSum {
    let rank = rs.rank();
    let gens = rs.unit_lattice();
    let mut value = 0.0;
    let mut last_shell_abs = 0.0;
    let mut terms: Vec<f64> = Vec::new();
    for s in 0..=lattice_radius as i64 {
        terms.clear();
        let mut abs_acc = 0.0;
        let mut m = vec![-s; rank];
        loop {
            if m.iter().map(|&c| c.abs()).max().unwrap_or(0) == s {
                let mut point = h.to_vec();
                for (i, &mi) in m.iter().enumerate() {
                    for (j, p) in point.iter_mut().enumerate() {
                        *p += mi as f64 * gens[i][j];
                    }
                }
                let term = phi(&point);
                terms.push(term);
                abs_acc += term.abs();
            }
            // Odometer advance in lexicographic order over [-s, s]^rank.
            let mut pos = rank;
            while pos > 0 && m[pos - 1] == s {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            m[pos - 1] += 1;
            for v in &mut m[pos..] {
                *v = -s;
            }
        }
        value += pairwise_sum(&terms);
        last_shell_abs = abs_acc;
    }
    LatticeSum { value, last_shell_abs }
}

/// Coefficientwise product: the character series of the convolution of the
/// two laws. Entries are matched by weight; the result keeps the
/// intersection, with `truncation_bound` the smaller of the two.
pub fn convolve_central(f: &CentralFunction, g: &CentralFunction) -> Result<CentralFunction> {
    if f.rs.group_id() != g.rs.group_id() {
        return Err(Error::MismatchedRootSystems(
            f.rs.group_id().label(),
            g.rs.group_id().label(),
        ));
    }
    let mut entries = Vec::with_capacity(f.entries.len().min(g.entries.len()));
    let mut i = 0;
    let mut j = 0;
    while i < f.entries.len() && j < g.entries.len() {
        let a = &f.entries[i];
        let b = &g.entries[j];
        let key_a = (a.shifted_norm_sq, a.lambda.coords());
        let key_b = (b.shifted_norm_sq, b.lambda.coords());
        match key_a.0.total_cmp(&key_b.0).then_with(|| key_a.1.cmp(key_b.1)) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                entries.push(CentralEntry {
                    lambda: a.lambda.clone(),
                    dim: a.dim,
                    shifted_norm_sq: a.shifted_norm_sq,
                    coeff: a.coeff * b.coeff,
                });
                i += 1;
                j += 1;
            }
        }
    }
    Ok(CentralFunction {
        rs: f.rs.clone(),
        truncation_bound: f.truncation_bound.min(g.truncation_bound),
        entries,
    })
}

/// Verify, coefficient by coefficient, that the wrapped Euclidean Laplacian
/// multiplier `-|lambda + rho|^2` equals the group Laplacian multiplier
/// `-c(lambda)` shifted by `-|rho|^2`. Returns the maximum absolute
/// discrepancy over all weights with `|lambda + rho|^2 <= norm_bound`.
pub fn laplacian_multiplier_check(rs: &RootSystem, norm_bound: f64) -> Result<f64> {
    let mut max_diff = 0.0f64;
    for lambda in rs.enumerate_dominant_weights(norm_bound) {
        let (shifted, casimir) = rs.casimir_norms(&lambda)?;
        let wrapped_side = -shifted;
        let group_side = -casimir - rs.rho_norm_sq();
        max_diff = max_diff.max((wrapped_side - group_side).abs());
    }
    Ok(max_diff)
}

/// Group convolution of two central functions on `SU(2)` by quadrature:
/// the outer integral over conjugacy classes uses the Weyl-density rule, and
/// the inner orbital average uses the classical composition law
/// `cos(psi/2) = cos(phi/2) cos(theta/2) + sin(phi/2) sin(theta/2) w` with
/// `w` uniform on `[-1, 1]`.
///
/// Serves as an independent oracle for [`convolve_central`].
pub fn convolve_by_quadrature_su2(
    f: &CentralFunction,
    g: &CentralFunction,
    theta: f64,
    outer_panels: usize,
    inner_nodes: usize,
) -> Result<f64> {
    if f.rs.group_id() != GroupId::Su2 || g.rs.group_id() != GroupId::Su2 {
        return Err(Error::UnsupportedGroup(
            "quadrature convolution oracle is implemented for su2 only".into(),
        ));
    }
    let (points, weights) = haar_class_rule_with(&f.rs, outer_panels);
    let inner = gauss_legendre(inner_nodes);
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let mut acc = 0.0;
    for (p, w) in points.iter().zip(&weights) {
        let phi = p[0];
        let fv = evaluate_central(f, &[phi])?.value.re;
        let (cp, sp) = ((phi / 2.0).cos(), (phi / 2.0).sin());
        let mut orbital = 0.0;
        for (x, wx) in inner.nodes.iter().zip(&inner.weights) {
            let c = (cp * ct + sp * st * x).clamp(-1.0, 1.0);
            let psi = 2.0 * c.acos();
            orbital += wx * evaluate_central(g, &[psi])?.value.re;
        }
        acc += w * fv * orbital / 2.0;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const PI: f64 = std::f64::consts::PI;

    fn su2() -> RootSystem {
        RootSystem::new(GroupId::Su2).unwrap()
    }

    fn su3() -> RootSystem {
        RootSystem::new(GroupId::Sun(3)).unwrap()
    }

    #[test]
    fn wrapped_delta_has_unit_coefficients() {
        let rs = su2();
        let f = wrap_fourier(&rs, &RadialSymbol::delta(), 100.0).unwrap();
        assert!(!f.entries().is_empty());
        for e in f.entries() {
            assert_eq!(e.coeff, 1.0);
        }
        // At the identity the truncated series is sum of d^2 over the
        // enumerated weights (a divergent series in the bound: deltas are
        // distributions, pointwise evaluation is only meaningful for
        // decaying coefficients).
        let at_id = evaluate_central(&f, &[0.0]).unwrap().value;
        let want: f64 = f.entries().iter().map(|e| (e.dim * e.dim) as f64).sum();
        assert_relative_eq!(at_id.re, want, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_symbol_gives_heat_coefficients() {
        let rs = su2();
        let t = 0.7;
        let f = wrap_fourier(&rs, &RadialSymbol::gaussian(t), 60.0).unwrap();
        for e in f.entries() {
            let want = (-e.shifted_norm_sq * t / 2.0).exp();
            assert_relative_eq!(e.coeff, want, max_relative = 1e-15);
        }
        assert_relative_eq!(
            f.coeff_at_zero().unwrap(),
            (-rs.rho_norm_sq() * t / 2.0).exp(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn wrap_fourier_requires_bound_above_rho() {
        let rs = su2();
        assert!(wrap_fourier(&rs, &RadialSymbol::delta(), 0.1).is_err());
    }

    #[test]
    fn single_character_selector_recovers_character() {
        let rs = su2();
        let m = 3i64;
        let target = rs.shifted_norm_sq(&Weight::new(vec![m])).sqrt();
        let d = (m + 1) as f64;
        let symbol = RadialSymbol::new("selector", move |xi| {
            if xi == target {
                1.0 / d
            } else {
                0.0
            }
        });
        let f = wrap_fourier(&rs, &symbol, 50.0).unwrap();
        for theta in [0.4, 1.1, 2.9] {
            let got = evaluate_central(&f, &[theta]).unwrap().value;
            let want = ((m + 1) as f64 * theta / 2.0).sin() / (theta / 2.0).sin();
            assert_relative_eq!(got.re, want, epsilon = 1e-12);
            assert!(got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn lattice_sum_with_localized_function_is_a_single_term() {
        let rs = su2();
        let phi = |h: &[f64]| (-40.0 * (h[0] - 1.0) * (h[0] - 1.0)).exp();
        let got = wrap_lattice(&rs, phi, &[1.0], 4);
        // Every translate except gamma = 0 underflows to exactly 0.
        assert_eq!(got.value, 1.0);
    }

    #[test]
    fn lattice_sum_is_shift_invariant() {
        let rs = su2();
        let phi = |h: &[f64]| (-0.5 * h[0] * h[0]).exp();
        let gamma = rs.unit_lattice()[0][0];
        let a = wrap_lattice(&rs, phi, &[0.7], 10);
        let b = wrap_lattice(&rs, phi, &[0.7 + gamma], 10);
        assert_relative_eq!(a.value, b.value, max_relative = 1e-12);
    }

    #[test]
    fn lattice_sum_su3_matches_direct_enumeration() {
        let rs = su3();
        let phi = |h: &[f64]| (-0.3 * (h[0] * h[0] + h[1] * h[1])).exp();
        let h = [0.4, 1.1];
        let got = wrap_lattice(&rs, phi, &h, 3);
        // Oracle: brute-force double loop in any order (sum is absolutely
        // convergent and small enough for naive addition).
        let two_pi = 2.0 * PI;
        let mut want = 0.0;
        for m0 in -3i64..=3 {
            for m1 in -3i64..=3 {
                want += phi(&[h[0] + m0 as f64 * two_pi, h[1] + m1 as f64 * two_pi]);
            }
        }
        assert_relative_eq!(got.value, want, max_relative = 1e-13);
    }

    #[test]
    fn lattice_tail_doubling_is_stable() {
        let rs = su2();
        let t = 0.25;
        let n = rs.dim_g() as f64;
        let phi = move |h: &[f64]| {
            let norm_sq = 2.0 * h[0] * h[0];
            (2.0 * PI * t).powf(-n / 2.0) * (-norm_sq / (2.0 * t)).exp()
                / crate::torus::j_value(&rs, h)
        };
        let rs = su2();
        let a = wrap_lattice(&rs, &phi, &[1.3], 5);
        let b = wrap_lattice(&rs, &phi, &[1.3], 6);
        assert!((a.value - b.value).abs() <= 1e-14 * a.value.abs());
        assert!(b.last_shell_abs < 1e-12 * b.value.abs());
    }

    #[test]
    fn convolution_with_delta_is_identity_bitwise() {
        let rs = su2();
        let f = wrap_fourier(&rs, &RadialSymbol::gaussian(0.4), 80.0).unwrap();
        let delta = wrap_fourier(&rs, &RadialSymbol::delta(), 80.0).unwrap();
        let conv = convolve_central(&f, &delta).unwrap();
        assert_eq!(conv.entries().len(), f.entries().len());
        for (a, b) in conv.entries().iter().zip(f.entries()) {
            assert_eq!(a.lambda, b.lambda);
            assert_eq!(a.coeff, b.coeff);
        }
    }

    #[test]
    fn convolution_is_commutative_bitwise_and_associative_to_roundoff() {
        let rs = su3();
        let f = wrap_fourier(&rs, &RadialSymbol::gaussian(0.3), 30.0).unwrap();
        let g = wrap_fourier(&rs, &RadialSymbol::gaussian(0.9), 30.0).unwrap();
        let k = wrap_fourier(&rs, &RadialSymbol::gaussian(1.4), 30.0).unwrap();
        let fg = convolve_central(&f, &g).unwrap();
        let gf = convolve_central(&g, &f).unwrap();
        for (a, b) in fg.entries().iter().zip(gf.entries()) {
            assert_eq!(a.coeff, b.coeff);
        }
        let left = convolve_central(&fg, &k).unwrap();
        let right = convolve_central(&f, &convolve_central(&g, &k).unwrap()).unwrap();
        for (a, b) in left.entries().iter().zip(right.entries()) {
            // One extra rounding on each side: identical to ~2 ulps.
            assert_relative_eq!(a.coeff, b.coeff, max_relative = 5e-16);
        }
    }

    #[test]
    fn heat_coefficients_form_a_semigroup() {
        let rs = su2();
        let (s, t) = (0.3, 0.7);
        let conv = convolve_central(
            &wrap_fourier(&rs, &RadialSymbol::gaussian(s), 70.0).unwrap(),
            &wrap_fourier(&rs, &RadialSymbol::gaussian(t), 70.0).unwrap(),
        )
        .unwrap();
        let direct = wrap_fourier(&rs, &RadialSymbol::gaussian(s + t), 70.0).unwrap();
        assert_eq!(conv.entries().len(), direct.entries().len());
        for (a, b) in conv.entries().iter().zip(direct.entries()) {
            // Exact identity of exponentials; each side rounds independently.
            assert_relative_eq!(a.coeff, b.coeff, max_relative = 1e-14);
        }
    }

    #[test]
    fn convolution_rejects_mismatched_groups() {
        let f = wrap_fourier(&su2(), &RadialSymbol::delta(), 10.0).unwrap();
        let g = wrap_fourier(&su3(), &RadialSymbol::delta(), 10.0).unwrap();
        assert!(matches!(
            convolve_central(&f, &g),
            Err(Error::MismatchedRootSystems(_, _))
        ));
    }

    #[test]
    fn convolution_truncates_to_smaller_bound() {
        let rs = su2();
        let f = wrap_fourier(&rs, &RadialSymbol::delta(), 30.0).unwrap();
        let g = wrap_fourier(&rs, &RadialSymbol::delta(), 80.0).unwrap();
        let conv = convolve_central(&f, &g).unwrap();
        assert_eq!(conv.truncation_bound(), 30.0);
        assert_eq!(conv.entries().len(), f.entries().len());
    }

    #[test]
    fn laplacian_multiplier_identity() {
        let rs2 = su2();
        // (m+1)^2/8 and m(m+2)/8 are exact dyadic rationals, so the two
        // multiplier routes agree bitwise.
        assert_eq!(laplacian_multiplier_check(&rs2, 1251.0).unwrap(), 0.0);
        let rs3 = su3();
        assert!(laplacian_multiplier_check(&rs3, 60.0).unwrap() < 1e-14);
    }

    #[test]
    fn quadrature_convolution_matches_coefficient_product() {
        let rs = su2();
        let (s, t) = (0.5, 0.8);
        let f = wrap_fourier(&rs, &RadialSymbol::gaussian(s), 120.0).unwrap();
        let g = wrap_fourier(&rs, &RadialSymbol::gaussian(t), 120.0).unwrap();
        let conv = convolve_central(&f, &g).unwrap();
        for theta in [0.9, 1.7, 3.0] {
            let direct = evaluate_central(&conv, &[theta]).unwrap().value.re;
            let quad = convolve_by_quadrature_su2(&f, &g, theta, 64, 32).unwrap();
            assert!(
                (direct - quad).abs() < 1e-6 * (1.0 + direct.abs()),
                "theta={theta}: direct {direct}, quadrature {quad}"
            );
        }
    }

    #[test]
    fn serialization_matches_contract() {
        let rs = su2();
        let f = wrap_fourier(&rs, &RadialSymbol::gaussian(1.0), 5.0).unwrap();
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["group"], "su2");
        assert_eq!(v["truncation_bound"], 5.0);
        let entries = v["entries"].as_array().unwrap();
        assert!(!entries.is_empty());
        assert!(entries[0]["lambda_coords"].is_array());
        assert!(entries[0]["d"].is_u64());
        assert!(entries[0]["re_a"].is_f64());
        assert_eq!(entries[0]["im_a"], 0.0);
    }

    #[test]
    fn tail_estimate_shrinks_with_bound() {
        let rs = su2();
        let symbol = RadialSymbol::gaussian(0.5);
        let small = wrap_fourier(&rs, &symbol, 40.0).unwrap();
        let large = wrap_fourier(&rs, &symbol, 160.0).unwrap();
        let tail_small = evaluate_central(&small, &[1.0]).unwrap().tail_estimate;
        let tail_large = evaluate_central(&large, &[1.0]).unwrap().tail_estimate;
        assert!(tail_large < tail_small);
        assert!(tail_large > 0.0);
    }
}
