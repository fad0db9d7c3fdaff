//! Heat kernels on the algebra and on the group.
//!
//! The Euclidean kernel `p_t` lives on the algebra. Wrapping it yields the
//! kernel of the shifted group Laplacian, computable two independent ways:
//!
//! * **spectral** — character series with Gaussian coefficients
//!   `e^{-|lambda+rho|^2 t/2}`;
//! * **lattice** — periodized Gaussian `C * (2 pi t)^{-n/2} sum_gamma
//!   e^{-|H+gamma|^2/2t} / j(H+gamma)`, where `C` is the Riemannian volume
//!   of the group in the Killing metric (`measure_normalization`), the
//!   constant converting the algebra-side Lebesgue picture to unit-mass Haar.
//!
//! The unshifted kernel (the Brownian transition density) is the shifted one
//! rescaled by `e^{|rho|^2 t/2}`; that relation is implemented literally, so
//! it holds bit-for-bit. Everything uses the `t/2` exponent convention (the
//! generator is half the Laplacian).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::roots::RootSystem;
use crate::torus::{self, j_value, PointKind};
use crate::wrapping::{
    convolve_by_quadrature_su2, convolve_central, evaluate_central, tail_diagnostic, wrap_fourier,
    wrap_lattice, RadialSymbol,
};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// How to evaluate a group heat kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatMethod {
    /// Truncated character series.
    Spectral,
    /// Periodized Gaussian over the unit lattice.
    WrappedLattice,
}

/// Truncation parameter, one per method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// `|lambda + rho|^2` cutoff for the spectral series.
    NormBound(f64),
    /// Sup-norm shell radius for the lattice sum.
    LatticeRadius(u32),
}

/// A single heat-kernel evaluation request.
#[derive(Debug, Clone)]
pub struct HeatQuery {
    pub t: f64,
    pub h: Vec<f64>,
    /// `true` for the kernel of the shifted Laplacian, `false` for the
    /// Brownian transition density.
    pub shifted: bool,
    pub method: HeatMethod,
    pub truncation: Truncation,
}

/// Gaussian kernel on `R^n`: `(2 pi t)^{-n/2} e^{-|x|^2 / 2t}`.
pub fn euclidean_heat_kernel(n_dim: usize, t: f64, x_norm: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    Ok((TWO_PI * t).powf(-(n_dim as f64) / 2.0) * (-x_norm * x_norm / (2.0 * t)).exp())
}

/// Evaluate a group heat kernel according to the query.
pub fn heat_group(rs: &RootSystem, q: &HeatQuery) -> Result<f64> {
    if q.t <= 0.0 {
        return Err(Error::InvalidParameter(format!("time must be positive, got {}", q.t)));
    }
    let shifted_value = match (q.method, q.truncation) {
        (HeatMethod::Spectral, Truncation::NormBound(bound)) => {
            let f = wrap_fourier(rs, &RadialSymbol::gaussian(q.t), bound)?;
            evaluate_central(&f, &q.h)?.value.re
        }
        (HeatMethod::WrappedLattice, Truncation::LatticeRadius(radius)) => {
            lattice_heat_value(rs, q.t, &q.h, radius)?
        }
        (method, truncation) => {
            return Err(Error::InvalidParameter(format!(
                "truncation {truncation:?} does not match method {method:?}"
            )));
        }
    };
    if q.shifted {
        Ok(shifted_value)
    } else {
        Ok(rho_shift_factor(rs, q.t) * shifted_value)
    }
}

/// The constant `e^{|rho|^2 t / 2}` relating the shifted and unshifted
/// kernels (and, inverted, the Feynman-Kac weight).
pub fn rho_shift_factor(rs: &RootSystem, t: f64) -> f64 {
    (rs.rho_norm_sq() * t / 2.0).exp()
}

/// Lattice route for the shifted kernel. At singular class points every
/// lattice translate is a zero of `j`, but the kernel itself is smooth, so
/// the value is recovered by Richardson extrapolation along a generic
/// direction (same strategy as singular character evaluation).
fn lattice_heat_value(rs: &RootSystem, t: f64, h: &[f64], radius: u32) -> Result<f64> {
    let direct = |h: &[f64]| -> Result<f64> {
        let n_dim = rs.dim_g();
        let sum = wrap_lattice(
            rs,
            |x| {
                let norm = rs_torus_norm(rs, x);
                // Underflow guard: the Gaussian factor underflows long
                // before 1/j can overflow, so compute it first.
                let gauss = (-norm * norm / (2.0 * t)).exp();
                if gauss == 0.0 {
                    0.0
                } else {
                    gauss / j_value(rs, x)
                }
            },
            h,
            radius,
        );
        Ok(rs.measure_normalization() * (TWO_PI * t).powf(-(n_dim as f64) / 2.0) * sum.value)
    };
    if torus::classify(rs, h) == PointKind::Regular {
        return direct(h);
    }
    // Two-level symmetric Richardson: error O(eps^6).
    let u = torus::generic_direction(rs);
    let mut eps = 2e-3;
    'attempt: for _ in 0..6 {
        let eval = |s: f64| -> Option<Result<f64>> {
            let hp: Vec<f64> = h.iter().zip(&u).map(|(&a, &b)| a + s * b).collect();
            if torus::classify(rs, &hp) != PointKind::Regular {
                return None;
            }
            Some(direct(&hp))
        };
        let mut g = [0.0f64; 3];
        for (i, scale) in [1.0, 0.5, 0.25].iter().enumerate() {
            let s = eps * scale;
            match (eval(s), eval(-s)) {
                (Some(a), Some(b)) => g[i] = (a? + b?) / 2.0,
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
        "lattice kernel extrapolation could not find regular sample points".into(),
    ))
}

fn rs_torus_norm(rs: &RootSystem, h: &[f64]) -> f64 {
    rs.torus_norm_sq(h).sqrt()
}

/// Smallest power-of-two-scaled norm bound whose spectral tail diagnostic is
/// below `abs_tol` for time `t`, found by doubling.
pub fn spectral_norm_bound(rs: &RootSystem, t: f64, abs_tol: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    let mut bound = 8.0 * rs.rho_norm_sq().max(0.125);
    for _ in 0..24 {
        let f = wrap_fourier(rs, &RadialSymbol::gaussian(t), bound)?;
        if tail_diagnostic(&f) < abs_tol {
            return Ok(bound);
        }
        bound *= 2.0;
    }
    Err(Error::NotConverged(format!(
        "spectral tail did not reach {abs_tol} for t = {t}"
    )))
}

/// One row of a two-method grid evaluation.
#[derive(Debug, Clone)]
pub struct HeatGridRow {
    pub t: f64,
    pub h: Vec<f64>,
    pub value_spectral: f64,
    pub value_lattice: f64,
    /// `|spectral - lattice|` relative to `max(|lattice|, 1e-6 * sup_grid
    /// |lattice|)`: near-zero kernel values are compared against the grid's
    /// scale, since cancellation in the character sum bounds the achievable
    /// absolute accuracy there (see README).
    pub rel_diff: f64,
    pub tail_diag: f64,
}

/// Floor factor for the scale-relative difference column.
const REL_DIFF_FLOOR: f64 = 1e-6;

/// Midpoint grid along the ray from the origin to half the sum of the
/// lattice generators (for `su(2)`: class angles `2 pi (i + 1/2) / n`).
pub fn torus_ray_grid(rs: &RootSystem, n_points: usize) -> Vec<Vec<f64>> {
    let rank = rs.rank();
    let mut end = vec![0.0; rank];
    for gen in rs.unit_lattice() {
        for (e, g) in end.iter_mut().zip(gen) {
            *e += g / 2.0;
        }
    }
    (0..n_points)
        .map(|i| {
            let frac = (i as f64 + 0.5) / n_points as f64;
            end.iter().map(|&e| frac * e).collect()
        })
        .collect()
}

/// Evaluate both heat-kernel routes over `points` for each time in `ts`.
///
/// Spectral truncation is chosen per time so the tail diagnostic is below
/// `spectral_tol`; rows are computed in parallel but collected in order, so
/// the output is independent of the worker count.
pub fn heat_grid(
    rs: &RootSystem,
    ts: &[f64],
    points: &[Vec<f64>],
    shifted: bool,
    spectral_tol: f64,
    lattice_radius: u32,
) -> Result<Vec<HeatGridRow>> {
    let mut rows = Vec::with_capacity(ts.len() * points.len());
    for &t in ts {
        let bound = spectral_norm_bound(rs, t, spectral_tol)?;
        let f = wrap_fourier(rs, &RadialSymbol::gaussian(t), bound)?;
        let tail = tail_diagnostic(&f);
        let scale = if shifted { 1.0 } else { rho_shift_factor(rs, t) };
        let mut t_rows = points
            .par_iter()
            .map(|h| -> Result<HeatGridRow> {
                let spectral = evaluate_central(&f, h)?.value.re * scale;
                let lattice = lattice_heat_value(rs, t, h, lattice_radius)? * scale;
                Ok(HeatGridRow {
                    t,
                    h: h.clone(),
                    value_spectral: spectral,
                    value_lattice: lattice,
                    rel_diff: f64::NAN,
                    tail_diag: tail,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let sup: f64 = t_rows.iter().map(|r| r.value_lattice.abs()).fold(0.0, f64::max);
        let floor = REL_DIFF_FLOOR * sup;
        for r in &mut t_rows {
            r.rel_diff = (r.value_spectral - r.value_lattice).abs()
                / r.value_lattice.abs().max(floor);
        }
        rows.extend(t_rows);
    }
    Ok(rows)
}

/// Result of [`heat_semigroup_check`].
#[derive(Debug, Clone, Copy)]
pub struct SemigroupReport {
    /// Max relative difference between the coefficients of
    /// `heat(s) * heat(t)` and `heat(s+t)` (an exact identity of
    /// exponentials; each side rounds independently, so a few ulps remain).
    pub max_coeff_rel_diff: f64,
    /// `|quadrature group-convolution - direct evaluation|` at a probe class
    /// point; populated for `su(2)`, where the orbital-integral quadrature
    /// oracle is available.
    pub quadrature_abs_diff: Option<f64>,
}

/// Check the heat semigroup two ways: coefficientwise (`heat(s) * heat(t) =
/// heat(s+t)`) and, on `su(2)`, pointwise against the quadrature
/// group-convolution oracle.
pub fn heat_semigroup_check(rs: &RootSystem, s: f64, t: f64) -> Result<SemigroupReport> {
    if s <= 0.0 || t <= 0.0 {
        return Err(Error::InvalidParameter("times must be positive".into()));
    }
    let bound = spectral_norm_bound(rs, s.min(t), 1e-12)?;
    let fs = wrap_fourier(rs, &RadialSymbol::gaussian(s), bound)?;
    let ft = wrap_fourier(rs, &RadialSymbol::gaussian(t), bound)?;
    let conv = convolve_central(&fs, &ft)?;
    let direct = wrap_fourier(rs, &RadialSymbol::gaussian(s + t), bound)?;
    let mut max_rel = 0.0f64;
    for (a, b) in conv.entries().iter().zip(direct.entries()) {
        let denom = b.coeff.abs().max(f64::MIN_POSITIVE);
        max_rel = max_rel.max((a.coeff - b.coeff).abs() / denom);
    }
    let quadrature_abs_diff = if rs.group_id() == crate::roots::GroupId::Su2 {
        let theta = 1.0;
        let direct_val = evaluate_central(&direct, &[theta])?.value.re;
        let quad = convolve_by_quadrature_su2(&fs, &ft, theta, 64, 32)?;
        Some((direct_val - quad).abs())
    } else {
        None
    };
    Ok(SemigroupReport { max_coeff_rel_diff: max_rel, quadrature_abs_diff })
}
