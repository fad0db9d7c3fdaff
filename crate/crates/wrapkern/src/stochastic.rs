//! Monte-Carlo Brownian motion on the algebra and on SU(2).
//!
//! Group paths use a left-increment geodesic Euler scheme: each step
//! right-multiplies by the exact group exponential of a Gaussian algebra
//! increment, drawn in a frame orthonormal for the *same* inner product the
//! heat kernels use (a mismatched metric would silently rescale time, so the
//! frame normalization is asserted at initialization). The scheme has weak
//! order one in class-function expectations.
//!
//! Expectations of the shifted semigroup are estimated by the constant
//! weight `e^{-|rho|^2 t/2}` rather than by killing paths: the rate is
//! constant, so the survival probability is path-independent and the weight
//! is the zero-variance implementation of the same expectation.
//!
//! Reproducibility contract: every path owns a counter-based RNG stream
//! derived from `(seed, path_index)`, paths are collected in index order,
//! and statistics use fixed-order pairwise reduction — results are
//! bit-identical across reruns and across worker counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::heat::{rho_shift_factor, spectral_norm_bound};
use crate::numeric::{gauss_legendre, mean_sd, sinc};
use crate::roots::{GroupId, RootSystem};
use crate::torus::weyl_density;
use crate::wrapping::{evaluate_central, wrap_fourier, RadialSymbol};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A special-unitary 2x2 matrix stored as a unit quaternion
/// `w + x i + y j + z k`; the class angle is `2 atan2(|(x,y,z)|, w)`, which
/// lies in the fundamental domain `[0, 2 pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElementSU2 {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GroupElementSU2 {
    pub fn identity() -> Self {
        Self { w: 1.0, x: 0.0, y: 0.0, z: 0.0 }
    }

    /// Construct from components, normalizing to unit length.
    pub fn new_unit(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidParameter("quaternion components must be finite and not all zero".into()));
        }
        Ok(Self { w: w / n, x: x / n, y: y / n, z: z / n })
    }

    /// Quaternion product, renormalized so rounding drift cannot accumulate
    /// over long paths.
    pub fn mul(&self, r: &Self) -> Self {
        let w = self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z;
        let x = self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y;
        let y = self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x;
        let z = self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w;
        let n = (w * w + x * x + y * y + z * z).sqrt();
        Self { w: w / n, x: x / n, y: y / n, z: z / n }
    }

    /// Exact group exponential of the algebra element with vector part `v`:
    /// `(cos|v|, sinc(|v|) v)`.
    pub fn exp_pure(v: [f64; 3]) -> Self {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let s = sinc(n);
        Self { w: n.cos(), x: s * v[0], y: s * v[1], z: s * v[2] }
    }

    /// Conjugation-class angle in `[0, 2 pi]` (equals `2 arccos(w)`, via
    /// `atan2` for accuracy near the center).
    pub fn class_angle(&self) -> f64 {
        let vn = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        2.0 * vn.atan2(self.w)
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Irreducible character on SU(2) by label `m` (dimension `m + 1`),
/// evaluated through the Chebyshev recurrence in `w = cos(theta/2)`.
pub fn su2_character(m: u32, g: &GroupElementSU2) -> f64 {
    let x = g.w;
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for _ in 1..m {
        (prev, cur) = (cur, 2.0 * x * cur - prev);
    }
    cur
}

/// Terminal elements of a batch of simulated Brownian paths on SU(2).
#[derive(Debug, Clone)]
pub struct PathEnsemble {
    pub n_paths: usize,
    pub t_final: f64,
    pub n_steps: usize,
    pub terminals: Vec<GroupElementSU2>,
    /// `e^{-|rho|^2 t_final / 2}`: the constant reweighting that turns plain
    /// expectations into shifted-semigroup expectations.
    pub fk_weight: f64,
    pub rng_seed: u64,
    pub scheme_id: &'static str,
}

impl PathEnsemble {
    pub fn class_angles(&self) -> Vec<f64> {
        self.terminals.iter().map(|g| g.class_angle()).collect()
    }
}

/// Simulate Brownian motion on SU(2) (generator: half the Laplacian of the
/// same invariant metric the heat kernels use) and return the terminal
/// elements at time `t`.
pub fn simulate_bm_su2(t: f64, n_steps: usize, n_paths: usize, seed: u64) -> Result<PathEnsemble> {
    if t <= 0.0 {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    if n_steps == 0 || n_paths == 0 {
        return Err(Error::InvalidParameter("need at least one step and one path".into()));
    }
    let rs = RootSystem::new(GroupId::Su2)?;
    // Frame normalization: a unit coordinate vector of the quaternion basis
    // has squared length 4 * |H_1|^2 = 8 in the invariant metric, so the
    // orthonormal frame scales increments by 1/sqrt(8). Guard it: a wrong
    // frame rescales time and silently breaks every comparison downstream.
    let basis_norm_sq = 4.0 * rs.torus_norm_sq(&[1.0]);
    assert!(
        (basis_norm_sq - 8.0).abs() < 1e-12,
        "SU(2) frame normalization drifted: {basis_norm_sq}"
    );
    let h = t / n_steps as f64;
    let step_scale = (h / basis_norm_sq).sqrt();
    let terminals: Vec<GroupElementSU2> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut g = GroupElementSU2::identity();
            for _ in 0..n_steps {
                let v = [
                    step_scale * rng.sample::<f64, _>(StandardNormal),
                    step_scale * rng.sample::<f64, _>(StandardNormal),
                    step_scale * rng.sample::<f64, _>(StandardNormal),
                ];
                g = g.mul(&GroupElementSU2::exp_pure(v));
            }
            g
        })
        .collect();
    Ok(PathEnsemble {
        n_paths,
        t_final: t,
        n_steps,
        terminals,
        fk_weight: (-rs.rho_norm_sq() * t / 2.0).exp(),
        rng_seed: seed,
        scheme_id: "geodesic-euler-left-v1",
    })
}

/// Terminal points of Brownian motion on `R^n`. The terminal law is exactly
/// `N(0, t I)`, so points are sampled directly; `n_steps` does not affect
/// the law and is accepted only for API symmetry with the group simulator.
pub fn simulate_bm_euclidean(
    n_dim: usize,
    t: f64,
    n_steps: usize,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if t <= 0.0 {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    if n_steps == 0 || n_paths == 0 || n_dim == 0 {
        return Err(Error::InvalidParameter("need positive dimension, steps, and paths".into()));
    }
    let scale = t.sqrt();
    Ok((0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            (0..n_dim).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
        })
        .collect())
}

/// Shifted-semigroup expectation of a class function: `fk_weight` times the
/// sample mean, with the matching standard error.
pub fn feynman_kac_expectation(
    ens: &PathEnsemble,
    f: impl Fn(&GroupElementSU2) -> f64,
) -> (f64, f64) {
    let (mean, se) = plain_expectation(ens, f);
    (ens.fk_weight * mean, ens.fk_weight * se)
}

/// Plain (unshifted) expectation of a class function over the ensemble.
pub fn plain_expectation(ens: &PathEnsemble, f: impl Fn(&GroupElementSU2) -> f64) -> (f64, f64) {
    let (mean, sd) = terminal_stats(ens, f);
    (mean, sd / (ens.n_paths as f64).sqrt())
}

fn terminal_stats(ens: &PathEnsemble, f: impl Fn(&GroupElementSU2) -> f64) -> (f64, f64) {
    let values: Vec<f64> = ens.terminals.iter().map(f).collect();
    mean_sd(&values)
}

/// Goodness-of-fit report for the class-angle histogram.
#[derive(Debug, Clone, Serialize)]
pub struct GofReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub settings: GofSettings,
}

/// Parameters the goodness-of-fit statistic was computed with.
#[derive(Debug, Clone, Serialize)]
pub struct GofSettings {
    pub n_samples: usize,
    pub n_bins_requested: usize,
    pub n_bins_used: usize,
    pub prediction_t: f64,
}

/// Pearson chi-square test of the ensemble's class angles against the
/// transition density predicted for time `t` (which need not equal the
/// simulation time — testing against a wrong prediction measures power).
///
/// The predicted cell probability is the integral of `q_t(theta) *
/// weyl_density(theta)` over each of `n_bins` uniform bins of `[0, 2 pi]`;
/// bins with expected count below five are merged left to right.
pub fn class_density_test(ens: &PathEnsemble, t: f64, n_bins: usize) -> Result<GofReport> {
    if n_bins < 10 {
        return Err(Error::InvalidParameter(format!("need at least 10 bins, got {n_bins}")));
    }
    if ens.n_paths < 10_000 {
        return Err(Error::InvalidParameter(format!(
            "need at least 1e4 paths for a stable histogram, got {}",
            ens.n_paths
        )));
    }
    let rs = RootSystem::new(GroupId::Su2)?;
    let bound = spectral_norm_bound(&rs, t, 1e-10)?;
    let f = wrap_fourier(&rs, &RadialSymbol::gaussian(t), bound)?;
    let factor = rho_shift_factor(&rs, t);
    let rule = gauss_legendre(8);
    let width = TWO_PI / n_bins as f64;
    let n = ens.n_paths as f64;

    let mut observed = vec![0.0f64; n_bins];
    for angle in ens.class_angles() {
        let idx = ((angle / width) as usize).min(n_bins - 1);
        observed[idx] += 1.0;
    }
    let expected: Vec<f64> = (0..n_bins)
        .map(|j| -> Result<f64> {
            let a = j as f64 * width;
            let mut acc = 0.0;
            for (node, wq) in rule.nodes.iter().zip(&rule.weights) {
                let theta = a + width * 0.5 * (node + 1.0);
                let q = factor * evaluate_central(&f, &[theta])?.value.re;
                acc += wq * q * weyl_density(&rs, &[theta]);
            }
            Ok(n * acc * width * 0.5)
        })
        .collect::<Result<_>>()?;

    // Merge adjacent cells until each carries expected count >= 5.
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs_acc, mut exp_acc) = (0.0, 0.0);
    for (o, e) in observed.iter().zip(&expected) {
        obs_acc += o;
        exp_acc += e;
        if exp_acc >= 5.0 {
            cells.push((obs_acc, exp_acc));
            obs_acc = 0.0;
            exp_acc = 0.0;
        }
    }
    if exp_acc > 0.0 || obs_acc > 0.0 {
        if let Some(last) = cells.last_mut() {
            last.0 += obs_acc;
            last.1 += exp_acc;
        } else {
            cells.push((obs_acc, exp_acc));
        }
    }
    if cells.len() < 2 {
        return Err(Error::InvalidParameter(
            "fewer than two usable histogram cells after merging".into(),
        ));
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len() - 1;
    let chi = ChiSquared::new(dof as f64)
        .map_err(|e| Error::InvalidParameter(format!("chi-square dof: {e}")))?;
    let p_value = chi.sf(statistic);
    Ok(GofReport {
        statistic,
        dof,
        p_value,
        settings: GofSettings {
            n_samples: ens.n_paths,
            n_bins_requested: n_bins,
            n_bins_used: cells.len(),
            prediction_t: t,
        },
    })
}

/// Write the ensemble as CSV: one row per path with the quaternion
/// components and the class angle.
pub fn write_ensemble_csv<W: std::io::Write>(ens: &PathEnsemble, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "path_index,w,x,y,z,class_angle")?;
    for (i, g) in ens.terminals.iter().enumerate() {
        writeln!(out, "{},{},{},{},{},{}", i, g.w, g.x, g.y, g.z, g.class_angle())?;
    }
    Ok(())
}
