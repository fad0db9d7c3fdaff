//! Root-system data for the special unitary family.
//!
//! Everything downstream (characters, heat kernels, wrapped laws) is driven
//! by the data assembled here, so the conventions are spelled out once:
//!
//! * **Weights** are written in the fundamental-weight basis with integer
//!   coordinates; dominance means all coordinates are non-negative. The
//!   half-sum of positive roots `rho` has coordinates `(1, ..., 1)`.
//! * **Metric.** The inner product on weight space is induced by the genuine
//!   Killing form, computed from the root data itself (restricted to a
//!   Cartan subalgebra the Killing form is the sum of squares of the roots).
//!   With this scaling `|rho|^2 = dim(G)/24` holds exactly.
//! * **Torus coordinates.** For `su(2)` the single coordinate is the class
//!   angle `theta`, i.e. `exp(H_theta) = diag(e^{i theta/2}, e^{-i theta/2})`,
//!   so the kernel of `exp` on the Cartan is `4*pi*Z`. For `su(n)`, `n >= 3`,
//!   coordinates are taken in the coroot basis and the kernel is
//!   `(2*pi*Z)^(n-1)`. Weight/torus pairing is `scale * <coords, coords>`
//!   with `scale = 1/2` in the angle convention and `1` otherwise.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};

/// Largest `n` for which `SU(n)` is built; character evaluation enumerates
/// the Weyl group `S_n`, so the cost grows like `n!`.
pub const MAX_SUN: u32 = 9;

/// Identifier of a supported compact group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupId {
    /// `SU(2)` in the class-angle convention.
    Su2,
    /// `SU(n)` for `n >= 3` in coroot coordinates.
    Sun(u32),
}

impl GroupId {
    /// Matrix size `n` of the defining representation.
    pub fn matrix_size(&self) -> u32 {
        match self {
            GroupId::Su2 => 2,
            GroupId::Sun(n) => *n,
        }
    }

    /// Canonical textual label (`su2`, `sun:3`, ...).
    pub fn label(&self) -> String {
        match self {
            GroupId::Su2 => "su2".to_string(),
            GroupId::Sun(n) => format!("sun:{n}"),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("su2") {
            return Ok(GroupId::Su2);
        }
        if let Some(num) = s.strip_prefix("sun:") {
            let n: u32 = num
                .parse()
                .map_err(|_| Error::UnsupportedGroup(s.to_string()))?;
            return match n {
                2 => Ok(GroupId::Su2),
                _ => Ok(GroupId::Sun(n)),
            };
        }
        Err(Error::UnsupportedGroup(s.to_string()))
    }
}

/// An integral weight in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    coords: Vec<i64>,
    is_dominant: bool,
}

impl Weight {
    /// Build a weight from fundamental-weight coordinates.
    pub fn new(coords: Vec<i64>) -> Self {
        let is_dominant = coords.iter().all(|&c| c >= 0);
        Weight { coords, is_dominant }
    }

    /// Coordinates in the fundamental-weight basis.
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Whether all coordinates are non-negative.
    pub fn is_dominant(&self) -> bool {
        self.is_dominant
    }
}

/// Signed permutations of the Weyl group `S_n`, precomputed once per group.
#[derive(Debug)]
pub(crate) struct WeylTable {
    /// Permutations of `0..n` with their signs.
    pub perms: Vec<(Vec<u8>, f64)>,
}

impl WeylTable {
    fn new(n: usize) -> Self {
        // Heap's algorithm; each swap flips the parity.
        let mut perms = Vec::new();
        let mut items: Vec<u8> = (0..n as u8).collect();
        let mut c = vec![0usize; n];
        let mut sign = 1.0;
        perms.push((items.clone(), sign));
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    items.swap(0, i);
                } else {
                    items.swap(c[i], i);
                }
                sign = -sign;
                perms.push((items.clone(), sign));
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        WeylTable { perms }
    }
}

#[derive(Debug, Default)]
struct Caches {
    weyl_quadrature_norm: std::sync::OnceLock<f64>,
}

/// Root data, metric, and lattice information for one compact group.
///
/// Cheap to clone: the heavy precomputed tables are shared.
#[derive(Debug, Clone)]
pub struct RootSystem {
    group: GroupId,
    rank: usize,
    dim_g: usize,
    /// Positive roots in the fundamental-weight basis (integer coordinates).
    positive_roots: Vec<Vec<i64>>,
    /// Inner product on weight space in the fundamental-weight basis.
    gram: DMatrix<f64>,
    rho: Weight,
    /// Generators of `ker(exp)` restricted to the Cartan, in torus coordinates.
    lattice_generators: Vec<Vec<f64>>,
    /// Torus-coordinate to coroot-coordinate scale (1/2 for the su(2) angle).
    coord_scale: f64,
    /// Metric on the Cartan in torus coordinates.
    torus_metric: DMatrix<f64>,
    rho_norm_sq: f64,
    measure_normalization: f64,
    weyl: Arc<WeylTable>,
    caches: Arc<Caches>,
}

impl RootSystem {
    /// Assemble the root system, metric, and lattice data for `group`.
    ///
    /// Positive roots of `su(n)` are the sums `alpha_j + ... + alpha_{k-1}`
    /// of consecutive simple roots; their fundamental-weight coordinates are
    /// columns of the Cartan matrix summed over the block. The Gram matrix
    /// on weight space is obtained by inverting the Killing metric of the
    /// coroot basis, which itself is assembled from the roots.
    pub fn new(group: GroupId) -> Result<Self> {
        let n = group.matrix_size();
        if n < 2 || n > MAX_SUN {
            return Err(Error::UnsupportedGroup(format!(
                "su(n) supported for 2 <= n <= {MAX_SUN}, got n = {n}"
            )));
        }
        let group = if n == 2 { GroupId::Su2 } else { group };
        let n = n as usize;
        let rank = n - 1;

        // Cartan matrix of type A_{n-1}.
        let cartan = |i: usize, j: usize| -> i64 {
            if i == j {
                2
            } else if i.abs_diff(j) == 1 {
                -1
            } else {
                0
            }
        };

        // Positive roots: one per pair j < k, as blocks of simple roots.
        let mut positive_roots = Vec::new();
        for j in 0..rank {
            for k in j..rank {
                // alpha_j + ... + alpha_k in fundamental-weight coordinates.
                let mut coords = vec![0i64; rank];
                for (i, c) in coords.iter_mut().enumerate() {
                    for m in j..=k {
                        *c += cartan(i, m);
                    }
                }
                positive_roots.push(coords);
            }
        }
        let num_pos = positive_roots.len();
        let dim_g = rank + 2 * num_pos;

        // Killing metric of the coroot basis: sum over all roots of the
        // squared root values; root values on coroots are exactly the
        // fundamental-weight coordinates.
        let mut coroot_metric = DMatrix::zeros(rank, rank);
        for a in &positive_roots {
            for i in 0..rank {
                for j in 0..rank {
                    coroot_metric[(i, j)] += 2.0 * (a[i] * a[j]) as f64;
                }
            }
        }
        let gram = coroot_metric
            .clone()
            .try_inverse()
            .expect("coroot metric is positive definite");

        let rho = Weight::new(vec![1i64; rank]);
        let rho_norm_sq = quadratic_form(&gram, &vec![1.0; rank]);

        // Torus coordinates and the kernel of exp.
        let two_pi = 2.0 * std::f64::consts::PI;
        let (coord_scale, lattice_generators) = if n == 2 {
            (0.5, vec![vec![2.0 * two_pi]])
        } else {
            let gens = (0..rank)
                .map(|i| {
                    let mut g = vec![0.0; rank];
                    g[i] = two_pi;
                    g
                })
                .collect();
            (1.0, gens)
        };
        let torus_metric = &coroot_metric * coord_scale * coord_scale;

        // Ratio between the wrapped Lebesgue normalization on the algebra and
        // unit-mass Haar on the group: (2*pi)^k * covol(lattice) / prod <rho, alpha>.
        let mut lat_gram = DMatrix::zeros(rank, rank);
        for i in 0..rank {
            for j in 0..rank {
                lat_gram[(i, j)] =
                    pair_form(&torus_metric, &lattice_generators[i], &lattice_generators[j]);
            }
        }
        let covol = lat_gram.determinant().sqrt();
        let rho_f: Vec<f64> = vec![1.0; rank];
        let mut prod_rho_alpha = 1.0;
        for a in &positive_roots {
            let af: Vec<f64> = a.iter().map(|&c| c as f64).collect();
            prod_rho_alpha *= pair_form(&gram, &rho_f, &af);
        }
        let measure_normalization = two_pi.powi(num_pos as i32) * covol / prod_rho_alpha;

        Ok(RootSystem {
            group,
            rank,
            dim_g,
            positive_roots,
            gram,
            rho,
            lattice_generators,
            coord_scale,
            torus_metric,
            rho_norm_sq,
            measure_normalization,
            weyl: Arc::new(WeylTable::new(n)),
            caches: Arc::new(Caches::default()),
        })
    }

    pub fn group_id(&self) -> GroupId {
        self.group
    }

    /// Rank `l` of the group (dimension of the Cartan).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension `n = l + 2k` of the group.
    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    /// Number of positive roots `k`.
    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Positive roots in fundamental-weight coordinates.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Half-sum of the positive roots; coordinates `(1, ..., 1)`.
    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    /// `|rho|^2` in the Killing metric; equals `dim(G)/24`.
    pub fn rho_norm_sq(&self) -> f64 {
        self.rho_norm_sq
    }

    /// Order of the Weyl group (`n!`).
    pub fn weyl_order(&self) -> f64 {
        self.weyl.perms.len() as f64
    }

    /// Generators of `ker(exp)` on the Cartan, in torus coordinates.
    pub fn unit_lattice(&self) -> &[Vec<f64>] {
        &self.lattice_generators
    }

    /// Constant relating the lattice-wrapped Lebesgue picture on the algebra
    /// to unit-mass Haar on the group. Equals the Riemannian volume of the
    /// group in the Killing metric (`32*sqrt(2)*pi^2` for `SU(2)`).
    pub fn measure_normalization(&self) -> f64 {
        self.measure_normalization
    }

    /// Inner product of two weight-space vectors given in fundamental-weight
    /// coordinates.
    pub fn weight_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        pair_form(&self.gram, a, b)
    }

    /// Coordinates of `lambda + rho`.
    pub fn shifted(&self, lambda: &Weight) -> Vec<i64> {
        lambda.coords().iter().map(|&c| c + 1).collect()
    }

    /// `|lambda + rho|^2` in the Killing metric.
    pub fn shifted_norm_sq(&self, lambda: &Weight) -> f64 {
        let mu: Vec<f64> = lambda.coords().iter().map(|&c| (c + 1) as f64).collect();
        quadratic_form(&self.gram, &mu)
    }

    /// Dimension of the irreducible representation with highest weight
    /// `lambda`, by the product-over-positive-roots formula.
    pub fn weyl_dimension(&self, lambda: &Weight) -> Result<u64> {
        self.check_dominant(lambda)?;
        let mu: Vec<f64> = lambda.coords().iter().map(|&c| (c + 1) as f64).collect();
        let rho_f = vec![1.0; self.rank];
        let mut d = 1.0;
        for a in &self.positive_roots {
            let af: Vec<f64> = a.iter().map(|&c| c as f64).collect();
            d *= pair_form(&self.gram, &mu, &af) / pair_form(&self.gram, &rho_f, &af);
        }
        let rounded = d.round();
        debug_assert!(
            (d - rounded).abs() < 1e-6 * rounded.max(1.0),
            "dimension formula should produce an integer, got {d}"
        );
        Ok(rounded as u64)
    }

    /// `(|lambda + rho|^2, c(lambda))` where `c` is the Casimir eigenvalue
    /// `|lambda + rho|^2 - |rho|^2`.
    pub fn casimir_norms(&self, lambda: &Weight) -> Result<(f64, f64)> {
        self.check_dominant(lambda)?;
        let shifted = self.shifted_norm_sq(lambda);
        Ok((shifted, shifted - self.rho_norm_sq))
    }

    /// All dominant integral weights with `|lambda + rho|^2 <= norm_bound`,
    /// sorted by that norm with a lexicographic tie-break.
    pub fn enumerate_dominant_weights(&self, norm_bound: f64) -> Vec<Weight> {
        // |mu|^2 <= B confines each coordinate to |mu_i| <= sqrt(B * (gram^-1)_ii),
        // and gram^-1 is the coroot metric.
        let mut coroot_metric = DMatrix::<f64>::zeros(self.rank, self.rank);
        for a in &self.positive_roots {
            for i in 0..self.rank {
                for j in 0..self.rank {
                    coroot_metric[(i, j)] += 2.0 * (a[i] * a[j]) as f64;
                }
            }
        }
        let mut out: Vec<(f64, Vec<i64>)> = Vec::new();
        let caps: Vec<i64> = (0..self.rank)
            .map(|i| (norm_bound.max(0.0) * coroot_metric[(i, i)]).sqrt().floor() as i64)
            .collect();
        let mut coords = vec![0i64; self.rank];
        self.enumerate_rec(0, &caps, &mut coords, norm_bound, &mut out);
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        out.into_iter().map(|(_, c)| Weight::new(c)).collect()
    }

    fn enumerate_rec(
        &self,
        idx: usize,
        caps: &[i64],
        coords: &mut Vec<i64>,
        bound: f64,
        out: &mut Vec<(f64, Vec<i64>)>,
    ) {
        if idx == self.rank {
            let w = Weight::new(coords.clone());
            let norm = self.shifted_norm_sq(&w);
            if norm <= bound {
                out.push((norm, coords.clone()));
            }
            return;
        }
        // Coordinates of lambda + rho are >= 1, so lambda_i ranges 0..cap-1.
        for c in 0..caps[idx].max(0) {
            coords[idx] = c;
            self.enumerate_rec(idx + 1, caps, coords, bound, out);
        }
        coords[idx] = 0;
    }

    fn check_dominant(&self, lambda: &Weight) -> Result<()> {
        if lambda.coords().len() != self.rank {
            return Err(Error::InvalidParameter(format!(
                "weight has {} coordinates, expected {}",
                lambda.coords().len(),
                self.rank
            )));
        }
        if !lambda.is_dominant() {
            return Err(Error::NonDominantWeight(lambda.coords().to_vec()));
        }
        Ok(())
    }

    // ----- torus-side helpers used by the character/kernel machinery -----

    /// Value of the `idx`-th positive root on a torus point.
    pub(crate) fn root_value(&self, idx: usize, h: &[f64]) -> f64 {
        let a = &self.positive_roots[idx];
        self.coord_scale * a.iter().zip(h).map(|(&c, &x)| c as f64 * x).sum::<f64>()
    }

    /// Pairing `lambda(H)` between integer weight coordinates and a torus point.
    pub(crate) fn weight_pairing(&self, coords: &[i64], h: &[f64]) -> f64 {
        self.coord_scale * coords.iter().zip(h).map(|(&c, &x)| c as f64 * x).sum::<f64>()
    }

    /// Squared Killing norm of a torus point.
    pub(crate) fn torus_norm_sq(&self, h: &[f64]) -> f64 {
        quadratic_form(&self.torus_metric, h)
    }

    /// Weight coordinates mapped to the `n` coordinates of the standard
    /// (traceless-diagonal) picture; used for Weyl-group sums.
    pub(crate) fn weight_e_coords(&self, coords: &[i64]) -> Vec<f64> {
        let n = self.rank + 1;
        let total: i64 = coords.iter().enumerate().map(|(i, &c)| (i as i64 + 1) * c).sum();
        let shift = total as f64 / n as f64;
        let mut e = vec![0.0; n];
        let mut suffix = 0i64;
        for j in (0..n).rev() {
            if j < self.rank {
                suffix += coords[j];
            }
            e[j] = suffix as f64 - shift;
        }
        e
    }

    /// Torus point mapped to the same standard picture (so that the pairing
    /// is the plain dot product with `weight_e_coords`).
    pub(crate) fn torus_x_coords(&self, h: &[f64]) -> Vec<f64> {
        let n = self.rank + 1;
        let mut x = vec![0.0; n];
        let p: Vec<f64> = h.iter().map(|&v| v * self.coord_scale).collect();
        for j in 0..n {
            let hi = if j < self.rank { p[j] } else { 0.0 };
            let lo = if j > 0 { p[j - 1] } else { 0.0 };
            x[j] = hi - lo;
        }
        x
    }

    pub(crate) fn weyl(&self) -> &WeylTable {
        &self.weyl
    }

    pub(crate) fn weyl_quadrature_norm_cache(&self) -> &std::sync::OnceLock<f64> {
        &self.caches.weyl_quadrature_norm
    }
}

impl Serialize for RootSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RootSystem", 7)?;
        s.serialize_field("group_id", &self.group.label())?;
        s.serialize_field("rank", &self.rank)?;
        s.serialize_field("dim_g", &self.dim_g)?;
        s.serialize_field("positive_roots", &self.positive_roots)?;
        let gram_rows: Vec<Vec<f64>> = (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.gram[(i, j)]).collect())
            .collect();
        s.serialize_field("gram", &gram_rows)?;
        s.serialize_field("rho", &self.rho.coords())?;
        s.serialize_field("unit_lattice_generators", &self.lattice_generators)?;
        s.end()
    }
}

fn quadratic_form(m: &DMatrix<f64>, v: &[f64]) -> f64 {
    pair_form(m, v, v)
}

fn pair_form(m: &DMatrix<f64>, a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        for j in 0..b.len() {
            acc += a[i] * m[(i, j)] * b[j];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn su(n: u32) -> RootSystem {
        RootSystem::new(if n == 2 { GroupId::Su2 } else { GroupId::Sun(n) }).unwrap()
    }

    /// Independent Killing-form oracle for su(2): build the structure
    /// constants of the basis `E_a` with `[E_a, E_b] = eps_{abc} E_c`,
    /// form the adjoint matrices, and read off `B(X, Y) = tr(ad X ad Y)`.
    /// The Cartan direction `H_1 = diag(i/2, -i/2)` is `-E_3`.
    #[test]
    fn su2_metric_matches_adjoint_trace_oracle() {
        let eps = |a: usize, b: usize, c: usize| -> f64 {
            match (a, b, c) {
                (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                _ => 0.0,
            }
        };
        // ad(E_a)[c][b] = coefficient of E_c in [E_a, E_b].
        let ad = |a: usize| -> [[f64; 3]; 3] {
            let mut m = [[0.0; 3]; 3];
            for b in 0..3 {
                for c in 0..3 {
                    m[c][b] = eps(a, b, c);
                }
            }
            m
        };
        let ad3 = ad(2);
        // B(H_1, H_1) = tr(ad(-E_3)^2) = tr(ad(E_3)^2).
        let mut tr = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                tr += ad3[i][j] * ad3[j][i];
            }
        }
        assert_relative_eq!(tr, -2.0, max_relative = 1e-15);
        // Killing norm of the angle-basis vector H_1 is -B = 2.
        let rs = su(2);
        assert_relative_eq!(rs.torus_norm_sq(&[1.0]), -tr, max_relative = 1e-14);
        // Dual norm of the root (alpha(H_theta) = theta): solving
        // <H_a, H> = alpha(H) gives H_a = H_{1/2} and <alpha, alpha> = 1/2,
        // so |rho|^2 = 1/8 with rho = alpha/2.
        let h_alpha = 1.0 / 2.0;
        let alpha_norm_sq = h_alpha; // alpha(H_{1/2}) = 1/2
        assert_relative_eq!(rs.rho_norm_sq(), alpha_norm_sq / 4.0, max_relative = 1e-14);
        assert_eq!(rs.rho_norm_sq(), 0.125);
    }

    #[test]
    fn strange_formula_holds_exactly() {
        for n in 2..=4 {
            let rs = su(n);
            let expected = rs.dim_g() as f64 / 24.0;
            assert!(
                (rs.rho_norm_sq() - expected).abs() < 1e-12,
                "su({n}): |rho|^2 = {} vs dim/24 = {expected}",
                rs.rho_norm_sq()
            );
        }
    }

    #[test]
    fn dimension_counts_match() {
        for n in 2..=6 {
            let rs = su(n);
            let l = (n - 1) as usize;
            let k = (n * (n - 1) / 2) as usize;
            assert_eq!(rs.rank(), l);
            assert_eq!(rs.num_positive_roots(), k);
            assert_eq!(rs.dim_g(), l + 2 * k);
            assert_eq!(rs.dim_g(), (n * n - 1) as usize);
        }
    }

    #[test]
    fn su3_rho_is_sum_of_simple_roots() {
        let rs = su(3);
        // Simple roots are the first and second positive roots by construction;
        // their coordinate sum must equal rho = (1, 1).
        let simple: Vec<&Vec<i64>> = rs
            .positive_roots()
            .iter()
            .filter(|a| a.iter().map(|&c| c.abs()).sum::<i64>() == 3)
            .collect();
        assert_eq!(simple.len(), 2);
        let sum: Vec<i64> = (0..2).map(|i| simple[0][i] + simple[1][i]).collect();
        assert_eq!(sum, rs.rho().coords());
    }

    #[test]
    fn weyl_dimension_su2_is_m_plus_one() {
        let rs = su(2);
        for m in 0..=50 {
            let d = rs.weyl_dimension(&Weight::new(vec![m])).unwrap();
            assert_eq!(d, (m + 1) as u64);
        }
    }

    #[test]
    fn weyl_dimension_known_values() {
        let rs3 = su(3);
        assert_eq!(rs3.weyl_dimension(&Weight::new(vec![0, 0])).unwrap(), 1);
        assert_eq!(rs3.weyl_dimension(&Weight::new(vec![1, 0])).unwrap(), 3);
        assert_eq!(rs3.weyl_dimension(&Weight::new(vec![1, 1])).unwrap(), 8);
        assert_eq!(rs3.weyl_dimension(&Weight::new(vec![3, 0])).unwrap(), 10);
        let rs4 = su(4);
        assert_eq!(rs4.weyl_dimension(&Weight::new(vec![1, 0, 0])).unwrap(), 4);
        assert_eq!(rs4.weyl_dimension(&Weight::new(vec![0, 1, 0])).unwrap(), 6);
        assert_eq!(rs4.weyl_dimension(&Weight::new(vec![1, 0, 1])).unwrap(), 15);
    }

    #[test]
    fn weyl_dimension_rejects_non_dominant() {
        let rs = su(3);
        assert!(rs.weyl_dimension(&Weight::new(vec![-1, 2])).is_err());
    }

    #[test]
    fn casimir_values_su2() {
        let rs = su(2);
        let (norm0, c0) = rs.casimir_norms(&Weight::new(vec![0])).unwrap();
        assert_relative_eq!(norm0, 0.125, max_relative = 1e-15);
        assert_eq!(c0, 0.0);
        // c(lambda_m) = m(m+2)/8, strictly increasing.
        let mut prev = -1.0;
        for m in 0..=10i64 {
            let (norm, c) = rs.casimir_norms(&Weight::new(vec![m])).unwrap();
            assert_relative_eq!(norm, ((m + 1) * (m + 1)) as f64 / 8.0, max_relative = 1e-14);
            assert_relative_eq!(c, (m * (m + 2)) as f64 / 8.0, max_relative = 1e-13);
            assert!(c > prev);
            prev = c;
        }
    }

    /// Exhaustive grid oracle: scan a coordinate box much larger than the
    /// bound requires and compare with the enumerator.
    fn enumerate_oracle(rs: &RootSystem, bound: f64, cap: i64) -> Vec<Vec<i64>> {
        let mut found = Vec::new();
        let mut coords = vec![0i64; rs.rank()];
        fn rec(
            rs: &RootSystem,
            idx: usize,
            cap: i64,
            coords: &mut Vec<i64>,
            bound: f64,
            found: &mut Vec<(f64, Vec<i64>)>,
        ) {
            if idx == rs.rank() {
                let w = Weight::new(coords.clone());
                let norm = rs.shifted_norm_sq(&w);
                if norm <= bound {
                    found.push((norm, coords.clone()));
                }
                return;
            }
            for c in 0..=cap {
                coords[idx] = c;
                rec(rs, idx + 1, cap, coords, bound, found);
            }
            coords[idx] = 0;
        }
        let mut tagged = Vec::new();
        rec(rs, 0, cap, &mut coords, bound, &mut tagged);
        tagged.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        found.extend(tagged.into_iter().map(|(_, c)| c));
        found
    }

    #[test]
    fn enumeration_matches_grid_oracle() {
        for n in [2u32, 3] {
            let rs = su(n);
            let bound = 100.0 * rs.rho_norm_sq();
            let got: Vec<Vec<i64>> = rs
                .enumerate_dominant_weights(bound)
                .into_iter()
                .map(|w| w.coords().to_vec())
                .collect();
            let want = enumerate_oracle(&rs, bound, 40);
            assert_eq!(got, want, "su({n}) enumeration mismatch");
            assert!(!got.is_empty());
        }
    }

    #[test]
    fn enumeration_bound_edge_cases() {
        let rs = su(2);
        // Just above |rho|^2 picks out only lambda = 0.
        let only_zero = rs.enumerate_dominant_weights(rs.rho_norm_sq() * 1.001);
        assert_eq!(only_zero.len(), 1);
        assert_eq!(only_zero[0].coords(), &[0]);
        // Below |rho|^2 there is nothing.
        assert!(rs.enumerate_dominant_weights(rs.rho_norm_sq() * 0.999).is_empty());
        // For su(2), |lambda_j + rho|^2 = (j+1)^2 |rho|^2, so the bound
        // (2m+1)^2 |rho|^2 admits j = 0..2m: 2m+1 weights.
        for m in 1..=5i64 {
            let bound = rs.rho_norm_sq() * ((2 * m + 1) * (2 * m + 1)) as f64 + 1e-9;
            let ws = rs.enumerate_dominant_weights(bound);
            assert_eq!(ws.len(), (2 * m + 1) as usize);
        }
    }

    #[test]
    fn enumeration_sorted_by_norm_then_lex() {
        let rs = su(3);
        let ws = rs.enumerate_dominant_weights(40.0 * rs.rho_norm_sq());
        let mut prev_norm = -1.0;
        let mut prev_coords: Vec<i64> = Vec::new();
        for w in &ws {
            let norm = rs.shifted_norm_sq(w);
            assert!(norm >= prev_norm);
            if norm == prev_norm {
                assert!(w.coords().to_vec() > prev_coords);
            }
            prev_norm = norm;
            prev_coords = w.coords().to_vec();
        }
    }

    #[test]
    fn unit_lattice_su2_is_4pi() {
        let rs = su(2);
        let gens = rs.unit_lattice();
        assert_eq!(gens.len(), 1);
        assert_relative_eq!(gens[0][0], 4.0 * std::f64::consts::PI, max_relative = 1e-15);
        // Matrix-exponential oracle: exp(H_theta) = diag(e^{i theta/2}, e^{-i theta/2})
        // is the identity iff theta/2 is a multiple of 2*pi.
        let theta = gens[0][0];
        let (re, im) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        assert_relative_eq!(re, 1.0, epsilon = 1e-12);
        assert!(im.abs() < 1e-12);
    }

    #[test]
    fn sun2_is_canonicalized_to_su2() {
        let a = RootSystem::new(GroupId::Sun(2)).unwrap();
        assert_eq!(a.group_id(), GroupId::Su2);
        assert_relative_eq!(a.unit_lattice()[0][0], 4.0 * std::f64::consts::PI, max_relative = 1e-15);
    }

    #[test]
    fn roots_pair_integrally_with_lattice() {
        // alpha(gamma) must lie in 2*pi*Z for every root and generator.
        for n in 2..=5 {
            let rs = su(n);
            for gen in rs.unit_lattice() {
                for idx in 0..rs.num_positive_roots() {
                    let v = rs.root_value(idx, gen) / (2.0 * std::f64::consts::PI);
                    assert!((v - v.round()).abs() < 1e-9, "su({n}): got {v}");
                }
            }
        }
    }

    #[test]
    fn gram_is_positive_definite() {
        for n in 2..=6 {
            let rs = su(n);
            let ws = rs.enumerate_dominant_weights(30.0 * rs.rho_norm_sq());
            for w in &ws {
                assert!(rs.shifted_norm_sq(w) > 0.0);
            }
        }
    }

    #[test]
    fn measure_normalization_su2_matches_sphere_volume() {
        // Independent route: SU(2) with the Killing metric is the 3-sphere of
        // radius 2*sqrt(2) (the closed geodesic through the identity has
        // length 4*pi*sqrt(2)), whose volume is 2*pi^2*r^3.
        let rs = su(2);
        let r: f64 = 2.0 * 2.0f64.sqrt();
        let vol = 2.0 * std::f64::consts::PI.powi(2) * r.powi(3);
        assert_relative_eq!(rs.measure_normalization(), vol, max_relative = 1e-12);
    }

    #[test]
    fn group_id_parsing() {
        assert_eq!("su2".parse::<GroupId>().unwrap(), GroupId::Su2);
        assert_eq!("sun:5".parse::<GroupId>().unwrap(), GroupId::Sun(5));
        assert_eq!("sun:2".parse::<GroupId>().unwrap(), GroupId::Su2);
        assert!("so3".parse::<GroupId>().is_err());
        assert!("sun:1".parse::<GroupId>().is_err() || RootSystem::new("sun:1".parse().unwrap()).is_err());
        assert!(RootSystem::new(GroupId::Sun(40)).is_err());
    }

    #[test]
    fn serialization_has_expected_fields() {
        let rs = su(2);
        let v = serde_json::to_value(&rs).unwrap();
        assert_eq!(v["group_id"], "su2");
        assert_eq!(v["rank"], 1);
        assert_eq!(v["dim_g"], 3);
        assert_eq!(v["rho"][0], 1);
        assert!((v["gram"][0][0].as_f64().unwrap() - 0.125).abs() < 1e-15);
        assert!(v["unit_lattice_generators"][0][0].as_f64().unwrap() > 12.56);
        assert!(v["positive_roots"].as_array().is_some());
    }
}
