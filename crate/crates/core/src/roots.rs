//! Zero sets of polynomials as multisets.
//!
//! Roots are refined simultaneously with the Aberth-Ehrlich iteration and
//! then grouped into clusters; a cluster of size `m` is reported as one
//! zero of multiplicity `m`. Exact zero roots (vanishing low coefficients)
//! are split off before iterating, and a polynomial that is numerically a
//! pure power `c (z - w)^d` is recognised directly, since the iteration
//! only reaches such roots to about `eps^(1/d)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

use crate::poly::{complex_pair, Polynomial};

/// Relative coefficient distance under which `p` is treated as an exact
/// power of a linear factor.
pub const PERFECT_POWER_TOL: f64 = 1e-13;

/// Cluster radius suited to inputs with simple roots.
pub const SIMPLE_CLUSTER_RADIUS: f64 = 1e-6;
/// Cluster radius suited to inputs where multiplicities are expected.
pub const MULTIPLE_CLUSTER_RADIUS: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("polynomial has degree < 1 and no finite zero set to refine")]
    ConstantPolynomial,
    #[error("root refinement did not converge after {iterations} iterations (best normalized residual {best_residual:e})")]
    NonConvergence { iterations: usize, best_residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    pub max_iter: usize,
    /// Residual tolerance relative to `scale * max(1, |r|)^deg`.
    pub residual_tol: f64,
    pub cluster_radius: f64,
    pub seed: u64,
    /// Relative coefficient distance under which the input counts as a pure
    /// power `c (z - w)^d`. Raise it when the coefficients carry more than
    /// rounding-level error (e.g. after cancellation in a linear combination).
    #[serde(default = "default_power_tol")]
    pub power_tol: f64,
}

fn default_power_tol() -> f64 {
    PERFECT_POWER_TOL
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            max_iter: 200,
            residual_tol: 1e-12,
            cluster_radius: SIMPLE_CLUSTER_RADIUS,
            seed: 0,
            power_tol: PERFECT_POWER_TOL,
        }
    }
}

impl RootConfig {
    pub fn with_cluster_radius(self, cluster_radius: f64) -> Self {
        Self {
            cluster_radius,
            ..self
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Widens the pure-power tolerance to cover a known relative
    /// coefficient error; never narrows it below the default.
    pub fn with_coefficient_noise(self, noise: f64) -> Self {
        Self {
            power_tol: self.power_tol.max(noise),
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroPoint {
    #[serde(with = "complex_pair")]
    pub location: Complex64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ZeroSet {
    pub points: Vec<ZeroPoint>,
    pub cluster_radius: f64,
    pub residual_bound: f64,
}

impl ZeroSet {
    /// The zero set of a nonzero constant.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_points(points: Vec<ZeroPoint>) -> Self {
        Self {
            points,
            ..Self::default()
        }
    }

    pub fn centers(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.location).collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Every root repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.points
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.location, p.multiplicity))
            .collect()
    }
}

pub fn find_roots(p: &Polynomial, config: &RootConfig) -> Result<ZeroSet, RootError> {
    let p = p.trimmed();
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(RootError::ConstantPolynomial),
    };
    let coeffs = p.coeffs();
    let zero_roots = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = Polynomial::new(coeffs[zero_roots..].to_vec());
    let reduced_degree = degree - zero_roots;

    let mut weighted: Vec<(Complex64, usize)> = Vec::with_capacity(reduced_degree + 1);
    if zero_roots > 0 {
        weighted.push((Complex64::new(0.0, 0.0), zero_roots));
    }
    if reduced_degree >= 1 {
        match pure_power_root(&reduced, config.power_tol) {
            Some(w) => weighted.push((w, reduced_degree)),
            None => {
                let approx = aberth(&reduced, config);
                weighted.extend(approx.into_iter().map(|z| (z, 1)));
            }
        }
    }

    let scale = p.scale();
    let residual_bound = weighted
        .iter()
        .map(|&(z, _)| normalized_residual(&p, z, scale, degree))
        .fold(0.0, f64::max);
    if residual_bound.is_nan() || residual_bound > config.residual_tol {
        return Err(RootError::NonConvergence {
            iterations: config.max_iter,
            best_residual: residual_bound,
        });
    }

    let mut points = cluster(weighted, config.cluster_radius);
    refine_multiple(&p, &mut points, config.cluster_radius);
    points.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
    Ok(ZeroSet {
        points,
        cluster_radius: config.cluster_radius,
        residual_bound,
    })
}

/// Number of distinct zeros; 0 for constants and the zero polynomial.
pub fn distinct_zero_count(p: &Polynomial, config: &RootConfig) -> Result<usize, RootError> {
    if p.is_constant() {
        return Ok(0);
    }
    find_roots(p, config).map(|zs| zs.points.len())
}

fn normalized_residual(p: &Polynomial, z: Complex64, scale: f64, degree: usize) -> f64 {
    let denom = scale * z.norm().max(1.0).powi(degree as i32);
    p.evaluate(z).norm() / denom
}

/// If `p` equals `lead * (z - w)^d` to within `tol` (relative), returns
/// `w`. The centroid of the roots is read off the top two coefficients.
fn pure_power_root(p: &Polynomial, tol: f64) -> Option<Complex64> {
    let d = p.degree()?;
    if d < 2 {
        return (d == 1).then(|| -p.coeff(0) / p.coeff(1));
    }
    let lead = p.coeff(d);
    let w = -p.coeff(d - 1) / (lead * d as f64);
    let candidate = Polynomial::from_roots(&vec![w; d], lead).ok()?;
    (p.relative_distance(&candidate) <= tol).then_some(w)
}

fn aberth(p: &Polynomial, config: &RootConfig) -> Vec<Complex64> {
    let degree = p.degree().expect("nonconstant");
    let lead = p.coeff(degree);
    let bound = 1.0
        + (0..degree)
            .map(|j| (p.coeff(j) / lead).norm())
            .fold(0.0, f64::max);
    let deriv = p.derivative(1);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let offset: f64 = rng.random::<f64>() * TAU;
    let mut z: Vec<Complex64> = (0..degree)
        .map(|i| {
            let jitter: f64 = rng.random::<f64>() - 0.5;
            let theta = offset + TAU * (i as f64 + 0.5 * jitter) / degree as f64;
            Complex64::from_polar(bound, theta)
        })
        .collect();
    if degree == 1 {
        return vec![-p.coeff(0) / lead];
    }

    let rounding = 2.0 * (degree + 1) as f64 * f64::EPSILON;
    let mut frozen = vec![false; degree];
    for _ in 0..config.max_iter {
        let mut active = false;
        for i in 0..degree {
            if frozen[i] {
                continue;
            }
            let (val, bound) = p.evaluate_with_bound(z[i]);
            if val.norm() <= rounding * bound {
                frozen[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = deriv.evaluate(z[i]) - val * repulsion;
            let step = if denom.norm() == 0.0 || !denom.is_finite() {
                // stuck on a critical point; nudge off it
                Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                    * (1e-8 * z[i].norm().max(1.0))
            } else {
                val / denom
            };
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= f64::EPSILON * z[i].norm() {
                frozen[i] = true;
            } else {
                active = true;
            }
        }
        if !active {
            break;
        }
    }
    z
}

/// An `m`-fold zero is a simple zero of `p^(m-1)`, so Newton on that
/// derivative recovers it to near working precision, where the cluster mean
/// is only good to about `eps^(1/m)`. A refinement that leaves the cluster
/// radius is discarded.
fn refine_multiple(p: &Polynomial, points: &mut [ZeroPoint], radius: f64) {
    for point in points.iter_mut().filter(|pt| pt.multiplicity >= 2) {
        let m = point.multiplicity;
        let q = p.derivative(m - 1);
        let dq = p.derivative(m);
        let start = point.location;
        let mut z = start;
        for _ in 0..8 {
            let step = q.evaluate(z) / dq.evaluate(z);
            if !step.is_finite() {
                break;
            }
            z -= step;
            if step.norm() <= f64::EPSILON * z.norm().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        if z.is_finite() && (z - start).norm() <= radius {
            point.location = z;
        }
    }
}

/// Single-linkage grouping by `radius`, then merging of centers until all
/// are pairwise farther apart than `radius`. Output is sorted by
/// (re, im) for a deterministic order.
fn cluster(points: Vec<(Complex64, usize)>, radius: f64) -> Vec<ZeroPoint> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i].0 - points[j].0).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push((Complex64::new(0.0, 0.0), 0));
        }
        let g = &mut groups[slot[root]];
        g.0 += points[i].0 * points[i].1 as f64;
        g.1 += points[i].1;
    }
    let mut centers: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|(sum, m)| (sum / m as f64, m))
        .collect();

    loop {
        let close = (0..centers.len()).find_map(|i| {
            ((i + 1)..centers.len())
                .find(|&j| (centers[i].0 - centers[j].0).norm() <= radius)
                .map(|j| (i, j))
        });
        let Some((i, j)) = close else { break };
        let (zj, mj) = centers.remove(j);
        let (zi, mi) = centers[i];
        let m = mi + mj;
        centers[i] = ((zi * mi as f64 + zj * mj as f64) / m as f64, m);
    }

    centers.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    centers
        .into_iter()
        .map(|(location, multiplicity)| ZeroPoint {
            location,
            multiplicity,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic() {
        let zs = find_roots(&Polynomial::from_real(&[-1.0, 0.0, 1.0]), &RootConfig::default()).unwrap();
        assert_eq!(zs.points.len(), 2);
        assert!((zs.points[0].location - c(-1.0, 0.0)).norm() < 1e-10);
        assert!((zs.points[1].location - c(1.0, 0.0)).norm() < 1e-10);
        assert!(zs.points.iter().all(|p| p.multiplicity == 1));
    }

    #[test]
    fn triple_root_clusters() {
        let w = c(1.0, 1.0);
        let p = Polynomial::from_roots(&[w, w, w], c(1.0, 0.0)).unwrap();
        let cfg = RootConfig::default().with_cluster_radius(1e-4);
        let zs = find_roots(&p, &cfg).unwrap();
        assert_eq!(zs.points.len(), 1);
        assert_eq!(zs.points[0].multiplicity, 3);
        assert!((zs.points[0].location - w).norm() < 1e-4);
    }

    #[test]
    fn triple_root_clusters_without_power_shortcut() {
        // (z - 1)^3 (z + 2): not a pure power, so Aberth has to find the
        // triple root and clustering has to merge it.
        let one = c(1.0, 0.0);
        let p = Polynomial::from_roots(&[one, one, one, c(-2.0, 0.0)], one).unwrap();
        let cfg = RootConfig::default().with_cluster_radius(MULTIPLE_CLUSTER_RADIUS);
        let zs = find_roots(&p, &cfg).unwrap();
        assert_eq!(zs.points.len(), 2);
        let triple = zs.points.iter().find(|p| p.multiplicity == 3).unwrap();
        assert!((triple.location - one).norm() < 1e-12);
    }

    #[test]
    fn wilkinson_ten() {
        let roots: Vec<_> = (1..=10).map(|j| c(j as f64, 0.0)).collect();
        let p = Polynomial::from_roots(&roots, c(1.0, 0.0)).unwrap();
        let zs = find_roots(&p, &RootConfig::default()).unwrap();
        assert_eq!(zs.points.len(), 10);
        for (j, pt) in (1..=10).zip(&zs.points) {
            assert!((pt.location - c(j as f64, 0.0)).norm() < 1e-6, "{j}: {:?}", pt.location);
            assert_eq!(pt.multiplicity, 1);
        }
    }

    #[test]
    fn constant_is_rejected() {
        let cfg = RootConfig::default();
        assert_eq!(
            find_roots(&Polynomial::from_real(&[3.0]), &cfg),
            Err(RootError::ConstantPolynomial)
        );
        assert_eq!(find_roots(&Polynomial::zero(), &cfg), Err(RootError::ConstantPolynomial));
    }

    #[test]
    fn distinct_counts() {
        let cfg = RootConfig::default();
        assert_eq!(distinct_zero_count(&Polynomial::zero(), &cfg).unwrap(), 0);
        assert_eq!(distinct_zero_count(&Polynomial::from_real(&[2.0]), &cfg).unwrap(), 0);
        let two = c(2.0, 0.0);
        let p = Polynomial::from_roots(&[two; 5], c(1.0, 0.0)).unwrap();
        assert_eq!(distinct_zero_count(&p, &cfg).unwrap(), 1);
        assert_eq!(distinct_zero_count(&Polynomial::from_real(&[-9.0, 0.0, 1.0]), &cfg).unwrap(), 2);
    }

    #[test]
    fn exact_zero_roots_are_split_off() {
        // z^3 (z^2 - 4)
        let p = Polynomial::from_real(&[0.0, 0.0, 0.0, -4.0, 0.0, 1.0]);
        let zs = find_roots(&p, &RootConfig::default()).unwrap();
        assert_eq!(zs.total_multiplicity(), 5);
        assert_eq!(zs.points.len(), 3);
        assert_eq!(zs.points[1].location, c(0.0, 0.0));
        assert_eq!(zs.points[1].multiplicity, 3);
    }

    #[test]
    fn symmetric_input_converges() {
        let mut coeffs = vec![0.0; 13];
        coeffs[0] = -1.0;
        coeffs[12] = 1.0;
        let zs = find_roots(&Polynomial::from_real(&coeffs), &RootConfig::default()).unwrap();
        assert_eq!(zs.points.len(), 12);
        for p in &zs.points {
            assert!((p.location.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seed_determinism() {
        let p = Polynomial::new(vec![c(0.3, -1.0), c(2.0, 0.1), c(-0.7, 0.4), c(1.0, 1.0), c(0.2, 0.0)]);
        let cfg = RootConfig::default().with_seed(42);
        assert_eq!(find_roots(&p, &cfg), find_roots(&p, &cfg));
    }

    #[test]
    fn clusters_respect_separation() {
        let pts = vec![(c(0.0, 0.0), 1), (c(0.6, 0.0), 1), (c(1.2, 0.0), 1), (c(5.0, 0.0), 2)];
        let out = cluster(pts, 0.7);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].multiplicity, 3);
        assert!((out[0].location - c(0.6, 0.0)).norm() < 1e-15);
        assert_eq!(out[1].multiplicity, 2);
    }
}
