//! Lower bounds for `d_{n,k}`, the best constant in
//! `diam Z(P^(k)) <= d_{n,k} diam Z(P)` over `P` of degree in `(k, n]`.
//!
//! The ratio is invariant under `z -> a z + b`, so the search pins two roots
//! at 0 and 1 and runs Nelder-Mead over the remaining `2 (m - 2)` real
//! coordinates for each degree `m`. Every reported value is recomputed on
//! its witness, so it is a certified lower bound (up to root-solver
//! accuracy); only the values known in closed form are flagged exact.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{diameter, point_diameter};
use crate::poly::{complex_vec, Polynomial};
use crate::roots::{find_roots, RootConfig, RootError, MULTIPLE_CLUSTER_RADIUS};
use crate::seed::derive_seed;
use crate::simplex::{minimize, SimplexOptions};

/// Free roots beyond this modulus are rejected by the search.
const SEARCH_BOX: f64 = 1e3;
/// Radius of the disk random starts are drawn from.
const START_RADIUS: f64 = 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error("need 0 <= k <= n - 2 and n >= 2, got n = {n}, k = {k}")]
    InvalidRange { n: usize, k: usize },
    #[error("need degree >= k + 1 = {needed}, got {got:?}")]
    DegreeTooLow { needed: usize, got: Option<usize> },
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// `diam Z(p^(k)) / diam Z(p)`; 0 when all zeros of `p` coincide.
pub fn ratio(p: &Polynomial, k: usize, config: &RootConfig) -> Result<f64, ExtremalError> {
    let degree = p.degree();
    match degree {
        Some(d) if d > k && d >= 1 => {}
        got => return Err(ExtremalError::DegreeTooLow { needed: k + 1, got }),
    }
    let zs = find_roots(p, config)?;
    if zs.points.len() <= 1 {
        return Ok(0.0);
    }
    let denom = diameter(&zs);
    if k == 0 {
        return Ok(1.0);
    }
    let dk = p.derivative(k);
    let num = if dk.is_constant() {
        0.0
    } else {
        diameter(&find_roots(&dk, config)?)
    };
    Ok(num / denom)
}

/// The ratio of `prod (z - r_i)`, with the denominator taken from the given
/// roots directly; only the zeros of the `k`-th derivative are computed.
pub fn ratio_of_roots(roots: &[Complex64], k: usize, config: &RootConfig) -> Result<f64, ExtremalError> {
    if roots.len() < k + 1 || roots.is_empty() {
        return Err(ExtremalError::DegreeTooLow {
            needed: k + 1,
            got: Some(roots.len()),
        });
    }
    let denom = point_diameter(roots);
    if denom == 0.0 {
        return Ok(0.0);
    }
    if k == 0 {
        return Ok(1.0);
    }
    let p = Polynomial::from_roots(roots, Complex64::new(1.0, 0.0)).expect("unit leading");
    let dk = p.derivative(k);
    let num = if dk.is_constant() {
        0.0
    } else {
        diameter(&find_roots(&dk, config)?)
    };
    Ok(num / denom)
}

/// Root settings for the search objective: clusters up to
/// [`MULTIPLE_CLUSTER_RADIUS`] are merged, which can only shrink the
/// numerator, so reported values stay lower bounds.
pub fn search_root_config() -> RootConfig {
    RootConfig::default().with_cluster_radius(MULTIPLE_CLUSTER_RADIUS)
}

/// Values of `d_{n,k}` known in closed form: 1 iff `2k <= n - 2`, and
/// `d_{3,1} = 2/3`.
pub fn known_dnk(n: usize, k: usize) -> Option<f64> {
    if n < 2 || k > n - 2 {
        return None;
    }
    if 2 * k + 2 <= n {
        Some(1.0)
    } else if (n, k) == (3, 1) {
        Some(2.0 / 3.0)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DnkProvenance {
    Exact,
    EstimatedLowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DnkValue {
    pub value: f64,
    pub provenance: DnkProvenance,
}

/// Supplies `d_{n,k}` to the operator classifier.
pub trait DnkSource {
    fn dnk(&self, n: usize, k: usize) -> DnkValue;
}

/// Closed-form values where known, otherwise a cached search estimate.
#[derive(Debug)]
pub struct DnkLookup {
    pub budget: SearchBudget,
    pub seed: u64,
    cache: Mutex<BTreeMap<(usize, usize), f64>>,
}

impl DnkLookup {
    pub fn new(budget: SearchBudget, seed: u64) -> Self {
        Self {
            budget,
            seed,
            cache: Mutex::new(BTreeMap::new()),
        }
    }
}

impl Default for DnkLookup {
    fn default() -> Self {
        Self::new(
            SearchBudget {
                starts: 40,
                ..SearchBudget::default()
            },
            0,
        )
    }
}

impl DnkSource for DnkLookup {
    fn dnk(&self, n: usize, k: usize) -> DnkValue {
        if let Some(value) = known_dnk(n, k) {
            return DnkValue {
                value,
                provenance: DnkProvenance::Exact,
            };
        }
        let mut cache = self.cache.lock().expect("dnk cache poisoned");
        let value = *cache.entry((n, k)).or_insert_with(|| {
            estimate_dnk(n, k, &self.budget, self.seed)
                .map(|e| e.best_ratio)
                .unwrap_or(0.0)
        });
        DnkValue {
            value,
            provenance: DnkProvenance::EstimatedLowerBound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Random starts per degree; structured starts come on top.
    pub starts: usize,
    /// Objective evaluations per local search.
    pub local_evals: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            starts: 200,
            local_evals: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalEstimate {
    pub n: usize,
    pub k: usize,
    pub best_ratio: f64,
    #[serde(with = "complex_vec")]
    pub witness_roots: Vec<Complex64>,
    pub degree_used: usize,
    pub starts: usize,
    pub seed: u64,
    pub converged_fraction: f64,
}

struct StartResult {
    ratio: f64,
    witness: Vec<Complex64>,
    converged: bool,
}

/// Better ratio wins; ties go to the lexicographically smaller witness.
fn better(a: &StartResult, b: &StartResult) -> bool {
    match a.ratio.total_cmp(&b.ratio) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => {
            let key = |w: &[Complex64]| -> Vec<f64> { w.iter().flat_map(|z| [z.re, z.im]).collect() };
            let (ka, kb) = (key(&a.witness), key(&b.witness));
            ka.len()
                .cmp(&kb.len())
                .then_with(|| {
                    ka.iter()
                        .zip(&kb)
                        .map(|(x, y)| x.total_cmp(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .is_lt()
        }
    }
}

fn unpack(free: &[f64]) -> Vec<Complex64> {
    let mut roots = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    roots.extend(free.chunks(2).map(|c| Complex64::new(c[0], c[1])));
    roots
}

/// Objective on the gauge chart: free roots only, pinned at 0 and 1.
pub fn chart_ratio(free: &[f64], k: usize, config: &RootConfig) -> Option<f64> {
    if free.chunks(2).any(|c| c[0].hypot(c[1]) > SEARCH_BOX) {
        return None;
    }
    ratio_of_roots(&unpack(free), k, config).ok()
}

/// Free-root patterns built from collided roots at 0 and 1.
fn structured_starts(free_count: usize) -> Vec<Vec<f64>> {
    (0..=free_count)
        .map(|at_zero| {
            (0..free_count)
                .flat_map(|i| if i < at_zero { [0.0, 0.0] } else { [1.0, 0.0] })
                .collect()
        })
        .collect()
}

fn search_degree(m: usize, k: usize, budget: &SearchBudget, seed: u64) -> Vec<StartResult> {
    let free_count = m - 2;
    let mut starts = structured_starts(free_count);
    for s in 0..budget.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, ((m as u64) << 32) | s as u64));
        starts.push(
            (0..free_count)
                .flat_map(|_| {
                    let r = START_RADIUS * rng.random::<f64>().sqrt();
                    let theta = rng.random::<f64>() * std::f64::consts::TAU;
                    [r * theta.cos(), r * theta.sin()]
                })
                .collect(),
        );
    }

    let roots_cfg = search_root_config();
    let opts = SimplexOptions {
        initial_step: 0.2,
        max_evals: budget.local_evals,
        f_tol: 1e-12,
        x_tol: 1e-9,
    };
    starts
        .into_par_iter()
        .filter_map(|x0| {
            let result = minimize(
                |x| chart_ratio(x, k, &roots_cfg).map_or(f64::INFINITY, |r| -r),
                &x0,
                &opts,
            );
            let witness = unpack(&result.x);
            // re-verify on the witness itself
            let ratio = ratio_of_roots(&witness, k, &roots_cfg).ok()?;
            Some(StartResult {
                ratio,
                witness,
                converged: result.converged,
            })
        })
        .collect()
}

/// Multi-start search over degrees `m = max(k+1, 2)..=n`.
pub fn estimate_dnk(n: usize, k: usize, budget: &SearchBudget, seed: u64) -> Result<ExtremalEstimate, ExtremalError> {
    if n < 2 || k > n - 2 {
        return Err(ExtremalError::InvalidRange { n, k });
    }
    let mut best: Option<StartResult> = None;
    let mut total = 0usize;
    let mut converged = 0usize;
    for m in (k + 1).max(2)..=n {
        for r in search_degree(m, k, budget, seed) {
            total += 1;
            converged += r.converged as usize;
            if best.as_ref().is_none_or(|b| better(&r, b)) {
                best = Some(r);
            }
        }
    }
    let best = best.expect("at least one start per degree");
    Ok(ExtremalEstimate {
        n,
        k,
        best_ratio: best.ratio,
        degree_used: best.witness.len(),
        witness_roots: best.witness,
        starts: total,
        seed,
        converged_fraction: if total > 0 { converged as f64 / total as f64 } else { 0.0 },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exactness {
    #[serde(rename = "EXACT")]
    Exact,
    #[serde(rename = "ESTIMATE")]
    Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DnkRow {
    #[serde(flatten)]
    pub estimate: ExtremalEstimate,
    pub exactness: Exactness,
    pub exact_value: Option<f64>,
}

/// Every valid `(n, k)` with `2 <= n <= n_max`, searched and flagged.
pub fn dnk_table(n_max: usize, budget: &SearchBudget, seed: u64) -> Result<Vec<DnkRow>, ExtremalError> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        for k in 0..=(n - 2) {
            let estimate = estimate_dnk(n, k, budget, seed)?;
            let exact_value = known_dnk(n, k);
            rows.push(DnkRow {
                estimate,
                exactness: if exact_value.is_some() {
                    Exactness::Exact
                } else {
                    Exactness::Estimate
                },
                exact_value,
            });
        }
    }
    Ok(rows)
}
