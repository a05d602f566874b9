//! The two-term identity `(w + beta)^l - w^l = d [(w + gamma)^l - (w + delta)^l]`
//! and the shifted-power basis `(w + lambda_i)^l`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::OperatorError;
use crate::linalg::{determinant, solve, Matrix};
use crate::poly::{binomial, complex_pair};
use crate::seed::derive_seed;

/// Maximum relative coefficient residual accepted for a solution.
pub const CLAIM_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClaimSolution {
    #[serde(with = "complex_pair")]
    pub d: Complex64,
    #[serde(with = "complex_pair")]
    pub gamma: Complex64,
    #[serde(with = "complex_pair")]
    pub delta: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimSearch {
    pub starts: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for ClaimSearch {
    fn default() -> Self {
        Self {
            starts: 64,
            max_iter: 200,
            seed: 0,
        }
    }
}

pub fn claim_solutions(l: usize, beta: Complex64) -> Result<Vec<ClaimSolution>, OperatorError> {
    claim_solutions_with(l, beta, &ClaimSearch::default())
}

/// All `(d, gamma, delta)` satisfying the identity for every `w`.
///
/// Matching the coefficients of `w^(l-e)`, `e = 1..=l`, gives
/// `beta^e = d (gamma^e - delta^e)`. With `gamma = beta g`, `delta = beta h`
/// the system is `d (g^e - h^e) = 1`, which is solved by damped
/// Gauss-Newton from seeded random starts in the six real unknowns; each
/// limit is kept only if its residual on the original identity is at most
/// [`CLAIM_RESIDUAL_TOL`]. Solutions are deduplicated and sorted by
/// decreasing `Re d`.
pub fn claim_solutions_with(
    l: usize,
    beta: Complex64,
    search: &ClaimSearch,
) -> Result<Vec<ClaimSolution>, OperatorError> {
    if l < 3 {
        return Err(OperatorError::PreconditionViolated(format!(
            "the identity has a one-parameter solution family for l = {l}; need l >= 3"
        )));
    }
    if beta.norm() == 0.0 {
        return Err(OperatorError::PreconditionViolated("beta must be nonzero".into()));
    }

    let mut found: Vec<ClaimSolution> = Vec::new();
    for start in 0..search.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(search.seed, start as u64));
        let mut draw = || Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let x0 = [draw(), draw(), draw()];
        let Some([d, g, h]) = levenberg_marquardt(l, x0, search.max_iter) else {
            continue;
        };
        let candidate = ClaimSolution {
            d,
            gamma: beta * g,
            delta: beta * h,
            residual: identity_residual(l, beta, d, beta * g, beta * h),
        };
        if candidate.residual.is_nan() || candidate.residual > CLAIM_RESIDUAL_TOL {
            continue;
        }
        let duplicate = found.iter().any(|s| {
            (s.d - candidate.d).norm() + (s.gamma - candidate.gamma).norm() + (s.delta - candidate.delta).norm()
                < 1e-6 * (1.0 + beta.norm())
        });
        if !duplicate {
            found.push(candidate);
        }
    }
    found.sort_by(|a, b| b.d.re.total_cmp(&a.d.re).then(b.d.im.total_cmp(&a.d.im)));
    Ok(found)
}

/// Max over `e` of `C(l,e) |beta^e - d (gamma^e - delta^e)|`, relative to
/// the largest coefficient of `(w + beta)^l - w^l`.
pub fn identity_residual(l: usize, beta: Complex64, d: Complex64, gamma: Complex64, delta: Complex64) -> f64 {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for e in 1..=l {
        let e32 = e as u32;
        let lhs = beta.powu(e32) * binomial(l, e);
        let rhs = d * (gamma.powu(e32) - delta.powu(e32)) * binomial(l, e);
        worst = worst.max((lhs - rhs).norm());
        scale = scale.max(lhs.norm());
    }
    worst / scale
}

fn normalized_system(l: usize, [d, g, h]: [Complex64; 3]) -> (Vec<Complex64>, Matrix) {
    let one = Complex64::new(1.0, 0.0);
    let mut f = Vec::with_capacity(l);
    let mut jac = Vec::with_capacity(l);
    for e in 1..=l {
        let (ge, he) = (g.powu(e as u32), h.powu(e as u32));
        let (ge1, he1) = (g.powu(e as u32 - 1), h.powu(e as u32 - 1));
        f.push(d * (ge - he) - one);
        jac.push(vec![ge - he, d * ge1 * e as f64, -d * he1 * e as f64]);
    }
    (f, jac)
}

fn sum_sq(f: &[Complex64]) -> f64 {
    f.iter().map(|v| v.norm_sqr()).sum()
}

/// Damped Gauss-Newton on the holomorphic system; `None` if it diverges or
/// stalls away from a root.
fn levenberg_marquardt(l: usize, mut x: [Complex64; 3], max_iter: usize) -> Option<[Complex64; 3]> {
    let mut mu = 1e-3;
    let (mut f, mut jac) = normalized_system(l, x);
    let mut cost = sum_sq(&f);
    for _ in 0..max_iter {
        if cost < 1e-28 {
            break;
        }
        // (J^H J + mu I) step = -J^H f
        let mut normal: Matrix = vec![vec![Complex64::new(0.0, 0.0); 3]; 3];
        let mut rhs = vec![Complex64::new(0.0, 0.0); 3];
        for (row, fe) in jac.iter().zip(&f) {
            for a in 0..3 {
                rhs[a] -= row[a].conj() * fe;
                for b in 0..3 {
                    normal[a][b] += row[a].conj() * row[b];
                }
            }
        }
        loop {
            let mut damped = normal.clone();
            for (a, r) in damped.iter_mut().enumerate() {
                r[a] += mu;
            }
            let step = solve(&damped, &rhs)?;
            let trial = [x[0] + step[0], x[1] + step[1], x[2] + step[2]];
            let (tf, tj) = normalized_system(l, trial);
            let tcost = sum_sq(&tf);
            if tcost.is_finite() && tcost < cost {
                x = trial;
                f = tf;
                jac = tj;
                cost = tcost;
                mu = (mu * 0.3).max(1e-15);
                break;
            }
            mu *= 10.0;
            if mu > 1e12 {
                return None;
            }
        }
        if x.iter().any(|v| v.norm() > 1e6) {
            return None;
        }
    }
    (cost < 1e-20).then_some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisMatrix {
    /// `rows[i][j]` is the coefficient of `w^j` in `(w + lambda_i)^l`.
    pub rows: Vec<Vec<[f64; 2]>>,
    #[serde(with = "complex_pair")]
    pub determinant: Complex64,
    /// `|det|` divided by the product of row norms (Hadamard's bound).
    pub relative_determinant: f64,
    pub nonsingular: bool,
}

/// Coefficient matrix of `(w + lambda_i)^l`, `i = 0..=l`. Nonsingular iff
/// `|det| > 1e-10` times the product of row norms.
pub fn shifted_power_basis_matrix(lambdas: &[Complex64], l: usize) -> Result<BasisMatrix, OperatorError> {
    if lambdas.len() != l + 1 {
        return Err(OperatorError::WrongLength {
            expected: l + 1,
            got: lambdas.len(),
        });
    }
    let matrix: Matrix = lambdas
        .iter()
        .map(|&lam| (0..=l).map(|j| lam.powu((l - j) as u32) * binomial(l, j)).collect())
        .collect();
    let det = determinant(&matrix);
    let hadamard: f64 = matrix
        .iter()
        .map(|row| row.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
        .product();
    let relative = det.norm() / hadamard;
    Ok(BasisMatrix {
        rows: matrix
            .iter()
            .map(|row| row.iter().map(|v| [v.re, v.im]).collect())
            .collect(),
        determinant: det,
        relative_determinant: relative,
        nonsingular: relative > 1e-10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_two_solutions(l: usize, beta: Complex64) {
        let sols = claim_solutions(l, beta).unwrap();
        assert_eq!(sols.len(), 2, "l={l} beta={beta}: {sols:?}");
        let tol = 1e-8 * (1.0 + beta.norm());
        assert!((sols[0].d - c(1.0, 0.0)).norm() < tol);
        assert!((sols[0].gamma - beta).norm() < tol && sols[0].delta.norm() < tol);
        assert!((sols[1].d - c(-1.0, 0.0)).norm() < tol);
        assert!(sols[1].gamma.norm() < tol && (sols[1].delta - beta).norm() < tol);
        assert!(sols.iter().all(|s| s.residual <= CLAIM_RESIDUAL_TOL));
    }

    #[test]
    fn claim_examples() {
        assert_two_solutions(3, c(1.0, 0.0));
        assert_two_solutions(5, c(2.0, 1.0));
        assert!(matches!(
            claim_solutions(2, c(1.0, 0.0)),
            Err(OperatorError::PreconditionViolated(_))
        ));
        assert!(claim_solutions(4, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn quadratic_case_really_has_a_family() {
        // for l = 2 every d != 0 works with gamma - delta = beta/d, gamma + delta = beta
        let beta = c(1.0, 0.0);
        let d = c(3.0, 0.0);
        let gamma = beta * (1.0 + 1.0 / d) / 2.0;
        let delta = beta * (1.0 - 1.0 / d) / 2.0;
        assert!(identity_residual(2, beta, d, gamma, delta) < 1e-15);
        assert!(identity_residual(3, beta, d, gamma, delta) > 1e-3);
    }

    /// `prod C(l, j)` times the Vandermonde determinant in the shifts.
    fn vandermonde_oracle(lambdas: &[Complex64], l: usize) -> f64 {
        let mut v = 1.0;
        for i in 0..lambdas.len() {
            for j in (i + 1)..lambdas.len() {
                v *= (lambdas[j] - lambdas[i]).norm();
            }
        }
        v * (0..=l).map(|j| binomial(l, j)).product::<f64>()
    }

    #[test]
    fn basis_examples() {
        let m = shifted_power_basis_matrix(&[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)], 2).unwrap();
        assert!(m.nonsingular);
        // |prod C(2,j)| * vandermonde(0,1,2) = 2 * 2 = 4
        assert!((m.determinant.norm() - 4.0).abs() < 1e-12);

        let m = shifted_power_basis_matrix(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 2).unwrap();
        assert!(!m.nonsingular);

        let lambdas = [c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)];
        let m = shifted_power_basis_matrix(&lambdas, 3).unwrap();
        assert!(m.nonsingular);
        let oracle = vandermonde_oracle(&lambdas, 3);
        assert!((m.determinant.norm() - oracle).abs() < 1e-12 * oracle);

        assert!(shifted_power_basis_matrix(&lambdas, 2).is_err());
    }
}
