//! Randomised refutation of diameter nonexpansiveness, and the
//! single-distinct-zero probe on images of `(z + alpha)^s`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MonomialOperator;
use crate::geometry::diameter;
use crate::poly::{binomial, complex_pair, Polynomial};
use crate::roots::{distinct_zero_count, find_roots, RootConfig};
use crate::seed::derive_seed;

/// Above this relative noise an image is indistinguishable from zero.
const VANISHING_NOISE: f64 = 1e-3;

const STATISTICAL_NOTE: &str =
    "no counterexample found; this is a statistical statement over the sampled trials, not a certificate";

/// `z^(t+1) - M z^(t-1)`, whose zero set has diameter `2 sqrt|M|`.
pub fn pm_polynomial(t: usize, m: f64) -> Polynomial {
    assert!(t >= 1, "t >= 1");
    let mut coeffs = vec![Complex64::new(0.0, 0.0); t + 2];
    coeffs[t + 1] = Complex64::new(1.0, 0.0);
    coeffs[t - 1] = Complex64::new(-m, 0.0);
    Polynomial::new(coeffs)
}

/// `count` points on a golden-angle spiral with radii from 0.25 to 3.
pub fn default_alpha_grid(count: usize) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|j| {
            let t = if count > 1 { j as f64 / (count - 1) as f64 } else { 0.0 };
            Complex64::from_polar(0.25 + 2.75 * t, golden * j as f64)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampler {
    /// Fraction of trials drawn from random roots (the rest from Gaussian
    /// coefficients).
    pub root_fraction: f64,
    pub root_radius: f64,
}

impl Default for Sampler {
    fn default() -> Self {
        Self {
            root_fraction: 0.5,
            root_radius: 2.0,
        }
    }
}

impl Sampler {
    /// Degree uniform in `[1, n]`; roots uniform in a disk or i.i.d. complex
    /// Gaussian coefficients.
    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Polynomial {
        let degree = rng.random_range(1..=n.max(1));
        self.sample_degree(degree, rng)
    }

    pub fn sample_degree(&self, degree: usize, rng: &mut impl Rng) -> Polynomial {
        if rng.random::<f64>() < self.root_fraction {
            let roots: Vec<Complex64> = (0..degree)
                .map(|_| {
                    let r = self.root_radius * rng.random::<f64>().sqrt();
                    Complex64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU)
                })
                .collect();
            Polynomial::from_roots(&roots, Complex64::new(1.0, 0.0)).expect("unit leading")
        } else {
            let mut coeffs: Vec<Complex64> = (0..=degree)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if coeffs[degree].norm() < 1e-3 {
                coeffs[degree] = Complex64::new(1.0, 0.0);
            }
            Polynomial::new(coeffs)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonexpansiveConfig {
    pub trials: usize,
    pub sampler: Sampler,
    /// Slack: a counterexample needs `diam Z(L[p]) > diam Z(p) + tol * max(1, diam Z(p))`.
    pub tol: f64,
    pub seed: u64,
    pub alpha_grid: Vec<Complex64>,
    pub pm_values: Vec<f64>,
    pub roots: RootConfig,
}

impl Default for NonexpansiveConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            sampler: Sampler::default(),
            tol: 1e-7,
            seed: 0,
            alpha_grid: default_alpha_grid(20),
            pm_values: vec![10.0, 100.0, 1000.0],
            roots: RootConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub family: String,
    pub p: Polynomial,
    pub image: Polynomial,
    pub diam_p: f64,
    pub diam_image: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum NonexpansiveOutcome {
    NoCounterexampleFound {
        trials_run: usize,
        /// Trials where `p` or `L[p]` is constant; the hypothesis does not apply.
        vacuous: usize,
        /// Trials lost to root-solver failures; never counted as passes.
        skipped: usize,
        note: String,
    },
    Counterexample(Counterexample),
}

enum Trial {
    Clean,
    Vacuous,
    Skipped,
    Violation(Counterexample),
}

/// Adversarial inputs first, then `config.trials` random polynomials. The
/// reported counterexample is the one with the lowest trial index.
pub fn test_nonexpansive(op: &MonomialOperator, config: &NonexpansiveConfig) -> NonexpansiveOutcome {
    let n = op.n;
    let mut fixed: Vec<(String, Polynomial)> = Vec::new();
    for s in 1..=n {
        for &alpha in &config.alpha_grid {
            let p = Polynomial::from_roots(&vec![-alpha; s], Complex64::new(1.0, 0.0)).expect("unit leading");
            fixed.push((format!("(z+{alpha})^{s}"), p));
        }
    }
    for t in 1..n {
        for &m in &config.pm_values {
            fixed.push((format!("z^{}-{m}z^{}", t + 1, t - 1), pm_polynomial(t, m)));
        }
    }

    let total = fixed.len() + config.trials;
    let run = |i: usize| -> Trial {
        let (family, p) = if i < fixed.len() {
            fixed[i].clone()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, i as u64));
            ("random".to_string(), config.sampler.sample(n, &mut rng))
        };
        run_trial(op, i, family, p, config)
    };

    let (mut vacuous, mut skipped) = (0, 0);
    const CHUNK: usize = 256;
    for start in (0..total).step_by(CHUNK) {
        let results: Vec<Trial> = (start..(start + CHUNK).min(total)).into_par_iter().map(run).collect();
        for r in results {
            match r {
                Trial::Clean => {}
                Trial::Vacuous => vacuous += 1,
                Trial::Skipped => skipped += 1,
                Trial::Violation(cx) => return NonexpansiveOutcome::Counterexample(cx),
            }
        }
    }
    NonexpansiveOutcome::NoCounterexampleFound {
        trials_run: total,
        vacuous,
        skipped,
        note: STATISTICAL_NOTE.to_string(),
    }
}

fn run_trial(
    op: &MonomialOperator,
    trial: usize,
    family: String,
    p: Polynomial,
    config: &NonexpansiveConfig,
) -> Trial {
    let Ok((image, noise)) = op.apply_with_noise(&p) else {
        return Trial::Skipped;
    };
    if p.is_constant() || image.is_constant() || noise > VANISHING_NOISE {
        return Trial::Vacuous;
    }
    let roots_cfg = config.roots.with_seed(derive_seed(config.seed, trial as u64));
    let (Ok(zp), Ok(zi)) = (
        find_roots(&p, &roots_cfg),
        find_roots(&image, &roots_cfg.with_coefficient_noise(noise)),
    ) else {
        return Trial::Skipped;
    };
    let (diam_p, diam_image) = (diameter(&zp), diameter(&zi));
    if diam_image > diam_p + config.tol * diam_p.max(1.0) {
        Trial::Violation(Counterexample {
            trial,
            family,
            p,
            image,
            diam_p,
            diam_image,
        })
    } else {
        Trial::Clean
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeViolation {
    pub s: usize,
    #[serde(with = "complex_pair")]
    pub alpha: Complex64,
    pub distinct_zeros: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSkip {
    pub s: usize,
    #[serde(with = "complex_pair")]
    pub alpha: Complex64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub checked: usize,
    pub violations: Vec<ProbeViolation>,
    pub skipped: Vec<ProbeSkip>,
}

/// Flags every `(s, alpha)` for which `L[(z + alpha)^s]` has two or more
/// distinct zeros. A nonexpansive operator produces none; the converse
/// does not hold.
pub fn single_zero_probe(op: &MonomialOperator, alpha_grid: &[Complex64], config: &RootConfig) -> ProbeReport {
    let mut report = ProbeReport {
        checked: 0,
        violations: Vec::new(),
        skipped: Vec::new(),
    };
    for s in 0..=op.n {
        for &alpha in alpha_grid {
            report.checked += 1;
            // sum_j C(s, j) alpha^j L[z^(s-j)]
            let terms: Vec<(Complex64, &Polynomial)> = (0..=s)
                .map(|j| (alpha.powu(j as u32) * binomial(s, j), &op.images[s - j]))
                .collect();
            let magnitude: f64 = terms.iter().map(|(w, img)| w.norm() * img.scale()).sum();
            let image = Polynomial::linear_combination(terms);
            let noise = if image.scale() > 0.0 {
                16.0 * (op.n + 2) as f64 * f64::EPSILON * magnitude / image.scale()
            } else {
                0.0
            };
            if noise > VANISHING_NOISE {
                continue;
            }
            match distinct_zero_count(&image, &config.with_coefficient_noise(noise)) {
                Ok(count) if count >= 2 => report.violations.push(ProbeViolation {
                    s,
                    alpha,
                    distinct_zeros: count,
                }),
                Ok(_) => {}
                Err(e) => report.skipped.push(ProbeSkip {
                    s,
                    alpha,
                    reason: e.to_string(),
                }),
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::LinearFunctional;
    use crate::poly::AffineMap;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pm_family_shape() {
        assert_eq!(pm_polynomial(2, 4.0), Polynomial::from_real(&[0.0, -4.0, 0.0, 1.0]));
        assert_eq!(pm_polynomial(1, 10.0), Polynomial::from_real(&[-10.0, 0.0, 1.0]));
    }

    #[test]
    fn half_substitution_is_refuted_by_pm() {
        let op = MonomialOperator::substitution(4, AffineMap::new(c(0.5, 0.0), c(0.0, 0.0)));
        let cfg = NonexpansiveConfig {
            trials: 0,
            ..Default::default()
        };
        let NonexpansiveOutcome::Counterexample(cx) = test_nonexpansive(&op, &cfg) else {
            panic!("expected a counterexample");
        };
        assert!(cx.trial < 4 * 20 + 3 * 3);
        assert!((cx.diam_image / cx.diam_p - 2.0).abs() < 1e-6);
    }

    #[test]
    fn derivative_survives() {
        let op = MonomialOperator::derivative(5, 1);
        let cfg = NonexpansiveConfig {
            trials: 500,
            seed: 3,
            ..Default::default()
        };
        let out = test_nonexpansive(&op, &cfg);
        let NonexpansiveOutcome::NoCounterexampleFound { skipped, note, .. } = out else {
            panic!("{out:?}");
        };
        assert_eq!(skipped, 0);
        assert!(note.contains("not a certificate"));
    }

    #[test]
    fn zero_operator_is_vacuous() {
        let cfg = NonexpansiveConfig {
            trials: 50,
            ..Default::default()
        };
        match test_nonexpansive(&MonomialOperator::zero(3), &cfg) {
            NonexpansiveOutcome::NoCounterexampleFound { trials_run, vacuous, .. } => {
                assert_eq!(vacuous, trials_run)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn probe_examples() {
        let grid = default_alpha_grid(20);
        let cfg = RootConfig::default();

        let l3 = LinearFunctional::new(vec![c(1.0, 0.5), c(-0.7, 0.0), c(0.2, 1.0)]);
        let op = MonomialOperator::form2(c(1.0, -1.0), 3, &l3, 2).unwrap();
        let r = single_zero_probe(&op, &grid, &cfg);
        assert!(r.violations.is_empty() && r.skipped.is_empty());

        // L[(z+a)^2] = z^2 - a^2
        let op = MonomialOperator::new(
            2,
            vec![Polynomial::from_real(&[-1.0]), Polynomial::zero(), Polynomial::monomial(2)],
        )
        .unwrap();
        let r = single_zero_probe(&op, &grid, &cfg);
        assert_eq!(r.violations.len(), grid.len());
        assert!(r.violations.iter().all(|v| v.s == 2 && v.distinct_zeros == 2));

        let half = MonomialOperator::substitution(4, AffineMap::new(c(0.5, 0.0), c(0.0, 0.0)));
        assert!(single_zero_probe(&half, &grid, &cfg).violations.is_empty());
    }
}
