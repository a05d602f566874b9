use std::collections::BTreeMap;

use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::BIN_NAME;
use crate::extremal::{estimate_dnk, known_dnk, ratio, DnkLookup, SearchBudget};
use crate::geometry::{diameter, gauss_lucas_check, HULL_TOL};
use crate::operator::{
    claim_solutions, classify, pm_polynomial, shifted_power_basis_matrix, test_nonexpansive, FormMatch,
    LinearFunctional, MonomialOperator, NonexpansiveConfig, NonexpansiveOutcome, Sampler, DEFAULT_CLASSIFY_TOL,
};
use crate::poly::AffineMap;
use crate::roots::{find_roots, RootConfig};
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    GaussLucas,
    Roundtrip,
    Claim,
    DnkDichotomy,
    Adversarial,
}

impl SuiteName {
    pub const ALL: [SuiteName; 5] = [
        SuiteName::GaussLucas,
        SuiteName::Roundtrip,
        SuiteName::Claim,
        SuiteName::DnkDichotomy,
        SuiteName::Adversarial,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::GaussLucas => "gauss-lucas",
            SuiteName::Roundtrip => "roundtrip",
            SuiteName::Claim => "claim",
            SuiteName::DnkDichotomy => "dnk-dichotomy",
            SuiteName::Adversarial => "adversarial",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteCheck {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteFailure {
    pub check: String,
    pub case: usize,
    pub detail: String,
    pub repro: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: SuiteName,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<SuiteCheck>,
    pub failures: Vec<SuiteFailure>,
    /// Named numeric observations (worst errors, best ratios).
    pub metrics: BTreeMap<String, f64>,
}

impl SuiteSummary {
    pub fn check(&self, name: &str) -> Option<&SuiteCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Builder {
    summary: SuiteSummary,
}

impl Builder {
    fn new(suite: SuiteName, seed: u64) -> Self {
        Self {
            summary: SuiteSummary {
                suite,
                seed,
                pass: true,
                checks: Vec::new(),
                failures: Vec::new(),
                metrics: BTreeMap::new(),
            },
        }
    }

    /// Records a check from per-case results, in case order.
    fn check(&mut self, name: &str, results: Vec<Case>) {
        let mut passed = 0;
        for (case, r) in results.into_iter().enumerate() {
            match r {
                Ok(()) => passed += 1,
                Err((detail, repro)) => self.summary.failures.push(SuiteFailure {
                    check: name.to_string(),
                    case,
                    detail,
                    repro,
                }),
            }
        }
        let trials = passed + self.summary.failures.iter().filter(|f| f.check == name).count();
        self.summary.checks.push(SuiteCheck {
            name: name.to_string(),
            trials,
            passed,
        });
    }

    fn metric(&mut self, name: &str, value: f64) {
        self.summary.metrics.insert(name.to_string(), value);
    }

    fn finish(mut self) -> SuiteSummary {
        self.summary.pass = self.summary.failures.is_empty();
        self.summary
    }
}

/// `Err((detail, repro))` for a failed case.
type Case = Result<(), (String, String)>;

fn inline(v: &impl Serialize) -> String {
    format!("'{}'", serde_json::to_string(v).expect("serializable"))
}

fn rng_for(seed: u64, stream: u64, case: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(derive_seed(seed, stream), case as u64))
}

/// Modulus uniform in `[0.5, 2]`, argument uniform.
fn annulus(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(rng.random_range(0.5..=2.0), rng.random_range(0.0..std::f64::consts::TAU))
}

pub const GAUSS_LUCAS_TRIALS: usize = 10_000;
pub const ROUNDTRIP_TRIALS: usize = 1_000;
pub const ROUNDTRIP_MAX_N: usize = 8;
pub const ROUNDTRIP_PARAM_TOL: f64 = 1e-6;
pub const CLAIM_BETAS: usize = 20;
pub const BASIS_RANDOM: usize = 100;
pub const BASIS_COLLISION: usize = 20;
pub const DICHOTOMY_STARTS: usize = 500;
pub const DICHOTOMY_RANDOM: usize = 10_000;
pub const REFUTE_TRIALS: usize = 10_000;

/// Runs a suite at its fixed trial counts. Output depends only on
/// `(name, seed)`.
pub fn run_suite(name: SuiteName, seed: u64) -> SuiteSummary {
    let mut b = Builder::new(name, seed);
    match name {
        SuiteName::GaussLucas => gauss_lucas_suite(&mut b, seed),
        SuiteName::Roundtrip => roundtrip_suite(&mut b, seed),
        SuiteName::Claim => claim_suite(&mut b, seed),
        SuiteName::DnkDichotomy => dichotomy_suite(&mut b, seed),
        SuiteName::Adversarial => adversarial_suite(&mut b, seed),
    }
    b.finish()
}

fn gauss_lucas_suite(b: &mut Builder, seed: u64) {
    let sampler = Sampler::default();
    let cfg = RootConfig::default();
    let results: Vec<(Case, Case, f64)> = (0..GAUSS_LUCAS_TRIALS)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 1, i);
            let degree = rng.random_range(2..=10);
            let p = sampler.sample_degree(degree, &mut rng);
            let repro = format!("{BIN_NAME} gauss-lucas --poly {} --tol {HULL_TOL:e}", inline(&p));
            match gauss_lucas_check(&p, HULL_TOL, &cfg) {
                Ok(r) => {
                    let worst = r.margins.iter().copied().fold(f64::INFINITY, f64::min);
                    let hull = if r.pass {
                        Ok(())
                    } else {
                        Err((format!("critical point outside hull, margin {worst:e}"), repro.clone()))
                    };
                    let (d, dd) = (diameter(&r.roots), diameter(&r.critical_points));
                    let diam = if dd <= d + HULL_TOL {
                        Ok(())
                    } else {
                        Err((format!("diam Z(P') = {dd} > diam Z(P) = {d}"), repro))
                    };
                    (hull, diam, worst)
                }
                Err(e) => {
                    let err = Err((e.to_string(), repro));
                    (err.clone(), err, f64::NEG_INFINITY)
                }
            }
        })
        .collect();
    let worst = results.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let (hull, diam): (Vec<_>, Vec<_>) = results.into_iter().map(|(h, d, _)| (h, d)).unzip();
    b.check("hull-containment", hull);
    b.check("diameter-nonincrease", diam);
    b.metric("min_margin", worst);
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= ROUNDTRIP_PARAM_TOL
}

fn functional(n: usize, rng: &mut impl Rng) -> LinearFunctional {
    LinearFunctional::new((0..=n).map(|_| annulus(rng)).collect())
}

fn roundtrip_suite(b: &mut Builder, seed: u64) {
    // verdicts are not checked here; a small budget keeps the lookups cheap
    let dnk = DnkLookup::new(
        SearchBudget {
            starts: 4,
            local_evals: 200,
        },
        seed,
    );
    let repro = |op: &MonomialOperator| format!("{BIN_NAME} classify --op {}", inline(op));

    let form1: Vec<_> = (0..ROUNDTRIP_TRIALS)
        .map(|i| {
            let mut rng = rng_for(seed, 2, i);
            let n = rng.random_range(1..=ROUNDTRIP_MAX_N);
            let (l1, l2) = (functional(n, &mut rng), functional(n, &mut rng));
            let op = MonomialOperator::form1(&l1, &l2, n).expect("valid form 1");
            let report = classify(&op, DEFAULT_CLASSIFY_TOL, &dnk);
            let ok = report.matches.iter().any(|m| match m {
                FormMatch::Form1 { l1: g1, l2: g2 } => {
                    g1.weights.iter().zip(&l1.weights).all(|(a, b)| close(*a, *b))
                        && g2.weights.iter().zip(&l2.weights).all(|(a, b)| close(*a, *b))
                }
                _ => false,
            });
            if ok {
                Ok(())
            } else {
                Err((format!("form 1 not recovered, n = {n}"), repro(&op)))
            }
        })
        .collect();
    b.check("form1", form1);

    let form2: Vec<_> = (0..ROUNDTRIP_TRIALS)
        .map(|i| {
            let mut rng = rng_for(seed, 3, i);
            let n = rng.random_range(2..=ROUNDTRIP_MAX_N);
            let m = rng.random_range(2..=n);
            let c = annulus(&mut rng);
            let l3 = functional(n, &mut rng);
            let op = MonomialOperator::form2(c, m, &l3, n).expect("valid form 2");
            let report = classify(&op, DEFAULT_CLASSIFY_TOL, &dnk);
            let ok = report.matches.iter().any(|fm| match fm {
                FormMatch::Form2 { c: gc, m: gm, l3: g3 } => {
                    close(*gc, c) && *gm == m && proportional(&g3.weights, &l3.weights)
                }
                _ => false,
            });
            if ok {
                Ok(())
            } else {
                Err((format!("form 2 not recovered, n = {n}, m = {m}"), repro(&op)))
            }
        })
        .collect();
    b.check("form2", form2);

    let form3: Vec<_> = (0..ROUNDTRIP_TRIALS)
        .map(|i| {
            let mut rng = rng_for(seed, 4, i);
            let n = rng.random_range(2..=ROUNDTRIP_MAX_N);
            let k = rng.random_range(0..=n - 2);
            let c = annulus(&mut rng);
            let map = AffineMap::new(annulus(&mut rng), annulus(&mut rng));
            let op = MonomialOperator::form3(c, k, map, n).expect("valid form 3");
            let report = classify(&op, DEFAULT_CLASSIFY_TOL, &dnk);
            let ok = report.matches.iter().any(|fm| match fm {
                FormMatch::Form3 { c: gc, k: gk, map: gm } => {
                    close(*gc, c) && *gk == k && close(gm.a, map.a) && close(gm.b, map.b)
                }
                _ => false,
            });
            if ok {
                Ok(())
            } else {
                Err((format!("form 3 not recovered, n = {n}, k = {k}"), repro(&op)))
            }
        })
        .collect();
    b.check("form3", form3);
}

/// `got = s * want` for one scalar `s`, within the parameter tolerance
/// relative to the largest weight.
fn proportional(got: &[Complex64], want: &[Complex64]) -> bool {
    if got.len() != want.len() {
        return false;
    }
    let gg: f64 = got.iter().map(|g| g.norm_sqr()).sum();
    if gg == 0.0 {
        return false;
    }
    let s: Complex64 = got.iter().zip(want).map(|(g, w)| g.conj() * w).sum::<Complex64>() / gg;
    let scale = want.iter().map(|w| w.norm()).fold(0.0, f64::max);
    got.iter().zip(want).all(|(g, w)| (s * g - w).norm() <= ROUNDTRIP_PARAM_TOL * scale)
}

fn claim_suite(b: &mut Builder, seed: u64) {
    let cells: Vec<(usize, usize)> = (3..=6).flat_map(|l| (0..CLAIM_BETAS).map(move |j| (l, j))).collect();
    let results: Vec<_> = cells
        .par_iter()
        .enumerate()
        .map(|(i, &(l, _))| {
            let mut rng = rng_for(seed, 5, i);
            let beta = annulus(&mut rng);
            let repro = format!("{BIN_NAME} claim --l {l} --beta {},{}", beta.re, beta.im);
            let sols = match claim_solutions(l, beta) {
                Ok(s) => s,
                Err(e) => return (Err((e.to_string(), repro)), f64::INFINITY),
            };
            let worst = sols.iter().map(|s| s.residual).fold(0.0, f64::max);
            let tol = 1e-8 * (1.0 + beta.norm());
            let one = Complex64::new(1.0, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            let near = |a: Complex64, b: Complex64| (a - b).norm() <= tol;
            let exact = sols.len() == 2
                && near(sols[0].d, one)
                && near(sols[0].gamma, beta)
                && near(sols[0].delta, zero)
                && near(sols[1].d, -one)
                && near(sols[1].gamma, zero)
                && near(sols[1].delta, beta)
                && worst <= 1e-9;
            let r = if exact {
                Ok(())
            } else {
                Err((format!("l = {l}: {} solutions, worst residual {worst:e}", sols.len()), repro))
            };
            (r, worst)
        })
        .collect();
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    b.check("claim-two-solutions", results.into_iter().map(|r| r.0).collect());
    b.metric("claim_worst_residual", worst);

    let beta = Complex64::new(1.0, 0.0);
    let rejected = match claim_solutions(2, beta) {
        Err(_) => Ok(()),
        Ok(_) => Err(("l = 2 accepted".to_string(), format!("{BIN_NAME} claim --l 2 --beta 1,0"))),
    };
    b.check("claim-l2-rejected", vec![rejected]);

    let basis_case = |lambdas: &[Complex64], l: usize, distinct: bool| {
        let pairs: Vec<[f64; 2]> = lambdas.iter().map(|z| [z.re, z.im]).collect();
        let repro = format!("{BIN_NAME} basis --l {l} --lambdas {}", inline(&pairs));
        match shifted_power_basis_matrix(lambdas, l) {
            Ok(m) if m.nonsingular == distinct => Ok(()),
            Ok(m) => Err((
                format!("nonsingular = {}, distinct = {distinct}, relative det {:e}", m.nonsingular, m.relative_determinant),
                repro,
            )),
            Err(e) => Err((e.to_string(), repro)),
        }
    };
    let random: Vec<_> = (0..BASIS_RANDOM)
        .map(|i| {
            let mut rng = rng_for(seed, 6, i);
            let l = rng.random_range(1..=6);
            let lambdas = separated_points(l + 1, &mut rng);
            basis_case(&lambdas, l, true)
        })
        .collect();
    b.check("basis-random", random);
    let collision: Vec<_> = (0..BASIS_COLLISION)
        .map(|i| {
            let mut rng = rng_for(seed, 7, i);
            let l = rng.random_range(1..=6);
            let mut lambdas = separated_points(l + 1, &mut rng);
            let from = rng.random_range(0..=l);
            let to = (from + rng.random_range(1..=l)) % (l + 1);
            lambdas[to] = lambdas[from];
            basis_case(&lambdas, l, false)
        })
        .collect();
    b.check("basis-collision", collision);
}

/// Points in the unit disk, pairwise at least 0.05 apart.
fn separated_points(count: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = Vec::with_capacity(count);
    while pts.len() < count {
        let z = Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
        if pts.iter().all(|q| (q - z).norm() >= 0.05) {
            pts.push(z);
        }
    }
    pts
}

fn dichotomy_suite(b: &mut Builder, seed: u64) {
    let budget = SearchBudget {
        starts: DICHOTOMY_STARTS,
        ..SearchBudget::default()
    };
    let dnk_repro = |n: usize, k: usize| format!("{BIN_NAME} dnk --n {n} --k {k} --starts {DICHOTOMY_STARTS} --seed {seed}");

    let mut saturating = Vec::new();
    for (n, k) in [(4, 1), (5, 1), (6, 1), (6, 2)] {
        let est = estimate_dnk(n, k, &budget, seed).expect("valid range");
        b.metric(&format!("d_{n}_{k}"), est.best_ratio);
        saturating.push(if est.best_ratio >= 0.999 {
            Ok(())
        } else {
            Err((format!("d_{{{n},{k}}} search reached only {}", est.best_ratio), dnk_repro(n, k)))
        });
    }
    b.check("saturating", saturating);

    let search_cfg = crate::extremal::search_root_config();
    let mut strict_search = Vec::new();
    for (n, k, bound) in strict_pairs() {
        let est = estimate_dnk(n, k, &budget, seed).expect("valid range");
        b.metric(&format!("d_{n}_{k}"), est.best_ratio);
        strict_search.push(if est.best_ratio <= bound {
            Ok(())
        } else {
            Err((format!("d_{{{n},{k}}} search reached {} > {bound}", est.best_ratio), dnk_repro(n, k)))
        });

        let sampler = Sampler::default();
        let results: Vec<(Case, f64)> = (0..DICHOTOMY_RANDOM)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(seed, 8 + n as u64 * 16 + k as u64, i);
                let degree = rng.random_range((k + 1).max(2)..=n);
                let p = sampler.sample_degree(degree, &mut rng);
                let repro = format!("{BIN_NAME} ratio --poly {} --k {k} --cluster-radius 1e-3", inline(&p));
                let r = match ratio(&p, k, &search_cfg) {
                    Ok(r) => r,
                    Err(e) => return (Err((e.to_string(), repro)), f64::NAN),
                };
                let res = if r <= bound {
                    Ok(())
                } else {
                    Err((format!("ratio {r} > {bound}"), repro))
                };
                (res, r)
            })
            .collect();
        let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
        b.metric(&format!("random_max_{n}_{k}"), worst);
        b.check(&format!("strict-random-{n}-{k}"), results.into_iter().map(|r| r.0).collect());
    }
    b.check("strict-search", strict_search);

    // the closed-form table itself
    let mut table = Vec::new();
    for n in 2..=8 {
        for k in 0..=n - 2 {
            let expected = 2 * k + 2 <= n;
            let got = known_dnk(n, k) == Some(1.0);
            table.push(if expected == got {
                Ok(())
            } else {
                Err((format!("closed form wrong at ({n}, {k})"), dnk_repro(n, k)))
            });
        }
    }
    b.check("closed-form", table);
}

/// `(n, k, bound)` on the strict side of the dichotomy.
fn strict_pairs() -> [(usize, usize, f64); 2] {
    [(3, 1, 2.0 / 3.0 + 1e-3), (4, 2, 1.0 - 1e-3)]
}

fn adversarial_suite(b: &mut Builder, seed: u64) {
    let cfg = RootConfig::default();
    let mut pm = Vec::new();
    let mut worst = 0.0f64;
    for t in 1..=3 {
        for m in [10.0f64, 100.0, 1000.0] {
            let p = pm_polynomial(t, m);
            let repro = format!("{BIN_NAME} diam --poly {}", inline(&p));
            let expected = 2.0 * m.sqrt();
            pm.push(match find_roots(&p, &cfg) {
                Ok(zs) => {
                    let rel = (diameter(&zs) - expected).abs() / expected;
                    worst = worst.max(rel);
                    if rel <= 1e-6 {
                        Ok(())
                    } else {
                        Err((format!("t = {t}, M = {m}: relative error {rel:e}"), repro))
                    }
                }
                Err(e) => Err((e.to_string(), repro)),
            });
        }
    }
    b.check("pm-diameter", pm);
    b.metric("pm_worst_relative_error", worst);

    let refute_repro = |op: &MonomialOperator, trials: usize| {
        format!("{BIN_NAME} refute --op {} --trials {trials} --seed {seed}", inline(op))
    };

    let half = MonomialOperator::substitution(4, AffineMap::new(Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)));
    let config = NonexpansiveConfig {
        trials: 0,
        seed,
        ..NonexpansiveConfig::default()
    };
    let outcome = test_nonexpansive(&half, &config);
    let found = match &outcome {
        NonexpansiveOutcome::Counterexample(cx) => {
            let r = cx.diam_image / cx.diam_p;
            b.metric("half_scaling_ratio", r);
            if (r - 2.0).abs() <= 1e-6 && cx.family != "random" {
                Ok(())
            } else {
                Err((format!("ratio {r} from family {}", cx.family), refute_repro(&half, 0)))
            }
        }
        NonexpansiveOutcome::NoCounterexampleFound { .. } => {
            Err(("no counterexample in the adversarial batch".to_string(), refute_repro(&half, 0)))
        }
    };
    b.check("refute-half-scaling", vec![found]);

    let survivors = [
        (
            "refute-double-scaling",
            MonomialOperator::substitution(5, AffineMap::new(Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0))),
        ),
        ("refute-derivative", MonomialOperator::derivative(5, 1)),
    ];
    for (name, op) in survivors {
        let config = NonexpansiveConfig {
            trials: REFUTE_TRIALS,
            seed,
            ..NonexpansiveConfig::default()
        };
        let r = match test_nonexpansive(&op, &config) {
            NonexpansiveOutcome::NoCounterexampleFound { skipped: 0, .. } => Ok(()),
            NonexpansiveOutcome::NoCounterexampleFound { skipped, .. } => {
                Err((format!("{skipped} trials skipped"), refute_repro(&op, REFUTE_TRIALS)))
            }
            NonexpansiveOutcome::Counterexample(cx) => Err((
                format!("trial {}: {} > {}", cx.trial, cx.diam_image, cx.diam_p),
                refute_repro(&op, REFUTE_TRIALS),
            )),
        };
        b.check(name, vec![r]);
    }
}
