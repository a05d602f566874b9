//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use clap::Parser;
use polydiam::extremal::{ratio, ratio_of_roots, search_root_config};
use polydiam::harness::{dispatch, RunConfig, SuiteName, SuiteSummary};
use polydiam::{Complex64, Polynomial};
use serde_json::Value;

const SEED: u64 = 1;

fn run(args: &[&str]) -> String {
    let cfg = RunConfig::try_parse_from(std::iter::once("polydiam").chain(args.iter().copied())).expect("valid args");
    let out = dispatch(&cfg);
    assert_eq!(out.exit_code, 0, "{args:?}: {}", out.json);
    out.json
}

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, title: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} [{id:>2}] {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn all_passed(s: &SuiteSummary, names: &[&str]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        match s.check(name) {
            Some(c) => {
                ok &= c.passed == c.trials && c.trials > 0;
                parts.push(format!("{name} {}/{}", c.passed, c.trials));
            }
            None => {
                ok = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    for f in s.failures.iter().filter(|f| names.contains(&f.check.as_str())).take(3) {
        parts.push(format!("failure: {} | repro: {}", f.detail, f.repro));
    }
    (ok, parts.join(", "))
}

fn main() {
    let mut report = Report { failed: 0 };

    // 1
    let doc: Value = serde_json::from_str(&run(&["dnk", "--n", "3", "--k", "1", "--starts", "200", "--seed", "7"])).unwrap();
    let best = doc["best_ratio"].as_f64().unwrap();
    let witness: Vec<Complex64> = doc["witness_roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| Complex64::new(p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
        .collect();
    let cfg = search_root_config();
    let again = ratio_of_roots(&witness, 1, &cfg).unwrap();
    let via_poly = ratio(&Polynomial::from_roots(&witness, Complex64::new(1.0, 0.0)).unwrap(), 1, &cfg).unwrap();
    let in_range = (2.0 / 3.0 - 1e-4..=2.0 / 3.0 + 1e-3).contains(&best);
    let reproducible = (again - best).abs() <= 1e-8 && (via_poly - best).abs() <= 1e-8;
    report.line(
        1,
        "d_{3,1} reproduction",
        in_range && reproducible,
        format!("best {best:.12}, re-evaluated {again:.12}, from coefficients {via_poly:.12}"),
    );

    // each suite twice; criteria read the first run
    let mut summaries = std::collections::BTreeMap::new();
    let mut identical = Vec::new();
    for name in SuiteName::ALL {
        let args = ["suite", name.as_str(), "--seed", "1"];
        let (first, second) = (run(&args), run(&args));
        identical.push((name.as_str(), first == second));
        let summary: SuiteSummary = serde_json::from_str(&first).unwrap();
        assert_eq!(summary.seed, SEED);
        summaries.insert(name.as_str(), summary);
    }

    // 2
    let dich = &summaries["dnk-dichotomy"];
    let (ok, detail) = all_passed(dich, &["saturating"]);
    let values: Vec<String> = ["d_4_1", "d_5_1", "d_6_1", "d_6_2"]
        .iter()
        .map(|k| format!("{k} = {:.9}", dich.metrics[*k]))
        .collect();
    report.line(2, "dichotomy, saturating side", ok, format!("{detail}; {}", values.join(", ")));

    // 3
    let (ok, detail) = all_passed(dich, &["strict-random-3-1", "strict-random-4-2", "strict-search"]);
    report.line(
        3,
        "dichotomy, strict side",
        ok,
        format!(
            "{detail}; search d_3_1 = {:.9}, d_4_2 = {:.9}; random max {:.6} / {:.6}",
            dich.metrics["d_3_1"], dich.metrics["d_4_2"], dich.metrics["random_max_3_1"], dich.metrics["random_max_4_2"]
        ),
    );

    // 4
    let gl = &summaries["gauss-lucas"];
    let (ok, detail) = all_passed(gl, &["hull-containment", "diameter-nonincrease"]);
    let ok = ok && gl.check("hull-containment").is_some_and(|c| c.trials == 10_000);
    report.line(4, "Gauss-Lucas suite", ok, format!("{detail}; min margin {:e}", gl.metrics["min_margin"]));

    // 5
    let adv = &summaries["adversarial"];
    let (ok, detail) = all_passed(adv, &["pm-diameter"]);
    let ok = ok && adv.check("pm-diameter").is_some_and(|c| c.trials == 9);
    report.line(
        5,
        "P_M diameters",
        ok,
        format!("{detail}; worst relative error {:e}", adv.metrics["pm_worst_relative_error"]),
    );

    // 6
    let rt = &summaries["roundtrip"];
    let (ok, detail) = all_passed(rt, &["form1", "form2", "form3"]);
    let ok = ok && rt.checks.iter().all(|c| c.trials == 1000);
    report.line(6, "classification round trip", ok, detail);

    // 7
    let (ok, detail) = all_passed(adv, &["refute-half-scaling", "refute-double-scaling", "refute-derivative"]);
    report.line(
        7,
        "refutation",
        ok,
        format!("{detail}; P(z/2) ratio {:.12}", adv.metrics.get("half_scaling_ratio").copied().unwrap_or(f64::NAN)),
    );

    // 8
    let claim = &summaries["claim"];
    let (ok, detail) = all_passed(claim, &["claim-two-solutions", "claim-l2-rejected"]);
    let ok = ok && claim.check("claim-two-solutions").is_some_and(|c| c.trials == 80);
    report.line(
        8,
        "claim solver",
        ok,
        format!("{detail}; worst residual {:e}", claim.metrics["claim_worst_residual"]),
    );

    // 9
    let (ok, detail) = all_passed(claim, &["basis-random", "basis-collision"]);
    report.line(9, "shifted-power basis", ok, detail);

    // 10
    let ok = identical.iter().all(|(_, same)| *same);
    let detail: Vec<String> = identical
        .iter()
        .map(|(n, same)| format!("{n} {}", if *same { "identical" } else { "DIFFERS" }))
        .collect();
    report.line(10, "determinism", ok, detail.join(", "));

    println!("{} of 10 criteria passed", 10 - report.failed);
    if report.failed > 0 {
        std::process::exit(1);
    }
}
