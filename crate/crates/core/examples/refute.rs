//! Searches for inputs whose image has a larger zero-set diameter.
//!
//! cargo run --release --example refute -- 2000

use polydiam::operator::{test_nonexpansive, NonexpansiveConfig, NonexpansiveOutcome};
use polydiam::{AffineMap, Complex64, MonomialOperator};

fn main() {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1000);
    let config = NonexpansiveConfig {
        trials,
        seed: 3,
        ..NonexpansiveConfig::default()
    };
    let scale = |a: f64, n| MonomialOperator::substitution(n, AffineMap::new(Complex64::new(a, 0.0), Complex64::new(0.0, 0.0)));
    for (label, op) in [
        ("P(z/2) on P_4", scale(0.5, 4)),
        ("P(2z) on P_5", scale(2.0, 5)),
        ("P' on P_5", MonomialOperator::derivative(5, 1)),
    ] {
        match test_nonexpansive(&op, &config) {
            NonexpansiveOutcome::Counterexample(cx) => println!(
                "{label}: counterexample at trial {} ({}), diam {:.6} -> {:.6}, ratio {:.9}",
                cx.trial,
                cx.family,
                cx.diam_p,
                cx.diam_image,
                cx.diam_image / cx.diam_p
            ),
            NonexpansiveOutcome::NoCounterexampleFound {
                trials_run, vacuous, skipped, ..
            } => println!("{label}: none in {trials_run} trials ({vacuous} vacuous, {skipped} skipped)"),
        }
    }
}
