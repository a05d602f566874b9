//! Single-distinct-zero probe: does L map (z + alpha)^s to a polynomial
//! with one distinct zero?
//!
//! cargo run --example probe

use polydiam::operator::{default_alpha_grid, single_zero_probe};
use polydiam::{AffineMap, Complex64, LinearFunctional, MonomialOperator, Polynomial, RootConfig};

fn main() {
    let grid = default_alpha_grid(12);
    let cfg = RootConfig::default();
    let c = |re: f64| Complex64::new(re, 0.0);
    let n = 3;
    let ops = [
        ("P(2z - 1)", MonomialOperator::substitution(n, AffineMap::new(c(2.0), c(-1.0)))),
        ("(z + 1)^2 P(0)", MonomialOperator::form2(c(-1.0), 2, &LinearFunctional::basis(0, n), n).unwrap()),
        (
            "z^j -> z^j + j",
            MonomialOperator::new(
                n,
                (0..=n)
                    .map(|j| {
                        let mut coeffs = vec![c(0.0); j + 1];
                        coeffs[0] = c(j as f64);
                        coeffs[j] += c(1.0);
                        Polynomial::new(coeffs)
                    })
                    .collect(),
            )
            .unwrap(),
        ),
    ];
    for (label, op) in &ops {
        let r = single_zero_probe(op, &grid, &cfg);
        println!(
            "{label}: {} checked, {} violations, {} skipped",
            r.checked,
            r.violations.len(),
            r.skipped.len()
        );
        if let Some(v) = r.violations.first() {
            println!("  e.g. s = {}, alpha = {:.3}: {} distinct zeros", v.s, v.alpha, v.distinct_zeros);
        }
    }
}
