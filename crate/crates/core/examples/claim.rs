//! Solutions of (w + beta)^l - w^l = d [(w + gamma)^l - (w + delta)^l],
//! and the shifted-power basis check.
//!
//! cargo run --example claim

use polydiam::operator::{claim_solutions, shifted_power_basis_matrix};
use polydiam::Complex64;

fn main() {
    for (l, beta) in [(3, Complex64::new(1.0, 0.0)), (5, Complex64::new(2.0, 1.0))] {
        println!("l = {l}, beta = {beta}");
        for s in claim_solutions(l, beta).unwrap() {
            println!(
                "  d = {:.9}  gamma = {:.9}  delta = {:.9}  residual {:.1e}",
                s.d, s.gamma, s.delta, s.residual
            );
        }
    }
    if let Err(e) = claim_solutions(2, Complex64::new(1.0, 0.0)) {
        println!("l = 2: {e}");
    }

    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    for lambdas in [vec![-one, i, one, -i], vec![-one, i, one, i]] {
        let m = shifted_power_basis_matrix(&lambdas, 3).unwrap();
        let shown: Vec<String> = lambdas.iter().map(|z| format!("{z}")).collect();
        println!(
            "lambdas [{}]: |det| = {:.3}, nonsingular = {}",
            shown.join(", "),
            m.determinant.norm(),
            m.nonsingular
        );
    }
}
