//! Estimates d_{n,k} by multi-start search and prints the witness.
//!
//! cargo run --release --example estimate_dnk -- 3 1 200

use polydiam::extremal::{estimate_dnk, known_dnk, ratio_of_roots, search_root_config, SearchBudget};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n, k) = (args.first().copied().unwrap_or(3), args.get(1).copied().unwrap_or(1));
    let budget = SearchBudget {
        starts: args.get(2).copied().unwrap_or(200),
        ..SearchBudget::default()
    };

    let t = std::time::Instant::now();
    let est = estimate_dnk(n, k, &budget, 7).expect("valid (n, k)");
    let elapsed = t.elapsed();

    println!("d_{{{n},{k}}} >= {:.10}  (known: {:?})", est.best_ratio, known_dnk(n, k));
    println!("witness (degree {}):", est.degree_used);
    for r in &est.witness_roots {
        println!("  {:+.8} {:+.8}i", r.re, r.im);
    }
    let again = ratio_of_roots(&est.witness_roots, k, &search_root_config()).unwrap();
    println!("re-evaluated ratio: {again:.12}");
    println!("{} local searches, {:.0}% converged, {elapsed:.2?}", est.starts, 100.0 * est.converged_fraction);
}
