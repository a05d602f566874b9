//! Table of d_{n,k} lower bounds, written as CSV.
//!
//! cargo run --release --example dnk_table -- 6 60 table.csv

use polydiam::extremal::{dnk_table, Exactness, SearchBudget};
use polydiam::harness::write_dnk_csv;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n_max = args.first().and_then(|a| a.parse().ok()).unwrap_or(5);
    let starts = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(40);
    let budget = SearchBudget {
        starts,
        ..SearchBudget::default()
    };
    let rows = dnk_table(n_max, &budget, 11).unwrap();
    println!(" n  k  best ratio     flag");
    for r in &rows {
        let flag = match r.exactness {
            Exactness::Exact => "exact",
            Exactness::Estimate => "lower bound",
        };
        println!("{:2} {:2}  {:.10}  {flag}", r.estimate.n, r.estimate.k, r.estimate.best_ratio);
    }
    if let Some(path) = args.get(2) {
        write_dnk_csv(std::path::Path::new(path), &rows).expect("csv written");
        println!("wrote {path}");
    }
}
