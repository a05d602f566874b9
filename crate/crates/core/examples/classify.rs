//! Builds one operator of each canonical form and classifies it.
//!
//! cargo run --example classify

use polydiam::extremal::DnkLookup;
use polydiam::operator::DEFAULT_CLASSIFY_TOL;
use polydiam::{classify, AffineMap, Complex64, LinearFunctional, MonomialOperator, Polynomial};

fn main() {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let dnk = DnkLookup::default();
    let n = 4;
    let ops = [
        (
            "z l1 + l2",
            MonomialOperator::form1(
                &LinearFunctional::basis(1, n),
                &LinearFunctional::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, -1.0)]),
                n,
            )
            .unwrap(),
        ),
        (
            "(z - 1)^3 l3",
            MonomialOperator::form2(c(1.0, 0.0), 3, &LinearFunctional::basis(2, n), n).unwrap(),
        ),
        ("P'", MonomialOperator::derivative(n, 1)),
        ("P(z/2)", MonomialOperator::substitution(n, AffineMap::new(c(0.5, 0.0), c(0.0, 0.0)))),
        (
            "unstructured",
            MonomialOperator::new(
                n,
                (0..=n)
                    .map(|j| Polynomial::monomial((j + 2) % (n + 1)))
                    .collect(),
            )
            .unwrap(),
        ),
    ];
    for (label, op) in &ops {
        let report = classify(op, DEFAULT_CLASSIFY_TOL, &dnk);
        println!("{label}");
        println!("{}", serde_json::to_string(&report).unwrap());
    }
}
