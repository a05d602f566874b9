//! Zeros of a few polynomials, with multiplicities and cluster radius.
//!
//! cargo run --example roots

use polydiam::roots::MULTIPLE_CLUSTER_RADIUS;
use polydiam::{find_roots, Complex64, Polynomial, RootConfig};

fn show(label: &str, p: &Polynomial, cfg: &RootConfig) {
    let zs = find_roots(p, cfg).expect("nonconstant");
    println!("{label}");
    for z in &zs.points {
        println!("  {:+.12} {:+.12}i  x{}", z.location.re, z.location.im, z.multiplicity);
    }
}

fn main() {
    let cfg = RootConfig::default();
    show("z^2 + 1", &Polynomial::from_real(&[1.0, 0.0, 1.0]), &cfg);

    let one = Complex64::new(1.0, 0.0);
    let triple = Polynomial::from_roots(&[one, one, one, Complex64::new(-2.0, 0.0)], one).unwrap();
    show("(z-1)^3 (z+2)", &triple, &cfg.with_cluster_radius(MULTIPLE_CLUSTER_RADIUS));

    // Wilkinson's polynomial of degree 10
    let w: Vec<Complex64> = (1..=10).map(|j| Complex64::new(j as f64, 0.0)).collect();
    show("prod (z - j), j = 1..10", &Polynomial::from_roots(&w, one).unwrap(), &cfg);
}
