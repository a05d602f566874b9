//! Critical points against the hull of the zeros, with an optional SVG.
//!
//! cargo run --example gauss_lucas -- out.svg

use polydiam::geometry::HULL_TOL;
use polydiam::harness::render_svg;
use polydiam::{diameter, gauss_lucas_check, Complex64, Polynomial, RootConfig};

fn main() {
    let one = Complex64::new(1.0, 0.0);
    let roots = [
        Complex64::new(2.0, 0.0),
        Complex64::new(-1.0, 1.5),
        Complex64::new(-1.0, -1.5),
        Complex64::new(0.3, 0.2),
        Complex64::new(0.5, -2.0),
    ];
    let p = Polynomial::from_roots(&roots, one).unwrap();
    let report = gauss_lucas_check(&p, HULL_TOL, &RootConfig::default()).unwrap();

    println!("hull vertices: {}", report.hull.vertices.len());
    for (z, m) in report.critical_points.centers().iter().zip(&report.margins) {
        println!("  critical point {:+.6} {:+.6}i  margin {m:.6}", z.re, z.im);
    }
    println!("pass = {}", report.pass);
    println!(
        "diam Z(P) = {:.6}, diam Z(P') = {:.6}",
        diameter(&report.roots),
        diameter(&report.critical_points)
    );

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, render_svg(&report.roots.centers(), &report.critical_points.centers())).unwrap();
        println!("wrote {path}");
    }
}
