//! Diameter and convex hull of zero sets, and the Gauss-Lucas check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{complex_vec, Polynomial};
use crate::roots::{find_roots, RootConfig, RootError, ZeroSet};

/// Default containment tolerance for floating root approximations.
pub const HULL_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("Gauss-Lucas check needs degree >= 2, got {0:?}")]
    DegreeTooLow(Option<usize>),
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// Maximum pairwise distance over cluster centers. Multiplicity is
/// ignored; empty and singleton sets have diameter 0.
pub fn diameter(zs: &ZeroSet) -> f64 {
    point_diameter(&zs.centers())
}

pub fn point_diameter(points: &[Complex64]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

/// Counterclockwise extreme points, starting from the lowest (then
/// leftmost) vertex. One vertex for a point set, two for a segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct HullPolygon {
    #[serde(with = "complex_vec")]
    pub vertices: Vec<Complex64>,
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Andrew's monotone chain.
pub fn convex_hull(points: &[Complex64]) -> HullPolygon {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() <= 2 {
        return HullPolygon { vertices: pts };
    }

    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    let start = hull
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    hull.rotate_left(start);
    HullPolygon { vertices: hull }
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / len2;
    if t <= 0.0 {
        (p - a).norm()
    } else if t >= 1.0 {
        (p - b).norm()
    } else {
        (p - (a + ab * t)).norm().min((p - a).norm()).min((p - b).norm())
    }
}

impl HullPolygon {
    /// Positive inside (distance to the boundary), negative outside
    /// (minus the distance to the hull).
    pub fn signed_margin(&self, p: Complex64) -> f64 {
        let v = &self.vertices;
        let margin = match v.len() {
            0 => f64::NEG_INFINITY,
            1 => -(p - v[0]).norm(),
            2 => -segment_distance(p, v[0], v[1]),
            n => {
                let edges = (0..n).map(|i| (v[i], v[(i + 1) % n]));
                let inside = edges.clone().all(|(a, b)| cross(a, b, p) >= 0.0);
                if inside {
                    edges
                        .map(|(a, b)| cross(a, b, p) / (b - a).norm())
                        .fold(f64::INFINITY, f64::min)
                } else {
                    -edges
                        .map(|(a, b)| segment_distance(p, a, b))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        };
        // points on the boundary land within a few ulps of it
        let scale = v.iter().map(|z| z.norm()).fold(p.norm(), f64::max);
        if margin.abs() <= 8.0 * f64::EPSILON * scale {
            0.0
        } else {
            margin
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub inside: bool,
    pub margins: Vec<f64>,
}

pub fn hull_contains(hull: &HullPolygon, points: &[Complex64], tol: f64) -> Containment {
    let margins: Vec<f64> = points.iter().map(|&p| hull.signed_margin(p)).collect();
    Containment {
        inside: margins.iter().all(|&m| m >= -tol),
        margins,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussLucasReport {
    pub pass: bool,
    pub tol: f64,
    pub margins: Vec<f64>,
    pub roots: ZeroSet,
    pub critical_points: ZeroSet,
    pub hull: HullPolygon,
}

/// Checks that the zeros of `p'` lie in the convex hull of the zeros of `p`.
pub fn gauss_lucas_check(
    p: &Polynomial,
    tol: f64,
    config: &RootConfig,
) -> Result<GaussLucasReport, GeometryError> {
    match p.degree() {
        Some(d) if d >= 2 => {}
        other => return Err(GeometryError::DegreeTooLow(other)),
    }
    let roots = find_roots(p, config)?;
    let critical_points = find_roots(&p.derivative(1), config)?;
    let hull = convex_hull(&roots.centers());
    let containment = hull_contains(&hull, &critical_points.centers(), tol);
    Ok(GaussLucasReport {
        pass: containment.inside,
        tol,
        margins: containment.margins,
        roots,
        critical_points,
        hull,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::ZeroPoint;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diameter_cases() {
        assert_eq!(diameter(&ZeroSet::empty()), 0.0);
        let single = ZeroSet::from_points(vec![ZeroPoint {
            location: c(3.0, -1.0),
            multiplicity: 7,
        }]);
        assert_eq!(diameter(&single), 0.0);
        // z^3 - 4 z, roots {0, +-2}
        let pm = Polynomial::from_real(&[0.0, -4.0, 0.0, 1.0]);
        let zs = find_roots(&pm, &RootConfig::default()).unwrap();
        assert!((diameter(&zs) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn hull_drops_interior_point() {
        let h = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.25, 0.25)]);
        assert_eq!(h.vertices, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
    }

    #[test]
    fn hull_degenerate() {
        let seg = convex_hull(&[c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(seg.vertices, vec![c(0.0, 0.0), c(2.0, 0.0)]);
        let pt = convex_hull(&[c(0.5, 0.5)]);
        assert_eq!(pt.vertices, vec![c(0.5, 0.5)]);
        assert_eq!(convex_hull(&[c(0.5, 0.5), c(0.5, 0.5)]).vertices.len(), 1);
        assert!(convex_hull(&[]).vertices.is_empty());
    }

    #[test]
    fn hull_starts_lowest_then_leftmost() {
        let h = convex_hull(&[c(0.0, 1.0), c(1.0, -1.0), c(-1.0, -1.0), c(2.0, 2.0)]);
        assert_eq!(h.vertices[0], c(-1.0, -1.0));
        assert_eq!(h.vertices.len(), 4);
        let n = h.vertices.len();
        for i in 0..n {
            let turn = cross(h.vertices[i], h.vertices[(i + 1) % n], h.vertices[(i + 2) % n]);
            assert!(turn > 0.0);
        }
    }

    #[test]
    fn containment_cases() {
        let tri = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
        let centroid = c(1.0 / 3.0, 1.0 / 3.0);
        let r = hull_contains(&tri, &[centroid], 0.0);
        assert!(r.inside && r.margins[0] > 0.0);

        let seg = convex_hull(&[c(0.0, 0.0), c(2.0, 0.0)]);
        assert!(hull_contains(&seg, &[c(1.0, 1e-12)], 1e-9).inside);

        // nearest hull point to 2 is the vertex 1
        let out = hull_contains(&tri, &[c(2.0, 0.0)], 1e-9);
        assert!(!out.inside);
        assert!((out.margins[0] + 1.0).abs() < 1e-15);
        // nearest point of the hypotenuse to (1, 1) is (1/2, 1/2)
        let out = hull_contains(&tri, &[c(1.0, 1.0)], 1e-9);
        assert!((out.margins[0] + 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gauss_lucas_examples() {
        let cfg = RootConfig::default();
        let z5 = Polynomial::monomial(5);
        let r = gauss_lucas_check(&z5, HULL_TOL, &cfg).unwrap();
        assert!(r.pass);
        assert_eq!(r.margins, vec![0.0]);
        assert_eq!(serde_json::to_string(&r.margins).unwrap(), "[0.0]");

        let p = Polynomial::from_roots(&[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)], c(1.0, 0.0)).unwrap();
        let r = gauss_lucas_check(&p, HULL_TOL, &cfg).unwrap();
        assert!(r.pass);
        assert_eq!(r.critical_points.points.len(), 2);
        // P' = 3z^2 - 2iz - 1; quadratic formula gives (i +- sqrt(2)) / 3
        for cp in r.critical_points.centers() {
            let expected_re = 2f64.sqrt() / 3.0;
            assert!((cp.re.abs() - expected_re).abs() < 1e-12);
            assert!((cp.im - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(r.margins.iter().all(|&m| m > 0.0));

        assert_eq!(
            gauss_lucas_check(&Polynomial::from_real(&[1.0, 1.0]), HULL_TOL, &cfg),
            Err(GeometryError::DegreeTooLow(Some(1)))
        );
    }
}
