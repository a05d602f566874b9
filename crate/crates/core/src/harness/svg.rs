use std::fmt::Write;

use num_complex::Complex64;

use crate::geometry::convex_hull;

const SIZE: f64 = 480.0;
const PAD: f64 = 32.0;

/// Zeros as circles, critical points as crosses, and the hull of the zeros.
pub fn render_svg(zeros: &[Complex64], critical: &[Complex64]) -> String {
    let all: Vec<Complex64> = zeros.iter().chain(critical).copied().collect();
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64);
    for z in &all {
        lo_x = lo_x.min(z.re);
        hi_x = hi_x.max(z.re);
        lo_y = lo_y.min(z.im);
        hi_y = hi_y.max(z.im);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y);
    let scale = (SIZE - 2.0 * PAD) / span;
    // y axis points up
    let px = |z: Complex64| (PAD + (z.re - lo_x) * scale, SIZE - PAD - (z.im - lo_y) * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let hull = convex_hull(zeros);
    if hull.vertices.len() >= 2 {
        let pts: Vec<String> = hull
            .vertices
            .iter()
            .map(|&v| {
                let (x, y) = px(v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r##"<polygon points="{}" fill="#dde8f5" stroke="#3060a0" stroke-width="1.5"/>"##,
            pts.join(" ")
        );
    }
    for &z in zeros {
        let (x, y) = px(z);
        let _ = writeln!(
            s,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="none" stroke="#1a3a6a" stroke-width="1.5"/>"##
        );
    }
    for &z in critical {
        let (x, y) = px(z);
        let _ = writeln!(
            s,
            r##"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="#c03020" stroke-width="1.5"/>"##,
            x - 4.0,
            y - 4.0,
            x + 4.0,
            y + 4.0,
            x - 4.0,
            y + 4.0,
            x + 4.0,
            y - 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_marks() {
        let zeros = [Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let svg = render_svg(&zeros, &[Complex64::new(0.0, 0.5)]);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.ends_with("</svg>\n"));
    }
}
