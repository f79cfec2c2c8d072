use num_complex::Complex64;

use crate::error::{Error, Result};

/// Distance from `z` to the closed polyline through `vertices`.
pub fn distance_to_polyline(vertices: &[Complex64], z: Complex64) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|k| segment_distance(vertices[k], vertices[(k + 1) % n], z))
        .fold(f64::INFINITY, f64::min)
}

fn segment_distance(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// Extent of the polyline: the diagonal of its bounding box.
pub fn diameter(vertices: &[Complex64]) -> f64 {
    let (mut lo, mut hi) = (
        Complex64::new(f64::INFINITY, f64::INFINITY),
        Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for v in vertices {
        lo = Complex64::new(lo.re.min(v.re), lo.im.min(v.im));
        hi = Complex64::new(hi.re.max(v.re), hi.im.max(v.im));
    }
    (hi - lo).norm()
}

/// Winding number of the closed polyline around `z`.
///
/// Fails with `TooCloseToBoundary` when `z` is within `guard · diameter` of the
/// polyline.
pub fn winding_number(vertices: &[Complex64], z: Complex64, guard: f64) -> Result<i64> {
    if vertices.len() < 3 {
        return Err(Error::invalid("a closed polyline needs at least 3 vertices"));
    }
    let margin = guard * diameter(vertices);
    let distance = distance_to_polyline(vertices, z);
    if distance <= margin {
        return Err(Error::TooCloseToBoundary { distance, guard: margin });
    }
    let n = vertices.len();
    let total: f64 = (0..n)
        .map(|k| ((vertices[(k + 1) % n] - z) / (vertices[k] - z)).arg())
        .sum();
    let turns = total / std::f64::consts::TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() >= 0.25 {
        return Err(Error::NumericalFailure(format!(
            "winding sum {turns:.6} turns is not near an integer"
        )));
    }
    Ok(rounded as i64)
}

/// `n` counterclockwise samples of the circle `|z| = r`, starting on the positive real axis.
pub fn circle(radius: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}
