//! Path lifting of closed polylines through a polynomial.
//!
//! Points are kept as offsets from a reference point on each side: the base
//! polyline is `y + w_k`, the lift is `x + δ`, and `δ` solves `h(δ) = w` with
//! `h(δ) = f(x + δ) − y`. Deep pullbacks shrink to scales far below the
//! spacing of doubles near `x`, and the offsets keep them at full precision.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::winding::{diameter, winding_number};
use crate::error::{Error, Result};
use crate::poly_dynamics::{all_roots, horner, Polynomial, RootOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftOptions {
    /// Samples on a freshly drawn circle.
    pub samples: usize,
    /// A continuation step may move at most this multiple of its predicted length.
    pub jump_factor: f64,
    /// Maximum number of halvings of one base segment.
    pub max_refinement: u32,
    /// Lifted polylines longer than this are thinned by arc length.
    pub max_vertices: usize,
    /// Critical values closer than `guard · radius` to a base polyline make it unsafe.
    pub guard: f64,
    /// Relative guard of winding-number queries.
    pub winding_guard: f64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        Self {
            samples: 512,
            jump_factor: 4.0,
            max_refinement: 30,
            max_vertices: 4096,
            guard: 1e-3,
            winding_guard: 1e-4,
        }
    }
}

impl LiftOptions {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 8 {
            return Err(Error::invalid("samples must be >= 8"));
        }
        if !(self.jump_factor > 1.0) {
            return Err(Error::invalid("jump_factor must exceed 1"));
        }
        if self.max_vertices < self.samples {
            return Err(Error::invalid("max_vertices must be >= samples"));
        }
        if !(self.guard > 0.0 && self.guard < 0.5) || !(self.winding_guard > 0.0 && self.winding_guard < 0.5) {
            return Err(Error::invalid("guards must lie in (0, 0.5)"));
        }
        Ok(())
    }
}

/// A closed lift: polyline offsets and the number `t` of base loops it covers.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    pub offsets: Vec<Complex64>,
    pub loops: usize,
}

/// One predictor–corrector step from `h(δ) = w0` to `h(·) = w1`.
fn step(h: &[Complex64], delta: Complex64, w0: Complex64, w1: Complex64, jump_factor: f64) -> Option<Complex64> {
    let (_, dh) = horner(h, delta);
    let predicted = (w1 - w0) / dh;
    if !predicted.is_finite() {
        return None;
    }
    let scale = predicted.norm();
    let mut z = delta + predicted;
    for _ in 0..12 {
        let (v, dv) = horner(h, z);
        let correction = (v - w1) / dv;
        if !correction.is_finite() {
            return None;
        }
        z -= correction;
        if correction.norm() <= (1e-12 * scale).max(4.0 * f64::EPSILON * z.norm()) {
            return ((z - delta).norm() <= jump_factor * scale).then_some(z);
        }
    }
    None
}

/// Lifts the closed polyline `base` through `h`, starting from `start` with
/// `h(start) = base[0]`, looping the base until the lift closes.
pub fn lift_closed(h: &[Complex64], base: &[Complex64], start: Complex64, level: usize, opts: &LiftOptions) -> Result<Lift> {
    let degree = h.len() - 1;
    let m = base.len();
    let mut pts = vec![start];
    let mut delta = start;
    let min_step = 0.5f64.powi(opts.max_refinement as i32);

    for loops in 1..=degree {
        for k in 0..m {
            let (a, b) = (base[k], base[(k + 1) % m]);
            let (mut s, mut ds) = (0.0f64, 1.0f64);
            while s < 1.0 {
                let s1 = (s + ds).min(1.0);
                match step(h, delta, a + (b - a) * s, a + (b - a) * s1, opts.jump_factor) {
                    Some(next) => {
                        delta = next;
                        s = s1;
                        pts.push(delta);
                        ds *= 2.0;
                    }
                    None => {
                        ds *= 0.5;
                        if ds < min_step {
                            return Err(Error::ContinuationFailure {
                                level,
                                parameter: (loops - 1) as f64 + (k as f64 + s) / m as f64,
                                reason: format!("branch ambiguous after {} bisections", opts.max_refinement),
                            });
                        }
                    }
                }
            }
        }
        if (delta - start).norm() <= 1e-6 * diameter(&pts) {
            pts.pop();
            return Ok(Lift {
                offsets: decimate(&pts, opts.max_vertices),
                loops,
            });
        }
    }
    Err(Error::ContinuationFailure {
        level,
        parameter: degree as f64,
        reason: format!("lift did not close after {degree} loops"),
    })
}

/// Lifts the boundary `y + base` through `p` to the component containing `seed`.
///
/// Tries the preimages of `y + base[0]` nearest to `seed` first and keeps the
/// first closed lift that winds around `seed`. Offsets of the result are
/// relative to `seed`.
pub fn lift_boundary(
    p: &Polynomial,
    y: Complex64,
    base: &[Complex64],
    seed: Complex64,
    level: usize,
    opts: &LiftOptions,
    roots: &RootOptions,
) -> Result<Lift> {
    if base.len() < 3 {
        return Err(Error::invalid("base polyline needs at least 3 vertices"));
    }
    let h = p.local_map(seed, y);
    let mut shifted = h.clone();
    shifted[0] -= base[0];
    let mut starts: Vec<Complex64> = all_roots(&shifted, roots)?.into_iter().map(|r| r.value).collect();
    starts.sort_by(|a, b| a.norm().total_cmp(&b.norm()));

    let mut last_err = None;
    for start in starts {
        match lift_closed(&h, base, start, level, opts) {
            Ok(lift) => match winding_number(&lift.offsets, Complex64::new(0.0, 0.0), opts.winding_guard) {
                Ok(0) => {}
                Ok(_) => return Ok(lift),
                Err(e) => last_err = Some(e),
            },
            Err(e) => last_err = Some(e),
        }
    }
    Err(match last_err {
        Some(Error::TooCloseToBoundary { distance, .. }) => Error::ContinuationFailure {
            level,
            parameter: 0.0,
            reason: format!("lifted boundary passes within {distance:.3e} of the orbit point"),
        },
        Some(e @ Error::ContinuationFailure { .. }) => e,
        _ => Error::ContinuationFailure {
            level,
            parameter: 0.0,
            reason: "no closed lift surrounds the orbit point".into(),
        },
    })
}

/// Thins a closed polyline to at most `max` of its own vertices, evenly by arc length.
pub fn decimate(pts: &[Complex64], max: usize) -> Vec<Complex64> {
    let n = pts.len();
    if n <= max {
        return pts.to_vec();
    }
    let seg: Vec<f64> = (0..n).map(|k| (pts[(k + 1) % n] - pts[k]).norm()).collect();
    let total: f64 = seg.iter().sum();
    let spacing = total / max as f64;
    let mut out = Vec::with_capacity(max);
    let mut acc = 0.0;
    let mut next = 0.0;
    for k in 0..n {
        if acc >= next && out.len() < max {
            out.push(pts[k]);
            next += spacing;
            while next <= acc {
                next += spacing;
            }
        }
        acc += seg[k];
    }
    out
}
