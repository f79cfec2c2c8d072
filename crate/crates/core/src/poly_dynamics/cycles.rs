use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::polynomial::Polynomial;
use super::roots::{all_roots, RootOptions};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleKind {
    SuperAttracting,
    Attracting,
    /// Multiplier is a primitive `q`-th root of unity.
    Parabolic(u32),
    Repelling,
    IndifferentOther,
}

impl CycleKind {
    pub fn is_attracting_or_parabolic(self) -> bool {
        matches!(
            self,
            CycleKind::SuperAttracting | CycleKind::Attracting | CycleKind::Parabolic(_)
        )
    }
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleKind::SuperAttracting => f.write_str("super-attracting"),
            CycleKind::Attracting => f.write_str("attracting"),
            CycleKind::Parabolic(q) => write!(f, "parabolic({q})"),
            CycleKind::Repelling => f.write_str("repelling"),
            CycleKind::IndifferentOther => f.write_str("indifferent-other"),
        }
    }
}

impl Serialize for CycleKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleClass {
    pub points: Vec<Complex64>,
    pub period: usize,
    pub multiplier: Complex64,
    pub kind: CycleKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// `|λ| ≤ tol0` counts as super-attracting.
    pub tol0: f64,
    /// Width of the indifferent band around `|λ| = 1`, and the root-of-unity test.
    pub tol1: f64,
    pub q_max: u32,
    /// Relative tolerance for `f(x_i) = x_{i+1}`.
    pub invariance_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tol0: 1e-8,
            tol1: 1e-9,
            q_max: 12,
            invariance_tol: 1e-7,
        }
    }
}

/// Multiplier and type of the cycle `x_0 → x_1 → … → x_0`.
pub fn classify_cycle(p: &Polynomial, points: &[Complex64], opts: &ClassifyOptions) -> Result<CycleClass> {
    if points.is_empty() {
        return Err(Error::invalid("a cycle needs at least one point"));
    }
    let n = points.len();
    let mut multiplier = Complex64::new(1.0, 0.0);
    for (i, &x) in points.iter().enumerate() {
        let (fx, dfx) = p.evaluate(x);
        let next = points[(i + 1) % n];
        if (fx - next).norm() > opts.invariance_tol * (1.0 + next.norm()) {
            return Err(Error::invalid(format!(
                "points are not a cycle: f({x}) = {fx}, expected {next}"
            )));
        }
        multiplier *= dfx;
    }
    Ok(CycleClass {
        points: points.to_vec(),
        period: n,
        multiplier,
        kind: kind_of(multiplier, opts),
    })
}

fn kind_of(lambda: Complex64, opts: &ClassifyOptions) -> CycleKind {
    let m = lambda.norm();
    if m <= opts.tol0 {
        return CycleKind::SuperAttracting;
    }
    if m < 1.0 - opts.tol1 {
        return CycleKind::Attracting;
    }
    if m > 1.0 + opts.tol1 {
        return CycleKind::Repelling;
    }
    (1..=opts.q_max)
        .find(|&q| (lambda.powu(q) - 1.0).norm() <= opts.tol1)
        .map_or(CycleKind::IndifferentOther, CycleKind::Parabolic)
}

/// All cycles of period `1..=max_period`, each listed once, starting from its
/// point of least `(re, im)`.
///
/// Solves `f^q(z) = z` directly, so `d^max_period` must stay at most 64.
pub fn find_cycles(
    p: &Polynomial,
    max_period: usize,
    roots: &RootOptions,
    opts: &ClassifyOptions,
) -> Result<Vec<CycleClass>> {
    if max_period == 0 {
        return Err(Error::invalid("max_period must be >= 1"));
    }
    let d = p.degree();
    if (d as f64).powi(max_period as i32) > 64.0 {
        return Err(Error::invalid(format!(
            "degree^max_period = {d}^{max_period} exceeds the root finder budget of 64"
        )));
    }

    let mut cycles = Vec::new();
    for q in 1..=max_period {
        let mut g = p.composition_power(q);
        g[1] -= 1.0;
        let sols: Vec<Complex64> = all_roots(&g, roots)?.into_iter().map(|r| r.value).collect();
        let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-6 * (1.0 + b.norm());
        let snap = |z: Complex64| {
            sols.iter()
                .copied()
                .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
                .unwrap()
        };

        let mut seen: Vec<Vec<Complex64>> = Vec::new();
        for &r in &sols {
            let minimal = (1..=q).find(|&k| close(p.iterate(r, k), r)).unwrap_or(q);
            if minimal != q || seen.iter().any(|c| c.iter().any(|&x| close(x, r))) {
                continue;
            }
            let mut orbit = Vec::with_capacity(q);
            let mut z = r;
            for _ in 0..q {
                orbit.push(snap(z));
                z = p.eval(z);
            }
            let start = (0..q)
                .min_by(|&a, &b| {
                    orbit[a].re.total_cmp(&orbit[b].re).then(orbit[a].im.total_cmp(&orbit[b].im))
                })
                .unwrap();
            orbit.rotate_left(start);
            seen.push(orbit.clone());
            cycles.push(classify_cycle(p, &orbit, opts)?);
        }
    }
    Ok(cycles)
}
