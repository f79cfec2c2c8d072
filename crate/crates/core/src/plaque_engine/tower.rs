use log::{debug, warn};
use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lift::{lift_boundary, LiftOptions};
use super::orbit::BackwardOrbit;
use super::winding::{circle, diameter, distance_to_polyline, winding_number};
use crate::error::{Error, Result};
use crate::poly_dynamics::{critical_points, format_complex, CriticalPoint, Polynomial, RootOptions};
use crate::seq_algebra::TruncatedBits;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::invalid(format!("disk radius must be positive and finite, got {radius}")));
        }
        Ok(Self { center, radius })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Containment {
    Inside,
    Outside,
    /// The critical point grazes the level boundary.
    Indeterminate,
}

/// One level `U_n` of a plaque tower.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaqueLevel {
    pub n: usize,
    /// `x_n`; the boundary is `center + offsets`.
    pub center: Complex64,
    pub offsets: Vec<Complex64>,
    /// Degree of `f: U_n → U_{n−1}` (1 at level 1).
    pub t: usize,
    /// Degree of `f^{n−1}: U_n → U_1`.
    pub cumulative_degree: BigUint,
    /// Per critical point of the tower's polynomial.
    pub containment: Vec<Containment>,
    /// Winding number of the boundary around `x_n`.
    pub center_winding: i64,
}

impl PlaqueLevel {
    pub fn polyline(&self) -> Vec<Complex64> {
        self.offsets.iter().map(|o| self.center + o).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Truncation {
    /// First level that could not be built.
    pub level: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaqueTower {
    pub polynomial: Polynomial,
    pub critical: Vec<CriticalPoint>,
    /// Radius of the first level actually used (after perturbation), if it was a disk.
    pub radius: Option<f64>,
    pub requested_depth: usize,
    pub levels: Vec<PlaqueLevel>,
    pub truncation: Option<Truncation>,
}

impl PlaqueTower {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncation.is_some()
    }

    /// Index of the critical point `c` among `self.critical`.
    pub fn critical_index(&self, c: Complex64) -> Result<usize> {
        self.critical
            .iter()
            .position(|cp| (cp.point - c).norm() <= 1e-7 * (1.0 + c.norm()))
            .ok_or_else(|| Error::invalid(format!("{} is not a critical point", format_complex(c))))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerOptions {
    pub lift: LiftOptions,
    pub roots: RootOptions,
    /// Radius factors tried in turn when a critical value grazes a level boundary.
    pub radius_factors: Vec<f64>,
}

impl Default for TowerOptions {
    fn default() -> Self {
        Self {
            lift: LiftOptions::default(),
            roots: RootOptions::default(),
            radius_factors: vec![1.02, 0.98, 1.04],
        }
    }
}

/// Pulls back `disk` along `orbit` for `depth` levels.
///
/// The disk must be centered on `x_1`. If a critical value grazes some level
/// boundary the radius is perturbed by `opts.radius_factors` in turn. A
/// continuation failure ends the tower early with `truncation` set.
pub fn pullback_tower(
    p: &Polynomial,
    orbit: &BackwardOrbit,
    disk: Disk,
    depth: usize,
    opts: &TowerOptions,
) -> Result<PlaqueTower> {
    let x1 = orbit.point(1);
    if (disk.center - x1).norm() > 1e-9 * (1.0 + x1.norm()) {
        return Err(Error::invalid("the base disk must be centered on x_1"));
    }
    let critical = critical_points(p, &opts.roots)?;
    let mut last = None;
    for factor in std::iter::once(1.0).chain(opts.radius_factors.iter().copied()) {
        let r = disk.radius * factor;
        let base = circle(r, opts.lift.samples);
        match build(p, orbit, base, depth, &critical, opts) {
            Ok(mut tower) => {
                tower.radius = Some(r);
                return Ok(tower);
            }
            Err(e @ Error::UnsafeBoundary { .. }) => {
                warn!("radius {r:.6e}: {e}; perturbing");
                last = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// Pulls back the closed polyline `x_1 + base` along `orbit`.
pub fn pullback_polyline(
    p: &Polynomial,
    orbit: &BackwardOrbit,
    base: Vec<Complex64>,
    depth: usize,
    opts: &TowerOptions,
) -> Result<PlaqueTower> {
    let critical = critical_points(p, &opts.roots)?;
    build(p, orbit, base, depth, &critical, opts)
}

fn containment(offsets: &[Complex64], center: Complex64, critical: &[CriticalPoint], guard: f64) -> Vec<Containment> {
    critical
        .iter()
        .map(|cp| match winding_number(offsets, cp.point - center, guard) {
            Ok(0) => Containment::Outside,
            Ok(_) => Containment::Inside,
            Err(_) => Containment::Indeterminate,
        })
        .collect()
}

fn build(
    p: &Polynomial,
    orbit: &BackwardOrbit,
    base: Vec<Complex64>,
    depth: usize,
    critical: &[CriticalPoint],
    opts: &TowerOptions,
) -> Result<PlaqueTower> {
    opts.lift.validate()?;
    if depth == 0 || depth > orbit.len() {
        return Err(Error::invalid(format!(
            "depth must lie in 1..={}, got {depth}",
            orbit.len()
        )));
    }
    let guard = opts.lift.winding_guard;
    let x1 = orbit.point(1);
    let center_winding = winding_number(&base, Complex64::new(0.0, 0.0), guard)?;
    let mut levels = vec![PlaqueLevel {
        n: 1,
        center: x1,
        containment: containment(&base, x1, critical, guard),
        offsets: base,
        t: 1,
        cumulative_degree: BigUint::from(1u32),
        center_winding,
    }];

    let mut truncation = None;
    for n in 1..depth {
        let prev = &levels[n - 1];
        let y = prev.center;
        let half = diameter(&prev.offsets) / 2.0;
        for cp in critical {
            let v = p.eval(cp.point) - y;
            let distance = distance_to_polyline(&prev.offsets, v);
            if distance <= opts.lift.guard * half {
                return Err(Error::UnsafeBoundary {
                    level: n,
                    value: format_complex(p.eval(cp.point)),
                    distance,
                });
            }
        }
        let x = orbit.point(n + 1);
        match lift_boundary(p, y, &prev.offsets, x, n + 1, &opts.lift, &opts.roots) {
            Ok(lift) => {
                let center_winding = winding_number(&lift.offsets, Complex64::new(0.0, 0.0), guard)?;
                let level = PlaqueLevel {
                    n: n + 1,
                    center: x,
                    containment: containment(&lift.offsets, x, critical, guard),
                    t: lift.loops,
                    cumulative_degree: &prev.cumulative_degree * BigUint::from(lift.loops),
                    offsets: lift.offsets,
                    center_winding,
                };
                debug!("level {}: {} vertices, t = {}", n + 1, level.offsets.len(), level.t);
                levels.push(level);
            }
            Err(e @ Error::ContinuationFailure { .. }) => {
                warn!("tower truncated: {e}");
                truncation = Some(Truncation { level: n + 1, reason: e.to_string() });
                break;
            }
            Err(e) => return Err(e),
        }
    }

    Ok(PlaqueTower {
        polynomial: p.clone(),
        critical: critical.to_vec(),
        radius: None,
        requested_depth: depth,
        levels,
        truncation,
    })
}

/// The window `ind(U, c)` over the levels of `tower`; grazing levels are indeterminate.
pub fn index_sequence(tower: &PlaqueTower, c: Complex64) -> Result<TruncatedBits> {
    let i = tower.critical_index(c)?;
    let bits = tower
        .levels
        .iter()
        .map(|l| match l.containment[i] {
            Containment::Inside => Some(true),
            Containment::Outside => Some(false),
            Containment::Indeterminate => None,
        })
        .collect();
    TruncatedBits::with_indeterminate(bits, 0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhViolation {
    pub level: usize,
    pub t: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhReport {
    pub levels_checked: usize,
    /// Levels skipped because some containment was indeterminate.
    pub levels_skipped: Vec<usize>,
    pub violations: Vec<RhViolation>,
}

impl RhReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `deg(U_n → U_{n−1}) = 1 + Σ (e_c − 1)` over critical points in `U_n`.
pub fn rh_check(tower: &PlaqueTower) -> RhReport {
    let mut report = RhReport {
        levels_checked: 0,
        levels_skipped: Vec::new(),
        violations: Vec::new(),
    };
    for level in tower.levels.iter().skip(1) {
        if level.containment.contains(&Containment::Indeterminate) {
            report.levels_skipped.push(level.n);
            continue;
        }
        report.levels_checked += 1;
        let expected = 1 + level
            .containment
            .iter()
            .zip(&tower.critical)
            .filter(|(c, _)| **c == Containment::Inside)
            .map(|(_, cp)| cp.ramification - 1)
            .sum::<usize>();
        if expected != level.t {
            report.violations.push(RhViolation { level: level.n, t: level.t, expected });
        }
    }
    report
}
