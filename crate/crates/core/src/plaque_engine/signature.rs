use log::info;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::orbit::BackwardOrbit;
use super::tower::{index_sequence, pullback_tower, Disk, TowerOptions, Truncation};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::poly_dynamics::Polynomial;
use crate::seq_algebra::{detect_eventual_period, EventuallyPeriodicBits, TruncatedBits};
use crate::sig_lattice::{from_shrinking_chain, StabilizationReport};

/// Tower depth `N_j` of ring `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DepthSchedule {
    Fixed { depth: usize },
    /// `N_j = max(min, ceil(factor / r_j))`.
    Parabolic { min: usize, factor: f64 },
    List { depths: Vec<usize> },
}

impl DepthSchedule {
    pub fn depth(&self, j: usize, radius: f64) -> Result<usize> {
        match self {
            DepthSchedule::Fixed { depth } => Ok(*depth),
            DepthSchedule::Parabolic { min, factor } => {
                Ok((*min).max((factor / radius).ceil() as usize))
            }
            DepthSchedule::List { depths } => depths
                .get(j)
                .copied()
                .ok_or_else(|| Error::invalid(format!("depth schedule has no entry for ring {j}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureParams {
    pub radius: f64,
    pub shrink: f64,
    /// Index of the last ring; rings are `j = 0..=rings`.
    pub rings: usize,
    pub schedule: DepthSchedule,
    pub tower: TowerOptions,
    /// Towers that end before this level make the run fail.
    pub min_depth: usize,
    /// Largest tolerated share of indeterminate bits per window.
    pub max_indeterminate: f64,
    pub exec: Execution,
}

impl Default for SignatureParams {
    fn default() -> Self {
        Self {
            radius: 0.5,
            shrink: 0.5,
            rings: 4,
            schedule: DepthSchedule::Fixed { depth: 32 },
            tower: TowerOptions::default(),
            min_depth: 8,
            max_indeterminate: 0.1,
            exec: Execution::default(),
        }
    }
}

impl SignatureParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::invalid("radius must be positive"));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::invalid("shrink must lie in (0, 1)"));
        }
        if self.min_depth == 0 {
            return Err(Error::invalid("min_depth must be >= 1"));
        }
        self.tower.lift.validate()
    }

    pub fn ring_radius(&self, j: usize) -> f64 {
        self.radius * self.shrink.powi(j as i32)
    }

    pub fn depths(&self) -> Result<Vec<usize>> {
        (0..=self.rings).map(|j| self.schedule.depth(j, self.ring_radius(j))).collect()
    }
}

/// One ring of a signature run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ring {
    pub j: usize,
    pub radius: f64,
    pub requested_depth: usize,
    pub window: TruncatedBits,
    pub truncation: Option<Truncation>,
    /// Exact class read off this window alone, if one was detected.
    pub class: Option<EventuallyPeriodicBits>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignatureEstimate {
    pub report: StabilizationReport,
    pub rings: Vec<Ring>,
}

fn ring_class(window: &TruncatedBits) -> Option<EventuallyPeriodicBits> {
    let depth = window.depth();
    let skip = (depth / 8).max(window.last_indeterminate().unwrap_or(0));
    if skip >= depth {
        return None;
    }
    detect_eventual_period(&window.with_skip(skip).ok()?, depth / 3)
}

/// Estimates `sign(x, c)` from towers over the disks `D(x_1, r_0 ρ^j)`.
///
/// Each ring's window is first lifted to an exact class on its own. When all
/// rings yield one, the classes are expanded to the longest depth and compared
/// past every preamble, so rings of different depth meet as classes. If some
/// ring has no detectable class the windows are cut to the shortest depth.
pub fn signature_estimate(
    p: &Polynomial,
    orbit: &BackwardOrbit,
    c: Complex64,
    params: &SignatureParams,
) -> Result<SignatureEstimate> {
    params.validate()?;
    let depths = params.depths()?;
    let deepest = *depths.iter().max().unwrap();
    if deepest > orbit.len() {
        return Err(Error::invalid(format!(
            "orbit has {} points but the schedule needs {deepest}",
            orbit.len()
        )));
    }
    let x1 = orbit.point(1);

    let jobs: Vec<(usize, f64, usize)> = depths
        .iter()
        .enumerate()
        .map(|(j, &n)| (j, params.ring_radius(j), n))
        .collect();
    let rings = map_indexed(params.exec, &jobs, |_, &(j, r, n)| -> Result<Ring> {
        let tower = pullback_tower(p, orbit, Disk::new(x1, r)?, n, &params.tower)?;
        let window = index_sequence(&tower, c)?;
        if window.depth() < params.min_depth {
            return Err(Error::InsufficientDepth(format!(
                "ring {j} (radius {r:.6e}) stopped at level {} of {n}, below the minimum {}",
                window.depth(),
                params.min_depth
            )));
        }
        let indeterminate = window.indeterminate_count();
        if indeterminate as f64 > params.max_indeterminate * window.depth() as f64 {
            return Err(Error::TooManyIndeterminate {
                indeterminate,
                depth: window.depth(),
            });
        }
        info!("ring {j}: radius {r:.6e}, window {window}");
        Ok(Ring {
            j,
            radius: tower.radius.unwrap_or(r),
            requested_depth: n,
            class: ring_class(&window),
            window,
            truncation: tower.truncation,
        })
    })
    .into_iter()
    .collect::<Result<Vec<Ring>>>()?;

    let report = if rings.iter().all(|r| r.class.is_some()) {
        let depth = rings.iter().map(|r| r.window.depth()).max().unwrap();
        let mut skip = 0;
        let mut windows = Vec::with_capacity(rings.len());
        for ring in &rings {
            let class = ring.class.as_ref().unwrap();
            skip = skip
                .max(ring.window.depth() / 8)
                .max(ring.window.last_indeterminate().unwrap_or(0))
                .max(class.preamble().len());
            windows.push(TruncatedBits::from_class(class, depth, 0)?);
        }
        if skip >= depth {
            return Err(Error::InsufficientDepth(format!(
                "preambles reach level {skip} of {depth}"
            )));
        }
        from_shrinking_chain(&windows, skip, depth / 3)?
    } else {
        let depth = rings.iter().map(|r| r.window.depth()).min().unwrap();
        let windows = rings
            .iter()
            .map(|r| r.window.truncate(depth))
            .collect::<Result<Vec<_>>>()?;
        from_shrinking_chain(&windows, depth / 8, depth / 3)?
    };
    Ok(SignatureEstimate { report, rings })
}
