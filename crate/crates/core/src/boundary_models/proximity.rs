use std::collections::HashMap;
use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::angle::Angle;
use crate::error::{Error, Result};
use crate::seq_algebra::{canonicalize, EventuallyPeriodicBits, TruncatedBits};
use crate::sig_lattice::{from_shrinking_chain, ChainOutcome, StabilizationReport};

/// Exact cycle detection on residues gives up past this many steps.
pub const MAX_EXACT_STEPS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProximityBits {
    pub window: TruncatedBits,
    /// The whole sequence, when the angle is rational and its orbit closed up in budget.
    pub exact: Option<EventuallyPeriodicBits>,
}

/// Fractional parts `{d^k θ}` for `k < len`, plus the residue cycle `(μ, μ+λ)`
/// when the angle is rational and its orbit closes within budget.
struct Orbit {
    fractions: Vec<f64>,
    cycle: Option<(usize, usize)>,
}

fn orbit(theta: &Angle, d: u32, len: usize) -> Orbit {
    let (mut r, q) = theta.residue_seed(d, len);
    let d_big = BigUint::from(d);
    // Dyadic denominators reduce by masking and read off the top bits directly.
    let dyadic = q.count_ones() == 1;
    let bits = q.bits() - 1;
    let mask = &q - 1u32;
    let fraction = |r: &BigUint| -> f64 {
        let top: BigUint = if dyadic {
            if bits >= 64 { r >> (bits - 64) } else { r << (64 - bits) }
        } else {
            (r << 64u32) / &q
        };
        top.to_u64().unwrap_or(u64::MAX) as f64 / 2f64.powi(64)
    };

    let mut fractions = Vec::with_capacity(len);
    let mut seen: HashMap<BigUint, usize> = HashMap::new();
    let mut cycle = None;
    let mut k = 0usize;
    loop {
        let need_window = k < len;
        let need_cycle = theta.is_exact() && cycle.is_none() && k < MAX_EXACT_STEPS;
        if !need_window && !need_cycle {
            break;
        }
        if need_cycle {
            if let Some(&mu) = seen.get(&r) {
                cycle = Some((mu, k));
                if !need_window {
                    break;
                }
            } else {
                seen.insert(r.clone(), k);
            }
        }
        fractions.push(fraction(&r));
        r *= &d_big;
        if dyadic {
            r &= &mask;
        } else {
            r %= &q;
        }
        k += 1;
    }
    Orbit { fractions, cycle }
}

fn is_close(x: f64, eps: f64) -> bool {
    2.0 * (PI * x).sin().abs() < eps
}

fn validate(d: u32, eps: f64, len: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid("degree must be >= 2"));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if len == 0 {
        return Err(Error::invalid("window length must be >= 1"));
    }
    Ok(())
}

fn threshold(orbit: &Orbit, eps: f64, len: usize) -> Result<ProximityBits> {
    let bits: Vec<bool> = orbit.fractions.iter().map(|&x| is_close(x, eps)).collect();
    let exact = match orbit.cycle {
        Some((mu, end)) => Some(canonicalize(&bits[..mu], &bits[mu..end])?),
        None => None,
    };
    Ok(ProximityBits {
        window: TruncatedBits::new(bits[..len].to_vec(), 0)?,
        exact,
    })
}

/// Bit `n` is 1 iff `|e^{2πi d^{n−1} θ} − 1| < ε`, for `n = 1..=len`.
///
/// Orbits are computed exactly on residues `d^k·a mod q`; for a rational
/// angle the eventual period of the full sequence is read off the first
/// repeated residue.
pub fn proximity_bits(theta: &Angle, d: u32, eps: f64, len: usize) -> Result<ProximityBits> {
    validate(d, eps, len)?;
    threshold(&orbit(theta, d, len), eps, len)
}

/// Intersects the proximity classes for `ε_t = ε_0·2^{−t}`, `t = 1..=steps`.
///
/// Rational angles are decided exactly on classes; other angles go through
/// the window chain with `skip = len/8`.
pub fn boundary_signature(theta: &Angle, d: u32, eps0: f64, steps: usize, len: usize) -> Result<StabilizationReport> {
    if steps < 2 {
        return Err(Error::invalid("need at least two epsilon steps"));
    }
    validate(d, eps0, len)?;
    let orbit = orbit(theta, d, len);
    let runs = (1..=steps)
        .map(|t| threshold(&orbit, eps0 * 0.5f64.powi(t as i32), len))
        .collect::<Result<Vec<_>>>()?;
    let skip = len / 8;

    if runs.iter().all(|r| r.exact.is_some()) {
        let mut meets: Vec<EventuallyPeriodicBits> = Vec::with_capacity(steps);
        for run in &runs {
            let class = run.exact.as_ref().unwrap();
            let next = meets.last().map_or_else(|| class.clone(), |m| m.meet(class));
            meets.push(next);
        }
        let decreasing_at: Vec<usize> = (1..meets.len())
            .filter(|&i| !meets[i].almost_equal(&meets[i - 1]))
            .map(|i| i + 1)
            .collect();
        let last = meets.last().unwrap();
        let stabilized = last.almost_equal(&meets[meets.len() - 2]);
        return Ok(StabilizationReport {
            stabilized,
            generator: stabilized.then(|| last.clone()),
            chain: meets
                .iter()
                .map(|m| TruncatedBits::from_class(m, len, skip))
                .collect::<Result<_>>()?,
            depth: len,
            rings_used: steps,
            skip,
            decreasing_at,
            outcome: if stabilized {
                ChainOutcome::Stabilized
            } else {
                ChainOutcome::MeetsStillDecreasing
            },
        });
    }

    let windows: Vec<TruncatedBits> = runs.into_iter().map(|r| r.window).collect();
    from_shrinking_chain(&windows, skip, len / 3)
}
