use log::{debug, warn};
use num_complex::Complex64;
use serde::Serialize;

use super::lift::lift_boundary;
use super::tower::{Disk, PlaqueTower, TowerOptions};
use super::winding::{circle, diameter, distance_to_polyline, winding_number};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::poly_dynamics::preimages;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusLevel {
    pub n: usize,
    pub count: usize,
    /// Some lift failed or some preimage grazed `V_n`, so `count` is only a lower bound.
    pub lower_bound: bool,
}

/// A component of `f^{−(n−1)}(W_1)`, around one preimage of the center of `W_1`.
#[derive(Clone, Debug)]
struct Component {
    center: Complex64,
    offsets: Vec<Complex64>,
}

/// Counts the components of `f^{−(n−1)}(W_1)` inside `V_n` for `n = 1..=levels`.
///
/// Each component at level `n` is lifted from every preimage of its center
/// that lies in `V_{n+1}`; preimages landing in an already-found lift of the
/// same parent are dropped.
pub fn component_census(
    w: Disk,
    v: &PlaqueTower,
    levels: usize,
    opts: &TowerOptions,
    exec: Execution,
) -> Result<Vec<CensusLevel>> {
    if levels == 0 || levels > v.depth() {
        return Err(Error::invalid(format!(
            "census levels must lie in 1..={}, got {levels}",
            v.depth()
        )));
    }
    let p = &v.polynomial;
    let guard = opts.lift.winding_guard;
    let v1 = &v.levels[0];
    let rel = w.center - v1.center;
    let margin = w.radius + guard * diameter(&v1.offsets);
    if winding_number(&v1.offsets, rel, guard).unwrap_or(0) == 0 || distance_to_polyline(&v1.offsets, rel) <= margin {
        return Err(Error::invalid("W_1 must lie strictly inside V_1"));
    }

    let mut out = vec![CensusLevel { n: 1, count: 1, lower_bound: false }];
    let mut current = vec![Component {
        center: w.center,
        offsets: circle(w.radius, opts.lift.samples),
    }];
    let mut lower_bound = false;
    for n in 1..levels {
        let vn = &v.levels[n];
        let children = map_indexed(exec, &current, |_, parent| -> Result<(Vec<Component>, bool)> {
            let mut found: Vec<Component> = Vec::new();
            let mut partial = false;
            for root in preimages(p, parent.center, &opts.roots)? {
                let y = root.value;
                match winding_number(&vn.offsets, y - vn.center, guard) {
                    Ok(0) => continue,
                    Ok(_) => {}
                    Err(_) => {
                        partial = true;
                        continue;
                    }
                }
                if found
                    .iter()
                    .any(|c| winding_number(&c.offsets, y - c.center, guard).map_or(true, |k| k != 0))
                {
                    continue;
                }
                match lift_boundary(p, parent.center, &parent.offsets, y, n + 1, &opts.lift, &opts.roots) {
                    Ok(lift) => found.push(Component { center: y, offsets: lift.offsets }),
                    Err(e) if e.is_numerical() => {
                        warn!("census level {}: {e}", n + 1);
                        partial = true;
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok((found, partial))
        });
        let mut next = Vec::new();
        for child in children {
            let (found, partial) = child?;
            lower_bound |= partial;
            next.extend(found);
        }
        debug!("census level {}: {} components", n + 1, next.len());
        out.push(CensusLevel { n: n + 1, count: next.len(), lower_bound });
        current = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plaque_engine::{pullback_tower, BackwardOrbit};
    use crate::poly_dynamics::Polynomial;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn z_squared_census_doubles() {
        let p = Polynomial::monomial(2).unwrap();
        let orbit = BackwardOrbit::fixed_point(&p, c(0.0), 5).unwrap();
        let mut opts = TowerOptions::default();
        opts.lift.samples = 64;
        let v = pullback_tower(&p, &orbit, Disk::new(c(0.0), 0.8).unwrap(), 5, &opts).unwrap();
        let counts = component_census(Disk::new(c(0.5), 0.05).unwrap(), &v, 5, &opts, Execution::Sequential).unwrap();
        let got: Vec<usize> = counts.iter().map(|l| l.count).collect();
        assert_eq!(got, vec![1, 2, 4, 8, 16]);
        assert!(counts.iter().all(|l| !l.lower_bound));
    }

    #[test]
    fn w_must_fit_inside_v() {
        let p = Polynomial::monomial(2).unwrap();
        let orbit = BackwardOrbit::fixed_point(&p, c(0.0), 2).unwrap();
        let v = pullback_tower(&p, &orbit, Disk::new(c(0.0), 0.5).unwrap(), 2, &TowerOptions::default()).unwrap();
        let err = component_census(Disk::new(c(0.5), 0.05).unwrap(), &v, 2, &TowerOptions::default(), Execution::Sequential);
        assert!(err.is_err());
    }
}
