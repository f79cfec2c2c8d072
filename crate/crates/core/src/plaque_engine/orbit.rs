use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly_dynamics::{preimages, Polynomial, RootOptions};

/// How successive preimages were chosen.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum OrbitPolicy {
    FixedPoint,
    Cycle { points: Vec<Complex64> },
    NearestTo { anchor: Complex64 },
    BranchIndices { indices: Vec<usize> },
}

/// Points `x_1, x_2, …` with `f(x_{n+1}) = x_n`, verified at construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BackwardOrbit {
    points: Vec<Complex64>,
    policy: OrbitPolicy,
}

/// Relative tolerance for `|f(x_{n+1}) − x_n|`.
pub const ORBIT_TOL: f64 = 1e-9;

impl BackwardOrbit {
    pub fn new(p: &Polynomial, points: Vec<Complex64>, policy: OrbitPolicy) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("backward orbit is empty"));
        }
        for (n, w) in points.windows(2).enumerate() {
            let gap = (p.eval(w[1]) - w[0]).norm();
            if gap > ORBIT_TOL * (1.0 + w[0].norm()) {
                return Err(Error::invalid(format!(
                    "f(x_{}) misses x_{} by {gap:.3e}",
                    n + 2,
                    n + 1
                )));
            }
        }
        Ok(Self { points, policy })
    }

    /// The invariant lift `(x0, x0, …)` of a fixed point.
    pub fn fixed_point(p: &Polynomial, x0: Complex64, len: usize) -> Result<Self> {
        Self::new(p, vec![x0; len.max(1)], OrbitPolicy::FixedPoint)
    }

    /// The periodic lift of the cycle `c_0 → c_1 → … → c_0`, starting at `c_0`.
    pub fn cycle(p: &Polynomial, cycle: &[Complex64], len: usize) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::invalid("cycle is empty"));
        }
        let k = cycle.len();
        let points = (0..len.max(1)).map(|n| cycle[(k - n % k) % k]).collect();
        Self::new(p, points, OrbitPolicy::Cycle { points: cycle.to_vec() })
    }

    /// At each step take the preimage closest to `anchor`.
    pub fn nearest_to(p: &Polynomial, x1: Complex64, anchor: Complex64, len: usize, roots: &RootOptions) -> Result<Self> {
        let mut points = vec![x1];
        while points.len() < len {
            let pre = preimages(p, *points.last().unwrap(), roots)?;
            let best = pre
                .iter()
                .map(|r| r.value)
                .min_by(|a, b| (a - anchor).norm().total_cmp(&(b - anchor).norm()))
                .unwrap();
            points.push(best);
        }
        Self::new(p, points, OrbitPolicy::NearestTo { anchor })
    }

    /// Take preimage number `indices[n]` (in `(re, im)` order) at step `n`.
    pub fn branch_indices(p: &Polynomial, x1: Complex64, indices: &[usize], roots: &RootOptions) -> Result<Self> {
        let mut points = vec![x1];
        for &i in indices {
            let pre = preimages(p, *points.last().unwrap(), roots)?;
            let mut flat = Vec::new();
            for r in pre {
                flat.extend(std::iter::repeat(r.value).take(r.multiplicity));
            }
            let z = *flat.get(i).ok_or_else(|| {
                Error::invalid(format!("branch index {i} out of range 0..{}", flat.len()))
            })?;
            points.push(z);
        }
        Self::new(p, points, OrbitPolicy::BranchIndices { indices: indices.to_vec() })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn policy(&self) -> &OrbitPolicy {
        &self.policy
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `x_n`, 1-indexed.
    pub fn point(&self, n: usize) -> Complex64 {
        self.points[n - 1]
    }

    /// The orbit of `f^m(x)`, i.e. `(x_{m+1}, x_{m+2}, …)`.
    pub fn tail(&self, m: usize) -> Result<Self> {
        if m >= self.points.len() {
            return Err(Error::invalid(format!(
                "cannot drop {m} points from an orbit of length {}",
                self.points.len()
            )));
        }
        Ok(Self {
            points: self.points[m..].to_vec(),
            policy: self.policy.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn cycle_lift_runs_backwards() {
        let p: Polynomial = "-1,0,1".parse().unwrap();
        let o = BackwardOrbit::cycle(&p, &[c(0.0), c(-1.0)], 5).unwrap();
        assert_eq!(o.points(), &[c(0.0), c(-1.0), c(0.0), c(-1.0), c(0.0)]);
    }

    #[test]
    fn nearest_to_anchor() {
        let p: Polynomial = "0,0,1".parse().unwrap();
        let o = BackwardOrbit::nearest_to(&p, c(0.3), c(1.0), 6, &RootOptions::default()).unwrap();
        for n in 1..=6 {
            let expected = 0.3f64.powf(0.5f64.powi(n as i32 - 1));
            assert!((o.point(n) - c(expected)).norm() < 1e-14);
        }
        assert_eq!(o.tail(2).unwrap().point(1), o.point(3));
    }

    #[test]
    fn rejects_non_orbits() {
        let p: Polynomial = "0,0,1".parse().unwrap();
        assert!(BackwardOrbit::new(&p, vec![c(0.5), c(0.5)], OrbitPolicy::FixedPoint).is_err());
        assert!(BackwardOrbit::fixed_point(&p, c(0.5), 3).is_err());
    }

    #[test]
    fn branch_indices_follow_root_order() {
        let p: Polynomial = "0,0,1".parse().unwrap();
        let o = BackwardOrbit::branch_indices(&p, c(4.0), &[0, 1], &RootOptions::default()).unwrap();
        assert!((o.point(2) - c(-2.0)).norm() < 1e-14);
        assert!((o.point(3).powu(2) - c(-2.0)).norm() < 1e-13);
    }
}
