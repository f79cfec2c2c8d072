use num_complex::Complex64;
use serde::Serialize;

use super::cycles::{CycleClass, CycleKind};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Inside,
    Outside,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BasinVerdict {
    pub verdict: Verdict,
    pub iterations_used: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasinOptions {
    pub max_iter: usize,
    pub eps: f64,
    /// Consecutive close, non-receding steps required for a parabolic target.
    pub consecutive: usize,
}

impl Default for BasinOptions {
    fn default() -> Self {
        Self {
            max_iter: 100_000,
            eps: 1e-3,
            consecutive: 32,
        }
    }
}

/// Whether the orbit of `z0` is attracted to `target`.
pub fn basin_membership(
    p: &Polynomial,
    z0: Complex64,
    target: &CycleClass,
    opts: &BasinOptions,
) -> Result<BasinVerdict> {
    if !target.kind.is_attracting_or_parabolic() {
        return Err(Error::invalid(format!(
            "basin target must attract, got a {} cycle",
            target.kind
        )));
    }
    let parabolic = matches!(target.kind, CycleKind::Parabolic(_));
    let escape = p.escape_radius();
    let dist = |z: Complex64| {
        target
            .points
            .iter()
            .map(|x| (z - x).norm())
            .fold(f64::INFINITY, f64::min)
    };

    let mut z = z0;
    let mut streak = 0usize;
    let mut last = f64::INFINITY;
    for i in 0..=opts.max_iter {
        if !z.is_finite() || z.norm() > escape {
            return Ok(BasinVerdict { verdict: Verdict::Outside, iterations_used: i });
        }
        let d = dist(z);
        if d < opts.eps {
            if !parabolic {
                return Ok(BasinVerdict { verdict: Verdict::Inside, iterations_used: i });
            }
            streak = if d <= last { streak + 1 } else { 1 };
            if streak >= opts.consecutive {
                return Ok(BasinVerdict { verdict: Verdict::Inside, iterations_used: i });
            }
        } else {
            streak = 0;
        }
        last = d;
        z = p.eval(z);
    }
    Ok(BasinVerdict { verdict: Verdict::Unknown, iterations_used: opts.max_iter })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Recurrence {
    pub time: Option<usize>,
    pub escaped: bool,
}

/// First `q ≤ max_iter` with `|f^q(c) − c| < δ`.
pub fn recurrence_time(p: &Polynomial, c: Complex64, delta: f64, max_iter: usize) -> Result<Recurrence> {
    if !(delta > 0.0) {
        return Err(Error::invalid("recurrence radius must be positive"));
    }
    let escape = p.escape_radius();
    let mut z = c;
    for q in 1..=max_iter {
        z = p.eval(z);
        if !z.is_finite() || z.norm() > escape {
            return Ok(Recurrence { time: None, escaped: true });
        }
        if (z - c).norm() < delta {
            return Ok(Recurrence { time: Some(q), escaped: false });
        }
    }
    Ok(Recurrence { time: None, escaped: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_dynamics::cycles::{classify_cycle, ClassifyOptions};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn target(p: &Polynomial, x: f64) -> CycleClass {
        classify_cycle(p, &[c(x)], &ClassifyOptions::default()).unwrap()
    }

    #[test]
    fn z_squared_basin() {
        let p: Polynomial = "0,0,1".parse().unwrap();
        let t = target(&p, 0.0);
        let o = BasinOptions::default();
        assert_eq!(basin_membership(&p, c(0.5), &t, &o).unwrap().verdict, Verdict::Inside);
        assert_eq!(basin_membership(&p, c(2.0), &t, &o).unwrap().verdict, Verdict::Outside);
    }

    #[test]
    fn parabolic_basin_needs_a_streak() {
        let p: Polynomial = "0,1,1".parse().unwrap();
        let t = target(&p, 0.0);
        let v = basin_membership(&p, c(-0.5), &t, &BasinOptions::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Inside);
        assert!(v.iterations_used > 32);
    }

    #[test]
    fn repelling_target_is_rejected() {
        let p: Polynomial = "0,0,1".parse().unwrap();
        let t = target(&p, 1.0);
        assert!(basin_membership(&p, c(0.5), &t, &BasinOptions::default()).is_err());
    }

    #[test]
    fn recurrence_examples() {
        let z2: Polynomial = "0,0,1".parse().unwrap();
        assert_eq!(recurrence_time(&z2, c(0.0), 1e-9, 10).unwrap().time, Some(1));
        let basilica: Polynomial = "-1,0,1".parse().unwrap();
        assert_eq!(recurrence_time(&basilica, c(0.0), 1e-9, 10).unwrap().time, Some(2));
        let cheb: Polynomial = "-2,0,1".parse().unwrap();
        let r = recurrence_time(&cheb, c(0.0), 0.5, 10_000).unwrap();
        assert_eq!(r, Recurrence { time: None, escaped: false });
        assert!(recurrence_time(&cheb, c(0.0), 0.0, 10).is_err());
    }
}
