//! Polynomials, their roots, critical points, cycles and basins.

mod basin;
mod cycles;
mod polynomial;
mod roots;

use num_complex::Complex64;

pub use basin::{basin_membership, recurrence_time, BasinOptions, BasinVerdict, Recurrence, Verdict};
pub use cycles::{classify_cycle, find_cycles, ClassifyOptions, CycleClass, CycleKind};
pub use polynomial::{
    compose, derivative, format_complex, horner, horner_magnitude, parse_complex, taylor_shift, Polynomial,
};
pub use roots::{all_roots, Root, RootOptions};

use crate::error::Result;

/// Critical point with its ramification index `e` (a simple critical point has `e = 2`).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CriticalPoint {
    pub point: Complex64,
    pub ramification: usize,
}

pub fn critical_points(p: &Polynomial, opts: &RootOptions) -> Result<Vec<CriticalPoint>> {
    Ok(all_roots(&p.derivative_coeffs(), opts)?
        .into_iter()
        .map(|r| CriticalPoint {
            point: r.value,
            ramification: r.multiplicity + 1,
        })
        .collect())
}

/// Solutions of `p(z) = w` with multiplicity.
pub fn preimages(p: &Polynomial, w: Complex64, opts: &RootOptions) -> Result<Vec<Root>> {
    let mut c = p.coeffs().to_vec();
    c[0] -= w;
    all_roots(&c, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn critical_point_examples() {
        let o = RootOptions::default();
        let z2: Polynomial = "0,0,1".parse().unwrap();
        assert_eq!(
            critical_points(&z2, &o).unwrap(),
            vec![CriticalPoint { point: c(0.0), ramification: 2 }]
        );
        let cp = critical_points(&"0,1,1".parse().unwrap(), &o).unwrap();
        assert_eq!(cp, vec![CriticalPoint { point: c(-0.5), ramification: 2 }]);
        let cp = critical_points(&Polynomial::monomial(3).unwrap(), &o).unwrap();
        assert_eq!(cp, vec![CriticalPoint { point: c(0.0), ramification: 3 }]);
    }

    #[test]
    fn preimage_examples() {
        let o = RootOptions::default();
        let z2: Polynomial = "0,0,1".parse().unwrap();
        let r = preimages(&z2, c(4.0), &o).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].value - c(-2.0)).norm() < 1e-14 && (r[1].value - c(2.0)).norm() < 1e-14);
        assert_eq!(preimages(&z2, c(0.0), &o).unwrap(), vec![Root { value: c(0.0), multiplicity: 2 }]);
        let cheb: Polynomial = "-2,0,1".parse().unwrap();
        let r = preimages(&cheb, c(2.0), &o).unwrap();
        assert!((r[0].value - c(-2.0)).norm() < 1e-14 && (r[1].value - c(2.0)).norm() < 1e-14);
    }
}
