//! The circle automorphism `φ` with `φ ∘ β = (z ↦ z^d) ∘ φ` and `φ(1) = 1`,
//! evaluated on d-adic angles through its inverse.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::blaschke::{check_denjoy_wolff, BlaschkeProduct};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};

/// Largest table the recursion will build, in points per level.
pub const MAX_TABLE: u64 = 1 << 24;

/// `numerator / base^level ∈ [0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DAdicAngle {
    numerator: u64,
    level: u32,
    base: u32,
}

impl DAdicAngle {
    pub fn new(numerator: u64, level: u32, base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::invalid("d-adic base must be >= 2"));
        }
        let size = (base as u64)
            .checked_pow(level)
            .ok_or_else(|| Error::invalid(format!("{base}^{level} overflows")))?;
        if numerator >= size {
            return Err(Error::invalid(format!("numerator {numerator} must be below {base}^{level}")));
        }
        Ok(Self { numerator, level, base })
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// The same angle at the lowest possible level.
    pub fn reduced(&self) -> Self {
        let mut r = *self;
        let b = self.base as u64;
        while r.level > 0 && r.numerator % b == 0 {
            r.numerator /= b;
            r.level -= 1;
        }
        if r.numerator == 0 {
            r.level = 0;
        }
        r
    }

    pub fn turns(&self) -> f64 {
        self.numerator as f64 / (self.base as f64).powi(self.level as i32)
    }
}

impl fmt::Display for DAdicAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.numerator, self.base, self.level)
    }
}

impl Serialize for DAdicAngle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `ψ = φ^{-1}` in turns on every d-adic of level `≤ depth`.
///
/// Level `n` is built from level `n − 1` by
/// `ψ((j + s)/d) = Θ^{-1}(j + ψ(s))` on `[ψ(j/d), ψ((j+1)/d)]`, where `Θ` is
/// the lifted argument of `β` on the circle. Entries at level `n` whose
/// numerator is divisible by `d` are copied from level `n − 1`.
#[derive(Clone, Debug)]
pub struct PhiInverseTable {
    product: BlaschkeProduct,
    levels: Vec<Vec<f64>>,
}

impl PhiInverseTable {
    pub fn new(product: BlaschkeProduct) -> Result<Self> {
        check_denjoy_wolff(&product, 1e-9)?;
        Ok(Self {
            product,
            levels: vec![vec![0.0]],
        })
    }

    pub fn build(product: BlaschkeProduct, depth: u32, exec: Execution) -> Result<Self> {
        let mut table = Self::new(product)?;
        table.extend_to(depth, exec)?;
        Ok(table)
    }

    pub fn product(&self) -> &BlaschkeProduct {
        &self.product
    }

    pub fn depth(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn level(&self, n: u32) -> Option<&[f64]> {
        self.levels.get(n as usize).map(Vec::as_slice)
    }

    pub fn extend_to(&mut self, depth: u32, exec: Execution) -> Result<()> {
        let d = self.product.degree() as u64;
        while self.depth() < depth {
            let n = self.depth() + 1;
            let size = d
                .checked_pow(n)
                .filter(|&s| s <= MAX_TABLE)
                .ok_or_else(|| Error::invalid(format!("level {n} exceeds {MAX_TABLE} points")))?;
            let prev = &self.levels[n as usize - 1];
            let first = self.levels.get(1);
            let sub = size / d;
            let ks: Vec<u64> = (0..size).collect();
            let b = &self.product;
            let level = map_indexed(exec, &ks, |_, &k| -> Result<f64> {
                if k % d == 0 {
                    return Ok(prev[(k / d) as usize]);
                }
                let j = k / sub;
                let s = k % sub;
                let (lo, hi) = match first {
                    Some(l1) => (l1[j as usize], if j + 1 < d { l1[j as usize + 1] } else { 1.0 }),
                    None => (0.0, 1.0),
                };
                invert_lift(b, j as f64 + prev[s as usize], lo, hi)
            })
            .into_iter()
            .collect::<Result<Vec<f64>>>()?;
            self.levels.push(level);
        }
        Ok(())
    }

    /// `ψ(t)` in turns.
    pub fn turns(&self, t: DAdicAngle) -> Result<f64> {
        if t.base() as usize != self.product.degree() {
            return Err(Error::invalid(format!(
                "angle base {} differs from the degree {}",
                t.base(),
                self.product.degree()
            )));
        }
        let r = t.reduced();
        self.levels
            .get(r.level() as usize)
            .map(|l| l[r.numerator() as usize])
            .ok_or_else(|| Error::invalid(format!("table only reaches level {}", self.depth())))
    }

    /// `φ^{-1}(e^{2πit})`.
    pub fn point(&self, t: DAdicAngle) -> Result<Complex64> {
        Ok(Complex64::from_polar(1.0, TAU * self.turns(t)?))
    }
}

/// Solves `Θ(x) = y` for `x ∈ [lo, hi]` by Newton's method kept inside a bisection bracket.
fn invert_lift(b: &BlaschkeProduct, y: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (flo, fhi) = (b.circle_lift(lo) - y, b.circle_lift(hi) - y);
    let slack = 1e-12 * (1.0 + y.abs());
    if flo > slack || fhi < -slack {
        return Err(Error::ResolutionFailure(format!(
            "target {y:.17} not bracketed by the arc [{lo:.17}, {hi:.17}] (lift values {:.17}, {:.17})",
            flo + y,
            fhi + y
        )));
    }
    let mut x = if fhi > flo { lo + (hi - lo) * (-flo / (fhi - flo)) } else { 0.5 * (lo + hi) };
    for _ in 0..200 {
        let fx = b.circle_lift(x) - y;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / b.circle_lift_derivative(x);
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs().max(1e-300) || hi - lo <= 4.0 * f64::EPSILON {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::ResolutionFailure(format!(
        "no convergence for target {y:.17} on [{lo:.17}, {hi:.17}]"
    )))
}

/// `φ^{-1}(e^{2πit})` for a single angle.
pub fn phi_inverse(b: &BlaschkeProduct, t: DAdicAngle) -> Result<Complex64> {
    let table = PhiInverseTable::build(b.clone(), t.reduced().level(), Execution::Sequential)?;
    table.point(t)
}

/// `max |β(φ^{-1}(t)) − φ^{-1}(d·t mod 1)|` over the nonzero d-adics of level `depth`.
pub fn conjugacy_residual(b: &BlaschkeProduct, depth: u32, exec: Execution) -> Result<f64> {
    let table = PhiInverseTable::build(b.clone(), depth, exec)?;
    let d = b.degree() as u32;
    let size = (d as u64).pow(depth);
    let ks: Vec<u64> = (1..size).collect();
    let residuals = map_indexed(exec, &ks, |_, &k| -> Result<f64> {
        let t = DAdicAngle::new(k, depth, d)?;
        let image = DAdicAngle::new((k * d as u64) % size, depth, d)?;
        Ok((b.eval(table.point(t)?)? - table.point(image)?).norm())
    });
    residuals
        .into_iter()
        .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> BlaschkeProduct {
        let s = 1.0 / 3f64.sqrt();
        BlaschkeProduct::new(vec![Complex64::new(0.0, s), Complex64::new(0.0, -s)], 0.0).unwrap()
    }

    #[test]
    fn identity_for_the_model_map() {
        let sq = BlaschkeProduct::power(2).unwrap();
        let table = PhiInverseTable::build(sq, 6, Execution::Sequential).unwrap();
        for k in 0..64 {
            let t = DAdicAngle::new(k, 6, 2).unwrap();
            assert!((table.turns(t).unwrap() - t.turns()).abs() < 1e-15);
        }
    }

    #[test]
    fn half_turn_goes_to_minus_one() {
        let t = DAdicAngle::new(1, 1, 2).unwrap();
        assert!((phi_inverse(&model(), t).unwrap() + 1.0).norm() < 1e-9);
        let zero = DAdicAngle::new(0, 0, 2).unwrap();
        assert_eq!(phi_inverse(&model(), zero).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn refinement_is_exact_and_order_preserving() {
        let table = PhiInverseTable::build(model(), 8, Execution::Parallel).unwrap();
        for n in 1..8 {
            let (coarse, fine) = (table.level(n).unwrap(), table.level(n + 1).unwrap());
            for (k, v) in coarse.iter().enumerate() {
                assert_eq!(fine[2 * k], *v);
            }
            assert!(fine.windows(2).all(|w| w[0] < w[1]));
            assert!(*fine.last().unwrap() < 1.0);
        }
        let a = DAdicAngle::new(3, 2, 2).unwrap();
        let b = DAdicAngle::new(12, 4, 2).unwrap();
        assert_eq!(table.turns(a).unwrap(), table.turns(b).unwrap());
    }

    #[test]
    fn residuals_are_small() {
        assert!(conjugacy_residual(&model(), 1, Execution::Sequential).unwrap() < 1e-14);
        assert!(conjugacy_residual(&model(), 8, Execution::Sequential).unwrap() < 1e-12);
        let sq = BlaschkeProduct::power(2).unwrap();
        assert!(conjugacy_residual(&sq, 8, Execution::Sequential).unwrap() < 1e-13);
        let skew = BlaschkeProduct::new(vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0), Complex64::new(-0.2, 0.3)], 0.0);
        // β(1) ≠ 1 here, so the recursion must refuse it
        assert!(PhiInverseTable::new(skew.unwrap()).is_err());
    }

    #[test]
    fn dadic_reduction() {
        let t = DAdicAngle::new(12, 4, 2).unwrap().reduced();
        assert_eq!((t.numerator(), t.level()), (3, 2));
        assert!(DAdicAngle::new(4, 2, 2).is_err());
    }
}
