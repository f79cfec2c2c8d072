use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly_dynamics::{format_complex, parse_complex};

/// `β(z) = e^{2πiϑ} ∏ (z − b_k)/(1 − conj(b_k) z)` with all `|b_k| < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    theta: f64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, theta: f64) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::invalid("a Blaschke product needs at least one zero"));
        }
        if let Some(b) = zeros.iter().find(|b| !(b.norm() < 1.0)) {
            return Err(Error::invalid(format!(
                "zero {} is not inside the unit disk",
                format_complex(*b)
            )));
        }
        if !theta.is_finite() {
            return Err(Error::invalid("rotation must be finite"));
        }
        Ok(Self { zeros, theta })
    }

    /// `z^d`.
    pub fn power(d: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); d], 0.0)
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Value and derivative at `z`.
    ///
    /// The derivative is a sum over factors of (product of the other factors)
    /// × (this factor's derivative), built from prefix and suffix products so
    /// that it stays valid at the zeros.
    pub fn evaluate(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let d = self.zeros.len();
        let mut factors = Vec::with_capacity(d);
        let mut derivs = Vec::with_capacity(d);
        for (k, b) in self.zeros.iter().enumerate() {
            let den = Complex64::new(1.0, 0.0) - b.conj() * z;
            if den == Complex64::new(0.0, 0.0) {
                return Err(Error::Pole(k));
            }
            factors.push((z - b) / den);
            derivs.push((1.0 - b.norm_sqr()) / (den * den));
        }
        let one = Complex64::new(1.0, 0.0);
        let mut suffix = vec![one; d + 1];
        for k in (0..d).rev() {
            suffix[k] = suffix[k + 1] * factors[k];
        }
        let mut prefix = one;
        let mut derivative = Complex64::new(0.0, 0.0);
        for k in 0..d {
            derivative += prefix * derivs[k] * suffix[k + 1];
            prefix *= factors[k];
        }
        let rot = Complex64::from_polar(1.0, TAU * self.theta);
        let (value, derivative) = (rot * suffix[0], rot * derivative);
        if !value.is_finite() || !derivative.is_finite() {
            return Err(Error::Pole(self.nearest_pole(z)));
        }
        Ok((value, derivative))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.evaluate(z).map(|(v, _)| v)
    }

    fn nearest_pole(&self, z: Complex64) -> usize {
        (0..self.zeros.len())
            .min_by(|&a, &b| {
                let da = (Complex64::new(1.0, 0.0) - self.zeros[a].conj() * z).norm();
                let db = (Complex64::new(1.0, 0.0) - self.zeros[b].conj() * z).norm();
                da.total_cmp(&db)
            })
            .unwrap()
    }

    /// Continuous lift `Θ` of `θ ↦ arg β(e^{2πiθ})` in turns, with `Θ(0) = 0`.
    ///
    /// Each factor contributes `θ + (1/π)·arg(1 − b e^{−2πiθ})`, and
    /// `1 − b e^{−2πiθ}` stays in the right half plane, so the principal
    /// argument is already continuous. `Θ(θ + 1) = Θ(θ) + d`.
    pub fn circle_lift(&self, theta: f64) -> f64 {
        let e = Complex64::from_polar(1.0, -TAU * theta);
        let one = Complex64::new(1.0, 0.0);
        let wobble: f64 = self
            .zeros
            .iter()
            .map(|b| (one - b * e).arg() - (one - b).arg())
            .sum();
        self.degree() as f64 * theta + wobble / PI
    }

    /// `Θ′(θ)`, a sum of Poisson kernels; always positive.
    pub fn circle_lift_derivative(&self, theta: f64) -> f64 {
        let e = Complex64::from_polar(1.0, TAU * theta);
        self.zeros
            .iter()
            .map(|b| (1.0 - b.norm_sqr()) / (e - b).norm_sqr())
            .sum()
    }
}

impl FromStr for BlaschkeProduct {
    type Err = Error;

    /// `"b1,b2,…"` or `"b1,b2,…@ϑ"` with `ϑ` in turns.
    fn from_str(s: &str) -> Result<Self> {
        let (zeros, theta) = match s.split_once('@') {
            Some((z, t)) => (
                z,
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("malformed rotation {t:?}")))?,
            ),
            None => (s, 0.0),
        };
        let zeros = zeros.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
        Self::new(zeros, theta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DenjoyWolff {
    pub value: Complex64,
    pub derivative: Complex64,
    pub parabolic: bool,
}

/// Confirms that `β(1) = 1` and reports `β′(1)`.
pub fn check_denjoy_wolff(b: &BlaschkeProduct, tol: f64) -> Result<DenjoyWolff> {
    let (value, derivative) = b.evaluate(Complex64::new(1.0, 0.0))?;
    if (value - 1.0).norm() > tol {
        return Err(Error::NotNormalized(format_complex(value)));
    }
    Ok(DenjoyWolff {
        value,
        derivative,
        parabolic: (derivative - 1.0).norm() < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> BlaschkeProduct {
        let s = 1.0 / 3f64.sqrt();
        BlaschkeProduct::new(vec![Complex64::new(0.0, s), Complex64::new(0.0, -s)], 0.0).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let sq = BlaschkeProduct::power(2).unwrap();
        assert!((sq.eval(Complex64::i()).unwrap() + 1.0).norm() < 1e-15);
        assert!((model().eval(Complex64::new(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        for k in 0..16 {
            let z = Complex64::from_polar(1.0, 0.4 * k as f64);
            assert!((model().eval(z).unwrap().norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_matches_rational_form() {
        // β = (3z² + 1)/(z² + 3), β′ = 16z/(z² + 3)²
        let z = Complex64::new(0.3, -0.8);
        let (_, d) = model().evaluate(z).unwrap();
        let expected = 16.0 * z / (z * z + 3.0).powu(2);
        assert!((d - expected).norm() < 1e-14);
        // valid at a zero as well
        let (v, d) = model().evaluate(Complex64::new(0.0, 1.0 / 3f64.sqrt())).unwrap();
        assert!(v.norm() < 1e-15 && d.norm() > 0.0);
    }

    #[test]
    fn poles_are_reported() {
        let b = BlaschkeProduct::new(vec![Complex64::new(0.5, 0.0)], 0.0).unwrap();
        assert_eq!(b.evaluate(Complex64::new(2.0, 0.0)), Err(Error::Pole(0)));
    }

    #[test]
    fn denjoy_wolff_examples() {
        let dw = check_denjoy_wolff(&model(), 1e-12).unwrap();
        assert!(dw.parabolic && (dw.derivative - 1.0).norm() < 1e-12);
        let dw = check_denjoy_wolff(&BlaschkeProduct::power(2).unwrap(), 1e-12).unwrap();
        assert!(!dw.parabolic && (dw.derivative - 2.0).norm() < 1e-15);
        let half = BlaschkeProduct::new(vec![Complex64::new(0.5, 0.0); 2], 0.0).unwrap();
        let dw = check_denjoy_wolff(&half, 1e-12).unwrap();
        assert!((dw.value - 1.0).norm() < 1e-15 && (dw.derivative - 6.0).norm() < 1e-12);
        let rotated = BlaschkeProduct::new(vec![Complex64::new(0.0, 0.0); 2], 0.25).unwrap();
        assert!(matches!(check_denjoy_wolff(&rotated, 1e-12), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn circle_lift_examples() {
        let sq = BlaschkeProduct::power(2).unwrap();
        assert!((sq.circle_lift(0.3) - 0.6).abs() < 1e-15);
        let m = model();
        assert!((m.circle_lift(1.0) - m.circle_lift(0.0) - 2.0).abs() < 1e-14);
        assert!((m.circle_lift(0.5) - 1.0).abs() < 1e-14);
        // agrees with the argument of β on the circle
        for k in 0..50 {
            let th = k as f64 / 50.0;
            let v = m.eval(Complex64::from_polar(1.0, TAU * th)).unwrap();
            let lifted = Complex64::from_polar(1.0, TAU * m.circle_lift(th));
            assert!((v - lifted).norm() < 1e-13);
        }
    }

    #[test]
    fn parses_zero_lists() {
        let b: BlaschkeProduct = "0.5,-0.25i@0.125".parse().unwrap();
        assert_eq!(b.degree(), 2);
        assert_eq!(b.theta(), 0.125);
        assert!("1.5".parse::<BlaschkeProduct>().is_err());
    }
}
