use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A complex polynomial map of degree `2 ≤ d < ∞`, coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("polynomial coefficients must be finite"));
        }
        if coeffs.len() < 3 {
            return Err(Error::invalid(format!(
                "degree must be >= 2, got {}",
                coeffs.len().saturating_sub(1)
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `z^d`.
    pub fn monomial(d: usize) -> Result<Self> {
        let mut c = vec![Complex64::new(0.0, 0.0); d + 1];
        c[d] = Complex64::new(1.0, 0.0);
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    /// Value and derivative at `z` in one Horner pass.
    pub fn evaluate(&self, z: Complex64) -> (Complex64, Complex64) {
        horner(&self.coeffs, z)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.evaluate(z).0
    }

    pub fn derivative_coeffs(&self) -> Vec<Complex64> {
        derivative(&self.coeffs)
    }

    /// `f^n(z)`.
    pub fn iterate(&self, z: Complex64, n: usize) -> Complex64 {
        (0..n).fold(z, |w, _| self.eval(w))
    }

    /// Coefficients of the `q`-fold composition `f∘…∘f`.
    pub fn composition_power(&self, q: usize) -> Vec<Complex64> {
        assert!(q >= 1);
        let mut acc = self.coeffs.clone();
        for _ in 1..q {
            acc = compose(&self.coeffs, &acc);
        }
        acc
    }

    /// Coefficients of `δ ↦ f(x + δ) − y`.
    pub fn local_map(&self, x: Complex64, y: Complex64) -> Vec<Complex64> {
        let mut b = taylor_shift(&self.coeffs, x);
        b[0] -= y;
        b
    }

    /// Radius beyond which every orbit escapes to infinity.
    ///
    /// Beyond `max(2·A, (4/|c_d|)^{1/(d−1)})` with `A = Σ|c_i/c_d|` one has
    /// `|f(z)| ≥ 2|z|`; the larger of that and `max(2, 2·max|c_i/c_d|)` is used.
    pub fn escape_radius(&self) -> f64 {
        let lead = self.leading().norm();
        let d = self.degree();
        let ratios = self.coeffs[..d].iter().map(|c| c.norm() / lead);
        let (sum, max) = ratios.fold((0.0, 0.0f64), |(s, m), r| (s + r, m.max(r)));
        let growth = (4.0 / lead).powf(1.0 / (d as f64 - 1.0));
        2.0f64.max(2.0 * max).max(2.0 * sum).max(growth)
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Comma-separated ascending coefficients, e.g. `"0,1,1"` for `z² + z`.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(parse_complex)
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", format_complex(*c))?;
        }
        Ok(())
    }
}

pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// Parses `"a"`, `"a+bi"`, `"a-bi"`, `"bi"` or `"i"`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("malformed complex literal {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not leading and not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Value and first derivative of the polynomial with ascending `coeffs`.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Rounding-error scale of Horner evaluation at `z`: `Σ |c_k| |z|^k`.
pub fn horner_magnitude(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

pub fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `outer(inner(z))`.
pub fn compose(outer: &[Complex64], inner: &[Complex64]) -> Vec<Complex64> {
    let mut acc = vec![*outer.last().unwrap()];
    for &c in outer.iter().rev().skip(1) {
        acc = mul(&acc, inner);
        acc[0] += c;
    }
    acc
}

/// Coefficients of `δ ↦ p(x + δ)`.
pub fn taylor_shift(coeffs: &[Complex64], x: Complex64) -> Vec<Complex64> {
    let mut b = coeffs.to_vec();
    let n = b.len() - 1;
    for k in 0..n {
        for j in (k..n).rev() {
            let next = b[j + 1];
            b[j] += x * next;
        }
    }
    b
}
