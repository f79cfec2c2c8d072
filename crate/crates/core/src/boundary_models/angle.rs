use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An angle on the circle, in turns modulo 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Angle {
    /// Exact `num/den` in lowest terms with `0 ≤ num < den`.
    Rational { num: BigUint, den: BigUint },
    /// `0.1 10 11 100 101 …` in base 2: the binary expansions of 1, 2, 3, … concatenated.
    Champernowne2,
}

impl Angle {
    pub fn rational(num: BigInt, den: BigUint) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("angle denominator must be positive"));
        }
        let den_signed = BigInt::from_biguint(Sign::Plus, den);
        let num = num.mod_floor(&den_signed);
        let g = num.gcd(&den_signed);
        let (num, den) = (num / &g, den_signed / &g);
        Ok(Angle::Rational {
            num: num.to_biguint().unwrap(),
            den: den.to_biguint().unwrap(),
        })
    }

    pub fn from_ratio(num: i64, den: u64) -> Result<Self> {
        Self::rational(BigInt::from(num), BigUint::from(den))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Rational { .. })
    }

    /// `(a, q)` with `a/q` equal to the angle, or, for an expansion, a dyadic
    /// truncation keeping `d^n · θ mod 1` accurate to about `2^{-96}`.
    pub fn residue_seed(&self, d: u32, n: usize) -> (BigUint, BigUint) {
        match self {
            Angle::Rational { num, den } => (num.clone(), den.clone()),
            Angle::Champernowne2 => {
                let bits = (n as f64 * (d as f64).log2()).ceil() as usize + 96;
                let digits = champernowne2_digits(bits);
                let mut a = BigUint::zero();
                for b in digits {
                    a <<= 1;
                    if b {
                        a += 1u32;
                    }
                }
                (a, BigUint::one() << bits)
            }
        }
    }
}

/// The first `n` binary digits after the point of the base-2 Champernowne constant.
pub fn champernowne2_digits(n: usize) -> Vec<bool> {
    let mut out = Vec::with_capacity(n);
    let mut k: u64 = 1;
    while out.len() < n {
        let width = 64 - k.leading_zeros();
        for i in (0..width).rev() {
            if out.len() == n {
                break;
            }
            out.push((k >> i) & 1 == 1);
        }
        k += 1;
    }
    out
}

impl FromStr for Angle {
    type Err = Error;

    /// `"p/q"`, a decimal such as `"0.125"` or `"-0.3"`, or `"champernowne2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed angle {s:?}"));
        if s.eq_ignore_ascii_case("champernowne2") {
            return Ok(Angle::Champernowne2);
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigUint = q.trim().parse().map_err(|_| bad())?;
            return Self::rational(p, q);
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigUint::from(10u32), frac.len());
        Self::rational(num, den)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Rational { num, den } => write!(f, "{num}/{den}"),
            Angle::Champernowne2 => f.write_str("champernowne2"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(s: &str) -> (u64, u64) {
        match s.parse::<Angle>().unwrap() {
            Angle::Rational { num, den } => (num.try_into().unwrap(), den.try_into().unwrap()),
            _ => panic!(),
        }
    }

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(ratio("1/3"), (1, 3));
        assert_eq!(ratio("4/6"), (2, 3));
        assert_eq!(ratio("7/3"), (1, 3));
        assert_eq!(ratio("-1/3"), (2, 3));
        assert_eq!(ratio("0.125"), (1, 8));
        assert_eq!(ratio("-0.3"), (7, 10));
        assert_eq!(ratio("0"), (0, 1));
        assert_eq!(ratio(".5"), (1, 2));
        assert!("1/0".parse::<Angle>().is_err());
        assert!("abc".parse::<Angle>().is_err());
        assert!("1e-3".parse::<Angle>().is_err());
        assert_eq!("Champernowne2".parse::<Angle>().unwrap(), Angle::Champernowne2);
    }

    #[test]
    fn champernowne_prefix() {
        let s: String = champernowne2_digits(16).iter().map(|&b| if b { '1' } else { '0' }).collect();
        assert_eq!(s, "1101110010111011");
    }

    #[test]
    fn display_round_trips() {
        for s in ["1/3", "0/1", "5/8", "champernowne2"] {
            assert_eq!(s.parse::<Angle>().unwrap().to_string(), s);
        }
    }
}
