//! Almost-equality classes of binary sequences.
//!
//! Exact elements are eventually periodic sequences stored as a finite
//! preamble followed by a repeating period. Positions are 1-indexed so that
//! position `n` lines up with tower level `n`. Finite observations of a
//! sequence (index windows, proximity windows) are [`TruncatedBits`] and are
//! only promoted to an exact class through [`detect_eventual_period`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An eventually periodic binary sequence in canonical form.
///
/// Canonical means the period is primitive and the preamble cannot be
/// shortened by rotating the period (its last bit differs from the last bit
/// of the period). Two values compare equal under `==` iff they denote the
/// same infinite sequence; use [`EventuallyPeriodicBits::almost_equal`] for
/// equality of classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicBits {
    preamble: Vec<bool>,
    period: Vec<bool>,
}

/// Returns the canonical form of `preamble` followed by `period` repeated.
pub fn canonicalize(preamble: &[bool], period: &[bool]) -> Result<EventuallyPeriodicBits> {
    if period.is_empty() {
        return Err(Error::invalid("period must be nonempty"));
    }
    let mut period = primitive_root(period).to_vec();
    let mut preamble = preamble.to_vec();
    while let Some(&last) = preamble.last() {
        if last != *period.last().unwrap() {
            break;
        }
        preamble.pop();
        period.rotate_right(1);
    }
    Ok(EventuallyPeriodicBits { preamble, period })
}

fn primitive_root(word: &[bool]) -> &[bool] {
    let n = word.len();
    for p in 1..n {
        if n % p == 0 && (p..n).all(|i| word[i] == word[i - p]) {
            return &word[..p];
        }
    }
    word
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl EventuallyPeriodicBits {
    pub fn new(preamble: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        canonicalize(&preamble, &period)
    }

    /// The class 𝟎 = [0,0,0,…].
    pub fn zero() -> Self {
        Self {
            preamble: Vec::new(),
            period: vec![false],
        }
    }

    /// The class 𝟏 = [1,1,1,…].
    pub fn one() -> Self {
        Self {
            preamble: Vec::new(),
            period: vec![true],
        }
    }

    /// Purely periodic sequence repeating `period`.
    pub fn periodic(period: &[bool]) -> Result<Self> {
        canonicalize(&[], period)
    }

    pub fn preamble(&self) -> &[bool] {
        &self.preamble
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    /// Idempotent; values are always stored canonically.
    pub fn canonicalize(&self) -> Self {
        canonicalize(&self.preamble, &self.period).expect("stored period is nonempty")
    }

    /// Bit at 1-indexed position `n`.
    pub fn bit(&self, n: usize) -> bool {
        assert!(n >= 1, "positions are 1-indexed");
        let l = self.preamble.len();
        if n <= l {
            self.preamble[n - 1]
        } else {
            self.period[(n - 1 - l) % self.period.len()]
        }
    }

    /// The first `len` bits.
    pub fn prefix(&self, len: usize) -> Vec<bool> {
        (1..=len).map(|n| self.bit(n)).collect()
    }

    /// The period re-aligned so that entry `k` is the bit at every large
    /// position `n` with `n ≡ k + 1 (mod period)`. Two canonical values are
    /// almost equal iff their class keys coincide.
    pub fn class_key(&self) -> Vec<bool> {
        let p = self.period.len();
        let shift = self.preamble.len() % p;
        (0..p).map(|k| self.period[(k + p - shift) % p]).collect()
    }

    /// Purely periodic representative of the class of `self`.
    pub fn class_representative(&self) -> Self {
        Self {
            preamble: Vec::new(),
            period: self.class_key(),
        }
    }

    pub fn is_zero_class(&self) -> bool {
        self.period == [false]
    }

    pub fn is_one_class(&self) -> bool {
        self.period == [true]
    }

    /// True iff the sequences coincide from some position onward.
    pub fn almost_equal(&self, other: &Self) -> bool {
        let start = self.preamble.len().max(other.preamble.len()) + 1;
        let window = lcm(self.period.len(), other.period.len());
        (start..start + window).all(|n| self.bit(n) == other.bit(n))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let l = self.preamble.len().max(other.preamble.len());
        let p = lcm(self.period.len(), other.period.len());
        let bits: Vec<bool> = (1..=l + p)
            .map(|n| op(self.bit(n), other.bit(n)))
            .collect();
        canonicalize(&bits[..l], &bits[l..]).expect("lcm period is nonempty")
    }

    pub fn join(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn complement(&self) -> Self {
        Self {
            preamble: self.preamble.iter().map(|b| !b).collect(),
            period: self.period.iter().map(|b| !b).collect(),
        }
    }

    /// `self ≤ other` in I, i.e. `self ∨ other ≍ other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.join(other).almost_equal(other)
    }

    /// Prepends `m` zeros for `m ≥ 0`, drops `|m|` leading entries otherwise.
    pub fn shift(&self, m: i64) -> Self {
        if m >= 0 {
            let mut pre = vec![false; m as usize];
            pre.extend_from_slice(&self.preamble);
            canonicalize(&pre, &self.period).expect("nonempty period")
        } else {
            let k = m.unsigned_abs() as usize;
            let l = self.preamble.len();
            if k <= l {
                canonicalize(&self.preamble[k..], &self.period).expect("nonempty period")
            } else {
                let mut period = self.period.clone();
                let p = period.len();
                period.rotate_left((k - l) % p);
                canonicalize(&[], &period).expect("nonempty period")
            }
        }
    }
}

impl Default for EventuallyPeriodicBits {
    fn default() -> Self {
        Self::zero()
    }
}

fn write_bits(f: &mut fmt::Formatter<'_>, bits: &[bool]) -> fmt::Result {
    for &b in bits {
        f.write_str(if b { "1" } else { "0" })?;
    }
    Ok(())
}

impl fmt::Display for EventuallyPeriodicBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bits(f, &self.preamble)?;
        f.write_str("|")?;
        write_bits(f, &self.period)
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
        })
        .collect()
}

impl FromStr for EventuallyPeriodicBits {
    type Err = Error;

    /// Accepts `"pre|per"` as well as the constant shorthands `"0"` and `"1"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('|') {
            Some((pre, per)) => {
                let per = parse_bits(per)?;
                if per.is_empty() {
                    return Err(Error::Parse(format!("empty period in {s:?}")));
                }
                canonicalize(&parse_bits(pre)?, &per)
            }
            None => match s {
                "0" => Ok(Self::zero()),
                "1" => Ok(Self::one()),
                _ => Err(Error::Parse(format!(
                    "expected \"pre|per\", \"0\" or \"1\", got {s:?}"
                ))),
            },
        }
    }
}

impl Serialize for EventuallyPeriodicBits {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EventuallyPeriodicBits {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite observation of a binary sequence on levels `1..=depth`.
///
/// Entries may be indeterminate (`None`). Class comparisons only look at
/// positions past `skip`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedBits {
    bits: Vec<Option<bool>>,
    skip: usize,
}

impl TruncatedBits {
    pub fn new(bits: Vec<bool>, skip: usize) -> Result<Self> {
        Self::with_indeterminate(bits.into_iter().map(Some).collect(), skip)
    }

    pub fn with_indeterminate(bits: Vec<Option<bool>>, skip: usize) -> Result<Self> {
        if skip >= bits.len() {
            return Err(Error::invalid(format!(
                "skip {skip} must be smaller than depth {}",
                bits.len()
            )));
        }
        Ok(Self { bits, skip })
    }

    /// First `depth` bits of an exact class.
    pub fn from_class(class: &EventuallyPeriodicBits, depth: usize, skip: usize) -> Result<Self> {
        Self::new(class.prefix(depth), skip)
    }

    pub fn depth(&self) -> usize {
        self.bits.len()
    }

    pub fn skip(&self) -> usize {
        self.skip
    }

    pub fn bits(&self) -> &[Option<bool>] {
        &self.bits
    }

    /// Bit at 1-indexed level `n`.
    pub fn bit(&self, n: usize) -> Option<bool> {
        self.bits[n - 1]
    }

    pub fn indeterminate_count(&self) -> usize {
        self.bits.iter().filter(|b| b.is_none()).count()
    }

    /// Position of the deepest indeterminate bit, if any.
    pub fn last_indeterminate(&self) -> Option<usize> {
        self.bits.iter().rposition(|b| b.is_none()).map(|i| i + 1)
    }

    pub fn with_skip(&self, skip: usize) -> Result<Self> {
        Self::with_indeterminate(self.bits.clone(), skip)
    }

    /// Raises `skip` so that no indeterminate bit remains in the compared range.
    pub fn raise_skip_past_indeterminate(&self) -> Result<Self> {
        let skip = self.skip.max(self.last_indeterminate().unwrap_or(0));
        if skip >= self.depth() {
            return Err(Error::InsufficientDepth(format!(
                "indeterminate bit at the deepest level {}",
                self.depth()
            )));
        }
        self.with_skip(skip)
    }

    /// Truncates to the first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        let depth = depth.min(self.depth());
        Self::with_indeterminate(self.bits[..depth].to_vec(), self.skip)
    }

    /// Positionwise meet; a definite 0 dominates an indeterminate entry.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        if self.depth() != other.depth() {
            return Err(Error::invalid(format!(
                "depth mismatch: {} vs {}",
                self.depth(),
                other.depth()
            )));
        }
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| match (a, b) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            })
            .collect();
        Self::with_indeterminate(bits, self.skip.max(other.skip))
    }

    /// True iff both windows agree on every level in `skip+1..=depth`.
    pub fn agrees_past(&self, other: &Self, skip: usize) -> bool {
        self.depth() == other.depth() && self.bits[skip.min(self.depth())..] == other.bits[skip.min(other.depth())..]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b == Some(true)).count()
    }
}

impl fmt::Display for TruncatedBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(match b {
                Some(true) => "1",
                Some(false) => "0",
                None => "?",
            })?;
        }
        Ok(())
    }
}

impl FromStr for TruncatedBits {
    type Err = Error;

    /// Parses a `0`/`1`/`?` string with `skip = 0`.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '?' => Ok(None),
                other => Err(Error::Parse(format!("unexpected character {other:?} in window"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.is_empty() {
            return Err(Error::Parse("empty window".into()));
        }
        Self::with_indeterminate(bits, 0)
    }
}

impl Serialize for TruncatedBits {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Lifts a window to an exact class.
///
/// Looks for the shortest description `(preamble, period)` with period at most
/// `max_period` that is consistent with every bit on `skip+1..=depth`, backed
/// by at least three full repetitions of the period. Among consistent
/// candidates the one minimizing `preamble + period` wins, ties going to the
/// shorter period. Bits at or below `skip` only fill the preamble; they never
/// affect the class.
pub fn detect_eventual_period(w: &TruncatedBits, max_period: usize) -> Option<EventuallyPeriodicBits> {
    let data = &w.bits[w.skip..];
    if data.iter().any(Option::is_none) {
        return None;
    }
    let data: Vec<bool> = data.iter().map(|b| b.unwrap()).collect();
    let len = data.len();
    let max_period = max_period.min(len / 3);

    let mut best: Option<(usize, usize)> = None;
    for p in 1..=max_period {
        // Smallest start s such that data[s..] is p-periodic.
        let s = (0..len - p)
            .rev()
            .find(|&i| data[i] != data[i + p])
            .map_or(0, |i| i + 1);
        if len - s < 3 * p {
            continue;
        }
        let cost = s + p;
        if best.map_or(true, |(bs, bp)| cost < bs + bp) {
            best = Some((s, p));
        }
    }

    let (s, p) = best?;
    let mut preamble: Vec<bool> = w.bits[..w.skip].iter().map(|b| b.unwrap_or(false)).collect();
    preamble.extend_from_slice(&data[..s]);
    canonicalize(&preamble, &data[s..s + p]).ok()
}
