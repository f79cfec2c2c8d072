//! The signature σ-lattice in finite normal form.
//!
//! An element is a finite union of principal ideals `α(g) = {b : b ≤ g}`,
//! stored as an antichain of generators. Generators are kept as purely
//! periodic class representatives in a fixed order, so structural equality of
//! two normalized expressions is equality of the sets they denote.

use std::cmp::Ordering;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::seq_algebra::{detect_eventual_period, EventuallyPeriodicBits, TruncatedBits};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignatureExpr {
    generators: Vec<EventuallyPeriodicBits>,
}

fn class_order(a: &EventuallyPeriodicBits, b: &EventuallyPeriodicBits) -> Ordering {
    a.period()
        .len()
        .cmp(&b.period().len())
        .then_with(|| a.period().cmp(b.period()))
}

/// Removes dominated and duplicate generators. The result denotes the same set.
pub fn normalize(generators: &[EventuallyPeriodicBits]) -> Result<SignatureExpr> {
    if generators.is_empty() {
        return Err(Error::invalid("a signature expression needs at least one generator"));
    }
    let mut reps: Vec<EventuallyPeriodicBits> =
        generators.iter().map(|g| g.class_representative()).collect();
    reps.sort_by(class_order);
    reps.dedup();
    let kept: Vec<EventuallyPeriodicBits> = reps
        .iter()
        .enumerate()
        .filter(|(i, g)| {
            !reps
                .iter()
                .enumerate()
                .any(|(j, h)| *i != j && g.leq(h))
        })
        .map(|(_, g)| g.clone())
        .collect();
    Ok(SignatureExpr { generators: kept })
}

/// The principal ideal `α(a)`.
pub fn alpha(a: &EventuallyPeriodicBits) -> SignatureExpr {
    SignatureExpr {
        generators: vec![a.class_representative()],
    }
}

pub fn union(e1: &SignatureExpr, e2: &SignatureExpr) -> SignatureExpr {
    let all: Vec<_> = e1.generators.iter().chain(&e2.generators).cloned().collect();
    normalize(&all).expect("nonempty")
}

/// Uses `α(a) ∩ α(b) = α(a ∧ b)` and distributivity over finite unions.
pub fn intersect(e1: &SignatureExpr, e2: &SignatureExpr) -> SignatureExpr {
    let meets: Vec<_> = e1
        .generators
        .iter()
        .flat_map(|g| e2.generators.iter().map(move |h| g.meet(h)))
        .collect();
    normalize(&meets).expect("nonempty")
}

pub fn member(b: &EventuallyPeriodicBits, e: &SignatureExpr) -> bool {
    e.generators.iter().any(|g| b.leq(g))
}

pub fn subset(e1: &SignatureExpr, e2: &SignatureExpr) -> bool {
    e1.generators.iter().all(|g| member(g, e2))
}

/// The maximal element `a` with `e = α(a)`, if there is one.
pub fn has_maximal_element(e: &SignatureExpr) -> Option<EventuallyPeriodicBits> {
    match e.generators.as_slice() {
        [only] => Some(only.clone()),
        _ => None,
    }
}

pub fn shift_expr(e: &SignatureExpr, m: i64) -> SignatureExpr {
    let shifted: Vec<_> = e.generators.iter().map(|g| g.shift(m)).collect();
    normalize(&shifted).expect("nonempty")
}

impl SignatureExpr {
    pub fn new(generators: &[EventuallyPeriodicBits]) -> Result<Self> {
        normalize(generators)
    }

    /// The minimal element `{𝟎}`.
    pub fn bottom() -> Self {
        alpha(&EventuallyPeriodicBits::zero())
    }

    /// The maximal element `I`.
    pub fn top() -> Self {
        alpha(&EventuallyPeriodicBits::one())
    }

    pub fn generators(&self) -> &[EventuallyPeriodicBits] {
        &self.generators
    }

    pub fn union(&self, other: &Self) -> Self {
        union(self, other)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        intersect(self, other)
    }

    pub fn contains(&self, b: &EventuallyPeriodicBits) -> bool {
        member(b, self)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        subset(self, other)
    }

    pub fn maximal_element(&self) -> Option<EventuallyPeriodicBits> {
        has_maximal_element(self)
    }

    pub fn shift(&self, m: i64) -> Self {
        shift_expr(self, m)
    }
}

impl<'de> Deserialize<'de> for SignatureExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            generators: Vec<EventuallyPeriodicBits>,
        }
        let raw = Raw::deserialize(deserializer)?;
        normalize(&raw.generators).map_err(serde::de::Error::custom)
    }
}

/// How a chain of running meets ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainOutcome {
    /// The last two meets agree and the last one has a detectable period.
    Stabilized,
    /// The last ring still removed 1-bits past `skip`.
    MeetsStillDecreasing,
    /// The meets agree but no eventual period fits the last one.
    NoPeriodDetected,
}

/// Result of intersecting the principal ideals of a shrinking chain of windows.
///
/// Stabilization is judged on the inspected window only; a negative outcome
/// means "no stabilization observed to this depth", never a proof.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizationReport {
    pub stabilized: bool,
    pub generator: Option<EventuallyPeriodicBits>,
    /// Running meets `m_j = w_1 ∧ … ∧ w_j`.
    pub chain: Vec<TruncatedBits>,
    pub depth: usize,
    pub rings_used: usize,
    pub skip: usize,
    /// 1-based chain indices `j` where `m_j` is strictly below `m_{j-1}` past `skip`.
    pub decreasing_at: Vec<usize>,
    pub outcome: ChainOutcome,
}

impl StabilizationReport {
    /// True if some strict decrease happened among the last third of the meets.
    pub fn decreasing_in_final_third(&self) -> bool {
        let t = self.chain.len();
        let first = t - t.div_ceil(3);
        self.decreasing_at.iter().any(|&j| j > first)
    }

    /// The signature `α(generator)` when the chain stabilized.
    pub fn signature(&self) -> Option<SignatureExpr> {
        self.generator.as_ref().map(alpha)
    }
}

/// Intersects `α([w_1]) ∩ α([w_2]) ∩ …` for a chain of windows taken over
/// shrinking neighborhoods.
///
/// Comparisons ignore levels up to the largest of `skip`, the windows' own
/// skips, and the deepest indeterminate bit of the last two meets.
pub fn from_shrinking_chain(
    chain: &[TruncatedBits],
    skip: usize,
    max_period: usize,
) -> Result<StabilizationReport> {
    let first = chain
        .first()
        .ok_or_else(|| Error::invalid("chain of windows is empty"))?;
    let depth = first.depth();
    if let Some(bad) = chain.iter().find(|w| w.depth() != depth) {
        return Err(Error::invalid(format!(
            "window depth mismatch: {} vs {}",
            bad.depth(),
            depth
        )));
    }

    let mut skip = chain.iter().map(TruncatedBits::skip).fold(skip, usize::max);
    let mut meets: Vec<TruncatedBits> = Vec::with_capacity(chain.len());
    for w in chain {
        let next = match meets.last() {
            Some(prev) => prev.meet(w)?,
            None => w.clone(),
        };
        meets.push(next);
    }
    for m in meets.iter().rev().take(2) {
        skip = skip.max(m.last_indeterminate().unwrap_or(0));
    }
    if skip >= depth {
        return Err(Error::InsufficientDepth(format!(
            "nothing left to compare: skip {skip} with depth {depth}"
        )));
    }
    let meets: Vec<TruncatedBits> = meets
        .iter()
        .map(|m| m.with_skip(skip))
        .collect::<Result<_>>()?;

    let decreasing_at: Vec<usize> = (1..meets.len())
        .filter(|&i| !meets[i].agrees_past(&meets[i - 1], skip))
        .map(|i| i + 1)
        .collect();

    let last = meets.last().unwrap();
    let settled = meets.len() < 2 || last.agrees_past(&meets[meets.len() - 2], skip);
    let (outcome, generator) = if !settled {
        (ChainOutcome::MeetsStillDecreasing, None)
    } else {
        match detect_eventual_period(last, max_period) {
            Some(g) => (ChainOutcome::Stabilized, Some(g)),
            None => (ChainOutcome::NoPeriodDetected, None),
        }
    };

    Ok(StabilizationReport {
        stabilized: outcome == ChainOutcome::Stabilized,
        generator,
        depth,
        rings_used: chain.len(),
        skip,
        decreasing_at,
        outcome,
        chain: meets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(s: &str) -> EventuallyPeriodicBits {
        s.parse().unwrap()
    }

    fn window(s: &str, skip: usize) -> TruncatedBits {
        s.parse::<TruncatedBits>().unwrap().with_skip(skip).unwrap()
    }

    #[test]
    fn alpha_endpoints() {
        let zero = EventuallyPeriodicBits::zero();
        let one = EventuallyPeriodicBits::one();
        assert_eq!(alpha(&zero), SignatureExpr::bottom());
        assert!(member(&zero, &alpha(&zero)));
        assert!(!member(&ep("|10"), &alpha(&zero)));
        let top = alpha(&one);
        for b in ["|10", "0110|011", "1", "0"] {
            assert!(member(&ep(b), &top));
        }
    }

    #[test]
    fn union_and_intersect_examples() {
        let a = ep("1|100");
        let b = ep("|110");
        assert_eq!(intersect(&alpha(&a), &alpha(&b)), alpha(&a.meet(&b)));
        assert_eq!(union(&alpha(&a), &alpha(&a)), alpha(&a));
        let u = union(&alpha(&ep("|10")), &alpha(&ep("|01")));
        assert_eq!(u.generators().len(), 2);
        assert!(subset(&u, &SignatureExpr::top()));
        assert!(!member(&EventuallyPeriodicBits::one(), &u));
    }

    #[test]
    fn normalize_examples() {
        let a = ep("|1100");
        let e = normalize(&[EventuallyPeriodicBits::zero(), a.clone()]).unwrap();
        assert_eq!(e, alpha(&a));
        assert_eq!(normalize(&[a.clone(), a.clone()]).unwrap(), alpha(&a));
        let e = normalize(&[ep("|10"), EventuallyPeriodicBits::one()]).unwrap();
        assert_eq!(e, SignatureExpr::top());
        assert!(normalize(&[]).is_err());
    }

    #[test]
    fn member_examples() {
        let e = union(&alpha(&ep("|10")), &alpha(&ep("|001")));
        assert!(member(&EventuallyPeriodicBits::zero(), &e));
        assert!(!member(&EventuallyPeriodicBits::one(), &alpha(&ep("|10"))));
        assert!(member(&ep("1|0"), &alpha(&ep("|10"))));
    }

    #[test]
    fn subset_examples() {
        let a = ep("|110");
        let b = ep("|011");
        let e = alpha(&a);
        assert!(subset(&e, &e));
        assert!(subset(&alpha(&a.meet(&b)), &alpha(&a)));
        assert!(!subset(&SignatureExpr::top(), &alpha(&ep("|10"))));
    }

    #[test]
    fn maximal_element_examples() {
        let a = ep("|1101");
        assert!(has_maximal_element(&alpha(&a)).unwrap().almost_equal(&a));
        let two = union(&alpha(&ep("|10")), &alpha(&ep("|01")));
        assert_eq!(has_maximal_element(&two), None);
        let with_zero = union(&alpha(&a), &alpha(&EventuallyPeriodicBits::zero()));
        assert!(has_maximal_element(&with_zero).unwrap().almost_equal(&a));
    }

    #[test]
    fn shift_expr_examples() {
        let e = union(&alpha(&ep("01|1000")), &alpha(&ep("|011")));
        for m in 0..5 {
            assert_eq!(shift_expr(&shift_expr(&e, m), -m), e);
        }
        assert_eq!(shift_expr(&SignatureExpr::top(), 7), SignatureExpr::top());
        assert_eq!(shift_expr(&alpha(&ep("|01")), -1), alpha(&ep("|10")));
    }

    #[test]
    fn json_form() {
        let e = union(&alpha(&ep("|10")), &alpha(&ep("|01")));
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"generators":["|01","|10"]}"#);
        let back: SignatureExpr = serde_json::from_str(r#"{"generators":["1","0"]}"#).unwrap();
        assert_eq!(back, SignatureExpr::top());
    }

    #[test]
    fn chain_of_identical_ones_stabilizes() {
        let w = window(&"1".repeat(24), 3);
        let report = from_shrinking_chain(&[w.clone(), w.clone(), w], 3, 8).unwrap();
        assert!(report.stabilized);
        assert!(report.generator.unwrap().is_one_class());
        assert!(report.decreasing_at.is_empty());
    }

    #[test]
    fn chain_that_keeps_clearing_bits_does_not_stabilize() {
        // Window j clears position j of an all-ones word, so every meet drops one more 1-bit.
        let depth = 24;
        let chain: Vec<TruncatedBits> = (1..=9)
            .map(|j| {
                let s: String = (1..=depth).map(|n| if n == 2 * j + 4 { '0' } else { '1' }).collect();
                window(&s, 2)
            })
            .collect();
        let report = from_shrinking_chain(&chain, 2, 6).unwrap();
        assert!(!report.stabilized);
        assert_eq!(report.outcome, ChainOutcome::MeetsStillDecreasing);
        assert!(report.decreasing_in_final_third());
        assert_eq!(report.decreasing_at, (2..=9).collect::<Vec<_>>());
    }

    #[test]
    fn chain_agreeing_past_skip_stabilizes() {
        let chain = [
            window("111111111111", 0),
            window("011111111111", 0),
            window("011111111111", 0),
        ];
        let report = from_shrinking_chain(&chain, 1, 4).unwrap();
        assert!(report.stabilized);
        assert!(report.generator.unwrap().is_one_class());
    }

    #[test]
    fn chain_errors() {
        assert!(from_shrinking_chain(&[], 0, 3).is_err());
        let r = from_shrinking_chain(&[window("0101", 0), window("01010", 0)], 0, 1);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn aperiodic_agreeing_chain_reports_no_period() {
        // Thue-Morse prefix: overlap-free, so no period repeats three times.
        let w = window("01101001100101101001011001101001", 0);
        let report = from_shrinking_chain(&[w.clone(), w], 0, 5).unwrap();
        assert_eq!(report.outcome, ChainOutcome::NoPeriodDetected);
        assert!(!report.stabilized);
    }
}
