//! Left/right K-Cauchy classification of sampled sequences.
//!
//! A sequence is left K-Cauchy when for every `eps > 0` there is an index
//! `n_eps` with `d(x_n, x_m) < eps` whenever `n_eps <= n < m`; right
//! K-Cauchy swaps the arguments to `d(x_m, x_n)`. Left K-Cauchy in a space
//! is the same as right K-Cauchy in its conjugate.
//!
//! Samples are finite prefixes, optionally extended by a periodic tail rule.
//! With a tail rule the infinite conditions are decidable exactly: every
//! ordered pair of cycle values recurs beyond any index. Without one, all
//! verdicts are prefix-only and convergence evidence requires at least two
//! trailing zero-distance terms, so a lone final term never counts.

use crate::rat::Rat;
use crate::space::{PointId, PointSet, QSpace};

/// A sampled sequence: an explicit prefix, optionally followed by a cycle
/// repeated forever.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeqSample {
    pub terms: Vec<PointId>,
    pub tail: Option<TailRule>,
}

/// Periodic continuation: after the prefix, the `cycle` list repeats.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TailRule {
    pub cycle: Vec<PointId>,
}

impl SeqSample {
    pub fn prefix(terms: Vec<PointId>) -> SeqSample {
        SeqSample { terms, tail: None }
    }

    pub fn eventually_constant(terms: Vec<PointId>, at: PointId) -> SeqSample {
        SeqSample { terms, tail: Some(TailRule { cycle: vec![at] }) }
    }

    pub fn periodic(terms: Vec<PointId>, cycle: Vec<PointId>) -> SeqSample {
        SeqSample { terms, tail: Some(TailRule { cycle }) }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum SeqError {
    #[error("sequence has no terms")]
    Empty,
    #[error("sequence term {x} is outside the space")]
    PointOutOfRange { x: PointId },
    #[error("tail cycle is empty")]
    EmptyCycle,
    #[error("threshold {eps} is not positive")]
    NonPositiveThreshold { eps: Rat },
    #[error("sequence is not right K-Cauchy on the sampled data")]
    NotRightKCauchy,
}

/// Classification outcome. `left[i]` / `right[i]` hold the least modulus for
/// `thresholds[i]`: positions are 1-based, `len + 1` means the condition
/// only holds from the tail on, `None` means no modulus exists (possible
/// only with a tail rule, where pairs recur forever).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CauchyReport {
    pub thresholds: Vec<Rat>,
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
    pub left_k: bool,
    pub right_k: bool,
    /// Points the sequence converges to on the sampled data: with a tail,
    /// zero distance to every cycle value; without one, a zero-distance
    /// suffix of length at least two.
    pub converges_to: PointSet,
}

fn check_sample(s: &QSpace, seq: &SeqSample) -> Result<(), SeqError> {
    if seq.terms.is_empty() {
        return Err(SeqError::Empty);
    }
    if let Some(t) = &seq.tail {
        if t.cycle.is_empty() {
            return Err(SeqError::EmptyCycle);
        }
    }
    let all = seq.terms.iter().chain(seq.tail.iter().flat_map(|t| t.cycle.iter()));
    for &x in all {
        if x.0 >= s.n() {
            return Err(SeqError::PointOutOfRange { x });
        }
    }
    Ok(())
}

/// Values occurring strictly after 1-based position `n`.
fn values_after(seq: &SeqSample, n: usize) -> PointSet {
    let mut vs: PointSet = seq.terms[n..].iter().copied().collect();
    if let Some(t) = &seq.tail {
        vs = vs.union(&t.cycle.iter().copied().collect());
    }
    vs
}

/// Least 1-based modulus for one threshold. `swap` false checks the left
/// condition `d(x_n, x_m) < eps`; true checks the right one.
fn least_modulus(s: &QSpace, seq: &SeqSample, eps: &Rat, swap: bool) -> Option<usize> {
    let below = |from: PointId, to: PointId| {
        let v = if swap { s.dist(to, from) } else { s.dist(from, to) };
        v < eps
    };
    // With a tail, every ordered pair of cycle values occurs beyond any
    // index, so they gate every candidate modulus.
    if let Some(t) = &seq.tail {
        for &u in &t.cycle {
            for &v in &t.cycle {
                if !below(u, v) {
                    return None;
                }
            }
        }
    }
    let len = seq.terms.len();
    // The condition is monotone in the candidate modulus: raising it only
    // removes pairs. Scan for the longest suffix of positions whose later
    // values all stay below the threshold. For a pure prefix the final
    // position has no later values, so the scan never yields len + 1.
    let mut best = len + 1; // tail-only
    for n in (1..=len).rev() {
        let x = seq.terms[n - 1];
        if values_after(seq, n).iter().all(|v| below(x, v)) {
            best = n;
        } else {
            break;
        }
    }
    Some(best)
}

fn converges_to(s: &QSpace, seq: &SeqSample) -> PointSet {
    let mut out = PointSet::empty();
    match &seq.tail {
        Some(t) => {
            for x in s.points() {
                if t.cycle.iter().all(|&u| s.dist(x, u).is_zero()) {
                    out.insert(x);
                }
            }
        }
        None => {
            let len = seq.terms.len();
            if len < 2 {
                return out;
            }
            for x in s.points() {
                let suffix_ok = seq.terms[len - 2..]
                    .iter()
                    .all(|&u| s.dist(x, u).is_zero());
                if suffix_ok {
                    out.insert(x);
                }
            }
        }
    }
    out
}

/// Classifies the sample against the given positive thresholds, reporting
/// least moduli for the left and right conditions plus convergence targets.
pub fn classify_cauchy(
    s: &QSpace,
    seq: &SeqSample,
    thresholds: &[Rat],
) -> Result<CauchyReport, SeqError> {
    check_sample(s, seq)?;
    for eps in thresholds {
        if !eps.is_positive() {
            return Err(SeqError::NonPositiveThreshold { eps: eps.clone() });
        }
    }
    let left: Vec<Option<usize>> = thresholds
        .iter()
        .map(|eps| least_modulus(s, seq, eps, false))
        .collect();
    let right: Vec<Option<usize>> = thresholds
        .iter()
        .map(|eps| least_modulus(s, seq, eps, true))
        .collect();
    let left_k = left.iter().all(|m| m.is_some());
    let right_k = right.iter().all(|m| m.is_some());
    Ok(CauchyReport {
        thresholds: thresholds.to_vec(),
        left,
        right,
        left_k,
        right_k,
        converges_to: converges_to(s, seq),
    })
}

/// Outcome of the subsequence-limit check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubsequenceLimitReport {
    /// Points some subsequence converges to on the sampled data.
    pub candidates: PointSet,
    /// Candidates the full sequence fails to converge to. Empty means the
    /// proposition's conclusion holds: a right K-Cauchy sequence with a
    /// convergent subsequence converges as a whole.
    pub failures: Vec<PointId>,
    pub passed: bool,
}

/// Checks that every subsequence limit is a limit of the whole sequence.
/// Requires the sample to be right K-Cauchy against every distinct positive
/// distance value of the space, which decides the property exactly for
/// tail-ruled samples and is the strongest finite check for bare prefixes.
pub fn subsequence_limit_check(
    s: &QSpace,
    seq: &SeqSample,
) -> Result<SubsequenceLimitReport, SeqError> {
    check_sample(s, seq)?;
    let thresholds = s.positive_distance_values();
    let report = classify_cauchy(s, seq, &thresholds)?;
    if !report.right_k {
        return Err(SeqError::NotRightKCauchy);
    }
    let mut candidates = PointSet::empty();
    match &seq.tail {
        Some(t) => {
            // A subsequence may settle on any recurring value.
            for x in s.points() {
                if t.cycle.iter().any(|&u| s.dist(x, u).is_zero()) {
                    candidates.insert(x);
                }
            }
        }
        None => {
            // Prefix evidence: at least two zero-distance hits, one of them
            // at the cutoff so the subsequence is not already over.
            let len = seq.terms.len();
            let last = seq.terms[len - 1];
            for x in s.points() {
                let hits = seq
                    .terms
                    .iter()
                    .filter(|&&u| s.dist(x, u).is_zero())
                    .count();
                if hits >= 2 && s.dist(x, last).is_zero() {
                    candidates.insert(x);
                }
            }
        }
    }
    let converges = |x: PointId| match &seq.tail {
        Some(t) => t.cycle.iter().all(|&u| s.dist(x, u).is_zero()),
        None => s.dist(x, *seq.terms.last().expect("nonempty")).is_zero(),
    };
    let failures: Vec<PointId> = candidates.iter().filter(|&x| !converges(x)).collect();
    let passed = failures.is_empty();
    Ok(SubsequenceLimitReport { candidates, failures, passed })
}
