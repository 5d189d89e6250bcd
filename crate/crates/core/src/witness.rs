//! Truncated model of a space that defeats completeness.
//!
//! The construction realizes an increasing chain `x_1, x_2, ...` whose
//! backward distances telescope to summable dust while every forward
//! distance is a full unit. The chain is then right K-Cauchy but cannot
//! converge: each candidate limit sits a unit away from all later terms.
//! Potentials halve along the chain, so every point keeps a strict
//! improvement in its descent set and no endpoint can exist in the
//! untruncated space. Only a finite prefix is materialized here; reports
//! keep computed prefix facts separate from that design-level conclusion,
//! and the cutoff point is never treated as a genuine endpoint.

use crate::cauchy::{classify_cauchy, SeqSample};
use crate::descent::s_set;
use crate::error::SolveError;
use crate::instance::{Instance, Phi};
use crate::oracle::{check_equivalences_over, EquivalenceReport};
use crate::preorder::Preorder;
use crate::rat::{ExtValue, Rat};
use crate::space::{PointId, PointSet, QSpace, MAX_POINTS};

/// A validated prefix of the chain, `truncation` points long. Point index
/// `i` (zero-based) holds chain element `i + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessSpace {
    truncation: usize,
    instance: Instance,
}

impl WitnessSpace {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    /// Chain element by one-based position.
    pub fn point(&self, n: usize) -> PointId {
        assert!(n >= 1 && n <= self.truncation, "chain position out of range");
        PointId(n - 1)
    }

    /// The chain tail `{x_k, ..., x_N}` as a point set.
    pub fn tail_from(&self, k: usize) -> PointSet {
        (k..=self.truncation).map(|n| self.point(n)).collect()
    }

    /// The chain itself as a sampled sequence (pure prefix, no tail rule).
    pub fn identity_sequence(&self) -> SeqSample {
        SeqSample::prefix((1..=self.truncation).map(|n| self.point(n)).collect())
    }

    /// All chain elements before the cutoff; the quantifier window for
    /// honest negative claims.
    pub fn honest_bases(&self) -> PointSet {
        self.tail_from(1).minus(&PointSet::singleton(self.point(self.truncation)))
    }
}

/// Builds the length-`n` prefix: backward distance
/// `d(x_m, x_n) = 1/2^(n+1) - 1/2^(m+1)` for `m > n`, forward distance 1,
/// potential `1/2^(n-1)`, order by chain position. Every structural fact
/// the reports rely on is re-verified here, so a returned witness needs no
/// further trust.
pub fn build_witness(n: usize) -> Result<WitnessSpace, SolveError> {
    if n < 2 {
        return Err(SolveError::InvalidParameter {
            name: "N",
            reason: "the chain needs at least two points".into(),
        });
    }
    if n > MAX_POINTS {
        return Err(SolveError::InvalidParameter {
            name: "N",
            reason: format!("point count is capped at {MAX_POINTS}"),
        });
    }
    let back = |m: usize, k: usize| &Rat::pow2(-(k as i32 + 1)) - &Rat::pow2(-(m as i32 + 1));
    let mut d = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // One-based chain positions i + 1 and j + 1.
            d[i][j] = match i.cmp(&j) {
                std::cmp::Ordering::Equal => Rat::zero(),
                std::cmp::Ordering::Less => Rat::one(),
                std::cmp::Ordering::Greater => back(i + 1, j + 1),
            };
        }
    }
    let space = QSpace::validate(d).map_err(|e| SolveError::ConsistencyViolation {
        what: format!("witness matrix failed validation: {e}"),
    })?;
    let order_rows: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i <= j).collect())
        .collect();
    let order = Preorder::from_matrix(&order_rows).map_err(|e| SolveError::ConsistencyViolation {
        what: format!("witness order failed validation: {e}"),
    })?;
    let phi = Phi::new((1..=n).map(|k| ExtValue::Finite(Rat::pow2(1 - k as i32))).collect());
    let instance = Instance::new(space, order, phi).map_err(|e| SolveError::ConsistencyViolation {
        what: format!("witness instance failed to assemble: {e}"),
    })?;
    let w = WitnessSpace { truncation: n, instance };

    let fail = |what: String| SolveError::ConsistencyViolation { what };
    if !w.instance.space().is_t1() {
        return Err(fail("witness space is not separated".into()));
    }
    if !w.instance.audits().all() {
        return Err(fail("witness audits did not pass".into()));
    }
    for k in 1..n {
        let step = w.instance.space().dist(w.point(k + 1), w.point(k));
        if !(step < &Rat::pow2(-(k as i32 + 1))) {
            return Err(fail(format!("step {k} is not below its summable bound")));
        }
        let (pk, pk1) = (w.instance.phi().get(w.point(k)), w.instance.phi().get(w.point(k + 1)));
        if !(pk1 < pk) {
            return Err(fail(format!("potential fails to drop at position {k}")));
        }
    }
    for k in 1..=n {
        if s_set(&w.instance, w.point(k)).members != w.tail_from(k) {
            return Err(fail(format!("descent set at position {k} is not the chain tail")));
        }
        // Sublevel sets cut the chain at exact tails: a budget strictly
        // between consecutive potentials keeps precisely the later points.
        let budget = ExtValue::Finite(&Rat::from_int(3) * &Rat::pow2(-(k as i32 + 1)));
        let sublevel: PointSet = w
            .instance
            .space()
            .points()
            .filter(|&x| w.instance.phi().get(x) <= &budget)
            .collect();
        // tail_from(n + 1) is empty: a budget below the minimum keeps nothing.
        if sublevel != w.tail_from(k + 1) {
            return Err(fail(format!("sublevel cut at position {k} is not a tail")));
        }
    }
    Ok(w)
}

/// One threshold row of the modulus table: the least position from which
/// all later backward distances stay below `eps`, next to the analytic
/// bound `ceil(log2(1/eps))` that the construction promises.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModulusRow {
    pub eps: Rat,
    pub least: usize,
    pub bound: usize,
}

/// Computed prefix evidence that the chain defeats completeness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessReport {
    pub truncation: usize,
    /// Right-condition moduli for thresholds `1/2, 1/4, ...`.
    pub moduli: Vec<ModulusRow>,
    pub moduli_within_bound: bool,
    /// Every strictly forward distance equals one.
    pub forward_unit: bool,
    /// Least left-condition modulus at threshold `1/2`: equal to the
    /// prefix length, meaning only the vacuous final position qualifies.
    pub left_least_at_half: usize,
    /// Points the chain converges to on the prefix. Empty.
    pub limit_candidates: PointSet,
    /// Each pre-cutoff point paired with its successor: a member of its
    /// descent set at strictly smaller potential.
    pub strict_successors: Vec<(PointId, PointId)>,
    /// The principle harness quantified over the pre-cutoff window: no
    /// endpoint there, and the strict-descent map defeats the fixed-point
    /// conclusion at every base.
    pub prefix_equivalence: EquivalenceReport,
    /// The design-level conclusion the prefix illustrates but cannot prove.
    pub conclusion: String,
}

fn ceil_log2_inverse(eps: &Rat, cap: usize) -> usize {
    (0..=cap)
        .find(|&j| &Rat::pow2(-(j as i32)) <= eps)
        .unwrap_or(cap)
}

/// Assembles the prefix evidence for a built witness: the modulus table
/// with its analytic bounds, the forward-distance block on convergence,
/// and the endpoint failure at every pre-cutoff base.
pub fn witness_noncompleteness_report(w: &WitnessSpace) -> Result<WitnessReport, SolveError> {
    let n = w.truncation();
    let inst = w.instance();
    let seq = w.identity_sequence();
    let thresholds: Vec<Rat> = (1..n).map(|j| Rat::pow2(-(j as i32))).collect();
    let classified = classify_cauchy(inst.space(), &seq, &thresholds)
        .map_err(|e| SolveError::ConsistencyViolation {
            what: format!("witness sequence failed classification: {e}"),
        })?;
    let mut moduli = Vec::with_capacity(thresholds.len());
    for (eps, least) in thresholds.iter().zip(&classified.right) {
        let least = least.ok_or(SolveError::ConsistencyViolation {
            what: "prefix right condition has no modulus".into(),
        })?;
        moduli.push(ModulusRow {
            eps: eps.clone(),
            bound: ceil_log2_inverse(eps, 2 * n),
            least,
        });
    }
    let moduli_within_bound = moduli.iter().all(|r| r.least <= r.bound);

    let mut forward_unit = true;
    for i in 0..n {
        for j in (i + 1)..n {
            forward_unit &= inst.space().dist(PointId(i), PointId(j)) == &Rat::one();
        }
    }
    let half = [Rat::new(1, 2)];
    let left_least_at_half = classify_cauchy(inst.space(), &seq, &half)
        .map_err(|e| SolveError::ConsistencyViolation {
            what: format!("witness sequence failed classification: {e}"),
        })?
        .left[0]
        .unwrap_or(n);

    let mut strict_successors = Vec::with_capacity(n - 1);
    for k in 1..n {
        let (x, y) = (w.point(k), w.point(k + 1));
        let improves = s_set(inst, x).members.contains(y)
            && inst.phi().get(y) < inst.phi().get(x);
        if !improves {
            return Err(SolveError::ConsistencyViolation {
                what: format!("successor fails to improve at position {k}"),
            });
        }
        strict_successors.push((x, y));
    }
    let prefix_equivalence = check_equivalences_over(inst, &w.honest_bases())?;
    if prefix_equivalence.wek_holds {
        return Err(SolveError::ConsistencyViolation {
            what: "an endpoint appeared among the pre-cutoff bases".into(),
        });
    }
    Ok(WitnessReport {
        truncation: n,
        moduli,
        moduli_within_bound,
        forward_unit,
        left_least_at_half,
        limit_candidates: classified.converges_to,
        strict_successors,
        prefix_equivalence,
        conclusion: format!(
            "computed on the {n}-point prefix; in the untruncated chain every \
             point keeps a strict improvement, so no endpoint exists there and \
             the chain stays non-convergent despite its vanishing backward \
             distances"
        ),
    })
}
