//! The half-gap descent iteration.
//!
//! From a domain point `x_k`, either `phi(x_k) = J(x_k)` and the iteration
//! stops, or some member of `S(x_k)` has potential strictly below the
//! midpoint `(phi(x_k) + J(x_k)) / 2` (the minimizer of `phi` over `S(x_k)`
//! always qualifies) and the iteration steps to one such member. Potentials
//! then strictly decrease, descent sets nest, and on a finite instance the
//! stop case arrives within `|dom phi|` visits.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::descent::{s_set, SSet};
use crate::error::SolveError;
use crate::instance::Instance;
use crate::rat::ExtValue;
use crate::space::{PointId, PointSet};

/// How the next iterate is chosen among the eligible members.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SelectionRule {
    /// Minimizer of `phi` over the whole descent set, lowest index on ties.
    /// Always eligible; reaches the stop case fastest.
    ArgminPhi,
    /// Lowest-indexed eligible member.
    LowestIndex,
    /// Uniform choice among eligible members from a seeded stream.
    SeededRandom(u64),
}

impl SelectionRule {
    pub fn name(&self) -> &'static str {
        match self {
            SelectionRule::ArgminPhi => "argmin-phi",
            SelectionRule::LowestIndex => "lowest-index",
            SelectionRule::SeededRandom(_) => "seeded-random",
        }
    }
}

/// One visited point with the data the stop test and step rule used.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PicardStep {
    pub point: PointId,
    pub s_set: SSet,
    pub j_value: ExtValue,
    pub phi_value: ExtValue,
}

/// How the iteration ended.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Termination {
    /// `phi(x_m) = J(x_m)` at step index `m`: a genuine endpoint.
    Case1 { m: usize },
    /// Truncated mode only: the stop test fired at a point outside the
    /// honest prefix, so its minimality is an artifact of truncation. No
    /// endpoint is certified; nothing is extrapolated past the cutoff.
    PrefixExhausted { last: PointId },
}

/// Full trace of an iteration. `z` is the final visited point; it is a
/// certified endpoint only under `Termination::Case1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PicardRun {
    pub start: PointId,
    pub rule: SelectionRule,
    pub steps: Vec<PicardStep>,
    pub termination: Termination,
    pub z: PointId,
}

impl PicardRun {
    pub fn is_case1(&self) -> bool {
        matches!(self.termination, Termination::Case1 { .. })
    }
}

/// Runs the iteration from `x0`. Requires all instance audits and a start
/// inside the domain.
pub fn picard_iterate(
    inst: &Instance,
    x0: PointId,
    rule: SelectionRule,
) -> Result<PicardRun, SolveError> {
    picard_iterate_truncated(inst, x0, rule, &PointSet::full(inst.n()))
}

/// Iteration variant for truncated constructions: points outside `honest`
/// exist in the instance but their stop-test success is not trusted, and
/// the run reports [`Termination::PrefixExhausted`] when it lands there.
pub fn picard_iterate_truncated(
    inst: &Instance,
    x0: PointId,
    rule: SelectionRule,
    honest: &PointSet,
) -> Result<PicardRun, SolveError> {
    inst.require_audits()?;
    if !inst.phi().get(x0).is_finite() {
        return Err(SolveError::StartOutsideDomain { x: x0 });
    }
    let mut rng = match rule {
        SelectionRule::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut steps: Vec<PicardStep> = Vec::new();
    let mut x = x0;
    // Strictly decreasing potentials over a finite domain bound the visit
    // count; one extra lap would be a bug.
    let limit = inst.dom().len() + 1;
    loop {
        if steps.len() >= limit {
            return Err(SolveError::ConsistencyViolation {
                what: format!("descent iteration exceeded {limit} visits"),
            });
        }
        let sx = s_set(inst, x);
        let phi_x = inst.phi().get(x).clone();
        let j = sx.j_value.clone();
        steps.push(PicardStep {
            point: x,
            s_set: sx.clone(),
            j_value: j.clone(),
            phi_value: phi_x.clone(),
        });
        if phi_x == j {
            let termination = if honest.contains(x) {
                Termination::Case1 { m: steps.len() - 1 }
            } else {
                Termination::PrefixExhausted { last: x }
            };
            return Ok(PicardRun { start: x0, rule, steps, termination, z: x });
        }
        let half = phi_x.midpoint(&j);
        x = match rule {
            SelectionRule::ArgminPhi => {
                // First member attaining the minimum; set iteration is in
                // index order.
                sx.members
                    .iter()
                    .find(|&y| *inst.phi().get(y) == j)
                    .expect("descent set attains its minimum")
            }
            SelectionRule::LowestIndex => sx
                .members
                .iter()
                .find(|&y| *inst.phi().get(y) < half)
                .expect("half-gap eligibility is nonempty below the stop case"),
            SelectionRule::SeededRandom(_) => {
                let eligible: Vec<PointId> = sx
                    .members
                    .iter()
                    .filter(|&y| *inst.phi().get(y) < half)
                    .collect();
                let rng = rng.as_mut().expect("seeded rule carries a stream");
                eligible[rng.random_range(0..eligible.len())]
            }
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::testutil::w3_total_310;
    use crate::instance::{Instance, Phi};
    use crate::preorder::Preorder;
    use crate::space::testutil::{ids, w3};

    fn p(i: usize) -> PointId {
        PointId(i)
    }

    #[test]
    fn argmin_rule_from_a_reaches_c_in_one_step() {
        let inst = w3_total_310();
        let run = picard_iterate(&inst, p(0), SelectionRule::ArgminPhi).unwrap();
        assert_eq!(
            run.steps.iter().map(|s| s.point).collect::<Vec<_>>(),
            vec![p(0), p(2)]
        );
        assert_eq!(run.termination, Termination::Case1 { m: 1 });
        assert_eq!(run.z, p(2));
    }

    #[test]
    fn already_minimal_starts_stop_immediately() {
        let inst = w3_total_310();
        for x in [p(1), p(2)] {
            let run = picard_iterate(&inst, x, SelectionRule::ArgminPhi).unwrap();
            assert_eq!(run.termination, Termination::Case1 { m: 0 });
            assert_eq!(run.z, x);
        }
    }

    #[test]
    fn lowest_index_rule_may_stop_elsewhere_but_still_at_an_endpoint() {
        let inst = w3_total_310();
        // Eligible from a: phi < (3 + 0)/2, so both b (1) and c (0);
        // lowest index picks b, which is itself an endpoint.
        let run = picard_iterate(&inst, p(0), SelectionRule::LowestIndex).unwrap();
        assert_eq!(run.z, p(1));
        assert_eq!(run.termination, Termination::Case1 { m: 1 });
    }

    #[test]
    fn seeded_rule_is_deterministic_and_sound() {
        let inst = w3_total_310();
        for seed in 0..16 {
            let rule = SelectionRule::SeededRandom(seed);
            let a = picard_iterate(&inst, p(0), rule).unwrap();
            let b = picard_iterate(&inst, p(0), rule).unwrap();
            assert_eq!(a, b, "same seed, same run");
            assert!(a.is_case1());
            assert!(ids(&[1, 2]).contains(a.z), "endpoint must be b or c");
        }
    }

    #[test]
    fn trace_invariants_hold_on_every_rule() {
        let inst = w3_total_310();
        let rules = [
            SelectionRule::ArgminPhi,
            SelectionRule::LowestIndex,
            SelectionRule::SeededRandom(7),
        ];
        for rule in rules {
            for x0 in inst.dom().iter() {
                let run = picard_iterate(&inst, x0, rule).unwrap();
                assert!(run.steps.len() <= inst.dom().len());
                for k in 0..run.steps.len() - 1 {
                    let cur = &run.steps[k];
                    let next = &run.steps[k + 1];
                    assert!(cur.s_set.members.contains(next.point));
                    assert!(next.phi_value < cur.phi_value);
                    assert!(next.s_set.members.is_subset_of(&cur.s_set.members));
                    assert!(
                        next.phi_value < cur.phi_value.midpoint(&cur.j_value),
                        "half-gap rule respected"
                    );
                    // Ordered trace: later points dominate earlier ones.
                    assert!(inst.order().leq(cur.point, next.point));
                }
                // Travel-cost bound along the whole trace.
                for i in 0..run.steps.len() {
                    for j in i + 1..run.steps.len() {
                        let xi = run.steps[i].point;
                        let xj = run.steps[j].point;
                        let drop = match (&run.steps[i].phi_value, &run.steps[j].phi_value) {
                            (ExtValue::Finite(a), ExtValue::Finite(b)) => a - b,
                            _ => unreachable!("trace stays in the domain"),
                        };
                        assert!(inst.space().dist(xj, xi) <= &drop);
                    }
                }
            }
        }
    }

    #[test]
    fn infinite_start_is_rejected() {
        let inst = Instance::new(
            w3(),
            Preorder::total(3),
            Phi::new(vec![
                ExtValue::PlusInfinity,
                ExtValue::from_int(1),
                ExtValue::from_int(0),
            ]),
        )
        .unwrap();
        assert_eq!(
            picard_iterate(&inst, p(0), SelectionRule::ArgminPhi),
            Err(SolveError::StartOutsideDomain { x: p(0) })
        );
    }

    #[test]
    fn truncated_mode_reports_prefix_exhaustion_outside_honest_set() {
        let inst = w3_total_310();
        let honest = ids(&[0, 1]);
        let run =
            picard_iterate_truncated(&inst, p(0), SelectionRule::ArgminPhi, &honest).unwrap();
        assert_eq!(run.termination, Termination::PrefixExhausted { last: p(2) });
        assert_eq!(run.z, p(2));
        // Stops inside the honest set still certify.
        let run =
            picard_iterate_truncated(&inst, p(1), SelectionRule::ArgminPhi, &honest).unwrap();
        assert_eq!(run.termination, Termination::Case1 { m: 0 });
    }
}
