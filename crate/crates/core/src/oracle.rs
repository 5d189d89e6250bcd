//! Brute-force oracles and cross-checking harnesses.
//!
//! Everything here is written as a direct transcription of a defining
//! formula, with no shared code paths into the solvers it checks. The
//! oracles quantify exhaustively, so they are the authority whenever a
//! solver and an oracle disagree.

use crate::descent::s_set;
use crate::error::SolveError;
use crate::instance::Instance;
use crate::principles::{caristi_single, takahashi, weak_ekeland, TakahashiVariant};
use crate::space::{PointId, PointSet};

/// Every endpoint of the weak variational principle: the points `z` in the
/// domain whose descent set carries a constant potential.
///
/// Exhaustive by construction. On a finite validated instance this set is
/// never empty, because any global minimizer qualifies: everything in its
/// descent set is forced down to the same minimal value.
pub fn oracle_wek(inst: &Instance) -> PointSet {
    let mut out = PointSet::empty();
    for z in inst.dom().iter() {
        let pz = inst.phi().get(z);
        let constant = s_set(inst, z)
            .members
            .iter()
            .all(|y| inst.phi().get(y) == pz);
        if constant {
            out.insert(z);
        }
    }
    out
}

/// Whether every base point (restricted to `bases`) admits a strict
/// improvement inside its descent set. This is the negated endpoint
/// condition written as a universal statement; restricting the base
/// quantifier supports truncated constructions where the final point's
/// minimality is an artifact of the cutoff.
pub fn tak_negation_over(inst: &Instance, bases: &PointSet) -> bool {
    bases.intersect(&inst.dom()).iter().all(|x| {
        let px = inst.phi().get(x);
        s_set(inst, x).members.iter().any(|y| inst.phi().get(y) < px)
    })
}

/// [`tak_negation_over`] with the base quantifier running over the whole
/// domain.
pub fn tak_negation(inst: &Instance) -> bool {
    tak_negation_over(inst, &PointSet::full(inst.n()))
}

/// Endpoints of the weak principle when the endpoint quantifier is
/// restricted to `bases` (descent sets stay unrestricted).
pub fn oracle_wek_over(inst: &Instance, bases: &PointSet) -> PointSet {
    oracle_wek(inst).intersect(bases)
}

/// A small deterministic family of maps that are feasible by construction:
/// each sends every point somewhere inside its own descent set. Used to
/// exercise the fixed-point principle without random search.
pub fn feasible_map_family(inst: &Instance) -> Vec<Vec<PointId>> {
    let identity: Vec<PointId> = inst.space().points().collect();
    let mut first = Vec::with_capacity(inst.n());
    let mut last = Vec::with_capacity(inst.n());
    let mut argmin = Vec::with_capacity(inst.n());
    for x in inst.space().points() {
        let s = s_set(inst, x);
        // Descent sets always contain their base, so these never miss.
        first.push(s.members.first().expect("descent set contains its base"));
        last.push(s.members.iter().last().expect("descent set contains its base"));
        argmin.push(
            s.members
                .iter()
                .find(|&y| inst.phi().get(y) == &s.j_value)
                .expect("descent set attains its minimum"),
        );
    }
    vec![identity, first, last, argmin]
}

/// The outcome of playing the three principles against each other on one
/// instance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivalenceReport {
    /// Some base point is an endpoint.
    pub wek_holds: bool,
    pub wek_points: PointSet,
    /// Every base point admits a strict improvement in its descent set.
    pub tak_negation: bool,
    /// Built only when no endpoint exists among the bases: each base maps
    /// to the least-potential strict improvement in its descent set,
    /// lowest index on ties. Feasible everywhere yet without any point
    /// satisfying the fixed-point conclusion.
    pub adversarial_t: Option<Vec<(PointId, PointId)>>,
    /// With endpoints: the feasible family all realize the fixed-point
    /// conclusion. Without: the adversarial map defeats it at every base.
    pub caristi_consistent: bool,
}

/// [`check_equivalences`] with the base quantifier restricted to `bases`.
/// Descent sets are never restricted; truncated constructions use this to
/// exclude a cutoff point whose minimality is artificial.
pub fn check_equivalences_over(
    inst: &Instance,
    bases: &PointSet,
) -> Result<EquivalenceReport, SolveError> {
    let active = bases.intersect(&inst.dom());
    let wek_points = oracle_wek_over(inst, bases);
    let wek_holds = !wek_points.is_empty();
    let tak_negation = tak_negation_over(inst, bases);
    if wek_holds != !tak_negation {
        return Err(SolveError::ConsistencyViolation {
            what: "endpoint existence disagrees with the negated descent condition".into(),
        });
    }
    let (adversarial_t, caristi_consistent) = if wek_holds {
        (None, family_realizes_conclusion(inst, &wek_points))
    } else {
        let map = build_adversarial_map(inst, &active);
        // No base can satisfy the conclusion: its image sits strictly
        // below it in potential, so the potentials never match.
        let defeated = map.iter().all(|&(x, tx)| {
            !(inst.phi().get(tx) == inst.phi().get(x) && inst.space().dist(tx, x).is_zero())
        });
        (Some(map), defeated)
    };
    Ok(EquivalenceReport {
        wek_holds,
        wek_points,
        tak_negation,
        adversarial_t,
        caristi_consistent,
    })
}

/// Plays the principles against each other: endpoint existence must be the
/// exact negation of the everywhere-strict-descent condition, and the
/// fixed-point principle must follow whichever side holds. A violation is
/// an implementation bug, not a property of the instance.
pub fn check_equivalences(inst: &Instance) -> Result<EquivalenceReport, SolveError> {
    check_equivalences_over(inst, &PointSet::full(inst.n()))
}

fn build_adversarial_map(inst: &Instance, active: &PointSet) -> Vec<(PointId, PointId)> {
    let mut map = Vec::new();
    for x in active.iter() {
        let px = inst.phi().get(x);
        let mut best: Option<PointId> = None;
        for y in s_set(inst, x).members.iter() {
            if inst.phi().get(y) < px
                && best.is_none_or(|b| inst.phi().get(y) < inst.phi().get(b))
            {
                best = Some(y);
            }
        }
        // Callers only build this map when every base has a strict
        // improvement, so the choice always exists.
        map.push((x, best.expect("strict improvement exists at every base")));
    }
    map
}

fn family_realizes_conclusion(inst: &Instance, wek_points: &PointSet) -> bool {
    let Some(z) = wek_points.first() else {
        return false;
    };
    let mut ok = true;
    for t in feasible_map_family(inst) {
        let tz = t[z.0];
        // Oracle-side check at a known endpoint: needs no audits, only the
        // endpoint arithmetic.
        ok &= inst.phi().get(tz) == inst.phi().get(z) && inst.space().dist(tz, z).is_zero();
        // Solver cross-check where the solver is willing to run.
        if inst.audits().all() {
            match caristi_single(inst, &t) {
                Ok(r) => ok &= r.conclusion.phi_equal && r.conclusion.in_closure,
                Err(_) => ok = false,
            }
        }
    }
    ok
}

/// The order-free descent filter used on symmetric spaces: all points whose
/// potential plus travel to `x` is covered by the potential of `x`.
pub fn r_set(inst: &Instance, x: PointId) -> PointSet {
    let px = inst.phi().get(x);
    let mut out = PointSet::empty();
    for y in inst.space().points() {
        if &inst.phi().get(y).add_rat(inst.space().dist(y, x)) <= px {
            out.insert(y);
        }
    }
    out
}

/// Agreement checks between the general solvers and their simpler
/// symmetric-space forms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MetricSpecializationReport {
    /// The order-free filter matches the descent set at every point.
    pub r_equals_s: bool,
    pub mismatch: Option<PointId>,
    /// The solver's endpoint, whose filter set collapses to itself.
    pub z: PointId,
    pub wek_singleton: bool,
    /// The filter-based minimization hypothesis agrees with both solver
    /// variants, including the first violation when there is one.
    pub tak_agrees: bool,
    /// The feasible family lands in the filter sets and every member
    /// realizes the fixed-point conclusion through the solver.
    pub caristi_agrees: bool,
}

/// Runs the symmetric-space specializations of the three principles and
/// compares them against the general solvers. Requires a symmetric metric
/// and a total order; with both, the order clause of the descent set is
/// vacuous and validated symmetry forces positive separation.
pub fn metric_specialization_suite(
    inst: &Instance,
) -> Result<MetricSpecializationReport, SolveError> {
    if !inst.space().is_symmetric() {
        return Err(SolveError::PreconditionNotMet {
            what: "metric specialization needs a symmetric distance matrix".into(),
        });
    }
    if !inst.order().is_total() {
        return Err(SolveError::PreconditionNotMet {
            what: "metric specialization needs a total order".into(),
        });
    }
    inst.require_audits()?;

    let mut r_equals_s = true;
    let mut mismatch = None;
    for x in inst.space().points() {
        if r_set(inst, x) != s_set(inst, x).members {
            r_equals_s = false;
            mismatch.get_or_insert(x);
        }
    }

    let z = weak_ekeland(inst, None)?.z;
    let wek_singleton = r_set(inst, z) == PointSet::singleton(z);

    let min = inst.min_phi();
    let mut r_violation = None;
    for x in inst.dom().iter() {
        if inst.phi().get(x) > &min && r_set(inst, x) == PointSet::singleton(x) {
            r_violation = Some(x);
            break;
        }
    }
    let strict = takahashi(inst, TakahashiVariant::StrictPhi)?;
    let closure = takahashi(inst, TakahashiVariant::Closure)?;
    let tak_agrees = strict.hypothesis_ok == r_violation.is_none()
        && closure.hypothesis_ok == r_violation.is_none()
        && strict.violation == r_violation
        && closure.violation == r_violation;

    let mut caristi_agrees = true;
    for t in feasible_map_family(inst) {
        let lands_in_r = inst.dom().iter().all(|x| r_set(inst, x).contains(t[x.0]));
        caristi_agrees &= lands_in_r;
        match caristi_single(inst, &t) {
            Ok(r) => caristi_agrees &= r.conclusion.phi_equal && r.conclusion.in_closure,
            Err(_) => caristi_agrees = false,
        }
    }

    Ok(MetricSpecializationReport {
        r_equals_s,
        mismatch,
        z,
        wek_singleton,
        tak_agrees,
        caristi_agrees,
    })
}
