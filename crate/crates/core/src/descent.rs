//! The potential-induced order and the descent sets it carves out.
//!
//! The order is `x <= y` iff `phi(y) + d(y, x) <= phi(x)`: stepping from x
//! to y must pay the travel cost `d(y, x)` out of the potential drop. With
//! absorbing `+inf` arithmetic a point outside the domain sits below
//! everything. The relation is a preorder on the space and antisymmetric on
//! the domain (adding the two defining inequalities forces both distances
//! to zero, then QM3 collapses the pair).
//!
//! The descent set `S(x)` intersects this with the ambient preorder:
//! `S(x) = { y : x` is below `y` in both orders `}`. `J(x)` is the least
//! potential over `S(x)`; on finite instances the infimum is attained.

use crate::error::SolveError;
use crate::instance::{Instance, Phi};
use crate::preorder::Preorder;
use crate::rat::ExtValue;
use crate::space::{PointId, PointSet, QSpace};

/// `x <= y` in the potential order: `phi(y) + d(y, x) <= phi(x)`.
fn phi_leq_raw(s: &QSpace, phi: &Phi, x: PointId, y: PointId) -> bool {
    phi.get(y).add_rat(s.dist(y, x)) <= *phi.get(x)
}

/// Per-point descent sets and their minima, computed once per instance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct DescentTable {
    members: Vec<PointSet>,
    j: Vec<ExtValue>,
}

impl DescentTable {
    pub(crate) fn build(s: &QSpace, order: &Preorder, phi: &Phi) -> DescentTable {
        let n = s.n();
        let mut members = Vec::with_capacity(n);
        let mut j = Vec::with_capacity(n);
        for x in s.points() {
            let set: PointSet = order
                .upper_set(x)
                .iter()
                .filter(|&y| phi_leq_raw(s, phi, x, y))
                .collect();
            let min = set
                .iter()
                .map(|y| phi.get(y).clone())
                .min()
                .unwrap_or(ExtValue::PlusInfinity);
            members.push(set);
            j.push(min);
        }
        DescentTable { members, j }
    }
}

/// The descent set of a base point, with its potential minimum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SSet {
    pub base: PointId,
    pub members: PointSet,
    /// Least potential over the members; finite whenever the base is in the
    /// domain, and `+inf` only when every member is outside it.
    pub j_value: ExtValue,
}

/// `x <= y` in the potential order.
pub fn phi_leq(inst: &Instance, x: PointId, y: PointId) -> bool {
    phi_leq_raw(inst.space(), inst.phi(), x, y)
}

/// The descent set `S(x)`. Defined for every point: a base outside the
/// domain is below everything in the potential order, so its descent set is
/// just its upper set in the ambient preorder.
pub fn s_set(inst: &Instance, x: PointId) -> SSet {
    SSet {
        base: x,
        members: inst.table.members[x.0],
        j_value: inst.table.j[x.0].clone(),
    }
}

/// Audit of the potential order itself. Any witness here indicates a bug or
/// an invalid input, not a legitimate mathematical outcome.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiOrderAudit {
    /// A point not below itself (impossible: `d(x, x) = 0`).
    pub reflexivity: Option<PointId>,
    /// A chain `x <= y <= z` without `x <= z`.
    pub transitivity: Option<(PointId, PointId, PointId)>,
    /// Distinct domain points below each other.
    pub antisymmetry_on_dom: Option<(PointId, PointId)>,
}

impl PhiOrderAudit {
    pub fn all_pass(&self) -> bool {
        self.reflexivity.is_none()
            && self.transitivity.is_none()
            && self.antisymmetry_on_dom.is_none()
    }
}

pub fn audit_phi_order(inst: &Instance) -> PhiOrderAudit {
    let s = inst.space();
    let phi = inst.phi();
    let dom = inst.dom();
    let mut audit = PhiOrderAudit {
        reflexivity: None,
        transitivity: None,
        antisymmetry_on_dom: None,
    };
    for x in s.points() {
        if !phi_leq_raw(s, phi, x, x) {
            audit.reflexivity = Some(x);
            break;
        }
    }
    'trans: for x in s.points() {
        for y in s.points() {
            if !phi_leq_raw(s, phi, x, y) {
                continue;
            }
            for z in s.points() {
                if phi_leq_raw(s, phi, y, z) && !phi_leq_raw(s, phi, x, z) {
                    audit.transitivity = Some((x, y, z));
                    break 'trans;
                }
            }
        }
    }
    'anti: for x in dom.iter() {
        for y in dom.iter() {
            if x != y && phi_leq_raw(s, phi, x, y) && phi_leq_raw(s, phi, y, x) {
                audit.antisymmetry_on_dom = Some((x, y));
                break 'anti;
            }
        }
    }
    audit
}

/// A violation of one of the descent-set properties, with the points
/// involved (`y`, `z` filled as the clause requires).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SWitness {
    pub x: PointId,
    pub y: Option<PointId>,
    pub z: Option<PointId>,
}

/// Audit of the five structural properties of descent sets over every base
/// in the domain. All five are theorems under the instance audits, so any
/// witness indicates a bug.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SPropertiesAudit {
    /// (i) `x` belongs to `S(x)` and `S(x)` stays inside the domain.
    pub base_and_domain: Option<SWitness>,
    /// (ii) members weakly lower the potential and their descent sets nest:
    /// `y` in `S(x)` gives `phi(y) <= phi(x)` and `S(y)` inside `S(x)`.
    pub monotone_nested: Option<SWitness>,
    /// (iii) members outside the closure of `{x}` strictly lower the
    /// potential; equality forces membership in the closure.
    pub strict_outside_closure: Option<SWitness>,
    /// (iv) a member outside the closure forces `phi(x) > J(x)`.
    pub gap_below_base: Option<SWitness>,
    /// (v) descent sets are increasingly closed: zero distance into a
    /// member pulls the source in.
    pub increasingly_closed: Option<SWitness>,
}

impl SPropertiesAudit {
    pub fn all_pass(&self) -> bool {
        self.base_and_domain.is_none()
            && self.monotone_nested.is_none()
            && self.strict_outside_closure.is_none()
            && self.gap_below_base.is_none()
            && self.increasingly_closed.is_none()
    }
}

/// Runs the five-clause audit. Requires all instance audits: clause (v) in
/// particular rests on order compatibility and semicontinuity.
pub fn audit_s_properties(inst: &Instance) -> Result<SPropertiesAudit, SolveError> {
    inst.require_audits()?;
    let s = inst.space();
    let phi = inst.phi();
    let dom = inst.dom();
    let mut audit = SPropertiesAudit {
        base_and_domain: None,
        monotone_nested: None,
        strict_outside_closure: None,
        gap_below_base: None,
        increasingly_closed: None,
    };
    let w = |x, y, z| SWitness { x, y, z };
    for x in dom.iter() {
        let sx = s_set(inst, x);
        let phi_x = phi.get(x);

        if audit.base_and_domain.is_none() {
            if !sx.members.contains(x) {
                audit.base_and_domain = Some(w(x, None, None));
            } else if let Some(y) = sx.members.minus(&dom).first() {
                audit.base_and_domain = Some(w(x, Some(y), None));
            }
        }

        for y in sx.members.iter() {
            if audit.monotone_nested.is_none() {
                let sy = s_set(inst, y);
                if phi.get(y) > phi_x {
                    audit.monotone_nested = Some(w(x, Some(y), None));
                } else if let Some(z) = sy.members.minus(&sx.members).first() {
                    audit.monotone_nested = Some(w(x, Some(y), Some(z)));
                }
            }
            let in_closure = s.closure_of_point(x).contains(y);
            if audit.strict_outside_closure.is_none()
                && !in_closure
                && phi.get(y) >= phi_x
            {
                audit.strict_outside_closure = Some(w(x, Some(y), None));
            }
            if audit.gap_below_base.is_none() && !in_closure && sx.j_value >= *phi_x {
                audit.gap_below_base = Some(w(x, Some(y), None));
            }
            if audit.increasingly_closed.is_none() {
                if let Some(u) = s.closure_of_point(y).minus(&sx.members).first() {
                    audit.increasingly_closed = Some(w(x, Some(y), Some(u)));
                }
            }
        }
    }
    Ok(audit)
}
