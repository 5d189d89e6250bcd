//! The working unit of the library: a space, a preorder, and a potential,
//! with the three audits every solver relies on recorded up front.
//!
//! The audits are recorded, not enforced: building an instance with a
//! failing audit succeeds and the failure is visible in [`Audits`], so
//! validators can report it. Solvers refuse to run unless all three hold.

use crate::descent::DescentTable;
use crate::error::SolveError;
use crate::preorder::{check_d_ord, Preorder};
use crate::rat::ExtValue;
use crate::space::{PointId, PointSet, QSpace};

/// A potential `phi : X -> (-inf, +inf]`, one value per point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Phi {
    values: Vec<ExtValue>,
}

impl Phi {
    pub fn new(values: Vec<ExtValue>) -> Phi {
        Phi { values }
    }

    pub fn from_ints(values: &[i64]) -> Phi {
        Phi { values: values.iter().map(|&v| ExtValue::from_int(v)).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, x: PointId) -> &ExtValue {
        &self.values[x.0]
    }

    pub fn values(&self) -> &[ExtValue] {
        &self.values
    }

    /// Points with finite value.
    pub fn dom(&self) -> PointSet {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .map(|(i, _)| PointId(i))
            .collect()
    }

    /// Proper means the domain is nonempty.
    pub fn is_proper(&self) -> bool {
        self.values.iter().any(|v| v.is_finite())
    }
}

/// Outcome of the increasing lower-semicontinuity check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LscReport {
    pub holds: bool,
    /// A pair `(x, y)` with `d(x, y) = 0` but `phi(x) > phi(y)`: the
    /// constant sequence at `y` converges to `x`, so semicontinuity would
    /// force `phi(x) <= phi(y)`.
    pub witness: Option<(PointId, PointId)>,
}

/// Checks that `phi(x) <= liminf phi(x_n)` along increasing convergent
/// sequences, via the finite characterization: `d(x, y) = 0` implies
/// `phi(x) <= phi(y)`. Constant sequences give necessity; on a finite space
/// any convergent sequence is eventually at zero distance from its limit,
/// giving sufficiency. The preorder plays no role because constant
/// sequences are increasing under any preorder.
pub fn is_increasingly_lsc(s: &QSpace, phi: &Phi) -> LscReport {
    assert_eq!(s.n(), phi.len(), "space and potential sizes differ");
    for x in s.points() {
        for y in s.zero_successors(x).iter() {
            if phi.get(x) > phi.get(y) {
                return LscReport { holds: false, witness: Some((x, y)) };
            }
        }
    }
    LscReport { holds: true, witness: None }
}

/// The three audits recorded on every instance.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Audits {
    /// Order compatibility: increasing convergent sequences sit below their
    /// limits.
    pub d_ord: bool,
    /// Increasing lower semicontinuity of the potential.
    pub inc_lsc: bool,
    /// The potential has nonempty domain.
    pub proper: bool,
}

impl Audits {
    pub fn all(&self) -> bool {
        self.d_ord && self.inc_lsc && self.proper
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum BuildError {
    #[error("preorder is on {order_n} points but the space has {space_n}")]
    OrderSizeMismatch { order_n: usize, space_n: usize },
    #[error("potential has {phi_n} values but the space has {space_n} points")]
    PhiSizeMismatch { phi_n: usize, space_n: usize },
}

/// A validated space + preorder + potential, with audits and the descent
/// table computed once at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    space: QSpace,
    order: Preorder,
    phi: Phi,
    audits: Audits,
    pub(crate) table: DescentTable,
}

impl Instance {
    pub fn new(space: QSpace, order: Preorder, phi: Phi) -> Result<Instance, BuildError> {
        if order.n() != space.n() {
            return Err(BuildError::OrderSizeMismatch {
                order_n: order.n(),
                space_n: space.n(),
            });
        }
        if phi.len() != space.n() {
            return Err(BuildError::PhiSizeMismatch {
                phi_n: phi.len(),
                space_n: space.n(),
            });
        }
        let audits = Audits {
            d_ord: check_d_ord(&space, &order).holds,
            inc_lsc: is_increasingly_lsc(&space, &phi).holds,
            proper: phi.is_proper(),
        };
        let table = DescentTable::build(&space, &order, &phi);
        Ok(Instance { space, order, phi, audits, table })
    }

    pub fn space(&self) -> &QSpace {
        &self.space
    }

    pub fn order(&self) -> &Preorder {
        &self.order
    }

    pub fn phi(&self) -> &Phi {
        &self.phi
    }

    pub fn audits(&self) -> Audits {
        self.audits
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn dom(&self) -> PointSet {
        self.phi.dom()
    }

    /// Least potential value over the whole space (equals the minimum over
    /// the domain when the potential is proper, `+inf` otherwise).
    pub fn min_phi(&self) -> ExtValue {
        self.phi
            .values()
            .iter()
            .min()
            .cloned()
            .unwrap_or(ExtValue::PlusInfinity)
    }

    /// Lowest-index global minimizer of the potential, if any value is
    /// finite.
    pub fn argmin_phi(&self) -> Option<PointId> {
        let min = self.min_phi();
        if !min.is_finite() {
            return None;
        }
        self.space.points().find(|&x| *self.phi.get(x) == min)
    }

    /// Solvers call this gate; instances with failing audits are inspectable
    /// but not solvable.
    pub fn require_audits(&self) -> Result<(), SolveError> {
        if self.audits.all() {
            Ok(())
        } else {
            Err(SolveError::AuditNotSatisfied {
                d_ord: self.audits.d_ord,
                inc_lsc: self.audits.inc_lsc,
                proper: self.audits.proper,
            })
        }
    }

    /// Sub-instance on the listed points (reindexed in the given order),
    /// with the metric optionally scaled by a positive factor. Restriction
    /// preserves validity and both audits: the pair conditions behind them
    /// are inherited, and scaling fixes zero sets.
    pub fn restrict_scaled(
        &self,
        points: &[PointId],
        gamma: Option<&crate::rat::Rat>,
    ) -> Result<Instance, BuildError> {
        let mut space = self.space.restrict(points);
        if let Some(g) = gamma {
            space = space.scale(g);
        }
        let order = self.order.restrict(points);
        let phi = Phi::new(points.iter().map(|&x| self.phi.get(x).clone()).collect());
        Instance::new(space, order, phi)
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::space::testutil::w3;

    /// W3 with the total preorder and phi = (3, 1, 0); the standard worked
    /// example across the solver tests.
    pub fn w3_total_310() -> Instance {
        Instance::new(w3(), Preorder::total(3), Phi::from_ints(&[3, 1, 0])).unwrap()
    }
}
