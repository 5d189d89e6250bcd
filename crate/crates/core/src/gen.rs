//! Seeded generation of random instances that are valid by construction.
//!
//! Every instance this module emits satisfies the quasi-metric axioms and
//! passes all three audits, so corpus sweeps exercise the solvers rather
//! than the validators. The guarantees are structural, not retry loops:
//!
//! * Distances come from nonnegative edge weights closed under shortest
//!   paths, which gives the triangle inequality and a zero diagonal for
//!   free. Zero weights are only ever drawn on edges from a higher index
//!   to a lower one, so a zero-weight cycle through two distinct points
//!   cannot exist and the separation axiom holds.
//! * The preorder is either total, the conjugate specialization order, or
//!   a drawn pair set closed reflexively, transitively, and under the
//!   zero-distance arrows that order compatibility requires.
//! * The potential is repaired to `phi(x) = min { raw(y) : d(x, y) = 0 }`.
//!   Whenever `d(x, y) = 0` the triangle inequality nests the zero
//!   successors of `y` inside those of `x`, so the repaired potential
//!   satisfies `phi(x) <= phi(y)` and increasing lower semicontinuity
//!   holds. Properness comes from redrawing the rare all-infinite sample.
//!
//! Generation is deterministic in the parameters. Each component draws
//! from its own stream derived from the seed, so the space, order, and
//! potential stay reproducible independently of one another.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SolveError;
use crate::instance::{Instance, Phi};
use crate::io::{self, InstanceFile, PreorderSpec};
use crate::preorder::Preorder;
use crate::rat::{ExtValue, Rat};
use crate::space::{min_plus_closure, PointId, QSpace, MAX_POINTS};

/// Which preorder to put on the generated space.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PreorderKind {
    /// Every pair related.
    Total,
    /// Ordered pairs drawn uniformly, then closed.
    Pairs,
    /// Forward edges of a random acyclic digraph, then closed.
    Reachability,
    /// `x <= y` exactly when `d(y, x) = 0`.
    SpecializationConjugate,
}

/// Parameters for one generated instance. Equal parameters always produce
/// equal instances.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenParams {
    pub n: usize,
    pub seed: u64,
    /// Chance, per eligible edge, that a drawn weight collapses to zero.
    /// Must lie in `[0, 1]`.
    pub zero_edge_prob: Rat,
    /// Chance, per point, that the raw potential draw is `+inf`. Must lie
    /// in `[0, 1)` so a proper sample exists.
    pub inf_phi_prob: Rat,
    pub preorder_kind: PreorderKind,
}

impl GenParams {
    /// Defaults: a quarter of the eligible edges collapse to zero distance,
    /// an eighth of the raw potential draws are infinite, total order.
    pub fn new(n: usize, seed: u64) -> GenParams {
        GenParams {
            n,
            seed,
            zero_edge_prob: Rat::new(1, 4),
            inf_phi_prob: Rat::new(1, 8),
            preorder_kind: PreorderKind::Total,
        }
    }
}

// Distinct per-component streams: changing how one component consumes its
// stream leaves the others untouched.
const STAGE_SPACE: u64 = 1;
const STAGE_ORDER: u64 = 2;
const STAGE_PHI: u64 = 3;

fn stage_rng(seed: u64, stage: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(stage.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// A probability as exact integer parts. `k < numer` for a uniform draw
/// `k` in `0..denom` succeeds with probability exactly `numer/denom`.
#[derive(Clone, Copy)]
struct Prob {
    numer: u64,
    denom: u64,
}

impl Prob {
    fn draw(&self, rng: &mut ChaCha8Rng) -> bool {
        rng.random_range(0..self.denom) < self.numer
    }
}

fn prob_parts(p: &Rat, name: &'static str, open_top: bool) -> Result<Prob, SolveError> {
    let in_range = !p.is_negative()
        && if open_top { p < &Rat::one() } else { p <= &Rat::one() };
    let top = if open_top { "[0, 1)" } else { "[0, 1]" };
    if !in_range {
        return Err(SolveError::InvalidParameter {
            name,
            reason: format!("probability {p} is outside {top}"),
        });
    }
    match p.to_u64_parts() {
        Some((numer, denom)) => Ok(Prob { numer, denom }),
        None => Err(SolveError::InvalidParameter {
            name,
            reason: format!("probability {p} has parts too large for exact drawing"),
        }),
    }
}

fn small_positive(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.random_range(1..=8), rng.random_range(1..=4))
}

fn gen_space(n: usize, seed: u64, zero_edge: Prob) -> QSpace {
    let mut rng = stage_rng(seed, STAGE_SPACE);
    let mut w: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // Zero weights only below the diagonal: any zero-length path
            // strictly decreases the index, so no two distinct points can
            // be at zero distance in both directions.
            let weight = if i > j && zero_edge.draw(&mut rng) {
                Rat::zero()
            } else {
                small_positive(&mut rng)
            };
            w[i][j] = Some(weight);
        }
    }
    let d: Vec<Vec<Rat>> = min_plus_closure(w)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|cell| cell.expect("every ordered pair has a direct edge"))
                .collect()
        })
        .collect();
    QSpace::validate(d).expect("nonnegative shortest-path closures satisfy every axiom")
}

fn gen_preorder(space: &QSpace, seed: u64, kind: PreorderKind) -> Preorder {
    let n = space.n();
    let mut rng = stage_rng(seed, STAGE_ORDER);
    let pair_prob = Prob { numer: 1, denom: 3 };
    let base = match kind {
        PreorderKind::Total => return Preorder::total(n),
        PreorderKind::SpecializationConjugate => {
            return Preorder::specialization_conjugate(space)
        }
        PreorderKind::Pairs => {
            let mut pairs = Vec::new();
            for x in 0..n {
                for y in 0..n {
                    if x != y && pair_prob.draw(&mut rng) {
                        pairs.push((PointId(x), PointId(y)));
                    }
                }
            }
            Preorder::from_pairs_closed(n, &pairs)
        }
        PreorderKind::Reachability => {
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if pair_prob.draw(&mut rng) {
                        pairs.push((PointId(i), PointId(j)));
                    }
                }
            }
            Preorder::from_pairs_closed(n, &pairs)
        }
    };
    base.close_under_zero_distance(space)
}

/// `phi(x) = min { raw(y) : d(x, y) = 0 }`. The zero successors of any
/// zero successor of `x` are zero successors of `x` (triangle through a
/// zero edge), so the repaired potential never increases along a zero
/// distance and increasing lower semicontinuity holds. Points without a
/// proper zero successor keep their raw value.
fn repair_phi(space: &QSpace, raw: &[ExtValue]) -> Vec<ExtValue> {
    space
        .points()
        .map(|x| {
            space
                .zero_successors(x)
                .iter()
                .map(|y| raw[y.0].clone())
                .min()
                .expect("zero successors always include the point itself")
        })
        .collect()
}

fn gen_phi(space: &QSpace, seed: u64, inf_phi: Prob) -> Phi {
    let n = space.n();
    let mut rng = stage_rng(seed, STAGE_PHI);
    let raw: Vec<ExtValue> = loop {
        let draw: Vec<ExtValue> = (0..n)
            .map(|_| {
                if inf_phi.draw(&mut rng) {
                    ExtValue::PlusInfinity
                } else {
                    ExtValue::Finite(Rat::new(rng.random_range(0..=16), rng.random_range(1..=4)))
                }
            })
            .collect();
        if draw.iter().any(|v| v.is_finite()) {
            break draw;
        }
    };
    Phi::new(repair_phi(space, &raw))
}

/// Generates one instance. The result is always a valid quasi-metric space
/// with a compatible preorder and a proper, increasingly lower
/// semicontinuous potential.
pub fn gen_instance(params: &GenParams) -> Result<Instance, SolveError> {
    if params.n == 0 || params.n > MAX_POINTS {
        return Err(SolveError::InvalidParameter {
            name: "n",
            reason: format!("point count must be in 1..={MAX_POINTS}, got {}", params.n),
        });
    }
    let zero_edge = prob_parts(&params.zero_edge_prob, "zero_edge_prob", false)?;
    let inf_phi = prob_parts(&params.inf_phi_prob, "inf_phi_prob", true)?;

    let space = gen_space(params.n, params.seed, zero_edge);
    let order = gen_preorder(&space, params.seed, params.preorder_kind);
    let phi = gen_phi(&space, params.seed, inf_phi);
    let inst = Instance::new(space, order, phi)
        .expect("generated components share one point count");
    if !inst.audits().all() {
        return Err(SolveError::ConsistencyViolation {
            what: format!(
                "generated instance failed an audit it was built to satisfy: {:?}",
                inst.audits()
            ),
        });
    }
    Ok(inst)
}

/// Generates the same instance as [`gen_instance`] in file form, with
/// labels `p1..pn`. Compiling the file reproduces the instance exactly;
/// drawn preorders are emitted as their full closed pair list so nothing
/// depends on re-closing in the same way.
pub fn gen_instance_file(params: &GenParams) -> Result<InstanceFile, SolveError> {
    let inst = gen_instance(params)?;
    let labels: Vec<String> = (1..=params.n).map(|i| format!("p{i}")).collect();
    let preorder = match params.preorder_kind {
        PreorderKind::Total => PreorderSpec::Total,
        PreorderKind::SpecializationConjugate => PreorderSpec::SpecializationConjugate,
        PreorderKind::Pairs | PreorderKind::Reachability => PreorderSpec::Pairs(
            inst.order()
                .nondiagonal_pairs()
                .into_iter()
                .map(|(x, y)| (labels[x.0].clone(), labels[y.0].clone()))
                .collect(),
        ),
    };
    Ok(io::describe(&labels, &inst, preorder))
}
