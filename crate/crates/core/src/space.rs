//! Finite quasi-metric spaces with exact rational distances.
//!
//! A quasi-metric keeps the triangle inequality but drops symmetry, so
//! `d(x, y)` and `d(y, x)` may differ and the induced topology is only T0 in
//! general. The three axioms checked here, in validation order:
//!
//! - QM1: `d(x, y) >= 0` and `d(x, x) = 0`;
//! - QM2: `d(x, z) <= d(x, y) + d(y, z)` for all triples;
//! - QM3: `d(x, y) = 0` and `d(y, x) = 0` imply `x = y`.
//!
//! Convergence of a sequence `(x_n)` to `x` means `d(x, x_n) -> 0`, so the
//! closure of the singleton `{x}` is the set of `y` with `d(y, x) = 0`.

use std::fmt;

use crate::rat::Rat;

/// Index of a point within a space. Labels, when present, live in the file
/// layer; the core works with bare indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Hard cap on the number of points, from the bitset representation of
/// point subsets. Generated corpora use n <= 8; the chain witness stays
/// well under the cap.
pub const MAX_POINTS: usize = 64;

/// Subset of points of a space, as a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PointSet(u64);

impl PointSet {
    pub fn empty() -> PointSet {
        PointSet(0)
    }

    pub fn full(n: usize) -> PointSet {
        debug_assert!(n <= MAX_POINTS);
        if n == 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: PointId) -> PointSet {
        PointSet(1u64 << x.0)
    }

    pub fn insert(&mut self, x: PointId) {
        self.0 |= 1u64 << x.0;
    }

    pub fn remove(&mut self, x: PointId) {
        self.0 &= !(1u64 << x.0);
    }

    pub fn contains(&self, x: PointId) -> bool {
        self.0 >> x.0 & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersect(&self, other: &PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    /// Elements of `self` not in `other`.
    pub fn minus(&self, other: &PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = PointId> + '_ {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1).map(PointId)
    }

    /// Smallest member, if any; selection rules use this as the index
    /// tie-break.
    pub fn first(&self) -> Option<PointId> {
        if self.0 == 0 {
            None
        } else {
            Some(PointId(self.0.trailing_zeros() as usize))
        }
    }
}

impl FromIterator<PointId> for PointSet {
    fn from_iter<T: IntoIterator<Item = PointId>>(iter: T) -> PointSet {
        let mut s = PointSet::empty();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|p| p.0)).finish()
    }
}

/// The three quasi-metric axioms, in the order the validator checks them.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axiom {
    QM1,
    QM2,
    QM3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::QM1 => write!(f, "QM1"),
            Axiom::QM2 => write!(f, "QM2"),
            Axiom::QM3 => write!(f, "QM3"),
        }
    }
}

/// Concrete evidence for an axiom violation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AxiomWitness {
    /// QM1: `d(x, x) != 0`.
    NonzeroDiagonal { x: PointId },
    /// QM2: `d(x, z) > d(x, y) + d(y, z)`.
    TriangleBreak { x: PointId, y: PointId, z: PointId },
    /// QM3: `d(x, y) = d(y, x) = 0` with `x != y`.
    MutualZero { x: PointId, y: PointId },
}

impl fmt::Display for AxiomWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomWitness::NonzeroDiagonal { x } => write!(f, "d({x},{x}) != 0"),
            AxiomWitness::TriangleBreak { x, y, z } => {
                write!(f, "d({x},{z}) > d({x},{y}) + d({y},{z})")
            }
            AxiomWitness::MutualZero { x, y } => {
                write!(f, "d({x},{y}) = d({y},{x}) = 0 with {x} != {y}")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum ValidationError {
    #[error("distance matrix is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NonSquare { row: usize, len: usize, n: usize },
    #[error("matrix has {n} points, limit is {max}", max = MAX_POINTS)]
    TooLarge { n: usize },
    #[error("negative entry d({from},{to})")]
    NegativeEntry { from: PointId, to: PointId },
    #[error("axiom {axiom} violated: {witness}")]
    AxiomViolation { axiom: Axiom, witness: AxiomWitness },
}

impl ValidationError {
    /// The axiom a rejection falls under, when one does. Negative entries
    /// count against QM1, which also demands non-negativity.
    pub fn violated_axiom(&self) -> Option<Axiom> {
        match self {
            ValidationError::NegativeEntry { .. } => Some(Axiom::QM1),
            ValidationError::AxiomViolation { axiom, .. } => Some(*axiom),
            _ => None,
        }
    }
}

/// A validated finite quasi-metric space. Values of this type exist only
/// after the axioms have been checked (or established by construction, as
/// with conjugation, symmetrization, scaling, and restriction).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSpace {
    n: usize,
    d: Vec<Vec<Rat>>,
    /// `zero_out[x]` = points y with d(x, y) = 0 (row zeros).
    zero_out: Vec<PointSet>,
    /// `zero_in[x]` = points y with d(y, x) = 0 (column zeros); this is the
    /// closure of the singleton `{x}`.
    zero_in: Vec<PointSet>,
}

impl QSpace {
    /// Checks QM1, QM2, QM3 in that order and returns the space on success.
    /// The failure reports the first violation in deterministic scan order.
    pub fn validate(d: Vec<Vec<Rat>>) -> Result<QSpace, ValidationError> {
        let n = d.len();
        if n == 0 {
            return Err(ValidationError::Empty);
        }
        if n > MAX_POINTS {
            return Err(ValidationError::TooLarge { n });
        }
        for (i, row) in d.iter().enumerate() {
            if row.len() != n {
                return Err(ValidationError::NonSquare { row: i, len: row.len(), n });
            }
        }
        // QM1: non-negativity and zero diagonal, row-major scan.
        for i in 0..n {
            for j in 0..n {
                if d[i][j].is_negative() {
                    return Err(ValidationError::NegativeEntry {
                        from: PointId(i),
                        to: PointId(j),
                    });
                }
                if i == j && !d[i][j].is_zero() {
                    return Err(ValidationError::AxiomViolation {
                        axiom: Axiom::QM1,
                        witness: AxiomWitness::NonzeroDiagonal { x: PointId(i) },
                    });
                }
            }
        }
        // QM2: all ordered triples.
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if d[x][z] > &d[x][y] + &d[y][z] {
                        return Err(ValidationError::AxiomViolation {
                            axiom: Axiom::QM2,
                            witness: AxiomWitness::TriangleBreak {
                                x: PointId(x),
                                y: PointId(y),
                                z: PointId(z),
                            },
                        });
                    }
                }
            }
        }
        // QM3: no mutually-zero distinct pair.
        for x in 0..n {
            for y in x + 1..n {
                if d[x][y].is_zero() && d[y][x].is_zero() {
                    return Err(ValidationError::AxiomViolation {
                        axiom: Axiom::QM3,
                        witness: AxiomWitness::MutualZero { x: PointId(x), y: PointId(y) },
                    });
                }
            }
        }
        Ok(QSpace::from_parts(d))
    }

    /// Builds the derived zero masks; callers guarantee the axioms hold.
    fn from_parts(d: Vec<Vec<Rat>>) -> QSpace {
        let n = d.len();
        let mut zero_out = vec![PointSet::empty(); n];
        let mut zero_in = vec![PointSet::empty(); n];
        for i in 0..n {
            for j in 0..n {
                if d[i][j].is_zero() {
                    zero_out[i].insert(PointId(j));
                    zero_in[j].insert(PointId(i));
                }
            }
        }
        QSpace { n, d, zero_out, zero_in }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> {
        (0..self.n).map(PointId)
    }

    pub fn dist(&self, x: PointId, y: PointId) -> &Rat {
        &self.d[x.0][y.0]
    }

    pub fn matrix(&self) -> &Vec<Vec<Rat>> {
        &self.d
    }

    /// The conjugate space with `d'(x, y) = d(y, x)`. Involutive, and valid
    /// whenever the original is: QM2 transposes to itself.
    pub fn conjugate(&self) -> QSpace {
        let d = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.d[j][i].clone()).collect())
            .collect();
        QSpace::from_parts(d)
    }

    /// The symmetrization `max(d(x, y), d(y, x))`, which is a genuine metric
    /// on a valid space: QM3 makes distinct points positively separated.
    pub fn symmetrize(&self) -> QSpace {
        let d = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| std::cmp::max(&self.d[i][j], &self.d[j][i]).clone())
                    .collect()
            })
            .collect();
        QSpace::from_parts(d)
    }

    /// Pointwise scaling by a positive factor; axioms are preserved because
    /// scaling fixes zero sets and the triangle inequality is homogeneous.
    pub fn scale(&self, gamma: &Rat) -> QSpace {
        assert!(gamma.is_positive(), "scale factor must be positive");
        let d = self
            .d
            .iter()
            .map(|row| row.iter().map(|v| gamma * v).collect())
            .collect();
        QSpace::from_parts(d)
    }

    /// The sub-space on the given points, in the given order. Axioms survive
    /// restriction since the constraint set only shrinks.
    pub fn restrict(&self, points: &[PointId]) -> QSpace {
        let d = points
            .iter()
            .map(|&x| points.iter().map(|&y| self.d[x.0][y.0].clone()).collect())
            .collect();
        QSpace::from_parts(d)
    }

    /// Closure of the singleton `{x}`: all y with `d(y, x) = 0`.
    pub fn closure_of_point(&self, x: PointId) -> PointSet {
        self.zero_in[x.0]
    }

    /// Points y with `d(x, y) = 0` (the row zero set).
    pub fn zero_successors(&self, x: PointId) -> PointSet {
        self.zero_out[x.0]
    }

    /// T1 holds exactly when every off-diagonal distance is positive,
    /// i.e. every singleton closure is a singleton.
    pub fn is_t1(&self) -> bool {
        self.points().all(|x| self.zero_in[x.0] == PointSet::singleton(x))
    }

    /// First off-diagonal zero pair `(x, y)` with `d(x, y) = 0`, if any;
    /// evidence that the space is not T1.
    pub fn t1_counterexample(&self) -> Option<(PointId, PointId)> {
        for x in self.points() {
            for y in self.points() {
                if x != y && self.d[x.0][y.0].is_zero() {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.d[i][j] != self.d[j][i] {
                    return false;
                }
            }
        }
        true
    }

    /// Distinct positive distance values, ascending. Useful as an exhaustive
    /// threshold list: behavior between consecutive values is constant.
    pub fn positive_distance_values(&self) -> Vec<Rat> {
        let mut vals: Vec<Rat> = self
            .d
            .iter()
            .flatten()
            .filter(|v| v.is_positive())
            .cloned()
            .collect();
        vals.sort();
        vals.dedup();
        vals
    }
}

/// All-pairs shortest paths in min-plus arithmetic over an optional weight
/// matrix, `None` meaning no path known. The diagonal is pinned to zero
/// first; with non-negative weights it stays there. The result satisfies
/// the triangle inequality wherever it is total, which is how generated
/// and graph-described spaces obtain it by construction.
pub(crate) fn min_plus_closure(mut w: Vec<Vec<Option<Rat>>>) -> Vec<Vec<Option<Rat>>> {
    let n = w.len();
    for (i, row) in w.iter_mut().enumerate() {
        row[i] = Some(Rat::zero());
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = match (&w[i][k], &w[k][j]) {
                    (Some(a), Some(b)) => a + b,
                    _ => continue,
                };
                if w[i][j].as_ref().is_none_or(|c| &via < c) {
                    w[i][j] = Some(via);
                }
            }
        }
    }
    w
}


#[cfg(test)]
mod tests {
    use super::testutil::{ids, w3};
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Rat::from_int(v)).collect())
            .collect()
    }

    #[test]
    fn w3_is_valid_and_exhaustive_triangle_oracle_agrees() {
        let s = w3();
        // Independent oracle: check all 27 triples directly on the matrix.
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    let lhs = s.dist(PointId(x), PointId(z));
                    let rhs = &(s.dist(PointId(x), PointId(y)) + s.dist(PointId(y), PointId(z)));
                    assert!(lhs <= rhs, "triangle fails at ({x},{y},{z})");
                }
            }
        }
    }

    #[test]
    fn singleton_space_is_valid_and_t1() {
        let s = QSpace::validate(m(&[&[0]])).unwrap();
        assert_eq!(s.n(), 1);
        assert!(s.is_t1());
        assert_eq!(s.closure_of_point(PointId(0)), PointSet::singleton(PointId(0)));
    }

    #[test]
    fn empty_and_nonsquare_are_rejected() {
        assert_eq!(QSpace::validate(vec![]), Err(ValidationError::Empty));
        let bad = vec![vec![Rat::zero(), Rat::one()], vec![Rat::zero()]];
        assert!(matches!(
            QSpace::validate(bad),
            Err(ValidationError::NonSquare { row: 1, len: 1, n: 2 })
        ));
    }

    #[test]
    fn negative_entry_counts_against_qm1() {
        let bad = vec![
            vec![Rat::zero(), Rat::from_int(-1)],
            vec![Rat::one(), Rat::zero()],
        ];
        let err = QSpace::validate(bad).unwrap_err();
        assert_eq!(
            err,
            ValidationError::NegativeEntry { from: PointId(0), to: PointId(1) }
        );
        assert_eq!(err.violated_axiom(), Some(Axiom::QM1));
    }

    #[test]
    fn each_axiom_produces_its_own_witness() {
        // QM1: nonzero diagonal.
        let err = QSpace::validate(m(&[&[0, 1], &[1, 1]])).unwrap_err();
        assert_eq!(err.violated_axiom(), Some(Axiom::QM1));
        assert!(matches!(
            err,
            ValidationError::AxiomViolation {
                witness: AxiomWitness::NonzeroDiagonal { x: PointId(1) },
                ..
            }
        ));

        // QM2: d(0,2)=5 > d(0,1)+d(1,2)=2.
        let err = QSpace::validate(m(&[&[0, 1, 5], &[1, 0, 1], &[1, 1, 0]])).unwrap_err();
        assert_eq!(err.violated_axiom(), Some(Axiom::QM2));
        assert!(matches!(
            err,
            ValidationError::AxiomViolation {
                witness: AxiomWitness::TriangleBreak { x: PointId(0), y: PointId(1), z: PointId(2) },
                ..
            }
        ));

        // QM3: mutual zero between distinct points.
        let err = QSpace::validate(m(&[&[0, 0], &[0, 0]])).unwrap_err();
        assert_eq!(err.violated_axiom(), Some(Axiom::QM3));
        assert!(matches!(
            err,
            ValidationError::AxiomViolation {
                witness: AxiomWitness::MutualZero { x: PointId(0), y: PointId(1) },
                ..
            }
        ));
    }

    #[test]
    fn w3_closures_and_t1() {
        let s = w3();
        assert_eq!(s.closure_of_point(PointId(0)), ids(&[0, 1])); // d(b,a)=0
        assert_eq!(s.closure_of_point(PointId(1)), ids(&[1]));
        assert_eq!(s.closure_of_point(PointId(2)), ids(&[2]));
        assert!(!s.is_t1());
        assert_eq!(s.t1_counterexample(), Some((PointId(1), PointId(0))));
        assert!(s.symmetrize().is_t1());
    }

    #[test]
    fn conjugate_is_involutive_and_valid() {
        let s = w3();
        let c = s.conjugate();
        assert_eq!(c.dist(PointId(0), PointId(1)), s.dist(PointId(1), PointId(0)));
        assert_eq!(c.conjugate(), s);
        // Conjugation preserves validity; re-validate as a sanity check.
        assert!(QSpace::validate(c.matrix().clone()).is_ok());
    }

    #[test]
    fn symmetrize_is_pointwise_max_and_order_insensitive() {
        let s = w3();
        let sym = s.symmetrize();
        assert_eq!(sym.dist(PointId(0), PointId(1)), &Rat::from_int(1));
        assert_eq!(sym.dist(PointId(1), PointId(0)), &Rat::from_int(1));
        assert_eq!(sym.dist(PointId(0), PointId(2)), &Rat::from_int(2));
        assert!(sym.is_symmetric());
        assert_eq!(s.conjugate().symmetrize(), sym);
        assert!(QSpace::validate(sym.matrix().clone()).is_ok());
    }

    #[test]
    fn scale_preserves_validity_and_zero_pattern() {
        let s = w3();
        let t = s.scale(&Rat::new(3, 2));
        assert_eq!(t.dist(PointId(0), PointId(2)), &Rat::from_int(3));
        assert!(t.dist(PointId(1), PointId(0)).is_zero());
        assert!(QSpace::validate(t.matrix().clone()).is_ok());
    }

    #[test]
    fn restrict_keeps_selected_rows_and_columns() {
        let s = w3();
        let r = s.restrict(&[PointId(0), PointId(2)]);
        assert_eq!(r.n(), 2);
        assert_eq!(r.dist(PointId(0), PointId(1)), &Rat::from_int(2)); // old (a,c)
        assert_eq!(r.dist(PointId(1), PointId(0)), &Rat::from_int(1)); // old (c,a)
        assert!(QSpace::validate(r.matrix().clone()).is_ok());
    }

    #[test]
    fn positive_distance_values_are_sorted_and_distinct() {
        let s = w3();
        assert_eq!(
            s.positive_distance_values(),
            vec![Rat::from_int(1), Rat::from_int(2)]
        );
    }

    #[test]
    fn point_set_basics() {
        let mut s = PointSet::empty();
        assert!(s.is_empty());
        s.insert(PointId(3));
        s.insert(PointId(0));
        assert_eq!(s.len(), 2);
        assert!(s.contains(PointId(3)));
        assert_eq!(s.first(), Some(PointId(0)));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![PointId(0), PointId(3)]);
        assert!(s.is_subset_of(&PointSet::full(4)));
        assert!(!PointSet::full(4).is_subset_of(&s));
        s.remove(PointId(0));
        assert_eq!(s, PointSet::singleton(PointId(3)));
        assert_eq!(PointSet::full(64).len(), 64);
    }
}
