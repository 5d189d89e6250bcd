//! Preorders on point sets and their compatibility with the quasi-metric.
//!
//! A preorder is reflexive and transitive; antisymmetry is not required.
//! The link to the metric used throughout is the order-compatibility
//! condition: every increasing convergent sequence must sit below its limit.
//! On a finite space that reduces to a pair condition,
//! `d(x, y) = 0  implies  y <= x`, because the only convergent sequences
//! that matter are eventually at zero distance from their limit, and the
//! constant sequence at `y` converges to `x` exactly when `d(x, y) = 0`.

use std::fmt;

use crate::space::{PointId, PointSet, QSpace};

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum PreorderError {
    #[error("relation matrix is {rows} rows for {n} points")]
    SizeMismatch { rows: usize, n: usize },
    #[error("relation is not reflexive at point {x}")]
    NotReflexive { x: PointId },
    #[error("relation is not transitive: {x} <= {y} and {y} <= {z} but not {x} <= {z}")]
    NotTransitive { x: PointId, y: PointId, z: PointId },
}

/// A preorder `x <= y` on `n` points, stored as per-point successor masks.
#[derive(Clone, PartialEq, Eq)]
pub struct Preorder {
    n: usize,
    rows: Vec<PointSet>,
}

impl Preorder {
    /// Validates reflexivity and transitivity of an explicit relation matrix
    /// (`rel[x][y]` meaning `x <= y`). No repair is applied.
    pub fn from_matrix(rel: &[Vec<bool>]) -> Result<Preorder, PreorderError> {
        let n = rel.len();
        for (i, row) in rel.iter().enumerate() {
            if row.len() != n {
                return Err(PreorderError::SizeMismatch { rows: row.len(), n });
            }
            if !row[i] {
                return Err(PreorderError::NotReflexive { x: PointId(i) });
            }
        }
        for x in 0..n {
            for y in 0..n {
                if !rel[x][y] {
                    continue;
                }
                for z in 0..n {
                    if rel[y][z] && !rel[x][z] {
                        return Err(PreorderError::NotTransitive {
                            x: PointId(x),
                            y: PointId(y),
                            z: PointId(z),
                        });
                    }
                }
            }
        }
        let rows = rel
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(j, _)| PointId(j))
                    .collect()
            })
            .collect();
        Ok(Preorder { n, rows })
    }

    /// The total preorder: `x <= y` for every ordered pair.
    pub fn total(n: usize) -> Preorder {
        Preorder { n, rows: vec![PointSet::full(n); n] }
    }

    /// The discrete preorder: only `x <= x`.
    pub fn diagonal(n: usize) -> Preorder {
        Preorder {
            n,
            rows: (0..n).map(|i| PointSet::singleton(PointId(i))).collect(),
        }
    }

    /// Builds the smallest preorder containing the given pairs: adds the
    /// diagonal and closes transitively.
    pub fn from_pairs_closed(n: usize, pairs: &[(PointId, PointId)]) -> Preorder {
        let mut rows: Vec<PointSet> =
            (0..n).map(|i| PointSet::singleton(PointId(i))).collect();
        for &(x, y) in pairs {
            rows[x.0].insert(y);
        }
        let mut p = Preorder { n, rows };
        p.close_transitively();
        p
    }

    /// The specialization preorder of a space: `x <= y` iff `d(x, y) = 0`.
    /// Reflexive by QM1 and transitive by QM2.
    pub fn specialization(s: &QSpace) -> Preorder {
        Preorder {
            n: s.n(),
            rows: s.points().map(|x| s.zero_successors(x)).collect(),
        }
    }

    /// The conjugate orientation: `x <= y` iff `d(y, x) = 0`. This is the
    /// orientation that satisfies the order-compatibility pair condition by
    /// definition, so [`check_d_ord`] always passes on it.
    pub fn specialization_conjugate(s: &QSpace) -> Preorder {
        Preorder {
            n: s.n(),
            rows: s.points().map(|x| s.closure_of_point(x)).collect(),
        }
    }

    /// Warshall closure on the successor masks.
    fn close_transitively(&mut self) {
        for j in 0..self.n {
            let jt = PointId(j);
            let row_j = self.rows[j];
            for x in 0..self.n {
                if self.rows[x].contains(jt) {
                    self.rows[x] = self.rows[x].union(&row_j);
                }
            }
        }
    }

    /// Adds `y <= x` for every zero distance `d(x, y) = 0` and re-closes
    /// transitively. The result satisfies the order-compatibility pair
    /// condition; transitive closure only adds pairs, so the required ones
    /// survive it.
    pub fn close_under_zero_distance(&self, s: &QSpace) -> Preorder {
        assert_eq!(self.n, s.n(), "space and preorder sizes differ");
        let mut rows = self.rows.clone();
        for x in s.points() {
            for y in s.zero_successors(x).iter() {
                rows[y.0].insert(x);
            }
        }
        let mut p = Preorder { n: self.n, rows };
        p.close_transitively();
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leq(&self, x: PointId, y: PointId) -> bool {
        self.rows[x.0].contains(y)
    }

    /// All y with `x <= y`.
    pub fn upper_set(&self, x: PointId) -> PointSet {
        self.rows[x.0]
    }

    pub fn is_total(&self) -> bool {
        let full = PointSet::full(self.n);
        self.rows.iter().all(|r| *r == full)
    }

    /// Non-diagonal related pairs in row-major order; the canonical pair
    /// list the file layer serializes.
    pub fn nondiagonal_pairs(&self) -> Vec<(PointId, PointId)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in self.rows[x].iter() {
                if y.0 != x {
                    out.push((PointId(x), y));
                }
            }
        }
        out
    }

    /// Restriction to the listed points, reindexed in the given order.
    pub fn restrict(&self, points: &[PointId]) -> Preorder {
        let rows = points
            .iter()
            .map(|&x| {
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, &y)| self.leq(x, y))
                    .map(|(j, _)| PointId(j))
                    .collect()
            })
            .collect();
        Preorder { n: points.len(), rows }
    }
}

impl fmt::Debug for Preorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.nondiagonal_pairs()).finish()
    }
}

/// Outcome of the order-compatibility check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DOrdReport {
    pub holds: bool,
    /// A pair `(x, y)` with `d(x, y) = 0` but not `y <= x`. The constant
    /// sequence at `y` is increasing and converges to `x`, yet is not below
    /// `x`, which is the violated requirement.
    pub witness: Option<(PointId, PointId)>,
}

/// Checks the order-compatibility condition via its finite characterization:
/// for all x, y, `d(x, y) = 0` implies `y <= x`. Sufficiency on finite
/// spaces: an increasing sequence converging to `x` is eventually at zero
/// distance from `x`, so its tail sits below `x` by the pair condition and
/// the head follows by transitivity along the chain.
pub fn check_d_ord(s: &QSpace, p: &Preorder) -> DOrdReport {
    assert_eq!(s.n(), p.n(), "space and preorder sizes differ");
    for x in s.points() {
        for y in s.zero_successors(x).iter() {
            if !p.leq(y, x) {
                return DOrdReport { holds: false, witness: Some((x, y)) };
            }
        }
    }
    DOrdReport { holds: true, witness: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::testutil::w3;

    #[test]
    fn from_matrix_validates_reflexivity_and_transitivity() {
        let t = vec![vec![true, true], vec![false, true]];
        assert!(Preorder::from_matrix(&t).is_ok());

        let not_refl = vec![vec![true, false], vec![false, false]];
        assert_eq!(
            Preorder::from_matrix(&not_refl),
            Err(PreorderError::NotReflexive { x: PointId(1) })
        );

        let not_trans = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        assert_eq!(
            Preorder::from_matrix(&not_trans),
            Err(PreorderError::NotTransitive {
                x: PointId(0),
                y: PointId(1),
                z: PointId(2)
            })
        );
    }

    #[test]
    fn from_pairs_closes_transitively() {
        let p = Preorder::from_pairs_closed(
            3,
            &[(PointId(0), PointId(1)), (PointId(1), PointId(2))],
        );
        assert!(p.leq(PointId(0), PointId(2)));
        assert!(p.leq(PointId(2), PointId(2)));
        assert!(!p.leq(PointId(2), PointId(0)));
        assert_eq!(p.nondiagonal_pairs().len(), 3);
    }

    #[test]
    fn total_and_diagonal() {
        assert!(Preorder::total(4).is_total());
        let d = Preorder::diagonal(3);
        assert!(!d.is_total());
        assert!(d.nondiagonal_pairs().is_empty());
    }

    #[test]
    fn w3_specialization_orders() {
        let s = w3();
        // d(b, a) = 0 is the only off-diagonal zero.
        let spec = Preorder::specialization(&s);
        assert!(spec.leq(PointId(1), PointId(0)));
        assert_eq!(spec.nondiagonal_pairs(), vec![(PointId(1), PointId(0))]);

        // The conjugate orientation flips it and satisfies compatibility.
        let conj = Preorder::specialization_conjugate(&s);
        assert_eq!(conj.nondiagonal_pairs(), vec![(PointId(0), PointId(1))]);
        assert!(check_d_ord(&s, &conj).holds);
        // The straight orientation does not: d(b, a) = 0 needs a <= b.
        let report = check_d_ord(&s, &spec);
        assert!(!report.holds);
        assert_eq!(report.witness, Some((PointId(1), PointId(0))));
    }

    #[test]
    fn d_ord_fails_on_diagonal_preorder_over_w3() {
        let s = w3();
        let report = check_d_ord(&s, &Preorder::diagonal(3));
        assert!(!report.holds);
        // d(b, a) = 0 requires a <= b, which the diagonal order lacks.
        assert_eq!(report.witness, Some((PointId(1), PointId(0))));
        assert!(check_d_ord(&s, &Preorder::total(3)).holds);
    }

    #[test]
    fn zero_distance_closure_repairs_d_ord() {
        let s = w3();
        let repaired = Preorder::diagonal(3).close_under_zero_distance(&s);
        assert!(check_d_ord(&s, &repaired).holds);
        assert_eq!(repaired.nondiagonal_pairs(), vec![(PointId(0), PointId(1))]);
        // Closing an already-compatible preorder is a no-op.
        let t = Preorder::total(3);
        assert_eq!(t.close_under_zero_distance(&s), t);
    }

    #[test]
    fn restrict_reindexes() {
        let p = Preorder::from_pairs_closed(3, &[(PointId(0), PointId(2))]);
        let r = p.restrict(&[PointId(0), PointId(2)]);
        assert!(r.leq(PointId(0), PointId(1)));
        assert!(!r.leq(PointId(1), PointId(0)));
    }
}
