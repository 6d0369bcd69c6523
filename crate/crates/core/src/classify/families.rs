//! Solution families for the classified geometry pairs.

use std::fmt;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::geometry::GeometryName;
use crate::matrix::RatMatrix;
use crate::rational::{int, Rational};

use super::{pair_kind, ClassifyError, PairKind};

/// One exact condition on matrix entries (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Zero(usize, usize),
    Equals(usize, usize, Rational),
    ZeroColumn(usize),
    ColumnsProportional(usize, usize),
    RowsProportional(usize, usize),
}

impl Condition {
    pub fn holds(&self, a: &RatMatrix) -> bool {
        match self {
            Condition::Zero(i, j) => a.get(*i, *j).is_zero(),
            Condition::Equals(i, j, v) => a.get(*i, *j) == v,
            Condition::ZeroColumn(j) => (0..a.rows()).all(|i| a.get(i, *j).is_zero()),
            Condition::ColumnsProportional(p, q) => a.columns_proportional(*p, *q),
            Condition::RowsProportional(p, q) => a.rows_proportional(*p, *q),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Zero(i, j) => write!(f, "a{}{} = 0", i + 1, j + 1),
            Condition::Equals(i, j, v) => write!(f, "a{}{} = {v}", i + 1, j + 1),
            Condition::ZeroColumn(j) => write!(f, "A{} = 0", j + 1),
            Condition::ColumnsProportional(p, q) => write!(f, "A{} ∥ A{}", p + 1, q + 1),
            Condition::RowsProportional(p, q) => write!(f, "A^{} ∥ A^{}", p + 1, q + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    /// Listed entries free, listed entries fixed, everything else zero.
    Pattern {
        free: Vec<(usize, usize)>,
        fixed: Vec<(usize, usize, i64)>,
    },
    /// One column zero, the rest free.
    ZeroColumn(usize),
    /// All columns pairwise proportional.
    RankOneColumns,
    /// Two rows proportional, remaining rows free.
    ProportionalRows(usize, usize),
}

/// A named solution family and its membership predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyLabel {
    pub domain: GeometryName,
    pub target: GeometryName,
    pub id: &'static str,
    pub description: &'static str,
    shape: Shape,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySummary {
    pub id: String,
    pub description: String,
    pub conditions: Vec<String>,
}

impl FamilyLabel {
    /// (rows, cols) of the matrices this family talks about.
    pub fn matrix_shape(&self) -> (usize, usize) {
        (self.target.dim(), self.domain.dim())
    }

    pub fn conditions(&self) -> Vec<Condition> {
        let (rows, cols) = self.matrix_shape();
        match &self.shape {
            Shape::Pattern { free, fixed } => {
                let mut out = Vec::new();
                for i in 0..rows {
                    for j in 0..cols {
                        if let Some(&(_, _, v)) = fixed.iter().find(|f| (f.0, f.1) == (i, j)) {
                            out.push(Condition::Equals(i, j, int(v)));
                        } else if !free.contains(&(i, j)) {
                            out.push(Condition::Zero(i, j));
                        }
                    }
                }
                out
            }
            Shape::ZeroColumn(j) => vec![Condition::ZeroColumn(*j)],
            Shape::RankOneColumns => {
                let mut out = Vec::new();
                for p in 0..cols {
                    for q in p + 1..cols {
                        out.push(Condition::ColumnsProportional(p, q));
                    }
                }
                out
            }
            Shape::ProportionalRows(p, q) => vec![Condition::RowsProportional(*p, *q)],
        }
    }

    pub fn contains(&self, a: &RatMatrix) -> bool {
        a.shape() == self.matrix_shape() && self.conditions().iter().all(|c| c.holds(a))
    }

    pub fn summary(&self) -> FamilySummary {
        FamilySummary {
            id: self.id.to_string(),
            description: self.description.to_string(),
            conditions: self.conditions().iter().map(ToString::to_string).collect(),
        }
    }

    /// A random member with entries in `-3..=3`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RatMatrix {
        let (rows, cols) = self.matrix_shape();
        let mut a = RatMatrix::zeros(rows, cols);
        let small = |rng: &mut R| int(rng.gen_range(-3..=3));
        match &self.shape {
            Shape::Pattern { free, fixed } => {
                for &(i, j) in free {
                    a.set(i, j, small(rng));
                }
                for &(i, j, v) in fixed {
                    a.set(i, j, int(v));
                }
            }
            Shape::ZeroColumn(z) => {
                for i in 0..rows {
                    for j in (0..cols).filter(|j| j != z) {
                        a.set(i, j, small(rng));
                    }
                }
            }
            Shape::RankOneColumns => {
                // u·cᵀ with one factor in {-1,0,1} keeps entries in range
                let wide = rng.gen_bool(0.5);
                let u: Vec<i64> = (0..rows)
                    .map(|_| if wide { rng.gen_range(-3..=3) } else { rng.gen_range(-1..=1) })
                    .collect();
                let c: Vec<i64> = (0..cols)
                    .map(|_| if wide { rng.gen_range(-1..=1) } else { rng.gen_range(-3..=3) })
                    .collect();
                for (i, ui) in u.iter().enumerate() {
                    for (j, cj) in c.iter().enumerate() {
                        a.set(i, j, int(ui * cj));
                    }
                }
            }
            Shape::ProportionalRows(p, q) => {
                let wide = rng.gen_bool(0.5);
                let (s, t) = if wide {
                    (rng.gen_range(-1..=1), rng.gen_range(-1..=1))
                } else {
                    (rng.gen_range(-3..=3), rng.gen_range(-3..=3))
                };
                for j in 0..cols {
                    let v: i64 = if wide { rng.gen_range(-3..=3) } else { rng.gen_range(-1..=1) };
                    a.set(*p, j, int(s * v));
                    a.set(*q, j, int(t * v));
                }
                for i in (0..rows).filter(|i| i != p && i != q) {
                    for j in 0..cols {
                        a.set(i, j, small(rng));
                    }
                }
            }
        }
        debug_assert!(self.contains(&a), "{} sample outside family", self.id);
        a
    }
}

fn pattern(free: &[(usize, usize)], fixed: &[(usize, usize, i64)]) -> Shape {
    Shape::Pattern {
        free: free.to_vec(),
        fixed: fixed.to_vec(),
    }
}

/// All families for a classified pair, in a fixed order.
pub fn families(domain: GeometryName, target: GeometryName) -> Result<Vec<FamilyLabel>, ClassifyError> {
    let label = |id, description, shape| FamilyLabel {
        domain,
        target,
        id,
        description,
        shape,
    };
    Ok(match pair_kind(domain, target)? {
        PairKind::HeisenbergEuclidean(_) => vec![
            label("heis-euc-a3-zero", "third column zero", Shape::ZeroColumn(2)),
            label("heis-euc-proportional", "all columns pairwise proportional", Shape::RankOneColumns),
        ],
        PairKind::EuclideanHeisenberg(_) => vec![label(
            "euc-heis-rows-proportional",
            "first two rows proportional",
            Shape::ProportionalRows(0, 1),
        )],
        PairKind::NilSol => vec![
            label(
                "nil-sol-col1-zero-row3-zero",
                "rows one and two without first column",
                pattern(&[(0, 1), (0, 2), (1, 1), (1, 2)], &[]),
            ),
            label(
                "nil-sol-upper-left-block",
                "upper-left 2x2 block",
                pattern(&[(0, 0), (0, 1), (1, 0), (1, 1)], &[]),
            ),
            label("nil-sol-row3-a32-a33", "only a32 and a33", pattern(&[(2, 1), (2, 2)], &[])),
            label("nil-sol-row3-a31-a32", "only a31 and a32", pattern(&[(2, 0), (2, 1)], &[])),
        ],
        PairKind::SolNil => vec![
            label(
                "sol-nil-rows23-cols12",
                "rows two and three, first two columns",
                pattern(&[(1, 0), (1, 1), (2, 0), (2, 1)], &[]),
            ),
            label(
                "sol-nil-rows13-cols12",
                "rows one and three, first two columns",
                pattern(&[(0, 0), (0, 1), (2, 0), (2, 1)], &[]),
            ),
            label("sol-nil-col3-a23-a33", "only a23 and a33", pattern(&[(1, 2), (2, 2)], &[])),
            label("sol-nil-col3-a13-a33", "only a13 and a33", pattern(&[(0, 2), (2, 2)], &[])),
        ],
        PairKind::SolSol => vec![
            label(
                "sol-diag-a33-plus-one",
                "diag(a11, a22, 1)",
                pattern(&[(0, 0), (1, 1)], &[(2, 2, 1)]),
            ),
            label(
                "sol-antidiag-a33-minus-one",
                "a12, a21 with a33 = -1",
                pattern(&[(0, 1), (1, 0)], &[(2, 2, -1)]),
            ),
            label(
                "sol-upper-left-block",
                "upper-left 2x2 block",
                pattern(&[(0, 0), (0, 1), (1, 0), (1, 1)], &[]),
            ),
            label("sol-only-a33", "only a33", pattern(&[(2, 2)], &[])),
            label("sol-row3-a31-a32", "only a31 and a32", pattern(&[(2, 0), (2, 1)], &[])),
            label("sol-col3-a13-a23", "only a13 and a23", pattern(&[(0, 2), (1, 2)], &[])),
        ],
    })
}

/// Every family containing `a`, sorted by id.
pub fn classify(a: &RatMatrix, domain: GeometryName, target: GeometryName) -> Result<Vec<FamilyLabel>, ClassifyError> {
    let expected = (target.dim(), domain.dim());
    let all = families(domain, target)?;
    if a.shape() != expected {
        return Err(ClassifyError::Shape {
            expected,
            got: a.shape(),
        });
    }
    let mut hits: Vec<FamilyLabel> = all.into_iter().filter(|f| f.contains(a)).collect();
    hits.sort_by_key(|f| f.id);
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SOL: GeometryName = GeometryName::Sol;

    fn ids(v: &[FamilyLabel]) -> Vec<&str> {
        v.iter().map(|f| f.id).collect()
    }

    #[test]
    fn family_counts() {
        assert_eq!(families(SOL, SOL).unwrap().len(), 6);
        assert_eq!(families(GeometryName::Heisenberg, GeometryName::Euclidean(4)).unwrap().len(), 2);
        assert_eq!(families(GeometryName::Euclidean(2), GeometryName::Heisenberg).unwrap().len(), 1);
        assert_eq!(families(GeometryName::Nil, SOL).unwrap().len(), 4);
        assert_eq!(families(SOL, GeometryName::Nil).unwrap().len(), 4);
        assert!(matches!(
            families(GeometryName::Nil, GeometryName::Nil),
            Err(ClassifyError::UnclassifiedPair { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let d = RatMatrix::from_ints(&[[2, 0, 0], [0, 3, 0], [0, 0, 1]]);
        assert_eq!(ids(&classify(&d, SOL, SOL).unwrap()), ["sol-diag-a33-plus-one"]);
        let z = RatMatrix::zeros(3, 3);
        assert_eq!(classify(&z, SOL, SOL).unwrap().len(), 4);
        let r = RatMatrix::from_ints(&[[0, 0, 0], [0, 0, 0], [1, 2, 0]]);
        assert_eq!(ids(&classify(&r, GeometryName::Nil, SOL).unwrap()), ["nil-sol-row3-a31-a32"]);
        assert!(matches!(
            classify(&RatMatrix::zeros(2, 3), SOL, SOL),
            Err(ClassifyError::Shape { .. })
        ));
    }

    #[test]
    fn samples_stay_in_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (d, t) in [
            (GeometryName::Heisenberg, GeometryName::Euclidean(3)),
            (GeometryName::Euclidean(3), GeometryName::Heisenberg),
            (GeometryName::Nil, SOL),
            (SOL, GeometryName::Nil),
            (SOL, SOL),
        ] {
            for f in families(d, t).unwrap() {
                for _ in 0..50 {
                    let a = f.sample(&mut rng);
                    assert!(f.contains(&a), "{}", f.id);
                    assert!(a.entries().iter().all(|v| v.abs() <= int(3)));
                }
            }
        }
    }

    #[test]
    fn condition_rendering() {
        let f = &families(SOL, SOL).unwrap()[0];
        let text: Vec<String> = f.summary().conditions;
        assert!(text.contains(&"a33 = 1".to_string()));
        assert!(text.contains(&"a12 = 0".to_string()));
        let h = &families(GeometryName::Heisenberg, GeometryName::Euclidean(2)).unwrap()[1];
        assert_eq!(h.summary().conditions, ["A1 ∥ A2", "A1 ∥ A3", "A2 ∥ A3"]);
    }
}
