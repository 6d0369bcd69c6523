//! Classification of linear ∞-harmonic maps for the five treated geometry
//! pairs: family predicates, coefficient systems, and grid enumeration that
//! checks the predicates against the exact residual.

mod families;
mod system;

use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{builtin, GeometryError, GeometryName, MetricSpec};
use crate::matrix::{MatrixError, RatMatrix};
use crate::rational::Rational;
use crate::tension::{PolyMap, TensionError};

pub use families::{classify, families, Condition, FamilyLabel, FamilySummary};
pub use system::{coefficient_system, entry_name, extract_system, CoefficientSystem, Equation};

/// Largest grid the enumerators accept.
pub const MAX_GRID: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("pair {domain} -> {target} is not classified")]
    UnclassifiedPair { domain: String, target: String },
    #[error("grid has {size} matrices, limit is {MAX_GRID}")]
    GridTooLarge { size: String },
    #[error("grid needs at least one value")]
    EmptyGrid,
    #[error("matrix is {got:?}, expected {expected:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Tension(#[from] TensionError),
    #[error(transparent)]
    Geometry(GeometryError),
    #[error("thread pool: {0}")]
    Threads(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// Heisenberg → ℝⁿ
    HeisenbergEuclidean(usize),
    /// ℝᵐ → Heisenberg
    EuclideanHeisenberg(usize),
    NilSol,
    SolNil,
    SolSol,
}

pub fn pair_kind(domain: GeometryName, target: GeometryName) -> Result<PairKind, ClassifyError> {
    use GeometryName::*;
    match (domain, target) {
        (Heisenberg, Euclidean(n)) if n > 0 => Ok(PairKind::HeisenbergEuclidean(n)),
        (Euclidean(m), Heisenberg) if m > 0 => Ok(PairKind::EuclideanHeisenberg(m)),
        (Nil, Sol) => Ok(PairKind::NilSol),
        (Sol, Nil) => Ok(PairKind::SolNil),
        (Sol, Sol) => Ok(PairKind::SolSol),
        _ => Err(ClassifyError::UnclassifiedPair {
            domain: domain.to_string(),
            target: target.to_string(),
        }),
    }
}

/// Every `rows × cols` matrix with entries from a finite value set.
#[derive(Debug, Clone)]
pub struct Grid {
    values: Vec<Rational>,
    rows: usize,
    cols: usize,
    size: u64,
}

impl Grid {
    /// Values are deduplicated and sorted.
    pub fn new(values: &[Rational], rows: usize, cols: usize) -> Result<Self, ClassifyError> {
        let mut values = values.to_vec();
        values.sort();
        values.dedup();
        if values.is_empty() {
            return Err(ClassifyError::EmptyGrid);
        }
        let cells = u32::try_from(rows * cols).unwrap_or(u32::MAX);
        let size = (values.len() as u64).checked_pow(cells).filter(|&s| s <= MAX_GRID);
        let size = size.ok_or_else(|| ClassifyError::GridTooLarge {
            size: format!("{}^{}", values.len(), rows * cols),
        })?;
        Ok(Grid {
            values,
            rows,
            cols,
            size,
        })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Matrix number `index`; entry (0,0) varies slowest.
    pub fn matrix(&self, mut index: u64) -> RatMatrix {
        let k = self.values.len() as u64;
        let cells = self.rows * self.cols;
        let mut entries = vec![Rational::zero(); cells];
        for slot in entries.iter_mut().rev() {
            *slot = self.values[(index % k) as usize].clone();
            index /= k;
        }
        RatMatrix::from_rows(entries.chunks(self.cols).map(<[_]>::to_vec).collect()).expect("non-empty grid shape")
    }
}

fn with_threads<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, ClassifyError> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ClassifyError::Threads(e.to_string()))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

struct Setup {
    domain: Arc<MetricSpec>,
    target: Arc<MetricSpec>,
    families: Vec<FamilyLabel>,
    grid: Grid,
}

fn setup(domain: GeometryName, target: GeometryName, values: &[Rational]) -> Result<Setup, ClassifyError> {
    let families = families(domain, target)?;
    let d = Arc::new(builtin(domain).map_err(ClassifyError::Geometry)?);
    let t = Arc::new(builtin(target).map_err(ClassifyError::Geometry)?);
    let grid = Grid::new(values, t.dim(), d.dim())?;
    Ok(Setup {
        domain: d,
        target: t,
        families,
        grid,
    })
}

/// Exact verdict for one grid matrix.
struct Verdict {
    matrix: RatMatrix,
    harmonic: bool,
    constant_energy: bool,
    families: Vec<&'static str>,
}

fn scan(s: &Setup, threads: Option<usize>) -> Result<Vec<Verdict>, ClassifyError> {
    with_threads(threads, || {
        (0..s.grid.size())
            .into_par_iter()
            .map(|k| {
                let matrix = s.grid.matrix(k);
                let report = PolyMap::linear(s.domain.clone(), s.target.clone(), &matrix)?.tau_infinity()?;
                let mut families: Vec<&'static str> =
                    s.families.iter().filter(|f| f.contains(&matrix)).map(|f| f.id).collect();
                families.sort_unstable();
                Ok(Verdict {
                    matrix,
                    harmonic: report.harmonic,
                    constant_energy: report.constant_energy,
                    families,
                })
            })
            .collect::<Result<Vec<_>, ClassifyError>>()
    })?
}

/// Rational entries as strings (`"p"` or `"p/q"`).
pub fn matrix_strings(a: &RatMatrix) -> Vec<Vec<String>> {
    a.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MismatchKind {
    HarmonicUnclassified,
    ClassifiedNotHarmonic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub kind: MismatchKind,
    pub matrix: Vec<Vec<String>>,
    pub families: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub domain: String,
    pub target: String,
    pub shape: (usize, usize),
    pub grid_values: Vec<String>,
    pub grid_size: u64,
    pub harmonic_count: u64,
    pub classified_count: u64,
    pub mismatch_count: u64,
    pub mismatches: Vec<Mismatch>,
}

impl EquivalenceReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "pair: {} -> {}", self.domain, self.target);
        let _ = writeln!(out, "shape: {}x{}", self.shape.0, self.shape.1);
        let _ = writeln!(out, "grid values: {}", self.grid_values.join(", "));
        let _ = writeln!(out, "grid size: {}", self.grid_size);
        let _ = writeln!(out, "harmonic: {}", self.harmonic_count);
        let _ = writeln!(out, "classified: {}", self.classified_count);
        let _ = writeln!(out, "mismatches: {}", self.mismatch_count);
        for m in &self.mismatches {
            let kind = match m.kind {
                MismatchKind::HarmonicUnclassified => "harmonic but unclassified",
                MismatchKind::ClassifiedNotHarmonic => "classified but not harmonic",
            };
            let rows: Vec<String> = m.matrix.iter().map(|r| format!("[{}]", r.join(", "))).collect();
            let _ = writeln!(out, "  [{}] {kind} {}", rows.join(", "), m.families.join(" "));
        }
        out
    }
}

/// Compares the exact residual with family membership on every grid matrix.
pub fn enumerate_equivalence(
    domain: GeometryName,
    target: GeometryName,
    values: &[Rational],
    threads: Option<usize>,
) -> Result<EquivalenceReport, ClassifyError> {
    let s = setup(domain, target, values)?;
    let verdicts = scan(&s, threads)?;
    let mut harmonic_count = 0;
    let mut classified_count = 0;
    let mut mismatches = Vec::new();
    for v in &verdicts {
        let classified = !v.families.is_empty();
        harmonic_count += u64::from(v.harmonic);
        classified_count += u64::from(classified);
        let kind = match (v.harmonic, classified) {
            (true, false) => Some(MismatchKind::HarmonicUnclassified),
            (false, true) => Some(MismatchKind::ClassifiedNotHarmonic),
            _ => None,
        };
        if let Some(kind) = kind {
            mismatches.push(Mismatch {
                kind,
                matrix: matrix_strings(&v.matrix),
                families: v.families.iter().map(ToString::to_string).collect(),
            });
        }
    }
    Ok(EquivalenceReport {
        domain: domain.to_string(),
        target: target.to_string(),
        shape: (s.grid.rows, s.grid.cols),
        grid_values: s.grid.values().iter().map(ToString::to_string).collect(),
        grid_size: s.grid.size(),
        harmonic_count,
        classified_count,
        mismatch_count: mismatches.len() as u64,
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankAudit {
    pub domain: String,
    pub target: String,
    pub grid_size: u64,
    pub harmonic_count: u64,
    pub max_rank: usize,
    pub witness: Option<Vec<Vec<String>>>,
}

/// Maximum rank among harmonic grid matrices.
pub fn rank_audit(
    domain: GeometryName,
    target: GeometryName,
    values: &[Rational],
    threads: Option<usize>,
) -> Result<RankAudit, ClassifyError> {
    let s = setup(domain, target, values)?;
    let verdicts = scan(&s, threads)?;
    let mut best: Option<(usize, &RatMatrix)> = None;
    let mut harmonic_count = 0;
    for v in verdicts.iter().filter(|v| v.harmonic) {
        harmonic_count += 1;
        let r = v.matrix.rank();
        if best.is_none_or(|(b, _)| r > b) {
            best = Some((r, &v.matrix));
        }
    }
    Ok(RankAudit {
        domain: domain.to_string(),
        target: target.to_string(),
        grid_size: s.grid.size(),
        harmonic_count,
        max_rank: best.map_or(0, |(r, _)| r),
        witness: best.map(|(_, m)| matrix_strings(m)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankBucket {
    pub rank: usize,
    pub harmonic: u64,
    pub constant_energy: u64,
    pub isometries: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergyAudit {
    pub domain: String,
    pub target: String,
    pub grid_size: u64,
    pub by_rank: Vec<RankBucket>,
    /// Harmonic rank-2 matrices whose energy density is constant.
    pub rank2_constant_energy: Vec<Vec<Vec<String>>>,
    /// Harmonic full-rank matrices with constant energy that are not isometries.
    pub full_rank_constant_non_isometric: Vec<Vec<Vec<String>>>,
}

impl EnergyAudit {
    pub fn every_rank2_nonconstant(&self) -> bool {
        self.rank2_constant_energy.is_empty()
    }

    pub fn full_rank_constant_non_isometric_exists(&self) -> bool {
        !self.full_rank_constant_non_isometric.is_empty()
    }
}

/// Rank, energy constancy and isometry flags for every harmonic grid matrix.
pub fn energy_constancy_audit(
    domain: GeometryName,
    target: GeometryName,
    values: &[Rational],
    threads: Option<usize>,
) -> Result<EnergyAudit, ClassifyError> {
    let s = setup(domain, target, values)?;
    let verdicts = scan(&s, threads)?;
    let full = s.domain.dim().min(s.target.dim());
    let mut by_rank: Vec<RankBucket> = (0..=full)
        .map(|rank| RankBucket {
            rank,
            harmonic: 0,
            constant_energy: 0,
            isometries: 0,
        })
        .collect();
    let mut rank2 = Vec::new();
    let mut full_rank = Vec::new();
    for v in verdicts.iter().filter(|v| v.harmonic) {
        let r = v.matrix.rank();
        let bucket = &mut by_rank[r];
        bucket.harmonic += 1;
        if !v.constant_energy {
            continue;
        }
        bucket.constant_energy += 1;
        let isometry = s.domain.dim() == s.target.dim()
            && PolyMap::linear(s.domain.clone(), s.target.clone(), &v.matrix)?.is_isometry()?;
        if isometry {
            bucket.isometries += 1;
        }
        if r == 2 {
            rank2.push(matrix_strings(&v.matrix));
        }
        if r == full && !isometry {
            full_rank.push(matrix_strings(&v.matrix));
        }
    }
    Ok(EnergyAudit {
        domain: domain.to_string(),
        target: target.to_string(),
        grid_size: s.grid.size(),
        by_rank,
        rank2_constant_energy: rank2,
        full_rank_constant_non_isometric: full_rank,
    })
}

fn check_square3(a: &RatMatrix) -> Result<(), ClassifyError> {
    if a.shape() != (3, 3) {
        return Err(ClassifyError::Shape {
            expected: (3, 3),
            got: a.shape(),
        });
    }
    Ok(())
}

/// Matrix of `φ_a ∘ φ_b`.
pub fn compose(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix, ClassifyError> {
    check_square3(a)?;
    check_square3(b)?;
    Ok(a.mul(b)?)
}

pub fn inverse(a: &RatMatrix) -> Result<RatMatrix, ClassifyError> {
    check_square3(a)?;
    Ok(a.inverse()?)
}

/// `diag(λ, μ, 1)` with `λμ ≠ 0`.
pub fn subgroup_member(a: &RatMatrix) -> bool {
    if a.shape() != (3, 3) {
        return false;
    }
    for i in 0..3 {
        for j in 0..3 {
            if i != j && !a.get(i, j).is_zero() {
                return false;
            }
        }
    }
    !a.get(0, 0).is_zero() && !a.get(1, 1).is_zero() && a.get(2, 2).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn grid3() -> Vec<Rational> {
        vec![int(-1), int(0), int(1)]
    }

    #[test]
    fn grid_indexing() {
        let g = Grid::new(&[int(1), int(0), int(1)], 2, 2).unwrap();
        assert_eq!(g.size(), 16);
        assert_eq!(g.matrix(0), RatMatrix::zeros(2, 2));
        assert_eq!(g.matrix(1), RatMatrix::from_ints(&[[0, 0], [0, 1]]));
        assert_eq!(g.matrix(8), RatMatrix::from_ints(&[[1, 0], [0, 0]]));
        assert!(matches!(Grid::new(&[], 1, 1), Err(ClassifyError::EmptyGrid)));
        let five: Vec<Rational> = (-2..=2).map(int).collect();
        assert!(matches!(Grid::new(&five, 3, 3), Err(ClassifyError::GridTooLarge { .. })));
    }

    #[test]
    fn single_point_grid() {
        let r = enumerate_equivalence(GeometryName::Sol, GeometryName::Sol, &[int(0)], Some(1)).unwrap();
        assert_eq!((r.grid_size, r.harmonic_count, r.classified_count), (1, 1, 1));
        assert!(r.is_clean());
    }

    #[test]
    fn heisenberg_plane_grid_is_clean() {
        let r = enumerate_equivalence(GeometryName::Heisenberg, GeometryName::Euclidean(2), &grid3(), None).unwrap();
        assert_eq!(r.grid_size, 729);
        assert!(r.is_clean(), "{}", r.render_text());
        let audit = rank_audit(GeometryName::Heisenberg, GeometryName::Euclidean(2), &grid3(), None).unwrap();
        assert_eq!(audit.max_rank, 2);
    }

    #[test]
    fn subgroup_operations() {
        let a = RatMatrix::diag(&[int(2), int(3), int(1)]);
        let b = RatMatrix::diag(&[int(5), int(7), int(1)]);
        let ab = compose(&a, &b).unwrap();
        assert_eq!(ab, RatMatrix::diag(&[int(10), int(21), int(1)]));
        assert!(subgroup_member(&ab));
        assert_eq!(inverse(&a).unwrap(), RatMatrix::diag(&[frac(1, 2), frac(1, 3), int(1)]));
        assert!(!subgroup_member(&RatMatrix::diag(&[int(1), int(1), int(-1)])));
        assert!(!subgroup_member(&RatMatrix::diag(&[int(0), int(1), int(1)])));
        assert!(matches!(inverse(&RatMatrix::zeros(3, 3)), Err(ClassifyError::Matrix(_))));
        assert!(matches!(compose(&RatMatrix::zeros(2, 3), &a), Err(ClassifyError::Shape { .. })));
    }
}
