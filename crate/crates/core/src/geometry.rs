//! Model geometries: exact metric and inverse-metric entries.
//!
//! The built-in inverses are written out by hand and then re-derived by
//! cofactor expansion when the catalog entry is built; a disagreement is a
//! hard error.

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::expkernel::{parse, ExpPoly, ParseError, Vars};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("unknown geometry {0:?} (expected euclidean:<n>, heisenberg, nil or sol)")]
    UnknownName(String),
    #[error("euclidean dimension must be at least 1")]
    ZeroDimension,
    #[error("metric entry ({i},{j}) differs from ({j},{i})")]
    Asymmetric { i: usize, j: usize },
    #[error("metric needs a {dim}x{dim} matrix of entries")]
    Shape { dim: usize },
    #[error("cofactor inversion supports dimension at most 4, got {0}")]
    DimensionTooLarge(usize),
    #[error("inverse metric leaves the exp-polynomial class (determinant {determinant})")]
    NonInvertibleInClass { determinant: String },
    #[error("g·g⁻¹ differs from the identity at ({i},{j}) for metric {name}")]
    InverseMismatch { name: String, i: usize, j: usize },
    #[error("entry {entry}: {source}")]
    Entry { entry: String, source: ParseError },
    #[error("metric file: {0}")]
    File(String),
}

/// Names accepted wherever a geometry is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeometryName {
    Euclidean(usize),
    Heisenberg,
    Nil,
    Sol,
}

impl fmt::Display for GeometryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryName::Euclidean(n) => write!(f, "euclidean:{n}"),
            GeometryName::Heisenberg => f.write_str("heisenberg"),
            GeometryName::Nil => f.write_str("nil"),
            GeometryName::Sol => f.write_str("sol"),
        }
    }
}

impl FromStr for GeometryName {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, GeometryError> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "heisenberg" => Ok(GeometryName::Heisenberg),
            "nil" => Ok(GeometryName::Nil),
            "sol" => Ok(GeometryName::Sol),
            _ => {
                let n = t
                    .strip_prefix("euclidean:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| GeometryError::UnknownName(s.to_string()))?;
                if n == 0 {
                    return Err(GeometryError::ZeroDimension);
                }
                Ok(GeometryName::Euclidean(n))
            }
        }
    }
}

impl GeometryName {
    pub fn dim(&self) -> usize {
        match self {
            GeometryName::Euclidean(n) => *n,
            _ => 3,
        }
    }
}

/// A named Riemannian metric on a coordinate patch of ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    name: String,
    kind: Option<GeometryName>,
    coords: Vars,
    g: Vec<Vec<ExpPoly>>,
    ginv: Vec<Vec<ExpPoly>>,
}

impl MetricSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The catalog entry this metric came from, if any.
    pub fn kind(&self) -> Option<GeometryName> {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &Vars {
        &self.coords
    }

    /// Lower-index entry `g_ij`.
    pub fn g(&self, i: usize, j: usize) -> &ExpPoly {
        &self.g[i][j]
    }

    /// Upper-index entry `g^ij`.
    pub fn ginv(&self, i: usize, j: usize) -> &ExpPoly {
        &self.ginv[i][j]
    }

    pub fn metric(&self) -> &[Vec<ExpPoly>] {
        &self.g
    }

    pub fn inverse(&self) -> &[Vec<ExpPoly>] {
        &self.ginv
    }

    /// Coordinates some metric entry depends on.
    pub fn active_coords(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| {
                self.g
                    .iter()
                    .chain(&self.ginv)
                    .flatten()
                    .any(|e| e.depends_on(k))
            })
            .collect()
    }

    /// Checks symmetry and `g · g⁻¹ = I` exactly.
    pub fn verify(&self) -> Result<(), GeometryError> {
        check_symmetric(&self.g)?;
        check_symmetric(&self.ginv)?;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let mut acc = ExpPoly::zero(&self.coords);
                for k in 0..n {
                    acc = &acc + &(&self.g[i][k] * &self.ginv[k][j]);
                }
                let ok = if i == j { acc.is_one() } else { acc.is_zero() };
                if !ok {
                    return Err(GeometryError::InverseMismatch {
                        name: self.name.clone(),
                        i,
                        j,
                    });
                }
            }
        }
        Ok(())
    }
}

fn check_symmetric(m: &[Vec<ExpPoly>]) -> Result<(), GeometryError> {
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate().take(i) {
            if *e != m[j][i] {
                return Err(GeometryError::Asymmetric { i, j });
            }
        }
    }
    Ok(())
}

/// Catalog lookup.
pub fn builtin(name: GeometryName) -> Result<MetricSpec, GeometryError> {
    let spec = match name {
        GeometryName::Euclidean(0) => return Err(GeometryError::ZeroDimension),
        GeometryName::Euclidean(n) => {
            let names: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
            let coords: Vars = names.into();
            let id: Vec<Vec<ExpPoly>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                ExpPoly::one(&coords)
                            } else {
                                ExpPoly::zero(&coords)
                            }
                        })
                        .collect()
                })
                .collect();
            MetricSpec {
                name: name.to_string(),
                kind: Some(name),
                coords,
                g: id.clone(),
                ginv: id,
            }
        }
        GeometryName::Heisenberg => from_text(
            name,
            [
                ["1 + 1/4*y^2", "-1/4*x*y", "1/2*y"],
                ["-1/4*x*y", "1 + 1/4*x^2", "-1/2*x"],
                ["1/2*y", "-1/2*x", "1"],
            ],
            [
                ["1", "0", "-1/2*y"],
                ["0", "1", "1/2*x"],
                ["-1/2*y", "1/2*x", "1 + 1/4*x^2 + 1/4*y^2"],
            ],
        ),
        GeometryName::Nil => from_text(
            name,
            [["1", "0", "0"], ["0", "1 + x^2", "-x"], ["0", "-x", "1"]],
            [["1", "0", "0"], ["0", "1", "x"], ["0", "x", "1 + x^2"]],
        ),
        GeometryName::Sol => from_text(
            name,
            [["exp(2*z)", "0", "0"], ["0", "exp(-2*z)", "0"], ["0", "0", "1"]],
            [["exp(-2*z)", "0", "0"], ["0", "exp(2*z)", "0"], ["0", "0", "1"]],
        ),
    };
    spec.verify()?;
    if spec.dim() <= 4 {
        let derived = cofactor_inverse(&spec.g)?;
        for (i, row) in derived.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if *e != spec.ginv[i][j] {
                    return Err(GeometryError::InverseMismatch {
                        name: spec.name.clone(),
                        i,
                        j,
                    });
                }
            }
        }
    }
    Ok(spec)
}

fn from_text(name: GeometryName, g: [[&str; 3]; 3], ginv: [[&str; 3]; 3]) -> MetricSpec {
    let coords = crate::expkernel::vars(&["x", "y", "z"]);
    let table = |m: [[&str; 3]; 3]| -> Vec<Vec<ExpPoly>> {
        m.iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse(s, &coords).expect("catalog entry parses"))
                    .collect()
            })
            .collect()
    };
    MetricSpec {
        name: name.to_string(),
        kind: Some(name),
        g: table(g),
        ginv: table(ginv),
        coords,
    }
}

/// Builds a metric from a full symmetric matrix of entries, deriving the
/// inverse by cofactor expansion.
pub fn register(name: &str, coords: Vars, g: Vec<Vec<ExpPoly>>) -> Result<MetricSpec, GeometryError> {
    let n = coords.len();
    if g.len() != n || g.iter().any(|r| r.len() != n) {
        return Err(GeometryError::Shape { dim: n });
    }
    check_symmetric(&g)?;
    let ginv = cofactor_inverse(&g)?;
    let spec = MetricSpec {
        name: name.to_string(),
        kind: None,
        coords,
        g,
        ginv,
    };
    spec.verify()?;
    Ok(spec)
}

/// Same as [`register`] from lower-triangle rows (`lower[i]` holds `g_i0..g_ii`).
pub fn register_lower(name: &str, coords: Vars, lower: Vec<Vec<ExpPoly>>) -> Result<MetricSpec, GeometryError> {
    let n = coords.len();
    if lower.len() != n || lower.iter().enumerate().any(|(i, r)| r.len() != i + 1) {
        return Err(GeometryError::Shape { dim: n });
    }
    let full = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if j <= i { lower[i][j].clone() } else { lower[j][i].clone() })
                .collect()
        })
        .collect();
    register(name, coords, full)
}

#[derive(Deserialize)]
struct MetricFile {
    name: String,
    coords: Vec<String>,
    lower: Vec<Vec<String>>,
}

/// Reads a metric description:
///
/// ```toml
/// name = "sol-copy"
/// coords = ["x", "y", "z"]
/// lower = [["exp(2*z)"], ["0", "exp(-2*z)"], ["0", "0", "1"]]
/// ```
pub fn parse_metric_file(text: &str) -> Result<MetricSpec, GeometryError> {
    let file: MetricFile = toml::from_str(text).map_err(|e| GeometryError::File(e.to_string()))?;
    let coords: Vars = file.coords.into();
    let lower = file
        .lower
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| {
                    parse(s, &coords).map_err(|source| GeometryError::Entry {
                        entry: format!("g{}{}", i + 1, j + 1),
                        source,
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    register_lower(&file.name, coords, lower)
}

fn determinant(m: &[Vec<ExpPoly>], vars: &Vars) -> ExpPoly {
    match m.len() {
        0 => ExpPoly::one(vars),
        1 => m[0][0].clone(),
        n => {
            let mut acc = ExpPoly::zero(vars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor = minor(m, 0, j);
                let term = &m[0][j] * &determinant(&minor, vars);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn minor(m: &[Vec<ExpPoly>], row: usize, col: usize) -> Vec<Vec<ExpPoly>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// Adjugate divided by the determinant. The determinant must be a single
/// term (`c·x^m·exp(λ·x)`) that divides every cofactor.
pub fn cofactor_inverse(g: &[Vec<ExpPoly>]) -> Result<Vec<Vec<ExpPoly>>, GeometryError> {
    let n = g.len();
    if n > 4 {
        return Err(GeometryError::DimensionTooLarge(n));
    }
    let vars = g[0][0].vars().clone();
    let det = determinant(g, &vars);
    let non_invertible = || GeometryError::NonInvertibleInClass {
        determinant: det.render(),
    };
    if det.term_count() != 1 {
        return Err(non_invertible());
    }
    let mut inv = vec![vec![ExpPoly::zero(&vars); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            // (g⁻¹)_ij = (-1)^{i+j} M_ji / det
            let cof = determinant(&minor(g, j, i), &vars);
            let cof = if (i + j) % 2 == 0 { cof } else { -cof };
            *slot = cof.div_by_term(&det).ok_or_else(non_invertible)?;
        }
    }
    Ok(inv)
}

/// `Σ_ij a_i b_j m_ij` for expression vectors.
pub fn bilinear(m: &[Vec<ExpPoly>], a: &[ExpPoly], b: &[ExpPoly]) -> ExpPoly {
    let vars = m[0][0].vars().clone();
    let mut acc = ExpPoly::zero(&vars);
    for (i, row) in m.iter().enumerate() {
        if a[i].is_zero() {
            continue;
        }
        for (j, e) in row.iter().enumerate() {
            if e.is_zero() || b[j].is_zero() {
                continue;
            }
            acc = &acc + &(&(&a[i] * e) * &b[j]);
        }
    }
    acc
}

/// Numeric inverse of a small dense matrix by Gauss–Jordan with partial pivoting.
pub fn invert_f64(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[p][c] == 0.0 {
            return None;
        }
        a.swap(p, c);
        let pivot = a[c][c];
        for v in a[c].iter_mut() {
            *v /= pivot;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                if f != 0.0 {
                    let pivot_row = a[c].clone();
                    for (v, pv) in a[i].iter_mut().zip(pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Evaluated metric entries at a point.
pub fn evaluate_matrix(m: &[Vec<ExpPoly>], point: &[f64]) -> Vec<Vec<f64>> {
    m.iter()
        .map(|r| r.iter().map(|e| e.evaluate(point).expect("point length checked by caller")).collect())
        .collect()
}

/// Constant diagonal metric, handy for tests and custom geometries.
pub fn constant_diagonal(name: &str, coords: Vars, diag: &[Rational]) -> Result<MetricSpec, GeometryError> {
    let n = coords.len();
    let g = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        ExpPoly::constant(&coords, diag[i].clone())
                    } else {
                        ExpPoly::zero(&coords)
                    }
                })
                .collect()
        })
        .collect();
    register(name, coords, g)
}
