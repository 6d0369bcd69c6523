//! Energy density, pullback metric and the ∞-tension residual
//! `τ_i = dφⁱ(grad |dφ|²)` for polynomial maps between metric spaces.

use std::sync::Arc;

use thiserror::Error;

use crate::expkernel::{ExpPoly, KernelError};
use crate::geometry::{evaluate_matrix, MetricSpec};
use crate::matrix::RatMatrix;
use crate::rational::to_f64;

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensionError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("matrix is {got:?}, map needs {expected:?} (target dim × domain dim)")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("map needs {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("component {0} is not a polynomial in the domain coordinates")]
    NotPolynomial(usize),
    #[error("expression is not over the coordinates of {0}")]
    CoordinateMismatch(String),
    #[error("cannot compose: target {inner} differs from domain {outer}")]
    Composition { inner: String, outer: String },
    #[error("isometry check needs equal dimensions, got {domain} and {target}")]
    DimensionMismatch { domain: usize, target: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("finite-difference step must be positive")]
    Step,
}

/// A polynomial map between two metric spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap {
    domain: Arc<MetricSpec>,
    target: Arc<MetricSpec>,
    components: Vec<ExpPoly>,
    matrix: Option<RatMatrix>,
}

impl PolyMap {
    /// `x ↦ A x` with `A` of shape (target dim, domain dim).
    pub fn linear(domain: Arc<MetricSpec>, target: Arc<MetricSpec>, a: &RatMatrix) -> Result<Self, TensionError> {
        let expected = (target.dim(), domain.dim());
        if a.shape() != expected {
            return Err(TensionError::Shape {
                expected,
                got: a.shape(),
            });
        }
        let components = (0..a.rows())
            .map(|i| ExpPoly::linear(domain.coords(), a.row(i)))
            .collect();
        Ok(PolyMap {
            domain,
            target,
            components,
            matrix: Some(a.clone()),
        })
    }

    /// Arbitrary polynomial components over the domain coordinates.
    pub fn polynomial(
        domain: Arc<MetricSpec>,
        target: Arc<MetricSpec>,
        components: Vec<ExpPoly>,
    ) -> Result<Self, TensionError> {
        if components.len() != target.dim() {
            return Err(TensionError::ComponentCount {
                expected: target.dim(),
                got: components.len(),
            });
        }
        for (i, c) in components.iter().enumerate() {
            if c.vars()[..] != domain.coords()[..] {
                return Err(TensionError::CoordinateMismatch(domain.name().to_string()));
            }
            if !c.is_polynomial() {
                return Err(TensionError::NotPolynomial(i));
            }
        }
        let matrix = components
            .iter()
            .map(ExpPoly::as_linear_form)
            .collect::<Option<Vec<_>>>()
            .map(|rows| RatMatrix::from_rows(rows).expect("rectangular by construction"));
        Ok(PolyMap {
            domain,
            target,
            components,
            matrix,
        })
    }

    pub fn identity(space: Arc<MetricSpec>) -> Self {
        let n = space.dim();
        Self::linear(space.clone(), space, &RatMatrix::identity(n)).expect("square identity")
    }

    pub fn domain(&self) -> &Arc<MetricSpec> {
        &self.domain
    }

    pub fn target(&self) -> &Arc<MetricSpec> {
        &self.target
    }

    pub fn components(&self) -> &[ExpPoly] {
        &self.components
    }

    pub fn is_linear(&self) -> bool {
        self.matrix.is_some()
    }

    pub fn matrix(&self) -> Option<&RatMatrix> {
        self.matrix.as_ref()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap, TensionError> {
        if inner.target != self.domain {
            return Err(TensionError::Composition {
                inner: inner.target.name().to_string(),
                outer: self.domain.name().to_string(),
            });
        }
        let components = self
            .components
            .iter()
            .map(|c| c.substitute(&inner.components))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::polynomial(inner.domain.clone(), self.target.clone(), components)
    }

    /// `J[i][α] = ∂φⁱ/∂x_α`.
    pub fn jacobian(&self) -> Vec<Vec<ExpPoly>> {
        self.components
            .iter()
            .map(|c| {
                (0..self.domain.dim())
                    .map(|a| c.derive(a).expect("index within domain"))
                    .collect()
            })
            .collect()
    }

    fn pulled_target_metric(&self) -> Result<Vec<Vec<ExpPoly>>, TensionError> {
        let t = &self.target;
        (0..t.dim())
            .map(|i| {
                (0..t.dim())
                    .map(|j| Ok(t.g(i, j).substitute(&self.components)?))
                    .collect()
            })
            .collect()
    }

    /// `(φ*h)_{αβ} = Σ_ij J^i_α J^j_β (h_ij∘φ)`.
    pub fn pullback_metric(&self) -> Result<Vec<Vec<ExpPoly>>, TensionError> {
        Ok(pullback_core(&self.jacobian(), &self.pulled_target_metric()?))
    }

    /// `|dφ|² = g^{αβ} (φ*h)_{αβ}`.
    pub fn energy_density(&self) -> Result<ExpPoly, TensionError> {
        Ok(trace_core(self.domain.inverse(), &self.pullback_metric()?))
    }

    /// Exact residual report using `τ_i = Σ_β ∂_βφⁱ (grad E)_β`.
    pub fn tau_infinity(&self) -> Result<TensionReport, TensionError> {
        let jac = self.jacobian();
        let energy = trace_core(
            self.domain.inverse(),
            &pullback_core(&jac, &self.pulled_target_metric()?),
        );
        let (partials, gradient_energy, tau) = tau_core(&jac, self.domain.inverse(), &energy, |f, k| {
            f.derive(k).expect("index within domain")
        });
        Ok(TensionReport::new(energy, &partials, gradient_energy, tau))
    }

    /// `τ_i = g(grad φⁱ, grad E)`; must agree with [`PolyMap::tau_infinity`].
    pub fn tau_via_metric_pairing(&self) -> Result<Vec<ExpPoly>, TensionError> {
        let energy = self.energy_density()?;
        let grad_e = gradient(&energy, &self.domain)?;
        self.components
            .iter()
            .map(|c| {
                let grad_c = gradient(c, &self.domain)?;
                Ok(crate::geometry::bilinear(self.domain.metric(), &grad_c, &grad_e))
            })
            .collect()
    }

    /// Pullback equals the domain metric entrywise.
    pub fn is_isometry(&self) -> Result<bool, TensionError> {
        if self.domain.dim() != self.target.dim() {
            return Err(TensionError::DimensionMismatch {
                domain: self.domain.dim(),
                target: self.target.dim(),
            });
        }
        Ok(self.pullback_metric()?.as_slice() == self.domain.metric())
    }

    /// `|dφ|²` at a point from evaluated metric entries.
    pub fn numeric_energy(&self, point: &[f64]) -> Result<f64, TensionError> {
        let d = self.domain.dim();
        if point.len() != d {
            return Err(TensionError::PointLength {
                expected: d,
                got: point.len(),
            });
        }
        let jac = self.numeric_jacobian(point);
        let image: Vec<f64> = self
            .components
            .iter()
            .map(|c| c.evaluate(point))
            .collect::<Result<_, _>>()?;
        let h = evaluate_matrix(self.target.metric(), &image);
        let ginv = evaluate_matrix(self.domain.inverse(), point);
        let n = self.target.dim();
        let mut total = 0.0;
        for a in 0..d {
            for b in 0..d {
                if ginv[a][b] == 0.0 {
                    continue;
                }
                let mut p = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        p += jac[i][a] * jac[j][b] * h[i][j];
                    }
                }
                total += ginv[a][b] * p;
            }
        }
        Ok(total)
    }

    fn numeric_jacobian(&self, point: &[f64]) -> Vec<Vec<f64>> {
        self.jacobian()
            .iter()
            .map(|row| row.iter().map(|e| e.evaluate(point).expect("length checked")).collect())
            .collect()
    }

    /// Finite-difference oracle: `|dφ|²` is differentiated by central
    /// differences with step `h`, then contracted with evaluated `g^{αβ}`
    /// and `dφ`. Works for maps the symbolic path rejects.
    pub fn numeric_residual(&self, point: &[f64], h: f64) -> Result<Vec<f64>, TensionError> {
        if h.is_nan() || h <= 0.0 {
            return Err(TensionError::Step);
        }
        let d = self.domain.dim();
        if point.len() != d {
            return Err(TensionError::PointLength {
                expected: d,
                got: point.len(),
            });
        }
        let mut de = vec![0.0; d];
        let mut shifted = point.to_vec();
        for (k, slot) in de.iter_mut().enumerate() {
            shifted[k] = point[k] + h;
            let up = self.numeric_energy(&shifted)?;
            shifted[k] = point[k] - h;
            let down = self.numeric_energy(&shifted)?;
            shifted[k] = point[k];
            *slot = (up - down) / (2.0 * h);
        }
        let ginv = evaluate_matrix(self.domain.inverse(), point);
        let grad: Vec<f64> = (0..d)
            .map(|a| (0..d).map(|b| ginv[a][b] * de[b]).sum())
            .collect();
        let jac = self.numeric_jacobian(point);
        Ok(jac
            .iter()
            .map(|row| row.iter().zip(&grad).map(|(j, g)| j * g).sum())
            .collect())
    }
}

/// Exact output of [`PolyMap::tau_infinity`].
///
/// `tau` is the un-halved residual `dφ(grad |dφ|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensionReport {
    pub energy: ExpPoly,
    pub gradient_energy: Vec<ExpPoly>,
    pub tau: Vec<ExpPoly>,
    pub harmonic: bool,
    pub constant_energy: bool,
}

impl TensionReport {
    fn new(energy: ExpPoly, partials: &[ExpPoly], gradient_energy: Vec<ExpPoly>, tau: Vec<ExpPoly>) -> Self {
        TensionReport {
            harmonic: tau.iter().all(ExpPoly::is_zero),
            constant_energy: partials.iter().all(ExpPoly::is_zero),
            energy,
            gradient_energy,
            tau,
        }
    }

    /// Largest `|τ_i(p)|` scale, `Σ |term|`, at a point.
    pub fn tau_magnitude(&self, point: &[f64]) -> f64 {
        self.tau
            .iter()
            .map(|t| t.magnitude(point).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

/// Metric gradient: component `α` is `Σ_β g^{αβ} ∂f/∂x_β`.
pub fn gradient(f: &ExpPoly, space: &MetricSpec) -> Result<Vec<ExpPoly>, TensionError> {
    if f.vars()[..] != space.coords()[..] {
        return Err(TensionError::CoordinateMismatch(space.name().to_string()));
    }
    let partials: Vec<ExpPoly> = (0..space.dim()).map(|k| f.derive(k)).collect::<Result<_, _>>()?;
    Ok(raise_index(space.inverse(), &partials))
}

fn raise_index(ginv: &[Vec<ExpPoly>], covector: &[ExpPoly]) -> Vec<ExpPoly> {
    let vars = ginv[0][0].vars().clone();
    ginv.iter()
        .map(|row| {
            let mut acc = ExpPoly::zero(&vars);
            for (g, c) in row.iter().zip(covector) {
                if !g.is_zero() && !c.is_zero() {
                    acc = &acc + &(g * c);
                }
            }
            acc
        })
        .collect()
}

pub(crate) fn pullback_core(jac: &[Vec<ExpPoly>], h: &[Vec<ExpPoly>]) -> Vec<Vec<ExpPoly>> {
    let n = jac.len();
    let d = jac.first().map_or(0, Vec::len);
    let vars = h[0][0].vars().clone();
    let mut out = vec![vec![ExpPoly::zero(&vars); d]; d];
    // h J, column by column
    let hj: Vec<Vec<ExpPoly>> = (0..n)
        .map(|i| {
            (0..d)
                .map(|b| {
                    let mut acc = ExpPoly::zero(&vars);
                    for (j, row) in jac.iter().enumerate() {
                        if !h[i][j].is_zero() && !row[b].is_zero() {
                            acc = &acc + &(&h[i][j] * &row[b]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    for a in 0..d {
        for b in a..d {
            let mut acc = ExpPoly::zero(&vars);
            for i in 0..n {
                if !jac[i][a].is_zero() && !hj[i][b].is_zero() {
                    acc = &acc + &(&jac[i][a] * &hj[i][b]);
                }
            }
            if a != b {
                out[b][a] = acc.clone();
            }
            out[a][b] = acc;
        }
    }
    out
}

pub(crate) fn trace_core(ginv: &[Vec<ExpPoly>], p: &[Vec<ExpPoly>]) -> ExpPoly {
    let vars = p[0][0].vars().clone();
    let mut acc = ExpPoly::zero(&vars);
    for (grow, prow) in ginv.iter().zip(p) {
        for (g, e) in grow.iter().zip(prow) {
            if !g.is_zero() && !e.is_zero() {
                acc = &acc + &(g * e);
            }
        }
    }
    acc
}

/// Returns `(∂E, grad E, τ)` with `∂_k` supplied by the caller so the same
/// contraction serves both concrete maps and symbolic coefficient extraction.
pub(crate) fn tau_core(
    jac: &[Vec<ExpPoly>],
    ginv: &[Vec<ExpPoly>],
    energy: &ExpPoly,
    partial: impl Fn(&ExpPoly, usize) -> ExpPoly,
) -> (Vec<ExpPoly>, Vec<ExpPoly>, Vec<ExpPoly>) {
    let d = ginv.len();
    let partials: Vec<ExpPoly> = (0..d).map(|k| partial(energy, k)).collect();
    let grad = raise_index(ginv, &partials);
    let tau = jac
        .iter()
        .map(|row| {
            let mut acc = ExpPoly::zero(energy.vars());
            for (j, g) in row.iter().zip(&grad) {
                if !j.is_zero() && !g.is_zero() {
                    acc = &acc + &(j * g);
                }
            }
            acc
        })
        .collect();
    (partials, grad, tau)
}

/// Report for `psi ∘ sigma`.
pub fn check_composition(psi: &PolyMap, sigma: &PolyMap) -> Result<TensionReport, TensionError> {
    psi.compose(sigma)?.tau_infinity()
}

/// Relative agreement measure used by the numeric oracle: `|a - b| / (1 + scale)`.
pub fn relative_error(numeric: f64, exact: f64, scale: f64) -> f64 {
    (numeric - exact).abs() / (1.0 + scale.abs())
}

/// Evaluates every residual component at a point.
pub fn evaluate_all(exprs: &[ExpPoly], point: &[f64]) -> Vec<f64> {
    exprs
        .iter()
        .map(|e| e.evaluate(point).expect("point length matches domain"))
        .collect()
}

/// Rational matrix entries as floats, for reporting.
pub fn matrix_to_f64(m: &RatMatrix) -> Vec<Vec<f64>> {
    m.to_rows().iter().map(|r| r.iter().map(to_f64).collect()).collect()
}
