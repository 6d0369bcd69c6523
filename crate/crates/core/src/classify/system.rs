//! Coefficient systems: the polynomial equations in the entries `a_ij` that
//! make every basis coefficient of `τ` vanish.
//!
//! Target coordinates the target metric depends on are replaced by formal
//! variables (`z'` for Sol, `x'` for Nil, `x'`, `y'` for Heisenberg). The
//! chain rule becomes the derivation `D_k = ∂_k + Σ_t a_tk ∂_{t'}`, and the
//! coefficients are read off per (frequency, monomial) in the domain and
//! formal variables. This is the system of the generic case, where the basis
//! functions stay independent after `t' ↦ (A x)_t`; [`CoefficientSystem::is_generic`]
//! decides that per matrix.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::expkernel::{vars, ExpPoly, Frequency, Monomial, Vars};
use crate::geometry::{builtin, GeometryName, MetricSpec};
use crate::matrix::RatMatrix;
use crate::rational::Rational;
use crate::tension::{pullback_core, tau_core, trace_core};

use super::{pair_kind, ClassifyError};

/// Coefficient of one basis element in one residual component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub component: usize,
    pub frequency: Frequency,
    pub monomial: Monomial,
    /// Polynomial in the entry variables.
    pub poly: ExpPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSystem {
    pub domain: String,
    pub target: String,
    pub shape: (usize, usize),
    domain_coords: Vars,
    basis_vars: Vars,
    formal: Vec<usize>,
    entry_vars: Vars,
    equations: Vec<Equation>,
}

/// Entry variable name for `a_{i+1, j+1}`.
pub fn entry_name(i: usize, j: usize) -> String {
    if i < 9 && j < 9 {
        format!("a{}{}", i + 1, j + 1)
    } else {
        format!("a{}_{}", i + 1, j + 1)
    }
}

/// System for one of the classified pairs.
pub fn coefficient_system(domain: GeometryName, target: GeometryName) -> Result<CoefficientSystem, ClassifyError> {
    pair_kind(domain, target)?;
    let d = builtin(domain).map_err(ClassifyError::Geometry)?;
    let t = builtin(target).map_err(ClassifyError::Geometry)?;
    Ok(extract_system(&d, &t))
}

/// System for any pair of metrics.
pub fn extract_system(domain: &MetricSpec, target: &MetricSpec) -> CoefficientSystem {
    let m = domain.dim();
    let n = target.dim();
    let formal = target.active_coords();
    let f = formal.len();

    let mut names: Vec<String> = domain.coords().iter().cloned().collect();
    names.extend(formal.iter().map(|&t| format!("{}'", target.coords()[t])));
    let basis_vars = vars(&names);
    let entry_names: Vec<String> = (0..n).flat_map(|i| (0..m).map(move |j| entry_name(i, j))).collect();
    names.extend(entry_names.iter().cloned());
    let ring = vars(&names);
    let entry_vars = vars(&entry_names);
    let a = |i: usize, j: usize| m + f + i * m + j;

    let jac: Vec<Vec<ExpPoly>> = (0..n)
        .map(|i| (0..m).map(|j| ExpPoly::var(&ring, a(i, j))).collect())
        .collect();
    let target_map: Vec<usize> = (0..n)
        .map(|t| formal.iter().position(|&s| s == t).map_or(0, |p| m + p))
        .collect();
    let h: Vec<Vec<ExpPoly>> = (0..n)
        .map(|i| (0..n).map(|j| target.g(i, j).embed(&ring, &target_map)).collect())
        .collect();
    let domain_map: Vec<usize> = (0..m).collect();
    let ginv: Vec<Vec<ExpPoly>> = domain
        .inverse()
        .iter()
        .map(|row| row.iter().map(|e| e.embed(&ring, &domain_map)).collect())
        .collect();

    let energy = trace_core(&ginv, &pullback_core(&jac, &h));
    let chain = |e: &ExpPoly, k: usize| {
        let mut out = e.derive(k).expect("domain index");
        for (p, &t) in formal.iter().enumerate() {
            let dw = e.derive(m + p).expect("formal index");
            if !dw.is_zero() {
                out = &out + &(&ExpPoly::var(&ring, a(t, k)) * &dw);
            }
        }
        out
    };
    let (_, _, tau) = tau_core(&jac, &ginv, &energy, chain);

    let basis: Vec<usize> = (0..m + f).collect();
    let mapping: Vec<(usize, usize)> = (0..n * m).map(|k| (m + f + k, k)).collect();
    let mut equations = Vec::new();
    for (component, t) in tau.iter().enumerate() {
        for ((frequency, monomial), poly) in t.collect(&basis, &entry_vars, &mapping) {
            equations.push(Equation {
                component,
                frequency,
                monomial,
                poly,
            });
        }
    }
    CoefficientSystem {
        domain: domain.name().to_string(),
        target: target.name().to_string(),
        shape: (n, m),
        domain_coords: domain.coords().clone(),
        basis_vars,
        formal,
        entry_vars,
        equations,
    }
}

impl CoefficientSystem {
    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn entry_vars(&self) -> &Vars {
        &self.entry_vars
    }

    pub fn basis_vars(&self) -> &Vars {
        &self.basis_vars
    }

    /// Distinct basis elements, in canonical order.
    pub fn basis(&self) -> Vec<(Frequency, Monomial)> {
        let set: BTreeSet<(Frequency, Monomial)> = self
            .equations
            .iter()
            .map(|e| (e.frequency.clone(), e.monomial.clone()))
            .collect();
        set.into_iter().collect()
    }

    /// Basis element as an expression, e.g. `x^2*exp(2*z')`.
    pub fn render_basis(&self, frequency: &Frequency, monomial: &Monomial) -> String {
        ExpPoly::term(
            &self.basis_vars,
            Rational::from_integer(1.into()),
            monomial.clone(),
            frequency.clone(),
        )
        .render()
    }

    pub fn component(&self, i: usize) -> impl Iterator<Item = &Equation> {
        self.equations.iter().filter(move |e| e.component == i)
    }

    fn point(&self, a: &RatMatrix) -> Vec<Rational> {
        assert_eq!(a.shape(), self.shape, "matrix shape");
        a.entries().to_vec()
    }

    /// Every equation vanishes at the entries of `a`.
    pub fn vanishes_at(&self, a: &RatMatrix) -> bool {
        let p = self.point(a);
        self.equations
            .iter()
            .all(|e| e.poly.evaluate_exact(&p).expect("polynomial equation").is_zero())
    }

    /// The basis functions stay linearly independent after substituting the
    /// formal variables with the rows of `a`; then `τ = 0` holds exactly when
    /// the system vanishes.
    pub fn is_generic(&self, a: &RatMatrix) -> bool {
        assert_eq!(a.shape(), self.shape, "matrix shape");
        let m = self.domain_coords.len();
        let mut assign: Vec<ExpPoly> = (0..m).map(|k| ExpPoly::var(&self.domain_coords, k)).collect();
        for &t in &self.formal {
            assign.push(ExpPoly::linear(&self.domain_coords, a.row(t)));
        }
        let funcs: Vec<ExpPoly> = self
            .basis()
            .iter()
            .map(|(f, mo)| {
                ExpPoly::term(&self.basis_vars, Rational::from_integer(1.into()), mo.clone(), f.clone())
                    .substitute(&assign)
                    .expect("linear assignments")
            })
            .collect();
        let mut columns: BTreeMap<(Frequency, Monomial), usize> = BTreeMap::new();
        for func in &funcs {
            for (f, mo, _) in func.terms() {
                let next = columns.len();
                columns.entry((f.clone(), mo.clone())).or_insert(next);
            }
        }
        if columns.len() < funcs.len() {
            return false;
        }
        let mut mat = RatMatrix::zeros(funcs.len(), columns.len());
        for (r, func) in funcs.iter().enumerate() {
            for (f, mo, c) in func.terms() {
                mat.set(r, columns[&(f.clone(), mo.clone())], c.clone());
            }
        }
        mat.rank() == funcs.len()
    }

    /// Some equation equals `c · poly` for a nonzero rational `c`.
    pub fn contains_up_to_scaling(&self, poly: &ExpPoly) -> bool {
        self.equations.iter().any(|e| e.poly.ratio_to(poly).is_some())
    }

    /// One line per equation: `τ_i [basis]: poly = 0`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.equations {
            out.push_str(&format!(
                "tau{} [{}]: {} = 0\n",
                e.component + 1,
                self.render_basis(&e.frequency, &e.monomial),
                e.poly.render()
            ));
        }
        out
    }
}
