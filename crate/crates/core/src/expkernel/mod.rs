//! Exact exp-polynomials.
//!
//! An [`ExpPoly`] is a finite sum `Σ p_λ(x)·exp(λ·x)` where each `p_λ` is a
//! multivariate polynomial with rational coefficients and each frequency `λ`
//! is a rational vector. The class is closed under `+`, `×`, `∂/∂x_k` and
//! linear substitution into the exponent, which is all the tension
//! computation needs.
//!
//! Values are kept canonical at all times: no zero coefficients, no empty
//! polynomial under a frequency, frequencies ordered lexicographically and
//! monomials graded-lexicographically. Equality is therefore structural, and
//! because functions `x^m·exp(λ·x)` with distinct `(λ, m)` are linearly
//! independent, the zero test is exact.

mod parse;

pub use parse::{parse, ParseError, ParseErrorKind};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{to_f64, Rational};

/// Ordered variable names shared by every expression of one ring.
pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("variable mismatch: [{left}] vs [{right}]")]
    DimensionMismatch { left: String, right: String },
    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("expected {expected} substitution assignments, got {got}")]
    SubstitutionArity { expected: usize, got: usize },
    #[error("non-affine substitution into exponent coordinate {coordinate}")]
    NonAffineExponentSubstitution { coordinate: String },
    #[error("substitution shifts exponent coordinate {coordinate} by a nonzero constant; exp of a nonzero rational is not representable")]
    ExponentConstantShift { coordinate: String },
    #[error("evaluation point has length {got}, expected {expected}")]
    PointLength { expected: usize, got: usize },
}

fn join(v: &Vars) -> String {
    v.join(",")
}

/// Exponent vector of a monomial; ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn var(dim: usize, k: usize) -> Self {
        let mut e = vec![0; dim];
        e[k] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when every exponent of `other` fits.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The linear form `λ` inside `exp(λ·x)`. All-zero is the polynomial part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frequency(Vec<Rational>);

impl Frequency {
    pub fn zero(dim: usize) -> Self {
        Frequency(vec![Rational::zero(); dim])
    }

    pub fn new(lambda: Vec<Rational>) -> Self {
        Frequency(lambda)
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn add(&self, other: &Frequency) -> Frequency {
        Frequency(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

type Poly = BTreeMap<Monomial, Rational>;

fn poly_add_term(p: &mut Poly, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match p.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Exact finite sum of `polynomial × exp(linear form)` terms.
#[derive(Clone)]
pub struct ExpPoly {
    vars: Vars,
    terms: BTreeMap<Frequency, Poly>,
}

impl PartialEq for ExpPoly {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for ExpPoly {}

fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExpPoly[{}]({})", join(&self.vars), self.render())
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl ExpPoly {
    pub fn zero(vars: &Vars) -> Self {
        ExpPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::term(vars, c, Monomial::one(vars.len()), Frequency::zero(vars.len()))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The coordinate function `x_k`.
    pub fn var(vars: &Vars, k: usize) -> Self {
        Self::term(
            vars,
            Rational::one(),
            Monomial::var(vars.len(), k),
            Frequency::zero(vars.len()),
        )
    }

    /// `exp(λ·x)`.
    pub fn exp(vars: &Vars, frequency: Frequency) -> Self {
        Self::term(vars, Rational::one(), Monomial::one(vars.len()), frequency)
    }

    pub fn term(vars: &Vars, coeff: Rational, monomial: Monomial, frequency: Frequency) -> Self {
        assert_eq!(monomial.0.len(), vars.len(), "monomial length");
        assert_eq!(frequency.0.len(), vars.len(), "frequency length");
        let mut out = Self::zero(vars);
        out.add_term(frequency, monomial, coeff);
        out
    }

    /// Linear form `Σ c_k x_k`.
    pub fn linear(vars: &Vars, coeffs: &[Rational]) -> Self {
        assert_eq!(coeffs.len(), vars.len(), "linear form length");
        let mut out = Self::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            out.add_term(Frequency::zero(vars.len()), Monomial::var(vars.len(), k), c.clone());
        }
        out
    }

    fn add_term(&mut self, f: Frequency, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let poly = self.terms.entry(f.clone()).or_default();
        poly_add_term(poly, m, c);
        if poly.is_empty() {
            self.terms.remove(&f);
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Exact identity-to-zero test: the canonical form has no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the expression is a rational constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (f, p) = self.terms.iter().next()?;
                if !f.is_zero() || p.len() != 1 {
                    return None;
                }
                let (m, c) = p.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// No exponential factors.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Frequency::is_zero)
    }

    /// Total degree of the polynomial parts (0 for the zero expression).
    pub fn degree(&self) -> u32 {
        self.terms
            .values()
            .flat_map(|p| p.keys().map(Monomial::degree))
            .max()
            .unwrap_or(0)
    }

    /// Coefficients `c` when the expression is exactly `Σ c_k x_k`.
    pub fn as_linear_form(&self) -> Option<Vec<Rational>> {
        let mut coeffs = vec![Rational::zero(); self.dim()];
        for (f, p) in &self.terms {
            if !f.is_zero() {
                return None;
            }
            for (m, c) in p {
                if m.degree() != 1 {
                    return None;
                }
                let k = m.0.iter().position(|&e| e == 1)?;
                coeffs[k] = c.clone();
            }
        }
        Some(coeffs)
    }

    /// Iterates `(frequency, monomial, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Frequency, &Monomial, &Rational)> {
        self.terms
            .iter()
            .flat_map(|(f, p)| p.iter().map(move |(m, c)| (f, m, c)))
    }

    pub fn term_count(&self) -> usize {
        self.terms.values().map(BTreeMap::len).sum()
    }

    /// Frequencies carried by the expression, in canonical order.
    pub fn frequencies(&self) -> impl Iterator<Item = &Frequency> {
        self.terms.keys()
    }

    /// Whether coordinate `k` occurs anywhere (polynomially or in an exponent).
    pub fn depends_on(&self, k: usize) -> bool {
        self.terms().any(|(f, m, _)| m.0[k] > 0 || !f.0[k].is_zero())
    }

    fn check_vars(&self, other: &ExpPoly) -> Result<(), KernelError> {
        if same_vars(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(KernelError::DimensionMismatch {
                left: join(&self.vars),
                right: join(&other.vars),
            })
        }
    }

    pub fn checked_add(&self, other: &ExpPoly) -> Result<ExpPoly, KernelError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (f, m, c) in other.terms() {
            out.add_term(f.clone(), m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &ExpPoly) -> Result<ExpPoly, KernelError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (f, m, c) in other.terms() {
            out.add_term(f.clone(), m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &ExpPoly) -> Result<ExpPoly, KernelError> {
        self.check_vars(other)?;
        let mut terms: BTreeMap<Frequency, Poly> = BTreeMap::new();
        for (fa, pa) in &self.terms {
            for (fb, pb) in &other.terms {
                let poly = terms.entry(fa.add(fb)).or_default();
                for (ma, ca) in pa {
                    for (mb, cb) in pb {
                        poly_add_term(poly, ma.mul(mb), ca * cb);
                    }
                }
            }
        }
        terms.retain(|_, p| !p.is_empty());
        Ok(ExpPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &Rational) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero(&self.vars);
        }
        let mut out = self.clone();
        for p in out.terms.values_mut() {
            for v in p.values_mut() {
                *v *= c;
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> ExpPoly {
        let mut result = ExpPoly::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `∂/∂x_k` by the product rule `∂(p·e^{λ·x}) = (∂p + λ_k·p)·e^{λ·x}`.
    pub fn derive(&self, k: usize) -> Result<ExpPoly, KernelError> {
        if k >= self.dim() {
            return Err(KernelError::IndexOutOfRange {
                index: k,
                dim: self.dim(),
            });
        }
        let mut out = ExpPoly::zero(&self.vars);
        for (f, p) in &self.terms {
            let lambda = &f.0[k];
            let mut poly = Poly::new();
            for (m, c) in p {
                let e = m.0[k];
                if e > 0 {
                    let mut lowered = m.clone();
                    lowered.0[k] -= 1;
                    poly_add_term(&mut poly, lowered, c * Rational::from_integer(e.into()));
                }
                if !lambda.is_zero() {
                    poly_add_term(&mut poly, m.clone(), c * lambda);
                }
            }
            if !poly.is_empty() {
                out.terms.insert(f.clone(), poly);
            }
        }
        Ok(out)
    }

    /// Replaces coordinate `k` by `assignments[k]`.
    ///
    /// All assignments must share one variable list, which becomes the
    /// variable list of the result. A coordinate carried by some nonzero
    /// frequency may only be replaced by a linear form (no constant term);
    /// any other coordinate may be replaced by an arbitrary exp-polynomial.
    pub fn substitute(&self, assignments: &[ExpPoly]) -> Result<ExpPoly, KernelError> {
        if assignments.len() != self.dim() {
            return Err(KernelError::SubstitutionArity {
                expected: self.dim(),
                got: assignments.len(),
            });
        }
        let Some(first) = assignments.first() else {
            return Ok(self.clone());
        };
        let new_vars = first.vars.clone();
        for a in assignments {
            first.check_vars(a)?;
        }

        // Linear forms for coordinates that appear inside some exponent.
        let mut linear: Vec<Option<Vec<Rational>>> = vec![None; self.dim()];
        for k in 0..self.dim() {
            if self.terms.keys().any(|f| !f.0[k].is_zero()) {
                let a = &assignments[k];
                if !a.is_polynomial() || a.degree() > 1 {
                    return Err(KernelError::NonAffineExponentSubstitution {
                        coordinate: self.vars[k].clone(),
                    });
                }
                if a.terms().any(|(_, m, _)| m.is_one()) {
                    return Err(KernelError::ExponentConstantShift {
                        coordinate: self.vars[k].clone(),
                    });
                }
                linear[k] = Some(a.as_linear_form().unwrap_or_else(|| vec![Rational::zero(); new_vars.len()]));
            }
        }

        let mut powers: HashMap<(usize, u32), ExpPoly> = HashMap::new();
        let mut out = ExpPoly::zero(&new_vars);
        for (f, p) in &self.terms {
            let mut lambda = vec![Rational::zero(); new_vars.len()];
            for (k, l) in f.0.iter().enumerate() {
                if l.is_zero() {
                    continue;
                }
                let form = linear[k].as_ref().expect("linear form recorded above");
                for (slot, c) in lambda.iter_mut().zip(form) {
                    *slot += l * c;
                }
            }
            let exp_factor = ExpPoly::exp(&new_vars, Frequency(lambda));
            let mut poly_part = ExpPoly::zero(&new_vars);
            for (m, c) in p {
                let mut prod = ExpPoly::constant(&new_vars, c.clone());
                for (k, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let pw = powers
                        .entry((k, e))
                        .or_insert_with(|| assignments[k].pow(e));
                    prod = &prod * pw;
                }
                poly_part = &poly_part + &prod;
            }
            out = &out + &(&poly_part * &exp_factor);
        }
        Ok(out)
    }

    /// Re-expresses the value over a larger (or reordered) variable list.
    /// `mapping[k]` is the index in `target` of this expression's coordinate `k`.
    pub fn embed(&self, target: &Vars, mapping: &[usize]) -> ExpPoly {
        assert_eq!(mapping.len(), self.dim(), "embedding arity");
        let mut out = ExpPoly::zero(target);
        for (f, m, c) in self.terms() {
            let mut fe = vec![Rational::zero(); target.len()];
            let mut me = vec![0u32; target.len()];
            for (k, &t) in mapping.iter().enumerate() {
                fe[t] += &f.0[k];
                me[t] += m.0[k];
            }
            out.add_term(Frequency(fe), Monomial(me), c.clone());
        }
        out
    }

    /// Floating evaluation `Σ c·x^m·exp(λ·x)` at `point`.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64, KernelError> {
        if point.len() != self.dim() {
            return Err(KernelError::PointLength {
                expected: self.dim(),
                got: point.len(),
            });
        }
        let mut total = 0.0;
        for (f, p) in &self.terms {
            let phase: f64 = f.0.iter().zip(point).map(|(l, x)| to_f64(l) * x).sum();
            let mut poly = 0.0;
            for (m, c) in p {
                let mono: f64 = m
                    .0
                    .iter()
                    .zip(point)
                    .map(|(&e, &x)| x.powi(e as i32))
                    .product();
                poly += to_f64(c) * mono;
            }
            total += poly * phase.exp();
        }
        Ok(total)
    }

    /// Exact value at a rational point; `None` for non-polynomial input or a
    /// point of the wrong length.
    pub fn evaluate_exact(&self, point: &[Rational]) -> Option<Rational> {
        if point.len() != self.dim() || !self.is_polynomial() {
            return None;
        }
        let mut total = Rational::zero();
        for (_, m, c) in self.terms() {
            let mut v = c.clone();
            for (&e, x) in m.0.iter().zip(point) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        Some(total)
    }

    /// Sum of absolute term magnitudes at `point`; a scale for relative error checks.
    pub fn magnitude(&self, point: &[f64]) -> Result<f64, KernelError> {
        if point.len() != self.dim() {
            return Err(KernelError::PointLength {
                expected: self.dim(),
                got: point.len(),
            });
        }
        let mut total = 0.0;
        for (f, m, c) in self.terms() {
            let phase: f64 = f.0.iter().zip(point).map(|(l, x)| to_f64(l) * x).sum();
            let mono: f64 = m
                .0
                .iter()
                .zip(point)
                .map(|(&e, &x)| x.powi(e as i32))
                .product();
            total += (to_f64(c) * mono).abs() * phase.exp();
        }
        Ok(total)
    }

    /// Divides by the single term `c·x^m·exp(λ·x)` when every term of `self`
    /// is divisible by `x^m`. Returns `None` when `divisor` is not a single
    /// term or a quotient would leave the class.
    pub fn div_by_term(&self, divisor: &ExpPoly) -> Option<ExpPoly> {
        if divisor.term_count() != 1 || !same_vars(&self.vars, &divisor.vars) {
            return None;
        }
        let (df, dm, dc) = divisor.terms().next()?;
        let inv = dc.recip();
        let neg_f = Frequency(df.0.iter().map(|l| -l).collect());
        let mut out = ExpPoly::zero(&self.vars);
        for (f, m, c) in self.terms() {
            let q = m.div(dm)?;
            out.add_term(f.add(&neg_f), q, c * &inv);
        }
        Some(out)
    }

    /// Groups the expression by the frequency and monomial restricted to the
    /// `basis` coordinates; the remaining coordinates form the coefficient,
    /// returned as an expression over `coeff_vars` (via `coeff_mapping`).
    ///
    /// Coefficient coordinates must not carry exponential factors.
    pub fn collect(
        &self,
        basis: &[usize],
        coeff_vars: &Vars,
        coeff_mapping: &[(usize, usize)],
    ) -> BTreeMap<(Frequency, Monomial), ExpPoly> {
        let mut out: BTreeMap<(Frequency, Monomial), ExpPoly> = BTreeMap::new();
        for (f, m, c) in self.terms() {
            let bf = Frequency(basis.iter().map(|&k| f.0[k].clone()).collect());
            let bm = Monomial(basis.iter().map(|&k| m.0[k]).collect());
            let mut ce = vec![0u32; coeff_vars.len()];
            for &(src, dst) in coeff_mapping {
                assert!(f.0[src].is_zero(), "coefficient variable inside an exponent");
                ce[dst] = m.0[src];
            }
            let entry = out
                .entry((bf, bm))
                .or_insert_with(|| ExpPoly::zero(coeff_vars));
            entry.add_term(Frequency::zero(coeff_vars.len()), Monomial(ce), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Leading coefficient sign normalisation: returns `self / c` where `c` is
    /// the coefficient of the greatest term, so the greatest term has coefficient 1.
    pub fn monic(&self) -> ExpPoly {
        match self.terms().last() {
            Some((_, _, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// `Some(c)` when `self == c·other` for a nonzero rational `c`.
    pub fn ratio_to(&self, other: &ExpPoly) -> Option<Rational> {
        if self.is_zero() || other.is_zero() || self.term_count() != other.term_count() {
            return None;
        }
        let (_, _, a) = self.terms().next()?;
        let (_, _, b) = other.terms().next()?;
        let c = a / b;
        (other.scale(&c) == *self).then_some(c)
    }

    pub fn render(&self) -> String {
        parse::render(self)
    }

    pub fn has_negative_leading(&self) -> bool {
        self.terms().last().is_some_and(|(_, _, c)| c.is_negative())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&ExpPoly> for &ExpPoly {
            type Output = ExpPoly;
            /// Panics on a variable-list mismatch; use the `checked_*` form for
            /// untrusted operands.
            fn $method(self, rhs: &ExpPoly) -> ExpPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<ExpPoly> for ExpPoly {
            type Output = ExpPoly;
            fn $method(self, rhs: ExpPoly) -> ExpPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn xyz() -> Vars {
        vars(&["x", "y", "z"])
    }

    fn p(s: &str) -> ExpPoly {
        parse(s, &xyz()).unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        assert!((p("exp(2*z)") + p("-exp(2*z)")).is_zero());
        assert!((p("exp(2*z)") - p("exp(2*z)")).is_zero());
    }

    #[test]
    fn sum_of_monomials() {
        let s = p("x") + p("y");
        assert_eq!(s.term_count(), 2);
        assert!(s.is_polynomial());
        assert_eq!(s, p("y + x"));
    }

    #[test]
    fn distinct_frequencies_do_not_merge() {
        let s = p("x*exp(2*z)") + p("x*exp(-2*z)");
        assert_eq!(s.term_count(), 2);
        assert_eq!(s.frequencies().count(), 2);
        let v = s.evaluate(&[1.0, 0.0, 1.0]).unwrap();
        let expected = 1f64.exp().powi(2) + (-2f64).exp();
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn multiplication_adds_frequencies() {
        assert_eq!(p("x*exp(2*z)") * p("y*exp(-2*z)"), p("x*y"));
        assert!((ExpPoly::zero(&xyz()) * p("x^3*exp(z) + 7")).is_zero());
        assert_eq!(p("exp(2*z)") * p("exp(2*z)"), p("exp(4*z)"));
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let a = p("x");
        let b = parse("x", &vars(&["x", "y"])).unwrap();
        assert!(matches!(a.checked_add(&b), Err(KernelError::DimensionMismatch { .. })));
        assert!(matches!(a.checked_mul(&b), Err(KernelError::DimensionMismatch { .. })));
    }

    #[test]
    fn derivative_rules() {
        assert_eq!(p("x^2*exp(2*z)").derive(2).unwrap(), p("2*x^2*exp(2*z)"));
        assert!(p("5").derive(0).unwrap().is_zero());
        assert_eq!(p("x^3*y + exp(x)").derive(0).unwrap(), p("3*x^2*y + exp(x)"));
        assert!(matches!(p("x").derive(3), Err(KernelError::IndexOutOfRange { index: 3, dim: 3 })));
    }

    #[test]
    fn derivative_matches_central_differences() {
        let f = p("x^2*exp(2*z)");
        let df = f.derive(2).unwrap();
        let pts = [[0.3, -1.2, 0.7], [1.1, 0.4, -0.9], [-1.7, 1.9, 0.2], [0.5, 0.5, 1.5], [-0.8, -0.1, -1.3]];
        let h = 1e-5;
        for pt in pts {
            let mut up = pt;
            let mut dn = pt;
            up[2] += h;
            dn[2] -= h;
            let fd = (f.evaluate(&up).unwrap() - f.evaluate(&dn).unwrap()) / (2.0 * h);
            let exact = df.evaluate(&pt).unwrap();
            assert!((fd - exact).abs() <= 1e-8 * exact.abs().max(1.0), "{pt:?}: {fd} vs {exact}");
        }
    }

    #[test]
    fn affine_substitution_into_exponent() {
        let names = vars(&["x", "y", "z", "a31", "a32", "a33"]);
        // z ↦ 2x - y + 3z over plain coordinates
        let ring = xyz();
        let assign = vec![
            ExpPoly::var(&ring, 0),
            ExpPoly::var(&ring, 1),
            ExpPoly::linear(&ring, &[int(2), int(-1), int(3)]),
        ];
        let out = p("exp(2*z)").substitute(&assign).unwrap();
        assert_eq!(out, p("exp(4*x - 2*y + 6*z)"));
        // symbolic coefficients make the assignment quadratic
        let z_prime = parse("a31*x + a32*y + a33*z", &names).unwrap();
        let assign = vec![ExpPoly::var(&names, 0), ExpPoly::var(&names, 1), z_prime];
        assert!(matches!(
            p("exp(2*z)").substitute(&assign),
            Err(KernelError::NonAffineExponentSubstitution { .. })
        ));
    }

    #[test]
    fn identity_substitution_is_noop() {
        let ring = xyz();
        let id: Vec<_> = (0..3).map(|k| ExpPoly::var(&ring, k)).collect();
        let f = p("1/4*x^2*exp(2*z) - x*y + exp(-2*z)*y^3 + 3");
        assert_eq!(f.substitute(&id).unwrap(), f);
    }

    #[test]
    fn quadratic_exponent_substitution_fails() {
        let ring = xyz();
        let assign = vec![ExpPoly::var(&ring, 0), ExpPoly::var(&ring, 1), p("z + 1/2*x*y")];
        assert_eq!(
            p("exp(2*z)").substitute(&assign),
            Err(KernelError::NonAffineExponentSubstitution {
                coordinate: "z".into()
            })
        );
        let shifted = vec![ExpPoly::var(&ring, 0), ExpPoly::var(&ring, 1), p("z + 1")];
        assert!(matches!(
            p("exp(2*z)").substitute(&shifted),
            Err(KernelError::ExponentConstantShift { .. })
        ));
        // a polynomial coordinate may take any polynomial
        let ok = vec![ExpPoly::var(&ring, 0), ExpPoly::var(&ring, 1), p("z + 1/2*x*y")];
        assert_eq!(p("z^2").substitute(&ok).unwrap(), p("z^2 + x*y*z + 1/4*x^2*y^2"));
    }

    #[test]
    fn zero_test() {
        assert!(ExpPoly::zero(&xyz()).is_zero());
        assert!(!(p("x*exp(2*z)") - p("x*exp(-2*z)")).is_zero());
        let v = (p("x*exp(2*z)") - p("x*exp(-2*z)")).evaluate(&[1.0, 0.0, 1.0]).unwrap();
        assert!((v - 7.253720815694037).abs() < 1e-9);
    }

    #[test]
    fn evaluation_basics() {
        assert_eq!(p("3").evaluate(&[9.0, -2.0, 0.5]).unwrap(), 3.0);
        assert_eq!(p("exp(2*z)").evaluate(&[1.0, 1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(p("x^2 + y^2").evaluate(&[3.0, 4.0, 0.0]).unwrap(), 25.0);
        assert!(matches!(p("x").evaluate(&[1.0]), Err(KernelError::PointLength { .. })));
    }

    #[test]
    fn term_division() {
        let f = p("2*x^2*exp(2*z) + 4*x*y");
        assert_eq!(f.div_by_term(&p("2*x")).unwrap(), p("x*exp(2*z) + 2*y"));
        assert_eq!(p("x").div_by_term(&p("exp(2*z)")).unwrap(), p("x*exp(-2*z)"));
        assert!(p("x + 1").div_by_term(&p("x")).is_none());
        assert!(p("x").div_by_term(&p("x + 1")).is_none());
    }

    #[test]
    fn linear_form_and_ratio() {
        assert_eq!(p("2*x - z").as_linear_form(), Some(vec![int(2), int(0), int(-1)]));
        assert_eq!(p("2*x + 1").as_linear_form(), None);
        assert_eq!(p("x*y").as_linear_form(), None);
        assert_eq!(p("6*x^2 - 3*y").ratio_to(&p("2*x^2 - y")), Some(int(3)));
        assert_eq!(p("x + y").ratio_to(&p("x - y")), None);
        assert_eq!(p("-4*x + 2").monic(), p("x - 1/2"));
        assert_eq!(p("1/3").as_constant(), Some(frac(1, 3)));
    }

    #[test]
    fn embedding_into_larger_ring() {
        let big = vars(&["a", "x", "b", "y", "z"]);
        let f = p("x*exp(2*z) + y");
        let e = f.embed(&big, &[1, 3, 4]);
        assert_eq!(e, parse("x*exp(2*z) + y", &big).unwrap());
    }

    #[test]
    fn graded_lex_order() {
        let m = |e: &[u32]| Monomial::from_exponents(e.to_vec());
        assert!(m(&[0, 0, 2]) > m(&[1, 0, 0]));
        assert!(m(&[2, 0, 0]) > m(&[1, 1, 0]));
        assert!(m(&[1, 1, 0]) > m(&[0, 2, 0]));
        assert!(m(&[0, 0, 0]) < m(&[0, 0, 1]));
    }
}
