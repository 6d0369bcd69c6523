#![allow(dead_code)]

use std::sync::Arc;

use infharm::expkernel::{ExpPoly, Frequency, Monomial, Vars};
use infharm::geometry::{builtin, GeometryName, MetricSpec};
use infharm::rational::{frac, int, Rational};
use rand::Rng;

pub fn space(name: GeometryName) -> Arc<MetricSpec> {
    Arc::new(builtin(name).expect("builtin geometry"))
}

/// The five classified pairs with small Euclidean factors.
pub fn pairs() -> Vec<(GeometryName, GeometryName)> {
    vec![
        (GeometryName::Heisenberg, GeometryName::Euclidean(2)),
        (GeometryName::Euclidean(2), GeometryName::Heisenberg),
        (GeometryName::Nil, GeometryName::Sol),
        (GeometryName::Sol, GeometryName::Nil),
        (GeometryName::Sol, GeometryName::Sol),
    ]
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    frac(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

/// Random exp-polynomial: up to `terms` terms, degree ≤ 2 per variable,
/// frequencies with components in {-2,-1,0,1,2}/2.
pub fn random_exppoly<R: Rng>(rng: &mut R, vars: &Vars, terms: usize) -> ExpPoly {
    let n = vars.len();
    let mut out = ExpPoly::zero(vars);
    for _ in 0..rng.gen_range(0..=terms) {
        let mono = Monomial::from_exponents((0..n).map(|_| rng.gen_range(0..=2)).collect());
        let freq = if rng.gen_bool(0.5) {
            Frequency::zero(n)
        } else {
            Frequency::new((0..n).map(|_| frac(rng.gen_range(-2..=2), 2)).collect())
        };
        out = &out + &ExpPoly::term(vars, small_rational(rng), mono, freq);
    }
    out
}

pub fn random_point<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-2.0..=2.0)).collect()
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}
