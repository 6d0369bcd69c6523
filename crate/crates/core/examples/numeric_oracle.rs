//! Compares the exact residual with central differences at random points.

use std::sync::Arc;

use infharm::geometry::{builtin, GeometryName};
use infharm::tension::{evaluate_all, relative_error, DEFAULT_STEP};
use infharm::{PolyMap, RatMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sol = Arc::new(builtin(GeometryName::Sol).unwrap());
    let nil = Arc::new(builtin(GeometryName::Nil).unwrap());
    let a = RatMatrix::from_ints(&[[1, 2, 0], [0, 1, 1], [1, 0, 1]]);
    let map = PolyMap::linear(sol, nil, &a).unwrap();
    let report = map.tau_infinity().unwrap();
    println!("tau = [{}]", report.tau.iter().map(|t| t.render()).collect::<Vec<_>>().join(",\n       "));
    for _ in 0..5 {
        let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let exact = evaluate_all(&report.tau, &p);
        let numeric = map.numeric_residual(&p, DEFAULT_STEP).unwrap();
        let scale = report.tau_magnitude(&p);
        let err = exact.iter().zip(&numeric).map(|(e, n)| relative_error(*n, *e, scale)).fold(0.0, f64::max);
        println!("p = {p:.3?}  exact {exact:.4?}  numeric {numeric:.4?}  rel err {err:.1e}");
    }
}
