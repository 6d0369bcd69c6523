//! Energy density of the Heisenberg -> R^n map whose i-th row is (i, i, i).

use std::sync::Arc;

use infharm::geometry::{builtin, GeometryName};
use infharm::{PolyMap, RatMatrix};

fn main() {
    let h = Arc::new(builtin(GeometryName::Heisenberg).unwrap());
    for n in 1..=5i64 {
        let rows: Vec<Vec<i64>> = (1..=n).map(|i| vec![i; 3]).collect();
        let target = Arc::new(builtin(GeometryName::Euclidean(n as usize)).unwrap());
        let map = PolyMap::linear(h.clone(), target, &RatMatrix::from_ints(&rows)).unwrap();
        let report = map.tau_infinity().unwrap();
        println!("n = {n}: |dphi|^2 = {}   harmonic: {}", report.energy, report.harmonic);
    }
}
