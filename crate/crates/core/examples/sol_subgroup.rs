//! The diagonal maps diag(l, m, 1) on Sol: closure under products and inverses.

use std::sync::Arc;

use infharm::classify::{compose, inverse, subgroup_member};
use infharm::geometry::{builtin, GeometryName};
use infharm::rational::{frac, int};
use infharm::{PolyMap, RatMatrix};

fn main() {
    let sol = Arc::new(builtin(GeometryName::Sol).unwrap());
    let a = RatMatrix::diag(&[frac(2, 3), int(-5), int(1)]);
    let b = RatMatrix::diag(&[int(7), frac(1, 4), int(1)]);
    let ab = compose(&a, &b).unwrap();
    let ai = inverse(&a).unwrap();
    for (label, m) in [("a", &a), ("b", &b), ("a*b", &ab), ("a^-1", &ai)] {
        let r = PolyMap::linear(sol.clone(), sol.clone(), m).unwrap().tau_infinity().unwrap();
        println!("{label:<5} {m}  member {}  harmonic {}  energy {}", subgroup_member(m), r.harmonic, r.energy);
    }
}
