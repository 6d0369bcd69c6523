//! Composes linear maps Nil -> R^n with the isometry Heisenberg -> Nil and
//! checks the composite.

use std::sync::Arc;

use infharm::geometry::{builtin, GeometryName};
use infharm::tension::check_composition;
use infharm::{parse, PolyMap, RatMatrix};

fn main() {
    let h = Arc::new(builtin(GeometryName::Heisenberg).unwrap());
    let nil = Arc::new(builtin(GeometryName::Nil).unwrap());
    let comps = ["x", "y", "z + x*y/2"].iter().map(|s| parse(s, h.coords()).unwrap()).collect();
    let sigma = PolyMap::polynomial(h, nil.clone(), comps).unwrap();

    let cases: [(usize, Vec<[i64; 3]>); 3] = [
        (2, vec![[0, 1, 0], [0, 2, 0]]),
        (2, vec![[0, 2, -3], [0, 3, 2]]),
        (3, vec![[0, 1, 1], [0, 0, 2], [0, -1, 0]]),
    ];
    for (n, rows) in cases {
        let psi = PolyMap::linear(
            nil.clone(),
            Arc::new(builtin(GeometryName::Euclidean(n)).unwrap()),
            &RatMatrix::from_ints(&rows),
        )
        .unwrap();
        let composite = psi.compose(&sigma).unwrap();
        let report = check_composition(&psi, &sigma).unwrap();
        let shown: Vec<String> = composite.components().iter().map(|c| c.render()).collect();
        println!("psi = {rows:?}");
        println!("  psi o sigma = ({})", shown.join(", "));
        println!("  energy {}   harmonic {}   constant {}", report.energy, report.harmonic, report.constant_energy);
    }
}
