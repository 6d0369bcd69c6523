//! Pulls the Nil metric back along (x, y, z + xy/2) and compares it with the
//! Heisenberg metric.

use std::sync::Arc;

use infharm::geometry::{builtin, GeometryName};
use infharm::{parse, PolyMap};

fn main() {
    let h = Arc::new(builtin(GeometryName::Heisenberg).unwrap());
    let nil = Arc::new(builtin(GeometryName::Nil).unwrap());
    let comps = ["x", "y", "z + x*y/2"].iter().map(|s| parse(s, h.coords()).unwrap()).collect();
    let sigma = PolyMap::polynomial(h.clone(), nil, comps).unwrap();
    let pullback = sigma.pullback_metric().unwrap();
    for (i, row) in pullback.iter().enumerate() {
        let got: Vec<String> = row.iter().map(|e| e.render()).collect();
        let want: Vec<String> = h.metric()[i].iter().map(|e| e.render()).collect();
        println!("row {i}: pullback [{}]   heisenberg [{}]", got.join(", "), want.join(", "));
    }
    println!("isometry: {}", sigma.is_isometry().unwrap());
}
