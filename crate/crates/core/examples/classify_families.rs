//! Classifies a handful of matrices and shows each family's conditions.

use infharm::classify::{classify, families};
use infharm::{GeometryName, RatMatrix};

fn main() {
    let (sol, nil) = (GeometryName::Sol, GeometryName::Nil);
    for f in families(sol, sol).unwrap() {
        let conds: Vec<String> = f.conditions().iter().map(|c| c.to_string()).collect();
        println!("{:<28} {}", f.id, conds.join(", "));
    }
    println!();
    let samples = [
        (sol, sol, [[2, 0, 0], [0, 3, 0], [0, 0, 1]]),
        (sol, sol, [[0, 1, 0], [5, 0, 0], [0, 0, -1]]),
        (sol, sol, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
        (sol, nil, [[0, 0, 0], [1, 2, 0], [3, -1, 0]]),
        (nil, sol, [[1, 2, 0], [3, 4, 0], [0, 0, 0]]),
    ];
    for (d, t, rows) in samples {
        let a = RatMatrix::from_ints(&rows);
        let ids: Vec<&str> = classify(&a, d, t).unwrap().iter().map(|f| f.id).collect();
        println!("{d} -> {t} {a}: {}", if ids.is_empty() { "none".to_string() } else { ids.join(" ") });
    }
}
