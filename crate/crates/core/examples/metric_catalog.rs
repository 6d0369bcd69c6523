//! Lists the built-in metrics with their inverses and checks g·g⁻¹ = I.

use infharm::geometry::{builtin, GeometryName};

fn main() {
    for name in [GeometryName::Euclidean(3), GeometryName::Heisenberg, GeometryName::Nil, GeometryName::Sol] {
        let spec = builtin(name).expect("builtin");
        println!("{name}  coords ({})", spec.coords().join(", "));
        for i in 0..spec.dim() {
            let g: Vec<String> = (0..spec.dim()).map(|j| spec.g(i, j).render()).collect();
            let ginv: Vec<String> = (0..spec.dim()).map(|j| spec.ginv(i, j).render()).collect();
            println!("  g[{i}] = [{}]   ginv[{i}] = [{}]", g.join(", "), ginv.join(", "));
        }
        println!("  verified: {}\n", spec.verify().is_ok());
    }
}
