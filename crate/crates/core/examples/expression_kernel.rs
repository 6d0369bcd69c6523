//! Exact arithmetic on sums of c·x^k·exp(λ·x).

use infharm::expkernel::{parse, vars, ExpPoly};
use infharm::rational::frac;

fn main() {
    let v = vars(&["x", "y", "z"]);
    let f = parse("x^2*exp(2*z) + y/3 - exp(-z)", &v).unwrap();
    let g = parse("exp(z) - x", &v).unwrap();
    println!("f       = {f}");
    println!("g       = {g}");
    println!("f * g   = {}", &f * &g);
    println!("df/dz   = {}", f.derive(2).unwrap());
    let uv = vars(&["u", "v"]);
    let assign = [
        ExpPoly::linear(&uv, &[frac(1, 1), frac(0, 1)]),
        ExpPoly::linear(&uv, &[frac(0, 1), frac(1, 1)]),
        ExpPoly::linear(&uv, &[frac(1, 2), frac(-1, 1)]),
    ];
    println!("f(u, v, u/2 - v) = {}", f.substitute(&assign).unwrap());
    let h = &(&f * &g) - &(&g * &f);
    println!("fg - gf is zero: {}", h.is_zero());
    println!("f(1, 3, 0) = {}", f.evaluate(&[1.0, 3.0, 0.0]).unwrap());
}
