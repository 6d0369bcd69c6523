//! Enumerates every {-1,0,1} matrix for each classified pair and compares the
//! exact residual with family membership.

use std::time::Instant;

use infharm::classify::enumerate_equivalence;
use infharm::geometry::GeometryName;
use infharm::rational::int;

fn main() {
    let values = [int(-1), int(0), int(1)];
    let pairs = [
        (GeometryName::Heisenberg, GeometryName::Euclidean(2)),
        (GeometryName::Euclidean(2), GeometryName::Heisenberg),
        (GeometryName::Nil, GeometryName::Sol),
        (GeometryName::Sol, GeometryName::Nil),
        (GeometryName::Sol, GeometryName::Sol),
    ];
    for (d, t) in pairs {
        let start = Instant::now();
        let report = enumerate_equivalence(d, t, &values, None).expect("classified pair");
        println!("{}", report.render_text().trim_end());
        println!("elapsed: {:.2?}\n", start.elapsed());
    }
}
