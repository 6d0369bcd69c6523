//! Prints the coefficient system of a pair, one equation per line.
//!
//! ```text
//! cargo run --example coefficient_systems -- sol nil
//! ```

use infharm::classify::coefficient_system;
use infharm::GeometryName;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let pairs: Vec<(GeometryName, GeometryName)> = if args.len() == 2 {
        vec![(args[0].parse()?, args[1].parse()?)]
    } else {
        vec![
            (GeometryName::Heisenberg, GeometryName::Euclidean(2)),
            (GeometryName::Euclidean(2), GeometryName::Heisenberg),
            (GeometryName::Nil, GeometryName::Sol),
            (GeometryName::Sol, GeometryName::Nil),
            (GeometryName::Sol, GeometryName::Sol),
        ]
    };
    for (d, t) in pairs {
        let sys = coefficient_system(d, t)?;
        println!("{d} -> {t}: {} equations over {} basis functions", sys.equations().len(), sys.basis().len());
        print!("{}", sys.render());
        println!();
    }
    Ok(())
}
