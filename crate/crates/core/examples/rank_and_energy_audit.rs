//! Rank and energy-constancy audit over the {-1,0,1} grid.

use infharm::classify::{energy_constancy_audit, rank_audit};
use infharm::rational::int;
use infharm::GeometryName;

fn main() {
    let grid = [int(-1), int(0), int(1)];
    let pairs = [
        (GeometryName::Heisenberg, GeometryName::Euclidean(3)),
        (GeometryName::Euclidean(3), GeometryName::Heisenberg),
        (GeometryName::Nil, GeometryName::Sol),
        (GeometryName::Sol, GeometryName::Nil),
        (GeometryName::Sol, GeometryName::Sol),
    ];
    for (d, t) in pairs {
        let r = rank_audit(d, t, &grid, None).unwrap();
        println!("{d} -> {t}: {} harmonic of {}, max rank {}", r.harmonic_count, r.grid_size, r.max_rank);
    }
    for (d, t) in [(GeometryName::Sol, GeometryName::Sol), (GeometryName::Sol, GeometryName::Nil)] {
        let e = energy_constancy_audit(d, t, &grid, None).unwrap();
        println!("\n{d} -> {t}");
        for b in &e.by_rank {
            println!("  rank {}: {} harmonic, {} constant energy, {} isometries", b.rank, b.harmonic, b.constant_energy, b.isometries);
        }
        println!("  rank-2 with constant energy: {}", e.rank2_constant_energy.len());
        for m in e.rank2_constant_energy.iter().take(3) {
            println!("    {m:?}");
        }
        println!("  full rank, constant, not isometric: {}", e.full_rank_constant_non_isometric.len());
    }
}
