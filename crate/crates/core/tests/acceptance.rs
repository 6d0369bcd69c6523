//! Acceptance gate: one PASS/FAIL line per criterion.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use infharm::classify::{
    compose, energy_constancy_audit, families, inverse, rank_audit, subgroup_member,
};
use infharm::expkernel::{parse, vars, ExpPoly};
use infharm::geometry::{builtin, GeometryName};
use infharm::matrix::RatMatrix;
use infharm::rational::{frac, int, Rational};
use infharm::tension::{check_composition, evaluate_all, relative_error, PolyMap, DEFAULT_STEP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use common::{ints, random_exppoly, random_point, space};

type Outcome = Result<String, String>;

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t < limit {
        Ok(())
    } else {
        Err(format!("took {t:.2?}, limit {limit:?}"))
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for name in [GeometryName::Heisenberg, GeometryName::Nil, GeometryName::Sol] {
        let spec = builtin(name).map_err(|e| e.to_string())?;
        spec.verify().map_err(|e| e.to_string())?;
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("g·g⁻¹ = I exactly for heisenberg, nil, sol in {:.2?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let h = space(GeometryName::Heisenberg);
    for n in 1..=5i64 {
        let rows: Vec<Vec<i64>> = (1..=n).map(|i| vec![i; 3]).collect();
        let map = PolyMap::linear(
            h.clone(),
            space(GeometryName::Euclidean(n as usize)),
            &RatMatrix::from_ints(&rows),
        )
        .map_err(|e| e.to_string())?;
        let s = n * (n + 1) * (2 * n + 1) / 6;
        let expected = parse(&format!("{s}/4*(x^2 + y^2) + {s}*(x - y) + 3*{s}"), h.coords()).unwrap();
        let got = map.energy_density().map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("n={n}: energy {got}, expected {expected}"));
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("energy density matches for n = 1..5 in {:.2?}", start.elapsed()))
}

fn sigma() -> PolyMap {
    let h = space(GeometryName::Heisenberg);
    let comps = ["x", "y", "z + x*y/2"]
        .iter()
        .map(|s| parse(s, h.coords()).unwrap())
        .collect();
    PolyMap::polynomial(h, space(GeometryName::Nil), comps).unwrap()
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let s = sigma();
    let pullback = s.pullback_metric().map_err(|e| e.to_string())?;
    if pullback.as_slice() != s.domain().metric() {
        return Err("pullback differs from the Heisenberg metric".into());
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("pullback of (X, Y, Z + XY/2) equals the Heisenberg metric in {:.2?}", start.elapsed()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let s = sigma();
    let nil = space(GeometryName::Nil);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in [2usize, 3] {
        for _ in 0..10 {
            // zero first column; some a_i3 ≠ 0 so the composite has degree 2
            let mut a = RatMatrix::zeros(n, 3);
            for i in 0..n {
                a.set(i, 1, int(rng.gen_range(-3..=3)));
                a.set(i, 2, int(rng.gen_range(-3..=3)));
            }
            if (0..n).all(|i| a.get(i, 2) == &int(0)) {
                a.set(0, 2, int(1));
            }
            let psi = PolyMap::linear(nil.clone(), space(GeometryName::Euclidean(n)), &a).unwrap();
            let report = check_composition(&psi, &s).map_err(|e| e.to_string())?;
            checked += 1;
            if !(report.harmonic && report.constant_energy) {
                failures.push(format!(
                    "A={a}: harmonic={} constant_energy={} energy={}",
                    report.harmonic, report.constant_energy, report.energy
                ));
            }
        }
    }
    within(Duration::from_secs(1), start)?;
    if failures.is_empty() {
        Ok(format!("{checked} degree-2 composites harmonic with constant energy"))
    } else {
        Err(format!("{} of {checked} composites fail; first: {}", failures.len(), failures[0]))
    }
}

fn criterion_5() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_infharm");
    let runs = [
        ("heisenberg", "euclidean:2", 729),
        ("euclidean:2", "heisenberg", 729),
        ("nil", "sol", 19683),
        ("sol", "nil", 19683),
        ("sol", "sol", 19683),
    ];
    let mut lines = Vec::new();
    for (d, t, size) in runs {
        let start = Instant::now();
        let out = Command::new(bin)
            .args(["enumerate", "--domain", d, "--target", t, "--grid", "-1,0,1"])
            .output()
            .map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("{d}->{t}: {e}"))?;
        let mismatches = report["mismatch_count"].as_u64().unwrap_or(u64::MAX);
        let grid = report["grid_size"].as_u64().unwrap_or(0);
        if out.status.code() != Some(0) || mismatches != 0 || grid != size || elapsed >= Duration::from_secs(60) {
            return Err(format!(
                "{d}->{t}: exit {:?}, grid {grid}, mismatches {mismatches}, {elapsed:.2?}",
                out.status.code()
            ));
        }
        lines.push(format!("{d}->{t} {grid} in {elapsed:.1?}"));
    }
    Ok(format!("zero mismatches: {}", lines.join("; ")))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut count = 0;
    let pairs = [
        (GeometryName::Heisenberg, GeometryName::Euclidean(2)),
        (GeometryName::Heisenberg, GeometryName::Euclidean(3)),
        (GeometryName::Euclidean(2), GeometryName::Heisenberg),
        (GeometryName::Euclidean(3), GeometryName::Heisenberg),
        (GeometryName::Nil, GeometryName::Sol),
        (GeometryName::Sol, GeometryName::Nil),
        (GeometryName::Sol, GeometryName::Sol),
    ];
    for (d, t) in pairs {
        let (ds, ts) = (space(d), space(t));
        for f in families(d, t).map_err(|e| e.to_string())? {
            for _ in 0..200 {
                let a = f.sample(&mut rng);
                let r = PolyMap::linear(ds.clone(), ts.clone(), &a).unwrap().tau_infinity().unwrap();
                if !r.harmonic {
                    return Err(format!("{} member {a} is not harmonic", f.id));
                }
                count += 1;
            }
        }
    }
    let sol = space(GeometryName::Sol);
    for rows in [[[0, 0, 0], [0, 0, 0], [0, 0, 2]], [[0, 2, 0], [-3, 0, 0], [0, 0, -1]]] {
        let a = RatMatrix::from_ints(&rows);
        if !PolyMap::linear(sol.clone(), sol.clone(), &a).unwrap().tau_infinity().unwrap().harmonic {
            return Err(format!("spot check {a} is not harmonic"));
        }
        count += 1;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("{count} family members harmonic in {:.2?}", start.elapsed()))
}

fn criterion_7() -> Outcome {
    let grid = ints(&[-1, 0, 1]);
    let cases = [
        (GeometryName::Heisenberg, GeometryName::Euclidean(3), 2),
        (GeometryName::Euclidean(3), GeometryName::Heisenberg, 2),
        (GeometryName::Nil, GeometryName::Sol, 2),
        (GeometryName::Sol, GeometryName::Nil, 2),
        (GeometryName::Sol, GeometryName::Sol, 3),
    ];
    let mut seen = Vec::new();
    for (d, t, want) in cases {
        let audit = rank_audit(d, t, &grid, None).map_err(|e| e.to_string())?;
        if audit.max_rank != want {
            return Err(format!("{d}->{t}: max rank {}, expected {want}", audit.max_rank));
        }
        seen.push(format!("{d}->{t}={}", audit.max_rank));
    }
    Ok(format!("max ranks {}", seen.join(", ")))
}

fn criterion_8() -> Outcome {
    let grid = ints(&[-1, 0, 1]);
    let mut problems = Vec::new();
    for (d, t) in [(GeometryName::Sol, GeometryName::Sol), (GeometryName::Sol, GeometryName::Nil)] {
        let audit = energy_constancy_audit(d, t, &grid, None).map_err(|e| e.to_string())?;
        if !audit.every_rank2_nonconstant() {
            let first: Vec<String> = audit.rank2_constant_energy[0]
                .iter()
                .map(|r| format!("[{}]", r.join(", ")))
                .collect();
            problems.push(format!(
                "{d}->{t}: {} rank-2 harmonic matrices with constant energy, e.g. [{}]",
                audit.rank2_constant_energy.len(),
                first.join(", ")
            ));
        }
    }
    let sol = space(GeometryName::Sol);
    let a = RatMatrix::from_ints(&[[2, 0, 0], [0, 3, 0], [0, 0, 1]]);
    let map = PolyMap::linear(sol.clone(), sol, &a).unwrap();
    let r = map.tau_infinity().unwrap();
    let ok = a.rank() == 3
        && r.harmonic
        && r.constant_energy
        && r.energy.as_constant() == Some(int(14))
        && !map.is_isometry().unwrap();
    if !ok {
        problems.push(format!("diag(2,3,1): rank {}, energy {}", a.rank(), r.energy));
    }
    if problems.is_empty() {
        Ok("rank-2 harmonic grid matrices all non-constant; diag(2,3,1) rank 3, energy 14, not an isometry".into())
    } else {
        Err(problems.join("; "))
    }
}

fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-9..=9);
    }
    frac(n, rng.gen_range(1..=9))
}

fn criterion_9() -> Outcome {
    let sol = space(GeometryName::Sol);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let harmonic = |a: &RatMatrix| {
        PolyMap::linear(sol.clone(), sol.clone(), a)
            .unwrap()
            .tau_infinity()
            .unwrap()
            .harmonic
    };
    for _ in 0..100 {
        let a = RatMatrix::diag(&[nonzero_rational(&mut rng), nonzero_rational(&mut rng), int(1)]);
        let b = RatMatrix::diag(&[nonzero_rational(&mut rng), nonzero_rational(&mut rng), int(1)]);
        let ab = compose(&a, &b).map_err(|e| e.to_string())?;
        let inv = inverse(&a).map_err(|e| e.to_string())?;
        for m in [&ab, &inv] {
            if !subgroup_member(m) || !harmonic(m) {
                return Err(format!("{m} left the subgroup or is not harmonic"));
            }
        }
    }
    Ok("100 products and inverses stay members and harmonic".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut matrices = 0;
    for (d, t) in common::pairs() {
        let (ds, ts) = (space(d), space(t));
        let fams = families(d, t).unwrap();
        for k in 0..10 {
            let a = if k % 2 == 0 {
                let mut a = RatMatrix::zeros(ts.dim(), ds.dim());
                for i in 0..ts.dim() {
                    for j in 0..ds.dim() {
                        a.set(i, j, int(rng.gen_range(-3..=3)));
                    }
                }
                a
            } else {
                fams[rng.gen_range(0..fams.len())].sample(&mut rng)
            };
            let map = PolyMap::linear(ds.clone(), ts.clone(), &a).unwrap();
            let report = map.tau_infinity().unwrap();
            for _ in 0..10 {
                let p = random_point(&mut rng, ds.dim());
                let num = map.numeric_residual(&p, DEFAULT_STEP).unwrap();
                let sym = evaluate_all(&report.tau, &p);
                for (i, (n, s)) in num.iter().zip(&sym).enumerate() {
                    let scale = report.tau[i].magnitude(&p).unwrap();
                    let e = relative_error(*n, *s, scale);
                    worst = worst.max(e);
                    if e > 1e-6 {
                        return Err(format!("{d}->{t} A={a} at {p:?}: numeric {n}, exact {s}"));
                    }
                }
            }
            matrices += 1;
        }
    }
    Ok(format!("{matrices} matrices x 10 points, worst relative error {worst:.2e}"))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let v = vars(&["x", "y", "z"]);
    let uv = vars(&["u", "v"]);
    for case in 0..200 {
        let a = random_exppoly(&mut rng, &v, 4);
        let b = random_exppoly(&mut rng, &v, 4);
        let c = random_exppoly(&mut rng, &v, 4);
        let ring = (&(&a + &b) + &c) == (&a + &(&b + &c))
            && (&a * &b) == (&b * &a)
            && (&a + &b) == (&b + &a)
            && (&(&a * &b) * &c) == (&a * &(&b * &c))
            && (&a * &(&b + &c)) == (&(&a * &b) + &(&a * &c));
        if !ring {
            return Err(format!("ring axioms fail in case {case}"));
        }
        for k in 0..3 {
            let lhs = (&a * &b).derive(k).unwrap();
            let rhs = &(&a.derive(k).unwrap() * &b) + &(&a * &b.derive(k).unwrap());
            if lhs != rhs {
                return Err(format!("derivation rule fails in case {case}"));
            }
        }
        let assign: Vec<ExpPoly> = (0..3)
            .map(|_| ExpPoly::linear(&uv, &[frac(rng.gen_range(-2..=2), 1), frac(rng.gen_range(-2..=2), 2)]))
            .collect();
        let s = |e: &ExpPoly| e.substitute(&assign).unwrap();
        if s(&(&a * &b)) != &s(&a) * &s(&b) || s(&(&a + &b)) != &s(&a) + &s(&b) {
            return Err(format!("substitution homomorphism fails in case {case}"));
        }
        let text = a.render();
        let back = parse(&text, &v).map_err(|e| format!("case {case}: {text}: {e}"))?;
        if back != a || back.render() != text {
            return Err(format!("round trip fails for {text}"));
        }
    }
    Ok("ring axioms, derivation rule, substitution homomorphism, round trip: 200 cases each".into())
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {n}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
