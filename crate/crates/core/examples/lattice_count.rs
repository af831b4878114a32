//! Mordell–Weil lattice counting: pick independent points from an
//! enumeration, count the lattice ball, and compare with a direct filter.

use ecbound::count::{count_canonical, enumerate_points, select_independent};
use ecbound::curve::ShortCurve;
use ecbound::points::{canonical_height, HeightConfig};

fn main() -> ecbound::Result<()> {
    let e = ShortCurve::from_ints(0, 17)?;
    let cfg = HeightConfig::default();
    let tol = 1e-6;
    let inv = enumerate_points(&e, 200.0)?;
    let gens = select_independent(&inv.points, &e, tol, &cfg)?;
    let torsion = e.torsion_subgroup()?.len() as u64;
    let names: Vec<String> = gens.iter().map(ToString::to_string).collect();
    println!(
        "independent points: {}, torsion order {torsion}",
        names.join(", ")
    );
    for bound in [3.0, 20.0, 150.0] {
        let lattice = count_canonical(&e, &gens, bound, tol, &cfg, torsion)?;
        let mut direct = 0;
        for p in &inv.points {
            if canonical_height(p, &e, tol, &cfg)?.value <= f64::ln(bound) {
                direct += 1;
            }
        }
        println!(
            "B = {bound}: lattice count {lattice}, enumerated points with ĥ ≤ log B: {direct}"
        );
    }
    Ok(())
}
