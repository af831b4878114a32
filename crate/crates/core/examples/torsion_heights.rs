//! Torsion subgroups, canonical heights and the height pairing.

use ecbound::curve::ShortCurve;
use ecbound::points::{canonical_height, gram_matrix, naive_height, HeightConfig, RationalPoint};

fn main() -> ecbound::Result<()> {
    for (a, b) in [(-1, 0), (4, 0), (0, 1), (-43, 166), (0, 17)] {
        let e = ShortCurve::from_ints(a, b)?;
        let t = e.torsion_subgroup()?;
        println!("y² = x³ + {a}x + {b}: torsion order {}", t.len());
    }

    let e = ShortCurve::from_ints(0, 17)?;
    let cfg = HeightConfig::default();
    let tol = 1e-8;
    let gens = [
        RationalPoint::from_ints(-2, 3),
        RationalPoint::from_ints(-1, 4),
    ];
    for p in &gens {
        let h = canonical_height(p, &e, tol, &cfg)?;
        println!(
            "{p}: h = {:.6}, ĥ = {:.10} ± {:.1e}",
            naive_height(p),
            h.value,
            h.error_bound
        );
    }
    let g = gram_matrix(&gens, &e, tol, &cfg)?;
    println!(
        "Gram matrix {:?}, positive definite: {}",
        g.entries,
        g.is_certainly_positive_definite()
    );
    Ok(())
}
