//! Exhaustive `N(B)` on a few curves for a range of height bounds.

use ecbound::count::enumerate_points;
use ecbound::curve::ShortCurve;

fn main() -> ecbound::Result<()> {
    for (a, b) in [(-1, 0), (0, 17), (-2, 1), (-7, 6)] {
        let e = ShortCurve::from_ints(a, b)?;
        let counts: Vec<String> = [10.0, 100.0, 1_000.0, 10_000.0]
            .iter()
            .map(|&bound| {
                enumerate_points(&e, bound).map(|inv| format!("N({bound}) = {}", inv.count()))
            })
            .collect::<Result<_, _>>()?;
        println!("y² = x³ + {a}x + {b}: {}", counts.join(", "));
    }
    let inv = enumerate_points(&ShortCurve::from_ints(0, 17)?, 30.0)?;
    println!("{}", serde_json::to_string_pretty(&inv.to_json(None))?);
    Ok(())
}
