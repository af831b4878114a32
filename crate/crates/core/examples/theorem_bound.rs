//! The full bound chain next to the empirical count, with the exponent `C`
//! in `N(B) ≤ B^{C / log log B}` for each curve.

use ecbound::bounds::{theorem_bound, BoundOptions, ConstantsRegistry, PetscheMode};

fn main() -> ecbound::Result<()> {
    let reg = ConstantsRegistry::from_env()?;
    let opts = BoundOptions {
        mode: PetscheMode::Full,
        empirical: true,
    };
    println!(
        "{:>10} {:>5} {:>3} {:>14} {:>8} {:>10} chain",
        "curve", "r̄", "|T|", "branch", "N(B)", "C"
    );
    for spec in ["-1,0", "-4,0", "0,1", "-25,0", "-36,0", "-2,0", "-17,16"] {
        let r = theorem_bound(&spec.parse()?, 1e3, &reg, &opts)?;
        println!(
            "{:>10} {:>5} {:>3} {:>14} {:>8} {:>10} {}",
            spec,
            r.rank_bound,
            r.torsion_order,
            format!("{:?}", r.branch),
            r.empirical_count.map_or("-".into(), |n| n.to_string()),
            r.exponent_c.map_or("inf".into(), |c| format!("{c:.2}")),
            if r.all_hold() { "holds" } else { "FAILS" }
        );
    }
    Ok(())
}
