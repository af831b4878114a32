//! General model to short integral model to quasi-minimal model, with the
//! Szpiro surrogates of the result.

use ecbound::curve::{quasi_minimize, szpiro_data, InputCurve};
use ecbound::points::RationalPoint;

fn main() -> ecbound::Result<()> {
    for spec in ["1,0,1", "1/2,-3,5/4", "-1,0", "-20736,0"] {
        let input: InputCurve = spec.parse()?;
        let map = input.to_short_model()?;
        let (qm, u) = quasi_minimize(map.target())?;
        let s = szpiro_data(&qm)?;
        println!(
            "{spec}: short {} (shift {}, scale {}), quasi-minimal {} (u = {u})",
            map.target(),
            map.shift(),
            map.scale(),
            qm
        );
        println!(
            "  Δ = {}, d_min = {}, n_lower = {}, σ_upper = {:.6}",
            qm.discriminant(),
            s.d_min,
            s.n_lower,
            s.sigma_upper
        );
    }
    // points move between models
    let input: InputCurve = "1,0,1".parse()?;
    let map = input.to_short_model()?;
    let p = RationalPoint::from_ints(0, 1);
    let q = map.forward(&p);
    println!(
        "(0, 1) on y² = x³ + x² + 1 maps to {q}, back to {}",
        map.backward(&q)
    );
    Ok(())
}
