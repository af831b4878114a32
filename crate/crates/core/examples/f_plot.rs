//! The maximization of `f(x) = exp(x(log A − log(x log x)))` and its caps,
//! printed as CSV for plotting.

use ecbound::bounds::{f_max, ConstantsRegistry};
use ecbound::cli::{emit_plot_data, Format};

fn main() -> ecbound::Result<()> {
    let reg = ConstantsRegistry::default();
    for a in [50.0, 1e2, 1e3, 1e6] {
        let m = f_max(a, &reg)?;
        println!(
            "A = {a}: x* = {:.3} (cap {:.3}), log f* = {:.3} (cap {:.3}), ok = {}",
            m.x_star, m.x_cap, m.log_f_star, m.log_f_cap, m.cap_ok
        );
    }
    print!("{}", emit_plot_data(1e3, 20, &reg, Format::Csv)?);
    Ok(())
}
