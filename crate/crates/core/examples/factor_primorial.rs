//! Factorization, ω, radicals and the primorial boundary `p_n# ≥ nⁿ`.

use std::collections::BTreeSet;

use ecbound::arith::{factor, nth_prime, primorial, radical};
use num_bigint::{BigInt, BigUint};

fn main() -> ecbound::Result<()> {
    for n in [
        64i64,
        -432,
        304_250_263_527_210,
        1_000_000_007 * 998_244_353,
    ] {
        let f = factor(&BigInt::from(n))?;
        let excluded: BTreeSet<u64> = [2, 3].into_iter().collect();
        println!(
            "{n}: factors {:?}, omega {}, radical away from 2 and 3 = {}",
            f.factors()
                .iter()
                .map(|(p, e)| format!("{p}^{e}"))
                .collect::<Vec<_>>(),
            f.omega(),
            radical(&f, &excluded)
        );
    }
    for n in [12u32, 13] {
        let p = primorial(n as usize)?;
        let power = BigUint::from(n).pow(n);
        println!(
            "p_{n}# = {p}, {n}^{n} = {power}, p_{n}# >= {n}^{n}: {}",
            p >= power
        );
    }
    println!("25th prime: {}", nth_prime(25)?);
    Ok(())
}
