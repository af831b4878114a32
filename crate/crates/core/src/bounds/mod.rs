//! The theoretical side: rank bounds, height floors, covering and
//! small-rank bounds, the conductor chain, the `f(x)` maximization, and
//! assembled per-curve reports.

mod registry;
mod report;

pub use registry::{
    min_bound, Constant, ConstantsRegistry, Provenance, CONDUCTOR_DIVISOR, HEIGHT_FACTOR,
    LARGE_RANK_FLOOR, LOG_RATIO, PRIMORIAL_FLOOR, REGISTRY_ENV,
};
pub use report::{theorem_bound, BoundOptions, BoundReport, Branch, ChainEntry, EntryKind};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::{self, FactoredInteger};
use crate::curve::{ShortCurve, SzpiroData};
use crate::error::{Error, Result};

/// `2ω + 2`.
pub fn rank_bound_from_omega(omega: usize) -> u64 {
    2 * omega as u64 + 2
}

/// `r ≤ 2ω(Δ) + 2` for a curve with a rational 2-torsion point; `delta` is
/// the factored discriminant of `e`.
pub fn rank_bound(e: &ShortCurve, delta: &FactoredInteger) -> Result<u64> {
    if !e.has_two_torsion() {
        return Err(Error::NoTwoTorsion);
    }
    Ok(rank_bound_from_omega(delta.omega()))
}

/// `c₃ log B / log log B`. The caller guarantees `B ≥ H(E)`.
pub fn rank_bound_from_b(b: f64, reg: &ConstantsRegistry) -> Result<f64> {
    if !(b >= min_bound()) {
        return Err(Error::BTooSmall(format!("B = {b} is below e^e")));
    }
    let l = b.ln();
    Ok(reg.c3() * l / l.ln())
}

/// Lower bound for the smallest nonzero canonical height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum PetscheMode {
    /// `log|𝒟| / (c₄σ⁶ log²(c₅σ))`
    Full,
    /// `log|𝒟| / (c₆σ⁸)`
    Simplified,
    /// `log|𝒟| / (c₁₆σ⁶)`
    RationalImproved,
    /// `log|𝒟| / lang`
    LangConjecture,
}

impl PetscheMode {
    pub const ALL: [PetscheMode; 4] = [
        PetscheMode::Full,
        PetscheMode::Simplified,
        PetscheMode::RationalImproved,
        PetscheMode::LangConjecture,
    ];
}

impl fmt::Display for PetscheMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PetscheMode::Full => "full",
            PetscheMode::Simplified => "simplified",
            PetscheMode::RationalImproved => "rationalImproved",
            PetscheMode::LangConjecture => "langConjecture",
        })
    }
}

impl FromStr for PetscheMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PetscheMode::ALL
            .into_iter()
            .find(|m| m.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown mode `{s}`")))
    }
}

/// The floor formula at explicit `log|𝒟|` and `σ ≥ 1`.
pub fn petsche_floor_at(ln_d: f64, sigma: f64, reg: &ConstantsRegistry, mode: PetscheMode) -> f64 {
    let sigma = sigma.max(1.0);
    let denom = match mode {
        PetscheMode::Full => reg.get("c4") * sigma.powi(6) * (reg.get("c5") * sigma).ln().powi(2),
        PetscheMode::Simplified => reg.c6() * sigma.powi(8),
        PetscheMode::RationalImproved => reg.get("c16") * sigma.powi(6),
        PetscheMode::LangConjecture => reg.get("lang"),
    };
    ln_d / denom
}

/// The floor with `log|𝒟| → log d_min` and `σ → σ_upper`; `None` when
/// `d_min = 1`.
pub fn petsche_floor(s: &SzpiroData, reg: &ConstantsRegistry, mode: PetscheMode) -> Option<f64> {
    if s.is_degenerate() {
        return None;
    }
    Some(petsche_floor_at(s.ln_d_min(), s.sigma_upper, reg, mode))
}

/// `log(|T| (1 + 2√(log B / λ))^r)`; `+∞` when `λ ≤ 0`.
pub fn log_covering_bound(log_b: f64, lambda: f64, r: u64, torsion_order: u64) -> f64 {
    let t = (torsion_order as f64).ln();
    if r == 0 {
        return t;
    }
    if !(lambda > 0.0) {
        return f64::INFINITY;
    }
    t + r as f64 * (1.0 + 2.0 * (log_b / lambda).sqrt()).ln()
}

/// `|T| (1 + 2√(log B / λ))^r`.
pub fn covering_bound(log_b: f64, lambda: f64, r: u64, torsion_order: u64) -> f64 {
    log_covering_bound(log_b, lambda, r, torsion_order).exp()
}

/// The three displayed small-rank expressions, as logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallRankBound {
    /// `log(c₇ (c₁₀ log B)^{4r})`
    pub log_e1: f64,
    /// `c₁₁ log log B`
    pub log_e2: f64,
    /// `c₁₁ log B / log log B`
    pub log_e3: f64,
}

impl SmallRankBound {
    pub fn log_value(&self) -> f64 {
        self.log_e1.min(self.log_e2).min(self.log_e3)
    }
}

pub fn small_rank_bound(log_b: f64, r: u64, reg: &ConstantsRegistry) -> Result<SmallRankBound> {
    let threshold = reg.small_rank_max();
    if r > threshold {
        return Err(Error::RankTooLarge { rank: r, threshold });
    }
    if !(log_b >= std::f64::consts::E) {
        return Err(Error::BTooSmall(format!("log B = {log_b} is below e")));
    }
    let ll = log_b.ln();
    Ok(SmallRankBound {
        log_e1: reg.get("c7").ln() + 4.0 * r as f64 * (reg.c10().ln() + ll),
        log_e2: reg.c11() * ll,
        log_e3: reg.c11() * log_b / ll,
    })
}

/// Conductor lower bounds for a rank bound `r ≥ 39`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConductorChain {
    pub rank: u64,
    /// `p_{⌈r/3⌉}#`
    #[serde(with = "crate::serde_big::biguint")]
    pub primorial_lb: BigUint,
    /// `r log r / 7`
    pub log_n_floor: f64,
    /// `σ ≤ sigma_cap_slope · log B`
    pub sigma_cap_slope: f64,
}

impl ConductorChain {
    /// `7 · 6 log B / (r log r)`: `log|𝒟| ≤ 6 log B` over `log 𝒩 ≥ r log r / 7`.
    pub fn sigma_cap(&self, log_b: f64) -> f64 {
        self.sigma_cap_slope * log_b
    }
}

pub fn conductor_chain(r: u64) -> Result<ConductorChain> {
    if r < LARGE_RANK_FLOOR {
        return Err(Error::RankTooSmall {
            rank: r,
            floor: LARGE_RANK_FLOOR,
        });
    }
    let rf = r as f64;
    Ok(ConductorChain {
        rank: r,
        primorial_lb: arith::primorial(r.div_ceil(3) as usize)?,
        log_n_floor: rf * rf.ln() / CONDUCTOR_DIVISOR,
        sigma_cap_slope: CONDUCTOR_DIVISOR / LOG_RATIO / (rf * rf.ln()),
    })
}

/// Maximization of `f(x) = exp(x(log A − log(x log x)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FMax {
    pub a: f64,
    /// Zero of `g = f'/f` (the unconstrained maximizer).
    pub x_star: f64,
    /// Maximizer over `[39, c₃A/log A]`.
    pub arg_max: f64,
    /// `log f(arg_max)`.
    pub log_f_star: f64,
    /// `2A / log A`.
    pub x_cap: f64,
    /// `2(1 + 1/log 39) A / log A`.
    pub log_f_cap: f64,
    pub cap_ok: bool,
}

/// `log f(x)`.
pub fn log_f(a: f64, x: f64) -> f64 {
    x * (a.ln() - (x * x.ln()).ln())
}

/// `g(x) = log A − log(x log x) − 1 − 1/log x`.
pub fn f_log_derivative(a: f64, x: f64) -> f64 {
    a.ln() - (x * x.ln()).ln() - 1.0 - 1.0 / x.ln()
}

/// `[39, c₃A/log A]`.
pub fn f_domain(a: f64, reg: &ConstantsRegistry) -> Result<(f64, f64)> {
    let lo = LARGE_RANK_FLOOR as f64;
    let hi = reg.c3() * a / a.ln();
    if !(a > 1.0) || !(hi >= lo) {
        return Err(Error::EmptyDomain(format!("[{lo}, {hi}] for A = {a}")));
    }
    Ok((lo, hi))
}

pub fn f_max(a: f64, reg: &ConstantsRegistry) -> Result<FMax> {
    let (lo, hi) = f_domain(a, reg)?;
    // g is decreasing past log x = (√5 − 1)/2
    let g_peak = ((5f64.sqrt() - 1.0) / 2.0).exp();
    let x_star = if f_log_derivative(a, g_peak) <= 0.0 {
        g_peak
    } else {
        let (mut l, mut r) = (g_peak, a.max(3.0));
        while f_log_derivative(a, r) > 0.0 {
            r *= 2.0;
        }
        for _ in 0..200 {
            let m = 0.5 * (l + r);
            if f_log_derivative(a, m) > 0.0 {
                l = m;
            } else {
                r = m;
            }
        }
        0.5 * (l + r)
    };
    let arg_max = x_star.clamp(lo, hi);
    let log_f_star = log_f(a, arg_max);
    let x_cap = 2.0 * a / a.ln();
    let log_f_cap = 2.0 * (1.0 + 1.0 / (LARGE_RANK_FLOOR as f64).ln()) * a / a.ln();
    Ok(FMax {
        a,
        x_star,
        arg_max,
        log_f_star,
        x_cap,
        log_f_cap,
        cap_ok: x_star <= x_cap && log_f_star <= log_f_cap,
    })
}

/// `samples` evenly spaced `(x, log f(x))` over the domain, endpoints included.
pub fn f_samples(a: f64, samples: usize, reg: &ConstantsRegistry) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = f_domain(a, reg)?;
    Ok(match samples {
        0 => Vec::new(),
        1 => vec![(lo, log_f(a, lo))],
        n => (0..n)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                (x, log_f(a, x))
            })
            .collect(),
    })
}
