//! Named constants with provenance, loadable from `key = value  # tag` files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Environment variable naming a registry file to load instead of defaults.
pub const REGISTRY_ENV: &str = "ECBOUND_REGISTRY";

/// Smallest rank handled by the large-rank branch.
pub const LARGE_RANK_FLOOR: u64 = 39;
/// `|Δ| ≤ 496·H(E)³` for short integral models.
pub const HEIGHT_FACTOR: f64 = 496.0;
/// `log B ≥ (1/6) log|Δ|` once `log B ≥ max{e, h(E)}`.
pub const LOG_RATIO: f64 = 1.0 / 6.0;
/// `p_n# ≥ nⁿ` from this `n` on.
pub const PRIMORIAL_FLOOR: u64 = 13;
/// `log 𝒩 ≥ r log r / 7`.
pub const CONDUCTOR_DIVISOR: f64 = 7.0;

/// `e^e`, the smallest admissible `B`.
pub fn min_bound() -> f64 {
    std::f64::consts::E.exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PaperStructural,
    ImplementerChosen,
    UserSupplied,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::PaperStructural => "paper-structural",
            Provenance::ImplementerChosen => "implementer-chosen",
            Provenance::UserSupplied => "user-supplied",
        })
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "paper-structural" => Ok(Provenance::PaperStructural),
            "implementer-chosen" => Ok(Provenance::ImplementerChosen),
            "user-supplied" => Ok(Provenance::UserSupplied),
            other => Err(Error::Registry(format!("unknown provenance tag `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constant {
    pub value: f64,
    pub provenance: Provenance,
    pub frozen: bool,
    pub note: String,
}

/// Immutable-after-load table of the constants used by the bound chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsRegistry {
    entries: BTreeMap<String, Constant>,
}

impl Default for ConstantsRegistry {
    fn default() -> Self {
        use Provenance::*;
        let c4 = 1e8_f64;
        let c5 = 1e5_f64;
        let rows: [(&str, f64, Provenance, bool, &str); 19] = [
            (
                "c0",
                12.0,
                ImplementerChosen,
                false,
                "B ≥ (e·H(E))^c0 for general models",
            ),
            (
                "c1",
                7.0,
                ImplementerChosen,
                false,
                "|ĥ − h| ≤ c1·h(E) + c1",
            ),
            (
                "c2",
                1.3841,
                ImplementerChosen,
                false,
                "ω(m) ≤ c2·log m / log log m",
            ),
            (
                "c4",
                c4,
                UserSupplied,
                false,
                "placeholder, replace from Petsche",
            ),
            (
                "c5",
                c5,
                UserSupplied,
                false,
                "placeholder, replace from Petsche",
            ),
            ("c7", 16.0, ImplementerChosen, false, "torsion order cap"),
            (
                "c9",
                38.0,
                ImplementerChosen,
                false,
                "largest rank bound sent to the small-rank branch",
            ),
            (
                "c16",
                c4 * c5.ln().powi(2),
                ImplementerChosen,
                false,
                "floor over ℚ with one real place",
            ),
            (
                "lang",
                c4 * c5 * c5,
                ImplementerChosen,
                false,
                "σ-free floor constant",
            ),
            (
                "tol",
                1e-3,
                ImplementerChosen,
                false,
                "canonical height tolerance",
            ),
            ("a1", 134861.0, PaperStructural, true, "documentation only"),
            ("a2", 104613.0, PaperStructural, true, "documentation only"),
            (
                "height_factor",
                HEIGHT_FACTOR,
                PaperStructural,
                true,
                "|Δ| ≤ 496·H(E)³",
            ),
            (
                "log_ratio",
                LOG_RATIO,
                PaperStructural,
                true,
                "log B ≥ log|Δ| / 6",
            ),
            (
                "large_rank_floor",
                LARGE_RANK_FLOOR as f64,
                PaperStructural,
                true,
                "large-rank branch needs r ≥ 39",
            ),
            (
                "primorial_floor",
                PRIMORIAL_FLOOR as f64,
                PaperStructural,
                true,
                "p_n# ≥ nⁿ for n ≥ 13",
            ),
            (
                "conductor_divisor",
                CONDUCTOR_DIVISOR,
                PaperStructural,
                true,
                "log 𝒩 ≥ r log r / 7",
            ),
            ("min_bound", min_bound(), PaperStructural, true, "B ≥ e^e"),
            (
                "exact_digits",
                crate::points::DEFAULT_EXACT_DIGITS as f64,
                ImplementerChosen,
                false,
                "digits doubled exactly per height",
            ),
        ];
        let entries = rows
            .into_iter()
            .map(|(k, value, provenance, frozen, note)| {
                (
                    k.to_string(),
                    Constant {
                        value,
                        provenance,
                        frozen,
                        note: note.to_string(),
                    },
                )
            })
            .collect();
        Self { entries }
    }
}

impl ConstantsRegistry {
    /// Defaults, or the file named by [`REGISTRY_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(REGISTRY_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Ok(Self::default()),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Overrides defaults from `key = value  # provenance` lines. Entries
    /// without a tag are marked user-supplied.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let (body, tag) = match raw.split_once('#') {
                Some((body, tag)) => (body.trim(), Some(tag.trim())),
                None => (raw.trim(), None),
            };
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| {
                Error::Registry(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::Registry(format!(
                    "line {}: bad number `{}`",
                    lineno + 1,
                    value.trim()
                ))
            })?;
            let provenance = match tag {
                Some(t) if !t.is_empty() => t.parse()?,
                _ => Provenance::UserSupplied,
            };
            reg.set_with(key.trim(), value, provenance)?;
        }
        reg.validate()?;
        Ok(reg)
    }

    /// Sets a non-frozen constant, marking it user-supplied.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        self.set_with(key, value, Provenance::UserSupplied)?;
        self.validate()
    }

    fn set_with(&mut self, key: &str, value: f64, provenance: Provenance) -> Result<()> {
        let entry = self
            .entries
            .get_mut(key)
            .ok_or_else(|| Error::Registry(format!("unknown constant `{key}`")))?;
        if entry.frozen {
            if value != entry.value {
                return Err(Error::Registry(format!(
                    "`{key}` is frozen at {}",
                    entry.value
                )));
            }
            return Ok(());
        }
        entry.value = value;
        entry.provenance = provenance;
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        for (k, c) in &self.entries {
            if !c.value.is_finite() || c.value < 0.0 {
                return Err(Error::Registry(format!(
                    "`{k}` must be finite and nonnegative"
                )));
            }
        }
        for k in ["c4", "c5"] {
            if self.get(k) <= 1.0 {
                return Err(Error::Registry(format!("`{k}` must exceed 1")));
            }
        }
        for k in ["c0", "c1", "c2", "c7", "c16", "lang", "tol"] {
            if self.get(k) <= 0.0 {
                return Err(Error::Registry(format!("`{k}` must be positive")));
            }
        }
        if self.get("c9") < (LARGE_RANK_FLOOR - 1) as f64 || self.get("c9").fract() != 0.0 {
            return Err(Error::Registry(format!(
                "`c9` must be an integer ≥ {} so the two rank branches meet",
                LARGE_RANK_FLOOR - 1
            )));
        }
        Ok(())
    }

    /// Value of a known constant.
    ///
    /// # Panics
    /// On an unknown key.
    pub fn get(&self, key: &str) -> f64 {
        self.entries[key].value
    }

    pub fn entry(&self, key: &str) -> Option<&Constant> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Constant)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn tol(&self) -> f64 {
        self.get("tol")
    }

    pub fn small_rank_max(&self) -> u64 {
        self.get("c9") as u64
    }

    pub fn height_config(&self) -> crate::points::HeightConfig {
        crate::points::HeightConfig {
            c1: self.get("c1"),
            exact_digits: self.get("exact_digits") as u64,
        }
    }

    /// `c₃ = 12c₂ + 2/e`, so that `2ω(Δ) + 2 ≤ c₃ log B / log log B`.
    pub fn c3(&self) -> f64 {
        12.0 * self.get("c2") + 2.0 / std::f64::consts::E
    }

    /// `c₆ = c₄c₅²`.
    pub fn c6(&self) -> f64 {
        self.get("c4") * self.get("c5").powi(2)
    }

    /// `c₁₀⁴ = 1 + 2√c₆ · 6^{7/2} / (log 2)⁴`.
    pub fn c10(&self) -> f64 {
        (1.0 + 2.0 * self.c6().sqrt() * 6f64.powf(3.5) / std::f64::consts::LN_2.powi(4)).powf(0.25)
    }

    /// `c₁₁ = 4c₉ + log c₇ + 4c₉ log c₁₀`.
    pub fn c11(&self) -> f64 {
        let c9 = self.get("c9");
        4.0 * c9 + self.get("c7").ln() + 4.0 * c9 * self.c10().ln()
    }

    /// Constants computed from the stored ones.
    pub fn derived(&self) -> Vec<(&'static str, f64, &'static str)> {
        vec![
            ("c3", self.c3(), "12·c2 + 2/e"),
            ("c6", self.c6(), "c4·c5²"),
            ("c10", self.c10(), "(1 + 2√c6·6^3.5/log⁴2)^(1/4)"),
            ("c11", self.c11(), "4·c9 + log c7 + 4·c9·log c10"),
        ]
    }

    /// The registry in its file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (k, c) in &self.entries {
            out.push_str(&format!("{k} = {}  # {}\n", c.value, c.provenance));
        }
        out
    }
}
