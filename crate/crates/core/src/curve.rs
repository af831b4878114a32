//! Weierstrass models: general rational models `y² = x³ + ax² + bx + c`,
//! short integral models `y² = x³ + Ax + B`, the translation-dilation map
//! between them, quasi-minimal reduction and Szpiro-ratio surrogates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, ln_biguint};
use crate::error::{Error, Result};
use crate::points::RationalPoint;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Projective Weil height of a rational vector: clear denominators to a
/// coprime integer vector and take the largest absolute entry.
pub fn weil_height(v: &[BigRational]) -> BigInt {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if g.is_zero() {
        return BigInt::zero();
    }
    ints.iter()
        .map(|n| (n / &g).abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// `y² = x³ + ax² + bx + c` over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralCurve {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    discriminant: BigRational,
    height: BigInt,
}

impl GeneralCurve {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Result<Self> {
        // 16 × disc(x³ + ax² + bx + c)
        let disc = &a * &a * &b * &b
            - rat(4) * &b * &b * &b
            - rat(4) * &a * &a * &a * &c
            - rat(27) * &c * &c
            + rat(18) * &a * &b * &c;
        let discriminant = rat(16) * disc;
        if discriminant.is_zero() {
            return Err(Error::SingularCurve);
        }
        let height = weil_height(&[BigRational::one(), a.clone(), b.clone(), c.clone()]);
        Ok(Self {
            a,
            b,
            c,
            discriminant,
            height,
        })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(rat(a), rat(b), rat(c))
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }
    pub fn b(&self) -> &BigRational {
        &self.b
    }
    pub fn c(&self) -> &BigRational {
        &self.c
    }
    pub fn discriminant(&self) -> &BigRational {
        &self.discriminant
    }
    /// `H(E)`, the Weil height of `(1, a, b, c)`.
    pub fn height(&self) -> &BigInt {
        &self.height
    }
    pub fn log_height(&self) -> f64 {
        arith::ln_bigint(&self.height)
    }

    pub fn rhs(&self, x: &BigRational) -> BigRational {
        ((x + &self.a) * x + &self.b) * x + &self.c
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        match p {
            RationalPoint::Infinity => true,
            RationalPoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }
}

/// `y² = x³ + Ax + B` with `A, B ∈ ℤ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortCurve {
    a: BigInt,
    b: BigInt,
    discriminant: BigInt,
    height: BigInt,
    quasi_minimal: bool,
}

impl ShortCurve {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        let discriminant =
            BigInt::from(-16) * (BigInt::from(4) * &a * &a * &a + BigInt::from(27) * &b * &b);
        if discriminant.is_zero() {
            return Err(Error::SingularCurve);
        }
        let height = BigInt::one().max(a.abs()).max(b.abs());
        Ok(Self {
            a,
            b,
            discriminant,
            height,
            quasi_minimal: false,
        })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(BigInt::from(a), BigInt::from(b))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    /// `Δ = −16(4A³ + 27B²)`.
    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }
    /// `H(E)`, the Weil height of `(1, 0, A, B)`.
    pub fn height(&self) -> &BigInt {
        &self.height
    }
    pub fn log_height(&self) -> f64 {
        arith::ln_bigint(&self.height)
    }
    /// True when produced (or certified) by [`quasi_minimize`].
    pub fn is_quasi_minimal(&self) -> bool {
        self.quasi_minimal
    }

    pub fn rhs(&self, x: &BigRational) -> BigRational {
        (x * x + BigRational::from_integer(self.a.clone())) * x
            + BigRational::from_integer(self.b.clone())
    }

    /// The same curve viewed as a general model with `a = 0`.
    pub fn as_general(&self) -> GeneralCurve {
        GeneralCurve::new(
            BigRational::zero(),
            BigRational::from_integer(self.a.clone()),
            BigRational::from_integer(self.b.clone()),
        )
        .expect("nonsingular by construction")
    }
}

impl fmt::Display for ShortCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl fmt::Display for GeneralCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

/// A curve as supplied by a user: either model form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputCurve {
    General(GeneralCurve),
    Short(ShortCurve),
}

impl InputCurve {
    /// `(Δ, H(E))` of the model as given.
    pub fn invariants(&self) -> (BigRational, BigInt) {
        match self {
            InputCurve::General(e) => (e.discriminant().clone(), e.height().clone()),
            InputCurve::Short(e) => (
                BigRational::from_integer(e.discriminant().clone()),
                e.height().clone(),
            ),
        }
    }

    pub fn log_height(&self) -> f64 {
        match self {
            InputCurve::General(e) => e.log_height(),
            InputCurve::Short(e) => e.log_height(),
        }
    }

    /// Map onto a short integral model (identity for short input).
    pub fn to_short_model(&self) -> Result<ModelMap> {
        match self {
            InputCurve::General(e) => to_short_model(e),
            InputCurve::Short(e) => Ok(ModelMap::identity(e)),
        }
    }
}

impl fmt::Display for InputCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputCurve::General(e) => e.fmt(f),
            InputCurve::Short(e) => e.fmt(f),
        }
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-2.5"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = BigInt::from(10).pow(frac.len() as u32);
        let q = BigRational::new(num, den);
        return Ok(if negative { -q } else { q });
    }
    let q: BigRational = s.parse().map_err(|_| bad())?;
    Ok(q)
}

impl FromStr for InputCurve {
    type Err = Error;

    /// `"a,b,c"` (three rationals) or `"A,B"` (two integers).
    fn from_str(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        match parts.as_slice() {
            [a, b] => {
                let a = parse_rational(a)?;
                let b = parse_rational(b)?;
                if !a.is_integer() || !b.is_integer() {
                    return Err(Error::Parse(
                        "short model coefficients A,B must be integers".into(),
                    ));
                }
                Ok(InputCurve::Short(ShortCurve::new(
                    a.to_integer(),
                    b.to_integer(),
                )?))
            }
            [a, b, c] => Ok(InputCurve::General(GeneralCurve::new(
                parse_rational(a)?,
                parse_rational(b)?,
                parse_rational(c)?,
            )?)),
            _ => Err(Error::Parse(format!(
                "expected \"a,b,c\" or \"A,B\", got {spec:?}"
            ))),
        }
    }
}

/// The translation-dilation isomorphism from a general model to a short
/// integral one: `X = u²(x − shift)`, `Y = u³y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelMap {
    source: GeneralCurve,
    target: ShortCurve,
    shift: BigRational,
    scale: BigInt,
}

impl ModelMap {
    pub fn identity(e: &ShortCurve) -> Self {
        Self {
            source: e.as_general(),
            target: e.clone(),
            shift: BigRational::zero(),
            scale: BigInt::one(),
        }
    }

    pub fn source(&self) -> &GeneralCurve {
        &self.source
    }
    pub fn target(&self) -> &ShortCurve {
        &self.target
    }
    /// `−a/3`; source `x` equals `X/u² + shift`.
    pub fn shift(&self) -> &BigRational {
        &self.shift
    }
    /// The dilation factor `u ≥ 1`.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn forward(&self, p: &RationalPoint) -> RationalPoint {
        match p {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine { x, y } => {
                let u = BigRational::from_integer(self.scale.clone());
                let u2 = &u * &u;
                RationalPoint::Affine {
                    x: &u2 * (x - &self.shift),
                    y: u2 * u * y,
                }
            }
        }
    }

    pub fn backward(&self, p: &RationalPoint) -> RationalPoint {
        match p {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine { x, y } => {
                let u = BigRational::from_integer(self.scale.clone());
                let u2 = &u * &u;
                RationalPoint::Affine {
                    x: x / &u2 + &self.shift,
                    y: y / (u2 * u),
                }
            }
        }
    }
}

/// Depresses the cubic and rescales by the least `u` making `A, B` integral.
pub fn to_short_model(e: &GeneralCurve) -> Result<ModelMap> {
    let (a, b, c) = (e.a(), e.b(), e.c());
    let shift = -a / rat(3);
    let p = b - a * a / rat(3);
    let q = rat(2) * a * a * a / rat(27) - a * b / rat(3) + c;

    // least u with u⁴p, u⁶q integral: per prime, ⌈v(den p)/4⌉ vs ⌈v(den q)/6⌉
    let den = p.denom().lcm(q.denom());
    let mut scale = BigInt::one();
    for (prime, _) in arith::factor(&den)?.factors() {
        let prime = BigInt::from(prime.clone());
        let e = big_valuation(p.denom(), &prime)
            .div_ceil(4)
            .max(big_valuation(q.denom(), &prime).div_ceil(6));
        scale *= prime.pow(e);
    }
    let u = BigRational::from_integer(scale.clone());
    let u2 = &u * &u;
    let u4 = &u2 * &u2;
    let big_a = (u4 * p).to_integer();
    let big_b = (u2.clone() * &u2 * &u2 * q).to_integer();
    let target = ShortCurve::new(big_a, big_b)?;
    Ok(ModelMap {
        source: e.clone(),
        target,
        shift,
        scale,
    })
}

fn big_valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn valuation_or_max(n: &BigInt, p: &BigInt) -> u32 {
    if n.is_zero() {
        u32::MAX
    } else {
        big_valuation(n, p)
    }
}

/// Removes `p⁴ | A, p⁶ | B` for every prime `p ≥ 5`. Returns the reduced
/// model and `u` with `Δ = u¹²·Δ'`.
pub fn quasi_minimize(e: &ShortCurve) -> Result<(ShortCurve, BigUint)> {
    let g = if e.a().is_zero() {
        e.b().abs()
    } else if e.b().is_zero() {
        e.a().abs()
    } else {
        e.a().gcd(e.b())
    };
    let mut u = BigInt::one();
    for (prime, _) in arith::factor(&g)?.factors() {
        if *prime < BigUint::from(5u8) {
            continue;
        }
        let p = BigInt::from(prime.clone());
        let k = (valuation_or_max(e.a(), &p) / 4).min(valuation_or_max(e.b(), &p) / 6);
        u *= p.pow(k);
    }
    let u2 = &u * &u;
    let u4 = &u2 * &u2;
    let u6 = &u4 * &u2;
    let mut reduced = ShortCurve::new(e.a() / u4, e.b() / u6)?;
    reduced.quasi_minimal = true;
    Ok((reduced, u.to_biguint().expect("positive")))
}

/// Two-sided surrogates for the minimal discriminant and conductor of a
/// quasi-minimal model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SzpiroData {
    /// Lower bound for `|𝒟|`: `|Δ|` with twelfth powers of 2 and 3 stripped.
    #[serde(with = "crate::serde_big::biguint")]
    pub d_min: BigUint,
    /// Upper bound for `|𝒟|`: `|Δ|` itself.
    #[serde(with = "crate::serde_big::biguint")]
    pub d_max: BigUint,
    /// Lower bound for the conductor: radical of `Δ` away from 2 and 3, at least 2.
    #[serde(with = "crate::serde_big::biguint")]
    pub n_lower: BigUint,
    /// `log d_max / log n_lower`, an upper bound for the Szpiro ratio.
    pub sigma_upper: f64,
}

impl SzpiroData {
    pub fn ln_d_min(&self) -> f64 {
        ln_biguint(&self.d_min)
    }
    pub fn ln_d_max(&self) -> f64 {
        ln_biguint(&self.d_max)
    }
    pub fn ln_n_lower(&self) -> f64 {
        ln_biguint(&self.n_lower)
    }
    /// The surrogate floor collapses when `d_min = 1`.
    pub fn is_degenerate(&self) -> bool {
        self.d_min.is_one()
    }
}

/// Brackets `|𝒟|` and lower-bounds `𝒩` from the factored discriminant.
pub fn szpiro_data(e: &ShortCurve) -> Result<SzpiroData> {
    let delta = arith::factor(e.discriminant())?;
    Ok(szpiro_from_factored(&delta))
}

pub(crate) fn szpiro_from_factored(delta: &arith::FactoredInteger) -> SzpiroData {
    let d_max = delta.value().magnitude().clone();
    let v2 = delta.valuation(2);
    let v3 = delta.valuation(3);
    let strip = BigUint::from(2u8).pow(12 * (v2 / 12)) * BigUint::from(3u8).pow(12 * (v3 / 12));
    let d_min = &d_max / strip;
    let two_three: BTreeSet<u64> = [2, 3].into_iter().collect();
    let n_lower = delta.radical(&two_three).max(BigUint::from(2u8));
    let sigma_upper = ln_biguint(&d_max) / ln_biguint(&n_lower);
    SzpiroData {
        d_min,
        d_max,
        n_lower,
        sigma_upper,
    }
}
