//! The Mordell–Weil group of a short integral model: chord-tangent
//! arithmetic, torsion, naive and canonical heights, and the height pairing.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, ln_bigint};
use crate::curve::ShortCurve;
use crate::error::{Error, Result};

/// Orders a rational torsion point can have over ℚ.
pub const MAX_TORSION_ORDER: u32 = 12;

/// Group orders allowed for the torsion subgroup of a curve over ℚ.
pub const MAZUR_ORDERS: [usize; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12];

/// Coordinate budget for exact doubling, in decimal digits.
pub const DEFAULT_DIGIT_BUDGET: u64 = 1_000_000;

/// Digits carried exactly before [`canonical_height`] switches to
/// floating-point tracking of the real place.
pub const DEFAULT_EXACT_DIGITS: u64 = 4_000;

/// Affine point with exact rational coordinates, or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RationalPoint {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RationalPoint::Affine { x, y } => write!(f, "({x}, {y})"),
            RationalPoint::Infinity => f.write_str("O"),
        }
    }
}

impl RationalPoint {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        RationalPoint::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::affine(
            BigRational::from_integer(x.into()),
            BigRational::from_integer(y.into()),
        )
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RationalPoint::Infinity)
    }

    pub fn x(&self) -> Option<&BigRational> {
        match self {
            RationalPoint::Affine { x, .. } => Some(x),
            RationalPoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&BigRational> {
        match self {
            RationalPoint::Affine { y, .. } => Some(y),
            RationalPoint::Infinity => None,
        }
    }

    fn is_integral(&self) -> bool {
        match self {
            RationalPoint::Affine { x, y } => x.is_integer() && y.is_integer(),
            RationalPoint::Infinity => true,
        }
    }
}

/// `h(P) = log max(|num x|, |den x|)`; zero at infinity.
pub fn naive_height(p: &RationalPoint) -> f64 {
    match p {
        RationalPoint::Infinity => 0.0,
        RationalPoint::Affine { x, .. } => ln_bigint(&x.numer().abs().max(x.denom().clone())),
    }
}

/// `H(P)` as an exact integer (1 at infinity).
pub fn naive_height_exact(p: &RationalPoint) -> BigInt {
    match p {
        RationalPoint::Infinity => BigInt::one(),
        RationalPoint::Affine { x, .. } => x.numer().abs().max(x.denom().clone()),
    }
}

impl ShortCurve {
    pub fn contains(&self, p: &RationalPoint) -> bool {
        match p {
            RationalPoint::Infinity => true,
            RationalPoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    fn check(&self, p: &RationalPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointNotOnCurve)
        }
    }

    pub fn negate(&self, p: &RationalPoint) -> RationalPoint {
        match p {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine { x, y } => RationalPoint::affine(x.clone(), -y),
        }
    }

    /// Chord-tangent addition.
    pub fn add(&self, p: &RationalPoint, q: &RationalPoint) -> Result<RationalPoint> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub fn double(&self, p: &RationalPoint) -> Result<RationalPoint> {
        self.add(p, p)
    }

    /// `n·P` by double-and-add; negative `n` negates.
    pub fn multiply(&self, n: i64, p: &RationalPoint) -> Result<RationalPoint> {
        self.check(p)?;
        Ok(self.multiply_unchecked(n, p))
    }

    pub(crate) fn add_unchecked(&self, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (RationalPoint::Infinity, _) => return q.clone(),
            (_, RationalPoint::Infinity) => return p.clone(),
            (RationalPoint::Affine { x: x1, y: y1 }, RationalPoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return RationalPoint::Infinity;
            }
            let three = BigRational::from_integer(3.into());
            let two = BigRational::from_integer(2.into());
            (three * x1 * x1 + BigRational::from_integer(self.a().clone())) / (two * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &slope * &slope - x1 - x2;
        let y3 = slope * (x1 - &x3) - y1;
        RationalPoint::affine(x3, y3)
    }

    pub(crate) fn multiply_unchecked(&self, n: i64, p: &RationalPoint) -> RationalPoint {
        let base = if n < 0 { self.negate(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = RationalPoint::Infinity;
        let mut power = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &power);
            }
            k >>= 1;
            if k > 0 {
                power = self.add_unchecked(&power, &power);
            }
        }
        acc
    }

    /// Order of `P` if it is torsion. Torsion points of an integral model
    /// are integral, so any non-integral multiple proves infinite order.
    pub fn point_order(&self, p: &RationalPoint) -> Result<Option<u32>> {
        self.check(p)?;
        let mut q = p.clone();
        for k in 1..=MAX_TORSION_ORDER {
            if q.is_infinity() {
                return Ok(Some(k));
            }
            if !q.is_integral() {
                return Ok(None);
            }
            q = self.add_unchecked(&q, p);
        }
        Ok(None)
    }

    pub fn is_torsion(&self, p: &RationalPoint) -> Result<bool> {
        Ok(self.point_order(p)?.is_some())
    }

    /// The affine points `(θ, 0)` with `θ` a rational root of `x³ + Ax + B`.
    pub fn two_torsion_points(&self) -> Vec<RationalPoint> {
        integer_cubic_roots(self.a(), self.b())
            .into_iter()
            .map(|x| RationalPoint::affine(BigRational::from_integer(x), BigRational::zero()))
            .collect()
    }

    pub fn has_two_torsion(&self) -> bool {
        !self.two_torsion_points().is_empty()
    }

    /// All rational torsion points, infinity first, by the Lutz–Nagell
    /// screen: integral points with `y = 0` or `y² | Δ`.
    pub fn torsion_subgroup(&self) -> Result<Vec<RationalPoint>> {
        let mut points = vec![RationalPoint::Infinity];
        points.extend(self.two_torsion_points());

        let delta = arith::factor(self.discriminant())?;
        let mut ys = vec![BigInt::one()];
        for (p, e) in delta.factors() {
            let p = BigInt::from(p.clone());
            let current = ys.clone();
            let mut power = BigInt::one();
            for _ in 0..e / 2 {
                power *= &p;
                ys.extend(current.iter().map(|y| y * &power));
            }
        }
        for y in ys {
            let constant = self.b() - &y * &y;
            for x in integer_cubic_roots(self.a(), &constant) {
                for y in [y.clone(), -y.clone()] {
                    let p = RationalPoint::affine(
                        BigRational::from_integer(x.clone()),
                        BigRational::from_integer(y),
                    );
                    if self.point_order(&p)?.is_some() {
                        points.push(p);
                    }
                }
            }
        }
        points.sort();
        points.dedup();
        assert!(
            MAZUR_ORDERS.contains(&points.len()),
            "torsion of order {} contradicts Mazur's classification",
            points.len()
        );
        Ok(points)
    }
}

/// Integer roots of the monic cubic `x³ + ax + c`, ascending.
pub fn integer_cubic_roots(a: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let f = |x: &BigInt| x * x * x + a * x + c;
    // Cauchy bound on real roots
    let bound = BigInt::one() + a.abs().max(c.abs());
    let mut roots = Vec::new();
    let mut push = |r: Option<BigInt>| {
        if let Some(r) = r {
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
    };
    if a.is_negative() {
        // f' vanishes at ±√(−a/3); s ≤ √(−a/3) < s + 1
        let s = (-a / BigInt::from(3)).sqrt();
        let s1 = &s + 1;
        push(monotone_root(&f, &-&bound, &-&s1, true));
        push(monotone_root(&f, &-&s, &s, false));
        push(monotone_root(&f, &s1, &bound, true));
    } else {
        push(monotone_root(&f, &-&bound, &bound, true));
    }
    roots.sort();
    roots
}

/// Integer zero of `f` on `[lo, hi]` where `f` is monotone in the given
/// direction; bisection in exact arithmetic.
fn monotone_root<F: Fn(&BigInt) -> BigInt>(
    f: &F,
    lo: &BigInt,
    hi: &BigInt,
    increasing: bool,
) -> Option<BigInt> {
    if lo > hi {
        return None;
    }
    // normalize to an increasing function g
    let g = |x: &BigInt| if increasing { f(x) } else { -f(x) };
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    if g(&lo).is_positive() || g(&hi).is_negative() {
        return None;
    }
    while lo < hi {
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        if g(&mid).is_negative() {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    g(&lo).is_zero().then_some(lo)
}

/// A real number with a guaranteed error radius.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HeightValue {
    pub value: f64,
    pub error_bound: f64,
}

impl HeightValue {
    pub const ZERO: HeightValue = HeightValue {
        value: 0.0,
        error_bound: 0.0,
    };

    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }
}

/// Knobs for [`canonical_height`]: the Weil-versus-canonical comparison
/// constant `c₁` and the coordinate digit budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightConfig {
    pub c1: f64,
    pub exact_digits: u64,
}

impl Default for HeightConfig {
    fn default() -> Self {
        Self {
            c1: 7.0,
            exact_digits: DEFAULT_EXACT_DIGITS,
        }
    }
}

impl HeightConfig {
    /// `c₁·h(E) + c₁`, the bound on `|ĥ − h|`.
    pub fn comparison_bound(&self, e: &ShortCurve) -> f64 {
        self.c1 * e.log_height() + self.c1
    }

    /// Smallest `n` with `4⁻ⁿ (c₁h(E) + c₁) ≤ tol`.
    pub fn doublings_for(&self, e: &ShortCurve, tol: f64) -> u32 {
        let c = self.comparison_bound(e);
        let mut n = 0;
        while c / 4f64.powi(n as i32) > tol {
            n += 1;
        }
        n
    }
}

/// x-coordinate of `2ⁿP` as a reduced fraction `X/Z`, `Z > 0`, by
/// projective x-only doubling.
///
/// For coprime `(X, Z)` the common factor of the doubled pair divides the
/// resultant `2⁸(4A³ + 27B²)²` of the duplication forms, so it is found
/// from residues instead of a full gcd of the growing coordinates.
struct XOnlyDoubler<'a> {
    a: &'a BigInt,
    b: &'a BigInt,
    resultant: BigInt,
}

impl<'a> XOnlyDoubler<'a> {
    fn new(e: &'a ShortCurve) -> Self {
        let d = BigInt::from(4) * e.a() * e.a() * e.a() + BigInt::from(27) * e.b() * e.b();
        Self {
            a: e.a(),
            b: e.b(),
            resultant: BigInt::from(256) * &d * &d,
        }
    }

    fn double_unreduced(&self, x: &BigInt, z: &BigInt) -> (BigInt, BigInt) {
        let x2 = x * x;
        let z2 = z * z;
        let xz = x * z;
        let t = &x2 - self.a * &z2;
        let z4 = &z2 * &z2;
        let xn = &t * &t - BigInt::from(8) * self.b * &xz * &z2;
        let zn = BigInt::from(4) * (&xz * (&x2 + self.a * &z2) + self.b * z4);
        (xn, zn)
    }

    /// `gcd(X', Z')` for coprime inputs, read off residues modulo the resultant.
    fn common_factor(&self, xn: &BigInt, zn: &BigInt) -> BigInt {
        self.resultant
            .gcd(&xn.mod_floor(&self.resultant))
            .gcd(&zn.mod_floor(&self.resultant))
    }

    fn double(&self, x: &BigInt, z: &BigInt) -> (BigInt, BigInt) {
        let (mut xn, mut zn) = self.double_unreduced(x, z);
        let g = self.common_factor(&xn, &zn);
        if !g.is_one() {
            xn /= &g;
            zn /= &g;
        }
        if zn.sign() == Sign::Minus {
            xn = -xn;
            zn = -zn;
        }
        (xn, zn)
    }
}

/// `ĥ(P) = lim 4⁻ⁿ h(2ⁿP)`, truncated at the first `n` whose tail bound
/// `4⁻ⁿ(c₁h(E) + c₁)` is within `tol`. Torsion points return exactly 0.
pub fn canonical_height(
    p: &RationalPoint,
    e: &ShortCurve,
    tol: f64,
    cfg: &HeightConfig,
) -> Result<HeightValue> {
    if e.is_torsion(p)? {
        return Ok(HeightValue::ZERO);
    }
    let steps = cfg.doublings_for(e, tol);
    let (value, rounding) = telescoped_height(p, e, steps, cfg.exact_digits)?;
    Ok(HeightValue {
        value,
        error_bound: cfg.comparison_bound(e) / 4f64.powi(steps as i32) + rounding,
    })
}

/// `a / b` as a float for `|a| ≤ |b|`, from the leading bits.
fn leading_ratio(a: &BigInt, b: &BigInt) -> f64 {
    let shift = b.bits().saturating_sub(64);
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap_or(0.0) / b.to_f64().unwrap_or(1.0)
}

/// The same quantity as [`height_after_doublings`], written as the
/// telescoping sum
///
/// `4⁻ⁿ h(2ⁿP) = 4⁻ᵏ h(2ᵏP) + Σ_{k ≤ j < n} 4⁻⁽ʲ⁺¹⁾ (log max(|F|, |G|)(u_j, v_j) − log g_j)`
///
/// where `(u_j : v_j)` is `x(2ʲP)` scaled into the unit square and `g_j` is the
/// cancelled common factor. Exact doubling runs while coordinates stay under
/// `exact_digits`; afterwards `(u, v)` is tracked in floating point and `g_j`
/// exactly, from residues modulo a power of the resultant. Returns the value
/// and an allowance for the floating-point tail.
pub fn telescoped_height(
    p: &RationalPoint,
    e: &ShortCurve,
    steps: u32,
    exact_digits: u64,
) -> Result<(f64, f64)> {
    let x = p.x().ok_or(Error::EffortExceeded(
        "point at infinity has no doubling sequence".into(),
    ))?;
    let doubler = XOnlyDoubler::new(e);
    let (mut xn, mut zn) = (x.numer().clone(), x.denom().clone());
    let bit_limit = (exact_digits as f64 * std::f64::consts::LOG2_10) as u64;
    let mut done = 0;
    while done < steps && xn.bits().max(zn.bits()).saturating_mul(4) <= bit_limit {
        let (x2, z2) = doubler.double(&xn, &zn);
        if z2.is_zero() {
            return Err(Error::EffortExceeded(
                "doubling reached infinity on a non-torsion point".into(),
            ));
        }
        xn = x2;
        zn = z2;
        done += 1;
    }
    let top = xn.abs().max(zn.clone());
    let mut acc = ln_bigint(&top) / 4f64.powi(done as i32);
    if done == steps {
        return Ok((acc, 0.0));
    }
    let (mut u, mut v) = (leading_ratio(&xn, &top), leading_ratio(&zn, &top));
    let mut modulus = doubler.resultant.abs().pow(steps - done + 1);
    let (mut xm, mut zm) = (xn.mod_floor(&modulus), zn.mod_floor(&modulus));
    let a = e.a().to_f64().unwrap_or(f64::INFINITY);
    let b = e.b().to_f64().unwrap_or(f64::INFINITY);
    for j in done..steps {
        let t = u * u - a * v * v;
        let f = t * t - 8.0 * b * u * v * v * v;
        let g = 4.0 * v * (u * u * u + a * u * v * v + b * v * v * v);
        let m = f.abs().max(g.abs());
        let (x2, z2) = doubler.double_unreduced(&xm, &zm);
        let common = doubler.common_factor(&x2, &z2);
        modulus /= &common;
        xm = x2.mod_floor(&(&modulus * &common)) / &common;
        zm = z2.mod_floor(&(&modulus * &common)) / &common;
        acc += (m.ln() - ln_bigint(&common)) / 4f64.powi(j as i32 + 1);
        u = f / m;
        v = g / m;
    }
    Ok((acc, 1e-9 / 4f64.powi(done as i32)))
}

/// `4⁻ⁿ h(2ⁿP)` for a non-torsion point; fails if coordinates would exceed
/// `digit_budget` decimal digits.
pub fn height_after_doublings(
    p: &RationalPoint,
    e: &ShortCurve,
    steps: u32,
    digit_budget: u64,
) -> Result<f64> {
    let x = p.x().ok_or(Error::EffortExceeded(
        "point at infinity has no doubling sequence".into(),
    ))?;
    let doubler = XOnlyDoubler::new(e);
    let (mut xn, mut zn) = (x.numer().clone(), x.denom().clone());
    let bit_budget = (digit_budget as f64 * std::f64::consts::LOG2_10) as u64;
    for step in 0..steps {
        let bits = xn.bits().max(zn.bits());
        if bits.saturating_mul(4) > bit_budget {
            return Err(Error::EffortExceeded(format!(
                "doubling {} of {steps} would exceed {digit_budget} digits",
                step + 1
            )));
        }
        let (x2, z2) = doubler.double(&xn, &zn);
        if z2.is_zero() {
            return Err(Error::EffortExceeded(
                "doubling reached infinity on a non-torsion point".into(),
            ));
        }
        xn = x2;
        zn = z2;
    }
    Ok(ln_bigint(&xn.abs().max(zn)) / 4f64.powi(steps as i32))
}

/// `⟨P, Q⟩ = (ĥ(P + Q) − ĥ(P) − ĥ(Q)) / 2`.
pub fn height_pairing(
    p: &RationalPoint,
    q: &RationalPoint,
    e: &ShortCurve,
    tol: f64,
    cfg: &HeightConfig,
) -> Result<HeightValue> {
    let sum = e.add(p, q)?;
    let hs = canonical_height(&sum, e, tol, cfg)?;
    let hp = canonical_height(p, e, tol, cfg)?;
    let hq = canonical_height(q, e, tol, cfg)?;
    Ok(HeightValue {
        value: (hs.value - hp.value - hq.value) / 2.0,
        error_bound: (hs.error_bound + hp.error_bound + hq.error_bound) / 2.0,
    })
}

/// Symmetric matrix of height pairings with a uniform per-entry error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: Vec<Vec<f64>>,
    pub entry_error: f64,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Lower-triangular Cholesky factor, or `None` if a pivot is not
    /// strictly positive.
    pub fn cholesky(&self) -> Option<Vec<Vec<f64>>> {
        cholesky(&self.entries)
    }

    /// Positive definite even after the worst-case entry perturbation:
    /// the smallest eigenvalue can move by at most `n·ε`.
    pub fn is_certainly_positive_definite(&self) -> bool {
        let n = self.dim();
        let shift = n as f64 * self.entry_error;
        let shifted: Vec<Vec<f64>> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| if i == j { v - shift } else { *v })
                    .collect()
            })
            .collect();
        cholesky(&shifted).is_some()
    }
}

pub(crate) fn cholesky(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = m[i][i] - s;
                if !(d > 0.0) {
                    return None;
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = (m[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

/// Gram matrix of the canonical height pairing; entry errors ≤ 2·tol.
pub fn gram_matrix(
    points: &[RationalPoint],
    e: &ShortCurve,
    tol: f64,
    cfg: &HeightConfig,
) -> Result<GramMatrix> {
    let diag: Vec<HeightValue> = points
        .iter()
        .map(|p| canonical_height(p, e, tol, cfg))
        .collect::<Result<_>>()?;
    let n = points.len();
    let mut entries = vec![vec![0.0; n]; n];
    let mut worst: f64 = diag.iter().map(|h| h.error_bound).fold(0.0, f64::max);
    for i in 0..n {
        entries[i][i] = diag[i].value;
        for j in 0..i {
            let sum = e.add(&points[i], &points[j])?;
            let hs = canonical_height(&sum, e, tol, cfg)?;
            let v = (hs.value - diag[i].value - diag[j].value) / 2.0;
            worst = worst.max((hs.error_bound + diag[i].error_bound + diag[j].error_bound) / 2.0);
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    Ok(GramMatrix {
        entries,
        entry_error: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::parse_rational;

    fn pt(x: &str, y: &str) -> RationalPoint {
        RationalPoint::affine(parse_rational(x).unwrap(), parse_rational(y).unwrap())
    }

    fn curve(a: i64, b: i64) -> ShortCurve {
        ShortCurve::from_ints(a, b).unwrap()
    }

    #[test]
    fn identity_and_two_torsion_sums() {
        let e = curve(-1, 0);
        let p = pt("0", "0");
        assert_eq!(e.add(&p, &RationalPoint::Infinity).unwrap(), p);
        assert_eq!(e.add(&p, &p).unwrap(), RationalPoint::Infinity);
        assert_eq!(e.add(&pt("-1", "0"), &p).unwrap(), pt("1", "0"));
    }

    #[test]
    fn off_curve_points_are_rejected() {
        let e = curve(-1, 0);
        assert!(matches!(
            e.add(&pt("2", "1"), &pt("0", "0")),
            Err(Error::PointNotOnCurve)
        ));
        assert!(matches!(
            e.multiply(3, &pt("2", "1")),
            Err(Error::PointNotOnCurve)
        ));
    }

    #[test]
    fn multiply_matches_repeated_addition() {
        // y² = x³ + 17 has the non-torsion point (−2, 3)
        let e = curve(0, 17);
        let p = RationalPoint::from_ints(-2, 3);
        let mut acc = RationalPoint::Infinity;
        for n in 0..8 {
            assert_eq!(e.multiply(n, &p).unwrap(), acc);
            assert_eq!(e.multiply(-n, &p).unwrap(), e.negate(&acc));
            acc = e.add(&acc, &p).unwrap();
        }
    }

    #[test]
    fn cubic_roots() {
        let r = |a: i64, c: i64| {
            integer_cubic_roots(&BigInt::from(a), &BigInt::from(c))
                .into_iter()
                .map(|v| i64::try_from(v).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(r(-1, 0), vec![-1, 0, 1]);
        assert_eq!(r(0, 1), vec![-1]);
        assert_eq!(r(0, 2), Vec::<i64>::new());
        assert_eq!(r(-7, 6), vec![-3, 1, 2]);
        assert_eq!(r(-3, 2), vec![-2, 1]);
        // brute force over a window
        for a in -30..=30i64 {
            for c in -60..=60i64 {
                let brute: Vec<i64> = (-100..=100)
                    .filter(|x| x * x * x + a * x + c == 0)
                    .collect();
                assert_eq!(r(a, c), brute, "a = {a}, c = {c}");
            }
        }
    }

    #[test]
    fn two_torsion_examples() {
        assert_eq!(curve(-1, 0).two_torsion_points().len(), 3);
        assert_eq!(curve(0, 1).two_torsion_points(), vec![pt("-1", "0")]);
        assert!(curve(0, 2).two_torsion_points().is_empty());
    }

    #[test]
    fn torsion_examples() {
        let t = curve(-1, 0).torsion_subgroup().unwrap();
        assert_eq!(
            t,
            vec![
                RationalPoint::Infinity,
                pt("-1", "0"),
                pt("0", "0"),
                pt("1", "0")
            ]
        );
        // y² = x³ + x: Lutz–Nagell leaves only y = 0 (y² | 64 gives no points)
        assert_eq!(curve(1, 0).torsion_subgroup().unwrap().len(), 2);
        // y² = x³ + 4x: (2, ±4) have order 4
        let t = curve(4, 0).torsion_subgroup().unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(curve(4, 0).point_order(&pt("2", "4")).unwrap(), Some(4));
        assert_eq!(curve(0, 2).torsion_subgroup().unwrap().len(), 1);
        // y² = x³ + 1 has cyclic torsion of order 6
        assert_eq!(curve(0, 1).torsion_subgroup().unwrap().len(), 6);
        // y² = x³ − 43x + 166 has a point of order 7
        assert_eq!(curve(-43, 166).torsion_subgroup().unwrap().len(), 7);
    }

    #[test]
    fn naive_height_examples() {
        assert!((naive_height(&pt("3/4", "0")) - 4f64.ln()).abs() < 1e-15);
        assert_eq!(naive_height(&pt("0", "0")), 0.0);
        assert!((naive_height(&pt("-22/7", "1")) - 22f64.ln()).abs() < 1e-15);
        assert_eq!(naive_height(&RationalPoint::Infinity), 0.0);
    }

    #[test]
    fn torsion_height_is_exactly_zero() {
        let e = curve(0, 1);
        let cfg = HeightConfig::default();
        for p in e.torsion_subgroup().unwrap() {
            assert_eq!(
                canonical_height(&p, &e, 1e-6, &cfg).unwrap(),
                HeightValue::ZERO
            );
        }
    }

    #[test]
    fn x_only_doubling_matches_group_law() {
        let e = curve(-2, 5);
        let p = RationalPoint::from_ints(1, 2);
        assert!(e.contains(&p));
        let doubler = XOnlyDoubler::new(&e);
        let mut q = p.clone();
        let x = p.x().unwrap();
        let (mut xn, mut zn) = (x.numer().clone(), x.denom().clone());
        for _ in 0..5 {
            q = e.double(&q).unwrap();
            (xn, zn) = doubler.double(&xn, &zn);
            let xq = q.x().unwrap();
            assert_eq!((&xn, &zn), (xq.numer(), xq.denom()));
        }
    }

    #[test]
    fn telescoped_sum_matches_exact_doubling() {
        for (a, b, x, y) in [
            (0, 17, -2, 3),
            (0, 17, 8, 23),
            (1, 1, 0, 1),
            (-2, 5, 1, 2),
            (-1, 1, 1, 1),
        ] {
            let e = curve(a, b);
            let p = RationalPoint::from_ints(x, y);
            for steps in [3, 6, 8] {
                let exact = height_after_doublings(&p, &e, steps, DEFAULT_DIGIT_BUDGET).unwrap();
                for exact_digits in [0, 30, 10_000] {
                    let (t, slack) = telescoped_height(&p, &e, steps, exact_digits).unwrap();
                    assert!(
                        (t - exact).abs() <= 1e-11 + slack,
                        "{a},{b} P=({x},{y}) n={steps}: {t} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn fine_tolerance_is_cheap() {
        let e = curve(0, 17);
        let p = RationalPoint::from_ints(-2, 3);
        let cfg = HeightConfig::default();
        let h = canonical_height(&p, &e, 1e-9, &cfg).unwrap();
        let h2 = canonical_height(&e.double(&p).unwrap(), &e, 1e-9, &cfg).unwrap();
        assert!(h.error_bound <= 1e-9 + 1e-12);
        assert!((h2.value - 4.0 * h.value).abs() <= 6e-9);
    }

    #[test]
    fn digit_budget_is_enforced() {
        let e = curve(0, 17);
        let p = RationalPoint::from_ints(-2, 3);
        assert!(matches!(
            height_after_doublings(&p, &e, 12, 1_000),
            Err(Error::EffortExceeded(_))
        ));
    }

    #[test]
    fn deeper_iteration_agrees() {
        // oracle: exact group-law doubling two levels deeper
        let e = curve(0, 17);
        let cfg = HeightConfig::default();
        let tol = 1e-2;
        for p in [
            RationalPoint::from_ints(-2, 3),
            RationalPoint::from_ints(8, 23),
        ] {
            let h = canonical_height(&p, &e, tol, &cfg).unwrap();
            let n = cfg.doublings_for(&e, tol) + 2;
            let mut q = p.clone();
            for _ in 0..n {
                q = e.double(&q).unwrap();
            }
            let oracle = naive_height(&q) / 4f64.powi(n as i32);
            assert!(
                (h.value - oracle).abs() <= h.error_bound,
                "{} vs {oracle}",
                h.value
            );
        }
    }

    #[test]
    fn pairing_symmetry() {
        let e = curve(0, 17);
        let cfg = HeightConfig::default();
        let tol = 1e-4;
        let p = RationalPoint::from_ints(-2, 3);
        let q = RationalPoint::from_ints(-1, 4);
        let hp = canonical_height(&p, &e, tol, &cfg).unwrap();
        let pp = height_pairing(&p, &p, &e, tol, &cfg).unwrap();
        assert!((pp.value - hp.value).abs() <= 2.0 * tol);
        let pm = height_pairing(&p, &e.negate(&p), &e, tol, &cfg).unwrap();
        assert!((pm.value + hp.value).abs() <= 4.0 * tol);
        let g = gram_matrix(&[p, q], &e, tol, &cfg).unwrap();
        assert_eq!(g.entries[0][1], g.entries[1][0]);
        assert!(g.entry_error <= 2.0 * tol);
        assert!(g.is_certainly_positive_definite());
    }

    #[test]
    fn dependent_points_fail_cholesky() {
        let e = curve(0, 17);
        let cfg = HeightConfig::default();
        let p = RationalPoint::from_ints(-2, 3);
        let p2 = e.multiply(2, &p).unwrap();
        let g = gram_matrix(&[p, p2], &e, 1e-4, &cfg).unwrap();
        assert!(!g.is_certainly_positive_definite());
    }
}
