//! Empirical counting: exhaustive enumeration of `N(B)`, lattice-ball
//! counting of `N_can(B)` over a set of generators, and the constructive
//! covering lemma.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::curve::{ModelMap, ShortCurve};
use crate::error::{Error, Result};
use crate::points::{
    canonical_height, cholesky, gram_matrix, naive_height, naive_height_exact, HeightConfig,
    HeightValue, RationalPoint,
};

/// Largest height bound `B` enumerated without an explicit budget.
pub const DEFAULT_ENUMERATION_LIMIT: f64 = 1e4;

/// All rational points of naive height at most `B` on one model.
#[derive(Debug, Clone, PartialEq)]
pub struct PointInventory {
    pub curve: ShortCurve,
    /// `B`; the inventory holds every point with `H(P) ≤ B`.
    pub bound: f64,
    /// `log B`.
    pub height_bound: f64,
    /// Sorted, infinity first.
    pub points: Vec<RationalPoint>,
    pub complete: bool,
}

impl PointInventory {
    /// `N(B)`, counting the point at infinity.
    pub fn count(&self) -> usize {
        self.points.len()
    }

    /// JSON export: `{x, y, h, hhat}` per point, rationals as strings.
    pub fn to_json(&self, hhat: Option<&[HeightValue]>) -> serde_json::Value {
        let points: Vec<serde_json::Value> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let hh = hhat.and_then(|h| h.get(i)).map(|h| h.value);
                json!({
                    "x": p.x().map(ToString::to_string),
                    "y": p.y().map(ToString::to_string),
                    "h": naive_height(p),
                    "hhat": hh,
                })
            })
            .collect();
        json!({
            "curve": self.curve.to_string(),
            "bound": self.bound,
            "complete": self.complete,
            "count": self.count(),
            "points": points,
        })
    }
}

fn isqrt_u128(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `y` with `y² = n`, if `n` is a perfect square.
fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if let Some(small) = n.to_u128() {
        let r = isqrt_u128(small);
        return (r * r == small).then(|| BigInt::from(r));
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `m³ + A m e⁴ + B e⁶` in machine integers when it cannot overflow.
fn weighted_rhs_i128(a: i128, b: i128, m: i128, e: i128) -> Option<i128> {
    let e2 = e.checked_mul(e)?;
    let e4 = e2.checked_mul(e2)?;
    let e6 = e4.checked_mul(e2)?;
    let m3 = m.checked_mul(m)?.checked_mul(m)?;
    let t1 = a.checked_mul(m)?.checked_mul(e4)?;
    let t2 = b.checked_mul(e6)?;
    m3.checked_add(t1)?.checked_add(t2)
}

/// Points with denominator `e²` (so `x = m/e²`, `gcd(m, e) = 1`) and
/// `|m| ≤ bound`.
fn points_with_denominator(e_curve: &ShortCurve, e: u64, bound: u64) -> Vec<RationalPoint> {
    let small = e_curve.a().to_i128().zip(e_curve.b().to_i128());
    let mut found = Vec::new();
    let bound = bound as i128;
    let den_x = BigInt::from(e) * BigInt::from(e);
    let den_y = &den_x * BigInt::from(e);
    for m in -bound..=bound {
        if m.unsigned_abs().gcd(&(e as u128)) != 1 {
            continue;
        }
        let value = small
            .and_then(|(a, b)| weighted_rhs_i128(a, b, m, e as i128))
            .map(BigInt::from)
            .unwrap_or_else(|| {
                let (m, e) = (BigInt::from(m), BigInt::from(e));
                let e2 = &e * &e;
                let e4 = &e2 * &e2;
                &m * &m * &m + e_curve.a() * &m * e4 + e_curve.b() * &e2 * &e2 * e2
            });
        if let Some(root) = exact_sqrt(&value) {
            let x = BigRational::new(BigInt::from(m), den_x.clone());
            let y = BigRational::new(root, den_y.clone());
            if !y.is_zero() {
                found.push(RationalPoint::affine(x.clone(), -y.clone()));
            }
            found.push(RationalPoint::affine(x, y));
        }
    }
    found
}

/// Every rational point with `H(P) ≤ B` on an integral short model, using
/// `x = m/e²`, `y = n/e³`. Bounds above [`DEFAULT_ENUMERATION_LIMIT`] fail
/// with the inventory up to that limit attached.
pub fn enumerate_points(e: &ShortCurve, bound: f64) -> Result<PointInventory> {
    enumerate_points_with_limit(e, bound, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_points_with_limit(
    e: &ShortCurve,
    bound: f64,
    limit: f64,
) -> Result<PointInventory> {
    if !(bound >= 1.0) {
        return Err(Error::BTooSmall(format!(
            "enumeration needs B ≥ 1, got {bound}"
        )));
    }
    let effective = bound.min(limit);
    let b_int = effective.floor() as u64;
    let e_max = b_int.sqrt();
    let mut points: Vec<RationalPoint> = (1..=e_max)
        .into_par_iter()
        .flat_map_iter(|den| points_with_denominator(e, den, b_int))
        .collect();
    points.push(RationalPoint::Infinity);
    points.sort();
    let inventory = PointInventory {
        curve: e.clone(),
        bound: effective,
        height_bound: effective.ln(),
        points,
        complete: bound <= limit,
    };
    if inventory.complete {
        Ok(inventory)
    } else {
        Err(Error::EnumerationIncomplete(Box::new(inventory)))
    }
}

/// Points of naive height `≤ B` on the source model of `map`, paired with
/// their images on the short model.
pub fn enumerate_on_model(
    map: &ModelMap,
    bound: f64,
) -> Result<Vec<(RationalPoint, RationalPoint)>> {
    // H(u²(x − s)) ≤ 2u²H(s)H(x)
    let u = map.scale().to_f64().unwrap_or(f64::INFINITY);
    let hs = crate::curve::weil_height(&[BigRational::one(), map.shift().clone()])
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let identity = map.scale().is_one() && map.shift().is_zero();
    let target_bound = if identity {
        bound
    } else {
        (2.0 * u * u * hs * bound).max(bound)
    };
    let inventory = enumerate_points(map.target(), target_bound)?;
    let b_int = BigInt::from(bound.floor() as u64);
    let mut pairs: Vec<(RationalPoint, RationalPoint)> = inventory
        .points
        .into_iter()
        .map(|p| (map.backward(&p), p))
        .filter(|(src, _)| naive_height_exact(src) <= b_int)
        .collect();
    pairs.sort();
    Ok(pairs)
}

/// Greedily picks non-torsion points (in ascending canonical height) whose
/// Gram matrix stays positive definite beyond the error bound.
pub fn select_independent(
    points: &[RationalPoint],
    e: &ShortCurve,
    tol: f64,
    cfg: &HeightConfig,
) -> Result<Vec<RationalPoint>> {
    let mut candidates = Vec::new();
    for p in points {
        if e.is_torsion(p)? {
            continue;
        }
        let h = canonical_height(p, e, tol, cfg)?;
        candidates.push((h.value, p.clone()));
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let mut chosen: Vec<RationalPoint> = Vec::new();
    for (_, p) in candidates {
        chosen.push(p);
        if !gram_matrix(&chosen, e, tol, cfg)?.is_certainly_positive_definite() {
            chosen.pop();
        }
    }
    Ok(chosen)
}

fn quadratic_form(gram: &[Vec<f64>], v: &[i64]) -> f64 {
    let n = v.len();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| gram[i][j] * v[i] as f64 * v[j] as f64)
        .sum()
}

/// Integer vectors `v` with `vᵀGv ≤ radius²` (G positive definite), by
/// Fincke–Pohst enumeration on the Cholesky factor.
pub fn lattice_vectors_in_ball(gram: &[Vec<f64>], radius_sq: f64) -> Option<Vec<Vec<i64>>> {
    let n = gram.len();
    let l = cholesky(gram)?;
    // q(v) = Σᵢ (Σ_{j≥i} r_ij v_j)² with r = lᵀ
    let r: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if j >= i { l[j][i] } else { 0.0 }).collect())
        .collect();
    let slack = radius_sq * 1e-9 + 1e-12;
    let mut out = Vec::new();
    let mut v = vec![0i64; n];
    fn recurse(
        i: usize,
        remaining: f64,
        r: &[Vec<f64>],
        v: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
        slack: f64,
    ) {
        let n = r.len();
        let shift: f64 = (i + 1..n).map(|j| r[i][j] * v[j] as f64).sum();
        let width = remaining.max(0.0).sqrt();
        let lo = ((-width - shift) / r[i][i] - 1e-9).ceil() as i64;
        let hi = ((width - shift) / r[i][i] + 1e-9).floor() as i64;
        for k in lo..=hi {
            v[i] = k;
            let t = r[i][i] * k as f64 + shift;
            let rest = remaining - t * t;
            if rest < -slack {
                continue;
            }
            if i == 0 {
                out.push(v.clone());
            } else {
                recurse(i - 1, rest, r, v, out, slack);
            }
        }
        v[i] = 0;
    }
    if n == 0 {
        return Some(vec![Vec::new()]);
    }
    recurse(n - 1, radius_sq + slack, &r, &mut v, &mut out, slack);
    out.retain(|v| quadratic_form(gram, v) <= radius_sq);
    Some(out)
}

/// `|T| × #{v ∈ ℤʳ : vᵀGv ≤ log B}` for the lattice spanned by
/// `generators`, with the Gram error absorbed by interval classification.
pub fn count_canonical(
    e: &ShortCurve,
    generators: &[RationalPoint],
    bound: f64,
    tol: f64,
    cfg: &HeightConfig,
    torsion_order: u64,
) -> Result<u64> {
    if generators.is_empty() {
        return Ok(torsion_order);
    }
    let gram = gram_matrix(generators, e, tol, cfg)?;
    if !gram.is_certainly_positive_definite() {
        return Err(Error::GramNotPositiveDefinite);
    }
    let eps = gram.entry_error;
    let n = gram.dim();
    let log_b = bound.ln();
    // vᵀG_true v ≥ vᵀ(G − nεI)v, so this ball is a superset
    let widened: Vec<Vec<f64>> = gram
        .entries
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| if i == j { x - n as f64 * eps } else { *x })
                .collect()
        })
        .collect();
    let candidates =
        lattice_vectors_in_ball(&widened, log_b).ok_or(Error::GramNotPositiveDefinite)?;
    let (mut inside, mut ambiguous) = (0u64, 0u64);
    for v in candidates {
        let q = quadratic_form(&gram.entries, &v);
        let l1: f64 = v.iter().map(|x| x.unsigned_abs() as f64).sum();
        let delta = eps * l1 * l1;
        if q + delta <= log_b {
            inside += 1;
        } else if q - delta <= log_b {
            ambiguous += 1;
        }
    }
    if ambiguous > 0 {
        return Err(Error::ToleranceTooCoarse {
            lower: inside * torsion_order,
            upper: (inside + ambiguous) * torsion_order,
        });
    }
    Ok(inside * torsion_order)
}

/// Output of [`greedy_cover`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverResult {
    /// Indices into the input set.
    pub centers: Vec<usize>,
    pub radius: f64,
    pub covered: usize,
    /// `(1 + 2R/ρ)ⁿ`.
    pub bound: f64,
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Covers `S ⊆ B_n(0, R)` by balls of radius `ρ` centered at points of `S`:
/// a maximal family of disjoint `ρ/2`-balls, then doubled.
pub fn greedy_cover(points: &[Vec<f64>], outer_radius: f64, rho: f64) -> CoverResult {
    let dim = points.first().map_or(0, Vec::len);
    let mut centers: Vec<usize> = Vec::new();
    let rho_sq = rho * rho;
    for (i, p) in points.iter().enumerate() {
        // disjoint closed ρ/2-balls need centers more than ρ apart
        if centers.iter().all(|&c| dist_sq(&points[c], p) > rho_sq) {
            centers.push(i);
        }
    }
    let covered = points
        .iter()
        .filter(|p| centers.iter().any(|&c| dist_sq(&points[c], p) <= rho_sq))
        .count();
    CoverResult {
        centers,
        radius: rho,
        covered,
        bound: (1.0 + 2.0 * outer_radius / rho).powi(dim as i32),
    }
}
