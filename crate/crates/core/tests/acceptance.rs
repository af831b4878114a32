//! Acceptance suite: nine criteria at their pinned tolerances and time
//! limits, one PASS/FAIL line each. Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use ecbound::bounds::{f_max, theorem_bound, BoundOptions, Branch, ConstantsRegistry};
use ecbound::count::{count_canonical, enumerate_points, greedy_cover, select_independent};
use ecbound::curve::ShortCurve;
use ecbound::points::{canonical_height, gram_matrix, HeightConfig, RationalPoint, MAZUR_ORDERS};
use ecbound::{arith, bounds};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn curve(a: i64, b: i64) -> ShortCurve {
    ShortCurve::from_ints(a, b).unwrap()
}

fn criterion_1() -> Outcome {
    let p13 = arith::primorial(13).map_err(|e| e.to_string())?;
    let p12 = arith::primorial(12).map_err(|e| e.to_string())?;
    // oracle: direct products of the first primes, by trial division
    let primes: Vec<u64> = (2u64..)
        .filter(|n| (2..*n).all(|d| n % d != 0))
        .take(13)
        .collect();
    let direct13: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
    let direct12: BigUint = primes[..12].iter().map(|&p| BigUint::from(p)).product();
    ensure(
        p13 == direct13 && p13 == BigUint::from(304_250_263_527_210u64),
        || format!("p13# = {p13}"),
    )?;
    ensure(p12 == direct12, || format!("p12# = {p12}"))?;
    let n13 = BigUint::from(13u32).pow(13);
    let n12 = BigUint::from(12u32).pow(12);
    ensure(n13 == BigUint::from(302_875_106_592_253u64), || {
        "13^13".into()
    })?;
    ensure(p13 >= n13 && p12 < n12, || "boundary".into())?;
    Ok(format!(
        "p13# = {p13} >= 13^13 = {n13}; p12# = {p12} < 12^12 = {n12}"
    ))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut tested = 0;
    while tested < 1000 {
        let scale = 10i64.pow(rng.gen_range(0..=12));
        let a = rng.gen_range(-scale..=scale);
        let b = rng.gen_range(-scale..=scale);
        let Ok(e) = ShortCurve::from_ints(a, b) else {
            continue;
        };
        let h = BigInt::from(a.abs().max(b.abs()).max(1));
        // Δ = −16(4A³ + 27B²), recomputed here
        let (ab, bb) = (BigInt::from(a), BigInt::from(b));
        let delta =
            BigInt::from(-16) * (BigInt::from(4) * &ab * &ab * &ab + BigInt::from(27) * &bb * &bb);
        ensure(&delta == e.discriminant(), || {
            format!("Δ mismatch for A = {a}, B = {b}")
        })?;
        let lhs = delta.abs();
        let rhs = BigInt::from(496) * &h * &h * &h;
        ensure(lhs <= rhs, || {
            format!("A = {a}, B = {b}: |Δ| = {lhs} > 496 H³ = {rhs}")
        })?;
        tested += 1;
    }
    Ok(format!("{tested} curves, 0 failures"))
}

/// Curves with known independent points.
fn generator_sets() -> Vec<(ShortCurve, Vec<RationalPoint>)> {
    vec![
        (
            curve(0, 17),
            vec![
                RationalPoint::from_ints(-2, 3),
                RationalPoint::from_ints(-1, 4),
            ],
        ),
        (
            curve(-82, 0),
            vec![
                RationalPoint::from_ints(-9, 3),
                RationalPoint::from_ints(-8, 12),
                RationalPoint::from_ints(-1, 9),
            ],
        ),
        (curve(-2, 0), vec![RationalPoint::from_ints(-1, 1)]),
        (curve(1, 1), vec![RationalPoint::from_ints(0, 1)]),
        (curve(-1, 1), vec![RationalPoint::from_ints(1, 1)]),
    ]
}

fn combination(e: &ShortCurve, gens: &[RationalPoint], coeffs: &[i64]) -> RationalPoint {
    let mut acc = RationalPoint::Infinity;
    for (g, &c) in gens.iter().zip(coeffs) {
        acc = e.add(&acc, &e.multiply(c, g).unwrap()).unwrap();
    }
    acc
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sets = generator_sets();
    for (e, gens) in &sets {
        for g in gens {
            ensure(e.contains(g), || format!("{g} not on {e}"))?;
        }
    }
    let mut triples = 0;
    while triples < 120 {
        let (e, gens) = &sets[rng.gen_range(0..sets.len())];
        let mut pick = || {
            let c: Vec<i64> = gens.iter().map(|_| rng.gen_range(-2..=2)).collect();
            combination(e, gens, &c)
        };
        let (p, q, r) = (pick(), pick(), pick());
        let lhs = e.add(&e.add(&p, &q).unwrap(), &r).unwrap();
        let rhs = e.add(&p, &e.add(&q, &r).unwrap()).unwrap();
        ensure(lhs == rhs, || {
            format!("associativity on {e}: {p}, {q}, {r}")
        })?;
        ensure(e.add(&p, &q).unwrap() == e.add(&q, &p).unwrap(), || {
            "commutativity".into()
        })?;
        ensure(e.add(&p, &e.negate(&p)).unwrap().is_infinity(), || {
            "inverse".into()
        })?;
        ensure(e.add(&p, &RationalPoint::Infinity).unwrap() == p, || {
            "identity".into()
        })?;
        triples += 1;
    }

    let tol = 1e-6;
    let cfg = HeightConfig::default();
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for (e, gens) in &sets {
        let points: Vec<RationalPoint> = match gens.len() {
            1 => (1..=5).map(|k| e.multiply(k, &gens[0]).unwrap()).collect(),
            _ => vec![
                gens[0].clone(),
                gens[1].clone(),
                combination(e, gens, &[1, 1, 0][..gens.len()]),
                combination(e, gens, &[1, -1, 1][..gens.len()]),
                combination(e, gens, &[2, 1, -1][..gens.len()]),
            ],
        };
        for w in points.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            let hp = canonical_height(p, e, tol, &cfg).map_err(|x| x.to_string())?;
            let hq = canonical_height(q, e, tol, &cfg).map_err(|x| x.to_string())?;
            let h2p =
                canonical_height(&e.double(p).unwrap(), e, tol, &cfg).map_err(|x| x.to_string())?;
            let hsum =
                canonical_height(&e.add(p, q).unwrap(), e, tol, &cfg).map_err(|x| x.to_string())?;
            let hdiff = canonical_height(&e.add(p, &e.negate(q)).unwrap(), e, tol, &cfg)
                .map_err(|x| x.to_string())?;
            let dup = (h2p.value - 4.0 * hp.value).abs();
            let para = (hsum.value + hdiff.value - 2.0 * hp.value - 2.0 * hq.value).abs();
            worst = worst.max(dup).max(para);
            ensure(hp.value > 0.0, || format!("{p} on {e} looks torsion"))?;
            ensure(dup <= 6.0 * tol, || {
                format!("ĥ(2P) − 4ĥ(P) = {dup:e} for {p} on {e}")
            })?;
            ensure(para <= 6.0 * tol, || {
                format!("parallelogram defect {para:e} for {p}, {q} on {e}")
            })?;
            checked += 1;
        }
    }
    ensure(checked >= 20, || format!("only {checked} points"))?;

    for (a, b) in [(-1, 0), (0, 1), (-43, 166), (4, 0)] {
        let e = curve(a, b);
        for t in e.torsion_subgroup().map_err(|x| x.to_string())? {
            let h = canonical_height(&t, &e, tol, &cfg).map_err(|x| x.to_string())?;
            ensure(h.value == 0.0 && h.error_bound == 0.0, || {
                format!("torsion {t} on {e} got ĥ = {}", h.value)
            })?;
        }
    }
    Ok(format!(
        "{triples} triples exact; {checked} points, worst defect {worst:.1e} ≤ 6·tol"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for inst in 0..100 {
        let n = rng.gen_range(1..=6);
        let radius: f64 = rng.gen_range(0.5..10.0);
        let rho = radius * rng.gen_range(0.05..1.5);
        let size = rng.gen_range(1..=1000);
        let mut s = Vec::with_capacity(size);
        while s.len() < size {
            let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-radius..radius)).collect();
            if p.iter().map(|x| x * x).sum::<f64>() <= radius * radius {
                s.push(p);
            }
        }
        let c = greedy_cover(&s, radius, rho);
        for p in &s {
            let covered = c.centers.iter().any(|&i| {
                s[i].iter()
                    .zip(p)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    <= rho
            });
            ensure(covered, || {
                format!("instance {inst}: point {p:?} uncovered")
            })?;
        }
        ensure(c.centers.iter().all(|&i| i < s.len()), || {
            "center outside S".into()
        })?;
        let bound = (1.0 + 2.0 * radius / rho).powi(n);
        ensure((c.centers.len() as f64) <= bound, || {
            format!("instance {inst}: {} centers > {bound}", c.centers.len())
        })?;
    }
    Ok("100 instances, 0 failures".into())
}

/// Every affine point with `H(x) ≤ bound`, from all reduced `p/q`.
fn brute_force_points(a: i64, b: i64, bound: i64) -> BTreeSet<RationalPoint> {
    let mut out = BTreeSet::new();
    out.insert(RationalPoint::Infinity);
    for q in 1..=bound {
        for p in -bound..=bound {
            if p.gcd(&q) != 1 {
                continue;
            }
            // y² = (p³ + a p q² + b q³)/q³, rational iff q·(…) is a square
            let (pb, qb) = (BigInt::from(p), BigInt::from(q));
            let num = &pb * &pb * &pb + a * &pb * &qb * &qb + b * &qb * &qb * &qb;
            let t = &qb * &num;
            if t.is_negative() {
                continue;
            }
            let r = t.sqrt();
            if &r * &r != t {
                continue;
            }
            let x = BigRational::new(pb, qb.clone());
            let y = BigRational::new(r, &qb * &qb);
            out.insert(RationalPoint::affine(x.clone(), -y.clone()));
            out.insert(RationalPoint::affine(x, y));
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let curves = [
        (-1, 0),
        (0, 17),
        (1, 1),
        (-2, 1),
        (0, -2),
        (-7, 6),
        (-82, 0),
        (-4, 4),
        (3, 5),
        (-43, 166),
    ];
    let mut total = 0;
    for (a, b) in curves {
        for bound in [1, 7, 23, 50] {
            let inv = enumerate_points(&curve(a, b), bound as f64).map_err(|e| e.to_string())?;
            let got: BTreeSet<RationalPoint> = inv.points.iter().cloned().collect();
            ensure(got.len() == inv.points.len(), || "duplicate points".into())?;
            let want = brute_force_points(a, b, bound);
            ensure(got == want, || {
                format!(
                    "A = {a}, B = {b}, bound {bound}: {} vs {}",
                    got.len(),
                    want.len()
                )
            })?;
            total += got.len();
        }
    }
    Ok(format!(
        "10 curves × 4 bounds, {total} points matched exactly"
    ))
}

fn criterion_6() -> Outcome {
    let tol = 1e-6;
    let cfg = HeightConfig::default();
    let mut lines = Vec::new();
    for ((a, b), enum_bound, bounds) in [
        ((0i64, 17i64), 300.0, [3.0, 20.0, 150.0]),
        ((-2, 0), 300.0, [2.5, 30.0, 200.0]),
    ] {
        let e = curve(a, b);
        let inv = enumerate_points(&e, enum_bound).map_err(|x| x.to_string())?;
        let gens = select_independent(&inv.points, &e, tol, &cfg).map_err(|x| x.to_string())?;
        let torsion = e.torsion_subgroup().map_err(|x| x.to_string())?.len() as u64;
        let heights: Vec<f64> = inv
            .points
            .iter()
            .map(|p| canonical_height(p, &e, tol, &cfg).map(|h| h.value))
            .collect::<Result<_, _>>()
            .map_err(|x| x.to_string())?;
        for bound in bounds {
            let log_b = f64::ln(bound);
            ensure(heights.iter().all(|h| (h - log_b).abs() > 1e-3), || {
                format!("tie at B = {bound}")
            })?;
            let lattice =
                count_canonical(&e, &gens, bound, tol, &cfg, torsion).map_err(|x| x.to_string())?;
            let direct = heights.iter().filter(|&&h| h <= log_b).count() as u64;
            ensure(lattice == direct, || {
                format!("{e}, B = {bound}: lattice {lattice} vs direct {direct}")
            })?;
            lines.push(format!("{e} B={bound}: {lattice}"));
        }
    }
    Ok(lines.join("; "))
}

/// Short curves with an integer root `r` of the cubic, `|A|, |B| ≤ 50`.
fn two_torsion_sample() -> Vec<(i64, i64)> {
    let mut all = BTreeSet::new();
    for r in -6i64..=6 {
        for a in -50i64..=50 {
            let b = -r * r * r - a * r;
            if b.abs() <= 50 && ShortCurve::from_ints(a, b).is_ok() {
                all.insert((a, b));
            }
        }
    }
    let all: Vec<(i64, i64)> = all.into_iter().collect();
    let step = all.len() / 20;
    (0..20).map(|i| all[i * step]).collect()
}

fn criterion_7() -> Outcome {
    let reg = ConstantsRegistry::default();
    let opts = BoundOptions {
        empirical: true,
        ..BoundOptions::default()
    };
    let mut summary = Vec::new();
    for (a, b) in two_torsion_sample() {
        let spec = format!("{a},{b}");
        let r = theorem_bound(&spec.parse().unwrap(), 1e3, &reg, &opts)
            .map_err(|e| format!("{spec}: {e}"))?;
        for c in &r.chain {
            ensure(
                c.holds || c.kind == bounds::EntryKind::Informational,
                || format!("{spec}: `{}` fails ({} > {})", c.name, c.lhs, c.rhs),
            )?;
        }
        let n = r
            .empirical_count
            .ok_or(format!("{spec}: no empirical count"))?;
        if r.branch != Branch::Degenerate {
            let log_t = r
                .log_theoretical_count
                .ok_or(format!("{spec}: unbounded"))?;
            ensure((n as f64).ln() <= log_t, || {
                format!("{spec}: N(B) = {n} above bound")
            })?;
        }
        summary.push(format!("{spec}:N={n}"));
    }
    Ok(format!(
        "20 curves, all chains hold ({})",
        summary.join(" ")
    ))
}

fn criterion_8() -> Outcome {
    let reg = ConstantsRegistry::default();
    let mut out = Vec::new();
    for a in [50.0, 1e2, 1e3, 1e6] {
        let m = f_max(a, &reg).map_err(|e| e.to_string())?;
        ensure(m.cap_ok, || format!("A = {a}: cap flag unset"))?;
        ensure(m.x_star <= 2.0 * a / a.ln(), || {
            format!("A = {a}: x* = {}", m.x_star)
        })?;
        ensure(
            m.log_f_star <= 2.0 * (1.0 + 1.0 / 39f64.ln()) * a / a.ln(),
            || format!("A = {a}: log f* = {}", m.log_f_star),
        )?;
        out.push(format!("A={a}: x*={:.2}", m.x_star));
    }
    Ok(out.join(", "))
}

fn criterion_9() -> Outcome {
    let tol = 1e-6;
    let cfg = HeightConfig::default();
    let mut curves: Vec<(i64, i64)> = two_torsion_sample();
    curves.extend([(0, 17), (-82, 0), (-2, 0), (1, 1), (-1, 1), (-17, 16)]);
    let mut out = Vec::new();
    for (a, b) in curves {
        let e = curve(a, b);
        let inv = enumerate_points(&e, 300.0).map_err(|x| x.to_string())?;
        let gens = select_independent(&inv.points, &e, tol, &cfg).map_err(|x| x.to_string())?;
        if !gens.is_empty() {
            let g = gram_matrix(&gens, &e, tol, &cfg).map_err(|x| x.to_string())?;
            ensure(g.is_certainly_positive_definite(), || {
                format!("{e}: Gram not definite")
            })?;
        }
        let delta = arith::factor(e.discriminant()).map_err(|x| x.to_string())?;
        let r_bar = bounds::rank_bound_from_omega(delta.omega());
        ensure(gens.len() as u64 <= r_bar, || {
            format!("{e}: rank {} > {r_bar}", gens.len())
        })?;
        let t = e.torsion_subgroup().map_err(|x| x.to_string())?.len();
        ensure(MAZUR_ORDERS.contains(&t), || {
            format!("{e}: torsion order {t}")
        })?;
        out.push(format!("{e}:{}≤{r_bar}", gens.len()));
    }
    Ok(format!("{} curves ({})", out.len(), out.join(" ")))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        (
            "1 primorial boundary",
            Duration::from_millis(1),
            criterion_1,
        ),
        (
            "2 discriminant-height bound",
            Duration::from_secs(1),
            criterion_2,
        ),
        (
            "3 group law and heights",
            Duration::from_secs(60),
            criterion_3,
        ),
        ("4 covering lemma", Duration::from_secs(30), criterion_4),
        ("5 enumeration oracle", Duration::from_secs(60), criterion_5),
        ("6 lattice count", Duration::from_secs(120), criterion_6),
        ("7 chain soundness", Duration::from_secs(600), criterion_7),
        ("8 f(x) caps", Duration::from_secs(1), criterion_8),
        (
            "9 rank-bound coherence",
            Duration::from_secs(60),
            criterion_9,
        ),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let verdict = match (&outcome, took <= limit) {
            (Ok(_), true) => "PASS",
            _ => "FAIL",
        };
        let detail = match &outcome {
            Ok(s) if took <= limit => s.clone(),
            Ok(_) => format!("over time limit {limit:?}"),
            Err(e) => e.clone(),
        };
        println!("criterion {name}: {verdict} in {took:.3?} (limit {limit:?}) - {detail}");
        if verdict == "FAIL" {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 9 criteria passed");
}
