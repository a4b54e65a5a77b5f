//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Tolerances and budgets are pinned below.

mod common;

use std::f64::consts::{PI, SQRT_2, TAU};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pwlinv::cli::{builtin, load_map_str, svg_string};
use pwlinv::exec::{find_first, map_range};
use pwlinv::halfspace::random_halfspace_map;
use pwlinv::nonsmooth::{check_local_invertibility, parabolic_sector_example};
use pwlinv::pwlmap::{random_map_with, ConeShape, RandomMapConfig};
use pwlinv::{sweep, Execution, Mat2, PwlMap2, Sector, VerdictTag};

const HULL_DET_TOL: f64 = 1e-12;
const WITNESS_TOL: f64 = 1e-8;
const ROUNDTRIP_TOL: f64 = 1e-9;
const SWEEP_TOL: f64 = 1e-9;
const WINDING_TOL: f64 = 1e-6;
const EXAMPLE_BUDGET: Duration = Duration::from_secs(1);
const RANDOM_BUDGET: Duration = Duration::from_secs(30);
const MAPS_PER_SHAPE: u64 = 500;
const ROUNDTRIP_POINTS: usize = 1000;
const SEED_LIMIT: u64 = 10_000;
const SWEEP_PAIRS: u64 = 10_000;
const HALFSPACE_MAPS: u64 = 500;
const WINDING_MAPS: u64 = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn builtin_map(name: &str) -> PwlMap2 {
    load_map_str(builtin::source(name).unwrap()).unwrap()
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let detail = f()?;
    let dt = t.elapsed();
    check(dt < budget, || format!("took {dt:?}, budget {budget:?}"))?;
    Ok(format!("{detail}; {:.3} s", dt.as_secs_f64()))
}

fn ac1_clarke4() -> Outcome {
    timed(EXAMPLE_BUDGET, || {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = pwlinv::cli::run(
            ["pwlinv", "example", "clarke4", "--json"],
            &mut out,
            &mut err,
        );
        check(code == 0, || format!("exit code {code}"))?;
        let v: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
        check(v["degree"] == 1, || format!("degree {}", v["degree"]))?;
        check(v["verdict"] == "Invertible", || {
            format!("verdict {}", v["verdict"])
        })?;
        let min = v["clarke_min_det"].as_f64().ok_or("no clarke_min_det")?;
        check(min < 0.0, || format!("clarke min det {min}"))?;
        let m = builtin_map("clarke4").matrices();
        let half = (m[0].scale(0.5) + m[2].scale(0.5)).det();
        check((half + 0.84875).abs() <= HULL_DET_TOL, || {
            format!("det at (1/2,0,1/2,0) = {half}")
        })?;
        Ok(format!(
            "degree 1, Invertible, hull min det {min:.6}, det at midpoint {half:.12}"
        ))
    })
}

fn noninjective_example(name: &str) -> Outcome {
    let g = builtin_map(name);
    let v = g.decide().map_err(|e| e.to_string())?;
    check(v.tag == VerdictTag::NonInjective, || {
        format!("verdict {:?}", v.tag)
    })?;
    let oracle = common::oracle_degree(&g);
    check(oracle == 2 && v.degree == Some(2), || {
        format!("degree {:?}, oracle {oracle}", v.degree)
    })?;
    let w = v.witness.ok_or("no witness")?;
    w.verify(&g, WITNESS_TOL)?;
    let gap = common::rel_err(g.evaluate(w.x1), g.evaluate(w.x2));
    check(gap <= WITNESS_TOL, || {
        format!("witness images differ by {gap:e}")
    })?;
    Ok(format!(
        "NonInjective, degree 2 = oracle, witness gap {gap:.1e}"
    ))
}

fn ac2_pie4() -> Outcome {
    timed(EXAMPLE_BUDGET, || noninjective_example("pie4-nonconvex"))
}

fn ac3_pie5() -> Outcome {
    timed(EXAMPLE_BUDGET, || {
        let g = builtin_map("pie5");
        for d in g.determinants() {
            let ok = (d - (SQRT_2 - 1.0)).abs() < 1e-12 || (d - 1.0).abs() < 1e-12;
            check(ok, || format!("determinant {d}"))?;
        }
        noninjective_example("pie5").map(|s| format!("dets in {{sqrt2-1, 1}}, {s}"))
    })
}

fn roundtrip_ok(g: &PwlMap2, seed: u64) -> Result<(), String> {
    let v = g.decide().map_err(|e| e.to_string())?;
    check(v.tag == VerdictTag::Invertible, || {
        format!("verdict {:?}", v.tag)
    })?;
    check(v.degree.map(i64::abs) == Some(1), || {
        format!("degree {:?}", v.degree)
    })?;
    let inv = v.inverse.ok_or("no inverse")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ROUNDTRIP_POINTS {
        let x = common::polar(
            10f64.powf(rng.gen_range(-3.0..3.0)),
            rng.gen_range(0.0..TAU),
        );
        let e = common::rel_err(inv.evaluate(g.evaluate(x)), x);
        check(e <= ROUNDTRIP_TOL, || {
            format!("roundtrip error {e:e} at {x:?}")
        })?;
    }
    Ok(())
}

fn ac4_random_invertible() -> Outcome {
    timed(RANDOM_BUDGET, || {
        let shapes = [
            (2, ConeShape::Any),
            (3, ConeShape::Any),
            (4, ConeShape::AllConvex),
        ];
        for (n, shape) in shapes {
            let cfg = RandomMapConfig {
                n,
                force_invertible: false,
                shape,
            };
            let failures = map_range(0..MAPS_PER_SHAPE, Execution::default(), |seed| {
                random_map_with(&cfg, seed)
                    .map_err(|e| e.to_string())
                    .and_then(|g| roundtrip_ok(&g, seed))
                    .err()
                    .map(|e| format!("n={n} seed {seed}: {e}"))
            });
            if let Some(e) = failures.into_iter().flatten().next() {
                return Err(e);
            }
        }
        Ok(format!(
            "{MAPS_PER_SHAPE} maps each for n=2, n=3, n=4 convex; {ROUNDTRIP_POINTS} roundtrips per map"
        ))
    })
}

fn find_noninjective(cfg: RandomMapConfig) -> Result<u64, String> {
    find_first(0..SEED_LIMIT, Execution::default(), |seed| {
        let g = random_map_with(&cfg, seed).ok()?;
        let v = g.decide().ok()?;
        let w = v.witness.filter(|_| v.tag == VerdictTag::NonInjective)?;
        w.verify(&g, WITNESS_TOL).ok().map(|_| seed)
    })
    .ok_or_else(|| {
        format!(
            "no non-injective map with n={} in {SEED_LIMIT} seeds",
            cfg.n
        )
    })
}

fn ac5_seed_sweep() -> Outcome {
    let a = find_noninjective(RandomMapConfig {
        n: 5,
        force_invertible: false,
        shape: ConeShape::Any,
    })?;
    let b = find_noninjective(RandomMapConfig {
        n: 4,
        force_invertible: false,
        shape: ConeShape::OneReflex,
    })?;
    Ok(format!(
        "n=5 seed {a}, n=4 with a reflex cone seed {b}; witnesses verified"
    ))
}

fn ac6_sweep_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut narrow = 0;
    for i in 0..SWEEP_PAIRS {
        let m = loop {
            let m = Mat2::new(
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
            );
            if !m.is_singular() {
                break m;
            }
        };
        let width = rng.gen_range(1e-6..TAU);
        let s = Sector::new(rng.gen_range(0.0..TAU), width).map_err(|e| e.to_string())?;
        let w = sweep(&m, &s).map_err(|e| e.to_string())?;
        check(w.abs() < TAU, || format!("pair {i}: |sweep| {w} >= 2pi"))?;
        if width < PI {
            narrow += 1;
            check(w.abs() < PI + SWEEP_TOL, || {
                format!("pair {i}: width {width}, |sweep| {w}")
            })?;
        }
    }
    Ok(format!("{SWEEP_PAIRS} pairs ({narrow} narrower than pi)"))
}

fn ac7_halfspace() -> Outcome {
    for k in [2usize, 3, 4, 6] {
        let mut negative = 0;
        for seed in 0..HALFSPACE_MAPS {
            let h = random_halfspace_map(k, seed).map_err(|e| e.to_string())?;
            let v = h.decide();
            let s = v.det_a * v.det_b;
            let ctx = || format!("k={k} seed {seed}");
            check((v.tag == VerdictTag::Invertible) == (s > 0.0), || {
                format!("{}: verdict {:?}", ctx(), v.tag)
            })?;
            let g = v.gamma_k.ok_or_else(|| format!("{}: no gamma", ctx()))?;
            check((g > 0.0) == (s > 0.0), || {
                format!("{}: gamma_k {g}, detA detB {s}", ctx())
            })?;
            if s < 0.0 {
                negative += 1;
                let w = v
                    .witness
                    .as_ref()
                    .ok_or_else(|| format!("{}: no witness", ctx()))?;
                let d1: f64 = h.normal().iter().zip(&w.x1).map(|(a, b)| a * b).sum();
                let d2: f64 = h.normal().iter().zip(&w.x2).map(|(a, b)| a * b).sum();
                check(d1 > 0.0 && d2 < 0.0, || {
                    format!("{}: sides {d1} {d2}", ctx())
                })?;
            }
            if k == 2 {
                let p = h
                    .to_planar()
                    .map_err(|e| e.to_string())?
                    .decide()
                    .map_err(|e| e.to_string())?;
                let agree = (p.tag == VerdictTag::Invertible) == (v.tag == VerdictTag::Invertible);
                check(agree, || {
                    format!("{}: planar {:?} vs {:?}", ctx(), p.tag, v.tag)
                })?;
            }
        }
        check(negative > 0 && negative < HALFSPACE_MAPS, || {
            format!("k={k}: only one sign class")
        })?;
    }
    Ok(format!("{HALFSPACE_MAPS} maps per k in {{2,3,4,6}}"))
}

fn ac8_winding() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..WINDING_MAPS {
        let n = 1 + (seed % 8) as usize;
        let cfg = RandomMapConfig {
            n,
            force_invertible: seed % 2 == 0,
            shape: ConeShape::Any,
        };
        let g = random_map_with(&cfg, seed).map_err(|e| format!("seed {seed}: {e}"))?;
        let w = g.winding_sum().map_err(|e| e.to_string())?;
        let dev = (w - w.round()).abs();
        worst = worst.max(dev);
        check(dev <= WINDING_TOL, || format!("seed {seed}: winding {w}"))?;
        let oracle = common::oracle_degree(&g);
        check(w.round() as i64 == oracle, || {
            format!("seed {seed}: {w} vs oracle {oracle}")
        })?;
    }
    Ok(format!(
        "{WINDING_MAPS} maps, worst distance to integer {worst:.1e}"
    ))
}

fn ac9_parabolic() -> Outcome {
    let (jac, bderiv) = parabolic_sector_example();
    let v = check_local_invertibility(&jac, &bderiv).map_err(|e| e.to_string())?;
    check(v.locally_invertible, || v.detail.clone())?;
    Ok("locally invertible".into())
}

fn ac10_svg() -> Outcome {
    for name in builtin::NAMES {
        let g = builtin_map(name);
        let d = g.degree().map_err(|e| e.to_string())?;
        for log in [false, true] {
            let svg = svg_string(&g, log, pwlinv::cli::svg::DEFAULT_SAMPLES)
                .map_err(|e| e.to_string())?;
            let w = common::polyline_turning(&common::svg_polyline(&svg)) / TAU;
            check((w - d as f64).abs() < 1e-9, || {
                format!("{name} (log {log}): winding {w}, degree {d}")
            })?;
        }
    }
    Ok("polyline winding equals degree for every builtin".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1 clarke4 example", ac1_clarke4),
        ("AC2 nonconvex degree-two example", ac2_pie4),
        ("AC3 five-cone degree-two example", ac3_pie5),
        (
            "AC4 random maps with few cones are invertible",
            ac4_random_invertible,
        ),
        ("AC5 seed sweep finds collisions", ac5_seed_sweep),
        ("AC6 image sweep bounds", ac6_sweep_bounds),
        ("AC7 two-piece maps in k dimensions", ac7_halfspace),
        ("AC8 winding sums are integers", ac8_winding),
        ("AC9 parabolic sector is locally invertible", ac9_parabolic),
        ("AC10 SVG winding equals degree", ac10_svg),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
