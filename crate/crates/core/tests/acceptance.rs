//! Acceptance suite: one PASS/FAIL line per criterion, every tolerance pinned here.
//!
//! Runs as a plain binary (`harness = false`) so the report is always printed;
//! the process fails if any criterion fails.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specfield::analysis::{
    detect_gap_tips, estimate_constants, p2_modulus, sweep, track_gaps, verify_bounds, HolderEstimate, SpectrumTrace,
    TipKind, TrackOptions, SLACK,
};
use specfield::cli::{build_trace, execute, Command, RunConfig};
use specfield::models::{
    almost_mathieu, field_bound, kohmoto, sample_p2, substitution_field, OperatorField, Param, ParameterSpace, Rational,
    SubstitutionWord, DEFAULT_PER_AXIS,
};
use specfield::operators::{probe_unitary_arc, resolvent_in_gap, Operator, PeriodicJacobi, UnitaryDiag};

/// Agreement tolerance for boolean oracles: cases this close to the decision boundary are not scored.
const BOOL_TOL: f64 = 1e-9;
const HAUSDORFF_TOL: f64 = 1e-6;
const RESOLVENT_TOL: f64 = 1e-9;
const FREE_EDGE_TOL: f64 = 1e-9;
const AM_EXPONENT: (f64, f64) = (0.5, 0.15);
const AM_MIN_R2: f64 = 0.9;
const AM_TIP_TOL: f64 = 1e-6;
const LIPSCHITZ_WINDOW: (f64, f64) = (0.85, 1.15);
const CX_REL_TOL: f64 = 0.05;
const OPENING_MIN_EXPONENT: f64 = 0.5 - 0.15;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_time(outcome: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    match outcome {
        Ok(d) if elapsed > limit => Err(format!("{d}; took {elapsed:.2?} > {limit:?}")),
        o => o,
    }
}

fn config(name: &str) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name);
    RunConfig::from_file(Some(&path), &[]).unwrap()
}

fn builtin_configs() -> Vec<(String, RunConfig)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".toml"))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), config(&n))).collect()
}

fn c1_probe_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut agree, mut scored, mut near) = (0, 0, 0);
    for _ in 0..1000 {
        let a = random_hermitian(&mut rng, 8, 1.0);
        let e = eig(&a);
        let x = rng.gen_range(-6.0..6.0);
        let d = point_set_dist(x, &e);
        let r = rng.gen_range(1e-3..2.0 * d + 0.1);
        let reach = (e[0] - x).abs().max((e[7] - x).abs());
        let m = reach.max(r) + rng.gen_range(1e-3..4.0);
        let probe = Operator::from(a).probe_ball(x, r, m).map_err(|e| e.to_string())?;
        if (d - r).abs() < BOOL_TOL {
            near += 1;
            continue;
        }
        scored += 1;
        agree += (probe == (d >= r)) as usize;
    }
    check(agree == scored && scored + near == 1000, format!("{agree}/{scored} agree, {near} within {BOOL_TOL:e} of the boundary"))
}

fn c2_unitary_probe() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let (mut agree, mut scored) = (0, 0);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let u = UnitaryDiag::new(&phases).unwrap();
        let theta = rng.gen_range(-10.0..10.0);
        let r = rng.gen_range(0.01..1.99);
        // chordal distance |e^{iφ} − e^{iθ}| = 2 |sin((φ − θ)/2)|
        let d = phases.iter().map(|p| 2.0 * ((p - theta) / 2.0).sin().abs()).fold(f64::INFINITY, f64::min);
        if (d - r).abs() < BOOL_TOL {
            continue;
        }
        scored += 1;
        agree += (probe_unitary_arc(&u, theta, r).unwrap() == (d >= r)) as usize;
    }
    check(agree == scored && scored == 1000, format!("{agree}/{scored} agree"))
}

fn c3_hausdorff() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let a = random_dyadic_set(&mut rng, 8, -4.0, 4.0, 10);
        let b = random_dyadic_set(&mut rng, 8, -4.0, 4.0, 10);
        let exact = a.hausdorff(&b).unwrap();
        let brute = brute_hausdorff(&a, &b, 2f64.powi(-11));
        worst = worst.max((exact - brute).abs());
    }
    check(worst <= HAUSDORFF_TOL, format!("500 pairs, max |exact − brute| = {worst:.2e} (tol {HAUSDORFF_TOL:e})"))
}

fn c4_resolvent() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let a = random_hermitian(&mut rng, n, 2.0);
        let e = eig(&a);
        let z = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(1e-3..2.0) * if rng.gen() { 1.0 } else { -1.0 });
        let dist = e.iter().map(|&l| (z - l).norm()).fold(f64::INFINITY, f64::min);
        let rn = Operator::from(a).resolvent_norm(z).map_err(|e| e.to_string())?;
        worst = worst.max((rn * dist - 1.0).abs());
    }
    let mut gap_worst: f64 = 0.0;
    for _ in 0..200 {
        // potential (v, −v): bands ±[|v|, √(v² + 4)], gap (−|v|, |v|)
        let v = rng.gen_range(0.1..2.0);
        let op: Operator = PeriodicJacobi::new(vec![v, -v]).unwrap().into();
        let (a, b) = (-v, v);
        let z = Complex64::new(rng.gen_range(a + 1e-6..b - 1e-6), rng.gen_range(1e-3..1.0));
        let edge = if z.re > 0.0 { b } else { a };
        let formula = 1.0 / ((edge - z.re).powi(2) + z.im * z.im).sqrt();
        let rn = op.resolvent_norm(z).map_err(|e| e.to_string())?;
        let g = resolvent_in_gap(a, b, z).map_err(|e| e.to_string())?;
        gap_worst = gap_worst.max((rn / formula - 1.0).abs()).max((g / formula - 1.0).abs());
    }
    check(
        worst <= RESOLVENT_TOL && gap_worst <= RESOLVENT_TOL,
        format!("max |‖R‖·dist − 1| = {worst:.2e}, gap form max rel err = {gap_worst:.2e} (tol {RESOLVENT_TOL:e})"),
    )
}

fn c5_free() -> Outcome {
    let mut ops: Vec<(String, PeriodicJacobi)> = vec![("periodic [0]".into(), PeriodicJacobi::new(vec![0.0]).unwrap())];
    for t in [Rational::new(1, 3).unwrap(), Rational::new(2, 7).unwrap(), Rational::new(5, 13).unwrap()] {
        ops.push((format!("almost Mathieu mu=0 t={t}"), almost_mathieu(0.0, 0.0, t).unwrap()));
        ops.push((format!("kohmoto lambda=0 t={t}"), kohmoto(0.0, 0.0, t).unwrap()));
    }
    for w in [SubstitutionWord::Fibonacci, SubstitutionWord::PeriodDoubling, SubstitutionWord::ThueMorse] {
        ops.push((format!("{w} lambda=0"), substitution_field(0.0, w, 5).unwrap()));
    }
    let mut worst: f64 = 0.0;
    for (name, op) in &ops {
        let s = Operator::from(op.clone()).spectrum(1e-9).map_err(|e| format!("{name}: {e}"))?;
        if s.len() != 1 {
            return Err(format!("{name}: {} pieces", s.len()));
        }
        let (lo, hi) = s.edges().unwrap();
        worst = worst.max((lo + 2.0).abs()).max((hi - 2.0).abs());
    }
    check(worst < FREE_EDGE_TOL, format!("{} operators give [−2, 2], max edge error {worst:.2e} (tol {FREE_EDGE_TOL:e})", ops.len()))
}

/// `1/2 ± 1/(2q)` for `8 ≤ q ≤ 64`, as in the built-in `am_closing` sweep.
fn am_closing_trace() -> (ParameterSpace, SpectrumTrace) {
    let cfg = config("am_closing.toml");
    assert_eq!((cfg.grid.q_min, cfg.grid.q_max), (8, 64));
    let grid = cfg.grid().unwrap();
    let trace = sweep(&OperatorField::almost_mathieu_hull(1.0), &grid, cfg.tolerances.merge_tol).unwrap();
    (grid, trace)
}

fn c6_am_closing(grid: &ParameterSpace, trace: &SpectrumTrace) -> Outcome {
    let tracks = track_gaps(trace, &TrackOptions::default()).map_err(|e| e.to_string())?;
    let tips = detect_gap_tips(&tracks, trace, 1e-3);
    let half = Param::Rational(Rational::new(1, 2).unwrap());
    let tip = tips
        .iter()
        .find(|t| t.t == half && t.c.abs() < AM_TIP_TOL && t.kind == TipKind::Closure)
        .ok_or_else(|| format!("no closure tip at (1/2, 0) among {} tips", tips.len()))?;
    let pairs: Vec<(f64, f64)> = tip
        .tracks
        .iter()
        .flat_map(|&k| tracks[k].samples.iter())
        .map(|s| (grid.log_dist(s.index, tip.index), s.gap.width()))
        .collect();
    let fit = HolderEstimate::fit(&pairs).map_err(|e| e.to_string())?;
    check(
        (fit.alpha - AM_EXPONENT.0).abs() <= AM_EXPONENT.1 && fit.r_squared >= AM_MIN_R2,
        format!(
            "tip at (1/2, {:+.1e}), width exponent {:.4} (want {}±{}), r² {:.4} (min {AM_MIN_R2}), {} samples",
            tip.c, fit.alpha, AM_EXPONENT.0, AM_EXPONENT.1, fit.r_squared, fit.n_points
        ),
    )
}

fn c7_lipschitz() -> Outcome {
    let field = OperatorField::almost_mathieu_hull(1.0);
    let grid = ParameterSpace::farey(0.18, 0.22, 40).unwrap();
    let m = field_bound(&field, &grid).unwrap();
    let big_m = 4.0 * m * m + 2.0;
    let polys = sample_p2(big_m, DEFAULT_PER_AXIS).unwrap();
    let est = p2_modulus(&field, &grid, big_m, &polys).map_err(|e| e.to_string())?;
    check(
        est.alpha >= LIPSCHITZ_WINDOW.0 && est.alpha <= LIPSCHITZ_WINDOW.1,
        format!("{} rationals in [0.18, 0.22], alpha {:.4} (window {:?}), r² {:.4}", grid.len(), est.alpha, LIPSCHITZ_WINDOW, est.r_squared),
    )
}

fn c8_hausdorff_bound() -> Outcome {
    let mut lines = Vec::new();
    let mut total_viol = 0;
    for (name, cfg) in builtin_configs() {
        let trace = build_trace(&cfg).map_err(|e| format!("{name}: {e}"))?;
        let field = if cfg.is_counterexample() { None } else { Some(cfg.field().unwrap()) };
        let k = estimate_constants(&trace, field.as_ref()).map_err(|e| format!("{name}: {e}"))?.constants;
        let (mut pairs, mut viol) = (0, 0);
        for i in 0..trace.len() {
            for j in i + 1..trace.len() {
                let dh = trace.spectra()[i].hausdorff(&trace.spectra()[j]).unwrap();
                let rhs = k.c_main.sqrt() * (0.5 * k.alpha * trace.grid().log_dist(i, j)).exp() * (1.0 + SLACK);
                pairs += 1;
                viol += (dh > rhs && dh > 0.0) as usize;
            }
        }
        total_viol += viol;
        lines.push(format!("{}: {viol}/{pairs}", name.trim_end_matches(".toml")));
    }
    check(total_viol == 0, format!("violations per sweep: {}", lines.join(", ")))
}

fn c9_closing_bound(trace: &SpectrumTrace) -> Outcome {
    let field = OperatorField::almost_mathieu_hull(1.0);
    let k = estimate_constants(trace, Some(&field)).map_err(|e| e.to_string())?.constants;
    let tracks = track_gaps(trace, &TrackOptions::default()).map_err(|e| e.to_string())?;
    let tips = detect_gap_tips(&tracks, trace, 1e-3);
    let (mut checked, mut viol) = (0, 0);
    for tip in tips.iter().filter(|t| t.kind == TipKind::Closure) {
        for &tk in &tip.tracks {
            for s in tracks[tk].samples.iter().filter(|s| s.index != tip.index) {
                let rhs = 2.0 * k.c_main.sqrt() * (0.5 * k.alpha * trace.grid().log_dist(s.index, tip.index)).exp();
                checked += 1;
                viol += (s.gap.width() > rhs * (1.0 + SLACK)) as usize;
            }
        }
    }
    let report = verify_bounds(trace, &tracks, &tips, &k).map_err(|e| e.to_string())?;
    let iv = report.checks.iter().find(|c| c.check == "iv").unwrap();
    check(
        viol == 0 && iv.n_violations == 0 && checked > 0,
        format!(
            "C = {:.4e}, alpha = {:.4}: {viol}/{checked} closing-track samples violate; checker: {}/{}",
            k.c_main, k.alpha, iv.n_violations, iv.n_checked
        ),
    )
}

fn c10_counterexample() -> Outcome {
    let out = execute(Command::Counterexample, &config("counterexample.toml")).map_err(|e| e.to_string())?;
    let v: serde_json::Value = serde_json::from_str(out.file("counterexample.json").unwrap()).unwrap();
    let w = v["width_fit"]["alpha"].as_f64().unwrap();
    let h = v["hausdorff_fit"]["alpha"].as_f64().unwrap();
    let tip = &v["tips"][0];
    let non_isolated = tip["isolated"] == false && (tip["c"].as_f64().unwrap() - 2.0).abs() < 1e-9;
    check(
        (w / 0.25 - 1.0).abs() <= CX_REL_TOL && (h / 0.5 - 1.0).abs() <= CX_REL_TOL && non_isolated,
        format!("width exponent {w:.4} (0.25 ± 5%), Hausdorff exponent {h:.4} (0.5 ± 5%), tip at c = {} isolated = {}", tip["c"], tip["isolated"]),
    )
}

fn c11_opening() -> Outcome {
    let cfg = config("period_doubling.toml");
    let trace = build_trace(&cfg).map_err(|e| e.to_string())?;
    let tracks = track_gaps(&trace, &cfg.track_options()).map_err(|e| e.to_string())?;
    let mut exps = Vec::new();
    for tr in tracks.iter() {
        let Some(open) = tr.opened_at else { continue };
        let pairs: Vec<(f64, f64)> =
            tr.samples.iter().map(|s| (trace.grid().log_dist(s.index, open.index), s.gap.width())).collect();
        if let Ok(fit) = HolderEstimate::fit(&pairs) {
            exps.push(fit.alpha);
        }
    }
    let min = exps.iter().copied().fold(f64::INFINITY, f64::min);
    check(
        !exps.is_empty() && min >= OPENING_MIN_EXPONENT,
        format!("{} opening tracks fitted, min width exponent {min:.4} (need >= {OPENING_MIN_EXPONENT})", exps.len()),
    )
}

fn c12_determinism() -> Outcome {
    let runs = [
        (Command::Spectrum, "am_closing.toml"),
        (Command::Gaps, "am_closing.toml"),
        (Command::Holder, "am_lipschitz.toml"),
        (Command::Verify, "constant.toml"),
        (Command::Sweep, "period_doubling.toml"),
        (Command::Counterexample, "counterexample.toml"),
    ];
    let mut n_files = 0;
    for (cmd, name) in runs {
        let cfg = config(name);
        let a = execute(cmd, &cfg).map_err(|e| e.to_string())?;
        let b = execute(cmd, &cfg).map_err(|e| e.to_string())?;
        if a.files != b.files {
            return Err(format!("{} on {name} differs between runs", cmd.name()));
        }
        n_files += a.files.len();
    }
    Ok(format!("{n_files} CSV/JSON outputs byte-identical across two runs"))
}

fn main() {
    let secs = Duration::from_secs;
    let (grid, am_trace) = am_closing_trace();
    let criteria: Vec<Criterion> = vec![
        ("probe equivalence", secs(10), Box::new(c1_probe_equivalence)),
        ("unitary probe", secs(5), Box::new(c2_unitary_probe)),
        ("Hausdorff oracle", secs(10), Box::new(c3_hausdorff)),
        ("resolvent formula", secs(5), Box::new(c4_resolvent)),
        ("free spectrum", secs(5), Box::new(c5_free)),
        ("AM gap closing exponent", secs(300), Box::new(|| c6_am_closing(&grid, &am_trace))),
        ("AM p2-Lipschitz", secs(300), Box::new(c7_lipschitz)),
        ("Hausdorff Hölder bound", secs(300), Box::new(c8_hausdorff_bound)),
        ("closing-gap bound", secs(300), Box::new(|| c9_closing_bound(&am_trace))),
        ("counterexample exponents", secs(10), Box::new(c10_counterexample)),
        ("substitution gap opening", secs(300), Box::new(c11_opening)),
        ("determinism", secs(300), Box::new(c12_determinism)),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = within_time(run(), start.elapsed(), *limit);
        let elapsed = start.elapsed();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += outcome.is_err() as usize;
        println!("{tag} {:>2} {name}: {detail} [{elapsed:.2?}]", k + 1);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
