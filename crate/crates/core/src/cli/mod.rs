//! Reproducible runs: a TOML config (plus `--set` overrides) in, CSV and JSON files out.
//!
//! Every output embeds the resolved config and the crate version; identical configs
//! give byte-identical files. Exit codes: 0 success, 1 usage or config error,
//! 2 bound violation (`verify` only).

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{CounterexampleSpec, GridSpec, HolderSpec, ModelSpec, OutputSpec, RunConfig, Tolerances, TrackingSpec, VerifySpec};

use crate::analysis::{
    check_edge_continuity, detect_gap_tips, estimate_constants, p2_modulus, p2_modulus_sets, spectral_probes, spectrum_modulus, sweep,
    track_gaps, verify_bounds, HolderEstimate, SpectrumTrace,
};
use crate::error::{Error, Result};
use crate::hyperspace::CompactSet;
use crate::models::{counterexample_family, sample_p2, CounterexampleConfig, CounterexampleFamily};
use crate::VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

/// The six subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Spectrum of the model at `model.t`.
    Spectrum,
    /// Spectra over the grid, with gap tracks.
    Sweep,
    /// Gap tracks and gap tips.
    Gaps,
    /// Hölder fits of `t ↦ ‖p(A_t)‖` and of `t ↦ σ(A_t)`.
    Holder,
    /// Checks every bound; exits 2 on a violation.
    Verify,
    /// The slowly closing nested-set family.
    Counterexample,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Sweep => "sweep",
            Command::Gaps => "gaps",
            Command::Holder => "holder",
            Command::Verify => "verify",
            Command::Counterexample => "counterexample",
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run config.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Override a config entry, e.g. `--set grid.q_max=20`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory (overrides `output.dir`).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "specfield", version, about = "Spectra of operator fields: sweeps, gap tracking and Hölder bounds")]
struct RawCli {
    #[command(subcommand)]
    command: RawCommand,
}

#[derive(Debug, Subcommand)]
enum RawCommand {
    /// Spectrum of the model at `model.t`.
    Spectrum(Common),
    /// Spectra over the grid, with gap tracks.
    Sweep(Common),
    /// Gap tracks and gap tips.
    Gaps(Common),
    /// Hölder fits of `t ↦ ‖p(A_t)‖` and of `t ↦ σ(A_t)`.
    Holder(Common),
    /// Checks every bound; exits 2 on a violation.
    Verify(Common),
    /// The slowly closing nested-set family.
    Counterexample(Common),
}

/// Files produced by a command, plus a human summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    /// `(file name, contents)`.
    pub files: Vec<(String, String)>,
    pub summary: String,
    pub violations: usize,
}

impl CommandOutput {
    pub fn exit_code(&self) -> i32 {
        if self.violations > 0 {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        }
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, contents) in &self.files {
            std::fs::write(dir.join(name), contents)?;
        }
        Ok(())
    }
}

/// Parses arguments, runs the command, writes its files; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match RawCli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (command, common) = match cli.command {
        RawCommand::Spectrum(c) => (Command::Spectrum, c),
        RawCommand::Sweep(c) => (Command::Sweep, c),
        RawCommand::Gaps(c) => (Command::Gaps, c),
        RawCommand::Holder(c) => (Command::Holder, c),
        RawCommand::Verify(c) => (Command::Verify, c),
        RawCommand::Counterexample(c) => (Command::Counterexample, c),
    };
    let mut overrides = common.set.clone();
    if command == Command::Counterexample {
        overrides.insert(0, "model.name=counterexample".into());
    }
    if let Some(out) = &common.out {
        overrides.push(format!("output.dir={}", toml::Value::String(out.display().to_string())));
    }
    let run = RunConfig::from_file(common.config.as_deref(), &overrides).and_then(|cfg| {
        let out = execute(command, &cfg)?;
        out.write_to(Path::new(&cfg.output.dir))?;
        Ok((cfg, out))
    });
    match run {
        Ok((cfg, out)) => {
            // a closed pipe must not turn a finished run into a failure
            let mut so = std::io::stdout().lock();
            let _ = write!(so, "{}", out.summary);
            let _ = writeln!(so, "wrote {} file(s) to {}", out.files.len(), cfg.output.dir);
            out.exit_code()
        }
        Err(e) => {
            eprintln!("specfield {}: {e}", command.name());
            EXIT_USAGE
        }
    }
}

/// Runs a command without touching the file system.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<CommandOutput> {
    match command {
        Command::Spectrum => cmd_spectrum(cfg),
        Command::Sweep => cmd_sweep(cfg),
        Command::Gaps => cmd_gaps(cfg),
        Command::Holder => cmd_holder(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Counterexample => cmd_counterexample(cfg),
    }
}

fn header(command: Command, cfg: &RunConfig) -> Value {
    json!({ "tool": "specfield", "version": VERSION, "command": command.name(), "config": cfg })
}

fn json_file(name: &str, command: Command, cfg: &RunConfig, body: Value) -> Result<(String, String)> {
    let mut doc = header(command, cfg);
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    Ok((name.to_string(), serde_json::to_string_pretty(&doc)? + "\n"))
}

fn csv_file(name: &str, command: Command, cfg: &RunConfig, body: &str) -> Result<(String, String)> {
    let head = serde_json::to_string(&header(command, cfg))?;
    Ok((name.to_string(), format!("# {head}\n{body}")))
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn family(cfg: &RunConfig) -> Result<CounterexampleFamily> {
    counterexample_family(&CounterexampleConfig::from(&cfg.counterexample))
}

/// The trace named by the config, before any fault injection.
pub fn build_trace(cfg: &RunConfig) -> Result<SpectrumTrace> {
    if cfg.is_counterexample() {
        SpectrumTrace::from_family(&family(cfg)?, cfg.tolerances.merge_tol)
    } else {
        sweep(&cfg.field()?, &cfg.grid()?, cfg.tolerances.merge_tol)
    }
}

fn describe(s: &CompactSet) -> String {
    let iv: Vec<String> = s.intervals().iter().map(|[a, b]| format!("[{a:.6}, {b:.6}]")).collect();
    iv.join(" ∪ ")
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<CommandOutput> {
    let cmd = Command::Spectrum;
    let raw = cfg.model.t.as_deref().ok_or_else(|| Error::Config("model.t: spectrum needs a parameter".into()))?;
    let t = cfg.parse_param(raw)?;
    let (spectrum, norm) = if cfg.is_counterexample() {
        let fam = family(cfg)?;
        let i = fam.grid.points().iter().position(|p| *p == t).ok_or_else(|| Error::Config(format!("model.t: {t} is beyond counterexample.n")))?;
        let s = fam.sets[i].clone();
        let (lo, hi) = s.edges()?;
        (s, lo.abs().max(hi.abs()))
    } else {
        let op = cfg.field()?.at(&t)?;
        (op.spectrum(cfg.tolerances.merge_tol)?, op.op_norm()?)
    };
    let edges = spectrum.edges()?;
    let gaps = spectrum.gaps()?;
    let mut summary = String::new();
    writeln!(summary, "t = {t}: {} band(s), edges [{:.12}, {:.12}], ‖A‖ = {norm:.12}", spectrum.len(), edges.0, edges.1).ok();
    for g in &gaps {
        writeln!(summary, "  gap ({:.12}, {:.12}), width {:.3e}", g.a, g.b, g.width()).ok();
    }
    let body = json!({
        "t": t,
        "n_bands": spectrum.len(),
        "edges": [edges.0, edges.1],
        "op_norm": norm,
        "gaps": gaps,
        "spectrum": spectrum,
    });
    Ok(CommandOutput {
        files: vec![json_file("spectrum.json", cmd, cfg, body)?, csv_file("spectrum.csv", cmd, cfg, &spectrum.to_csv())?],
        summary,
        violations: 0,
    })
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<CommandOutput> {
    let cmd = Command::Sweep;
    let trace = build_trace(cfg)?;
    let tracks = track_gaps(&trace, &cfg.track_options())?;
    let mut summary = String::new();
    writeln!(summary, "{} grid point(s), m = {:.6}, {} gap track(s)", trace.len(), trace.m(), tracks.len()).ok();
    for (t, s) in trace.grid().points().iter().zip(trace.spectra()).take(40) {
        writeln!(summary, "  t = {t:<10} {} band(s): {}", s.len(), truncate(&describe(s), 100)).ok();
    }
    let body = json!({
        "grid": trace.grid(),
        "m": trace.m(),
        "n_tracks": tracks.len(),
        "tracks": tracks,
    });
    Ok(CommandOutput {
        files: vec![csv_file("trace.csv", cmd, cfg, &trace.to_csv())?, json_file("tracks.json", cmd, cfg, body)?],
        summary,
        violations: 0,
    })
}

fn truncate(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.to_string()
    } else {
        s.chars().take(n).collect::<String>() + " …"
    }
}

pub fn cmd_gaps(cfg: &RunConfig) -> Result<CommandOutput> {
    let cmd = Command::Gaps;
    let trace = build_trace(cfg)?;
    let tracks = track_gaps(&trace, &cfg.track_options())?;
    let tips = detect_gap_tips(&tracks, &trace, cfg.isolation_delta());
    let mut summary = String::new();
    writeln!(summary, "{} gap track(s), {} gap tip(s)", tracks.len(), tips.len()).ok();
    for tip in tips.iter().take(40) {
        writeln!(summary, "  tip at t = {}, c = {:+.9}, isolated = {}, {:?}", tip.t, tip.c, tip.isolated, tip.kind).ok();
    }
    let mut csv = String::from("track,t,a,b,width\n");
    for (k, tr) in tracks.iter().enumerate() {
        for s in &tr.samples {
            writeln!(csv, "{k},{},{},{},{}", s.t, s.gap.a, s.gap.b, s.gap.width()).ok();
        }
    }
    let body = json!({ "tracks": tracks, "tips": tips });
    Ok(CommandOutput {
        files: vec![json_file("gaps.json", cmd, cfg, body)?, csv_file("gaps.csv", cmd, cfg, &csv)?],
        summary,
        violations: 0,
    })
}

pub fn cmd_holder(cfg: &RunConfig) -> Result<CommandOutput> {
    let cmd = Command::Holder;
    let trace = build_trace(cfg)?;
    let m = trace.m();
    let big_m = cfg.holder.big_m.unwrap_or(4.0 * m * m + 2.0);
    let mut polys = sample_p2(big_m, cfg.holder.per_axis)?;
    if cfg.holder.spectral_probes && big_m >= 4.0 * m * m + 2.0 {
        polys.extend(spectral_probes(&trace, m)?);
    }
    let p2 = if cfg.is_counterexample() {
        p2_modulus_sets(&trace, big_m, &polys)?
    } else {
        p2_modulus(&cfg.field()?, trace.grid(), big_m, &polys)?
    };
    let spec = spectrum_modulus(&trace)?;
    let ratio = ratio(&spec, &p2);
    let mut summary = String::new();
    writeln!(summary, "M = {big_m:.6}, {} polynomial(s)", polys.len()).ok();
    writeln!(summary, "p2 modulus:       {}", fmt_fit(&p2)).ok();
    writeln!(summary, "spectrum modulus: {}", fmt_fit(&spec)).ok();
    writeln!(summary, "alpha_spec / alpha_p2 = {}", fmt_num(ratio)).ok();
    let body = json!({
        "m": m,
        "big_m": big_m,
        "n_polys": polys.len(),
        "p2": p2,
        "spectrum": spec,
        "ratio": num(ratio),
    });
    Ok(CommandOutput { files: vec![json_file("holder.json", cmd, cfg, body)?], summary, violations: 0 })
}

fn ratio(spec: &HolderEstimate, p2: &HolderEstimate) -> f64 {
    if spec.is_degenerate() || p2.is_degenerate() {
        f64::NAN
    } else {
        spec.alpha / p2.alpha
    }
}

/// JSON number, or `"inf"`/`"nan"` for non-finite values.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(fmt_num(x))
    }
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.6}")
    }
}

fn fmt_fit(h: &HolderEstimate) -> String {
    if h.is_degenerate() {
        return "degenerate (all differences below the noise floor): alpha = inf, C = 0".into();
    }
    format!(
        "alpha = {:.4}, C = {:.4e} (sup {:.4e}), r² = {:.4}, {} pairs",
        h.alpha, h.constant, h.sup_constant, h.r_squared, h.n_points
    )
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput> {
    let cmd = Command::Verify;
    let clean = build_trace(cfg)?;
    let field = if cfg.is_counterexample() { None } else { Some(cfg.field()?) };
    let est = estimate_constants(&clean, field.as_ref())?;
    let eps = cfg.tolerances.eps;
    let (trace, fault) = match cfg.verify.fault_index {
        Some(i) => {
            let shift = cfg.verify.fault_shift.unwrap_or(10.0 * eps);
            let t = clean.with_shifted(i, shift).map_err(|e| Error::Config(format!("verify.fault_index: {e}")))?;
            (t, json!({ "index": i, "t": clean.param(i), "shift": shift }))
        }
        None => (clean, Value::Null),
    };
    let tracks = track_gaps(&trace, &cfg.track_options())?;
    let tips = detect_gap_tips(&tracks, &trace, cfg.isolation_delta());
    let report = verify_bounds(&trace, &tracks, &tips, &est.constants)?;
    let k = est.constants;
    let modulus = (!est.fit.is_degenerate()).then_some((k.c_edge, k.alpha));
    let edges = check_edge_continuity(&trace, eps, modulus)?;

    let mut summary = String::new();
    writeln!(
        summary,
        "alpha = {}, C_main = {}, C_edge = {} ({} + {} polynomials)",
        fmt_num(k.alpha),
        fmt_num(k.c_main),
        fmt_num(k.c_edge),
        est.n_main_polys,
        est.n_edge_polys
    )
    .ok();
    for c in &report.checks {
        writeln!(summary, "  ({:>3}) {:<50} {:>7} checked, {} violation(s)", c.check, c.statement, c.n_checked, c.n_violations).ok();
    }
    for cl in &report.closures {
        if let Some(f) = cl.width_fit.filter(|f| !f.is_degenerate()) {
            writeln!(summary, "  tip t = {}, c = {:+.6}: width exponent {:.4} (r² = {:.4}, {} samples)", cl.t, cl.c, f.alpha, f.r_squared, cl.n_samples).ok();
        }
    }
    writeln!(summary, "  edge continuity (report only): G1 {} / G2 {} / G3 {} violation(s)", edges.count("G1"), edges.count("G2"), edges.count("G3")).ok();
    for v in report.violations.iter().take(20) {
        writeln!(summary, "VIOLATION ({}) at s = {}, t = {}: {:.6e} > {:.6e} [{}]", v.check, v.s, v.t, v.lhs, v.rhs, v.detail).ok();
    }
    if report.violations.len() > 20 {
        writeln!(summary, "... {} more violation(s) in verify.json", report.violations.len() - 20).ok();
    }
    let body = json!({
        "passed": report.passed(),
        "fault": fault,
        "estimate": est,
        "bounds": report,
        "edge_continuity": edges,
        "tips": tips,
    });
    Ok(CommandOutput {
        files: vec![json_file("verify.json", cmd, cfg, body)?],
        summary,
        violations: report.violations.len(),
    })
}

pub fn cmd_counterexample(cfg: &RunConfig) -> Result<CommandOutput> {
    let cmd = Command::Counterexample;
    let fam = family(cfg)?;
    let trace = SpectrumTrace::from_family(&fam, cfg.tolerances.merge_tol)?;
    let c = &fam.config;
    let grid = &fam.grid;
    let inf = grid.len() - 1;

    // widths of the gaps as materialized, against d(n, ∞)
    let measured: Vec<(f64, f64)> =
        fam.gaps.iter().filter(|g| g.resolved).map(|g| (grid.log_dist(g.n as usize, inf), g.b - g.a)).collect();
    let width_fit = HolderEstimate::fit(&measured)?;
    let exact_width = log_slope(&(1..=c.n).map(|n| (c.log_dist_to_limit(n), c.log_width(n))).collect::<Vec<_>>());
    let hd: Vec<(f64, f64)> =
        (0..inf).map(|n| Ok((grid.log_dist(n, inf), fam.sets[n].hausdorff(&fam.sets[inf])?))).collect::<Result<_>>()?;
    let hausdorff_fit = HolderEstimate::fit(&hd)?;
    let tracks = track_gaps(&trace, &cfg.track_options())?;
    let tips = detect_gap_tips(&tracks, &trace, cfg.isolation_delta());

    let mut summary = String::new();
    writeln!(summary, "N = {}, {} gap(s) resolvable in double precision", c.n, fam.resolved_count()).ok();
    writeln!(summary, "width exponent vs d(n, inf):     {:.6} (exact law {:.6}, predicted alpha/(2 kappa) = {:.6})", width_fit.alpha, exact_width, c.alpha / (2.0 * c.kappa)).ok();
    writeln!(summary, "Hausdorff exponent vs d(n, inf): {:.6} (predicted alpha/2 = {:.6})", hausdorff_fit.alpha, c.alpha / 2.0).ok();
    for tip in &tips {
        writeln!(summary, "tip at t = {}, c = {:.12}, isolated = {}, {:?}", tip.t, tip.c, tip.isolated, tip.kind).ok();
    }
    let exact: Vec<Value> = (1..=c.n)
        .map(|n| json!({ "n": n, "log_width": c.log_width(n), "log_dist_to_limit": c.log_dist_to_limit(n) }))
        .collect();
    let body = json!({
        "gaps": fam.gaps,
        "exact": exact,
        "width_fit": width_fit,
        "exact_width_exponent": exact_width,
        "hausdorff_fit": hausdorff_fit,
        "predicted": { "width_exponent": c.alpha / (2.0 * c.kappa), "hausdorff_exponent": c.alpha / 2.0 },
        "sets": fam.grid.points().iter().zip(&fam.sets).map(|(t, s)| json!({ "t": t, "set": s })).collect::<Vec<_>>(),
        "tracks": to_value(&tracks)?,
        "tips": tips,
    });
    Ok(CommandOutput {
        files: vec![json_file("counterexample.json", cmd, cfg, body)?, csv_file("counterexample.csv", cmd, cfg, &trace.to_csv())?],
        summary,
        violations: 0,
    })
}

/// Least-squares slope through `(x, y)`.
fn log_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::from_toml(text, &[]).unwrap()
    }

    #[test]
    fn spectrum_of_free_model() {
        let c = cfg("[model]\nname = \"substitution\"\nt = \"0\"\n");
        let out = cmd_spectrum(&c).unwrap();
        let set = CompactSet::from_csv(out.file("spectrum.csv").unwrap()).unwrap();
        let (lo, hi) = set.edges().unwrap();
        assert!(set.len() == 1 && (lo + 2.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
        assert!(out.file("spectrum.json").unwrap().contains("\"version\""));
    }

    #[test]
    fn spectrum_needs_t() {
        let e = cmd_spectrum(&cfg("[model]\nname = \"free\"\n")).unwrap_err();
        assert!(e.to_string().contains("model.t"));
    }

    #[test]
    fn holder_on_constant_field_is_degenerate() {
        let c = cfg("[model]\nname = \"periodic\"\npotential = [1.0, -1.0]\n[grid]\nq_max = 4\n");
        let out = cmd_holder(&c).unwrap();
        let j: Value = serde_json::from_str(out.file("holder.json").unwrap()).unwrap();
        assert_eq!(j["p2"]["alpha"], "inf");
        assert_eq!(j["p2"]["constant"], 0.0);
        assert_eq!(out.exit_code(), EXIT_OK);
    }

    #[test]
    fn log_slope_of_line() {
        assert!((log_slope(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]) - 2.0).abs() < 1e-15);
    }
}
