use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::TrackOptions;
use crate::error::{Error, Result};
use crate::models::{CounterexampleConfig, Irrational, OperatorField, Param, ParameterSpace, Rational, SubstitutionWord};
use crate::operators::PeriodicJacobi;

/// Everything a run depends on; echoed verbatim into every output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub tracking: TrackingSpec,
    #[serde(default)]
    pub holder: HolderSpec,
    #[serde(default)]
    pub verify: VerifySpec,
    #[serde(default)]
    pub counterexample: CounterexampleSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSpec {
    /// `almost_mathieu`, `almost_mathieu_hull`, `kohmoto`, `substitution`,
    /// `periodic`, `free` or `counterexample`.
    pub name: String,
    pub mu: f64,
    pub theta: f64,
    pub lambda: f64,
    pub word: String,
    pub level: u32,
    /// One period of the potential, for `periodic`.
    pub potential: Vec<f64>,
    /// The parameter `spectrum` evaluates at.
    pub t: Option<String>,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            name: String::new(),
            mu: 1.0,
            theta: 0.0,
            lambda: 1.0,
            word: "fibonacci".into(),
            level: 5,
            potential: Vec::new(),
            t: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    /// `farey`, `symmetric_approach`, `dyadic`, `list` or `convergents`.
    pub kind: String,
    pub lo: f64,
    pub hi: f64,
    pub center: String,
    pub q_min: i64,
    pub q_max: i64,
    pub k_min: i32,
    pub k_max: i32,
    pub include_zero: bool,
    pub points: Vec<String>,
    pub irrational: String,
    pub depth: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            kind: "farey".into(),
            lo: 0.0,
            hi: 1.0,
            center: "1/2".into(),
            q_min: 1,
            q_max: 12,
            k_min: 1,
            k_max: 10,
            include_zero: true,
            points: Vec::new(),
            irrational: "golden_mean".into(),
            depth: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub merge_tol: f64,
    /// Defaults to `10 · merge_tol`.
    pub width_tol: Option<f64>,
    pub eps: f64,
    /// Defaults to `eps`.
    pub isolation_delta: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { merge_tol: 1e-9, width_tol: None, eps: 1e-3, isolation_delta: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrackingSpec {
    pub match_radius: Option<f64>,
    pub width_ratio: f64,
}

impl Default for TrackingSpec {
    fn default() -> Self {
        Self { match_radius: None, width_ratio: TrackOptions::default().width_ratio }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HolderSpec {
    pub per_axis: usize,
    /// Radius `M` of the polynomial ball; defaults to `4m² + 2`.
    pub big_m: Option<f64>,
    /// Add ball probes centred on the spectra's edges and gaps (when `M ≥ 4m² + 2`).
    pub spectral_probes: bool,
}

impl Default for HolderSpec {
    fn default() -> Self {
        Self { per_axis: crate::models::DEFAULT_PER_AXIS, big_m: None, spectral_probes: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySpec {
    /// Translate the spectrum at this grid index before checking (fault injection).
    pub fault_index: Option<usize>,
    /// Size of the injected shift; defaults to `10 · eps`.
    pub fault_shift: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleSpec {
    pub c: f64,
    pub m: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub big_c: f64,
    pub n: u32,
}

impl Default for CounterexampleSpec {
    fn default() -> Self {
        let d = CounterexampleConfig::default();
        Self { c: d.c, m: d.m, kappa: d.kappa, alpha: d.alpha, big_c: d.big_c, n: d.n }
    }
}

impl From<&CounterexampleSpec> for CounterexampleConfig {
    fn from(s: &CounterexampleSpec) -> Self {
        CounterexampleConfig { c: s.c, m: s.m, kappa: s.kappa, alpha: s.alpha, big_c: s.big_c, n: s.n }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: "out".into() }
    }
}

fn cfg_err(key: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{key}: {msg}"))
}

impl RunConfig {
    /// Parses TOML text, applies `section.key=value` overrides, then validates.
    pub fn from_toml(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        for ov in overrides {
            apply_override(&mut table, ov)?;
        }
        let cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::from_toml(&text, overrides)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (key, v) in [
            ("tolerances.merge_tol", Some(t.merge_tol)),
            ("tolerances.eps", Some(t.eps)),
            ("tolerances.width_tol", t.width_tol),
            ("tolerances.isolation_delta", t.isolation_delta),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(cfg_err(key, format!("must be a positive number, got {v}")));
                }
            }
        }
        if let Some(r) = self.tracking.match_radius {
            if !(r > 0.0) {
                return Err(cfg_err("tracking.match_radius", format!("must be positive, got {r}")));
            }
        }
        if !(self.tracking.width_ratio >= 1.0) {
            return Err(cfg_err("tracking.width_ratio", "must be at least 1"));
        }
        if self.holder.per_axis < 2 {
            return Err(cfg_err("holder.per_axis", "must be at least 2"));
        }
        if self.model.name.is_empty() {
            return Err(cfg_err("model.name", "missing"));
        }
        if self.model.name == "counterexample" {
            CounterexampleConfig::from(&self.counterexample).validate().map_err(|e| cfg_err("counterexample", e))?;
        } else {
            self.field()?;
            let grid = self.grid()?;
            if grid.is_empty() {
                return Err(cfg_err("grid", "no parameter points"));
            }
        }
        Ok(())
    }

    pub fn is_counterexample(&self) -> bool {
        self.model.name == "counterexample"
    }

    pub fn track_options(&self) -> TrackOptions {
        TrackOptions {
            match_radius: self.tracking.match_radius,
            width_tol: self.tolerances.width_tol,
            width_ratio: self.tracking.width_ratio,
        }
    }

    pub fn isolation_delta(&self) -> f64 {
        self.tolerances.isolation_delta.unwrap_or(self.tolerances.eps)
    }

    /// The operator field named by `[model]`; not available for `counterexample`.
    pub fn field(&self) -> Result<OperatorField> {
        let m = &self.model;
        let finite = |key: &str, v: f64| if v.is_finite() { Ok(v) } else { Err(cfg_err(key, "must be finite")) };
        Ok(match m.name.as_str() {
            "almost_mathieu" => OperatorField::almost_mathieu(finite("model.mu", m.mu)?, finite("model.theta", m.theta)?),
            "almost_mathieu_hull" => {
                if !(m.mu > 0.0 && m.mu <= 1.0) {
                    return Err(cfg_err("model.mu", format!("almost_mathieu_hull needs 0 < mu <= 1, got {}", m.mu)));
                }
                OperatorField::almost_mathieu_hull(m.mu)
            }
            "kohmoto" => OperatorField::kohmoto(finite("model.lambda", m.lambda)?, finite("model.theta", m.theta)?),
            "substitution" => {
                let word: SubstitutionWord = m.word.parse().map_err(|e| cfg_err("model.word", e))?;
                word.word(m.level).map_err(|e| cfg_err("model.level", e))?;
                OperatorField::substitution(word, m.level)
            }
            "periodic" => {
                let p = PeriodicJacobi::new(m.potential.clone()).map_err(|e| cfg_err("model.potential", e))?;
                OperatorField::constant(p.into())
            }
            "free" => OperatorField::constant(PeriodicJacobi::new(vec![0.0])?.into()),
            "counterexample" => return Err(cfg_err("model.name", "counterexample is a family of sets, not an operator field")),
            other => return Err(cfg_err("model.name", format!("unknown model `{other}`"))),
        })
    }

    /// Parameters of substitution models are couplings; the others are frequencies.
    fn real_parameters(&self) -> bool {
        matches!(self.model.name.as_str(), "substitution" | "periodic" | "free")
    }

    pub fn parse_param(&self, s: &str) -> Result<Param> {
        let s = s.trim();
        if self.is_counterexample() {
            if s == "inf" {
                return Ok(Param::Infinity);
            }
            return s.parse::<u32>().map(Param::Index).map_err(|_| cfg_err("parameter", format!("`{s}` is not in N ∪ {{inf}}")));
        }
        if self.real_parameters() {
            if let Ok(x) = s.parse::<f64>() {
                return Ok(Param::Real(x));
            }
            let r: Rational = s.parse().map_err(|e| cfg_err("parameter", e))?;
            return Ok(Param::Real(r.value()));
        }
        s.parse::<Rational>().map(Param::Rational).map_err(|e| cfg_err("parameter", e))
    }

    pub fn grid(&self) -> Result<ParameterSpace> {
        let g = &self.grid;
        let wrap = |e: Error| cfg_err("grid", e);
        match g.kind.as_str() {
            "farey" => ParameterSpace::farey(g.lo, g.hi, g.q_max).map_err(wrap),
            "symmetric_approach" => {
                let c: Rational = g.center.parse().map_err(|e| cfg_err("grid.center", e))?;
                ParameterSpace::symmetric_approach(c, g.q_min, g.q_max).map_err(wrap)
            }
            "dyadic" => ParameterSpace::dyadic(g.k_min, g.k_max, g.include_zero).map_err(wrap),
            "list" => {
                let pts = g.points.iter().map(|s| self.parse_param(s)).collect::<Result<Vec<_>>>()?;
                ParameterSpace::euclidean(pts).map_err(wrap)
            }
            "convergents" => {
                let x: Irrational = g.irrational.parse().map_err(|e| cfg_err("grid.irrational", e))?;
                ParameterSpace::euclidean(x.convergents(g.depth).into_iter().map(Param::Rational).collect()).map_err(wrap)
            }
            other => Err(cfg_err("grid.kind", format!("unknown grid `{other}`"))),
        }
    }
}

/// `section.key=value`; the value is read as a TOML literal, falling back to a bare string.
fn apply_override(table: &mut toml::Table, ov: &str) -> Result<()> {
    let (key, raw) = ov.split_once('=').ok_or_else(|| Error::Config(format!("override `{ov}` is not key=value")))?;
    let (key, raw) = (key.trim(), raw.trim());
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    let (last, sections) = parts.split_last().expect("split yields at least one part");
    if last.is_empty() {
        return Err(Error::Config(format!("override `{ov}` has an empty key")));
    }
    let mut cur = table;
    for s in sections {
        let entry = cur.entry(s.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| Error::Config(format!("override `{ov}`: `{s}` is not a section")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}
