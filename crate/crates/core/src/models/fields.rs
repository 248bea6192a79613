use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use super::params::{Param, ParameterSpace, Rational};
use crate::error::{Error, Result};
use crate::operators::{Operator, PeriodicJacobi};

type Generator = dyn Fn(&Param) -> Result<Operator> + Send + Sync;

/// A map `t ↦ A_t`. Generators must be deterministic.
#[derive(Clone)]
pub struct OperatorField {
    name: String,
    generator: Arc<Generator>,
}

impl fmt::Debug for OperatorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorField").field("name", &self.name).finish()
    }
}

impl OperatorField {
    pub fn new(name: impl Into<String>, generator: impl Fn(&Param) -> Result<Operator> + Send + Sync + 'static) -> Self {
        Self { name: name.into(), generator: Arc::new(generator) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn at(&self, t: &Param) -> Result<Operator> {
        (self.generator)(t)
    }

    /// The same operator at every parameter.
    pub fn constant(op: Operator) -> Self {
        Self::new("constant", move |_| Ok(op.clone()))
    }

    /// Fixed-phase almost Mathieu operators over rational frequencies.
    pub fn almost_mathieu(mu: f64, theta: f64) -> Self {
        Self::new(format!("almost_mathieu(mu={mu}, theta={theta})"), move |t| {
            Ok(almost_mathieu(mu, theta, t.rational()?)?.into())
        })
    }

    /// Almost Mathieu operators with the spectrum taken over all phases.
    pub fn almost_mathieu_hull(mu: f64) -> Self {
        Self::new(format!("almost_mathieu_hull(mu={mu})"), move |t| almost_mathieu_hull(mu, t.rational()?))
    }

    pub fn kohmoto(lam: f64, theta: f64) -> Self {
        Self::new(format!("kohmoto(lambda={lam}, theta={theta})"), move |t| {
            Ok(kohmoto(lam, theta, t.rational()?)?.into())
        })
    }

    /// Substitution potential at coupling `λ = t`.
    pub fn substitution(word: SubstitutionWord, level: u32) -> Self {
        Self::new(format!("substitution({word}, level={level})"), move |t| {
            Ok(substitution_field(t.real()?, word, level)?.into())
        })
    }
}

/// `V(n) = 2μ cos 2π(n p/q + θ)`, one period.
pub fn almost_mathieu(mu: f64, theta: f64, t: Rational) -> Result<PeriodicJacobi> {
    if !(mu >= 0.0) || !mu.is_finite() || !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("almost Mathieu needs finite mu >= 0, theta; got {mu}, {theta}")));
    }
    let (p, q) = (t.p(), t.q());
    let v = (0..q)
        .map(|n| {
            // reduce n p mod q in integers first so the angle carries no accumulated error
            let frac = (n * p).rem_euclid(q) as f64 / q as f64;
            2.0 * mu * (TAU * (frac + theta)).cos()
        })
        .collect();
    PeriodicJacobi::new(v)
}

/// Union of the spectra over all phases θ.
///
/// The discriminant depends on θ only through `cos 2πqθ`, so the union is
/// swept out between θ = 0 and θ = 1/(2q). For μ ≤ 1 the two extreme band
/// families overlap band by band, and the direct sum of the two periodic
/// operators has exactly the union as its spectrum.
pub fn almost_mathieu_hull(mu: f64, t: Rational) -> Result<Operator> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::InvalidParameter(format!("phase-union model needs 0 < mu <= 1, got {mu}")));
    }
    let a = almost_mathieu(mu, 0.0, t)?;
    let b = almost_mathieu(mu, 0.5 / t.q() as f64, t)?;
    Operator::direct_sum(vec![a.into(), b.into()])
}

/// `V(n) = λ χ_{[0,t)}(frac(n p/q + θ))`, half-open as written.
pub fn kohmoto(lam: f64, theta: f64, t: Rational) -> Result<PeriodicJacobi> {
    if !lam.is_finite() || !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("kohmoto needs finite lambda, theta; got {lam}, {theta}")));
    }
    let (p, q) = (t.p(), t.q());
    let tv = t.value();
    let v = (0..q)
        .map(|n| {
            let k = (n * p).rem_euclid(q);
            let inside = if theta == 0.0 {
                k < p
            } else {
                let f = (k as f64 / q as f64 + theta).rem_euclid(1.0);
                f < tv
            };
            if inside {
                lam
            } else {
                0.0
            }
        })
        .collect();
    PeriodicJacobi::new(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubstitutionWord {
    /// a → ab, b → a
    Fibonacci,
    /// a → ab, b → ba
    ThueMorse,
    /// a → ab, b → aa
    PeriodDoubling,
}

impl SubstitutionWord {
    /// `σ^{level−1}(a)` as letters 0 (= a) and 1 (= b).
    pub fn word(&self, level: u32) -> Result<Vec<u8>> {
        if level == 0 {
            return Err(Error::InvalidParameter("substitution level must be >= 1".into()));
        }
        if level > 24 {
            return Err(Error::InvalidParameter(format!("substitution level {level} is too large")));
        }
        let rule: [&[u8]; 2] = match self {
            SubstitutionWord::Fibonacci => [&[0, 1], &[0]],
            SubstitutionWord::ThueMorse => [&[0, 1], &[1, 0]],
            SubstitutionWord::PeriodDoubling => [&[0, 1], &[0, 0]],
        };
        let mut w = vec![0_u8];
        for _ in 1..level {
            w = w.iter().flat_map(|&c| rule[c as usize].iter().copied()).collect();
        }
        Ok(w)
    }
}

impl fmt::Display for SubstitutionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubstitutionWord::Fibonacci => "fibonacci",
            SubstitutionWord::ThueMorse => "thue_morse",
            SubstitutionWord::PeriodDoubling => "period_doubling",
        })
    }
}

impl FromStr for SubstitutionWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "fibonacci" => Ok(SubstitutionWord::Fibonacci),
            "thue_morse" => Ok(SubstitutionWord::ThueMorse),
            "period_doubling" => Ok(SubstitutionWord::PeriodDoubling),
            _ => Err(Error::UnknownWord(s.to_string())),
        }
    }
}

/// Periodized substitution word as a potential with values in `{0, λ}`.
pub fn substitution_field(lam: f64, word: SubstitutionWord, level: u32) -> Result<PeriodicJacobi> {
    if !lam.is_finite() {
        return Err(Error::InvalidParameter(format!("coupling must be finite, got {lam}")));
    }
    PeriodicJacobi::new(word.word(level)?.into_iter().map(|c| lam * c as f64).collect())
}

/// `max_t ‖A_t‖ + 1` over the grid; the `m` handed to the ball probe.
pub fn field_bound(field: &OperatorField, grid: &ParameterSpace) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InsufficientData("empty parameter grid".into()));
    }
    let norms: Vec<Result<f64>> = grid
        .points()
        .par_iter()
        .map(|t| field.at(t).and_then(|a| a.op_norm()).map_err(|e| at_param(t, e)))
        .collect();
    let mut m: f64 = 0.0;
    for n in norms {
        m = m.max(n?);
    }
    Ok(m + 1.0)
}

pub(crate) fn at_param(t: &Param, e: Error) -> Error {
    match e {
        Error::AtParameter { .. } => e,
        other => Error::AtParameter { t: t.to_string(), source: Box::new(other) },
    }
}
