use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduced fraction `p/q`, `q ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    p: i64,
    q: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl Rational {
    /// Reduces `p/q`; a non-reduced input is accepted and logged.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter(format!("zero denominator in {p}/{q}")));
        }
        let g = gcd(p, q).max(1);
        let sign = if q < 0 { -1 } else { 1 };
        if g > 1 {
            log::info!("reducing {p}/{q} to {}/{}", sign * p / g, sign * q / g);
        }
        Ok(Self { p: sign * p / g, q: sign * q / g })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn add(&self, other: &Rational) -> Result<Rational> {
        Rational::new(self.p * other.q + other.p * self.q, self.q * other.q)
    }

    pub fn sub(&self, other: &Rational) -> Result<Rational> {
        Rational::new(self.p * other.q - other.p * self.q, self.q * other.q)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("`{s}` is not a fraction p/q"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Rational::new(p, q)
    }
}

/// Convergents `p_k/q_k` of the continued fraction `[a0; a1, a2, ...]`.
pub fn convergents(cf: &[u64]) -> Vec<Rational> {
    let (mut p0, mut q0, mut p1, mut q1) = (1_i64, 0_i64, 0_i64, 1_i64);
    let mut out = Vec::with_capacity(cf.len());
    for &a in cf {
        let a = a as i64;
        let (p, q) = (a * p0 + p1, a * q0 + q1);
        (p1, q1, p0, q0) = (p0, q0, p, q);
        out.push(Rational::new(p, q).expect("convergent denominators are positive"));
    }
    out
}

/// Named irrationals with their continued-fraction expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irrational {
    /// `(√5 − 1)/2 = [0; 1, 1, 1, ...]`
    GoldenMean,
    /// `√2 − 1 = [0; 2, 2, 2, ...]`
    SilverMean,
}

impl Irrational {
    pub fn value(&self) -> f64 {
        match self {
            Irrational::GoldenMean => (5.0_f64.sqrt() - 1.0) / 2.0,
            Irrational::SilverMean => 2.0_f64.sqrt() - 1.0,
        }
    }

    pub fn convergents(&self, depth: usize) -> Vec<Rational> {
        let a = match self {
            Irrational::GoldenMean => 1,
            Irrational::SilverMean => 2,
        };
        let mut cf = vec![0];
        cf.extend(std::iter::repeat_n(a, depth));
        convergents(&cf)[1..].to_vec()
    }
}

impl FromStr for Irrational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "golden" | "golden_mean" => Ok(Irrational::GoldenMean),
            "silver" | "silver_mean" | "sqrt2_minus_1" => Ok(Irrational::SilverMean),
            _ => Err(Error::InvalidParameter(format!("unknown irrational `{s}`"))),
        }
    }
}

/// A point of a parameter space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Param {
    Rational(Rational),
    Real(f64),
    /// `n ∈ ℕ` of the one-point compactification `ℕ ∪ {∞}`.
    Index(u32),
    Infinity,
}

impl Param {
    /// Position on the real line, where that makes sense.
    pub fn value(&self) -> Option<f64> {
        match self {
            Param::Rational(r) => Some(r.value()),
            Param::Real(x) => Some(*x),
            Param::Index(n) => Some(*n as f64),
            Param::Infinity => None,
        }
    }

    pub fn rational(&self) -> Result<Rational> {
        match self {
            Param::Rational(r) => Ok(*r),
            other => Err(Error::InvalidParameter(format!("expected a rational parameter, got {other}"))),
        }
    }

    pub fn real(&self) -> Result<f64> {
        match self {
            Param::Real(x) => Ok(*x),
            Param::Rational(r) => Ok(r.value()),
            other => Err(Error::InvalidParameter(format!("expected a real parameter, got {other}"))),
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Rational(r) => write!(f, "{r}"),
            Param::Real(x) => write!(f, "{x:?}"),
            Param::Index(n) => write!(f, "{n}"),
            Param::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Metric {
    /// `|s − t|`
    Euclidean,
    /// `d(n, m) = e^{−κ^{min(n, m)}}` on `ℕ ∪ {∞}`.
    Ultrametric { kappa: f64 },
}

/// Ordered sample of a metric parameter space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterSpace {
    points: Vec<Param>,
    metric: Metric,
}

impl ParameterSpace {
    pub fn new(points: Vec<Param>, metric: Metric) -> Result<Self> {
        match metric {
            Metric::Euclidean => {
                if let Some(p) = points.iter().find(|p| p.value().is_none()) {
                    return Err(Error::InvalidParameter(format!("{p} has no position for the euclidean metric")));
                }
            }
            Metric::Ultrametric { kappa } => {
                if !(kappa > 1.0) || !kappa.is_finite() {
                    return Err(Error::InvalidParameter(format!("ultrametric needs kappa > 1, got {kappa}")));
                }
                if let Some(p) = points.iter().find(|p| !matches!(p, Param::Index(_) | Param::Infinity)) {
                    return Err(Error::InvalidParameter(format!("{p} is not a point of N ∪ {{∞}}")));
                }
            }
        }
        Ok(Self { points, metric })
    }

    pub fn euclidean(points: Vec<Param>) -> Result<Self> {
        Self::new(points, Metric::Euclidean)
    }

    /// `{0, 1, ..., n_max, ∞}` with `d(n, m) = e^{−κ^{min(n, m)}}`.
    pub fn naturals_with_infinity(n_max: u32, kappa: f64) -> Result<Self> {
        let mut pts: Vec<Param> = (0..=n_max).map(Param::Index).collect();
        pts.push(Param::Infinity);
        Self::new(pts, Metric::Ultrametric { kappa })
    }

    /// `center ± 1/(2q)` for `q = q_min..=q_max`, plus the center, ascending.
    pub fn symmetric_approach(center: Rational, q_min: i64, q_max: i64) -> Result<Self> {
        if q_min < 1 || q_max < q_min {
            return Err(Error::InvalidParameter(format!("bad denominator range {q_min}..={q_max}")));
        }
        let mut pts = vec![center];
        for q in q_min..=q_max {
            let h = Rational::new(1, 2 * q)?;
            pts.push(center.sub(&h)?);
            pts.push(center.add(&h)?);
        }
        pts.sort();
        pts.dedup();
        Self::euclidean(pts.into_iter().map(Param::Rational).collect())
    }

    /// All reduced `p/q ∈ [lo, hi]` with `q ≤ q_max`, ascending.
    pub fn farey(lo: f64, hi: f64, q_max: i64) -> Result<Self> {
        if !(lo <= hi) || q_max < 1 {
            return Err(Error::InvalidParameter(format!("bad Farey window [{lo}, {hi}] with q_max {q_max}")));
        }
        let mut pts = Vec::new();
        for q in 1..=q_max {
            let p_lo = (lo * q as f64).ceil() as i64;
            let p_hi = (hi * q as f64).floor() as i64;
            for p in p_lo..=p_hi {
                if gcd(p, q) == 1 {
                    pts.push(Rational::new(p, q)?);
                }
            }
        }
        pts.sort();
        Self::euclidean(pts.into_iter().map(Param::Rational).collect())
    }

    /// `{2^{−k_max}, ..., 2^{−k_min}}`, optionally with 0, ascending.
    pub fn dyadic(k_min: i32, k_max: i32, include_zero: bool) -> Result<Self> {
        if k_max < k_min {
            return Err(Error::InvalidParameter(format!("bad exponent range {k_min}..={k_max}")));
        }
        let mut pts = Vec::new();
        if include_zero {
            pts.push(Param::Real(0.0));
        }
        pts.extend((k_min..=k_max).rev().map(|k| Param::Real(2.0_f64.powi(-k))));
        Self::euclidean(pts)
    }

    pub fn points(&self) -> &[Param] {
        &self.points
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `ln d(points[i], points[j])`; `−∞` on the diagonal. Kept in the log
    /// domain because the ultrametric underflows for moderate `n`.
    pub fn log_dist(&self, i: usize, j: usize) -> f64 {
        log_dist(self.metric, &self.points[i], &self.points[j])
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.log_dist(i, j).exp()
    }

    /// Restriction to a sub-list of indices (order kept).
    pub fn subset(&self, idx: &[usize]) -> ParameterSpace {
        Self { points: idx.iter().map(|&i| self.points[i]).collect(), metric: self.metric }
    }
}

pub fn log_dist(metric: Metric, s: &Param, t: &Param) -> f64 {
    if s == t {
        return f64::NEG_INFINITY;
    }
    match metric {
        Metric::Euclidean => {
            let (a, b) = (s.value().unwrap_or(f64::NAN), t.value().unwrap_or(f64::NAN));
            match (s, t) {
                (Param::Rational(x), Param::Rational(y)) => {
                    // exact difference before rounding
                    let d = x.sub(y).map(|r| r.value().abs()).unwrap_or((a - b).abs());
                    d.ln()
                }
                _ => (a - b).abs().ln(),
            }
        }
        Metric::Ultrametric { kappa } => {
            let n = match (s, t) {
                (Param::Index(a), Param::Index(b)) => (*a).min(*b),
                (Param::Index(a), Param::Infinity) | (Param::Infinity, Param::Index(a)) => *a,
                _ => return f64::NAN,
            };
            -kappa.powi(n as i32)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce() {
        let r = Rational::new(4, -6).unwrap();
        assert_eq!((r.p(), r.q()), (-2, 3));
        assert!(Rational::new(1, 0).is_err());
        assert_eq!("3/9".parse::<Rational>().unwrap(), Rational::new(1, 3).unwrap());
        assert_eq!("2".parse::<Rational>().unwrap().q(), 1);
        assert!("x/2".parse::<Rational>().is_err());
    }

    #[test]
    fn golden_convergents_are_fibonacci_ratios() {
        let c = Irrational::GoldenMean.convergents(6);
        let want = [(1, 1), (1, 2), (2, 3), (3, 5), (5, 8), (8, 13)];
        for (r, (p, q)) in c.iter().zip(want) {
            assert_eq!((r.p(), r.q()), (p, q));
        }
        let s = Irrational::SilverMean.convergents(4);
        assert_eq!(s.last().unwrap().to_string(), "12/29");
        assert!((s.last().unwrap().value() - Irrational::SilverMean.value()).abs() < 1.0 / (29.0 * 29.0));
    }

    #[test]
    fn ultrametric_distances() {
        let g = ParameterSpace::naturals_with_infinity(4, 2.0).unwrap();
        // d(1, 3) = e^{-2}, d(3, ∞) = e^{-8}
        assert!((g.log_dist(1, 3) + 2.0).abs() < 1e-15);
        assert!((g.log_dist(3, 5) + 8.0).abs() < 1e-15);
        assert_eq!(g.log_dist(2, 2), f64::NEG_INFINITY);
        // strong triangle inequality
        for i in 0..g.len() {
            for j in 0..g.len() {
                for k in 0..g.len() {
                    if i != j && j != k && i != k {
                        assert!(g.dist(i, k) <= g.dist(i, j).max(g.dist(j, k)) + 1e-300);
                    }
                }
            }
        }
        assert!(ParameterSpace::naturals_with_infinity(3, 1.0).is_err());
    }

    #[test]
    fn grids() {
        let g = ParameterSpace::symmetric_approach(Rational::new(1, 2).unwrap(), 2, 4).unwrap();
        let s: Vec<String> = g.points().iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["1/4", "1/3", "3/8", "1/2", "5/8", "2/3", "3/4"]);
        let f = ParameterSpace::farey(0.0, 0.5, 4).unwrap();
        let s: Vec<String> = f.points().iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["0/1", "1/4", "1/3", "1/2"]);
        let d = ParameterSpace::dyadic(1, 3, true).unwrap();
        assert_eq!(d.points()[0], Param::Real(0.0));
        assert_eq!(d.points()[1], Param::Real(0.125));
        assert!(ParameterSpace::euclidean(vec![Param::Infinity]).is_err());
    }

    #[test]
    fn param_display() {
        assert_eq!(Param::Real(5.0).to_string(), "5.0");
        assert_eq!(Param::Index(5).to_string(), "5");
        assert_eq!(Param::Infinity.to_string(), "inf");
        assert_eq!(serde_json::to_string(&Param::Rational(Rational::new(1, 3).unwrap())).unwrap(), "\"1/3\"");
    }
}
