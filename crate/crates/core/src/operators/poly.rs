use serde::{Deserialize, Serialize};

/// Real polynomial `p0 + p1 z + p2 z²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly2 {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
}

impl Poly2 {
    pub const fn new(p0: f64, p1: f64, p2: f64) -> Self {
        Self { p0, p1, p2 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.p0 + x * (self.p1 + x * self.p2)
    }

    /// `|p0| + |p1| + |p2|`.
    pub fn norm1(&self) -> f64 {
        self.p0.abs() + self.p1.abs() + self.p2.abs()
    }

    /// Stationary point `-p1 / (2 p2)`, if the polynomial is genuinely quadratic.
    pub fn critical_point(&self) -> Option<f64> {
        (self.p2 != 0.0).then(|| -self.p1 / (2.0 * self.p2))
    }

    /// `m² − (z − x)²`: the ball probe centred at `x`.
    pub fn ball_probe(m: f64, x: f64) -> Self {
        Self::new(m * m - x * x, 2.0 * x, -1.0)
    }

    /// Lipschitz constant of `p` on `[-m, m]`.
    pub fn lipschitz_on(&self, m: f64) -> f64 {
        self.p1.abs() + 2.0 * m * self.p2.abs()
    }

    /// Range of `p` over the closed interval `[lo, hi]`.
    pub fn range_on(&self, lo: f64, hi: f64) -> (f64, f64) {
        let (a, b) = (self.eval(lo), self.eval(hi));
        let (mut min, mut max) = if a <= b { (a, b) } else { (b, a) };
        if let Some(c) = self.critical_point() {
            if c > lo && c < hi {
                let v = self.eval(c);
                min = min.min(v);
                max = max.max(v);
            }
        }
        (min, max)
    }

    /// `max |p|` over `[lo, hi]`.
    pub fn abs_max_on(&self, lo: f64, hi: f64) -> f64 {
        let (a, b) = self.range_on(lo, hi);
        a.abs().max(b.abs())
    }
}
