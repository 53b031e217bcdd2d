//! Gauss–Legendre rules on `[-1, 1]` and collapsed (Duffy) tensor rules on
//! the unit right triangle.

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Highest polynomial exactness offered by [`triangle_rule`].
pub const MAX_TRIANGLE_DEGREE: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl IntervalRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, w)| w * f(x)).sum()
    }
}

impl TriangleRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, w)| w * f(x)).sum()
    }
}

/// `n`-point Gauss–Legendre rule, exact through degree `2n − 1`.
pub fn gauss_interval(n: usize) -> IntervalRule {
    assert!(n >= 1, "a Gauss rule needs at least one point");
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = -x;
        points[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    IntervalRule {
        points,
        weights,
        degree: 2 * n - 1,
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Collapsed Gauss rule on the unit right triangle with exactness `≥ degree`.
///
/// Uses `x = s`, `y = t(1 − s)` on `[0,1]²`; the Jacobian `(1 − s)` raises
/// the degree in `s` by one.
pub fn triangle_rule(degree: usize) -> Result<TriangleRule> {
    if degree > MAX_TRIANGLE_DEGREE {
        return Err(Error::UnsupportedDegree(degree));
    }
    let ns = (degree + 2).div_ceil(2);
    let nt = (degree + 1).div_ceil(2).max(1);
    let gs = gauss_interval(ns);
    let gt = gauss_interval(nt);
    let mut points = Vec::with_capacity(ns * nt);
    let mut weights = Vec::with_capacity(ns * nt);
    for (&xs, &ws) in gs.points.iter().zip(&gs.weights) {
        let s = 0.5 * (xs + 1.0);
        for (&xt, &wt) in gt.points.iter().zip(&gt.weights) {
            let t = 0.5 * (xt + 1.0);
            points.push([s, t * (1.0 - s)]);
            weights.push(0.25 * ws * wt * (1.0 - s));
        }
    }
    Ok(TriangleRule {
        points,
        weights,
        degree,
    })
}
