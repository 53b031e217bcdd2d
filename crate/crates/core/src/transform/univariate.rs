//! Interpolation rules on `[-1, 1]` that express one functional through
//! endpoint data, found by exactness on monomials.

use crate::error::{Error, Result};
use crate::linalg::{lu_solve, DenseMatrix};
use crate::quadrature::gauss_interval;
use crate::reference_element::legendre_eval;

/// A functional on univariate polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntervalFunctional {
    Value(f64),
    Deriv(f64),
    SecondDeriv(f64),
    /// `∫₋₁¹ p′(x) Lⁿ(x) dx`.
    DerivLegendreMoment(usize),
}

impl IntervalFunctional {
    /// Action on the monomial `xᵏ`.
    pub fn on_monomial(&self, k: usize) -> f64 {
        let kf = k as f64;
        let pow = |x: f64, e: i64| if e < 0 { 0.0 } else { x.powi(e as i32) };
        let k = k as i64;
        match *self {
            IntervalFunctional::Value(x) => pow(x, k),
            IntervalFunctional::Deriv(x) => kf * pow(x, k - 1),
            IntervalFunctional::SecondDeriv(x) => kf * (kf - 1.0) * pow(x, k - 2),
            IntervalFunctional::DerivLegendreMoment(n) => {
                let rule = gauss_interval(12);
                rule.integrate(|x| kf * pow(x, k - 1) * legendre_eval(n, x))
            }
        }
    }
}

/// Coefficients `c` with `target(p) = Σ c_j data_j(p)` for every polynomial
/// of degree `≤ poly_degree`. Needs exactly `poly_degree + 1` data
/// functionals.
pub fn derive_univariate_rule(
    poly_degree: usize,
    data: &[IntervalFunctional],
    target: IntervalFunctional,
) -> Result<Vec<f64>> {
    if data.len() != poly_degree + 1 {
        return Err(Error::InvalidInput(format!(
            "{} data functionals for polynomials of degree {poly_degree}",
            data.len()
        )));
    }
    // row k: Σ_j c_j data_j(xᵏ) = target(xᵏ)
    let n = poly_degree + 1;
    let sys = DenseMatrix::from_fn(n, n, |k, j| data[j].on_monomial(k));
    let rhs: Vec<f64> = (0..n).map(|k| target.on_monomial(k)).collect();
    lu_solve(&sys, &rhs)
}

/// Endpoint data `(p(-1), p(1), p′(-1), p′(1), p″(-1), p″(1))`.
pub fn quintic_endpoint_data() -> [IntervalFunctional; 6] {
    use IntervalFunctional::*;
    [Value(-1.0), Value(1.0), Deriv(-1.0), Deriv(1.0), SecondDeriv(-1.0), SecondDeriv(1.0)]
}

/// Weights of the midpoint tangential-derivative rule on an edge of length
/// `ℓ`: `(value, first derivative, second derivative)` factors, applied as
/// `v·(p_b − p_a) + g·(p′_a + p′_b) + s·(p″_b − p″_a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRuleWeights {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

/// Midpoint derivative from quintic endpoint data on `[-ℓ/2, ℓ/2]`.
pub fn quintic_midpoint_weights(length: f64) -> EdgeRuleWeights {
    let c = derive_univariate_rule(5, &quintic_endpoint_data(), IntervalFunctional::Deriv(0.0))
        .expect("quintic Hermite data is unisolvent");
    scale_to_edge(&c, length, 0.5 * length)
}

/// `∫ p′ L⁴` over `[-ℓ/2, ℓ/2]` (Legendre mapped to the edge, `dx` measure)
/// from quintic endpoint data.
pub fn quintic_l4_moment_weights(length: f64) -> EdgeRuleWeights {
    let c = derive_univariate_rule(
        5,
        &quintic_endpoint_data(),
        IntervalFunctional::DerivLegendreMoment(4),
    )
    .expect("quintic Hermite data is unisolvent");
    // the factors ℓ/2 from dx and 2/ℓ from p′ cancel
    scale_to_edge(&c, length, 1.0)
}

/// Maps biunit coefficients (ordered as [`quintic_endpoint_data`]) to an
/// interval of length `ℓ`. With `x = (ℓ/2) ξ`, derivatives in `ξ` carry
/// `(ℓ/2)^k`, and the biunit target equals `target_factor` times the edge
/// target.
fn scale_to_edge(c: &[f64], length: f64, target_factor: f64) -> EdgeRuleWeights {
    let half = 0.5 * length;
    let to_edge = 1.0 / target_factor;
    EdgeRuleWeights {
        value: c[1] * to_edge,
        first: c[3] * half * to_edge,
        second: c[5] * half * half * to_edge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use IntervalFunctional::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn quadratic_midpoint_rule() {
        let c = derive_univariate_rule(2, &[Value(-1.0), Value(1.0), Value(0.0)], Deriv(0.0)).unwrap();
        assert!(close(c[0], -0.5) && close(c[1], 0.5) && close(c[2], 0.0));
    }

    #[test]
    fn quintic_midpoint_rule() {
        let c = derive_univariate_rule(5, &quintic_endpoint_data(), Deriv(0.0)).unwrap();
        let expect = [-15.0 / 16.0, 15.0 / 16.0, -7.0 / 16.0, -7.0 / 16.0, -1.0 / 16.0, 1.0 / 16.0];
        for (a, b) in c.iter().zip(expect) {
            assert!(close(*a, b), "{c:?}");
        }
    }

    #[test]
    fn quintic_l4_moment_rule() {
        let c = derive_univariate_rule(5, &quintic_endpoint_data(), DerivLegendreMoment(4)).unwrap();
        let expect = [-1.0 / 21.0, 1.0 / 21.0, -1.0 / 21.0, -1.0 / 21.0, -1.0 / 63.0, 1.0 / 63.0];
        for (a, b) in c.iter().zip(expect) {
            assert!(close(*a, b), "{c:?}");
        }
    }

    #[test]
    fn edge_weights_match_closed_forms() {
        let l = 0.37;
        let w = quintic_midpoint_weights(l);
        assert!(close(w.value, 15.0 / (8.0 * l)));
        assert!(close(w.first, -7.0 / 16.0));
        assert!(close(w.second, l / 32.0));
        let m = quintic_l4_moment_weights(l);
        assert!(close(m.value, 1.0 / 21.0));
        assert!(close(m.first, -l / 42.0));
        assert!(close(m.second, l * l / 252.0));
    }

    #[test]
    fn midpoint_rule_on_x5() {
        // p = x⁵: p'(0) = 0, p(±1) = ±1, p'(±1) = 5, p''(±1) = ±20
        let v = 15.0 / 16.0 * 2.0 - 7.0 / 16.0 * 10.0 + 1.0 / 16.0 * 40.0;
        assert!(close(v, 0.0));
    }

    #[test]
    fn mapped_moment_rule_on_x5() {
        // ∫_{-1}^{1} 5x⁴ L⁴(x) dx against the (1/21, -ℓ/42, ℓ²/252) family with ℓ = 2
        let l = 2.0;
        let h = l / 2.0;
        let exact = gauss_interval(8).integrate(|x| 5.0 * x.powi(4) * legendre_eval(4, x));
        let w = quintic_l4_moment_weights(l);
        let p = |x: f64| x.powi(5);
        let dp = |x: f64| 5.0 * x.powi(4);
        let ddp = |x: f64| 20.0 * x.powi(3);
        let approx = w.value * (p(h) - p(-h)) + w.first * (dp(h) + dp(-h)) + w.second * (ddp(h) - ddp(-h));
        assert!(close(approx, exact), "{approx} vs {exact}");
    }

    #[test]
    fn wrong_data_count() {
        assert!(derive_univariate_rule(3, &[Value(0.0)], Deriv(0.0)).is_err());
    }
}
