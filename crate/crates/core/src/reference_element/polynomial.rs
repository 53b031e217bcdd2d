use crate::geometry::Point;
use crate::linalg::DenseMatrix;
use crate::quadrature::triangle_rule;

/// Value, gradient and Hessian `(xx, xy, yy)` of a function at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [f64; 3],
}

impl Jet {
    pub fn directional(&self, d: [f64; 2]) -> f64 {
        self.grad[0] * d[0] + self.grad[1] * d[1]
    }

    /// `d₁ᵀ H d₂`.
    pub fn second_directional(&self, d1: [f64; 2], d2: [f64; 2]) -> f64 {
        let [hxx, hxy, hyy] = self.hess;
        d1[0] * (hxx * d2[0] + hxy * d2[1]) + d1[1] * (hxy * d2[0] + hyy * d2[1])
    }

    pub fn scaled(&self, s: f64) -> Jet {
        Jet {
            value: s * self.value,
            grad: [s * self.grad[0], s * self.grad[1]],
            hess: [s * self.hess[0], s * self.hess[1], s * self.hess[2]],
        }
    }

    pub fn add_scaled(&mut self, s: f64, other: &Jet) {
        self.value += s * other.value;
        self.grad[0] += s * other.grad[0];
        self.grad[1] += s * other.grad[1];
        for k in 0..3 {
            self.hess[k] += s * other.hess[k];
        }
    }

    /// Jet of `g ∘ F` at `x` given the jet of `g` at `F(x)`, for affine `F`
    /// with Jacobian `j`: gradient `Jᵀ∇̂g`, Hessian `Jᵀ Ĥ J`.
    pub fn pull_back(&self, j: &[[f64; 2]; 2]) -> Jet {
        let [gx, gy] = self.grad;
        let grad = [j[0][0] * gx + j[1][0] * gy, j[0][1] * gx + j[1][1] * gy];
        let [hxx, hxy, hyy] = self.hess;
        let h = [[hxx, hxy], [hxy, hyy]];
        let mut out = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let mut s = 0.0;
                for c in 0..2 {
                    for d in 0..2 {
                        s += j[c][a] * h[c][d] * j[d][b];
                    }
                }
                out[a][b] = s;
            }
        }
        Jet {
            value: self.value,
            grad,
            hess: [out[0][0], out[0][1], out[1][1]],
        }
    }
}

/// Exponents `(a, b)` of the monomials `xᵃyᵇ` spanning `P_r`, ordered by
/// total degree and then by the power of `y`.
pub fn monomial_exponents(degree: usize) -> Vec<(usize, usize)> {
    (0..=degree)
        .flat_map(|total| (0..=total).map(move |b| (total - b, b)))
        .collect()
}

pub fn polynomial_dimension(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

fn powi(x: f64, k: usize) -> f64 {
    x.powi(k as i32)
}

/// Jets of every monomial of degree `≤ degree` at `p`.
pub fn monomial_jets(degree: usize, p: Point) -> Vec<Jet> {
    let [x, y] = p;
    monomial_exponents(degree)
        .into_iter()
        .map(|(a, b)| {
            let (af, bf) = (a as f64, b as f64);
            let xa = powi(x, a);
            let yb = powi(y, b);
            let dxa = if a >= 1 { af * powi(x, a - 1) } else { 0.0 };
            let dyb = if b >= 1 { bf * powi(y, b - 1) } else { 0.0 };
            let ddxa = if a >= 2 { af * (af - 1.0) * powi(x, a - 2) } else { 0.0 };
            let ddyb = if b >= 2 { bf * (bf - 1.0) * powi(y, b - 2) } else { 0.0 };
            Jet {
                value: xa * yb,
                grad: [dxa * yb, xa * dyb],
                hess: [ddxa * yb, dxa * dyb, xa * ddyb],
            }
        })
        .collect()
}

/// Legendre polynomial `Lⁿ(x)` by the three-term recurrence.
pub fn legendre_eval(n: usize, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Orthonormal basis of `P_r` on the reference triangle, stored as monomial
/// coefficients (row `k` holds the expansion of `φ_k`).
#[derive(Debug, Clone)]
pub struct PrimeBasis {
    degree: usize,
    coeffs: DenseMatrix,
}

impl PrimeBasis {
    /// Gram–Schmidt on the monomials with respect to the `L²(K̂)` inner
    /// product evaluated by a degree-`2r` rule.
    pub fn orthonormal(degree: usize) -> Self {
        let dim = polynomial_dimension(degree);
        let rule = triangle_rule(2 * degree).expect("degree is bounded by the element family");
        let mono: Vec<Vec<f64>> = rule
            .points
            .iter()
            .map(|&p| monomial_jets(degree, p).iter().map(|j| j.value).collect())
            .collect();
        let inner = |u: &[f64], v: &[f64]| -> f64 {
            rule.weights.iter().zip(u).zip(v).map(|((w, a), b)| w * a * b).sum()
        };
        let nq = rule.len();
        let mut coeffs = DenseMatrix::zeros(dim, dim);
        let mut values: Vec<Vec<f64>> = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut c = vec![0.0; dim];
            c[k] = 1.0;
            let mut v: Vec<f64> = (0..nq).map(|q| mono[q][k]).collect();
            for _pass in 0..2 {
                for (j, qj) in values.iter().enumerate() {
                    let proj = inner(&v, qj);
                    for (vi, qi) in v.iter_mut().zip(qj) {
                        *vi -= proj * qi;
                    }
                    for (ci, cj) in c.iter_mut().zip(coeffs.row(j)) {
                        *ci -= proj * cj;
                    }
                }
            }
            let norm = inner(&v, &v).sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            c.iter_mut().for_each(|x| *x /= norm);
            coeffs.row_mut(k).copy_from_slice(&c);
            values.push(v);
        }
        Self { degree, coeffs }
    }

    /// Plain monomials, mostly useful for testing.
    pub fn monomial(degree: usize) -> Self {
        let dim = polynomial_dimension(degree);
        Self {
            degree,
            coeffs: DenseMatrix::identity(dim),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn monomial_coefficients(&self) -> &DenseMatrix {
        &self.coeffs
    }

    pub fn jets(&self, p: Point) -> Vec<Jet> {
        let mono = monomial_jets(self.degree, p);
        (0..self.dim())
            .map(|k| {
                let mut jet = Jet::default();
                for (c, m) in self.coeffs.row(k).iter().zip(&mono) {
                    if *c != 0.0 {
                        jet.add_scaled(*c, m);
                    }
                }
                jet
            })
            .collect()
    }

    /// Jet of `Σ_j c_j φ_j` at `p`.
    pub fn eval(&self, coefficients: &[f64], p: Point) -> Jet {
        let mut out = Jet::default();
        for (c, j) in coefficients.iter().zip(self.jets(p)) {
            out.add_scaled(*c, &j);
        }
        out
    }

    /// Prime coefficients of the polynomial with the given monomial
    /// coefficients (same ordering as [`monomial_exponents`]).
    pub fn from_monomial_coefficients(&self, mono: &[f64]) -> Vec<f64> {
        // p = mᵀ x = cᵀ φ = cᵀ C x  ⇒  Cᵀ c = m
        crate::linalg::lu_solve(&self.coeffs.transpose(), mono)
            .expect("prime basis coefficient matrix is nonsingular")
    }
}
