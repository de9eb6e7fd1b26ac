//! Quadrature rules on the reference triangle, the reference interval, and
//! slab time intervals.
//!
//! Interval rules are Gauss-Legendre on [0, 1], with nodes computed by
//! Newton iteration on the Legendre recurrence. Triangle rules are conical
//! products of two interval rules under the collapsed map
//! `(xi, eta) -> (xi, eta (1 - xi))`, which keeps all weights positive and
//! gives exactness for any requested total degree. Every exposed rule is
//! checked against closed-form monomial integrals in the test suite.

use crate::{Error, Result};

/// A quadrature rule on the reference triangle `{r, s >= 0, r + s <= 1}`.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    /// Total polynomial degree integrated exactly.
    pub degree: usize,
}

/// A quadrature rule on the reference interval [0, 1].
#[derive(Debug, Clone)]
pub struct LineRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    /// Polynomial degree integrated exactly.
    pub degree: usize,
}

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Evaluates the Legendre polynomial `P_n` and its derivative at `x`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_legendre_01(n: usize) -> LineRule {
    let (nodes, weights) = gauss_legendre(n);
    LineRule {
        points: nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        weights: weights.iter().map(|w| 0.5 * w).collect(),
        degree: 2 * n - 1,
    }
}

/// Gauss-Legendre rule on a reference edge [0, 1], exact to degree
/// `2 points - 1`. Supports 1 to 8 points.
pub fn edge_rule(points: usize) -> Result<LineRule> {
    if !(1..=8).contains(&points) {
        return Err(Error::Invalid(format!(
            "edge rule supports 1 to 8 points, got {points}"
        )));
    }
    Ok(gauss_legendre_01(points))
}

/// Gauss-Legendre rule on a reference time interval [0, 1]; same family as
/// [`edge_rule`].
pub fn time_rule(points: usize) -> Result<LineRule> {
    if !(1..=8).contains(&points) {
        return Err(Error::Invalid(format!(
            "time rule supports 1 to 8 points, got {points}"
        )));
    }
    Ok(gauss_legendre_01(points))
}

/// Symmetric-free conical product rule on the reference triangle, exact for
/// all polynomials of total degree `degree`. Supports degrees 1 to 12.
///
/// The collapsed map sends a monomial `r^p s^q` to
/// `xi^p (1 - xi)^(q + 1) eta^q`, so the xi factor needs one extra degree of
/// exactness to absorb the jacobian.
pub fn triangle_rule(degree: usize) -> Result<TriangleRule> {
    if !(1..=12).contains(&degree) {
        return Err(Error::Invalid(format!(
            "triangle rule supports degrees 1 to 12, got {degree}"
        )));
    }
    let n_xi = (degree + 3) / 2; // exact to degree + 1
    let n_eta = (degree + 2) / 2; // exact to degree
    let xi = gauss_legendre_01(n_xi);
    let eta = gauss_legendre_01(n_eta);
    let mut points = Vec::with_capacity(n_xi * n_eta);
    let mut weights = Vec::with_capacity(n_xi * n_eta);
    for (i, &x) in xi.points.iter().enumerate() {
        for (j, &e) in eta.points.iter().enumerate() {
            points.push([x, e * (1.0 - x)]);
            weights.push(xi.weights[i] * eta.weights[j] * (1.0 - x));
        }
    }
    Ok(TriangleRule {
        points,
        weights,
        degree,
    })
}
