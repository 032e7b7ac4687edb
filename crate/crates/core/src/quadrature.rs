//! Composite Gauss-Legendre quadrature used by the independent test oracles.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of the `m`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_m.
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=m {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre integrator with panel doubling until two
/// successive estimates agree to `abs_tol`.
#[derive(Clone, Debug)]
pub struct CompositeGauss {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    max_panels: usize,
}

impl Default for CompositeGauss {
    fn default() -> Self {
        Self::new(20, 1 << 14)
    }
}

impl CompositeGauss {
    pub fn new(order: usize, max_panels: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self {
            nodes,
            weights,
            max_panels,
        }
    }

    fn fixed<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64, panels: usize) -> f64 {
        let width = (b - a) / panels as f64;
        let half = 0.5 * width;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * width;
            let mut s = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += w * f(mid + half * x);
            }
            total += s * half;
        }
        total
    }

    /// Integrates `f` over `[a, b]`, starting from `initial_panels` panels.
    pub fn integrate<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        initial_panels: usize,
        abs_tol: f64,
    ) -> Result<f64> {
        let mut panels = initial_panels.max(1);
        let mut coarse = self.fixed(&f, a, b, panels);
        while panels <= self.max_panels {
            panels *= 2;
            let fine = self.fixed(&f, a, b, panels);
            if (fine - coarse).abs() <= abs_tol {
                return Ok(fine);
            }
            coarse = fine;
        }
        Err(Error::OracleFailure(format!(
            "quadrature over [{a}, {b}] did not reach {abs_tol:e} with {} panels",
            self.max_panels
        )))
    }
}
