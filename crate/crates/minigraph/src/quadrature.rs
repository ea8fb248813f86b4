//! Gauss–Legendre rules on [0, 1] and barycentric Lagrange interpolation on
//! their nodes.
//!
//! Radial profiles in this crate are always represented by their values at
//! Gauss–Legendre nodes; everything that needs them between nodes goes through
//! [`Barycentric`].

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Gauss–Legendre nodes (ascending) and weights mapped to [0, 1].
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let n = NonZeroUsize::new(n).expect("quadrature order must be positive");
    let mut pairs: Vec<(f64, f64)> = GaussLegendre::new(n)
        .iter()
        .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Barycentric form of the Lagrange interpolant through Gauss–Legendre nodes.
///
/// For Gauss–Legendre points the barycentric weights have the closed form
/// `(-1)^j sqrt((1 - x_j^2) w_j)` on [-1, 1]; the common scale factor from the
/// affine map to [0, 1] cancels.
#[derive(Debug, Clone)]
pub struct Barycentric {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Barycentric {
    pub fn gauss_legendre(nodes: &[f64], quad_weights: &[f64]) -> Self {
        let weights = nodes
            .iter()
            .zip(quad_weights)
            .enumerate()
            .map(|(j, (&x, &w))| {
                let s = 2.0 * x - 1.0;
                let v = ((1.0 - s * s) * 2.0 * w).sqrt();
                if j % 2 == 0 { v } else { -v }
            })
            .collect();
        Self { nodes: nodes.to_vec(), weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Values of all Lagrange basis polynomials at `x`, written into `out`.
    pub fn basis_into(&self, x: f64, out: &mut [f64]) {
        if let Some(k) = self.nodes.iter().position(|&xj| xj == x) {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[k] = 1.0;
            return;
        }
        let mut total = 0.0;
        for ((o, &xj), &wj) in out.iter_mut().zip(&self.nodes).zip(&self.weights) {
            *o = wj / (x - xj);
            total += *o;
        }
        out.iter_mut().for_each(|v| *v /= total);
    }

    pub fn basis(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.basis_into(x, &mut out);
        out
    }

    /// Derivatives of the Lagrange basis polynomials at a point that is not a node.
    pub fn basis_derivative(&self, x: f64) -> Vec<f64> {
        if let Some(k) = self.nodes.iter().position(|&xj| xj == x) {
            return self.differentiation_matrix()[k].clone();
        }
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&xj, &wj)| wj / (x - xj))
            .collect();
        let s: f64 = terms.iter().sum();
        let ds: f64 = terms.iter().zip(&self.nodes).map(|(t, &xj)| -t / (x - xj)).sum();
        terms
            .iter()
            .zip(&self.nodes)
            .map(|(t, &xj)| (-t / (x - xj) * s - t * ds) / (s * s))
            .collect()
    }

    /// Row-major matrix `D` with `(D v)_i = p'(x_i)` for the interpolant `p` of `v`.
    #[allow(clippy::needless_range_loop)]
    pub fn differentiation_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut diag = 0.0;
            for j in 0..n {
                if i != j {
                    let v = self.weights[j] / self.weights[i] / (self.nodes[i] - self.nodes[j]);
                    d[i][j] = v;
                    diag -= v;
                }
            }
            d[i][i] = diag;
        }
        d
    }

    /// Matrix `S` with `(S v)_i = ∫_0^{x_i} p(t) dt` for the interpolant `p` of `v`.
    pub fn cumulative_integration_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let (t, w) = gauss_legendre_unit(n);
        let mut basis = vec![0.0; n];
        self.nodes
            .iter()
            .map(|&xi| {
                let mut row = vec![0.0; n];
                for (&tq, &wq) in t.iter().zip(&w) {
                    self.basis_into(xi * tq, &mut basis);
                    for (r, b) in row.iter_mut().zip(&basis) {
                        *r += xi * wq * b;
                    }
                }
                row
            })
            .collect()
    }
}
