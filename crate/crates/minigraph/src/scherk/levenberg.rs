//! Small dense Levenberg–Marquardt solver with forward-difference Jacobians.

use nalgebra::{DMatrix, DVector};

pub(crate) struct Outcome {
    pub x: Vec<f64>,
    /// `max |r_i|` at `x`.
    pub residual: f64,
}

pub(crate) struct Settings {
    pub max_iter: usize,
    /// Stop once `max |r_i|` drops below this.
    pub tol: f64,
    pub fd_step: f64,
}

fn jacobian(f: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], r0: &[f64], h: f64) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(r0.len(), x.len());
    let mut xp = x.to_vec();
    for c in 0..x.len() {
        let step = h * (1.0 + x[c].abs());
        xp[c] = x[c] + step;
        let rp = f(&xp);
        xp[c] = x[c] - step;
        let rm = f(&xp);
        xp[c] = x[c];
        for r in 0..r0.len() {
            j[(r, c)] = (rp[r] - rm[r]) / (2.0 * step);
        }
    }
    j
}

fn inf_norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub(crate) fn minimize(f: &dyn Fn(&[f64]) -> Vec<f64>, x0: &[f64], s: &Settings) -> Outcome {
    let mut x = x0.to_vec();
    let mut r = f(&x);
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while iterations < s.max_iter && inf_norm(&r) > s.tol {
        iterations += 1;
        let j = jacobian(f, &x, &r, s.fd_step);
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * DVector::from_column_slice(&r);
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for d in 0..a.nrows() {
                a[(d, d)] += lambda * jtj[(d, d)].max(1e-12);
            }
            let Some(delta) = a.lu().solve(&(-&g)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, b)| a + b).collect();
            let rt = f(&trial);
            let ct: f64 = rt.iter().map(|v| v * v).sum();
            if ct.is_finite() && ct < cost {
                let small = delta.amax() <= 1e-15 * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs())));
                x = trial;
                r = rt;
                cost = ct;
                lambda = (lambda * 0.3).max(1e-12);
                improved = !small;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Outcome { residual: inf_norm(&r), x }
}
