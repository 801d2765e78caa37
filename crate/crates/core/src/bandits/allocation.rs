//! Optimal exploration allocation:
//!
//! minimize `Σ_i Δ_i w_i` over `w ≥ 0`
//! subject to `x_jᵀ H(w)⁻¹ x_j ≤ Δ_j² / f_n` for every arm with `Δ_j > 0`,
//! where `H(w) = Σ_i w_i x_i x_iᵀ`.
//!
//! Zero-gap arms cost nothing, so their weight can grow without bound; in the
//! limit their directions drop out of every constraint. The solver projects
//! features onto the orthogonal complement of those directions and reports
//! zero-gap weights as `+∞`.
//!
//! On the projected problem `r_j(s·v) = r_j(v) / s`, so the optimum equals
//! `min max_j r_j(v)` over `{v ≥ 0 : Σ Δ_i v_i = 1}`, after which `v` is scaled
//! by that maximum. Pairwise Frank-Wolfe minimizes a p-norm penalty of the ratios
//! over that simplex, raising `p` stage by stage.

use alloc::vec;
use alloc::vec::Vec;

use super::linalg::{dot, Mat};

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationConfig {
    pub max_iter: usize,
    /// Constraint slack accepted in the returned allocation.
    pub tol: f64,
    /// Relative Frank-Wolfe duality gap that ends a stage.
    pub gap_tol: f64,
    /// Ridge added to the projected `H` when features do not span.
    pub ridge: f64,
}

impl Default for AllocationConfig {
    fn default() -> Self {
        AllocationConfig { max_iter: 10_000, tol: 1e-6, gap_tol: 1e-4, ridge: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub weights: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

const GAP_EPS: f64 = 1e-12;
const POWERS: [f64; 5] = [2.0, 8.0, 32.0, 128.0, 512.0];

/// Orthonormal basis of the complement of `span(free)` in `R^dim`.
fn complement_basis(free: &[&[f64]], dim: usize) -> Vec<Vec<f64>> {
    let mut span: Vec<Vec<f64>> = Vec::new();
    let orth = |v: &[f64], basis: &mut Vec<Vec<f64>>| {
        let mut u = v.to_vec();
        for _ in 0..2 {
            for b in basis.iter() {
                let p = dot(&u, b);
                for (ui, bi) in u.iter_mut().zip(b) {
                    *ui -= p * bi;
                }
            }
        }
        let n = libm::sqrt(dot(&u, &u));
        if n > 1e-10 * libm::sqrt(dot(v, v)).max(1e-300) && n > 1e-300 {
            basis.push(u.into_iter().map(|x| x / n).collect());
            true
        } else {
            false
        }
    };
    for f in free {
        orth(f, &mut span);
    }
    let k = span.len();
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        orth(&e, &mut span);
    }
    span.split_off(k)
}

struct Problem {
    z: Vec<Vec<f64>>,
    gaps: Vec<f64>,
    rhs: Vec<f64>,
    ridge: f64,
}

impl Problem {
    fn dim(&self) -> usize {
        self.z[0].len()
    }

    fn h_inv(&self, v: &[f64]) -> Option<Mat> {
        let mut h = Mat::scaled_identity(self.dim(), self.ridge);
        for (z, w) in self.z.iter().zip(v) {
            if *w > 0.0 {
                h.add_outer(z, *w);
            }
        }
        h.inverse()
    }

    fn ratios_with(&self, h_inv: &Mat) -> Vec<f64> {
        self.z.iter().zip(&self.rhs).map(|(z, r)| h_inv.quad_form(z) / r).collect()
    }

    fn max_ratio(&self, v: &[f64]) -> f64 {
        match self.h_inv(v) {
            Some(h) => self.ratios_with(&h).into_iter().fold(0.0, f64::max),
            None => f64::INFINITY,
        }
    }

    /// `‖r(v)‖_p`, computed relative to the largest ratio.
    fn penalty(&self, v: &[f64], p: f64) -> f64 {
        let Some(h) = self.h_inv(v) else { return f64::INFINITY };
        let r = self.ratios_with(&h);
        pnorm(&r, p)
    }

    fn gradient(&self, v: &[f64], p: f64) -> Option<Vec<f64>> {
        let h = self.h_inv(v)?;
        let r = self.ratios_with(&h);
        let norm = pnorm(&r, p);
        let m = r.iter().copied().fold(0.0, f64::max);
        // ∂‖r‖_p/∂r_j = (r_j / ‖r‖_p)^{p-1}
        let weights: Vec<f64> = r.iter().map(|x| libm::pow(x / norm, p - 1.0)).collect();
        let hz: Vec<Vec<f64>> = self.z.iter().map(|z| h.mul_vec(z)).collect();
        let mut grad = vec![0.0; self.z.len()];
        for (j, wj) in weights.iter().enumerate() {
            if *wj == 0.0 || m == 0.0 {
                continue;
            }
            for (i, zi) in self.z.iter().enumerate() {
                let s = dot(zi, &hz[j]);
                grad[i] -= wj * s * s / self.rhs[j];
            }
        }
        Some(grad)
    }
}

fn pnorm(r: &[f64], p: f64) -> f64 {
    let m = r.iter().copied().fold(0.0, f64::max);
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    m * libm::pow(r.iter().map(|x| libm::pow(x / m, p)).sum::<f64>(), 1.0 / p)
}

fn golden_section(f: impl Fn(f64) -> f64) -> f64 {
    let phi = 0.5 * (libm::sqrt(5.0) - 1.0);
    let (mut a, mut b) = (0.0, 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..40 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [0.0, mid, 1.0].into_iter().min_by(|x, y| f(*x).total_cmp(&f(*y))).unwrap_or(mid)
}

/// Solves the allocation problem; see the module docs for the method. The
/// returned weights always satisfy the constraints up to `cfg.tol`;
/// `converged` reports whether the last stage met `cfg.gap_tol` within the
/// iteration budget.
pub fn solve_allocation(features: &[Vec<f64>], gaps: &[f64], f_n: f64, cfg: &AllocationConfig) -> Allocation {
    assert_eq!(features.len(), gaps.len());
    let dim = features.first().map_or(0, Vec::len);
    let sub: Vec<usize> = (0..gaps.len()).filter(|&i| gaps[i] > GAP_EPS).collect();
    let mut weights = vec![f64::INFINITY; gaps.len()];
    for &i in &sub {
        weights[i] = 0.0;
    }
    let free: Vec<&[f64]> = (0..gaps.len()).filter(|i| gaps[*i] <= GAP_EPS).map(|i| features[i].as_slice()).collect();
    let basis = complement_basis(&free, dim);
    if sub.is_empty() || basis.is_empty() {
        return Allocation { weights, objective: 0.0, iterations: 0, converged: true };
    }
    let p = Problem {
        z: sub.iter().map(|&i| basis.iter().map(|b| dot(b, &features[i])).collect()).collect(),
        gaps: sub.iter().map(|&i| gaps[i]).collect(),
        rhs: sub.iter().map(|&i| gaps[i] * gaps[i] / f_n).collect(),
        ridge: cfg.ridge,
    };
    let n = p.z.len();

    // u_i = Δ_i v_i lives on the unit simplex; start at its centre
    let mut u = vec![1.0 / n as f64; n];
    let to_v = |u: &[f64]| -> Vec<f64> { u.iter().zip(&p.gaps).map(|(x, g)| x / g).collect() };
    let mut best = to_v(&u);
    let mut best_val = p.max_ratio(&best);
    let mut iterations = 0;
    let per_stage = (cfg.max_iter / POWERS.len()).max(1);
    let mut converged = false;
    for pw in POWERS {
        converged = false;
        for _ in 0..per_stage {
            iterations += 1;
            let v = to_v(&u);
            let Some(grad) = p.gradient(&v, pw) else { break };
            let gu: Vec<f64> = grad.iter().zip(&p.gaps).map(|(g, d)| g / d).collect();
            let toward = (0..n).min_by(|a, b| gu[*a].total_cmp(&gu[*b])).unwrap_or(0);
            let away = (0..n).filter(|&i| u[i] > 0.0).max_by(|a, b| gu[*a].total_cmp(&gu[*b])).unwrap_or(toward);
            let fw_gap = dot(&gu, &u) - gu[toward];
            let value = p.penalty(&v, pw);
            if fw_gap <= cfg.gap_tol * value || toward == away {
                converged = true;
                break;
            }
            // pairwise step: move mass from the away vertex to the toward vertex
            let room = u[away];
            let shifted = |g: f64| {
                let mut t = u.clone();
                t[away] -= g * room;
                t[toward] += g * room;
                p.penalty(&to_v(&t), pw)
            };
            let step = golden_section(shifted) * room;
            if step == 0.0 {
                converged = true;
                break;
            }
            u[away] = (u[away] - step).max(0.0);
            u[toward] += step;
            let v = to_v(&u);
            let val = p.max_ratio(&v);
            if val < best_val {
                best_val = val;
                best = v;
            }
        }
    }
    // scale onto the constraint boundary, with a hair of margin for rounding
    let scale = best_val * (1.0 + cfg.tol * 1e-3);
    for (k, &i) in sub.iter().enumerate() {
        weights[i] = best[k] * scale;
    }
    let objective = sub.iter().map(|&i| gaps[i] * weights[i]).sum();
    Allocation { weights, objective, iterations, converged }
}

/// `x_jᵀ H⁻¹ x_j − Δ_j² / f_n` for every arm with a positive gap, where `H`
/// gives zero-gap arms the weight `free_weight` in place of `+∞`.
pub fn constraint_slack(features: &[Vec<f64>], gaps: &[f64], weights: &[f64], f_n: f64, free_weight: f64) -> Vec<f64> {
    let dim = features.first().map_or(0, Vec::len);
    let mut h = Mat::zeros(dim);
    for (x, w) in features.iter().zip(weights) {
        h.add_outer(x, if w.is_finite() { *w } else { free_weight });
    }
    let Some(h_inv) = h.inverse() else { return vec![f64::INFINITY; gaps.len()] };
    features
        .iter()
        .zip(gaps)
        .filter(|(_, g)| **g > GAP_EPS)
        .map(|(x, g)| h_inv.quad_form(x) - g * g / f_n)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_suboptimal_arms() {
        let a = solve_allocation(&[vec![1.0, 0.0]], &[0.0], 10.0, &AllocationConfig::default());
        assert_eq!(a.objective, 0.0);
        assert!(a.weights[0].is_infinite());
    }

    #[test]
    fn symmetric_instance_gets_symmetric_weights() {
        let f = [vec![1.0, 0.0], vec![0.0, 1.0]];
        let a = solve_allocation(&f, &[0.2, 0.2], 5.0, &AllocationConfig::default());
        assert!((a.weights[0] - a.weights[1]).abs() < 1e-3 * a.weights[0]);
        // each arm alone needs f_n / Δ² pulls
        assert!((a.weights[0] - 5.0 / 0.04).abs() < 0.01 * 125.0);
    }

    #[test]
    fn free_directions_are_projected_out() {
        let basis = complement_basis(&[&[1.0, 1.0, 0.0]], 3);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(dot(b, &[1.0, 1.0, 0.0]).abs() < 1e-12);
            assert!((dot(b, b) - 1.0).abs() < 1e-12);
        }
        // a suboptimal arm inside the free span needs nothing
        let a = solve_allocation(&[vec![1.0, 0.0], vec![2.0, 0.0]], &[0.0, 0.1], 10.0, &AllocationConfig::default());
        assert_eq!(a.objective, 0.0);
    }
}
