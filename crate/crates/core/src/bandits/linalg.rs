//! Small dense matrices for ridge regression and allocation design.

use alloc::vec;
use alloc::vec::Vec;

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = s;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `self += w · x xᵀ`
    pub fn add_outer(&mut self, x: &[f64], w: f64) {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                self.data[i * n + j] += w * x[i] * x[j];
            }
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|i| dot(&self.data[i * n..(i + 1) * n], x)).collect()
    }

    /// `xᵀ M x`
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }

    /// `xᵀ M y`
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.mul_vec(y))
    }

    /// Updates an inverse in place after `A ← A + w · x xᵀ`.
    pub fn sherman_morrison(&mut self, x: &[f64], w: f64) {
        let ax = self.mul_vec(x);
        let denom = 1.0 + w * dot(x, &ax);
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                self.data[i * n + j] -= w * ax[i] * ax[j] / denom;
            }
        }
    }

    /// Gauss-Jordan inverse with partial pivoting; `None` if singular.
    pub fn inverse(&self) -> Option<Mat> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Mat::identity(n).data;
        for col in 0..n {
            let pivot = (col..n).max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))?;
            let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
            if a[pivot * n + col].abs() <= 1e-14 * scale {
                return None;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                    inv.swap(pivot * n + k, col * n + k);
                }
            }
            let p = a[col * n + col];
            for k in 0..n {
                a[col * n + k] /= p;
                inv[col * n + k] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f != 0.0 {
                    for k in 0..n {
                        a[r * n + k] -= f * a[col * n + k];
                        inv[r * n + k] -= f * inv[col * n + k];
                    }
                }
            }
        }
        Some(Mat { n, data: inv })
    }

    /// Solves `M x = b`.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        Some(self.inverse()?.mul_vec(b))
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sherman_morrison_matches_direct_inverse() {
        let mut a = Mat::identity(3);
        let mut inv = Mat::identity(3);
        for (x, w) in [([1.0, 0.0, 1.0], 1.0), ([0.5, 2.0, 1.0], 3.0), ([1.0, 1.0, 1.0], 100.0)] {
            a.add_outer(&x, w);
            inv.sherman_morrison(&x, w);
        }
        let direct = a.inverse().unwrap();
        for (p, q) in direct.as_slice().iter().zip(inv.as_slice()) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let mut a = Mat::zeros(2);
        a.add_outer(&[1.0, 1.0], 1.0);
        assert!(a.inverse().is_none());
        assert_eq!(Mat::scaled_identity(2, 2.0).solve(&[2.0, 4.0]).unwrap(), [1.0, 2.0]);
    }
}
