use alloc::string::String;
use alloc::vec::Vec;

use crate::assignment::Assignment;
use crate::bounds::{BoundsError, Query};
use crate::scm::DiscreteScm;

use super::linalg::{dot, Mat};
use super::BanditError;

/// Contextual Bernoulli environment. Context `c` is drawn from a finite
/// distribution; pulling arm `a` pays 1 with probability `means[c][a]`.
/// Features are `[context bits, arm bits, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEnv {
    context_probs: Vec<f64>,
    cdf: Vec<f64>,
    means: Vec<Vec<f64>>,
    features: Vec<Vec<Vec<f64>>>,
    theta: Vec<f64>,
    residual: f64,
    pub context_labels: Vec<String>,
    pub arm_labels: Vec<String>,
}

impl LinearEnv {
    pub fn new(context_probs: Vec<f64>, means: Vec<Vec<f64>>, features: Vec<Vec<Vec<f64>>>) -> Result<Self, BanditError> {
        let m = context_probs.len();
        if m == 0 || means.len() != m || features.len() != m {
            return Err(BanditError::Shape("one row of means and features per context"));
        }
        let k = means[0].len();
        if k == 0 {
            return Err(BanditError::Shape("at least one arm"));
        }
        let d = features[0].first().map_or(0, Vec::len);
        for c in 0..m {
            if means[c].len() != k || features[c].len() != k || features[c].iter().any(|x| x.len() != d) {
                return Err(BanditError::Shape("ragged means or features"));
            }
            if means[c].iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(BanditError::OutOfRange("mean reward"));
            }
        }
        if context_probs.iter().any(|p| p.is_nan() || *p < 0.0) || (context_probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(BanditError::OutOfRange("context distribution"));
        }
        let mut acc = 0.0;
        let cdf = context_probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();

        // least-squares fit of the mean table on the features
        let mut gram = Mat::scaled_identity(d, 1e-12);
        let mut rhs = alloc::vec![0.0; d];
        for c in 0..m {
            for a in 0..k {
                gram.add_outer(&features[c][a], 1.0);
                for (r, x) in rhs.iter_mut().zip(&features[c][a]) {
                    *r += x * means[c][a];
                }
            }
        }
        let theta = gram.solve(&rhs).ok_or(BanditError::Shape("features are degenerate"))?;
        let residual = (0..m)
            .flat_map(|c| (0..k).map(move |a| (c, a)))
            .map(|(c, a)| (dot(&theta, &features[c][a]) - means[c][a]).abs())
            .fold(0.0, f64::max);
        Ok(LinearEnv {
            context_probs,
            cdf,
            means,
            features,
            theta,
            residual,
            context_labels: (0..m).map(|c| alloc::format!("c{c}")).collect(),
            arm_labels: (0..k).map(|a| alloc::format!("a{a}")).collect(),
        })
    }

    /// Environment whose mean rewards are the model's conditional effects
    /// `P(outcome | do(arm), context)` and whose contexts follow the model's
    /// marginal.
    pub fn from_model(model: &DiscreteScm, query: &Query) -> Result<Self, BanditError> {
        let g = model.graph();
        let contexts = query.context_grid();
        let arms = query.arms();
        let joint = model.observed_joint(false).map_err(BoundsError::from)?;
        let mut probs = Vec::new();
        let mut means = Vec::new();
        let mut features = Vec::new();
        for ctx in &contexts {
            let event: Vec<(&str, u8)> = bits(ctx).into_iter().map(|(v, b)| (g.name(v), b as u8)).collect();
            probs.push(joint.probability(&event).map_err(BoundsError::from)?);
            let mut row = Vec::new();
            let mut frow = Vec::new();
            for arm in &arms {
                row.push(model.conditional_effect(query.outcome, arm, ctx).map_err(BoundsError::from)?);
                let mut x: Vec<f64> = bits(ctx).into_iter().map(|(_, b)| f64::from(u8::from(b))).collect();
                x.extend(bits(arm).into_iter().map(|(_, b)| f64::from(u8::from(b))));
                x.push(1.0);
                frow.push(x);
            }
            means.push(row);
            features.push(frow);
        }
        let mut env = LinearEnv::new(probs, means, features)?;
        env.context_labels = contexts.iter().map(|c| label(c.render(g))).collect();
        env.arm_labels = arms.iter().map(|a| a.render(g)).collect();
        Ok(env)
    }

    pub fn n_contexts(&self) -> usize {
        self.means.len()
    }

    pub fn n_arms(&self) -> usize {
        self.means[0].len()
    }

    pub fn dim(&self) -> usize {
        self.features[0][0].len()
    }

    pub fn context_probs(&self) -> &[f64] {
        &self.context_probs
    }

    pub fn features(&self, context: usize, arm: usize) -> &[f64] {
        &self.features[context][arm]
    }

    pub fn mean(&self, context: usize, arm: usize) -> f64 {
        self.means[context][arm]
    }

    pub fn means(&self) -> &[Vec<f64>] {
        &self.means
    }

    /// Least-squares coefficients of the mean table on the features.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Largest absolute deviation of `⟨θ, x⟩` from the mean table; zero when
    /// rewards are exactly linear.
    pub fn linear_residual(&self) -> f64 {
        self.residual
    }

    /// Lowest-index arm with the highest mean in `context`.
    pub fn best_arm(&self, context: usize) -> usize {
        argmax(&self.means[context])
    }

    pub fn best_mean(&self, context: usize) -> f64 {
        self.means[context][self.best_arm(context)]
    }

    pub fn gap(&self, context: usize, arm: usize) -> f64 {
        self.best_mean(context) - self.means[context][arm]
    }

    /// Mean of `arm` with the context averaged out.
    pub fn marginal_mean(&self, arm: usize) -> f64 {
        self.context_probs.iter().zip(&self.means).map(|(p, row)| p * row[arm]).sum()
    }

    pub fn marginal_means(&self) -> Vec<f64> {
        (0..self.n_arms()).map(|a| self.marginal_mean(a)).collect()
    }

    /// Context index for a uniform draw `u ∈ [0, 1)`.
    pub fn draw_context(&self, u: f64) -> usize {
        let last = self.cdf.len() - 1;
        self.cdf.iter().position(|&f| u < f).unwrap_or(last)
    }

    /// Bernoulli reward for a uniform draw `u ∈ [0, 1)`.
    pub fn reward(&self, context: usize, arm: usize, u: f64) -> f64 {
        if u < self.means[context][arm] {
            1.0
        } else {
            0.0
        }
    }
}

fn bits(a: &Assignment) -> Vec<(usize, bool)> {
    a.vars().iter().map(|v| (v, a.get(v).unwrap_or(false))).collect()
}

fn label(s: String) -> String {
    if s.is_empty() {
        String::from("-")
    } else {
        s
    }
}

/// Index of the largest value; ties go to the lowest index.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}
