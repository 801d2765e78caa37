//! Bundled example models.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::graph::{CausalGraph, GraphBuilder, NodeKind};
use crate::scm::DiscreteScm;

/// The synthetic graph used throughout the tests: two treatments, two
/// contexts, a mediator `I1` that drives selection, and a latent `C1`
/// confounding the mediator and the outcome.
pub fn synthetic_graph() -> CausalGraph {
    GraphBuilder::new()
        .observed(&["U1", "U2", "X1", "X2", "I1", "Y"])
        .latent("C1")
        .selection("S")
        .edges(&[
            ("U1", "Y"),
            ("U1", "X1"),
            ("U2", "X2"),
            ("X2", "Y"),
            ("X1", "I1"),
            ("I1", "S"),
            ("I1", "Y"),
            ("C1", "I1"),
            ("C1", "Y"),
        ])
        .build()
        .expect("fixture graph is valid")
}

pub fn synthetic_projected() -> CausalGraph {
    synthetic_graph().latent_project()
}

/// The data-generating model for [`synthetic_graph`]: contexts `U1`, `U2`,
/// treatments `X1`, `X2`, mediator `I1`, latent `C1`, outcome `Y`.
pub fn synthetic_model() -> DiscreteScm {
    // Y's parents in canonical order are C1, I1, U1, X2; its table only
    // depends on how many of them are set
    let y: Vec<f64> = (0u32..16).map(|k| f64::from(k.count_ones()) / 6.0 + 0.1).collect();
    DiscreteScm::new(
        synthetic_graph(),
        [
            ("C1", vec![0.5]),
            ("U1", vec![0.4]),
            ("U2", vec![0.6]),
            ("X1", vec![0.25, 0.75]),
            ("X2", vec![0.15, 0.65]),
            ("I1", vec![0.3, 0.55, 0.55, 0.8]),
            ("Y", y),
            ("S", vec![0.1, 0.8]),
        ],
    )
    .expect("fixture model is valid")
}

/// Shape of a randomly generated model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomModelSpec {
    /// Observed nodes `V0, V1, ...`, topologically ordered by index.
    pub observed: usize,
    /// Probability of each forward edge `Vi -> Vj`, `i < j`.
    pub edge_prob: f64,
    /// Latent nodes `L0, L1, ...`, each with two observed children.
    pub latents: usize,
    /// Add a selection node `S` with a random nonempty set of observed parents.
    pub selection: bool,
}

/// A random model with table entries drawn from `[0.05, 0.95]`.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, spec: &RandomModelSpec) -> DiscreteScm {
    assert!(spec.observed >= 2 && spec.observed <= 10, "between 2 and 10 observed nodes");
    let obs: Vec<String> = (0..spec.observed).map(|i| format!("V{i}")).collect();
    let mut b = GraphBuilder::new();
    for n in &obs {
        b = b.node(n, NodeKind::Observed);
    }
    for i in 0..spec.observed {
        for j in i + 1..spec.observed {
            if rng.random::<f64>() < spec.edge_prob {
                b = b.edge(&obs[i], &obs[j]);
            }
        }
    }
    for l in 0..spec.latents {
        let name = format!("L{l}");
        let a = rng.random_range(0..spec.observed);
        let mut c = rng.random_range(0..spec.observed - 1);
        if c >= a {
            c += 1;
        }
        b = b.latent(&name).edge(&name, &obs[a]).edge(&name, &obs[c]);
    }
    if spec.selection {
        b = b.selection("S");
        let mut any = false;
        for n in &obs {
            if rng.random::<f64>() < 0.4 {
                b = b.edge(n, "S");
                any = true;
            }
        }
        if !any {
            let k = rng.random_range(0..spec.observed);
            b = b.edge(&obs[k], "S");
        }
    }
    let g = b.build().expect("random graphs are acyclic by construction");
    let cpts: Vec<(String, Vec<f64>)> = g
        .nodes()
        .iter()
        .map(|v| {
            let k = 1usize << g.parents(v).len();
            (g.name(v).to_string(), (0..k).map(|_| 0.05 + 0.9 * rng.random::<f64>()).collect())
        })
        .collect();
    DiscreteScm::new(g, cpts).expect("random tables are valid")
}
