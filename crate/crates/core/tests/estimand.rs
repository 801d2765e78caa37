use pcb_core::estimand::Extremum;
use pcb_core::fixtures::{synthetic_model, random_model, RandomModelSpec};
use pcb_core::{Assignment, CausalGraph, Estimand, Evaluator, NodeSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_subset(rng: &mut ChaCha8Rng, from: NodeSet, p: f64) -> NodeSet {
    from.iter().filter(|_| rng.random::<f64>() < p).collect()
}

fn random_prob(rng: &mut ChaCha8Rng, all: NodeSet) -> Estimand {
    let mut vars = random_subset(rng, all, 0.4);
    if vars.is_empty() {
        vars.insert(all.iter().nth(rng.random_range(0..all.len())).unwrap());
    }
    let cond = random_subset(rng, all.difference(vars), 0.3);
    Estimand::prob(vars, cond)
}

fn random_tree(rng: &mut ChaCha8Rng, all: NodeSet, depth: u32) -> Estimand {
    if depth == 0 || rng.random::<f64>() < 0.25 {
        return if rng.random::<f64>() < 0.1 { Estimand::Const(rng.random_range(0.1..1.0)) } else { random_prob(rng, all) };
    }
    match rng.random_range(0..4) {
        0 => {
            let body = random_tree(rng, all, depth - 1);
            Estimand::sum(random_subset(rng, all, 0.4), body)
        }
        1 => Estimand::Product((0..rng.random_range(2..=3)).map(|_| random_tree(rng, all, depth - 1)).collect()),
        2 => {
            // denominators built from probabilities stay positive
            let den = Estimand::Product((0..rng.random_range(1..=2)).map(|_| random_prob(rng, all)).collect());
            let num = if rng.random::<f64>() < 0.3 {
                Estimand::Product(vec![den.clone(), random_tree(rng, all, depth - 1)])
            } else {
                random_tree(rng, all, depth - 1)
            };
            Estimand::quotient(num, den)
        }
        _ => {
            let kind = if rng.random::<bool>() { Extremum::Min } else { Extremum::Max };
            let body = random_tree(rng, all, depth - 1);
            Estimand::extremum(kind, random_subset(rng, all, 0.3), body)
        }
    }
}

fn full_assignment(g: &CausalGraph, bits: u64) -> Assignment {
    let vars = g.observed();
    Assignment::grid(vars)[bits as usize % (1usize << vars.len())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn simplify_preserves_value(seed in any::<u64>(), point in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RandomModelSpec { observed: 4, edge_prob: 0.5, latents: 0, selection: false };
        let m = random_model(&mut rng, &spec);
        let g = m.graph();
        let table = m.observed_joint(false).unwrap();
        let ev = Evaluator::new(g, &table);
        let e = random_tree(&mut rng, g.observed(), 3);
        let at = full_assignment(g, point);
        let before = ev.evaluate(&e, &at).unwrap();
        let after = ev.evaluate(&e.simplify(), &at).unwrap();
        prop_assert!((before - after).abs() <= 1e-9 * before.abs().max(1.0), "{} = {before}\n{} = {after}", e.render(g), e.simplify().render(g));
    }

    #[test]
    fn probabilities_lie_in_unit_interval(seed in any::<u64>(), point in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = synthetic_model();
        let table = m.biased_joint().unwrap();
        let g = m.graph().latent_project();
        let ev = Evaluator::new(&g, &table);
        let e = random_prob(&mut rng, g.observed());
        let v = ev.evaluate(&e, &full_assignment(&g, point)).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }
}

#[test]
fn simplify_is_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = synthetic_model();
    let g = m.graph().latent_project();
    for _ in 0..300 {
        let e = random_tree(&mut rng, g.observed(), 3).simplify();
        assert_eq!(e.simplify(), e, "{}", e.render(&g));
    }
}
