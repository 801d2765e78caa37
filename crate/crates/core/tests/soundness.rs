use pcb_core::bounds::{BceConfig, BcePlan, ContextMarginal, ContextSource, Method, Query};
use pcb_core::fixtures::{synthetic_model, random_model, RandomModelSpec};
use pcb_core::{DiscreteScm, NodeSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn query_for(m: &DiscreteScm, rng: &mut ChaCha8Rng) -> Query {
    let g = m.graph();
    let n = g.observed().len();
    let outcome = g.node(&format!("V{}", n - 1)).unwrap();
    let mut treatments = NodeSet::EMPTY;
    while treatments.is_empty() {
        for i in 0..n - 1 {
            if rng.random::<f64>() < 0.35 && treatments.len() < 2 {
                treatments.insert(g.node(&format!("V{i}")).unwrap());
            }
        }
    }
    let de = g.descendants(treatments).unwrap();
    let pool: Vec<usize> = g.observed().difference(de).without(outcome).iter().collect();
    let mut contexts = NodeSet::EMPTY;
    if !pool.is_empty() && rng.random::<f64>() < 0.6 {
        contexts.insert(pool[rng.random_range(0..pool.len())]);
    }
    Query { treatments, outcome, contexts }
}

#[test]
fn bounds_contain_truth_on_exact_biased_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut cells = 0;
    let mut informative = 0;
    for i in 0..40 {
        let spec = RandomModelSpec { observed: 5, edge_prob: 0.4, latents: i % 2, selection: true };
        let m = random_model(&mut rng, &spec);
        let q = query_for(&m, &mut rng);
        let plan = BcePlan::new(m.graph(), q, &BceConfig::default()).unwrap();
        let marginal = ContextMarginal { source: ContextSource::Model, table: m.observed_joint(false).unwrap() };
        let table = plan.bound_table(&m.biased_joint().unwrap(), &marginal).unwrap();
        for e in &table.entries {
            let truth = m.conditional_effect(q.outcome, &e.arm, &e.context).unwrap();
            assert!(
                e.lower <= truth + 1e-9 && truth <= e.upper + 1e-9,
                "model {i}: truth {truth} outside {e:?}\n{}\n{}",
                m.graph(),
                plan.explain().join("\n")
            );
            assert!(!e.crossed, "model {i}: exact data crossed {e:?}");
            cells += 1;
            if e.upper - e.lower < 1.0 - 1e-9 {
                informative += 1;
            }
        }
    }
    assert!(cells > 100);
    assert!(informative > cells / 4, "{informative} of {cells}");
}

#[test]
fn synthetic_sweep_contains_truth() {
    let m = synthetic_model();
    let q = Query::from_names(m.graph(), &["X1", "X2"], "Y", &["U1", "U2"]).unwrap();
    let plan = BcePlan::new(m.graph(), q, &BceConfig::default()).unwrap();
    let marginal = ContextMarginal { source: ContextSource::Model, table: m.observed_joint(false).unwrap() };
    let table = plan.bound_table(&m.biased_joint().unwrap(), &marginal).unwrap();
    assert_eq!(table.entries.len(), 16);
    for e in &table.entries {
        let truth = m.conditional_effect(q.outcome, &e.arm, &e.context).unwrap();
        assert!(e.lower <= truth && truth <= e.upper);
        assert_eq!((e.lower_src, e.upper_src), (Method::Substitute, Method::Substitute));
        assert!(e.upper - e.lower < 0.5);
    }
}

#[test]
fn finite_sample_bounds_are_near_exact_ones() {
    let m = synthetic_model();
    let q = Query::from_names(m.graph(), &["X1", "X2"], "Y", &["U1", "U2"]).unwrap();
    let plan = BcePlan::new(m.graph(), q, &BceConfig::default()).unwrap();
    let marginal = ContextMarginal { source: ContextSource::Model, table: m.observed_joint(false).unwrap() };
    let exact = plan.bound_table(&m.biased_joint().unwrap(), &marginal).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let data = m.sample_biased_dataset(200_000, &mut rng).unwrap();
    let est = plan.bound_table(&data.to_table().unwrap(), &marginal).unwrap();
    for (a, b) in exact.entries.iter().zip(&est.entries) {
        assert!((a.lower - b.lower).abs() < 0.05, "{a:?} {b:?}");
        assert!((a.upper - b.upper).abs() < 0.05, "{a:?} {b:?}");
    }
}
