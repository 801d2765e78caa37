//! The pipeline behind each subcommand. Every `cmd_*` function writes its
//! outputs under `ExperimentConfig::out` and returns what it wrote.

use std::path::{Path, PathBuf};

use pcb_core::bandits::{Aggregate, ArmBounds, LinearEnv, OamConfig, PolicySpec, WarmStart};
use pcb_core::bounds::baseline::{conditional_estimand, confounding_only};
use pcb_core::bounds::{BceConfig, BcePlan, BoundTable, ContextMarginal, ContextSource, Query};
use pcb_core::{Assignment, CausalGraph, Dataset, DiscreteScm, Estimand, Evaluator, JointTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::formats::{self, DatasetMeta, OfflineRow, SummaryRow};
use crate::parallel::run_experiment_par;

pub const DEFAULT_ROSTER: [&str; 4] = ["linucb", "linucb-pcb", "linucb-biased", "linucb-cp"];

pub const KNOWN_POLICIES: [&str; 9] =
    ["oracle", "linucb", "linucb-pcb", "linucb-biased", "linucb-cp", "ucb", "ucb-pcb", "oam", "oam-pcb"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Option<String>,
    pub graph: Option<String>,
    pub data: Option<PathBuf>,
    pub n_pre: usize,
    pub rounds: usize,
    pub reps: usize,
    pub seed: u64,
    pub kmax: usize,
    pub context_source: String,
    pub policies: Vec<String>,
    pub out: PathBuf,
    pub treatments: Vec<String>,
    pub outcome: String,
    pub contexts: Vec<String>,
    pub alpha: f64,
    pub n0: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: Some("builtin:synthetic".into()),
            graph: None,
            data: None,
            n_pre: 30_000,
            rounds: 15_000,
            reps: 100,
            seed: 0,
            kmax: 2,
            context_source: "model".into(),
            policies: DEFAULT_ROSTER.iter().map(|s| s.to_string()).collect(),
            out: PathBuf::from("out"),
            treatments: vec!["X1".into(), "X2".into()],
            outcome: "Y".into(),
            contexts: vec!["U1".into(), "U2".into()],
            alpha: 1.0,
            n0: 100,
        }
    }
}

pub fn parse_context_source(s: &str) -> Result<ContextSource> {
    match s {
        "model" => Ok(ContextSource::Model),
        "unbiased-sample" => Ok(ContextSource::UnbiasedSample),
        "biased" => Ok(ContextSource::Biased),
        other => Err(CliError::Usage(format!("unknown context source `{other}`"))),
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [("n-pre", self.n_pre), ("rounds", self.rounds), ("reps", self.reps)];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(CliError::Usage(format!("--{name} must be positive")));
        }
        if self.policies.is_empty() {
            return Err(CliError::Usage("policy roster is empty".into()));
        }
        if let Some(p) = self.policies.iter().find(|p| !KNOWN_POLICIES.contains(&p.as_str())) {
            return Err(CliError::Usage(format!("unknown policy `{p}`")));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(CliError::Usage("--alpha must be a nonnegative number".into()));
        }
        parse_context_source(&self.context_source)?;
        for path in [&self.model, &self.graph].into_iter().flatten() {
            if !path.starts_with("builtin:") && !Path::new(path).exists() {
                return Err(CliError::io(path, std::io::ErrorKind::NotFound.into()));
            }
        }
        if let Some(d) = &self.data {
            if !d.exists() {
                return Err(CliError::io(d, std::io::ErrorKind::NotFound.into()));
            }
        }
        Ok(())
    }

    pub fn require_model(&self) -> Result<DiscreteScm> {
        let spec = self.model.as_deref().ok_or_else(|| CliError::Usage("--model is required".into()))?;
        formats::load_model(spec)
    }

    /// The graph from `--graph`, else the model's graph.
    pub fn load_graph(&self) -> Result<CausalGraph> {
        match (&self.graph, &self.model) {
            (Some(g), _) => formats::load_graph(g),
            (None, Some(m)) => Ok(formats::load_model(m)?.graph().clone()),
            (None, None) => Err(CliError::Usage("one of --graph or --model is required".into())),
        }
    }

    pub fn query(&self, g: &CausalGraph) -> Result<Query> {
        let t: Vec<&str> = self.treatments.iter().map(String::as_str).collect();
        let c: Vec<&str> = self.contexts.iter().map(String::as_str).collect();
        Ok(Query::from_names(g, &t, &self.outcome, &c)?)
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

// RNG streams under the master seed
const DATA_STREAM: u64 = 1 << 32;
const CONTEXT_STREAM: u64 = (1 << 32) + 1;

pub fn generate(cfg: &ExperimentConfig) -> Result<(Dataset, DatasetMeta)> {
    let m = cfg.require_model()?;
    if cfg.n_pre == 0 {
        return Err(CliError::Usage("--n-pre must be positive".into()));
    }
    let data = m.sample_biased_dataset(cfg.n_pre, &mut rng(cfg.seed, DATA_STREAM))?;
    let meta = DatasetMeta {
        model: cfg.model.clone().unwrap_or_default(),
        seed: cfg.seed,
        n_pre: data.n_pre,
        retained: data.retained(),
        retention_rate: data.retention_rate(),
        columns: data.columns.clone(),
    };
    Ok((data, meta))
}

pub fn cmd_generate(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let (data, meta) = generate(cfg)?;
    let path = cfg.out.join("data.csv");
    formats::write_dataset(&path, &data, &meta)?;
    Ok(vec![path.clone(), formats::meta_path(&path)])
}

/// `--data` if given, otherwise a fresh sample from the model.
pub fn obtain_data(cfg: &ExperimentConfig) -> Result<Dataset> {
    match &cfg.data {
        Some(p) => formats::read_dataset(p),
        None => Ok(generate(cfg)?.0),
    }
}

pub fn context_marginal(cfg: &ExperimentConfig, query: &Query, g: &CausalGraph, data: &Dataset) -> Result<ContextMarginal> {
    let source = parse_context_source(&cfg.context_source)?;
    let table = match source {
        ContextSource::Model => cfg.require_model()?.observed_joint(false)?,
        ContextSource::UnbiasedSample => {
            let m = cfg.require_model()?;
            m.sample_unbiased(query.contexts, cfg.n_pre, &mut rng(cfg.seed, CONTEXT_STREAM))?.to_table()?
        }
        ContextSource::Biased => {
            let names = g.names_of(query.contexts);
            data.empirical_distribution(&names)?
        }
    };
    Ok(ContextMarginal { source, table })
}

/// Derived bounds plus everything needed to explain them.
pub struct BoundsRun {
    pub graph: CausalGraph,
    pub query: Query,
    pub plan: BcePlan,
    pub biased: JointTable,
    pub marginal: ContextMarginal,
    pub table: BoundTable,
}

pub fn derive_bounds(cfg: &ExperimentConfig, data: &Dataset) -> Result<BoundsRun> {
    let graph = cfg.load_graph()?;
    let query = cfg.query(&graph)?;
    let plan = BcePlan::new(&graph, query, &BceConfig { k_max: cfg.kmax })?;
    let biased = data.to_table()?;
    let marginal = context_marginal(cfg, &query, &graph, data)?;
    let table = plan.bound_table(&biased, &marginal)?;
    Ok(BoundsRun { graph, query, plan, biased, marginal, table })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub context: String,
    pub arm: String,
    pub lower: f64,
    pub upper: f64,
    pub lower_src: String,
    pub upper_src: String,
    pub crossed: bool,
    pub widened: bool,
    pub lower_estimand: String,
    pub upper_estimand: String,
    pub warning: String,
}

pub fn bounds_rows(run: &BoundsRun) -> Vec<BoundsRow> {
    let g = &run.graph;
    let warning = run.table.warnings.join("; ");
    run.table
        .entries
        .iter()
        .map(|e| BoundsRow {
            context: e.context.render(g),
            arm: e.arm.render(g),
            lower: e.lower,
            upper: e.upper,
            lower_src: e.lower_src.as_str().into(),
            upper_src: e.upper_src.as_str().into(),
            crossed: e.crossed,
            widened: e.widened,
            lower_estimand: e.lower_estimand.clone(),
            upper_estimand: e.upper_estimand.clone(),
            warning: warning.clone(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDoc {
    pub version: String,
    pub config: ExperimentConfig,
    pub context_source: String,
    pub explanation: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn cmd_bounds(cfg: &ExperimentConfig) -> Result<(Vec<PathBuf>, Vec<String>)> {
    let data = obtain_data(cfg)?;
    let run = derive_bounds(cfg, &data)?;
    let csv = cfg.out.join("bounds.csv");
    formats::write_file(&csv, &formats::to_csv(&formats::BOUNDS_HEADER, &bounds_rows(&run)))?;
    let explanation = run.plan.explain();
    let doc = PlanDoc {
        version: crate::VERSION.into(),
        config: cfg.clone(),
        context_source: run.marginal.source.as_str().into(),
        explanation: explanation.clone(),
        warnings: run.table.warnings.clone(),
    };
    let json = cfg.out.join("bounds.json");
    formats::write_json(&json, &doc)?;
    Ok((vec![csv, json], explanation))
}

fn evaluate_cell(ev: &Evaluator<'_>, e: &Estimand, query: &Query, arm: &Assignment, ctx: &Assignment) -> Option<f64> {
    ev.evaluate(e, &arm.merge(ctx).with(query.outcome, true)).ok()
}

/// CP and Biased estimates per (context, arm), contexts outer. `None` marks
/// an undefined cell.
pub struct Baselines {
    pub cp: Vec<Vec<Option<f64>>>,
    pub biased: Vec<Vec<Option<f64>>>,
    /// Adjustment set chosen for the Biased estimate, if any.
    pub adjustment: Option<Vec<String>>,
}

pub fn baselines(graph: &CausalGraph, query: &Query, biased: &JointTable, k_max: usize) -> Result<Baselines> {
    let projected = graph.latent_project();
    let ev = Evaluator::new(&projected, biased);
    let cp_e = conditional_estimand(query);
    let adj = confounding_only(graph, query, k_max)?;
    let grid = |e: Option<&Estimand>| -> Vec<Vec<Option<f64>>> {
        query
            .context_grid()
            .iter()
            .map(|c| query.arms().iter().map(|a| e.and_then(|e| evaluate_cell(&ev, e, query, a, c))).collect())
            .collect()
    };
    Ok(Baselines {
        cp: grid(Some(&cp_e)),
        biased: grid(adj.as_ref().map(|(_, e)| e)),
        adjustment: adj.map(|(z, _)| graph.names_of(z).iter().map(|s| s.to_string()).collect()),
    })
}

pub fn offline_rows(model: &DiscreteScm, run: &BoundsRun, base: &Baselines) -> Result<Vec<OfflineRow>> {
    let g = model.graph();
    let (contexts, arms) = (run.query.context_grid(), run.query.arms());
    let mut rows = Vec::new();
    for (ci, ctx) in contexts.iter().enumerate() {
        for (ai, arm) in arms.iter().enumerate() {
            let e = run.table.entry(ci, ai);
            let truth = model.conditional_effect(run.query.outcome, arm, ctx)?;
            let (cp, biased) = (base.cp[ci][ai], base.biased[ci][ai]);
            let mut flags = Vec::new();
            if cp.is_none() {
                flags.push("cp-undefined");
            }
            if biased.is_none() {
                flags.push("biased-undefined");
            }
            if e.widened {
                flags.push("widened");
            }
            if e.crossed {
                flags.push("crossed");
            }
            rows.push(OfflineRow {
                context: ctx.render(g),
                arm: arm.render(g),
                cp,
                biased,
                lb: e.lower,
                ub: e.upper,
                truth,
                contains: e.contains(truth),
                flag: flags.join("|"),
            });
        }
    }
    Ok(rows)
}

pub fn offline(cfg: &ExperimentConfig) -> Result<Vec<OfflineRow>> {
    let model = cfg.require_model()?;
    let data = obtain_data(cfg)?;
    let run = derive_bounds(cfg, &data)?;
    let base = baselines(&run.graph, &run.query, &run.biased, cfg.kmax)?;
    offline_rows(&model, &run, &base)
}

pub fn cmd_offline(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let rows = offline(cfg)?;
    let path = cfg.out.join("offline.csv");
    formats::write_file(&path, &formats::to_csv(&formats::OFFLINE_HEADER, &rows))?;
    let side = config_path(&path);
    formats::write_json(&side, cfg)?;
    Ok(vec![path, side])
}

/// `<stem>.config.json` next to an output.
pub fn config_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    output.with_file_name(format!("{stem}.config.json"))
}

fn filled(grid: &[Vec<Option<f64>>]) -> Vec<Vec<f64>> {
    // an undefined cell carries no information; start it at the midpoint
    grid.iter().map(|row| row.iter().map(|v| v.unwrap_or(0.5).clamp(0.0, 1.0)).collect()).collect()
}

/// Everything the online roster needs, derived once.
pub struct OnlineSetup {
    pub env: LinearEnv,
    pub bounds: ArmBounds,
    pub marginal_bounds: ArmBounds,
    pub cp: Vec<Vec<f64>>,
    pub biased: Vec<Vec<f64>>,
}

pub fn online_setup(cfg: &ExperimentConfig) -> Result<OnlineSetup> {
    let model = cfg.require_model()?;
    let data = obtain_data(cfg)?;
    let run = derive_bounds(cfg, &data)?;
    let base = baselines(&run.graph, &run.query, &run.biased, cfg.kmax)?;
    let env = LinearEnv::from_model(&model, &run.query)?;
    let bounds = ArmBounds::from_table(&run.table);
    let probs: Vec<f64> = run
        .query
        .context_grid()
        .iter()
        .map(|c| run.marginal.probability(&run.graph, c))
        .collect::<Result<_, _>>()?;
    let marginal_bounds = bounds.marginal(&probs);
    Ok(OnlineSetup { env, bounds, marginal_bounds, cp: filled(&base.cp), biased: filled(&base.biased) })
}

pub fn policy_spec(name: &str, cfg: &ExperimentConfig, s: &OnlineSetup) -> Result<PolicySpec> {
    let warm = |est: &Vec<Vec<f64>>| WarmStart { estimates: est.clone(), n0: cfg.n0 };
    let mut spec = match name {
        "oracle" => PolicySpec::oracle(),
        "linucb" => PolicySpec::linucb(cfg.alpha),
        "linucb-pcb" => PolicySpec::linucb_pcb(cfg.alpha, s.bounds.clone()),
        "linucb-biased" => PolicySpec::linucb_warm(name, cfg.alpha, warm(&s.biased)),
        "linucb-cp" => PolicySpec::linucb_warm(name, cfg.alpha, warm(&s.cp)),
        "ucb" => PolicySpec::ucb(),
        "ucb-pcb" => PolicySpec::ucb_pcb(s.marginal_bounds.clone()),
        "oam" => PolicySpec::oam(OamConfig::default()),
        "oam-pcb" => PolicySpec::oam_pcb(OamConfig::default(), s.bounds.clone()),
        other => return Err(CliError::Usage(format!("unknown policy `{other}`"))),
    };
    spec.name = name.to_string();
    Ok(spec)
}

pub fn online(cfg: &ExperimentConfig) -> Result<Vec<Aggregate>> {
    cfg.validate()?;
    let setup = online_setup(cfg)?;
    cfg.policies
        .iter()
        .map(|p| {
            let spec = policy_spec(p, cfg, &setup)?;
            Ok(run_experiment_par(&setup.env, &spec, cfg.rounds, cfg.reps, cfg.seed)?)
        })
        .collect()
}

pub fn summary_row(a: &Aggregate) -> SummaryRow {
    SummaryRow {
        policy: a.policy.clone(),
        rounds: a.horizon,
        replications: a.replications,
        final_mean: a.final_mean(),
        final_stderr: a.final_stderr(),
        fallbacks: a.diagnostics.fallback,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub round: usize,
    pub mean_regret: f64,
    pub stderr: f64,
}

pub fn curve_rows(a: &Aggregate) -> Vec<CurveRow> {
    a.mean
        .iter()
        .zip(&a.stderr)
        .enumerate()
        .map(|(t, (m, s))| CurveRow { round: t + 1, mean_regret: *m, stderr: *s })
        .collect()
}

pub fn cmd_online(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let aggs = online(cfg)?;
    let dir = cfg.out.join("online");
    let mut written = Vec::new();
    for a in &aggs {
        let path = dir.join(format!("{}.csv", a.policy));
        formats::write_file(&path, &formats::to_csv(&formats::CURVE_HEADER, &curve_rows(a)))?;
        written.push(path);
    }
    let rows: Vec<SummaryRow> = aggs.iter().map(summary_row).collect();
    let summary = dir.join("summary.csv");
    formats::write_file(&summary, &formats::to_csv(&formats::SUMMARY_HEADER, &rows))?;
    let side = config_path(&summary);
    formats::write_json(&side, cfg)?;
    written.push(summary);
    written.push(side);
    Ok(written)
}
