//! Pipeline stages. Every stage reads its inputs from and writes its
//! outputs to a run directory, so stages can run as separate commands.

use crate::config::{stage_seed, RunConfig};
use crate::usage;
use anyhow::{Context, Result};
use axdse::accel::{profile_pmfs, AccelGraph, Configuration, Workload};
use axdse::circgen::{build_default_library, Catalog};
use axdse::explore::{
    dominates, geometric_levels, heuristic_pareto, load_pareto_csv, reevaluate_and_finalize, save_front_csv,
    save_pareto_csv, uniform_selection_baseline, ExploreParams, Funnel, ParetoSet,
};
use axdse::library::{pmf_map, reduce_library, Pmf, ReducedLibrary};
use axdse::surrogate::{
    design_matrix, label, load_samples, sample_choices, save_samples, select_model, EngineSpec, FeatureSpec,
    SurrogateEstimator, Target, TrainedModel,
};
use axdse::truth::GroundTruth;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// File layout of a run directory.
#[derive(Clone, Debug)]
pub struct RunDir {
    root: PathBuf,
}

impl RunDir {
    pub fn create(root: &Path) -> Result<RunDir> {
        fs::create_dir_all(root.join("manifests")).with_context(|| format!("creating {}", root.display()))?;
        fs::create_dir_all(root.join("models"))?;
        Ok(RunDir { root: root.to_path_buf() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn config(&self) -> PathBuf {
        self.root.join("config.toml")
    }
    pub fn library(&self) -> PathBuf {
        self.root.join("library")
    }
    pub fn pmfs(&self) -> PathBuf {
        self.root.join("pmfs.csv")
    }
    pub fn reduced(&self) -> PathBuf {
        self.root.join("reduced.csv")
    }
    pub fn train_samples(&self) -> PathBuf {
        self.root.join("train.csv")
    }
    pub fn test_samples(&self) -> PathBuf {
        self.root.join("test.csv")
    }
    pub fn model(&self, target: Target) -> PathBuf {
        self.root.join("models").join(format!("{}.json", target.name()))
    }
    pub fn fidelity(&self) -> PathBuf {
        self.root.join("fidelity.csv")
    }
    pub fn pseudo(&self) -> PathBuf {
        self.root.join("pseudo.csv")
    }
    pub fn reevaluated(&self) -> PathBuf {
        self.root.join("reevaluated.csv")
    }
    pub fn front(&self) -> PathBuf {
        self.root.join("front.csv")
    }
    pub fn funnel(&self) -> PathBuf {
        self.root.join("funnel.csv")
    }
    pub fn uniform(&self) -> PathBuf {
        self.root.join("uniform.csv")
    }
    pub fn report(&self) -> PathBuf {
        self.root.join("report.csv")
    }
    pub fn timing(&self) -> PathBuf {
        self.root.join("timing.json")
    }
    pub fn manifest(&self, command: &str) -> PathBuf {
        self.root.join("manifests").join(format!("{command}.json"))
    }

    fn write_manifest(&self, command: &str, cfg: &RunConfig, started: Instant, outputs: &[PathBuf], details: Value) -> Result<()> {
        let rel: Vec<String> = outputs
            .iter()
            .map(|p| p.strip_prefix(&self.root).unwrap_or(p).display().to_string())
            .collect();
        let m = json!({
            "command": command,
            "benchmark": cfg.benchmark.name(),
            "seed": cfg.seed,
            "outputs": rel,
            "elapsed_s": started.elapsed().as_secs_f64(),
            "details": details,
        });
        fs::write(self.manifest(command), serde_json::to_string_pretty(&m)? + "\n")?;
        Ok(())
    }
}

/// Benchmark graph, catalog and workload shared by the later stages.
pub struct Bench {
    pub graph: AccelGraph,
    pub catalog: Catalog,
    pub workload: Workload,
}

pub fn load_context(cfg: &RunConfig, run: &RunDir) -> Result<Bench> {
    let graph = cfg.benchmark.graph();
    let catalog = Catalog::load(&run.library()).context("loading the circuit library (run `genlib` first)")?;
    let images = cfg.load_images()?;
    let workload = Workload::for_benchmark(cfg.benchmark, &graph, &images, cfg.kernels)?;
    Ok(Bench { graph, catalog, workload })
}

pub fn load_reduced(run: &RunDir, ctx: &Bench) -> Result<ReducedLibrary> {
    ReducedLibrary::load_csv(&run.reduced(), &ctx.graph, &ctx.catalog).context("loading reduced libraries (run `reduce` first)")
}

pub fn genlib(cfg: &RunConfig, run: &RunDir) -> Result<Catalog> {
    let t = Instant::now();
    let spec = cfg.library_spec();
    let catalog = Catalog::new(build_default_library(&spec)?)?;
    let dir = run.library();
    if dir.exists() {
        fs::remove_dir_all(&dir)?;
    }
    catalog.save(&dir)?;
    let mut per_class = serde_json::Map::new();
    for g in &spec.classes {
        per_class.insert(g.class.to_string(), json!(catalog.of_class(g.class).len()));
    }
    run.write_manifest("genlib", cfg, t, &[dir], json!({ "circuits": catalog.len(), "per_class": per_class }))?;
    Ok(catalog)
}

#[derive(Serialize, serde::Deserialize)]
struct PmfRow {
    node_id: String,
    a: u64,
    b: u64,
    probability: f64,
}

pub fn save_pmfs(path: &Path, graph: &AccelGraph, pmfs: &[Pmf]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (k, p) in pmfs.iter().enumerate() {
        for ((a, b), probability) in p.entries() {
            w.serialize(PmfRow {
                node_id: graph.op_name(k).to_string(),
                a,
                b,
                probability,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_pmfs(path: &Path, graph: &AccelGraph) -> Result<Vec<Pmf>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {} (run `profile` first)", path.display()))?;
    let mut per_node: Vec<Vec<((u64, u64), f64)>> = vec![Vec::new(); graph.op_count()];
    for row in r.deserialize::<PmfRow>() {
        let row = row?;
        let Some(k) = (0..graph.op_count()).find(|&k| graph.op_name(k) == row.node_id) else {
            return Err(usage(format!("{}: unknown operation node `{}`", path.display(), row.node_id)));
        };
        per_node[k].push(((row.a, row.b), row.probability));
    }
    per_node
        .into_iter()
        .enumerate()
        .map(|(k, e)| Pmf::new(graph.op_class(k), e).with_context(|| format!("PMF of node `{}`", graph.op_name(k))))
        .collect()
}

pub fn profile(cfg: &RunConfig, run: &RunDir) -> Result<Vec<Pmf>> {
    let t = Instant::now();
    let graph = cfg.benchmark.graph();
    let images = cfg.load_images()?;
    let workload = Workload::for_benchmark(cfg.benchmark, &graph, &images, cfg.kernels)?;
    let pmfs = profile_pmfs(&graph, &workload)?;
    save_pmfs(&run.pmfs(), &graph, &pmfs)?;
    let support: Vec<Value> = pmfs
        .iter()
        .enumerate()
        .map(|(k, p)| json!({ "node": graph.op_name(k), "class": p.class().to_string(), "support": p.support_size() }))
        .collect();
    run.write_manifest(
        "profile",
        cfg,
        t,
        &[run.pmfs()],
        json!({ "images": images.len(), "workload_items": workload.len(), "nodes": support }),
    )?;
    Ok(pmfs)
}

pub fn reduce(cfg: &RunConfig, run: &RunDir) -> Result<ReducedLibrary> {
    let t = Instant::now();
    let graph = cfg.benchmark.graph();
    let catalog = Catalog::load(&run.library()).context("loading the circuit library (run `genlib` first)")?;
    let pmfs = load_pmfs(&run.pmfs(), &graph)?;
    let mut rl = reduce_library(&catalog, &graph, &pmf_map(&graph, pmfs))?;
    let full = rl.sizes();
    if let Some(m) = cfg.max_per_node {
        rl = rl.capped(m);
    }
    rl.save_csv(&run.reduced())?;
    run.write_manifest(
        "reduce",
        cfg,
        t,
        &[run.reduced()],
        json!({ "pareto_sizes": full, "sizes": rl.sizes(), "space": rl.space_size() }),
    )?;
    Ok(rl)
}

pub fn sample(cfg: &RunConfig, run: &RunDir) -> Result<()> {
    let t = Instant::now();
    let ctx = load_context(cfg, run)?;
    let rl = load_reduced(run, &ctx)?;
    let truth = GroundTruth::new(&ctx.graph, &ctx.catalog, &ctx.workload)?;
    let sets = sample_choices(&rl, &[cfg.sampling.train, cfg.sampling.test], stage_seed(cfg.seed, "sample"))?;
    let train = label(&truth, &rl, &sets[0])?;
    let test = label(&truth, &rl, &sets[1])?;
    save_samples(&run.train_samples(), &rl, &train)?;
    save_samples(&run.test_samples(), &rl, &test)?;
    run.write_manifest(
        "sample",
        cfg,
        t,
        &[run.train_samples(), run.test_samples()],
        json!({ "train": train.len(), "test": test.len() }),
    )?;
    Ok(())
}

/// Candidate engines for `target`: the naive model first, then the
/// configured learned engines.
pub fn engines_for(cfg: &RunConfig, target: Target) -> Result<Vec<EngineSpec>> {
    let seed = stage_seed(cfg.seed, "train");
    let naive = match target {
        Target::Qor => EngineSpec::NaiveQor,
        Target::Hw => EngineSpec::NaiveHw,
    };
    let mut out = vec![naive];
    for name in &cfg.engines {
        let e = EngineSpec::from_name(name, seed)?;
        if matches!(e, EngineSpec::NaiveQor | EngineSpec::NaiveHw) {
            continue;
        }
        out.push(e);
    }
    Ok(out)
}

#[derive(Serialize)]
struct FidelityRow<'a> {
    target: &'a str,
    engine: &'a str,
    params: String,
    train_fidelity: f64,
    test_fidelity: f64,
    selected: bool,
}

pub fn train(cfg: &RunConfig, run: &RunDir) -> Result<(TrainedModel, TrainedModel)> {
    let t = Instant::now();
    let graph = cfg.benchmark.graph();
    let catalog = Catalog::load(&run.library()).context("loading the circuit library (run `genlib` first)")?;
    let rl = ReducedLibrary::load_csv(&run.reduced(), &graph, &catalog).context("loading reduced libraries")?;
    let train = load_samples(&run.train_samples(), &rl).context("loading training samples (run `sample` first)")?;
    let test = load_samples(&run.test_samples(), &rl).context("loading test samples")?;
    let mut w = csv::Writer::from_path(run.fidelity())?;
    let mut best = Vec::new();
    let mut details = serde_json::Map::new();
    for target in [Target::Qor, Target::Hw] {
        let spec = FeatureSpec::new(target, &rl, &catalog);
        let (x, y) = design_matrix(&spec, &train);
        let (xt, yt) = design_matrix(&spec, &test);
        let sel = select_model(&engines_for(cfg, target)?, target, (&x, &y), (&xt, &yt))?;
        for m in &sel.candidates {
            w.serialize(FidelityRow {
                target: target.name(),
                engine: m.engine.name(),
                params: m.engine.params(),
                train_fidelity: m.train_fidelity.unwrap_or(f64::NAN),
                test_fidelity: m.test_fidelity.unwrap_or(f64::NAN),
                selected: m.engine == sel.best.engine,
            })?;
        }
        sel.best.save(&run.model(target))?;
        details.insert(target.name().into(), json!({ "selected": sel.best.engine.name(), "test_fidelity": sel.best.test_fidelity }));
        best.push(sel.best);
    }
    w.flush()?;
    run.write_manifest(
        "train",
        cfg,
        t,
        &[run.fidelity(), run.model(Target::Qor), run.model(Target::Hw)],
        Value::Object(details),
    )?;
    let hw = best.pop().expect("two targets");
    let qor = best.pop().expect("two targets");
    Ok((qor, hw))
}

pub fn load_models(run: &RunDir) -> Result<(TrainedModel, TrainedModel)> {
    let load = |t: Target| TrainedModel::load(&run.model(t)).with_context(|| format!("loading the {} model (run `train` first)", t.name()));
    Ok((load(Target::Qor)?, load(Target::Hw)?))
}

pub fn explore(cfg: &RunConfig, run: &RunDir) -> Result<ParetoSet> {
    let t = Instant::now();
    let graph = cfg.benchmark.graph();
    let catalog = Catalog::load(&run.library()).context("loading the circuit library (run `genlib` first)")?;
    let rl = ReducedLibrary::load_csv(&run.reduced(), &graph, &catalog).context("loading reduced libraries")?;
    let (mq, mh) = load_models(run)?;
    let params = ExploreParams::new(cfg.explore.budget, cfg.explore.stagnation, stage_seed(cfg.seed, "explore"))?;
    let qor = SurrogateEstimator { model: &mq, features: FeatureSpec::new(Target::Qor, &rl, &catalog) };
    let hw = SurrogateEstimator { model: &mh, features: FeatureSpec::new(Target::Hw, &rl, &catalog) };
    let (pseudo, stats) = heuristic_pareto(&rl.sizes(), &qor, &hw, &params);
    save_pareto_csv(&run.pseudo(), &rl, &pseudo)?;
    run.write_manifest("explore", cfg, t, &[run.pseudo()], json!({ "params": params, "stats": stats, "pseudo": pseudo.len() }))?;
    Ok(pseudo)
}

/// Outcome of the verification stage.
pub struct Verified {
    pub funnel: Funnel,
    pub front: ParetoSet,
    /// Real (qor, area) of each uniform-selection configuration and whether
    /// the final front weakly dominates it.
    pub uniform: Vec<(f64, f64, bool)>,
}

pub fn weakly_dominated(front: &ParetoSet, p: (f64, f64)) -> bool {
    front.entries().iter().any(|f| (f.qor, f.area) == p || dominates((f.qor, f.area), p))
}

pub fn verify(cfg: &RunConfig, run: &RunDir) -> Result<Verified> {
    let t = Instant::now();
    let ctx = load_context(cfg, run)?;
    let rl = load_reduced(run, &ctx)?;
    let pseudo = load_pareto_csv(&run.pseudo(), &rl).context("loading the pseudo-Pareto set (run `explore` first)")?;
    let truth = GroundTruth::new(&ctx.graph, &ctx.catalog, &ctx.workload)?;
    let fin = reevaluate_and_finalize(&pseudo, &truth, &rl)?;
    save_front_csv(&run.reevaluated(), &rl, &fin.rows)?;
    save_pareto_csv(&run.front(), &rl, &fin.front)?;
    let funnel = Funnel::new(&ctx.graph, &ctx.catalog, &rl, pseudo.len(), fin.front.len());
    funnel.save_csv(&run.funnel())?;

    let levels = geometric_levels(cfg.uniform_levels, 1e-4, 0.1);
    let configs = uniform_selection_baseline(&rl, &levels);
    let labels = label(&truth, &rl, &configs)?;
    let mut w = csv::Writer::from_path(run.uniform())?;
    let mut header: Vec<String> = rl.nodes.iter().map(|n| n.node.clone()).collect();
    header.extend(["qor", "area", "dominated_by_front"].map(String::from));
    w.write_record(&header)?;
    let mut uniform = Vec::new();
    for s in &labels {
        let dom = weakly_dominated(&fin.front, (s.labels.qor, s.labels.area));
        let mut rec: Vec<String> = rl.nodes.iter().zip(&s.choice).map(|(n, &c)| n.entries[c].id.clone()).collect();
        rec.extend([s.labels.qor.to_string(), s.labels.area.to_string(), dom.to_string()]);
        w.write_record(&rec)?;
        uniform.push((s.labels.qor, s.labels.area, dom));
    }
    w.flush()?;
    run.write_manifest(
        "verify",
        cfg,
        t,
        &[run.reevaluated(), run.front(), run.funnel(), run.uniform()],
        json!({ "funnel": funnel, "uniform_points": uniform.len(), "uniform_dominated": uniform.iter().filter(|u| u.2).count() }),
    )?;
    Ok(Verified { funnel, front: fin.front, uniform })
}

/// Mean wall-clock cost of model estimation and of ground-truth
/// evaluation per configuration.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Timing {
    pub estimate_s: f64,
    pub ground_truth_s: f64,
    pub speedup: f64,
    pub estimated: usize,
    pub evaluated: usize,
}

pub fn measure_speedup(
    ctx: &Bench,
    rl: &ReducedLibrary,
    models: (&TrainedModel, &TrainedModel),
    estimates: usize,
    evaluations: usize,
    seed: u64,
) -> Result<Timing> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = rl.sizes();
    let mut draw = |n: usize| -> Vec<Vec<usize>> {
        (0..n).map(|_| sizes.iter().map(|&s| rng.gen_range(0..s)).collect()).collect()
    };
    let est_set = draw(estimates);
    let gt_set = draw(evaluations);
    let qor = SurrogateEstimator { model: models.0, features: FeatureSpec::new(Target::Qor, rl, &ctx.catalog) };
    let hw = SurrogateEstimator { model: models.1, features: FeatureSpec::new(Target::Hw, rl, &ctx.catalog) };
    let t = Instant::now();
    let mut sink = 0.0;
    for c in &est_set {
        sink += qor.estimate(c) + hw.estimate(c);
    }
    let estimate_s = t.elapsed().as_secs_f64() / estimates as f64;
    std::hint::black_box(sink);
    let truth = GroundTruth::new(&ctx.graph, &ctx.catalog, &ctx.workload)?;
    let t = Instant::now();
    for c in &gt_set {
        std::hint::black_box(truth.evaluate(&Configuration(rl.circuits(c)))?);
    }
    let ground_truth_s = t.elapsed().as_secs_f64() / evaluations as f64;
    Ok(Timing {
        estimate_s,
        ground_truth_s,
        speedup: ground_truth_s / estimate_s,
        estimated: estimates,
        evaluated: evaluations,
    })
}

#[derive(Serialize)]
struct ReportRow {
    metric: String,
    value: String,
}

/// Summary of a finished run. Every CSV written here is a pure function of
/// the run's artifacts; wall-clock measurements go to `timing.json`.
pub fn report(cfg: &RunConfig, run: &RunDir) -> Result<Timing> {
    let t = Instant::now();
    let ctx = load_context(cfg, run)?;
    let rl = load_reduced(run, &ctx)?;
    let (mq, mh) = load_models(run)?;
    let mut rows: Vec<(String, String)> = vec![
        ("benchmark".into(), cfg.benchmark.name().into()),
        ("circuits".into(), ctx.catalog.len().to_string()),
        ("reduced_sizes".into(), format!("{:?}", rl.sizes())),
    ];
    for (name, m) in [("qor", &mq), ("hw", &mh)] {
        rows.push((format!("{name}_engine"), m.engine.name().into()));
        rows.push((format!("{name}_test_fidelity"), m.test_fidelity.map_or("nan".into(), |f| f.to_string())));
    }
    let mut r = csv::Reader::from_path(run.funnel()).context("reading the funnel (run `verify` first)")?;
    for rec in r.records() {
        let rec = rec?;
        rows.push((format!("funnel_{}", &rec[0]), rec[1].to_string()));
    }
    let mut r = csv::Reader::from_path(run.uniform())?;
    let (mut n, mut dom) = (0usize, 0usize);
    for rec in r.records() {
        let rec = rec?;
        n += 1;
        dom += usize::from(&rec[rec.len() - 1] == "true");
    }
    rows.push(("uniform_points".into(), n.to_string()));
    rows.push(("uniform_dominated".into(), dom.to_string()));
    let mut w = csv::Writer::from_path(run.report())?;
    for (metric, value) in rows {
        w.serialize(ReportRow { metric, value })?;
    }
    w.flush()?;

    let evaluations = if ctx.workload.len() > 16 { 10 } else { 100 };
    let timing = measure_speedup(&ctx, &rl, (&mq, &mh), 2000, evaluations, stage_seed(cfg.seed, "timing"))?;
    fs::write(run.timing(), serde_json::to_string_pretty(&timing)? + "\n")?;
    run.write_manifest("report", cfg, t, &[run.report(), run.timing()], json!({ "timing": timing }))?;
    Ok(timing)
}

/// Every stage in order.
pub fn run_all(cfg: &RunConfig, run: &RunDir) -> Result<()> {
    fs::write(run.config(), cfg.to_toml())?;
    genlib(cfg, run)?;
    profile(cfg, run)?;
    reduce(cfg, run)?;
    sample(cfg, run)?;
    train(cfg, run)?;
    explore(cfg, run)?;
    verify(cfg, run)?;
    report(cfg, run)?;
    Ok(())
}
